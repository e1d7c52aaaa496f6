//! One handler per subcommand.

use std::path::PathBuf;

use multibrot_core::angles::dual_expansions;
use multibrot_core::combinatorics::{build_lamination, conjugate_angle, internal_address, kneading};
use multibrot_core::fibers::{arc_skeleton, fiber_interval, fiber_transfer_check};
use multibrot_core::numerics::solvers::{center_residual, find_center_degree, find_misiurewicz_degree, misiurewicz_residual};
use multibrot_core::numerics::{
    parse_point, puzzle_diameters, render, trace_dynamic_ray_degree, trace_parameter_ray_degree, verify_ray_pair,
    ComplexPoint, Overlay, RayKind, Region, RenderSpec,
};
use multibrot_core::surgery::{bd_membership_numeric, bd_membership_symbolic, little_julia_escape, orbit_csv, BdVerdict, Escape};
use multibrot_core::tuning::{decoration_angles, locate, tune, untune};
use multibrot_core::{Angle, ComponentSignature, Config, Error, RayPair};
use serde_json::{json, Value};

use crate::args::*;

pub enum Failure {
    Usage(String),
    Core(Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Core(Error::Parse { .. } | Error::Config(_)) => 2,
            Failure::Core(Error::Inconclusive(_)) => 3,
            Failure::Core(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub struct Report {
    pub value: Value,
    pub inconclusive: bool,
}

impl Report {
    fn of(value: Value) -> Self {
        Report { value, inconclusive: false }
    }
}

type Outcome = Result<Report, Failure>;

fn angle(s: &str) -> Result<Angle, Failure> {
    Ok(s.parse()?)
}

fn component(s: &str) -> Result<ComponentSignature, Failure> {
    Ok(s.parse()?)
}

fn point(s: &str) -> Result<ComplexPoint, Failure> {
    Ok(parse_point(s)?)
}

/// `p/q:r/s`, in either order.
fn pair(s: &str) -> Result<RayPair, Failure> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("expected a pair p/q:r/s, got {s:?}")))?;
    Ok(RayPair::unordered(angle(a)?, angle(b)?)?)
}

fn pairs(list: &[String]) -> Result<Vec<RayPair>, Failure> {
    list.iter().map(|s| pair(s)).collect()
}

fn c_json(z: ComplexPoint) -> Value {
    json!([z.re, z.im])
}

fn quadratic_only(common: &Common, what: &str) -> Result<(), Failure> {
    if common.degree == 2 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{what} is only available for degree 2")))
    }
}

struct Files<'a> {
    out: Option<&'a PathBuf>,
    written: &'a mut Vec<String>,
}

impl Files<'_> {
    fn write(&mut self, bytes: &[u8]) -> Result<(), Failure> {
        if let Some(path) = self.out {
            std::fs::write(path, bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            self.written.push(path.display().to_string());
        }
        Ok(())
    }
}

pub fn run(cli: &Cli, cfg: &Config, written: &mut Vec<String>) -> Outcome {
    let common = &cli.common;
    let d = common.degree;
    if d < 2 {
        return Err(Error::InvalidDegree(d).into());
    }
    let limit = cfg.max_lamination_period;
    let mut files = Files {
        out: common.out.as_ref(),
        written,
    };
    match &cli.command {
        Command::Angle(AngleCmd::Orbit { angle: a }) => Ok(Report::of(json!(angle(a)?.orbit(d)?))),
        Command::Angle(AngleCmd::Expansion { angle: a }) => {
            let t = angle(a)?;
            Ok(Report::of(json!({
                "angle": t,
                "expansion": t.to_expansion(d)?,
                "all": dual_expansions(&t, d)?,
            })))
        }
        Command::Pair(PairCmd::Conjugate { angle: a }) => {
            quadratic_only(common, "pairing")?;
            Ok(Report::of(json!(conjugate_angle(&angle(a)?, limit)?)))
        }
        Command::Pair(PairCmd::Lamination) => {
            quadratic_only(common, "pairing")?;
            let lam = build_lamination(common.max_period.unwrap_or(6), limit)?;
            files.write(lam.to_text().as_bytes())?;
            Ok(Report::of(json!(lam.pairs().collect::<Vec<_>>())))
        }
        Command::Address(AddressCmd::Kneading { angle: a }) => {
            quadratic_only(common, "kneading")?;
            Ok(Report::of(json!(kneading(&angle(a)?)?.to_string())))
        }
        Command::Address(AddressCmd::InternalAddress { angle: a }) => {
            quadratic_only(common, "internal address")?;
            let addr = internal_address(&angle(a)?, common.depth.unwrap_or(20) as usize)?;
            Ok(Report::of(json!({ "entries": addr.entries, "truncated": addr.truncated, "text": addr.to_string() })))
        }
        Command::Tune { component: k, angle: a } => {
            quadratic_only(common, "tuning")?;
            Ok(Report::of(json!(tune(&component(k)?, &angle(a)?))))
        }
        Command::Untune { component: k, angle: a } => {
            quadratic_only(common, "tuning")?;
            Ok(Report::of(json!(untune(&component(k)?, &angle(a)?)?)))
        }
        Command::Decorations { component: k } => {
            quadratic_only(common, "tuning")?;
            Ok(Report::of(json!(decoration_angles(&component(k)?, common.depth.unwrap_or(3))?)))
        }
        Command::Locate { component: k, angle: a } => {
            quadratic_only(common, "tuning")?;
            Ok(Report::of(json!(locate(&component(k)?, &angle(a)?, common.depth.unwrap_or(8)))))
        }
        Command::Fiber(cmd) => {
            quadratic_only(common, "fibers")?;
            fiber(cmd, common, limit, &mut files)
        }
        Command::Bd(BdCmd::Symbolic { angle: a }) => {
            let member = bd_membership_symbolic(&angle(a)?)?;
            let verdict = if member { BdVerdict::Member } else { BdVerdict::NonMember };
            Ok(Report::of(json!(verdict.as_str())))
        }
        Command::Bd(BdCmd::Numeric { c }) => {
            let report = bd_membership_numeric(point(c)?, u64::from(common.depth.unwrap_or(200)), cfg)?;
            files.write(orbit_csv(&report.orbit).as_bytes())?;
            Ok(Report {
                inconclusive: report.verdict == BdVerdict::Inconclusive,
                value: json!({
                    "verdict": report.verdict.as_str(),
                    "reason": report.reason,
                    "steps": report.orbit.len(),
                }),
            })
        }
        Command::LittleJulia(a) => {
            let e = little_julia_escape(
                point(&a.c)?,
                &pairs(&a.pairs)?,
                a.n,
                point(&a.z)?,
                u64::from(common.depth.unwrap_or(10_000)),
                cfg,
            )?;
            Ok(Report {
                inconclusive: e == Escape::Inconclusive,
                value: json!(e),
            })
        }
        Command::Solve(SolveCmd::Center { n, seed }) => {
            let c = find_center_degree(d, *n, point(seed)?, cfg)?;
            let residual = (d == 2).then(|| center_residual(c, *n));
            Ok(Report::of(json!({ "c": c_json(c), "abs": c.norm(), "residual": residual })))
        }
        Command::Solve(SolveCmd::Misiurewicz { l, k, seed }) => {
            let c = find_misiurewicz_degree(d, *l, *k, point(seed)?, cfg)?;
            let residual = (d == 2).then(|| misiurewicz_residual(c, *l, *k));
            Ok(Report::of(json!({ "c": c_json(c), "residual": residual })))
        }
        Command::Ray(RayCmd::Trace { angle: a, c }) => {
            let t = angle(a)?;
            let depth = common.depth.unwrap_or(cfg.ray_depth);
            let trace = match c {
                Some(c) => trace_dynamic_ray_degree(d, point(c)?, &t, depth, cfg)?,
                None => trace_parameter_ray_degree(d, &t, depth, cfg)?,
            };
            files.write(trace.to_csv().as_bytes())?;
            Ok(Report::of(json!({
                "angle": trace.angle,
                "kind": trace.kind,
                "degree": trace.degree,
                "points": trace.points.len(),
                "landing_estimate": c_json(trace.landing_estimate),
                "converged": trace.converged,
                "polished": trace.polished,
                "final_potential": trace.final_potential,
            })))
        }
        Command::Ray(RayCmd::Verify { minus, plus, c }) => {
            quadratic_only(common, "ray-pair verification")?;
            let p = RayPair::unordered(angle(minus)?, angle(plus)?)?;
            let kind = match c {
                Some(c) => RayKind::Dynamic(point(c)?),
                None => RayKind::Parameter,
            };
            Ok(Report::of(json!(verify_ray_pair(&p, kind, cfg.pair_tol, cfg)?)))
        }
        Command::Puzzle(a) => {
            quadratic_only(common, "puzzles")?;
            let r = puzzle_diameters(point(&a.c)?, &pairs(&a.pairs)?, point(&a.target)?, common.depth.unwrap_or(6), cfg)?;
            Ok(Report::of(json!(r)))
        }
        Command::Render(a) => render_cmd(a, common, cfg, &mut files),
    }
}

fn fiber(cmd: &FiberCmd, common: &Common, limit: u32, files: &mut Files) -> Outcome {
    match cmd {
        FiberCmd::Interval { angle: a } => {
            let r = fiber_interval(&angle(a)?, common.max_period.unwrap_or(12), limit)?;
            files.write(r.to_csv().as_bytes())?;
            let last = r.last();
            Ok(Report::of(json!({
                "target": r.target,
                "interval": [last.left, last.right],
                "length": last.length,
                "records": r.records,
            })))
        }
        FiberCmd::TransferCheck { component: k, angle: a } => {
            let ok = fiber_transfer_check(&component(k)?, &angle(a)?, common.max_period.unwrap_or(8), limit)?;
            Ok(Report::of(json!(ok)))
        }
        FiberCmd::ArcSkeleton { angle: a } => {
            let s = arc_skeleton(&angle(a)?, common.depth.unwrap_or(12) as usize, limit)?;
            files.write(s.to_csv().as_bytes())?;
            Ok(Report::of(json!({ "periods": s.periods(), "skeleton": s })))
        }
    }
}

fn render_cmd(a: &RenderArgs, common: &Common, cfg: &Config, files: &mut Files) -> Outcome {
    if files.out.is_none() {
        return Err(Failure::Usage("render needs --out <file.pgm>".into()));
    }
    let kind = match &a.julia {
        Some(c) => RayKind::Dynamic(point(c)?),
        None => RayKind::Parameter,
    };
    let spec = RenderSpec {
        degree: common.degree,
        kind,
        ..RenderSpec::parameter(Region::parse(&a.region)?, a.width, a.height, common.depth.unwrap_or(250))
    };
    let mut overlays = Vec::new();
    for r in &a.rays {
        let t = angle(r)?;
        let trace = match kind {
            RayKind::Dynamic(c) => trace_dynamic_ray_degree(common.degree, c, &t, cfg.ray_depth, cfg)?,
            RayKind::Parameter => trace_parameter_ray_degree(common.degree, &t, cfg.ray_depth, cfg)?,
        };
        overlays.push(Overlay { points: trace.points, shade: 0 });
    }
    let image = render(&spec, &overlays)?;
    files.write(&image.to_pgm())?;
    Ok(Report::of(json!({ "width": image.width, "height": image.height, "rays": a.rays.len() })))
}
