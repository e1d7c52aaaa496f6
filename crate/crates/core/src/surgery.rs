//! Piece dynamics: confinement to a region bounded by ray pairs, forward
//! unions of confined samples, and the Branner–Douady composite map on the
//! 1/3-limb with its membership criterion.
//!
//! For `c` in the 1/3-limb the dynamic rays 1/7, 2/7, 4/7 land at the
//! α fixed point and 9/14, 11/14, 1/14 at -α. The pieces they cut out are
//! named by their equipotential arcs:
//!
//! | piece | arcs |
//! |-------|------|
//! | Y1 | (1/7, 2/7) |
//! | Y2 | (2/7, 4/7) |
//! | Z1 | (9/14, 11/14) |
//! | Z2 | (11/14, 1/14) |
//! | Y0 | (1/14, 1/7), (4/7, 9/14) |
//!
//! The composite map applies `p²` on Y1 and `p` on Y0 and Z2; the critical
//! orbit stays in Y0 ∪ Y1 ∪ Z2 iff `c` lies in the image of the 1/2-limb.

use std::fmt::Write as _;

use serde::Serialize;

use crate::angles::Angle;
use crate::combinatorics::RayPair;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::pieces::{contains, segment_distance, Classification, PiecePartition};
use crate::numerics::rays::{trace_dynamic_ray, trace_parameter_ray};
use crate::numerics::{iterate, ComplexPoint};
use crate::par::{self, Exec};

fn a(p: u64, q: u64) -> Angle {
    Angle::frac(p, q)
}

/// The wake of the 1/3-limb, bounded by the parameter rays 1/7 and 2/7.
pub fn third_limb_wake() -> RayPair {
    RayPair::new(a(1, 7), a(2, 7)).expect("valid pair")
}

/// Region of the parameter plane between the two parameter rays of a pair,
/// closed by the circle of radius `escape_radius`.
#[derive(Debug, Clone, Serialize)]
pub struct ParameterWake {
    pub pair: RayPair,
    pub polygon: Vec<ComplexPoint>,
    #[serde(skip)]
    rays: [Vec<ComplexPoint>; 2],
    band: f64,
}

impl ParameterWake {
    pub fn new(pair: &RayPair, cfg: &Config) -> Result<Self> {
        let lo = trace_parameter_ray(&pair.minus, cfg.ray_depth, cfg)?;
        let hi = trace_parameter_ray(&pair.plus, cfg.ray_depth, cfg)?;
        if !(lo.converged && hi.converged) {
            return Err(Error::Inconclusive(format!("parameter rays of {pair} did not land")));
        }
        let mut lo_line = lo.points.clone();
        lo_line.push(lo.landing_estimate);
        let mut hi_line = hi.points.clone();
        hi_line.push(hi.landing_estimate);
        // Up the minus ray, counter-clockwise along the circle, down the plus ray.
        let mut polygon: Vec<ComplexPoint> = lo_line.iter().rev().copied().collect();
        let (t0, t1) = (pair.minus.to_f64(), pair.plus.to_f64());
        let steps = 256;
        for i in 1..steps {
            let t = t0 + (t1 - t0) * f64::from(i) / f64::from(steps);
            polygon.push(ComplexPoint::from_polar(cfg.escape_radius, std::f64::consts::TAU * t));
        }
        polygon.extend(&hi_line);
        Ok(ParameterWake {
            pair: pair.clone(),
            polygon,
            rays: [lo_line, hi_line],
            band: cfg.boundary_band,
        })
    }

    /// Whether `c` lies in the wake; inconclusive within the boundary band of a ray.
    pub fn contains(&self, c: ComplexPoint) -> Result<bool> {
        let near = self
            .rays
            .iter()
            .any(|r| r.windows(2).any(|w| segment_distance(c, w[0], w[1]) < self.band));
        if near {
            return Err(Error::Inconclusive(format!("{c} lies on the boundary of the wake of {}", self.pair)));
        }
        Ok(contains(&self.polygon, c))
    }

    /// Requires `c` in the wake with a connected Julia set.
    fn require(&self, c: ComplexPoint) -> Result<()> {
        if !self.contains(c)? {
            return Err(Error::Precondition(format!("{c} is not in the wake of {}", self.pair)));
        }
        if iterate(c, ComplexPoint::new(0.0, 0.0), CONNECTIVITY_ITER, 2.0).escaped {
            return Err(Error::Precondition(format!("the Julia set of {c} is disconnected")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaReport {
    /// Mean landing point of the 1/7, 2/7 and 4/7 rays.
    pub alpha: ComplexPoint,
    pub max_gap: f64,
    /// `|p_c(α) - α|`.
    pub residual: f64,
}

/// Critical-orbit steps after which the Julia set is taken as connected.
const CONNECTIVITY_ITER: u64 = 10_000;

/// Tolerance on `|p_c(α) - α|`.
const ALPHA_RESIDUAL_TOL: f64 = 1e-8;

/// Landing of the rays 1/7, 2/7 and 4/7 at a common fixed point.
pub fn alpha_rays_check(c: ComplexPoint, cfg: &Config) -> Result<AlphaReport> {
    alpha_rays_check_in(&ParameterWake::new(&third_limb_wake(), cfg)?, c, cfg)
}

pub fn alpha_rays_check_in(wake: &ParameterWake, c: ComplexPoint, cfg: &Config) -> Result<AlphaReport> {
    wake.require(c)?;
    let angles = [a(1, 7), a(2, 7), a(4, 7)];
    let traces = par::map(Exec::Auto, &angles, |t| trace_dynamic_ray(c, t, cfg.ray_depth, cfg));
    let mut lands = Vec::new();
    for (t, tr) in angles.iter().zip(traces) {
        let tr = tr?;
        if !tr.converged {
            return Err(Error::Inconclusive(format!("dynamic ray {t} did not land at c = {c}")));
        }
        lands.push(tr.landing_estimate);
    }
    let alpha = lands.iter().sum::<ComplexPoint>() / 3.0;
    let mut max_gap: f64 = 0.0;
    for (i, x) in lands.iter().enumerate() {
        for y in &lands[i + 1..] {
            max_gap = max_gap.max((x - y).norm());
        }
    }
    let residual = (alpha * alpha + c - alpha).norm();
    if residual >= ALPHA_RESIDUAL_TOL {
        return Err(Error::Inconclusive(format!("|p(α) - α| = {residual:e} at c = {c}")));
    }
    Ok(AlphaReport { alpha, max_gap, residual })
}

/// True iff the doubling orbit of `θ` avoids the open arc (9/14, 11/14).
/// Accepts `θ` in `[1/7, 2/7)`: the lower root angle names the rabbit.
pub fn bd_membership_symbolic(theta: &Angle) -> Result<bool> {
    let wake = third_limb_wake();
    if !(wake.minus <= *theta && *theta < wake.plus) {
        return Err(Error::Precondition(format!("{theta} is not in [1/7, 2/7)")));
    }
    let (lo, hi) = (a(9, 14), a(11, 14));
    let orbit = theta.orbit(2)?;
    Ok(!orbit.points.iter().any(|x| lo < *x && *x < hi))
}

/// A partition with names attached to some of its pieces.
#[derive(Debug, Clone, Serialize)]
pub struct NamedPartition {
    pub partition: PiecePartition,
    /// Name of each piece, in the partition's order.
    pub names: Vec<String>,
}

impl NamedPartition {
    /// Names pieces by one of their arcs; unnamed pieces get their arc label.
    pub fn new(partition: PiecePartition, named_arcs: &[(&str, (Angle, Angle))]) -> Result<Self> {
        let mut names: Vec<String> = partition.pieces.iter().map(|p| p.label()).collect();
        for (name, (x, y)) in named_arcs {
            let i = partition
                .piece_with_arc(x, y)
                .ok_or_else(|| Error::Precondition(format!("no piece carries the arc ({x}, {y})")))?;
            names[i] = (*name).to_string();
        }
        Ok(NamedPartition { partition, names })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Name of the piece containing `z`, or `None` when outside or inconclusive.
    pub fn name_at(&self, z: ComplexPoint) -> Option<&str> {
        match self.partition.classify(z) {
            Classification::Piece(i) => Some(&self.names[i]),
            _ => None,
        }
    }
}

/// The six-ray partition of the dynamical plane of `c`.
pub fn bd_partition(c: ComplexPoint, cfg: &Config) -> Result<NamedPartition> {
    let groups = [vec![a(1, 7), a(2, 7), a(4, 7)], vec![a(1, 14), a(9, 14), a(11, 14)]];
    let partition = PiecePartition::new(c, &groups, cfg)?;
    NamedPartition::new(
        partition,
        &[
            ("Y0", (a(1, 14), a(1, 7))),
            ("Y1", (a(1, 7), a(2, 7))),
            ("Y2", (a(2, 7), a(4, 7))),
            ("Z1", (a(9, 14), a(11, 14))),
            ("Z2", (a(11, 14), a(1, 14))),
        ],
    )
}

/// Iterate exponent per named piece of a composite map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositeMapSpec {
    pub pieces: Vec<(String, u32)>,
}

impl CompositeMapSpec {
    pub fn new(pieces: Vec<(String, u32)>) -> Result<Self> {
        if pieces.iter().any(|(_, n)| *n == 0) {
            return Err(Error::Precondition("composite map exponents must be positive".into()));
        }
        for (i, (name, _)) in pieces.iter().enumerate() {
            if pieces[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::Precondition(format!("piece {name} listed twice")));
            }
        }
        Ok(CompositeMapSpec { pieces })
    }

    /// `p²` on Y1, `p` on Y0 and Z2.
    pub fn branner_douady() -> Self {
        Self::new(vec![("Y1".into(), 2), ("Y0".into(), 1), ("Z2".into(), 1)]).expect("valid")
    }

    pub fn exponent(&self, name: &str) -> Option<u32> {
        self.pieces.iter().find(|(n, _)| n == name).map(|(_, e)| *e)
    }

    /// Largest `|p^{n_j}(z) - p^{n_k}(z)|` over landing points `z` shared by
    /// the boundaries of two pieces of the map.
    pub fn boundary_mismatch(&self, named: &NamedPartition) -> Result<f64> {
        let part = &named.partition;
        let mut worst: f64 = 0.0;
        for ray in &part.rays {
            let touching: Vec<u32> = self
                .pieces
                .iter()
                .map(|(name, e)| {
                    let i = named
                        .index_of(name)
                        .ok_or_else(|| Error::Precondition(format!("unknown piece {name}")))?;
                    let on = part.pieces[i].arcs.iter().any(|(x, y)| *x == ray.angle || *y == ray.angle);
                    Ok(on.then_some(*e))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            let images: Vec<ComplexPoint> = touching
                .iter()
                .map(|&e| iterate(part.c, ray.landing, u64::from(e), f64::INFINITY).value)
                .collect();
            for x in &images {
                for y in &images {
                    worst = worst.max((x - y).norm());
                }
            }
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BdVerdict {
    Member,
    NonMember,
    Inconclusive,
}

impl BdVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            BdVerdict::Member => "member",
            BdVerdict::NonMember => "non_member",
            BdVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitStep {
    pub step: u64,
    pub point: ComplexPoint,
    /// Piece name, or `None` if outside every piece or on a boundary.
    pub piece: Option<String>,
}

/// CSV with columns `re,im,piece,step`.
pub fn orbit_csv(orbit: &[OrbitStep]) -> String {
    let mut out = String::from("re,im,piece,step\n");
    for s in orbit {
        let _ = writeln!(
            out,
            "{:.15e},{:.15e},{},{}",
            s.point.re,
            s.point.im,
            s.piece.as_deref().unwrap_or(""),
            s.step
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BdReport {
    pub verdict: BdVerdict,
    pub orbit: Vec<OrbitStep>,
    pub reason: Option<String>,
}

impl BdReport {
    fn inconclusive(reason: String, orbit: Vec<OrbitStep>) -> Self {
        BdReport {
            verdict: BdVerdict::Inconclusive,
            orbit,
            reason: Some(reason),
        }
    }
}

/// Follows the critical orbit under the composite map for `max_iter` steps.
pub fn bd_membership_numeric(c: ComplexPoint, max_iter: u64, cfg: &Config) -> Result<BdReport> {
    let wake = ParameterWake::new(&third_limb_wake(), cfg)?;
    bd_membership_numeric_in(&wake, c, max_iter, cfg)
}

pub fn bd_membership_numeric_in(wake: &ParameterWake, c: ComplexPoint, max_iter: u64, cfg: &Config) -> Result<BdReport> {
    match wake.require(c) {
        Ok(()) => {}
        Err(e) if e.is_inconclusive() => return Ok(BdReport::inconclusive(e.to_string(), Vec::new())),
        Err(e) => return Err(e),
    }
    let named = match bd_partition(c, cfg) {
        Ok(n) => n,
        Err(e) if e.is_inconclusive() || matches!(e, Error::Precondition(_)) => {
            return Ok(BdReport::inconclusive(e.to_string(), Vec::new()));
        }
        Err(e) => return Err(e),
    };
    let spec = CompositeMapSpec::branner_douady();
    let mut z = ComplexPoint::new(0.0, 0.0);
    let mut orbit = Vec::new();
    for step in 0..max_iter {
        let piece = named.name_at(z).map(str::to_string);
        orbit.push(OrbitStep { step, point: z, piece: piece.clone() });
        let Some(name) = piece else {
            return Ok(BdReport::inconclusive(format!("orbit point {z} not classified"), orbit));
        };
        if name == "Z1" {
            return Ok(BdReport {
                verdict: BdVerdict::NonMember,
                orbit,
                reason: None,
            });
        }
        let Some(e) = spec.exponent(&name) else {
            return Ok(BdReport::inconclusive(format!("orbit entered {name}"), orbit));
        };
        z = iterate(c, z, u64::from(e), cfg.magnitude_cap).value;
    }
    Ok(BdReport {
        verdict: BdVerdict::Member,
        orbit,
        reason: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "step", rename_all = "snake_case")]
pub enum Escape {
    Stays,
    /// Number of applications of `p^n` before the point left `U`.
    Escapes(u64),
    Inconclusive,
}

/// The region bounded by every one of a set of dynamic ray pairs.
#[derive(Debug, Clone, Serialize)]
pub struct BoundedRegion {
    pub partition: PiecePartition,
    /// Index of the piece whose boundary meets all pairs.
    pub region: usize,
}

impl BoundedRegion {
    pub fn new(c: ComplexPoint, pairs: &[RayPair], cfg: &Config) -> Result<Self> {
        let groups: Vec<Vec<Angle>> = pairs.iter().map(|p| vec![p.minus.clone(), p.plus.clone()]).collect();
        let partition = PiecePartition::new(c, &groups, cfg)?;
        let touches_all: Vec<usize> = (0..partition.pieces.len())
            .filter(|&i| {
                groups.iter().all(|g| {
                    partition.pieces[i]
                        .arcs
                        .iter()
                        .any(|(x, y)| g.contains(x) || g.contains(y))
                })
            })
            .collect();
        let [region]: [usize; 1] = touches_all
            .try_into()
            .map_err(|_| Error::Precondition("the pairs do not bound a unique region".into()))?;
        Ok(BoundedRegion { partition, region })
    }

    /// Iterates `z` under `p^n` until it leaves the region.
    pub fn escape(&self, n: u32, z: ComplexPoint, max_iter: u64, magnitude_cap: f64) -> Escape {
        let mut z = z;
        for k in 0..max_iter {
            match self.partition.classify(z) {
                Classification::Piece(i) if i == self.region => {}
                Classification::Inconclusive => return Escape::Inconclusive,
                _ => return Escape::Escapes(k),
            }
            let it = iterate(self.partition.c, z, u64::from(n), magnitude_cap);
            if it.escaped {
                return Escape::Escapes(k + 1);
            }
            z = it.value;
        }
        Escape::Stays
    }
}

/// Whether `z` stays in the region bounded by `pairs` under `p^n`.
pub fn little_julia_escape(
    c: ComplexPoint,
    pairs: &[RayPair],
    n: u32,
    z: ComplexPoint,
    max_iter: u64,
    cfg: &Config,
) -> Result<Escape> {
    if n == 0 {
        return Err(Error::Precondition("iterate exponent must be positive".into()));
    }
    match BoundedRegion::new(c, pairs, cfg) {
        Ok(r) => Ok(r.escape(n, z, max_iter, cfg.magnitude_cap)),
        Err(e) if e.is_inconclusive() => Ok(Escape::Inconclusive),
        Err(e) => Err(e),
    }
}

/// `p^k(sample)` for `k = 0..n`, grouped by `k`.
pub fn forward_union_sample(c: ComplexPoint, sample: &[ComplexPoint], n: u32) -> Vec<ComplexPoint> {
    let mut out = Vec::with_capacity(sample.len() * n as usize);
    let mut layer = sample.to_vec();
    for _ in 0..n {
        out.extend(&layer);
        for z in &mut layer {
            *z = *z * *z + c;
        }
    }
    out
}
