//! External rays by Newton continuation in potential.
//!
//! Level `n`, sub-step `j` solves `F_n(x) = r e^{2πi·a_n}` with
//! `r = R^{d^{-(j+1/2)/s}}`, starting from the previous point. `F_n` is
//! `p_c^n(0)` as a function of `c` for parameter rays and `p_c^n(z)` for
//! dynamic rays; the angles `a_n` are computed exactly.
//!
//! Rays at rational angles approach their landing points slowly (only
//! geometrically near repelling points, and like `1/n` near parabolic
//! ones), so the tip is polished by Newton on the landing equation once
//! the last level moved less than `polish_gate`. The polished point is
//! accepted only when it lies within `capture_factor` times that move.

use std::fmt::Write as _;

use serde::Serialize;

use super::{solvers, ComplexPoint};
use crate::angles::Angle;
use crate::combinatorics::RayPair;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "c", rename_all = "snake_case")]
pub enum RayKind {
    Parameter,
    Dynamic(ComplexPoint),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayTrace {
    pub angle: Angle,
    pub kind: RayKind,
    pub degree: u32,
    /// Ordered by decreasing potential.
    pub points: Vec<ComplexPoint>,
    pub potentials: Vec<f64>,
    pub landing_estimate: ComplexPoint,
    pub converged: bool,
    /// True when the landing estimate came from the landing equation
    /// rather than from the tip itself.
    pub polished: bool,
    pub final_potential: f64,
}

impl RayTrace {
    pub fn tip(&self) -> ComplexPoint {
        *self.points.last().expect("trace has a start point")
    }

    /// `potential,re,im` per polyline point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("potential,re,im\n");
        for (p, z) in self.potentials.iter().zip(&self.points) {
            let _ = writeln!(out, "{p:e},{:.17e},{:.17e}", z.re, z.im);
        }
        out
    }
}

/// `F_n(x)` and `F_n'(x)`.
fn eval(d: u32, kind: RayKind, x: ComplexPoint, n: u32) -> (ComplexPoint, ComplexPoint) {
    let df = f64::from(d);
    match kind {
        RayKind::Parameter => {
            let (mut z, mut dz) = (ComplexPoint::new(0.0, 0.0), ComplexPoint::new(0.0, 0.0));
            for _ in 0..n {
                dz = z.powu(d - 1) * df * dz + 1.0;
                z = super::step(z, x, d);
            }
            (z, dz)
        }
        RayKind::Dynamic(c) => {
            let (mut z, mut dz) = (x, ComplexPoint::new(1.0, 0.0));
            for _ in 0..n {
                dz = z.powu(d - 1) * df * dz;
                z = super::step(z, c, d);
            }
            (z, dz)
        }
    }
}

fn solve_level(d: u32, kind: RayKind, seed: ComplexPoint, n: u32, target: ComplexPoint) -> Option<ComplexPoint> {
    let mut x = seed;
    let mut last = f64::INFINITY;
    for _ in 0..64 {
        let (v, dv) = eval(d, kind, x, n);
        let dx = (v - target) / dv;
        if !(dx.re.is_finite() && dx.im.is_finite()) {
            return None;
        }
        x -= dx;
        last = dx.norm();
        if last <= 1e-15 * x.norm().max(1e-3) {
            return Some(x);
        }
    }
    // Deep levels amplify rounding; a correction at noise level still
    // leaves the point as accurate as double precision allows. Near a
    // critical point the step is noisy but the residual is not.
    let residual = (eval(d, kind, x, n).0 - target).norm() / target.norm();
    (last <= 1e-13 * x.norm().max(1e-3) || residual <= 1e-10).then_some(x)
}

pub fn trace_parameter_ray(theta: &Angle, depth: u32, cfg: &Config) -> Result<RayTrace> {
    trace(2, RayKind::Parameter, theta, depth, cfg)
}

pub fn trace_parameter_ray_degree(d: u32, theta: &Angle, depth: u32, cfg: &Config) -> Result<RayTrace> {
    trace(d, RayKind::Parameter, theta, depth, cfg)
}

pub fn trace_dynamic_ray(c: ComplexPoint, theta: &Angle, depth: u32, cfg: &Config) -> Result<RayTrace> {
    trace(2, RayKind::Dynamic(c), theta, depth, cfg)
}

pub fn trace_dynamic_ray_degree(d: u32, c: ComplexPoint, theta: &Angle, depth: u32, cfg: &Config) -> Result<RayTrace> {
    trace(d, RayKind::Dynamic(c), theta, depth, cfg)
}

/// Traces down to `depth` levels without polishing; the points lie on the
/// ray at potentials down to about `ln R / d^depth`.
pub(crate) fn trace_raw(d: u32, kind: RayKind, theta: &Angle, depth: u32, cfg: &Config) -> Result<RayTrace> {
    crate::angles::check_degree(d)?;
    if depth > cfg.max_ray_depth {
        return Err(Error::ResourceBound {
            what: "ray depth",
            requested: u64::from(depth),
            limit: u64::from(cfg.max_ray_depth),
        });
    }
    let r0 = cfg.escape_radius;
    let df = f64::from(d);
    let s = cfg.sharpness;
    let turn = |a: &Angle| {
        let t = std::f64::consts::TAU * a.to_f64();
        ComplexPoint::new(t.cos(), t.sin())
    };
    // Level L uses the angle d^L θ; parameter rays need one extra
    // iterate since p_c(0) = c.
    let offset = u32::from(kind == RayKind::Parameter);
    let mut angle = theta.clone();
    let mut x = turn(&angle) * r0;
    let mut points = vec![x];
    let mut potentials = vec![r0.ln()];
    let mut complete = true;
    'levels: for level in 0..depth {
        let n = level + offset;
        for j in 0..s {
            let r = r0.powf(df.powf(-(f64::from(j) + 0.5) / f64::from(s)));
            match solve_level(d, kind, x, n, turn(&angle) * r) {
                Some(next) => {
                    x = next;
                    points.push(x);
                    potentials.push(r.ln() / df.powi(level as i32));
                }
                None => {
                    complete = false;
                    break 'levels;
                }
            }
        }
        angle = angle.mul_int(u64::from(d));
    }
    let final_potential = *potentials.last().expect("start point");
    Ok(RayTrace {
        angle: theta.clone(),
        kind,
        degree: d,
        landing_estimate: x,
        points,
        potentials,
        converged: complete,
        polished: false,
        final_potential,
    })
}

const EXTRA_LEVELS: u32 = 4;
/// Bound on `ln |target|` for the deep solve, well inside the `f64` range.
const MAX_LOG_RADIUS: f64 = 200.0;

/// The point of potential `g` on the ray, for `0 < g ≤ ln R`.
pub fn point_at_potential(d: u32, kind: RayKind, theta: &Angle, g: f64, cfg: &Config) -> Option<ComplexPoint> {
    let df = f64::from(d);
    let r0 = cfg.escape_radius;
    // Potential ln R · d^{-t}; level floor(t) sees radius exp(g · d^level).
    let t = (r0.ln() / g).ln() / df.ln();
    if !(t >= 0.0) || t > f64::from(cfg.max_ray_depth) {
        return None;
    }
    let level = t.floor() as u32;
    let raw = trace_raw(d, kind, theta, level, cfg).ok()?;
    if raw.points.len() != 1 + (level * cfg.sharpness) as usize {
        return None;
    }
    let offset = u32::from(kind == RayKind::Parameter);
    // Extra iterates push the target far out, where the Böttcher
    // coordinate is the identity to double precision.
    let mut deep = level;
    while deep < level + EXTRA_LEVELS && g * df.powi(deep as i32 + 1) <= MAX_LOG_RADIUS {
        deep += 1;
    }
    let angle = (0..deep).fold(theta.clone(), |a, _| a.mul_int(u64::from(d)));
    let turn = std::f64::consts::TAU * angle.to_f64();
    let target = ComplexPoint::from_polar((g * df.powi(deep as i32)).exp(), turn);
    solve_level(d, kind, raw.tip(), deep + offset, target)
}

fn trace(d: u32, kind: RayKind, theta: &Angle, depth: u32, cfg: &Config) -> Result<RayTrace> {
    let mut t = trace_raw(d, kind, theta, depth, cfg)?;
    let complete = t.converged;
    t.converged = false;
    let s = cfg.sharpness as usize;
    let level_ends: Vec<ComplexPoint> = t.points.iter().step_by(s).copied().collect();
    let moves: Vec<f64> = level_ends.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    if moves.len() >= 3 && moves[moves.len() - 3..].iter().all(|&m| m < cfg.landing_tol) {
        // Newton may stall once the tip sits on the landing point to
        // machine precision; the trace has landed either way.
        t.converged = true;
        return Ok(t);
    }
    if !complete {
        return Ok(t);
    }
    let last_move = moves.last().copied().unwrap_or(f64::INFINITY);
    let tip = t.tip();
    if last_move > cfg.polish_gate {
        return Ok(t);
    }
    if let Some(p) = polish(d, kind, theta, tip, cfg) {
        if (p - tip).norm() <= cfg.capture_factor * last_move {
            t.landing_estimate = p;
            t.converged = true;
            t.polished = true;
        }
    }
    Ok(t)
}

fn polish(d: u32, kind: RayKind, theta: &Angle, tip: ComplexPoint, cfg: &Config) -> Option<ComplexPoint> {
    let orbit = theta.orbit(d).ok()?;
    let (l, k) = (orbit.preperiod as u32, orbit.period as u32);
    match kind {
        RayKind::Dynamic(c) => landing_point(d, c, l, k, tip, cfg),
        // The landing cycle may be shorter than the ray's.
        RayKind::Parameter if l > 0 => (1..=k)
            .filter(|m| k % m == 0)
            .find_map(|m| solvers::find_misiurewicz_degree(d, l + 1, m, tip, cfg).ok()),
        RayKind::Parameter => parabolic_root(d, k, tip, cfg),
    }
}

/// Newton on `p^{l+k}(z) = p^l(z)` from the tip of a dynamic ray.
fn landing_point(d: u32, c: ComplexPoint, l: u32, k: u32, tip: ComplexPoint, cfg: &Config) -> Option<ComplexPoint> {
    let mut z = tip;
    let df = f64::from(d);
    for _ in 0..cfg.newton_max_steps {
        let (mut w, mut dw) = (z, ComplexPoint::new(1.0, 0.0));
        let (mut wl, mut dwl) = (w, dw);
        for i in 0..l + k {
            if i == l {
                wl = w;
                dwl = dw;
            }
            dw = w.powu(d - 1) * df * dw;
            w = super::step(w, c, d);
        }
        if l + k == l {
            wl = w;
            dwl = dw;
        }
        let dz = (w - wl) / (dw - dwl);
        if !(dz.re.is_finite() && dz.im.is_finite()) {
            return None;
        }
        z -= dz;
        if dz.norm() <= 1e-15 * z.norm().max(1.0) {
            return Some(z);
        }
    }
    Some(z)
}

/// Solves `p_c^n(z) = z`, `(p_c^n)'(z) = μ` for `(z, c)`.
fn cycle_with_multiplier(
    d: u32,
    n: u32,
    mu: ComplexPoint,
    mut z0: ComplexPoint,
    mut c: ComplexPoint,
    steps: u32,
) -> Option<(ComplexPoint, ComplexPoint, bool)> {
    let df = f64::from(d);
    let one = ComplexPoint::new(1.0, 0.0);
    let zero = ComplexPoint::new(0.0, 0.0);
    for _ in 0..steps {
        let (mut z, mut a, mut b, mut cc, mut dd) = (z0, one, zero, zero, zero);
        for _ in 0..n {
            let p1 = z.powu(d - 1) * df;
            let p2 = if d == 2 { ComplexPoint::new(2.0, 0.0) } else { z.powu(d - 2) * (df * (df - 1.0)) };
            let (a2, b2) = (p1 * a, p1 * b + 1.0);
            cc = p2 * a * a + p1 * cc;
            dd = p2 * a * b + p1 * dd;
            a = a2;
            b = b2;
            z = super::step(z, c, d);
        }
        let (f1, f2) = (z - z0, a - mu);
        let (j11, j12, j21, j22) = (a - 1.0, b, cc, dd);
        let det = j11 * j22 - j12 * j21;
        let dz = (f1 * j22 - j12 * f2) / det;
        let dc = (j11 * f2 - j21 * f1) / det;
        if !(dz.re.is_finite() && dz.im.is_finite() && dc.re.is_finite() && dc.im.is_finite()) {
            return None;
        }
        z0 -= dz;
        c -= dc;
        if dc.norm() <= 1e-15 * c.norm().max(1.0) && dz.norm() <= 1e-15 * z0.norm().max(1.0) {
            return Some((z0, c, true));
        }
    }
    Some((z0, c, false))
}

/// Root of the period-`n` component whose ray tip is at `tip`.
fn parabolic_root(d: u32, n: u32, tip: ComplexPoint, cfg: &Config) -> Option<ComplexPoint> {
    // Seed the cycle point from the critical orbit, which shadows the
    // parabolic cycle for a long time just outside the root.
    let mut z = ComplexPoint::new(0.0, 0.0);
    let mut best = (f64::INFINITY, z);
    for _ in 0..(16 * n).max(256) {
        z = super::step(z, tip, d);
        if z.norm() > 4.0 {
            break;
        }
        let mut w = z;
        for _ in 0..n {
            w = super::step(w, tip, d);
        }
        let gap = (w - z).norm();
        if gap < best.0 {
            best = (gap, z);
        }
    }
    let one = ComplexPoint::new(1.0, 0.0);
    let (z0, c0, exact) = cycle_with_multiplier(d, n, one, best.1, tip, cfg.newton_max_steps)?;
    if exact {
        return Some(c0);
    }
    // A satellite root is a degenerate solution; it is a simple one of the
    // parent cycle with multiplier e^{2πi p/q}.
    for m in (1..n).filter(|m| n.is_multiple_of(*m)) {
        let q = n / m;
        let mut w = z0;
        for _ in 0..m {
            w = super::step(w, c0, d);
        }
        for p in (1..q).filter(|p| num_integer::gcd(*p, q) == 1) {
            let t = std::f64::consts::TAU * f64::from(p) / f64::from(q);
            let mu = ComplexPoint::new(t.cos(), t.sin());
            if let Some((_, c1, true)) = cycle_with_multiplier(d, m, mu, z0, c0, cfg.newton_max_steps) {
                if (c1 - c0).norm() < 1e-5 {
                    return Some(c1);
                }
            }
        }
    }
    Some(c0)
}

/// Do both rays of `pair` land within `tol` of each other?
///
/// A trace that fails to converge makes the answer inconclusive.
pub fn verify_ray_pair(pair: &RayPair, kind: RayKind, tol: f64, cfg: &Config) -> Result<bool> {
    verify_ray_pair_with(pair, kind, tol, cfg, Exec::Auto)
}

pub fn verify_ray_pair_with(pair: &RayPair, kind: RayKind, tol: f64, cfg: &Config, exec: Exec) -> Result<bool> {
    let angles = [pair.minus.clone(), pair.plus.clone()];
    let traces = par::map(exec, &angles, |a| trace(2, kind, a, cfg.ray_depth, cfg));
    let mut landings = Vec::new();
    for t in traces {
        let t = t?;
        if !t.converged {
            return Err(Error::Inconclusive(format!("ray {} did not converge", t.angle)));
        }
        landings.push(t.landing_estimate);
    }
    Ok((landings[0] - landings[1]).norm() < tol)
}
