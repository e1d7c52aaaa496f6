//! Centers of hyperbolic components located from their root ray pairs.
//!
//! A period-`n` pair `(θ₋, θ₊)` bounds a wake in which the component it
//! roots is the only one of period `n`; at any parameter of the wake the
//! dynamic rays `θ₋`, `θ₊` land together. So a root of `p_c^n(0) = 0` with
//! exact period `n` at which those dynamic rays land together is the center.

use serde::Serialize;

use super::rays::{trace_dynamic_ray, trace_parameter_ray};
use super::solvers::{center_period, find_center};
use super::ComplexPoint;
use crate::combinatorics::{shared_lamination, RayPair};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Center {
    pub pair: RayPair,
    pub c: ComplexPoint,
}

/// Seeds on rings around the root, nearest first.
fn seeds(root: ComplexPoint) -> impl Iterator<Item = ComplexPoint> {
    std::iter::once(root).chain([1e-4, 1e-3, 1e-2, 3e-2, 1e-1].into_iter().flat_map(move |rho| {
        (0..12).map(move |j| root + ComplexPoint::from_polar(rho, std::f64::consts::TAU * f64::from(j) / 12.0))
    }))
}

fn rays_meet(c: ComplexPoint, pair: &RayPair, cfg: &Config) -> Result<bool> {
    let a = trace_dynamic_ray(c, &pair.minus, cfg.ray_depth, cfg)?;
    let b = trace_dynamic_ray(c, &pair.plus, cfg.ray_depth, cfg)?;
    Ok(a.converged && b.converged && (a.landing_estimate - b.landing_estimate).norm() < cfg.pair_tol)
}

/// The center of the component whose root pair is `pair`.
pub fn center_of_pair(pair: &RayPair, cfg: &Config) -> Result<ComplexPoint> {
    let n = pair.period;
    let root = trace_parameter_ray(&pair.minus, cfg.ray_depth, cfg)?.landing_estimate;
    let mut tried: Vec<ComplexPoint> = Vec::new();
    for seed in seeds(root) {
        let Ok(c) = find_center(n, seed, cfg) else { continue };
        if tried.iter().any(|t| (t - c).norm() < 1e-9) {
            continue;
        }
        tried.push(c);
        if center_period(c, n) == Some(n) && rays_meet(c, pair, cfg)? {
            return Ok(c);
        }
    }
    Err(Error::Inconclusive(format!("no center found for the component rooted at {pair}")))
}

/// Centers of all components of period `≤ max_period` whose root pairs
/// lie in the wake of `wake` (including `wake` itself), in lamination order.
pub fn centers_in_wake(wake: &RayPair, max_period: u32, limit: u32, cfg: &Config, exec: Exec) -> Result<Vec<Center>> {
    let lam = shared_lamination(max_period.max(wake.period), limit)?;
    let pairs: Vec<RayPair> = lam
        .pairs_up_to(max_period)
        .filter(|p| *p == *wake || wake.nests(p))
        .collect();
    par::map(exec, &pairs, |p| center_of_pair(p, cfg).map(|c| Center { pair: p.clone(), c }))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::Angle;

    #[test]
    fn rabbit_and_airplane_centers() {
        let cfg = Config::default();
        let rabbit = RayPair::new(Angle::frac(1, 7), Angle::frac(2, 7)).unwrap();
        let c = center_of_pair(&rabbit, &cfg).unwrap();
        assert!((c - ComplexPoint::new(-0.12256116687665, 0.74486176661974)).norm() < 1e-10);
        let airplane = RayPair::new(Angle::frac(3, 7), Angle::frac(4, 7)).unwrap();
        let c = center_of_pair(&airplane, &cfg).unwrap();
        assert!((c - ComplexPoint::new(-1.75487766624670, 0.0)).norm() < 1e-10);
    }
}
