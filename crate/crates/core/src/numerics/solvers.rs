//! Newton solvers for centers and Misiurewicz parameters.

use super::ComplexPoint;
use crate::config::Config;
use crate::error::{Error, Result};

/// Roots closer than this to a lower-order equation count as degenerate.
const DEGENERACY_TOL: f64 = 1e-8;

/// Critical orbit `z_0 = 0, …, z_m` with `∂z_j/∂c`.
fn critical_orbit(d: u32, c: ComplexPoint, m: u32) -> (Vec<ComplexPoint>, Vec<ComplexPoint>) {
    let mut z = vec![ComplexPoint::new(0.0, 0.0)];
    let mut dz = vec![ComplexPoint::new(0.0, 0.0)];
    let df = f64::from(d);
    for j in 0..m as usize {
        let zj = z[j];
        dz.push(zj.powu(d - 1) * df * dz[j] + 1.0);
        z.push(super::step(zj, c, d));
    }
    (z, dz)
}

/// Newton on `f(c) = 0` until the step stalls at machine precision;
/// a multiple root is followed down at linear speed.
fn newton<F>(seed: ComplexPoint, cfg: &Config, what: &str, f: F) -> Result<ComplexPoint>
where
    F: Fn(ComplexPoint) -> (ComplexPoint, ComplexPoint),
{
    let mut c = seed;
    for _ in 0..cfg.newton_max_steps {
        let (v, dv) = f(c);
        let dc = v / dv;
        if !(dc.re.is_finite() && dc.im.is_finite()) {
            if v.norm() < cfg.newton_tol {
                return Ok(c);
            }
            return Err(Error::Seed(format!("{what}: singular derivative at {c}")));
        }
        c -= dc;
        if dc.norm() <= 1e-14 * c.norm().max(1.0) {
            let residual = f(c).0.norm();
            if residual < cfg.newton_tol {
                return Ok(c);
            }
            return Err(Error::Seed(format!("{what}: stalled at {c} with residual {residual:e}")));
        }
    }
    Err(Error::Seed(format!("{what}: no convergence from {seed} in {} steps", cfg.newton_max_steps)))
}

/// A root of `p_c^n(0) = 0` near `seed`.
pub fn find_center(n: u32, seed: ComplexPoint, cfg: &Config) -> Result<ComplexPoint> {
    find_center_degree(2, n, seed, cfg)
}

pub fn find_center_degree(d: u32, n: u32, seed: ComplexPoint, cfg: &Config) -> Result<ComplexPoint> {
    crate::angles::check_degree(d)?;
    if n == 0 {
        return Err(Error::Precondition("center period must be positive".into()));
    }
    newton(seed, cfg, "center", |c| {
        let (z, dz) = critical_orbit(d, c, n);
        (z[n as usize], dz[n as usize])
    })
}

/// Smallest `m ≤ max` with `p_c^m(0) ≈ 0`.
pub fn center_period(c: ComplexPoint, max: u32) -> Option<u32> {
    let (z, _) = critical_orbit(2, c, max);
    (1..=max).find(|&m| z[m as usize].norm() < DEGENERACY_TOL)
}

/// A root of `p_c^{l+k}(0) = p_c^l(0)` with exact preperiod `l` and period `k`.
pub fn find_misiurewicz(l: u32, k: u32, seed: ComplexPoint, cfg: &Config) -> Result<ComplexPoint> {
    find_misiurewicz_degree(2, l, k, seed, cfg)
}

pub fn find_misiurewicz_degree(d: u32, l: u32, k: u32, seed: ComplexPoint, cfg: &Config) -> Result<ComplexPoint> {
    crate::angles::check_degree(d)?;
    if l == 0 || k == 0 {
        return Err(Error::Precondition("Misiurewicz preperiod and period must be positive".into()));
    }
    let (l_, m_) = (l as usize, (l + k) as usize);
    let c = newton(seed, cfg, "misiurewicz", |c| {
        let (z, dz) = critical_orbit(d, c, l + k);
        (z[m_] - z[l_], dz[m_] - dz[l_])
    })?;
    if let Some(reason) = misiurewicz_degeneracy(d, c, l, k) {
        return Err(Error::DegenerateRoot(format!("{c}: {reason}")));
    }
    Ok(c)
}

/// Why `c` solves a lower-order Misiurewicz equation, if it does.
pub fn misiurewicz_degeneracy(d: u32, c: ComplexPoint, l: u32, k: u32) -> Option<String> {
    let (z, _) = critical_orbit(d, c, l + k);
    let close = |a: usize, b: usize| (z[a] - z[b]).norm() < DEGENERACY_TOL;
    let l_ = l as usize;
    if close(l_ - 1 + k as usize, l_ - 1) {
        return Some(format!("preperiod below {l}"));
    }
    (1..k)
        .filter(|m| k.is_multiple_of(*m))
        .find(|&m| close(l_ + m as usize, l_))
        .map(|m| format!("period {m} divides {k}"))
}

/// `|p_c^{l+k}(0) - p_c^l(0)|`.
pub fn misiurewicz_residual(c: ComplexPoint, l: u32, k: u32) -> f64 {
    let (z, _) = critical_orbit(2, c, l + k);
    (z[(l + k) as usize] - z[l as usize]).norm()
}

/// `|p_c^n(0)|`.
pub fn center_residual(c: ComplexPoint, n: u32) -> f64 {
    critical_orbit(2, c, n).0[n as usize].norm()
}
