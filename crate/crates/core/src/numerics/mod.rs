//! Double-precision dynamics of `z ↦ z^d + c`: iteration, solvers for
//! special parameters, external rays, puzzle pieces and rendering.

pub mod centers;
pub mod pieces;
pub mod puzzle;
pub mod rays;
pub mod render;
pub mod solvers;

use num_complex::Complex64;

pub use centers::{center_of_pair, centers_in_wake, Center};
pub use pieces::{Classification, PiecePartition};
pub use puzzle::{puzzle_diameters, PuzzleReport};
pub use rays::{
    point_at_potential, trace_dynamic_ray, trace_dynamic_ray_degree, trace_parameter_ray, trace_parameter_ray_degree,
    verify_ray_pair, verify_ray_pair_with, RayKind, RayTrace,
};
pub use render::{render, render_with, GrayImage, Overlay, Region, RenderSpec};
pub use solvers::{find_center, find_misiurewicz};

pub type ComplexPoint = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iterate {
    pub value: ComplexPoint,
    /// Number of steps actually taken.
    pub steps: u64,
    /// Set when `|z|` passed the magnitude cap; `value` is the first such iterate.
    pub escaped: bool,
}

#[inline]
pub(crate) fn step(z: ComplexPoint, c: ComplexPoint, d: u32) -> ComplexPoint {
    if d == 2 {
        z * z + c
    } else {
        z.powu(d) + c
    }
}

/// `p_c^k(z)` for `p_c(z) = z^2 + c`.
pub fn iterate(c: ComplexPoint, z: ComplexPoint, k: u64, magnitude_cap: f64) -> Iterate {
    iterate_degree(2, c, z, k, magnitude_cap)
}

pub fn iterate_degree(d: u32, c: ComplexPoint, mut z: ComplexPoint, k: u64, magnitude_cap: f64) -> Iterate {
    for i in 0..k {
        z = step(z, c, d);
        if !(z.norm() <= magnitude_cap) {
            return Iterate {
                value: z,
                steps: i + 1,
                escaped: true,
            };
        }
    }
    Iterate {
        value: z,
        steps: k,
        escaped: false,
    }
}

/// Green's function of the filled Julia set of `p_c`, 0 if no escape within `max_iter`.
pub fn green(c: ComplexPoint, mut z: ComplexPoint, max_iter: u32) -> f64 {
    const BAILOUT: f64 = 1e10;
    let mut scale = 1.0;
    for _ in 0..max_iter {
        if z.norm() > BAILOUT {
            return z.norm().ln() * scale;
        }
        z = z * z + c;
        scale *= 0.5;
    }
    0.0
}

/// Parses `re,im` (or a bare real).
pub fn parse_point(s: &str) -> crate::Result<ComplexPoint> {
    let bad = || crate::Error::Parse {
        what: "complex point",
        input: s.to_string(),
    };
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(ComplexPoint::new(re, im))
}
