//! Puzzle pieces around a point, obtained by pulling a depth-0 piece back
//! along the point's orbit, and their Euclidean diameters.

use serde::Serialize;

use super::pieces::{contains, Classification, PiecePartition};
use super::ComplexPoint;
use crate::combinatorics::RayPair;
use crate::config::Config;
use crate::error::Result;

/// Bound on boundary vertices kept between pullbacks.
const MAX_VERTICES: usize = 40_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PuzzleReport {
    /// Diameter of the piece containing the target at depths `0, 1, …`.
    pub diameters: Vec<f64>,
    /// Set when a depth could not be built; `diameters` holds the depths before it.
    pub truncated: bool,
}

/// Diameters of the puzzle pieces around `target` for depths `0..=depth`,
/// with depth-0 pieces cut out by the dynamic ray pairs `pairs`.
pub fn puzzle_diameters(
    c: ComplexPoint,
    pairs: &[RayPair],
    target: ComplexPoint,
    depth: u32,
    cfg: &Config,
) -> Result<PuzzleReport> {
    let groups: Vec<Vec<_>> = pairs.iter().map(|p| vec![p.minus.clone(), p.plus.clone()]).collect();
    let partition = PiecePartition::new(c, &groups, cfg)?;
    Ok(diameters_in(&partition, target, depth))
}

pub fn diameters_in(partition: &PiecePartition, target: ComplexPoint, depth: u32) -> PuzzleReport {
    let c = partition.c;
    let mut orbit = vec![target];
    for _ in 0..depth {
        let z = *orbit.last().expect("non-empty");
        orbit.push(z * z + c);
    }
    let mut diameters = Vec::new();
    for k in 0..=depth as usize {
        let Classification::Piece(i) = partition.classify(orbit[k]) else {
            return PuzzleReport { diameters, truncated: true };
        };
        let mut curve = partition.pieces[i].polygon.clone();
        for j in (0..k).rev() {
            match pullback(&curve, c, orbit[j]) {
                Some(next) => curve = next,
                None => return PuzzleReport { diameters, truncated: true },
            }
        }
        diameters.push(diameter(&curve));
    }
    PuzzleReport { diameters, truncated: false }
}

/// Inserts vertices so that `√(w - c)` can be followed continuously.
fn refine(curve: &[ComplexPoint], c: ComplexPoint) -> Vec<ComplexPoint> {
    let n = curve.len();
    let scale = diameter(curve) / 512.0;
    let mut out = Vec::with_capacity(n * 2);
    for i in 0..n {
        let (a, b) = (curve[i], curve[(i + 1) % n]);
        let near = (a - c).norm().min((b - c).norm()).max(1e-12);
        let h = scale.min(0.25 * near).max(1e-12);
        let m = (((b - a).norm() / h).ceil() as usize).clamp(1, 1000);
        for s in 0..m {
            out.push(a + (b - a) * (s as f64 / m as f64));
        }
    }
    while out.len() > MAX_VERTICES {
        out = out.into_iter().step_by(2).collect();
    }
    out
}

/// The component of `p_c^{-1}(curve)` bounding a region that contains `q`.
pub(crate) fn pullback(curve: &[ComplexPoint], c: ComplexPoint, q: ComplexPoint) -> Option<Vec<ComplexPoint>> {
    let pts = refine(curve, c);
    let mut lift = Vec::with_capacity(pts.len());
    let mut prev = (pts[0] - c).sqrt();
    for &w in &pts {
        let s = (w - c).sqrt();
        let s = if (s - prev).norm() <= (s + prev).norm() { s } else { -s };
        lift.push(s);
        prev = s;
    }
    let back = (pts[0] - c).sqrt();
    let closes = (prev - back).norm() < (prev + back).norm();
    if closes {
        let other: Vec<ComplexPoint> = lift.iter().map(|z| -z).collect();
        [lift, other].into_iter().find(|l| contains(l, q))
    } else {
        // The curve winds around c: one double-length preimage.
        let mut both = lift.clone();
        both.extend(lift.iter().map(|z| -z));
        contains(&both, q).then_some(both)
    }
}

/// Largest distance between two vertices, via the convex hull.
pub fn diameter(points: &[ComplexPoint]) -> f64 {
    let hull = convex_hull(points);
    let mut best: f64 = 0.0;
    for (i, a) in hull.iter().enumerate() {
        for b in &hull[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

fn convex_hull(points: &[ComplexPoint]) -> Vec<ComplexPoint> {
    let mut p: Vec<ComplexPoint> = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: ComplexPoint, a: ComplexPoint, b: ComplexPoint| {
        (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
    };
    let mut hull: Vec<ComplexPoint> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &ComplexPoint>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &z in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], z) <= 0.0 {
                hull.pop();
            }
            hull.push(z);
        }
        hull.pop();
    }
    hull
}
