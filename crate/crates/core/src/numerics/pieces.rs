//! Regions of the dynamical plane cut out by dynamic rays that land in
//! groups, capped by an equipotential.
//!
//! Walking the boundary of a piece alternates between an equipotential arc
//! `(a, b)`, the ray `b` down to its landing point, and the ray just before
//! `b` in the same landing group back up. Each arc between consecutive
//! boundary angles lies on exactly one piece, so the walks partition the arcs.

use std::collections::HashMap;

use serde::Serialize;

use super::render::Overlay;
use super::rays::{point_at_potential, trace_dynamic_ray, RayKind, RayTrace};
use super::{green, ComplexPoint};
use crate::angles::Angle;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Iterations used to evaluate the Green's function for the cap test.
const GREEN_ITER: u32 = 64;

/// Points within this relative distance below the cap potential lie on the
/// cap itself and count as outside.
const CAP_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryRay {
    pub angle: Angle,
    /// From the cap down to the landing point.
    pub polyline: Vec<ComplexPoint>,
    pub landing: ComplexPoint,
    #[serde(skip)]
    pub trace: RayTrace,
}

#[derive(Debug, Clone, Serialize)]
pub struct Piece {
    /// Equipotential arcs `(a, b)` on this piece, counter-clockwise.
    pub arcs: Vec<(Angle, Angle)>,
    /// Closed boundary, counter-clockwise, without the repeated first point.
    pub polygon: Vec<ComplexPoint>,
}

impl Piece {
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.arcs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        parts.join("")
    }

    pub fn has_arc(&self, a: &Angle, b: &Angle) -> bool {
        self.arcs.iter().any(|(x, y)| x == a && y == b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "piece", rename_all = "snake_case")]
pub enum Classification {
    Piece(usize),
    /// On or above the equipotential cap.
    Outside,
    /// Within the boundary band of a ray, or in no polygon.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct PiecePartition {
    pub c: ComplexPoint,
    pub cap_potential: f64,
    pub boundary_band: f64,
    pub rays: Vec<BoundaryRay>,
    pub pieces: Vec<Piece>,
}

fn arc_points(c: ComplexPoint, a: &Angle, b: &Angle, cfg: &Config) -> Result<Vec<ComplexPoint>> {
    // A single boundary ray bounds a full turn.
    let span = a.ccw_distance_to(b);
    let (num, den) = if span.is_zero() {
        (1u32.into(), 1u32.into())
    } else {
        (span.numer().clone(), span.denom().clone())
    };
    let turns = if span.is_zero() { 1.0 } else { span.to_f64() };
    let n = ((turns * 256.0).ceil() as u64).max(8);
    let step = Angle::new(num, den * n)?;
    let angles: Vec<Angle> = (0..=n).map(|i| a.add(&step.mul_int(i))).collect();
    let pts = par::map(Exec::Auto, &angles, |t| {
        point_at_potential(2, RayKind::Dynamic(c), t, cfg.cap_potential, cfg)
    });
    pts.into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Inconclusive(format!("equipotential arc ({a}, {b}) failed to trace")))
}

impl PiecePartition {
    /// `groups` lists the angles landing together; every group must land
    /// within `pair_tol`.
    pub fn new(c: ComplexPoint, groups: &[Vec<Angle>], cfg: &Config) -> Result<Self> {
        let mut angles: Vec<Angle> = groups.iter().flatten().cloned().collect();
        angles.sort();
        if angles.windows(2).any(|w| w[0] == w[1]) || angles.is_empty() {
            return Err(Error::Precondition("boundary angles must be distinct and non-empty".into()));
        }
        let mut group_of: HashMap<Angle, usize> = HashMap::new();
        let mut sorted_groups: Vec<Vec<Angle>> = groups.to_vec();
        for (i, g) in sorted_groups.iter_mut().enumerate() {
            g.sort();
            for a in g.iter() {
                group_of.insert(a.clone(), i);
            }
        }

        let traces = par::map(Exec::Auto, &angles, |a| trace_dynamic_ray(c, a, cfg.ray_depth, cfg));
        let mut rays = Vec::new();
        for (a, t) in angles.iter().zip(traces) {
            let t = t?;
            if !t.converged {
                return Err(Error::Inconclusive(format!("dynamic ray {a} did not land")));
            }
            let top = point_at_potential(2, RayKind::Dynamic(c), a, cfg.cap_potential, cfg)
                .ok_or_else(|| Error::Inconclusive(format!("ray {a} did not reach the cap")))?;
            let mut polyline = vec![top];
            polyline.extend(
                t.points
                    .iter()
                    .zip(&t.potentials)
                    .filter(|(_, &g)| g < cfg.cap_potential)
                    .map(|(z, _)| *z),
            );
            polyline.push(t.landing_estimate);
            rays.push(BoundaryRay {
                angle: a.clone(),
                polyline,
                landing: t.landing_estimate,
                trace: t,
            });
        }
        for g in &sorted_groups {
            let land: Vec<ComplexPoint> = g
                .iter()
                .map(|a| rays[angles.binary_search(a).expect("listed")].landing)
                .collect();
            if land.iter().any(|z| (z - land[0]).norm() > cfg.pair_tol) {
                return Err(Error::Precondition(format!("rays {g:?} do not land together")));
            }
        }

        let m = angles.len();
        let index = |a: &Angle| angles.binary_search(a).expect("boundary angle");
        let pred = |b: &Angle| {
            let g = &sorted_groups[group_of[b]];
            let i = g.binary_search(b).expect("in group");
            g[(i + g.len() - 1) % g.len()].clone()
        };
        let mut seen = vec![false; m];
        let mut pieces = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut arcs = Vec::new();
            let mut polygon = Vec::new();
            let mut i = start;
            loop {
                seen[i] = true;
                let (a, b) = (&angles[i], &angles[(i + 1) % m]);
                let arc = arc_points(c, a, b, cfg)?;
                polygon.extend(&arc[..arc.len() - 1]);
                polygon.extend(&rays[index(b)].polyline);
                let up = pred(b);
                polygon.extend(rays[index(&up)].polyline.iter().rev().skip(1).take(rays[index(&up)].polyline.len() - 2));
                arcs.push((a.clone(), b.clone()));
                i = index(&up);
                if i == start {
                    break;
                }
            }
            pieces.push(Piece { arcs, polygon });
        }
        Ok(PiecePartition {
            c,
            cap_potential: cfg.cap_potential,
            boundary_band: cfg.boundary_band,
            rays,
            pieces,
        })
    }

    /// Index of the piece carrying the arc `(a, b)`.
    pub fn piece_with_arc(&self, a: &Angle, b: &Angle) -> Option<usize> {
        self.pieces.iter().position(|p| p.has_arc(a, b))
    }

    /// Boundary rays and piece outlines, for drawing over a rendered image.
    pub fn overlays(&self, ray_shade: u8, piece_shade: u8) -> Vec<Overlay> {
        let rays = self.rays.iter().map(|r| Overlay {
            points: r.polyline.clone(),
            shade: ray_shade,
        });
        let outlines = self.pieces.iter().map(|p| {
            let mut points = p.polygon.clone();
            points.extend(p.polygon.first());
            Overlay { points, shade: piece_shade }
        });
        rays.chain(outlines).collect()
    }

    pub fn near_boundary(&self, z: ComplexPoint) -> bool {
        self.rays.iter().any(|r| {
            r.polyline
                .windows(2)
                .any(|w| segment_distance(z, w[0], w[1]) < self.boundary_band)
        })
    }

    pub fn classify(&self, z: ComplexPoint) -> Classification {
        if green(self.c, z, GREEN_ITER) >= self.cap_potential * (1.0 - CAP_BAND) {
            return Classification::Outside;
        }
        if self.near_boundary(z) {
            return Classification::Inconclusive;
        }
        self.pieces
            .iter()
            .position(|p| contains(&p.polygon, z))
            .map_or(Classification::Inconclusive, Classification::Piece)
    }
}

pub(crate) fn segment_distance(z: ComplexPoint, a: ComplexPoint, b: ComplexPoint) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / len2;
    (z - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// Even-odd point-in-polygon test.
pub(crate) fn contains(polygon: &[ComplexPoint], z: ComplexPoint) -> bool {
    let mut inside = false;
    let n = polygon.len();
    for i in 0..n {
        let (a, b) = (polygon[i], polygon[(i + 1) % n]);
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if x > z.re {
                inside = !inside;
            }
        }
    }
    inside
}
