//! Separation by periodic ray pairs, fiber intervals on the circle of angles,
//! transfer of fibers through tuning, and arc skeletons.
//!
//! Every angle of exact period `n ≥ 2` is an endpoint of some pair, so the
//! intersection of the sides containing a target is bounded by the nearest
//! period-`n` angles on either side of it. No scan over the pairs is needed
//! except to orient a target that is itself a pair endpoint.

use std::fmt::Write as _;

use serde::Serialize;

use crate::angles::Angle;
use crate::combinatorics::{
    denominator, exact_period_of_numerator, floor_ceil, is_minor_leaf, shared_lamination,
    internal_address, RayPair,
};
use crate::error::{Error, Result};
use crate::tuning::{tune, ComponentSignature};

/// True iff exactly one of `a`, `b` lies strictly inside the wake.
/// A pair angle is separated from nothing.
pub fn separated(a: &Angle, b: &Angle, pair: &RayPair) -> bool {
    let on_pair = |x: &Angle| *x == pair.minus || *x == pair.plus;
    if on_pair(a) || on_pair(b) {
        return false;
    }
    pair.contains(a) != pair.contains(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberRecord {
    pub max_period: u32,
    pub left: Angle,
    pub right: Angle,
    pub length: Angle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub target: Angle,
    pub records: Vec<FiberRecord>,
}

impl FiberReport {
    pub fn last(&self) -> &FiberRecord {
        self.records.last().expect("at least one depth")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth,left,right,length\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{:.12},{:.12},{:.12}",
                r.max_period,
                r.left.to_f64(),
                r.right.to_f64(),
                r.length.to_f64()
            );
        }
        out
    }
}

/// First numerator of exact period `n` met walking from `start` by `step`, wrapping.
fn scan(n: u32, start: i64, step: i64) -> u64 {
    let d = denominator(n) as i64;
    let mut k = start.rem_euclid(d);
    loop {
        if k != 0 && exact_period_of_numerator(k as u64, n) == n {
            return k as u64;
        }
        k = (k + step).rem_euclid(d);
    }
}

/// Intersection of the sides containing `target` over all pairs of period `≤ n`,
/// recorded for each `n = 2..=max_period`.
pub fn fiber_interval(target: &Angle, max_period: u32, limit: u32) -> Result<FiberReport> {
    if max_period > limit.min(crate::combinatorics::LAMINATION_PERIOD_CEILING) {
        return Err(Error::ResourceBound {
            what: "fiber period",
            requested: u64::from(max_period),
            limit: u64::from(limit),
        });
    }
    // Gaps from the target to the current left and right boundaries.
    let mut left: Option<(Angle, Angle)> = None;
    let mut right: Option<(Angle, Angle)> = None;
    let mut records = Vec::new();
    for n in 2..=max_period {
        let d = denominator(n);
        let (lo, hi) = floor_ceil(target, n);
        let exact = lo == hi;
        let mut l = Angle::frac(scan(n, lo as i64 - i64::from(exact), -1), d);
        let mut r = Angle::frac(scan(n, hi as i64 + i64::from(exact), 1), d);
        if exact && lo != 0 && exact_period_of_numerator(lo, n) == n {
            let partner = shared_lamination(n, limit)?.partner(target)?;
            if partner > *target {
                l = target.clone();
            } else {
                r = target.clone();
            }
        }
        let dl = l.ccw_distance_to(target);
        let dr = target.ccw_distance_to(&r);
        if left.as_ref().is_none_or(|(gap, _)| dl < *gap) {
            left = Some((dl, l));
        }
        if right.as_ref().is_none_or(|(gap, _)| dr < *gap) {
            right = Some((dr, r));
        }
        let (gl, l) = left.clone().unwrap();
        let (gr, r) = right.clone().unwrap();
        records.push(FiberRecord {
            max_period: n,
            left: l,
            right: r,
            length: Angle::new(
                gl.numer() * gr.denom() + gr.numer() * gl.denom(),
                gl.denom() * gr.denom(),
            )?,
        });
    }
    if records.is_empty() {
        return Err(Error::Precondition("fiber interval needs max_period ≥ 2".into()));
    }
    Ok(FiberReport {
        target: target.clone(),
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Inside,
    Outside,
    Endpoint,
}

fn side(pair: &RayPair, x: &Angle) -> Side {
    if *x == pair.minus || *x == pair.plus {
        Side::Endpoint
    } else if pair.contains(x) {
        Side::Inside
    } else {
        Side::Outside
    }
}

fn is_lamination_pair(pair: &RayPair, limit: u32) -> Result<bool> {
    if pair.period <= limit {
        Ok(shared_lamination(pair.period, limit)?.contains_pair(pair))
    } else {
        is_minor_leaf(&pair.minus, &pair.plus)
    }
}

/// Checks that the pairs bounding the fiber interval of `target` tune to
/// lamination pairs that bound `tune(target)` the same way.
pub fn fiber_transfer_check(
    comp: &ComponentSignature,
    target: &Angle,
    max_period: u32,
    limit: u32,
) -> Result<bool> {
    if comp.is_identity() {
        return Ok(true);
    }
    let report = fiber_interval(target, max_period, limit)?;
    let last = report.last();
    let lam = shared_lamination(max_period, limit)?;
    // A dyadic target has two images; both must sit where the target sits.
    let images = tune(comp, target);
    let tuned_left = tune(comp, &last.left).remove(0);
    let tuned_right = tune(comp, &last.right).remove(0);
    for end in [&last.left, &last.right] {
        let pair = RayPair::unordered(end.clone(), lam.partner(end)?)?;
        let tuned = RayPair::unordered(tune(comp, &pair.minus).remove(0), tune(comp, &pair.plus).remove(0))?;
        if tuned.period != pair.period * comp.period || !is_lamination_pair(&tuned, limit)? {
            return Ok(false);
        }
        if images.iter().any(|image| side(&pair, target) != side(&tuned, image)) {
            return Ok(false);
        }
    }
    let span = tuned_left.ccw_distance_to(&tuned_right);
    Ok(images.iter().all(|image| tuned_left.ccw_distance_to(image) <= span))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeletonComponent {
    pub period: u64,
    pub root: Option<RayPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcSkeleton {
    pub target: Angle,
    pub components: Vec<SkeletonComponent>,
    pub truncated: bool,
}

impl ArcSkeleton {
    pub fn periods(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.period).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("period,minus,plus\n");
        for c in &self.components {
            match &c.root {
                Some(p) => {
                    let _ = writeln!(out, "{},{},{}", c.period, p.minus, p.plus);
                }
                None => {
                    let _ = writeln!(out, "{},,", c.period);
                }
            }
        }
        out
    }
}

/// Root pairs of the components named by the internal address of `target`.
pub fn arc_skeleton(target: &Angle, max_len: usize, limit: u32) -> Result<ArcSkeleton> {
    let address = internal_address(target, max_len)?;
    let mut truncated = address.truncated;
    let reach = address
        .entries
        .iter()
        .copied()
        .filter(|&n| n <= u64::from(limit))
        .max()
        .unwrap_or(1)
        .max(2) as u32;
    let lam = shared_lamination(reach, limit)?;
    let mut components = vec![SkeletonComponent { period: 1, root: None }];
    let mut outer: Option<RayPair> = None;
    for &n in &address.entries[1..] {
        if n > u64::from(limit) {
            truncated = true;
            break;
        }
        let candidates: Vec<RayPair> = lam
            .pairs_around(n as u32, target)
            .into_iter()
            .filter(|p| outer.as_ref().is_none_or(|o| o.nests(p)))
            .collect();
        let [root]: [RayPair; 1] = candidates.try_into().map_err(|_| Error::Ambiguous {
            period: n as u32,
            target: target.to_string(),
        })?;
        outer = Some(root.clone());
        components.push(SkeletonComponent { period: n, root: Some(root) });
    }
    Ok(ArcSkeleton {
        target: target.clone(),
        components,
        truncated,
    })
}
