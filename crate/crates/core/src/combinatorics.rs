//! Kneading sequences, internal addresses and the quadratic minor lamination.
//!
//! The lamination pairs periodic angles period by period, Lavaurs style: in
//! every face cut out by the chords of lower period, the new angles are joined
//! consecutively in increasing order. Numerators are kept as machine integers
//! over the implied denominator `2^n - 1`, so a lamination up to period 20
//! (about a million angles) stays compact.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::angles::Angle;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Largest period the compact lamination encoding supports.
pub const LAMINATION_PERIOD_CEILING: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Symbol {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "*")]
    Star,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Star => "*",
        })
    }
}

/// Itinerary of `θ, 2θ, 4θ, …` relative to the partition at `θ/2`, `(θ+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KneadingSequence {
    pub preperiod: Vec<Symbol>,
    pub period: Vec<Symbol>,
}

impl KneadingSequence {
    /// Symbol at 1-based position `i`.
    pub fn at(&self, i: usize) -> Symbol {
        let i = i - 1;
        let l = self.preperiod.len();
        if i < l {
            self.preperiod[i]
        } else {
            self.period[(i - l) % self.period.len()]
        }
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        if let Some(p) = (1..n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.period[i] == self.period[i - p])) {
            self.period.truncate(p);
        }
        while let Some(&last) = self.preperiod.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }
}

impl fmt::Display for KneadingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.preperiod {
            write!(f, "{s}")?;
        }
        write!(f, "|")?;
        for s in &self.period {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub fn kneading(theta: &Angle) -> Result<KneadingSequence> {
    if theta.is_zero() {
        return Err(Error::DegeneratePartition);
    }
    let lo = theta.half();
    let hi = lo.antipode();
    let orbit = theta.orbit(2)?;
    let symbols: Vec<Symbol> = orbit
        .points
        .iter()
        .map(|x| {
            if *x == lo || *x == hi {
                Symbol::Star
            } else if lo < *x && *x < hi {
                Symbol::One
            } else {
                Symbol::Zero
            }
        })
        .collect();
    let mut k = KneadingSequence {
        preperiod: symbols[..orbit.preperiod].to_vec(),
        period: symbols[orbit.preperiod..].to_vec(),
    };
    k.canonicalize();
    Ok(k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InternalAddress {
    pub entries: Vec<u64>,
    pub truncated: bool,
}

impl fmt::Display for InternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(" -> "))?;
        if self.truncated {
            write!(f, " -> ...")?;
        }
        Ok(())
    }
}

/// First-difference recursion on the kneading sequence.
///
/// A `*` never matches a digit; two `*` symbols only meet once the
/// comparison period equals the exact period, where the address ends.
pub fn internal_address(theta: &Angle, max_len: usize) -> Result<InternalAddress> {
    let nu = kneading(theta)?;
    let mut entries = vec![1u64];
    let mut truncated = false;
    let tail = nu.preperiod.len();
    let per = nu.period.len();
    loop {
        let s = *entries.last().unwrap() as usize;
        let window = tail.max(s) + lcm(per, s) + s;
        let next = (s + 1..=window).find(|&j| {
            let a = nu.at(j);
            let b = nu.at((j - 1) % s + 1);
            a != b
        });
        match next {
            None => break,
            Some(j) => {
                if entries.len() >= max_len {
                    truncated = true;
                    break;
                }
                entries.push(j as u64);
            }
        }
    }
    Ok(InternalAddress { entries, truncated })
}

fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

/// Two periodic angles whose parameter rays land together.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RayPair {
    pub minus: Angle,
    pub plus: Angle,
    pub period: u32,
}

impl RayPair {
    /// Checks ordering and equal exact periods; does not check landing.
    pub fn new(minus: Angle, plus: Angle) -> Result<Self> {
        if minus >= plus {
            return Err(Error::Precondition(format!("ray pair needs minus < plus, got ({minus}, {plus})")));
        }
        let pm = minus.period(2)?.ok_or_else(|| Error::NotPeriodic(minus.to_string()))?;
        let pp = plus.period(2)?.ok_or_else(|| Error::NotPeriodic(plus.to_string()))?;
        if pm != pp {
            return Err(Error::Precondition(format!(
                "ray pair angles have periods {pm} and {pp}"
            )));
        }
        Ok(RayPair {
            minus,
            plus,
            period: pm as u32,
        })
    }

    /// Builds a pair of possibly preperiodic angles, ordering them.
    /// `period` is then the shared cycle length of the angle orbits.
    pub fn unordered(a: Angle, b: Angle) -> Result<Self> {
        let (minus, plus) = if a < b { (a, b) } else { (b, a) };
        if minus == plus {
            return Err(Error::Precondition("ray pair needs two distinct angles".into()));
        }
        let period = minus.orbit(2)?.period as u32;
        Ok(RayPair { minus, plus, period })
    }

    pub fn contains(&self, theta: &Angle) -> bool {
        wake_contains(self, theta)
    }

    pub fn width(&self) -> Angle {
        self.plus.abs_diff(&self.minus)
    }

    /// True when `other` sits strictly inside this pair's wake.
    pub fn nests(&self, other: &RayPair) -> bool {
        self.minus <= other.minus && other.plus <= self.plus && self != other
    }
}

impl fmt::Display for RayPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.minus, self.plus, self.period)
    }
}

/// Strict wake membership; the pair's own angles are not inside.
pub fn wake_contains(pair: &RayPair, theta: &Angle) -> bool {
    pair.minus < *theta && *theta < pair.plus
}

/// Do chords `(a, b)` and `(c, d)` (each with distinct endpoints) cross?
pub fn chords_cross(a: &Angle, b: &Angle, c: &Angle, d: &Angle) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let inside = |x: &Angle| lo < x && x < hi;
    inside(c) != inside(d)
}

/// Exact test that `(a, b)` is a leaf of the quadratic minor lamination.
///
/// A chord of period `n` is a minor iff its wake has length at most 1/2,
/// no forward image is shorter, and no forward image crosses the chord or
/// either of the two major leaves over it.
pub fn is_minor_leaf(a: &Angle, b: &Angle) -> Result<bool> {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let Some(n) = lo.period(2)? else {
        return Ok(false);
    };
    if hi.period(2)? != Some(n) || n < 2 {
        return Ok(false);
    }
    let len = hi.abs_diff(lo);
    let half = Angle::frac(1, 2);
    if len > half {
        return Ok(false);
    }
    let chord_len = |x: &Angle, y: &Angle| x.circle_distance(y);
    // The two majors join preimages of the endpoints and have length (1 - len)/2.
    let pre_lo = [lo.half(), lo.half().antipode()];
    let pre_hi = [hi.half(), hi.half().antipode()];
    let target = Angle::new(
        len.denom().clone() - len.numer().clone(),
        len.denom().clone() * 2u32,
    )
    .expect("nonzero denominator");
    let mut majors = Vec::new();
    for x in &pre_lo {
        for y in &pre_hi {
            if chord_len(x, y) == target {
                majors.push((x.clone(), y.clone()));
            }
        }
    }
    let mut x = lo.clone();
    let mut y = hi.clone();
    for _ in 1..n {
        x = x.mul_int(2);
        y = y.mul_int(2);
        if chord_len(&x, &y) < len {
            return Ok(false);
        }
        if chords_cross(lo, hi, &x, &y) {
            return Ok(false);
        }
        if majors.iter().any(|(p, q)| chords_cross(p, q, &x, &y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Compact {
    minus: u32,
    plus: u32,
    period: u8,
}

pub(crate) fn denominator(period: u32) -> u64 {
    (1u64 << period) - 1
}

/// Exact period of `k / (2^n - 1)` under doubling.
pub(crate) fn exact_period_of_numerator(k: u64, n: u32) -> u32 {
    let d = denominator(n);
    (1..=n)
        .filter(|m| n.is_multiple_of(*m))
        .find(|&m| k.is_multiple_of(d / denominator(m)))
        .unwrap_or(n)
}

/// `floor(θ·(2^n - 1))` and `ceil(θ·(2^n - 1))`.
pub(crate) fn floor_ceil(theta: &Angle, period: u32) -> (u64, u64) {
    let scaled = theta.numer() * BigUint::from(denominator(period));
    let (q, r) = num_integer::Integer::div_rem(&scaled, theta.denom());
    let q = q.to_u64().expect("below 2^n");
    (q, if num_traits::Zero::is_zero(&r) { q } else { q + 1 })
}

/// Periodic pairs of every period `2..=max_period`.
#[derive(Debug, Clone)]
pub struct Lamination {
    max_period: u32,
    /// Sorted by `(period, minus)`.
    pairs: Vec<Compact>,
    /// `partners[n][k]` is the partner numerator of `k / (2^n - 1)`, or 0.
    partners: Vec<Vec<u32>>,
}

impl Lamination {
    pub fn max_period(&self) -> u32 {
        self.max_period
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn expand(c: &Compact) -> RayPair {
        let d = denominator(u32::from(c.period));
        RayPair {
            minus: Angle::frac(u64::from(c.minus), d),
            plus: Angle::frac(u64::from(c.plus), d),
            period: u32::from(c.period),
        }
    }

    /// All pairs with period at most `max_period`, sorted by `(period, minus)`.
    pub fn pairs_up_to(&self, max_period: u32) -> impl Iterator<Item = RayPair> + '_ {
        self.pairs
            .iter()
            .take_while(move |c| u32::from(c.period) <= max_period)
            .map(Self::expand)
    }

    pub fn pairs(&self) -> impl Iterator<Item = RayPair> + '_ {
        self.pairs_up_to(self.max_period)
    }

    pub fn pairs_of_period(&self, period: u32) -> impl Iterator<Item = RayPair> + '_ {
        let start = self.pairs.partition_point(|c| u32::from(c.period) < period);
        self.pairs[start..]
            .iter()
            .take_while(move |c| u32::from(c.period) == period)
            .map(Self::expand)
    }

    /// Partner of a periodic angle whose period is covered by this lamination.
    pub fn partner(&self, theta: &Angle) -> Result<Angle> {
        let n = theta
            .period(2)?
            .ok_or_else(|| Error::NotPeriodic(theta.to_string()))? as u32;
        if n == 1 {
            return Err(Error::LandsAlone(theta.to_string()));
        }
        if n > self.max_period {
            return Err(Error::ResourceBound {
                what: "period",
                requested: u64::from(n),
                limit: u64::from(self.max_period),
            });
        }
        let d = denominator(n);
        let k = (theta.numer() * BigUint::from(d) / theta.denom())
            .to_u64()
            .expect("numerator fits");
        let p = self.partners[n as usize][k as usize];
        Ok(Angle::frac(u64::from(p), d))
    }

    /// Pairs of the given period with `minus ≤ θ ≤ plus`, outermost first.
    pub fn pairs_around(&self, period: u32, theta: &Angle) -> Vec<RayPair> {
        if !(2..=self.max_period).contains(&period) {
            return Vec::new();
        }
        let (lo, hi) = floor_ceil(theta, period);
        let start = self.pairs.partition_point(|c| u32::from(c.period) < period);
        self.pairs[start..]
            .iter()
            .take_while(|c| u32::from(c.period) == period)
            .filter(|c| u64::from(c.minus) <= lo && u64::from(c.plus) >= hi)
            .map(Self::expand)
            .collect()
    }

    pub fn contains_pair(&self, pair: &RayPair) -> bool {
        pair.period <= self.max_period
            && pair.period >= 2
            && self.partner(&pair.minus).map(|p| p == pair.plus).unwrap_or(false)
    }

    /// One `p/q r/s period` line per pair, sorted by `(period, minus)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in self.pairs() {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Vec<RayPair>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                let bad = || Error::Parse {
                    what: "lamination line",
                    input: line.to_string(),
                };
                let mut it = line.split_whitespace();
                let minus: Angle = it.next().ok_or_else(bad)?.parse()?;
                let plus: Angle = it.next().ok_or_else(bad)?.parse()?;
                let period: u32 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let pair = RayPair::new(minus, plus)?;
                if pair.period != period || it.next().is_some() {
                    return Err(bad());
                }
                Ok(pair)
            })
            .collect()
    }
}

/// Builds the lamination of all periods `2..=max_period`, bounded by `limit`.
pub fn build_lamination(max_period: u32, limit: u32) -> Result<Lamination> {
    build_lamination_with(max_period, limit, Exec::Auto)
}

pub fn build_lamination_with(max_period: u32, limit: u32, exec: Exec) -> Result<Lamination> {
    let limit = limit.min(LAMINATION_PERIOD_CEILING);
    if !(2..=limit).contains(&max_period) {
        return Err(Error::ResourceBound {
            what: "lamination period",
            requested: u64::from(max_period),
            limit: u64::from(limit),
        });
    }
    // Endpoints of all chords so far, sorted by angle: (numerator, period, is_minus).
    let mut endpoints: Vec<(u32, u8, bool)> = Vec::new();
    let mut pairs = Vec::new();
    let mut partners = vec![Vec::new(), Vec::new()];

    let less = |a: (u32, u8), b: (u32, u8)| -> bool {
        u64::from(a.0) * denominator(u32::from(b.1)) < u64::from(b.0) * denominator(u32::from(a.1))
    };

    for n in 2..=max_period {
        let d = denominator(n);
        let flags = par::map_range(exec, d as usize, |k| k > 0 && exact_period_of_numerator(k as u64, n) == n);
        let fresh: Vec<u32> = (0..d as u32).filter(|&k| flags[k as usize]).collect();

        let mut new_pairs: Vec<Compact> = Vec::with_capacity(fresh.len() / 2);
        let mut stack: Vec<Option<u32>> = vec![None];
        let (mut i, mut j) = (0, 0);
        while i < endpoints.len() || j < fresh.len() {
            let take_old = j == fresh.len()
                || (i < endpoints.len()
                    && less((endpoints[i].0, endpoints[i].1), (fresh[j], n as u8)));
            if take_old {
                if endpoints[i].2 {
                    stack.push(None);
                } else {
                    let frame = stack.pop().expect("balanced chords");
                    debug_assert!(frame.is_none(), "odd face at period {n}");
                }
                i += 1;
            } else {
                let k = fresh[j];
                let top = stack.last_mut().expect("outer face");
                match top.take() {
                    Some(m) => new_pairs.push(Compact {
                        minus: m,
                        plus: k,
                        period: n as u8,
                    }),
                    None => *top = Some(k),
                }
                j += 1;
            }
        }
        if stack.len() != 1 || stack[0].is_some() {
            return Err(Error::Precondition(format!("unpaired angle left at period {n}")));
        }

        let mut partner = vec![0u32; d as usize];
        for p in &new_pairs {
            partner[p.minus as usize] = p.plus;
            partner[p.plus as usize] = p.minus;
        }
        partners.push(partner);

        let mut fresh_ends: Vec<(u32, u8, bool)> = new_pairs
            .iter()
            .flat_map(|p| [(p.minus, n as u8, true), (p.plus, n as u8, false)])
            .collect();
        fresh_ends.sort_unstable_by_key(|e| e.0);
        let mut merged = Vec::with_capacity(endpoints.len() + fresh_ends.len());
        let (mut a, mut b) = (0, 0);
        while a < endpoints.len() || b < fresh_ends.len() {
            if b == fresh_ends.len()
                || (a < endpoints.len()
                    && less((endpoints[a].0, endpoints[a].1), (fresh_ends[b].0, fresh_ends[b].1)))
            {
                merged.push(endpoints[a]);
                a += 1;
            } else {
                merged.push(fresh_ends[b]);
                b += 1;
            }
        }
        endpoints = merged;
        new_pairs.sort_unstable_by_key(|p| p.minus);
        pairs.extend(new_pairs);
    }

    Ok(Lamination {
        max_period,
        pairs,
        partners,
    })
}

static SHARED: OnceLock<Mutex<Option<Arc<Lamination>>>> = OnceLock::new();

/// Process-wide lamination covering at least `max_period`, built on demand.
pub fn shared_lamination(max_period: u32, limit: u32) -> Result<Arc<Lamination>> {
    let cell = SHARED.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().expect("lamination cache poisoned");
    if let Some(l) = guard.as_ref() {
        if l.max_period >= max_period {
            return Ok(Arc::clone(l));
        }
    }
    let built = Arc::new(build_lamination(max_period.max(2), limit)?);
    *guard = Some(Arc::clone(&built));
    Ok(built)
}

/// Partner angle of a periodic angle in the lamination of its own period.
pub fn conjugate_angle(theta: &Angle, limit: u32) -> Result<Angle> {
    let n = theta
        .period(2)?
        .ok_or_else(|| Error::NotPeriodic(theta.to_string()))? as u32;
    if n == 1 {
        return Err(Error::LandsAlone(theta.to_string()));
    }
    shared_lamination(n, limit)?.partner(theta)
}

/// The lamination pair through a periodic angle of period ≥ 2.
pub fn pair_of(theta: &Angle, limit: u32) -> Result<RayPair> {
    let other = conjugate_angle(theta, limit)?;
    RayPair::unordered(theta.clone(), other)
}
