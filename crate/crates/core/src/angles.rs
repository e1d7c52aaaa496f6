//! Exact rational angles on the circle `R/Z` and their base-`d` expansions.
//!
//! Angles are reduced fractions over arbitrary-precision integers. Periodic
//! angles of period `n` have denominators dividing `d^n - 1`, which outgrows
//! any fixed-width integer long before the periods of interest run out.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational point of the circle, `numerator / denominator` in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle {
    num: BigUint,
    den: BigUint,
}

impl Angle {
    /// Builds `p/q mod 1` in lowest terms.
    pub fn new(p: BigUint, q: BigUint) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Parse {
                what: "angle",
                input: format!("{p}/0"),
            });
        }
        let p = p % &q;
        let g = p.gcd(&q);
        if p.is_zero() {
            return Ok(Self::zero());
        }
        Ok(Angle {
            num: p / &g,
            den: q / g,
        })
    }

    /// Small-integer convenience constructor; panics on a zero denominator.
    pub fn frac(p: u64, q: u64) -> Self {
        Self::new(BigUint::from(p), BigUint::from(q)).expect("zero denominator")
    }

    pub fn zero() -> Self {
        Angle {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Addition mod 1.
    pub fn add(&self, other: &Angle) -> Angle {
        let num = &self.num * &other.den + &other.num * &self.den;
        let den = &self.den * &other.den;
        Angle::new(num, den).expect("nonzero denominator")
    }

    /// Multiplication by a non-negative integer, mod 1.
    pub fn mul_int(&self, k: u64) -> Angle {
        Angle::new(&self.num * BigUint::from(k), self.den.clone()).expect("nonzero denominator")
    }

    /// Half of the angle as a point of `[0, 1/2)`.
    pub fn half(&self) -> Angle {
        Angle::new(self.num.clone(), &self.den * 2u32).expect("nonzero denominator")
    }

    /// The antipode `θ + 1/2`.
    pub fn antipode(&self) -> Angle {
        self.add(&Angle::frac(1, 2))
    }

    /// `|self - other|` as an exact rational in `[0, 1)`, no wrap-around.
    pub fn abs_diff(&self, other: &Angle) -> Angle {
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let diff = if a >= b { a - b } else { b - a };
        Angle::new(diff, &self.den * &other.den).expect("nonzero denominator")
    }

    /// Counter-clockwise distance from `self` to `other`, in `[0, 1)`.
    pub fn ccw_distance_to(&self, other: &Angle) -> Angle {
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let den = &self.den * &other.den;
        let diff = if b >= a { b - a } else { &den + b - a };
        Angle::new(diff, den).expect("nonzero denominator")
    }

    /// Shorter arc length between the two angles, in `[0, 1/2]`.
    pub fn circle_distance(&self, other: &Angle) -> Angle {
        let a = self.ccw_distance_to(other);
        let b = other.ccw_distance_to(self);
        if a <= b {
            a
        } else {
            b
        }
    }

    /// Nearest double; exact for dyadic angles with short denominators.
    pub fn to_f64(&self) -> f64 {
        if let (Some(n), Some(d)) = (self.num.to_u64(), self.den.to_u64()) {
            if d < (1 << 53) {
                return n as f64 / d as f64;
            }
        }
        let shift = self.den.bits().saturating_sub(60);
        let n = (&self.num >> shift).to_f64().unwrap_or(0.0);
        let d = (&self.den >> shift).to_f64().unwrap_or(1.0);
        n / d
    }

    /// `d·θ mod 1`.
    pub fn multiply_map(&self, d: u32) -> Result<Angle> {
        check_degree(d)?;
        Ok(self.mul_int(u64::from(d)))
    }

    pub fn orbit(&self, d: u32) -> Result<Orbit> {
        orbit(self, d)
    }

    pub fn to_expansion(&self, d: u32) -> Result<Expansion> {
        to_expansion(self, d)
    }

    /// Period under `θ ↦ dθ`, or `None` when the angle is strictly preperiodic.
    pub fn period(&self, d: u32) -> Result<Option<usize>> {
        let o = orbit(self, d)?;
        Ok((o.preperiod == 0).then_some(o.period))
    }

    /// True when the denominator is a power of `d` (including `θ = 0`).
    pub fn is_d_adic(&self, d: u32) -> bool {
        let mut q = self.den.clone();
        let d = BigUint::from(d);
        while !q.is_one() {
            let (quot, rem) = q.div_rem(&d);
            if !rem.is_zero() {
                return false;
            }
            q = quot;
        }
        true
    }
}

pub(crate) fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDegree(d))
    } else {
        Ok(())
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Accepts only exact fractions `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "angle",
            input: s.to_string(),
        };
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: BigUint = p.trim().parse().map_err(|_| bad())?;
        let q: BigUint = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Angle::new(p, q)
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Forward orbit of a rational angle: `points[..preperiod]` are pre-cyclic,
/// the remaining `period` points form the cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub preperiod: usize,
    pub period: usize,
    pub points: Vec<Angle>,
}

impl Orbit {
    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

pub fn orbit(theta: &Angle, d: u32) -> Result<Orbit> {
    check_degree(d)?;
    let mut seen: HashMap<Angle, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut x = theta.clone();
    loop {
        if let Some(&first) = seen.get(&x) {
            return Ok(Orbit {
                preperiod: first,
                period: points.len() - first,
                points,
            });
        }
        seen.insert(x.clone(), points.len());
        let next = x.mul_int(u64::from(d));
        points.push(x);
        x = next;
    }
}

/// Eventually periodic digit word `preperiod · period^∞` in base `d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expansion {
    base: u32,
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl Expansion {
    /// Validates digits and returns the canonical form.
    pub fn new(base: u32, preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        check_degree(base)?;
        if base > 36 {
            return Err(Error::InvalidDegree(base));
        }
        if period.is_empty() {
            return Err(Error::Parse {
                what: "expansion",
                input: "empty period".into(),
            });
        }
        if let Some(&bad) = preperiod.iter().chain(&period).find(|&&x| u32::from(x) >= base) {
            return Err(Error::InvalidDigit {
                digit: u32::from(bad),
                base,
            });
        }
        let mut e = Expansion {
            base,
            preperiod,
            period,
        };
        e.canonicalize();
        Ok(e)
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

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Digit `i` (0-based) of the infinite word.
    pub fn digit(&self, i: usize) -> u8 {
        let l = self.preperiod.len();
        if i < l {
            self.preperiod[i]
        } else {
            self.period[(i - l) % self.period.len()]
        }
    }

    /// Drops the first digit; the expansion of `d·θ`.
    pub fn shift(&self) -> Expansion {
        let mut e = self.clone();
        if e.preperiod.is_empty() {
            e.period.rotate_left(1);
        } else {
            e.preperiod.remove(0);
        }
        e
    }

    pub fn to_angle(&self) -> Angle {
        from_expansion(self)
    }
}

fn digit_char(x: u8) -> char {
    char::from_digit(u32::from(x), 36).expect("digit below 36")
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.base)?;
        for &x in &self.preperiod {
            write!(f, "{}", digit_char(x))?;
        }
        write!(f, "|")?;
        for &x in &self.period {
            write!(f, "{}", digit_char(x))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Expansion {
    type Err = Error;

    /// Parses `base:preperiod|period`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "expansion",
            input: s.to_string(),
        };
        let (base, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let base: u32 = base.parse().map_err(|_| bad())?;
        let (pre, per) = rest.split_once('|').ok_or_else(bad)?;
        let digits = |w: &str| -> Result<Vec<u8>> {
            w.chars()
                .map(|c| c.to_digit(36).map(|x| x as u8).ok_or_else(bad))
                .collect()
        };
        Expansion::new(base, digits(pre)?, digits(per)?)
    }
}

impl Serialize for Expansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Long division; d-adic angles come out terminating-then-zeros.
pub fn to_expansion(theta: &Angle, d: u32) -> Result<Expansion> {
    check_degree(d)?;
    if let (Some(num), Some(den)) = (theta.num.to_u64(), theta.den.to_u64()) {
        if den <= u64::from(u32::MAX) {
            return small_expansion(num, den, d);
        }
    }
    let base = BigUint::from(d);
    let mut seen: HashMap<BigUint, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut r = theta.num.clone();
    loop {
        if let Some(&i) = seen.get(&r) {
            let period = digits.split_off(i);
            return Expansion::new(d, digits, period);
        }
        seen.insert(r.clone(), digits.len());
        let (q, rem) = (&r * &base).div_rem(&theta.den);
        digits.push(q.to_u8().expect("digit below base"));
        r = rem;
    }
}

fn small_expansion(num: u64, den: u64, d: u32) -> Result<Expansion> {
    let d = u64::from(d);
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut r = num;
    loop {
        if let Some(&i) = seen.get(&r) {
            let period = digits.split_off(i);
            return Expansion::new(d as u32, digits, period);
        }
        seen.insert(r, digits.len());
        digits.push((r * d / den) as u8);
        r = r * d % den;
    }
}

/// Both expansions of a d-adic angle, or the single canonical one otherwise.
pub fn dual_expansions(theta: &Angle, d: u32) -> Result<Vec<Expansion>> {
    let canonical = to_expansion(theta, d)?;
    if canonical.period != [0] {
        return Ok(vec![canonical]);
    }
    let top = (d - 1) as u8;
    let mut pre = canonical.preperiod.clone();
    if let Some(last) = pre.last_mut() {
        *last -= 1;
    }
    let other = Expansion::new(d, pre, vec![top])?;
    Ok(vec![canonical, other])
}

/// Exact value of an expansion, reduced mod 1.
pub fn from_expansion(e: &Expansion) -> Angle {
    let d = BigUint::from(e.base);
    let value = |w: &[u8]| {
        w.iter()
            .fold(BigUint::zero(), |acc, &x| acc * &d + BigUint::from(x))
    };
    let pre = value(&e.preperiod);
    let per = value(&e.period);
    let cycle = num_traits::pow(d.clone(), e.period.len()) - 1u32;
    let scale = num_traits::pow(d, e.preperiod.len());
    Angle::new(pre * &cycle + per, scale * cycle).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(p: u64, q: u64) -> Angle {
        Angle::frac(p, q)
    }

    fn ex(s: &str) -> Expansion {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_map_examples() {
        assert_eq!(a(1, 3).multiply_map(2).unwrap(), a(2, 3));
        assert_eq!(Angle::zero().multiply_map(2).unwrap(), Angle::zero());
        assert_eq!(a(4, 7).multiply_map(2).unwrap(), a(1, 7));
        assert_eq!(a(1, 3).multiply_map(1), Err(Error::InvalidDegree(1)));
    }

    #[test]
    fn orbit_examples() {
        let o = a(1, 7).orbit(2).unwrap();
        assert_eq!((o.preperiod, o.period), (0, 3));
        assert_eq!(o.points, vec![a(1, 7), a(2, 7), a(4, 7)]);
        let o = a(1, 6).orbit(2).unwrap();
        assert_eq!((o.preperiod, o.period), (1, 2));
        assert_eq!(o.points, vec![a(1, 6), a(1, 3), a(2, 3)]);
        let o = Angle::zero().orbit(2).unwrap();
        assert_eq!((o.preperiod, o.period, o.points.len()), (0, 1, 1));
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(a(1, 7).to_expansion(2).unwrap(), ex("2:|001"));
        assert_eq!(a(5, 12).to_expansion(2).unwrap(), ex("2:01|10"));
        assert_eq!(a(2, 3).to_expansion(2).unwrap(), ex("2:|10"));
        assert_eq!(from_expansion(&ex("2:|10")), a(2, 3));
        assert_eq!(from_expansion(&ex("2:01|10")), a(5, 12));
        assert_eq!(from_expansion(&ex("2:|0")), Angle::zero());
        assert_eq!(from_expansion(&ex("2:|1")), Angle::zero());
    }

    #[test]
    fn canonical_form_rolls_back_preperiod() {
        assert_eq!(ex("2:1|0101"), ex("2:|10"));
        assert_eq!(ex("2:110|10").to_string(), "2:1|10");
    }

    #[test]
    fn invalid_digit_rejected() {
        assert_eq!(
            Expansion::new(2, vec![], vec![2]),
            Err(Error::InvalidDigit { digit: 2, base: 2 })
        );
        assert!("3:1|".parse::<Expansion>().is_err());
    }

    #[test]
    fn dual_expansion_examples() {
        assert_eq!(
            dual_expansions(&a(1, 2), 2).unwrap(),
            vec![ex("2:1|0"), ex("2:0|1")]
        );
        assert_eq!(dual_expansions(&a(1, 3), 2).unwrap(), vec![ex("2:|01")]);
        assert_eq!(
            dual_expansions(&a(1, 4), 2).unwrap(),
            vec![ex("2:01|0"), ex("2:00|1")]
        );
        assert_eq!(
            dual_expansions(&Angle::zero(), 3).unwrap(),
            vec![ex("3:|0"), ex("3:|2")]
        );
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("6/8".parse::<Angle>().unwrap().to_string(), "3/4");
        assert_eq!("0/5".parse::<Angle>().unwrap().to_string(), "0/1");
        assert!("0.5".parse::<Angle>().is_err());
        assert!("1/0".parse::<Angle>().is_err());
        assert_eq!("7/7".parse::<Angle>().unwrap(), Angle::zero());
    }

    #[test]
    fn ordering_and_distances() {
        assert!(a(1, 3) < a(5, 12));
        assert_eq!(a(5, 6).ccw_distance_to(&a(1, 6)), a(1, 3));
        assert_eq!(a(1, 6).abs_diff(&a(5, 6)), a(2, 3));
        assert!(a(3, 8).is_d_adic(2) && !a(1, 3).is_d_adic(2));
    }

    #[test]
    fn huge_denominators_convert_to_f64() {
        let den = num_traits::pow(BigUint::from(2u32), 200) - 1u32;
        let t = Angle::new(den.clone() / 3u32, den).unwrap();
        assert!((t.to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
