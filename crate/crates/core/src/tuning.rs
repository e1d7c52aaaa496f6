//! Tuning on external angles by binary-word substitution, and its inverse.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::angles::{dual_expansions, to_expansion, Angle, Expansion};
use crate::combinatorics::{conjugate_angle, RayPair};
use crate::config::Config;
use crate::error::{Error, Result};

/// A hyperbolic component of the quadratic family, named by its root pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSignature {
    pub period: u32,
    pub root_pair: Option<RayPair>,
    /// Period words of the root angles, `(w⁻, w⁺)`; empty for period 1.
    #[serde(skip)]
    pub words: (Vec<u8>, Vec<u8>),
}

impl ComponentSignature {
    /// The main cardioid; tuning by it is the identity.
    pub fn identity() -> Self {
        ComponentSignature {
            period: 1,
            root_pair: None,
            words: (Vec::new(), Vec::new()),
        }
    }

    /// Component whose root pair contains `minus`; the partner comes from the lamination.
    pub fn from_root(minus: &Angle, lamination_limit: u32) -> Result<Self> {
        let plus = conjugate_angle(minus, lamination_limit)?;
        Self::from_pair(RayPair::unordered(minus.clone(), plus)?)
    }

    /// Trusts that `pair` is a lamination pair; checks only its shape.
    pub fn from_pair(pair: RayPair) -> Result<Self> {
        let lo = to_expansion(&pair.minus, 2)?;
        let hi = to_expansion(&pair.plus, 2)?;
        let n = pair.period as usize;
        if !lo.preperiod().is_empty() || !hi.preperiod().is_empty() || lo.period().len() != n || hi.period().len() != n {
            return Err(Error::Precondition(format!("{} {} is not a periodic root pair", pair.minus, pair.plus)));
        }
        Ok(ComponentSignature {
            period: pair.period,
            words: (lo.period().to_vec(), hi.period().to_vec()),
            root_pair: Some(pair),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.period == 1
    }
}

impl fmt::Display for ComponentSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.root_pair {
            Some(p) => write!(f, "{}:{}", self.period, p.minus),
            None => write!(f, "1:0/1"),
        }
    }
}

impl FromStr for ComponentSignature {
    type Err = Error;

    /// `n:p/q`, with `p/q` the lower root angle; `1:0/1` (or `1`) is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "component signature",
            input: s.to_string(),
        };
        let (n, theta) = match s.trim().split_once(':') {
            Some((n, t)) => (n, Some(t)),
            None => (s.trim(), None),
        };
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        if n == 1 {
            return match theta.map(str::parse::<Angle>).transpose()? {
                None => Ok(Self::identity()),
                Some(t) if t.is_zero() => Ok(Self::identity()),
                Some(_) => Err(bad()),
            };
        }
        let theta: Angle = theta.ok_or_else(bad)?.parse()?;
        if theta.period(2)? != Some(n as usize) {
            return Err(Error::Precondition(format!("{theta} does not have period {n}")));
        }
        let comp = Self::from_root(&theta, Config::default().max_lamination_period.max(n))?;
        if comp.root_pair.as_ref().map(|p| &p.minus) != Some(&theta) {
            return Err(Error::Precondition(format!("{theta} is the upper root angle; give the lower one")));
        }
        Ok(comp)
    }
}

fn substitute(comp: &ComponentSignature, e: &Expansion) -> Expansion {
    let word = |x: &u8| if *x == 0 { &comp.words.0 } else { &comp.words.1 };
    let pre = e.preperiod().iter().flat_map(word).copied().collect();
    let per = e.period().iter().flat_map(word).copied().collect();
    Expansion::new(2, pre, per).expect("binary words")
}

/// Images of `θ` under the tuning map of `comp`: one angle, or two for dyadic `θ ≠ 0`.
///
/// `θ = 0` has the root as image; only the lower root angle is returned.
pub fn tune(comp: &ComponentSignature, theta: &Angle) -> Vec<Angle> {
    if comp.is_identity() {
        return vec![theta.clone()];
    }
    if theta.is_zero() {
        return vec![comp.root_pair.as_ref().expect("period ≥ 2").minus.clone()];
    }
    let mut out: Vec<Angle> = dual_expansions(theta, 2)
        .expect("degree 2")
        .iter()
        .map(|e| substitute(comp, e).to_angle())
        .collect();
    out.sort();
    out
}

/// Inverse of [`tune`] on the tuned angle set.
pub fn untune(comp: &ComponentSignature, theta: &Angle) -> Result<Angle> {
    if comp.is_identity() {
        return Ok(theta.clone());
    }
    for e in dual_expansions(theta, 2)? {
        if let Some(decoded) = decode(comp, &e) {
            return Ok(decoded.to_angle());
        }
    }
    Err(Error::NotInCopy(theta.to_string()))
}

/// Reads `e` as `w⁻`/`w⁺` blocks from position 0.
fn decode(comp: &ComponentSignature, e: &Expansion) -> Option<Expansion> {
    let n = comp.period as usize;
    let l = e.preperiod().len();
    let p = e.period().len();
    // Past block `head`, blocks repeat with period lcm(n, p) / n.
    let head = l.div_ceil(n);
    let cycle = num_integer::lcm(n, p) / n;
    let block = |b: usize| -> Option<u8> {
        let digits: Vec<u8> = (b * n..(b + 1) * n).map(|i| e.digit(i)).collect();
        if digits == comp.words.0 {
            Some(0)
        } else if digits == comp.words.1 {
            Some(1)
        } else {
            None
        }
    };
    let pre = (0..head).map(block).collect::<Option<Vec<u8>>>()?;
    let per = (head..head + cycle).map(block).collect::<Option<Vec<u8>>>()?;
    Some(Expansion::new(2, pre, per).expect("binary digits"))
}

/// Tuned images of all dyadic `a/2^k`, `k ≤ max_n`, as ray pairs ordered by `k` then `a`.
pub fn decoration_angles(comp: &ComponentSignature, max_n: u32) -> Result<Vec<RayPair>> {
    if comp.is_identity() {
        return Err(Error::Precondition("decorations need a component of period ≥ 2".into()));
    }
    let mut out = Vec::new();
    for k in 1..=max_n.min(62) {
        let q = 1u64 << k;
        for a in (1..q).step_by(2) {
            let images = tune(comp, &Angle::frac(a, q));
            let [lo, hi]: [Angle; 2] = images.try_into().expect("dyadic angles have two images");
            out.push(RayPair::unordered(lo, hi)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "pair", rename_all = "snake_case")]
pub enum Location {
    InsideCopy,
    InDecoration(RayPair),
    OutsideWake,
    Undecided,
}

/// Where `θ` sits relative to the little copy of `comp`, looking `depth` dyadic levels deep.
pub fn locate(comp: &ComponentSignature, theta: &Angle, depth: u32) -> Location {
    if let Some(root) = &comp.root_pair {
        if !root.contains(theta) {
            return Location::OutsideWake;
        }
        let decorations = decoration_angles(comp, depth).expect("period ≥ 2");
        if let Some(p) = decorations.into_iter().find(|p| p.contains(theta)) {
            return Location::InDecoration(p);
        }
    }
    match untune(comp, theta) {
        Ok(_) => Location::InsideCopy,
        Err(_) => Location::Undecided,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(p: u64, q: u64) -> Angle {
        Angle::frac(p, q)
    }

    fn basilica() -> ComponentSignature {
        "2:1/3".parse().unwrap()
    }

    #[test]
    fn signature_parsing() {
        let b = basilica();
        assert_eq!(b.words, (vec![0, 1], vec![1, 0]));
        assert_eq!(b.root_pair.unwrap().plus, a(2, 3));
        assert!("1:0/1".parse::<ComponentSignature>().unwrap().is_identity());
        assert!("3:2/7".parse::<ComponentSignature>().is_err());
        assert!("3:1/3".parse::<ComponentSignature>().is_err());
        assert!("x".parse::<ComponentSignature>().is_err());
    }

    #[test]
    fn tune_examples() {
        let b = basilica();
        assert_eq!(tune(&b, &Angle::zero()), vec![a(1, 3)]);
        assert_eq!(tune(&b, &a(1, 2)), vec![a(5, 12), a(7, 12)]);
        assert_eq!(tune(&b, &a(1, 3)), vec![a(2, 5)]);
        assert_eq!(tune(&ComponentSignature::identity(), &a(1, 5)), vec![a(1, 5)]);
    }

    #[test]
    fn untune_examples() {
        let b = basilica();
        assert_eq!(untune(&b, &a(2, 5)).unwrap(), a(1, 3));
        assert_eq!(untune(&b, &a(5, 12)).unwrap(), a(1, 2));
        assert_eq!(untune(&b, &a(7, 12)).unwrap(), a(1, 2));
        assert!(matches!(untune(&b, &a(1, 7)), Err(Error::NotInCopy(_))));
    }

    #[test]
    fn decoration_examples() {
        let b = basilica();
        assert_eq!(
            decoration_angles(&b, 1).unwrap(),
            vec![RayPair::unordered(a(5, 12), a(7, 12)).unwrap()]
        );
        let two = decoration_angles(&b, 2).unwrap();
        assert_eq!(two.len(), 3);
        assert_eq!(two[1].minus, tune(&b, &a(1, 4))[0]);
        assert!(decoration_angles(&b, 0).unwrap().is_empty());
    }

    #[test]
    fn locate_examples() {
        let b = basilica();
        assert_eq!(locate(&b, &a(1, 7), 4), Location::OutsideWake);
        assert_eq!(locate(&b, &a(2, 5), 4), Location::InsideCopy);
        assert_eq!(
            locate(&b, &a(9, 20), 4),
            Location::InDecoration(RayPair::unordered(a(5, 12), a(7, 12)).unwrap())
        );
    }
}
