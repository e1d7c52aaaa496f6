//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use multibrot_core::Angle;

/// Periodic numerators of exact period `n` over `2^n - 1`, by brute orbit.
pub fn exact_period(n: u32) -> Vec<u64> {
    let d = (1u64 << n) - 1;
    (1..d)
        .filter(|&k| {
            let mut x = k;
            for m in 1..=n {
                x = (2 * x) % d;
                if x == k {
                    return m == n;
                }
            }
            false
        })
        .collect()
}

/// Rational chord length on the circle with denominator `d`.
pub fn len(x: u64, y: u64, d: u64) -> u64 {
    let t = x.abs_diff(y);
    t.min(d - t)
}

pub fn crosses(a: u64, b: u64, c: u64, e: u64) -> bool {
    if a == c || a == e || b == c || b == e {
        return false;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    (lo < c && c < hi) != (lo < e && e < hi)
}

/// Admissibility in integer arithmetic over `2(2^n - 1)`.
pub fn admissible(a: u64, b: u64, n: u32) -> bool {
    let d = (1u64 << n) - 1;
    let big = 2 * d;
    let (a2, b2) = (2 * a, 2 * b);
    let l = b2 - a2;
    if l > d {
        return false;
    }
    let majors: Vec<(u64, u64)> = [a, a + d]
        .iter()
        .flat_map(|&x| [b, b + d].map(move |y| (x, y)))
        .filter(|&(x, y)| len(x, y, big) == d - l / 2)
        .collect();
    let (mut x, mut y) = (a, b);
    for _ in 1..n {
        x = 2 * x % d;
        y = 2 * y % d;
        if len(2 * x, 2 * y, big) < l
            || crosses(a2, b2, 2 * x, 2 * y)
            || majors.iter().any(|&(p, q)| crosses(p, q, 2 * x, 2 * y))
        {
            return false;
        }
    }
    true
}

/// Enumerates every non-crossing perfect matching of `pts` (and earlier chords)
/// made of admissible chords; stops after two.
pub fn matchings(pts: &[u64], fixed: &[(u64, u64, u64)], n: u32, out: &mut Vec<Vec<(u64, u64)>>) {
    fn go(
        rest: &mut Vec<u64>,
        cur: &mut Vec<(u64, u64)>,
        fixed: &[(u64, u64, u64)],
        n: u32,
        out: &mut Vec<Vec<(u64, u64)>>,
    ) {
        if out.len() > 1 {
            return;
        }
        let Some(&first) = rest.first() else {
            out.push(cur.clone());
            return;
        };
        let d = (1u64 << n) - 1;
        for i in 1..rest.len() {
            let other = rest[i];
            let ok = admissible(first, other, n)
                && cur.iter().all(|&(p, q)| !crosses(p, q, first, other))
                && fixed.iter().all(|&(p, q, dd)| {
                    // Compare over the common denominator d * dd.
                    !crosses(p * d, q * d, first * dd, other * dd)
                });
            if ok {
                let removed = rest.remove(i);
                rest.remove(0);
                cur.push((first, other));
                go(rest, cur, fixed, n, out);
                cur.pop();
                rest.insert(0, first);
                rest.insert(i, removed);
            }
        }
    }
    go(&mut pts.to_vec(), &mut Vec::new(), fixed, n, out);
}

/// Pairs of each period `2..=max` as "p/q r/s n" lines, sorted, from the
/// unique admissible non-crossing perfect matching; `Err` if not unique.
pub fn oracle_lamination(max: u32) -> Result<Vec<Vec<String>>, String> {
    let mut fixed: Vec<(u64, u64, u64)> = Vec::new();
    let mut out = Vec::new();
    for n in 2..=max {
        let d = (1u64 << n) - 1;
        let mut found = Vec::new();
        matchings(&exact_period(n), &fixed, n, &mut found);
        if found.len() != 1 {
            return Err(format!("period {n}: {} admissible matchings", found.len()));
        }
        let mut lines: Vec<String> = found[0]
            .iter()
            .map(|&(a, b)| format!("{} {} {n}", Angle::frac(a, d), Angle::frac(b, d)))
            .collect();
        lines.sort();
        out.push(lines);
        fixed.extend(found[0].iter().map(|&(a, b)| (a, b, d)));
    }
    Ok(out)
}
