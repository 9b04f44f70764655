//! Independent brute-force oracles shared by the integration tests.
//!
//! Nothing here calls into the solver, the simplex or the set kernel; the
//! arithmetic is plain machine integers over a common denominator.

#![allow(dead_code)]

use std::collections::HashSet;

pub fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm_upto(n: u64) -> u128 {
    (1..=n as u128).fold(1, |acc, x| acc / gcd(acc, x) * x)
}

/// Bounded `N₁({1})` membership for `a = p/q`: some multiset of at most
/// `max_terms` terms `(m − 1 + k·a)/m` with `m ≤ max_m`, `k ≤ max_k`,
/// each in `(0, 1]`, sums to `target` with at least one `k ≥ 1`.
///
/// Values are scaled by `D = q·lcm(1..=max_m)`; sums of two terms are
/// matched against each other (meet in the middle), so `max_terms ≤ 4`.
pub fn n1_bounded(p: u64, q: u64, target: u64, max_terms: usize, max_m: u64, max_k: u64) -> bool {
    assert!(max_terms <= 4);
    let l = lcm_upto(max_m);
    let d = q as u128 * l;
    let full = d * target as u128;
    // (value, involves a)
    let mut values: Vec<(u128, bool)> = vec![(0, false)];
    for m in 1..=max_m {
        for k in 0..=max_k {
            // D·(m − 1 + k·p/q)/m = (l/m)·(q(m − 1) + k·p)
            let num = q as u128 * (m as u128 - 1) + k as u128 * p as u128;
            let v = (l / m as u128) * num;
            if v == 0 || v > d {
                continue;
            }
            values.push((v, k > 0));
        }
    }
    values.sort();
    values.dedup();
    // half sums with flags: bit 1 = some split uses a, bit 2 = some split avoids it
    let half = if max_terms >= 2 { 2 } else { 1 };
    let mut sums: Vec<(u128, u8)> = Vec::new();
    for i in 0..values.len() {
        if half == 1 {
            sums.push((values[i].0, if values[i].1 { 1 } else { 2 }));
            continue;
        }
        for j in i..values.len() {
            let s = values[i].0 + values[j].0;
            if s > full {
                break;
            }
            let flag = if values[i].1 || values[j].1 { 1 } else { 2 };
            sums.push((s, flag));
        }
    }
    sums.sort();
    let mut merged: Vec<(u128, u8)> = Vec::new();
    for (s, f) in sums {
        match merged.last_mut() {
            Some(last) if last.0 == s => last.1 |= f,
            _ => merged.push((s, f)),
        }
    }
    let lookup = |s: u128| {
        merged
            .binary_search_by_key(&s, |x| x.0)
            .ok()
            .map(|i| merged[i].1)
    };
    let other_half = max_terms - half;
    for &(s, f) in &merged {
        if s > full {
            break;
        }
        let rest = full - s;
        let g = if other_half == 0 {
            if rest == 0 {
                Some(2u8)
            } else {
                None
            }
        } else if other_half == 1 {
            values.binary_search_by_key(&rest, |x| x.0).ok().map(|_| {
                let mut g = 0;
                for v in values.iter().filter(|v| v.0 == rest) {
                    g |= if v.1 { 1 } else { 2 };
                }
                g
            })
        } else {
            lookup(rest)
        };
        if let Some(g) = g {
            if f & 1 != 0 || g & 1 != 0 {
                return true;
            }
        }
    }
    false
}

/// Distinct reduced fractions `n/d` in `(0, 1]` with `d ≤ max_den`.
pub fn fractions_upto(max_den: u64) -> Vec<(u64, u64)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for d in 1..=max_den {
        for n in 1..=d {
            let g = gcd(n as u128, d as u128) as u64;
            if seen.insert((n / g, d / g)) {
                out.push((n / g, d / g));
            }
        }
    }
    out
}
