//! Coefficient calculus under adjunction.
//!
//! For a finite coefficient set `I ⊂ (0, 1]` this module computes `I₊` (sums
//! of elements of `I` below one), the set `D(I)` of values
//! `(m − 1 + f)/m` with `f ∈ I₊`, its closure identities, the pullback
//! coefficient of a blown-up point, and the partial order on finite
//! coefficient sequences.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational;
use crate::ratset::{Interval, MonotoneSequence, ThresholdSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdjunctionError {
    #[error("coefficient {0} is not in (0, 1]")]
    NotACoefficient(Rational),
    #[error("{0}")]
    Domain(String),
    #[error("cannot compare sequences of different variants")]
    VariantMismatch,
}

/// A finite coefficient set `I ⊂ (0, 1]`.
///
/// `I₊` contains the empty sum `0` unless the set was built with
/// [`CoefficientSet::literal`]; without it `D({1})` would be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSet {
    elements: Vec<Rational>,
    empty_sum: bool,
    plus: Vec<Rational>,
}

/// `a = (m − 1 + f)/m` with `f ∈ I₊`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DWitness {
    pub m: u64,
    pub f: Rational,
}

impl DWitness {
    pub fn value(&self) -> Rational {
        (Rational::integer(self.m as i64 - 1) + &self.f) / Rational::integer(self.m as i64)
    }
}

impl CoefficientSet {
    pub fn new(elements: impl IntoIterator<Item = Rational>) -> Result<Self, AdjunctionError> {
        Self::build(elements, true)
    }

    /// `I₊` taken literally: only non-empty sums.
    pub fn literal(elements: impl IntoIterator<Item = Rational>) -> Result<Self, AdjunctionError> {
        Self::build(elements, false)
    }

    fn build(
        elements: impl IntoIterator<Item = Rational>,
        empty_sum: bool,
    ) -> Result<Self, AdjunctionError> {
        let mut set = BTreeSet::new();
        for x in elements {
            if !x.is_positive() || x > Rational::one() {
                return Err(AdjunctionError::NotACoefficient(x));
            }
            set.insert(x);
        }
        let elements: Vec<Rational> = set.into_iter().collect();
        let plus = sums_below_one(&elements, empty_sum);
        Ok(CoefficientSet {
            elements,
            empty_sum,
            plus,
        })
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn contains_one(&self) -> bool {
        self.elements.last().is_some_and(Rational::is_one)
    }

    pub fn includes_empty_sum(&self) -> bool {
        self.empty_sum
    }

    /// `I₊`, ascending.
    pub fn plus(&self) -> &[Rational] {
        &self.plus
    }

    pub fn plus_contains(&self, f: &Rational) -> bool {
        self.plus.binary_search(f).is_ok()
    }

    /// Smallest positive element of `I₊`, if any.
    pub fn min_positive_plus(&self) -> Option<&Rational> {
        self.plus.iter().find(|f| f.is_positive())
    }

    pub fn i_plus(&self) -> ThresholdSet {
        ThresholdSet::from_points(Interval::closed_unit(), self.plus.clone())
            .expect("sums below one lie in [0, 1]")
    }

    /// Membership in `D(I)` with the witness of smallest `m`.
    ///
    /// `a = (m − 1 + f)/m` forces `m = (1 − f)/(1 − a)`, so each `f ∈ I₊`
    /// yields at most one candidate `m`.
    pub fn d_contains(&self, a: &Rational) -> Result<Option<DWitness>, AdjunctionError> {
        if a > &Rational::one() {
            return Err(AdjunctionError::Domain(format!(
                "{a} > 1 cannot lie in D(I)"
            )));
        }
        if a.is_one() {
            // would need f = 1, which is never a sum below one
            return Ok(None);
        }
        let gap = Rational::one() - a;
        let best = self
            .plus
            .iter()
            .filter_map(|f| {
                let m = (Rational::one() - f) / &gap;
                (m.is_integer() && m.is_positive()).then(|| (m.to_i64(), f))
            })
            .filter_map(|(m, f)| m.map(|m| (m as u64, f.clone())))
            .min_by_key(|(m, _)| *m);
        Ok(best.map(|(m, f)| DWitness { m, f }))
    }

    /// `D(I)` as one increasing family `m ↦ (m − 1 + f)/m, m ≥ 1` per `f ∈ I₊`.
    pub fn d_set(&self) -> ThresholdSet {
        let sequences = self
            .plus
            .iter()
            .map(|f| {
                MonotoneSequence::from_rationals(
                    &Rational::one(),
                    &(f - &Rational::one()),
                    &Rational::one(),
                    &Rational::zero(),
                    BigInt::from(1),
                )
                .expect("(m − 1 + f)/m is strictly increasing for f < 1")
            })
            .collect();
        ThresholdSet::new(Interval::closed_unit(), Vec::new(), sequences)
            .expect("D(I) lies in [0, 1]")
    }

    /// `D(I) ∪ {1}`, for callers that need `I ⊆ D(I)` when `1 ∈ I`.
    pub fn d_set_closed(&self) -> ThresholdSet {
        let one = ThresholdSet::from_points(Interval::closed_unit(), vec![Rational::one()])
            .expect("1 ∈ [0, 1]");
        self.d_set().union(&one)
    }

    /// Positive elements of `D(I)` with `m ≤ max_m`, ascending.
    pub fn d_elements_up_to(&self, max_m: u64) -> Vec<Rational> {
        let mut out = BTreeSet::new();
        for m in 1..=max_m {
            let w = DWitness {
                m,
                f: Rational::zero(),
            };
            for f in &self.plus {
                let x = DWitness {
                    f: f.clone(),
                    ..w.clone()
                }
                .value();
                if x.is_positive() {
                    out.insert(x);
                }
            }
        }
        out.into_iter().collect()
    }
}

fn sums_below_one(elements: &[Rational], empty_sum: bool) -> Vec<Rational> {
    let one = Rational::one();
    let mut seen: BTreeSet<Rational> = BTreeSet::new();
    let mut frontier = vec![Rational::zero()];
    while let Some(s) = frontier.pop() {
        for x in elements {
            let t = &s + x;
            if t < one && seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    if empty_sum {
        seen.insert(Rational::zero());
    }
    seen.into_iter().collect()
}

/// `I₊` of a finite set as a threshold set.
pub fn i_plus(
    elements: impl IntoIterator<Item = Rational>,
    include_empty_sum: bool,
) -> Result<ThresholdSet, AdjunctionError> {
    let set = if include_empty_sum {
        CoefficientSet::new(elements)?
    } else {
        CoefficientSet::literal(elements)?
    };
    Ok(set.i_plus())
}

/// `(m − 1)/m + ((n − 1 + f)/n)/m = (mn − 1 + f)/(mn)`: returns `(mn, f)`
/// after checking the identity exactly.
pub fn d_compose(m: u64, n: u64, f: &Rational) -> Result<(u64, Rational), AdjunctionError> {
    if m == 0 || n == 0 {
        return Err(AdjunctionError::Domain("m and n must be positive".into()));
    }
    if f.is_negative() || f >= &Rational::one() {
        return Err(AdjunctionError::Domain(format!("f = {f} is not in [0, 1)")));
    }
    let r = m
        .checked_mul(n)
        .ok_or_else(|| AdjunctionError::Domain("m·n overflows".into()))?;
    let (mq, nq, rq) = (
        Rational::integer(m as i64),
        Rational::integer(n as i64),
        Rational::integer(r as i64),
    );
    let inner = (&nq - &Rational::one() + f) / &nq;
    let lhs = (&mq - &Rational::one()) / &mq + inner / &mq;
    let rhs = (&rq - &Rational::one() + f) / &rq;
    assert_eq!(
        lhs, rhs,
        "composition identity failed for m={m}, n={n}, f={f}"
    );
    Ok((r, f.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma44Bounds {
    /// Minimum number of checks per identity.
    pub samples: usize,
    pub max_summands: usize,
    /// Starting bound on `m` for sampled elements of `D(I)`; grown when it
    /// yields fewer than `samples` checks.
    pub max_m: u64,
}

impl Default for Lemma44Bounds {
    fn default() -> Self {
        Lemma44Bounds {
            samples: 200,
            max_summands: 4,
            max_m: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lemma44Counterexample {
    SumOutsideD {
        summands: Vec<Rational>,
        sum: Rational,
    },
    ElementNotASum {
        element: Rational,
    },
    CompositionOutsideD {
        m: u64,
        g: Rational,
        value: Rational,
    },
    CompositionMismatch {
        m: u64,
        g: Rational,
        value: Rational,
        via: u64,
    },
    ElementOutsideDD {
        element: Rational,
        m: u64,
        f: Rational,
    },
    DccMismatch {
        set_dcc: bool,
        d_dcc: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma44Report {
    pub set: Vec<Rational>,
    /// `1` was adjoined to `I`; this leaves `I₊` and `D(I)` unchanged.
    pub adjoined_one: bool,
    pub bounds: Lemma44Bounds,
    /// `D(I)₊ ⊆ D(I)`: sums of at most `max_summands` elements below one.
    pub sums_checked: usize,
    pub sums_max_m: u64,
    /// `D(I) ⊆ D(I)₊`: elements checked as one-term sums.
    pub elements_checked: usize,
    /// `D(D(I)) ⊆ D(I)`: pairs `(m, g)` checked.
    pub compositions_checked: usize,
    /// `D(I) ⊆ D(D(I))`.
    pub inverse_compositions_checked: usize,
    pub set_dcc: bool,
    pub d_dcc: bool,
    pub counterexamples: Vec<Lemma44Counterexample>,
}

impl Lemma44Report {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks `D(I)₊ = D(I)`, `D(D(I)) = D(I)` and the DCC equivalence on
/// finite samples.
pub fn verify_lemma44(
    set: &CoefficientSet,
    bounds: &Lemma44Bounds,
) -> Result<Lemma44Report, AdjunctionError> {
    if bounds.max_summands == 0 || bounds.max_m == 0 {
        return Err(AdjunctionError::Domain("bounds must be positive".into()));
    }
    let adjoined_one = !set.contains_one();
    let set = if adjoined_one {
        let mut elems = set.elements().to_vec();
        elems.push(Rational::one());
        if set.includes_empty_sum() {
            CoefficientSet::new(elems)?
        } else {
            CoefficientSet::literal(elems)?
        }
    } else {
        set.clone()
    };
    let one = Rational::one();
    let mut counterexamples = Vec::new();
    let growth_cap = bounds.max_m.saturating_mul(64);

    // (1) sums of elements below one stay in D(I)
    let mut max_m = bounds.max_m;
    let mut sums = sample_sums(&set.d_elements_up_to(max_m), bounds.max_summands);
    while sums.len() < bounds.samples && max_m < growth_cap {
        max_m *= 2;
        sums = sample_sums(&set.d_elements_up_to(max_m), bounds.max_summands);
    }
    let sums_max_m = max_m;
    for summands in &sums {
        let sum: Rational = summands.iter().sum();
        if set.d_contains(&sum)?.is_none() {
            counterexamples.push(Lemma44Counterexample::SumOutsideD {
                summands: summands.clone(),
                sum,
            });
        }
    }

    // and every element below one is a one-term sum
    let mut max_m = bounds.max_m;
    let mut pool = set.d_elements_up_to(max_m);
    while pool.len() < bounds.samples && max_m < growth_cap {
        max_m *= 2;
        pool = set.d_elements_up_to(max_m);
    }
    for x in &pool {
        if !(x.is_positive() && x < &one) {
            counterexamples.push(Lemma44Counterexample::ElementNotASum { element: x.clone() });
        }
    }
    let elements_checked = pool.len();

    // (2) (m − 1 + g)/m ∈ D(I) for g ∈ D(I)₊, cross-checked by composition
    let base = set.d_elements_up_to(bounds.max_m);
    let mut compositions_checked = 0;
    let mut inverse_compositions_checked = 0;
    let target = bounds.samples.max(1);
    'outer: for m in 1..=bounds.max_m.max(1) {
        for g in std::iter::once(Rational::zero()).chain(base.iter().cloned()) {
            if g >= one {
                continue;
            }
            let value = (Rational::integer(m as i64 - 1) + &g) / Rational::integer(m as i64);
            match set.d_contains(&value)? {
                None => counterexamples.push(Lemma44Counterexample::CompositionOutsideD {
                    m,
                    g: g.clone(),
                    value: value.clone(),
                }),
                Some(_) => {
                    let inner = set.d_contains(&g)?.expect("g was drawn from D(I)");
                    let (r, f) = d_compose(m, inner.m, &inner.f)?;
                    let via = DWitness { m: r, f };
                    if via.value() != value {
                        counterexamples.push(Lemma44Counterexample::CompositionMismatch {
                            m,
                            g: g.clone(),
                            value: value.clone(),
                            via: r,
                        });
                    }
                }
            }
            compositions_checked += 1;
            if compositions_checked >= target * 4 {
                break 'outer;
            }
        }
    }
    // converse: x = (m − 1 + f)/m with f ∈ I₊ ⊆ D(I)₊
    for x in &pool {
        let w = set.d_contains(x)?.expect("pool elements lie in D(I)");
        let ok = w.f < one && set.d_contains(&w.f)?.is_some();
        if !ok {
            counterexamples.push(Lemma44Counterexample::ElementOutsideDD {
                element: x.clone(),
                m: w.m,
                f: w.f.clone(),
            });
        }
        inverse_compositions_checked += 1;
    }

    // (3) a finite I has DCC; D(I) must too
    let set_dcc = true;
    let floor = -Rational::one();
    let d_dcc = set.d_set().satisfies_dcc_above(&floor).holds;
    if set_dcc != d_dcc {
        counterexamples.push(Lemma44Counterexample::DccMismatch { set_dcc, d_dcc });
    }

    Ok(Lemma44Report {
        set: set.elements().to_vec(),
        adjoined_one,
        bounds: bounds.clone(),
        sums_checked: sums.len(),
        sums_max_m,
        elements_checked,
        compositions_checked,
        inverse_compositions_checked,
        set_dcc,
        d_dcc,
        counterexamples,
    })
}

/// All multisets of 1..=`max_len` elements of the ascending `pool` whose
/// sum is below one.
fn sample_sums(pool: &[Rational], max_len: usize) -> Vec<Vec<Rational>> {
    fn go(
        pool: &[Rational],
        start: usize,
        max_len: usize,
        acc: &mut Vec<Rational>,
        sum: &Rational,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if !acc.is_empty() {
            out.push(acc.clone());
        }
        if acc.len() == max_len {
            return;
        }
        for i in start..pool.len() {
            let next = sum + &pool[i];
            if next >= Rational::one() {
                break;
            }
            acc.push(pool[i].clone());
            go(pool, i, max_len, acc, &next, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(
        pool,
        0,
        max_len,
        &mut Vec::new(),
        &Rational::zero(),
        &mut out,
    );
    out
}

/// Coefficient of the exceptional curve in the log pullback after blowing
/// up a smooth surface point: `Σ multᵢ·cᵢ − 1`.
pub fn blowup_pullback_coefficient(
    multiplicities: &[u64],
    coefficients: &[Rational],
) -> Result<Rational, AdjunctionError> {
    if multiplicities.len() != coefficients.len() {
        return Err(AdjunctionError::Domain(format!(
            "{} multiplicities for {} coefficients",
            multiplicities.len(),
            coefficients.len()
        )));
    }
    let mut total = -Rational::one();
    for (m, c) in multiplicities.iter().zip(coefficients) {
        if *m == 0 {
            return Err(AdjunctionError::Domain(
                "multiplicity must be positive".into(),
            ));
        }
        if !c.is_positive() || c > &Rational::one() {
            return Err(AdjunctionError::NotACoefficient(c.clone()));
        }
        total += &c.mul_int(*m as i64);
    }
    Ok(total)
}

/// `d = (m − 1 + f + Σ kⱼ·cⱼ)/m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientForm {
    pub m: u64,
    pub f: Rational,
    pub kc_terms: Vec<(u64, Rational)>,
}

impl CoefficientForm {
    pub fn value(&self) -> Rational {
        let kc: Rational = self
            .kc_terms
            .iter()
            .map(|(k, c)| c.mul_int(*k as i64))
            .sum();
        (Rational::integer(self.m as i64 - 1) + &self.f + kc) / Rational::integer(self.m as i64)
    }

    pub fn is_boundary_coefficient(&self) -> bool {
        self.value() <= Rational::one()
    }

    /// Ordinary collections have every `m = 1`; otherwise adjunction type.
    pub fn all_ordinary(forms: &[CoefficientForm]) -> bool {
        forms.iter().all(|f| f.m == 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// Arbitrary finite sequences.
    C,
    /// Strictly increasing finite sequences.
    CPlus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientSequence {
    entries: Vec<Rational>,
    variant: Variant,
}

impl CoefficientSequence {
    pub fn new(entries: Vec<Rational>, variant: Variant) -> Result<Self, AdjunctionError> {
        if entries.is_empty() {
            return Err(AdjunctionError::Domain("sequence must be non-empty".into()));
        }
        if let Some(bad) = entries
            .iter()
            .find(|x| !x.is_positive() || *x > &Rational::one())
        {
            return Err(AdjunctionError::NotACoefficient(bad.clone()));
        }
        if variant == Variant::CPlus && entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AdjunctionError::Domain(
                "C⁺ sequences must be strictly increasing".into(),
            ));
        }
        Ok(CoefficientSequence { entries, variant })
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }
}

/// `x < y`: unequal, `len x ≤ len y` and `xᵢ ≤ yᵢ` on the common prefix;
/// on `C⁺` some `xᵢ < yᵢ` as well.
pub fn seq_less(x: &CoefficientSequence, y: &CoefficientSequence) -> Result<bool, AdjunctionError> {
    if x.variant != y.variant {
        return Err(AdjunctionError::VariantMismatch);
    }
    if x == y || x.entries.len() > y.entries.len() {
        return Ok(false);
    }
    let pairs = x.entries.iter().zip(&y.entries);
    if !pairs.clone().all(|(a, b)| a <= b) {
        return Ok(false);
    }
    Ok(match x.variant {
        Variant::C => true,
        Variant::CPlus => pairs.clone().any(|(a, b)| a < b),
    })
}

/// A strictly increasing list `xᵢ` with `xᵢ` an entry of `chain[i]`, when
/// the chain is strictly increasing. Greedy: each `xᵢ` is the smallest
/// admissible entry.
pub fn increasing_witness(chain: &[CoefficientSequence]) -> Option<Vec<Rational>> {
    for w in chain.windows(2) {
        if !seq_less(&w[0], &w[1]).unwrap_or(false) {
            return None;
        }
    }
    let mut out: Vec<Rational> = Vec::with_capacity(chain.len());
    for c in chain {
        let next = c
            .entries
            .iter()
            .filter(|x| out.last().is_none_or(|prev| *x > prev))
            .min()?;
        out.push(next.clone());
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn set(xs: &[(i64, i64)]) -> CoefficientSet {
        CoefficientSet::new(xs.iter().map(|&(n, d)| q(n, d))).unwrap()
    }

    /// Enumerate m ≤ 1/(1 − a) and look f up in I₊.
    fn d_contains_brute(s: &CoefficientSet, a: &Rational) -> bool {
        if a >= &Rational::one() {
            return false;
        }
        let bound = (Rational::one() / (Rational::one() - a)).floor();
        let bound: i64 = bound.try_into().unwrap();
        (1..=bound).any(|m| {
            let f = Rational::one() - (Rational::one() - a).mul_int(m);
            !f.is_negative() && s.plus_contains(&f)
        })
    }

    #[test]
    fn i_plus_examples() {
        assert_eq!(set(&[(1, 1)]).plus(), &[q(0, 1)]);
        assert_eq!(set(&[(1, 3)]).plus(), &[q(0, 1), q(1, 3), q(2, 3)]);
        assert_eq!(
            set(&[(1, 2), (1, 3)]).plus(),
            &[q(0, 1), q(1, 3), q(1, 2), q(2, 3), q(5, 6)]
        );
        assert!(CoefficientSet::literal([q(1, 1)])
            .unwrap()
            .plus()
            .is_empty());
        assert!(matches!(
            i_plus([q(0, 1)], true),
            Err(AdjunctionError::NotACoefficient(_))
        ));
        assert!(i_plus([q(3, 2)], true).is_err());
    }

    #[test]
    fn d_contains_examples() {
        let one = set(&[(1, 1)]);
        assert_eq!(
            one.d_contains(&q(2, 3)).unwrap(),
            Some(DWitness { m: 3, f: q(0, 1) })
        );
        assert_eq!(one.d_contains(&q(3, 5)).unwrap(), None);
        assert_eq!(one.d_contains(&q(1, 1)).unwrap(), None);
        assert!(one.d_contains(&q(5, 4)).is_err());
        let half = set(&[(1, 2)]);
        assert_eq!(
            half.d_contains(&q(3, 4)).unwrap(),
            Some(DWitness { m: 2, f: q(1, 2) })
        );
        let w = half.d_contains(&q(7, 8)).unwrap().unwrap();
        assert_eq!(w.value(), q(7, 8));
    }

    #[test]
    fn d_set_examples() {
        let d1 = set(&[(1, 1)]).d_set();
        assert_eq!(d1.sequences().len(), 1);
        assert_eq!(d1.sequences()[0].first(), q(0, 1));
        assert_eq!(d1.accumulation_points_above(&q(0, 1)), vec![q(1, 1)]);
        let dh = set(&[(1, 2)]).d_set();
        // (2m − 1)/(2m) is a subsequence of (n − 1)/n
        assert_eq!(dh.sequences().len(), 1);
        assert!(dh.contains(&q(3, 4)).unwrap());
        assert!(!dh.contains(&q(1, 1)).unwrap());
        assert!(set(&[(1, 2)]).d_set_closed().contains(&q(1, 1)).unwrap());
    }

    #[test]
    fn d_compose_examples() {
        assert_eq!(d_compose(2, 3, &q(0, 1)).unwrap(), (6, q(0, 1)));
        assert_eq!(d_compose(1, 7, &q(1, 3)).unwrap(), (7, q(1, 3)));
        assert_eq!(d_compose(3, 2, &q(1, 2)).unwrap(), (6, q(1, 2)));
        // 2/3 + (3/4)/3 = 11/12
        assert_eq!(q(2, 3) + q(3, 4) / q(3, 1), q(11, 12));
        assert!(d_compose(2, 2, &q(1, 1)).is_err());
    }

    #[test]
    fn lemma44_examples() {
        // (m = 2, g = 2/3) composes to 5/6 = (6 − 1)/6
        let one = set(&[(1, 1)]);
        assert_eq!(
            one.d_contains(&q(5, 6)).unwrap(),
            Some(DWitness { m: 6, f: q(0, 1) })
        );
        let half = set(&[(1, 2)]);
        let h = (q(1, 1) + q(3, 4)) / q(2, 1);
        assert_eq!(h, q(7, 8));
        assert!(half.d_contains(&h).unwrap().is_some());
        let report = verify_lemma44(&set(&[(1, 2), (1, 3)]), &Lemma44Bounds::default()).unwrap();
        assert!(report.passed(), "{:?}", report.counterexamples);
        assert!(report.adjoined_one);
        assert!(report.sums_checked >= 200);
    }

    #[test]
    fn pullback_examples() {
        let c = q(3, 7);
        assert_eq!(
            blowup_pullback_coefficient(&[1, 1], &[q(1, 1), c.clone()]).unwrap(),
            c
        );
        assert_eq!(
            blowup_pullback_coefficient(&[1, 1], &[q(1, 2), q(1, 2)]).unwrap(),
            q(0, 1)
        );
        assert_eq!(
            blowup_pullback_coefficient(&[2, 1], &[q(1, 2), q(1, 3)]).unwrap(),
            q(1, 3)
        );
        assert!(blowup_pullback_coefficient(&[1], &[]).is_err());
    }

    #[test]
    fn coefficient_form_value() {
        let form = CoefficientForm {
            m: 2,
            f: q(0, 1),
            kc_terms: vec![(1, q(1, 3))],
        };
        assert_eq!(form.value(), q(2, 3));
        assert!(form.is_boundary_coefficient());
        assert!(!CoefficientForm::all_ordinary(std::slice::from_ref(&form)));
        let ordinary = CoefficientForm { m: 1, ..form };
        assert!(CoefficientForm::all_ordinary(&[ordinary]));
    }

    fn cs(xs: &[(i64, i64)], v: Variant) -> CoefficientSequence {
        CoefficientSequence::new(xs.iter().map(|&(n, d)| q(n, d)).collect(), v).unwrap()
    }

    #[test]
    fn seq_less_examples() {
        assert!(seq_less(
            &cs(&[(1, 2)], Variant::C),
            &cs(&[(1, 2), (2, 3)], Variant::C)
        )
        .unwrap());
        assert!(seq_less(
            &cs(&[(1, 2), (2, 3)], Variant::CPlus),
            &cs(&[(1, 2), (3, 4)], Variant::CPlus)
        )
        .unwrap());
        for v in [Variant::C, Variant::CPlus] {
            assert!(!seq_less(&cs(&[(1, 2)], v), &cs(&[(1, 2)], v)).unwrap());
        }
        assert_eq!(
            seq_less(&cs(&[(1, 2)], Variant::C), &cs(&[(1, 2)], Variant::CPlus)),
            Err(AdjunctionError::VariantMismatch)
        );
        assert!(CoefficientSequence::new(vec![q(2, 3), q(1, 2)], Variant::CPlus).is_err());
    }

    #[test]
    fn increasing_witness_examples() {
        let chain = [
            cs(&[(1, 2)], Variant::C),
            cs(&[(1, 2), (2, 3)], Variant::C),
            cs(&[(1, 2), (2, 3), (3, 4)], Variant::C),
        ];
        assert_eq!(
            increasing_witness(&chain),
            Some(vec![q(1, 2), q(2, 3), q(3, 4)])
        );
        let flat = [cs(&[(1, 2)], Variant::C), cs(&[(1, 2)], Variant::C)];
        assert_eq!(increasing_witness(&flat), None);
        let up = [cs(&[(1, 3)], Variant::C), cs(&[(1, 2)], Variant::C)];
        assert_eq!(increasing_witness(&up), Some(vec![q(1, 3), q(1, 2)]));
    }

    #[test]
    fn d_contains_matches_brute_force_up_to_denominator_60() {
        for s in [
            set(&[(1, 1)]),
            set(&[(1, 2)]),
            set(&[(1, 2), (1, 3)]),
            set(&[(2, 3)]),
        ] {
            for d in 1..=60 {
                for n in 0..=d {
                    let a = q(n, d);
                    assert_eq!(
                        s.d_contains(&a).unwrap().is_some(),
                        d_contains_brute(&s, &a),
                        "a = {a}, I = {:?}",
                        s.elements()
                    );
                }
            }
        }
    }

    #[test]
    fn set_without_one_lies_in_d() {
        for s in [
            set(&[(1, 2)]),
            set(&[(1, 2), (1, 3)]),
            set(&[(2, 3), (1, 1)]),
        ] {
            for x in s.elements().iter().filter(|x| !x.is_one()) {
                assert_eq!(
                    s.d_contains(x).unwrap(),
                    Some(DWitness { m: 1, f: x.clone() })
                );
            }
        }
    }

    #[test]
    fn d_compose_holds_for_small_m_n() {
        for s in [set(&[(1, 1)]), set(&[(1, 2), (1, 3)]), set(&[(2, 3)])] {
            for m in 1..=30 {
                for n in 1..=30 {
                    for f in s.plus() {
                        assert_eq!(d_compose(m, n, f).unwrap(), (m * n, f.clone()));
                    }
                }
            }
        }
    }

    fn arb_seq() -> impl Strategy<Value = CoefficientSequence> {
        prop::collection::vec(1i64..=4, 1..4)
            .prop_map(|v| cs(&v.iter().map(|&n| (n, 4)).collect::<Vec<_>>(), Variant::C))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn seq_less_is_a_strict_partial_order(x in arb_seq(), y in arb_seq(), z in arb_seq()) {
            prop_assert!(!seq_less(&x, &x).unwrap());
            prop_assert!(!(seq_less(&x, &y).unwrap() && seq_less(&y, &x).unwrap()));
            if seq_less(&x, &y).unwrap() && seq_less(&y, &z).unwrap() {
                prop_assert!(seq_less(&x, &z).unwrap());
            }
        }

        #[test]
        fn pullback_is_affine_in_each_coefficient(m1 in 1u64..5, m2 in 1u64..5,
                                                   a in 1i64..=6, b in 1i64..=6, c in 1i64..=6) {
            // f(c₁) − f(c₁') depends only on the difference
            let x = |c1: Rational| blowup_pullback_coefficient(&[m1, m2], &[c1, q(c, 6)]).unwrap();
            let diff = x(q(a, 6)) - x(q(b, 6));
            prop_assert_eq!(diff, (q(a, 6) - q(b, 6)).mul_int(m1 as i64));
        }
    }
}
