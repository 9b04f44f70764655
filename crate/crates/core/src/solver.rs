//! Exhaustive solver for the one-unknown Diophantine threshold sets.
//!
//! `N₁(I)` is the set of `a ∈ (0, 1]` with
//! `Σ (mᵢ − 1 + fᵢ + kᵢ·a)/mᵢ = target`, every term at most one, every
//! `fᵢ ∈ I₊ ∪ {0}` and some `kᵢ ≥ 1`. The more general form allows a
//! leading constant `a₀ ∈ I ∪ {0}` and a finite set of targets.
//!
//! Terms with `m = 1` go into a "bag" summarised by a small dynamic
//! programme over `(Σf, Σk)`. Every other term has value `1 − h/m` with
//! deficit `h = 1 − f − k·c > 0`, so the remaining big terms must have
//! deficits summing to the linear function
//! `L(c) = Σ_bag(f + k·c) + w − target`. The search fixes deficits largest
//! first (which bounds `m` by `w·h/L`), tracking the unknown `c` as an exact
//! interval cut down by linear constraints, and solves the last term for `c`
//! as a fractional-linear function of its `m`. Only rational `c` arise: each
//! leaf equation is linear with rational data.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::adjunction::{AdjunctionError, CoefficientSet};
use crate::rational::Rational;
use crate::ratset::{
    Direction, IndexRange, Interval, KernelError, MonotoneSequence, Rel, ThresholdSet,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{0}")]
    Domain(String),
    #[error("slice is not a finite union of families: {0}")]
    Unrepresentable(String),
    #[error("search exceeded {0} nodes")]
    SearchLimit(u64),
    #[error("complete search needs up to {needed} terms, above the cap of {cap}")]
    TermCap { needed: u64, cap: u64 },
    #[error("no element below one was found above cutoff {0}")]
    NothingBelowOne(Rational),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Adjunction(#[from] AdjunctionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolverConfig {
    /// Allow terms with `k = 0`. Without them `5/6` has no witness.
    pub allow_k_zero: bool,
    pub max_nodes: u64,
    /// Refuse queries whose term-count bound exceeds this. The search is
    /// never truncated; it either runs complete or not at all.
    pub max_terms: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            allow_k_zero: true,
            max_nodes: 50_000_000,
            max_terms: None,
        }
    }
}

/// `m` of a term; `Free` marks a term whose `m` runs off to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermM {
    Fixed(u64),
    Free,
}

impl Serialize for TermM {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            TermM::Fixed(m) => serializer.serialize_u64(*m),
            TermM::Free => serializer.serialize_str("free"),
        }
    }
}

impl<'de> Deserialize<'de> for TermM {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(m) => Ok(TermM::Fixed(m)),
            Raw::Word(w) if w == "free" => Ok(TermM::Free),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("bad m `{w}`"))),
        }
    }
}

/// One summand `(m − 1 + f + k·a)/m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDatum {
    pub m: TermM,
    pub k: u64,
    pub f: Rational,
}

impl TermDatum {
    pub fn fixed(m: u64, k: u64, f: Rational) -> Self {
        TermDatum {
            m: TermM::Fixed(m),
            k,
            f,
        }
    }

    /// Value at `a`; a free term contributes its limit `1`.
    pub fn value(&self, a: &Rational) -> Rational {
        match self.m {
            TermM::Fixed(m) => {
                let m = Rational::integer(m as i64);
                (&m - &Rational::one() + &self.f + a.mul_int(self.k as i64)) / m
            }
            TermM::Free => Rational::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("term {0} has m = 0")]
    ZeroM(usize),
    #[error("term {0} is free; witnesses need concrete m")]
    FreeTerm(usize),
    #[error("term {index} has f = {f} outside [0, 1)")]
    BadF { index: usize, f: Rational },
    #[error("term {index} has f = {f}, which is not a sum of coefficients below one")]
    FNotInPlus { index: usize, f: Rational },
    #[error("leading constant {0} is not a coefficient of the set")]
    BadLeading(Rational),
    #[error("term {index} has value {value} outside (0, 1]")]
    TermOutOfRange { index: usize, value: Rational },
    #[error("no term involves a")]
    NoUnknown,
    #[error("terms sum to {sum}, not {target}")]
    SumMismatch {
        sum: Box<Rational>,
        target: Box<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionWitness {
    pub a: Rational,
    pub target: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading: Option<Rational>,
    pub terms: Vec<TermDatum>,
}

impl SolutionWitness {
    /// Re-checks the sum identity and term bounds from scratch.
    pub fn verify(&self) -> Result<(), WitnessError> {
        let mut sum = self.leading.clone().unwrap_or_else(Rational::zero);
        for (index, t) in self.terms.iter().enumerate() {
            let m = match t.m {
                TermM::Fixed(0) => return Err(WitnessError::ZeroM(index)),
                TermM::Fixed(m) => m,
                TermM::Free => return Err(WitnessError::FreeTerm(index)),
            };
            if t.f.is_negative() || t.f >= Rational::one() {
                return Err(WitnessError::BadF {
                    index,
                    f: t.f.clone(),
                });
            }
            let num =
                Rational::integer(m as i64 - 1) + &t.f + &self.a * &Rational::integer(t.k as i64);
            let value = num / Rational::integer(m as i64);
            if !value.is_positive() || value > Rational::one() {
                return Err(WitnessError::TermOutOfRange { index, value });
            }
            sum += &value;
        }
        if self.terms.iter().all(|t| t.k == 0) {
            return Err(WitnessError::NoUnknown);
        }
        if sum != self.target {
            return Err(WitnessError::SumMismatch {
                sum: Box::new(sum),
                target: Box::new(self.target.clone()),
            });
        }
        Ok(())
    }

    /// [`verify`](Self::verify) plus membership of every `f` in `I₊ ∪ {0}`
    /// and of the leading constant in `I ∪ {0}`.
    pub fn verify_over(&self, set: &CoefficientSet) -> Result<(), WitnessError> {
        self.verify()?;
        for (index, t) in self.terms.iter().enumerate() {
            if !t.f.is_zero() && !set.plus_contains(&t.f) {
                return Err(WitnessError::FNotInPlus {
                    index,
                    f: t.f.clone(),
                });
            }
        }
        if let Some(l) = &self.leading {
            if !l.is_zero() && !set.elements().contains(l) {
                return Err(WitnessError::BadLeading(l.clone()));
            }
        }
        Ok(())
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("witness serialisation cannot fail")
    }
}

/// A term whose `m` is left as a parameter: the unknown is then
/// `c(m) = (p·m + q)/(r·m + s)` for `m` in `m_lo..=m_hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeTerm {
    pub f: Rational,
    pub k: u64,
    pub p: Rational,
    pub q: Rational,
    pub r: Rational,
    pub s: Rational,
    pub m_lo: u64,
    pub m_hi: Option<u64>,
}

impl FreeTerm {
    pub fn value_at(&self, m: u64) -> Rational {
        let mq = Rational::integer(m as i64);
        (&self.p * &mq + &self.q) / (&self.r * &mq + &self.s)
    }

    fn is_constant(&self) -> bool {
        (&self.p * &self.s - &self.q * &self.r).is_zero()
    }

    /// The `m` with `c(m) = x`, if any.
    fn index_of(&self, x: &Rational) -> Option<u64> {
        if self.is_constant() {
            return (self.value_at(self.m_lo) == *x).then_some(self.m_lo);
        }
        // x·(r·m + s) = p·m + q
        let den = x * &self.r - &self.p;
        let m = (&self.q - x * &self.s).checked_div(&den)?;
        let m = m.to_i64()?;
        let m = u64::try_from(m).ok()?;
        let in_range = m >= self.m_lo && self.m_hi.is_none_or(|h| m <= h);
        in_range.then_some(m)
    }
}

/// One branch of the search: fixed terms plus at most one parametrised term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Family {
    pub leading: Option<Rational>,
    pub target: Rational,
    pub fixed: Vec<TermDatum>,
    pub free: Option<FreeTerm>,
    /// The single value when there is no free term.
    pub value: Option<Rational>,
}

impl Family {
    pub fn witness_at(&self, m: Option<u64>) -> SolutionWitness {
        let mut terms = self.fixed.clone();
        let a = match (&self.free, m) {
            (Some(free), Some(m)) => {
                terms.push(TermDatum::fixed(m, free.k, free.f.clone()));
                free.value_at(m)
            }
            (None, _) => self.value.clone().expect("point family carries its value"),
            (Some(_), None) => panic!("free family needs an m"),
        };
        SolutionWitness {
            a,
            target: self.target.clone(),
            leading: self.leading.clone(),
            terms,
        }
    }

    pub fn witness_for(&self, x: &Rational) -> Option<SolutionWitness> {
        match &self.free {
            None => (self.value.as_ref() == Some(x)).then(|| self.witness_at(None)),
            Some(free) => free.index_of(x).map(|m| self.witness_at(Some(m))),
        }
    }

    /// Limit of an infinite non-constant family.
    pub fn limit(&self) -> Option<Rational> {
        let free = self.free.as_ref()?;
        if free.m_hi.is_some() || free.is_constant() || free.r.is_zero() {
            return None;
        }
        Some(&free.p / &free.r)
    }

    fn emit(
        &self,
        points: &mut Vec<Rational>,
        sequences: &mut Vec<MonotoneSequence>,
    ) -> Result<(), SolverError> {
        match &self.free {
            None => points.push(self.value.clone().expect("point family carries its value")),
            Some(free) if free.is_constant() => points.push(free.value_at(free.m_lo)),
            Some(free) => match free.m_hi {
                Some(hi) => points.extend((free.m_lo..=hi).map(|m| free.value_at(m))),
                None => sequences.push(MonotoneSequence::from_rationals(
                    &free.p,
                    &free.q,
                    &free.r,
                    &free.s,
                    BigInt::from(free.m_lo),
                )?),
            },
        }
        Ok(())
    }
}

/// Bounds used by a search, reported so completeness can be audited.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub window: Interval,
    pub targets: Vec<Rational>,
    /// Lower bound on every positive term.
    pub delta: Rational,
    pub max_terms: u64,
    pub max_k: u64,
    pub max_big_terms: u64,
    pub bag_states: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub set: ThresholdSet,
    pub families: Vec<Family>,
    pub report: SearchReport,
}

impl Enumeration {
    pub fn witness_for(&self, x: &Rational) -> Option<SolutionWitness> {
        self.families.iter().find_map(|f| f.witness_for(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccumulationPoint {
    pub limit: Rational,
    /// The family's equation with its free term replaced by `1`.
    pub reduced: SolutionWitness,
    pub free_term: TermDatum,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupBelowOne {
    pub value: Rational,
    pub witness: SolutionWitness,
    pub cutoff: Rational,
}

/// `a·c + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Lin {
    a: Rational,
    b: Rational,
}

impl Lin {
    fn sub(&self, o: &Lin) -> Lin {
        Lin {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    fn scale(&self, x: &Rational) -> Lin {
        Lin {
            a: &self.a * x,
            b: &self.b * x,
        }
    }

    /// Infimum over `j` and whether it is attained.
    fn inf_over(&self, j: &Interval) -> (Rational, bool) {
        if self.a.is_positive() {
            (&self.a * &j.lo + &self.b, j.lo_closed)
        } else if self.a.is_negative() {
            (&self.a * &j.hi + &self.b, j.hi_closed)
        } else {
            (self.b.clone(), true)
        }
    }
}

fn raise_lo(j: &Interval, x: &Rational, closed: bool) -> Interval {
    let mut out = j.clone();
    if x > &j.lo {
        out.lo = x.clone();
        out.lo_closed = closed;
    } else if x == &j.lo {
        out.lo_closed = j.lo_closed && closed;
    }
    out
}

fn lower_hi(j: &Interval, x: &Rational, closed: bool) -> Interval {
    let mut out = j.clone();
    if x < &j.hi {
        out.hi = x.clone();
        out.hi_closed = closed;
    } else if x == &j.hi {
        out.hi_closed = j.hi_closed && closed;
    }
    out
}

/// `{c ∈ j : l(c) > 0}` (or `≥ 0` when not `strict`).
fn restrict(j: &Interval, l: &Lin, strict: bool) -> Option<Interval> {
    let out = if l.a.is_zero() {
        let ok = if strict {
            l.b.is_positive()
        } else {
            !l.b.is_negative()
        };
        if ok {
            j.clone()
        } else {
            return None;
        }
    } else {
        let root = -&l.b / &l.a;
        if l.a.is_positive() {
            raise_lo(j, &root, !strict)
        } else {
            lower_hi(j, &root, !strict)
        }
    };
    (!out.is_empty()).then_some(out)
}

#[derive(Debug, Clone)]
struct BagState {
    cap: Option<Rational>,
    terms: Vec<(Rational, u64)>,
}

struct Search<'a> {
    cfg: &'a SolverConfig,
    plus: Vec<Rational>,
    leading: Option<Rational>,
    target: Rational,
    rest: Rational,
    stop_at_first: bool,
    families: Vec<Family>,
    nodes: u64,
    bag_states: usize,
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<(), SolverError> {
        self.nodes += 1;
        if self.nodes > self.cfg.max_nodes {
            return Err(SolverError::SearchLimit(self.cfg.max_nodes));
        }
        Ok(())
    }

    fn done(&self) -> bool {
        self.stop_at_first && !self.families.is_empty()
    }

    /// `(f, k)` pairs with `f + k·c < 1` (or `≤ 1` for the bag) for some `c ∈ j`.
    fn types(&self, j: &Interval, bag: bool) -> Vec<(Rational, u64)> {
        let one = Rational::one();
        let k0 = if self.cfg.allow_k_zero { 0 } else { 1 };
        let mut out = Vec::new();
        for f in &self.plus {
            let mut k = k0;
            loop {
                let v = f + &j.lo.mul_int(k as i64);
                let ok = v < one || (bag && v == one && (j.lo_closed || k == 0));
                if !ok {
                    break;
                }
                if !(bag && k == 0 && f.is_zero()) {
                    out.push((f.clone(), k));
                }
                k += 1;
            }
        }
        out
    }

    fn run(&mut self, window: &Interval) -> Result<(), SolverError> {
        let bag_types = self.types(window, true);
        let zero = Rational::zero();
        let mut states: BTreeMap<(Rational, u64), BagState> = BTreeMap::new();
        states.insert(
            (zero.clone(), 0),
            BagState {
                cap: None,
                terms: Vec::new(),
            },
        );
        let mut queue = VecDeque::from([(zero, 0u64)]);
        while let Some(key) = queue.pop_front() {
            let state = states[&key].clone();
            for (f, k) in &bag_types {
                let nk = (&key.0 + f, key.1 + k);
                let cap = if *k > 0 {
                    let c = (Rational::one() - f).div_int(*k as i64);
                    Some(match &state.cap {
                        Some(old) => Rational::min_of(old, &c).clone(),
                        None => c,
                    })
                } else {
                    state.cap.clone()
                };
                let mut jb = match &cap {
                    Some(c) => lower_hi(window, c, true),
                    None => window.clone(),
                };
                // Σ bag ≤ rest somewhere in the window
                let room = Lin {
                    a: -Rational::integer(nk.1 as i64),
                    b: &self.rest - &nk.0,
                };
                jb = match restrict(&jb, &room, false) {
                    Some(j) => j,
                    None => continue,
                };
                let _ = jb;
                let better = match states.get(&nk) {
                    None => true,
                    Some(old) => match (&old.cap, &cap) {
                        (Some(o), Some(n)) => n > o,
                        (Some(_), None) => true,
                        _ => false,
                    },
                };
                if better {
                    let mut terms = state.terms.clone();
                    terms.push((f.clone(), *k));
                    states.insert(nk.clone(), BagState { cap, terms });
                    queue.push_back(nk);
                }
            }
        }
        self.bag_states += states.len();

        let max_w = (self.rest.mul_int(2)).floor().to_u64().unwrap_or(0);
        for ((sf, sk), state) in &states {
            let jb = match &state.cap {
                Some(c) => lower_hi(window, c, true),
                None => window.clone(),
            };
            if jb.is_empty() {
                continue;
            }
            let mut terms: Vec<TermDatum> = state
                .terms
                .iter()
                .map(|(f, k)| TermDatum::fixed(1, *k, f.clone()))
                .collect();
            terms.sort_by(|x, y| y.cmp(x));
            let kq = Rational::integer(*sk as i64);
            for w in 0..=max_w {
                if self.done() {
                    return Ok(());
                }
                self.tick()?;
                let l = Lin {
                    a: kq.clone(),
                    b: sf + &Rational::integer(w as i64) - &self.rest,
                };
                if w == 0 {
                    if *sk == 0 || !l.b.is_negative() {
                        continue;
                    }
                    let c0 = -&l.b / &kq;
                    if jb.contains(&c0) {
                        self.families.push(Family {
                            leading: self.leading.clone(),
                            target: self.target.clone(),
                            fixed: terms.clone(),
                            free: None,
                            value: Some(c0),
                        });
                    }
                    continue;
                }
                if let Some(j1) = restrict(&jb, &l, true) {
                    let mut acc = terms.clone();
                    self.dfs(&j1, w, &l, *sk > 0, &mut acc, None)?;
                }
            }
        }
        Ok(())
    }

    fn dfs(
        &mut self,
        j: &Interval,
        w_rem: u64,
        l: &Lin,
        has_k: bool,
        terms: &mut Vec<TermDatum>,
        prev: Option<&Lin>,
    ) -> Result<(), SolverError> {
        if self.done() {
            return Ok(());
        }
        self.tick()?;
        let big_types = self.types(j, false);
        if w_rem == 1 {
            return self.leaf(j, l, has_k, terms, prev, &big_types);
        }
        let (inf_l, attained) = l.inf_over(j);
        if !inf_l.is_positive() {
            debug_assert!(inf_l.is_zero() && !attained);
            return Err(SolverError::Unrepresentable(format!(
                "{w_rem} deficits can shrink to zero together on {j}"
            )));
        }
        let w_q = Rational::integer(w_rem as i64);
        for (f, k) in big_types {
            let h = Lin {
                a: -Rational::integer(k as i64),
                b: Rational::one() - &f,
            };
            let sup_h = &h.a * &j.lo + &h.b;
            let m_max = (&w_q * &sup_h / &inf_l).floor();
            let m_max = m_max.to_u64().ok_or(KernelError::Overflow)?;
            for m in 2..=m_max {
                let d = h.scale(&Rational::new(1, m as i64));
                let mut j2 = Some(j.clone());
                if let Some(p) = prev {
                    j2 = j2.and_then(|x| restrict(&x, &p.sub(&d), false));
                }
                // d is the largest remaining deficit
                j2 = j2.and_then(|x| restrict(&x, &d.scale(&w_q).sub(l), false));
                let l2 = l.sub(&d);
                j2 = j2.and_then(|x| restrict(&x, &l2, true));
                j2 = j2.and_then(|x| restrict(&x, &h, true));
                if let Some(j2) = j2 {
                    terms.push(TermDatum::fixed(m, k, f.clone()));
                    self.dfs(&j2, w_rem - 1, &l2, has_k || k > 0, terms, Some(&d))?;
                    terms.pop();
                    if self.done() {
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    }

    fn leaf(
        &mut self,
        j: &Interval,
        l: &Lin,
        has_k: bool,
        terms: &[TermDatum],
        prev: Option<&Lin>,
        big_types: &[(Rational, u64)],
    ) -> Result<(), SolverError> {
        let j = match prev {
            Some(p) => match restrict(j, &p.sub(l), false) {
                Some(j) => j,
                None => return Ok(()),
            },
            None => j.clone(),
        };
        for (f, k) in big_types {
            if !(has_k || *k > 0) {
                continue;
            }
            self.tick()?;
            // (1 − f − k·c) = m·L(c)  ⇒  c = (−L₀·m + 1 − f)/(L₁·m + k)
            let p = -&l.b;
            let q = Rational::one() - f;
            let r = l.a.clone();
            let s = Rational::integer(*k as i64);
            let lo_rel = if j.lo_closed { Rel::Ge } else { Rel::Gt };
            let hi_rel = if j.hi_closed { Rel::Ge } else { Rel::Gt };
            let above = IndexRange::solve_linear(
                &(&p - &j.lo * &r),
                &(&q - &j.lo * &s),
                lo_rel,
                BigInt::from(2),
            );
            let below = IndexRange::solve_linear(
                &(&j.hi * &r - &p),
                &(&j.hi * &s - &q),
                hi_rel,
                BigInt::from(2),
            );
            let range = above.intersect(&below);
            if range.is_empty() {
                continue;
            }
            let m_lo = range.lo.to_u64().ok_or(KernelError::Overflow)?;
            let m_hi = match &range.hi {
                Some(h) => Some(h.to_u64().ok_or(KernelError::Overflow)?),
                None => None,
            };
            let free = FreeTerm {
                f: f.clone(),
                k: *k,
                p,
                q,
                r,
                s,
                m_lo,
                m_hi,
            };
            if free.m_hi.is_none() && !free.is_constant() && free.r.is_zero() {
                return Err(SolverError::Unrepresentable(
                    "unbounded linear family inside a bounded window".into(),
                ));
            }
            self.families.push(Family {
                leading: self.leading.clone(),
                target: self.target.clone(),
                fixed: terms.to_vec(),
                free: Some(free),
                value: None,
            });
            if self.done() {
                return Ok(());
            }
        }
        Ok(())
    }
}

fn plus_with_zero(set: &CoefficientSet) -> Vec<Rational> {
    let mut plus = set.plus().to_vec();
    if !plus.first().is_some_and(Rational::is_zero) {
        plus.insert(0, Rational::zero());
    }
    plus
}

fn report(
    window: &Interval,
    set: &CoefficientSet,
    targets: Vec<Rational>,
    bag_states: usize,
    nodes: u64,
) -> SearchReport {
    let half = Rational::new(1, 2);
    let mut delta = Rational::min_of(&window.lo, &half).clone();
    if let Some(f) = set.min_positive_plus() {
        delta = Rational::min_of(&delta, f).clone();
    }
    let top = targets.iter().max().cloned().unwrap_or_else(Rational::zero);
    let inv = Rational::one() / &window.lo;
    let max_k = if window.lo_closed || !inv.is_integer() {
        inv.floor()
    } else {
        inv.floor() - 1
    };
    SearchReport {
        window: window.clone(),
        max_terms: (&top / &delta).floor().to_u64().unwrap_or(u64::MAX),
        max_k: max_k.to_u64().unwrap_or(u64::MAX),
        max_big_terms: top.mul_int(2).floor().to_u64().unwrap_or(u64::MAX),
        delta,
        targets,
        bag_states,
        nodes,
    }
}

/// Runs the search for every `(leading, target)` pair over `window`.
fn solve_window(
    set: &CoefficientSet,
    pairs: &[(Option<Rational>, Rational)],
    window: &Interval,
    cfg: &SolverConfig,
    stop_at_first: bool,
) -> Result<(Vec<Family>, SearchReport), SolverError> {
    if let Some(cap) = cfg.max_terms {
        let targets = pairs.iter().map(|(_, t)| t.clone()).collect();
        let needed = report(window, set, targets, 0, 0).max_terms;
        if needed > cap {
            return Err(SolverError::TermCap { needed, cap });
        }
    }
    let plus = plus_with_zero(set);
    let mut families = Vec::new();
    let mut bag_states = 0;
    let mut nodes = 0;
    for (leading, target) in pairs {
        let rest = target - &leading.clone().unwrap_or_else(Rational::zero);
        if !rest.is_positive() {
            continue;
        }
        let mut search = Search {
            cfg,
            plus: plus.clone(),
            leading: leading.clone(),
            target: target.clone(),
            rest,
            stop_at_first,
            families: Vec::new(),
            nodes: 0,
            bag_states: 0,
        };
        search.run(window)?;
        bag_states += search.bag_states;
        nodes += search.nodes;
        families.extend(search.families);
        if stop_at_first && !families.is_empty() {
            break;
        }
    }
    let targets = pairs.iter().map(|(_, t)| t.clone()).collect();
    Ok((families, report(window, set, targets, bag_states, nodes)))
}

fn to_enumeration(families: Vec<Family>, report: SearchReport) -> Result<Enumeration, SolverError> {
    let mut points = Vec::new();
    let mut sequences = Vec::new();
    for f in &families {
        f.emit(&mut points, &mut sequences)?;
    }
    let set = ThresholdSet::new(report.window.clone(), points, sequences)?;
    Ok(Enumeration {
        set,
        families,
        report,
    })
}

fn check_cutoff(t: &Rational) -> Result<(), SolverError> {
    if !t.is_positive() || t >= &Rational::one() {
        return Err(SolverError::Domain(format!("cutoff {t} is not in (0, 1)")));
    }
    Ok(())
}

fn check_target(target: &Rational) -> Result<(), SolverError> {
    if target < &Rational::one() {
        return Err(SolverError::Domain(format!("target {target} < 1")));
    }
    Ok(())
}

/// A witness for `a ∈ N₁(I)`, or `None` when the complete search finds none.
pub fn n1_member(
    a: &Rational,
    set: &CoefficientSet,
    target: &Rational,
    cfg: &SolverConfig,
) -> Result<Option<SolutionWitness>, SolverError> {
    if !a.is_positive() || a > &Rational::one() {
        return Err(SolverError::Domain(format!("a = {a} is not in (0, 1]")));
    }
    check_target(target)?;
    let window = Interval::closed(a.clone(), a.clone());
    let (families, _) = solve_window(set, &[(None, target.clone())], &window, cfg, true)?;
    Ok(families.first().and_then(|f| f.witness_for(a)))
}

/// `N₁(I) ∩ (t, 1]`.
pub fn n1_enumerate_above(
    t: &Rational,
    set: &CoefficientSet,
    target: &Rational,
    cfg: &SolverConfig,
) -> Result<Enumeration, SolverError> {
    check_cutoff(t)?;
    check_target(target)?;
    let window = Interval::new(t.clone(), false, Rational::one(), true);
    let (families, report) = solve_window(set, &[(None, target.clone())], &window, cfg, false)?;
    to_enumeration(families, report)
}

/// All `c ∈ (t, 1]` with `a₀ + Σ (mᵢ − 1 + fᵢ + kᵢ·c)/mᵢ = k` for some
/// `a₀ ∈ I ∪ {0}` and `k ∈ targets`.
pub fn lemma45_solve(
    set: &CoefficientSet,
    targets: &[Rational],
    t: &Rational,
    cfg: &SolverConfig,
) -> Result<Enumeration, SolverError> {
    check_cutoff(t)?;
    let mut ks = targets.to_vec();
    ks.sort();
    ks.dedup();
    let mut pairs = Vec::new();
    for k in &ks {
        pairs.push((None, k.clone()));
        for a0 in set.elements() {
            pairs.push((Some(a0.clone()), k.clone()));
        }
    }
    let window = Interval::new(t.clone(), false, Rational::one(), true);
    let (families, report) = solve_window(set, &pairs, &window, cfg, false)?;
    to_enumeration(families, report)
}

/// `max(N₁(I) ∖ {1})`, searching slices `(t, 1]` with `t` moving down.
pub fn n1_sup_below_one(
    set: &CoefficientSet,
    target: &Rational,
    cfg: &SolverConfig,
) -> Result<SupBelowOne, SolverError> {
    let one = Rational::one();
    let cutoffs = [64i64, 32, 16, 8, 4, 2]
        .into_iter()
        .map(|j| Rational::new(j - 1, j))
        .chain([4i64, 8, 16, 32].into_iter().map(|j| Rational::new(1, j)));
    let mut last = one.clone();
    for t in cutoffs {
        let e = n1_enumerate_above(&t, set, target, cfg)?;
        if let Some(value) = e.set.sup_below(&one)? {
            let witness = e
                .witness_for(&value)
                .expect("every element of the slice comes from a family");
            return Ok(SupBelowOne {
                value,
                witness,
                cutoff: t,
            });
        }
        last = t;
    }
    Err(SolverError::NothingBelowOne(last))
}

/// Limits above `t` of the infinite families of `N₁(I) ∩ (t, 1]`, ascending,
/// each with the reduced equation it satisfies.
pub fn n1_accumulation_points_above(
    t: &Rational,
    set: &CoefficientSet,
    target: &Rational,
    cfg: &SolverConfig,
) -> Result<Vec<AccumulationPoint>, SolverError> {
    let e = n1_enumerate_above(t, set, target, cfg)?;
    Ok(accumulation_points(&e, t))
}

pub fn accumulation_points(e: &Enumeration, t: &Rational) -> Vec<AccumulationPoint> {
    let mut out: BTreeMap<Rational, AccumulationPoint> = BTreeMap::new();
    for fam in &e.families {
        let (Some(limit), Some(free)) = (fam.limit(), fam.free.as_ref()) else {
            continue;
        };
        if &limit <= t || out.contains_key(&limit) {
            continue;
        }
        // c(m) − limit has the sign of (q·r − p·s)/(r·(r·m + s))
        let det = &free.p * &free.s - &free.q * &free.r;
        let direction = if det.is_positive() {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        let reduced = SolutionWitness {
            a: limit.clone(),
            target: &fam.target - &Rational::one(),
            leading: fam.leading.clone(),
            terms: fam.fixed.clone(),
        };
        out.insert(
            limit.clone(),
            AccumulationPoint {
                limit,
                reduced,
                free_term: TermDatum {
                    m: TermM::Free,
                    k: free.k,
                    f: free.f.clone(),
                },
                direction,
            },
        );
    }
    out.into_values().collect()
}
