//! Threshold sets: finite unions of rational points and monotone
//! fractional-linear sequences.
//!
//! A [`MonotoneSequence`] is `n ↦ (p·n + q)/(r·n + s)` for integers
//! `n ≥ n0`. Every membership, slicing and chain query reduces to the sign
//! of a linear form in `n`, so all queries are exact and total.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("{value} lies outside the ambient interval {ambient}")]
    OutOfAmbient {
        value: Rational,
        ambient: Box<Interval>,
    },
    #[error("infinite slice above {cutoff}: sequence {sequence} has infinitely many terms there")]
    InfiniteSlice {
        sequence: MonotoneSequence,
        cutoff: Rational,
    },
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("sequence coefficient does not fit in 64 bits")]
    Overflow,
    #[error("supremum {limit} below the query point is a limit that is not attained")]
    SupremumNotAttained { limit: Rational },
    #[error("malformed threshold-set document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// An interval of the rational line with independently open or closed ends.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Self {
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    /// `(0, 1]`, the default home of coefficients.
    pub fn unit() -> Self {
        Interval::new(Rational::zero(), false, Rational::one(), true)
    }

    /// `[0, 1]`.
    pub fn closed_unit() -> Self {
        Interval::new(Rational::zero(), true, Rational::one(), true)
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, true, hi, true)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Greater => true,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (self.lo.clone(), self.lo_closed),
            Ordering::Greater => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed || other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Greater => (self.hi.clone(), self.hi_closed),
            Ordering::Less => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed || other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        if self.is_empty() {
            return true;
        }
        let lo_ok = match self.lo.cmp(&other.lo) {
            Ordering::Greater => true,
            Ordering::Equal => other.lo_closed || !self.lo_closed,
            Ordering::Less => false,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            Ordering::Less => true,
            Ordering::Equal => other.hi_closed || !self.hi_closed,
            Ordering::Greater => false,
        };
        lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Comparison used when solving `term(n) REL x` for `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

/// A set of consecutive integers `lo..=hi`; `hi = None` means unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: BigInt,
    pub hi: Option<BigInt>,
}

impl IndexRange {
    pub fn from(lo: BigInt) -> Self {
        IndexRange { lo, hi: None }
    }

    pub fn empty() -> Self {
        IndexRange {
            lo: BigInt::one(),
            hi: Some(BigInt::zero()),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(&self.hi, Some(h) if h < &self.lo)
    }

    pub fn is_infinite(&self) -> bool {
        self.hi.is_none()
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        n >= &self.lo && self.hi.as_ref().is_none_or(|h| n <= h)
    }

    pub fn intersect(&self, other: &IndexRange) -> IndexRange {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = match (&self.hi, &other.hi) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(std::cmp::min(a, b).clone()),
        };
        IndexRange { lo, hi }
    }

    /// Integers `n ≥ from` with `alpha·n + beta REL 0`.
    pub fn solve_linear(alpha: &Rational, beta: &Rational, rel: Rel, from: BigInt) -> IndexRange {
        let floor = IndexRange::from(from);
        if alpha.is_zero() {
            let holds = match rel {
                Rel::Lt => beta.is_negative(),
                Rel::Le => !beta.is_positive(),
                Rel::Eq => beta.is_zero(),
                Rel::Ge => !beta.is_negative(),
                Rel::Gt => beta.is_positive(),
            };
            return if holds { floor } else { IndexRange::empty() };
        }
        let root = -beta / alpha;
        // normalise to `n REL' root`
        let rel = if alpha.is_positive() {
            rel
        } else {
            match rel {
                Rel::Lt => Rel::Gt,
                Rel::Le => Rel::Ge,
                Rel::Eq => Rel::Eq,
                Rel::Ge => Rel::Le,
                Rel::Gt => Rel::Lt,
            }
        };
        let range = match rel {
            Rel::Gt => IndexRange::from(root.floor() + 1),
            Rel::Ge => IndexRange::from(root.ceil()),
            Rel::Lt => IndexRange {
                lo: floor.lo.clone(),
                hi: Some(root.ceil() - 1),
            },
            Rel::Le => IndexRange {
                lo: floor.lo.clone(),
                hi: Some(root.floor()),
            },
            Rel::Eq if root.is_integer() => IndexRange {
                lo: root.floor(),
                hi: Some(root.floor()),
            },
            Rel::Eq => return IndexRange::empty(),
        };
        range.intersect(&floor)
    }

    pub fn iter(&self) -> impl Iterator<Item = BigInt> + '_ {
        let mut n = self.lo.clone();
        std::iter::from_fn(move || {
            if let Some(h) = &self.hi {
                if &n > h {
                    return None;
                }
            }
            let out = n.clone();
            n += 1;
            Some(out)
        })
    }
}

/// `n ↦ (p·n + q)/(r·n + s)` for integers `n ≥ n0`.
///
/// Stored in a normal form: coefficients coprime, `r > 0`, and the index
/// shifted so that `-r < s ≤ 0`. Two sequences with the same curve and the
/// same first term therefore compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneSequence {
    p: i64,
    q: i64,
    r: i64,
    s: i64,
    n0: u64,
}

fn to_i64(n: BigInt) -> Result<i64, KernelError> {
    n.to_i64().ok_or(KernelError::Overflow)
}

impl MonotoneSequence {
    /// Validates and normalises. The term must be strictly monotone, its
    /// denominator positive for every `n ≥ n0`, and `r ≠ 0` so the limit
    /// `p/r` is finite.
    pub fn new(p: i64, q: i64, r: i64, s: i64, n0: u64) -> Result<Self, KernelError> {
        Self::from_bigints(p.into(), q.into(), r.into(), s.into(), n0.into())
    }

    pub fn from_bigints(
        p: BigInt,
        q: BigInt,
        r: BigInt,
        s: BigInt,
        n0: BigInt,
    ) -> Result<Self, KernelError> {
        if r.is_zero() {
            return Err(KernelError::InvalidSequence(
                "r = 0: the sequence has no finite limit".into(),
            ));
        }
        if n0 < BigInt::one() {
            return Err(KernelError::InvalidSequence(
                "start index must be ≥ 1".into(),
            ));
        }
        let (mut p, mut q, mut r, mut s) = (p, q, r, s);
        if r.is_negative() {
            // r·n + s is eventually negative; flipping all signs keeps the term
            p = -p;
            q = -q;
            r = -r;
            s = -s;
        }
        if (&r * &n0 + &s) <= BigInt::zero() {
            return Err(KernelError::InvalidSequence(format!(
                "denominator {r}·n + {s} is not positive at n = {n0}"
            )));
        }
        if (&p * &s - &q * &r).is_zero() {
            return Err(KernelError::InvalidSequence(
                "constant sequence (p·s = q·r)".into(),
            ));
        }
        let g = p.gcd(&q).gcd(&r).gcd(&s);
        let (p, mut q, r, mut s) = (p / &g, q / &g, r / &g, s / &g);
        // shift n ↦ n + d so that -r < s + r·d ≤ 0
        let d = (-&s).div_floor(&r);
        q += &p * &d;
        s += &r * &d;
        let n0 = n0 - &d;
        debug_assert!(n0 >= BigInt::one());
        Ok(MonotoneSequence {
            p: to_i64(p)?,
            q: to_i64(q)?,
            r: to_i64(r)?,
            s: to_i64(s)?,
            n0: n0.to_u64().ok_or(KernelError::Overflow)?,
        })
    }

    /// The sequence `n ↦ (α·n + β)/(γ·n + δ)` with rational coefficients.
    pub fn from_rationals(
        alpha: &Rational,
        beta: &Rational,
        gamma: &Rational,
        delta: &Rational,
        n0: BigInt,
    ) -> Result<Self, KernelError> {
        let l = [alpha, beta, gamma, delta]
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scale = |x: &Rational| (x * &Rational::from_bigint(l.clone())).numer().clone();
        Self::from_bigints(scale(alpha), scale(beta), scale(gamma), scale(delta), n0)
    }

    pub fn coefficients(&self) -> (i64, i64, i64, i64) {
        (self.p, self.q, self.r, self.s)
    }

    pub fn start(&self) -> u64 {
        self.n0
    }

    pub fn direction(&self) -> Direction {
        // d/dn term = (p·s − q·r)/(r·n + s)²
        let det = self.p as i128 * self.s as i128 - self.q as i128 * self.r as i128;
        if det > 0 {
            Direction::Increasing
        } else {
            Direction::Decreasing
        }
    }

    pub fn limit(&self) -> Rational {
        Rational::new(self.p, self.r)
    }

    pub fn term(&self, n: &BigInt) -> Rational {
        let num = BigInt::from(self.p) * n + self.q;
        let den = BigInt::from(self.r) * n + self.s;
        Rational::from_bigints(num, den)
    }

    pub fn first(&self) -> Rational {
        self.term(&BigInt::from(self.n0))
    }

    /// All valid indices `n ≥ n0` with `term(n) REL x`.
    pub fn indices_where(&self, rel: Rel, x: &Rational) -> IndexRange {
        // sign(term(n) − x) = sign((p − x·r)·n + (q − x·s)) because r·n + s > 0
        let alpha = Rational::integer(self.p) - x * &Rational::integer(self.r);
        let beta = Rational::integer(self.q) - x * &Rational::integer(self.s);
        IndexRange::solve_linear(&alpha, &beta, rel, self.n0.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        !self.indices_where(Rel::Eq, x).is_empty()
    }

    /// Image under `x ↦ (a·x + b)/c` with `c > 0`: again a monotone sequence.
    pub fn map_affine(
        &self,
        a: &Rational,
        b: &Rational,
        c: &Rational,
    ) -> Result<Self, KernelError> {
        let (p, q, r, s) = (
            Rational::integer(self.p),
            Rational::integer(self.q),
            Rational::integer(self.r),
            Rational::integer(self.s),
        );
        MonotoneSequence::from_rationals(
            &(a * &p + b * &r),
            &(a * &q + b * &s),
            &(c * &r),
            &(c * &s),
            self.n0.into(),
        )
    }

    /// If every term of `self` is a term of `other`, the affine index map
    /// `n ↦ u·n + v` realising the inclusion on a tail, together with the
    /// first index of `self` from which it lands in `other`'s range.
    fn embedding_into(&self, other: &MonotoneSequence) -> Option<BigInt> {
        // other⁻¹(y) = (s·y − q)/(p − r·y); compose with self(n)
        let (p, q, r, s) = (
            BigInt::from(other.p),
            BigInt::from(other.q),
            BigInt::from(other.r),
            BigInt::from(other.s),
        );
        let (pp, qq, rr, ss) = (
            BigInt::from(self.p),
            BigInt::from(self.q),
            BigInt::from(self.r),
            BigInt::from(self.s),
        );
        let n1 = &s * &pp - &q * &rr;
        let n0 = &s * &qq - &q * &ss;
        let d1 = &p * &rr - &r * &pp;
        let d0 = &p * &ss - &r * &qq;
        if !d1.is_zero() || d0.is_zero() {
            return None;
        }
        let u = Rational::from_bigints(n1, d0.clone());
        let v = Rational::from_bigints(n0, d0);
        if !u.is_integer() || !u.is_positive() {
            return None;
        }
        let start = BigInt::from(self.n0);
        let at_start = &u * &Rational::from_bigint(start.clone()) + &v;
        if !at_start.is_integer() {
            return None;
        }
        // first n with u·n + v ≥ other.n0
        let need = (Rational::integer(other.n0 as i64) - &v) / &u;
        Some(std::cmp::max(start, need.ceil()))
    }

    /// Whether every term of `self` is a term of `other`.
    pub fn is_subsequence_of(&self, other: &MonotoneSequence) -> bool {
        matches!(self.embedding_into(other), Some(n) if n == BigInt::from(self.n0))
    }
}

/// `a·n + b` spelled the way one would write it by hand.
fn linear(a: i64, b: i64) -> String {
    let lead = match a {
        0 => String::new(),
        1 => "n".to_string(),
        -1 => "-n".to_string(),
        _ => format!("{a}n"),
    };
    match (lead.is_empty(), b) {
        (true, _) => b.to_string(),
        (false, 0) => lead,
        (false, b) if b > 0 => format!("{lead}+{b}"),
        (false, b) => format!("{lead}{b}"),
    }
}

impl fmt::Display for MonotoneSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = (linear(self.p, self.q), linear(self.r, self.s));
        let num = if self.p != 0 && self.q != 0 {
            format!("({num})")
        } else {
            num
        };
        let den = if self.r != 0 && (self.s != 0 || self.r.abs() != 1) {
            format!("({den})")
        } else {
            den
        };
        if den == "1" {
            write!(f, "{num}, n ≥ {}", self.n0)
        } else {
            write!(f, "{num}/{den}, n ≥ {}", self.n0)
        }
    }
}

impl fmt::Debug for MonotoneSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Result of an ACC or DCC query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainVerdict {
    pub holds: bool,
    /// A sequence violating the chain condition, when `holds` is false.
    pub certificate: Option<MonotoneSequence>,
}

/// `points ∪ ⋃ {term(n) : n ≥ n0}` inside an ambient interval.
///
/// Values are always canonical: points sorted descending with no point equal
/// to a sequence term, sequences normalised, deduplicated, merged per curve
/// and with subsequences of other stored sequences dropped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ThresholdSet {
    ambient: Interval,
    points: Vec<Rational>,
    sequences: Vec<MonotoneSequence>,
}

/// `{1, 5/6} ∪ {(p·n+q)/(r·n+s), n ≥ n0} ∪ …`, or `∅`.
impl fmt::Display for ThresholdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.points.is_empty() {
            let pts: Vec<String> = self.points.iter().map(ToString::to_string).collect();
            parts.push(format!("{{{}}}", pts.join(", ")));
        }
        parts.extend(self.sequences.iter().map(|s| format!("{{{s}}}")));
        if parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", parts.join(" ∪ "))
        }
    }
}

impl fmt::Debug for ThresholdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThresholdSet")
            .field("ambient", &self.ambient)
            .field("points", &self.points)
            .field("sequences", &self.sequences)
            .finish()
    }
}

impl ThresholdSet {
    pub fn new(
        ambient: Interval,
        points: Vec<Rational>,
        sequences: Vec<MonotoneSequence>,
    ) -> Result<Self, KernelError> {
        for x in &points {
            if !ambient.contains(x) {
                return Err(KernelError::OutOfAmbient {
                    value: x.clone(),
                    ambient: Box::new(ambient),
                });
            }
        }
        for seq in &sequences {
            check_sequence_in(seq, &ambient)?;
        }
        Ok(Self::canonical(ambient, points, sequences))
    }

    pub fn empty(ambient: Interval) -> Self {
        ThresholdSet {
            ambient,
            points: Vec::new(),
            sequences: Vec::new(),
        }
    }

    pub fn from_points(ambient: Interval, points: Vec<Rational>) -> Result<Self, KernelError> {
        Self::new(ambient, points, Vec::new())
    }

    fn canonical(
        ambient: Interval,
        mut points: Vec<Rational>,
        mut sequences: Vec<MonotoneSequence>,
    ) -> Self {
        // one representative per curve, keeping the earliest start
        sequences.sort();
        let mut merged: Vec<MonotoneSequence> = Vec::with_capacity(sequences.len());
        for seq in sequences {
            match merged.last_mut() {
                Some(last) if last.coefficients() == seq.coefficients() => {
                    last.n0 = last.n0.min(seq.n0);
                }
                _ => merged.push(seq),
            }
        }
        let mut kept: Vec<MonotoneSequence> = Vec::with_capacity(merged.len());
        for (i, seq) in merged.iter().enumerate() {
            let redundant = merged.iter().enumerate().any(|(j, other)| {
                // ties cannot occur after merging, but break them by index anyway
                i != j && seq.is_subsequence_of(other) && !(other.is_subsequence_of(seq) && j > i)
            });
            if !redundant {
                kept.push(seq.clone());
            }
        }
        points.sort_by(|a, b| b.cmp(a));
        points.dedup();
        points.retain(|x| !kept.iter().any(|s| s.contains(x)));
        ThresholdSet {
            ambient,
            points,
            sequences: kept,
        }
    }

    /// Re-run canonicalisation. Values built through the public API are
    /// already canonical, so this is the identity on them.
    pub fn canonicalize(&self) -> Self {
        Self::canonical(
            self.ambient.clone(),
            self.points.clone(),
            self.sequences.clone(),
        )
    }

    pub fn ambient(&self) -> &Interval {
        &self.ambient
    }

    /// Points, sorted descending.
    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn sequences(&self) -> &[MonotoneSequence] {
        &self.sequences
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.sequences.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> Result<bool, KernelError> {
        if !self.ambient.contains(x) {
            return Err(KernelError::OutOfAmbient {
                value: x.clone(),
                ambient: Box::new(self.ambient.clone()),
            });
        }
        Ok(self.points.binary_search_by(|p| x.cmp(p)).is_ok()
            || self.sequences.iter().any(|s| s.contains(x)))
    }

    /// Every element of the set greater than `t`, sorted descending.
    ///
    /// Refuses with [`KernelError::InfiniteSlice`] when the answer is
    /// infinite, which happens exactly when some decreasing sequence has
    /// limit `≥ t` or some increasing sequence has limit `> t`.
    pub fn elements_above(&self, t: &Rational) -> Result<Vec<Rational>, KernelError> {
        for seq in &self.sequences {
            let limit = seq.limit();
            let infinite = match seq.direction() {
                Direction::Decreasing => &limit >= t,
                Direction::Increasing => &limit > t,
            };
            if infinite {
                return Err(KernelError::InfiniteSlice {
                    sequence: seq.clone(),
                    cutoff: t.clone(),
                });
            }
        }
        let mut out: Vec<Rational> = self.points.iter().filter(|x| *x > t).cloned().collect();
        for seq in &self.sequences {
            let range = seq.indices_where(Rel::Gt, t);
            if range.is_empty() {
                continue;
            }
            out.extend(range.iter().map(|n| seq.term(&n)));
        }
        out.sort_by(|a, b| b.cmp(a));
        out.dedup();
        Ok(out)
    }

    /// Limits of the stored sequences that exceed `t`, descending. These are
    /// exactly the accumulation points of the set above `t`.
    pub fn accumulation_points_above(&self, t: &Rational) -> Vec<Rational> {
        let mut out: Vec<Rational> = self
            .sequences
            .iter()
            .map(MonotoneSequence::limit)
            .filter(|l| l > t)
            .collect();
        out.sort_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }

    /// ACC on `(t, ∞)`: fails iff an increasing sequence has its limit above `t`.
    pub fn satisfies_acc_above(&self, t: &Rational) -> ChainVerdict {
        let bad = self
            .sequences
            .iter()
            .find(|s| s.direction() == Direction::Increasing && &s.limit() > t);
        ChainVerdict {
            holds: bad.is_none(),
            certificate: bad.cloned(),
        }
    }

    /// DCC on `(t, ∞)`: fails iff a decreasing sequence has its limit at or above `t`.
    pub fn satisfies_dcc_above(&self, t: &Rational) -> ChainVerdict {
        let bad = self
            .sequences
            .iter()
            .find(|s| s.direction() == Direction::Decreasing && &s.limit() >= t);
        ChainVerdict {
            holds: bad.is_none(),
            certificate: bad.cloned(),
        }
    }

    /// Image under `f ↦ (m − 1 + f)/m`.
    pub fn map_dcoef(&self, m: u64) -> Result<Self, KernelError> {
        if m == 0 {
            return Err(KernelError::InvalidSequence("m must be positive".into()));
        }
        if !self.ambient.is_subset_of(&Interval::closed_unit()) {
            return Err(KernelError::OutOfAmbient {
                value: if self.ambient.lo.is_negative() {
                    self.ambient.lo.clone()
                } else {
                    self.ambient.hi.clone()
                },
                ambient: Box::new(Interval::closed_unit()),
            });
        }
        let m_q = Rational::integer(m as i64);
        let shift = Rational::integer(m as i64 - 1);
        let image = |x: &Rational| (&shift + x) / &m_q;
        let ambient = Interval::new(
            image(&self.ambient.lo),
            self.ambient.lo_closed,
            image(&self.ambient.hi),
            self.ambient.hi_closed,
        );
        let points = self.points.iter().map(image).collect();
        let sequences = self
            .sequences
            .iter()
            .map(|s| s.map_affine(&Rational::one(), &shift, &m_q))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::canonical(ambient, points, sequences))
    }

    pub fn union(&self, other: &ThresholdSet) -> ThresholdSet {
        let ambient = self.ambient.hull(&other.ambient);
        let points = self.points.iter().chain(&other.points).cloned().collect();
        let sequences = self
            .sequences
            .iter()
            .chain(&other.sequences)
            .cloned()
            .collect();
        Self::canonical(ambient, points, sequences)
    }

    /// The largest element strictly below `x`, if any.
    ///
    /// Errors with [`KernelError::SupremumNotAttained`] when an increasing
    /// sequence creeps up to a limit that beats every attained candidate.
    pub fn sup_below(&self, x: &Rational) -> Result<Option<Rational>, KernelError> {
        let mut best: Option<Rational> = self.points.iter().find(|p| *p < x).cloned();
        let mut open_sup: Option<Rational> = None;
        for seq in &self.sequences {
            let below = seq.indices_where(Rel::Lt, x);
            if below.is_empty() {
                continue;
            }
            match seq.direction() {
                Direction::Decreasing => {
                    // terms fall below x from some index on; the first is largest
                    let cand = seq.term(&below.lo);
                    if best.as_ref().is_none_or(|b| &cand > b) {
                        best = Some(cand);
                    }
                }
                Direction::Increasing => match &below.hi {
                    Some(h) => {
                        let cand = seq.term(h);
                        if best.as_ref().is_none_or(|b| &cand > b) {
                            best = Some(cand);
                        }
                    }
                    None => {
                        let l = seq.limit();
                        if open_sup.as_ref().is_none_or(|o| &l > o) {
                            open_sup = Some(l);
                        }
                    }
                },
            }
        }
        match (best, open_sup) {
            (b, None) => Ok(b),
            (Some(b), Some(o)) if b >= o => Ok(Some(b)),
            (_, Some(o)) => Err(KernelError::SupremumNotAttained { limit: o }),
        }
    }

    /// Whether every term of `seq` belongs to the set. Sound but not
    /// complete: a tail must embed into a single stored sequence, the
    /// remaining head is checked term by term.
    pub fn contains_sequence(&self, seq: &MonotoneSequence) -> bool {
        for other in &self.sequences {
            if let Some(from) = seq.embedding_into(other) {
                let head_ok = IndexRange {
                    lo: seq.n0.into(),
                    hi: Some(&from - 1),
                }
                .iter()
                .all(|n| {
                    let x = seq.term(&n);
                    self.ambient.contains(&x) && self.contains(&x).unwrap_or(false)
                });
                if head_ok {
                    return true;
                }
            }
        }
        false
    }

    pub fn to_document(&self) -> SetDocument {
        SetDocument {
            ambient: self.ambient.clone(),
            points: self.points.clone(),
            sequences: self
                .sequences
                .iter()
                .map(MonotoneSequence::to_document)
                .collect(),
        }
    }

    /// Canonical JSON: equal sets give byte-identical documents.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("threshold sets always serialise")
    }

    pub fn from_document(doc: SetDocument) -> Result<Self, KernelError> {
        let mut sequences = Vec::with_capacity(doc.sequences.len());
        for s in doc.sequences {
            let seq = MonotoneSequence::new(s.p, s.q, s.r, s.s, s.n0)?;
            if seq.direction() != s.direction {
                return Err(KernelError::Document(format!(
                    "sequence {seq} is declared {:?} but is {:?}",
                    s.direction,
                    seq.direction()
                )));
            }
            sequences.push(seq);
        }
        Self::new(doc.ambient, doc.points, sequences)
    }

    pub fn from_json(text: &str) -> Result<Self, KernelError> {
        let doc: SetDocument =
            serde_json::from_str(text).map_err(|e| KernelError::Document(e.to_string()))?;
        Self::from_document(doc)
    }
}

fn check_sequence_in(seq: &MonotoneSequence, ambient: &Interval) -> Result<(), KernelError> {
    let first = seq.first();
    let limit = seq.limit();
    // the first term is an extreme point and the limit is approached but never reached
    let ok = ambient.contains(&first)
        && match seq.direction() {
            Direction::Increasing => limit <= ambient.hi,
            Direction::Decreasing => limit >= ambient.lo,
        };
    if ok {
        Ok(())
    } else {
        Err(KernelError::OutOfAmbient {
            value: if ambient.contains(&first) {
                limit
            } else {
                first
            },
            ambient: Box::new(ambient.clone()),
        })
    }
}

/// Serialised form of a [`ThresholdSet`].
impl MonotoneSequence {
    pub fn to_document(&self) -> SequenceDocument {
        SequenceDocument {
            p: self.p,
            q: self.q,
            r: self.r,
            s: self.s,
            n0: self.n0,
            direction: self.direction(),
        }
    }
}

impl Serialize for MonotoneSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_document().serialize(serializer)
    }
}

impl Serialize for ThresholdSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_document().serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDocument {
    pub ambient: Interval,
    pub points: Vec<Rational>,
    pub sequences: Vec<SequenceDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDocument {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
    pub n0: u64,
    pub direction: Direction,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    /// (n − 1)/n for n ≥ n0.
    fn standard(n0: u64) -> MonotoneSequence {
        MonotoneSequence::new(1, -1, 1, 0, n0).unwrap()
    }

    /// 1/a + 1/n = (n + a)/(a·n) for n ≥ n0.
    fn reciprocal_family(a: i64, n0: u64) -> MonotoneSequence {
        MonotoneSequence::new(1, a, a, 0, n0).unwrap()
    }

    #[test]
    fn display_forms() {
        let empty = ThresholdSet::empty(Interval::unit());
        assert_eq!(empty.to_string(), "∅");
        let s = ThresholdSet::from_points(Interval::closed_unit(), vec![q(5, 6), q(1, 1)]).unwrap();
        assert_eq!(s.to_string(), "{1, 5/6}");
        let seq = MonotoneSequence::new(1, 2, 2, 0, 3).unwrap();
        let s = ThresholdSet::new(Interval::closed_unit(), vec![q(1, 1)], vec![seq]).unwrap();
        assert_eq!(s.to_string(), format!("{{1}} ∪ {{{}}}", s.sequences()[0]));
    }

    #[test]
    fn sequence_normal_form_is_shift_invariant() {
        // n/(n + 1) for n ≥ 1 is (n − 1)/n for n ≥ 2
        let a = MonotoneSequence::new(1, 0, 1, 1, 1).unwrap();
        assert_eq!(a, standard(2));
        let b = MonotoneSequence::new(-2, 2, -2, 0, 2).unwrap();
        assert_eq!(b, standard(2));
    }

    #[test]
    fn sequence_validation() {
        assert!(MonotoneSequence::new(1, 1, 0, 1, 1).is_err());
        assert!(MonotoneSequence::new(2, 2, 1, 1, 1).is_err());
        assert!(MonotoneSequence::new(1, 0, 1, -3, 2).is_err());
        assert!(MonotoneSequence::new(1, 0, 1, 0, 0).is_err());
    }

    #[test]
    fn direction_and_limit() {
        assert_eq!(standard(2).direction(), Direction::Increasing);
        assert_eq!(standard(2).limit(), q(1, 1));
        let f = reciprocal_family(2, 2);
        assert_eq!(f.direction(), Direction::Decreasing);
        assert_eq!(f.limit(), q(1, 2));
    }

    #[test]
    fn contains_examples() {
        let s = ThresholdSet::from_points(Interval::unit(), vec![q(5, 6)]).unwrap();
        assert!(s.contains(&q(5, 6)).unwrap());
        let s = ThresholdSet::new(Interval::unit(), vec![], vec![standard(2)]).unwrap();
        assert!(s.contains(&q(99, 100)).unwrap());
        // (n − 1)/n = 2/5 would need n = 5/3
        assert!(!s.contains(&q(2, 5)).unwrap());
        assert!(matches!(
            s.contains(&q(3, 2)),
            Err(KernelError::OutOfAmbient { .. })
        ));
    }

    #[test]
    fn elements_above_examples() {
        let s = ThresholdSet::new(Interval::unit(), vec![], vec![standard(2)]).unwrap();
        assert!(matches!(
            s.elements_above(&q(4, 5)),
            Err(KernelError::InfiniteSlice { .. })
        ));
        // increasing with limit ≤ t has nothing above t
        assert!(s.elements_above(&q(1, 1)).unwrap().is_empty());

        let s = ThresholdSet::new(Interval::unit(), vec![], vec![reciprocal_family(2, 2)]).unwrap();
        let expected: Vec<Rational> = (2..=9).map(|n| q(1, 2) + q(1, n)).collect();
        assert_eq!(s.elements_above(&q(3, 5)).unwrap(), expected);
        assert_eq!(
            expected,
            vec![
                q(1, 1),
                q(5, 6),
                q(3, 4),
                q(7, 10),
                q(2, 3),
                q(9, 14),
                q(5, 8),
                q(11, 18)
            ]
        );
        // limit = t is still infinite
        assert!(s.elements_above(&q(1, 2)).is_err());

        let s = ThresholdSet::from_points(Interval::unit(), vec![q(1, 2), q(5, 6)]).unwrap();
        assert_eq!(s.elements_above(&q(2, 3)).unwrap(), vec![q(5, 6)]);
    }

    #[test]
    fn accumulation_points_examples() {
        let s = ThresholdSet::new(Interval::unit(), vec![], vec![reciprocal_family(2, 2)]).unwrap();
        assert_eq!(s.accumulation_points_above(&q(2, 5)), vec![q(1, 2)]);
        let finite = ThresholdSet::from_points(Interval::unit(), vec![q(1, 2), q(1, 3)]).unwrap();
        assert!(finite
            .accumulation_points_above(&Rational::zero())
            .is_empty());
        let s = ThresholdSet::new(
            Interval::unit(),
            vec![],
            vec![
                reciprocal_family(2, 2),
                reciprocal_family(3, 3),
                standard(2),
            ],
        )
        .unwrap();
        assert_eq!(
            s.accumulation_points_above(&q(2, 5)),
            vec![q(1, 1), q(1, 2)]
        );
    }

    #[test]
    fn acc_examples() {
        let s = ThresholdSet::new(Interval::unit(), vec![], vec![standard(2)]).unwrap();
        let v = s.satisfies_acc_above(&Rational::zero());
        assert!(!v.holds);
        assert_eq!(v.certificate, Some(standard(2)));
        let s = ThresholdSet::new(Interval::unit(), vec![], vec![reciprocal_family(2, 2)]).unwrap();
        assert!(s.satisfies_acc_above(&Rational::zero()).holds);
        assert!(!s.satisfies_dcc_above(&Rational::zero()).holds);
    }

    #[test]
    fn map_dcoef_examples() {
        let zero =
            ThresholdSet::from_points(Interval::closed_unit(), vec![Rational::zero()]).unwrap();
        assert_eq!(zero.map_dcoef(3).unwrap().points(), &[q(2, 3)]);
        let half = ThresholdSet::from_points(Interval::unit(), vec![q(1, 2)]).unwrap();
        assert_eq!(half.map_dcoef(2).unwrap().points(), &[q(3, 4)]);
        let s = ThresholdSet::new(Interval::unit(), vec![], vec![standard(2)]).unwrap();
        let image = s.map_dcoef(2).unwrap();
        assert_eq!(
            image.sequences(),
            &[MonotoneSequence::new(2, -1, 2, 0, 2).unwrap()]
        );
    }

    #[test]
    fn union_and_sup_below() {
        let a = ThresholdSet::new(
            Interval::unit(),
            vec![q(1, 3)],
            vec![reciprocal_family(2, 2)],
        )
        .unwrap();
        let b = ThresholdSet::from_points(Interval::unit(), vec![q(5, 6), q(2, 5)]).unwrap();
        let u = a.union(&b);
        // 5/6 is a term of the family, so it is absorbed
        assert_eq!(u.points(), &[q(2, 5), q(1, 3)]);
        assert_eq!(u.sup_below(&q(1, 2)).unwrap(), Some(q(2, 5)));
        assert_eq!(u.sup_below(&q(1, 1)).unwrap(), Some(q(5, 6)));
        assert_eq!(u.sup_below(&q(5, 6)).unwrap(), Some(q(3, 4)));
        assert_eq!(u.sup_below(&q(1, 3)).unwrap(), None);

        let inc = ThresholdSet::new(Interval::unit(), vec![q(1, 4)], vec![standard(2)]).unwrap();
        assert!(matches!(
            inc.sup_below(&q(1, 1)),
            Err(KernelError::SupremumNotAttained { .. })
        ));
        assert_eq!(inc.sup_below(&q(3, 4)).unwrap(), Some(q(2, 3)));
    }

    #[test]
    fn subsequences_are_absorbed() {
        // 1/2 + 1/(2n) is every other term of 1/2 + 1/n
        let sub = MonotoneSequence::new(1, 1, 2, 0, 1).unwrap();
        let full = reciprocal_family(2, 2);
        assert!(sub.is_subsequence_of(&full));
        assert!(!full.is_subsequence_of(&sub));
        let s =
            ThresholdSet::new(Interval::unit(), vec![], vec![sub.clone(), full.clone()]).unwrap();
        assert_eq!(s.sequences(), std::slice::from_ref(&full));
        let only_sub = ThresholdSet::new(Interval::unit(), vec![], vec![sub.clone()]).unwrap();
        assert!(s.contains_sequence(&sub));
        assert!(!only_sub.contains_sequence(&full));
    }

    #[test]
    fn same_curve_merges_to_earliest_start() {
        let s = ThresholdSet::new(
            Interval::unit(),
            vec![q(1, 2)],
            vec![standard(5), standard(3)],
        )
        .unwrap();
        assert_eq!(s.sequences(), &[standard(3)]);
        assert_eq!(s.points(), &[q(1, 2)]);
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let s = ThresholdSet::new(
            Interval::unit(),
            vec![q(2, 5), q(1, 1)],
            vec![reciprocal_family(2, 2)],
        )
        .unwrap();
        let json = s.to_canonical_json();
        assert_eq!(
            json,
            r#"{"ambient":{"lo":"0","lo_closed":false,"hi":"1","hi_closed":true},"points":["2/5"],"sequences":[{"p":1,"q":2,"r":2,"s":0,"n0":2,"direction":"decreasing"}]}"#
        );
        let back = ThresholdSet::from_json(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_canonical_json(), json);
    }

    #[test]
    fn empty_set_queries_are_total() {
        let e = ThresholdSet::empty(Interval::unit());
        assert!(!e.contains(&q(1, 2)).unwrap());
        assert!(e.elements_above(&Rational::zero()).unwrap().is_empty());
        assert!(e.accumulation_points_above(&Rational::zero()).is_empty());
        assert!(e.satisfies_acc_above(&Rational::zero()).holds);
        assert_eq!(e.sup_below(&q(1, 1)).unwrap(), None);
    }

    fn arb_decreasing() -> impl Strategy<Value = MonotoneSequence> {
        // 1/a + 1/(c·n) style families with a ≥ 2
        (2i64..6, 1i64..4, 2u64..5)
            .prop_map(|(a, c, n0)| MonotoneSequence::new(a, a * c, a * c, 0, n0).unwrap())
    }

    fn arb_set() -> impl Strategy<Value = ThresholdSet> {
        (
            prop::collection::vec((1i64..40, 1i64..40), 0..6),
            prop::collection::vec(arb_decreasing(), 0..4),
        )
            .prop_filter_map("points must be in (0, 1]", |(pts, seqs)| {
                let points = pts
                    .into_iter()
                    .filter(|(n, d)| n <= d)
                    .map(|(n, d)| q(n, d))
                    .collect();
                ThresholdSet::new(Interval::unit(), points, seqs).ok()
            })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(s in arb_set()) {
            let once = s.canonicalize();
            prop_assert_eq!(once.canonicalize(), once.clone());
            prop_assert_eq!(once, s);
        }

        #[test]
        fn elements_above_round_trip(s in arb_set(), tn in 7i64..10,
                                     probes in prop::collection::vec((1i64..60, 1i64..60), 50)) {
            let t = q(tn, 10);
            // families have limit ≤ 1/2 < t, so the slice is finite
            let listed = s.elements_above(&t).unwrap();
            for x in &listed {
                prop_assert!(s.contains(x).unwrap());
                prop_assert!(x > &t);
            }
            for (n, d) in probes {
                if n > d { continue; }
                let x = q(n, d);
                if listed.binary_search_by(|y| x.cmp(y)).is_err() {
                    prop_assert!(!s.contains(&x).unwrap() || x <= t);
                }
            }
        }

        #[test]
        fn map_dcoef_commutes_with_membership(s in arb_set(), m in 1u64..=50,
                                              n in 1i64..60, d in 1i64..60) {
            prop_assume!(n <= d);
            let f = q(n, d);
            let image = s.map_dcoef(m).unwrap();
            let mapped = (Rational::integer(m as i64 - 1) + &f) / Rational::integer(m as i64);
            prop_assert_eq!(image.contains(&mapped).unwrap(), s.contains(&f).unwrap());
        }

        #[test]
        fn accumulation_points_are_limits_not_isolated(s in arb_set()) {
            let radius = q(1, 1_000_000);
            for l in s.accumulation_points_above(&Rational::zero()) {
                // some element other than l lies within the radius
                let near = s.sequences().iter().any(|seq| {
                    let r = seq.indices_where(Rel::Lt, &(&l + &radius))
                        .intersect(&seq.indices_where(Rel::Gt, &(&l - &radius)));
                    !r.is_empty() && r.iter().take(2).any(|n| seq.term(&n) != l)
                });
                prop_assert!(near);
            }
        }
    }
}
