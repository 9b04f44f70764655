//! Log canonical thresholds from resolution data, monomial valuations and
//! Newton polytopes.
//!
//! Every threshold is capped at `1`; the uncapped ratio is reported next to
//! it. For a non-degenerate hypersurface the Newton-polytope value is the
//! threshold itself. Non-degeneracy is the caller's business.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LinearProgram, LpError, LpOutcome};
use crate::rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LctError {
    #[error("log discrepancy {0} is negative")]
    NegativeDiscrepancy(Rational),
    #[error("multiplicity {0} is not positive")]
    NonPositiveMultiplicity(Rational),
    #[error("a monomial divisor needs at least one exponent vector")]
    NoExponents,
    #[error("the zero exponent vector is not a divisor")]
    ZeroExponent,
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weights must be nonnegative and not all zero")]
    BadWeights,
    #[error("curve exponents must be positive")]
    BadCurve,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("the threshold LP did not reach an optimum")]
    LpFailed,
}

/// A threshold and the ratio it was capped from; `uncapped = None` is `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LctValue {
    pub capped: Rational,
    pub uncapped: Option<Rational>,
}

impl LctValue {
    fn from_ratio(uncapped: Option<Rational>) -> Self {
        let one = Rational::one();
        let capped = match &uncapped {
            Some(u) if u < &one => u.clone(),
            _ => one,
        };
        LctValue { capped, uncapped }
    }
}

/// Rows `(aᵢ, bᵢ)`: log discrepancy and multiplicity of each divisor on a
/// resolution.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ResolutionTable {
    rows: Vec<(Rational, Rational)>,
}

impl ResolutionTable {
    pub fn new(rows: Vec<(Rational, Rational)>) -> Result<Self, LctError> {
        for (a, b) in &rows {
            if a.is_negative() {
                return Err(LctError::NegativeDiscrepancy(a.clone()));
            }
            if !b.is_positive() {
                return Err(LctError::NonPositiveMultiplicity(b.clone()));
            }
        }
        Ok(ResolutionTable { rows })
    }

    pub fn rows(&self) -> &[(Rational, Rational)] {
        &self.rows
    }
}

/// `a:b,a:b,…`; the empty string is the empty table.
impl FromStr for ResolutionTable {
    type Err = LctError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rows = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| LctError::Parse(part.to_string()))?;
            rows.push((a.parse()?, b.parse()?));
        }
        ResolutionTable::new(rows)
    }
}

/// `min(1, minᵢ aᵢ/bᵢ)`; the empty table gives `1`.
pub fn lct_from_resolution(table: &ResolutionTable) -> LctValue {
    let ratio = table.rows.iter().map(|(a, b)| a / b).min();
    LctValue::from_ratio(ratio)
}

/// Exponent vectors of a monomial-type divisor, `x` first: `y² + x³` is
/// `{(0, 2), (3, 0)}`. Dominated and repeated vectors are dropped; they do
/// not change the Newton polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct MonomialDivisor {
    dim: usize,
    exponents: Vec<Vec<u64>>,
}

impl MonomialDivisor {
    pub fn new(exponents: Vec<Vec<u64>>) -> Result<Self, LctError> {
        let dim = exponents.first().ok_or(LctError::NoExponents)?.len();
        if dim == 0 {
            return Err(LctError::ZeroDimension);
        }
        for e in &exponents {
            if e.len() != dim {
                return Err(LctError::DimensionMismatch {
                    expected: dim,
                    got: e.len(),
                });
            }
            if e.iter().all(|&x| x == 0) {
                return Err(LctError::ZeroExponent);
            }
        }
        let mut es = exponents;
        es.sort();
        es.dedup();
        let dominates =
            |big: &Vec<u64>, small: &Vec<u64>| big.iter().zip(small).all(|(b, s)| b >= s);
        let kept: Vec<Vec<u64>> = es
            .iter()
            .filter(|e| !es.iter().any(|o| o != *e && dominates(e, o)))
            .cloned()
            .collect();
        Ok(MonomialDivisor {
            dim,
            exponents: kept,
        })
    }

    /// `y^a + x^b`.
    pub fn curve(a: u64, b: u64) -> Result<Self, LctError> {
        if a == 0 || b == 0 {
            return Err(LctError::BadCurve);
        }
        MonomialDivisor::new(vec![vec![0, a], vec![b, 0]])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponents(&self) -> &[Vec<u64>] {
        &self.exponents
    }

    /// Order of vanishing at the origin: the least coordinate sum.
    pub fn multiplicity(&self) -> u64 {
        self.exponents
            .iter()
            .map(|e| e.iter().sum())
            .min()
            .expect("divisor is non-empty")
    }
}

impl TryFrom<Vec<Vec<u64>>> for MonomialDivisor {
    type Error = LctError;
    fn try_from(v: Vec<Vec<u64>>) -> Result<Self, Self::Error> {
        MonomialDivisor::new(v)
    }
}

impl From<MonomialDivisor> for Vec<Vec<u64>> {
    fn from(d: MonomialDivisor) -> Self {
        d.exponents
    }
}

impl fmt::Display for MonomialDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|e| {
                let xs: Vec<String> = e.iter().map(u64::to_string).collect();
                format!("({})", xs.join(","))
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// `(0,2),(3,0)`.
impl FromStr for MonomialDivisor {
    type Err = LctError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LctError::Parse(s.to_string());
        let mut exponents = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            rest = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = rest.find(')').ok_or_else(bad)?;
            let e = rest[..close]
                .split(',')
                .map(|x| x.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            exponents.push(e);
            rest = rest[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(bad());
                }
            }
        }
        MonomialDivisor::new(exponents)
    }
}

/// Weights of a monomial valuation. Zero entries are allowed so that
/// coordinate directions can be optimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(w: Vec<Rational>) -> Result<Self, LctError> {
        if w.is_empty() || w.iter().any(Rational::is_negative) || w.iter().all(Rational::is_zero) {
            return Err(LctError::BadWeights);
        }
        Ok(WeightVector(w))
    }

    pub fn from_ints(w: &[u64]) -> Result<Self, LctError> {
        Self::new(w.iter().map(|&x| Rational::integer(x as i64)).collect())
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    fn pair(&self, e: &[u64]) -> Rational {
        self.0
            .iter()
            .zip(e)
            .map(|(w, &x)| w.mul_int(x as i64))
            .sum()
    }
}

impl TryFrom<Vec<Rational>> for WeightVector {
    type Error = LctError;
    fn try_from(v: Vec<Rational>) -> Result<Self, Self::Error> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<Rational> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Weights `(a, b)` on `(x, y)` that balance `y^a + x^b`: both monomials
/// get weight `a·b`.
pub fn balancing_weights(a: u64, b: u64) -> Result<WeightVector, LctError> {
    if a == 0 || b == 0 {
        return Err(LctError::BadCurve);
    }
    WeightVector::from_ints(&[a, b])
}

/// `(Σ wⱼ) / ord_w(D)`, or `None` (`+∞`) when `ord_w(D) = 0`.
pub fn weighted_candidate(
    w: &WeightVector,
    d: &MonomialDivisor,
) -> Result<Option<Rational>, LctError> {
    if w.0.len() != d.dim {
        return Err(LctError::DimensionMismatch {
            expected: d.dim,
            got: w.0.len(),
        });
    }
    let ord = d
        .exponents
        .iter()
        .map(|e| w.pair(e))
        .min()
        .expect("divisor is non-empty");
    let total: Rational = w.0.iter().sum();
    Ok(total.checked_div(&ord))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonResult {
    pub lct: LctValue,
    /// Least `t` with `t·(1, …, 1)` in the Newton region.
    pub t_star: Rational,
    /// Convex weights on the exponents realising `t*`.
    pub mu: Vec<Rational>,
    /// Dual weights, summing to one, whose candidate equals `1/t*`.
    pub weights: WeightVector,
}

/// `min(1, 1/t*)` by exact LP:
/// minimise `t` subject to `Σ μₑ·e ≤ t·𝟙`, `Σ μₑ = 1`, `μ ≥ 0`.
pub fn newton_lct(d: &MonomialDivisor) -> Result<NewtonResult, LctError> {
    newton_lp(d.dim, &d.exponents)
}

fn newton_lp(n: usize, exponents: &[Vec<u64>]) -> Result<NewtonResult, LctError> {
    let ne = exponents.len();
    // columns: μ (ne), t, slacks (n)
    let cols = ne + 1 + n;
    let mut a = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row = vec![Rational::zero(); cols];
        for (i, e) in exponents.iter().enumerate() {
            row[i] = Rational::integer(e[j] as i64);
        }
        row[ne] = -Rational::one();
        row[ne + 1 + j] = Rational::one();
        a.push(row);
    }
    let mut sum_row = vec![Rational::zero(); cols];
    for x in sum_row.iter_mut().take(ne) {
        *x = Rational::one();
    }
    a.push(sum_row);
    let mut b = vec![Rational::zero(); n];
    b.push(Rational::one());
    let mut c = vec![Rational::zero(); cols];
    c[ne] = Rational::one();
    let sol = match lp::solve(&LinearProgram { a, b, c })? {
        LpOutcome::Optimal(s) => s,
        _ => return Err(LctError::LpFailed),
    };
    let t_star = sol.value.clone();
    let mu = sol.x[..ne].to_vec();
    // re-substitute: every constraint holds exactly
    let total: Rational = mu.iter().sum();
    assert!(total.is_one() && mu.iter().all(|x| !x.is_negative()));
    for j in 0..n {
        let lhs: Rational = mu
            .iter()
            .zip(exponents)
            .map(|(m, e)| m.mul_int(e[j] as i64))
            .sum();
        assert!(lhs <= t_star, "LP solution violates coordinate {j}");
    }
    // the price of row j is −wⱼ
    let weights = WeightVector::new(sol.duals[..n].iter().map(|y| -y).collect())?;
    debug_assert_eq!(weights.0.iter().sum::<Rational>(), Rational::one());
    let lct = LctValue::from_ratio(Rational::one().checked_div(&t_star));
    Ok(NewtonResult {
        lct,
        t_star,
        mu,
        weights,
    })
}

/// `t*` for plane curves straight from the polygon: the smallest
/// `max(x, y)` over the convex hull is reached at a vertex or where an edge
/// crosses the diagonal.
pub fn newton_t_star_plane(d: &MonomialDivisor) -> Result<Rational, LctError> {
    if d.dim != 2 {
        return Err(LctError::DimensionMismatch {
            expected: 2,
            got: d.dim,
        });
    }
    let pts: Vec<(Rational, Rational)> = d
        .exponents
        .iter()
        .map(|e| {
            (
                Rational::integer(e[0] as i64),
                Rational::integer(e[1] as i64),
            )
        })
        .collect();
    let mut best = pts
        .iter()
        .map(|(x, y)| Rational::max_of(x, y).clone())
        .min()
        .expect("divisor is non-empty");
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            // p + λ(q − p) on the diagonal
            let den = (&q.0 - &p.0) - (&q.1 - &p.1);
            if let Some(lambda) = (&p.1 - &p.0).checked_div(&den) {
                if !lambda.is_negative() && lambda <= Rational::one() {
                    let v = &p.0 + &(&lambda * &(&q.0 - &p.0));
                    best = Rational::min_of(&best, &v).clone();
                }
            }
        }
    }
    Ok(best)
}

/// Normals of the lower-left edges of a plane Newton polygon, plus the two
/// coordinate directions.
pub fn plane_facet_normals(d: &MonomialDivisor) -> Result<Vec<WeightVector>, LctError> {
    if d.dim != 2 {
        return Err(LctError::DimensionMismatch {
            expected: 2,
            got: d.dim,
        });
    }
    let mut out = vec![
        WeightVector::from_ints(&[1, 0])?,
        WeightVector::from_ints(&[0, 1])?,
    ];
    let es = &d.exponents;
    for (i, p) in es.iter().enumerate() {
        for q in &es[i + 1..] {
            let (dx, dy) = (q[0] as i64 - p[0] as i64, q[1] as i64 - p[1] as i64);
            // after pruning every pair slopes downwards
            if dx.signum() * dy.signum() < 0 {
                let w = WeightVector::from_ints(&[dy.unsigned_abs(), dx.unsigned_abs()])?;
                if !out.contains(&w) {
                    out.push(w);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveReport {
    pub a: u64,
    pub b: u64,
    pub lct: LctValue,
    /// `−2 + (a−1)/a + (b−1)/b + c = 0`, checked when the uncapped `c ≤ 1`.
    pub identity: Option<bool>,
    pub newton: Rational,
    pub weighted: Rational,
    pub agrees: bool,
}

/// The threshold of `y^a + x^b`: `1/a + 1/b`, capped at one.
pub fn curve_lct(a: u64, b: u64) -> Result<CurveReport, LctError> {
    let d = MonomialDivisor::curve(a, b)?;
    let (aq, bq) = (Rational::integer(a as i64), Rational::integer(b as i64));
    let c = aq.recip().expect("a > 0") + bq.recip().expect("b > 0");
    let lct = LctValue::from_ratio(Some(c.clone()));
    let identity = (c <= Rational::one()).then(|| {
        let s = Rational::integer(-2)
            + (&aq - &Rational::one()) / &aq
            + (&bq - &Rational::one()) / &bq
            + &c;
        s.is_zero()
    });
    let newton = newton_lct(&d)?.lct.capped;
    let weighted = weighted_candidate(&balancing_weights(a, b)?, &d)?
        .map(|x| LctValue::from_ratio(Some(x)).capped)
        .expect("balancing weights are positive");
    let agrees = newton == lct.capped && weighted == lct.capped;
    Ok(CurveReport {
        a,
        b,
        lct,
        identity,
        newton,
        weighted,
        agrees,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsStatus {
    Both,
    LowerOnly,
    NotAsserted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub dim: usize,
    pub multiplicity: u64,
    pub lct: Rational,
    pub lower: Rational,
    pub upper: Rational,
    pub status: BoundsStatus,
    /// Whether every asserted bound holds.
    pub holds: bool,
}

/// `1/mult ≤ lct ≤ N/mult` in ambient dimension `N`; only the lower bound
/// when `N − 1 ≤ mult < N`, nothing below that.
pub fn check_multiplicity_bounds(d: &MonomialDivisor) -> Result<BoundsReport, LctError> {
    let mult = d.multiplicity();
    let n = d.dim as u64;
    let lct = newton_lct(d)?.lct.capped;
    let mq = Rational::integer(mult as i64);
    let lower = mq.recip().expect("multiplicity is positive");
    let upper = Rational::integer(n as i64) / &mq;
    let status = if mult >= n {
        BoundsStatus::Both
    } else if mult + 1 >= n {
        BoundsStatus::LowerOnly
    } else {
        BoundsStatus::NotAsserted
    };
    let holds = match status {
        BoundsStatus::Both => lower <= lct && lct <= upper,
        BoundsStatus::LowerOnly => lower <= lct,
        BoundsStatus::NotAsserted => true,
    };
    Ok(BoundsReport {
        dim: d.dim,
        multiplicity: mult,
        lct,
        lower,
        upper,
        status,
        holds,
    })
}
