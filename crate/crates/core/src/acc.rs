//! Plane-curve and curve threshold families and the accumulation ladder
//! between them.
//!
//! The plane-curve family is `{1/a + 1/b : 2 ≤ a ≤ b}` (irreducible curves
//! only; reducible and boundary cases are not modelled). The curve set is
//! `{1/m : m ≥ 1}`. The ladder check asserts that the accumulation points of
//! the first, above a cutoff, are exactly the second minus `1`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::adjunction::CoefficientSet;
use crate::rational::Rational;
use crate::ratset::{Direction, Interval, MonotoneSequence, ThresholdSet};
use crate::solver::{n1_enumerate_above, SolutionWitness, SolverConfig, SolverError, TermDatum};

/// One piece of the plane-curve family above a cutoff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IgusaPiece {
    /// `b ↦ 1/a + 1/b` for `b ≥ a`; every term lies above the cutoff.
    Family {
        a: u64,
        sequence: MonotoneSequence,
    },
    Point {
        a: u64,
        b: u64,
        value: Rational,
    },
}

fn check_cutoff(t: &Rational) -> Result<(), SolverError> {
    if !t.is_positive() || t >= &Rational::one() {
        return Err(SolverError::Domain(format!("cutoff {t} is not in (0, 1)")));
    }
    Ok(())
}

fn slice(t: &Rational) -> Interval {
    Interval::new(t.clone(), false, Rational::one(), true)
}

fn inv(n: u64) -> Rational {
    Rational::new(1, n as i64)
}

/// The pieces of `{1/a + 1/b : 2 ≤ a ≤ b} ∩ (t, 1]`.
pub fn igusa_pieces(t: &Rational) -> Result<Vec<IgusaPiece>, SolverError> {
    check_cutoff(t)?;
    let mut out = Vec::new();
    // values with this a are at most 2/a
    let mut a = 2u64;
    while inv(a).mul_int(2) > *t {
        if inv(a) >= *t {
            let sequence = MonotoneSequence::new(1, a as i64, a as i64, 0, a)?;
            out.push(IgusaPiece::Family { a, sequence });
        } else {
            let mut b = a;
            loop {
                let value = inv(a) + inv(b);
                if value <= *t {
                    break;
                }
                out.push(IgusaPiece::Point { a, b, value });
                b += 1;
            }
        }
        a += 1;
    }
    Ok(out)
}

pub fn igusa_set(t: &Rational) -> Result<ThresholdSet, SolverError> {
    let mut points = Vec::new();
    let mut sequences = Vec::new();
    for piece in igusa_pieces(t)? {
        match piece {
            IgusaPiece::Family { sequence, .. } => sequences.push(sequence),
            IgusaPiece::Point { value, .. } => points.push(value),
        }
    }
    Ok(ThresholdSet::new(slice(t), points, sequences)?)
}

/// `{1/m : m ≥ 1} ∩ (t, 1]`.
pub fn t1_set(t: &Rational) -> Result<ThresholdSet, SolverError> {
    check_cutoff(t)?;
    let points = (1u64..).map(inv).take_while(|x| x > t).collect();
    Ok(ThresholdSet::from_points(slice(t), points)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderWitness {
    pub limit: Rational,
    pub a: u64,
    pub family: MonotoneSequence,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderReport {
    pub cutoff: Rational,
    /// Accumulation points of the plane-curve slice, ascending.
    pub accumulation: Vec<Rational>,
    /// The curve slice without `1`, ascending.
    pub lower_dimension: Vec<Rational>,
    pub witnesses: Vec<LadderWitness>,
    /// In the curve slice but not an accumulation point.
    pub missing: Vec<Rational>,
    /// An accumulation point outside the curve slice.
    pub extra: Vec<Rational>,
    /// Limits approached from below, which would break ACC.
    pub increasing: Vec<Rational>,
    pub passed: bool,
}

pub fn verify_dim_ladder(t: &Rational) -> Result<LadderReport, SolverError> {
    let igusa = igusa_set(t)?;
    let mut accumulation = igusa.accumulation_points_above(t);
    accumulation.sort();
    let mut lower: Vec<Rational> = t1_set(t)?
        .points()
        .iter()
        .filter(|x| !x.is_one())
        .cloned()
        .collect();
    lower.sort();
    let missing: Vec<Rational> = lower
        .iter()
        .filter(|x| !accumulation.contains(x))
        .cloned()
        .collect();
    let extra: Vec<Rational> = accumulation
        .iter()
        .filter(|x| !lower.contains(x))
        .cloned()
        .collect();
    let increasing: Vec<Rational> = igusa
        .sequences()
        .iter()
        .filter(|s| s.direction() == Direction::Increasing && &s.limit() > t)
        .map(MonotoneSequence::limit)
        .collect();
    let witnesses = igusa_pieces(t)?
        .into_iter()
        .filter_map(|p| match p {
            IgusaPiece::Family { a, sequence } => Some(LadderWitness {
                limit: sequence.limit(),
                a,
                direction: sequence.direction(),
                family: sequence,
            }),
            IgusaPiece::Point { .. } => None,
        })
        .filter(|w| lower.contains(&w.limit))
        .collect::<Vec<_>>();
    let witnessed = lower.iter().all(|x| {
        witnesses
            .iter()
            .any(|w| &w.limit == x && w.direction == Direction::Decreasing)
    });
    let passed = missing.is_empty() && extra.is_empty() && increasing.is_empty() && witnessed;
    Ok(LadderReport {
        cutoff: t.clone(),
        accumulation,
        lower_dimension: lower,
        witnesses,
        missing,
        extra,
        increasing,
        passed,
    })
}

/// `(a − 1)/a + (b − 1)/b + c = 2` with `c = 1/a + 1/b`.
pub fn curve_witness(a: u64, b: u64) -> SolutionWitness {
    SolutionWitness {
        a: inv(a) + inv(b),
        target: Rational::integer(2),
        leading: None,
        terms: vec![
            TermDatum::fixed(a, 0, Rational::zero()),
            TermDatum::fixed(b, 0, Rational::zero()),
            TermDatum::fixed(1, 1, Rational::zero()),
        ],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub cutoff: Rational,
    pub points_checked: usize,
    pub families_checked: usize,
    /// Plane-curve points missing from the `N₁` slice.
    pub missing_points: Vec<Rational>,
    /// Plane-curve families not contained in the `N₁` slice, by `a`.
    pub missing_families: Vec<u64>,
    /// Direct witnesses that failed to verify, as `(a, b)`.
    pub bad_witnesses: Vec<(u64, u64)>,
    pub passed: bool,
}

/// Every plane-curve threshold above `t` lies in `N₁({1})`.
pub fn compare_n1_igusa(t: &Rational, cfg: &SolverConfig) -> Result<CompareReport, SolverError> {
    let pieces = igusa_pieces(t)?;
    let ones = CoefficientSet::new([Rational::one()])?;
    let n1 = n1_enumerate_above(t, &ones, &Rational::integer(2), cfg)?.set;
    let mut report = CompareReport {
        cutoff: t.clone(),
        points_checked: 0,
        families_checked: 0,
        missing_points: Vec::new(),
        missing_families: Vec::new(),
        bad_witnesses: Vec::new(),
        passed: false,
    };
    for piece in &pieces {
        match piece {
            IgusaPiece::Point { a, b, value } => {
                report.points_checked += 1;
                if !n1.contains(value)? {
                    report.missing_points.push(value.clone());
                }
                if curve_witness(*a, *b).verify().is_err() {
                    report.bad_witnesses.push((*a, *b));
                }
            }
            IgusaPiece::Family { a, sequence } => {
                report.families_checked += 1;
                if !n1.contains_sequence(sequence) {
                    report.missing_families.push(*a);
                }
                // the first few members get explicit witnesses too
                for b in *a..*a + 4 {
                    let w = curve_witness(*a, b);
                    if w.verify().is_err() || w.a != sequence.term(&BigInt::from(b)) {
                        report.bad_witnesses.push((*a, b));
                    }
                }
            }
        }
    }
    report.passed = report.missing_points.is_empty()
        && report.missing_families.is_empty()
        && report.bad_witnesses.is_empty();
    Ok(report)
}
