//! Exact rational threshold arithmetic.
//!
//! Coefficient sets `I₊` and `D(I)`, the Diophantine threshold sets `N₁(I)`,
//! log canonical thresholds of monomial and resolution data, and the
//! accumulation-point checks that tie them together. Every value is an
//! exact [`Rational`]; sets with infinitely many elements are represented
//! by [`ThresholdSet`].

pub mod acc;
pub mod adjunction;
pub mod lct;
pub mod lp;
pub mod rational;
pub mod ratset;
pub mod solver;

pub use acc::{
    compare_n1_igusa, curve_witness, igusa_pieces, igusa_set, t1_set, verify_dim_ladder,
    CompareReport, IgusaPiece, LadderReport, LadderWitness,
};
pub use adjunction::{
    d_compose, i_plus, increasing_witness, seq_less, verify_lemma44, AdjunctionError,
    CoefficientForm, CoefficientSequence, CoefficientSet, DWitness, Lemma44Bounds, Lemma44Report,
    Variant,
};
pub use lct::{
    balancing_weights, check_multiplicity_bounds, curve_lct, lct_from_resolution, newton_lct,
    weighted_candidate, BoundsReport, BoundsStatus, CurveReport, LctError, LctValue,
    MonomialDivisor, NewtonResult, ResolutionTable, WeightVector,
};
pub use rational::{q, ParseRationalError, Rational};
pub use ratset::{
    ChainVerdict, Direction, IndexRange, Interval, KernelError, MonotoneSequence, Rel, SetDocument,
    ThresholdSet,
};
pub use solver::{
    lemma45_solve, n1_accumulation_points_above, n1_enumerate_above, n1_member, n1_sup_below_one,
    AccumulationPoint, Enumeration, Family, SearchReport, SolutionWitness, SolverConfig,
    SolverError, SupBelowOne, TermDatum, TermM, WitnessError,
};
