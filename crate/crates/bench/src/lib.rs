//! Shared inputs for the benchmarks.

use lctkit::{q, CoefficientSet, MonomialDivisor, Rational};

pub fn coefficient_sets() -> Vec<(&'static str, CoefficientSet)> {
    vec![
        ("{1}", CoefficientSet::new([q(1, 1)]).unwrap()),
        ("{1/2}", CoefficientSet::new([q(1, 2)]).unwrap()),
        (
            "{1/2,1/3}",
            CoefficientSet::new([q(1, 2), q(1, 3)]).unwrap(),
        ),
    ]
}

pub fn cutoffs() -> Vec<Rational> {
    vec![q(4, 5), q(3, 5), q(2, 5)]
}

pub fn divisors() -> Vec<(&'static str, MonomialDivisor)> {
    [
        "(0,2),(3,0)",
        "(0,4),(1,2),(5,0)",
        "(0,0,3),(2,2,0),(0,5,1)",
        "(3,0,0,0),(0,4,0,0),(0,0,5,0),(1,1,1,6)",
    ]
    .into_iter()
    .map(|s| (s, s.parse().unwrap()))
    .collect()
}
