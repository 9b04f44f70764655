//! An infinite strictly increasing chain of coefficient sequences coming
//! from repeated blow-ups, even though only finitely many numbers occur.
//!
//! Start with a line `L` of coefficient one and lines `Lᵢ` with coefficients
//! `cᵢ` summing to two, all in general position on the plane. Blowing up
//! `L ∩ Lᵢ` creates an exceptional curve of coefficient `1 + cᵢ − 1 = cᵢ`,
//! which again meets `L`; so `cᵢ` can be repeated as often as we like.
//!
//! Run with `cargo run -p lctkit --example blowup_chain`.

use lctkit::adjunction::blowup_pullback_coefficient;
use lctkit::{increasing_witness, q, seq_less, CoefficientSequence, Rational, Variant};

fn show(xs: &[Rational]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn main() {
    let c = vec![q(1, 2), q(1, 2), q(1, 3), q(2, 3)];
    let total: Rational = c.iter().cloned().sum();
    assert_eq!(total, Rational::integer(2));
    println!("lines: L with 1, others with {}", show(&c));

    let mut coeffs = vec![Rational::one()];
    coeffs.extend(c.iter().cloned());
    let mut chain = vec![CoefficientSequence::new(coeffs.clone(), Variant::C).unwrap()];

    // keep blowing up the point where L meets the newest curve of coefficient c₀
    let mut newest = c[0].clone();
    for step in 1..=6 {
        let e = blowup_pullback_coefficient(&[1, 1], &[Rational::one(), newest.clone()]).unwrap();
        assert_eq!(e, c[0]);
        coeffs.push(e.clone());
        newest = e;
        let next = CoefficientSequence::new(coeffs.clone(), Variant::C).unwrap();
        let less = seq_less(chain.last().unwrap(), &next).unwrap();
        println!(
            "blow-up {step}: exceptional coefficient {newest}, sequence ({}) larger: {less}",
            show(&coeffs)
        );
        assert!(less);
        chain.push(next);
    }

    // the numbers involved never exceed {1, cᵢ}, so no long increasing list of
    // numbers can be read off the chain
    for len in 1..=chain.len() {
        match increasing_witness(&chain[..len]) {
            Some(xs) => println!("first {len} sequences: increasing numbers {}", show(&xs)),
            None => {
                println!("first {len} sequences: no strictly increasing list of numbers");
                break;
            }
        }
    }

    // the same chain made of increasing sequences is not strictly increasing
    let sorted: Vec<CoefficientSequence> = chain
        .iter()
        .map(|s| {
            let mut v = s.entries().to_vec();
            v.sort();
            v.dedup();
            CoefficientSequence::new(v, Variant::CPlus).unwrap()
        })
        .collect();
    let strict = sorted.windows(2).all(|w| seq_less(&w[0], &w[1]).unwrap());
    println!("as increasing sequences the chain is strictly increasing: {strict}");
}
