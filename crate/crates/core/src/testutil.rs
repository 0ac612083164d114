//! Shared proptest strategies.

use crate::spline::KnotVector;
use proptest::prelude::*;

/// Open knot vectors with p in 1..=4, up to six spans and interior
/// multiplicities up to p.
pub fn knot_vector_strategy() -> impl Strategy<Value = KnotVector> {
    knot_vectors_with_min_gap(0.05)
}

/// As [`knot_vector_strategy`] with span lengths in `[min_gap, 1)`.
pub fn knot_vectors_with_min_gap(min_gap: f64) -> impl Strategy<Value = KnotVector> {
    (1usize..=4, 1usize..=6)
        .prop_flat_map(move |(p, spans)| {
            let mults = proptest::collection::vec(1usize..=p, spans - 1);
            let gaps = proptest::collection::vec(min_gap..1.0, spans);
            (Just(p), mults, gaps)
        })
        .prop_map(|(p, mults, gaps)| {
            let mut x = -0.5;
            let mut interior = Vec::new();
            for (g, m) in gaps.iter().zip(mults.iter()) {
                x += g;
                interior.extend(std::iter::repeat(x).take(*m));
            }
            let b = x + gaps.last().unwrap();
            KnotVector::open(p, -0.5, b, interior).unwrap()
        })
}
