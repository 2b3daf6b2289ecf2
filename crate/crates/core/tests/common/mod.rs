#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use rug::Rational;

use bvtn::RationalNodeSet;

/// Sorted distinct fractions `p/q` with `2 <= q <= max_den`.
pub fn rational_nodes(rng: &mut impl Rng, count: usize, max_den: i64) -> RationalNodeSet {
    let mut v: Vec<Rational> = Vec::with_capacity(count);
    while v.len() < count {
        let q = rng.random_range(2..=max_den);
        let p = rng.random_range(1..q);
        let r = Rational::from((p, q));
        if !v.contains(&r) {
            v.push(r);
        }
    }
    v.sort();
    RationalNodeSet::new(v).unwrap()
}

/// Sorted nodes in (0, 1) with neighbouring gaps of at least `min_gap`.
pub fn double_nodes(rng: &mut impl Rng, count: usize, min_gap: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..count).map(|_| rng.random_range(0.01..0.99)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if v.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return v;
        }
    }
}

/// Sorted distinct dyadic nodes `k / 2^20`, exactly representable as doubles.
pub fn dyadic_nodes(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(1u32..(1 << 20), 1..=max_len).prop_map(|s| {
        s.into_iter()
            .map(|k| k as f64 / (1u32 << 20) as f64)
            .collect()
    })
}

/// Sorted distinct rational nodes with denominators up to 64.
pub fn small_rationals(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((2i64..=64, 0.0f64..1.0), 1..=max_len).prop_map(|pairs| {
        let mut v: Vec<Rational> = pairs
            .into_iter()
            .map(|(q, t)| {
                let p = 1 + ((q - 1) as f64 * t) as i64;
                Rational::from((p.min(q - 1), q))
            })
            .collect();
        v.sort();
        v.dedup();
        v
    })
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
