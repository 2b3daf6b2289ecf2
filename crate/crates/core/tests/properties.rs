mod common;

use proptest::prelude::*;
use rug::{Float, Rational};

use bvtn::algebra::{determinant, expand, matvec, solve_system};
use bvtn::matrix::norm2;
use bvtn::nodes::bernstein;
use bvtn::oracle::{bernstein_vandermonde_exact, neville_exact};
use bvtn::spectral::{self, PrecisionPolicy};
use bvtn::{compute_bd, compute_bd_exact, validate_nodes, BasisDegree, BdMatrix, RationalNodeSet};

use common::{dyadic_nodes, rel, small_rationals};

const U: f64 = f64::EPSILON / 2.0;

fn bd(x: &[f64], n: usize) -> BdMatrix<f64> {
    let nodes = validate_nodes(x).unwrap();
    compute_bd(&nodes, BasisDegree::new(n, &nodes).unwrap()).unwrap()
}

/// Picks `n <= l` from a fraction in [0, 1].
fn degree_for(len: usize, t: f64) -> usize {
    ((len - 1) as f64 * t).round() as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_formulas_match_elimination(x in small_rationals(10), t in 0.0f64..=1.0) {
        let n = degree_for(x.len(), t);
        let nodes = RationalNodeSet::new(x.clone()).unwrap();
        let (elim, _) = neville_exact(&nodes, n).unwrap();
        prop_assert_eq!(compute_bd_exact(&x, n).unwrap(), elim);
    }

    #[test]
    fn rational_expand_reproduces_matrix(x in small_rationals(9), t in 0.0f64..=1.0) {
        let n = degree_for(x.len(), t);
        let nodes = RationalNodeSet::new(x.clone()).unwrap();
        let bd = compute_bd_exact(&x, n).unwrap();
        prop_assert_eq!(expand(&bd), bernstein_vandermonde_exact(&nodes, n).unwrap());
    }

    #[test]
    fn float_entries_close_to_exact(x in dyadic_nodes(65), t in 0.0f64..=1.0) {
        let n = degree_for(x.len(), t);
        let approx = bd(&x, n);
        let exact_nodes: Vec<Rational> = x.iter().map(|v| Rational::from_f64(*v).unwrap()).collect();
        let exact = compute_bd_exact(&exact_nodes, n).unwrap();
        for (a, e) in approx.entries().as_slice().iter().zip(exact.entries().as_slice()) {
            let err = (Rational::from_f64(*a).unwrap() - e).abs() / e;
            prop_assert!(err <= Rational::from_f64(64.0 * U).unwrap(), "entry error {}", err.to_f64() / U);
        }
    }

    #[test]
    fn entries_positive_and_deterministic(x in dyadic_nodes(40), t in 0.0f64..=1.0) {
        let n = degree_for(x.len(), t);
        let a = bd(&x, n);
        prop_assert!(a.entries().as_slice().iter().all(|v| *v > 0.0));
        let b = bd(&x, n);
        let same = a.entries().as_slice().iter().zip(b.entries().as_slice()).all(|(p, q)| p.to_bits() == q.to_bits());
        prop_assert!(same);
    }

    #[test]
    fn expansion_matches_direct_evaluation(x in dyadic_nodes(33), t in 0.0f64..=1.0) {
        let n = degree_for(x.len(), t);
        let a = expand(&bd(&x, n));
        for (i, xi) in x.iter().enumerate() {
            for j in 0..=n {
                let direct = bernstein(n, j, *xi);
                prop_assert!(rel(a[(i, j)], direct) <= 1e-13, "({}, {})", i, j);
            }
        }
    }

    #[test]
    fn solve_inverts_matvec(x in dyadic_nodes(25), b in prop::collection::vec(-1.0f64..1.0, 25)) {
        let m = bd(&x, x.len() - 1);
        let b = &b[..x.len()];
        let sol = solve_system(&m, b).unwrap();
        let back = matvec(&m, &sol).unwrap();
        let resid: Vec<f64> = back.iter().zip(b).map(|(p, q)| p - q).collect();
        let a = expand(&m);
        let sv = spectral::baseline_singular_values(&a).unwrap();
        prop_assert!(norm2(&resid) <= 1e-12 * sv.values[0] * norm2(&sol));
    }

    #[test]
    fn rational_determinant_is_exact(x in small_rationals(8)) {
        let n = x.len() - 1;
        let nodes = RationalNodeSet::new(x.clone()).unwrap();
        let bd = compute_bd_exact(&x, n).unwrap();
        let direct = bvtn::oracle::determinant_exact(&bernstein_vandermonde_exact(&nodes, n).unwrap());
        prop_assert_eq!(determinant(&bd).unwrap(), direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn perron_root_and_determinant(x in dyadic_nodes(16)) {
        let m = bd(&x, x.len() - 1);
        let p = PrecisionPolicy::default();
        let ev = spectral::eigenvalues(&m, &p).unwrap();
        let sv = spectral::singular_values(&m, &p).unwrap();
        prop_assert!((ev.values[0] - 1.0).abs() <= 1e-13);
        prop_assert!(ev.is_strictly_positive() && ev.is_strictly_decreasing());
        prop_assert!(sv.is_strictly_positive() && sv.is_strictly_decreasing());
        let det = determinant(&m).unwrap();
        prop_assert!(rel(ev.values.iter().product(), det) <= 1e-12);
        prop_assert!(rel(sv.values.iter().product(), det) <= 1e-12);
    }

    #[test]
    fn restart_at_achieved_bits_is_stable(x in dyadic_nodes(12)) {
        let m = bd(&x, x.len() - 1);
        let p = PrecisionPolicy::default();
        let first = spectral::eigenvalues(&m, &p).unwrap();
        let again = spectral::eigenvalues(&m, &PrecisionPolicy { start_bits: first.achieved_bits, ..p }).unwrap();
        for (a, b) in first.values.iter().zip(&again.values) {
            prop_assert!(rel(*b, *a) <= p.stabilization_rtol);
        }
    }

    #[test]
    fn qr_reconstructs(x in dyadic_nodes(14), t in 0.0f64..=1.0) {
        let n = degree_for(x.len(), t);
        let m = bd(&x, n);
        let qr = spectral::qr(&m, &PrecisionPolicy::default()).unwrap();
        let a = expand(&m);
        let rows = a.rows();
        let r_pad = bvtn::Matrix::from_fn(rows, n + 1, |i, j| if i <= n { qr.r[(i, j)] } else { 0.0 });
        let back = qr.q.matmul(&r_pad);
        let err = back.as_slice().iter().zip(a.as_slice()).fold(0.0f64, |e, (p, q)| e.max((p - q).abs()));
        prop_assert!(err <= 1e-13 * a.max_abs());
        prop_assert!((0..=n).all(|k| qr.r[(k, k)] > 0.0));
    }

    #[test]
    fn least_squares_is_optimal(x in dyadic_nodes(14), t in 0.0f64..1.0, f in prop::collection::vec(-1.0f64..1.0, 14)) {
        prop_assume!(x.len() >= 2);
        let n = ((x.len() - 2) as f64 * t) as usize;
        let m = bd(&x, n);
        let f = &f[..x.len()];
        let sol = spectral::least_squares(&m, f, &PrecisionPolicy::default()).unwrap();
        let a = expand(&m);
        let fnorm = f.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let atr = a.transpose().matvec(&sol.residual);
        prop_assert!(atr.iter().all(|v| v.abs() <= 1e-12 * a.norm_one() * fnorm.max(f64::MIN_POSITIVE)));

        // Residual norm in extended precision to see past double rounding.
        let norm_at = |c: &[f64]| {
            let mut s = Float::with_val(256, 0);
            for i in 0..a.rows() {
                let mut r = Float::with_val(256, f[i]);
                for j in 0..a.cols() {
                    r -= Float::with_val(256, a[(i, j)]) * c[j];
                }
                s += r.square();
            }
            s.sqrt()
        };
        let best = norm_at(&sol.coefficients);
        for k in 0..sol.coefficients.len() {
            for d in [1e-6, -1e-6] {
                let mut c = sol.coefficients.clone();
                c[k] += d;
                prop_assert!(norm_at(&c) >= best);
            }
        }
    }
}
