//! Property tests for the structural invariants of the family.

use num_complex::Complex64;
use proptest::prelude::*;
use qmbf::qbessel::{a_coefficient, i1_from_i2, i1_series, OrderParam};
use qmbf::qcore::{eq_exp, eq_exp_big, q_gamma, qpochhammer_finite, qpochhammer_infinite, QContext};
use qmbf::qhyper::phi_nu;

fn ctx(q: f64) -> QContext {
    QContext::new(q).unwrap()
}

proptest! {
    #[test]
    fn q_exponentials_are_mutual_inverses(
        q in 0.05f64..0.9,
        re in -2.0f64..2.0,
        im in 0.05f64..2.0,
        flip in any::<bool>(),
    ) {
        // points off the real axis are never near the poles q^{-k}
        let z = Complex64::new(re, if flip { -im } else { im });
        let ctx = ctx(q);
        let prod = eq_exp(z, &ctx).unwrap() * eq_exp_big(-z, &ctx).unwrap();
        prop_assert!((prod - 1.0).norm() < 1e-12);
    }

    #[test]
    fn pochhammer_splits_multiplicatively(
        q in 0.05f64..0.9,
        re in -1.5f64..1.5,
        im in -1.5f64..1.5,
        n in 0usize..25,
    ) {
        // (a;q)_inf = (a;q)_n (a q^n; q)_inf
        let a = Complex64::new(re, im);
        let ctx = ctx(q);
        let whole = qpochhammer_infinite(a, &ctx).unwrap().value;
        let head = qpochhammer_finite(a, &ctx, n);
        let tail = qpochhammer_infinite(a * q.powi(n as i32), &ctx).unwrap().value;
        prop_assert!((whole - head * tail).norm() <= 1e-12 * whole.norm().max(1.0));
    }

    #[test]
    fn phi_is_even_bit_for_bit(
        q in 0.1f64..0.9,
        nu in 0.01f64..3.0,
        angle in 0.0f64..std::f64::consts::PI,
        s in 1.2f64..4.0,
    ) {
        let ctx = ctx(q);
        let z = Complex64::from_polar(s * 2.0 / (1.0 - q * q), angle);
        let plus = phi_nu(nu, z, &ctx).unwrap().value;
        let minus = phi_nu(-nu, z, &ctx).unwrap().value;
        prop_assert_eq!(plus, minus);
    }

    #[test]
    fn first_kind_continuation_matches_series(
        q in 0.15f64..0.85,
        nu in 0.0f64..2.5,
        frac in 0.1f64..0.85,
        angle in 0.05f64..3.0,
    ) {
        let ctx = ctx(q);
        let z = Complex64::from_polar(frac * 2.0 / (1.0 - q * q), angle);
        let ord = OrderParam::new(nu);
        let series = i1_series(&ord, z, &ctx).unwrap().value;
        let cont = i1_from_i2(&ord, z, &ctx).unwrap();
        prop_assert!((series - cont).norm() <= 1e-9 * series.norm().max(1e-12));
    }

    #[test]
    fn gamma_functional_equation(q in 0.1f64..0.9, alpha in 0.05f64..4.0) {
        let ctx = ctx(q);
        let lhs = q_gamma(alpha + 1.0, &ctx).unwrap();
        let rhs = (1.0 - q.powf(alpha)) / (1.0 - q) * q_gamma(alpha, &ctx).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * rhs.abs());
    }

    #[test]
    fn laurent_coefficient_shift_is_exact(q in 0.1f64..0.9, nu in 0.01f64..2.0) {
        prop_assume!((nu - nu.round()).abs() > 1e-3);
        let ctx = ctx(q);
        let a = a_coefficient(&OrderParam::new(nu), &ctx).unwrap();
        let a1 = a_coefficient(&OrderParam::new(nu + 1.0), &ctx).unwrap();
        prop_assert!(((a1 - a * q.powf(-nu - 0.5)) / a1).abs() < 1e-12);
    }
}
