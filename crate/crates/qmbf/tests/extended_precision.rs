//! Oracle checks against independent double-double (~31 digit)
//! computations of the defining series.

use num_complex::Complex64;
use qmbf::dd::Dd;
use qmbf::qbessel::{i1_series, i2_series, OrderParam};
use qmbf::qcore::{qpochhammer_infinite, QContext};
use qmbf::verify::classical_bessel_k;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Parse a positive decimal "0.d1d2..." into double-double precision.
fn dd_parse_fraction(digits: &str) -> Dd {
    let frac = digits.strip_prefix("0.").expect("0.xxx literal");
    let mut acc = Dd::ZERO;
    for ch in frac.chars() {
        let d = ch.to_digit(10).expect("decimal digit") as f64;
        acc = acc.mul_f64(10.0).add_f64(d);
    }
    acc.div(Dd::from_f64(10.0).powi(frac.len() as i32))
}

/// ln 2 summed from scratch: sum_k 1/(k 2^k).
fn dd_ln2() -> Dd {
    let mut sum = Dd::ZERO;
    for k in 1..=120 {
        let term = Dd::from_f64(2f64.powi(-k)).div(Dd::from_f64(k as f64));
        sum = sum.add(term);
    }
    sum
}

fn dd_pi() -> Dd {
    Dd::new(std::f64::consts::PI, 1.224_646_799_147_353_2e-16)
}

const EULER_GAMMA_DIGITS: &str = "0.57721566490153286060651209008240243104215933593992";
const ZETA3_DIGITS: &str = "0.20205690315959428539973816151144999076498629234049"; // zeta(3) - 1

/// exp(x) for |x| < 0.05 by Taylor series in double-double.
fn dd_exp_small(x: Dd) -> Dd {
    assert!(x.to_f64().abs() < 0.05);
    let mut sum = Dd::ONE;
    let mut term = Dd::ONE;
    for k in 1..=25 {
        term = term.mul(x).div(Dd::from_f64(k as f64));
        sum = sum.add(term);
    }
    sum
}

#[test]
fn decimal_parser_agrees_with_series_ln2() {
    let parsed = dd_parse_fraction("0.69314718055994530941723212145817656808");
    let summed = dd_ln2();
    assert!(parsed.sub(summed).abs().to_f64() < 1e-30);
}

#[test]
fn infinite_pochhammer_matches_dd_product() {
    // (1/4; 1/2)_inf by 200 exact double-double factors
    let a = Dd::from_ratio(1, 4);
    let mut qk = Dd::ONE;
    let half = Dd::from_ratio(1, 2);
    let mut prod = Dd::ONE;
    for _ in 0..200 {
        prod = prod.mul(Dd::ONE.sub(a.mul(qk)));
        qk = qk.mul(half);
    }
    let ctx = QContext::new(0.5).unwrap();
    let got = qpochhammer_infinite(c(0.25), &ctx).unwrap().value.re;
    assert!(
        (got - prod.to_f64()).abs() < 1e-14 * prod.to_f64().abs(),
        "{got} vs {}",
        prod.to_f64()
    );
}

/// Gamma_p(alpha) in double-double for p = 1/4 and alpha = k + 1/2 or
/// k + 1: `(p;p)_inf / (p^alpha;p)_inf * (1-p)^{1-alpha}` with every power
/// of p exact (dyadic) and the half powers through one square root.
fn dd_gamma_quarter_base(twice_alpha: i32) -> Dd {
    assert!(twice_alpha >= 1);
    let p = Dd::from_ratio(1, 4);
    let p_inf = {
        let mut prod = Dd::ONE;
        let mut pj = p;
        for _ in 0..80 {
            prod = prod.mul(Dd::ONE.sub(pj));
            pj = pj.mul(p);
        }
        prod
    };
    // p^alpha = 2^{-twice_alpha}; exact when twice_alpha even, otherwise
    // dyadic too since sqrt(1/4) = 1/2
    let p_alpha = Dd::from_f64(2f64.powi(-twice_alpha));
    let pa_inf = {
        let mut prod = Dd::ONE;
        let mut x = p_alpha;
        for _ in 0..80 {
            prod = prod.mul(Dd::ONE.sub(x));
            x = x.mul(p);
        }
        prod
    };
    // (1-p)^{1-alpha} = (3/4)^{1 - twice_alpha/2}
    let base = Dd::from_ratio(3, 4);
    let mut pw = base.powi(1 - twice_alpha / 2);
    if twice_alpha % 2 != 0 {
        // one extra factor (3/4)^{1/2} in the denominator exponent
        pw = pw.div(base.sqrt());
    }
    p_inf.div(pa_inf).mul(pw)
}

#[test]
fn i1_series_matches_dd_summation() {
    // order 1/2, base 1/2, argument 1: sum_k (3/4)^k (1/2)^{1/2+2k}
    //   / ((1/4;1/4)_k Gamma_{1/4}(k + 3/2)), 60 terms in double-double
    let p = Dd::from_ratio(1, 4);
    let three_q = Dd::from_ratio(3, 4);
    let half = Dd::from_ratio(1, 2);
    let mut sum = Dd::ZERO;
    let mut poch = Dd::ONE; // (p;p)_k
    let mut pk = Dd::ONE; // p^k
    let mut numer = half.sqrt(); // (3/4)^k (1/2)^{1/2 + 2k}
    for k in 0..60i32 {
        if k > 0 {
            pk = pk.mul(p);
            poch = poch.mul(Dd::ONE.sub(pk));
            numer = numer.mul(three_q).mul(Dd::from_ratio(1, 4));
        }
        let gamma = dd_gamma_quarter_base(2 * k + 3); // alpha = k + 3/2
        sum = sum.add(numer.div(poch.mul(gamma)));
    }
    let oracle = sum.to_f64();
    let ctx = QContext::new(0.5).unwrap();
    let got = i1_series(&OrderParam::new(0.5), c(1.0), &ctx)
        .unwrap()
        .value
        .re;
    assert!(
        (got - oracle).abs() < 1e-14 * oracle.abs(),
        "{got} vs {oracle}"
    );
}

#[test]
fn i2_series_matches_dd_summation() {
    // order 0, base 1/2, argument 2 (the normalization-point value):
    // sum_k (1/4)^{k^2} (3/4)^k 1^{2k} / ((1/4;1/4)_k Gamma_{1/4}(k+1))
    let p = Dd::from_ratio(1, 4);
    let three_q = Dd::from_ratio(3, 4);
    let mut sum = Dd::ZERO;
    let mut poch = Dd::ONE;
    let mut pk = Dd::ONE;
    for k in 0..60i32 {
        if k > 0 {
            pk = pk.mul(p);
            poch = poch.mul(Dd::ONE.sub(pk));
        }
        // q^{2k(nu+k)} with q^2 = 1/4, nu = 0: (1/4)^{k^2}
        let qfac = Dd::from_ratio(1, 4).powi(k * k);
        let numer = qfac.mul(three_q.powi(k)); // (z/2)^{2k} = 1
        let gamma = dd_gamma_quarter_base(2 * k + 2); // alpha = k + 1
        sum = sum.add(numer.div(poch.mul(gamma)));
    }
    let oracle = sum.to_f64();
    let ctx = QContext::new(0.5).unwrap();
    let got = i2_series(&OrderParam::new(0.0), c(2.0), &ctx)
        .unwrap()
        .value
        .re;
    assert!(
        (got - oracle).abs() < 1e-14 * oracle.abs(),
        "{got} vs {oracle}"
    );
}

#[test]
fn classical_k0_matches_dd_reflection_limit() {
    // K_0(1) through the reflection combination at eps = 1e-8 in
    // double-double: pi/(2 sin(eps pi)) [I_{-eps}(1) - I_{+eps}(1)]
    let eps = Dd::from_f64(1e-8);
    let gamma_e = dd_parse_fraction(EULER_GAMMA_DIGITS);
    let ln2 = dd_ln2();
    let pi = dd_pi();
    let zeta2 = pi.mul(pi).div(Dd::from_f64(6.0));
    let zeta3 = dd_parse_fraction(ZETA3_DIGITS).add(Dd::ONE);

    // ln Gamma(1+x) = -gamma x + zeta(2) x^2/2 - zeta(3) x^3/3 + ...
    let ln_gamma1p = |x: Dd| -> Dd {
        let x2 = x.mul(x);
        let x3 = x2.mul(x);
        gamma_e
            .mul(x)
            .neg()
            .add(zeta2.mul(x2).div(Dd::from_f64(2.0)))
            .sub(zeta3.mul(x3).div(Dd::from_f64(3.0)))
    };
    let bessel_i = |nu: Dd| -> Dd {
        // sum_k (1/2)^{nu+2k} / (k! Gamma(nu+k+1)), z = 1
        let gamma_seed = dd_exp_small(ln_gamma1p(nu)); // Gamma(1+nu)
        let half_pow = dd_exp_small(nu.mul(ln2).neg()); // (1/2)^nu
        let mut sum = Dd::ZERO;
        let mut kfac = Dd::ONE;
        let mut gamma = gamma_seed; // Gamma(nu+k+1)
        let mut zpow = half_pow; // (1/2)^{nu+2k}
        for k in 0..30i64 {
            if k > 0 {
                kfac = kfac.mul_f64(k as f64);
                gamma = gamma.mul(nu.add_f64(k as f64));
                zpow = zpow.mul(Dd::from_ratio(1, 4));
            }
            sum = sum.add(zpow.div(kfac.mul(gamma)));
        }
        sum
    };
    let diff = bessel_i(eps.neg()).sub(bessel_i(eps));
    let x = eps.mul(pi);
    let sin = x.sub(x.powi(3).div(Dd::from_f64(6.0))); // sin(eps pi)
    let k0 = pi.div(sin.mul_f64(2.0)).mul(diff).to_f64();

    // frozen from this oracle; the binary64 route must reproduce it
    assert!((k0 - 0.421_024_438_240_708_33).abs() < 1e-13);
    let got = classical_bessel_k(0.0, 1.0);
    assert!((got - k0).abs() < 1e-8, "{got} vs {k0}");
}
