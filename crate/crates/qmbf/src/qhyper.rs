//! Basic hypergeometric series and the specific 2-phi-1 combination that
//! powers the Laurent-type representations of the modified q-Bessel
//! functions.
//!
//! The general series is
//!
//! ```text
//! rPhi_s(a1..ar; b1..bs; q, z)
//!   = sum_n (a1;q)_n ... (ar;q)_n / ((q;q)_n (b1;q)_n ... (bs;q)_n)
//!     * [(-1)^n q^{n(n-1)/2}]^{1+s-r} * z^n
//! ```
//!
//! and `phi_nu(z) = 2Phi1(q^{nu+1/2}, q^{-nu+1/2}; -q; q, u)` with
//! `u = 2q/((1-q^2) z)`, convergent exactly for |z| > 2q/(1-q^2).

use num_complex::Complex64;

use crate::qcore::{QContext, QError, Result, SeriesEval, TailRule};

/// Numerator and denominator parameter lists of a basic hypergeometric
/// series. `r` and `s` are the list lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperParams {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
}

impl HyperParams {
    pub fn new(upper: Vec<Complex64>, lower: Vec<Complex64>) -> Self {
        HyperParams { upper, lower }
    }

    pub fn r(&self) -> usize {
        self.upper.len()
    }

    pub fn s(&self) -> usize {
        self.lower.len()
    }
}

/// Detect parameters of the form q^{-m} for an integer m >= 0 (within a
/// 1e-9 relative threshold). Such an upper parameter makes the series a
/// polynomial of degree m; such a lower parameter makes it undefined.
fn detect_q_negative_power(a: Complex64, q: f64) -> Option<u32> {
    if a.re <= 0.0 || a.im.abs() > 1e-12 * a.re.abs() {
        return None;
    }
    // q^{-m}: m = ln(a)/ln(1/q)
    let m = a.re.ln() / (1.0 / q).ln();
    let rounded = m.round();
    if rounded >= -1e-9 && (m - rounded).abs() < 1e-9 {
        Some(rounded.max(0.0) as u32)
    } else {
        None
    }
}

/// General basic hypergeometric series. Requires |z| < 1 when r = s + 1;
/// any z when r <= s; rejects r > s + 1.
pub fn basic_hypergeometric(p: &HyperParams, z: Complex64, ctx: &QContext) -> Result<SeriesEval> {
    let q = ctx.q();
    let r = p.r();
    let s = p.s();
    if r > s + 1 {
        return Err(QError::Domain(format!(
            "series with r = {r} > s + 1 = {} diverges for z != 0",
            s + 1
        )));
    }
    for b in &p.lower {
        if let Some(m) = detect_q_negative_power(*b, q) {
            return Err(QError::InvalidParameter(format!(
                "lower parameter {b} equals q^-{m}; denominator Pochhammer vanishes"
            )));
        }
    }
    // An upper parameter q^{-m} truncates the series to exactly m+1 terms.
    let poly_terms = p
        .upper
        .iter()
        .filter_map(|a| detect_q_negative_power(*a, q))
        .map(|m| m as usize + 1)
        .min();
    if r == s + 1 && poly_terms.is_none() && z.norm() >= 1.0 {
        return Err(QError::Domain(format!(
            "argument |z| = {} >= 1 outside the convergence disc for r = s + 1",
            z.norm()
        )));
    }

    let extra = (1 + s) as i32 - r as i32; // exponent on [(-1)^n q^{n(n-1)/2}]
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut qn = 1.0; // q^n
    let cap = poly_terms.unwrap_or(ctx.max_terms());
    let mut tail = TailRule::new();
    for n in 0..cap.max(1) {
        if n > 0 {
            // update from term_{n-1}: multiply parameter factors at q^{n-1}
            let mut ratio = z / (1.0 - qn * q);
            for a in &p.upper {
                ratio *= Complex64::new(1.0, 0.0) - a * qn;
            }
            for b in &p.lower {
                ratio /= Complex64::new(1.0, 0.0) - b * qn;
            }
            if extra != 0 {
                ratio *= Complex64::new(-qn, 0.0).powi(extra);
            }
            term *= ratio;
            qn *= q;
        }
        sum += term;
        if poly_terms.is_none() && tail.done(term.norm(), sum.norm(), ctx) {
            return Ok(SeriesEval {
                value: sum,
                terms_used: n + 1,
                converged: true,
                tail_estimate: term.norm(),
            });
        }
    }
    if let Some(k) = poly_terms {
        // exact polynomial: the next Pochhammer factor vanishes
        return Ok(SeriesEval {
            value: sum,
            terms_used: k,
            converged: true,
            tail_estimate: 0.0,
        });
    }
    Err(QError::NonConvergence {
        terms: ctx.max_terms(),
    })
}

/// `phi_nu` evaluated directly in the series variable u:
/// `2Phi1(q^{nu+1/2}, q^{-nu+1/2}; -q; q, u)`, |u| < 1.
///
/// The two upper parameters are sorted before evaluation so that nu and
/// -nu produce bit-identical results.
pub fn phi_nu_at_u(nu: f64, u: Complex64, ctx: &QContext) -> Result<SeriesEval> {
    let q = ctx.q();
    let a = q.powf(nu + 0.5);
    let b = q.powf(-nu + 0.5);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let params = HyperParams::new(
        vec![Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)],
        vec![Complex64::new(-q, 0.0)],
    );
    basic_hypergeometric(&params, u, ctx)
}

/// The Laurent-series factor `Phi_nu(z) = 2Phi1(q^{nu+1/2}, q^{-nu+1/2};
/// -q; q, u)` with `u = 2q/((1-q^2) z)`. Requires |z| > 2q/(1-q^2) so that
/// |u| < 1. Even in nu.
pub fn phi_nu(nu: f64, z: Complex64, ctx: &QContext) -> Result<SeriesEval> {
    let q = ctx.q();
    let u = 2.0 * q / ((1.0 - q * q) * z);
    if u.norm() >= 1.0 {
        return Err(QError::Domain(format!(
            "|z| = {} must exceed 2q/(1-q^2) = {}",
            z.norm(),
            2.0 * q / (1.0 - q * q)
        )));
    }
    phi_nu_at_u(nu, u, ctx)
}

/// Explicit coefficient form of the same function:
/// `sum_k 2^k q^k (q^{nu+1/2};q)_k (q^{-nu+1/2};q)_k /
///  ((1-q^2)^k (q^2;q^2)_k) z^{-k}`.
/// Summed independently of [`phi_nu`] for cross-validation.
pub fn phi_nu_series_form(nu: f64, z: Complex64, ctx: &QContext) -> Result<SeriesEval> {
    let q = ctx.q();
    let zinv = 1.0 / z;
    if (2.0 * q / (1.0 - q * q)) * zinv.norm() >= 1.0 {
        return Err(QError::Domain(format!(
            "|z| = {} must exceed 2q/(1-q^2)",
            z.norm()
        )));
    }
    let a = q.powf(nu + 0.5);
    let b = q.powf(-nu + 0.5);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut qk = 1.0; // q^{k-1} inside the update
    let mut q2k = 1.0; // q^{2k}
    let mut tail = TailRule::new();
    for k in 0..ctx.max_terms() {
        if k > 0 {
            // a_k/a_{k-1} = 2q (1-a q^{k-1})(1-b q^{k-1}) / ((1-q^2)(1-q^{2k}))
            q2k *= q * q;
            let ratio = 2.0 * q * (1.0 - a * qk) * (1.0 - b * qk)
                / ((1.0 - q * q) * (1.0 - q2k));
            term *= ratio * zinv;
            qk *= q;
        }
        sum += term;
        if tail.done(term.norm(), sum.norm(), ctx) {
            return Ok(SeriesEval {
                value: sum,
                terms_used: k + 1,
                converged: true,
                tail_estimate: term.norm(),
            });
        }
    }
    Err(QError::NonConvergence {
        terms: ctx.max_terms(),
    })
}
