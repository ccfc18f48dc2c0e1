//! Foundational q-calculus: q-Pochhammer symbols, the two q-exponentials,
//! the Jackson q-derivative, q-Gamma and q-psi.
//!
//! Conventions used throughout the crate:
//!
//! * `(a;q)_n = prod_{k=0}^{n-1} (1 - a q^k)`, `(a;q)_inf` its limit.
//! * `eq_exp(z) = 1/(z;q)_inf`, the small q-exponential e_q. It equals the
//!   power series `sum z^n/(q;q)_n` for |z| < 1 and continues it to all z
//!   off the simple poles z = q^{-k}.
//! * `eq_exp_big(z) = (-z;q)_inf`, the big q-exponential E_q, entire, with
//!   `eq_exp(z) * eq_exp_big(-z) = 1`.
//! * `q_gamma(alpha) = (q;q)_inf / (q^alpha;q)_inf * (1-q)^{1-alpha}`.
//! * `q_psi` is the logarithmic derivative of the q-Gamma function in base
//!   q^2 (the base that the Bessel-type modules work in).
//!
//! Infinite series and products truncate when three consecutive terms fall
//! below `rel_tol * |partial| + abs_tol`; hitting `max_terms` first is
//! reported as [`QError::NonConvergence`].

use num_complex::Complex64;
use thiserror::Error;

/// Relative pole detection threshold: `|z q^k - 1| < POLE_TOL` flags pole k.
pub const POLE_TOL: f64 = 1e-10;

/// Proximity threshold under which a real argument counts as a nonpositive
/// integer (a pole of the q-Gamma function).
const GAMMA_POLE_TOL: f64 = 1e-9;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Evaluation point too close to the pole with the given index.
    #[error("evaluation point within pole tolerance of pole index {index}")]
    Pole { index: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
    #[error("order nu = {nu} is integer; use the integer-order evaluator")]
    IntegerOrder { nu: f64 },
    #[error("unknown identity id `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, QError>;

/// The base q in (0,1) together with truncation controls, threaded through
/// every evaluation. Immutable after construction.
#[derive(Debug, Clone, Copy)]
pub struct QContext {
    q: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_terms: usize,
}

impl QContext {
    /// Context with default tolerances: `rel_tol = 1e-14`,
    /// `abs_tol = 1e-300`, `max_terms = 10_000`.
    pub fn new(q: f64) -> Result<Self> {
        Self::with_tols(q, 1e-14, 1e-300, 10_000)
    }

    pub fn with_tols(q: f64, rel_tol: f64, abs_tol: f64, max_terms: usize) -> Result<Self> {
        if q.is_nan() || q <= 0.0 || q >= 1.0 {
            return Err(QError::InvalidParameter(format!(
                "base q must satisfy 0 < q < 1, got {q}"
            )));
        }
        if rel_tol.is_nan() || rel_tol <= 0.0 {
            return Err(QError::InvalidParameter(format!(
                "rel_tol must be positive, got {rel_tol}"
            )));
        }
        if max_terms == 0 {
            return Err(QError::InvalidParameter("max_terms must be >= 1".into()));
        }
        Ok(QContext {
            q,
            rel_tol,
            abs_tol,
            max_terms,
        })
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }
    #[inline]
    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }
    #[inline]
    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }
    #[inline]
    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Same tolerances, different base.
    pub fn with_q(&self, q: f64) -> Result<QContext> {
        QContext::with_tols(q, self.rel_tol, self.abs_tol, self.max_terms)
    }

    /// Same tolerances in base q^2. Always valid since q in (0,1).
    pub fn squared_base(&self) -> QContext {
        QContext {
            q: self.q * self.q,
            ..*self
        }
    }

    /// Same base and tolerances with a different term cap.
    pub fn with_max_terms(&self, max_terms: usize) -> QContext {
        QContext { max_terms, ..*self }
    }
}

/// Value of a truncated series or product together with truncation
/// diagnostics. `tail_estimate` is the magnitude of the first omitted term;
/// when `converged` is set it is below `rel_tol * |value| + abs_tol`.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub value: Complex64,
    pub terms_used: usize,
    pub converged: bool,
    pub tail_estimate: f64,
}

/// Truncation state: stop once three consecutive terms are small, guarding
/// against terms that vanish accidentally.
pub(crate) struct TailRule {
    run: u32,
}

impl TailRule {
    pub(crate) fn new() -> Self {
        TailRule { run: 0 }
    }

    /// Feed one term; returns true once three consecutive terms satisfied
    /// `|term| < rel_tol * |partial| + abs_tol`.
    pub(crate) fn done(&mut self, term_mag: f64, partial_mag: f64, ctx: &QContext) -> bool {
        if term_mag < ctx.rel_tol * partial_mag + ctx.abs_tol {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= 3
    }
}

/// Neumaier-compensated complex accumulator for sums with heavy
/// cancellation between terms.
#[derive(Default)]
pub(crate) struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, v: Complex64) {
        let t = self.sum + v;
        let corr_re = if self.sum.re.abs() >= v.re.abs() {
            (self.sum.re - t.re) + v.re
        } else {
            (v.re - t.re) + self.sum.re
        };
        let corr_im = if self.sum.im.abs() >= v.im.abs() {
            (self.sum.im - t.im) + v.im
        } else {
            (v.im - t.im) + self.sum.im
        };
        self.comp += Complex64::new(corr_re, corr_im);
        self.sum = t;
    }

    pub(crate) fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Finite q-Pochhammer symbol `(a;q)_n`; exactly 1 for n = 0.
pub fn qpochhammer_finite(a: Complex64, ctx: &QContext, n: usize) -> Complex64 {
    let q = ctx.q();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qk = 1.0;
    for _ in 0..n {
        prod *= Complex64::new(1.0, 0.0) - a * qk;
        qk *= q;
    }
    prod
}

/// Infinite q-Pochhammer symbol `(a;q)_inf`.
pub fn qpochhammer_infinite(a: Complex64, ctx: &QContext) -> Result<SeriesEval> {
    let q = ctx.q();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qk = 1.0;
    let mut tail = TailRule::new();
    for k in 0..ctx.max_terms() {
        let incr = a.norm() * qk * prod.norm();
        prod *= Complex64::new(1.0, 0.0) - a * qk;
        qk *= q;
        if tail.done(incr, prod.norm(), ctx) {
            return Ok(SeriesEval {
                value: prod,
                terms_used: k + 1,
                converged: true,
                tail_estimate: a.norm() * qk * prod.norm(),
            });
        }
    }
    Err(QError::NonConvergence {
        terms: ctx.max_terms(),
    })
}

/// Indices k with `|z q^k - 1| < POLE_TOL`, i.e. z within pole tolerance of
/// q^{-k}.
fn pole_scan(z: Complex64, ctx: &QContext) -> Option<u32> {
    let q = ctx.q();
    let mut zqk = z;
    let mut k = 0u32;
    // Poles sit at |z| q^k = 1; once |z q^k| < 1/2 none can follow.
    while zqk.norm() > 0.5 {
        if (zqk - 1.0).norm() < POLE_TOL {
            return Some(k);
        }
        zqk *= q;
        k += 1;
        if k > 100_000 {
            break;
        }
    }
    None
}

/// Small q-exponential `e_q(z) = 1/(z;q)_inf`, valid for all z off the
/// simple poles z = q^{-k}. Inside |z| < 1 it agrees with the power series
/// `sum z^n/(q;q)_n`.
pub fn eq_exp(z: Complex64, ctx: &QContext) -> Result<Complex64> {
    if let Some(k) = pole_scan(z, ctx) {
        return Err(QError::Pole { index: k });
    }
    Ok(1.0 / qpochhammer_infinite(z, ctx)?.value)
}

/// Big q-exponential `E_q(z) = (-z;q)_inf`, entire in z.
pub fn eq_exp_big(z: Complex64, ctx: &QContext) -> Result<Complex64> {
    Ok(qpochhammer_infinite(-z, ctx)?.value)
}

/// Partial-fraction expansion of e_q: truncation of
/// `1/(q;q)_inf * sum_k (-1)^k q^{k(k+1)/2} / ((q;q)_k (1 - z q^k))`
/// after `terms` terms. Converges to e_q(z) for every z off the poles,
/// including |z| > 1.
pub fn eq_exp_partial_fractions(z: Complex64, ctx: &QContext, terms: usize) -> Result<Complex64> {
    if terms == 0 {
        return Err(QError::InvalidParameter("terms must be >= 1".into()));
    }
    if let Some(k) = pole_scan(z, ctx) {
        return Err(QError::Pole { index: k });
    }
    let q = ctx.q();
    // the terms alternate and cancel heavily off the positive axis;
    // compensated summation keeps the quotient accurate
    let mut sum = KahanSum::new();
    // c_k = (-1)^k q^{k(k+1)/2} / (q;q)_k, updated via c_k = c_{k-1} * (-q^k)/(1-q^k)
    let mut c = 1.0;
    let mut qk = 1.0;
    for k in 0..terms {
        if k > 0 {
            qk *= q;
            c *= -qk / (1.0 - qk);
        }
        sum.add(c / (Complex64::new(1.0, 0.0) - z * qk));
    }
    let qq_inf = qpochhammer_infinite(Complex64::new(q, 0.0), ctx)?.value;
    Ok(sum.value() / qq_inf)
}

/// Jackson q-derivative `(f(z) - f(qz)) / ((1-q) z)`.
pub fn q_derivative<F>(f: F, z: Complex64, ctx: &QContext) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if z.norm() == 0.0 {
        return Err(QError::Domain("q-derivative undefined at z = 0".into()));
    }
    let q = ctx.q();
    Ok((f(z)? - f(q * z)?) / ((1.0 - q) * z))
}

/// Nonpositive-integer proximity: Some(n) when x is within tolerance of -n.
fn near_nonpositive_integer(x: f64) -> Option<u32> {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() < GAMMA_POLE_TOL {
        Some((-r) as u32)
    } else {
        None
    }
}

/// `ln |Gamma_q(alpha)|` with its sign. Computed as
/// `sum_k [ ln(1 - q^{k+1}) - ln(1 - q^{alpha+k}) ] + (1-alpha) ln(1-q)`,
/// which stays finite for q arbitrarily close to 1 where the individual
/// infinite products underflow.
pub(crate) fn ln_q_gamma(alpha: f64, ctx: &QContext) -> Result<(f64, f64)> {
    if let Some(n) = near_nonpositive_integer(alpha) {
        return Err(QError::Pole { index: n });
    }
    let q = ctx.q();
    let mut ln_abs = (1.0 - alpha) * (1.0 - q).ln();
    let mut sign = 1.0;
    let mut qk1 = q; // q^{k+1}
    let mut qak = q.powf(alpha); // q^{alpha+k}
    let mut tail = TailRule::new();
    for _ in 0..ctx.max_terms() {
        let num = 1.0 - qk1;
        let den = 1.0 - qak;
        if den == 0.0 {
            return Err(QError::Pole { index: 0 });
        }
        if den < 0.0 {
            sign = -sign;
        }
        ln_abs += num.ln() - den.abs().ln();
        qk1 *= q;
        qak *= q;
        // remaining terms are O(q^k); converge on that scale
        if tail.done(qak.abs().max(qk1), 1.0 + ln_abs.abs(), ctx) {
            return Ok((sign, ln_abs));
        }
    }
    Err(QError::NonConvergence {
        terms: ctx.max_terms(),
    })
}

/// q-Gamma function `Gamma_q(alpha) = (q;q)_inf/(q^alpha;q)_inf (1-q)^{1-alpha}`
/// in the base `ctx.q()`. Real-valued on its real domain; poles at the
/// nonpositive integers. For positive integers,
/// `Gamma_q(n+1) = (q;q)_n/(1-q)^n`.
pub fn q_gamma(alpha: f64, ctx: &QContext) -> Result<f64> {
    let (sign, ln_abs) = ln_q_gamma(alpha, ctx)?;
    Ok(sign * ln_abs.exp())
}

/// Partial-fraction form of `Gamma_{q^2}(z)` (note the squared base):
/// `(1-q^2)^{1-z} sum_k (-1)^k q^{k(k+1)} / ((q^2;q^2)_k (1 - q^{2k+2z}))`.
pub fn q_gamma_partial_fractions(z: f64, ctx: &QContext) -> Result<f64> {
    if let Some(n) = near_nonpositive_integer(z) {
        return Err(QError::Pole { index: n });
    }
    let p = ctx.q() * ctx.q();
    let mut sum = 0.0;
    let mut c = 1.0; // (-1)^k p^{k(k+1)/2} / (p;p)_k
    let mut pk = 1.0; // p^k
    let mut pzk = p.powf(z); // p^{z+k}
    let mut tail = TailRule::new();
    let mut converged = false;
    let mut used = 0;
    for k in 0..ctx.max_terms() {
        if k > 0 {
            pk *= p;
            c *= -pk / (1.0 - pk);
            pzk *= p;
        }
        let term = c / (1.0 - pzk);
        sum += term;
        used = k + 1;
        if tail.done(term.abs(), sum.abs(), ctx) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(QError::NonConvergence { terms: used });
    }
    Ok((1.0 - p).powf(1.0 - z) * sum)
}

/// q-psi function: logarithmic derivative of `Gamma_{q^2}` (squared base),
/// `psi_{q^2}(z) = -ln(1-q^2) + ln(q^2) sum_{k>=0} q^{2k+2z}/(1-q^{2k+2z})`.
///
/// The sum starts at k = 0; this is what differentiating the q-Gamma
/// product form yields, and it is certified against a finite-difference
/// logarithmic derivative of [`q_gamma`] in the test suite.
pub fn q_psi(z: f64, ctx: &QContext) -> Result<f64> {
    if let Some(n) = near_nonpositive_integer(z) {
        return Err(QError::Pole { index: n });
    }
    let p = ctx.q() * ctx.q();
    let mut sum = 0.0;
    let mut pzk = p.powf(z); // p^{z+k}
    let mut tail = TailRule::new();
    let mut converged = false;
    for _ in 0..ctx.max_terms() {
        let term = pzk / (1.0 - pzk);
        sum += term;
        pzk *= p;
        if tail.done(term.abs(), sum.abs(), ctx) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(QError::NonConvergence {
            terms: ctx.max_terms(),
        });
    }
    Ok(-(1.0 - p).ln() + p.ln() * sum)
}

/// Shift `psi_{q^2}(z) -> psi_{q^2}(z+1)` in O(1):
/// `psi(z+1) = psi(z) - ln(q^2) q^{2z}/(1-q^{2z})`.
pub(crate) fn q_psi_shift_up(psi_z: f64, z: f64, ctx: &QContext) -> f64 {
    let p = ctx.q() * ctx.q();
    let pz = p.powf(z);
    psi_z - p.ln() * pz / (1.0 - pz)
}

/// Value of `lim_{z -> -n} psi_{q^2}(z) / Gamma_{q^2}(z)`:
/// `(-1)^n q^{-n(n+1)} (q^2;q^2)_n / (1-q^2)^{n+1} * ln(q^2)`.
pub fn psi_over_gamma_at_negative_integer(n: u32, ctx: &QContext) -> f64 {
    let p = ctx.q() * ctx.q();
    let ctx2 = ctx.squared_base();
    let poch = qpochhammer_finite(Complex64::new(p, 0.0), &ctx2, n as usize).re;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * p.powi(-((n * (n + 1) / 2) as i32)) * poch / (1.0 - p).powi(n as i32 + 1) * p.ln()
}
