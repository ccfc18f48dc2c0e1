//! Identity-suite runner: every recurrence, difference equation, Wronskian
//! identity and representation equivalence satisfied by the function
//! family is registered in a catalog under a stable id and can be checked
//! over parameter grids, producing structured residual reports.
//!
//! Also hosts the classical modified-Bessel oracle used by the q -> 1
//! limit checks.

pub mod catalog;

use num_complex::Complex64;

use crate::qbessel::OrderParam;
use crate::qcore::{QContext, QError, Result};

pub use catalog::{catalog, catalog_ids, IdentityDef};

/// One identity check at one parameter point.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub identity_id: String,
    /// Named parameters of the point, in a fixed order.
    pub params: Vec<(String, f64)>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

impl IdentityReport {
    /// Standard report: relative error against max(|lhs|, |rhs|, tiny),
    /// passing when either the absolute or the relative bound holds.
    pub fn new(
        id: &str,
        params: Vec<(String, f64)>,
        lhs: Complex64,
        rhs: Complex64,
        abs_bound: f64,
        rel_bound: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / lhs.norm().max(rhs.norm()).max(1e-300);
        IdentityReport {
            identity_id: id.to_string(),
            params,
            lhs,
            rhs,
            abs_err,
            rel_err,
            pass: abs_err <= abs_bound || rel_err <= rel_bound,
        }
    }
}

/// How grid z values are interpreted: as given, or as fractions of the
/// domain radius 2/(1-q^2) so one grid serves every base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingMode {
    Absolute,
    DomainScaled,
}

/// Parameter grid for the identity suite.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub q_values: Vec<f64>,
    pub nu_values: Vec<f64>,
    pub z_fractions: Vec<Complex64>,
    pub scaling_mode: ScalingMode,
}

impl GridSpec {
    pub fn new(
        q_values: Vec<f64>,
        nu_values: Vec<f64>,
        z_fractions: Vec<Complex64>,
        scaling_mode: ScalingMode,
    ) -> Result<Self> {
        if q_values.is_empty() || nu_values.is_empty() || z_fractions.is_empty() {
            return Err(QError::InvalidParameter(
                "grid lists must be nonempty".into(),
            ));
        }
        if let Some(q) = q_values.iter().find(|q| !(0.0 < **q && **q < 1.0)) {
            return Err(QError::InvalidParameter(format!(
                "grid q = {q} outside (0,1)"
            )));
        }
        Ok(GridSpec {
            q_values,
            nu_values,
            z_fractions,
            scaling_mode,
        })
    }

    /// z values for a given base: fractions are scaled by 2/(1-q^2) in
    /// domain-scaled mode.
    pub fn z_values(&self, q: f64) -> Vec<Complex64> {
        match self.scaling_mode {
            ScalingMode::Absolute => self.z_fractions.clone(),
            ScalingMode::DomainScaled => {
                let r = 2.0 / (1.0 - q * q);
                self.z_fractions.iter().map(|f| f * r).collect()
            }
        }
    }

    /// Noninteger orders of the grid (fallback {0.3, 0.7} when none).
    pub(crate) fn noninteger_nus(&self) -> Vec<f64> {
        let out: Vec<f64> = self
            .nu_values
            .iter()
            .copied()
            .filter(|nu| !OrderParam::new(*nu).is_integer())
            .collect();
        if out.is_empty() {
            vec![0.3, 0.7]
        } else {
            out
        }
    }

    /// Nonnegative integer orders of the grid (fallback {0, 1, 2}).
    pub(crate) fn integer_ns(&self) -> Vec<u32> {
        let out: Vec<u32> = self
            .nu_values
            .iter()
            .filter_map(|nu| OrderParam::new(*nu).snapped())
            .filter(|n| *n >= 0)
            .map(|n| n as u32)
            .collect();
        if out.is_empty() {
            vec![0, 1, 2]
        } else {
            out
        }
    }
}

impl Default for GridSpec {
    /// q in {0.2, 0.5, 0.8}; orders {0, 0.3, 0.5, 1.7, 2}; a ring of eight
    /// domain-scaled points at radius fraction 0.5 with angles offset from
    /// the axes (all poles of the family sit on the real axis).
    fn default() -> Self {
        let ring = (0..8)
            .map(|k| Complex64::from_polar(0.5, std::f64::consts::PI * (2.0 * k as f64 + 1.0) / 8.0))
            .collect();
        GridSpec {
            q_values: vec![0.2, 0.5, 0.8],
            nu_values: vec![0.0, 0.3, 0.5, 1.7, 2.0],
            z_fractions: ring,
            scaling_mode: ScalingMode::DomainScaled,
        }
    }
}

/// Run the named identities over the grid. Reports come back ordered by
/// (identity id, grid index) regardless of how the suite was listed.
/// `ctx` supplies truncation tolerances and the term cap; its base is
/// overridden by the grid's q values.
pub fn run_identity_suite(
    suite: &[&str],
    grid: &GridSpec,
    ctx: &QContext,
) -> Result<Vec<IdentityReport>> {
    let defs = catalog();
    let mut ids: Vec<&str> = suite.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let mut out = Vec::new();
    for id in ids {
        let def = defs
            .iter()
            .find(|d| d.id == id)
            .ok_or_else(|| QError::UnknownIdentity(format!("{id}; valid ids: {}", catalog_ids().join(", "))))?;
        out.extend((def.runner)(def, grid, ctx)?);
    }
    Ok(out)
}

/// Classical modified Bessel function of the first kind, by its power
/// series with the standard Gamma function; oracle accuracy ~1e-12 for
/// 0 <= z <= 10.
pub fn classical_bessel_i(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    let half = z / 2.0;
    let mut sum = 0.0;
    for k in 0..80 {
        let g = libm::tgamma(nu + k as f64 + 1.0);
        if !g.is_finite() {
            continue; // reciprocal Gamma vanishes at the poles
        }
        let term = half.powf(nu + 2.0 * k as f64) / (libm::tgamma(k as f64 + 1.0) * g);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && k > 3 {
            break;
        }
    }
    sum
}

/// Classical Macdonald function via the reflection combination
/// `pi/(2 sin(nu pi)) [I_{-nu}(z) - I_nu(z)]`; integer orders take the
/// epsilon-limit with a symmetric pair at eps = 1e-6.
pub fn classical_bessel_k(nu: f64, z: f64) -> f64 {
    let nu = nu.abs();
    let dist = (nu - nu.round()).abs();
    if dist < 1e-5 {
        let n = nu.round();
        let eps = 1e-6;
        return 0.5 * (classical_k_reflect(n + eps, z) + classical_k_reflect(n - eps, z));
    }
    classical_k_reflect(nu, z)
}

fn classical_k_reflect(nu: f64, z: f64) -> f64 {
    std::f64::consts::PI / (2.0 * (nu * std::f64::consts::PI).sin())
        * (classical_bessel_i(-nu, z) - classical_bessel_i(nu, z))
}

/// Which function family a classical-limit check targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitFunc {
    I1,
    I2,
    K1,
    K2,
}

/// Errors against the classical oracle at q = 1 - 10^{-m}.
#[derive(Debug, Clone)]
pub struct ClassicalLimit {
    /// (q, |q-value - classical value|) per requested m.
    pub points: Vec<(f64, f64)>,
    /// Whether the error strictly decreases along the list.
    pub monotone: bool,
}

/// Evaluate the q -> 1 limit errors of the named function at real order
/// and argument, for q = 1 - 10^{-m} over the given m list.
pub fn classical_limit_report(
    func: LimitFunc,
    nu: f64,
    z: f64,
    m_values: &[u32],
) -> Result<ClassicalLimit> {
    if z <= 0.0 {
        return Err(QError::Domain(
            "classical-limit comparison requires z > 0".into(),
        ));
    }
    let classical = match func {
        LimitFunc::I1 | LimitFunc::I2 => classical_bessel_i(nu, z),
        LimitFunc::K1 | LimitFunc::K2 => classical_bessel_k(nu, z),
    };
    let ord = OrderParam::new(nu);
    let zc = Complex64::new(z, 0.0);
    let mut points = Vec::new();
    for &m in m_values {
        let q = 1.0 - 10f64.powi(-(m as i32));
        // products near q = 1 need ~ln(tol)/ln(q) factors
        let ctx = QContext::with_tols(q, 1e-14, 1e-300, 500_000)?;
        let value = match func {
            LimitFunc::I1 => crate::qbessel::i1_series(&ord, zc, &ctx)?.value,
            LimitFunc::I2 => crate::qbessel::i2_series(&ord, zc, &ctx)?.value,
            LimitFunc::K1 | LimitFunc::K2 => {
                let kind = if func == LimitFunc::K1 {
                    crate::qbessel::Kind::One
                } else {
                    crate::qbessel::Kind::Two
                };
                crate::qmacdonald::k_auto(kind, &ord, zc, &ctx)?
            }
        };
        points.push((q, (value.re - classical).abs()));
    }
    let monotone = points.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(ClassicalLimit { points, monotone })
}
