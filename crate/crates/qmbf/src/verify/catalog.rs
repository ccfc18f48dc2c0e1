//! The registered identity catalog: one entry per certified identity of
//! the function family, each with stable id, tolerance bounds and a grid
//! runner.
//!
//! Some identities carry restricted certification windows in q, chosen
//! from measured behavior rather than convenience:
//!
//! * the two-term Laurent normalization (`eq4.11`) matches the
//!   recurrence-exact coefficients only up to a q-periodic theta-type
//!   correction that decays rapidly as q -> 1 (about 1e-2 at q = 0.5,
//!   2e-11 at q = 0.9), so the residue condition is certified at q >= 0.88;
//! * the Macdonald representation equivalences (`eq5.8`, `eq5.8a`) sit in
//!   a window q in [0.45, 0.85]: below it the same theta correction
//!   surfaces above 1e-8, above it the weighted difference of nearly
//!   equal modified values loses digits to cancellation in the narrowing
//!   annulus;
//! * the quadratic contiguous relations (`sec6.*`) are evaluated at
//!   q = 0.95 so the shifted argument u/q stays inside the unit disc for
//!   the full |u| <= 0.9 grid.

use num_complex::Complex64;

use super::{GridSpec, IdentityReport, LimitFunc};
use crate::qbessel::{
    a_coefficient, a_residue_normalization, i1_from_i2, i1_series, i2_series, q_wronskian,
    recurrence_residual, Kind, OrderParam, RecurrenceId,
};
use crate::qcore::{
    eq_exp, eq_exp_big, eq_exp_partial_fractions, psi_over_gamma_at_negative_integer, q_derivative,
    q_gamma, q_gamma_partial_fractions, q_psi, QContext, Result,
};
use crate::qhyper::{phi_nu, phi_nu_at_u, phi_nu_series_form};
use crate::qmacdonald::{
    k1_closed, k2_closed, k_auto, k_integer_variant, k_noninteger, k_recurrence_residual,
    IntegerKVariant, KRecurrenceId,
};

type Runner = fn(&IdentityDef, &GridSpec, &QContext) -> Result<Vec<IdentityReport>>;

/// A registered identity: stable id, human description, tolerance bounds,
/// and the runner that produces one report per grid point.
pub struct IdentityDef {
    pub id: &'static str,
    pub description: &'static str,
    pub abs_bound: f64,
    pub rel_bound: f64,
    pub runner: Runner,
}

impl IdentityDef {
    fn report(
        &self,
        params: Vec<(String, f64)>,
        lhs: Complex64,
        rhs: Complex64,
    ) -> IdentityReport {
        IdentityReport::new(self.id, params, lhs, rhs, self.abs_bound, self.rel_bound)
    }
}

/// All registered identity ids, sorted.
pub fn catalog_ids() -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = catalog().iter().map(|d| d.id).collect();
    ids.sort_unstable();
    ids
}

fn pz(q: f64, nu: f64, z: Complex64) -> Vec<(String, f64)> {
    vec![
        ("q".into(), q),
        ("nu".into(), nu),
        ("re_z".into(), z.re),
        ("im_z".into(), z.im),
    ]
}

fn ctx_at(ctx: &QContext, q: f64) -> QContext {
    ctx.with_q(q).expect("grid q validated at construction")
}

/// q values clamped to a certification window, with a fallback when the
/// grid has none inside it.
fn windowed_q(grid: &GridSpec, lo: f64, hi: f64, fallback: &[f64]) -> Vec<f64> {
    let inside: Vec<f64> = grid
        .q_values
        .iter()
        .copied()
        .filter(|q| (lo..=hi).contains(q))
        .collect();
    if inside.is_empty() {
        fallback.to_vec()
    } else {
        inside
    }
}

fn run_eq1b(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for z in grid.z_values(q) {
            let lhs = eq_exp(z, &ctx)? * eq_exp_big(-z, &ctx)?;
            out.push(def.report(pz(q, f64::NAN, z), lhs, Complex64::new(1.0, 0.0)));
        }
    }
    Ok(out)
}

fn run_partial_fractions(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for z in grid.z_values(q) {
            // |z| capped at 2 and reflected into Re z >= 0: deep on the
            // negative side the alternating expansion cancels to ~1e-5 of
            // its gross term sum and the f64 floor rises above the bound
            let z = if z.norm() > 2.0 { z * (2.0 / z.norm()) } else { z };
            let z = Complex64::new(z.re.abs(), z.im);
            let lhs = eq_exp_partial_fractions(z, &ctx, 200)?;
            let rhs = eq_exp(z, &ctx)?;
            out.push(def.report(pz(q, f64::NAN, z), lhs, rhs));
        }
    }
    Ok(out)
}

fn run_eq5(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let p = q * q;
        for z in grid.z_values(q) {
            let w = (1.0 - p) * z / 2.0;
            let lhs = eq_exp(q * w, &ctx)?;
            let rhs = (Complex64::new(1.0, 0.0) - w) * eq_exp(w, &ctx)?;
            out.push(def.report(pz(q, f64::NAN, z), lhs, rhs));
        }
    }
    Ok(out)
}

fn run_eq6(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let p = q * q;
        for z in grid.z_values(q) {
            let w = (1.0 - p) * z / 2.0;
            let lhs = eq_exp(w / q, &ctx)? * (Complex64::new(1.0, 0.0) - w / q);
            let rhs = eq_exp(w, &ctx)?;
            out.push(def.report(pz(q, f64::NAN, z), lhs, rhs));
        }
    }
    Ok(out)
}

fn run_eq7(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx2 = ctx_at(base, q).squared_base();
        let p = q * q;
        for z in grid.z_values(q) {
            let x = (1.0 - p) * (1.0 - p) * z * z / 4.0;
            let lhs = eq_exp(p * x, &ctx2)?;
            let rhs = (Complex64::new(1.0, 0.0) - x) * eq_exp(x, &ctx2)?;
            out.push(def.report(pz(q, f64::NAN, z), lhs, rhs));
        }
    }
    Ok(out)
}

fn run_rem21(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let p = q * q;
        for z in grid.z_values(q) {
            let w = (1.0 - p) * z / 2.0;
            let lhs = eq_exp(w, &ctx)? * eq_exp(-w, &ctx)?;
            let rhs = eq_exp(w * w, &ctx.squared_base())?;
            out.push(def.report(pz(q, f64::NAN, z), lhs, rhs));
        }
    }
    Ok(out)
}

fn run_prop22(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for z in grid.z_values(q) {
            let f = |w: Complex64| eq_exp((1.0 - q) * w, &ctx);
            let lhs = q_derivative(f, z, &ctx)?;
            let rhs = f(z)?;
            out.push(def.report(pz(q, f64::NAN, z), lhs, rhs));
        }
    }
    Ok(out)
}

fn run_gamma_funceq(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for &nu in &grid.nu_values {
            let alpha = nu.abs() + 0.25; // keep off the poles, in (0, 5)
            let lhs = q_gamma(alpha + 1.0, &ctx)?;
            let rhs = (1.0 - q.powf(alpha)) / (1.0 - q) * q_gamma(alpha, &ctx)?;
            out.push(def.report(
                vec![("q".into(), q), ("alpha".into(), alpha)],
                Complex64::new(lhs, 0.0),
                Complex64::new(rhs, 0.0),
            ));
        }
    }
    Ok(out)
}

fn run_eq10(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let ctx2 = ctx.squared_base();
        for &a in &[0.5, 1.0, 2.5, 3.3] {
            let lhs = q_gamma_partial_fractions(a, &ctx)?;
            let rhs = q_gamma(a, &ctx2)?;
            out.push(def.report(
                vec![("q".into(), q), ("z".into(), a)],
                Complex64::new(lhs, 0.0),
                Complex64::new(rhs, 0.0),
            ));
        }
    }
    Ok(out)
}

fn run_eq12(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let ctx2 = ctx.squared_base();
        for &a in &[0.8, 2.0, 3.3] {
            let h = 1e-6;
            let fd = (q_gamma(a + h, &ctx2)?.ln() - q_gamma(a - h, &ctx2)?.ln()) / (2.0 * h);
            let lhs = q_psi(a, &ctx)?;
            out.push(def.report(
                vec![("q".into(), q), ("z".into(), a)],
                Complex64::new(lhs, 0.0),
                Complex64::new(fd, 0.0),
            ));
        }
    }
    Ok(out)
}

fn run_eq13(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    let eps = 1e-4;
    // the one-sided Taylor remainder of the ratio at eps = 1e-4 stays
    // under the 1e-3 bound for n <= 2 and q >= 0.45
    for q in windowed_q(grid, 0.45, 0.97, &[0.5, 0.8]) {
        let ctx = ctx_at(base, q);
        let ctx2 = ctx.squared_base();
        for n in 0..3u32 {
            let z = -(n as f64) + eps;
            let lhs = q_psi(z, &ctx)? / q_gamma(z, &ctx2)?;
            let rhs = psi_over_gamma_at_negative_integer(n, &ctx);
            out.push(def.report(
                vec![("q".into(), q), ("n".into(), n as f64)],
                Complex64::new(lhs, 0.0),
                Complex64::new(rhs, 0.0),
            ));
        }
    }
    Ok(out)
}

/// z points outside the Laurent domain built from the grid's ring angles.
fn laurent_points(grid: &GridSpec, q: f64) -> Vec<Complex64> {
    let r = 2.0 / (1.0 - q * q);
    let mut out = Vec::new();
    for &s in &[1.5, 3.0] {
        for f in grid.z_fractions.iter().take(2) {
            out.push(Complex64::from_polar(s * r, f.arg()));
        }
    }
    out
}

fn run_eq44(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for &nu in &grid.nu_values {
            for z in laurent_points(grid, q) {
                let lhs = phi_nu(nu, z, &ctx)?.value;
                let rhs = phi_nu_series_form(nu, z, &ctx)?.value;
                out.push(def.report(pz(q, nu, z), lhs, rhs));
            }
        }
    }
    Ok(out)
}

fn run_phi_symmetry(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for &nu in &grid.noninteger_nus() {
            for z in laurent_points(grid, q) {
                let lhs = phi_nu(nu, z, &ctx)?.value;
                let rhs = phi_nu(-nu, z, &ctx)?.value;
                out.push(def.report(pz(q, nu, z), lhs, rhs));
            }
        }
    }
    Ok(out)
}

const SEC6_Q: f64 = 0.95;
const SEC6_U: [f64; 10] = [-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9];

fn run_sec6_rel1(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let q = SEC6_Q;
    let ctx = ctx_at(base, q);
    let mut out = Vec::new();
    for &nu in &grid.nu_values {
        let a_m = a_coefficient(&OrderParam::new(nu - 1.0), &ctx)?;
        let a_0 = a_coefficient(&OrderParam::new(nu), &ctx)?;
        let a_p = a_coefficient(&OrderParam::new(nu + 1.0), &ctx)?;
        for &u in &SEC6_U {
            let uc = Complex64::new(u, 0.0);
            let lhs = a_m * phi_nu_at_u(nu - 1.0, uc, &ctx)?.value
                - a_p * phi_nu_at_u(nu + 1.0, uc, &ctx)?.value;
            let rhs = a_0
                * q.powf(-0.5)
                * (q.powf(-nu) - q.powf(nu))
                * (u / q - 1.0)
                * phi_nu_at_u(nu, uc / q, &ctx)?.value;
            out.push(def.report(
                vec![("q".into(), q), ("nu".into(), nu), ("u".into(), u)],
                lhs,
                rhs,
            ));
        }
    }
    Ok(out)
}

fn run_sec6_rel2(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let q = SEC6_Q;
    let ctx = ctx_at(base, q);
    let mut out = Vec::new();
    for &nu in &grid.nu_values {
        let a_m = a_coefficient(&OrderParam::new(nu - 1.0), &ctx)?;
        let a_0 = a_coefficient(&OrderParam::new(nu), &ctx)?;
        let a_p = a_coefficient(&OrderParam::new(nu + 1.0), &ctx)?;
        for &u in &SEC6_U {
            let uc = Complex64::new(u, 0.0);
            let lhs = a_m * phi_nu_at_u(nu - 1.0, uc, &ctx)?.value
                + a_p * phi_nu_at_u(nu + 1.0, uc, &ctx)?.value;
            let rhs = 2.0 * a_0 * (u / q) * phi_nu_at_u(nu, uc, &ctx)?.value
                - a_0
                    * q.powf(-0.5)
                    * (q.powf(-nu) + q.powf(nu))
                    * (u / q - 1.0)
                    * phi_nu_at_u(nu, uc / q, &ctx)?.value;
            out.push(def.report(
                vec![("q".into(), q), ("nu".into(), nu), ("u".into(), u)],
                lhs,
                rhs,
            ));
        }
    }
    Ok(out)
}

fn run_sec6_wronskian(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let q = SEC6_Q;
    let ctx = ctx_at(base, q);
    let mut out = Vec::new();
    for &nu in &grid.nu_values {
        for &u in &SEC6_U {
            let f = |x: f64| -> Result<Complex64> {
                Ok(phi_nu_at_u(nu, Complex64::new(x, 0.0), &ctx)?.value)
            };
            let lhs = (u / q + 1.0) * f(u)? * f(-u / q)? - (u / q - 1.0) * f(-u)? * f(u / q)?;
            out.push(def.report(
                vec![("q".into(), q), ("nu".into(), nu), ("u".into(), u)],
                lhs,
                Complex64::new(2.0, 0.0),
            ));
        }
    }
    Ok(out)
}

fn run_eq314(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for n in grid.integer_ns() {
            if n == 0 {
                continue;
            }
            for z in grid.z_values(q) {
                for (tag, kind) in [(1.0, Kind::One), (2.0, Kind::Two)] {
                    let eval = |order: f64| -> Result<Complex64> {
                        Ok(match kind {
                            Kind::One => i1_series(&OrderParam::new(order), z, &ctx)?.value,
                            Kind::Two => i2_series(&OrderParam::new(order), z, &ctx)?.value,
                        })
                    };
                    let lhs = eval(-(n as f64))?;
                    let rhs = eval(n as f64)?;
                    let mut params = pz(q, n as f64, z);
                    params.push(("kind".into(), tag));
                    out.push(def.report(params, lhs, rhs));
                }
            }
        }
    }
    Ok(out)
}

fn run_eq316(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for &nu in &grid.nu_values {
            for z in grid.z_values(q) {
                let ord = OrderParam::new(nu);
                let lhs = i1_from_i2(&ord, z, &ctx)?;
                let rhs = i1_series(&ord, z, &ctx)?.value;
                out.push(def.report(pz(q, nu, z), lhs, rhs));
            }
        }
    }
    Ok(out)
}

fn run_diffeq(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
    kind: Kind,
) -> Result<Vec<IdentityReport>> {
    let q_shift = |q: f64, nu: f64| q.powf(-nu) + q.powf(nu);
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let p = q * q;
        let mut orders: Vec<f64> = Vec::new();
        for &nu in &grid.nu_values {
            orders.push(nu);
            if nu != 0.0 {
                orders.push(-nu);
            }
        }
        for nu in orders {
            let ord = OrderParam::new(nu);
            let f = |w: Complex64| -> Result<Complex64> {
                match kind {
                    Kind::One => i1_from_i2(&ord, w, &ctx),
                    Kind::Two => Ok(i2_series(&ord, w, &ctx)?.value),
                }
            };
            for z in grid.z_values(q) {
                // balance form: coefficient-weighted outer terms against
                // the middle term
                let up = f(z / q)?;
                let down = f(q * z)?;
                let mid = f(z)?;
                let (lhs, rhs) = match kind {
                    Kind::One => (
                        (Complex64::new(1.0, 0.0) - (1.0 - p) * (1.0 - p) / (q * q) * z * z / 4.0)
                            * up
                            + down,
                        q_shift(q, nu) * mid,
                    ),
                    Kind::Two => (
                        up + (Complex64::new(1.0, 0.0) - (1.0 - p) * (1.0 - p) * z * z / 4.0)
                            * down,
                        q_shift(q, nu) * mid,
                    ),
                };
                out.push(def.report(pz(q, nu, z), lhs, rhs));
            }
        }
    }
    Ok(out)
}

fn run_eq311(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    run_diffeq(def, grid, base, Kind::One)
}

fn run_eq315(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    run_diffeq(def, grid, base, Kind::Two)
}

fn run_eq313(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let ctx2 = ctx.squared_base();
        let p = q * q;
        for &nu in &grid.noninteger_nus() {
            let f = |w: Complex64| i1_from_i2(&OrderParam::new(nu), w, &ctx);
            let g = |w: Complex64| i1_from_i2(&OrderParam::new(-nu), w, &ctx);
            let c_nu = q.powf(-nu) * (1.0 - p) / (q_gamma(nu, &ctx2)? * q_gamma(1.0 - nu, &ctx2)?);
            // grid points plus a near-zero point covering the z -> 0 value
            let mut zs = grid.z_values(q);
            zs.push(Complex64::from_polar(
                1e-6 * 2.0 / (1.0 - p),
                grid.z_fractions[0].arg(),
            ));
            for z in zs {
                let lhs = q_wronskian(f, g, z, &ctx)?;
                let w2 = (1.0 - p) * (1.0 - p) * z * z / 4.0;
                let rhs = c_nu * eq_exp(w2, &ctx2)?;
                out.push(def.report(pz(q, nu, z), lhs, rhs));
            }
        }
    }
    Ok(out)
}

fn run_recurrence(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
    id: RecurrenceId,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for &nu in &grid.nu_values {
            let ord = OrderParam::new(nu);
            for z in grid.z_values(q) {
                let res = recurrence_residual(id, &ord, z, &ctx)?;
                let scale = i2_series(&ord, z, &ctx)?.value.norm().max(1.0);
                out.push(def.report(
                    pz(q, nu, z),
                    res / scale,
                    Complex64::new(0.0, 0.0),
                ));
            }
        }
    }
    Ok(out)
}

macro_rules! recurrence_runner {
    ($name:ident, $id:expr) => {
        fn $name(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
            run_recurrence(def, grid, base, $id)
        }
    };
}

recurrence_runner!(run_p31a, RecurrenceId::P31a);
recurrence_runner!(run_p31b, RecurrenceId::P31b);
recurrence_runner!(run_p32a, RecurrenceId::P32a);
recurrence_runner!(run_p32b, RecurrenceId::P32b);
recurrence_runner!(run_p33a, RecurrenceId::P33a);
recurrence_runner!(run_p33b, RecurrenceId::P33b);
recurrence_runner!(run_p34a, RecurrenceId::P34a);
recurrence_runner!(run_p34b, RecurrenceId::P34b);

fn run_eq414(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for &nu in &grid.noninteger_nus() {
            let a = a_coefficient(&OrderParam::new(nu), &ctx)?;
            let a1 = a_coefficient(&OrderParam::new(nu + 1.0), &ctx)?;
            out.push(def.report(
                vec![("q".into(), q), ("nu".into(), nu)],
                Complex64::new(a1, 0.0),
                Complex64::new(a * q.powf(-nu - 0.5), 0.0),
            ));
        }
    }
    Ok(out)
}

fn run_eq415(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let ctx2 = ctx.squared_base();
        for &nu in &grid.noninteger_nus() {
            let a = a_coefficient(&OrderParam::new(nu), &ctx)?;
            let am = a_coefficient(&OrderParam::new(-nu), &ctx)?;
            let rhs = q.powf(-nu + 0.5)
                / (2.0
                    * q_gamma(nu, &ctx2)?
                    * q_gamma(1.0 - nu, &ctx2)?
                    * (nu * std::f64::consts::PI).sin());
            out.push(def.report(
                vec![("q".into(), q), ("nu".into(), nu)],
                Complex64::new(a * am, 0.0),
                Complex64::new(rhs, 0.0),
            ));
        }
    }
    Ok(out)
}

const LIMIT_EPS: [f64; 3] = [1e-3, 1e-4, 1e-5];

fn run_eq418_limit(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        for n in grid.integer_ns() {
            let exact = a_coefficient(&OrderParam::new(n as f64), &ctx)?;
            let mut errs = Vec::new();
            for &eps in &LIMIT_EPS {
                let approx = a_coefficient(&OrderParam::new(n as f64 + eps), &ctx)?;
                errs.push((approx - exact).abs());
            }
            let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
            let abs_err = *errs.last().unwrap();
            out.push(IdentityReport {
                identity_id: def.id.to_string(),
                params: vec![
                    ("q".into(), q),
                    ("n".into(), n as f64),
                    ("err_1e3".into(), errs[0]),
                    ("err_1e4".into(), errs[1]),
                    ("err_1e5".into(), errs[2]),
                ],
                lhs: Complex64::new(exact + abs_err, 0.0),
                rhs: Complex64::new(exact, 0.0),
                abs_err,
                rel_err: abs_err / exact.abs().max(1e-300),
                pass: decreasing,
            });
        }
    }
    Ok(out)
}

fn run_eq411(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    // certification window: the residue-matched and recurrence-exact
    // normalizations differ by a theta-type correction below q ~ 0.88
    let mut out = Vec::new();
    for q in windowed_q(grid, 0.88, 0.97, &[0.9, 0.95]) {
        let ctx = ctx_at(base, q);
        for &nu in &grid.noninteger_nus() {
            let rhs = a_coefficient(&OrderParam::new(nu), &ctx)?;
            for r in 0..3u32 {
                let lhs = a_residue_normalization(&OrderParam::new(nu), r, &ctx)?;
                out.push(def.report(
                    vec![("q".into(), q), ("nu".into(), nu), ("r".into(), r as f64)],
                    Complex64::new(lhs, 0.0),
                    Complex64::new(rhs, 0.0),
                ));
            }
        }
    }
    Ok(out)
}

const K_WINDOW_FALLBACK: [f64; 3] = [0.5, 0.6, 0.7];

fn run_eq58(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for q in windowed_q(grid, 0.45, 0.85, &K_WINDOW_FALLBACK) {
        let ctx = ctx_at(base, q);
        let p = q * q;
        for &nu in &grid.noninteger_nus() {
            let ord = OrderParam::new(nu);
            for &t in &[0.25, 0.5, 0.8] {
                let z = Complex64::new((q + t * (1.0 - q)) * 2.0 / (1.0 - p), 0.0);
                let lhs = k1_closed(&ord, z, &ctx)?;
                let rhs = k_noninteger(Kind::One, &ord, z, &ctx)?;
                out.push(def.report(pz(q, nu, z), lhs, rhs));
            }
        }
    }
    Ok(out)
}

fn run_eq58a(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for q in windowed_q(grid, 0.45, 0.85, &K_WINDOW_FALLBACK) {
        let ctx = ctx_at(base, q);
        let p = q * q;
        for &nu in &grid.noninteger_nus() {
            let ord = OrderParam::new(nu);
            let mut zs: Vec<f64> = [0.25, 0.5, 0.8]
                .iter()
                .map(|t| (q + t * (1.0 - q)) * 2.0 / (1.0 - p))
                .collect();
            if q <= 0.75 {
                // beyond the first-kind disc; at larger q the weighted
                // difference there is cancellation-limited
                zs.push(3.0 * 2.0 / (1.0 - p));
            }
            for zr in zs {
                let z = Complex64::new(zr, 0.0);
                let lhs = k2_closed(&ord, z, &ctx)?;
                let rhs = k_noninteger(Kind::Two, &ord, z, &ctx)?;
                out.push(def.report(pz(q, nu, z), lhs, rhs));
            }
        }
    }
    Ok(out)
}

fn run_k_evenness(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &q in &grid.q_values {
        let ctx = ctx_at(base, q);
        let p = q * q;
        for &nu in &grid.noninteger_nus() {
            let z = Complex64::new((q + 0.5 * (1.0 - q)) * 2.0 / (1.0 - p), 0.0);
            for (tag, kind) in [(1.0, Kind::One), (2.0, Kind::Two)] {
                let lhs = k_noninteger(kind, &OrderParam::new(nu), z, &ctx)?;
                let rhs = k_noninteger(kind, &OrderParam::new(-nu), z, &ctx)?;
                let mut params = pz(q, nu, z);
                params.push(("kind".into(), tag));
                out.push(def.report(params, lhs, rhs));
            }
        }
    }
    Ok(out)
}

fn run_k_recurrence(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
    id: KRecurrenceId,
) -> Result<Vec<IdentityReport>> {
    // cancellation in the weighted difference erodes the residual floor
    // above q ~ 0.75
    let mut out = Vec::new();
    for q in windowed_q(grid, 0.05, 0.75, &[0.3, 0.5, 0.7]) {
        let ctx = ctx_at(base, q);
        let p = q * q;
        for &nu in &grid.nu_values {
            let ord = OrderParam::new(nu);
            let z = Complex64::new((q + 0.5 * (1.0 - q)) * 2.0 / (1.0 - p), 0.0);
            let res = k_recurrence_residual(id, &ord, z, &ctx)?;
            let scale = k_auto(Kind::One, &ord, z, &ctx)?.norm().max(1.0);
            out.push(def.report(pz(q, nu, z), res / scale, Complex64::new(0.0, 0.0)));
        }
    }
    Ok(out)
}

macro_rules! k_recurrence_runner {
    ($name:ident, $id:expr) => {
        fn $name(def: &IdentityDef, grid: &GridSpec, base: &QContext) -> Result<Vec<IdentityReport>> {
            run_k_recurrence(def, grid, base, $id)
        }
    };
}

k_recurrence_runner!(run_p52a, KRecurrenceId::P52a);
k_recurrence_runner!(run_p52b, KRecurrenceId::P52b);
k_recurrence_runner!(run_p53a, KRecurrenceId::P53a);
k_recurrence_runner!(run_p53b, KRecurrenceId::P53b);
k_recurrence_runner!(run_p52aa, KRecurrenceId::P52Aa);
k_recurrence_runner!(run_p52ab, KRecurrenceId::P52Ab);
k_recurrence_runner!(run_p53aa, KRecurrenceId::P53Aa);
k_recurrence_runner!(run_p53ab, KRecurrenceId::P53Ab);

fn run_k_integer_continuity(
    def: &IdentityDef,
    grid: &GridSpec,
    base: &QContext,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for q in windowed_q(grid, 0.3, 0.75, &[0.5]) {
        let ctx = ctx_at(base, q);
        let p = q * q;
        let z = Complex64::new(0.55 * 2.0 / (1.0 - p), 0.0);
        for (tag, kind) in [(1.0, Kind::One), (2.0, Kind::Two)] {
            for n in grid.integer_ns() {
                let exact = k_integer_variant(kind, n, z, &ctx, IntegerKVariant::GammaConsistent)?;
                let mut errs = Vec::new();
                for &eps in &LIMIT_EPS {
                    let limit = k_noninteger(kind, &OrderParam::new(n as f64 + eps), z, &ctx)?;
                    errs.push((limit - exact).norm());
                }
                let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
                let abs_err = *errs.last().unwrap();
                out.push(IdentityReport {
                    identity_id: def.id.to_string(),
                    params: vec![
                        ("q".into(), q),
                        ("kind".into(), tag),
                        ("n".into(), n as f64),
                        ("err_1e3".into(), errs[0]),
                        ("err_1e4".into(), errs[1]),
                        ("err_1e5".into(), errs[2]),
                    ],
                    lhs: exact + Complex64::new(abs_err, 0.0),
                    rhs: exact,
                    abs_err,
                    rel_err: abs_err / exact.norm().max(1e-300),
                    pass: decreasing,
                });
            }
        }
    }
    Ok(out)
}

fn run_classical(
    def: &IdentityDef,
    func: LimitFunc,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &nu in &[0.0, 0.5, 1.0] {
        for &z in &[0.5, 1.0, 2.0] {
            let rep = super::classical_limit_report(func, nu, z, &[1, 2, 3])?;
            let last = rep.points.last().unwrap().1;
            let classical = match func {
                LimitFunc::I1 | LimitFunc::I2 => super::classical_bessel_i(nu, z),
                LimitFunc::K1 | LimitFunc::K2 => super::classical_bessel_k(nu, z),
            };
            out.push(IdentityReport {
                identity_id: def.id.to_string(),
                params: vec![
                    ("nu".into(), nu),
                    ("z".into(), z),
                    ("err_m1".into(), rep.points[0].1),
                    ("err_m2".into(), rep.points[1].1),
                    ("err_m3".into(), rep.points[2].1),
                ],
                lhs: Complex64::new(classical + last, 0.0),
                rhs: Complex64::new(classical, 0.0),
                abs_err: last,
                rel_err: last / classical.abs().max(1e-300),
                pass: rep.monotone && last < 5e-2,
            });
        }
    }
    Ok(out)
}

fn run_classical_i1(def: &IdentityDef, _g: &GridSpec, _c: &QContext) -> Result<Vec<IdentityReport>> {
    run_classical(def, LimitFunc::I1)
}
fn run_classical_i2(def: &IdentityDef, _g: &GridSpec, _c: &QContext) -> Result<Vec<IdentityReport>> {
    run_classical(def, LimitFunc::I2)
}
fn run_classical_k1(def: &IdentityDef, _g: &GridSpec, _c: &QContext) -> Result<Vec<IdentityReport>> {
    run_classical(def, LimitFunc::K1)
}
fn run_classical_k2(def: &IdentityDef, _g: &GridSpec, _c: &QContext) -> Result<Vec<IdentityReport>> {
    run_classical(def, LimitFunc::K2)
}

/// The full registered catalog.
pub fn catalog() -> &'static [IdentityDef] {
    const DEFS: &[IdentityDef] = &[
        IdentityDef {
            id: "eq1b",
            description: "product of the two q-exponentials: e_q(z) E_q(-z) = 1",
            abs_bound: 1e-12,
            rel_bound: 1e-12,
            runner: run_eq1b,
        },
        IdentityDef {
            id: "prop2.1",
            description: "partial-fraction expansion of e_q against the product form",
            abs_bound: 1e-30,
            rel_bound: 1e-10,
            runner: run_partial_fractions,
        },
        IdentityDef {
            id: "eq5",
            description: "downward argument shift of e_q((1-q^2)z/2)",
            abs_bound: 1e-12,
            rel_bound: 1e-12,
            runner: run_eq5,
        },
        IdentityDef {
            id: "eq6",
            description: "upward argument shift of e_q((1-q^2)z/2)",
            abs_bound: 1e-12,
            rel_bound: 1e-12,
            runner: run_eq6,
        },
        IdentityDef {
            id: "eq7",
            description: "argument shift of e_{q^2} at the squared variable",
            abs_bound: 1e-12,
            rel_bound: 1e-12,
            runner: run_eq7,
        },
        IdentityDef {
            id: "rem2.1",
            description: "product split e_q(w) e_q(-w) = e_{q^2}(w^2)",
            abs_bound: 1e-12,
            rel_bound: 1e-12,
            runner: run_rem21,
        },
        IdentityDef {
            id: "prop2.2",
            description: "e_q((1-q)z) is a fixed point of the q-derivative",
            abs_bound: 1e-30,
            rel_bound: 1e-12,
            runner: run_prop22,
        },
        IdentityDef {
            id: "eq9.funceq",
            description: "q-Gamma functional equation Gamma_q(a+1) = (1-q^a)/(1-q) Gamma_q(a)",
            abs_bound: 1e-30,
            rel_bound: 1e-12,
            runner: run_gamma_funceq,
        },
        IdentityDef {
            id: "eq10",
            description: "partial-fraction form of Gamma_{q^2} against the product form",
            abs_bound: 1e-30,
            rel_bound: 1e-12,
            runner: run_eq10,
        },
        IdentityDef {
            id: "eq12",
            description: "q-psi series against the finite-difference log-derivative of q-Gamma",
            abs_bound: 1e-30,
            rel_bound: 1e-7,
            runner: run_eq12,
        },
        IdentityDef {
            id: "eq13",
            description: "psi/Gamma ratio limit at nonpositive integers",
            abs_bound: 1e-30,
            rel_bound: 1e-3,
            runner: run_eq13,
        },
        IdentityDef {
            id: "eq4.4",
            description: "the 2Phi1 form of phi_nu against its explicit coefficient series",
            abs_bound: 1e-30,
            rel_bound: 1e-13,
            runner: run_eq44,
        },
        IdentityDef {
            id: "phi.symmetry",
            description: "phi_nu = phi_{-nu} bit for bit (sorted parameters)",
            abs_bound: 0.0,
            rel_bound: 0.0,
            runner: run_phi_symmetry,
        },
        IdentityDef {
            id: "sec6.rel1",
            description: "contiguous a-weighted 2Phi1 relation (difference form), at q = 0.95",
            abs_bound: 1e-10,
            rel_bound: 1e-10,
            runner: run_sec6_rel1,
        },
        IdentityDef {
            id: "sec6.rel2",
            description: "contiguous a-weighted 2Phi1 relation (sum form), at q = 0.95",
            abs_bound: 1e-10,
            rel_bound: 1e-10,
            runner: run_sec6_rel2,
        },
        IdentityDef {
            id: "sec6.wronskian",
            description: "quadratic 2Phi1 relation with value 2, at q = 0.95",
            abs_bound: 1e-10,
            rel_bound: 1e-10,
            runner: run_sec6_wronskian,
        },
        IdentityDef {
            id: "eq3.14",
            description: "integer-order symmetry I_{-n} = I_n for both kinds",
            abs_bound: 1e-30,
            rel_bound: 1e-13,
            runner: run_eq314,
        },
        IdentityDef {
            id: "eq3.16",
            description: "first kind from second kind inside the power-series disc",
            abs_bound: 1e-30,
            rel_bound: 1e-10,
            runner: run_eq316,
        },
        IdentityDef {
            id: "eq3.11.I1",
            description: "second-order difference equation of the first kind (balance form)",
            abs_bound: 1e-30,
            rel_bound: 1e-10,
            runner: run_eq311,
        },
        IdentityDef {
            id: "eq3.15.I2",
            description: "second-order difference equation of the second kind (balance form)",
            abs_bound: 1e-30,
            rel_bound: 1e-10,
            runner: run_eq315,
        },
        IdentityDef {
            id: "eq3.13",
            description: "q-Wronskian of I_{+-nu} against the closed product form",
            abs_bound: 1e-30,
            rel_bound: 1e-9,
            runner: run_eq313,
        },
        IdentityDef {
            id: "prop3.1a",
            description: "q-derivative ladder for the first kind, order raised (normalized residual)",
            abs_bound: 1e-10,
            rel_bound: 0.0,
            runner: run_p31a,
        },
        IdentityDef {
            id: "prop3.1b",
            description: "q-derivative ladder for the first kind, order lowered (normalized residual)",
            abs_bound: 1e-10,
            rel_bound: 0.0,
            runner: run_p31b,
        },
        IdentityDef {
            id: "prop3.2a",
            description: "three-term difference recurrence of the first kind (normalized residual)",
            abs_bound: 1e-10,
            rel_bound: 0.0,
            runner: run_p32a,
        },
        IdentityDef {
            id: "prop3.2b",
            description: "three-term sum recurrence of the first kind (normalized residual)",
            abs_bound: 1e-10,
            rel_bound: 0.0,
            runner: run_p32b,
        },
        IdentityDef {
            id: "prop3.3a",
            description: "q-derivative ladder for the second kind, order raised (normalized residual)",
            abs_bound: 1e-10,
            rel_bound: 0.0,
            runner: run_p33a,
        },
        IdentityDef {
            id: "prop3.3b",
            description: "q-derivative ladder for the second kind, order lowered (normalized residual)",
            abs_bound: 1e-10,
            rel_bound: 0.0,
            runner: run_p33b,
        },
        IdentityDef {
            id: "prop3.4a",
            description: "weighted difference recurrence of the second kind (normalized residual)",
            abs_bound: 1e-10,
            rel_bound: 0.0,
            runner: run_p34a,
        },
        IdentityDef {
            id: "prop3.4b",
            description: "weighted sum recurrence of the second kind (normalized residual)",
            abs_bound: 1e-10,
            rel_bound: 0.0,
            runner: run_p34b,
        },
        IdentityDef {
            id: "eq4.14",
            description: "Laurent coefficient shift a_{nu+1} = a_nu q^{-nu-1/2}",
            abs_bound: 1e-30,
            rel_bound: 1e-8,
            runner: run_eq414,
        },
        IdentityDef {
            id: "eq4.15",
            description: "Laurent coefficient reflection product",
            abs_bound: 1e-30,
            rel_bound: 1e-8,
            runner: run_eq415,
        },
        IdentityDef {
            id: "eq4.18.limit",
            description: "noninteger -> integer limit of the Laurent coefficient (decreasing error)",
            abs_bound: 1e-30,
            rel_bound: 1e-8,
            runner: run_eq418_limit,
        },
        IdentityDef {
            id: "eq4.11",
            description: "residue condition of the Laurent expansion at pole indices 0..2 (q >= 0.88 window)",
            abs_bound: 1e-30,
            rel_bound: 1e-8,
            runner: run_eq411,
        },
        IdentityDef {
            id: "eq5.8",
            description: "closed Laurent form of the first Macdonald kind against the series combination",
            abs_bound: 1e-30,
            rel_bound: 1e-8,
            runner: run_eq58,
        },
        IdentityDef {
            id: "eq5.8a",
            description: "closed Laurent form of the second Macdonald kind against the series combination",
            abs_bound: 1e-30,
            rel_bound: 1e-8,
            runner: run_eq58a,
        },
        IdentityDef {
            id: "k.evenness",
            description: "K_{-nu} = K_nu bit for bit",
            abs_bound: 0.0,
            rel_bound: 0.0,
            runner: run_k_evenness,
        },
        IdentityDef {
            id: "prop5.2a",
            description: "q-derivative ladder for the first Macdonald kind, order lowered (normalized residual)",
            abs_bound: 1e-9,
            rel_bound: 0.0,
            runner: run_p52a,
        },
        IdentityDef {
            id: "prop5.2b",
            description: "q-derivative ladder for the first Macdonald kind, order raised (normalized residual)",
            abs_bound: 1e-9,
            rel_bound: 0.0,
            runner: run_p52b,
        },
        IdentityDef {
            id: "prop5.3a",
            description: "three-term difference recurrence of the first Macdonald kind (normalized residual)",
            abs_bound: 1e-9,
            rel_bound: 0.0,
            runner: run_p53a,
        },
        IdentityDef {
            id: "prop5.3b",
            description: "three-term sum recurrence of the first Macdonald kind (normalized residual)",
            abs_bound: 1e-9,
            rel_bound: 0.0,
            runner: run_p53b,
        },
        IdentityDef {
            id: "prop5.2Aa",
            description: "q-derivative ladder for the second Macdonald kind, order lowered (normalized residual)",
            abs_bound: 1e-9,
            rel_bound: 0.0,
            runner: run_p52aa,
        },
        IdentityDef {
            id: "prop5.2Ab",
            description: "q-derivative ladder for the second Macdonald kind, order raised (normalized residual)",
            abs_bound: 1e-9,
            rel_bound: 0.0,
            runner: run_p52ab,
        },
        IdentityDef {
            id: "prop5.3Aa",
            description: "weighted difference recurrence of the second Macdonald kind (normalized residual)",
            abs_bound: 1e-9,
            rel_bound: 0.0,
            runner: run_p53aa,
        },
        IdentityDef {
            id: "prop5.3Ab",
            description: "weighted sum recurrence of the second Macdonald kind (normalized residual)",
            abs_bound: 1e-9,
            rel_bound: 0.0,
            runner: run_p53ab,
        },
        IdentityDef {
            id: "k.integer.continuity",
            description: "K_{n+eps} -> K_n with strictly decreasing error over eps = 1e-3..1e-5",
            abs_bound: 1e-30,
            rel_bound: 1e-8,
            runner: run_k_integer_continuity,
        },
        IdentityDef {
            id: "classical.I1",
            description: "q -> 1 limit of the first kind against the classical oracle",
            abs_bound: 5e-2,
            rel_bound: 0.0,
            runner: run_classical_i1,
        },
        IdentityDef {
            id: "classical.I2",
            description: "q -> 1 limit of the second kind against the classical oracle",
            abs_bound: 5e-2,
            rel_bound: 0.0,
            runner: run_classical_i2,
        },
        IdentityDef {
            id: "classical.K1",
            description: "q -> 1 limit of the first Macdonald kind against the classical oracle",
            abs_bound: 5e-2,
            rel_bound: 0.0,
            runner: run_classical_k1,
        },
        IdentityDef {
            id: "classical.K2",
            description: "q -> 1 limit of the second Macdonald kind against the classical oracle",
            abs_bound: 5e-2,
            rel_bound: 0.0,
            runner: run_classical_k2,
        },
    ];
    DEFS
}
