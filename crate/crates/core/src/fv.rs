//! Maps between the one-component second-order picture and the two-component
//! first-order picture, and pointwise application of the differential
//! operators `h` and `d`.
//!
//! The component map and its inverse:
//!
//! ```text
//! psi1 = (psi + i tau (psi_t - V psi / (i hbar))) / 2
//! psi2 = (psi - i tau (psi_t - V psi / (i hbar))) / 2
//! psi  = psi1 + psi2
//! psi_t = (m c^2 (psi1 - psi2) + V psi) / (i hbar)
//! ```
//!
//! `h` applications leave the two boundary rows open (flagged
//! `interior_only`); closing them requires a boundary-condition member and is
//! owned by the spectral and evolution modules.

use crate::error::Result;
use crate::model::{Grid, PhysicalParams, Potential, ScalarState, TwoComponentState};
use num_complex::Complex64 as C64;

const I: C64 = C64::new(0.0, 1.0);

/// Result of applying a differential operator on the grid. Boundary rows are
/// zeroed and `interior_only` is set; they depend on the boundary-condition
/// closure.
#[derive(Debug, Clone)]
pub struct OperatorApplication {
    pub result: TwoComponentState,
    pub interior_only: bool,
}

/// Scalar-field analogue of [`OperatorApplication`].
#[derive(Debug, Clone)]
pub struct FieldApplication {
    pub values: Vec<C64>,
    pub interior_only: bool,
}

/// Two-component vector from one-component data.
pub fn to_fv(state: &ScalarState, potential: &Potential, grid: &Grid) -> Result<TwoComponentState> {
    let v = potential.values_on(grid)?;
    let tau = state.params.tau();
    let hbar = state.params.hbar;
    let n = state.len();
    let mut comp1 = Vec::with_capacity(n);
    let mut comp2 = Vec::with_capacity(n);
    for k in 0..n {
        // psi_t - V psi / (i hbar) = psi_t + i V psi / hbar
        let gauge_dt = state.psi_t[k] + I * (v[k] / hbar) * state.psi[k];
        let half = 0.5 * state.psi[k];
        let shift = 0.5 * I * tau * gauge_dt;
        comp1.push(half + shift);
        comp2.push(half - shift);
    }
    TwoComponentState::new(comp1, comp2)
}

/// One-component data from a two-component vector.
pub fn from_fv(
    state: &TwoComponentState,
    potential: &Potential,
    grid: &Grid,
    params: &PhysicalParams,
) -> Result<ScalarState> {
    let v = potential.values_on(grid)?;
    let mc2 = params.mc2();
    let ihbar = I * params.hbar;
    let n = state.len();
    let mut psi = Vec::with_capacity(n);
    let mut psi_t = Vec::with_capacity(n);
    for k in 0..n {
        let s = state.comp1[k] + state.comp2[k];
        let d = state.comp1[k] - state.comp2[k];
        psi.push(s);
        psi_t.push((mc2 * d + v[k] * s) / ihbar);
    }
    ScalarState::new(psi, psi_t, *params)
}

/// Central second difference; boundary entries are left at zero.
fn second_difference(field: &[C64], h: f64) -> Vec<C64> {
    let n = field.len();
    let mut out = vec![C64::ZERO; n];
    let inv_h2 = 1.0 / (h * h);
    for k in 1..n - 1 {
        out[k] = (field[k - 1] - 2.0 * field[k] + field[k + 1]) * inv_h2;
    }
    out
}

/// Apply the two-component Hamiltonian
/// `h = -(hbar^2/2m) P d^2/dx^2 + m c^2 tau3 + V` on interior rows, with
/// `P = tau3 + i tau2`.
pub fn apply_h(
    state: &TwoComponentState,
    potential: &Potential,
    grid: &Grid,
    params: &PhysicalParams,
) -> Result<OperatorApplication> {
    let v = potential.values_on(grid)?;
    let h = grid.spacing();
    let kappa = params.hbar * params.hbar / (2.0 * params.mass);
    let mc2 = params.mc2();
    let sum: Vec<C64> = state.component_sum();
    let sum_xx = second_difference(&sum, h);
    let n = state.len();
    let mut comp1 = vec![C64::ZERO; n];
    let mut comp2 = vec![C64::ZERO; n];
    for k in 1..n - 1 {
        // P [psi1''; psi2''] = (psi1 + psi2)'' [1; -1]
        let kinetic = -kappa * sum_xx[k];
        comp1[k] = kinetic + (mc2 + v[k]) * state.comp1[k];
        comp2[k] = -kinetic + (-mc2 + v[k]) * state.comp2[k];
    }
    Ok(OperatorApplication {
        result: TwoComponentState::new(comp1, comp2)?,
        interior_only: true,
    })
}

/// Apply the formal generalized adjoint `tau3 h^H tau3` on interior rows,
/// evaluated literally as the three-step conjugation. At the
/// differential-expression level this coincides with `h` itself, since
/// `tau3 P^H tau3 = P`.
pub fn apply_h_adj(
    state: &TwoComponentState,
    potential: &Potential,
    grid: &Grid,
    params: &PhysicalParams,
) -> Result<OperatorApplication> {
    let v = potential.values_on(grid)?;
    let h = grid.spacing();
    let kappa = params.hbar * params.hbar / (2.0 * params.mass);
    let mc2 = params.mc2();
    let n = state.len();
    // w = tau3 Psi
    let w1 = state.comp1.clone();
    let w2: Vec<C64> = state.comp2.iter().map(|z| -z).collect();
    // h^H carries P^H = tau3 - i tau2 = [[1,-1],[1,-1]]: both rows pick up
    // the component difference of the second derivative.
    let diff: Vec<C64> = w1.iter().zip(&w2).map(|(a, b)| a - b).collect();
    let diff_xx = second_difference(&diff, h);
    let mut out1 = vec![C64::ZERO; n];
    let mut out2 = vec![C64::ZERO; n];
    for k in 1..n - 1 {
        let kinetic = -kappa * diff_xx[k];
        let y1 = kinetic + (mc2 + v[k]) * w1[k];
        let y2 = kinetic + (-mc2 + v[k]) * w2[k];
        // final tau3
        out1[k] = y1;
        out2[k] = -y2;
    }
    Ok(OperatorApplication {
        result: TwoComponentState::new(out1, out2)?,
        interior_only: true,
    })
}

/// Apply `d = -c^2 d^2/dx^2 + tau^{-2}` on interior rows.
pub fn apply_d(field: &[C64], grid: &Grid, params: &PhysicalParams) -> FieldApplication {
    let c2 = params.light_speed * params.light_speed;
    let tau = params.tau();
    let inv_tau2 = 1.0 / (tau * tau);
    let field_xx = second_difference(field, grid.spacing());
    let n = field.len();
    let mut values = vec![C64::ZERO; n];
    for k in 1..n - 1 {
        values[k] = -c2 * field_xx[k] + inv_tau2 * field[k];
    }
    FieldApplication { values, interior_only: true }
}

/// Max interior residual between `apply_h` and the composition
/// `(hbar tau / 2) P d + (hbar / 2 tau)(tau3 - i tau2) + V`.
pub fn h_from_d_identity(
    state: &TwoComponentState,
    potential: &Potential,
    grid: &Grid,
    params: &PhysicalParams,
) -> Result<f64> {
    let direct = apply_h(state, potential, grid, params)?;
    let v = potential.values_on(grid)?;
    let tau = params.tau();
    let half_ht = 0.5 * params.hbar * tau;
    let half_h_over_t = 0.5 * params.hbar / tau;
    let d1 = apply_d(&state.comp1, grid, params);
    let d2 = apply_d(&state.comp2, grid, params);
    let n = state.len();
    let mut max_res: f64 = 0.0;
    for k in 1..n - 1 {
        // P [d psi1; d psi2] = (d psi1 + d psi2) [1; -1]
        let d_sum = d1.values[k] + d2.values[k];
        // (tau3 - i tau2) = [[1,-1],[1,-1]] picks the component difference.
        let diff = state.comp1[k] - state.comp2[k];
        let row1 = half_ht * d_sum + half_h_over_t * diff + v[k] * state.comp1[k];
        let row2 = -half_ht * d_sum + half_h_over_t * diff + v[k] * state.comp2[k];
        max_res = max_res
            .max((row1 - direct.result.comp1[k]).norm())
            .max((row2 - direct.result.comp2[k]).norm());
    }
    Ok(max_res)
}
