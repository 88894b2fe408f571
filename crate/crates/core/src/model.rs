//! Physical constants, the spatial grid, external potentials and the two
//! state representations (one-component second-order data and the
//! two-component first-order vector) shared by every other module.

use crate::error::{KfgError, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Mass, speed of light and Planck constant, with the derived time scale
/// `tau = hbar / (m c^2)` and Compton wavelength `lambda_C = c tau`.
///
/// The default unit system is natural units (`m = c = hbar = 1`), which keeps
/// spectra O(1); any other positive values are accepted and every quantity in
/// the crate is then expressed in the corresponding derived units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mass: f64,
    pub light_speed: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, light_speed: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("light_speed", light_speed), ("hbar", hbar)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(KfgError::InvalidParams(format!(
                    "{name} must be positive and finite (got {v})"
                )));
            }
        }
        Ok(PhysicalParams { mass, light_speed, hbar })
    }

    /// Natural units: `m = c = hbar = 1`, hence `tau = 1` and `lambda_C = 1`.
    pub fn natural() -> Self {
        PhysicalParams { mass: 1.0, light_speed: 1.0, hbar: 1.0 }
    }

    /// Rest energy `m c^2`.
    pub fn mc2(&self) -> f64 {
        self.mass * self.light_speed * self.light_speed
    }

    /// `tau = hbar / (m c^2)`, the light-crossing time of one Compton wavelength.
    pub fn tau(&self) -> f64 {
        self.hbar / self.mc2()
    }

    /// Compton wavelength `lambda_C = c tau = hbar / (m c)`.
    pub fn compton(&self) -> f64 {
        self.light_speed * self.tau()
    }
}

/// Free function alias for the natural-unit constructor.
pub fn natural_units() -> PhysicalParams {
    PhysicalParams::natural()
}

/// Uniform grid on the closed interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, n_points: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(KfgError::InvalidGrid(format!("need a < b, got [{a}, {b}]")));
        }
        if n_points < 3 {
            return Err(KfgError::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        Ok(Grid { a, b, n_points })
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / (self.n_points - 1) as f64
    }

    /// i-th node; exact at both endpoints.
    pub fn x(&self, i: usize) -> f64 {
        let n = (self.n_points - 1) as f64;
        (self.a * (n - i as f64) + self.b * i as f64) / n
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

/// Real external electric potential.
///
/// The step kind stores both one-sided limits explicitly; interface matching
/// is stated in terms of `V(x_s-)` and `V(x_s+)`, and a node falling exactly
/// on the step takes their average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    Constant { v0: f64 },
    Step { x_step: f64, v_below: f64, v_above: f64 },
    Tabulated { values: Vec<f64> },
}

impl Potential {
    pub fn zero() -> Self {
        Potential::Constant { v0: 0.0 }
    }

    /// `V(x) = v0 * Theta(x - x_step)`.
    pub fn step(v0: f64, x_step: f64) -> Self {
        Potential::Step { x_step, v_below: 0.0, v_above: v0 }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        match self {
            Potential::Constant { v0 } => {
                if !v0.is_finite() {
                    return Err(KfgError::InvalidPotential("constant value not finite".into()));
                }
            }
            Potential::Step { x_step, v_below, v_above } => {
                if ![*x_step, *v_below, *v_above].iter().all(|v| v.is_finite()) {
                    return Err(KfgError::InvalidPotential("step parameters not finite".into()));
                }
            }
            Potential::Tabulated { values } => {
                if values.len() != grid.n_points {
                    return Err(KfgError::InvalidPotential(format!(
                        "tabulated length {} != grid points {}",
                        values.len(),
                        grid.n_points
                    )));
                }
                if !values.iter().all(|v| v.is_finite()) {
                    return Err(KfgError::InvalidPotential("tabulated value not finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Sample on the grid nodes.
    pub fn values_on(&self, grid: &Grid) -> Result<Vec<f64>> {
        self.validate(grid)?;
        Ok(match self {
            Potential::Constant { v0 } => vec![*v0; grid.n_points],
            Potential::Step { x_step, v_below, v_above } => grid
                .points()
                .map(|x| {
                    if x < *x_step {
                        *v_below
                    } else if x > *x_step {
                        *v_above
                    } else {
                        0.5 * (v_below + v_above)
                    }
                })
                .collect(),
            Potential::Tabulated { values } => values.clone(),
        })
    }

    /// One-sided limits `(V(x0-), V(x0+))`; both equal the pointwise value for
    /// the continuous kinds.
    pub fn one_sided_limits(&self, x0: f64) -> (f64, f64) {
        match self {
            Potential::Constant { v0 } => (*v0, *v0),
            Potential::Step { x_step, v_below, v_above } => {
                if x0 < *x_step {
                    (*v_below, *v_below)
                } else if x0 > *x_step {
                    (*v_above, *v_above)
                } else {
                    (*v_below, *v_above)
                }
            }
            Potential::Tabulated { .. } => (f64::NAN, f64::NAN),
        }
    }
}

fn check_finite(field: &[C64], what: &str) -> Result<()> {
    if field.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(KfgError::InvalidState(format!("{what} contains non-finite entries")));
    }
    Ok(())
}

/// One-component second-order data `(psi, psi_t)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarState {
    pub psi: Vec<C64>,
    pub psi_t: Vec<C64>,
    pub params: PhysicalParams,
}

impl ScalarState {
    pub fn new(psi: Vec<C64>, psi_t: Vec<C64>, params: PhysicalParams) -> Result<Self> {
        if psi.len() != psi_t.len() {
            return Err(KfgError::InvalidState(format!(
                "psi length {} != psi_t length {}",
                psi.len(),
                psi_t.len()
            )));
        }
        check_finite(&psi, "psi")?;
        check_finite(&psi_t, "psi_t")?;
        Ok(ScalarState { psi, psi_t, params })
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }
}

/// Two-component state vector `Psi = [psi1, psi2]^T` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoComponentState {
    pub comp1: Vec<C64>,
    pub comp2: Vec<C64>,
}

impl TwoComponentState {
    pub fn new(comp1: Vec<C64>, comp2: Vec<C64>) -> Result<Self> {
        if comp1.len() != comp2.len() {
            return Err(KfgError::InvalidState(format!(
                "component lengths differ: {} vs {}",
                comp1.len(),
                comp2.len()
            )));
        }
        check_finite(&comp1, "psi1")?;
        check_finite(&comp2, "psi2")?;
        Ok(TwoComponentState { comp1, comp2 })
    }

    pub fn zeros(n: usize) -> Self {
        TwoComponentState { comp1: vec![C64::ZERO; n], comp2: vec![C64::ZERO; n] }
    }

    pub fn len(&self) -> usize {
        self.comp1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comp1.is_empty()
    }

    /// Pointwise sum `psi1 + psi2` (the one-component wavefunction).
    pub fn component_sum(&self) -> Vec<C64> {
        self.comp1.iter().zip(&self.comp2).map(|(a, b)| a + b).collect()
    }
}

/// Endpoint values and one-sided first derivatives of a sampled field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTrace {
    pub value_a: C64,
    pub value_b: C64,
    pub deriv_a: C64,
    pub deriv_b: C64,
}

/// Endpoint values and one-sided second-order derivative estimates.
///
/// Uses the 3-point stencils `(-3 f0 + 4 f1 - f2) / 2h` and its mirror, which
/// are exact on polynomials of degree <= 2 and match the interior O(h^2)
/// discretization order.
pub fn boundary_trace(field: &[C64], grid: &Grid) -> Result<FieldTrace> {
    let n = field.len();
    if n != grid.n_points {
        return Err(KfgError::GridMismatch { left: n, right: grid.n_points });
    }
    if n < 4 {
        return Err(KfgError::GridTooSmall { needed: 4, got: n });
    }
    let h = grid.spacing();
    let deriv_a = (-3.0 * field[0] + 4.0 * field[1] - field[2]) / (2.0 * h);
    let deriv_b = (3.0 * field[n - 1] - 4.0 * field[n - 2] + field[n - 3]) / (2.0 * h);
    Ok(FieldTrace { value_a: field[0], value_b: field[n - 1], deriv_a, deriv_b })
}

impl ScalarState {
    pub fn boundary_trace(&self, grid: &Grid) -> Result<FieldTrace> {
        boundary_trace(&self.psi, grid)
    }
}

impl TwoComponentState {
    pub fn boundary_trace(&self, grid: &Grid) -> Result<[FieldTrace; 2]> {
        Ok([boundary_trace(&self.comp1, grid)?, boundary_trace(&self.comp2, grid)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn natural_units_scales() {
        let p = natural_units();
        assert_eq!(p.tau(), 1.0);
        assert_eq!(p.compton(), 1.0);
        let p = PhysicalParams::new(2.0, 1.0, 1.0).unwrap();
        assert_eq!(p.tau(), 0.5);
    }

    #[test]
    fn derived_scales_consistent() {
        for (m, c, hbar) in [(1.0, 1.0, 1.0), (2.5, 0.7, 3.1), (0.511, 137.0, 1.0)] {
            let p = PhysicalParams::new(m, c, hbar).unwrap();
            assert!((p.tau() * p.mc2() - p.hbar).abs() <= 4.0 * f64::EPSILON * p.hbar);
            assert!((p.compton() - p.light_speed * p.tau()).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = Grid::new(-0.3, 1.7, 101).unwrap();
        assert_eq!(g.x(0), -0.3);
        assert_eq!(g.x(100), 1.7);
        let pts: Vec<f64> = g.points().collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn grid_rejects_degenerate() {
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_err());
    }

    #[test]
    fn step_limits() {
        let v = Potential::step(0.5, 0.25);
        assert_eq!(v.one_sided_limits(0.25), (0.0, 0.5));
        assert_eq!(v.one_sided_limits(0.1), (0.0, 0.0));
        assert_eq!(v.one_sided_limits(0.3), (0.5, 0.5));
    }

    #[test]
    fn trace_of_constant_field() {
        let g = Grid::new(0.0, 2.0, 17).unwrap();
        let f = vec![C64::new(1.0, 0.0); 17];
        let t = boundary_trace(&f, &g).unwrap();
        assert_eq!(t.value_a, C64::new(1.0, 0.0));
        assert_eq!(t.value_b, C64::new(1.0, 0.0));
        assert_eq!(t.deriv_a.norm(), 0.0);
        assert_eq!(t.deriv_b.norm(), 0.0);
    }

    #[test]
    fn trace_exact_on_linear() {
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        let f: Vec<C64> = g.points().map(|x| C64::new(x, 0.0)).collect();
        let t = boundary_trace(&f, &g).unwrap();
        assert!((t.deriv_a - C64::ONE).norm() <= 1e-14);
        assert!((t.deriv_b - C64::ONE).norm() <= 1e-14);
    }

    #[test]
    fn trace_exact_on_quadratic() {
        let g = Grid::new(0.0, 1.0, 13).unwrap();
        let f: Vec<C64> = g.points().map(|x| C64::new(x * x, 0.0)).collect();
        let t = boundary_trace(&f, &g).unwrap();
        assert!((t.deriv_a).norm() <= 1e-13);
        assert!((t.deriv_b - C64::new(2.0, 0.0)).norm() <= 1e-13);
    }

    #[test]
    fn trace_second_order_on_sine() {
        // One-sided 3-point stencil on sin(pi x), n = 101: the h^2/3 * f'''
        // truncation term evaluates to 1.034e-3 at x = 0.
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        let f: Vec<C64> = g.points().map(|x| C64::new((PI * x).sin(), 0.0)).collect();
        let t = boundary_trace(&f, &g).unwrap();
        let err_coarse = (t.deriv_a - C64::new(PI, 0.0)).norm();
        assert!(err_coarse <= 1.05e-3, "err {err_coarse}");

        // Halving h divides the error by ~4.
        let g2 = Grid::new(0.0, 1.0, 201).unwrap();
        let f2: Vec<C64> = g2.points().map(|x| C64::new((PI * x).sin(), 0.0)).collect();
        let t2 = boundary_trace(&f2, &g2).unwrap();
        let err_fine = (t2.deriv_a - C64::new(PI, 0.0)).norm();
        let ratio = err_coarse / err_fine;
        assert!((3.6..4.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn trace_needs_four_points() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        let f = vec![C64::ZERO; 3];
        assert!(matches!(
            boundary_trace(&f, &g),
            Err(KfgError::GridTooSmall { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn states_validate_lengths() {
        let p = natural_units();
        assert!(ScalarState::new(vec![C64::ONE; 4], vec![C64::ZERO; 3], p).is_err());
        assert!(TwoComponentState::new(vec![C64::ONE; 4], vec![C64::ZERO; 4]).is_ok());
        assert!(
            TwoComponentState::new(vec![C64::new(f64::NAN, 0.0); 2], vec![C64::ZERO; 2]).is_err()
        );
    }
}
