//! Sesquilinear quantities: the indefinite pseudo inner product, the Dirac
//! and one-component scalar products, charge-like density, currents, the
//! boundary term certifying pseudo self-adjointness, and the conservation
//! rate identity.
//!
//! All integrals use the trapezoid rule, matching the O(h^2) stencils used
//! elsewhere.

use crate::error::{KfgError, Result};
use crate::model::{
    boundary_trace, Grid, PhysicalParams, Potential, ScalarState, TwoComponentState,
};
use num_complex::Complex64 as C64;

const I: C64 = C64::new(0.0, 1.0);

/// Tolerance for reality and cross-form checks performed inside observables.
pub const FORM_TOL: f64 = 1e-12;

/// Trapezoid-rule integral of a sampled complex integrand.
pub fn trapezoid(values: &[C64], grid: &Grid) -> C64 {
    let n = values.len();
    let h = grid.spacing();
    let mut sum = 0.5 * (values[0] + values[n - 1]);
    for v in &values[1..n - 1] {
        sum += v;
    }
    sum * h
}

fn check_same_grid(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(KfgError::GridMismatch { left, right });
    }
    Ok(())
}

/// Indefinite pseudo inner product `<<Psi, Phi>> = integral Psi^H tau3 Phi`.
pub fn pseudo_inner(psi: &TwoComponentState, phi: &TwoComponentState, grid: &Grid) -> Result<C64> {
    check_same_grid(psi.len(), phi.len())?;
    check_same_grid(psi.len(), grid.n_points)?;
    let integrand: Vec<C64> = (0..psi.len())
        .map(|k| psi.comp1[k].conj() * phi.comp1[k] - psi.comp2[k].conj() * phi.comp2[k])
        .collect();
    Ok(trapezoid(&integrand, grid))
}

/// Positive-definite Dirac product `<Psi, Phi>_D = integral Psi^H Phi`.
pub fn dirac_inner(psi: &TwoComponentState, phi: &TwoComponentState, grid: &Grid) -> Result<C64> {
    check_same_grid(psi.len(), phi.len())?;
    check_same_grid(psi.len(), grid.n_points)?;
    let integrand: Vec<C64> = (0..psi.len())
        .map(|k| psi.comp1[k].conj() * phi.comp1[k] + psi.comp2[k].conj() * phi.comp2[k])
        .collect();
    Ok(trapezoid(&integrand, grid))
}

/// Squared pseudo norm `<<Psi, Psi>>` (real, possibly negative).
pub fn pseudo_norm_sq(psi: &TwoComponentState, grid: &Grid) -> Result<f64> {
    Ok(pseudo_inner(psi, psi, grid)?.re)
}

/// One-component scalar product
/// `(i hbar / 2 m c^2) * integral (psi^* phi_t - psi_t^* phi - (2V / i hbar) psi^* phi)`.
pub fn kfg_inner(
    s1: &ScalarState,
    s2: &ScalarState,
    potential: &Potential,
    grid: &Grid,
) -> Result<C64> {
    check_same_grid(s1.len(), s2.len())?;
    check_same_grid(s1.len(), grid.n_points)?;
    let v = potential.values_on(grid)?;
    let params = s1.params;
    let hbar = params.hbar;
    let integrand: Vec<C64> = (0..s1.len())
        .map(|k| {
            let cross = s1.psi[k].conj() * s2.psi_t[k] - s1.psi_t[k].conj() * s2.psi[k];
            // -(2V / i hbar) = +2 i V / hbar
            cross + I * (2.0 * v[k] / hbar) * s1.psi[k].conj() * s2.psi[k]
        })
        .collect();
    Ok(I * (hbar / (2.0 * params.mc2())) * trapezoid(&integrand, grid))
}

/// Charge-like density `rho = |psi1|^2 - |psi2|^2` (not positive definite).
pub fn density(psi: &TwoComponentState) -> Vec<f64> {
    (0..psi.len())
        .map(|k| psi.comp1[k].norm_sqr() - psi.comp2[k].norm_sqr())
        .collect()
}

/// First derivative of a sampled field: central differences on the interior,
/// 3-point one-sided stencils at the endpoints (all O(h^2)).
pub fn derivative_field(field: &[C64], grid: &Grid) -> Result<Vec<C64>> {
    let n = field.len();
    check_same_grid(n, grid.n_points)?;
    if n < 4 {
        return Err(KfgError::GridTooSmall { needed: 4, got: n });
    }
    let h = grid.spacing();
    let mut out = vec![C64::ZERO; n];
    out[0] = (-3.0 * field[0] + 4.0 * field[1] - field[2]) / (2.0 * h);
    for k in 1..n - 1 {
        out[k] = (field[k + 1] - field[k - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * field[n - 1] - 4.0 * field[n - 2] + field[n - 3]) / (2.0 * h);
    Ok(out)
}

fn realize_current(raw: Vec<C64>) -> Result<Vec<f64>> {
    let max_im = raw.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let scale = raw.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if max_im > FORM_TOL * scale {
        return Err(KfgError::NonRealCurrent(max_im));
    }
    Ok(raw.into_iter().map(|z| z.re).collect())
}

/// Probability-current-like density from one-component data:
/// `j = (i hbar / 2m)(psi_x^* psi - psi^* psi_x)`.
pub fn current_scalar(state: &ScalarState, grid: &Grid) -> Result<Vec<f64>> {
    let psi_x = derivative_field(&state.psi, grid)?;
    let pref = I * (state.params.hbar / (2.0 * state.params.mass));
    let raw: Vec<C64> = (0..state.len())
        .map(|k| pref * (psi_x[k].conj() * state.psi[k] - state.psi[k].conj() * psi_x[k]))
        .collect();
    realize_current(raw)
}

/// The same current from the two-component picture, evaluated strictly on
/// projector-multiplied vectors:
/// `j = (i hbar / 2m)(1/2)[(P Psi_x)^H (P Psi) - (P Psi)^H (P Psi_x)]`.
pub fn current_fv(
    state: &TwoComponentState,
    grid: &Grid,
    params: &PhysicalParams,
) -> Result<Vec<f64>> {
    let d1 = derivative_field(&state.comp1, grid)?;
    let d2 = derivative_field(&state.comp2, grid)?;
    let pref = I * (params.hbar / (2.0 * params.mass)) * 0.5;
    let raw: Vec<C64> = (0..state.len())
        .map(|k| {
            // P v = (v1 + v2) [1, -1]
            let p_psi = state.comp1[k] + state.comp2[k];
            let p_dpsi = d1[k] + d2[k];
            // (P Psi_x)^H (P Psi) = 2 conj(p_dpsi) p_psi
            pref * 2.0 * (p_dpsi.conj() * p_psi - p_psi.conj() * p_dpsi)
        })
        .collect();
    realize_current(raw)
}

/// The boundary term `f[Xi, Phi]`, computed in both equivalent forms:
///
/// * metric form: `(hbar^2/2m) [Xi_x^H tau3 P Phi - Xi^H tau3 P Phi_x]_a^b`
/// * projector form: `(hbar^2/2m)(1/2) [(P Xi_x)^H P Phi - (P Xi)^H P Phi_x]_a^b`
///
/// Their agreement encodes `P^H P = 2 tau3 P`; disagreement beyond tolerance
/// is reported as an error rather than silently averaged.
pub fn boundary_term_f(
    xi: &TwoComponentState,
    phi: &TwoComponentState,
    grid: &Grid,
    params: &PhysicalParams,
) -> Result<C64> {
    check_same_grid(xi.len(), phi.len())?;
    let xi_tr = xi.boundary_trace(grid)?;
    let phi_tr = phi.boundary_trace(grid)?;
    let pref = params.hbar * params.hbar / (2.0 * params.mass);

    // tau3 P = [[1,1],[1,1]]: v^H (tau3 P) w = conj(v1 + v2) (w1 + w2)
    let metric_form = |end: usize| -> C64 {
        let (xv, xd, pv, pd) = trace_sums(&xi_tr, &phi_tr, end);
        xd.conj() * pv - xv.conj() * pd
    };
    // (P v)^H (P w) = 2 conj(v1 + v2)(w1 + w2)
    let projector_form = |end: usize| -> C64 {
        let (xv, xd, pv, pd) = trace_sums(&xi_tr, &phi_tr, end);
        0.5 * (2.0 * (xd.conj() * pv) - 2.0 * (xv.conj() * pd))
    };

    let f17 = pref * (metric_form(1) - metric_form(0));
    let f18 = pref * (projector_form(1) - projector_form(0));
    let scale = f17.norm().max(f18.norm()).max(1.0);
    let disagreement = (f17 - f18).norm();
    if disagreement > FORM_TOL * scale {
        return Err(KfgError::BoundaryFormMismatch(disagreement));
    }
    Ok(f17)
}

/// Component sums of the traces at one end (0 = a, 1 = b).
fn trace_sums(
    xi_tr: &[crate::model::FieldTrace; 2],
    phi_tr: &[crate::model::FieldTrace; 2],
    end: usize,
) -> (C64, C64, C64, C64) {
    let pick = |t: &crate::model::FieldTrace| {
        if end == 0 {
            (t.value_a, t.deriv_a)
        } else {
            (t.value_b, t.deriv_b)
        }
    };
    let (x1v, x1d) = pick(&xi_tr[0]);
    let (x2v, x2d) = pick(&xi_tr[1]);
    let (p1v, p1d) = pick(&phi_tr[0]);
    let (p2v, p2d) = pick(&phi_tr[1]);
    (x1v + x2v, x1d + x2d, p1v + p2v, p1d + p2d)
}

/// The boundary bracket appearing in the conservation rate:
/// `-(i hbar / 2m) [psi_x^* phi - psi^* phi_x]_a^b` from scalar traces.
pub fn rate_boundary_bracket(
    s1: &ScalarState,
    s2: &ScalarState,
    grid: &Grid,
) -> Result<C64> {
    let t1 = boundary_trace(&s1.psi, grid)?;
    let t2 = boundary_trace(&s2.psi, grid)?;
    let pref = -I * (s1.params.hbar / (2.0 * s1.params.mass));
    let at = |xv: C64, xd: C64, pv: C64, pd: C64| xd.conj() * pv - xv.conj() * pd;
    Ok(pref
        * (at(t1.value_b, t1.deriv_b, t2.value_b, t2.deriv_b)
            - at(t1.value_a, t1.deriv_a, t2.value_a, t2.deriv_a)))
}

/// Compare the numerical time derivative of `<<Psi, Phi>>` (centered in t)
/// against the boundary bracket along a recorded trajectory; returns the
/// worst mismatch over the series.
pub fn rate_identity_check(
    times: &[f64],
    series1: &[ScalarState],
    series2: &[ScalarState],
    potential: &Potential,
    grid: &Grid,
) -> Result<f64> {
    if times.len() != series1.len() || times.len() != series2.len() {
        return Err(KfgError::InvalidArgument(
            "time series lengths must agree".into(),
        ));
    }
    if times.len() < 3 {
        return Err(KfgError::InvalidArgument(
            "need at least three samples for a centered derivative".into(),
        ));
    }
    let inner: Vec<C64> = series1
        .iter()
        .zip(series2)
        .map(|(s1, s2)| kfg_inner(s1, s2, potential, grid))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for k in 1..times.len() - 1 {
        let dt2 = times[k + 1] - times[k - 1];
        let lhs = (inner[k + 1] - inner[k - 1]) / dt2;
        let rhs = rate_boundary_bracket(&series1[k], &series2[k], grid)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fv::to_fv;
    use crate::model::natural_units;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_fields(n: usize, rng: &mut impl Rng) -> Vec<C64> {
        (0..n)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect()
    }

    #[test]
    fn pseudo_inner_signature() {
        let grid = Grid::new(0.0, 1.0, 41).unwrap();
        let f: Vec<C64> = grid.points().map(|x| c((x * 2.0).sin() + 0.2, 0.0)).collect();
        let zero = vec![C64::ZERO; grid.n_points];

        let up = TwoComponentState::new(f.clone(), zero.clone()).unwrap();
        let plus = pseudo_inner(&up, &up, &grid).unwrap();
        assert!(plus.re > 0.0 && plus.im.abs() <= 1e-15);

        let down = TwoComponentState::new(zero.clone(), f.clone()).unwrap();
        let minus = pseudo_inner(&down, &down, &grid).unwrap();
        assert!(minus.re < 0.0);
        assert!((plus + minus).norm() <= 1e-14);

        let cross = pseudo_inner(&up, &down, &grid).unwrap();
        assert_eq!(cross.norm(), 0.0);
    }

    #[test]
    fn pseudo_inner_conjugate_symmetry_and_dirac_chain() {
        let grid = Grid::new(0.0, 1.0, 33).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = TwoComponentState::new(
                random_fields(grid.n_points, &mut rng),
                random_fields(grid.n_points, &mut rng),
            )
            .unwrap();
            let b = TwoComponentState::new(
                random_fields(grid.n_points, &mut rng),
                random_fields(grid.n_points, &mut rng),
            )
            .unwrap();
            let ab = pseudo_inner(&a, &b, &grid).unwrap();
            let ba = pseudo_inner(&b, &a, &grid).unwrap();
            assert!((ab - ba.conj()).norm() <= 1e-13);

            // <Psi, Phi>_D = <<Psi, tau3 Phi>>
            let tau3_b = TwoComponentState::new(
                b.comp1.clone(),
                b.comp2.iter().map(|z| -z).collect(),
            )
            .unwrap();
            let dirac = dirac_inner(&a, &b, &grid).unwrap();
            let chained = pseudo_inner(&a, &tau3_b, &grid).unwrap();
            assert!((dirac - chained).norm() <= 1e-13);
        }
    }

    #[test]
    fn grid_mismatch_rejected() {
        let grid = Grid::new(0.0, 1.0, 10).unwrap();
        let a = TwoComponentState::zeros(10);
        let b = TwoComponentState::zeros(11);
        assert!(matches!(
            pseudo_inner(&a, &b, &grid),
            Err(KfgError::GridMismatch { .. })
        ));
    }

    #[test]
    fn kfg_inner_matches_pseudo_inner_through_map() {
        let grid = Grid::new(0.0, 1.0, 65).unwrap();
        let params = natural_units();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for pot in [Potential::zero(), Potential::Constant { v0: 0.35 }, Potential::step(0.5, 0.4)]
        {
            for _ in 0..20 {
                let s1 = ScalarState::new(
                    random_fields(grid.n_points, &mut rng),
                    random_fields(grid.n_points, &mut rng),
                    params,
                )
                .unwrap();
                let s2 = ScalarState::new(
                    random_fields(grid.n_points, &mut rng),
                    random_fields(grid.n_points, &mut rng),
                    params,
                )
                .unwrap();
                let direct = kfg_inner(&s1, &s2, &pot, &grid).unwrap();
                let mapped = pseudo_inner(
                    &to_fv(&s1, &pot, &grid).unwrap(),
                    &to_fv(&s2, &pot, &grid).unwrap(),
                    &grid,
                )
                .unwrap();
                assert!((direct - mapped).norm() <= 1e-12, "{direct} vs {mapped}");
            }
        }
    }

    #[test]
    fn kfg_inner_positive_energy_normalization() {
        let grid = Grid::new(0.0, 1.0, 81).unwrap();
        let params = natural_units();
        let psi: Vec<C64> = grid.points().map(|x| c((3.0 * x).cos() + 1.5, 0.0)).collect();
        let psi_t: Vec<C64> = psi.iter().map(|z| -(I / params.tau()) * z).collect();
        let s = ScalarState::new(psi.clone(), psi_t, params).unwrap();
        let val = kfg_inner(&s, &s, &Potential::zero(), &grid).unwrap();
        let norm_sq: C64 = trapezoid(
            &psi.iter().map(|z| C64::new(z.norm_sqr(), 0.0)).collect::<Vec<_>>(),
            &grid,
        );
        assert!((val - norm_sq).norm() <= 1e-12);

        // Real psi with zero time derivative: antisymmetric integrand.
        let s0 = ScalarState::new(psi, vec![C64::ZERO; grid.n_points], params).unwrap();
        let val = kfg_inner(&s0, &s0, &Potential::zero(), &grid).unwrap();
        assert!(val.norm() <= 1e-15);
    }

    #[test]
    fn density_examples() {
        let up = TwoComponentState::new(vec![C64::ONE], vec![C64::ZERO]).unwrap();
        assert_eq!(density(&up), vec![1.0]);
        let down = TwoComponentState::new(vec![C64::ZERO], vec![C64::ONE]).unwrap();
        assert_eq!(density(&down), vec![-1.0]);
        let both = TwoComponentState::new(vec![C64::ONE], vec![C64::ONE]).unwrap();
        assert_eq!(density(&both), vec![0.0]);
    }

    #[test]
    fn scalar_current_examples() {
        let grid = Grid::new(0.0, 1.0, 101).unwrap();
        let params = natural_units();

        let real_field: Vec<C64> =
            grid.points().map(|x| c((2.0 * x).sin() + 0.3 * x, 0.0)).collect();
        let s = ScalarState::new(real_field, vec![C64::ZERO; grid.n_points], params).unwrap();
        let j = current_scalar(&s, &grid).unwrap();
        assert!(j.iter().all(|v| v.abs() <= 1e-13));

        // Plane wave: j = hbar k / m exactly (the stencil error cancels in the
        // sesquilinear combination's real part only at O(h^2); check to that).
        let k_wave = 3.0;
        let plane: Vec<C64> = grid.points().map(|x| (I * k_wave * x).exp()).collect();
        let s = ScalarState::new(plane, vec![C64::ZERO; grid.n_points], params).unwrap();
        let j = current_scalar(&s, &grid).unwrap();
        let h = grid.spacing();
        let tol = k_wave.powi(3) * h * h; // O(h^2) stencil constant
        for v in &j {
            assert!((v - k_wave).abs() <= tol, "j {v}");
        }

        // Standing wave carries no current.
        let standing: Vec<C64> = grid.points().map(|x| c((k_wave * x).cos(), 0.0)).collect();
        let s = ScalarState::new(standing, vec![C64::ZERO; grid.n_points], params).unwrap();
        let j = current_scalar(&s, &grid).unwrap();
        assert!(j.iter().all(|v| v.abs() <= 1e-13));
    }

    #[test]
    fn fv_current_matches_scalar_current() {
        let grid = Grid::new(0.0, 1.0, 65).unwrap();
        let params = natural_units();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let s = ScalarState::new(
                random_fields(grid.n_points, &mut rng),
                random_fields(grid.n_points, &mut rng),
                params,
            )
            .unwrap();
            let pot = Potential::Constant { v0: 0.2 };
            let fv = to_fv(&s, &pot, &grid).unwrap();
            let j_scalar = current_scalar(&s, &grid).unwrap();
            let j_fv = current_fv(&fv, &grid, &params).unwrap();
            for k in 0..grid.n_points {
                assert!((j_scalar[k] - j_fv[k]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn fv_current_vanishes_on_projector_kernel() {
        let grid = Grid::new(0.0, 1.0, 33).unwrap();
        let params = natural_units();
        let f: Vec<C64> = grid.points().map(|x| c((x * 5.0).sin(), (x * 2.0).cos())).collect();
        let minus_f: Vec<C64> = f.iter().map(|z| -z).collect();
        let state = TwoComponentState::new(f, minus_f).unwrap();
        let j = current_fv(&state, &grid, &params).unwrap();
        assert!(j.iter().all(|v| v.abs() <= 1e-14));

        let ones = TwoComponentState::new(
            vec![c(0.7, -0.1); grid.n_points],
            vec![c(-0.2, 0.4); grid.n_points],
        )
        .unwrap();
        let j = current_fv(&ones, &grid, &params).unwrap();
        assert!(j.iter().all(|v| v.abs() <= 1e-13));
    }

    #[test]
    fn boundary_term_forms_agree_and_compact_support_vanishes() {
        let grid = Grid::new(0.0, 1.0, 65).unwrap();
        let params = natural_units();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..30 {
            let xi = TwoComponentState::new(
                random_fields(grid.n_points, &mut rng),
                random_fields(grid.n_points, &mut rng),
            )
            .unwrap();
            let phi = TwoComponentState::new(
                random_fields(grid.n_points, &mut rng),
                random_fields(grid.n_points, &mut rng),
            )
            .unwrap();
            // Evaluating through the two forms must agree (checked inside).
            boundary_term_f(&xi, &phi, &grid, &params).unwrap();
        }

        // Compactly supported fields have vanishing boundary term.
        let n = grid.n_points;
        let mut bump = vec![C64::ZERO; n];
        for (k, slot) in bump.iter_mut().enumerate().take(n - 8).skip(8) {
            let x = grid.x(k);
            *slot = c((std::f64::consts::PI * (x - 0.2) / 0.6).sin().powi(2), 0.0);
        }
        let state = TwoComponentState::new(bump.clone(), bump).unwrap();
        let f = boundary_term_f(&state, &state, &grid, &params).unwrap();
        assert_eq!(f.norm(), 0.0);
    }

    #[test]
    fn boundary_term_relates_to_current_difference() {
        let grid = Grid::new(0.0, 1.0, 129).unwrap();
        let params = natural_units();
        let k_wave = 2.0;
        let field: Vec<C64> = grid
            .points()
            .map(|x| (I * k_wave * x).exp() + 0.3 * (I * -2.5 * k_wave * x).exp())
            .collect();
        let state = TwoComponentState::new(field, vec![C64::ZERO; grid.n_points]).unwrap();
        let f = boundary_term_f(&state, &state, &grid, &params).unwrap();
        let j = current_fv(&state, &grid, &params).unwrap();
        // f[Psi,Psi] = (hbar / i) (j(b) - j(a))
        let expected = (params.hbar / I) * (j[grid.n_points - 1] - j[0]);
        assert!((f - expected).norm() <= 1e-12 * (1.0 + f.norm()));
    }

    #[test]
    fn pseudo_inner_indefiniteness_witness() {
        // A state with dominant second component has negative pseudo norm.
        let grid = Grid::new(0.0, 1.0, 21).unwrap();
        let small = vec![c(0.1, 0.0); grid.n_points];
        let big = vec![C64::ONE; grid.n_points];
        let state = TwoComponentState::new(small, big).unwrap();
        assert!(pseudo_norm_sq(&state, &grid).unwrap() < 0.0);
    }
}
