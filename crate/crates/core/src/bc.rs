//! The four-parameter family of boundary conditions for the boxed particle.
//!
//! A family member is a unitary 2x2 matrix `U` (four real parameters) and a
//! length `lambda` relating the Cayley-type boundary combinations
//! `psi -+ i lambda psi_x` at the two endpoints:
//!
//! ```text
//! [ psi(b) - i l psi_x(b) ]       [ psi(b) + i l psi_x(b) ]
//! [ psi(a) + i l psi_x(a) ]  =  U [ psi(a) - i l psi_x(a) ]
//! ```
//!
//! In the two-component picture the same member is a structured unitary 4x4
//! matrix acting on the projector-multiplied traces `P Psi`, `P Psi_x` with
//! `P = tau3 + i tau2`; `P` is nilpotent, so those combinations are never
//! solved back for `Psi`.

use crate::algebra::{kron, s_matrix, sigma_x, sigma_z, CMat, UNITARITY_TOL_USER};
use crate::error::{KfgError, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

const I: C64 = C64::new(0.0, 1.0);

/// Named members of the family with closed-form matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `psi(a) = psi(b) = 0` (`U = -1`)
    Dirichlet,
    /// `psi_x(a) = psi_x(b) = 0` (`U = +1`)
    Neumann,
    /// `psi(a) = psi(b)`, `psi_x(a) = psi_x(b)` (`U = +sx`)
    Periodic,
    /// `psi(a) = -psi(b)`, `psi_x(a) = -psi_x(b)` (`U = -sx`)
    Antiperiodic,
    /// `psi(a) = psi_x(b) = 0` (`U = sz`)
    MixedAb,
    /// `psi_x(a) = psi(b) = 0` (`U = -sz`)
    MixedBa,
    /// `psi(a) - l psi_x(a) = 0`, `psi(b) + l psi_x(b) = 0` (`U = i`)
    RobinMit,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Dirichlet,
        Preset::Neumann,
        Preset::Periodic,
        Preset::Antiperiodic,
        Preset::MixedAb,
        Preset::MixedBa,
        Preset::RobinMit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Dirichlet => "dirichlet",
            Preset::Neumann => "neumann",
            Preset::Periodic => "periodic",
            Preset::Antiperiodic => "antiperiodic",
            Preset::MixedAb => "mixed_ab",
            Preset::MixedBa => "mixed_ba",
            Preset::RobinMit => "robin_mit",
        }
    }

    pub fn matrix(&self) -> CMat {
        let id = CMat::identity(2);
        match self {
            Preset::Dirichlet => id.scale(-C64::ONE),
            Preset::Neumann => id,
            Preset::Periodic => sigma_x(),
            Preset::Antiperiodic => sigma_x().scale(-C64::ONE),
            Preset::MixedAb => sigma_z(),
            Preset::MixedBa => sigma_z().scale(-C64::ONE),
            Preset::RobinMit => id.scale(I),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = KfgError;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| KfgError::UnknownName(s.to_string()))
    }
}

/// A boundary-condition family member: unitary `U`, length `lambda`, interval.
#[derive(Debug, Clone, PartialEq)]
pub struct BcSpec {
    u2: CMat,
    lambda: f64,
    interval: (f64, f64),
}

impl BcSpec {
    /// Named member with `lambda` defaulting to the natural-unit Compton
    /// wavelength (1) and interval `[0, 1]`.
    pub fn preset(p: Preset) -> Self {
        BcSpec { u2: p.matrix(), lambda: 1.0, interval: (0.0, 1.0) }
    }

    /// Validating constructor for arbitrary members.
    pub fn from_u2(u2: CMat, lambda: f64, interval: (f64, f64)) -> Result<Self> {
        if u2.nrows() != 2 || u2.ncols() != 2 {
            return Err(KfgError::InvalidArgument("boundary matrix must be 2x2".into()));
        }
        let defect = u2.unitarity_defect();
        if !(defect <= UNITARITY_TOL_USER) {
            return Err(KfgError::NotUnitary { deviation: defect, tolerance: UNITARITY_TOL_USER });
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(KfgError::InvalidLambda(lambda));
        }
        if !(interval.0 < interval.1) {
            return Err(KfgError::InvalidArgument(format!(
                "interval must satisfy a < b, got ({}, {})",
                interval.0, interval.1
            )));
        }
        Ok(BcSpec { u2, lambda, interval })
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(KfgError::InvalidLambda(lambda));
        }
        self.lambda = lambda;
        Ok(self)
    }

    pub fn with_interval(mut self, a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(KfgError::InvalidArgument(format!(
                "interval must satisfy a < b, got ({a}, {b})"
            )));
        }
        self.interval = (a, b);
        Ok(self)
    }

    pub fn u2(&self) -> &CMat {
        &self.u2
    }

    /// The inverse orientation of the relation (`M = U^{-1} = U^H`).
    pub fn m_matrix(&self) -> CMat {
        self.u2.adjoint()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// Confining members have diagonal `U`: the probability current vanishes
    /// at each wall separately.
    pub fn is_confining(&self) -> bool {
        self.u2[(0, 1)].norm() <= DIAGONAL_TOL && self.u2[(1, 0)].norm() <= DIAGONAL_TOL
    }
}

/// Off-diagonal magnitude below which a member classifies as confining.
pub const DIAGONAL_TOL: f64 = 1e-12;

/// Scalar boundary traces `psi`, `psi_x` at the two endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData1 {
    pub psi_a: C64,
    pub psi_b: C64,
    pub dpsi_a: C64,
    pub dpsi_b: C64,
}

/// Two-component boundary traces `Psi`, `Psi_x` at the two endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData2 {
    pub psi_a: [C64; 2],
    pub psi_b: [C64; 2],
    pub dpsi_a: [C64; 2],
    pub dpsi_b: [C64; 2],
}

/// Residual of the scalar relation: `L - U R` with
/// `L = [psi(b) - i l psi_x(b); psi(a) + i l psi_x(a)]` and
/// `R = [psi(b) + i l psi_x(b); psi(a) - i l psi_x(a)]`.
/// Zero iff the data satisfies the boundary condition.
pub fn residual2(data: &BoundaryData1, spec: &BcSpec) -> [C64; 2] {
    let il = I * spec.lambda;
    let l = [data.psi_b - il * data.dpsi_b, data.psi_a + il * data.dpsi_a];
    let r = [data.psi_b + il * data.dpsi_b, data.psi_a - il * data.dpsi_a];
    let ur = spec.u2.mul_vec(&r);
    [l[0] - ur[0], l[1] - ur[1]]
}

/// Lift a member to the structured 4x4 unitary of the two-component picture:
/// `U4 = S^H (1_2 ⊗ U) S`.
pub fn lift_to_u4(spec: &BcSpec) -> CMat {
    let s = s_matrix();
    s.adjoint().mul(&kron(&CMat::identity(2), &spec.u2)).mul(&s)
}

fn p_combination(psi: [C64; 2], dpsi: [C64; 2], il: C64, sign: f64) -> [C64; 2] {
    // P (Psi +- i l Psi_x) with P = [[1,1],[-1,-1]]: both rows carry the
    // component sum of the Cayley combination.
    let w0 = psi[0] + sign * il * dpsi[0];
    let w1 = psi[1] + sign * il * dpsi[1];
    let s = w0 + w1;
    [s, -s]
}

/// Residual of the two-component relation `L4 - U4 R4` built exclusively from
/// projector-multiplied traces.
pub fn residual4(data: &BoundaryData2, spec: &BcSpec) -> [C64; 4] {
    let il = I * spec.lambda;
    let top_l = p_combination(data.psi_b, data.dpsi_b, il, -1.0);
    let bot_l = p_combination(data.psi_a, data.dpsi_a, il, 1.0);
    let top_r = p_combination(data.psi_b, data.dpsi_b, il, 1.0);
    let bot_r = p_combination(data.psi_a, data.dpsi_a, il, -1.0);
    let r4 = [top_r[0], top_r[1], bot_r[0], bot_r[1]];
    let u4r = lift_to_u4(spec).mul_vec(&r4);
    [
        top_l[0] - u4r[0],
        top_l[1] - u4r[1],
        bot_l[0] - u4r[2],
        bot_l[1] - u4r[3],
    ]
}

/// Parametrize the solution set of the boundary relation: pick the right-hand
/// Cayley vector `R = free`, set `L = U free`, and solve the four linear trace
/// relations for `psi` and `psi_x` at the endpoints.
pub fn boundary_data_from_bc(spec: &BcSpec, free: [C64; 2]) -> Result<BoundaryData1> {
    let lambda = spec.lambda;
    if lambda == 0.0 {
        return Err(KfgError::InvalidLambda(lambda));
    }
    let l = spec.u2.mul_vec(&free);
    // R = [psi(b) + il psi_x(b); psi(a) - il psi_x(a)],
    // L = [psi(b) - il psi_x(b); psi(a) + il psi_x(a)].
    let il = I * lambda;
    let psi_b = 0.5 * (l[0] + free[0]);
    let dpsi_b = (free[0] - l[0]) / (2.0 * il);
    let psi_a = 0.5 * (l[1] + free[1]);
    let dpsi_a = (l[1] - free[1]) / (2.0 * il);
    Ok(BoundaryData1 { psi_a, psi_b, dpsi_a, dpsi_b })
}

/// The boundary bracket `[psi l psi_x^* - psi^* l psi_x]_a^b`, which vanishes
/// for every member of the family and equals `(2 m lambda / hbar^2) f[Psi,Psi]`.
pub fn boundary_form(data: &BoundaryData1, lambda: f64) -> C64 {
    let term = |psi: C64, dpsi: C64| psi * (lambda * dpsi).conj() - psi.conj() * (lambda * dpsi);
    term(data.psi_b, data.dpsi_b) - term(data.psi_a, data.dpsi_a)
}

/// Mixed two-field bracket `[phi l xi_x^* - xi^* l phi_x]_a^b`; its vanishing
/// for every pair of fields satisfying the same member is the statement that
/// the operator domain equals the domain of its generalized adjoint.
pub fn mixed_boundary_form(xi: &BoundaryData1, phi: &BoundaryData1, lambda: f64) -> C64 {
    let term = |phi_v: C64, phi_d: C64, xi_v: C64, xi_d: C64| {
        phi_v * (lambda * xi_d).conj() - xi_v.conj() * (lambda * phi_d)
    };
    term(phi.psi_b, phi.dpsi_b, xi.psi_b, xi.dpsi_b)
        - term(phi.psi_a, phi.dpsi_a, xi.psi_a, xi.dpsi_a)
}

/// Serialized form accepted by configuration files:
/// `{"preset": "dirichlet"}` or `{"u2": [[re,im]; 4], "lambda": x}`.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct BcSpecConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u2: Option<[[f64; 2]; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl BcSpecConfig {
    pub fn resolve(&self, interval: (f64, f64)) -> Result<BcSpec> {
        let base = match (&self.preset, &self.u2) {
            (Some(name), None) => BcSpec::preset(name.parse()?),
            (None, Some(entries)) => {
                let data: Vec<C64> = entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                BcSpec::from_u2(CMat::from_rows(2, 2, &data), 1.0, (0.0, 1.0))?
            }
            (Some(_), Some(_)) => {
                return Err(KfgError::InvalidArgument(
                    "give either a preset or an explicit u2 matrix, not both".into(),
                ))
            }
            (None, None) => {
                return Err(KfgError::InvalidArgument(
                    "boundary condition missing: set a preset or a u2 matrix".into(),
                ))
            }
        };
        let base = base.with_interval(interval.0, interval.1)?;
        match self.lambda {
            Some(l) => base.with_lambda(l),
            None => Ok(base),
        }
    }
}
