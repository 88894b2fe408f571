//! Exact small complex matrices: Pauli matrices, the nilpotent projector
//! `tau3 + i*tau2`, Kronecker products, the permutation matrix `S` that
//! block-reorders stacked boundary data, the phase-times-SU(2) parametrization
//! of U(2), and the sesquilinear rearrangement identities used to derive the
//! boundary-condition family.
//!
//! Everything here is plain `f64` value arithmetic; all the identities hold
//! entrywise at machine precision (most of them exactly, since the matrices
//! have entries in {0, ±1, ±i}).

use crate::error::{KfgError, Result};
use num_complex::Complex64 as C64;

/// Unitarity tolerance for matrices constructed in code.
pub const UNITARITY_TOL_CONSTRUCTED: f64 = 1e-14;
/// Unitarity tolerance for user-supplied matrices (text input carries rounding).
pub const UNITARITY_TOL_USER: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Dense row-major complex matrix, sized at runtime.
///
/// Only small fixed shapes (2x2, 4x4, 2x1, 4x1) appear in practice; a single
/// dynamic type keeps Kronecker products and block stacking simple.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    nrows: usize,
    ncols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMat { nrows, ncols, data: vec![ZERO; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from a row-major slice; panics if the length does not match.
    pub fn from_rows(nrows: usize, ncols: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), nrows * ncols, "entry count mismatch");
        CMat { nrows, ncols, data: entries.to_vec() }
    }

    /// Build from real row-major entries.
    pub fn from_real(nrows: usize, ncols: usize, entries: &[f64]) -> Self {
        let data = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        assert_eq!(nrows * ncols, entries.len(), "entry count mismatch");
        CMat { nrows, ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in mul");
        let mut out = CMat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.ncols, v.len(), "dimension mismatch in mul_vec");
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        CMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        CMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn scale(&self, s: C64) -> CMat {
        let data = self.data.iter().map(|a| a * s).collect();
        CMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |(A - B)_ij|`.
    pub fn max_diff(&self, rhs: &CMat) -> f64 {
        self.sub(rhs).max_norm()
    }

    /// Deviation from unitarity, `max |(A^H A - 1)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        assert_eq!(self.nrows, self.ncols);
        self.adjoint().mul(self).max_diff(&CMat::identity(self.nrows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.ncols + j]
    }
}

/// Standard Pauli matrix by name (`sx`, `sy`, `sz`, `id`).
pub fn pauli(name: &str) -> Result<CMat> {
    match name {
        "sx" => Ok(sigma_x()),
        "sy" => Ok(sigma_y()),
        "sz" => Ok(sigma_z()),
        "id" => Ok(CMat::identity(2)),
        other => Err(KfgError::UnknownName(other.to_string())),
    }
}

pub fn sigma_x() -> CMat {
    CMat::from_rows(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> CMat {
    CMat::from_rows(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> CMat {
    CMat::from_rows(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// The nilpotent projector `P = tau3 + i*tau2 = [[1,1],[-1,-1]]` sitting in
/// the kinetic term of the two-component Hamiltonian. `P^2 = 0`, so boundary
/// conditions must be stated on `P Psi`, never solved for `Psi`.
pub fn singular_projector() -> CMat {
    CMat::from_real(2, 2, &[1.0, 1.0, -1.0, -1.0])
}

/// The metric operator `eta = tau3`; `eta = eta^{-1}` and `eta^3 = eta`.
pub fn metric() -> CMat {
    sigma_z()
}

/// The unitary permutation matrix that maps the component-interleaved stacking
/// of boundary data onto the block-repeated stacking.
pub fn s_matrix() -> CMat {
    CMat::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, -1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, -1.0,
        ],
    )
}

/// `S` written as a sum of four Kronecker products of Pauli matrices,
/// `(sz⊗1 + i sy⊗sx + i sx⊗sy + 1⊗sz)/2`. Agrees entrywise with [`s_matrix`].
pub fn s_matrix_pauli_sum() -> CMat {
    let id2 = CMat::identity(2);
    let term1 = kron(&sigma_z(), &id2);
    let term2 = kron(&sigma_y(), &sigma_x()).scale(I);
    let term3 = kron(&sigma_x(), &sigma_y()).scale(I);
    let term4 = kron(&id2, &sigma_z());
    term1.add(&term2).add(&term3).add(&term4).scale(C64::new(0.5, 0.0))
}

/// Kronecker (direct) product: block `(i,j)` of the result is `F[i][j] * G`.
/// Bilinear, associative, and satisfies the mixed-product property
/// `(F⊗G)(J⊗K) = (FJ)⊗(GK)`.
pub fn kron(f: &CMat, g: &CMat) -> CMat {
    let (m, n) = (f.nrows(), f.ncols());
    let (p, q) = (g.nrows(), g.ncols());
    let mut out = CMat::zeros(m * p, n * q);
    for i in 0..m {
        for j in 0..n {
            let fij = f[(i, j)];
            for r in 0..p {
                for c in 0..q {
                    out[(i * p + r, j * q + c)] = fij * g[(r, c)];
                }
            }
        }
    }
    out
}

/// Unitary 2x2 matrix from four real parameters:
/// `U = e^{i mu} (n0*1 + i(n1*sx + n2*sy + n3*sz))` with `n` normalized
/// internally. Every unitary 2x2 matrix is reached by some parameter tuple.
pub fn u2_from_params(mu: f64, n0: f64, n1: f64, n2: f64, n3: f64) -> Result<CMat> {
    let norm = (n0 * n0 + n1 * n1 + n2 * n2 + n3 * n3).sqrt();
    if !(norm > 0.0) || !norm.is_finite() || !mu.is_finite() {
        return Err(KfgError::InvalidArgument(
            "u2 parameter vector must be finite with positive norm".into(),
        ));
    }
    let (a, b, c, d) = (n0 / norm, n1 / norm, n2 / norm, n3 / norm);
    let phase = C64::from_polar(1.0, mu);
    let su = CMat::from_rows(
        2,
        2,
        &[
            C64::new(a, d),
            C64::new(c, b),
            C64::new(-c, b),
            C64::new(a, -d),
        ],
    );
    Ok(su.scale(phase))
}

/// Residual of the scalar rearrangement identity
/// `z1 z2* - z1* z2 = (i/2)(|z1 + i z2|^2 - |z1 - i z2|^2)`.
pub fn identity_pair_residual(z1: C64, z2: C64) -> f64 {
    let lhs = z1 * z2.conj() - z1.conj() * z2;
    let plus = z1 + I * z2;
    let minus = z1 - I * z2;
    let rhs = I * 0.5 * (plus.norm_sqr() - minus.norm_sqr());
    (lhs - rhs).norm()
}

/// Residual of the four-argument generalization
/// `z1 z2* - z3* z4 = (i/2)[(z1 + i z4)(z3 + i z2)* - (z1 - i z4)(z3 - i z2)*]`.
pub fn identity_quad_residual(z1: C64, z2: C64, z3: C64, z4: C64) -> f64 {
    let lhs = z1 * z2.conj() - z3.conj() * z4;
    let rhs = I * 0.5
        * ((z1 + I * z4) * (z3 + I * z2).conj() - (z1 - I * z4) * (z3 - I * z2).conj());
    (lhs - rhs).norm()
}

/// Residual of the matrix form
/// `Z2^H Z1 - Z1^H Z2 = (i/2)[(Z1 + i Z2)^H (Z1 + i Z2) - (Z1 - i Z2)^H (Z1 - i Z2)]`.
pub fn identity_matrix_residual(z1: &CMat, z2: &CMat) -> f64 {
    let lhs = z2.adjoint().mul(z1).sub(&z1.adjoint().mul(z2));
    let plus = z1.add(&z2.scale(I));
    let minus = z1.sub(&z2.scale(I));
    let rhs = plus
        .adjoint()
        .mul(&plus)
        .sub(&minus.adjoint().mul(&minus))
        .scale(I * 0.5);
    lhs.max_diff(&rhs)
}

/// Evaluate all three rearrangement identities on the given complex arguments
/// (the matrix form uses 2x2 matrices assembled from them) and return the
/// worst residual.
pub fn sesquilinear_identity_check(z1: C64, z2: C64, z3: C64, z4: C64) -> f64 {
    let pair = identity_pair_residual(z1, z2);
    let quad = identity_quad_residual(z1, z2, z3, z4);
    let m1 = CMat::from_rows(2, 2, &[z1, z2, z3, z4]);
    let m2 = CMat::from_rows(2, 2, &[z4, z3, z2, z1]);
    let mat = identity_matrix_residual(&m1, &m2);
    pair.max(quad).max(mat)
}
