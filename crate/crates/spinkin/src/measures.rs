//! Two-qubit correlation and mixedness measures: concurrence, negativity,
//! von Neumann and linear entropy, geometric discord.

use nalgebra::{Complex, Matrix3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{eigh_unchecked, partial_trace, trace, CMatrix};
use crate::states::{bloch_decompose, pauli};

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

/// All measures of a two-qubit state in one bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurePanel {
    pub concurrence: f64,
    pub negativity: f64,
    pub s_vn: f64,
    pub s_vn_reduced: f64,
    pub s_lin: f64,
    pub s_lin_reduced: f64,
    pub geo_discord: f64,
}

fn check_dim4(rho: &CMatrix) -> Result<()> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.nrows(),
        });
    }
    Ok(())
}

/// Hermitian square root. Eigenvalues below the roundoff floor are treated
/// as exact zeros so the sqrt does not inflate noise (sqrt(1e-17) ~ 3e-9).
fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let e = eigh_unchecked(m);
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let lam = if e.values[k] > 1e-13 {
            e.values[k].sqrt()
        } else {
            0.0
        };
        let v = e.vectors.column(k);
        out += (&v * v.adjoint()) * c(lam, 0.0);
    }
    out
}

/// Wootters concurrence max(0, λ₁-λ₂-λ₃-λ₄), λ_i the descending eigenvalues
/// of sqrt(sqrt(ρ) μ(ρ) sqrt(ρ)) with μ(ρ) = (σy⊗σy) ρ* (σy⊗σy).
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    check_dim4(rho)?;
    let sig = pauli();
    let yy = sig[1].kronecker(&sig[1]);
    let root = psd_sqrt(rho);
    // the λ_i are the singular values of B = √ρ (σy⊗σy) √ρᵀ, since
    // BB† = √ρ μ(ρ) √ρ; this sidesteps square-rooting tiny eigenvalues
    let b = &root * &yy * root.transpose();
    let mut lam: Vec<f64> = b.svd(false, false).singular_values.iter().copied().collect();
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Pure-state concurrence shortcut sqrt(2(1 - Tr ρ₁²)) = sqrt(1 - |x|²)
/// with x the Bloch vector of the reduced state.
pub fn concurrence_pure(rho: &CMatrix) -> Result<f64> {
    check_dim4(rho)?;
    let b = bloch_decompose(rho)?;
    let x2: f64 = b.x.iter().map(|v| v * v).sum();
    Ok((1.0 - x2).max(0.0).sqrt())
}

/// Partial transpose on the first qubit.
pub fn partial_transpose(rho: &CMatrix) -> Result<CMatrix> {
    check_dim4(rho)?;
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(i * 2 + k, j * 2 + l)] = rho[(j * 2 + k, i * 2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Negativity (‖ρ^{T_A}‖₁ - 1)/2; the trace norm of the hermitian partial
/// transpose is the sum of absolute eigenvalues.
pub fn negativity(rho: &CMatrix) -> Result<f64> {
    let pt = partial_transpose(rho)?;
    let e = eigh_unchecked(&pt);
    let tn: f64 = e.values.iter().map(|v| v.abs()).sum();
    Ok((tn - 1.0) / 2.0)
}

/// Von Neumann entropy -Σ λ ln λ (natural log, 0 ln 0 = 0).
pub fn von_neumann_entropy(rho: &CMatrix) -> f64 {
    let e = eigh_unchecked(rho);
    let mut s = 0.0;
    for &lam in e.values.iter() {
        if lam > 0.0 {
            s -= lam * lam.ln();
        }
    }
    s
}

/// Linear entropy 2(1 - Tr ρ²); for a two-qubit reduced state this is the
/// 1-anticoherence measure of the parent symmetric state.
pub fn linear_entropy(rho: &CMatrix) -> f64 {
    2.0 * (1.0 - trace(&(rho * rho)).re)
}

/// Normalized geometric discord 𝒟_G = 2·(1/4)(|y|² + ‖T‖² - k) with k the
/// largest eigenvalue of yyᵀ + TᵀT; the measurement is on the second qubit.
pub fn geometric_discord(rho: &CMatrix) -> Result<f64> {
    let b = bloch_decompose(rho)?;
    let y2: f64 = b.y.iter().map(|v| v * v).sum();
    let mut t2 = 0.0;
    let mut m = Matrix3::<f64>::zeros();
    for i in 0..3 {
        for j in 0..3 {
            t2 += b.t[i][j] * b.t[i][j];
            m[(i, j)] = b.y[i] * b.y[j];
            for a in 0..3 {
                m[(i, j)] += b.t[a][i] * b.t[a][j];
            }
        }
    }
    let k = m
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::NEG_INFINITY, |acc, &v| acc.max(v));
    Ok(0.5 * (y2 + t2 - k))
}

/// Evaluates every measure of the panel for a two-qubit state.
pub fn measure_panel(rho: &CMatrix) -> Result<MeasurePanel> {
    check_dim4(rho)?;
    let rho1 = partial_trace(rho, (2, 2), 1)?;
    Ok(MeasurePanel {
        concurrence: concurrence(rho)?,
        negativity: negativity(rho)?,
        s_vn: von_neumann_entropy(rho),
        s_vn_reduced: von_neumann_entropy(&rho1),
        s_lin: linear_entropy(rho),
        s_lin_reduced: linear_entropy(&rho1),
        geo_discord: geometric_discord(rho)?,
    })
}
