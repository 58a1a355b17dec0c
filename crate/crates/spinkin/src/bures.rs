//! Mixed-state geometry: the G-operator solver, Bures norms, the dim-4
//! polynomial inverse of R = ρ⊗I + I⊗ρᵀ, covariant acceleration of mixed
//! Hamiltonian motion, and Bures Christoffel symbols.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{
    commutator, eigh_unchecked, identity, kron, trace, CMatrix,
};

/// Below this the G-equation X = ρG + Gρ counts as degenerate.
pub const EPS_POS: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Solves X = ρG + Gρ for hermitian G in the eigenbasis of ρ:
/// G_ij = X_ij/(λ_i + λ_j). Requires all eigenvalues of ρ above [`EPS_POS`].
///
/// For traceless X the solution satisfies Tr(Gρ) = 0.
pub fn solve_g(rho: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    if rho.shape() != x.shape() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            found: x.nrows(),
        });
    }
    let e = eigh_unchecked(rho);
    if e.values[0] <= EPS_POS {
        return Err(Error::Degenerate {
            min_eigenvalue: e.values[0],
        });
    }
    let n = rho.nrows();
    let xe = e.vectors.adjoint() * x * &e.vectors;
    let mut ge = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            ge[(i, j)] = xe[(i, j)] / c(e.values[i] + e.values[j], 0.0);
        }
    }
    Ok(&e.vectors * ge * e.vectors.adjoint())
}

/// Squared Bures norm ½Tr(GX) = ½Σ|X_ij|²/(λ_i+λ_j) in the eigenbasis of ρ.
///
/// Solvability only needs λ_i + λ_j ≠ 0 on the support of X, so this extends
/// past exact positivity (needed when scanning parameter families up to the
/// state-space boundary). A pair sum at or below [`EPS_POS`] carrying weight
/// of X is a hard error, never smoothed over.
pub fn bures_sq(rho: &CMatrix, x: &CMatrix) -> Result<f64> {
    if rho.shape() != x.shape() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            found: x.nrows(),
        });
    }
    let e = eigh_unchecked(rho);
    let n = rho.nrows();
    let xe = e.vectors.adjoint() * x * &e.vectors;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let w = xe[(i, j)].norm_sqr();
            let denom = e.values[i] + e.values[j];
            if denom.abs() <= EPS_POS {
                if w > EPS_POS * EPS_POS {
                    return Err(Error::Degenerate {
                        min_eigenvalue: denom,
                    });
                }
                continue;
            }
            acc += w / denom;
        }
    }
    Ok(0.5 * acc)
}

/// Bures inner product ¼Tr(G₁X₂ + G₂X₁) = ½Σ Re(X̄₁ᵢⱼX₂ᵢⱼ)/(λ_i+λ_j).
pub fn bures_inner(rho: &CMatrix, x1: &CMatrix, x2: &CMatrix) -> Result<f64> {
    if rho.shape() != x1.shape() || rho.shape() != x2.shape() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            found: x1.nrows().max(x2.nrows()),
        });
    }
    let e = eigh_unchecked(rho);
    let n = rho.nrows();
    let x1e = e.vectors.adjoint() * x1 * &e.vectors;
    let x2e = e.vectors.adjoint() * x2 * &e.vectors;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let w = (x1e[(i, j)].conj() * x2e[(i, j)]).re;
            let denom = e.values[i] + e.values[j];
            if denom.abs() <= EPS_POS {
                if w.abs() > EPS_POS * EPS_POS {
                    return Err(Error::Degenerate {
                        min_eigenvalue: denom,
                    });
                }
                continue;
            }
            acc += w / denom;
        }
    }
    Ok(0.5 * acc)
}

/// Characteristic-polynomial data and the coefficient matrix of the dim-4
/// closed-form inverse of R.
#[derive(Debug, Clone)]
pub struct DittmannData {
    pub k: [f64; 4],
    pub a: Matrix4<f64>,
}

/// Coefficients of χ(λ) = λ⁴ + k₁λ³ + k₂λ² + k₃λ + k₄ from power sums of ρ
/// (Newton's identities).
pub fn char_poly_coeffs(rho: &CMatrix) -> [f64; 4] {
    let mut p = [0.0f64; 4];
    let mut m = rho.clone();
    for i in 0..4 {
        p[i] = trace(&m).re;
        if i < 3 {
            m *= rho;
        }
    }
    let e1 = p[0];
    let e2 = (e1 * p[0] - p[1]) / 2.0;
    let e3 = (e2 * p[0] - e1 * p[1] + p[2]) / 3.0;
    let e4 = (e3 * p[0] - e2 * p[1] + e1 * p[2] - p[3]) / 4.0;
    [-e1, e2, -e3, e4]
}

/// Builds the coefficient matrix A = -χ(-Kᵀ)⁻¹N of the polynomial expansion
/// R⁻¹ = Σ A_ij ρ^{i-1} ⊗ (ρᵀ)^{j-1}, for positive dim-4 ρ.
pub fn dittmann_data(rho: &CMatrix) -> Result<DittmannData> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.nrows(),
        });
    }
    let [k1, k2, k3, k4] = char_poly_coeffs(rho);
    let km = Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        -k4, -k3, -k2, -k1,
    );
    let nm = Matrix4::new(
        k3, k2, k1, 1.0, //
        -k2, -k1, -1.0, 0.0, //
        k1, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0,
    );
    let mkt = -km.transpose();
    let m2 = mkt * mkt;
    let chi = m2 * m2 + m2 * mkt * k1 + m2 * k2 + mkt * k3 + Matrix4::identity() * k4;
    let inv = chi.try_inverse().ok_or(Error::Degenerate {
        min_eigenvalue: 0.0,
    })?;
    Ok(DittmannData {
        k: [k1, k2, k3, k4],
        a: -inv * nm,
    })
}

/// Explicit 16×16 inverse of R = ρ⊗I + I⊗ρᵀ in the row-major vectorization.
pub fn dittmann_inverse(rho: &CMatrix) -> Result<CMatrix> {
    let data = dittmann_data(rho)?;
    let mut powers = Vec::with_capacity(4);
    powers.push(identity(4));
    for i in 1..4 {
        powers.push(&powers[i - 1] * rho);
    }
    let transposed: Vec<CMatrix> = powers.iter().map(|p| p.transpose()).collect();
    let mut out = CMatrix::zeros(16, 16);
    for i in 0..4 {
        for j in 0..4 {
            out += kron(&powers[i], &transposed[j]) * c(data.a[(i, j)], 0.0);
        }
    }
    Ok(out)
}

/// Bures metric value ½ΣA_ij Tr(Xρ^{i-1}Xρ^{j-1}) through the polynomial
/// inverse; independent of the eigendecomposition route.
pub fn bures_sq_dittmann(rho: &CMatrix, x: &CMatrix) -> Result<f64> {
    let data = dittmann_data(rho)?;
    let mut powers = Vec::with_capacity(4);
    powers.push(identity(4));
    for i in 1..4 {
        powers.push(&powers[i - 1] * rho);
    }
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if data.a[(i, j)] == 0.0 {
                continue;
            }
            acc += data.a[(i, j)] * trace(&(x * &powers[i] * x * &powers[j])).re;
        }
    }
    Ok(0.5 * acc)
}

/// Covariant acceleration of ρ(t) = U(t)ρU(t)† generated by H:
/// a = -[H,[H,ρ]] - 2GρG + 2Tr(GρG)ρ with G solving -i[H,ρ] = ρG + Gρ.
pub fn mixed_acceleration(rho: &CMatrix, h: &CMatrix) -> Result<CMatrix> {
    let v = commutator(h, rho) * c(0.0, -1.0);
    let g = solve_g(rho, &v)?;
    let grg = &g * rho * &g;
    let t = trace(&grg);
    Ok(-commutator(h, &commutator(h, rho)) - &grg * c(2.0, 0.0) + rho * (t * c(2.0, 0.0)))
}

/// Squared Bures norm of the covariant acceleration.
pub fn mixed_acc_norm_sq(rho: &CMatrix, h: &CMatrix) -> Result<f64> {
    bures_sq(rho, &mixed_acceleration(rho, h)?)
}

/// Christoffel symbols of the Bures metric at ρ for a caller-supplied chart:
/// `rho_mu[μ]` are first derivatives, `rho_munu[μ][ν]` second derivatives.
/// Returns Γ_{βμν} = ½Tr(G_β[ρ_{μν} - G_μρG_ν - G_νρG_μ]), indexed [β][μ][ν].
pub fn bures_christoffel(
    rho: &CMatrix,
    rho_mu: &[CMatrix],
    rho_munu: &[Vec<CMatrix>],
) -> Result<Vec<Vec<Vec<f64>>>> {
    let dim = rho_mu.len();
    let g_ops: Result<Vec<CMatrix>> = rho_mu.iter().map(|x| solve_g(rho, x)).collect();
    let g_ops = g_ops?;
    let mut out = vec![vec![vec![0.0; dim]; dim]; dim];
    for mu in 0..dim {
        for nu in 0..dim {
            let cross = &g_ops[mu] * rho * &g_ops[nu] + &g_ops[nu] * rho * &g_ops[mu];
            let bracket = &rho_munu[mu][nu] - cross;
            for beta in 0..dim {
                out[beta][mu][nu] = 0.5 * trace(&(&g_ops[beta] * &bracket)).re;
            }
        }
    }
    Ok(out)
}
