//! Pure-state kinematics in projective space: velocity and intrinsic
//! acceleration of Hamiltonian motion, their norms in the invariant metric
//! ‖X‖² = ½Tr(X²), closed forms in Hamiltonian moments, and the chart-level
//! metric, Christoffel and Riemann components used for validation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{commutator, herm_norm_sq, identity, trace, CMatrix, CVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// v = -i[H, ρ]; hermitian and traceless for hermitian inputs.
pub fn velocity(rho: &CMatrix, h: &CMatrix) -> Result<CMatrix> {
    if rho.shape() != h.shape() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            found: h.nrows(),
        });
    }
    Ok(commutator(h, rho) * c(0.0, -1.0))
}

/// ½Tr(v²).
pub fn speed_sq(rho: &CMatrix, h: &CMatrix) -> Result<f64> {
    Ok(herm_norm_sq(&velocity(rho, h)?))
}

/// Moments h_m = Tr(ρHᵐ), m = 1..4.
pub fn moments(rho: &CMatrix, h: &CMatrix) -> [f64; 4] {
    let mut out = [0.0; 4];
    let mut p = h.clone();
    for m in 0..4 {
        out[m] = trace(&(rho * &p)).re;
        if m < 3 {
            p *= h;
        }
    }
    out
}

/// Speed of a pure state as a variance: h₂ - h₁².
pub fn speed_sq_closed(rho: &CMatrix, h: &CMatrix) -> f64 {
    let m = moments(rho, h);
    m[1] - m[0] * m[0]
}

/// Intrinsic acceleration a = ρρ̈ρ̃ + ρ̃ρ̈ρ with ρ̈ = -[H,[H,ρ]], ρ̃ = I - ρ.
pub fn acceleration(rho: &CMatrix, h: &CMatrix) -> Result<CMatrix> {
    if rho.shape() != h.shape() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            found: h.nrows(),
        });
    }
    let rho_dd = -commutator(h, &commutator(h, rho));
    let comp = identity(rho.nrows()) - rho;
    Ok(rho * &rho_dd * &comp + comp * &rho_dd * rho)
}

/// ½Tr(a²) through the projection route.
pub fn acc_norm_sq(rho: &CMatrix, h: &CMatrix) -> Result<f64> {
    Ok(herm_norm_sq(&acceleration(rho, h)?))
}

/// ½Tr(a²) for pure ρ through moments:
/// h₄ - 4h₃h₁ - h₂² + 8h₂h₁² - 4h₁⁴.
pub fn acc_norm_sq_closed(rho: &CMatrix, h: &CMatrix) -> f64 {
    let [h1, h2, h3, h4] = moments(rho, h);
    h4 - 4.0 * h3 * h1 - h2 * h2 + 8.0 * h2 * h1 * h1 - 4.0 * h1 * h1 * h1 * h1
}

/// A point of the affine chart: |ψ⟩ ∝ (1, z¹, …, zⁿ).
#[derive(Debug, Clone)]
pub struct ChartPoint {
    pub z: Vec<Complex64>,
}

impl ChartPoint {
    pub fn delta(&self) -> f64 {
        1.0 + self.z.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Normalized ket (1, z)/√Δ.
    pub fn ket(&self) -> CVector {
        let d = self.z.len() + 1;
        let mut v = CVector::zeros(d);
        v[0] = c(1.0, 0.0);
        for (i, &zi) in self.z.iter().enumerate() {
            v[i + 1] = zi;
        }
        v / c(self.delta().sqrt(), 0.0)
    }

    pub fn projector(&self) -> CMatrix {
        let k = self.ket();
        &k * k.adjoint()
    }
}

/// Chart metric g_{ab̄} = ½Δ⁻²(Δδ_ab - z̄ᵃ zᵇ), returned with row index a,
/// column index b.
pub fn fs_metric_chart(p: &ChartPoint) -> CMatrix {
    let n = p.z.len();
    let d = p.delta();
    CMatrix::from_fn(n, n, |a, b| {
        let kron = if a == b { c(d, 0.0) } else { Complex64::default() };
        (kron - p.z[a].conj() * p.z[b]) * c(0.5 / (d * d), 0.0)
    })
}

/// Inverse metric g^{ab̄} = 2Δ(δ_ab + zᵃ z̄ᵇ).
pub fn fs_metric_inverse(p: &ChartPoint) -> CMatrix {
    let n = p.z.len();
    let d = p.delta();
    CMatrix::from_fn(n, n, |a, b| {
        let kron = if a == b { c(1.0, 0.0) } else { Complex64::default() };
        (kron + p.z[a] * p.z[b].conj()) * c(2.0 * d, 0.0)
    })
}

/// Christoffel symbols Γᶜ_ab = -Δ⁻¹(δᶜ_b z̄ᵃ + δᶜ_a z̄ᵇ), indexed [c][a][b].
pub fn fs_christoffel(p: &ChartPoint) -> Vec<Vec<Vec<Complex64>>> {
    let n = p.z.len();
    let d = p.delta();
    let mut out = vec![vec![vec![Complex64::default(); n]; n]; n];
    for cc in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut v = Complex64::default();
                if cc == b {
                    v += p.z[a].conj();
                }
                if cc == a {
                    v += p.z[b].conj();
                }
                out[cc][a][b] = -v / c(d, 0.0);
            }
        }
    }
    out
}

/// Riemann component R_{ab̄cd̄} = 2(g_{ab̄}g_{cd̄} + g_{ad̄}g_{cb̄}); constant
/// holomorphic sectional curvature 4.
pub fn fs_riemann(p: &ChartPoint, a: usize, b: usize, cc: usize, d: usize) -> Complex64 {
    let g = fs_metric_chart(p);
    (g[(a, b)] * g[(cc, d)] + g[(a, d)] * g[(cc, b)]) * c(2.0, 0.0)
}
