//! Rotation-averaged kinematics: total variance, average rotational speed,
//! speed excess, and the total acceleration of a spin state computed by three
//! independent routes (exact quartic moment contraction, six-point spherical
//! design, closed multipole formula).

use nalgebra::Complex;
use num_complex::Complex64;

use crate::bures::{bures_sq, mixed_acc_norm_sq};
use crate::error::{Error, Result};
use crate::fs_kinematics::speed_sq_closed;
use crate::matrix::{commutator, partial_trace, trace, CMatrix};
use crate::spin_algebra::wigner::cg_doubled;
use crate::spin_algebra::{axis_operator, chi, multipole_expansion, spin_matrices, Spin};
use crate::states::{apply_so3, collective_spin, pauli, PureState};

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

/// Rank-L multipole components ρ_{LM} = ⟨T†_{LM}⟩ of a state, M = -L..L.
#[derive(Debug, Clone)]
pub struct MultipoleVector {
    pub l: i64,
    /// Indexed by M + L.
    pub components: Vec<Complex64>,
}

impl MultipoleVector {
    pub fn component(&self, m: i64) -> Complex64 {
        self.components[(m + self.l) as usize]
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Residual of the reality constraint ρ_{L,-M} = (-1)^M conj(ρ_{LM}).
    pub fn reality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..=self.l {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let r = (self.component(-m) - self.component(m).conj() * c(sign, 0.0)).norm();
            worst = worst.max(r);
        }
        worst
    }
}

pub fn multipole_vector(spin: Spin, rho: &CMatrix, l: i64) -> Result<MultipoleVector> {
    let exp = multipole_expansion(spin, rho)?;
    if l < 0 || l as usize >= exp.len() {
        return Err(Error::RankTooLarge {
            l,
            two_s: spin.two_s,
        });
    }
    Ok(MultipoleVector {
        l,
        components: exp[l as usize].clone(),
    })
}

/// Total variance 𝔻 = s(s+1) - Σ_A ⟨S_A⟩² of a pure spin state. Bounded by
/// s (coherent states) below and s(s+1) (anticoherent states) above.
pub fn total_variance_pure(psi: &PureState) -> f64 {
    let s = psi.spin.s();
    let (sx, sy, sz) = spin_matrices(psi.spin);
    let rho = psi.projector();
    let mut d = s * (s + 1.0);
    for op in [&sx, &sy, &sz] {
        d -= trace(&(&rho * op)).re.powi(2);
    }
    d
}

/// Average squared rotational speed of a pure state, (1/3)Σ_A ‖v_A‖² over the
/// three coordinate rotation axes; equals 𝔻/3.
pub fn avg_speed_sq_pure(psi: &PureState) -> f64 {
    let (sx, sy, sz) = spin_matrices(psi.spin);
    let rho = psi.projector();
    (speed_sq_closed(&rho, &sx) + speed_sq_closed(&rho, &sy) + speed_sq_closed(&rho, &sz)) / 3.0
}

/// Total variance of a mixed state with respect to the given rotation
/// generators: Σ_A ‖-i[S_A, ρ]‖²_Bures.
pub fn total_variance_bures(rho: &CMatrix, generators: &[CMatrix]) -> Result<f64> {
    let mut acc = 0.0;
    for g in generators {
        let v = commutator(g, rho) * c(0.0, -1.0);
        acc += bures_sq(rho, &v)?;
    }
    Ok(acc)
}

/// Average squared rotational speed (Bures norm) of a mixed state.
pub fn avg_speed_sq_mixed(rho: &CMatrix, generators: &[CMatrix]) -> Result<f64> {
    Ok(total_variance_bures(rho, generators)? / generators.len() as f64)
}

/// Total variance of a 4x4 symmetric-sector two-qubit state, generated by the
/// collective spin components J_A = (σ_A⊗I + I⊗σ_A)/2.
pub fn total_variance_mixed(rho: &CMatrix) -> Result<f64> {
    total_variance_bures(rho, &collective_spin())
}

const PURITY_TOL: f64 = 1e-12;

fn full_speed_sq(rho: &CMatrix, h: &CMatrix, purity: f64) -> Result<f64> {
    if purity > 1.0 - PURITY_TOL {
        // projective norm ½Tr(ρ̇²); coincides with Bures on pure states
        Ok(speed_sq_closed(rho, h))
    } else {
        let v = commutator(h, rho) * c(0.0, -1.0);
        bures_sq(rho, &v)
    }
}

/// Per-axis squared speed excess F_A = ‖v_A‖² - ‖v₁_A‖² - ‖v₂_A‖² of a
/// two-qubit state: the full-state speed under the collective rotation minus
/// the Bures speeds of the reduced states under the local rotations.
pub fn speed_excess_axes(rho: &CMatrix) -> Result<[f64; 3]> {
    let j = collective_spin();
    let sig = pauli();
    let rho1 = partial_trace(rho, (2, 2), 1)?;
    let rho2 = partial_trace(rho, (2, 2), 2)?;
    let purity = trace(&(rho * rho)).re;
    let mut f = [0.0; 3];
    for a in 0..3 {
        let full = full_speed_sq(rho, &j[a], purity)?;
        let half = &sig[a] * c(0.5, 0.0);
        let v1 = commutator(&half, &rho1) * c(0.0, -1.0);
        let v2 = commutator(&half, &rho2) * c(0.0, -1.0);
        f[a] = full - bures_sq(&rho1, &v1)? - bures_sq(&rho2, &v2)?;
    }
    Ok(f)
}

/// Total (rotational) speed excess 𝔽: the axis average of the per-axis excess.
/// On pure symmetric two-qubit states 𝔽 = (2/3)(𝔻 - 1), so 𝔽 ∈ [0, 2/3].
pub fn total_speed_excess(rho: &CMatrix) -> Result<f64> {
    let f = speed_excess_axes(rho)?;
    Ok((f[0] + f[1] + f[2]) / 3.0)
}

/// Returns 𝔻(ρ) + 𝔻(ρ₁) + 𝔻(ρ₂) for a pure symmetric two-qubit ket; the sum
/// is identically 2 (the full-state variance and the reduced-state variances
/// trade off exactly).
pub fn sum_identity_check(psi: &nalgebra::DVector<Complex64>) -> Result<f64> {
    let rho = psi * psi.adjoint();
    let j = collective_spin();
    let mut d_full = 0.0;
    for a in 0..3 {
        d_full += speed_sq_closed(&rho, &j[a]);
    }
    let sig = pauli();
    let halves: Vec<CMatrix> = sig.iter().map(|s| s * c(0.5, 0.0)).collect();
    let rho1 = partial_trace(&rho, (2, 2), 1)?;
    let rho2 = partial_trace(&rho, (2, 2), 2)?;
    Ok(d_full + total_variance_bures(&rho1, &halves)? + total_variance_bures(&rho2, &halves)?)
}

fn double_factorial(k: i64) -> f64 {
    let mut acc = 1.0;
    let mut n = k;
    while n > 1 {
        acc *= n as f64;
        n -= 2;
    }
    acc
}

/// Average of the monomial x_1^{m_1}...x_n^{m_n} over the unit sphere
/// S^{n-1}, normalized so the average of 1 is 1. Zero when any exponent is
/// odd; otherwise (n-2)!! Π(m_i-1)!! / (n-2+Σm_i)!!.
pub fn monomial_sphere_average(exponents: &[u32]) -> f64 {
    if exponents.iter().any(|&m| m % 2 == 1) {
        return 0.0;
    }
    let n = exponents.len() as i64;
    let total: i64 = exponents.iter().map(|&m| m as i64).sum();
    let mut num = double_factorial(n - 2);
    for &m in exponents {
        num *= double_factorial(m as i64 - 1);
    }
    num / double_factorial(n - 2 + total)
}

/// A six-axis set on S² whose equal-weight average reproduces the sphere
/// average of every homogeneous quartic polynomial exactly.
#[derive(Debug, Clone)]
pub struct SphericalDesign22 {
    pub axes: [[f64; 3]; 6],
}

impl SphericalDesign22 {
    /// The six icosahedral vertex axes: north pole plus a regular pentagon
    /// at height 1/√5.
    pub fn icosahedral() -> Self {
        let sg = 1.0 / 5.0f64.sqrt();
        let mu = ((5.0 + 5.0f64.sqrt()) / 10.0).sqrt();
        let nu = ((5.0 - 5.0f64.sqrt()) / 10.0).sqrt();
        SphericalDesign22 {
            axes: [
                [0.0, 0.0, 1.0],
                [2.0 / 5.0f64.sqrt(), 0.0, sg],
                [-mu * mu, -nu, sg],
                [-mu * mu, nu, sg],
                [nu * nu, -mu, sg],
                [nu * nu, mu, sg],
            ],
        }
    }

    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Self {
        let mut axes = self.axes;
        for p in axes.iter_mut() {
            *p = apply_so3(r, *p);
        }
        SphericalDesign22 { axes }
    }

    pub fn average<F: FnMut([f64; 3]) -> f64>(&self, mut f: F) -> f64 {
        self.axes.iter().map(|&p| f(p)).sum::<f64>() / 6.0
    }

    pub fn try_average<F: FnMut([f64; 3]) -> Result<f64>>(&self, mut f: F) -> Result<f64> {
        let mut acc = 0.0;
        for &p in &self.axes {
            acc += f(p)?;
        }
        Ok(acc / 6.0)
    }
}

/// Coefficients of the closed multipole formula for the axis-averaged
/// squared acceleration norm,
///
///   ⟨‖a‖²⟩ = λ₁ + λ₂|𝛒₁|² + λ₃|𝛒₂|² + λ₄ Σ c⟨..⟩ρ₂ρ₁*ρ₁* + λ₅|𝛒₁|⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaCoefficients {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub l5: f64,
}

/// Closed-form λ coefficients. λ₂ branches at s = 1/2.
pub fn lambda_coefficients(spin: Spin) -> LambdaCoefficients {
    let s = spin.s();
    let l1 = s * (s + 1.0) * (2.0 * s - 1.0) * (2.0 * s + 3.0) / 45.0;
    let l2 = if s <= 0.5 {
        4.0 / 27.0 * s * s * (s + 1.0) * (s + 1.0) * (2.0 * s + 1.0)
    } else {
        4.0 / 135.0 * s * (s + 1.0) * (2.0 * s + 1.0) * (s * s + s + 3.0)
    };
    let l3 = -s * (s + 1.0) * (2.0 * s - 1.0) * (2.0 * s + 1.0) * (2.0 * s + 3.0) / 225.0;
    let l4 = 8.0 / 45.0
        * (2.0f64 / 15.0).sqrt()
        * s
        * (s + 1.0)
        * (2.0 * s + 1.0)
        * (s * (s + 1.0) * (2.0 * s - 1.0) * (2.0 * s + 1.0) * (2.0 * s + 3.0)).sqrt();
    let l5 = -4.0 / 45.0 * (s * (s + 1.0) * (2.0 * s + 1.0)).powi(2);
    LambdaCoefficients { l1, l2, l3, l4, l5 }
}

/// λ coefficients assembled from first principles out of 6j symbols and
/// Clebsch-Gordan coefficients (the tensor-operator product expansion of the
/// quartic moment average), independent of the closed forms above.
pub fn lambda_coefficients_cg(spin: Spin) -> LambdaCoefficients {
    let s = spin.s();
    // A(s)^{-4} with A the rank-1 multipole normalization
    let a4 = (s * (s + 1.0) * (2.0 * s + 1.0) / 3.0).powi(2);
    let d = 2.0 * s + 1.0;

    // c^{L0}_{10,10} and the per-rank weight of the ⟨H²⟩⟨H²⟩ term
    let cg2 = |l: i64| cg_doubled(2, 0, 2, 0, 2 * l, 0);
    let pair = |l: i64| {
        let x = chi(spin, 1, 1, l) * cg2(l);
        x * x / (2 * l + 1) as f64
    };

    // scalar part of ⟨H⁴⟩ minus the L=0 piece of ⟨H²⟩⟨H²⟩ acting on ρ_00
    let mut quartic = 0.0;
    for l in 0..=2i64 {
        let x = chi(spin, 1, 1, l) * cg2(l);
        quartic += x * x * chi(spin, l, l, 0) * cg_doubled(2 * l, 0, 2 * l, 0, 0, 0) / d.sqrt();
    }
    let l1 = a4 * (quartic - pair(0) / d);

    // |𝛒₁|² pieces: ⟨H³⟩⟨H⟩, the L=1 pair term, and the L=0 triple term
    let mut cubic = 0.0;
    for l in 0..=2i64 {
        cubic += chi(spin, 1, 1, l)
            * chi(spin, l, 1, 1)
            * cg2(l)
            * cg_doubled(2 * l, 0, 2, 0, 2, 0);
    }
    let triple0 = 8.0 * chi(spin, 1, 1, 0) * cg2(0).powi(2) / d.sqrt() * (-1.0 / 3.0f64.sqrt());
    let l2 = a4 * (-4.0 / 3.0 * cubic - pair(1) + triple0);

    let l3 = -a4 * pair(2);
    let l4 = a4 * 8.0 / 5.0 * chi(spin, 1, 1, 2) * cg2(2).powi(2);
    let l5 = -a4 * 4.0 / 5.0;
    LambdaCoefficients { l1, l2, l3, l4, l5 }
}

/// Axis-averaged squared acceleration norm of a pure state, by contracting
/// the quartic moment tensor of the spin operators with the fourth-order
/// sphere moments ⟨n_A n_B n_C n_D⟩ = (δδ + δδ + δδ)/15.
pub fn total_acceleration_exact(psi: &PureState) -> f64 {
    let (sx, sy, sz) = spin_matrices(psi.spin);
    let ops = [sx, sy, sz];
    let rho = psi.projector();

    let m1: Vec<f64> = ops.iter().map(|op| trace(&(&rho * op)).re).collect();
    let mut prod = vec![vec![CMatrix::zeros(0, 0); 3]; 3];
    let mut m2 = [[c(0.0, 0.0); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            prod[a][b] = &ops[a] * &ops[b];
            m2[a][b] = trace(&(&rho * &prod[a][b]));
        }
    }

    let mut tot = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for cc in 0..3 {
                for dd in 0..3 {
                    let w = ((a == b && cc == dd) as u8
                        + (a == cc && b == dd) as u8
                        + (a == dd && b == cc) as u8) as f64
                        / 15.0;
                    if w == 0.0 {
                        continue;
                    }
                    let m4 = trace(&(&rho * &prod[a][b] * &prod[cc][dd]));
                    let m3 = trace(&(&rho * &prod[a][b] * &ops[cc]));
                    let term = m4 - m3 * c(4.0 * m1[dd], 0.0) - m2[a][b] * m2[cc][dd]
                        + m2[a][b] * c(8.0 * m1[cc] * m1[dd], 0.0)
                        - c(4.0 * m1[a] * m1[b] * m1[cc] * m1[dd], 0.0);
                    tot += w * term.re;
                }
            }
        }
    }
    tot
}

/// Axis-averaged squared acceleration norm by sampling the six design axes.
pub fn total_acceleration_design(psi: &PureState) -> f64 {
    total_acceleration_design_with(psi, &SphericalDesign22::icosahedral())
}

pub fn total_acceleration_design_with(psi: &PureState, design: &SphericalDesign22) -> f64 {
    let rho = psi.projector();
    design.average(|n| crate::fs_kinematics::acc_norm_sq_closed(&rho, &axis_operator(psi.spin, n)))
}

/// Axis-averaged squared acceleration norm from the state's rank-1 and
/// rank-2 multipoles and the λ coefficients alone.
pub fn total_acceleration_closed(psi: &PureState) -> Result<f64> {
    let rho = psi.projector();
    let lam = lambda_coefficients(psi.spin);
    let exp = multipole_expansion(psi.spin, &rho)?;

    let r1 = &exp[1];
    let r1sq: f64 = r1.iter().map(|z| z.norm_sqr()).sum();
    let mut out = lam.l1 + lam.l2 * r1sq + lam.l5 * r1sq * r1sq;
    if psi.spin.two_s >= 2 {
        let r2 = &exp[2];
        let r2sq: f64 = r2.iter().map(|z| z.norm_sqr()).sum();
        let mut inter = c(0.0, 0.0);
        for n1 in -1..=1i64 {
            for n2 in -1..=1i64 {
                let m = n1 + n2;
                let cgc = cg_doubled(2, 2 * n1, 2, 2 * n2, 4, 2 * m);
                inter += r2[(m + 2) as usize]
                    * r1[(n1 + 1) as usize].conj()
                    * r1[(n2 + 1) as usize].conj()
                    * c(cgc, 0.0);
            }
        }
        out += lam.l3 * r2sq + lam.l4 * inter.re;
    }
    Ok(out)
}

/// Design average of the Bures squared acceleration norm of a mixed state,
/// with the rotation Hamiltonians built from the given generators.
pub fn total_acceleration_mixed(rho: &CMatrix, generators: &[CMatrix; 3]) -> Result<f64> {
    total_acceleration_mixed_with(rho, generators, &SphericalDesign22::icosahedral())
}

pub fn total_acceleration_mixed_with(
    rho: &CMatrix,
    generators: &[CMatrix; 3],
    design: &SphericalDesign22,
) -> Result<f64> {
    design.try_average(|n| {
        let h = &generators[0] * c(n[0], 0.0)
            + &generators[1] * c(n[1], 0.0)
            + &generators[2] * c(n[2], 0.0);
        mixed_acc_norm_sq(rho, &h)
    })
}

// Closed reference curves used as oracles by the integration tests.

/// Spin-1 two-star state, stars separated by the angle 2α.
pub fn two_star_acceleration(alpha: f64) -> f64 {
    let n = 1459.0 + 1344.0 * (2.0 * alpha).cos() + 140.0 * (4.0 * alpha).cos()
        + 128.0 * (6.0 * alpha).cos()
        + (8.0 * alpha).cos();
    n / (60.0 * (3.0 + (2.0 * alpha).cos()).powi(4))
}

/// Spin-3/2 constellation with all three pairwise star angles equal to α.
pub fn equal_angle_acceleration(alpha: f64) -> f64 {
    let n = 5774.0 * alpha.cos() + 1793.0 * (2.0 * alpha).cos() + 1027.0 * (3.0 * alpha).cos()
        + 82.0 * (4.0 * alpha).cos()
        - 17.0 * (5.0 * alpha).cos()
        - (6.0 * alpha).cos()
        + 2862.0;
    n / (1440.0 * (alpha.cos() + 1.0).powi(4))
}

/// Coherent state of any spin: ⟨‖a‖²⟩ = s(4s-1)/15.
pub fn coherent_acceleration(spin: Spin) -> f64 {
    let s = spin.s();
    s * (4.0 * s - 1.0) / 15.0
}

/// Spin-1 state (cos A, 0, -sin A).
pub fn axis_pair_acceleration(a: f64) -> f64 {
    (8.0 + (4.0 * a).cos() - 3.0 * (8.0 * a).cos()) / 30.0
}

/// Total variance of the symmetric mixed family with polarization r and no
/// correlations: 4r²/(1-4r²).
pub fn polarized_mixed_variance(r: f64) -> f64 {
    4.0 * r * r / (1.0 - 4.0 * r * r)
}

/// Total variance of the symmetric mixed family with correlations t_ij and no
/// polarization, as a rational function of the characteristic polynomial
/// coefficients k₂, k₃ and the correlation trace t.
pub fn correlated_mixed_variance(k2: f64, k3: f64, t: f64) -> f64 {
    let num = -256.0 * k2 * k2 + 96.0 * t * k3 - 2.0 * t.powi(4) - 48.0 * t * t * k2
        - 6.0 * t.powi(3)
        + 288.0 * k3
        - 64.0 * t * k2
        + 14.0 * t * t
        + 240.0 * k2
        + 30.0 * t
        - 36.0;
    let den = 64.0 * k3 + 64.0 * k2 + 4.0 * t * t + 8.0 * t - 12.0;
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bures::char_poly_coeffs;
    use crate::states::{
        build_mixed, constellation_from_pairwise_angles, constellation_to_state, random_pure,
        rotation_so3, rotation_unitary, symmetric_embed, symmetric_embed_ket, Constellation,
        SymmetricMixedParams,
    };
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spin(s: f64) -> Spin {
        Spin::new(s).unwrap()
    }

    fn coherent_up(sp: Spin) -> PureState {
        let mut amp = DVector::zeros(sp.dim());
        amp[0] = c(1.0, 0.0);
        PureState::new(sp, amp).unwrap()
    }

    fn two_star_state(alpha: f64) -> PureState {
        let con = Constellation::new(vec![
            [alpha.sin(), 0.0, alpha.cos()],
            [-alpha.sin(), 0.0, alpha.cos()],
        ])
        .unwrap();
        constellation_to_state(&con).unwrap()
    }

    #[test]
    fn total_variance_extremes() {
        for s in [0.5, 1.0, 1.5, 2.0] {
            let sp = spin(s);
            assert_abs_diff_eq!(total_variance_pure(&coherent_up(sp)), s, epsilon = 1e-12);
        }
        // equal-weight antipodal pair: anticoherent, maximal variance
        let sp = spin(1.0);
        let psi = PureState::normalized(sp, DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]))
            .unwrap();
        assert_abs_diff_eq!(total_variance_pure(&psi), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn variance_bounds_and_speed_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in [1.0, 1.5, 2.0] {
            let sp = spin(s);
            for _ in 0..50 {
                let psi = random_pure(sp, &mut rng);
                let d = total_variance_pure(&psi);
                assert!(d >= s - 1e-10 && d <= s * (s + 1.0) + 1e-10);
                assert_abs_diff_eq!(3.0 * avg_speed_sq_pure(&psi), d, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn mixed_variance_matches_polarized_family() {
        for r in [0.05, 0.15, 0.25, 0.35, 0.45] {
            let params = SymmetricMixedParams {
                n: [0.0, 0.0, r],
                t: [[0.0; 3]; 3],
            };
            let rho = crate::states::build_mixed_raw(&params);
            let d = total_variance_mixed(&rho).unwrap();
            assert_abs_diff_eq!(d, polarized_mixed_variance(r), epsilon = 1e-10);
        }
    }

    #[test]
    fn mixed_variance_matches_correlated_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut t = [[0.0; 3]; 3];
            for row in t.iter_mut() {
                for x in row.iter_mut() {
                    *x = 0.11 * (rand::Rng::gen::<f64>(&mut rng) - 0.5);
                }
            }
            // symmetrize: the parametrization uses t_AB for B >= A only
            for a in 0..3 {
                for b in 0..a {
                    t[a][b] = t[b][a];
                }
            }
            let params = SymmetricMixedParams { n: [0.0; 3], t };
            let rho = build_mixed(&params).unwrap();
            let k = char_poly_coeffs(&rho.matrix);
            let tt = t[0][0] + t[1][1] + t[2][2];
            let expect = correlated_mixed_variance(k[1], k[2], tt);
            let d = total_variance_mixed(&rho.matrix).unwrap();
            assert_abs_diff_eq!(d, expect, epsilon = 1e-8);
        }
    }

    #[test]
    fn antipodal_pair_excess_panel() {
        // (|00> - |11>)/sqrt2: full z-speed 1, reduced speeds 0
        let rt = 1.0 / 2.0f64.sqrt();
        let psi = DVector::from_vec(vec![c(rt, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-rt, 0.0)]);
        let rho = &psi * psi.adjoint();
        let f = speed_excess_axes(&rho).unwrap();
        let j = collective_spin();
        assert_abs_diff_eq!(speed_sq_closed(&rho, &j[2]), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f[2], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sum_identity_check(&psi).unwrap(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn excess_affine_in_variance_on_pure_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sp = spin(1.0);
        for _ in 0..40 {
            let psi = random_pure(sp, &mut rng);
            let ket = symmetric_embed_ket(&psi).unwrap();
            let rho = &ket * ket.adjoint();
            let d = total_variance_pure(&psi);
            let f = total_speed_excess(&rho).unwrap();
            assert_abs_diff_eq!(f, 2.0 / 3.0 * (d - 1.0), epsilon = 1e-9);
            assert_abs_diff_eq!(sum_identity_check(&ket).unwrap(), 2.0, epsilon = 1e-9);
            assert!(f >= -1e-9 && f <= 2.0 / 3.0 + 1e-9);
        }
    }

    #[test]
    fn excess_of_polarized_mixed_family() {
        for r in [0.05, 0.15, 0.25, 0.35, 0.45] {
            let params = SymmetricMixedParams {
                n: [0.0, 0.0, r],
                t: [[0.0; 3]; 3],
            };
            let rho = crate::states::build_mixed_raw(&params);
            let f = total_speed_excess(&rho).unwrap();
            let expect = 16.0 * r.powi(4) / (1.0 - 4.0 * r * r);
            assert_abs_diff_eq!(3.0 * f, expect, epsilon = 1e-8);
        }
    }

    #[test]
    fn monomial_averages() {
        assert_abs_diff_eq!(monomial_sphere_average(&[4, 0, 0]), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            monomial_sphere_average(&[2, 2, 0]),
            1.0 / 15.0,
            epsilon = 1e-15
        );
        assert_eq!(monomial_sphere_average(&[2, 1, 1]), 0.0);
        assert_abs_diff_eq!(monomial_sphere_average(&[0, 0, 0]), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(monomial_sphere_average(&[2, 0, 0]), 1.0 / 3.0, epsilon = 1e-15);
    }

    fn quartic_exponent_classes() -> Vec<[u32; 3]> {
        let mut out = Vec::new();
        for i in 0..=4u32 {
            for j in 0..=(4 - i) {
                out.push([i, j, 4 - i - j]);
            }
        }
        out
    }

    #[test]
    fn design_reproduces_quartic_monomials() {
        let design = SphericalDesign22::icosahedral();
        for p in &design.axes {
            let n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-14);
        }
        let rot = rotation_so3([2.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0], 1.234);
        let rotated = design.rotated(&rot);
        for e in quartic_exponent_classes() {
            let expect = monomial_sphere_average(&e);
            for d in [&design, &rotated] {
                let avg = d.average(|n| {
                    n[0].powi(e[0] as i32) * n[1].powi(e[1] as i32) * n[2].powi(e[2] as i32)
                });
                assert_abs_diff_eq!(avg, expect, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn lambda_table() {
        let expect = [
            (0.5, [0.0, 1.0 / 6.0, 0.0, 0.0, -0.2]),
            (1.0, [2.0 / 9.0, 8.0 / 9.0, -2.0 / 15.0, 32.0 / 15.0, -16.0 / 5.0]),
            (1.5, [1.0, 3.0, -0.8, 16.0 * (2.0f64 / 3.0).sqrt(), -20.0]),
            (2.0, [2.8, 8.0, -2.8, 32.0 * (7.0f64 / 3.0).sqrt(), -80.0]),
        ];
        for (s, vals) in expect {
            let lam = lambda_coefficients(spin(s));
            let got = [lam.l1, lam.l2, lam.l3, lam.l4, lam.l5];
            for (g, e) in got.iter().zip(vals.iter()) {
                assert_abs_diff_eq!(g, e, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn lambda_routes_agree() {
        for s in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
            let sp = spin(s);
            let a = lambda_coefficients(sp);
            let b = lambda_coefficients_cg(sp);
            assert_abs_diff_eq!(a.l1, b.l1, epsilon = 1e-12);
            assert_abs_diff_eq!(a.l2, b.l2, epsilon = 1e-12);
            assert_abs_diff_eq!(a.l3, b.l3, epsilon = 1e-12);
            assert_abs_diff_eq!(a.l4, b.l4, epsilon = 1e-12);
            assert_abs_diff_eq!(a.l5, b.l5, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_routes_agree_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for s in [0.5, 1.0, 1.5, 2.0] {
            let sp = spin(s);
            for _ in 0..15 {
                let psi = random_pure(sp, &mut rng);
                let a = total_acceleration_exact(&psi);
                let b = total_acceleration_design(&psi);
                let cc = total_acceleration_closed(&psi).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
                assert_abs_diff_eq!(a, cc, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn two_star_curve() {
        for k in 0..25 {
            let alpha = 1.5 * k as f64 / 24.0;
            let psi = two_star_state(alpha);
            assert_abs_diff_eq!(
                total_acceleration_exact(&psi),
                two_star_acceleration(alpha),
                epsilon = 1e-10
            );
        }
        assert_abs_diff_eq!(two_star_acceleration(0.0), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            two_star_acceleration(std::f64::consts::FRAC_PI_2),
            2.0 / 15.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn coherent_curve() {
        for s in [0.5, 1.0, 1.5, 2.0, 2.5] {
            let sp = spin(s);
            let psi = coherent_up(sp);
            let expect = coherent_acceleration(sp);
            assert_abs_diff_eq!(total_acceleration_exact(&psi), expect, epsilon = 1e-10);
            assert_abs_diff_eq!(total_acceleration_design(&psi), expect, epsilon = 1e-10);
            assert_abs_diff_eq!(
                total_acceleration_closed(&psi).unwrap(),
                expect,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn equal_angle_curve_and_trine_point() {
        for k in 1..=15 {
            let alpha = 2.09 * k as f64 / 15.0;
            let con = constellation_from_pairwise_angles(alpha, alpha, alpha).unwrap();
            let psi = constellation_to_state(&con).unwrap();
            assert_abs_diff_eq!(
                total_acceleration_closed(&psi).unwrap(),
                equal_angle_acceleration(alpha),
                epsilon = 1e-9
            );
        }
        // planar trine constellation (the GHZ state): between the 0.51 and
        // 1.3 level surfaces of the landscape
        let v = equal_angle_acceleration(2.0 * std::f64::consts::PI / 3.0);
        assert_abs_diff_eq!(v, 0.8, epsilon = 1e-12);
        assert!(v > 0.51 && v < 1.3);
    }

    #[test]
    fn axis_pair_curve() {
        for k in 0..20 {
            let a = 1.4 * k as f64 / 19.0;
            let psi = PureState::normalized(
                spin(1.0),
                DVector::from_vec(vec![c(a.cos(), 0.0), c(0.0, 0.0), c(-a.sin(), 0.0)]),
            )
            .unwrap();
            assert_abs_diff_eq!(
                total_acceleration_closed(&psi).unwrap(),
                axis_pair_acceleration(a),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn doubly_anticoherent_state_sits_at_lambda1() {
        // tetrahedral spin-2 state: rank-1 and rank-2 multipoles both vanish
        let psi = PureState::normalized(
            spin(2.0),
            DVector::from_vec(vec![
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(2.0f64.sqrt(), 0.0),
                c(0.0, 0.0),
            ]),
        )
        .unwrap();
        let rho = psi.projector();
        let r1 = multipole_vector(spin(2.0), &rho, 1).unwrap();
        let r2 = multipole_vector(spin(2.0), &rho, 2).unwrap();
        assert!(r1.norm_sq() < 1e-20 && r2.norm_sq() < 1e-20);
        assert!(r1.reality_residual() < 1e-12);
        let lam = lambda_coefficients(spin(2.0));
        assert_abs_diff_eq!(
            total_acceleration_exact(&psi),
            lam.l1,
            epsilon = 1e-10
        );
    }

    #[test]
    fn rotation_invariance_of_averages() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let sp = spin(1.5);
        let u = rotation_unitary(sp, [0.36, -0.48, 0.8], 1.1);
        for _ in 0..10 {
            let psi = random_pure(sp, &mut rng);
            let rot = PureState::new(sp, &u * &psi.amplitudes).unwrap();
            assert_abs_diff_eq!(
                total_variance_pure(&psi),
                total_variance_pure(&rot),
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                total_acceleration_exact(&psi),
                total_acceleration_exact(&rot),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn mixed_acceleration_limits() {
        let gens3 = {
            let (sx, sy, sz) = spin_matrices(spin(1.0));
            [sx, sy, sz]
        };
        let maximally_mixed = crate::matrix::identity(3) * c(1.0 / 3.0, 0.0);
        assert_abs_diff_eq!(
            total_acceleration_mixed(&maximally_mixed, &gens3).unwrap(),
            0.0,
            epsilon = 1e-12
        );

        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let psi = random_pure(spin(1.0), &mut rng);
        let eps = 1e-6;
        let rho = psi.projector() * c(1.0 - eps, 0.0)
            + crate::matrix::identity(3) * c(eps / 3.0, 0.0);
        let mixed = total_acceleration_mixed(&rho, &gens3).unwrap();
        let pure = total_acceleration_exact(&psi);
        assert_abs_diff_eq!(mixed, pure, epsilon = 1e-3);

        // axis-set invariance: a rotated design gives the same average
        let rot = rotation_so3([0.6, 0.0, 0.8], 0.77);
        let design = SphericalDesign22::icosahedral().rotated(&rot);
        let again = total_acceleration_mixed_with(&rho, &gens3, &design).unwrap();
        assert_abs_diff_eq!(mixed, again, epsilon = 1e-10);
    }

    #[test]
    fn mixed_embed_variance_matches_pure_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let psi = random_pure(spin(1.0), &mut rng);
        let rho3 = psi.projector();
        let eps = 1e-8;
        let soft = rho3 * c(1.0 - eps, 0.0) + crate::matrix::identity(3) * c(eps / 3.0, 0.0);
        let rho4 = symmetric_embed(&soft).unwrap();
        let d4 = total_variance_mixed(&rho4);
        // embedded state is rank-deficient in the full two-qubit space but the
        // rotation tangents stay on its support
        let d4 = d4.unwrap();
        assert_abs_diff_eq!(d4, total_variance_pure(&psi), epsilon = 1e-6);
    }
}
