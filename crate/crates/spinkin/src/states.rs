//! State construction and conversion: kets, density matrices, star
//! constellations on the sphere, the symmetric two-qubit embedding of spin-1,
//! the parametrized mixed family, and random sampling.

use nalgebra::Complex;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{check_hermitian, dagger, eigh, eigh_unchecked, trace, CMatrix, CVector};
use crate::spin_algebra::{spin_matrices, Spin};

const NORM_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A normalized ket on the spin-s space, basis ordered m = s, ..., -s.
#[derive(Debug, Clone)]
pub struct PureState {
    pub spin: Spin,
    pub amplitudes: CVector,
}

impl PureState {
    pub fn new(spin: Spin, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PureState { spin, amplitudes })
    }

    /// Normalizes the given amplitudes; rejects the zero vector.
    pub fn normalized(spin: Spin, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-14 {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(spin, amplitudes / c(norm, 0.0))
    }

    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

/// A hermitian, PSD, unit-trace matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_hermitian(&matrix)?;
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let e = eigh_unchecked(&matrix);
        if e.values[0] < PSD_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: e.values[0],
            });
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).diagonal().iter().map(|z| z.re).sum()
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() < 1e-9
    }
}

/// A multiset of unit vectors on the sphere; 2s stars describe a spin-s
/// pure state up to phase.
#[derive(Debug, Clone)]
pub struct Constellation {
    pub stars: Vec<[f64; 3]>,
}

impl Constellation {
    pub fn new(stars: Vec<[f64; 3]>) -> Result<Self> {
        if stars.is_empty() {
            return Err(Error::EmptyConstellation);
        }
        for s in &stars {
            let n = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
            if (n - 1.0).abs() > NORM_TOL {
                return Err(Error::NotUnit { norm: n });
            }
        }
        Ok(Constellation { stars })
    }

    pub fn from_angles(angles: &[[f64; 2]]) -> Result<Self> {
        let stars = angles
            .iter()
            .map(|&[theta, phi]| {
                [
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ]
            })
            .collect();
        Self::new(stars)
    }

    pub fn spin(&self) -> Spin {
        Spin {
            two_s: self.stars.len() as i64,
        }
    }
}

/// Single-qubit Bloch data of a two-qubit state: x_i = Tr[ρ(σ_i⊗I)],
/// y_i = Tr[ρ(I⊗σ_i)], T_ij = Tr[ρ(σ_i⊗σ_j)].
#[derive(Debug, Clone, PartialEq)]
pub struct BlochDecomposition {
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub t: [[f64; 3]; 3],
}

/// Parameters (n, t) of the symmetric-sector mixed family; t symmetric.
#[derive(Debug, Clone)]
pub struct SymmetricMixedParams {
    pub n: [f64; 3],
    pub t: [[f64; 3]; 3],
}

pub fn pauli() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
    ]
}

/// Collective operators Σ_A = σ_A⊗I + I⊗σ_A.
pub fn collective_sigma() -> [CMatrix; 3] {
    let p = pauli();
    let i2 = CMatrix::identity(2, 2);
    [
        p[0].kronecker(&i2) + i2.kronecker(&p[0]),
        p[1].kronecker(&i2) + i2.kronecker(&p[1]),
        p[2].kronecker(&i2) + i2.kronecker(&p[2]),
    ]
}

/// Symmetrized pair operators Σ_AB = σ_A⊗σ_B + σ_B⊗σ_A.
pub fn sigma_ab(a: usize, b: usize) -> CMatrix {
    let p = pauli();
    p[a].kronecker(&p[b]) + p[b].kronecker(&p[a])
}

/// Collective spin components J_A = Σ_A/2 on the two-qubit space; these are
/// the rotation generators for states transforming as ρ → (U⊗U)ρ(U⊗U)†.
pub fn collective_spin() -> [CMatrix; 3] {
    let s = collective_sigma();
    let h = c(0.5, 0.0);
    [&s[0] * h, &s[1] * h, &s[2] * h]
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Ket of the state whose star constellation is `con`.
///
/// Stars map to stereographic roots ζ = tan(θ/2)e^{iφ}; a star at -ẑ is a
/// root at infinity and lowers the polynomial degree. The amplitudes are
/// c_{s-k} = (-1)^k b_{2s-k} / sqrt(C(2s,k)) where b are the coefficients of
/// the monic product polynomial over the finite roots.
pub fn constellation_to_state(con: &Constellation) -> Result<PureState> {
    let n_stars = con.stars.len();
    let spin = con.spin();
    let mut roots: Vec<Complex64> = Vec::new();
    let mut n_inf = 0usize;
    for star in &con.stars {
        let (x, y, z) = (star[0], star[1], star[2]);
        if 1.0 + z < 1e-14 {
            n_inf += 1;
        } else {
            // tan(θ/2) e^{iφ} = (x + iy)/(1 + z)
            roots.push(c(x, y) / c(1.0 + z, 0.0));
        }
    }
    // monic polynomial over the finite roots, coefficients ascending in ζ
    let deg = n_stars - n_inf;
    let mut poly = vec![Complex64::default(); deg + 1];
    poly[0] = c(1.0, 0.0);
    let mut cur = 0usize;
    for r in &roots {
        cur += 1;
        for j in (0..=cur).rev() {
            let lower = if j == 0 {
                Complex64::default()
            } else {
                poly[j - 1]
            };
            poly[j] = lower - poly[j] * r;
        }
    }
    // poly[j] is now the coefficient of ζ^j; powers above deg (the n_inf
    // roots at infinity) have coefficient 0
    let mut amps = CVector::zeros(n_stars + 1);
    for k in 0..=n_stars {
        // b_{2s-k}: coefficient of ζ^{2s-k}
        let b = if n_stars - k > deg {
            Complex64::default()
        } else {
            poly[n_stars - k]
        };
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        amps[k] = b * c(sign / binomial(n_stars, k).sqrt(), 0.0);
    }
    PureState::normalized(spin, amps)
}

/// Stars of the given pure state, recovered as roots of the associated
/// polynomial via its companion matrix. Inverse of [`constellation_to_state`]
/// up to permutation and global phase.
pub fn state_to_constellation(psi: &PureState) -> Result<Constellation> {
    let n = psi.spin.two_s as usize;
    if n == 0 {
        return Err(Error::EmptyConstellation);
    }
    // b_{2s-k} = (-1)^k sqrt(C(2s,k)) c_{s-k}
    let mut b = vec![Complex64::default(); n + 1]; // b[m] multiplies ζ^m
    let mut max_mag = 0.0f64;
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        b[n - k] = psi.amplitudes[k] * c(sign * binomial(n, k).sqrt(), 0.0);
        max_mag = max_mag.max(b[n - k].norm());
    }
    // leading zero coefficients are roots at infinity: stars at -ẑ
    let mut deg = n;
    while deg > 0 && b[deg].norm() <= 1e-12 * max_mag {
        deg -= 1;
    }
    let mut stars: Vec<[f64; 3]> = vec![[0.0, 0.0, -1.0]; n - deg];
    if deg > 0 {
        let lead = b[deg];
        let mut comp = CMatrix::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = c(1.0, 0.0);
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -b[i] / lead;
        }
        let schur = comp.schur();
        let roots = schur
            .eigenvalues()
            .ok_or_else(|| Error::Invalid("root finding failed to converge".into()))?;
        for r in roots.iter() {
            // ζ = tan(θ/2) e^{iφ}
            let theta = 2.0 * r.norm().atan();
            let phi = r.arg();
            stars.push([
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ]);
        }
    }
    Constellation::new(stars)
}

/// Three stars with prescribed pairwise angles (α between 1-2, β between 1-3,
/// γ between 2-3), in a canonical orientation: star 1 at ẑ, star 2 in the
/// xz-plane with x ≥ 0.
pub fn constellation_from_pairwise_angles(alpha: f64, beta: f64, gamma: f64) -> Result<Constellation> {
    let (ca, cb, cg) = (alpha.cos(), beta.cos(), gamma.cos());
    // realizability: the Gram matrix of cosines must be PSD
    let gram = nalgebra::Matrix3::new(1.0, ca, cb, ca, 1.0, cg, cb, cg, 1.0);
    let min_eig = gram
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -1e-9 {
        return Err(Error::Unrealizable {
            min_gram_eigenvalue: min_eig,
        });
    }
    let s1 = [0.0, 0.0, 1.0];
    let sa = alpha.sin().abs();
    let s2 = [sa, 0.0, ca];
    let s3 = if sa > 1e-12 {
        let x3 = (cg - ca * cb) / sa;
        let y3sq = (1.0 - x3 * x3 - cb * cb).max(0.0);
        [x3, y3sq.sqrt(), cb]
    } else {
        // stars 1 and 2 (anti)parallel; put star 3 in the xz-plane
        let sb = beta.sin().abs();
        [sb, 0.0, cb]
    };
    // renormalize against rounding
    let fix = |v: [f64; 3]| -> [f64; 3] {
        let n: f64 = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    Constellation::new(vec![fix(s1), fix(s2), fix(s3)])
}

/// Isometry from the spin-1 space to the symmetric subspace of two qubits:
/// |1,1> → |++>, |1,0> → (|+-> + |-+>)/√2, |1,-1> → |-->.
pub fn symmetric_isometry() -> CMatrix {
    let mut v = CMatrix::zeros(4, 3);
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    v[(0, 0)] = c(1.0, 0.0);
    v[(1, 1)] = c(inv, 0.0);
    v[(2, 1)] = c(inv, 0.0);
    v[(3, 2)] = c(1.0, 0.0);
    v
}

/// Embeds a spin-1 density matrix as a two-qubit state on the symmetric
/// subspace.
pub fn symmetric_embed(rho3: &CMatrix) -> Result<CMatrix> {
    if rho3.nrows() != 3 || rho3.ncols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: rho3.nrows(),
        });
    }
    let v = symmetric_isometry();
    Ok(&v * rho3 * dagger(&v))
}

/// Embeds a spin-1 ket into the two-qubit space.
pub fn symmetric_embed_ket(psi: &PureState) -> Result<CVector> {
    if psi.spin.two_s != 2 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: psi.spin.dim(),
        });
    }
    Ok(symmetric_isometry() * &psi.amplitudes)
}

/// Builds the symmetric-sector mixed state
///
///   ρ = ¼I + ½ n·Σ + ⅛ Σ_A t_AA Σ_AA + ¼ Σ_{B>A} t_AB Σ_AB ,
///
/// normalized so that Tr₂ρ = ½I + n·σ and the Bloch correlation matrix of ρ
/// equals t exactly. Errors if ρ has a negative eigenvalue.
pub fn build_mixed(params: &SymmetricMixedParams) -> Result<DensityMatrix> {
    let mut rho = CMatrix::identity(4, 4) * c(0.25, 0.0);
    let sig = collective_sigma();
    for a in 0..3 {
        rho += &sig[a] * c(0.5 * params.n[a], 0.0);
    }
    for a in 0..3 {
        rho += sigma_ab(a, a) * c(params.t[a][a] / 8.0, 0.0);
    }
    for a in 0..3 {
        for b in (a + 1)..3 {
            let tsym = 0.5 * (params.t[a][b] + params.t[b][a]);
            rho += sigma_ab(a, b) * c(tsym / 4.0, 0.0);
        }
    }
    DensityMatrix::new(rho)
}

/// Same construction without the positivity gate; used when scanning
/// parameter ranges past the physical boundary.
pub fn build_mixed_raw(params: &SymmetricMixedParams) -> CMatrix {
    let mut rho = CMatrix::identity(4, 4) * c(0.25, 0.0);
    let sig = collective_sigma();
    for a in 0..3 {
        rho += &sig[a] * c(0.5 * params.n[a], 0.0);
    }
    for a in 0..3 {
        rho += sigma_ab(a, a) * c(params.t[a][a] / 8.0, 0.0);
    }
    for a in 0..3 {
        for b in (a + 1)..3 {
            let tsym = 0.5 * (params.t[a][b] + params.t[b][a]);
            rho += sigma_ab(a, b) * c(tsym / 4.0, 0.0);
        }
    }
    rho
}

/// Bloch data (x, y, T) of a two-qubit density matrix.
pub fn bloch_decompose(rho: &CMatrix) -> Result<BlochDecomposition> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.nrows(),
        });
    }
    let p = pauli();
    let i2 = CMatrix::identity(2, 2);
    let mut x = [0.0; 3];
    let mut y = [0.0; 3];
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        x[i] = trace(&(rho * p[i].kronecker(&i2))).re;
        y[i] = trace(&(rho * i2.kronecker(&p[i]))).re;
        for j in 0..3 {
            t[i][j] = trace(&(rho * p[i].kronecker(&p[j]))).re;
        }
    }
    Ok(BlochDecomposition { x, y, t })
}

/// Reconstructs the two-qubit density matrix from its Bloch data.
pub fn bloch_reconstruct(b: &BlochDecomposition) -> CMatrix {
    let p = pauli();
    let i2 = CMatrix::identity(2, 2);
    let mut rho = CMatrix::identity(4, 4);
    for i in 0..3 {
        rho += p[i].kronecker(&i2) * c(b.x[i], 0.0);
        rho += i2.kronecker(&p[i]) * c(b.y[i], 0.0);
        for j in 0..3 {
            rho += p[i].kronecker(&p[j]) * c(b.t[i][j], 0.0);
        }
    }
    rho * c(0.25, 0.0)
}

/// Haar-uniform pure state on the spin-s space.
pub fn random_pure(spin: Spin, rng: &mut impl Rng) -> PureState {
    let d = spin.dim();
    let amps = CVector::from_fn(d, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    PureState::normalized(spin, amps).expect("gaussian draw is nonzero almost surely")
}

/// Random spin-1 mixed state: convex combination of k Haar pure projectors
/// with flat-Dirichlet weights.
pub fn random_mixed_symmetric(rng: &mut impl Rng, k: usize) -> DensityMatrix {
    let spin = Spin { two_s: 2 };
    let mut weights: Vec<f64> = (0..k.max(1))
        .map(|_| -(rng.gen::<f64>().max(f64::MIN_POSITIVE)).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut rho = CMatrix::zeros(3, 3);
    for w in weights {
        rho += random_pure(spin, rng).projector() * c(w, 0.0);
    }
    DensityMatrix::new(rho).expect("convex combination of projectors")
}

/// SU(2) rotation exp(-i θ n·S) on the spin-s space.
pub fn rotation_unitary(spin: Spin, axis: [f64; 3], angle: f64) -> CMatrix {
    let (sx, sy, sz) = spin_matrices(spin);
    let h = sx * c(axis[0], 0.0) + sy * c(axis[1], 0.0) + sz * c(axis[2], 0.0);
    let e = eigh(&h).expect("n·S is hermitian");
    let d = spin.dim();
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        d,
        e.values.iter().map(|&l| Complex::from_polar(1.0, -angle * l)),
    ));
    &e.vectors * phases * e.vectors.adjoint()
}

/// SO(3) rotation by `angle` about `axis` (unit).
pub fn rotation_so3(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let (x, y, z) = (axis[0], axis[1], axis[2]);
    let (s, co) = angle.sin_cos();
    let ic = 1.0 - co;
    [
        [co + x * x * ic, x * y * ic - z * s, x * z * ic + y * s],
        [y * x * ic + z * s, co + y * y * ic, y * z * ic - x * s],
        [z * x * ic - y * s, z * y * ic + x * s, co + z * z * ic],
    ]
}

pub fn apply_so3(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2];
    }
    out
}

/// On-disk state description: complex entries as [re, im] pairs, densities as
/// nested row arrays, constellations as [θ, φ] pairs in radians.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub kind: String,
    pub spin: f64,
    pub data: serde_json::Value,
}

/// A state loaded from its JSON description.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Ket(PureState),
    Density { spin: Spin, rho: DensityMatrix },
    Stars(Constellation),
}

fn parse_complex(v: &serde_json::Value) -> Result<Complex64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Invalid("complex entries must be [re, im] pairs".into()))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| Error::Invalid("non-numeric complex part".into()))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| Error::Invalid("non-numeric complex part".into()))?;
    Ok(c(re, im))
}

pub fn parse_state(text: &str) -> Result<LoadedState> {
    let raw: StateJson =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad state JSON: {e}")))?;
    let spin = Spin::new(raw.spin)?;
    let arr = raw
        .data
        .as_array()
        .ok_or_else(|| Error::Invalid("data must be an array".into()))?;
    match raw.kind.as_str() {
        "ket" => {
            let amps: Result<Vec<Complex64>> = arr.iter().map(parse_complex).collect();
            let amps = amps?;
            let v = CVector::from_vec(amps);
            Ok(LoadedState::Ket(PureState::new(spin, v)?))
        }
        "density" => {
            let d = spin.dim();
            if arr.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: arr.len(),
                });
            }
            let mut m = CMatrix::zeros(d, d);
            for (i, row) in arr.iter().enumerate() {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == d)
                    .ok_or_else(|| Error::Invalid("density rows must have dim entries".into()))?;
                for (j, entry) in row.iter().enumerate() {
                    m[(i, j)] = parse_complex(entry)?;
                }
            }
            Ok(LoadedState::Density {
                spin,
                rho: DensityMatrix::new(m)?,
            })
        }
        "constellation" => {
            if arr.len() != spin.two_s as usize {
                return Err(Error::DimensionMismatch {
                    expected: spin.two_s as usize,
                    found: arr.len(),
                });
            }
            let mut angles = Vec::with_capacity(arr.len());
            for v in arr {
                let pair = v
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Invalid("stars must be [theta, phi] pairs".into()))?;
                let theta = pair[0]
                    .as_f64()
                    .ok_or_else(|| Error::Invalid("non-numeric angle".into()))?;
                let phi = pair[1]
                    .as_f64()
                    .ok_or_else(|| Error::Invalid("non-numeric angle".into()))?;
                angles.push([theta, phi]);
            }
            Ok(LoadedState::Stars(Constellation::from_angles(&angles)?))
        }
        other => Err(Error::Invalid(format!(
            "unknown state kind {other:?}; expected ket, density or constellation"
        ))),
    }
}

pub fn serialize_ket(psi: &PureState) -> StateJson {
    StateJson {
        kind: "ket".into(),
        spin: psi.spin.s(),
        data: serde_json::Value::Array(
            psi.amplitudes
                .iter()
                .map(|z| serde_json::json!([z.re, z.im]))
                .collect(),
        ),
    }
}

pub fn serialize_density(spin: Spin, rho: &CMatrix) -> StateJson {
    let d = rho.nrows();
    let rows: Vec<serde_json::Value> = (0..d)
        .map(|i| {
            serde_json::Value::Array(
                (0..d)
                    .map(|j| serde_json::json!([rho[(i, j)].re, rho[(i, j)].im]))
                    .collect(),
            )
        })
        .collect();
    StateJson {
        kind: "density".into(),
        spin: spin.s(),
        data: serde_json::Value::Array(rows),
    }
}
