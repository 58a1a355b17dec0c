//! Spin-s operator algebra: angular momentum matrices, irreducible tensor
//! operators and their structure constants.

pub mod wigner;

use nalgebra::Complex;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{dagger, hs_trace_inner, CMatrix};

pub use wigner::{cg, cg_doubled, six_j, six_j_doubled};

/// A spin quantum number, stored doubled so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    pub two_s: i64,
}

impl Spin {
    pub fn new(s: f64) -> Result<Self> {
        let t = 2.0 * s;
        let r = t.round();
        if s < 0.0 || (t - r).abs() > 1e-9 {
            return Err(Error::InvalidHalfInteger { value: s });
        }
        Ok(Spin { two_s: r as i64 })
    }

    pub fn s(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        (self.two_s + 1) as usize
    }

    /// m value of basis index i, with ordering m = s, s-1, ..., -s.
    pub fn m_of(&self, i: usize) -> f64 {
        (self.two_s - 2 * i as i64) as f64 / 2.0
    }
}

/// Spin matrices (Sx, Sy, Sz) in the basis |s,s>, |s,s-1>, ..., |s,-s>.
pub fn spin_matrices(spin: Spin) -> (CMatrix, CMatrix, CMatrix) {
    let d = spin.dim();
    let s = spin.s();
    let mut sp = CMatrix::zeros(d, d); // S+
    for i in 1..d {
        let m = spin.m_of(i);
        // S+|s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>
        let c = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
        sp[(i - 1, i)] = Complex::new(c, 0.0);
    }
    let sm = dagger(&sp);
    let half = Complex64::new(0.5, 0.0);
    let sx = (&sp + &sm) * half;
    let sy = (&sp - &sm) * Complex64::new(0.0, -0.5);
    let mut sz = CMatrix::zeros(d, d);
    for i in 0..d {
        sz[(i, i)] = Complex::new(spin.m_of(i), 0.0);
    }
    (sx, sy, sz)
}

/// n . S for a (not necessarily unit) axis n.
pub fn axis_operator(spin: Spin, n: [f64; 3]) -> CMatrix {
    let (sx, sy, sz) = spin_matrices(spin);
    sx * Complex64::new(n[0], 0.0) + sy * Complex64::new(n[1], 0.0) + sz * Complex64::new(n[2], 0.0)
}

/// Normalization A(s) = sqrt(3 / (s(s+1)(2s+1))) relating Sz to the rank-1
/// tensor operator: T_{10} = A(s) Sz.
pub fn multipole_normalization(spin: Spin) -> f64 {
    let s = spin.s();
    (3.0 / (s * (s + 1.0) * (2.0 * s + 1.0))).sqrt()
}

/// Irreducible tensor operator T_{LM} on the spin-s space, orthonormal in the
/// plain trace inner product: Tr(T_{LM}^† T_{L'M'}) = δ_{LL'} δ_{MM'}.
///
/// T_{LM} = sqrt((2L+1)/(2s+1)) Σ_{m,m'} <s m'; L M | s m> |s,m><s,m'|.
pub fn tensor_operator(spin: Spin, l: i64, m: i64) -> Result<CMatrix> {
    if l < 0 || l > spin.two_s {
        return Err(Error::RankTooLarge {
            l,
            two_s: spin.two_s,
        });
    }
    if m.abs() > l {
        return Err(Error::Invalid(format!("|M| = {} exceeds L = {}", m.abs(), l)));
    }
    let d = spin.dim();
    let pref = ((2 * l + 1) as f64 / d as f64).sqrt();
    let mut t = CMatrix::zeros(d, d);
    for i in 0..d {
        let tm_row = spin.two_s - 2 * i as i64; // 2m of the row (ket)
        let tm_col = tm_row - 2 * m; // 2m' with m = m' + M
        if tm_col.abs() > spin.two_s {
            continue;
        }
        let j = ((spin.two_s - tm_col) / 2) as usize;
        let c = wigner::cg_doubled(spin.two_s, tm_col, 2 * l, 2 * m, spin.two_s, tm_row);
        t[(i, j)] = Complex::new(pref * c, 0.0);
    }
    Ok(t)
}

/// Structure constant chi(l1, l2, l) for products of tensor operators on the
/// spin-s space:
///
///   T_{l1 m1} T_{l2 m2} = Σ_l chi(l1,l2,l) <l1 m1; l2 m2 | l, m1+m2> T_{l, m1+m2}
///
/// chi = (-1)^{2 l2 + l - 2s} sqrt((2l1+1)(2l2+1)) {l1 l2 l; s s s}.
pub fn chi(spin: Spin, l1: i64, l2: i64, l: i64) -> f64 {
    let sj = wigner::six_j_doubled(2 * l1, 2 * l2, 2 * l, spin.two_s, spin.two_s, spin.two_s);
    let phase_exp = 2 * l2 + l - spin.two_s;
    let sign = if phase_exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * (((2 * l1 + 1) * (2 * l2 + 1)) as f64).sqrt() * sj
}

/// Rank-1 multipole components (r_{-1}, r_0, r_{+1}) of the operator n . S,
/// i.e. n . S = Σ_M r_M T_{1M}.
pub fn axis_to_multipole(spin: Spin, n: [f64; 3]) -> [Complex64; 3] {
    let a = multipole_normalization(spin);
    let rt2 = std::f64::consts::SQRT_2;
    let r_m1 = Complex64::new(n[0] / (rt2 * a), n[1] / (rt2 * a));
    let r_0 = Complex64::new(n[2] / a, 0.0);
    let r_p1 = Complex64::new(-n[0] / (rt2 * a), n[1] / (rt2 * a));
    [r_m1, r_0, r_p1]
}

/// Multipole expansion coefficients rho_{LM} = Tr(T_{LM}^† rho) of a density
/// matrix, returned as a nested Vec indexed by [L][M + L].
pub fn multipole_expansion(spin: Spin, rho: &CMatrix) -> Result<Vec<Vec<Complex64>>> {
    let d = spin.dim();
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.nrows(),
        });
    }
    let mut out = Vec::with_capacity(d);
    for l in 0..=spin.two_s {
        let mut row = Vec::with_capacity((2 * l + 1) as usize);
        for m in -l..=l {
            let t = tensor_operator(spin, l, m)?;
            // Tr(T^† rho) without the 1/2 of the hermitian inner product
            row.push(hs_trace_inner(&t, rho));
        }
        out.push(row);
    }
    Ok(out)
}
