//! Dense complex-matrix kernel: Kronecker products, row-major vectorization,
//! hermitian eigendecomposition, partial traces and the Hilbert-Schmidt inner
//! product. Everything downstream builds on these.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Absolute entrywise tolerance for accepting a matrix as hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// [A, B] = AB - BA.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entrywise deviation from hermiticity.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    let adj = a.adjoint();
    (a - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn check_hermitian(a: &CMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let dev = hermiticity_deviation(a);
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    Ok(())
}

/// Kronecker product, (A otimes B)[(i*rB+k),(j*cB+l)] = A[i,j] B[k,l].
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Row-major vectorization of a square matrix: vec(A) = (A11, A12, ..., Ann).
///
/// In this convention (A otimes B^T) vec(C) = vec(ACB).
pub fn vec_row_major(a: &CMatrix) -> Result<CVector> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    let mut v = CVector::zeros(n * n);
    for i in 0..n {
        for j in 0..n {
            v[i * n + j] = a[(i, j)];
        }
    }
    Ok(v)
}

/// Inverse of [`vec_row_major`].
pub fn unvec(v: &CVector) -> Result<CMatrix> {
    let len = v.len();
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len {
        return Err(Error::Invalid(format!(
            "vector of length {len} is not a vectorized square matrix"
        )));
    }
    let mut a = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = v[i * n + j];
        }
    }
    Ok(a)
}

/// Eigendecomposition of a hermitian matrix.
///
/// Eigenvalues come out ascending; `vectors` holds the corresponding
/// orthonormal eigenvectors as columns.
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigh {
    /// Reassembles V diag(lambda) V^dagger.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let lambda = CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            self.values.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        &self.vectors * lambda * self.vectors.adjoint()
    }
}

/// Hermitian eigendecomposition; rejects non-hermitian input.
pub fn eigh(h: &CMatrix) -> Result<Eigh> {
    check_hermitian(h)?;
    Ok(eigh_unchecked(h))
}

/// Same as [`eigh`] but skips the hermiticity check (the matrix is still
/// symmetrized implicitly by the solver).
pub fn eigh_unchecked(h: &CMatrix) -> Eigh {
    let n = h.nrows();
    let se = h.clone().symmetric_eigen();
    // sort ascending
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let values: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    Eigh { values, vectors }
}

/// Partial trace of a bipartite operator on a d1*d2 space.
///
/// `keep = 1` traces out the second factor, `keep = 2` the first.
pub fn partial_trace(rho: &CMatrix, dims: (usize, usize), keep: u8) -> Result<CMatrix> {
    let (d1, d2) = dims;
    if rho.nrows() != d1 * d2 || rho.ncols() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: rho.nrows(),
        });
    }
    match keep {
        1 => {
            let mut out = CMatrix::zeros(d1, d1);
            for i in 0..d1 {
                for j in 0..d1 {
                    let mut s = Complex64::default();
                    for k in 0..d2 {
                        s += rho[(i * d2 + k, j * d2 + k)];
                    }
                    out[(i, j)] = s;
                }
            }
            Ok(out)
        }
        2 => {
            let mut out = CMatrix::zeros(d2, d2);
            for k in 0..d2 {
                for l in 0..d2 {
                    let mut s = Complex64::default();
                    for i in 0..d1 {
                        s += rho[(i * d2 + k, i * d2 + l)];
                    }
                    out[(k, l)] = s;
                }
            }
            Ok(out)
        }
        _ => Err(Error::Invalid(format!("keep must be 1 or 2, got {keep}"))),
    }
}

/// Hilbert-Schmidt inner product (1/2) Tr(A^dagger B).
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
    let s: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(0.5 * s)
}

/// Plain trace inner product Tr(A^dagger B), without the 1/2 of [`hs_inner`].
/// Panics on shape mismatch.
pub fn hs_trace_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Hilbert-Schmidt metric (1/2) Tr(A^dagger B + B A^dagger); real for hermitian inputs.
pub fn hs_metric(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok(2.0 * hs_inner(a, b)?.re)
}

/// Squared norm (1/2) Tr(X^2) of a hermitian matrix.
pub fn herm_norm_sq(x: &CMatrix) -> f64 {
    // For hermitian X, Tr(X^2) = sum |X_ij|^2
    0.5 * x.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_cmatrix(n: usize, rng: &mut impl Rng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        let a = random_cmatrix(n, rng);
        (&a + a.adjoint()) * c(0.5, 0.0)
    }

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    fn pauli_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    #[test]
    fn kron_identity() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn kron_sigma_z_identity() {
        let k = kron(&pauli_z(), &identity(2));
        let expected = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(1., 0.),
            c(1., 0.),
            c(-1., 0.),
            c(-1., 0.),
        ]));
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_trace_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_cmatrix(2, &mut rng);
        let b = random_cmatrix(2, &mut rng);
        let lhs = trace(&kron(&a, &b));
        let rhs = trace(&a) * trace(&b);
        assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-12);
        assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-12);
    }

    #[test]
    fn kron_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_cmatrix(2, &mut rng);
        let b = random_cmatrix(3, &mut rng);
        let d = random_cmatrix(2, &mut rng);
        let lhs = kron(&kron(&a, &b), &d);
        let rhs = kron(&a, &kron(&b, &d));
        assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn vec_identity() {
        let v = vec_row_major(&identity(2)).unwrap();
        assert_eq!(
            v,
            CVector::from_vec(vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)])
        );
    }

    #[test]
    fn vec_kron_identity_acb() {
        // (A otimes B^T) vec(C) = vec(ACB)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_cmatrix(3, &mut rng);
        let b = random_cmatrix(3, &mut rng);
        let cm = random_cmatrix(3, &mut rng);
        let lhs = kron(&a, &b.transpose()) * vec_row_major(&cm).unwrap();
        let rhs = vec_row_major(&(&a * &cm * &b)).unwrap();
        assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn unvec_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_cmatrix(4, &mut rng);
        let back = unvec(&vec_row_major(&a).unwrap()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn vec_rejects_nonsquare() {
        let a = CMatrix::zeros(2, 3);
        assert!(vec_row_major(&a).is_err());
    }

    #[test]
    fn eigh_diagonal() {
        let h = CMatrix::from_diagonal(&CVector::from_vec(vec![c(3., 0.), c(1., 0.), c(2., 0.)]));
        let e = eigh(&h).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[2], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn eigh_pauli_x() {
        let e = eigh(&pauli_x()).unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigh_reconstruction_and_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(6, &mut rng);
        let e = eigh(&h).unwrap();
        let back = e.reconstruct();
        assert!((&h - back).iter().all(|z| z.norm() < 1e-10));
        // unitarity
        let u = &e.vectors;
        let gram = u.adjoint() * u;
        assert!((gram - identity(6)).iter().all(|z| z.norm() < 1e-10));
        // eigenvalue sum = trace
        let sum: f64 = e.values.iter().sum();
        assert_abs_diff_eq!(sum, trace(&h).re, epsilon = 1e-10);
        // eigenvalue product = det
        let prod: f64 = e.values.iter().product();
        assert_abs_diff_eq!(prod, h.determinant().re, epsilon = 1e-8);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_cmatrix(3, &mut rng);
        assert!(matches!(eigh(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn partial_trace_bell() {
        let inv = c(std::f64::consts::FRAC_1_SQRT_2, 0.);
        let psi = CVector::from_vec(vec![inv, c(0., 0.), c(0., 0.), inv]);
        let rho = &psi * psi.adjoint();
        let r1 = partial_trace(&rho, (2, 2), 1).unwrap();
        assert!((r1 - identity(2) * c(0.5, 0.0)).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn partial_trace_of_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(2, &mut rng);
        let mut b = random_hermitian(2, &mut rng);
        let tb = trace(&b);
        b /= tb; // unit trace
        let r = partial_trace(&kron(&a, &b), (2, 2), 1).unwrap();
        assert!((r - &a).iter().all(|z| z.norm() < 1e-12));
        // keep = 2: left factor trace times right factor
        let r2 = partial_trace(&kron(&a, &b), (2, 2), 2).unwrap();
        let expected = &b * trace(&a);
        assert!((r2 - expected).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn partial_trace_rejects_mismatch() {
        let rho = identity(3);
        assert!(partial_trace(&rho, (2, 2), 1).is_err());
    }

    #[test]
    fn hs_inner_paulis() {
        assert_abs_diff_eq!(
            hs_inner(&identity(2), &identity(2)).unwrap().re,
            1.0,
            epsilon = 1e-15
        );
        let sx = pauli_x();
        let sy = pauli_y();
        assert_abs_diff_eq!(hs_inner(&sx, &sy).unwrap().norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hs_inner(&sx, &sx).unwrap().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hs_inner_rejects_mismatch() {
        assert!(hs_inner(&identity(2), &identity(3)).is_err());
    }
}
