//! Dense complex linear algebra used by the simulator.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entrywise modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Largest entry of `|A - A†|`.
pub fn hermiticity_error(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn check_square(a: &CMatrix, dim: usize) -> Result<()> {
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: if a.nrows() != dim { a.nrows() } else { a.ncols() },
        });
    }
    Ok(())
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn eigh(a: &CMatrix) -> HermitianEigen {
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(a.nrows(), a.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

impl HermitianEigen {
    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (c, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            for r in 0..n {
                scaled[(r, c)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(-i H t)`.
    pub fn evolution(&self, t: f64) -> CMatrix {
        self.map(|lam| Complex64::from_polar(1.0, -lam * t))
    }
}

/// Schatten-∞ norm (largest singular value).
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().fold(0.0_f64, |m, &s| m.max(s))
}

/// Trace norm (sum of singular values).
pub fn trace_norm(a: &CMatrix) -> f64 {
    a.clone().singular_values().iter().sum()
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    eigh(a).values.first().copied().unwrap_or(0.0)
}

/// Numerical rank from singular values above `tol · max(1, σ_max)`.
pub fn rank(a: &CMatrix, tol: f64) -> usize {
    let sv = a.clone().singular_values();
    let top = sv.iter().fold(1.0_f64, |m, &s| m.max(s));
    sv.iter().filter(|&&s| s > tol * top).count()
}

/// `Tr_B` for a matrix on `ℋ_S ⊗ ℋ_B` with the bath as the fast index.
pub fn partial_trace_bath(a: &CMatrix, system_dim: usize, bath_dim: usize) -> Result<CMatrix> {
    check_square(a, system_dim * bath_dim)?;
    Ok(CMatrix::from_fn(system_dim, system_dim, |i, j| {
        (0..bath_dim).map(|b| a[(i * bath_dim + b, j * bath_dim + b)]).sum()
    }))
}

/// Hilbert–Schmidt inner product `Tr(A† B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Column-stacking vectorisation index of entry `(r, c)` in a `dim × dim` matrix.
pub fn vec_index(r: usize, c: usize, dim: usize) -> usize {
    c * dim + r
}

/// Random matrix generators shared by property suites.
pub mod random {
    use super::*;

    pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    pub fn matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
        CMatrix::from_fn(dim, dim, |_, _| complex(rng))
    }

    pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
        let a = matrix(rng, dim);
        (&a + a.adjoint()).scale(0.5)
    }

    /// Full-rank random density matrix `G G† / Tr(G G†)`.
    pub fn density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
        let g = matrix(rng, dim);
        let rho = &g * g.adjoint();
        let tr = trace(&rho).re;
        rho.unscale(tr)
    }

    pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
        eigh(&hermitian(rng, dim)).evolution(1.0)
    }

    pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
        let v = CVector::from_fn(dim, |_, _| complex(rng));
        let n = v.norm();
        v.unscale(n)
    }
}
