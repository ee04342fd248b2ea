use nalgebra::DMatrix;
use num_traits::Zero;

use crate::num::{Real, C};

/// Matrix-free access to a Hermitian operator: `y = A x`.
pub trait HermitianOperator<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C<T>], y: &mut [C<T>]);
}

pub fn identity<T: Real>(dim: usize) -> DMatrix<C<T>> {
    DMatrix::identity(dim, dim)
}

/// Below this size the plain complex product is used.
const SPLIT_MATMUL_MIN_DIM: usize = 48;

/// `a · b`. Large products are split into four real products, which run on
/// the blocked real kernel and are several times faster than the complex
/// one.
pub fn matmul<T: Real>(a: &DMatrix<C<T>>, b: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    if a.nrows().min(a.ncols()).min(b.ncols()) < SPLIT_MATMUL_MIN_DIM {
        return a * b;
    }
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, |x, y| C::new(x, y))
}

/// `a · b†`.
pub fn matmul_adjoint<T: Real>(a: &DMatrix<C<T>>, b: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    matmul(a, &b.adjoint())
}

/// Kronecker product `a ⊗ b`; the left factor indexes the most significant
/// digits of the product basis.
pub fn kron<T: Real>(a: &DMatrix<C<T>>, b: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let x = a[(i, j)];
            if x.is_zero() {
                continue;
            }
            for q in 0..bc {
                for p in 0..br {
                    out[(i * br + p, j * bc + q)] = x * b[(p, q)];
                }
            }
        }
    }
    out
}

/// Embeds an operator on `width` contiguous qubits starting at `offset` into a
/// register of `total` qubits: `I_{2^offset} ⊗ op ⊗ I_{2^{rest}}`. Qubit 0 is
/// the most significant bit.
pub fn embed_operator<T: Real>(
    op: &DMatrix<C<T>>,
    offset: usize,
    width: usize,
    total: usize,
) -> DMatrix<C<T>> {
    assert!(offset + width <= total, "window exceeds register");
    let local = 1usize << width;
    assert_eq!(op.nrows(), local);
    assert_eq!(op.ncols(), local);
    let right = 1usize << (total - offset - width);
    let left = 1usize << offset;
    let dim = 1usize << total;
    let mut out = DMatrix::zeros(dim, dim);
    for a in 0..left {
        for j in 0..local {
            for i in 0..local {
                let x = op[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let row0 = (a * local + i) * right;
                let col0 = (a * local + j) * right;
                for b in 0..right {
                    out[(row0 + b, col0 + b)] = x;
                }
            }
        }
    }
    out
}
