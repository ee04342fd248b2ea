use nalgebra::{DMatrix, DVector};

use super::evolution::evolve;
use super::hamiltonian::{LocalHamiltonian, MAX_DENSE_SPINS};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, matmul, matmul_adjoint, operator_norm, HermitianMatrix, Propagator};
use crate::num::{cis, lit, Real, C};

/// Eigenvalue gap below which the ground space of `K` counts as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KCheckReport<T> {
    pub t: T,
    /// Largest difference between the sorted spectra of `K` and `Z`.
    pub spectrum_max_diff: T,
    /// `|⟨gs(K)|ψ(t)⟩|²`, or the weight of `ψ(t)` in the ground space when it
    /// is degenerate.
    pub ground_fidelity: T,
    /// `‖K − Z − it[H, Z]‖ / t²`; at `t = 0` its limit `‖[H,[H,Z]]‖ / 2`.
    pub first_order_residual: T,
    pub ground_multiplicity: usize,
}

impl<T: Real> KCheckReport<T> {
    pub fn degenerate(&self) -> bool {
        self.ground_multiplicity > 1
    }
}

/// Diagonal of `Z = −Σ_j σ^z_j`: `2·popcount(i) − n`.
fn z_diagonal<T: Real>(n: usize) -> Vec<T> {
    (0..1usize << n).map(|i| lit((2 * i.count_ones() as i64 - n as i64) as f64)).collect()
}

/// Parent hamiltonian `K = e^{itH} Z e^{−itH}` of the quenched state.
pub fn parent_hamiltonian<T: Real>(h: &LocalHamiltonian<T>, t: T) -> Result<HermitianMatrix<T>> {
    check_dense(h)?;
    let u = Propagator::new(&h.dense()?)?.unitary(t);
    Ok(conjugate_diagonal(&u, &z_diagonal::<T>(h.n())))
}

fn conjugate_diagonal<T: Real>(u: &DMatrix<C<T>>, diag: &[T]) -> HermitianMatrix<T> {
    let mut scaled = u.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= C::new(diag[j], T::zero());
    }
    HermitianMatrix::new(matmul_adjoint(&scaled, u)).expect("conjugated diagonal is Hermitian")
}

pub fn k_hamiltonian_check<T: Real>(h: &LocalHamiltonian<T>, t: T) -> Result<KCheckReport<T>> {
    check_dense(h)?;
    let n = h.n();
    let hd = h.dense()?;
    let z = z_diagonal::<T>(n);
    let u = Propagator::new(&hd)?.unitary(t);
    let k = conjugate_diagonal(&u, &z);

    let eig = hermitian_eigensystem(&k)?;
    let mut z_sorted = z.clone();
    z_sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let spectrum_max_diff = eig.values.iter().zip(&z_sorted).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));

    let e0 = eig.values[0];
    let ground_multiplicity = eig.values.iter().take_while(|&&e| e - e0 <= lit(DEGENERACY_TOL)).count();
    let psi = evolve(h, t)?;
    let ground_fidelity = (0..ground_multiplicity)
        .map(|c| eig.vectors.column(c).dotc(psi.amplitudes()).norm_sqr())
        .fold(T::zero(), |a, b| a + b);

    let hz = commutator_with_diagonal(hd.as_matrix(), &z);
    let first_order_residual = if t == T::zero() {
        let nested = commutator(hd.as_matrix(), &hz);
        operator_norm(&nested)? / lit(2.0)
    } else {
        let it = C::new(T::zero(), t);
        let mut rem = k.into_matrix() - &hz * it;
        for (i, zi) in z.iter().enumerate() {
            rem[(i, i)] -= C::new(*zi, T::zero());
        }
        operator_norm(&rem)? / (t * t)
    };
    Ok(KCheckReport { t, spectrum_max_diff, ground_fidelity, first_order_residual, ground_multiplicity })
}

fn commutator<T: Real>(a: &DMatrix<C<T>>, b: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    matmul(a, b) - matmul(b, a)
}

/// `[A, D]` for diagonal `D`: entries `A_ij (d_j − d_i)`.
fn commutator_with_diagonal<T: Real>(a: &DMatrix<C<T>>, d: &[T]) -> DMatrix<C<T>> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * C::new(d[j] - d[i], T::zero()))
}

/// Open-boundary 1D cluster state: `|+⟩^{⊗n}` followed by controlled-Z on
/// every edge `(j, j+1)`.
pub fn cluster_state<T: Real>(n: usize) -> StateVector<T> {
    let amp = lit::<T>(2f64.powf(-(n as f64) / 2.0));
    let amplitudes = DVector::from_fn(1 << n, |i, _| {
        let pairs = (i & (i >> 1)).count_ones();
        if pairs % 2 == 0 {
            C::new(amp, T::zero())
        } else {
            C::new(-amp, T::zero())
        }
    });
    StateVector::from_amplitudes(n, amplitudes).expect("cluster state is normalized")
}

/// `Had^{⊗n} Π_j e^{iπ deg(j) σ^z_j / 4} |cluster⟩`: the cluster state after the
/// local Clifford that maps `Π e^{iπ σ^z σ^z / 4}|+⟩^{⊗n}` onto
/// `Π e^{iπ σ^x σ^x / 4}|0⟩^{⊗n}` (up to a global phase).
pub fn rotated_cluster_state<T: Real>(n: usize) -> StateVector<T> {
    let cluster = cluster_state::<T>(n);
    let quarter = T::frac_pi_4();
    let phased = DVector::from_fn(1 << n, |i, _| {
        let mut angle = T::zero();
        for site in 0..n {
            let degree = if n == 1 { 0 } else if site == 0 || site == n - 1 { 1 } else { 2 };
            let z = if (i >> (n - 1 - site)) & 1 == 0 { T::one() } else { -T::one() };
            angle += quarter * lit::<T>(degree as f64) * z;
        }
        cluster.amplitudes()[i] * cis(angle)
    });
    let rotated = hadamard_all(n, &phased);
    StateVector::normalized(n, rotated).expect("unitary image is nonzero")
}

fn hadamard_all<T: Real>(n: usize, v: &DVector<C<T>>) -> DVector<C<T>> {
    let mut out = v.clone();
    let scale = T::one() / (T::one() + T::one()).sqrt();
    for site in 0..n {
        let bit = 1usize << (n - 1 - site);
        for i in 0..out.len() {
            if i & bit == 0 {
                let (a, b) = (out[i], out[i | bit]);
                out[i] = (a + b) * scale;
                out[i | bit] = (a - b) * scale;
            }
        }
    }
    out
}

fn check_dense<T: Real>(h: &LocalHamiltonian<T>) -> Result<()> {
    if h.n() > MAX_DENSE_SPINS {
        return Err(Error::TooLarge { what: "parent hamiltonian", n: h.n(), max: MAX_DENSE_SPINS });
    }
    Ok(())
}
