use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::num::{lit, to_f64, tol, Real, C};

/// Pure state of `n` spins in the computational basis, site 0 being the most
/// significant bit and bit value 0 meaning spin up.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    n: usize,
    amplitudes: DVector<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// The all-up product state `|0⟩`.
    pub fn all_up(n: usize) -> Self {
        let mut amplitudes = DVector::zeros(1 << n);
        amplitudes[0] = C::new(T::one(), T::zero());
        Self { n, amplitudes }
    }

    pub fn from_amplitudes(n: usize, amplitudes: DVector<C<T>>) -> Result<Self> {
        if amplitudes.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if (norm - T::one()).abs() > tol::<T>(1e-10) {
            return Err(Error::NotNormalized { norm: to_f64(norm) });
        }
        Ok(Self { n, amplitudes })
    }

    /// Normalizes `amplitudes` first; fails only on a zero vector.
    pub fn normalized(n: usize, amplitudes: DVector<C<T>>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == T::zero() {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        Self::from_amplitudes(n, amplitudes.unscale(norm))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &DVector<C<T>> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.norm()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> T {
        let overlap = self.amplitudes.dotc(&other.amplitudes);
        overlap.norm_sqr()
    }

    /// The same state with site order reversed (site `j` becomes `n - 1 - j`).
    pub fn reflected(&self) -> Self {
        let n = self.n;
        let flip = |mut i: usize| {
            let mut r = 0;
            for _ in 0..n {
                r = (r << 1) | (i & 1);
                i >>= 1;
            }
            r
        };
        let amplitudes = DVector::from_fn(1 << n, |i, _| self.amplitudes[flip(i)]);
        Self { n, amplitudes }
    }

    /// Amplitude matrix `C` with rows indexed by the first `m` sites and
    /// columns by the rest.
    pub fn amplitude_matrix(&self, cut: CutPartition) -> DMatrix<C<T>> {
        let rows = 1usize << cut.m;
        let cols = 1usize << (self.n - cut.m);
        DMatrix::from_fn(rows, cols, |r, c| self.amplitudes[r * cols + c])
    }
}

/// Split of an `n`-site chain into `A = 0..m` and `B = m..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutPartition {
    n: usize,
    m: usize,
}

impl CutPartition {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(Error::InvalidArgument(format!("cut {m} outside 1..{n}")));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Index of the bond crossing the cut.
    pub fn bond(&self) -> usize {
        self.m - 1
    }

    pub fn mirrored(&self) -> Self {
        Self { n: self.n, m: self.n - self.m }
    }
}

/// Squared Schmidt coefficients across a cut, nonincreasing, summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum<T> {
    m: usize,
    coefficients: Vec<T>,
}

impl<T: Real> SchmidtSpectrum<T> {
    /// Builds a spectrum from arbitrary weights: sorts, clamps values down to
    /// `-1e-12` to zero and rejects anything more negative or a sum away from one.
    pub fn from_coefficients(m: usize, mut coefficients: Vec<T>) -> Result<Self> {
        let floor = -tol::<T>(1e-12);
        for c in coefficients.iter_mut() {
            if *c < floor {
                return Err(Error::InvalidArgument(format!("negative Schmidt weight {}", to_f64(*c))));
            }
            if *c < T::zero() {
                *c = T::zero();
            }
        }
        coefficients.sort_by(|a, b| b.partial_cmp(a).expect("finite Schmidt weights"));
        let sum = coefficients.iter().fold(T::zero(), |acc, &c| acc + c);
        if (sum - T::one()).abs() > tol::<T>(1e-10) {
            return Err(Error::NotNormalized { norm: to_f64(sum) });
        }
        Ok(Self { m, coefficients })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn largest(&self) -> T {
        self.coefficients[0]
    }

    /// Number of coefficients above `1e-12`.
    pub fn effective_rank(&self) -> usize {
        let cutoff = lit::<T>(1e-12);
        self.coefficients.iter().filter(|&&s| s > cutoff).count()
    }

    pub fn sum(&self) -> T {
        self.coefficients.iter().fold(T::zero(), |acc, &c| acc + c)
    }
}

pub fn schmidt_spectrum<T: Real>(psi: &StateVector<T>, cut: CutPartition) -> Result<SchmidtSpectrum<T>> {
    if cut.n() != psi.n() {
        return Err(Error::DimensionMismatch { expected: psi.n(), found: cut.n() });
    }
    let c = psi.amplitude_matrix(cut);
    let sv = singular_values(&c)?;
    SchmidtSpectrum::from_coefficients(cut.m(), sv.into_iter().map(|s| s * s).collect())
}

/// Block entropy in bits: von Neumann for `alpha == 1`, Rényi otherwise.
pub fn block_entropy<T: Real>(s: &SchmidtSpectrum<T>, alpha: T) -> Result<T> {
    if alpha <= T::zero() {
        return Err(Error::InvalidArgument(format!("entropy order {} must be positive", to_f64(alpha))));
    }
    let ln2 = T::ln_2();
    if alpha == T::one() {
        let h = s
            .coefficients
            .iter()
            .filter(|&&p| p > T::zero())
            .fold(T::zero(), |acc, &p| acc - p * p.ln());
        return Ok((h / ln2).max(T::zero()));
    }
    let power = s
        .coefficients
        .iter()
        .filter(|&&p| p > T::zero())
        .fold(T::zero(), |acc, &p| acc + p.powf(alpha));
    Ok((power.ln() / ((T::one() - alpha) * ln2)).max(T::zero()))
}

pub fn von_neumann_entropy<T: Real>(s: &SchmidtSpectrum<T>) -> T {
    block_entropy(s, T::one()).expect("order one is valid")
}
