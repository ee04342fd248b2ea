use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::Error;
use crate::num::{Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix<T: Real>(self) -> DMatrix<C<T>> {
        let (o, l) = (T::zero(), T::one());
        let e = |re: T, im: T| C::new(re, im);
        let entries = match self {
            Pauli::I => [e(l, o), e(o, o), e(o, o), e(l, o)],
            Pauli::X => [e(o, o), e(l, o), e(l, o), e(o, o)],
            Pauli::Y => [e(o, o), e(o, -l), e(o, l), e(o, o)],
            Pauli::Z => [e(l, o), e(o, o), e(o, o), e(-l, o)],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }

    /// `P|b⟩ = phase · |b ⊕ flip⟩` for a computational bit `b`.
    pub(crate) fn action<T: Real>(self, bit: bool) -> (bool, C<T>) {
        let (o, l) = (T::zero(), T::one());
        match self {
            Pauli::I => (false, C::new(l, o)),
            Pauli::X => (true, C::new(l, o)),
            // Y|0> = i|1>, Y|1> = -i|0>
            Pauli::Y => (true, if bit { C::new(o, -l) } else { C::new(o, l) }),
            Pauli::Z => (false, if bit { C::new(-l, o) } else { C::new(l, o) }),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" => Ok(Pauli::I),
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            other => Err(Error::InvalidArgument(format!("unknown Pauli label `{other}`"))),
        }
    }
}

/// Left-multiplies `m` by the single-site Pauli `p` on `site` of an
/// `n`-qubit register (site 0 = most significant bit).
pub(crate) fn pauli_left_mul<T: Real>(p: Pauli, site: usize, n: usize, m: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let shift = n - 1 - site;
    let dim = m.nrows();
    let mut out = DMatrix::zeros(dim, m.ncols());
    for i in 0..dim {
        // row i of P·M = P[i, k] M[k, :] with k = i ⊕ flip
        let bit_k_is_set = |k: usize| (k >> shift) & 1 == 1;
        let k = match p {
            Pauli::X | Pauli::Y => i ^ (1 << shift),
            _ => i,
        };
        let (_, phase) = p.action::<T>(bit_k_is_set(k));
        for j in 0..m.ncols() {
            out[(i, j)] = phase * m[(k, j)];
        }
    }
    out
}

/// Right-multiplies `m` by the single-site Pauli `p` on `site`.
pub(crate) fn pauli_right_mul<T: Real>(p: Pauli, site: usize, n: usize, m: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let shift = n - 1 - site;
    let dim = m.ncols();
    let mut out = DMatrix::zeros(m.nrows(), dim);
    for j in 0..dim {
        // column j of M·P = Σ_k M[:, k] P[k, j]; P[k, j] ≠ 0 only for k = j ⊕ flip
        let (flip, phase) = p.action::<T>((j >> shift) & 1 == 1);
        let k = if flip { j ^ (1 << shift) } else { j };
        for i in 0..m.nrows() {
            out[(i, j)] = m[(i, k)] * phase;
        }
    }
    out
}
