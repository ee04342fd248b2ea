use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_traits::Zero;

use super::pauli::Pauli;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigensystem, hermitian_eigenvalues, kron, operator_norm, HermitianMatrix, HermitianOperator,
    Propagator,
};
use crate::num::{Real, C};

/// Largest chain handled at all (matrix-free paths).
pub const MAX_SPINS: usize = 20;
/// Largest chain for which full `2^n × 2^n` matrices are formed.
pub const MAX_DENSE_SPINS: usize = 12;

/// Sum of two-site terms on an open chain of `n` spins. Bond `j` couples
/// sites `j` and `j + 1`; in each 4×4 term site `j` is the left tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct BondSum<T: Real> {
    n: usize,
    bonds: Vec<(usize, DMatrix<C<T>>)>,
}

impl<T: Real> BondSum<T> {
    pub fn empty(n: usize) -> Self {
        Self { n, bonds: Vec::new() }
    }

    pub(crate) fn from_bonds(n: usize, mut bonds: Vec<(usize, DMatrix<C<T>>)>) -> Self {
        bonds.sort_by_key(|(j, _)| *j);
        Self { n, bonds }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bonds(&self) -> &[(usize, DMatrix<C<T>>)] {
        &self.bonds
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        Self { n: self.n, bonds: self.bonds.iter().filter(|(j, _)| keep(*j)).cloned().collect() }
    }

    /// Bonds with both sites inside `lo..=hi`.
    pub fn inside(&self, lo: usize, hi: usize) -> Self {
        self.filter(|j| j >= lo && j < hi)
    }

    pub fn without(&self, bond: usize) -> Self {
        self.filter(|j| j != bond)
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut bonds = self.bonds.clone();
        bonds.extend(other.bonds.iter().cloned());
        Self::from_bonds(self.n, bonds)
    }

    /// Dense matrix on the sites `lo..=hi`; every bond must lie inside.
    pub fn dense_on(&self, lo: usize, hi: usize) -> Result<HermitianMatrix<T>> {
        let width = hi + 1 - lo;
        if width > MAX_DENSE_SPINS {
            return Err(Error::TooLarge { what: "dense operator", n: width, max: MAX_DENSE_SPINS });
        }
        let dim = 1usize << width;
        let mut out = DMatrix::<C<T>>::zeros(dim, dim);
        for (j, term) in &self.bonds {
            if *j < lo || *j + 1 > hi {
                return Err(Error::InvalidArgument(format!("bond {j} lies outside sites {lo}..={hi}")));
            }
            for_each_group(width, j - lo, |idx| {
                for a in 0..4 {
                    for b in 0..4 {
                        let v = term[(a, b)];
                        if !v.is_zero() {
                            out[(idx[a], idx[b])] += v;
                        }
                    }
                }
            });
        }
        Ok(HermitianMatrix::symmetrized(out))
    }

    pub fn dense(&self) -> Result<HermitianMatrix<T>> {
        self.dense_on(0, self.n - 1)
    }

    /// `e^{itH}` on the sites `lo..=hi`, assembled as a Kronecker product over
    /// the connected runs of bonds so that decoupled pieces stay small.
    pub fn exp_on(&self, lo: usize, hi: usize, t: T) -> Result<DMatrix<C<T>>> {
        let mut out: Option<DMatrix<C<T>>> = None;
        let mut push = |block: DMatrix<C<T>>| {
            out = Some(match out.take() {
                None => block,
                Some(acc) => kron(&acc, &block),
            });
        };
        let mut site = lo;
        while site <= hi {
            // longest run of consecutive bonds starting at `site`
            let mut end = site;
            while end < hi && self.bonds.iter().any(|(j, _)| *j == end) {
                end += 1;
            }
            if end == site {
                push(DMatrix::identity(2, 2));
                site += 1;
                continue;
            }
            let run = self.inside(site, end);
            let h = run.dense_on(site, end)?;
            push(Propagator::new(&h)?.unitary(t));
            site = end + 1;
        }
        Ok(out.unwrap_or_else(|| DMatrix::identity(1, 1)))
    }
}

/// Calls `f` with the four basis indices `[|00⟩, |01⟩, |10⟩, |11⟩]` of the
/// sites `(p, p+1)` for every configuration of the remaining `width - 2` sites.
fn for_each_group(width: usize, p: usize, mut f: impl FnMut([usize; 4])) {
    let s = 1usize << (width - 2 - p);
    let dim = 1usize << width;
    let mut hi = 0;
    while hi < dim {
        for low in 0..s {
            let base = hi + low;
            f([base, base + s, base + 2 * s, base + 3 * s]);
        }
        hi += 4 * s;
    }
}

impl<T: Real> HermitianOperator<T> for BondSum<T> {
    fn dim(&self) -> usize {
        1 << self.n
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        y.iter_mut().for_each(|v| *v = C::new(T::zero(), T::zero()));
        for (j, term) in &self.bonds {
            for_each_group(self.n, *j, |idx| {
                let xs = [x[idx[0]], x[idx[1]], x[idx[2]], x[idx[3]]];
                for a in 0..4 {
                    let mut acc = C::new(T::zero(), T::zero());
                    for b in 0..4 {
                        acc += term[(a, b)] * xs[b];
                    }
                    y[idx[a]] += acc;
                }
            });
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `Σ σ^x_j σ^y_{j+1}`
    XyCross,
    /// `Σ σ^x_j σ^x_{j+1}`
    Xx,
    /// `-Σ σ^z_j`, each field folded into the bond to its right (the last
    /// site into the last bond).
    ZField,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::XyCross => "xy_cross",
            Preset::Xx => "xx",
            Preset::ZField => "zfield",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xy_cross" => Ok(Preset::XyCross),
            "xx" => Ok(Preset::Xx),
            "zfield" => Ok(Preset::ZField),
            other => Err(Error::InvalidArgument(format!("unknown hamiltonian preset `{other}`"))),
        }
    }
}

/// One line of a term list: `coeff · P_left ⊗ P_right` on bond `bond`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm<T> {
    pub coeff: T,
    pub left: Pauli,
    pub right: Pauli,
    pub bond: usize,
}

/// Open chain hamiltonian `H = Σ_{j=0}^{n-2} H_j` with `H_j` acting on sites
/// `j, j+1`. Every bond carries a (possibly zero) 4×4 Hermitian term.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalHamiltonian<T: Real> {
    sum: BondSum<T>,
    h_norm: T,
}

impl<T: Real> LocalHamiltonian<T> {
    pub fn from_terms(n: usize, terms: Vec<DMatrix<C<T>>>) -> Result<Self> {
        if !(2..=MAX_SPINS).contains(&n) {
            return Err(Error::InvalidArgument(format!("chain length {n} outside 2..={MAX_SPINS}")));
        }
        if terms.len() != n - 1 {
            return Err(Error::DimensionMismatch { expected: n - 1, found: terms.len() });
        }
        let mut bonds = Vec::with_capacity(n - 1);
        let mut h_norm = T::zero();
        for (j, term) in terms.into_iter().enumerate() {
            if term.shape() != (4, 4) {
                return Err(Error::DimensionMismatch { expected: 4, found: term.nrows().max(term.ncols()) });
            }
            let term = HermitianMatrix::new(term)?.into_matrix();
            h_norm = h_norm.max(operator_norm(&term)?);
            bonds.push((j, term));
        }
        Ok(Self { sum: BondSum { n, bonds }, h_norm })
    }

    pub fn from_pauli_terms(n: usize, terms: &[PauliTerm<T>]) -> Result<Self> {
        if !(2..=MAX_SPINS).contains(&n) {
            return Err(Error::InvalidArgument(format!("chain length {n} outside 2..={MAX_SPINS}")));
        }
        let mut blocks = vec![DMatrix::<C<T>>::zeros(4, 4); n - 1];
        for term in terms {
            if term.bond + 1 >= n {
                return Err(Error::InvalidArgument(format!("bond {} outside chain of {n} spins", term.bond)));
            }
            let op = kron(&term.left.matrix::<T>(), &term.right.matrix::<T>());
            blocks[term.bond] += op * C::new(term.coeff, T::zero());
        }
        Self::from_terms(n, blocks)
    }

    pub fn preset(preset: Preset, n: usize) -> Result<Self> {
        if !(2..=MAX_SPINS).contains(&n) {
            return Err(Error::InvalidArgument(format!("chain length {n} outside 2..={MAX_SPINS}")));
        }
        Self::from_pauli_terms(n, &preset_terms(preset, n))
    }

    /// `Z = -Σ_j σ^z_j`, whose unique ground state is the all-up product state.
    pub fn z_field(n: usize) -> Result<Self> {
        Self::preset(Preset::ZField, n)
    }

    pub fn n(&self) -> usize {
        self.sum.n
    }

    pub fn dim(&self) -> usize {
        1 << self.sum.n
    }

    /// `max_j ‖H_j‖`.
    pub fn h_norm(&self) -> T {
        self.h_norm
    }

    pub fn term(&self, bond: usize) -> &DMatrix<C<T>> {
        &self.sum.bonds[bond].1
    }

    pub fn as_bond_sum(&self) -> &BondSum<T> {
        &self.sum
    }

    pub fn dense(&self) -> Result<HermitianMatrix<T>> {
        self.sum.dense()
    }

    /// Every term shifted to `H_j − λ_min(H_j)`, making it positive
    /// semidefinite; only a global phase of the evolution changes.
    pub fn shifted_psd(&self) -> Result<Self> {
        let terms = self
            .sum
            .bonds
            .iter()
            .map(|(_, h)| {
                let lmin = hermitian_eigenvalues(&HermitianMatrix::symmetrized(h.clone()))[0];
                h - DMatrix::<C<T>>::identity(4, 4) * C::new(lmin, T::zero())
            })
            .collect();
        Self::from_terms(self.n(), terms)
    }

    /// Adds `shift_j · I` to each term.
    pub fn shifted_by(&self, shifts: &[T]) -> Result<Self> {
        if shifts.len() != self.n() - 1 {
            return Err(Error::DimensionMismatch { expected: self.n() - 1, found: shifts.len() });
        }
        let terms = self
            .sum
            .bonds
            .iter()
            .zip(shifts)
            .map(|((_, h), &s)| h + DMatrix::<C<T>>::identity(4, 4) * C::new(s, T::zero()))
            .collect();
        Self::from_terms(self.n(), terms)
    }

    /// Term list as Pauli components, in bond order then `IXYZ` order of
    /// left and right labels; zero components are omitted.
    pub fn pauli_decomposition(&self) -> Vec<PauliTerm<T>> {
        const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let quarter = T::one() / (T::one() + T::one() + T::one() + T::one());
        let mut out = Vec::new();
        for (j, h) in &self.sum.bonds {
            for left in ALL {
                for right in ALL {
                    let p = kron(&left.matrix::<T>(), &right.matrix::<T>());
                    // tr(P H)/4 is real for Hermitian H
                    let c = (p * h).trace().re * quarter;
                    if c != T::zero() {
                        out.push(PauliTerm { coeff: c, left, right, bond: *j });
                    }
                }
            }
        }
        out
    }
}

impl<T: Real> HermitianOperator<T> for LocalHamiltonian<T> {
    fn dim(&self) -> usize {
        1 << self.sum.n
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        self.sum.apply(x, y)
    }
}

fn preset_terms<T: Real>(preset: Preset, n: usize) -> Vec<PauliTerm<T>> {
    let one = T::one();
    match preset {
        Preset::XyCross => (0..n - 1).map(|j| PauliTerm { coeff: one, left: Pauli::X, right: Pauli::Y, bond: j }).collect(),
        Preset::Xx => (0..n - 1).map(|j| PauliTerm { coeff: one, left: Pauli::X, right: Pauli::X, bond: j }).collect(),
        Preset::ZField => {
            let mut terms: Vec<PauliTerm<T>> =
                (0..n - 1).map(|j| PauliTerm { coeff: -one, left: Pauli::Z, right: Pauli::I, bond: j }).collect();
            terms.push(PauliTerm { coeff: -one, left: Pauli::I, right: Pauli::Z, bond: n - 2 });
            terms
        }
    }
}

/// Ground-state energy and gap of a small dense hamiltonian; used in tests and
/// diagnostics.
pub fn spectral_gap<T: Real>(h: &HermitianMatrix<T>) -> Result<(T, T)> {
    let e = hermitian_eigensystem(h)?;
    let gap = if e.dim() > 1 { e.values[1] - e.values[0] } else { T::zero() };
    Ok((e.values[0], gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::embed_operator;
    use nalgebra::DVector;
    use num_complex::Complex64;

    /// Independent assembly: Σ_j I ⊗ … ⊗ H_j ⊗ … ⊗ I via explicit Kronecker
    /// products.
    fn kron_oracle(h: &LocalHamiltonian<f64>) -> DMatrix<Complex64> {
        let n = h.n();
        let mut out = DMatrix::zeros(1 << n, 1 << n);
        for j in 0..n - 1 {
            let mut op = DMatrix::<Complex64>::identity(1, 1);
            for _ in 0..j {
                op = kron(&op, &Pauli::I.matrix());
            }
            op = kron(&op, h.term(j));
            for _ in j + 2..n {
                op = kron(&op, &Pauli::I.matrix());
            }
            out += op;
        }
        out
    }

    #[test]
    fn xx_two_sites() {
        let h = LocalHamiltonian::<f64>::preset(Preset::Xx, 2).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(*h.term(0), kron(&Pauli::X.matrix(), &Pauli::X.matrix()));
        assert!((h.h_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zfield_matches_kron_oracle() {
        let h = LocalHamiltonian::<f64>::z_field(4).unwrap();
        let mut oracle = DMatrix::<Complex64>::zeros(16, 16);
        for site in 0..4 {
            oracle -= embed_operator(&Pauli::Z.matrix(), site, 1, 4);
        }
        assert!((h.dense().unwrap().into_matrix() - oracle).norm() < 1e-14);
        assert!((h.h_norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn xy_cross_matches_kron_oracle() {
        let h = LocalHamiltonian::<f64>::preset(Preset::XyCross, 3).unwrap();
        assert_eq!(h.as_bond_sum().bonds().len(), 2);
        assert!((h.dense().unwrap().into_matrix() - kron_oracle(&h)).norm() < 1e-14);
    }

    #[test]
    fn matrix_free_matches_dense() {
        let h = LocalHamiltonian::<f64>::preset(Preset::XyCross, 6).unwrap().shifted_by(&[0.1, -0.2, 0.3, 0.0, 1.0]).unwrap();
        let x = DVector::from_fn(64, |i, _| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()));
        let mut y = DVector::zeros(64);
        h.apply(x.as_slice(), y.as_mut_slice());
        let dense = h.dense().unwrap().into_matrix() * &x;
        assert!((y - dense).norm() < 1e-12);
    }

    #[test]
    fn exp_on_splits_decoupled_runs() {
        let h = LocalHamiltonian::<f64>::preset(Preset::XyCross, 5).unwrap();
        let cut = h.as_bond_sum().without(2);
        let via_runs = cut.exp_on(0, 4, 0.37).unwrap();
        let direct = Propagator::new(&cut.dense().unwrap()).unwrap().unitary(0.37);
        assert!((via_runs - direct).norm() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(LocalHamiltonian::<f64>::preset(Preset::Xx, 1).is_err());
        assert!(LocalHamiltonian::<f64>::preset(Preset::Xx, MAX_SPINS + 1).is_err());
        let mut bad = DMatrix::<Complex64>::zeros(4, 4);
        bad[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(LocalHamiltonian::from_terms(2, vec![bad]), Err(Error::NotHermitian { .. })));
        assert!("heisenberg".parse::<Preset>().is_err());
    }

    #[test]
    fn psd_shift() {
        let h = LocalHamiltonian::<f64>::preset(Preset::XyCross, 4).unwrap().shifted_psd().unwrap();
        for j in 0..3 {
            let ev = hermitian_eigenvalues(&HermitianMatrix::new(h.term(j).clone()).unwrap());
            assert!(ev[0].abs() < 1e-14);
        }
    }

    #[test]
    fn pauli_decomposition_round_trip() {
        let h = LocalHamiltonian::<f64>::preset(Preset::ZField, 4).unwrap();
        let terms = h.pauli_decomposition();
        let again = LocalHamiltonian::from_pauli_terms(4, &terms).unwrap();
        assert_eq!(h.dense().unwrap(), again.dense().unwrap());
    }
}
