use std::collections::HashMap;

use nalgebra::DMatrix;

use super::hamiltonian::{BondSum, LocalHamiltonian, MAX_DENSE_SPINS};
use super::state::{CutPartition, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{
    kron, matmul, matmul_adjoint, operator_norm, weyl_perturbation_check, HermitianMatrix, Propagator, WeylReport,
};
use crate::num::{lit, Real, C};

/// The three pieces `H = H_A + H_B + H_I` of a chain split at a cut.
#[derive(Clone, Debug)]
pub struct InteractionSplit<T: Real> {
    pub left: BondSum<T>,
    pub right: BondSum<T>,
    pub interaction: BondSum<T>,
}

pub fn interaction_split<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition) -> Result<InteractionSplit<T>> {
    check_cut(h, cut)?;
    let sum = h.as_bond_sum();
    let b = cut.bond();
    Ok(InteractionSplit {
        left: sum.filter(|j| j < b),
        right: sum.filter(|j| j > b),
        interaction: sum.filter(|j| j == b),
    })
}

/// Unitary acting on the contiguous sites `lo..=hi` of a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary<T: Real> {
    pub lo: usize,
    pub hi: usize,
    pub matrix: DMatrix<C<T>>,
}

impl<T: Real> LocalUnitary<T> {
    pub fn width(&self) -> usize {
        self.hi + 1 - self.lo
    }

    /// The same operator on the larger window `lo..=hi`, padded with identities.
    pub fn widened(&self, lo: usize, hi: usize) -> DMatrix<C<T>> {
        assert!(lo <= self.lo && hi >= self.hi, "target window must contain the support");
        let left = DMatrix::identity(1 << (self.lo - lo), 1 << (self.lo - lo));
        let right = DMatrix::identity(1 << (hi - self.hi), 1 << (hi - self.hi));
        kron(&kron(&left, &self.matrix), &right)
    }
}

/// Sites of the region `Λ_l` around a cut: the support of `[H, H_I]`
/// (sites `m-2 ..= m+1`) widened by `l` on each side and clipped to the chain.
pub fn hierarchy_window(n: usize, cut: CutPartition, l: usize) -> (usize, usize) {
    let m = cut.m();
    (m.saturating_sub(2 + l), (m + 1 + l).min(n - 1))
}

/// `V(t) = e^{-it(H - H_I)} e^{itH}`, restricted to the terms of `sum` that
/// lie inside `lo..=hi`.
fn patch_on<T: Real>(sum: &BondSum<T>, bond: usize, lo: usize, hi: usize, t: T) -> Result<LocalUnitary<T>> {
    let inside = sum.inside(lo, hi);
    let full = inside.exp_on(lo, hi, t)?;
    let decoupled = inside.without(bond).exp_on(lo, hi, -t)?;
    Ok(LocalUnitary { lo, hi, matrix: matmul(&decoupled, &full) })
}

/// The patch unitary `V(t)` on the whole chain.
pub fn patch_unitary<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition, t: T) -> Result<DMatrix<C<T>>> {
    check_dense(h)?;
    check_cut(h, cut)?;
    Ok(patch_on(h.as_bond_sum(), cut.bond(), 0, h.n() - 1, t)?.matrix)
}

/// `V_{Λ_l}(t)`: the patch unitary built from the terms inside `Λ_l` only,
/// returned on its support.
pub fn restricted_patch<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition, t: T, l: usize) -> Result<LocalUnitary<T>> {
    check_dense(h)?;
    check_cut(h, cut)?;
    check_level(h, cut, l)?;
    let (lo, hi) = hierarchy_window(h.n(), cut, l);
    patch_on(h.as_bond_sum(), cut.bond(), lo, hi, t)
}

/// `M = [H_{Λ_k}, H_I]`, formed on the sites it acts on.
pub fn boundary_commutator<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition, k: usize) -> Result<LocalUnitary<T>> {
    check_cut(h, cut)?;
    let (lo, hi) = hierarchy_window(h.n(), cut, k);
    let (clo, chi) = (cut.m().saturating_sub(2).max(lo), (cut.m() + 1).min(hi));
    let region = h.as_bond_sum().inside(lo, hi).inside(clo, chi);
    let hl = region.dense_on(clo, chi)?.into_matrix();
    let hi_op = region.filter(|j| j == cut.bond()).dense_on(clo, chi)?.into_matrix();
    Ok(LocalUnitary { lo: clo, hi: chi, matrix: &hl * &hi_op - &hi_op * &hl })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HierarchyRow<T> {
    pub l: usize,
    /// `‖W_l(t) − 𝕀‖`
    pub w_deviation: T,
    /// `δ_l |t|^{l+2} / (l+2)!` with `δ_l = ‖M‖ 2^l ‖h‖^l`
    pub lr_bound: T,
}

impl<T: Real> HierarchyRow<T> {
    /// `‖W_l − 𝕀‖ ≤ min(2, bound)` up to `slack`.
    pub fn within_bound(&self, slack: T) -> bool {
        let two = T::one() + T::one();
        self.w_deviation <= two.min(self.lr_bound) + slack
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyReport<T> {
    pub t: T,
    pub m: usize,
    pub h_norm: T,
    /// `‖[H_{Λ_k}, H_I]‖` at `k = l_max`.
    pub m_norm: T,
    pub rows: Vec<HierarchyRow<T>>,
    /// `‖V(t) − W_{l_max} ⋯ W_1‖`
    pub reassembly_error: T,
}

impl<T: Real> HierarchyReport<T> {
    pub fn violations(&self, slack: T) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.within_bound(slack)).map(|r| r.l).collect()
    }
}

/// The factorization `V(t) = W_{l_max}(t) ⋯ W_1(t)` with
/// `W_l = V_{Λ_l} V_{Λ_{l-1}}^†` (and `W_1 = V_{Λ_1}`), each factor compared
/// with its Lieb-Robinson bound.
pub fn w_hierarchy<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition, t: T, l_max: usize) -> Result<HierarchyReport<T>> {
    check_dense(h)?;
    check_cut(h, cut)?;
    check_level(h, cut, l_max)?;
    let n = h.n();
    let patches = patch_ladder(h, cut, t, l_max)?;
    let m_norm = operator_norm(&boundary_commutator(h, cut, l_max)?.matrix)?;
    let two = T::one() + T::one();
    let (glo, ghi) = hierarchy_window(n, cut, l_max);

    let mut rows = Vec::with_capacity(l_max);
    let mut product: Option<DMatrix<C<T>>> = None;
    let mut factorial = two;
    for l in 1..=l_max {
        factorial *= lit::<T>((l + 2) as f64);
        let lf = lit::<T>(l as f64);
        let delta = m_norm * two.powf(lf) * h.h_norm().powf(lf);
        let lr_bound = delta * t.abs().powf(lf + two) / factorial;

        let cur = &patches[l];
        let (lo, hi) = (cur.lo, cur.hi);
        let w = if l == 1 {
            cur.matrix.clone()
        } else {
            matmul_adjoint(&cur.matrix, &patches[l - 1].widened(lo, hi))
        };
        // ‖V_l V_{l-1}^† − 𝕀‖ = ‖V_l − V_{l-1}‖ for unitaries
        let diff = if l == 1 {
            &cur.matrix - DMatrix::identity(cur.matrix.nrows(), cur.matrix.nrows())
        } else {
            &cur.matrix - patches[l - 1].widened(lo, hi)
        };
        rows.push(HierarchyRow { l, w_deviation: operator_norm(&diff)?, lr_bound });

        let w = LocalUnitary { lo, hi, matrix: w }.widened(glo, ghi);
        product = Some(match product {
            None => w,
            Some(p) => matmul(&w, &p),
        });
    }
    let v = LocalUnitary { lo: glo, hi: ghi, matrix: patches[l_max].widened(glo, ghi) };
    let reassembled = product.expect("l_max >= 1");
    let reassembly_error = operator_norm(&(&v.matrix - reassembled))?;
    Ok(HierarchyReport { t, m: cut.m(), h_norm: h.h_norm(), m_norm, rows, reassembly_error })
}

/// `V_{Λ_l}` for `l = 0..=l_max` (index 0 is unused padding). Patches on the
/// same window are computed once.
fn patch_ladder<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition, t: T, l_max: usize) -> Result<Vec<LocalUnitary<T>>> {
    let mut cache: HashMap<(usize, usize), LocalUnitary<T>> = HashMap::new();
    let mut out = vec![LocalUnitary { lo: 0, hi: 0, matrix: DMatrix::identity(2, 2) }];
    for l in 1..=l_max {
        let (lo, hi) = hierarchy_window(h.n(), cut, l);
        if let Some(p) = cache.get(&(lo, hi)) {
            out.push(p.clone());
            continue;
        }
        let p = patch_on(h.as_bond_sum(), cut.bond(), lo, hi, t)?;
        cache.insert((lo, hi), p.clone());
        out.push(p);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylStep<T> {
    pub l: usize,
    pub report: WeylReport<T>,
    /// `‖D_l‖` with `D_l = (C_{l+1} − C_l)/ε_{l+1}`; zero when `ε_{l+1} = 0`.
    pub residual_norm: T,
}

/// Weyl's inequality along the hierarchy states `ψ_l = V_{Λ_l}(t)|0⟩`: the
/// reduced density matrices `P = C_l C_l^†` and `P + Q = C_{l+1} C_{l+1}^†`.
pub fn weyl_chain<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition, t: T, l_max: usize) -> Result<Vec<WeylStep<T>>> {
    check_dense(h)?;
    check_cut(h, cut)?;
    check_level(h, cut, l_max)?;
    let n = h.n();
    let patches = patch_ladder(h, cut, t, l_max)?;
    let states = (1..=l_max)
        .map(|l| {
            let full = patches[l].widened(0, n - 1);
            StateVector::normalized(n, full.column(0).into_owned())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for l in 1..l_max {
        let c_l = states[l - 1].amplitude_matrix(cut);
        let c_next = states[l].amplitude_matrix(cut);
        let p = HermitianMatrix::new(&c_l * c_l.adjoint())?;
        let q = HermitianMatrix::new(&c_next * c_next.adjoint() - p.as_matrix())?;
        let report = weyl_perturbation_check(&p, &q)?;
        let eps = operator_norm(&(&patches[l + 1].matrix - patches[l].widened(patches[l + 1].lo, patches[l + 1].hi)))?;
        let residual = &c_next - &c_l;
        let residual_norm = if eps > T::zero() { operator_norm(&residual)? / eps } else { T::zero() };
        out.push(WeylStep { l, report, residual_norm });
    }
    Ok(out)
}

/// `L(t) = iH_I + ∫_0^t τ_u^H([H, H_I]) du` with `τ_u^H(N) = e^{-iuH} N e^{iuH}`,
/// integrated by composite Simpson on `intervals` (rounded up to even) pieces.
/// The patch unitary obeys `dV/dt = V(t) L(t)`.
pub fn patch_generator<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition, t: T, intervals: usize) -> Result<DMatrix<C<T>>> {
    check_dense(h)?;
    let split = interaction_split(h, cut)?;
    let n = h.n();
    let hd = h.dense()?.into_matrix();
    let hi = split.interaction.dense_on(0, n - 1)?.into_matrix();
    let comm = &hd * &hi - &hi * &hd;
    let prop = Propagator::new(&HermitianMatrix::new(hd)?)?;
    let intervals = intervals.max(2).div_ceil(2) * 2;
    let step = t / lit::<T>(intervals as f64);
    let mut integral = DMatrix::<C<T>>::zeros(1 << n, 1 << n);
    for k in 0..=intervals {
        let u = step * lit::<T>(k as f64);
        let weight = if k == 0 || k == intervals {
            T::one()
        } else if k % 2 == 1 {
            lit(4.0)
        } else {
            lit(2.0)
        };
        let e = prop.unitary(u);
        let tau = matmul(&matmul(&e.adjoint(), &comm), &e);
        integral += tau * C::new(weight, T::zero());
    }
    integral *= C::new(step / lit(3.0), T::zero());
    Ok(hi.map(|z| C::new(-z.im, z.re)) + integral)
}

fn check_dense<T: Real>(h: &LocalHamiltonian<T>) -> Result<()> {
    if h.n() > MAX_DENSE_SPINS {
        return Err(Error::TooLarge { what: "patch unitary", n: h.n(), max: MAX_DENSE_SPINS });
    }
    Ok(())
}

fn check_cut<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition) -> Result<()> {
    if cut.n() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), found: cut.n() });
    }
    Ok(())
}

fn check_level<T: Real>(h: &LocalHamiltonian<T>, cut: CutPartition, l: usize) -> Result<()> {
    if l == 0 || l > h.n() - cut.m() {
        return Err(Error::InvalidArgument(format!("hierarchy level {l} outside 1..={}", h.n() - cut.m())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::hamiltonian::Preset;

    fn xy(n: usize) -> LocalHamiltonian<f64> {
        LocalHamiltonian::preset(Preset::XyCross, n).unwrap()
    }

    fn dense_exp(sum: &BondSum<f64>, n: usize, t: f64) -> DMatrix<C<f64>> {
        Propagator::new(&sum.dense_on(0, n - 1).unwrap()).unwrap().unitary(t)
    }

    fn distance_to_identity(a: &DMatrix<C<f64>>) -> f64 {
        (a - DMatrix::identity(a.nrows(), a.ncols())).camax()
    }

    #[test]
    fn split_reassembles() {
        let h = LocalHamiltonian::<f64>::preset(Preset::Xx, 2).unwrap();
        let s = interaction_split(&h, CutPartition::new(2, 1).unwrap()).unwrap();
        assert!(s.left.is_empty() && s.right.is_empty());
        assert_eq!(s.interaction.bonds().len(), 1);

        let h = xy(4);
        let s = interaction_split(&h, CutPartition::new(4, 2).unwrap()).unwrap();
        let total = s.left.plus(&s.right).plus(&s.interaction).dense().unwrap();
        assert!((total.into_matrix() - h.dense().unwrap().into_matrix()).camax() < 1e-14);

        let z = LocalHamiltonian::<f64>::z_field(4).unwrap();
        let s = interaction_split(&z, CutPartition::new(4, 2).unwrap()).unwrap();
        assert_eq!(s.interaction.bonds()[0].0, 1);
        assert_eq!(s.interaction.bonds()[0].1, *z.term(1));
    }

    #[test]
    fn patch_basics() {
        let h = xy(6);
        let cut = CutPartition::new(6, 3).unwrap();
        assert!(distance_to_identity(&patch_unitary(&h, cut, 0.0).unwrap()) < 1e-14);

        let t = 0.8;
        let v = patch_unitary(&h, cut, t).unwrap();
        assert!(distance_to_identity(&(v.adjoint() * &v)) < 1e-9);
        let split = interaction_split(&h, cut).unwrap();
        let lhs = dense_exp(h.as_bond_sum(), 6, t);
        let rhs = dense_exp(&split.left.plus(&split.right), 6, t) * &v;
        assert!((lhs - rhs).camax() < 1e-9);

        let decoupled = LocalHamiltonian::from_terms(6, (0..5).map(|j| if j == 2 { DMatrix::zeros(4, 4) } else { h.term(j).clone() }).collect()).unwrap();
        assert!(distance_to_identity(&patch_unitary(&decoupled, cut, 1.3).unwrap()) < 1e-12);
    }

    #[test]
    fn generator_matches_finite_difference() {
        let h = xy(5).shifted_by(&[0.3, 0.0, -0.2, 0.5]).unwrap();
        let cut = CutPartition::new(5, 2).unwrap();
        let (t, dt) = (0.5, 1e-4);
        let fd = (patch_unitary(&h, cut, t + dt).unwrap() - patch_unitary(&h, cut, t - dt).unwrap()) / C::new(2.0 * dt, 0.0);
        let l = patch_generator(&h, cut, t, 200).unwrap();
        let vl = patch_unitary(&h, cut, t).unwrap() * l;
        assert!((fd - vl).camax() < 1e-5);
    }

    #[test]
    fn restricted_patch_support_and_limits() {
        let h = xy(8);
        let cut = CutPartition::new(8, 4).unwrap();
        assert!(distance_to_identity(&restricted_patch(&h, cut, 0.0, 2).unwrap().matrix) < 1e-14);

        let full = patch_unitary(&h, cut, 0.6).unwrap();
        let top = restricted_patch(&h, cut, 0.6, 4).unwrap();
        assert!((top.widened(0, 7) - &full).camax() < 1e-10);

        // oracle: the same formula with full-chain matrices and no windowing
        let (lo, hi) = hierarchy_window(8, cut, 2);
        let inside = h.as_bond_sum().inside(lo, hi);
        let oracle = dense_exp(&inside.without(cut.bond()), 8, -0.4) * dense_exp(&inside, 8, 0.4);
        let local = restricted_patch(&h, cut, 0.4, 2).unwrap();
        assert_eq!((local.lo, local.hi), (lo, hi));
        assert!((local.widened(0, 7) - oracle).camax() < 1e-9);

        assert!(restricted_patch(&h, cut, 0.4, 0).is_err());
        assert!(restricted_patch(&h, cut, 0.4, 5).is_err());
    }

    #[test]
    fn hierarchy_at_time_zero_and_reassembly() {
        let h = xy(8);
        let cut = CutPartition::new(8, 4).unwrap();
        let r0 = w_hierarchy(&h, cut, 0.0, 4).unwrap();
        assert!(r0.rows.iter().all(|r| r.w_deviation < 1e-12));
        let r = w_hierarchy(&h, cut, 0.5, 4).unwrap();
        assert!(r.reassembly_error < 1e-8);
        assert!((r.m_norm - 4.0).abs() < 1e-12);
        assert!(r.rows.iter().all(|row| row.w_deviation <= 2.0 + 1e-12));
    }

    #[test]
    fn weyl_chain_holds() {
        let h = xy(8);
        let cut = CutPartition::new(8, 4).unwrap();
        for step in weyl_chain(&h, cut, 0.7, 4).unwrap() {
            assert!(step.report.holds);
        }
    }
}
