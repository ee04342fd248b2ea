use nalgebra::DVector;
use rayon::prelude::*;

use super::hamiltonian::LocalHamiltonian;
use super::state::{schmidt_spectrum, von_neumann_entropy, CutPartition, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{krylov_evolve, EvolveStrategy, KrylovOptions, Propagator, DENSE_EVOLVE_MAX_DIM};
use crate::num::{Real, C};

/// `e^{itH}` acting on chain states; keeps the eigendecomposition when the
/// chain is small enough for the dense path.
pub struct ChainEvolver<'a, T: Real> {
    h: &'a LocalHamiltonian<T>,
    dense: Option<Propagator<T>>,
    opts: KrylovOptions<T>,
}

impl<'a, T: Real> ChainEvolver<'a, T> {
    pub fn new(h: &'a LocalHamiltonian<T>, strategy: EvolveStrategy) -> Result<Self> {
        let dense = match strategy {
            EvolveStrategy::Auto => h.dim() <= DENSE_EVOLVE_MAX_DIM,
            EvolveStrategy::Dense => true,
            EvolveStrategy::Krylov => false,
        };
        let dense = if dense { Some(Propagator::new(&h.dense()?)?) } else { None };
        Ok(Self { h, dense, opts: KrylovOptions::default() })
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    /// `e^{itH} v`.
    pub fn step(&self, t: T, v: &DVector<C<T>>) -> Result<DVector<C<T>>> {
        match &self.dense {
            Some(p) => p.apply(t, v),
            None => krylov_evolve(self.h, t, v, &self.opts),
        }
    }
}

/// `e^{itH}|0⟩`.
pub fn evolve<T: Real>(h: &LocalHamiltonian<T>, t: T) -> Result<StateVector<T>> {
    evolve_with(h, t, EvolveStrategy::Auto)
}

pub fn evolve_with<T: Real>(h: &LocalHamiltonian<T>, t: T, strategy: EvolveStrategy) -> Result<StateVector<T>> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument("evolution time must be finite".into()));
    }
    let start = StateVector::all_up(h.n());
    let out = ChainEvolver::new(h, strategy)?.step(t, start.amplitudes())?;
    StateVector::normalized(h.n(), out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyRow<T> {
    pub t: T,
    pub m: usize,
    pub entropy: T,
    pub s_max: T,
    pub eff_rank: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyCurve<T> {
    pub n: usize,
    pub h_norm: T,
    pub rows: Vec<EntropyRow<T>>,
}

impl<T: Real> EntropyCurve<T> {
    /// `(t, S)` pairs at one cut, in time order.
    pub fn series(&self, m: usize) -> Vec<(T, T)> {
        self.rows.iter().filter(|r| r.m == m).map(|r| (r.t, r.entropy)).collect()
    }

    /// `(m, S)` pairs at one time.
    pub fn profile_at(&self, t: T) -> Vec<(usize, T)> {
        self.rows.iter().filter(|r| r.t == t).map(|r| (r.m, r.entropy)).collect()
    }
}

/// Entropies on every `(t, m)` of the grids. Times are visited in increasing
/// order and the state is propagated from one grid point to the next.
pub fn entropy_profile<T: Real>(h: &LocalHamiltonian<T>, t_grid: &[T], m_list: &[usize]) -> Result<EntropyCurve<T>> {
    entropy_profile_with(h, t_grid, m_list, EvolveStrategy::Auto)
}

pub fn entropy_profile_with<T: Real>(
    h: &LocalHamiltonian<T>,
    t_grid: &[T],
    m_list: &[usize],
    strategy: EvolveStrategy,
) -> Result<EntropyCurve<T>> {
    if t_grid.is_empty() || m_list.is_empty() {
        return Err(Error::InvalidArgument("empty time grid or cut list".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("evolution time must be finite".into()));
    }
    let cuts = {
        let mut ms = m_list.to_vec();
        ms.sort_unstable();
        ms.dedup();
        ms.into_iter().map(|m| CutPartition::new(h.n(), m)).collect::<Result<Vec<_>>>()?
    };
    let mut times = t_grid.to_vec();
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    times.dedup();

    let evolver = ChainEvolver::new(h, strategy)?;
    let start = StateVector::<T>::all_up(h.n());
    let mut rows = Vec::with_capacity(times.len() * cuts.len());
    let mut prev_t = T::zero();
    let mut state = start.amplitudes().clone();
    for &t in &times {
        state = if evolver.is_dense() {
            evolver.step(t, start.amplitudes())?
        } else {
            evolver.step(t - prev_t, &state)?
        };
        prev_t = t;
        let psi = StateVector::normalized(h.n(), state.clone())?;
        let cut_rows = cuts
            .par_iter()
            .map(|&cut| {
                let s = schmidt_spectrum(&psi, cut)?;
                Ok(EntropyRow {
                    t,
                    m: cut.m(),
                    entropy: von_neumann_entropy(&s),
                    s_max: s.largest(),
                    eff_rank: s.effective_rank(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(cut_rows);
    }
    Ok(EntropyCurve { n: h.n(), h_norm: h.h_norm(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::hamiltonian::Preset;
    use crate::spin::state::{schmidt_spectrum, CutPartition};

    #[test]
    fn time_zero_is_initial_state() {
        let h = LocalHamiltonian::<f64>::preset(Preset::XyCross, 5).unwrap();
        let psi = evolve(&h, 0.0).unwrap();
        assert!((psi.amplitudes() - StateVector::all_up(5).amplitudes()).camax() < 1e-14);
    }

    #[test]
    fn zfield_keeps_product_state() {
        let h = LocalHamiltonian::<f64>::z_field(6).unwrap();
        for t in [0.3, 1.0, 7.5] {
            let psi = evolve(&h, t).unwrap();
            let s = schmidt_spectrum(&psi, CutPartition::new(6, 3).unwrap()).unwrap();
            assert!((s.coefficients()[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn krylov_and_dense_agree_on_chain() {
        let h = LocalHamiltonian::<f64>::preset(Preset::XyCross, 8).unwrap();
        let a = evolve_with(&h, 1.0, EvolveStrategy::Dense).unwrap();
        let b = evolve_with(&h, 1.0, EvolveStrategy::Krylov).unwrap();
        assert!((a.amplitudes() - b.amplitudes()).camax() < 1e-8);
        assert!((a.norm() - 1.0).abs() < 1e-10);
        let s = schmidt_spectrum(&a, CutPartition::new(8, 4).unwrap()).unwrap();
        assert!(von_neumann_entropy(&s) > 0.0);
    }

    #[test]
    fn incremental_profile_matches_direct() {
        let h = LocalHamiltonian::<f64>::preset(Preset::XyCross, 9).unwrap();
        let times = [0.5, 0.0, 1.25];
        let curve = entropy_profile_with(&h, &times, &[4, 2], EvolveStrategy::Krylov).unwrap();
        assert_eq!(curve.rows.len(), 6);
        assert_eq!((curve.rows[0].t, curve.rows[0].m), (0.0, 2));
        assert_eq!((curve.rows[5].t, curve.rows[5].m), (1.25, 4));
        for row in &curve.rows {
            let psi = evolve_with(&h, row.t, EvolveStrategy::Dense).unwrap();
            let s = schmidt_spectrum(&psi, CutPartition::new(9, row.m).unwrap()).unwrap();
            assert!((von_neumann_entropy(&s) - row.entropy).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let h = LocalHamiltonian::<f64>::preset(Preset::Xx, 4).unwrap();
        assert!(entropy_profile(&h, &[], &[1]).is_err());
        assert!(entropy_profile(&h, &[0.1], &[]).is_err());
        assert!(entropy_profile(&h, &[0.1], &[4]).is_err());
        assert!(evolve(&h, f64::NAN).is_err());
    }
}
