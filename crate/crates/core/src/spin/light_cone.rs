use nalgebra::DMatrix;

use super::hamiltonian::{LocalHamiltonian, MAX_DENSE_SPINS};
use super::hierarchy::LocalUnitary;
use super::pauli::{pauli_left_mul, pauli_right_mul, Pauli};
use crate::error::{Error, Result};
use crate::linalg::{matmul, operator_norm, Propagator};
use crate::num::{lit, Real, C};
use crate::stats::{fit_line, fit_plane};

/// `τ_t(O) = e^{-itH} O e^{itH}` for a single-site Pauli `O`, given `U = e^{itH}`.
fn heisenberg_pauli<T: Real>(u: &DMatrix<C<T>>, p: Pauli, site: usize, n: usize) -> DMatrix<C<T>> {
    matmul(&u.adjoint(), &pauli_left_mul(p, site, n, u))
}

/// `[A, P_site]`.
fn pauli_commutator<T: Real>(a: &DMatrix<C<T>>, p: Pauli, site: usize, n: usize) -> DMatrix<C<T>> {
    pauli_right_mul(p, site, n, a) - pauli_left_mul(p, site, n, a)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LightconeRow<T> {
    pub t: T,
    pub d: usize,
    pub comm_norm: T,
}

/// `‖[τ_t(O_a), O'_b]‖` for every distance `d = |a − b|`, maximized over the
/// (at most two) sites `b` at that distance.
pub fn lightcone_probe<T: Real>(
    h: &LocalHamiltonian<T>,
    site: usize,
    t_grid: &[T],
    observable: Pauli,
    probe: Pauli,
) -> Result<Vec<LightconeRow<T>>> {
    let n = h.n();
    check_dense(h)?;
    check_site(n, site)?;
    let prop = Propagator::new(&h.dense()?)?;
    let d_max = site.max(n - 1 - site);
    let mut rows = Vec::with_capacity(t_grid.len() * (d_max + 1));
    for &t in t_grid {
        let tau = heisenberg_pauli(&prop.unitary(t), observable, site, n);
        for d in 0..=d_max {
            let mut best = T::zero();
            for b in [site.checked_sub(d), Some(site + d).filter(|&b| b < n)].into_iter().flatten() {
                best = best.max(operator_norm(&pauli_commutator(&tau, probe, b, n))?);
                if d == 0 {
                    break;
                }
            }
            rows.push(LightconeRow { t, d, comm_norm: best });
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuasilocalRow<T> {
    pub t: T,
    pub k: usize,
    pub trunc_norm: T,
}

/// `trunc ≈ c·e^{κ|t| − v k}`; `kappa` is only identified when several times
/// were sampled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit<T> {
    pub c: T,
    pub kappa: Option<T>,
    pub v: T,
    pub r_squared: T,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasilocalityReport<T> {
    pub site: usize,
    pub rows: Vec<QuasilocalRow<T>>,
    /// One fit per sampled time, in time order.
    pub per_time: Vec<(T, DecayFit<T>)>,
    /// Fit over all rows; `None` when fewer than two rows are above the
    /// exactness floor (e.g. `t = 0` only).
    pub pooled: Option<DecayFit<T>>,
}

/// Truncation error `‖τ_t^H(σ^z_j) − τ_t^{H_{Λ_k(j)}}(σ^z_j)‖` where
/// `Λ_k(j)` holds the sites within distance `k` of `j`.
pub fn quasilocality_decay<T: Real>(
    h: &LocalHamiltonian<T>,
    site: usize,
    t_grid: &[T],
    k_list: &[usize],
) -> Result<QuasilocalityReport<T>> {
    let n = h.n();
    check_dense(h)?;
    check_site(n, site)?;
    if t_grid.is_empty() || k_list.is_empty() {
        return Err(Error::InvalidArgument("empty time grid or distance list".into()));
    }
    let prop = Propagator::new(&h.dense()?)?;
    let mut rows = Vec::new();
    for &t in t_grid {
        let full = heisenberg_pauli(&prop.unitary(t), Pauli::Z, site, n);
        for &k in k_list {
            let (lo, hi) = (site.saturating_sub(k), (site + k).min(n - 1));
            let u = h.as_bond_sum().inside(lo, hi).exp_on(lo, hi, t)?;
            let local = heisenberg_pauli(&u, Pauli::Z, site - lo, hi + 1 - lo);
            let local = LocalUnitary { lo, hi, matrix: local }.widened(0, n - 1);
            rows.push(QuasilocalRow { t, k, trunc_norm: operator_norm(&(full.clone() - local))? });
        }
    }
    let mut per_time = Vec::new();
    for &t in t_grid {
        let at_t: Vec<_> = rows.iter().filter(|r| r.t == t).copied().collect();
        if let Ok(fit) = decay_fit(&at_t) {
            per_time.push((t, fit));
        }
    }
    let pooled = decay_fit(&rows).ok();
    Ok(QuasilocalityReport { site, rows, per_time, pooled })
}

/// Log-linear regression of `ln trunc` on `k` (and `|t|` when several times
/// are present). Rows at or below `1e-14` are exact and left out.
pub fn decay_fit<T: Real>(rows: &[QuasilocalRow<T>]) -> Result<DecayFit<T>> {
    let floor = lit::<T>(1e-14);
    let used: Vec<_> = rows.iter().filter(|r| r.trunc_norm > floor).collect();
    let ks: Vec<T> = used.iter().map(|r| lit(r.k as f64)).collect();
    let ts: Vec<T> = used.iter().map(|r| r.t.abs()).collect();
    let logs: Vec<T> = used.iter().map(|r| r.trunc_norm.ln()).collect();
    let several_times = ts.iter().any(|&t| t != ts[0]);
    if several_times {
        let plane = fit_plane(&ts, &ks, &logs)?;
        let [c0, kappa, slope] = plane.coefficients;
        Ok(DecayFit { c: c0.exp(), kappa: Some(kappa), v: -slope, r_squared: plane.r_squared, points: used.len() })
    } else {
        if used.len() < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: used.len() });
        }
        let line = fit_line(&ks, &logs)?;
        Ok(DecayFit { c: line.intercept.exp(), kappa: None, v: -line.slope, r_squared: line.r_squared, points: used.len() })
    }
}

fn check_dense<T: Real>(h: &LocalHamiltonian<T>) -> Result<()> {
    if h.n() > MAX_DENSE_SPINS {
        return Err(Error::TooLarge { what: "Heisenberg-picture operator", n: h.n(), max: MAX_DENSE_SPINS });
    }
    Ok(())
}

fn check_site(n: usize, site: usize) -> Result<()> {
    if site >= n {
        return Err(Error::InvalidArgument(format!("site {site} outside chain of {n} spins")));
    }
    Ok(())
}
