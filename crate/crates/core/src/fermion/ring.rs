use super::couplings::CouplingSequence;
use super::symbol::PiecewiseSymbol;
use super::toeplitz::correlation_entries;
use crate::error::{Error, Result};
use crate::num::{lit, to_f64, tol, Real};

/// Energies below this magnitude count as zero modes.
const ZERO_MODE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Dispersion<T> {
    /// `ε_k` for `k = 0..n`.
    pub energies: Vec<T>,
    pub min_abs: T,
}

impl<T: Real> Dispersion<T> {
    /// Some `ε_k` vanishes, so the ground state is degenerate.
    pub fn gapless(&self) -> bool {
        self.min_abs < lit(ZERO_MODE)
    }

    pub fn zero_modes(&self) -> usize {
        self.energies.iter().filter(|e| e.abs() < lit(ZERO_MODE)).count()
    }

    /// `ε_k / |ε_k|`, zero for zero modes (half occupation).
    pub fn signs(&self) -> Vec<T> {
        self.energies
            .iter()
            .map(|&e| if e.abs() < lit(ZERO_MODE) { T::zero() } else { e.signum() })
            .collect()
    }
}

/// `cos(2π r / n)` and `sin(2π r / n)` for `r = 0..n`; phases are looked up by
/// the exact residue of their integer argument.
fn phase_table<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let step = T::two_pi() / lit(n as f64);
    (0..n)
        .map(|r| {
            let x = step * lit(r as f64);
            (x.cos(), x.sin())
        })
        .unzip()
}

/// Eigenvalues `ε_k = Σ_j c_j e^{2πijk/n}` of the circulant hopping matrix on
/// a ring of `n` sites, `c_j = M_{min(j, n−j)}`.
pub fn dispersion<T: Real>(m: &CouplingSequence<T>, n: usize) -> Result<Dispersion<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("ring needs at least one site".into()));
    }
    let row = m.ring_row(n);
    let (cos, sin) = phase_table::<T>(n);
    let mut energies = Vec::with_capacity(n);
    for k in 0..n {
        let (mut re, mut im) = (T::zero(), T::zero());
        for (j, &c) in row.iter().enumerate() {
            let r = (j * k) % n;
            re += c * cos[r];
            im += c * sin[r];
        }
        if im.abs() > tol::<T>(1e-10) {
            return Err(Error::RealnessViolation { index: k as i64, imag: to_f64(im) });
        }
        energies.push(re);
    }
    let min_abs = energies.iter().fold(T::max_value().expect("bounded"), |a, e| a.min(e.abs()));
    Ok(Dispersion { energies, min_abs })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingCheck<T> {
    pub n: usize,
    pub m: usize,
    /// `max_{l<m} |t_l^{(n)} − t_l|`.
    pub max_deviation: T,
    pub zero_modes: usize,
}

/// Finite-ring correlations `t_l^{(n)} = (1/n) Σ_k e^{−2πilk/n} ε_k/|ε_k|`
/// against the continuum values of the symbol, for `l < m`. Zero modes enter
/// with weight zero and are counted in the report.
pub fn finite_ring_crosscheck<T: Real>(
    symbol: &PiecewiseSymbol<T>,
    m_seq: &CouplingSequence<T>,
    n: usize,
    m: usize,
) -> Result<RingCheck<T>> {
    if m == 0 || n < 4 * m {
        return Err(Error::InvalidArgument(format!("ring of {n} sites too small for block {m} (need n >= 4m)")));
    }
    let disp = dispersion(m_seq, n)?;
    let signs = disp.signs();
    let continuum = correlation_entries(symbol, m)?;
    let (cos, sin) = phase_table::<T>(n);
    let inv_n = T::one() / lit(n as f64);
    let mut max_deviation = T::zero();
    for (l, &exact) in continuum.iter().enumerate() {
        let (mut re, mut im) = (T::zero(), T::zero());
        for (k, &s) in signs.iter().enumerate() {
            let r = (l * k) % n;
            re += s * cos[r];
            im -= s * sin[r];
        }
        if im.abs() * inv_n > tol::<T>(1e-10) {
            return Err(Error::RealnessViolation { index: l as i64, imag: to_f64(im * inv_n) });
        }
        max_deviation = max_deviation.max((re * inv_n - exact).abs());
    }
    Ok(RingCheck { n, m, max_deviation, zero_modes: disp.zero_modes() })
}
