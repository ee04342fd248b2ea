use super::evolution::EntropyCurve;
use super::state::SchmidtSpectrum;
use crate::error::{Error, Result};
use crate::num::{lit, Real};
use crate::stats::{fit_line, fit_plane};

/// Coefficients at or below this weight carry no information for the tail fit.
const TAIL_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit<T> {
    pub t: T,
    /// Decay rate in `log₂ s_j ≈ intercept − v·j`.
    pub v: T,
    pub intercept: T,
    /// `intercept / |t|`; infinite at `t = 0`.
    pub kappa: T,
    pub r_squared: T,
    pub knee: usize,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailFitReport<T> {
    pub per_time: Vec<TailFit<T>>,
    /// Times whose tail had fewer than three usable coefficients.
    pub flagged: Vec<T>,
    /// Joint fit `log₂ s_j ≈ c + κ|t| − v·j` over all accepted tails.
    pub pooled: Option<PooledTail<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PooledTail<T> {
    pub c: T,
    pub kappa: T,
    pub v: T,
    pub r_squared: T,
}

/// Exponential-in-`j` fit of the Schmidt tails: the tail starts at the knee,
/// the first `j` with `s_j < s_0 / 10`.
pub fn schmidt_tail_fit<T: Real>(spectra: &[(T, SchmidtSpectrum<T>)]) -> Result<TailFitReport<T>> {
    if spectra.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: spectra.len() });
    }
    if let Some((_, s)) = spectra.iter().find(|(_, s)| s.coefficients().len() < 8) {
        return Err(Error::TooFewPoints { needed: 8, got: s.coefficients().len() });
    }
    let cutoff = lit::<T>(TAIL_CUTOFF);
    let ten = lit::<T>(10.0);
    let mut per_time = Vec::new();
    let mut flagged = Vec::new();
    let (mut pt, mut pj, mut plog) = (Vec::new(), Vec::new(), Vec::new());
    for (t, s) in spectra {
        let c = s.coefficients();
        let knee = c.iter().position(|&x| x < c[0] / ten).unwrap_or(c.len());
        let tail: Vec<(T, T)> = (knee..c.len())
            .filter(|&j| c[j] > cutoff)
            .map(|j| (lit::<T>(j as f64), c[j].log2()))
            .collect();
        if tail.len() < 3 {
            flagged.push(*t);
            continue;
        }
        let (js, logs): (Vec<T>, Vec<T>) = tail.iter().copied().unzip();
        let line = fit_line(&js, &logs)?;
        per_time.push(TailFit {
            t: *t,
            v: -line.slope,
            intercept: line.intercept,
            kappa: line.intercept / t.abs(),
            r_squared: line.r_squared,
            knee,
            points: tail.len(),
        });
        pt.extend(std::iter::repeat_n(t.abs(), js.len()));
        pj.extend(js);
        plog.extend(logs);
    }
    let pooled = if per_time.len() >= 2 && pt.iter().any(|&x| x != pt[0]) {
        fit_plane(&pt, &pj, &plog).ok().map(|p| {
            let [c, kappa, slope] = p.coefficients;
            PooledTail { c, kappa, v: -slope, r_squared: p.r_squared }
        })
    } else {
        None
    };
    Ok(TailFitReport { per_time, flagged, pooled })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeFit<T> {
    pub c0: T,
    pub c1: T,
    pub r_squared: T,
    /// Largest `S(t) − (c0 + c1|t|)` over the fitted points; positive values
    /// are excursions above the envelope.
    pub max_excess: T,
    pub points: usize,
}

/// Line `c0 + c1|t|` through the running maximum of `S` at cut `m`, using only
/// times with `|t|·‖h‖ ≤ n/4` (finite chains revive later).
pub fn entropy_envelope_fit<T: Real>(curve: &EntropyCurve<T>, m: usize) -> Result<EnvelopeFit<T>> {
    let horizon = lit::<T>(curve.n as f64 / 4.0);
    let mut series: Vec<(T, T)> = curve
        .series(m)
        .into_iter()
        .map(|(t, s)| (t.abs(), s))
        .filter(|(t, _)| *t * curve.h_norm <= horizon)
        .collect();
    series.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite times"));
    envelope_of(&series)
}

/// Envelope fit of an explicit `(|t|, S)` series sorted by time.
pub fn envelope_of<T: Real>(series: &[(T, T)]) -> Result<EnvelopeFit<T>> {
    if series.len() < 5 {
        return Err(Error::TooFewPoints { needed: 5, got: series.len() });
    }
    let ts: Vec<T> = series.iter().map(|p| p.0).collect();
    let mut running = T::zero();
    let peaks: Vec<T> = series
        .iter()
        .map(|p| {
            running = running.max(p.1);
            running
        })
        .collect();
    let line = fit_line(&ts, &peaks)?;
    let max_excess = series
        .iter()
        .map(|&(t, s)| s - line.eval(t))
        .fold(T::min_value().expect("bounded scalar"), |a, b| a.max(b));
    Ok(EnvelopeFit { c0: line.intercept, c1: line.slope, r_squared: line.r_squared, max_excess, points: series.len() })
}
