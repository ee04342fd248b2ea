use crate::error::{Error, Result};
use crate::num::{is_nan, lit, to_f64, Real, C};

/// Piecewise-constant real function on the circle `(0, 2π]`: value
/// `values[r]` on `(breakpoints[r], breakpoints[r + 1]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseConstant<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

fn breakpoint_tol<T: Real>() -> T {
    lit::<T>(1e-12) * T::two_pi()
}

impl<T: Real> PiecewiseConstant<T> {
    /// `breakpoints` must run strictly increasing from `0` to `2π`;
    /// `values.len() == breakpoints.len() - 1`.
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                values.len()
            )));
        }
        let eps = breakpoint_tol::<T>();
        if breakpoints[0].abs() > eps || (breakpoints[breakpoints.len() - 1] - T::two_pi()).abs() > eps {
            return Err(Error::InvalidArgument("breakpoints must start at 0 and end at 2π".into()));
        }
        if breakpoints.windows(2).any(|w| is_nan(w[1]) || w[1] <= w[0]) {
            return Err(Error::InvalidArgument("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("values must be finite".into()));
        }
        let mut breakpoints = breakpoints;
        breakpoints[0] = T::zero();
        *breakpoints.last_mut().unwrap() = T::two_pi();
        Ok(Self { breakpoints, values })
    }

    pub fn constant(value: T) -> Self {
        Self { breakpoints: vec![T::zero(), T::two_pi()], values: vec![value] }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn pieces(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.breakpoints.windows(2).zip(&self.values).map(|(w, &v)| (w[0], w[1], v))
    }

    /// Value at `x`, reduced onto `(0, 2π]`.
    pub fn eval(&self, x: T) -> T {
        let two_pi = T::two_pi();
        let mut y = x % two_pi;
        if y <= T::zero() {
            y += two_pi;
        }
        let r = self.breakpoints[1..].partition_point(|&b| b < y);
        self.values[r.min(self.values.len() - 1)]
    }

    /// `x ↦ f(x)/|f(x)|`, with zero mapped to zero.
    pub fn sign(&self) -> Self {
        let values = self
            .values
            .iter()
            .map(|&v| if v > T::zero() { T::one() } else if v < T::zero() { -T::one() } else { T::zero() })
            .collect();
        Self { breakpoints: self.breakpoints.clone(), values }
    }

    /// Points of `(0, 2π]` where the function jumps, including `2π` when the
    /// first and last pieces differ.
    pub fn jump_points(&self) -> Vec<T> {
        let mut out: Vec<T> = self
            .values
            .windows(2)
            .zip(&self.breakpoints[1..])
            .filter(|(v, _)| v[0] != v[1])
            .map(|(_, &b)| b)
            .collect();
        if self.values[0] != self.values[self.values.len() - 1] {
            out.push(T::two_pi());
        }
        out
    }
}

/// Integration plan for Fourier integrals over `(0, 2π]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec<T> {
    breakpoints: Vec<T>,
    nodes_per_subinterval: usize,
    tolerance: T,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(breakpoints: Vec<T>, nodes_per_subinterval: usize, tolerance: T) -> Result<Self> {
        if breakpoints.windows(2).any(|w| is_nan(w[1]) || w[1] <= w[0]) {
            return Err(Error::InvalidArgument("quadrature breakpoints must be strictly increasing".into()));
        }
        let eps = breakpoint_tol::<T>();
        if breakpoints.iter().any(|&b| b <= T::zero() || b > T::two_pi() + eps) {
            return Err(Error::InvalidArgument("quadrature breakpoints must lie in (0, 2π]".into()));
        }
        if nodes_per_subinterval == 0 {
            return Err(Error::InvalidArgument("nodes per subinterval must be positive".into()));
        }
        if is_nan(tolerance) || tolerance <= T::zero() {
            return Err(Error::InvalidArgument("quadrature tolerance must be positive".into()));
        }
        Ok(Self { breakpoints, nodes_per_subinterval, tolerance })
    }

    /// Breakpoints taken from the function itself.
    pub fn for_function(f: &PiecewiseConstant<T>) -> Self {
        Self { breakpoints: f.breakpoints()[1..].to_vec(), nodes_per_subinterval: 1, tolerance: lit(1e-14) }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn nodes_per_subinterval(&self) -> usize {
        self.nodes_per_subinterval
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }
}

/// `(1/2π) ∫_0^{2π} e^{-ilx} f(x) dx`, integrated in closed form piece by
/// piece. Every jump point of `f` must be listed in `q`. Components at the
/// level of rounding noise (`32·ε·Σ|f_r|`) are returned as exact zeros.
pub fn fourier_coefficient<T: Real>(f: &PiecewiseConstant<T>, l: i64, q: &QuadratureSpec<T>) -> Result<C<T>> {
    let eps = breakpoint_tol::<T>();
    for jump in f.jump_points() {
        if !q.breakpoints().iter().any(|&b| (b - jump).abs() <= eps) {
            return Err(Error::MissingBreakpoint { point: to_f64(jump) });
        }
    }
    // components below the rounding level of the piece sums are exact zeros
    let noise = f.values().iter().fold(T::zero(), |s, v| s + v.abs()) * T::default_epsilon() * lit(32.0);
    let snap = |x: T| if x.abs() <= noise { T::zero() } else { x };
    let two_pi = T::two_pi();
    let mut acc = C::new(T::zero(), T::zero());
    if l == 0 {
        for (a, b, v) in f.pieces() {
            acc.re += v * (b - a);
        }
        return Ok(C::new(snap(acc.re / two_pi), T::zero()));
    }
    let lf: T = lit(l as f64);
    for (a, b, v) in f.pieces() {
        let (ta, tb) = (lf * a, lf * b);
        // e^{-i l a} - e^{-i l b}
        let re = ta.cos() - tb.cos();
        let im = tb.sin() - ta.sin();
        acc.re += v * re;
        acc.im += v * im;
    }
    // divide by 2π i l
    let denom = two_pi * lf;
    Ok(C::new(snap(acc.im / denom), snap(-acc.re / denom)))
}
