use crate::error::{Error, Result};
use crate::linalg::PiecewiseConstant;
use crate::num::{to_f64, Real};

/// Dispersion symbol `φ` on `(0, 2π]`: piecewise constant and nowhere zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseSymbol<T> {
    f: PiecewiseConstant<T>,
}

impl<T: Real> PiecewiseSymbol<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| **v == T::zero()) {
            return Err(Error::InvalidArgument(format!("symbol value {} must be nonzero", to_f64(*v))));
        }
        Ok(Self { f: PiecewiseConstant::new(breakpoints, values)? })
    }

    pub fn constant(value: T) -> Result<Self> {
        Self::new(vec![T::zero(), T::two_pi()], vec![value])
    }

    /// `+1` on `(0, π/2]` and `(3π/2, 2π]`, `−1` on `(π/2, 3π/2]`.
    pub fn paper() -> Self {
        let (one, half_pi, pi) = (T::one(), T::frac_pi_2(), T::pi());
        Self::new(vec![T::zero(), half_pi, pi + half_pi, T::two_pi()], vec![one, -one, one]).expect("valid preset")
    }

    /// Half filling with a single pair of jumps: `+1` on `(0, π]`, `−1` on `(π, 2π]`.
    pub fn half_filling() -> Self {
        let one = T::one();
        Self::new(vec![T::zero(), T::pi(), T::two_pi()], vec![one, -one]).expect("valid preset")
    }

    pub fn eval(&self, x: T) -> T {
        self.f.eval(x)
    }

    pub fn breakpoints(&self) -> &[T] {
        self.f.breakpoints()
    }

    pub fn values(&self) -> &[T] {
        self.f.values()
    }

    pub fn as_piecewise(&self) -> &PiecewiseConstant<T> {
        &self.f
    }

    /// `φ/|φ|`, the occupation pattern of the ground state.
    pub fn sign(&self) -> PiecewiseConstant<T> {
        self.f.sign()
    }

    pub fn jump_points(&self) -> Vec<T> {
        self.f.jump_points()
    }

    /// `φ(x) = φ(2π − x)` away from the breakpoints.
    pub fn is_even(&self) -> bool {
        let two_pi = T::two_pi();
        let half = T::one() / (T::one() + T::one());
        self.f.pieces().all(|(a, b, v)| {
            let mid = (a + b) * half;
            self.f.eval(two_pi - mid) == v
        })
    }
}
