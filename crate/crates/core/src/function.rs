//! Integrand handles: a real-argument, complex-valued map with a declared
//! domain and regularity.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A real interval [a, b] with a < b. `b` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || a.is_nan() || a.is_infinite() {
            return Err(Error::domain(format!("invalid interval [{a}, {b}]: need a < b")));
        }
        Ok(Interval { a, b })
    }

    pub fn half_line(a: f64) -> Self {
        Interval { a, b: f64::INFINITY }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }
}

/// Caller-asserted smoothness, checked against operator requirements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    Integrable,
    ContinuousN(u32),
    Smooth,
}

impl Regularity {
    /// True when the function has at least `n` continuous derivatives.
    pub fn at_least(self, n: u32) -> bool {
        match self {
            Regularity::Integrable => false,
            Regularity::ContinuousN(k) => k >= n,
            Regularity::Smooth => true,
        }
    }
}

type Evaluator = dyn Fn(f64) -> Complex64 + Send + Sync;

/// Shared, immutable integrand. Evaluators must be re-entrant: operators
/// may call them from several threads.
#[derive(Clone)]
pub struct FunctionHandle {
    eval: Arc<Evaluator>,
    domain: Interval,
    regularity: Regularity,
}

impl FunctionHandle {
    pub fn new<F>(domain: Interval, regularity: Regularity, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        FunctionHandle { eval: Arc::new(f), domain, regularity }
    }

    pub fn from_real<F>(domain: Interval, regularity: Regularity, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(domain, regularity, move |t| Complex64::new(f(t), 0.0))
    }

    pub fn constant(domain: Interval, value: Complex64) -> Self {
        Self::new(domain, Regularity::Smooth, move |_| value)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Complex64 {
        (self.eval)(t)
    }

    /// Evaluates and rejects non-finite values.
    pub fn try_eval(&self, t: f64) -> Result<Complex64> {
        let v = self.eval(t);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: t })
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn with_domain(&self, domain: Interval) -> Self {
        FunctionHandle { domain, ..self.clone() }
    }

    /// Pointwise product of two handles on the intersection of domains.
    pub fn product(&self, other: &FunctionHandle) -> Result<Self> {
        let domain = Interval::new(
            self.domain.a.max(other.domain.a),
            self.domain.b.min(other.domain.b),
        )?;
        let regularity = match (self.regularity, other.regularity) {
            (Regularity::Smooth, r) | (r, Regularity::Smooth) => r,
            (Regularity::ContinuousN(x), Regularity::ContinuousN(y)) => Regularity::ContinuousN(x.min(y)),
            _ => Regularity::Integrable,
        };
        let (f, g) = (self.eval.clone(), other.eval.clone());
        Ok(FunctionHandle { eval: Arc::new(move |t| f(t) * g(t)), domain, regularity })
    }

    /// u ↦ factor(u)·f(u), keeping domain and regularity.
    pub fn multiplied_by<G>(&self, factor: G) -> Self
    where
        G: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        let f = self.eval.clone();
        FunctionHandle { eval: Arc::new(move |t| factor(t) * f(t)), ..self.clone() }
    }

    /// u ↦ f(a + b − u), the reflection of f across the midpoint of [a, b].
    pub fn reflected(&self, a: f64, b: f64) -> Self {
        let f = self.eval.clone();
        FunctionHandle {
            eval: Arc::new(move |t| f(a + b - t)),
            domain: Interval { a: a + b - self.domain.b.min(b), b: a + b - self.domain.a.max(a) },
            regularity: self.regularity,
        }
    }
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("domain", &self.domain)
            .field("regularity", &self.regularity)
            .finish_non_exhaustive()
    }
}
