use num_complex::Complex64;

/// Which identity or inequality a [`VerificationRecord`] certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Inversion,
    LemmaComposition,
    TaylorTelescope,
    Ineq1,
    Ineq2,
    Ineq3,
    /// (d/dt + β) applied to the order-α series equals the order-(α−1) series.
    ProportionalStep,
}

impl TheoremId {
    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::Inversion => "inversion",
            TheoremId::LemmaComposition => "lemma",
            TheoremId::TaylorTelescope => "taylor",
            TheoremId::Ineq1 => "ineq1",
            TheoremId::Ineq2 => "ineq2",
            TheoremId::Ineq3 => "ineq3",
            TheoremId::ProportionalStep => "proportional-step",
        }
    }

    pub fn is_inequality(&self) -> bool {
        matches!(self, TheoremId::Ineq1 | TheoremId::Ineq2 | TheoremId::Ineq3)
    }
}

/// Sign of the boundary correction in (1 − I∘D) f.
///
/// `PropSign`: f − I D f = +e^{−β(t−a)}·Σ…; `LemmaSign`: the same with −.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignConvention {
    PropSign,
    LemmaSign,
    Undetermined,
}

/// One checked theorem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRecord {
    pub theorem_id: TheoremId,
    pub inputs: Vec<(String, Complex64)>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Scaled |lhs − rhs| for identities, lhs − rhs for inequalities.
    pub residual_or_slack: f64,
    pub tol: f64,
    pub pass: bool,
    pub sign_convention: SignConvention,
}

impl VerificationRecord {
    /// Identity record: passes iff residual ≤ tol.
    pub fn identity(theorem_id: TheoremId, inputs: Vec<(String, Complex64)>, lhs: Complex64, rhs: Complex64, residual: f64, tol: f64) -> Self {
        VerificationRecord {
            theorem_id,
            inputs,
            lhs,
            rhs,
            residual_or_slack: residual,
            tol,
            pass: residual <= tol,
            sign_convention: SignConvention::Undetermined,
        }
    }

    /// Inequality record lhs ≥ rhs: passes iff slack ≥ −tol.
    pub fn inequality(theorem_id: TheoremId, inputs: Vec<(String, Complex64)>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        VerificationRecord {
            theorem_id,
            inputs,
            lhs: Complex64::new(lhs, 0.0),
            rhs: Complex64::new(rhs, 0.0),
            residual_or_slack: slack,
            tol,
            pass: slack >= -tol,
            sign_convention: SignConvention::Undetermined,
        }
    }
}

pub(crate) fn input(name: &str, v: impl Into<Complex64>) -> (String, Complex64) {
    (name.to_string(), v.into())
}

/// |x − y| relative to the larger magnitude (absolute below 1e−300).
pub(crate) fn relative_residual(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1e-300)
}
