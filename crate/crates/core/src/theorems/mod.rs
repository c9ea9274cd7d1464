//! Numerical certification of the analytic results: the inversion formula,
//! the composition lemma, the telescoped Taylor identity and the
//! Chebyshev-type inequalities. Each check returns a [`VerificationRecord`].

mod eab;
mod identities;
mod inequalities;
mod record;
pub mod suites;

pub use eab::EabSeries;
pub use identities::{
    eab_power_integral, inversion_check, lemma_composition_check, remainder_prefactor, taylor_telescope_check,
    unit_integral_closed,
};
pub use inequalities::{chebyshev_slack1, chebyshev_slack2, product_slack_n, synchrony_check};
pub use record::{SignConvention, TheoremId, VerificationRecord};
pub(crate) use record::{input, relative_residual};
