//! Bell functionals: general linear functionals on two-party behaviors and
//! correlation-form functionals on N-party behaviors, with local (LHV) bounds
//! computed by enumerating deterministic local strategies.

mod correlation;
mod general;
mod named;
mod nparty;

pub use correlation::{CorrelationFunctional, CorrelationTerm};
pub use general::{BellFunctional, CollinsGisinForm, LhvOptimum};
pub use named::{
    cglmp3_functional, cglmp4_functional, cglmp_correlation, chsh_functional, i3322_form,
    i3322_functional, mermin_functional,
};
pub use nparty::NPartyBehavior;

use serde::{Deserialize, Serialize};

/// Upper limit on the number of deterministic local strategies enumerated
/// for a local bound.
pub const LHV_ENUMERATION_LIMIT: u128 = 100_000_000;

/// Tolerance on the no-signaling check guarding marginal expansions.
pub const NO_SIGNALING_TOL: f64 = 1e-8;

/// JSON document for either functional kind.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionalDoc {
    General(BellFunctional),
    Correlation(CorrelationFunctional),
}
