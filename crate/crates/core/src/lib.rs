//! Bell functionals, communication complexity problems (CCPs) built from them,
//! and the linear programs that decide whether entanglement-assisted CCP
//! statistics admit a classical model.
//!
//! The crate is organised bottom-up:
//!
//! - [`quantum`]: small dense complex linear algebra, density matrices,
//!   measurements, Born-rule behaviors and the built-in quantum realizations.
//! - [`bell`]: general and correlation-form Bell functionals, local bounds by
//!   enumeration, and the named inequalities (CHSH, CGLMP, I3322).
//! - [`ccp`]: CCP tasks, deterministic strategies, optimal classical scores and
//!   the compiler from correlation Bell functionals to CCPs.
//! - [`lp`]: a dense two-phase revised simplex for the small membership LPs.
//! - [`polytope`]: classical CCP vertex enumeration and visibility LPs.
//! - [`sweep`]: the sharded, checkpointed sweep over all entanglement-assisted
//!   deterministic strategies.

pub mod bell;
pub mod ccp;
mod error;
mod util;
pub mod lp;
pub mod polytope;
pub mod quantum;
pub mod sweep;

pub use error::{Error, Result};
