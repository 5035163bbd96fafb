//! Dense complex linear algebra (dimension ≤ 9), states, measurements and
//! Born-rule behaviors.

mod behavior;
mod horodecki;
mod linalg;
mod measurement;
mod realizations;
mod state;

pub use behavior::Behavior;
pub use horodecki::{horodecki_chsh, pauli_correlation_matrix};
pub use linalg::{identity, kron, pauli, CMatrix, MAX_DIM};
pub use measurement::{qubit_projector, MeasurementSet};
pub use realizations::{
    candidate_realization, cglmp_optimal_realization, cglmp_realization, chsh_realization,
    hexagon_realization, Realization,
};
pub use state::DensityMatrix;

use crate::{Error, Result};

/// `p(a,b|x,y) = Tr[(A_x^a ⊗ B_y^b) ρ]`.
pub fn born_behavior(
    rho: &DensityMatrix,
    alice: &MeasurementSet,
    bob: &MeasurementSet,
) -> Result<Behavior> {
    if alice.dim() * bob.dim() != rho.dim() {
        return Err(Error::dims(format!(
            "state dimension {} is not {}×{}",
            rho.dim(),
            alice.dim(),
            bob.dim()
        )));
    }
    let (sa, sb) = (alice.settings(), bob.settings());
    let (oa, ob) = (alice.outcomes(), bob.outcomes());
    let mut probs = Vec::with_capacity(sa * sb * oa * ob);
    for x in 0..sa {
        for y in 0..sb {
            for a in 0..oa {
                for b in 0..ob {
                    let joint = kron(alice.operator(x, a), bob.operator(y, b));
                    probs.push(linalg::trace_product(&joint, rho.matrix()));
                }
            }
        }
    }
    Behavior::new(sa, sb, oa, ob, probs)
}
