//! Pseudometric estimators and mean-equicontinuity probes.

pub mod density;
pub mod fiber;
pub mod modulus;
pub mod pseudometric;
pub mod symbolic_metric;

pub use density::banach_visit_density;
pub use fiber::{fiber_diameter_profile, FactorMap, FiberDiameterProfile};
pub use modulus::{mean_equicontinuity_modulus, ModulusProfile, ModulusRow, PairRecord};
pub use pseudometric::{
    besicovitch_estimate, besicovitch_from_distances, neumaier_sum, parse_distance_stream, weyl_estimate, weyl_from_distances,
    weyl_sweep, Neumaier, PseudometricEstimate, WindowScheme,
};
pub use symbolic_metric::{symbolic_distance, symbolic_distance_sequence};
