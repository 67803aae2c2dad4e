//! Exponents of `SL(2,R)` cocycles and the classification of their
//! projective skew products.

pub mod classify;
pub mod directions;
pub mod exponent;

pub use directions::{angle_gap, direction_field, invariant_directions, DirectionEstimate, DirectionField};
pub use exponent::{
    forward_product, lyapunov_estimate, lyapunov_estimates, uniformity_gap, LyapunovEstimate, ScaledProduct,
    StartExponent,
};
pub use classify::{
    furman_classify, ClassifyConfig, DirectionSummary, TrichotomyClass, TrichotomyReport, UeCorroboration,
    HERMAN_GAP_BASELINE,
};
