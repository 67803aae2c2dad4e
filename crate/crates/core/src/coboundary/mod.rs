//! The coboundary construction over a Rokhlin tower.

pub mod builder;
pub mod engine;
pub mod family;
pub mod lemma_path;
pub mod membership;
pub mod theta;

pub use builder::{
    build_coboundary, choose_arc, diagonal_integral, integral_deviation, recertify, telescoped_value, Certificate,
    CertificateGrids, CoboundaryBuild,
};
pub use engine::{engine_for, relative_averages, telescoping_parts, Engine};
pub use family::{condition_a_family, ConditionAFamily, FiberArc};
pub use lemma_path::{lemma_la_path, LemmaPath};
pub use membership::{default_schedule, verify_e_membership, MembershipGrid, MembershipReport, MembershipRow};
pub use theta::{build_theta, Run, ThetaMap, ThetaParams};
