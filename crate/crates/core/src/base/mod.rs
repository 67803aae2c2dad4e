//! Strictly ergodic base systems.

pub mod circle;
pub mod contfrac;
pub mod rotation;
pub mod symbolic;
pub mod tower;

pub use circle::{circle_distance, rotation_step, Alpha, Arc, CirclePoint};
pub use contfrac::{continued_fraction, ContinuedFraction, Convergent, Truncation};
pub use rotation::RotationSystem;
pub use symbolic::{
    sturmian_fiber, symbolic_point, thue_morse, Coding, SturmianFiber, SymbolicPoint, SymbolicSystem,
    ThueMorsePoint,
};
pub use tower::{build_rokhlin_tower, KrChain, RokhlinTower, TowerCheck, TowerSlot};
