//! Fiber homeomorphisms, cocycles, skew and relative products.

pub mod cocycle;
pub mod dynamics;
pub mod fiber;
pub mod homeo;
pub mod path;
pub mod projective;
pub mod serial;

pub use cocycle::{cocycle_distance, uniform_y_grid, uniform_z_grid, Cocycle, MobiusFamily, ParamMap, ResolvedMap};
pub use dynamics::{relative_step, skew_step, RelState, RelativeSystem, SkewState, SkewSystem};
pub use fiber::{FiberMap, FiberSpace};
pub use homeo::CircleHomeo;
pub use path::HomeoPath;
pub use projective::{mobius_act, Mat2, ProjectivePoint};
pub use serial::{parse_cocycle, serialize_cocycle};
