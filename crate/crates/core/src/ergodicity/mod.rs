//! Birkhoff averages, unique-ergodicity gaps and the isomorphic-extension test.

pub mod birkhoff;
pub mod functions;
pub mod grids;
pub mod iso;
pub mod ue;

pub use birkhoff::{birkhoff_average, birkhoff_averages, empirical_measure, EmpiricalMeasure};
pub use functions::{default_dictionary, parse_dictionary, Coord, TestFunction, Wave};
pub use grids::{diagonal_grid, relative_grid, rotation_grid, skew_grid};
pub use iso::{isomorphic_extension_test, IsoReport, IsoVerdict};
pub use ue::{gap_report, ue_gap, GapRow, UeReport, UeThresholds, UeVerdict};
