//! Bundled example systems.

use crate::model::{model_from_json, StateSpaceModel};

/// Native JSON of the 2-state example system.
pub const EXAMPLE1_JSON: &str = include_str!("../fixtures/example1.json");

/// Native JSON of the 6-state example system.
pub const EXAMPLE2_JSON: &str = include_str!("../fixtures/example2.json");

/// Continuous-time SISO system with two states.
pub fn example1() -> StateSpaceModel {
    model_from_json(EXAMPLE1_JSON).expect("bundled fixture is valid")
}

/// Continuous-time SISO system with six states.
pub fn example2() -> StateSpaceModel {
    model_from_json(EXAMPLE2_JSON).expect("bundled fixture is valid")
}
