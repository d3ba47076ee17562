//! The bundled eight-store case and its two reference plans.
//!
//! The same files ship under `data/` for use from the command line.

use crate::io::{parse_instance, parse_plan};
use crate::model::{Instance, RoutePlan};

/// Instance file text of the eight-store case.
pub const EIGHT_STORES_TEXT: &str = include_str!("../data/eight_stores.instance");
/// The two fixed routes in use before optimization.
pub const BEFORE_PLAN_TEXT: &str = include_str!("../data/before.plan");
/// The optimized routes.
pub const AFTER_PLAN_TEXT: &str = include_str!("../data/after.plan");

/// Parsed eight-store instance.
pub fn eight_stores() -> Instance {
    parse_instance(EIGHT_STORES_TEXT).expect("bundled instance must parse")
}

/// Plan `[8,3,2,1] / [4,6,7,5]`.
pub fn before_plan(instance: &Instance) -> RoutePlan {
    parse_plan(BEFORE_PLAN_TEXT, instance).expect("bundled plan must parse")
}

/// Plan `[4,1,2,3,8] / [5,7,6]`.
pub fn after_plan(instance: &Instance) -> RoutePlan {
    parse_plan(AFTER_PLAN_TEXT, instance).expect("bundled plan must parse")
}
