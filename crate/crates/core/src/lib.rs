//! Delivery-route optimization for a single depot and a homogeneous fleet.
//!
//! The cost model prices every driven kilometre plus soft-time-window
//! penalties: a vehicle may arrive outside a store's acceptance window, but
//! every early or late minute costs money. Plans are searched with a seeded
//! genetic algorithm over a giant-tour encoding; an exhaustive oracle
//! provides exact optima for small instances. Instances and plans live in
//! plain-text files; see the repository README for the grammar.

pub mod chromosome;
pub mod evaluator;
pub mod fixtures;
pub mod generator;
pub mod io;
pub mod model;
pub mod oracle;
pub mod report;
pub mod solver;

pub use chromosome::Chromosome;
pub use evaluator::{
    check_constraints, evaluate, penalty_cost, propagate_times, transport_cost, RouteTimeline,
};
pub use generator::{generate, GenParams};
pub use io::{emit_instance, emit_plan, parse_instance, parse_plan, ParseError};
pub use model::{
    validate_instance, CostBreakdown, CostCoefficients, Fleet, Instance, RoutePlan, Store,
    VehicleCost, Violation,
};
pub use oracle::{enumerate_optimum, plan_count, OracleResult};
pub use report::{export_route_geometry, render_comparison, trace_csv, Comparison, RouteGeometry};
pub use solver::{solve, GaConfig, SolveError, SolveReport, TracePoint};
