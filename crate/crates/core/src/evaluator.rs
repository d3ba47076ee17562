//! Pure cost and feasibility engine.
//!
//! Arrival times chain forward from the depot departure: a vehicle arrives,
//! unloads immediately (early arrivals do not wait; they pay the early
//! penalty instead) and drives on. Costs split into transport (per-km) and
//! soft-window penalties; constraint breaches are returned as data so
//! infeasible plans can still be priced.

use crate::model::{CostBreakdown, Instance, RoutePlan, VehicleCost, Violation};

/// Timing of one store visit.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelineStop {
    pub store_id: usize,
    /// Arrival time, minutes since midnight.
    pub arrival: f64,
    /// Equal to arrival: unloading starts on arrival.
    pub service_start: f64,
    /// service_start + handling time.
    pub departure: f64,
    /// Minutes of early arrival, max(E_i - arrival, 0).
    pub early_by: f64,
    /// Minutes of late arrival, max(arrival - L_i, 0).
    pub late_by: f64,
}

/// Complete schedule of one vehicle's route.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteTimeline {
    pub stops: Vec<TimelineStop>,
    /// Time the vehicle is back at the depot. Equals the departure time for
    /// a vehicle that never leaves.
    pub return_time: f64,
}

/// Chains arrival times along a route, starting from the depot departure.
///
/// An empty route yields no stops and `return_time == depot_open`. Panics if
/// the route references an unknown store id.
pub fn propagate_times(instance: &Instance, route: &[usize]) -> RouteTimeline {
    let depot_open = instance.depot_open as f64;
    let mut stops = Vec::with_capacity(route.len());
    let mut clock = depot_open;
    let mut here = 0usize;

    for &store_id in route {
        let store = instance.store(store_id);
        let arrival = clock + instance.travel_time(here, store_id);
        let early_by = (store.accept_earliest as f64 - arrival).max(0.0);
        let late_by = (arrival - store.accept_latest as f64).max(0.0);
        let departure = arrival + store.handling_time as f64;
        stops.push(TimelineStop {
            store_id,
            arrival,
            service_start: arrival,
            departure,
            early_by,
            late_by,
        });
        clock = departure;
        here = store_id;
    }

    let return_time = if route.is_empty() {
        depot_open
    } else {
        clock + instance.travel_time(here, 0)
    };
    RouteTimeline { stops, return_time }
}

/// Driven distance of one route including both depot legs, km. Empty routes
/// drive nothing.
pub fn route_distance(instance: &Instance, route: &[usize]) -> f64 {
    if route.is_empty() {
        return 0.0;
    }
    let mut dist = instance.distance(0, route[0]);
    for pair in route.windows(2) {
        dist += instance.distance(pair[0], pair[1]);
    }
    dist + instance.distance(route[route.len() - 1], 0)
}

/// Transport cost of a whole plan: per-km rate times total driven distance.
pub fn transport_cost(instance: &Instance, plan: &RoutePlan) -> f64 {
    plan.routes
        .iter()
        .map(|route| instance.coeffs.per_km * route_distance(instance, route))
        .sum()
}

/// Soft-window penalty over a set of timelines: early minutes priced at the
/// early rate, late minutes at the late rate.
pub fn penalty_cost(instance: &Instance, timelines: &[RouteTimeline]) -> f64 {
    timelines
        .iter()
        .flat_map(|t| t.stops.iter())
        .map(|s| {
            instance.coeffs.early_penalty * s.early_by + instance.coeffs.late_penalty * s.late_by
        })
        .sum()
}

/// Slack for resource-limit comparisons: summing decimal demands or
/// distances in binary leaves dust around exact limits (a route loading
/// exactly 2.0 t can sum to 2.0000000000000004), and a load at exactly
/// capacity is legal. Real breaches are orders of magnitude larger.
const LIMIT_EPS: f64 = 1e-9;

/// Checks a plan against every model constraint and reports one record per
/// breach. Never panics: malformed plans come back as structural violations.
pub fn check_constraints(instance: &Instance, plan: &RoutePlan) -> Vec<Violation> {
    let mut violations = Vec::new();
    let n = instance.store_count();
    let fleet = &instance.fleet;

    if plan.routes.len() != fleet.vehicle_count {
        violations.push(Violation::WrongRouteCount {
            expected: fleet.vehicle_count,
            actual: plan.routes.len(),
        });
    }

    let mut visits = vec![0usize; n + 1];
    for (v, route) in plan.routes.iter().enumerate() {
        let vehicle = v + 1;
        let mut load = 0.0;
        let mut known_route = true;
        for &store_id in route {
            if store_id == 0 || store_id > n {
                violations.push(Violation::UnknownStore {
                    vehicle,
                    store: store_id,
                });
                known_route = false;
                continue;
            }
            visits[store_id] += 1;
            load += instance.store(store_id).demand;
        }
        if load > fleet.capacity + LIMIT_EPS {
            violations.push(Violation::CapacityExceeded {
                vehicle,
                load,
                capacity: fleet.capacity,
            });
        }
        if known_route {
            let dist = route_distance(instance, route);
            if dist > fleet.max_route_distance + LIMIT_EPS {
                violations.push(Violation::RangeExceeded {
                    vehicle,
                    distance: dist,
                    limit: fleet.max_route_distance,
                });
            }
        }
    }

    for store_id in 1..=n {
        match visits[store_id] {
            0 => violations.push(Violation::MissingStore { store: store_id }),
            1 => {}
            _ => violations.push(Violation::DuplicateStore { store: store_id }),
        }
    }

    violations
}

/// Prices a plan: transport plus window penalties, per vehicle and total,
/// with all constraint breaches attached. The infeasibility weight never
/// enters these numbers; it exists only for solver-internal ranking.
///
/// Panics if a route references an unknown store id (run
/// [`check_constraints`] first when the plan comes from outside).
pub fn evaluate(instance: &Instance, plan: &RoutePlan) -> CostBreakdown {
    let violations = check_constraints(instance, plan);
    let depot_open = instance.depot_open as f64;

    let mut per_vehicle = Vec::with_capacity(plan.routes.len());
    for route in &plan.routes {
        let timeline = propagate_times(instance, route);
        let distance = route_distance(instance, route);
        let transport = instance.coeffs.per_km * distance;
        let penalty = penalty_cost(instance, std::slice::from_ref(&timeline));
        let load: f64 = route.iter().map(|&id| instance.store(id).demand).sum();
        per_vehicle.push(VehicleCost {
            transport_cost: transport,
            penalty_cost: penalty,
            distance,
            duration: timeline.return_time - depot_open,
            load,
            load_factor: load / instance.fleet.capacity,
        });
    }

    let total_transport: f64 = per_vehicle.iter().map(|v| v.transport_cost).sum();
    let total_penalty: f64 = per_vehicle.iter().map(|v| v.penalty_cost).sum();
    CostBreakdown {
        total_transport,
        total_penalty,
        total: total_transport + total_penalty,
        feasible: violations.is_empty(),
        violations,
        per_vehicle,
    }
}

/// Objective value the solver ranks by: true total cost plus the
/// infeasibility weight times the summed violation magnitudes. Equals the
/// true total for feasible plans.
pub fn penalized_total(instance: &Instance, breakdown: &CostBreakdown) -> f64 {
    let magnitude: f64 = breakdown.violations.iter().map(|v| v.magnitude()).sum();
    breakdown.total + instance.coeffs.infeasibility_weight * magnitude
}
