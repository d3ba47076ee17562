//! Domain types for the delivery-routing cost model.
//!
//! All times-of-day are minutes since midnight: store windows and the depot
//! departure are integer minutes, computed arrival times are fractional
//! minutes. Distances are kilometres, loads are tons, money is in whatever
//! currency the instance declares.

/// A store to be served, with its demand and service window.
#[derive(Debug, Clone, PartialEq)]
pub struct Store {
    /// 1-based index; node 0 is always the depot.
    pub id: usize,
    /// Demand in tons. Must be positive.
    pub demand: f64,
    /// Unloading time at the store, minutes.
    pub handling_time: u32,
    /// Earliest acceptable arrival, minutes since midnight.
    pub accept_earliest: u32,
    /// Latest acceptable arrival, minutes since midnight.
    pub accept_latest: u32,
    /// Preferred window, carried for display only; never priced.
    pub expected_earliest: Option<u32>,
    pub expected_latest: Option<u32>,
}

/// The homogeneous delivery fleet.
#[derive(Debug, Clone, PartialEq)]
pub struct Fleet {
    pub vehicle_count: usize,
    /// Maximum load per vehicle, tons.
    pub capacity: f64,
    /// Maximum distance a vehicle may drive in one route, km.
    pub max_route_distance: f64,
    /// Constant driving speed, km/h.
    pub speed: f64,
}

/// Cost-model coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CostCoefficients {
    /// Transport cost per driven km.
    pub per_km: f64,
    /// Penalty per minute of early arrival.
    pub early_penalty: f64,
    /// Penalty per minute of late arrival.
    pub late_penalty: f64,
    /// Cost per unit of constraint violation used to rank infeasible
    /// solutions inside the solver. Never appears in reported costs.
    pub infeasibility_weight: f64,
}

/// A complete problem instance: depot, stores, distances, fleet, costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub currency: String,
    pub stores: Vec<Store>,
    pub fleet: Fleet,
    pub coeffs: CostCoefficients,
    /// (N+1) x (N+1) km matrix; row/column 0 is the depot.
    pub distances: Vec<Vec<f64>>,
    /// Time of day at which every vehicle leaves the depot, minutes.
    pub depot_open: u32,
    /// Optional plot coordinates, one (x, y) per node starting at the depot.
    pub coords: Option<Vec<(f64, f64)>>,
}

impl Instance {
    /// Number of stores (excludes the depot).
    pub fn store_count(&self) -> usize {
        self.stores.len()
    }

    /// Store by 1-based id.
    ///
    /// Panics if `id` is 0 or past the last store.
    pub fn store(&self, id: usize) -> &Store {
        assert!(
            id >= 1 && id <= self.stores.len(),
            "store id {id} out of range 1..={}",
            self.stores.len()
        );
        &self.stores[id - 1]
    }

    /// Distance in km between nodes `i` and `j` (0 = depot).
    ///
    /// Panics if either index is out of range.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let n = self.stores.len();
        assert!(
            i <= n && j <= n,
            "node index ({i}, {j}) out of range 0..={n}"
        );
        self.distances[i][j]
    }

    /// Driving time in minutes between nodes `i` and `j` at fleet speed.
    ///
    /// Symmetric whenever the distance matrix is. Panics on an out-of-range
    /// index.
    pub fn travel_time(&self, i: usize, j: usize) -> f64 {
        self.distance(i, j) / self.fleet.speed * 60.0
    }

    /// Sum of all store demands, tons.
    pub fn total_demand(&self) -> f64 {
        self.stores.iter().map(|s| s.demand).sum()
    }
}

/// An assignment of ordered store visits to vehicles. Every route implicitly
/// starts and ends at the depot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RoutePlan {
    /// One entry per vehicle; entries may be empty.
    pub routes: Vec<Vec<usize>>,
}

impl RoutePlan {
    pub fn new(routes: Vec<Vec<usize>>) -> Self {
        RoutePlan { routes }
    }

    /// Stable presentation form: routes ordered by their first store id,
    /// empty routes last. Identical vehicles make the original order
    /// meaningless.
    pub fn canonicalize(&mut self) {
        self.routes
            .sort_by_key(|r| r.first().copied().unwrap_or(usize::MAX));
    }

    pub fn canonicalized(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Total number of store visits across all routes.
    pub fn visit_count(&self) -> usize {
        self.routes.iter().map(|r| r.len()).sum()
    }
}

/// One constraint breach found in a plan. Violations are data: infeasible
/// plans stay evaluable so they can be priced and reported.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Plan has a different number of routes than the fleet has vehicles.
    WrongRouteCount { expected: usize, actual: usize },
    /// Route references a node that is not a store of this instance.
    UnknownStore { vehicle: usize, store: usize },
    /// A store appears in more than one position across the plan.
    DuplicateStore { store: usize },
    /// A store is never visited.
    MissingStore { store: usize },
    /// Route load exceeds vehicle capacity.
    CapacityExceeded {
        vehicle: usize,
        load: f64,
        capacity: f64,
    },
    /// Route distance exceeds the per-route range limit.
    RangeExceeded {
        vehicle: usize,
        distance: f64,
        limit: f64,
    },
}

impl Violation {
    /// Size of the breach, used by the solver's infeasibility penalty:
    /// tons over capacity, km over range, or 1 per structural defect.
    pub fn magnitude(&self) -> f64 {
        match self {
            Violation::CapacityExceeded { load, capacity, .. } => load - capacity,
            Violation::RangeExceeded {
                distance, limit, ..
            } => distance - limit,
            _ => 1.0,
        }
    }

    /// Structural violations break the plan's shape rather than a resource
    /// limit; they normally indicate bad input files.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Violation::WrongRouteCount { .. }
                | Violation::UnknownStore { .. }
                | Violation::DuplicateStore { .. }
                | Violation::MissingStore { .. }
        )
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::WrongRouteCount { expected, actual } => {
                write!(f, "plan has {actual} routes, fleet has {expected} vehicles")
            }
            Violation::UnknownStore { vehicle, store } => {
                write!(f, "vehicle {vehicle}: unknown store {store}")
            }
            Violation::DuplicateStore { store } => {
                write!(f, "store {store} is visited more than once")
            }
            Violation::MissingStore { store } => write!(f, "store {store} is never visited"),
            Violation::CapacityExceeded { vehicle, load, capacity } => write!(
                f,
                "vehicle {vehicle}: load {load:.1} t exceeds capacity {capacity:.1} t by {:.1} t",
                load - capacity
            ),
            Violation::RangeExceeded { vehicle, distance, limit } => write!(
                f,
                "vehicle {vehicle}: route length {distance:.1} km exceeds limit {limit:.1} km by {:.1} km",
                distance - limit
            ),
        }
    }
}

/// Per-vehicle slice of an evaluated plan.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleCost {
    pub transport_cost: f64,
    pub penalty_cost: f64,
    /// Driven distance including both depot legs, km.
    pub distance: f64,
    /// Departure-to-return span, minutes. Zero for an unused vehicle.
    pub duration: f64,
    /// Carried load, tons.
    pub load: f64,
    /// load / fleet capacity.
    pub load_factor: f64,
}

/// Full cost decomposition of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    pub per_vehicle: Vec<VehicleCost>,
    /// Sum of per-vehicle transport costs, in vehicle order.
    pub total_transport: f64,
    /// Sum of per-vehicle penalty costs, in vehicle order.
    pub total_penalty: f64,
    /// total_transport + total_penalty, same arithmetic, no re-rounding.
    pub total: f64,
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

/// Checks every instance invariant and reports each breach with its
/// location. An empty result means the instance is safe for all downstream
/// operations.
pub fn validate_instance(instance: &Instance) -> Vec<String> {
    let mut problems = Vec::new();
    let n = instance.stores.len();

    for (idx, store) in instance.stores.iter().enumerate() {
        if store.id != idx + 1 {
            problems.push(format!(
                "store at position {} has id {}, expected {}",
                idx,
                store.id,
                idx + 1
            ));
        }
        if store.demand <= 0.0 || store.demand.is_nan() {
            problems.push(format!(
                "store {}: demand {} is not positive",
                store.id, store.demand
            ));
        }
        if store.accept_earliest >= store.accept_latest {
            problems.push(format!(
                "store {}: window opens at {} but closes at {}",
                store.id, store.accept_earliest, store.accept_latest
            ));
        }
        if let (Some(e), Some(l)) = (store.expected_earliest, store.expected_latest) {
            if e >= l {
                problems.push(format!("store {}: expected window is inverted", store.id));
            }
        }
        if store.demand > instance.fleet.capacity {
            problems.push(format!(
                "store {}: demand {:.1} t exceeds vehicle capacity {:.1} t; instance is unservable",
                store.id, store.demand, instance.fleet.capacity
            ));
        }
    }

    let fleet = &instance.fleet;
    if fleet.vehicle_count < 1 {
        problems.push("fleet has no vehicles".to_string());
    }
    if fleet.capacity <= 0.0 || fleet.capacity.is_nan() {
        problems.push(format!(
            "vehicle capacity {} is not positive",
            fleet.capacity
        ));
    }
    if fleet.max_route_distance <= 0.0 || fleet.max_route_distance.is_nan() {
        problems.push(format!(
            "max route distance {} is not positive",
            fleet.max_route_distance
        ));
    }
    if fleet.speed <= 0.0 || fleet.speed.is_nan() {
        problems.push(format!("vehicle speed {} is not positive", fleet.speed));
    }

    let c = &instance.coeffs;
    for (label, v) in [
        ("per_km", c.per_km),
        ("early_penalty", c.early_penalty),
        ("late_penalty", c.late_penalty),
        ("infeasibility_weight", c.infeasibility_weight),
    ] {
        if v < 0.0 || v.is_nan() {
            problems.push(format!(
                "coefficient {label} = {v} is negative or not a number"
            ));
        }
    }
    // The weight must dominate every achievable feasible cost so that any
    // violation outranks any detour.
    let cost_bound = c.per_km * fleet.vehicle_count as f64 * fleet.max_route_distance
        + c.late_penalty * (24.0 * 60.0) * n as f64;
    if c.infeasibility_weight <= cost_bound || c.infeasibility_weight.is_nan() {
        problems.push(format!(
            "infeasibility_weight {} must exceed the feasible-cost bound {:.1}",
            c.infeasibility_weight, cost_bound
        ));
    }

    if instance.depot_open >= 24 * 60 {
        problems.push(format!(
            "depot_open {} is not a time of day",
            instance.depot_open
        ));
    }

    if instance.distances.len() != n + 1 {
        problems.push(format!(
            "distance matrix has {} rows, expected {}",
            instance.distances.len(),
            n + 1
        ));
    } else {
        for (i, row) in instance.distances.iter().enumerate() {
            if row.len() != n + 1 {
                problems.push(format!(
                    "distance row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n + 1
                ));
            }
        }
        if problems.is_empty() || instance.distances.iter().all(|r| r.len() == n + 1) {
            for i in 0..=n {
                if instance.distances[i][i] != 0.0 {
                    problems.push(format!(
                        "distance[{i}][{i}] = {} is not zero",
                        instance.distances[i][i]
                    ));
                }
                for j in 0..=n {
                    let d = instance.distances[i][j];
                    if d < 0.0 || d.is_nan() {
                        problems.push(format!(
                            "distance[{i}][{j}] = {d} is negative or not a number"
                        ));
                    }
                    if j > i && instance.distances[i][j] != instance.distances[j][i] {
                        problems.push(format!(
                            "distance[{i}][{j}] = {} but distance[{j}][{i}] = {}; matrix must be symmetric",
                            instance.distances[i][j], instance.distances[j][i]
                        ));
                    }
                }
            }
        }
    }

    if let Some(coords) = &instance.coords {
        if coords.len() != n + 1 {
            problems.push(format!(
                "coords section has {} points, expected {}",
                coords.len(),
                n + 1
            ));
        }
    }

    problems
}

/// Formats minutes-since-midnight as HH:MM.
pub fn format_clock(minutes: u32) -> String {
    format!("{:02}:{:02}", minutes / 60, minutes % 60)
}
