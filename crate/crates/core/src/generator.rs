//! Seeded random instance generator.
//!
//! Produces geometrically plausible instances for experiments and test
//! harnesses: uniform store coordinates, Euclidean distances rounded to
//! 0.1 km, demands that always admit a capacity-feasible split, and
//! per-store windows that the direct depot run can always meet.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{CostCoefficients, Fleet, Instance, Store};

/// Generator knobs. `window_tightness` in (0, 1] shrinks the acceptance
/// windows toward the direct-arrival time; `area_km` is the side of the
/// square the nodes are scattered over.
#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub store_count: usize,
    pub vehicle_count: usize,
    pub seed: u64,
    pub window_tightness: f64,
    pub area_km: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            store_count: 8,
            vehicle_count: 2,
            seed: 1,
            window_tightness: 0.5,
            area_km: 25.0,
        }
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("store_count must be at least 1")]
    NoStores,
    #[error("vehicle_count must be at least 1")]
    NoVehicles,
    #[error("window_tightness {0} must lie in (0, 1]")]
    BadTightness(f64),
    #[error("area_km {0} must be positive")]
    BadArea(f64),
}

const CAPACITY: f64 = 2.0;
const SPEED: f64 = 60.0;
const DEPOT_OPEN: u32 = 360;

/// Builds a random instance, identical for identical parameters.
pub fn generate(params: &GenParams) -> Result<Instance, GenError> {
    if params.store_count == 0 {
        return Err(GenError::NoStores);
    }
    if params.vehicle_count == 0 {
        return Err(GenError::NoVehicles);
    }
    if !(0.0..=1.0).contains(&params.window_tightness) || params.window_tightness == 0.0 {
        return Err(GenError::BadTightness(params.window_tightness));
    }
    if params.area_km <= 0.0 || params.area_km.is_nan() {
        return Err(GenError::BadArea(params.area_km));
    }

    let n = params.store_count;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let coords: Vec<(f64, f64)> = (0..=n)
        .map(|_| {
            let x = round1(rng.gen::<f64>() * params.area_km);
            let y = round1(rng.gen::<f64>() * params.area_km);
            (x, y)
        })
        .collect();

    let mut distances = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..=n {
        for j in (i + 1)..=n {
            let dx = coords[i].0 - coords[j].0;
            let dy = coords[i].1 - coords[j].1;
            let d = round1(dx.hypot(dy));
            distances[i][j] = d;
            distances[j][i] = d;
        }
    }

    // Demands in [0.1, Q/2], redrawn as a block until a capacity-feasible
    // split is certain: with every demand at most Q/2 and the total at most
    // K*Q - Q/2, some assignment always fits. Attempts are capped so store
    // counts the fleet cannot possibly serve still terminate; those
    // instances simply come out aggregate-infeasible.
    let demand_budget = params.vehicle_count as f64 * CAPACITY - CAPACITY / 2.0;
    let mut demands: Vec<f64> = Vec::new();
    for _ in 0..1000 {
        demands = (0..n)
            .map(|_| round1(rng.gen_range(0.1..=CAPACITY / 2.0)))
            .collect();
        if demands.iter().sum::<f64>() <= demand_budget {
            break;
        }
    }

    // Windows bracket the direct-from-depot arrival so every store can be
    // served without penalty by at least one schedule.
    let loose = 1.0 - params.window_tightness;
    let stores: Vec<Store> = (1..=n)
        .map(|id| {
            let handling = rng.gen_range(6..=42);
            let direct_arrival = DEPOT_OPEN as f64 + distances[0][id] / SPEED * 60.0;
            let slack_before = rng.gen_range(0.0..=30.0 + loose * 180.0);
            let slack_after = rng.gen_range(30.0..=90.0 + loose * 300.0) + handling as f64;
            let earliest = (direct_arrival - slack_before).max(0.0).round() as u32;
            let latest = ((direct_arrival + slack_after).round() as u32).min(24 * 60 - 1);
            Store {
                id,
                demand: demands[id - 1],
                handling_time: handling,
                accept_earliest: earliest.min(latest - 1),
                accept_latest: latest,
                expected_earliest: None,
                expected_latest: None,
            }
        })
        .collect();

    // Range limit that no route can reach: at most N+1 legs, each shorter
    // than the area diagonal.
    let max_route_distance = ((n + 1) as f64 * params.area_km * 1.5).ceil();
    let cost_bound =
        1.8 * params.vehicle_count as f64 * max_route_distance + 1.0 * (24.0 * 60.0) * n as f64;
    let infeasibility_weight = (cost_bound * 10.0).ceil();

    Ok(Instance {
        name: format!("gen-{}s-{}v-seed{}", n, params.vehicle_count, params.seed),
        currency: "CNY".to_string(),
        stores,
        fleet: Fleet {
            vehicle_count: params.vehicle_count,
            capacity: CAPACITY,
            max_route_distance,
            speed: SPEED,
        },
        coeffs: CostCoefficients {
            per_km: 1.8,
            early_penalty: 0.5,
            late_penalty: 1.0,
            infeasibility_weight,
        },
        distances,
        depot_open: DEPOT_OPEN,
        coords: Some(coords),
    })
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}
