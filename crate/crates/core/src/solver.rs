//! Genetic-algorithm solver over the giant-tour encoding.
//!
//! One run is a plain generational loop: rank by penalized cost, carry the
//! elite over verbatim, breed the rest by roulette selection, order
//! crossover, position-swap mutation and slice inversion. Everything is
//! driven by one seeded ChaCha8 stream, so a run is reproducible bit for
//! bit across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chromosome::{self, Chromosome};
use crate::evaluator::{evaluate, penalized_total};
use crate::model::{validate_instance, CostBreakdown, Instance, RoutePlan};

/// Solver parameters. Defaults match the reference configuration:
/// population 10, crossover 0.7, mutation 0.1, 100 generations.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub inversion_rate: f64,
    pub max_generations: usize,
    /// Stop early after this many generations without improvement.
    pub stall_generations: usize,
    pub rng_seed: u64,
    /// Number of best chromosomes copied unchanged into each generation.
    pub elitism_count: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 10,
            crossover_rate: 0.7,
            mutation_rate: 0.1,
            inversion_rate: 0.1,
            max_generations: 100,
            stall_generations: 50,
            rng_seed: 1,
            elitism_count: 1,
        }
    }
}

impl GaConfig {
    /// Returns every broken parameter bound.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if self.population_size < 2 {
            problems.push(format!(
                "population_size {} must be at least 2",
                self.population_size
            ));
        }
        for (label, rate) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
            ("inversion_rate", self.inversion_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                problems.push(format!("{label} {rate} must lie in [0, 1]"));
            }
        }
        if self.elitism_count < 1 || self.elitism_count >= self.population_size {
            problems.push(format!(
                "elitism_count {} must lie in 1..{}",
                self.elitism_count, self.population_size
            ));
        }
        problems
    }
}

/// One point of the convergence trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub generation: usize,
    /// Internal fitness of the best chromosome found so far. Non-decreasing.
    pub best_fitness: f64,
    /// Objective of the best chromosome found so far: true total cost plus
    /// any infeasibility penalty. Equals the plan's true total whenever that
    /// plan is feasible. Non-increasing.
    pub best_cost: f64,
}

/// Result of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Best plan found, canonicalized.
    pub best_plan: RoutePlan,
    /// True (unpenalized) cost decomposition of `best_plan`.
    pub best_cost: CostBreakdown,
    pub trace: Vec<TracePoint>,
    /// Breeding iterations actually performed.
    pub generations_run: usize,
    /// Generation at which the best cost last improved.
    pub converged_at: usize,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("instance failed validation:\n{}", .0.join("\n"))]
    InvalidInstance(Vec<String>),
    #[error("bad solver configuration:\n{}", .0.join("\n"))]
    InvalidConfig(Vec<String>),
}

/// Fitness used for selection: the inverse of the penalized objective,
/// 1 / (1 + total cost + infeasibility_weight * violation magnitudes).
/// Always finite and positive; strictly higher for strictly cheaper plans.
pub fn internal_fitness(instance: &Instance, chromosome: &Chromosome) -> f64 {
    let breakdown = evaluate(instance, &chromosome.decode());
    1.0 / (1.0 + penalized_total(instance, &breakdown))
}

/// Uniform random initial population; deterministic for a given rng state.
pub fn initialize_population<R: Rng>(
    instance: &Instance,
    config: &GaConfig,
    rng: &mut R,
) -> Vec<Chromosome> {
    (0..config.population_size)
        .map(|_| Chromosome::random(instance.store_count(), instance.fleet.vehicle_count, rng))
        .collect()
}

/// Runs the generational loop and returns the best plan ever seen with its
/// true cost, plus the per-generation convergence trace.
///
/// Refuses to start on an instance that fails validation.
pub fn solve(instance: &Instance, config: &GaConfig) -> Result<SolveReport, SolveError> {
    let instance_problems = validate_instance(instance);
    if !instance_problems.is_empty() {
        return Err(SolveError::InvalidInstance(instance_problems));
    }
    let config_problems = config.validate();
    if !config_problems.is_empty() {
        return Err(SolveError::InvalidConfig(config_problems));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut population = initialize_population(instance, config, &mut rng);
    let mut costs: Vec<f64> = population
        .iter()
        .map(|c| penalized_cost(instance, c))
        .collect();

    let (mut best, mut best_cost) = incumbent(&population, &costs);
    let mut converged_at = 0usize;
    let mut trace = vec![TracePoint {
        generation: 0,
        best_fitness: 1.0 / (1.0 + best_cost),
        best_cost,
    }];

    let mut generations_run = 0usize;
    for generation in 1..=config.max_generations {
        if generation - 1 - converged_at >= config.stall_generations {
            break;
        }
        breed(&mut population, &costs, config, &mut rng);
        costs = population
            .iter()
            .map(|c| penalized_cost(instance, c))
            .collect();
        generations_run = generation;

        let (gen_best, gen_cost) = incumbent(&population, &costs);
        if gen_cost < best_cost {
            best = gen_best;
            best_cost = gen_cost;
            converged_at = generation;
        }
        trace.push(TracePoint {
            generation,
            best_fitness: 1.0 / (1.0 + best_cost),
            best_cost,
        });
    }

    let best_plan = best.decode().canonicalized();
    let best_cost = evaluate(instance, &best_plan);
    Ok(SolveReport {
        best_plan,
        best_cost,
        trace,
        generations_run,
        converged_at,
    })
}

fn penalized_cost(instance: &Instance, chromosome: &Chromosome) -> f64 {
    let breakdown = evaluate(instance, &chromosome.decode());
    penalized_total(instance, &breakdown)
}

/// Best chromosome of the current population by penalized cost, earliest
/// index winning ties.
fn incumbent(population: &[Chromosome], costs: &[f64]) -> (Chromosome, f64) {
    let mut best = 0;
    for i in 1..population.len() {
        if costs[i] < costs[best] {
            best = i;
        }
    }
    (population[best].clone(), costs[best])
}

/// Replaces `population` in place: elite copied verbatim, the rest bred by
/// roulette selection, crossover, mutation and inversion.
fn breed<R: Rng>(population: &mut Vec<Chromosome>, costs: &[f64], config: &GaConfig, rng: &mut R) {
    let n = population.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| costs[a].partial_cmp(&costs[b]).unwrap().then(a.cmp(&b)));

    let fitness: Vec<f64> = costs.iter().map(|c| 1.0 / (1.0 + c)).collect();
    let fitness_total: f64 = fitness.iter().sum();

    let mut next = Vec::with_capacity(n);
    for &i in order.iter().take(config.elitism_count) {
        next.push(population[i].clone());
    }
    while next.len() < n {
        let pa = &population[spin_roulette(&fitness, fitness_total, rng)];
        let pb = &population[spin_roulette(&fitness, fitness_total, rng)];
        let (ca, cb) = if rng.gen::<f64>() < config.crossover_rate {
            chromosome::crossover(pa, pb, rng)
        } else {
            (pa.clone(), pb.clone())
        };
        for child in [ca, cb] {
            if next.len() == n {
                break;
            }
            let child = chromosome::mutate(&child, rng, config.mutation_rate);
            let child = chromosome::invert(&child, rng, config.inversion_rate);
            next.push(child);
        }
    }
    *population = next;
}

/// Fitness-proportional pick: lands on chromosome i with probability
/// fitness[i] / total.
fn spin_roulette<R: Rng>(fitness: &[f64], total: f64, rng: &mut R) -> usize {
    let mut ball = rng.gen::<f64>() * total;
    for (i, f) in fitness.iter().enumerate() {
        ball -= f;
        if ball <= 0.0 {
            return i;
        }
    }
    fitness.len() - 1
}
