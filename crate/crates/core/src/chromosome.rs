//! Giant-tour genotype and its genetic operators.
//!
//! A chromosome is one permutation of all store ids cut into vehicle
//! segments by separator positions. Operators act on the permutation only;
//! separators ride along, so every offspring decodes to a complete plan
//! with each store visited exactly once.

use rand::Rng;

use crate::model::RoutePlan;

/// Permutation-with-separators genotype.
///
/// `tour` is a permutation of store ids 1..=N; `cuts` holds K-1 split
/// indices into the tour (sorted, each in 0..=N). Segment k is
/// `tour[cuts[k-1]..cuts[k]]`; segments may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    pub tour: Vec<usize>,
    pub cuts: Vec<usize>,
}

impl Chromosome {
    /// Uniform random chromosome: a Fisher-Yates shuffled tour and every
    /// separator drawn uniformly over 0..=N.
    pub fn random<R: Rng>(store_count: usize, vehicle_count: usize, rng: &mut R) -> Self {
        let mut tour: Vec<usize> = (1..=store_count).collect();
        for i in (1..tour.len()).rev() {
            let j = rng.gen_range(0..=i);
            tour.swap(i, j);
        }
        let mut cuts: Vec<usize> = (0..vehicle_count.saturating_sub(1))
            .map(|_| rng.gen_range(0..=store_count))
            .collect();
        cuts.sort_unstable();
        Chromosome { tour, cuts }
    }

    /// Splits the tour at the separators; segment k becomes route k, order
    /// kept verbatim.
    pub fn decode(&self) -> RoutePlan {
        let mut routes = Vec::with_capacity(self.cuts.len() + 1);
        let mut start = 0;
        for &cut in &self.cuts {
            routes.push(self.tour[start..cut].to_vec());
            start = cut;
        }
        routes.push(self.tour[start..].to_vec());
        RoutePlan::new(routes)
    }

    /// Inverse of [`decode`](Self::decode): concatenates the routes and
    /// records the segment boundaries.
    pub fn encode(plan: &RoutePlan) -> Self {
        let mut tour = Vec::with_capacity(plan.visit_count());
        let mut cuts = Vec::with_capacity(plan.routes.len().saturating_sub(1));
        for (i, route) in plan.routes.iter().enumerate() {
            tour.extend_from_slice(route);
            if i + 1 < plan.routes.len() {
                cuts.push(tour.len());
            }
        }
        Chromosome { tour, cuts }
    }

    /// True when the genotype invariants hold for the given problem shape.
    pub fn is_valid(&self, store_count: usize, vehicle_count: usize) -> bool {
        if self.tour.len() != store_count || self.cuts.len() + 1 != vehicle_count {
            return false;
        }
        let mut seen = vec![false; store_count + 1];
        for &id in &self.tour {
            if id == 0 || id > store_count || seen[id] {
                return false;
            }
            seen[id] = true;
        }
        self.cuts.windows(2).all(|w| w[0] <= w[1]) && self.cuts.iter().all(|&c| c <= store_count)
    }
}

impl std::fmt::Display for Chromosome {
    /// Renders as a 0-delimited tour, e.g. `0|2 1 4 5|7 8 6 3|0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "0")?;
        for route in self.decode().routes {
            let ids: Vec<String> = route.iter().map(|id| id.to_string()).collect();
            write!(f, "|{}", ids.join(" "))?;
        }
        write!(f, "|0")
    }
}

/// Order crossover: each child keeps a contiguous slice of one parent in
/// place and fills the remaining positions with the other parent's stores
/// in their original order. Separators come from the slice-retaining
/// parent.
pub fn crossover<R: Rng>(
    parent_a: &Chromosome,
    parent_b: &Chromosome,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    let n = parent_a.tour.len();
    debug_assert_eq!(n, parent_b.tour.len());
    if n < 2 {
        return (parent_a.clone(), parent_b.clone());
    }
    let (start, end) = random_slice(n, rng);
    let child_a = Chromosome {
        tour: ox_fill(&parent_a.tour, &parent_b.tour, start, end),
        cuts: parent_a.cuts.clone(),
    };
    let child_b = Chromosome {
        tour: ox_fill(&parent_b.tour, &parent_a.tour, start, end),
        cuts: parent_b.cuts.clone(),
    };
    (child_a, child_b)
}

/// Keeps `template[start..=end]` in place, fills the rest from `donor`
/// starting after the slice and wrapping around.
fn ox_fill(template: &[usize], donor: &[usize], start: usize, end: usize) -> Vec<usize> {
    let n = template.len();
    let mut child = vec![0usize; n];
    let mut kept = vec![false; n + 1];
    for i in start..=end {
        child[i] = template[i];
        kept[template[i]] = true;
    }
    let mut pos = (end + 1) % n;
    for offset in 0..n {
        let candidate = donor[(end + 1 + offset) % n];
        if !kept[candidate] {
            child[pos] = candidate;
            pos = (pos + 1) % n;
        }
    }
    child
}

/// With probability `rate`, swaps two distinct uniformly chosen tour
/// positions. Separators are untouched.
pub fn mutate<R: Rng>(chromosome: &Chromosome, rng: &mut R, rate: f64) -> Chromosome {
    let mut out = chromosome.clone();
    if out.tour.len() < 2 || rng.gen::<f64>() >= rate {
        return out;
    }
    let n = out.tour.len();
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    out.tour.swap(i, j);
    out
}

/// With probability `rate`, reverses a uniformly chosen contiguous slice of
/// the tour.
pub fn invert<R: Rng>(chromosome: &Chromosome, rng: &mut R, rate: f64) -> Chromosome {
    let mut out = chromosome.clone();
    if out.tour.len() < 2 || rng.gen::<f64>() >= rate {
        return out;
    }
    let (start, end) = random_slice(out.tour.len(), rng);
    out.tour[start..=end].reverse();
    out
}

/// Uniform slice bounds `start <= end` within `0..n`.
fn random_slice<R: Rng>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
