//! Objective evaluation for integer solutions and the greedy primal heuristic.
//!
//! A customer's coverage under a vector of open counts `y` blends two models:
//! with weight `theta` the fully-correlated one (best single open facility)
//! and with weight `1 - theta` the fully-independent one (probability that at
//! least one open facility covers, `1 - prod_i (1 - p_i)^{y_i}`), with the
//! convention `0^0 = 1`.

use crate::instance::Instance;

/// A feasible integer solution: open counts per location, derived open flags,
/// and the objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub y: Vec<u32>,
    pub z: Vec<bool>,
    pub value: f64,
}

impl Solution {
    pub fn from_open_counts(inst: &Instance, y: Vec<u32>) -> Solution {
        let value = objective_value(inst, &y);
        let z = y.iter().map(|&c| c >= 1).collect();
        Solution { y, z, value }
    }

    pub fn total_open(&self) -> u32 {
        self.y.iter().sum()
    }
}

/// Probability that at least one open facility covers, under independence:
/// `1 - prod_i (1 - p_i)^{y_i}` with `0^0 = 1`.
///
/// The product is evaluated in log space to stay stable for large open
/// counts, and short-circuits to 1 when a full-coverage location is open.
pub fn prob_covered(p_row: &[f64], y: &[u32]) -> f64 {
    debug_assert_eq!(p_row.len(), y.len());
    let mut log_miss = 0.0;
    for (&p, &count) in p_row.iter().zip(y) {
        if count == 0 {
            continue;
        }
        if p >= 1.0 {
            return 1.0;
        }
        log_miss += f64::from(count) * (1.0 - p).ln();
    }
    1.0 - log_miss.exp()
}

/// Differentiable surrogate of [`prob_covered`]: full-coverage locations are
/// pulled out of the product and enter linearly, so the function is smooth in
/// `y` everywhere. For all integer `y >= 0`,
/// `prob_covered(y) = min(1, prob_covered_smooth(y))`.
pub fn prob_covered_smooth(inst: &Instance, j: usize, y: &[u32]) -> f64 {
    let row = inst.row(j);
    let mut log_miss = 0.0;
    for &i in inst.partial_set(j) {
        if y[i] > 0 {
            log_miss += f64::from(y[i]) * (1.0 - row[i]).ln();
        }
    }
    let full_open: u32 = inst.full_set(j).iter().map(|&i| y[i]).sum();
    1.0 - log_miss.exp() + f64::from(full_open)
}

/// Joint coverage of one customer: `theta * max_{i open} p_i + (1 - theta) *
/// prob_covered`. The max term is 0 when nothing is open.
pub fn joint_coverage(theta: f64, p_row: &[f64], y: &[u32]) -> f64 {
    let best = p_row
        .iter()
        .zip(y)
        .filter(|(_, &count)| count >= 1)
        .map(|(&p, _)| p)
        .fold(0.0, f64::max);
    theta * best + (1.0 - theta) * prob_covered(p_row, y)
}

/// Total demand-weighted joint coverage of `y`.
///
/// Panics if `y` opens more than K facilities.
pub fn objective_value(inst: &Instance, y: &[u32]) -> f64 {
    let total: u32 = y.iter().sum();
    assert!(
        total <= inst.k(),
        "solution opens {} facilities but K = {}",
        total,
        inst.k()
    );
    (0..inst.n_customers())
        .map(|j| inst.demand(j) * joint_coverage(inst.theta(), inst.row(j), y))
        .sum()
}

/// Greedy primal heuristic: starting from nothing open, repeatedly add the
/// facility with the largest marginal objective gain until K are placed.
/// Ties go to the lowest location index. Each step re-evaluates the full
/// objective per candidate, which is fine at benchmark scale.
pub fn greedy_incumbent(inst: &Instance) -> Solution {
    let n = inst.n_locations();
    let mut y = vec![0u32; n];
    let mut current = objective_value(inst, &y);
    for _ in 0..inst.k() {
        let mut best_gain = f64::NEG_INFINITY;
        let mut best_i = 0;
        for i in 0..n {
            y[i] += 1;
            let val = objective_value(inst, &y);
            y[i] -= 1;
            let gain = val - current;
            if gain > best_gain {
                best_gain = gain;
                best_i = i;
            }
        }
        y[best_i] += 1;
        current += best_gain;
    }
    Solution::from_open_counts(inst, y)
}
