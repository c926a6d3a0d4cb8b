//! Brute-force exact solver and exhaustive cut verifiers for small instances.
//! This is the ground truth the rest of the crate is tested against, so it
//! stays deliberately simple: no pruning, no incremental tricks.

use crate::cuts::Cut;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objective::{joint_coverage, objective_value, prob_covered};

#[derive(Debug, Clone, Copy)]
pub struct EnumerationBudget {
    pub max_locations: usize,
    pub max_k: u32,
    pub max_states: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_locations: 10,
            max_k: 5,
            max_states: 10_000_000,
        }
    }
}

/// Number of integer vectors y >= 0 over `n` locations with sum <= k,
/// i.e. C(n + k, k). Saturates at u64::MAX on overflow.
pub fn state_count(n: usize, k: u32) -> u64 {
    let mut acc: u128 = 1;
    for t in 1..=(k as u128) {
        acc = acc.saturating_mul(n as u128 + t) / t;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn check_budget(inst: &Instance, budget: &EnumerationBudget) -> Result<()> {
    let states = state_count(inst.n_locations(), inst.k());
    if inst.n_locations() > budget.max_locations
        || inst.k() > budget.max_k
        || states > budget.max_states
    {
        return Err(Error::BudgetExceeded(format!(
            "|I|={}, K={} gives {} states (limits: |I|<={}, K<={}, states<={})",
            inst.n_locations(),
            inst.k(),
            states,
            budget.max_locations,
            budget.max_k,
            budget.max_states
        )));
    }
    Ok(())
}

fn for_each_feasible_y<F: FnMut(&[u32])>(n: usize, k: u32, mut f: F) {
    // Lexicographic recursion over open counts; each distinct y visited once.
    let mut y = vec![0u32; n];
    fn rec<F: FnMut(&[u32])>(y: &mut Vec<u32>, pos: usize, left: u32, f: &mut F) {
        if pos == y.len() {
            f(y);
            return;
        }
        for c in 0..=left {
            y[pos] = c;
            rec(y, pos + 1, left - c, f);
        }
        y[pos] = 0;
    }
    rec(&mut y, 0, k, &mut f);
}

/// Exact maximum of the objective over all y >= 0 with sum <= K.
/// Ties are broken toward the lexicographically smallest y (enumeration is
/// lexicographic and only strict improvements replace the best).
pub fn enumerate_optimal(inst: &Instance, budget: &EnumerationBudget) -> Result<(f64, Vec<u32>)> {
    check_budget(inst, budget)?;
    let mut best_val = f64::NEG_INFINITY;
    let mut best_y = vec![0u32; inst.n_locations()];
    for_each_feasible_y(inst.n_locations(), inst.k(), |y| {
        let v = objective_value(inst, y);
        if v > best_val {
            best_val = v;
            best_y.copy_from_slice(y);
        }
    });
    Ok((best_val, best_y))
}

/// Result of exhaustively checking one cut against every integer-feasible
/// point, with the coverage variables at their extreme feasible values.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub max_violation: f64,
    pub worst_y: Vec<u32>,
    pub points_checked: u64,
}

impl ValidityReport {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

/// Evaluates `cut` at every y with sum <= K, with z the open indicator,
/// the max-coverage variable at `max_i p_ij z_i` and the union-coverage
/// variable at `prob_covered(row, y)`. A valid cut never exceeds its
/// right-hand side at these points.
pub fn verify_cut_validity(
    inst: &Instance,
    cut: &Cut,
    budget: &EnumerationBudget,
) -> Result<ValidityReport> {
    check_budget(inst, budget)?;
    let j = cut.customer;
    assert!(j < inst.n_customers(), "cut references unknown customer");
    let row = inst.row(j);
    let n = inst.n_locations();
    let mut report = ValidityReport {
        max_violation: f64::NEG_INFINITY,
        worst_y: vec![0; n],
        points_checked: 0,
    };
    let mut yf = vec![0.0; n];
    let mut zf = vec![0.0; n];
    for_each_feasible_y(n, inst.k(), |y| {
        for i in 0..n {
            yf[i] = f64::from(y[i]);
            zf[i] = if y[i] >= 1 { 1.0 } else { 0.0 };
        }
        let peak = row
            .iter()
            .zip(y)
            .filter(|(_, &c)| c >= 1)
            .map(|(&p, _)| p)
            .fold(0.0, f64::max);
        let union = prob_covered(row, y);
        let viol = cut.violation_at(peak, union, &yf, &zf);
        report.points_checked += 1;
        if viol > report.max_violation {
            report.max_violation = viol;
            report.worst_y.copy_from_slice(y);
        }
    });
    Ok(report)
}

/// Convenience wrapper used by property suites: max-coverage value of a
/// customer at an integer point.
pub fn peak_coverage(inst: &Instance, j: usize, y: &[u32]) -> f64 {
    inst.row(j)
        .iter()
        .zip(y)
        .filter(|(_, &c)| c >= 1)
        .map(|(&p, _)| p)
        .fold(0.0, f64::max)
}

/// Joint-coverage objective restricted to one customer; used in tests.
pub fn customer_value(inst: &Instance, j: usize, y: &[u32]) -> f64 {
    inst.demand(j) * joint_coverage(inst.theta(), inst.row(j), y)
}
