//! LP backend: a deterministic bounded-variable revised simplex with dense
//! inverse refreshes, sufficient for the relaxations this solver creates
//! (a few thousand rows, coefficients of moderate magnitude). The interface
//! is narrow so a faster engine can be slotted in behind the same contract.

use crate::error::Result;
use std::io::Write;

/// Row feasibility tolerance: an accepted solution satisfies every row and
/// bound to this accuracy.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Reduced-cost tolerance for declaring optimality.
pub const OPTIMALITY_TOL: f64 = 1e-9;
/// Smallest pivot magnitude accepted in the ratio test.
const PIVOT_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const STALL_LIMIT: usize = 5000;
/// Pivots between dense refactorizations of the basis inverse.
const REFRESH_EVERY: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    /// Values of the structural variables.
    pub primal: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coefs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// A maximization LP: `max c'x : A x <= b, l <= x <= u`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    n_vars: usize,
    objective: Vec<f64>,
    rows: Vec<Row>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LpProblem {
    pub fn new(n_vars: usize) -> LpProblem {
        LpProblem {
            n_vars,
            objective: vec![0.0; n_vars],
            rows: Vec::new(),
            lower: vec![0.0; n_vars],
            upper: vec![f64::INFINITY; n_vars],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_objective(&mut self, var: usize, coef: f64) {
        self.objective[var] = coef;
    }

    /// Adds `sum coefs <= rhs` and returns its row index.
    pub fn add_row(&mut self, coefs: Vec<(usize, f64)>, rhs: f64) -> usize {
        debug_assert!(coefs.iter().all(|&(j, c)| j < self.n_vars && c.is_finite()));
        debug_assert!(rhs.is_finite());
        self.rows.push(Row { coefs, rhs });
        self.rows.len() - 1
    }

    pub fn add_rows(&mut self, rows: Vec<Row>) {
        for r in rows {
            self.add_row(r.coefs, r.rhs);
        }
    }

    /// Panics if `lb > ub`; callers resolve bound conflicts before the LP.
    pub fn set_bound(&mut self, var: usize, lb: f64, ub: f64) {
        assert!(lb <= ub, "crossing bounds on variable {var}: [{lb}, {ub}]");
        self.lower[var] = lb;
        self.upper[var] = ub;
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    pub fn solve(&self) -> LpSolution {
        let first = Simplex::new(self).run(false);
        if first.status == LpStatus::IterationLimit {
            // Rare numerical dead end: restart from the slack basis under
            // Bland's rule, trading speed for guaranteed progress.
            return Simplex::new(self).run(true);
        }
        first
    }

    /// Writes the problem in LP interchange text format for external
    /// cross-checking. `name_of` supplies variable names.
    pub fn write_lp<W: Write>(&self, w: &mut W, name_of: impl Fn(usize) -> String) -> Result<()> {
        writeln!(w, "Maximize")?;
        let mut obj = String::from(" obj:");
        for (j, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                obj.push_str(&format!(" {:+} {}", c, name_of(j)));
            }
        }
        writeln!(w, "{obj}")?;
        writeln!(w, "Subject To")?;
        for (r, row) in self.rows.iter().enumerate() {
            let mut line = format!(" r{r}:");
            for &(j, c) in &row.coefs {
                line.push_str(&format!(" {:+} {}", c, name_of(j)));
            }
            line.push_str(&format!(" <= {}", row.rhs));
            writeln!(w, "{line}")?;
        }
        writeln!(w, "Bounds")?;
        for j in 0..self.n_vars {
            if self.upper[j].is_finite() {
                writeln!(
                    w,
                    " {} <= {} <= {}",
                    self.lower[j],
                    name_of(j),
                    self.upper[j]
                )?;
            } else {
                writeln!(w, " {} >= {}", name_of(j), self.lower[j])?;
            }
        }
        writeln!(w, "End")?;
        Ok(())
    }

    /// Checks a candidate point against rows and bounds.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        for j in 0..self.n_vars {
            if x[j] < self.lower[j] - tol || x[j] > self.upper[j] + tol {
                return false;
            }
        }
        for row in &self.rows {
            let lhs: f64 = row.coefs.iter().map(|&(j, c)| c * x[j]).sum();
            if lhs > row.rhs + tol * (1.0 + row.rhs.abs()) {
                return false;
            }
        }
        true
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Simplex {
    n_struct: usize,
    m: usize,
    /// Column-major constraint matrix including slacks and (later) artificials.
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    real_cost: Vec<f64>,
    b: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    pivots_since_refresh: usize,
    bland: bool,
    degenerate_streak: usize,
}

impl Simplex {
    fn new(p: &LpProblem) -> Simplex {
        let m = p.rows.len();
        let n = p.n_vars;
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n + m];
        for (r, row) in p.rows.iter().enumerate() {
            for &(j, c) in &row.coefs {
                if c != 0.0 {
                    cols[j].push((r, c));
                }
            }
        }
        for r in 0..m {
            cols[n + r].push((r, 1.0));
        }
        let mut lower = p.lower.clone();
        let mut upper = p.upper.clone();
        lower.extend(std::iter::repeat_n(0.0, m));
        upper.extend(std::iter::repeat_n(f64::INFINITY, m));
        let mut real_cost = p.objective.clone();
        real_cost.extend(std::iter::repeat_n(0.0, m));

        let mut state = Vec::with_capacity(n + m);
        for j in 0..n {
            // Nonbasic start at a finite bound; relaxations built by this
            // crate always have a finite lower bound.
            if lower[j].is_finite() {
                state.push(VarState::AtLower);
            } else {
                assert!(upper[j].is_finite(), "variable {j} has no finite bound");
                state.push(VarState::AtUpper);
            }
        }
        let basis: Vec<usize> = (n..n + m).collect();
        for (pos, &j) in basis.iter().enumerate() {
            state.push(VarState::Basic(pos));
            debug_assert_eq!(j, n + pos);
        }

        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }

        Simplex {
            n_struct: n,
            m,
            cols,
            lower,
            upper,
            cost: real_cost.clone(),
            real_cost,
            b: p.rows.iter().map(|r| r.rhs).collect(),
            basis,
            state,
            binv,
            xb: vec![0.0; m],
            pivots_since_refresh: 0,
            bland: false,
            degenerate_streak: 0,
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::AtLower => self.lower[j],
            VarState::AtUpper => self.upper[j],
            VarState::Basic(pos) => self.xb[pos],
        }
    }

    fn effective_rhs(&self) -> Vec<f64> {
        let mut rhs = self.b.clone();
        for (j, col) in self.cols.iter().enumerate() {
            match self.state[j] {
                VarState::Basic(_) => {}
                _ => {
                    let v = self.nonbasic_value(j);
                    if v != 0.0 {
                        for &(r, c) in col {
                            rhs[r] -= c * v;
                        }
                    }
                }
            }
        }
        rhs
    }

    fn recompute_xb(&mut self) {
        let rhs = self.effective_rhs();
        let m = self.m;
        for i in 0..m {
            let mut acc = 0.0;
            for r in 0..m {
                acc += self.binv[i * m + r] * rhs[r];
            }
            self.xb[i] = acc;
        }
    }

    /// Rebuilds the basis inverse by Gauss-Jordan with partial pivoting.
    fn refresh(&mut self) -> bool {
        let m = self.m;
        let mut mat = vec![0.0; m * m];
        let mut inv = vec![0.0; m * m];
        for (pos, &j) in self.basis.iter().enumerate() {
            for &(r, c) in &self.cols[j] {
                mat[r * m + pos] = c;
            }
        }
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = mat[col * m + col].abs();
            for r in col + 1..m {
                if mat[r * m + col].abs() > best {
                    best = mat[r * m + col].abs();
                    piv = r;
                }
            }
            if best < 1e-12 {
                return false;
            }
            if piv != col {
                for c in 0..m {
                    mat.swap(col * m + c, piv * m + c);
                    inv.swap(col * m + c, piv * m + c);
                }
            }
            let lead = mat[col * m + col];
            for c in 0..m {
                mat[col * m + c] /= lead;
                inv[col * m + c] /= lead;
            }
            for r in 0..m {
                if r != col {
                    let f = mat[r * m + col];
                    if f != 0.0 {
                        for c in 0..m {
                            mat[r * m + c] -= f * mat[col * m + c];
                            inv[r * m + c] -= f * inv[col * m + c];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refresh = 0;
        self.recompute_xb();
        true
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (pos, &j) in self.basis.iter().enumerate() {
            let cb = self.cost[j];
            if cb != 0.0 {
                for i in 0..m {
                    y[i] += cb * self.binv[pos * m + i];
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        let mut d = self.cost[j];
        for &(r, c) in &self.cols[j] {
            d -= y[r] * c;
        }
        d
    }

    /// Chooses the entering variable; returns (index, direction).
    fn entering(&self, y: &[f64]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.cols.len() {
            let dir = match self.state[j] {
                VarState::Basic(_) => continue,
                VarState::AtLower => 1.0,
                VarState::AtUpper => -1.0,
            };
            // Fixed variables cannot move.
            if self.upper[j] - self.lower[j] <= 0.0 {
                continue;
            }
            let d = self.reduced_cost(j, y);
            let gain = d * dir;
            if gain > OPTIMALITY_TOL {
                if self.bland {
                    return Some((j, dir));
                }
                match best {
                    Some((_, _, g)) if g >= gain => {}
                    _ => best = Some((j, dir, gain)),
                }
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn direction(&self, e: usize) -> Vec<f64> {
        let m = self.m;
        let mut w = vec![0.0; m];
        for &(r, c) in &self.cols[e] {
            for i in 0..m {
                w[i] += self.binv[i * m + r] * c;
            }
        }
        w
    }

    fn run(mut self, force_bland: bool) -> LpSolution {
        self.bland = force_bland;
        self.recompute_xb();

        // Phase 1: patch rows whose slack starts below zero with artificials.
        let needs_phase1 = (0..self.m).any(|i| {
            let k = self.basis[i];
            self.xb[i] < self.lower[k] - FEASIBILITY_TOL
                || self.xb[i] > self.upper[k] + FEASIBILITY_TOL
        });
        if needs_phase1 {
            let mut art_cols = Vec::new();
            for i in 0..self.m {
                let k = self.basis[i];
                if self.xb[i] < self.lower[k] - FEASIBILITY_TOL {
                    let aj = self.cols.len();
                    self.cols.push(vec![(i, -1.0)]);
                    self.lower.push(0.0);
                    self.upper.push(f64::INFINITY);
                    self.real_cost.push(0.0);
                    self.cost.push(0.0);
                    // The displaced slack leaves at its lower bound.
                    self.state[k] = VarState::AtLower;
                    self.state.push(VarState::Basic(i));
                    self.basis[i] = aj;
                    art_cols.push(aj);
                }
            }
            for j in 0..self.cols.len() {
                self.cost[j] = if art_cols.contains(&j) { -1.0 } else { 0.0 };
            }
            if !self.refresh() {
                return self.finish(LpStatus::IterationLimit);
            }
            let status = self.optimize();
            if status != LpStatus::Optimal {
                return self.finish(status);
            }
            let infeas: f64 = art_cols
                .iter()
                .map(|&j| self.nonbasic_value(j).max(0.0))
                .sum();
            if infeas > FEASIBILITY_TOL {
                return self.finish(LpStatus::Infeasible);
            }
            // Freeze artificials at zero and restore the true objective.
            for &j in &art_cols {
                self.upper[j] = 0.0;
            }
            self.cost = self.real_cost.clone();
            self.bland = force_bland;
            self.degenerate_streak = 0;
        }

        let status = self.optimize();
        self.finish(status)
    }

    fn optimize(&mut self) -> LpStatus {
        let max_iters = 20_000 + 40 * (self.m + self.cols.len());
        let mut just_refreshed = false;
        let mut iters = 0;
        loop {
            iters += 1;
            if iters > max_iters {
                return LpStatus::IterationLimit;
            }
            if self.pivots_since_refresh >= REFRESH_EVERY && !self.refresh() {
                return LpStatus::IterationLimit;
            }
            let y = self.duals();
            let Some((e, sigma)) = self.entering(&y) else {
                // Confirm optimality against a fresh factorization.
                if just_refreshed {
                    return LpStatus::Optimal;
                }
                if !self.refresh() {
                    return LpStatus::IterationLimit;
                }
                just_refreshed = true;
                continue;
            };
            just_refreshed = false;

            let w = self.direction(e);
            let span = self.upper[e] - self.lower[e];
            // Ratio test. In Dantzig mode a Harris-style two-pass: first the
            // minimum ratio with bounds stretched by the feasibility
            // tolerance, then the largest pivot among rows within that
            // stretched minimum. Small pivots are what degrade the basis
            // inverse, so this keeps refactorizations well conditioned.
            // Bland mode uses the exact textbook rule for anti-cycling.
            let mut leave: Option<(usize, VarState)> = None;
            let mut t_best = span;
            if self.bland {
                for r in 0..self.m {
                    let delta = sigma * w[r];
                    let k = self.basis[r];
                    let (t, hit) = if delta > PIVOT_TOL {
                        (
                            (self.xb[r] - self.lower[k]).max(0.0) / delta,
                            VarState::AtLower,
                        )
                    } else if delta < -PIVOT_TOL && self.upper[k].is_finite() {
                        (
                            (self.upper[k] - self.xb[r]).max(0.0) / -delta,
                            VarState::AtUpper,
                        )
                    } else {
                        continue;
                    };
                    let replace = match leave {
                        None => t < t_best,
                        Some((r_cur, _)) => {
                            t < t_best - 1e-12
                                || (t <= t_best + 1e-12 && self.basis[r] < self.basis[r_cur])
                        }
                    };
                    if replace {
                        t_best = t;
                        leave = Some((r, hit));
                    }
                }
            } else {
                let stretch = FEASIBILITY_TOL;
                let mut t_relaxed = span;
                for r in 0..self.m {
                    let delta = sigma * w[r];
                    let k = self.basis[r];
                    let t = if delta > PIVOT_TOL {
                        ((self.xb[r] - self.lower[k]).max(0.0) + stretch) / delta
                    } else if delta < -PIVOT_TOL && self.upper[k].is_finite() {
                        ((self.upper[k] - self.xb[r]).max(0.0) + stretch) / -delta
                    } else {
                        continue;
                    };
                    t_relaxed = t_relaxed.min(t);
                }
                let mut best_piv = 0.0;
                for r in 0..self.m {
                    let delta = sigma * w[r];
                    let k = self.basis[r];
                    let (t, hit) = if delta > PIVOT_TOL {
                        (
                            (self.xb[r] - self.lower[k]).max(0.0) / delta,
                            VarState::AtLower,
                        )
                    } else if delta < -PIVOT_TOL && self.upper[k].is_finite() {
                        (
                            (self.upper[k] - self.xb[r]).max(0.0) / -delta,
                            VarState::AtUpper,
                        )
                    } else {
                        continue;
                    };
                    if t <= t_relaxed && delta.abs() > best_piv {
                        best_piv = delta.abs();
                        t_best = t;
                        leave = Some((r, hit));
                    }
                }
                if leave.is_some() && span < t_best {
                    // The entering variable's own box binds first after all.
                    t_best = span;
                    leave = None;
                }
            }

            if t_best.is_infinite() {
                // Unbounded direction; cannot happen for the relaxations this
                // crate builds (all structural variables are boxed).
                return LpStatus::IterationLimit;
            }

            self.degenerate_streak = if t_best <= 1e-12 {
                self.degenerate_streak + 1
            } else {
                0
            };
            if self.degenerate_streak > STALL_LIMIT {
                self.bland = true;
            }

            match leave {
                None => {
                    // Bound flip: the entering variable crosses its box.
                    for r in 0..self.m {
                        self.xb[r] -= sigma * w[r] * t_best;
                    }
                    self.state[e] = match self.state[e] {
                        VarState::AtLower => VarState::AtUpper,
                        VarState::AtUpper => VarState::AtLower,
                        VarState::Basic(_) => unreachable!(),
                    };
                }
                Some((r_leave, leave_state)) => {
                    let enter_from = self.nonbasic_value(e);
                    for r in 0..self.m {
                        self.xb[r] -= sigma * w[r] * t_best;
                    }
                    let k_old = self.basis[r_leave];
                    self.state[k_old] = leave_state;
                    self.basis[r_leave] = e;
                    self.state[e] = VarState::Basic(r_leave);
                    self.xb[r_leave] = enter_from + sigma * t_best;

                    // Product-form update of the inverse.
                    let m = self.m;
                    let piv = w[r_leave];
                    for c in 0..m {
                        self.binv[r_leave * m + c] /= piv;
                    }
                    for i in 0..m {
                        if i != r_leave {
                            let f = w[i];
                            if f != 0.0 {
                                for c in 0..m {
                                    self.binv[i * m + c] -= f * self.binv[r_leave * m + c];
                                }
                            }
                        }
                    }
                    self.pivots_since_refresh += 1;
                }
            }
        }
    }

    fn finish(mut self, status: LpStatus) -> LpSolution {
        if status == LpStatus::Optimal {
            // Report against a final clean factorization.
            self.refresh();
        }
        let primal: Vec<f64> = (0..self.n_struct).map(|j| self.nonbasic_value(j)).collect();
        let objective = self
            .real_cost
            .iter()
            .take(self.n_struct)
            .zip(&primal)
            .map(|(c, v)| c * v)
            .sum();
        LpSolution {
            status,
            objective,
            primal,
        }
    }
}

#[cfg(test)]
mod tests;
