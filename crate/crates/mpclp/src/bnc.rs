//! Branch-and-cut search: tree management, per-node cut loops, branching on
//! the open flags then the open counts, incumbent management and statistics.
//!
//! The relaxation keeps two coverage variables per customer (the best
//! single-facility coverage and the union coverage), bounded by the cut
//! families of [`crate::cuts`]. Exact separation of the max-coverage and
//! outer-approximation families at integral points is what makes the search
//! exact; the enhanced and lifted families only accelerate it.

use crate::cuts::{self, Cut, CutKind};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lp::{LpProblem, LpStatus, Row};
use crate::objective::{greedy_incumbent, objective_value, Solution};
use std::collections::HashSet;
use std::time::Instant;

/// Integrality tolerance on the open counts and flags.
pub const INT_EPS: f64 = 1e-6;
/// Violation tolerance for heuristic separation at fractional points.
pub const CUT_TOL: f64 = 1e-6;
/// Violation tolerance for exact separation at integral points. Tighter than
/// the LP row tolerance; duplicate suppression keeps regenerated cuts from
/// looping.
const CUT_TOL_INT: f64 = 1e-9;

fn prune_eps(best: f64) -> f64 {
    1e-9 + 1e-7 * best.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSelection {
    BestBound,
    DepthFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchRule {
    /// Branch on the open flag with fractional part closest to one half;
    /// if all flags are integral, the analogous open count.
    MostFractionalZThenY,
}

/// Which cut families the solver separates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnabledCuts {
    pub submodular: bool,
    pub oa: bool,
    pub eoa: bool,
    pub ls: bool,
}

impl EnabledCuts {
    /// Max-coverage and plain outer-approximation cuts only.
    pub fn vanilla() -> Self {
        EnabledCuts {
            submodular: true,
            oa: true,
            eoa: false,
            ls: false,
        }
    }

    /// Vanilla with the enhanced outer approximation (which supersedes OA).
    pub fn enhanced() -> Self {
        EnabledCuts {
            submodular: true,
            oa: true,
            eoa: true,
            ls: false,
        }
    }

    /// Vanilla plus the lifted subadditive cuts.
    pub fn lifted() -> Self {
        EnabledCuts {
            submodular: true,
            oa: true,
            eoa: false,
            ls: true,
        }
    }

    /// Everything: enhanced outer approximation and lifted subadditive cuts.
    pub fn full() -> Self {
        EnabledCuts {
            submodular: true,
            oa: true,
            eoa: true,
            ls: true,
        }
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        let mut set = EnabledCuts {
            submodular: false,
            oa: false,
            eoa: false,
            ls: false,
        };
        for name in names {
            match name.trim().to_ascii_lowercase().as_str() {
                "submodular" => set.submodular = true,
                "oa" => set.oa = true,
                "eoa" => set.eoa = true,
                "ls" => set.ls = true,
                other => {
                    return Err(Error::Config(format!(
                        "unknown cut family `{other}` (expected submodular, oa, eoa, ls)"
                    )))
                }
            }
        }
        Ok(set)
    }

    /// The families needed for exactness.
    pub fn validate(&self) -> Result<()> {
        if !self.submodular || !(self.oa || self.eoa) {
            return Err(Error::Config(
                "need the submodular family plus one outer-approximation family enabled".into(),
            ));
        }
        Ok(())
    }

    /// The enhanced cuts dominate the plain ones pointwise, so they replace
    /// them wherever both are enabled.
    fn use_eoa(&self) -> bool {
        self.eoa
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub time_limit_s: f64,
    /// Relative MIP gap at which the search stops (0 = prove optimality,
    /// up to an internal epsilon).
    pub rel_gap: f64,
    pub enabled_cuts: EnabledCuts,
    pub max_cut_rounds_root: u32,
    pub max_cut_rounds_node: u32,
    /// Cap per customer, per family, per separation round. Every separator
    /// emits at most one cut per customer per round, so 1 keeps each enabled
    /// family's cut.
    pub max_cuts_per_round_per_customer: u32,
    pub node_selection: NodeSelection,
    pub branch_rule: BranchRule,
    /// Keep a copy of every cut added to the pool in the result.
    pub collect_cuts: bool,
    /// One log line per processed node on stderr.
    pub verbose: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            time_limit_s: f64::INFINITY,
            rel_gap: 0.0,
            enabled_cuts: EnabledCuts::full(),
            max_cut_rounds_root: 10,
            max_cut_rounds_node: 2,
            max_cuts_per_round_per_customer: 1,
            node_selection: NodeSelection::BestBound,
            branch_rule: BranchRule::MostFractionalZThenY,
            collect_cuts: false,
            verbose: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchVar {
    OpenCount(usize),
    OpenFlag(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct BoundChange {
    pub var: BranchVar,
    pub lb: u32,
    pub ub: u32,
}

/// A branch-and-bound node: the bound changes accumulated along its path,
/// the LP bound of its parent, and its depth.
#[derive(Debug, Clone)]
pub struct Node {
    pub bound_changes: Vec<BoundChange>,
    pub parent_bound: f64,
    pub depth: u32,
}

/// Per-variable (lower, upper) boxes.
pub type VarBounds = Vec<(u32, u32)>;

impl Node {
    pub fn root() -> Node {
        Node {
            bound_changes: Vec::new(),
            parent_bound: f64::INFINITY,
            depth: 0,
        }
    }

    /// Intersects the accumulated bound changes into per-variable boxes.
    /// Returns None when a conflict makes the node infeasible.
    fn effective_bounds(&self, n: usize, k: u32) -> Option<(VarBounds, VarBounds)> {
        let mut y = vec![(0u32, k); n];
        let mut z = vec![(0u32, 1u32); n];
        for ch in &self.bound_changes {
            let slot = match ch.var {
                BranchVar::OpenCount(i) => &mut y[i],
                BranchVar::OpenFlag(i) => &mut z[i],
            };
            slot.0 = slot.0.max(ch.lb);
            slot.1 = slot.1.min(ch.ub);
            if slot.0 > slot.1 {
                return None;
            }
        }
        Some((y, z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CutCounts {
    pub submodular: u64,
    pub oa: u64,
    pub eoa: u64,
    pub ls: u64,
}

impl CutCounts {
    pub fn total(&self) -> u64 {
        self.submodular + self.oa + self.eoa + self.ls
    }

    fn bump(&mut self, kind: CutKind) {
        match kind {
            CutKind::Submodular => self.submodular += 1,
            CutKind::Oa => self.oa += 1,
            CutKind::Eoa => self.eoa += 1,
            CutKind::Ls => self.ls += 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub best_value: f64,
    pub best_solution: Solution,
    pub dual_bound: f64,
    pub gap_pct: f64,
    /// Nodes processed beyond the root.
    pub nodes: u64,
    pub cuts_added: CutCounts,
    /// LP bound at the root after its cut loop.
    pub root_lp_bound: f64,
    pub root_lpg_pct: f64,
    pub wall_time_s: f64,
    /// Every pool cut, when `collect_cuts` is set.
    pub collected_cuts: Vec<Cut>,
}

/// Root LP gap in percent: how far the root bound sits above the reference
/// (optimal or best-known) value.
///
/// Panics on a non-positive reference.
pub fn root_lpg(root_bound: f64, reference_value: f64) -> f64 {
    assert!(
        reference_value > 0.0,
        "root gap needs a positive reference value"
    );
    (root_bound - reference_value) / reference_value * 100.0
}

/// Variable layout of the relaxation: open counts, open flags, then the two
/// coverage variables per customer.
#[derive(Debug, Clone, Copy)]
struct VarLayout {
    n_loc: usize,
    n_cus: usize,
}

impl VarLayout {
    fn y(&self, i: usize) -> usize {
        i
    }
    fn z(&self, i: usize) -> usize {
        self.n_loc + i
    }
    fn peak(&self, j: usize) -> usize {
        2 * self.n_loc + j
    }
    fn union(&self, j: usize) -> usize {
        2 * self.n_loc + self.n_cus + j
    }
    fn total(&self) -> usize {
        2 * self.n_loc + 2 * self.n_cus
    }
    fn name(&self, v: usize) -> String {
        if v < self.n_loc {
            format!("y{v}")
        } else if v < 2 * self.n_loc {
            format!("z{}", v - self.n_loc)
        } else if v < 2 * self.n_loc + self.n_cus {
            format!("s{}", v - 2 * self.n_loc)
        } else {
            format!("u{}", v - 2 * self.n_loc - self.n_cus)
        }
    }
}

fn cut_to_row(cut: &Cut, layout: &VarLayout) -> Row {
    let j = cut.customer;
    let mut coefs = Vec::with_capacity(2 + cut.coef_y.len() + cut.coef_z.len());
    if cut.coef_peak != 0.0 {
        coefs.push((layout.peak(j), cut.coef_peak));
    }
    if cut.coef_union != 0.0 {
        coefs.push((layout.union(j), cut.coef_union));
    }
    for &(i, c) in &cut.coef_y {
        coefs.push((layout.y(i), c));
    }
    for &(i, c) in &cut.coef_z {
        coefs.push((layout.z(i), c));
    }
    Row {
        coefs,
        rhs: cut.rhs,
    }
}

fn base_relaxation(inst: &Instance, layout: &VarLayout) -> LpProblem {
    let n = inst.n_locations();
    let m = inst.n_customers();
    let k = f64::from(inst.k());
    let theta = inst.theta();
    let mut lp = LpProblem::new(layout.total());
    for i in 0..n {
        lp.set_bound(layout.y(i), 0.0, k);
        lp.set_bound(layout.z(i), 0.0, 1.0);
    }
    for j in 0..m {
        let peak_cap = inst.row(j).iter().cloned().fold(0.0, f64::max);
        lp.set_bound(layout.peak(j), 0.0, peak_cap);
        lp.set_bound(layout.union(j), 0.0, 1.0);
        lp.set_objective(layout.peak(j), inst.demand(j) * theta);
        lp.set_objective(layout.union(j), inst.demand(j) * (1.0 - theta));
    }
    // Budget row and the flag-count linking rows.
    lp.add_row((0..n).map(|i| (layout.y(i), 1.0)).collect(), k);
    for i in 0..n {
        lp.add_row(vec![(layout.z(i), 1.0), (layout.y(i), -1.0)], 0.0);
        lp.add_row(vec![(layout.y(i), 1.0), (layout.z(i), -k)], 0.0);
    }
    lp
}

/// Picks the branching variable under `MostFractionalZThenY` and returns the
/// two children with the linking bounds propagated (fixing a flag to zero
/// zeroes the count; forcing a count above zero raises the flag).
///
/// Panics if the point is integral.
pub fn branch(node: &Node, node_bound: f64, y_star: &[f64], z_star: &[f64]) -> (Node, Node) {
    let frac = |v: f64| (v - v.round()).abs();
    let pick = |vals: &[f64]| -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in vals.iter().enumerate() {
            if frac(v) > INT_EPS {
                let dist = (v - v.floor() - 0.5).abs();
                match best {
                    Some((_, d)) if d <= dist => {}
                    _ => best = Some((i, dist)),
                }
            }
        }
        best.map(|(i, _)| i)
    };

    let child = |changes: Vec<BoundChange>| -> Node {
        let mut bc = node.bound_changes.clone();
        bc.extend(changes);
        Node {
            bound_changes: bc,
            parent_bound: node_bound,
            depth: node.depth + 1,
        }
    };

    if let Some(i) = pick(z_star) {
        let down = child(vec![
            BoundChange {
                var: BranchVar::OpenFlag(i),
                lb: 0,
                ub: 0,
            },
            BoundChange {
                var: BranchVar::OpenCount(i),
                lb: 0,
                ub: 0,
            },
        ]);
        let up = child(vec![
            BoundChange {
                var: BranchVar::OpenFlag(i),
                lb: 1,
                ub: 1,
            },
            BoundChange {
                var: BranchVar::OpenCount(i),
                lb: 1,
                ub: u32::MAX,
            },
        ]);
        return (down, up);
    }
    let i = pick(y_star).expect("branch called on an integral point");
    let v = y_star[i];
    let floor = v.floor() as u32;
    let mut down_changes = vec![BoundChange {
        var: BranchVar::OpenCount(i),
        lb: 0,
        ub: floor,
    }];
    if floor == 0 {
        down_changes.push(BoundChange {
            var: BranchVar::OpenFlag(i),
            lb: 0,
            ub: 0,
        });
    }
    let down = child(down_changes);
    let up = child(vec![
        BoundChange {
            var: BranchVar::OpenCount(i),
            lb: floor + 1,
            ub: u32::MAX,
        },
        BoundChange {
            var: BranchVar::OpenFlag(i),
            lb: 1,
            ub: 1,
        },
    ]);
    (down, up)
}

struct HeapEntry {
    bound: f64,
    id: u64,
    node: Node,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.id == other.id
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Max-heap on bound; FIFO among equal bounds.
        self.bound
            .total_cmp(&other.bound)
            .then(other.id.cmp(&self.id))
    }
}

enum Frontier {
    Best(std::collections::BinaryHeap<HeapEntry>),
    Depth(Vec<HeapEntry>),
}

impl Frontier {
    fn new(sel: NodeSelection) -> Frontier {
        match sel {
            NodeSelection::BestBound => Frontier::Best(std::collections::BinaryHeap::new()),
            NodeSelection::DepthFirst => Frontier::Depth(Vec::new()),
        }
    }
    fn push(&mut self, e: HeapEntry) {
        match self {
            Frontier::Best(h) => h.push(e),
            Frontier::Depth(v) => v.push(e),
        }
    }
    fn pop(&mut self) -> Option<HeapEntry> {
        match self {
            Frontier::Best(h) => h.pop(),
            Frontier::Depth(v) => v.pop(),
        }
    }
    fn best_bound(&self) -> Option<f64> {
        match self {
            Frontier::Best(h) => h.peek().map(|e| e.bound),
            Frontier::Depth(v) => v.iter().map(|e| e.bound).fold(None, |acc: Option<f64>, b| {
                Some(acc.map_or(b, |a| a.max(b)))
            }),
        }
    }
}

struct Search<'a> {
    inst: &'a Instance,
    cfg: &'a SolverConfig,
    layout: VarLayout,
    base_lp: LpProblem,
    pool: Vec<Cut>,
    pool_keys: HashSet<u64>,
    incumbent: Solution,
    counts: CutCounts,
    collected: Vec<Cut>,
    started: Instant,
    nodes: u64,
}

enum NodeOutcome {
    Pruned,
    /// Fathomed at an integral point (incumbent possibly updated).
    Integral(f64),
    /// Still fractional after the cut loop: (bound, y*, z*).
    Fractional(f64, Vec<f64>, Vec<f64>),
    OutOfTime(f64),
}

impl<'a> Search<'a> {
    fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    fn out_of_time(&self) -> bool {
        self.elapsed() >= self.cfg.time_limit_s
    }

    fn add_cut(&mut self, lp: &mut LpProblem, cut: Cut) -> bool {
        let key = cut.dedup_key();
        if !self.pool_keys.insert(key) {
            return false;
        }
        let row = cut_to_row(&cut, &self.layout);
        lp.add_row(row.coefs, row.rhs);
        self.counts.bump(cut.kind);
        if self.cfg.collect_cuts {
            self.collected.push(cut.clone());
        }
        self.pool.push(cut);
        true
    }

    /// Separates one customer at a fractional point; returns candidate cuts.
    fn separate_fractional(
        &self,
        j: usize,
        y: &[f64],
        z: &[f64],
        peak: f64,
        union: f64,
    ) -> Vec<Cut> {
        let mut out = Vec::new();
        let theta = self.inst.theta();
        let fams = &self.cfg.enabled_cuts;
        if fams.submodular && theta > 0.0 {
            if let Some(c) = cuts::separate_submodular(self.inst, j, z, peak, CUT_TOL) {
                out.push(c);
            }
        }
        if theta < 1.0 {
            if fams.oa || fams.eoa {
                let rounded = cuts::round_to_nearest_integer(y);
                let cut = if fams.use_eoa() {
                    cuts::build_eoa_cut(self.inst, j, &rounded)
                } else {
                    cuts::build_oa_cut(self.inst, j, &rounded)
                };
                if cut.violation_at(peak, union, y, z) > CUT_TOL {
                    out.push(cut);
                }
            }
            if fams.ls {
                if let Some(c) = cuts::separate_ls_local_search(self.inst, j, y, z, union, CUT_TOL)
                {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Exact separation at an integral point: the max-coverage family at z*
    /// and the outer-approximation family at the rounded counts.
    fn separate_integral(
        &self,
        j: usize,
        y_int: &[u32],
        y: &[f64],
        z: &[f64],
        peak: f64,
        union: f64,
    ) -> Vec<Cut> {
        let mut out = Vec::new();
        let theta = self.inst.theta();
        let fams = &self.cfg.enabled_cuts;
        if fams.submodular && theta > 0.0 {
            if let Some(c) = cuts::separate_submodular(self.inst, j, z, peak, CUT_TOL_INT) {
                out.push(c);
            }
        }
        if theta < 1.0 && (fams.oa || fams.eoa) {
            let cut = if fams.use_eoa() {
                cuts::build_eoa_cut(self.inst, j, y_int)
            } else {
                cuts::build_oa_cut(self.inst, j, y_int)
            };
            if cut.violation_at(peak, union, y, z) > CUT_TOL_INT {
                out.push(cut);
            }
        }
        out
    }

    fn process_node(&mut self, node: &Node) -> Result<NodeOutcome> {
        let n = self.inst.n_locations();
        let m = self.inst.n_customers();
        let Some((ybounds, zbounds)) = node.effective_bounds(n, self.inst.k()) else {
            return Ok(NodeOutcome::Pruned);
        };

        let mut lp = self.base_lp.clone();
        for cut in &self.pool {
            let row = cut_to_row(cut, &self.layout);
            lp.add_row(row.coefs, row.rhs);
        }
        for i in 0..n {
            let (lb, ub) = ybounds[i];
            lp.set_bound(
                self.layout.y(i),
                f64::from(lb),
                f64::from(ub.min(self.inst.k())),
            );
            let (lb, ub) = zbounds[i];
            lp.set_bound(self.layout.z(i), f64::from(lb), f64::from(ub));
        }

        let round_limit = if node.depth == 0 {
            self.cfg.max_cut_rounds_root
        } else {
            self.cfg.max_cut_rounds_node
        };
        let mut rounds_used = 0u32;
        let mut prev_bound = f64::INFINITY;
        let mut cuts_this_node = 0u64;

        loop {
            if self.out_of_time() {
                return Ok(NodeOutcome::OutOfTime(prev_bound.min(node.parent_bound)));
            }
            let sol = lp.solve();
            match sol.status {
                LpStatus::Infeasible => return Ok(NodeOutcome::Pruned),
                LpStatus::IterationLimit => {
                    return Err(Error::Lp("simplex hit its iteration limit".into()))
                }
                LpStatus::Optimal => {}
            }
            let bound = sol.objective;
            if bound <= self.incumbent.value + prune_eps(self.incumbent.value) {
                self.log_node(node, bound, cuts_this_node, "pruned");
                return Ok(NodeOutcome::Pruned);
            }

            let y: Vec<f64> = (0..n).map(|i| sol.primal[self.layout.y(i)]).collect();
            let z: Vec<f64> = (0..n).map(|i| sol.primal[self.layout.z(i)]).collect();
            let integral = y
                .iter()
                .chain(z.iter())
                .all(|&v| (v - v.round()).abs() <= INT_EPS);

            if integral {
                let y_int: Vec<u32> = y.iter().map(|&v| v.round().max(0.0) as u32).collect();
                let mut added = false;
                for j in 0..m {
                    let peak = sol.primal[self.layout.peak(j)];
                    let union = sol.primal[self.layout.union(j)];
                    for cut in self.separate_integral(j, &y_int, &y, &z, peak, union) {
                        added |= self.add_cut(&mut lp, cut);
                    }
                }
                if added {
                    cuts_this_node += 1;
                    continue; // exact rounds do not count against the limit
                }
                let value = objective_value(self.inst, &y_int);
                if value > self.incumbent.value + 1e-12 {
                    self.incumbent = Solution::from_open_counts(self.inst, y_int);
                }
                self.log_node(node, bound, cuts_this_node, "integral");
                return Ok(NodeOutcome::Integral(bound));
            }

            let stalled = prev_bound - bound < 1e-7 && prev_bound.is_finite();
            prev_bound = bound;
            if rounds_used >= round_limit || stalled {
                self.log_node(node, bound, cuts_this_node, "branch");
                return Ok(NodeOutcome::Fractional(bound, y, z));
            }

            let mut added_any = 0u64;
            for j in 0..m {
                let peak = sol.primal[self.layout.peak(j)];
                let union = sol.primal[self.layout.union(j)];
                for cut in self.separate_fractional(j, &y, &z, peak, union) {
                    if self.add_cut(&mut lp, cut) {
                        added_any += 1;
                    }
                }
            }
            if added_any == 0 {
                self.log_node(node, bound, cuts_this_node, "branch");
                return Ok(NodeOutcome::Fractional(bound, y, z));
            }
            cuts_this_node += added_any;
            rounds_used += 1;
        }
    }

    fn log_node(&self, node: &Node, bound: f64, cuts: u64, what: &str) {
        if self.cfg.verbose {
            eprintln!(
                "node {:>5} depth {:>3} bound {:>12.6} cuts +{:<4} incumbent {:>12.6} [{what}]",
                self.nodes, node.depth, bound, cuts, self.incumbent.value
            );
        }
    }
}

/// Solves the instance to proven optimality (or the configured gap / time
/// limit) and reports bounds, counts and the incumbent.
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.enabled_cuts.validate()?;
    if cfg.max_cuts_per_round_per_customer == 0 {
        return Err(Error::Config(
            "max_cuts_per_round_per_customer must be at least 1".into(),
        ));
    }
    let started = Instant::now();
    let layout = VarLayout {
        n_loc: inst.n_locations(),
        n_cus: inst.n_customers(),
    };
    let mut search = Search {
        inst,
        cfg,
        layout,
        base_lp: base_relaxation(inst, &layout),
        pool: Vec::new(),
        pool_keys: HashSet::new(),
        incumbent: greedy_incumbent(inst),
        counts: CutCounts::default(),
        collected: Vec::new(),
        started,
        nodes: 0,
    };

    let mut frontier = Frontier::new(cfg.node_selection);
    let mut next_id = 0u64;
    let push = |frontier: &mut Frontier, node: Node, next_id: &mut u64| {
        let e = HeapEntry {
            bound: node.parent_bound,
            id: *next_id,
            node,
        };
        *next_id += 1;
        frontier.push(e);
    };
    // Total demand bounds the objective; it seeds the root so every node
    // carries a finite bound.
    let mut root = Node::root();
    root.parent_bound = inst.demands().iter().sum();
    push(&mut frontier, root, &mut next_id);

    let mut root_bound: Option<f64> = None;
    let mut timed_out = false;
    let mut interrupted_bound = f64::NEG_INFINITY;

    while let Some(entry) = frontier.pop() {
        if search.out_of_time() {
            timed_out = true;
            interrupted_bound = interrupted_bound.max(entry.bound);
            break;
        }
        let best = search.incumbent.value;
        if entry.bound <= best + prune_eps(best) {
            continue; // bound pruning without an LP solve
        }
        // Optional-gap stop: the frontier cannot improve enough.
        let global_dual = entry
            .bound
            .max(frontier.best_bound().unwrap_or(f64::NEG_INFINITY));
        if cfg.rel_gap > 0.0
            && global_dual.is_finite()
            && global_dual - best <= cfg.rel_gap * best.abs() + prune_eps(best)
        {
            break;
        }

        let is_root = entry.node.depth == 0;
        if !is_root {
            search.nodes += 1;
        }
        let outcome = search.process_node(&entry.node)?;
        match outcome {
            NodeOutcome::Pruned => {
                if is_root && root_bound.is_none() {
                    // Root infeasible or cut off by the greedy value.
                    root_bound = Some(search.incumbent.value.max(0.0));
                }
            }
            NodeOutcome::Integral(bound) => {
                if is_root {
                    root_bound = Some(bound);
                }
            }
            NodeOutcome::Fractional(bound, y, z) => {
                if is_root {
                    root_bound = Some(bound);
                }
                let (down, up) = branch(&entry.node, bound, &y, &z);
                push(&mut frontier, down, &mut next_id);
                push(&mut frontier, up, &mut next_id);
            }
            NodeOutcome::OutOfTime(bound) => {
                timed_out = true;
                interrupted_bound = interrupted_bound.max(bound.max(entry.bound));
                break;
            }
        }
    }

    let best_value = search.incumbent.value;
    let dual_bound = if timed_out {
        frontier
            .best_bound()
            .unwrap_or(f64::NEG_INFINITY)
            .max(interrupted_bound)
            .max(best_value)
    } else {
        best_value
    };
    let status = if timed_out {
        SolveStatus::TimeLimit
    } else {
        SolveStatus::Optimal
    };
    let root_lp_bound = root_bound.unwrap_or(best_value);
    let root_lpg_pct = if best_value > 0.0 {
        root_lpg(root_lp_bound, best_value)
    } else {
        0.0
    };
    let gap_pct = (dual_bound - best_value) / best_value.abs().max(1e-9) * 100.0;

    Ok(SolveResult {
        status,
        best_value,
        best_solution: search.incumbent,
        dual_bound,
        gap_pct,
        nodes: search.nodes,
        cuts_added: search.counts,
        root_lp_bound,
        root_lpg_pct,
        wall_time_s: started.elapsed().as_secs_f64(),
        collected_cuts: search.collected,
    })
}

/// Writes the root relaxation (static rows only) in LP text format.
pub fn write_root_relaxation<W: std::io::Write>(inst: &Instance, w: &mut W) -> Result<()> {
    let layout = VarLayout {
        n_loc: inst.n_locations(),
        n_cus: inst.n_customers(),
    };
    let lp = base_relaxation(inst, &layout);
    lp.write_lp(w, |v| layout.name(v))
}
