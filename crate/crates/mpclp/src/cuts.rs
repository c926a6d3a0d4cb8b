//! The four cut families and their separation routines.
//!
//! All cuts live in the per-customer variable space (max-coverage variable,
//! union-coverage variable, open counts y, open flags z) and are globally
//! valid for the integer formulation:
//!
//! * max-coverage cuts (`Submodular`): `zeta <= p_l + sum_i (p_i - p_l)^+ z_i`,
//!   one per threshold value `p_l`; separated exactly in O(|I|) using the
//!   cached ascending order of the coverage row.
//! * outer approximation (`Oa`): first-order upper bound of the smooth
//!   union-coverage surrogate at an integer reference point `y*`.
//! * enhanced outer approximation (`Eoa`): the OA cut with every slope at
//!   least `1 - c` truncated to `1 - c` and shifted onto the open flags,
//!   which never weakens it on the feasible region.
//! * lifted subadditive (`Ls`): secant bounds `h_{i,k}` on single-location
//!   coverage combined through subadditivity of `1 - e^x`, lifted onto the
//!   open flags of full-coverage locations. Separated by local search over
//!   the location subset `C`; an exhaustive separator is kept as a test
//!   oracle.

use crate::error::{Error, Result};
use crate::instance::Instance;

pub const DEFAULT_VIOLATION_TOL: f64 = 1e-6;

/// Open flags / counts within this distance of an integer are treated as that
/// integer when partitioning locations for the local search.
const INTEGRALITY_EPS: f64 = 1e-6;

/// z* values this close to zero are treated as zero when computing k*.
const ZERO_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    Submodular,
    Oa,
    Eoa,
    Ls,
}

impl CutKind {
    pub fn label(self) -> &'static str {
        match self {
            CutKind::Submodular => "submodular",
            CutKind::Oa => "oa",
            CutKind::Eoa => "eoa",
            CutKind::Ls => "ls",
        }
    }
}

/// One linear `<=` inequality over a customer's variable block, stored with
/// every term on the left-hand side: exactly one of `coef_peak` /
/// `coef_union` is 1 (the bounded coverage variable), and the y/z
/// coefficients carry the sign they have after moving them left.
#[derive(Debug, Clone)]
pub struct Cut {
    pub customer: usize,
    pub kind: CutKind,
    /// Coefficient on the max-coverage variable of this customer (0 or 1).
    pub coef_peak: f64,
    /// Coefficient on the union-coverage variable of this customer (0 or 1).
    pub coef_union: f64,
    pub coef_y: Vec<(usize, f64)>,
    pub coef_z: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Cut {
    /// Left-hand side minus right-hand side at a point; positive means violated.
    pub fn violation_at(&self, peak: f64, union: f64, y: &[f64], z: &[f64]) -> f64 {
        let mut lhs = self.coef_peak * peak + self.coef_union * union;
        for &(i, c) in &self.coef_y {
            lhs += c * y[i];
        }
        for &(i, c) in &self.coef_z {
            lhs += c * z[i];
        }
        lhs - self.rhs
    }

    /// The upper bound this cut places on its coverage variable at `(y, z)`.
    pub fn coverage_bound_at(&self, y: &[f64], z: &[f64]) -> f64 {
        let mut bound = self.rhs;
        for &(i, c) in &self.coef_y {
            bound -= c * y[i];
        }
        for &(i, c) in &self.coef_z {
            bound -= c * z[i];
        }
        bound
    }

    /// Deterministic key for duplicate suppression in the global pool.
    /// FNV-1a over customer, kind and exact coefficient bits: cuts produced
    /// by identical generation paths hash identically on any platform.
    pub fn dedup_key(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |v: u64| {
            for byte in v.to_le_bytes() {
                h ^= u64::from(byte);
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.customer as u64);
        eat(match self.kind {
            CutKind::Submodular => 1,
            CutKind::Oa => 2,
            CutKind::Eoa => 3,
            CutKind::Ls => 4,
        });
        eat(self.coef_peak.to_bits());
        eat(self.coef_union.to_bits());
        for &(i, c) in &self.coef_y {
            eat(i as u64);
            eat(c.to_bits());
        }
        for &(i, c) in &self.coef_z {
            eat(i as u64 | (1 << 63));
            eat(c.to_bits());
        }
        eat(self.rhs.to_bits());
        h
    }
}

impl std::fmt::Display for Cut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} j={}]", self.kind.label(), self.customer)?;
        if self.coef_peak != 0.0 {
            write!(f, " peak")?;
        }
        if self.coef_union != 0.0 {
            write!(f, " union")?;
        }
        for &(i, c) in &self.coef_y {
            write!(f, " {:+.6}*y{}", c, i)?;
        }
        for &(i, c) in &self.coef_z {
            write!(f, " {:+.6}*z{}", c, i)?;
        }
        write!(f, " <= {:.6}", self.rhs)
    }
}

// ---------------------------------------------------------------------------
// Max-coverage (submodular) inequalities
// ---------------------------------------------------------------------------

/// Exact linear-time separation of the max-coverage inequalities for customer
/// `j` at `(zeta_star, z_star)`.
///
/// With locations sorted by ascending coverage, the candidate right-hand
/// sides `F_l = p_l + sum_{i > l} (p_i - p_l) z_i` are unimodal in `l`:
/// consecutive differences equal `(p_l - p_{l-1}) (1 - suffix_sum_l)`. The
/// minimizer is the zero threshold when the flags sum below one, and
/// otherwise the position where the suffix sum of `z*` first reaches one.
pub fn separate_submodular(
    inst: &Instance,
    j: usize,
    z_star: &[f64],
    zeta_star: f64,
    tol: f64,
) -> Option<Cut> {
    let row = inst.row(j);
    let order = inst.ascending_by_p(j);
    let n = row.len();

    let clamp = |v: f64| v.clamp(0.0, 1.0);
    let total: f64 = z_star.iter().map(|&v| clamp(v)).sum();

    let (threshold, bound) = if total < 1.0 {
        let f0: f64 = (0..n).map(|i| row[i] * clamp(z_star[i])).sum();
        (0.0, f0)
    } else {
        let mut acc = 0.0;
        let mut wsum = 0.0;
        let mut pos = n;
        for t in (0..n).rev() {
            let i = order[t];
            acc += clamp(z_star[i]);
            wsum += row[i] * clamp(z_star[i]);
            if acc >= 1.0 {
                pos = t;
                break;
            }
        }
        let i_star = order[pos];
        let p_l = row[i_star];
        let beyond_acc = acc - clamp(z_star[i_star]);
        let beyond_wsum = wsum - row[i_star] * clamp(z_star[i_star]);
        (p_l, p_l + beyond_wsum - p_l * beyond_acc)
    };

    if zeta_star - bound <= tol {
        return None;
    }
    let coef_z: Vec<(usize, f64)> = (0..n)
        .filter(|&i| row[i] > threshold)
        .map(|i| (i, -(row[i] - threshold)))
        .collect();
    Some(Cut {
        customer: j,
        kind: CutKind::Submodular,
        coef_peak: 1.0,
        coef_union: 0.0,
        coef_y: Vec::new(),
        coef_z,
        rhs: threshold,
    })
}

// ---------------------------------------------------------------------------
// Outer approximation
// ---------------------------------------------------------------------------

/// Gradient data of the smooth union-coverage surrogate at an integer point:
/// the intercept (`constant`) and one slope per partial-coverage location.
#[derive(Debug, Clone)]
pub struct OaCoefficients {
    pub constant: f64,
    /// `(location, slope)` over the partial-coverage set.
    pub slopes: Vec<(usize, f64)>,
}

/// First-order data of the smooth surrogate at `y_star`, computed in log
/// space: with `g = sum_{I_P} y*_i ln(1 - p_i)` and `P = e^g`, the slope at a
/// partial location is `-ln(1 - p_i) P` and the intercept is `1 - P + P g`.
pub fn oa_coefficients(inst: &Instance, j: usize, y_star: &[u32]) -> OaCoefficients {
    let row = inst.row(j);
    let mut g = 0.0;
    for &i in inst.partial_set(j) {
        if y_star[i] > 0 {
            g += f64::from(y_star[i]) * (1.0 - row[i]).ln();
        }
    }
    let miss = g.exp();
    let slopes = inst
        .partial_set(j)
        .iter()
        .map(|&i| (i, -(1.0 - row[i]).ln() * miss))
        .collect();
    OaCoefficients {
        constant: 1.0 - miss + miss * g,
        slopes,
    }
}

/// Outer-approximation cut at an integer reference point: the union-coverage
/// variable is bounded by the tangent of the smooth surrogate at `y_star`
/// (full-coverage locations enter with unit slope).
pub fn build_oa_cut(inst: &Instance, j: usize, y_star: &[u32]) -> Cut {
    let coefs = oa_coefficients(inst, j, y_star);
    let mut coef_y: Vec<(usize, f64)> = coefs
        .slopes
        .iter()
        .filter(|&&(_, a)| a != 0.0)
        .map(|&(i, a)| (i, -a))
        .collect();
    coef_y.extend(inst.full_set(j).iter().map(|&i| (i, -1.0)));
    coef_y.sort_by_key(|&(i, _)| i);
    Cut {
        customer: j,
        kind: CutKind::Oa,
        coef_peak: 0.0,
        coef_union: 1.0,
        coef_y,
        coef_z: Vec::new(),
        rhs: coefs.constant,
    }
}

/// Locations whose OA slope already reaches `1 - c`; opening any of them
/// caps the union coverage at 1, so their contribution can ride on the open
/// flag instead of the open count.
pub fn eoa_truncation_set(coefs: &OaCoefficients) -> Vec<usize> {
    coefs
        .slopes
        .iter()
        .filter(|&&(_, a)| a >= 1.0 - coefs.constant)
        .map(|&(i, _)| i)
        .collect()
}

/// Enhanced outer-approximation cut at `y_star`: slopes of at least `1 - c`
/// (and the unit slopes of full-coverage locations) are truncated to `1 - c`
/// and attached to the open flags. Dominates the plain OA cut wherever
/// `z_i <= y_i <= K z_i`.
pub fn build_eoa_cut(inst: &Instance, j: usize, y_star: &[u32]) -> Cut {
    let coefs = oa_coefficients(inst, j, y_star);
    let cap = 1.0 - coefs.constant;
    let truncated = eoa_truncation_set(&coefs);
    let mut coef_y: Vec<(usize, f64)> = coefs
        .slopes
        .iter()
        .filter(|&&(i, a)| a != 0.0 && !truncated.contains(&i))
        .map(|&(i, a)| (i, -a))
        .collect();
    coef_y.sort_by_key(|&(i, _)| i);
    let mut coef_z: Vec<(usize, f64)> = truncated
        .iter()
        .chain(inst.full_set(j))
        .map(|&i| (i, -cap))
        .collect();
    coef_z.sort_by_key(|&(i, _)| i);
    coef_z.retain(|&(_, c)| c != 0.0);
    Cut {
        customer: j,
        kind: CutKind::Eoa,
        coef_peak: 0.0,
        coef_union: 1.0,
        coef_y,
        coef_z,
        rhs: coefs.constant,
    }
}

/// Componentwise rounding used before generating OA cuts at fractional
/// points: down when the fractional part is under one half, up otherwise.
pub fn round_to_nearest_integer(y_star: &[f64]) -> Vec<u32> {
    y_star
        .iter()
        .map(|&v| {
            let v = v.max(0.0);
            let floor = v.floor();
            let rounded = if v - floor < 0.5 { floor } else { floor + 1.0 };
            rounded as u32
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Lifted subadditive inequalities
// ---------------------------------------------------------------------------

/// Secant upper bound on `1 - (1 - p)^y` through the integers `k` and `k+1`,
/// written on `(y, z)`: `p (1-p)^k y + (1 - (1-p)^k (k p + 1)) z`.
pub fn h_ik(p: f64, k: u32, y: f64, z: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&p));
    debug_assert!(k >= 1);
    let miss_k = (1.0 - p).powi(k as i32);
    p * miss_k * y + (1.0 - miss_k * (f64::from(k) * p + 1.0)) * z
}

/// The secant index minimizing `h_{i,k}` at `(y*, z*)`: `floor(y*/z*)` when
/// the flag is positive, 1 otherwise, clamped into `[1, K-1]`.
pub fn k_star(y_star: f64, z_star: f64, k: u32) -> u32 {
    debug_assert!(k >= 2);
    if z_star <= ZERO_EPS {
        return 1;
    }
    let ratio = (y_star / z_star).floor();
    (ratio as u32).clamp(1, k - 1)
}

/// Builds the lifted subadditive cut for customer `j` from a subset `c_set`
/// of its partial-coverage locations and secant indices `k_by_loc` (read for
/// locations outside `c_set`):
///
/// `union <= (1 - p_C) + p_C (sum_{I_P \ C} h_{i,k_i}(y_i, z_i)
///           + sum_C p_i (y_i - z_i) + sum_{I_F} z_i)`
///
/// where `p_C` is the probability that none of `C` covers.
///
/// Panics if `c_set` is not a subset of the partial-coverage locations.
pub fn build_ls_cut(inst: &Instance, j: usize, c_set: &[usize], k_by_loc: &[u32]) -> Cut {
    let row = inst.row(j);
    let n = row.len();
    let mut in_c = vec![false; n];
    for &i in c_set {
        assert!(
            row[i] < 1.0,
            "subset member {i} is not a partial-coverage location of customer {j}"
        );
        in_c[i] = true;
    }

    let miss_c: f64 = c_set.iter().map(|&i| 1.0 - row[i]).product();
    let mut coef_y: Vec<(usize, f64)> = Vec::new();
    let mut coef_z: Vec<(usize, f64)> = Vec::new();
    for &i in inst.partial_set(j) {
        let p = row[i];
        if in_c[i] {
            if p != 0.0 {
                coef_y.push((i, -miss_c * p));
                coef_z.push((i, miss_c * p));
            }
        } else {
            let k = k_by_loc[i];
            debug_assert!(k >= 1, "secant index must be at least 1");
            let miss_k = (1.0 - p).powi(k as i32);
            let alpha = p * miss_k;
            let beta = 1.0 - miss_k * (f64::from(k) * p + 1.0);
            if alpha != 0.0 {
                coef_y.push((i, -miss_c * alpha));
            }
            if beta != 0.0 {
                coef_z.push((i, -miss_c * beta));
            }
        }
    }
    for &i in inst.full_set(j) {
        coef_z.push((i, -miss_c));
    }
    coef_y.sort_by_key(|&(i, _)| i);
    coef_z.sort_by_key(|&(i, _)| i);
    Cut {
        customer: j,
        kind: CutKind::Ls,
        coef_peak: 0.0,
        coef_union: 1.0,
        coef_y,
        coef_z,
        rhs: 1.0 - miss_c,
    }
}

/// Working state of the subset search behind the lifted subadditive
/// separation: the current subset `C`, the minimizing secant indices, the
/// miss probability `p_C` (kept in log space so both growing and shrinking
/// `C` are constant-time updates), and the running sum of the bracket terms.
pub struct LsContext {
    /// Per-location secant index (meaningful on the partial set).
    pub k_star: Vec<u32>,
    /// `h_{i,k*}(y*, z*)` per location on the partial set.
    h_val: Vec<f64>,
    /// Change to the bracket sum when location `i` joins `C`.
    join_delta: Vec<f64>,
    log_one_minus_p: Vec<f64>,
    in_c: Vec<bool>,
    /// `sum_{i in C} ln(1 - p_i)`, so `p_C = exp(log_miss)`.
    log_miss: f64,
    /// `S = sum_{I_P \ C} h_i + sum_C p_i (y*_i - z*_i) + sum_{I_F} z*_i`;
    /// the bracket value is `omega = 1 - S`.
    sum_terms: f64,
    /// Locations free to enter or leave `C` (fractional block of the point).
    pub candidates: Vec<usize>,
    /// Locations pinned inside `C` (open-at-one block of the point).
    pub pinned: Vec<usize>,
    y_star: Vec<f64>,
    z_star: Vec<f64>,
    row: Vec<f64>,
    partial: Vec<usize>,
}

impl LsContext {
    /// Prepares the search at a point with `z* <= y* <= K z*` (small
    /// violations are clipped). Partitions the partial-coverage set into the
    /// all-zero block (never in `C`), the exactly-one block (always in `C`,
    /// the initial subset), and the fractional rest (search candidates).
    pub fn new(inst: &Instance, j: usize, y_star: &[f64], z_star: &[f64]) -> LsContext {
        let row = inst.row(j).to_vec();
        let n = row.len();
        let k = inst.k();
        let mut ys = vec![0.0; n];
        let mut zs = vec![0.0; n];
        for i in 0..n {
            zs[i] = z_star[i].clamp(0.0, 1.0);
            ys[i] = y_star[i].clamp(zs[i], f64::from(k) * zs[i]);
        }

        let mut k_star_v = vec![1u32; n];
        let mut h_val = vec![0.0; n];
        let mut join_delta = vec![0.0; n];
        let mut log_one_minus_p = vec![0.0; n];
        let mut in_c = vec![false; n];
        let mut candidates = Vec::new();
        let mut pinned = Vec::new();
        let mut sum_terms = 0.0;
        let mut log_miss = 0.0;

        for &i in inst.full_set(j) {
            sum_terms += zs[i];
        }
        for &i in inst.partial_set(j) {
            let p = row[i];
            k_star_v[i] = k_star(ys[i], zs[i], k);
            h_val[i] = h_ik(p, k_star_v[i], ys[i], zs[i]);
            join_delta[i] = p * (ys[i] - zs[i]) - h_val[i];
            log_one_minus_p[i] = (1.0 - p).ln();
            let at_zero = ys[i] <= INTEGRALITY_EPS && zs[i] <= INTEGRALITY_EPS;
            let at_one =
                (ys[i] - 1.0).abs() <= INTEGRALITY_EPS && (zs[i] - 1.0).abs() <= INTEGRALITY_EPS;
            if at_one {
                in_c[i] = true;
                pinned.push(i);
                sum_terms += p * (ys[i] - zs[i]);
                log_miss += log_one_minus_p[i];
            } else {
                sum_terms += h_val[i];
                if !at_zero {
                    candidates.push(i);
                }
            }
        }

        LsContext {
            k_star: k_star_v,
            h_val,
            join_delta,
            log_one_minus_p,
            in_c,
            log_miss,
            sum_terms,
            candidates,
            pinned,
            y_star: ys,
            z_star: zs,
            row,
            partial: inst.partial_set(j).to_vec(),
        }
    }

    /// Right-hand side value of the cut induced by the current subset,
    /// evaluated at the separation point.
    pub fn nu(&self) -> f64 {
        1.0 - self.log_miss.exp() * (1.0 - self.sum_terms)
    }

    /// Same value recomputed without the incremental state; the two must
    /// agree to floating-point accuracy.
    pub fn nu_from_scratch(&self) -> f64 {
        let mut miss = 1.0;
        let mut sum = 0.0;
        for &i in &self.partial {
            if self.in_c[i] {
                miss *= 1.0 - self.row[i];
                sum += self.row[i] * (self.y_star[i] - self.z_star[i]);
            } else {
                sum += self.h_val[i];
            }
        }
        // Full-coverage contribution = sum_terms minus every partial term.
        let mut full = self.sum_terms;
        for &i in &self.partial {
            full -= if self.in_c[i] {
                self.row[i] * (self.y_star[i] - self.z_star[i])
            } else {
                self.h_val[i]
            };
        }
        1.0 - miss * (1.0 - (sum + full))
    }

    /// Value after toggling membership of `i`, without committing.
    pub fn nu_after_toggle(&self, i: usize) -> f64 {
        let (log_miss, sum) = if self.in_c[i] {
            (
                self.log_miss - self.log_one_minus_p[i],
                self.sum_terms - self.join_delta[i],
            )
        } else {
            (
                self.log_miss + self.log_one_minus_p[i],
                self.sum_terms + self.join_delta[i],
            )
        };
        1.0 - log_miss.exp() * (1.0 - sum)
    }

    pub fn toggle(&mut self, i: usize) {
        if self.in_c[i] {
            self.log_miss -= self.log_one_minus_p[i];
            self.sum_terms -= self.join_delta[i];
        } else {
            self.log_miss += self.log_one_minus_p[i];
            self.sum_terms += self.join_delta[i];
        }
        self.in_c[i] = !self.in_c[i];
    }

    pub fn subset(&self) -> Vec<usize> {
        self.partial
            .iter()
            .cloned()
            .filter(|&i| self.in_c[i])
            .collect()
    }

    /// Best-improvement local search over single add/remove moves restricted
    /// to the fractional block. Ties go to the lowest location index.
    /// Returns the number of moves made.
    pub fn run_local_search(&mut self) -> usize {
        let cap = 50 + 10 * self.partial.len();
        let mut moves = 0;
        while moves < cap {
            let current = self.nu();
            let mut best = current;
            let mut best_i = None;
            for &i in &self.candidates {
                let v = self.nu_after_toggle(i);
                if v < best {
                    best = v;
                    best_i = Some(i);
                }
            }
            match best_i {
                Some(i) => {
                    self.toggle(i);
                    moves += 1;
                }
                None => break,
            }
        }
        moves
    }
}

/// Heuristic separation of the lifted subadditive cuts at a fractional point:
/// pin the locations sitting exactly at one inside `C`, leave the all-zero
/// ones out, and local-search over the rest. Returns a cut only if its
/// right-hand side at the point drops below the union-coverage value by more
/// than `tol`.
pub fn separate_ls_local_search(
    inst: &Instance,
    j: usize,
    y_star: &[f64],
    z_star: &[f64],
    eta_star: f64,
    tol: f64,
) -> Option<Cut> {
    let mut ctx = LsContext::new(inst, j, y_star, z_star);
    ctx.run_local_search();
    if ctx.nu() < eta_star - tol {
        Some(build_ls_cut(inst, j, &ctx.subset(), &ctx.k_star))
    } else {
        None
    }
}

/// Exhaustive separation over every subset of the partial-coverage set; the
/// test oracle for the local search. Refuses rows with more than 20 partial
/// locations.
pub fn separate_ls_exact(
    inst: &Instance,
    j: usize,
    y_star: &[f64],
    z_star: &[f64],
    eta_star: f64,
    tol: f64,
) -> Result<Option<Cut>> {
    let (nu, c_set, k_star_v) = min_nu_exact(inst, j, y_star, z_star)?;
    if nu < eta_star - tol {
        Ok(Some(build_ls_cut(inst, j, &c_set, &k_star_v)))
    } else {
        Ok(None)
    }
}

/// Minimum right-hand-side value over all subsets, with its minimizer.
pub fn min_nu_exact(
    inst: &Instance,
    j: usize,
    y_star: &[f64],
    z_star: &[f64],
) -> Result<(f64, Vec<usize>, Vec<u32>)> {
    let partial = inst.partial_set(j);
    if partial.len() > 20 {
        return Err(Error::BudgetExceeded(format!(
            "exact subset separation refused for {} partial locations",
            partial.len()
        )));
    }
    let ctx = LsContext::new(inst, j, y_star, z_star);
    // Rebuild a context-free view: base sum with C empty, plus per-location
    // join deltas, so each subset evaluates in O(|mask|).
    let mut base_sum = ctx.sum_terms;
    let mut base_log = ctx.log_miss;
    for &i in &ctx.pinned {
        base_sum -= ctx.join_delta[i];
        base_log -= ctx.log_one_minus_p[i];
    }
    debug_assert!(base_log.abs() < 1e-12);

    let mut best = (f64::INFINITY, 0u64);
    for mask in 0u64..(1u64 << partial.len()) {
        let mut sum = base_sum;
        let mut log = 0.0;
        for (t, &i) in partial.iter().enumerate() {
            if mask & (1 << t) != 0 {
                sum += ctx.join_delta[i];
                log += ctx.log_one_minus_p[i];
            }
        }
        let nu = 1.0 - log.exp() * (1.0 - sum);
        if nu < best.0 {
            best = (nu, mask);
        }
    }
    let c_set: Vec<usize> = partial
        .iter()
        .enumerate()
        .filter(|(t, _)| best.1 & (1 << t) != 0)
        .map(|(_, &i)| i)
        .collect();
    Ok((best.0, c_set, ctx.k_star.clone()))
}

// ---------------------------------------------------------------------------
// Facet witnesses
// ---------------------------------------------------------------------------

/// An integer point of the per-customer coverage set, used as a facet witness.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetPoint {
    pub eta: f64,
    pub y: Vec<u32>,
    pub z: Vec<bool>,
}

impl FacetPoint {
    pub fn flatten(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(1 + 2 * self.y.len());
        v.push(self.eta);
        v.extend(self.y.iter().map(|&c| f64::from(c)));
        v.extend(self.z.iter().map(|&b| if b { 1.0 } else { 0.0 }));
        v
    }
}

/// The `2|I| + 1` affinely independent points at which a lifted subadditive
/// cut holds with equality. Requires at least one full-coverage location
/// (`p = 1`); `i1` names one of them. `k_by_loc` supplies the secant index
/// for locations outside `c_set` and must stay within `[1, K-1]` for the
/// points to remain feasible.
pub fn facet_witness_points(
    p_row: &[f64],
    c_set: &[usize],
    k_by_loc: &[u32],
    i1: usize,
) -> Result<Vec<FacetPoint>> {
    let n = p_row.len();
    let full: Vec<usize> = (0..n).filter(|&i| p_row[i] >= 1.0).collect();
    if full.is_empty() {
        return Err(Error::Validation(
            "facet witnesses need a full-coverage location".into(),
        ));
    }
    if !full.contains(&i1) {
        return Err(Error::Validation(format!(
            "location {i1} does not fully cover this customer"
        )));
    }
    let mut in_c = vec![false; n];
    for &i in c_set {
        if p_row[i] >= 1.0 {
            return Err(Error::Validation(format!(
                "subset member {i} is not a partial-coverage location"
            )));
        }
        in_c[i] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| p_row[i] < 1.0 && !in_c[i]).collect();
    let miss_c: f64 = c_set.iter().map(|&i| 1.0 - p_row[i]).product();

    let base_y = |extra: &[(usize, u32)]| -> Vec<u32> {
        let mut y = vec![0u32; n];
        for &i in c_set {
            y[i] = 1;
        }
        for &(i, add) in extra {
            y[i] += add;
        }
        y
    };
    let base_z = |extra: &[usize]| -> Vec<bool> {
        let mut z = vec![false; n];
        for &i in c_set {
            z[i] = true;
        }
        for &i in extra {
            z[i] = true;
        }
        z
    };

    let mut points = Vec::with_capacity(2 * n + 1);
    // Everything in C open once.
    points.push(FacetPoint {
        eta: 1.0 - miss_c,
        y: base_y(&[]),
        z: base_z(&[]),
    });
    // One member of C doubled.
    for &l in c_set {
        points.push(FacetPoint {
            eta: 1.0 - (1.0 - p_row[l]) * miss_c,
            y: base_y(&[(l, 1)]),
            z: base_z(&[]),
        });
    }
    // One member of C together with the full-coverage location.
    for &l in c_set {
        let mut y = vec![0u32; n];
        y[i1] = 1;
        y[l] = 1;
        let mut z = vec![false; n];
        z[i1] = true;
        z[l] = true;
        points.push(FacetPoint { eta: 1.0, y, z });
    }
    // Locations outside C at their secant knots k and k+1.
    for &l in &rest {
        let k = k_by_loc[l];
        debug_assert!(k >= 1);
        let miss_l = (1.0 - p_row[l]).powi(k as i32);
        points.push(FacetPoint {
            eta: 1.0 - miss_l * miss_c,
            y: base_y(&[(l, k)]),
            z: base_z(&[l]),
        });
        points.push(FacetPoint {
            eta: 1.0 - miss_l * (1.0 - p_row[l]) * miss_c,
            y: base_y(&[(l, k + 1)]),
            z: base_z(&[l]),
        });
    }
    // Full-coverage locations alone, once and doubled.
    for &l in &full {
        let mut z = vec![false; n];
        z[l] = true;
        let mut y = vec![0u32; n];
        y[l] = 1;
        points.push(FacetPoint {
            eta: 1.0,
            y: y.clone(),
            z: z.clone(),
        });
        y[l] = 2;
        points.push(FacetPoint { eta: 1.0, y, z });
    }
    debug_assert_eq!(points.len(), 2 * n + 1);
    Ok(points)
}

/// Number of affinely independent points in the set (rank of the difference
/// matrix plus one), by Gaussian elimination with partial pivoting.
pub fn affine_rank(points: &[Vec<f64>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let dim = points[0].len();
    let mut rows: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        let mut pivot = None;
        let mut best = 1e-9;
        for (r, row) in rows.iter().enumerate().skip(rank) {
            if row[col].abs() > best {
                best = row[col].abs();
                pivot = Some(r);
            }
        }
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let lead = rows[rank][col];
        for r in 0..rows.len() {
            if r != rank && rows[r][col].abs() > 0.0 {
                let factor = rows[r][col] / lead;
                let (head, tail) = rows.split_at_mut(rank.max(r));
                let (src, dst) = if r > rank {
                    (&head[rank], &mut tail[0])
                } else {
                    (&tail[0], &mut head[r])
                };
                for c in col..dim {
                    dst[c] -= factor * src[c];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank + 1
}
