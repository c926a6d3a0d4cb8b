//! Seeded property suites behind the `verify` subcommand, shared with the
//! acceptance tests: the analytic bounds backing the lifted subadditive
//! family, exhaustive cut validity, facet witnesses, and solver-vs-oracle
//! equivalence on random instances.

use crate::bnc::{self, SolverConfig};
use crate::cuts::{self, h_ik, k_star};
use crate::instance::Instance;
use crate::objective::prob_covered;
use crate::oracle::{enumerate_optimal, verify_cut_validity, EnumerationBudget};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::io::Write;

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub violations: u64,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport {
            name: name.to_string(),
            checks: 0,
            violations: 0,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn check(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.notes.len() < 32 {
                self.notes.push(note());
            }
        }
    }
}

/// Random test instance in the style of the benchmark family: square
/// (customers = locations), coverage with forced shares of exact ones and
/// zeros, positive demands.
pub fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(3..=8);
    let k = rng.gen_range(2..=4);
    let theta = *[0.0, 0.2, 0.5, 0.8, 1.0].choose(rng).unwrap();
    random_instance_with(rng, n, n, k, theta)
}

pub fn random_instance_with(
    rng: &mut ChaCha8Rng,
    n_locations: usize,
    n_customers: usize,
    k: u32,
    theta: f64,
) -> Instance {
    let coverage: Vec<Vec<f64>> = (0..n_locations)
        .map(|_| {
            (0..n_customers)
                .map(|_| match rng.gen_range(0..20) {
                    0..=2 => 1.0,
                    3..=7 => 0.0,
                    _ => rng.gen_range(0.0..1.0),
                })
                .collect()
        })
        .collect();
    let demand: Vec<f64> = (0..n_customers).map(|_| rng.gen_range(0.5..2.0)).collect();
    Instance::new(coverage, demand, k, theta).expect("generated instance is valid")
}

/// A fractional point satisfying the flag/count linking of the relaxation.
pub fn random_linked_point(rng: &mut ChaCha8Rng, n: usize, k: u32) -> (Vec<f64>, Vec<f64>) {
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    for i in 0..n {
        z[i] = match rng.gen_range(0..5) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen_range(0.0..1.0),
        };
        if z[i] > 0.0 {
            y[i] = rng.gen_range(z[i]..=f64::from(k) * z[i]);
        }
    }
    (y, z)
}

/// Analytic bounds: subadditivity of `1 - e^x` on the nonpositive axis, the
/// secant bounds on single-location coverage, the minimizing secant index,
/// and the min-identity between the coverage product and its smooth
/// surrogate.
pub fn lemma_suite(seed: u64, cases: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("lemmas");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Subadditivity of q(x) = 1 - e^x for x <= 0.
    for _ in 0..cases {
        let d1 = -rng.gen_range(0.0..5.0f64);
        let d2 = -rng.gen_range(0.0..5.0f64);
        let q = |x: f64| 1.0 - x.exp();
        rep.check(q(d1 + d2) <= q(d1) + q(d2) + 1e-12, || {
            format!("subadditivity failed at ({d1}, {d2})")
        });
    }

    // Secant bound h_{i,k} >= 1 - (1-p)^y, exhaustive over a p grid, K = 6.
    let k_cap = 6u32;
    for step in 0..100 {
        let p = f64::from(step) * 0.01;
        for k in 1..k_cap {
            for (y, z) in (1..=k_cap).map(|y| (y, 1u32)).chain([(0, 0)]) {
                let lhs = 1.0 - (1.0 - p).powi(y as i32);
                let rhs = h_ik(p, k, f64::from(y), f64::from(z));
                rep.check(lhs <= rhs + 1e-12, || {
                    format!("secant bound failed at p={p}, k={k}, y={y}, z={z}")
                });
            }
        }
        // One-step bound 1 - (1-p)^(y-z) <= p (y-z).
        for z in 0..=1u32 {
            for y in z..=k_cap {
                let d = f64::from(y - z);
                let lhs = 1.0 - (1.0 - p).powi((y - z) as i32);
                rep.check(lhs <= p * d + 1e-12, || {
                    format!("one-step bound failed at p={p}, y={y}, z={z}")
                });
            }
        }
    }

    // The closed-form secant index agrees with enumeration and h stays
    // nonnegative at the minimizer.
    for _ in 0..cases {
        let k = rng.gen_range(2..=8u32);
        let p = rng.gen_range(0.001..0.999);
        let z = rng.gen_range(0.0..=1.0f64);
        let y = if z == 0.0 {
            0.0
        } else {
            rng.gen_range(z..=f64::from(k) * z)
        };
        let ks = k_star(y, z, k);
        let h_best = h_ik(p, ks, y, z);
        let by_enum = (1..k)
            .map(|c| h_ik(p, c, y, z))
            .fold(f64::INFINITY, f64::min);
        rep.check((h_best - by_enum).abs() <= 1e-10, || {
            format!("secant index suboptimal at p={p}, y={y}, z={z}, K={k}")
        });
        rep.check(h_best >= -1e-10, || {
            format!("negative secant minimum at p={p}, y={y}, z={z}")
        });
    }

    // Coverage product equals min(1, smooth surrogate) on small grids.
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let row: Vec<f64> = (0..n)
            .map(|_| match rng.gen_range(0..5) {
                0 => 1.0,
                1 => 0.0,
                _ => rng.gen_range(0.0..1.0),
            })
            .collect();
        let coverage: Vec<Vec<f64>> = row.iter().map(|&p| vec![p]).collect();
        let inst = Instance::new(coverage, vec![1.0], 13, 0.0).unwrap();
        let mut y = vec![0u32; n];
        'grid: loop {
            let direct = prob_covered(&row, &y);
            let smooth = crate::objective::prob_covered_smooth(&inst, 0, &y).min(1.0);
            rep.check((direct - smooth).abs() <= 1e-12, || {
                format!("min identity failed at y={y:?}, row={row:?}")
            });
            let mut pos = 0;
            loop {
                if pos == n {
                    break 'grid;
                }
                y[pos] += 1;
                if y[pos] <= 3 {
                    break;
                }
                y[pos] = 0;
                pos += 1;
            }
        }
    }

    rep
}

/// Cut-level properties: every generated cut is exhaustively valid, the
/// enhanced outer approximation dominates the plain one, and the linear-time
/// max-coverage separation matches enumeration.
pub fn cut_suite(seed: u64, cases: u64, mut dump: Option<&mut dyn Write>) -> SuiteReport {
    let mut rep = SuiteReport::new("cuts");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = EnumerationBudget::default();

    for _ in 0..cases {
        let inst = random_instance(&mut rng);
        let n = inst.n_locations();
        let j = rng.gen_range(0..inst.n_customers());
        let (y, z) = random_linked_point(&mut rng, n, inst.k());
        let zeta = rng.gen_range(0.0..=1.0);
        let eta = rng.gen_range(0.0..=1.0);

        let mut produced: Vec<cuts::Cut> = Vec::new();
        if let Some(c) = cuts::separate_submodular(&inst, j, &z, zeta, 1e-6) {
            produced.push(c);
        }
        let rounded = cuts::round_to_nearest_integer(&y);
        produced.push(cuts::build_oa_cut(&inst, j, &rounded));
        produced.push(cuts::build_eoa_cut(&inst, j, &rounded));
        if let Some(c) = cuts::separate_ls_local_search(&inst, j, &y, &z, eta, 1e-6) {
            produced.push(c);
        }
        for cut in &produced {
            let report = verify_cut_validity(&inst, cut, &budget).unwrap();
            rep.check(report.is_valid(1e-9), || {
                format!(
                    "invalid {} cut (violation {:.3e} at {:?})",
                    cut.kind.label(),
                    report.max_violation,
                    report.worst_y
                )
            });
            if let Some(w) = dump.as_deref_mut() {
                let viol = cut.violation_at(zeta, eta, &y, &z);
                let _ = writeln!(w, "{cut} violation={viol:+.3e}");
            }
        }

        // EOA pointwise dominance over OA on the linked region.
        let oa = cuts::build_oa_cut(&inst, j, &rounded);
        let eoa = cuts::build_eoa_cut(&inst, j, &rounded);
        for _ in 0..10 {
            let (yy, zz) = random_linked_point(&mut rng, n, inst.k());
            rep.check(
                eoa.coverage_bound_at(&yy, &zz) <= oa.coverage_bound_at(&yy, &zz) + 1e-12,
                || "enhanced OA weaker than OA at a linked point".to_string(),
            );
        }

        // Linear-time separation returns the enumerated minimum.
        let row = inst.row(j);
        let mut best = row.iter().zip(&z).map(|(&p, &zi)| p * zi).sum::<f64>();
        for &t in row.iter() {
            let f = t + row
                .iter()
                .zip(&z)
                .map(|(&p, &zi)| (p - t).max(0.0) * zi)
                .sum::<f64>();
            best = best.min(f);
        }
        let cut = cuts::separate_submodular(&inst, j, &z, best + 1.0, 1e-6)
            .expect("forced violation must separate");
        let bound = cut.coverage_bound_at(&vec![0.0; n], &z);
        rep.check((bound - best).abs() <= 1e-9, || {
            format!("separation bound {bound} differs from enumerated {best}")
        });
    }

    rep
}

/// Facet witnesses: the structured point sets lie in the coverage set, meet
/// the lifted subadditive cut with equality, and have full affine rank.
pub fn facet_suite(seed: u64, cases: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("facets");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let n = rng.gen_range(2..=6);
        let k_cap = rng.gen_range(2..=4u32);
        let mut row: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.95)).collect();
        let full_at = rng.gen_range(0..n);
        row[full_at] = 1.0;
        let coverage: Vec<Vec<f64>> = row.iter().map(|&p| vec![p]).collect();
        let inst = Instance::new(coverage, vec![1.0], k_cap, 0.0).unwrap();
        let c_set: Vec<usize> = inst
            .partial_set(0)
            .iter()
            .cloned()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let k_by_loc: Vec<u32> = (0..n).map(|_| rng.gen_range(1..k_cap)).collect();

        let cut = cuts::build_ls_cut(&inst, 0, &c_set, &k_by_loc);
        let points = cuts::facet_witness_points(&row, &c_set, &k_by_loc, full_at).unwrap();
        rep.check(points.len() == 2 * n + 1, || "wrong point count".into());
        for pt in &points {
            let yf: Vec<f64> = pt.y.iter().map(|&c| f64::from(c)).collect();
            let zf: Vec<f64> = pt.z.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
            let viol = cut.violation_at(0.0, pt.eta, &yf, &zf);
            rep.check(viol.abs() <= 1e-9, || {
                format!("witness off the cut by {viol:+.3e}")
            });
            let member = pt.eta <= prob_covered(&row, &pt.y) + 1e-9
                && pt
                    .y
                    .iter()
                    .zip(&pt.z)
                    .all(|(&y, &z)| u32::from(z) <= y && y <= k_cap * u32::from(z));
            rep.check(member, || format!("witness outside the set: {pt:?}"));
        }
        let flat: Vec<Vec<f64>> = points.iter().map(|p| p.flatten()).collect();
        rep.check(cuts::affine_rank(&flat) == 2 * n + 1, || {
            format!("rank-deficient witness set for row {row:?}")
        });
    }
    rep
}

/// Branch-and-cut vs exhaustive enumeration on random instances, with every
/// generated cut exhaustively validated.
pub fn oracle_suite(seed: u64, cases: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = EnumerationBudget::default();
    for case in 0..cases {
        let inst = random_instance(&mut rng);
        let (opt, _) = enumerate_optimal(&inst, &budget).unwrap();
        let cfg = SolverConfig {
            collect_cuts: true,
            ..SolverConfig::default()
        };
        match bnc::solve(&inst, &cfg) {
            Ok(res) => {
                let tol = 1e-6 * opt.abs().max(1.0);
                rep.check((res.best_value - opt).abs() <= tol, || {
                    format!(
                        "case {case}: solver {} vs oracle {} (|I|={}, K={}, theta={})",
                        res.best_value,
                        opt,
                        inst.n_locations(),
                        inst.k(),
                        inst.theta()
                    )
                });
                for cut in &res.collected_cuts {
                    let report = verify_cut_validity(&inst, cut, &budget).unwrap();
                    rep.check(report.is_valid(1e-9), || {
                        format!(
                            "case {case}: solver added an invalid {} cut ({:.3e})",
                            cut.kind.label(),
                            report.max_violation
                        )
                    });
                }
            }
            Err(e) => rep.check(false, || format!("case {case}: solver error: {e}")),
        }
    }
    rep
}
