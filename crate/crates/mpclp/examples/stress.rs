use mpclp::bnc::{self, EnabledCuts, SolverConfig};
use mpclp::instance::Instance;
use mpclp::lp::LpProblem;
use mpclp::oracle::{enumerate_optimal, verify_cut_validity, EnumerationBudget};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn main() {
    let budget = EnumerationBudget::default();
    let mut failures = 0;

    // 1. Wide oracle equivalence with adversarial structure.
    for seed in 0..2000u64 {
        if seed % 50 == 0 { eprintln!("seed {seed}"); }
        let t0 = std::time::Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let m = rng.gen_range(1..=6);
        let k = rng.gen_range(2..=5).min(5);
        let style = seed % 7;
        let coverage: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| match style {
                        0 => rng.gen_range(0.0..1.0),
                        1 => if rng.gen_bool(0.5) { 1.0 } else { 0.0 },
                        2 => rng.gen_range(0.95..1.0),          // near-one
                        3 => rng.gen_range(0.0..0.05),          // near-zero
                        4 => if j == 0 { 1.0 } else { rng.gen_range(0.0..1.0) }, // all-ones col
                        5 => if i == 0 { 0.0 } else { rng.gen_range(0.0..1.0) }, // dead location
                        _ => match rng.gen_range(0..20) { 0..=2 => 1.0, 3..=7 => 0.0, _ => rng.gen_range(0.0..1.0) },
                    })
                    .collect()
            })
            .collect();
        let theta = [0.0, 0.2, 0.5, 0.8, 1.0][rng.gen_range(0..5)];
        let demand: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..5.0)).collect();
        let inst = Instance::new(coverage, demand, k, theta).unwrap();
        let (opt, _) = enumerate_optimal(&inst, &budget).unwrap();
        for cuts in [EnabledCuts::vanilla(), EnabledCuts::enhanced(), EnabledCuts::lifted(), EnabledCuts::full()] {
            let cfg = SolverConfig { enabled_cuts: cuts, collect_cuts: seed % 10 == 0, ..SolverConfig::default() };
            match bnc::solve(&inst, &cfg) {
                Ok(res) => {
                    if (res.best_value - opt).abs() > 1e-6 * opt.abs().max(1.0) {
                        eprintln!("MISMATCH seed={seed} style={style} cuts={cuts:?}: {} vs {}", res.best_value, opt);
                        failures += 1;
                    }
                    for cut in &res.collected_cuts {
                        let rep = verify_cut_validity(&inst, cut, &budget).unwrap();
                        if !rep.is_valid(1e-9) {
                            eprintln!("INVALID CUT seed={seed}: {} viol {}", cut, rep.max_violation);
                            failures += 1;
                        }
                    }
                }
                Err(e) => { eprintln!("SOLVE ERROR seed={seed}: {e}"); failures += 1; }
            }
        }
        if t0.elapsed().as_secs_f64() > 2.0 {
            eprintln!("SLOW seed={seed} took {:.1}s", t0.elapsed().as_secs_f64());
        }
    }
    eprintln!("oracle stress done");

    // 2. Simplex fuzz vs feasibility/determinism on larger random LPs.
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(777 + seed);
        let n = rng.gen_range(5..=30);
        let mrows = rng.gen_range(1..=12);
        let mut p = LpProblem::new(n);
        for j in 0..n {
            p.set_objective(j, rng.gen_range(-2.0..2.0));
            p.set_bound(j, 0.0, rng.gen_range(0.1..4.0));
        }
        for _ in 0..mrows {
            let mut coefs = Vec::new();
            for j in 0..n {
                if rng.gen_bool(0.5) { coefs.push((j, rng.gen_range(-1.5..1.5))); }
            }
            if coefs.is_empty() { continue; }
            let rhs = if rng.gen_bool(0.25) { rng.gen_range(-1.0..0.0) } else { rng.gen_range(0.0..4.0) };
            p.add_row(coefs, rhs);
        }
        let a = p.solve();
        let b = p.solve();
        if a.status != b.status || (a.status == mpclp::lp::LpStatus::Optimal && a.objective.to_bits() != b.objective.to_bits()) {
            eprintln!("LP NONDETERMINISM seed={seed}"); failures += 1;
        }
        if a.status == mpclp::lp::LpStatus::Optimal && !p.is_feasible(&a.primal, 1e-7) {
            eprintln!("LP INFEASIBLE PRIMAL seed={seed}"); failures += 1;
        }
        if a.status == mpclp::lp::LpStatus::IterationLimit {
            eprintln!("LP ITERATION LIMIT seed={seed}"); failures += 1;
        }
    }
    eprintln!("lp stress done");

    if failures > 0 {
        eprintln!("{failures} FAILURES");
        std::process::exit(1);
    }
    eprintln!("all stress checks passed");
}
