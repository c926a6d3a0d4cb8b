use mpclp::bnc::{self, EnabledCuts, SolverConfig};
use mpclp::instance::Instance;
use mpclp::oracle::{enumerate_optimal, EnumerationBudget};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn main() {
    let budget = EnumerationBudget::default();
    for seed in 800..850u64 {
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
                        1 => {
                            if rng.gen_bool(0.5) {
                                1.0
                            } else {
                                0.0
                            }
                        }
                        2 => rng.gen_range(0.95..1.0),
                        3 => rng.gen_range(0.0..0.05),
                        4 => {
                            if j == 0 {
                                1.0
                            } else {
                                rng.gen_range(0.0..1.0)
                            }
                        }
                        5 => {
                            if i == 0 {
                                0.0
                            } else {
                                rng.gen_range(0.0..1.0)
                            }
                        }
                        _ => match rng.gen_range(0..20) {
                            0..=2 => 1.0,
                            3..=7 => 0.0,
                            _ => rng.gen_range(0.0..1.0),
                        },
                    })
                    .collect()
            })
            .collect();
        let theta = [0.0, 0.2, 0.5, 0.8, 1.0][rng.gen_range(0..5)];
        let demand: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..5.0)).collect();
        let inst = Instance::new(coverage, demand, k, theta).unwrap();
        let (opt, _) = enumerate_optimal(&inst, &budget).unwrap();
        for (tag, cuts) in [
            ("vanilla", EnabledCuts::vanilla()),
            ("enhanced", EnabledCuts::enhanced()),
            ("lifted", EnabledCuts::lifted()),
            ("full", EnabledCuts::full()),
        ] {
            let t0 = std::time::Instant::now();
            let cfg = SolverConfig {
                enabled_cuts: cuts,
                time_limit_s: 20.0,
                ..SolverConfig::default()
            };
            let res = bnc::solve(&inst, &cfg).unwrap();
            let dt = t0.elapsed().as_secs_f64();
            if dt > 1.0 || res.status != bnc::SolveStatus::Optimal {
                eprintln!(
                    "seed={seed} style={style} n={n} m={m} k={k} theta={theta} {tag}: {:?} nodes={} dt={dt:.1}s val={} opt={opt}",
                    res.status, res.nodes, res.best_value
                );
            }
        }
    }
    eprintln!("done");
}
