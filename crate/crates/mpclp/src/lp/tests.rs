use super::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Brute-force LP oracle: enumerates every candidate vertex (each choice of
/// active rows, free variables, and bound assignment for the rest), solves
/// the small linear system, and keeps the best feasible point.
fn best_vertex(p: &LpProblem, a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<f64> {
    let n = c.len();
    let m = b.len();
    let mut best: Option<f64> = None;

    let var_subsets = |k: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    };
    let row_subsets = |k: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, m, k, &mut cur, &mut out);
        out
    };

    for k in 0..=m.min(n) {
        for rows in row_subsets(k) {
            for free in var_subsets(k) {
                let fixed: Vec<usize> = (0..n).filter(|j| !free.contains(j)).collect();
                for assign in 0..(1u32 << fixed.len()) {
                    let mut x = vec![0.0; n];
                    for (t, &j) in fixed.iter().enumerate() {
                        let (lb, ub) = p.bounds(j);
                        x[j] = if assign & (1 << t) != 0 { ub } else { lb };
                    }
                    if k > 0 {
                        // Solve the k x k system for the free variables.
                        let mut mat = vec![0.0; k * k];
                        let mut rhs = vec![0.0; k];
                        for (ri, &r) in rows.iter().enumerate() {
                            rhs[ri] = b[r] - fixed.iter().map(|&j| a[r][j] * x[j]).sum::<f64>();
                            for (ci, &j) in free.iter().enumerate() {
                                mat[ri * k + ci] = a[r][j];
                            }
                        }
                        if !solve_dense(&mut mat, &mut rhs, k) {
                            continue;
                        }
                        for (ci, &j) in free.iter().enumerate() {
                            x[j] = rhs[ci];
                        }
                    }
                    if p.is_feasible(&x, 1e-9) {
                        let val = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum::<f64>();
                        best = Some(best.map_or(val, |b: f64| b.max(val)));
                    }
                }
            }
        }
    }
    best
}

fn solve_dense(mat: &mut [f64], rhs: &mut [f64], k: usize) -> bool {
    for col in 0..k {
        let mut piv = col;
        for r in col + 1..k {
            if mat[r * k + col].abs() > mat[piv * k + col].abs() {
                piv = r;
            }
        }
        if mat[piv * k + col].abs() < 1e-10 {
            return false;
        }
        if piv != col {
            for c in 0..k {
                mat.swap(col * k + c, piv * k + c);
            }
            rhs.swap(col, piv);
        }
        let lead = mat[col * k + col];
        for r in 0..k {
            if r != col {
                let f = mat[r * k + col] / lead;
                if f != 0.0 {
                    for c in col..k {
                        mat[r * k + c] -= f * mat[col * k + c];
                    }
                    rhs[r] -= f * rhs[col];
                }
            }
        }
    }
    for col in 0..k {
        rhs[col] /= mat[col * k + col];
    }
    true
}

#[test]
fn two_variable_coverage_lp() {
    // max zeta s.t. zeta <= 0.5 z, z <= 1.
    let mut p = LpProblem::new(2);
    p.set_objective(0, 1.0);
    p.set_bound(0, 0.0, f64::INFINITY);
    p.set_bound(1, 0.0, 1.0);
    p.add_row(vec![(0, 1.0), (1, -0.5)], 0.0);
    let sol = p.solve();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - 0.5).abs() < 1e-9);
    assert!((sol.primal[0] - 0.5).abs() < 1e-9);
    assert!((sol.primal[1] - 1.0).abs() < 1e-9);
}

#[test]
fn aggregate_budget_row() {
    // max sum_i c_i y_i with sum y <= K and y <= K: optimum puts everything
    // on the largest coefficient.
    let k = 4.0;
    let mut p = LpProblem::new(3);
    let coefs = [0.3, 0.9, 0.5];
    for (i, &c) in coefs.iter().enumerate() {
        p.set_objective(i, c);
        p.set_bound(i, 0.0, k);
    }
    p.add_row(vec![(0, 1.0), (1, 1.0), (2, 1.0)], k);
    let sol = p.solve();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - k * 0.9).abs() < 1e-9);
}

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..40 {
        let n = rng.gen_range(3..=10);
        let m = rng.gen_range(1..=3);
        let mut p = LpProblem::new(n);
        let mut c = vec![0.0; n];
        for j in 0..n {
            c[j] = rng.gen_range(-1.0..1.0);
            p.set_objective(j, c[j]);
            p.set_bound(j, 0.0, rng.gen_range(0.5..2.0));
        }
        let mut a = vec![vec![0.0; n]; m];
        let mut b = vec![0.0; m];
        for r in 0..m {
            let mut coefs = Vec::new();
            for j in 0..n {
                if rng.gen_bool(0.7) {
                    a[r][j] = rng.gen_range(-1.0..1.0);
                    coefs.push((j, a[r][j]));
                }
            }
            // Mix in negative right-hand sides to exercise phase 1.
            b[r] = if rng.gen_bool(0.3) {
                rng.gen_range(-0.5..0.0)
            } else {
                rng.gen_range(0.5..3.0)
            };
            p.add_row(coefs, b[r]);
        }
        let sol = p.solve();
        match best_vertex(&p, &a, &b, &c) {
            Some(expect) => {
                assert_eq!(sol.status, LpStatus::Optimal, "case {case}");
                assert!(
                    (sol.objective - expect).abs() < 1e-6,
                    "case {case}: simplex {} vs enumeration {}",
                    sol.objective,
                    expect
                );
                assert!(p.is_feasible(&sol.primal, FEASIBILITY_TOL));
            }
            None => {
                assert_eq!(sol.status, LpStatus::Infeasible, "case {case}");
            }
        }
    }
}

#[test]
fn added_row_never_improves_and_resolve_is_stable() {
    let mut p = LpProblem::new(2);
    p.set_objective(0, 1.0);
    p.set_objective(1, 1.0);
    p.set_bound(0, 0.0, 2.0);
    p.set_bound(1, 0.0, 2.0);
    p.add_row(vec![(0, 1.0), (1, 1.0)], 3.0);
    let before = p.solve();
    let again = p.solve();
    assert_eq!(before.objective, again.objective);

    p.add_row(vec![(0, 1.0)], 0.5);
    let after = p.solve();
    assert!(after.objective <= before.objective + 1e-9);
    assert!((after.primal[0] - 0.5).abs() < 1e-7);
}

#[test]
fn bound_fixing_forces_variable() {
    let mut p = LpProblem::new(2);
    p.set_objective(0, 1.0);
    p.set_objective(1, 0.5);
    p.set_bound(0, 0.0, 5.0);
    p.set_bound(1, 0.0, 5.0);
    p.add_row(vec![(0, 1.0), (1, 1.0)], 4.0);
    p.set_bound(0, 0.0, 0.0);
    let sol = p.solve();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert_eq!(sol.primal[0], 0.0);
    assert!((sol.objective - 2.0).abs() < 1e-7);
}

#[test]
fn detects_infeasible_bound_row_conflict() {
    // x >= 2 but row forces x <= 1.
    let mut p = LpProblem::new(1);
    p.set_objective(0, 1.0);
    p.set_bound(0, 2.0, 5.0);
    p.add_row(vec![(0, 1.0)], 1.0);
    let sol = p.solve();
    assert_eq!(sol.status, LpStatus::Infeasible);
}

#[test]
fn phase_one_recovers_feasibility() {
    // -x1 - x2 <= -1 forces x1 + x2 >= 1 with the origin infeasible.
    let mut p = LpProblem::new(2);
    p.set_objective(0, -1.0);
    p.set_objective(1, -2.0);
    p.set_bound(0, 0.0, 4.0);
    p.set_bound(1, 0.0, 4.0);
    p.add_row(vec![(0, -1.0), (1, -1.0)], -1.0);
    let sol = p.solve();
    assert_eq!(sol.status, LpStatus::Optimal);
    // Cheapest way to reach the half-space: x1 = 1.
    assert!((sol.objective + 1.0).abs() < 1e-7);
}

#[test]
#[should_panic(expected = "crossing bounds")]
fn set_bound_rejects_crossing() {
    let mut p = LpProblem::new(1);
    p.set_bound(0, 1.0, 0.0);
}

#[test]
fn lp_text_export() {
    let mut p = LpProblem::new(2);
    p.set_objective(0, 1.5);
    p.set_bound(0, 0.0, 2.0);
    p.set_bound(1, 0.0, 1.0);
    p.add_row(vec![(0, 1.0), (1, -0.5)], 0.25);
    let mut buf = Vec::new();
    p.write_lp(&mut buf, |j| format!("x{j}")).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.contains("Maximize"));
    assert!(text.contains("+1.5 x0"));
    assert!(text.contains("<= 0.25"));
    assert!(text.contains("End"));
}

#[test]
fn determinism_across_solves() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 12;
    let mut p = LpProblem::new(n);
    for j in 0..n {
        p.set_objective(j, rng.gen_range(-1.0..1.0));
        p.set_bound(j, 0.0, rng.gen_range(1.0..3.0));
    }
    for _ in 0..6 {
        let mut coefs: Vec<(usize, f64)> = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.5) {
                coefs.push((j, rng.gen_range(-1.0..1.0)));
            }
        }
        p.add_row(coefs, rng.gen_range(0.5..2.0));
    }
    let a = p.solve();
    let b = p.solve();
    assert_eq!(a.status, b.status);
    assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    assert_eq!(a.primal, b.primal);
}
