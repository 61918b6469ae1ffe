//! Property tests for the LP/MIP core: strong duality at optima, Farkas
//! certificates on infeasible instances, and branch-and-bound agreement with
//! exhaustive enumeration on small binary programs.

use gridplan_core::lp::{self, Integrality, LinearProgram, LpStatus, Relation};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct RandomLp {
    lp: LinearProgram,
}

fn relation_strategy() -> impl Strategy<Value = Relation> {
    prop_oneof![Just(Relation::Le), Just(Relation::Eq), Just(Relation::Ge)]
}

fn coeff() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-50i32..=50).prop_map(|v| v as f64 / 10.0),
        (-5i32..=5).prop_map(|v| v as f64),
    ]
}

prop_compose! {
    fn random_lp(max_vars: usize, max_rows: usize, n_binaries: usize)(
        n in 1..=max_vars,
    )(
        n in Just(n),
        obj in prop::collection::vec(coeff(), n),
        bounds in prop::collection::vec((0u8..4, -10i32..=10, 0i32..=10), n),
        rows in prop::collection::vec(
            (prop::collection::vec(coeff(), n), relation_strategy(), -20i32..=20),
            0..=max_rows,
        ),
    ) -> RandomLp {
        let mut lp = LinearProgram::new(n);
        for (j, c) in obj.iter().enumerate() {
            lp.set_objective(j, *c);
        }
        for (j, &(kind, lo, span)) in bounds.iter().enumerate() {
            let lo = lo as f64;
            let up = lo + span as f64;
            match kind {
                0 => lp.set_bounds(j, lo, up),
                1 => lp.set_bounds(j, lo, f64::INFINITY),
                2 => lp.set_bounds(j, f64::NEG_INFINITY, up),
                _ => lp.set_bounds(j, 0.0, 10.0),
            }
        }
        for (terms, rel, rhs) in rows {
            let sparse: Vec<(usize, f64)> = terms
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() > 0.05)
                .map(|(j, v)| (j, *v))
                .collect();
            lp.add_row(&sparse, rel, rhs as f64);
        }
        for j in 0..n.min(n_binaries) {
            if lp.bounds(j).0 >= -1e-9 && lp.bounds(j).1 <= 1.0 + 1e-9 {
                lp.mark_binary(j);
            } else {
                lp.set_bounds(j, 0.0, 1.0);
                lp.mark_binary(j);
            }
        }
        RandomLp { lp }
    }
}

fn primal_residual(lp: &LinearProgram, x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..lp.n_rows() {
        let (terms, rel, rhs) = lp.row(r);
        let lhs: f64 = terms.iter().map(|&(j, v)| v * x[j]).sum();
        let viol = match rel {
            Relation::Le => (lhs - rhs).max(0.0),
            Relation::Ge => (rhs - lhs).max(0.0),
            Relation::Eq => (lhs - rhs).abs(),
        };
        worst = worst.max(viol);
    }
    for j in 0..lp.n_vars() {
        let (lo, up) = lp.bounds(j);
        if lo.is_finite() {
            worst = worst.max(lo - x[j]);
        }
        if up.is_finite() {
            worst = worst.max(x[j] - up);
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lp_optimum_is_feasible_and_strongly_dual(r in random_lp(7, 9, 0)) {
        let sol = lp::solve_lp(&r.lp).unwrap();
        if sol.status == LpStatus::Optimal {
            let resid = primal_residual(&r.lp, &sol.primal);
            prop_assert!(resid <= 1e-6, "residual {resid}");
            let dual = sol.dual_objective(&r.lp);
            let gap = (sol.objective - dual).abs();
            prop_assert!(
                gap <= 1e-6 * (1.0 + sol.objective.abs()),
                "duality gap {gap}: primal {} dual {}", sol.objective, dual
            );
        }
    }

    #[test]
    fn infeasible_lp_returns_valid_farkas_ray(r in random_lp(5, 8, 0)) {
        let sol = lp::solve_lp(&r.lp).unwrap();
        if sol.status == LpStatus::Infeasible {
            let y = sol.farkas.clone().expect("farkas ray on infeasible LP");
            let margin = r.lp.farkas_violation(&y);
            prop_assert!(
                margin > 1e-9,
                "certificate margin {margin} not positive; y = {y:?}"
            );
        }
    }

    #[test]
    fn mip_matches_exhaustive_enumeration(r in random_lp(6, 6, 4)) {
        let binaries = r.lp.binary_vars();
        let sol = lp::solve_mip(&r.lp).unwrap();

        // enumerate all assignments; for each, fix the binaries and solve
        let mut best: Option<f64> = None;
        'mask: for mask in 0u32..(1 << binaries.len()) {
            let mut fixed = r.lp.clone();
            for (k, &j) in binaries.iter().enumerate() {
                let v = if mask & (1 << k) != 0 { 1.0 } else { 0.0 };
                let (lo, up) = r.lp.bounds(j);
                if v < lo - 1e-9 || v > up + 1e-9 {
                    continue 'mask;
                }
                fixed.set_bounds(j, v, v);
            }
            let s = lp::solve_lp(&fixed).unwrap();
            match s.status {
                LpStatus::Optimal => {
                    best = Some(match best {
                        None => s.objective,
                        Some(b) => b.min(s.objective),
                    });
                }
                LpStatus::Unbounded => {
                    best = Some(f64::NEG_INFINITY);
                }
                _ => {}
            }
        }

        match best {
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
            Some(v) if v == f64::NEG_INFINITY => {
                prop_assert_eq!(sol.status, LpStatus::Unbounded);
            }
            Some(v) => {
                prop_assert_eq!(sol.status, LpStatus::Optimal);
                prop_assert!(
                    (sol.objective - v).abs() <= 1e-6 * (1.0 + v.abs()),
                    "bb {} vs enumeration {}", sol.objective, v
                );
                // relaxation bound: MIP optimum >= LP relaxation optimum
                let relaxed = lp::solve_lp(&r.lp).unwrap();
                if relaxed.status == LpStatus::Optimal {
                    prop_assert!(sol.objective >= relaxed.objective - 1e-6);
                }
                // binaries are integral
                for &j in &binaries {
                    let v = sol.primal[j];
                    prop_assert!((v - v.round()).abs() <= 1e-6);
                }
            }
        }
    }
}

#[test]
fn textbook_instances() {
    // max 4x + 3y == min -4x - 3y with three Le rows; optimum (4, 5)
    let mut lp1 = LinearProgram::new(2);
    lp1.set_objective(0, -4.0);
    lp1.set_objective(1, -3.0);
    lp1.set_bounds(0, 0.0, f64::INFINITY);
    lp1.set_bounds(1, 0.0, f64::INFINITY);
    lp1.add_row(&[(0, 1.0), (1, -1.0)], Relation::Le, 1.0);
    lp1.add_row(&[(0, 2.0), (1, -1.0)], Relation::Le, 3.0);
    lp1.add_row(&[(1, 1.0)], Relation::Le, 5.0);
    let s1 = lp::solve_lp(&lp1).unwrap();
    assert_eq!(s1.status, LpStatus::Optimal);
    assert!((s1.objective + 31.0).abs() < 1e-9);

    // max 5a + 4b + 3c; optimum 13
    let mut lp2 = LinearProgram::new(3);
    for (j, c) in [(0, -5.0), (1, -4.0), (2, -3.0)] {
        lp2.set_objective(j, c);
        lp2.set_bounds(j, 0.0, f64::INFINITY);
    }
    lp2.add_row(&[(0, 2.0), (1, 3.0), (2, 1.0)], Relation::Le, 5.0);
    lp2.add_row(&[(0, 4.0), (1, 1.0), (2, 2.0)], Relation::Le, 11.0);
    lp2.add_row(&[(0, 3.0), (1, 4.0), (2, 2.0)], Relation::Le, 8.0);
    let s2 = lp::solve_lp(&lp2).unwrap();
    assert!((s2.objective + 13.0).abs() < 1e-9);

    // degenerate instance that needs several pivots
    let mut lp3 = LinearProgram::new(3);
    for (j, c) in [(0, 10.0), (1, 12.0), (2, 12.0)] {
        lp3.set_objective(j, -c);
        lp3.set_bounds(j, 0.0, f64::INFINITY);
    }
    lp3.add_row(&[(0, 1.0), (1, 2.0), (2, 2.0)], Relation::Le, 20.0);
    lp3.add_row(&[(0, 2.0), (1, 1.0), (2, 2.0)], Relation::Le, 20.0);
    lp3.add_row(&[(0, 2.0), (1, 2.0), (2, 1.0)], Relation::Le, 20.0);
    let s3 = lp::solve_lp(&lp3).unwrap();
    assert!((s3.objective + 136.0).abs() < 1e-9);
    for v in &s3.primal {
        assert!((v - 4.0).abs() < 1e-9);
    }
}

#[test]
fn binary_markers_are_queryable() {
    let mut lp = LinearProgram::new(2);
    lp.mark_binary(1);
    assert_eq!(lp.integrality(0), Integrality::Continuous);
    assert_eq!(lp.integrality(1), Integrality::Binary);
    assert_eq!(lp.binary_vars(), vec![1]);
}
