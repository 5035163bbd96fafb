//! Results checked against independent computations written here, not
//! against the library's own code paths.

use bellccp::bell::cglmp_correlation;
use bellccp::ccp::{
    bell_to_ccp, brute_force_classical_score, optimal_classical_score, quantum_ccp_behavior,
    AssistedStrategy, CcpBehavior,
};
use bellccp::polytope::{classical_vertices, max_visibility};
use bellccp::quantum::{hexagon_realization, Behavior};
use bellccp::sweep::{count_distinct, enumerate_strategy_behaviors, StrategySpace, SweepConfig};
use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
use num_rational::Ratio;
use rustc_hash::FxHashSet;

fn stirling2(n: u64, k: u64) -> u64 {
    match (n, k) {
        (0, 0) => 1,
        (_, 0) | (0, _) => 0,
        _ => k * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
    }
}

/// Guess tables `g(X,Y) = D(E(X), Y)` are exactly the `N_A × N_B` tables
/// with at most `M` distinct rows.
fn vertex_count(na: u64, nb: u64, m: u64, g: u64) -> u64 {
    let rows = g.pow(nb as u32);
    (1..=m.min(na))
        .map(|k| stirling2(na, k) * (0..k).map(|i| rows - i).product::<u64>())
        .sum()
}

#[test]
fn vertex_counts_match_the_row_partition_formula() {
    for (na, nb, m, g) in [(6, 2, 3, 3), (6, 3, 2, 2), (4, 2, 2, 3), (3, 3, 2, 2), (5, 1, 3, 2)] {
        let v = classical_vertices(na, nb, m, g).unwrap();
        assert_eq!(v.len() as u64, vertex_count(na as u64, nb as u64, m as u64, g as u64));
    }
    assert_eq!(vertex_count(6, 2, 3, 3), 47601);
    assert_eq!(vertex_count(6, 3, 2, 2), 1744);
}

/// 12·t(g|x₀,x,y) for the ternary CGLMP task.
fn cglmp3_payoff(g: i64, x0: i64, x: i64, y: i64) -> i64 {
    let f1 = (x0 - x * y).rem_euclid(3);
    let f2 = (x0 - x * y + if (x + y) % 2 == 0 { 1 } else { -1 }).rem_euclid(3);
    (g == f1) as i64 - (g == f2) as i64
}

#[test]
fn compiled_cglmp3_task_matches_the_direct_definition() {
    let task = bell_to_ccp(&cglmp_correlation(3).unwrap()).unwrap();
    for x in 0..2 {
        for x0 in 0..3 {
            for y in 0..2 {
                for g in 0..3 {
                    let expect = cglmp3_payoff(g as i64, x0 as i64, x as i64, y as i64) as f64 / 12.0;
                    assert!((task.coeff(g, x0 + 3 * x, y) - expect).abs() < 1e-15);
                }
            }
        }
    }
}

/// Exact integer brute force over all 3¹² deterministic strategies.
#[test]
fn cglmp3_classical_optimum_is_exactly_two_thirds() {
    let mut best = i64::MIN;
    for e in 0..729u32 {
        let enc: Vec<i64> = (0..6).map(|k| (e / 3u32.pow(k) % 3) as i64).collect();
        for d in 0..729u32 {
            let dec: Vec<i64> = (0..6).map(|k| (d / 3u32.pow(k) % 3) as i64).collect();
            let mut s = 0;
            for x in 0..2i64 {
                for x0 in 0..3i64 {
                    let m = enc[(x0 + 3 * x) as usize];
                    for y in 0..2i64 {
                        s += cglmp3_payoff(dec[(m + 3 * y) as usize], x0, x, y);
                    }
                }
            }
            best = best.max(s);
        }
    }
    assert_eq!(Ratio::new(best, 12), Ratio::new(2, 3));

    let task = bell_to_ccp(&cglmp_correlation(3).unwrap()).unwrap();
    let sweep = optimal_classical_score(&task).unwrap();
    let brute = brute_force_classical_score(&task).unwrap();
    assert_eq!(sweep.value, brute.value);
    // The maximizer scores exactly 2/3 under integer arithmetic.
    let st = &sweep.strategy;
    let mut s = 0;
    for x in 0..2 {
        for x0 in 0..3 {
            for y in 0..2 {
                let g = st.guess(x0 + 3 * x, y) as i64;
                s += cglmp3_payoff(g, x0 as i64, x as i64, y as i64);
            }
        }
    }
    assert_eq!(Ratio::new(s, 12), Ratio::new(2, 3));
}

#[test]
fn explicit_cglmp3_strategy_scores_two_thirds_exactly() {
    let m = |x0: i64, x: i64| ((x == 0 && x0 == 2) as i64 + 2 * (x == 1 && x0 == 1) as i64) % 3;
    let g = |m: i64, y: i64| (2 * (y == 0) as i64 * m + (y == 1) as i64 * (m + 1)) % 3;
    let mut s = 0;
    for x in 0..2 {
        for x0 in 0..3 {
            for y in 0..2 {
                s += cglmp3_payoff(g(m(x0, x), y), x0, x, y);
            }
        }
    }
    assert_eq!(Ratio::new(s, 12), Ratio::new(2, 3));
}

/// Solves the visibility LP with an unrelated simplex implementation.
fn minilp_visibility(target: &CcpBehavior, noise: &CcpBehavior, na: usize, nb: usize, m: usize, g: usize) -> f64 {
    let vertices = classical_vertices(na, nb, m, g).unwrap();
    let mut pb = Problem::new(OptimizationDirection::Maximize);
    let w: Vec<_> = (0..vertices.len()).map(|_| pb.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let v = pb.add_var(1.0, (0.0, 1.0));
    for cell in 0..na * nb {
        for k in 0..g {
            let mut e = LinearExpr::empty();
            for (j, t) in vertices.tables().enumerate() {
                if t[cell] as usize == k {
                    e.add(w[j], 1.0);
                }
            }
            let i = cell * g + k;
            e.add(v, noise.probs()[i] - target.probs()[i]);
            pb.add_constraint(e, ComparisonOp::Eq, noise.probs()[i]);
        }
    }
    let mut e = LinearExpr::empty();
    for &wj in &w {
        e.add(wj, 1.0);
    }
    pb.add_constraint(e, ComparisonOp::Eq, 1.0);
    pb.solve().unwrap().objective()
}

#[test]
fn visibility_agrees_with_minilp() {
    let hex = hexagon_realization().unwrap().behavior().unwrap();
    let target = quantum_ccp_behavior(&hex, &AssistedStrategy::additive(2, 3, 3).unwrap()).unwrap();
    let noise = CcpBehavior::uniform(6, 3, 2);
    let ours = max_visibility(&target, &noise, &classical_vertices(6, 3, 2, 2).unwrap()).unwrap();
    let theirs = minilp_visibility(&target, &noise, 6, 3, 2, 2);
    assert!((ours.v_star - theirs).abs() < 1e-7, "{} vs {theirs}", ours.v_star);
    assert!((ours.v_star - 0.8).abs() < 1e-9);

    // A perfect one-bit random-access target.
    let table: Vec<usize> = (0..4).flat_map(|x| [x & 1, x >> 1]).collect();
    let target = CcpBehavior::deterministic(4, 2, 2, &table).unwrap();
    let noise = CcpBehavior::uniform(4, 2, 2);
    let ours = max_visibility(&target, &noise, &classical_vertices(4, 2, 2, 2).unwrap()).unwrap();
    let theirs = minilp_visibility(&target, &noise, 4, 2, 2, 2);
    assert!((ours.v_star - theirs).abs() < 1e-7);
}

fn small_space() -> StrategySpace {
    StrategySpace {
        outcomes_a: 2,
        outcomes_b: 2,
        shift: 1,
        settings_a: 2,
        settings_b: 2,
        messages: 2,
        guesses: 2,
    }
}

/// For a behavior with dyadic entries, tolerance dedup must agree with
/// bit-exact dedup of directly computed tables.
#[test]
fn dedup_is_exact_on_the_uniform_behavior() {
    let space = small_space();
    let p = Behavior::uniform(2, 2, 2, 2);
    let mut exact: FxHashSet<Vec<u64>> = FxHashSet::default();
    for mu in 0..space.size() {
        let q = quantum_ccp_behavior(&p, &space.strategy(mu).unwrap()).unwrap();
        exact.insert(q.probs().iter().map(|v| v.to_bits()).collect());
    }
    let report = count_distinct(&p, &SweepConfig::full("uniform", space)).unwrap();
    assert_eq!(report.strategies_visited, 4096);
    assert_eq!(report.distinct_behaviors as usize, exact.len());
}

#[test]
fn enumerated_behaviors_match_direct_construction() {
    let hex = hexagon_realization().unwrap().behavior().unwrap();
    let space = StrategySpace::i3322();
    let additive = AssistedStrategy::additive(2, 3, 3).unwrap();
    let mu = space.index_of(&additive).unwrap();
    let mut cfg = SweepConfig::sampled("hexagon", space, 50, 3);
    cfg.include = vec![0, mu];
    let direct = quantum_ccp_behavior(&hex, &additive).unwrap();
    let mut seen_additive = false;
    for (nu, q) in enumerate_strategy_behaviors(&hex, &cfg).unwrap() {
        assert!(q.normalization_gap() <= 1e-10);
        if nu == mu {
            assert_eq!(q, direct);
            seen_additive = true;
        }
        if nu == 0 {
            // constant encoder and decoder: always guess 0
            assert!(q.probs().chunks(2).all(|c| (c[0] - 1.0).abs() < 1e-12 && c[1] == 0.0));
        }
    }
    assert!(seen_additive);
}
