use std::collections::BTreeSet;

use bidsched_core::gen::{random_instance, GenParams};
use bidsched_core::rational::to_f64;
use bidsched_core::threshold::{brute_force_oracle, solve_reach, SolverConfig};
use bidsched_core::Objective;

fn targets(o: &Objective) -> BTreeSet<String> {
    match o {
        Objective::Reach { set } => set.clone(),
        _ => unreachable!(),
    }
}

#[test]
fn exact_matches_oracle_and_iterative_is_close() {
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let n = 3 + (seed % 8) as usize;
        let (g, t1, _) = random_instance(seed, &GenParams::mixed(n));
        let t = targets(&t1);
        let exact = solve_reach(&g, &t, &SolverConfig::exact()).unwrap();
        exact.check(&g).unwrap();
        let oracle = brute_force_oracle(&g, &t).unwrap();
        assert_eq!(exact.values, oracle.values, "seed {seed}");
        let it = solve_reach(&g, &t, &SolverConfig::iterative()).unwrap();
        for v in g.names() {
            worst = worst.max((to_f64(&exact.values[v]) - to_f64(&it.values[v])).abs());
        }
    }
    eprintln!("worst iterative error {worst:e}");
    assert!(worst < 1e-9, "worst {worst:e}");
}
