//! Brute-force enumeration oracles against the solvers and the compiler.

use modelacq_logic::{
    compile_ddnnf, parse_dimacs, solve_maxsat, solve_sat, write_dimacs, write_wcnf, Cnf, Lit,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..(1u64 << n)).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
}

fn brute_sat(cnf: &Cnf) -> bool {
    assignments(cnf.num_vars()).any(|a| cnf.satisfies_hard(&a))
}

fn brute_count(cnf: &Cnf) -> u128 {
    assignments(cnf.num_vars())
        .filter(|a| cnf.satisfies_hard(a))
        .count() as u128
}

fn brute_min_cost(cnf: &Cnf) -> Option<u64> {
    assignments(cnf.num_vars())
        .filter(|a| cnf.satisfies_hard(a))
        .map(|a| cnf.cost(&a))
        .min()
}

fn random_clause(rng: &mut ChaCha8Rng, n: usize, width: usize) -> Vec<Lit> {
    let mut vars: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for _ in 0..width.min(n) {
        let i = rng.random_range(0..vars.len());
        let v = vars.swap_remove(i);
        out.push(Lit::from_dimacs(if rng.random_bool(0.5) {
            v as i32 + 1
        } else {
            -(v as i32 + 1)
        }));
    }
    out
}

fn random_kcnf(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize) -> Cnf {
    let mut cnf = Cnf::new(n);
    for _ in 0..m {
        cnf.add_clause(random_clause(rng, n, k)).unwrap();
    }
    cnf
}

#[test]
fn sat_matches_enumeration_on_random_3cnf() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..120 {
        let n = 8 + i % 7;
        let ratio = 3.0 + (i % 5) as f64 * 0.5;
        let cnf = random_kcnf(&mut rng, n, (n as f64 * ratio) as usize, 3);
        let got = solve_sat(&cnf);
        assert_eq!(got.is_some(), brute_sat(&cnf), "instance {i}");
        if let Some(m) = got {
            assert!(cnf.satisfies_hard(&m));
        }
    }
}

#[test]
fn maxsat_is_optimal_on_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    for _ in 0..80 {
        let n = rng.random_range(3..=10);
        let mut cnf = Cnf::new(n);
        for _ in 0..rng.random_range(0..n) {
            let w = rng.random_range(1..=3);
            cnf.add_clause(random_clause(&mut rng, n, w)).unwrap();
        }
        for _ in 0..rng.random_range(1..20) {
            let w = rng.random_range(1..=3);
            cnf.add_soft(random_clause(&mut rng, n, w), rng.random_range(1..=9))
                .unwrap();
        }
        match (solve_maxsat(&cnf), brute_min_cost(&cnf)) {
            (Ok(sol), Some(best)) => {
                assert!(cnf.satisfies_hard(&sol.model));
                assert_eq!(sol.cost, cnf.cost(&sol.model));
                assert_eq!(sol.cost, best);
                checked += 1;
            }
            (Err(_), None) => {}
            (a, b) => panic!("mismatch: {a:?} vs {b:?}"),
        }
    }
    assert!(checked > 40);
}

#[test]
fn ddnnf_counts_and_conditioning_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..80 {
        let n = 4 + i % 9;
        let m = rng.random_range(0..=2 * n);
        let mut cnf = Cnf::new(n);
        for _ in 0..m {
            let w = rng.random_range(1..=3);
            cnf.add_clause(random_clause(&mut rng, n, w)).unwrap();
        }
        let d = compile_ddnnf(&cnf).unwrap();
        d.validate().unwrap();
        assert_eq!(d.count_models(), brute_count(&cnf), "instance {i}");
        for a in assignments(n).take(64) {
            assert_eq!(d.evaluate(&a), cnf.satisfies_hard(&a));
        }

        let l = random_clause(&mut rng, n, 1)[0];
        let c = d.condition(l);
        c.validate().unwrap();
        let expected = assignments(n)
            .filter(|a| cnf.satisfies_hard(a) && l.eval(a))
            .count() as u128;
        assert_eq!(c.count_models(), expected);

        // conditioning agrees with compiling the formula plus a unit clause
        let mut with_unit = cnf.clone();
        with_unit.add_clause([l]).unwrap();
        assert_eq!(compile_ddnnf(&with_unit).unwrap().count_models(), expected);
    }
}

fn arb_cnf(weighted: bool) -> impl Strategy<Value = Cnf> {
    (1usize..12).prop_flat_map(move |n| {
        let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        let clause = (prop::collection::vec(lit, 0..5), 1u64..50, any::<bool>());
        prop::collection::vec(clause, 0..20).prop_map(move |cs| {
            let mut cnf = Cnf::new(n);
            for (lits, w, soft) in cs {
                let lits: Vec<Lit> = lits.into_iter().map(Lit::from_dimacs).collect();
                match (lits.is_empty(), weighted && soft) {
                    (true, s) => cnf.add_empty_clause(s.then_some(w)),
                    (false, true) => cnf.add_soft(lits, w).unwrap(),
                    (false, false) => cnf.add_clause(lits).unwrap(),
                }
            }
            cnf
        })
    })
}

proptest! {
    #[test]
    fn dimacs_round_trip(cnf in arb_cnf(false)) {
        let text = write_dimacs(&cnf);
        let back = parse_dimacs(&text).unwrap();
        prop_assert_eq!(&back, &cnf);
        prop_assert_eq!(write_dimacs(&back), text);
    }

    #[test]
    fn wcnf_round_trip(cnf in arb_cnf(true)) {
        let text = write_wcnf(&cnf);
        let back = parse_dimacs(&text).unwrap();
        prop_assert_eq!(&back, &cnf);
        prop_assert_eq!(write_wcnf(&back), text);
    }
}
