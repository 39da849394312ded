use modelacq::recommender::{nearest_techniques, parse_preference_text, recommend, Report, Taxonomy};
use modelacq_web::{count_models, observe_and_learn, recommend_profile, shipped_taxonomy};

#[test]
fn recommendation_matches_the_library() {
    let t = Taxonomy::shipped();
    let r = recommend(&t.schema, &t.entries, &t.preferences).unwrap();
    let n = nearest_techniques(&r.assignment, &t.entries, 3);
    let expected = Report::new(&t.schema, &t.entries, &r, &n).to_text();
    assert_eq!(recommend_profile("", "", 3).unwrap(), expected);
    assert_eq!(recommend_profile(&shipped_taxonomy(), "", 3).unwrap(), expected);
}

#[test]
fn custom_preferences_are_honoured() {
    let t = Taxonomy::shipped();
    let prefs = parse_preference_text(&t.schema, "fluents_partial").unwrap();
    let r = recommend(&t.schema, &t.entries, &prefs).unwrap();
    assert!(r.assignment[t.schema.index_of("fluents_partial").unwrap()]);
    let text = recommend_profile("", "fluents_partial", 1).unwrap();
    assert!(text.contains("enforced: fluents_partial"), "{text}");
    assert!(recommend_profile("", "not_a_feature", 3).unwrap_err().contains("not_a_feature"));
    assert!(recommend_profile("[[broken", "", 3).is_err());
}

#[test]
fn masked_observations_feed_arms() {
    let out = observe_and_learn("blocksworld-4", 10, 2, "partial", 0.5, 0.0, "arms", 1).unwrap();
    assert!(out.starts_with("Trace 1 as observed (partial_state)"));
    assert!(out.contains("known "));
    assert!(out.contains("Actions:\n"));
}

#[test]
fn full_observations_feed_the_observer() {
    let out = observe_and_learn("gripper-2", 8, 1, "identity", 0.0, 0.0, "observer", 0).unwrap();
    let steps = out.lines().filter(|l| l.starts_with('s')).count();
    assert_eq!(steps, 9);
    assert!(out.contains("Actions:\n"));
}

#[test]
fn incompatible_tokens_are_reported() {
    let err = observe_and_learn("gripper-2", 5, 1, "state_id", 0.0, 0.0, "observer", 0).unwrap_err();
    assert!(err.contains("state_id"), "{err}");
    let err = observe_and_learn("gripper-2", 5, 1, "partial", 0.3, 0.0, "observer", 0).unwrap_err();
    assert!(err.contains("arms"), "{err}");
    assert!(observe_and_learn("nowhere", 5, 1, "identity", 0.0, 0.0, "observer", 0).is_err());
    assert!(observe_and_learn("gripper-2", 150, 2, "identity", 0.0, 0.0, "observer", 0).is_err());
}

/// Counts satisfying assignments of `clauses` over `n` variables that agree
/// with `fixed`.
fn brute_force(n: usize, clauses: &[Vec<i32>], fixed: &[i32]) -> u64 {
    (0..1u32 << n)
        .filter(|m| {
            let holds = |l: &i32| (m >> (l.unsigned_abs() - 1) & 1 == 1) == (*l > 0);
            clauses.iter().all(|c| c.iter().any(holds)) && fixed.iter().all(holds)
        })
        .count() as u64
}

#[test]
fn counts_agree_with_enumeration() {
    let mut state = 0x9e37_79b9_u32;
    let mut next = |k: u32| {
        state ^= state << 13;
        state ^= state >> 17;
        state ^= state << 5;
        state % k
    };
    for _ in 0..40 {
        let n = 1 + next(7) as usize;
        let clauses: Vec<Vec<i32>> = (0..next(9))
            .map(|_| {
                (0..1 + next(3))
                    .map(|_| {
                        let v = 1 + next(n as u32) as i32;
                        if next(2) == 0 { v } else { -v }
                    })
                    .collect()
            })
            .collect();
        let mut text = format!("p cnf {n} {}\n", clauses.len());
        for c in &clauses {
            for l in c {
                text.push_str(&format!("{l} "));
            }
            text.push_str("0\n");
        }
        let fixed: Vec<i32> = (0..next(3)).map(|_| 1 + next(n as u32) as i32).collect();
        let assume = fixed.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        let out = count_models(&text, &assume).unwrap();
        let mut lines = out.lines().skip(1);
        assert_eq!(lines.next().unwrap(), format!("models: {}", brute_force(n, &clauses, &[])));
        for k in 1..=fixed.len() {
            let line = lines.next().unwrap();
            assert_eq!(line, format!("after {}: {}", fixed[k - 1], brute_force(n, &clauses, &fixed[..k])));
        }
    }
}

#[test]
fn malformed_dimacs_is_an_error() {
    assert!(count_models("p cnf x y\n", "").is_err());
    assert!(count_models("p cnf 2 1\n1 2 0\n", "3").is_err());
}
