use modelacq::domains::{BLOCKSWORLD_4, GRIPPER_2, LOGISTICS_3, ROVER_1};
use modelacq::extraction::{extract_arms, extract_observer, observe, replay_consistency, ArmsParams, ExtractError};
use modelacq::observation::{tokenize, ObservedTraceList, TokenType, TokenizeParams};
use modelacq::pddl::{Atom, Term};
use modelacq::trace::load_csv;
use modelacq::tracegen::{random_walk, trace_from_goal, trace_list, DEFAULT_PLAN_BUDGET};
use proptest::prelude::*;

fn identity(b: modelacq::domains::Bundled, len: usize, count: usize, seed: u64) -> ObservedTraceList {
    let task = b.task().unwrap();
    tokenize(&random_walk(&task, len, count, seed), TokenType::Identity, &TokenizeParams::default(), 0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn observer_sets_only_shrink(seed in 0u64..1000) {
        let all = identity(GRIPPER_2, 15, 4, seed);
        let mut first = all.clone();
        first.traces.truncate(2);
        let (small, big) = (observe(&first).unwrap().ground, observe(&all).unwrap().ground);
        for (k, e) in &small.actions {
            let f = &big.actions[k];
            prop_assert!(f.precond.is_subset(&e.precond));
            prop_assert!(f.add.is_subset(&e.add));
            prop_assert!(f.delete.is_subset(&e.delete));
        }
    }

    #[test]
    fn observer_replays_its_training_data(seed in 0u64..1000) {
        for b in [BLOCKSWORLD_4, LOGISTICS_3, GRIPPER_2] {
            let obs = identity(b, 12, 3, seed);
            let out = observe(&obs).unwrap();
            prop_assert!(replay_consistency(&out.ground, &obs).unwrap().is_clean());
            prop_assert!(replay_consistency(&out.lifted, &obs).unwrap().total().precondition_violations == 0);
        }
    }

    #[test]
    fn arms_respects_hard_clauses_and_is_deterministic(seed in 0u64..1000, pm in 0.0f64..0.8) {
        let task = LOGISTICS_3.task().unwrap();
        let obs = tokenize(&random_walk(&task, 8, 2, seed), TokenType::PartialState, &TokenizeParams::partial(pm), seed).unwrap();
        let a = extract_arms(&obs, &ArmsParams::default(), &[]).unwrap();
        prop_assert!(a.encoding.cnf.satisfies_hard(&a.solution));
        for act in a.model.actions.values() {
            prop_assert!(act.add.is_disjoint(&act.delete));
            prop_assert!(act.delete.is_subset(&act.precond));
        }
        let b = extract_arms(&obs, &ArmsParams::default(), &[]).unwrap();
        prop_assert!(a.model.same_theory(&b.model));
        prop_assert_eq!(a.cost, b.cost);
    }
}

#[test]
fn observer_rejects_partial_tokens() {
    let task = BLOCKSWORLD_4.task().unwrap();
    let obs = tokenize(&random_walk(&task, 5, 1, 0), TokenType::PartialState, &TokenizeParams::partial(0.3), 0).unwrap();
    assert!(matches!(extract_observer(&obs), Err(ExtractError::IncompatibleTokens { .. })));
}

/// Two Rover traces at 60% masking: most seeds recover the rover's location
/// as a precondition of communicating soil data.
#[test]
fn rover_soil_communication_needs_location() {
    let task = ROVER_1.task().unwrap();
    let goals = [
        ["communicated_soil_data waypoint2", "communicated_rock_data waypoint3", "communicated_image_data objective1 high_res"],
        ["communicated_soil_data waypoint3", "communicated_rock_data waypoint2", "communicated_image_data objective1 high_res"],
    ];
    let traces = goals
        .iter()
        .map(|g| trace_from_goal(&task, &g.map(String::from), DEFAULT_PLAN_BUDGET).unwrap())
        .collect();
    let list = trace_list(&task, traces);
    let at = Atom::new("at", vec![Term::Var("x2".into()), Term::Var("x3".into())]);
    let hits = (0..10)
        .filter(|&seed| {
            let obs = tokenize(&list, TokenType::PartialState, &TokenizeParams::partial(0.6), seed).unwrap();
            let m = extract_arms(&obs, &ArmsParams::default(), &[]).unwrap().model;
            m.find("communicate_soil_data", 4).is_some_and(|a| a.precond.contains(&at))
        })
        .count();
    assert!(hits >= 6, "{hits}/10");
}

/// A ground CSV trace has no parameters, so ARMS learns 0-ary schemas.
#[test]
fn arms_learns_propositional_schemas_from_csv() {
    let csv = "door_open,lit,action\n0,0,open\n1,0,switch\n1,1,close\n0,1,switch\n0,0,open\n1,0,\n";
    let list = load_csv(csv, "action").unwrap().traces;
    let obs = tokenize(&list, TokenType::Identity, &TokenizeParams::default(), 0).unwrap();
    let m = extract_arms(&obs, &ArmsParams::default(), &[]).unwrap().model;
    let atom = |p: &str| Atom::new(p, vec![]);
    let open = m.find("open", 0).unwrap();
    assert!(open.add.contains(&atom("door_open")));
    let close = m.find("close", 0).unwrap();
    assert!(close.precond.contains(&atom("door_open")));
    assert!(close.delete.contains(&atom("door_open")));
    assert!(m.find("switch", 0).is_some());
}
