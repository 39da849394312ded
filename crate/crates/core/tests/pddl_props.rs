use std::collections::BTreeSet;

use modelacq::domains::{ALL, BLOCKSWORLD_4};
use modelacq::model::LearnedModel;
use modelacq::pddl::{apply, ground, parse_domain, serialize_model, Atom, LiftedAction, Term, TypedParam};
use modelacq::tracegen::random_walk;
use proptest::prelude::*;

const PREDICATES: [(&str, usize); 4] = [("p", 0), ("q", 1), ("r", 2), ("s", 1)];
const TYPES: [&str; 3] = ["object", "block", "place"];

fn atom_set(arity: usize) -> impl Strategy<Value = BTreeSet<Atom>> {
    let atom = (0..PREDICATES.len(), prop::collection::vec(0..arity.max(1), 2)).prop_filter_map(
        "needs enough parameters",
        move |(p, vars)| {
            let (name, n) = PREDICATES[p];
            (n == 0 || arity > 0).then(|| Atom::new(name, vars[..n].iter().map(|v| Term::Var(format!("x{v}"))).collect()))
        },
    );
    prop::collection::btree_set(atom, 0..4)
}

fn action(name: String) -> impl Strategy<Value = LiftedAction> {
    prop::collection::vec(0..TYPES.len(), 0..4).prop_flat_map(move |types| {
        let n = types.len();
        let name = name.clone();
        (atom_set(n), atom_set(n), atom_set(n)).prop_map(move |(precond, add, delete)| LiftedAction {
            name: name.clone(),
            params: types
                .iter()
                .enumerate()
                .map(|(i, &t)| TypedParam::new(format!("x{i}"), TYPES[t]))
                .collect(),
            precond,
            add,
            delete,
        })
    })
}

fn model() -> impl Strategy<Value = LearnedModel> {
    (action("alpha".into()), action("beta".into()), action("gamma-go".into())).prop_map(|(a, b, c)| {
        let mut m = LearnedModel::default();
        for x in [a, b, c] {
            m.insert(x);
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_then_parse_is_identity(m in model()) {
        let text = serialize_model(&m, "learned").pddl;
        let d = parse_domain(&text).unwrap();
        prop_assert!(LearnedModel::from_domain(&d).same_theory(&m), "{}", text);
    }

    #[test]
    fn walks_replay_through_apply(seed in 0u64..1000, len in 0usize..25) {
        let b = ALL[seed as usize % ALL.len()];
        let task = b.task().unwrap();
        for t in random_walk(&task, len, 2, seed).traces {
            let mut s = task.init.clone();
            prop_assert_eq!(&t.steps[0].state, &s);
            for w in t.steps.windows(2) {
                let a = task.action_id(&w[0].action.as_ref().unwrap().to_string()).unwrap();
                s = apply(&s, a, &task).unwrap();
                prop_assert_eq!(s.len(), task.num_fluents());
                prop_assert_eq!(&w[1].state, &s);
            }
        }
    }
}

#[test]
fn grounding_is_deterministic() {
    for b in ALL {
        let (d, p) = b.parse().unwrap();
        let (x, y) = (ground(&d, &p).unwrap(), ground(&d, &p).unwrap());
        assert_eq!(x.fluent_names(), y.fluent_names());
        let names = |t: &modelacq::pddl::GroundTask| t.actions.iter().map(|a| a.name.clone()).collect::<Vec<_>>();
        assert_eq!(names(&x), names(&y));
    }
}

#[test]
fn bundled_domains_round_trip_through_the_model() {
    let (d, _) = BLOCKSWORLD_4.parse().unwrap();
    let m = LearnedModel::from_domain(&d);
    let again = LearnedModel::from_domain(&parse_domain(&serialize_model(&m, "bw").pddl).unwrap());
    assert!(again.same_theory(&m));
}
