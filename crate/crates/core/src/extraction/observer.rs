//! Set-based extraction under full observability.
//!
//! For a ground action with occurrences `(s, s')`:
//! `pre = ∩ s`, `add = ∩ (s' \ s)`, `del = ∩ (s \ s')`.
//! Lifting replaces each argument by its parameter position and intersects
//! the resulting schemas over all instances of the same signature.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;

use super::ExtractError;
use crate::model::LearnedModel;
use crate::observation::{ObservationToken, ObservedTraceList, TokenType};
use crate::pddl::{Atom, GroundEffects, LiftedAction, Term, TypedParam, ROOT_TYPE};
use crate::trace::ActionLabel;

/// Learned ground theory, keyed by canonical action label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundModel {
    pub fluents: Vec<String>,
    pub actions: BTreeMap<String, GroundEffects>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObserverOutput {
    pub ground: GroundModel,
    pub lifted: LearnedModel,
}

struct Acc {
    label: ActionLabel,
    pre: FixedBitSet,
    add: FixedBitSet,
    del: FixedBitSet,
    any_add: FixedBitSet,
    any_del: FixedBitSet,
    posts: Vec<FixedBitSet>,
}

pub fn extract_observer(obs: &ObservedTraceList) -> Result<LearnedModel, ExtractError> {
    Ok(observe(obs)?.lifted)
}

/// Ground and lifted Observer models.
pub fn observe(obs: &ObservedTraceList) -> Result<ObserverOutput, ExtractError> {
    if obs.token_type != TokenType::Identity {
        return Err(ExtractError::IncompatibleTokens {
            extractor: "observer",
            found: obs.token_type,
        });
    }
    let n = obs.fluents.len();
    let bits = |tok: &ObservationToken| -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(n);
        if let ObservationToken::Identity { state, .. } = tok {
            for (i, &v) in state.iter().enumerate() {
                b.set(i, v);
            }
        }
        b
    };

    let mut accs: BTreeMap<String, Acc> = BTreeMap::new();
    for (ti, t) in obs.traces.iter().enumerate() {
        for (si, w) in t.tokens.windows(2).enumerate() {
            let label = w[0]
                .action()
                .ok_or(ExtractError::MissingAction { trace: ti, step: si })?;
            let (s, s2) = (bits(&w[0]), bits(&w[1]));
            let mut added = s2.clone();
            added.difference_with(&s);
            let mut deleted = s.clone();
            deleted.difference_with(&s2);
            let key = label.to_string();
            match accs.get_mut(&key) {
                None => {
                    accs.insert(
                        key,
                        Acc {
                            label: label.clone(),
                            pre: s,
                            any_add: added.clone(),
                            any_del: deleted.clone(),
                            add: added,
                            del: deleted,
                            posts: vec![s2],
                        },
                    );
                }
                Some(a) => {
                    a.pre.intersect_with(&s);
                    a.add.intersect_with(&added);
                    a.del.intersect_with(&deleted);
                    a.any_add.union_with(&added);
                    a.any_del.union_with(&deleted);
                    a.posts.push(s2);
                }
            }
        }
    }

    // A deterministic STRIPS action must make every fluent it ever added
    // true, and every fluent it ever removed (without re-adding) false.
    for (key, a) in &accs {
        for post in &a.posts {
            if let Some(f) = a.any_add.difference(post).next() {
                return Err(ExtractError::InconsistentTransitions {
                    action: key.clone(),
                    fluent: obs.fluents[f].clone(),
                });
            }
            if let Some(f) = a.any_del.intersection(post).next() {
                return Err(ExtractError::InconsistentTransitions {
                    action: key.clone(),
                    fluent: obs.fluents[f].clone(),
                });
            }
        }
    }

    let names = |b: &FixedBitSet| -> BTreeSet<String> { b.ones().map(|f| obs.fluents[f].clone()).collect() };
    let ground = GroundModel {
        fluents: obs.fluents.clone(),
        actions: accs
            .iter()
            .map(|(k, a)| {
                (
                    k.clone(),
                    GroundEffects {
                        precond: names(&a.pre),
                        add: names(&a.add),
                        delete: names(&a.del),
                    },
                )
            })
            .collect(),
    };

    let lifted = lift(&ground, accs.values().map(|a| &a.label), obs);
    Ok(ObserverOutput { ground, lifted })
}

fn lift_atom(fluent: &str, args: &[String]) -> Atom {
    let a = Atom::ground(fluent);
    Atom::new(
        a.predicate,
        a.args
            .into_iter()
            .map(|t| match t {
                Term::Const(c) => match args.iter().position(|x| *x == c) {
                    Some(i) => Term::Var(format!("x{i}")),
                    None => Term::Const(c),
                },
                v => v,
            })
            .collect(),
    )
}

fn lift<'a>(
    ground: &GroundModel,
    labels: impl Iterator<Item = &'a ActionLabel>,
    obs: &ObservedTraceList,
) -> LearnedModel {
    let mut schemas: BTreeMap<String, LiftedAction> = BTreeMap::new();
    for label in labels {
        let eff = &ground.actions[&label.to_string()];
        let params: Vec<TypedParam> = label
            .args
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let ty = obs.objects.get(o).map(String::as_str).unwrap_or(ROOT_TYPE);
                TypedParam::new(format!("x{i}"), ty)
            })
            .collect();
        let lift_set = |s: &BTreeSet<String>| -> BTreeSet<Atom> { s.iter().map(|f| lift_atom(f, &label.args)).collect() };
        let inst = LiftedAction {
            name: label.name.clone(),
            params,
            precond: lift_set(&eff.precond),
            add: lift_set(&eff.add),
            delete: lift_set(&eff.delete),
        };
        match schemas.get_mut(&inst.signature()) {
            None => {
                schemas.insert(inst.signature(), inst);
            }
            Some(s) => {
                s.precond = &s.precond & &inst.precond;
                s.add = &s.add & &inst.add;
                s.delete = &s.delete & &inst.delete;
            }
        }
    }
    let mut model = LearnedModel::new(obs.fluents.clone());
    for a in schemas.into_values() {
        model.insert_with_types(a, &obs.objects);
    }
    model
}
