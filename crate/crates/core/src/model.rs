//! Learned action theories shared by every extractor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pddl::{Atom, Domain, GroundEffects, LiftedAction, Term, ROOT_TYPE};

/// Extracted STRIPS action theory. Actions are keyed by signature
/// (`name type1 type2 ...`); unparameterized actions use their bare name.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LearnedModel {
    /// Canonical fluent strings the model was learned over.
    pub fluents: Vec<String>,
    /// Predicate name → arity.
    pub predicates: BTreeMap<String, usize>,
    /// Constant object name → type.
    pub constants: BTreeMap<String, String>,
    pub actions: BTreeMap<String, LiftedAction>,
}

impl LearnedModel {
    pub fn new(fluents: Vec<String>) -> Self {
        let mut m = LearnedModel {
            fluents,
            ..Default::default()
        };
        for f in m.fluents.clone() {
            let a = Atom::ground(&f);
            m.predicates.insert(a.predicate.clone(), a.args.len());
        }
        m
    }

    /// Adds an action, registering its predicates and constants.
    pub fn insert(&mut self, action: LiftedAction) {
        self.insert_with_types(action, &BTreeMap::new());
    }

    /// As [`insert`](Self::insert), typing constants from `object_types`.
    pub fn insert_with_types(&mut self, action: LiftedAction, object_types: &BTreeMap<String, String>) {
        for atom in action.precond.iter().chain(&action.add).chain(&action.delete) {
            self.predicates
                .entry(atom.predicate.clone())
                .or_insert(atom.args.len());
            for t in &atom.args {
                if let Term::Const(c) = t {
                    let ty = object_types
                        .get(c)
                        .cloned()
                        .unwrap_or_else(|| ROOT_TYPE.to_string());
                    self.constants.entry(c.clone()).or_insert(ty);
                }
            }
        }
        self.actions.insert(action.signature(), action);
    }

    pub fn from_domain(domain: &Domain) -> Self {
        LearnedModel {
            fluents: Vec::new(),
            predicates: domain
                .predicates
                .iter()
                .map(|p| (p.name.clone(), p.params.len()))
                .collect(),
            constants: domain
                .constants
                .iter()
                .map(|c| (c.name.clone(), c.obj_type.clone()))
                .collect(),
            actions: domain
                .actions
                .iter()
                .map(|a| (a.signature(), a.clone()))
                .collect(),
        }
    }

    /// Equality of the action theory, ignoring the fluent universe.
    pub fn same_theory(&self, other: &LearnedModel) -> bool {
        self.actions == other.actions
            && self.predicates == other.predicates
            && self.constants == other.constants
    }

    /// Action schema matching a label's name and arity.
    pub fn find(&self, name: &str, arity: usize) -> Option<&LiftedAction> {
        self.actions
            .values()
            .find(|a| a.name == name && a.params.len() == arity)
    }

    /// Ground precondition/effects for an action label.
    pub fn ground_effects(&self, name: &str, args: &[String]) -> Option<GroundEffects> {
        self.find(name, args.len())?.instantiate(args)
    }
}
