//! STRIPS + typing subset of PDDL: parsing, grounding, STRIPS semantics and
//! serialization of learned models.

mod ground;
mod parser;
mod serialize;
pub mod sexpr;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ground::{apply, ground, ground_with_cap, GroundAction, GroundTask, State, DEFAULT_GROUNDING_CAP};
pub use parser::{parse_domain, parse_problem};
pub use serialize::{details, serialize_model, to_pddl, SerializedModel};

/// Implicit root of every type hierarchy.
pub const ROOT_TYPE: &str = "object";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unsupported PDDL feature `{0}`")]
    UnsupportedFeature(String),
    #[error("undeclared predicate `{0}`")]
    UndeclaredPredicate(String),
    #[error("undeclared object `{0}`")]
    UndeclaredObject(String),
    #[error("undeclared type `{0}`")]
    UndeclaredType(String),
    #[error("`{object}` has type `{found}`, expected `{expected}`")]
    TypeMismatch {
        object: String,
        expected: String,
        found: String,
    },
    #[error("`{predicate}` takes {expected} arguments, got {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `?{var}` is not a parameter of `{action}`")]
    UnboundVariable { action: String, var: String },
    #[error("grounding yields {count} actions, cap is {cap}")]
    GroundingExplosion { count: u128, cap: usize },
    #[error("`{action}` is not applicable; unsatisfied: {}", missing.join(", "))]
    PreconditionViolation {
        action: String,
        missing: Vec<String>,
    },
    #[error("unknown ground action `{0}`")]
    UnknownAction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlanningObject {
    pub obj_type: String,
    pub name: String,
}

impl PlanningObject {
    pub fn new(obj_type: impl Into<String>, name: impl Into<String>) -> Self {
        PlanningObject {
            obj_type: obj_type.into(),
            name: name.into(),
        }
    }
}

/// Ground atom. Its canonical text is `predicate obj1 obj2 ...`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fluent {
    pub predicate: String,
    pub args: Vec<PlanningObject>,
}

impl Fluent {
    pub fn new(predicate: impl Into<String>, args: Vec<PlanningObject>) -> Self {
        Fluent {
            predicate: predicate.into(),
            args,
        }
    }
}

impl fmt::Display for Fluent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        for a in &self.args {
            write!(f, " {}", a.name)?;
        }
        Ok(())
    }
}

/// Splits a canonical `pred a b` string into predicate and argument names.
pub fn split_canonical(s: &str) -> (&str, Vec<&str>) {
    let mut parts = s.split_whitespace();
    let head = parts.next().unwrap_or("");
    (head, parts.collect())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    /// Action parameter, stored without the leading `?`.
    Var(String),
    Const(String),
}

/// Predicate applied to terms; lifted when it mentions variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    /// Ground atom from a canonical fluent string, all arguments constant.
    pub fn ground(canonical: &str) -> Self {
        let (p, args) = split_canonical(canonical);
        Atom::new(p, args.into_iter().map(|a| Term::Const(a.to_string())).collect())
    }

    /// Canonical fluent string under a binding of variables to objects.
    pub fn instantiate(&self, params: &[TypedParam], args: &[String]) -> Option<String> {
        let mut out = self.predicate.clone();
        for t in &self.args {
            out.push(' ');
            match t {
                Term::Const(c) => out.push_str(c),
                Term::Var(v) => {
                    let i = params.iter().position(|p| &p.name == v)?;
                    out.push_str(args.get(i)?);
                }
            }
        }
        Some(out)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypedParam {
    pub name: String,
    pub ty: String,
}

impl TypedParam {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        TypedParam {
            name: name.into(),
            ty: ty.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateDecl {
    pub name: String,
    pub params: Vec<TypedParam>,
}

/// STRIPS action schema. Effects use delete-then-add semantics, so an atom
/// may appear in both `add` and `delete`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LiftedAction {
    pub name: String,
    pub params: Vec<TypedParam>,
    pub precond: BTreeSet<Atom>,
    pub add: BTreeSet<Atom>,
    pub delete: BTreeSet<Atom>,
}

/// Ground precondition/add/delete sets as canonical fluent strings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundEffects {
    pub precond: BTreeSet<String>,
    pub add: BTreeSet<String>,
    pub delete: BTreeSet<String>,
}

impl LiftedAction {
    /// `name type1 type2 ...`
    pub fn signature(&self) -> String {
        let mut s = self.name.clone();
        for p in &self.params {
            s.push(' ');
            s.push_str(&p.ty);
        }
        s
    }

    /// Instantiates the schema on concrete argument names.
    pub fn instantiate(&self, args: &[String]) -> Option<GroundEffects> {
        if args.len() != self.params.len() {
            return None;
        }
        let inst = |set: &BTreeSet<Atom>| -> Option<BTreeSet<String>> {
            set.iter().map(|a| a.instantiate(&self.params, args)).collect()
        };
        Some(GroundEffects {
            precond: inst(&self.precond)?,
            add: inst(&self.add)?,
            delete: inst(&self.delete)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub requirements: Vec<String>,
    /// `(type, parent)` pairs; `object` is implicit.
    pub types: Vec<(String, String)>,
    pub constants: Vec<PlanningObject>,
    pub predicates: Vec<PredicateDecl>,
    pub actions: Vec<LiftedAction>,
}

impl Domain {
    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&LiftedAction> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn has_type(&self, ty: &str) -> bool {
        ty == ROOT_TYPE || self.types.iter().any(|(t, _)| t == ty)
    }

    /// Whether `sub` equals `sup` or descends from it.
    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        let mut cur = sub.to_string();
        for _ in 0..=self.types.len() {
            if cur == sup || sup == ROOT_TYPE {
                return true;
            }
            match self.types.iter().find(|(t, _)| *t == cur) {
                Some((_, parent)) => cur = parent.clone(),
                None => return false,
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub domain: String,
    /// Problem objects followed by domain constants.
    pub objects: Vec<PlanningObject>,
    pub init: Vec<Fluent>,
    pub goal: Vec<Fluent>,
}

impl Problem {
    pub fn object(&self, name: &str) -> Option<&PlanningObject> {
        self.objects.iter().find(|o| o.name == name)
    }
}
