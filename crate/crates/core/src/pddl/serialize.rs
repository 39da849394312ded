use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{Atom, LiftedAction, Term, ROOT_TYPE};
use crate::model::LearnedModel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerializedModel {
    pub pddl: String,
    pub details: String,
}

pub fn serialize_model(model: &LearnedModel, domain_name: &str) -> SerializedModel {
    SerializedModel {
        pddl: to_pddl(model, domain_name),
        details: details(model),
    }
}

fn pddl_atom(a: &Atom) -> String {
    let mut s = format!("({}", a.predicate);
    for t in &a.args {
        match t {
            Term::Var(v) => write!(s, " ?{v}").unwrap(),
            Term::Const(c) => write!(s, " {c}").unwrap(),
        }
    }
    s.push(')');
    s
}

/// Emits the model as a `:strips :typing` PDDL domain.
pub fn to_pddl(model: &LearnedModel, domain_name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "(define (domain {domain_name})").unwrap();
    out.push_str("  (:requirements :strips :typing)\n");

    let types: BTreeSet<&str> = model
        .actions
        .values()
        .flat_map(|a| a.params.iter().map(|p| p.ty.as_str()))
        .chain(model.constants.values().map(String::as_str))
        .filter(|t| *t != ROOT_TYPE)
        .collect();
    if !types.is_empty() {
        let list: Vec<&str> = types.into_iter().collect();
        writeln!(out, "  (:types {} - {ROOT_TYPE})", list.join(" ")).unwrap();
    }

    if !model.constants.is_empty() {
        let mut by_type: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (c, t) in &model.constants {
            by_type.entry(t).or_default().push(c);
        }
        let groups: Vec<String> = by_type
            .into_iter()
            .map(|(t, cs)| format!("{} - {t}", cs.join(" ")))
            .collect();
        writeln!(out, "  (:constants {})", groups.join(" ")).unwrap();
    }

    out.push_str("  (:predicates");
    for (p, arity) in &model.predicates {
        write!(out, "\n    ({p}").unwrap();
        for i in 0..*arity {
            write!(out, " ?a{i}").unwrap();
        }
        out.push(')');
    }
    out.push_str(")\n");

    for a in model.actions.values() {
        write_action(&mut out, a);
    }
    out.push_str(")\n");
    out
}

fn write_action(out: &mut String, a: &LiftedAction) {
    writeln!(out, "  (:action {}", a.name).unwrap();
    let params: Vec<String> = a
        .params
        .iter()
        .map(|p| format!("?{} - {}", p.name, p.ty))
        .collect();
    writeln!(out, "    :parameters ({})", params.join(" ")).unwrap();
    let pre: Vec<String> = a.precond.iter().map(pddl_atom).collect();
    writeln!(out, "    :precondition (and {})", pre.join(" ").trim_end())
        .unwrap();
    let eff: Vec<String> = a
        .add
        .iter()
        .map(pddl_atom)
        .chain(a.delete.iter().map(|x| format!("(not {})", pddl_atom(x))))
        .collect();
    writeln!(out, "    :effect (and {}))", eff.join(" ")).unwrap();
}

/// Human-readable listing: one header per action with its parameter types,
/// followed by `precond:`, `add:` and `delete:` blocks.
pub fn details(model: &LearnedModel) -> String {
    let mut out = String::from("Actions:\n");
    for a in model.actions.values() {
        let indent = " ".repeat(a.name.len() + 2);
        write!(out, "({}", a.name).unwrap();
        for (i, p) in a.params.iter().enumerate() {
            if i == 0 {
                write!(out, " {}", p.ty).unwrap();
            } else {
                write!(out, "\n{indent}{}", p.ty).unwrap();
            }
        }
        out.push_str("):\n");
        for (label, set) in [("precond", &a.precond), ("add", &a.add), ("delete", &a.delete)] {
            writeln!(out, "  {label}:").unwrap();
            for atom in set {
                let mut line = atom.predicate.clone();
                for t in &atom.args {
                    line.push(' ');
                    match t {
                        Term::Var(v) => {
                            let ty = a
                                .params
                                .iter()
                                .find(|p| &p.name == v)
                                .map(|p| p.ty.as_str())
                                .unwrap_or(v);
                            line.push_str(ty);
                        }
                        Term::Const(c) => line.push_str(c),
                    }
                }
                writeln!(out, "    {line}").unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse_domain, TypedParam};
    use super::*;

    fn v(x: &str) -> Term {
        Term::Var(x.into())
    }

    fn soil_model() -> LearnedModel {
        let mut m = LearnedModel::default();
        let params = vec![
            TypedParam::new("x0", "waypoint"),
            TypedParam::new("x1", "lander"),
            TypedParam::new("x2", "rover"),
            TypedParam::new("x3", "waypoint"),
        ];
        m.insert(LiftedAction {
            name: "communicate_soil_data".into(),
            params,
            precond: [Atom::new("at", vec![v("x2"), v("x3")])].into(),
            add: [Atom::new("communicated_soil_data", vec![v("x0")])].into(),
            delete: BTreeSet::new(),
        });
        m
    }

    #[test]
    fn empty_model_has_no_actions() {
        let m = LearnedModel::default();
        let text = to_pddl(&m, "learned");
        let d = parse_domain(&text).unwrap();
        assert!(d.actions.is_empty());
        assert_eq!(details(&m), "Actions:\n");
    }

    #[test]
    fn details_layout() {
        let text = details(&soil_model());
        let expected = "Actions:
(communicate_soil_data waypoint
                       lander
                       rover
                       waypoint):
  precond:
    at rover waypoint
  add:
    communicated_soil_data waypoint
  delete:
";
        assert_eq!(text, expected);
    }

    #[test]
    fn pddl_round_trip() {
        let m = soil_model();
        let d = parse_domain(&to_pddl(&m, "learned")).unwrap();
        assert!(LearnedModel::from_domain(&d).same_theory(&m));
    }

    #[test]
    fn constants_survive_round_trip() {
        let mut m = LearnedModel::default();
        m.insert(LiftedAction {
            name: "drive".into(),
            params: vec![TypedParam::new("x0", "truck")],
            precond: [Atom::new("at", vec![v("x0"), Term::Const("depot".into())])].into(),
            add: BTreeSet::new(),
            delete: [Atom::new("at", vec![v("x0"), Term::Const("depot".into())])].into(),
        });
        let d = parse_domain(&to_pddl(&m, "learned")).unwrap();
        assert!(LearnedModel::from_domain(&d).same_theory(&m));
    }
}
