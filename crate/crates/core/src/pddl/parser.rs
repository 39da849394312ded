use std::collections::BTreeSet;

use super::sexpr::{self, syntax_error, SExpr};
use super::{
    Atom, Domain, Fluent, LiftedAction, PddlError, PlanningObject, PredicateDecl, Problem, Term,
    TypedParam, ROOT_TYPE,
};

const SUPPORTED_REQUIREMENTS: [&str; 2] = ["strips", "typing"];

fn unsupported(name: &str) -> PddlError {
    PddlError::UnsupportedFeature(name.trim_start_matches(':').to_string())
}

fn expect_list<'a>(e: &'a SExpr, what: &str) -> Result<&'a [SExpr], PddlError> {
    e.as_list()
        .ok_or_else(|| syntax_error(e.pos(), format!("expected {what}")))
}

fn expect_atom<'a>(e: &'a SExpr, what: &str) -> Result<&'a str, PddlError> {
    e.as_atom()
        .ok_or_else(|| syntax_error(e.pos(), format!("expected {what}")))
}

/// `(define (<kind> NAME) ...)` → (name, remaining sections)
fn header<'a>(root: &'a SExpr, kind: &str) -> Result<(String, &'a [SExpr]), PddlError> {
    let items = expect_list(root, "`(define ...)`")?;
    if items.first().and_then(SExpr::as_atom) != Some("define") {
        return Err(syntax_error(root.pos(), "expected `define`"));
    }
    let decl = items
        .get(1)
        .ok_or_else(|| syntax_error(root.pos(), format!("missing `({kind} NAME)`")))?;
    let d = expect_list(decl, &format!("`({kind} NAME)`"))?;
    if d.len() != 2 || d[0].as_atom() != Some(kind) {
        return Err(syntax_error(decl.pos(), format!("expected `({kind} NAME)`")));
    }
    Ok((expect_atom(&d[1], "name")?.to_string(), &items[2..]))
}

/// Typed list `a b - t c - u d`; untyped trailing items get `object`.
fn typed_list(items: &[SExpr]) -> Result<Vec<(String, String)>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let e = &items[i];
        match e {
            SExpr::Atom(a, _) if a == "-" => {
                let ty = items
                    .get(i + 1)
                    .ok_or_else(|| syntax_error(e.pos(), "`-` without a type"))?;
                if ty.head() == Some("either") {
                    return Err(unsupported("either"));
                }
                let ty = expect_atom(ty, "type name")?;
                if pending.is_empty() {
                    return Err(syntax_error(e.pos(), "`-` without preceding names"));
                }
                out.extend(pending.drain(..).map(|n| (n, ty.to_string())));
                i += 2;
            }
            SExpr::Atom(a, _) => {
                pending.push(a.clone());
                i += 1;
            }
            SExpr::List(..) => return Err(syntax_error(e.pos(), "unexpected list in typed list")),
        }
    }
    out.extend(pending.into_iter().map(|n| (n, ROOT_TYPE.to_string())));
    Ok(out)
}

fn params(items: &[SExpr]) -> Result<Vec<TypedParam>, PddlError> {
    typed_list(items)?
        .into_iter()
        .map(|(n, t)| match n.strip_prefix('?') {
            Some(v) => Ok(TypedParam::new(v, t)),
            None => Err(syntax_error(
                items[0].pos(),
                format!("parameter `{n}` must start with `?`"),
            )),
        })
        .collect()
}

pub fn parse_domain(text: &str) -> Result<Domain, PddlError> {
    let root = sexpr::parse(text)?;
    let (name, sections) = header(&root, "domain")?;
    let mut domain = Domain {
        name,
        requirements: Vec::new(),
        types: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
    };
    let mut raw_actions: Vec<&SExpr> = Vec::new();

    for sec in sections {
        let items = expect_list(sec, "domain section")?;
        let key = items
            .first()
            .and_then(SExpr::as_atom)
            .ok_or_else(|| syntax_error(sec.pos(), "expected section keyword"))?;
        match key {
            ":requirements" => {
                for r in &items[1..] {
                    let r = expect_atom(r, "requirement flag")?;
                    let flag = r.trim_start_matches(':');
                    if !SUPPORTED_REQUIREMENTS.contains(&flag) {
                        return Err(unsupported(flag));
                    }
                    domain.requirements.push(flag.to_string());
                }
            }
            ":types" => {
                for (t, parent) in typed_list(&items[1..])? {
                    if t != ROOT_TYPE {
                        domain.types.push((t, parent));
                    }
                }
            }
            ":constants" => {
                for (n, t) in typed_list(&items[1..])? {
                    domain.constants.push(PlanningObject::new(t, n));
                }
            }
            ":predicates" => {
                for p in &items[1..] {
                    let pl = expect_list(p, "predicate declaration")?;
                    let pname = expect_atom(
                        pl.first()
                            .ok_or_else(|| syntax_error(p.pos(), "empty predicate"))?,
                        "predicate name",
                    )?;
                    domain.predicates.push(PredicateDecl {
                        name: pname.to_string(),
                        params: params(&pl[1..])?,
                    });
                }
            }
            ":action" => raw_actions.push(sec),
            ":functions" => return Err(unsupported("numeric-fluents")),
            ":derived" => return Err(unsupported("derived-predicates")),
            ":durative-action" => return Err(unsupported("durative-actions")),
            other => {
                return Err(syntax_error(
                    sec.pos(),
                    format!("unknown domain section `{other}`"),
                ))
            }
        }
    }

    for (_, parent) in &domain.types {
        if !domain.has_type(parent) {
            return Err(PddlError::UndeclaredType(parent.clone()));
        }
    }
    for c in &domain.constants {
        if !domain.has_type(&c.obj_type) {
            return Err(PddlError::UndeclaredType(c.obj_type.clone()));
        }
    }
    for p in &domain.predicates {
        for a in &p.params {
            if !domain.has_type(&a.ty) {
                return Err(PddlError::UndeclaredType(a.ty.clone()));
            }
        }
    }
    for sec in raw_actions {
        let action = parse_action(sec, &domain)?;
        domain.actions.push(action);
    }
    Ok(domain)
}

fn parse_action(sec: &SExpr, domain: &Domain) -> Result<LiftedAction, PddlError> {
    let items = sec.as_list().unwrap();
    let name = expect_atom(
        items
            .get(1)
            .ok_or_else(|| syntax_error(sec.pos(), "action without a name"))?,
        "action name",
    )?
    .to_string();
    let mut action = LiftedAction {
        name,
        ..Default::default()
    };
    let mut i = 2;
    while i < items.len() {
        let key = expect_atom(&items[i], "action keyword")?;
        let val = items
            .get(i + 1)
            .ok_or_else(|| syntax_error(items[i].pos(), format!("`{key}` without a value")))?;
        match key {
            ":parameters" => action.params = params(expect_list(val, "parameter list")?)?,
            ":precondition" => action.precond = condition(val, &action, domain)?,
            ":effect" => {
                let (add, del) = effect(val, &action, domain)?;
                action.add = add;
                action.delete = del;
            }
            other => {
                return Err(syntax_error(
                    items[i].pos(),
                    format!("unknown action keyword `{other}`"),
                ))
            }
        }
        i += 2;
    }
    for p in &action.params {
        if !domain.has_type(&p.ty) {
            return Err(PddlError::UndeclaredType(p.ty.clone()));
        }
    }
    Ok(action)
}

fn lifted_atom(e: &SExpr, action: &LiftedAction, domain: &Domain) -> Result<Atom, PddlError> {
    let items = expect_list(e, "atom")?;
    let pred = expect_atom(
        items.first().ok_or_else(|| syntax_error(e.pos(), "empty atom"))?,
        "predicate",
    )?;
    match pred {
        "not" => return Err(unsupported("negative-preconditions")),
        "or" => return Err(unsupported("disjunctive-preconditions")),
        "imply" => return Err(unsupported("disjunctive-preconditions")),
        "forall" | "exists" => return Err(unsupported("quantified-preconditions")),
        "when" => return Err(unsupported("conditional-effects")),
        "=" => return Err(unsupported("equality")),
        "increase" | "decrease" | "assign" => return Err(unsupported("action-costs")),
        _ => {}
    }
    let decl = domain
        .predicate(pred)
        .ok_or_else(|| PddlError::UndeclaredPredicate(pred.to_string()))?;
    if decl.params.len() != items.len() - 1 {
        return Err(PddlError::ArityMismatch {
            predicate: pred.to_string(),
            expected: decl.params.len(),
            found: items.len() - 1,
        });
    }
    let mut args = Vec::new();
    for (arg, slot) in items[1..].iter().zip(&decl.params) {
        let a = expect_atom(arg, "term")?;
        let (term, ty) = match a.strip_prefix('?') {
            Some(v) => {
                let p = action.params.iter().find(|p| p.name == v).ok_or_else(|| {
                    PddlError::UnboundVariable {
                        action: action.name.clone(),
                        var: v.to_string(),
                    }
                })?;
                (Term::Var(v.to_string()), p.ty.clone())
            }
            None => {
                let c = domain
                    .constants
                    .iter()
                    .find(|c| c.name == a)
                    .ok_or_else(|| PddlError::UndeclaredObject(a.to_string()))?;
                (Term::Const(a.to_string()), c.obj_type.clone())
            }
        };
        if !domain.is_subtype(&ty, &slot.ty) {
            return Err(PddlError::TypeMismatch {
                object: a.to_string(),
                expected: slot.ty.clone(),
                found: ty,
            });
        }
        args.push(term);
    }
    Ok(Atom::new(pred, args))
}

/// Conjunction of positive atoms: `()`, `atom` or `(and atom*)`.
fn condition(e: &SExpr, action: &LiftedAction, domain: &Domain) -> Result<BTreeSet<Atom>, PddlError> {
    let items = expect_list(e, "precondition")?;
    match items.first().and_then(SExpr::as_atom) {
        None if items.is_empty() => Ok(BTreeSet::new()),
        Some("and") => items[1..]
            .iter()
            .map(|x| lifted_atom(x, action, domain))
            .collect(),
        _ => Ok(BTreeSet::from([lifted_atom(e, action, domain)?])),
    }
}

type Effects = (BTreeSet<Atom>, BTreeSet<Atom>);

fn effect(e: &SExpr, action: &LiftedAction, domain: &Domain) -> Result<Effects, PddlError> {
    let items = expect_list(e, "effect")?;
    let parts: &[SExpr] = match items.first().and_then(SExpr::as_atom) {
        None if items.is_empty() => &[],
        Some("and") => &items[1..],
        _ => std::slice::from_ref(e),
    };
    let mut add = BTreeSet::new();
    let mut del = BTreeSet::new();
    for p in parts {
        if p.head() == Some("not") {
            let inner = expect_list(p, "negated atom")?;
            if inner.len() != 2 {
                return Err(syntax_error(p.pos(), "`not` takes one atom"));
            }
            del.insert(lifted_atom(&inner[1], action, domain)?);
        } else {
            add.insert(lifted_atom(p, action, domain)?);
        }
    }
    Ok((add, del))
}

pub fn parse_problem(text: &str, domain: &Domain) -> Result<Problem, PddlError> {
    let root = sexpr::parse(text)?;
    let (name, sections) = header(&root, "problem")?;
    let mut problem = Problem {
        name,
        domain: String::new(),
        objects: Vec::new(),
        init: Vec::new(),
        goal: Vec::new(),
    };
    let mut init_raw: Option<&[SExpr]> = None;
    let mut goal_raw: Option<&SExpr> = None;

    for sec in sections {
        let items = expect_list(sec, "problem section")?;
        let key = items
            .first()
            .and_then(SExpr::as_atom)
            .ok_or_else(|| syntax_error(sec.pos(), "expected section keyword"))?;
        match key {
            ":domain" => {
                problem.domain = expect_atom(
                    items
                        .get(1)
                        .ok_or_else(|| syntax_error(sec.pos(), "missing domain name"))?,
                    "domain name",
                )?
                .to_string()
            }
            ":requirements" => {
                for r in &items[1..] {
                    let flag = expect_atom(r, "requirement flag")?.trim_start_matches(':');
                    if !SUPPORTED_REQUIREMENTS.contains(&flag) {
                        return Err(unsupported(flag));
                    }
                }
            }
            ":objects" => {
                for (n, t) in typed_list(&items[1..])? {
                    if !domain.has_type(&t) {
                        return Err(PddlError::UndeclaredType(t));
                    }
                    problem.objects.push(PlanningObject::new(t, n));
                }
            }
            ":init" => init_raw = Some(&items[1..]),
            ":goal" => {
                goal_raw = Some(
                    items
                        .get(1)
                        .ok_or_else(|| syntax_error(sec.pos(), "empty goal"))?,
                )
            }
            ":metric" => return Err(unsupported("action-costs")),
            other => {
                return Err(syntax_error(
                    sec.pos(),
                    format!("unknown problem section `{other}`"),
                ))
            }
        }
    }
    for c in &domain.constants {
        if problem.object(&c.name).is_none() {
            problem.objects.push(c.clone());
        }
    }
    for e in init_raw.unwrap_or(&[]) {
        let f = ground_atom(e, &problem, domain)?;
        problem.init.push(f);
    }
    if let Some(g) = goal_raw {
        let items = expect_list(g, "goal")?;
        let parts: &[SExpr] = match items.first().and_then(SExpr::as_atom) {
            None if items.is_empty() => &[],
            Some("and") => &items[1..],
            _ => std::slice::from_ref(g),
        };
        for p in parts {
            let f = ground_atom(p, &problem, domain)?;
            problem.goal.push(f);
        }
    }
    Ok(problem)
}

fn ground_atom(e: &SExpr, problem: &Problem, domain: &Domain) -> Result<Fluent, PddlError> {
    let items = expect_list(e, "ground atom")?;
    let pred = expect_atom(
        items.first().ok_or_else(|| syntax_error(e.pos(), "empty atom"))?,
        "predicate",
    )?;
    match pred {
        "not" => return Err(unsupported("negative-preconditions")),
        "or" | "imply" => return Err(unsupported("disjunctive-preconditions")),
        "forall" | "exists" => return Err(unsupported("quantified-preconditions")),
        "=" => return Err(unsupported("numeric-fluents")),
        _ => {}
    }
    let decl = domain
        .predicate(pred)
        .ok_or_else(|| PddlError::UndeclaredPredicate(pred.to_string()))?;
    if decl.params.len() != items.len() - 1 {
        return Err(PddlError::ArityMismatch {
            predicate: pred.to_string(),
            expected: decl.params.len(),
            found: items.len() - 1,
        });
    }
    let mut args = Vec::new();
    for (arg, slot) in items[1..].iter().zip(&decl.params) {
        let a = expect_atom(arg, "object name")?;
        let obj = problem
            .object(a)
            .ok_or_else(|| PddlError::UndeclaredObject(a.to_string()))?;
        if !domain.is_subtype(&obj.obj_type, &slot.ty) {
            return Err(PddlError::TypeMismatch {
                object: a.to_string(),
                expected: slot.ty.clone(),
                found: obj.obj_type.clone(),
            });
        }
        args.push(obj.clone());
    }
    Ok(Fluent::new(pred, args))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "(define (domain tiny) (:requirements :strips)
        (:predicates (on))
        (:action flip :parameters () :precondition () :effect (on)))";

    #[test]
    fn minimal_domain() {
        let d = parse_domain(MINIMAL).unwrap();
        assert_eq!(d.predicates.len(), 1);
        assert_eq!(d.actions.len(), 1);
        assert_eq!(d.actions[0].add.len(), 1);
    }

    #[test]
    fn adl_rejected() {
        let e = parse_domain("(define (domain x) (:requirements :strips :adl))").unwrap_err();
        assert_eq!(e, PddlError::UnsupportedFeature("adl".into()));
    }

    #[test]
    fn negative_precondition_rejected() {
        let text = "(define (domain x) (:predicates (p))
            (:action a :parameters () :precondition (not (p)) :effect (p)))";
        assert_eq!(
            parse_domain(text).unwrap_err(),
            PddlError::UnsupportedFeature("negative-preconditions".into())
        );
    }

    #[test]
    fn conditional_effect_rejected() {
        let text = "(define (domain x) (:predicates (p))
            (:action a :parameters () :precondition () :effect (when (p) (p))))";
        assert_eq!(
            parse_domain(text).unwrap_err(),
            PddlError::UnsupportedFeature("conditional-effects".into())
        );
    }

    #[test]
    fn identifiers_lowercased() {
        let d = parse_domain(
            "(define (domain X) (:predicates (On ?A)) (:action Go :parameters (?A) :precondition (ON ?a) :effect (not (on ?A))))",
        )
        .unwrap();
        assert_eq!(d.actions[0].name, "go");
        assert_eq!(d.actions[0].delete.len(), 1);
    }

    #[test]
    fn unbound_variable() {
        let text = "(define (domain x) (:predicates (p ?a))
            (:action a :parameters () :precondition (p ?z) :effect ()))";
        assert!(matches!(
            parse_domain(text),
            Err(PddlError::UnboundVariable { .. })
        ));
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_domain("(define (domain x)\n  (:predicates (p)").unwrap_err();
        assert!(matches!(e, PddlError::Syntax { line: 2, col: 3, .. }));
    }

    #[test]
    fn empty_problem() {
        let d = parse_domain(MINIMAL).unwrap();
        let p = parse_problem("(define (problem p) (:domain tiny) (:init) (:goal (and)))", &d).unwrap();
        assert!(p.init.is_empty());
        assert!(p.goal.is_empty());
    }

    #[test]
    fn goal_with_undeclared_object() {
        let d = parse_domain(
            "(define (domain x) (:requirements :typing) (:types b) (:predicates (clear ?x - b)))",
        )
        .unwrap();
        let e = parse_problem(
            "(define (problem p) (:domain x) (:objects a - b) (:init (clear a)) (:goal (clear zz)))",
            &d,
        )
        .unwrap_err();
        assert_eq!(e, PddlError::UndeclaredObject("zz".into()));
    }

    #[test]
    fn problem_type_mismatch() {
        let d = parse_domain(
            "(define (domain x) (:types b c) (:predicates (clear ?x - b)))",
        )
        .unwrap();
        let e = parse_problem(
            "(define (problem p) (:domain x) (:objects k - c) (:init (clear k)) (:goal (and)))",
            &d,
        )
        .unwrap_err();
        assert!(matches!(e, PddlError::TypeMismatch { .. }));
    }

    #[test]
    fn undeclared_predicate_in_init() {
        let d = parse_domain(MINIMAL).unwrap();
        let e = parse_problem("(define (problem p) (:domain tiny) (:init (off)) (:goal (on)))", &d)
            .unwrap_err();
        assert_eq!(e, PddlError::UndeclaredPredicate("off".into()));
    }
}
