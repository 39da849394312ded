//! ARMS-lite: action models from partially observed traces via weighted
//! MaxSAT.
//!
//! Action schemas are identified by name and arity. For each schema, the
//! candidate predicate schemas are the predicates whose arguments are all
//! drawn from the action's arguments in some occurrence, recorded as
//! parameter positions. 0-ary predicates are candidates only for 0-ary
//! actions, which is what ground traces (e.g. from CSV) produce. Every (action schema, predicate schema) pair gets
//! three decision variables: `pre`, `add` and `del`.
//!
//! Clause families:
//! * hard: `pre → ¬add`, `del → pre`, `¬(add ∧ del)`;
//! * information (weight `info_weight`, or `info3_default` when the evidence
//!   is a goal fluent assumed true at the end of a trace): observed values
//!   before and after an occurrence constrain `pre`/`add`/`del`, and a fluent
//!   whose value changes across a gap of unknown steps must be added (or
//!   deleted) by one of the actions in the gap;
//! * plan (weight `max(plan_default, round(action_weight · freq))`): for a
//!   frequent consecutive pair of actions sharing arguments, some shared
//!   predicate is produced-then-used, kept-and-used, or deleted-then-added.
//!
//! The solution is refined for up to `upper_bound` rounds; after each round
//! the most frequent unfixed action has its assignment fixed and the
//! encoding is rebuilt. Preconditions that are false when the decoded model
//! is simulated along the observations are pruned, together with the
//! matching delete.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use modelacq_logic::{Cnf, Lit, MaxSatError, MaxSatSolver, Var};

use super::ExtractError;
use crate::model::LearnedModel;
use crate::observation::{ObservedTraceList, TokenType};
use crate::pddl::{split_canonical, Atom, LiftedAction, Term, TypedParam, ROOT_TYPE};

#[derive(Debug, Clone, PartialEq)]
pub struct ArmsParams {
    /// Refinement rounds.
    pub upper_bound: usize,
    /// Minimum number of occurrences for a frequent action pair.
    pub min_support: usize,
    /// Scale of plan-constraint weights.
    pub action_weight: u64,
    /// Weight of information constraints from observed fluents.
    pub info_weight: u64,
    /// Minimum relative frequency for a frequent action pair.
    pub threshold: f64,
    /// Weight of information constraints from goal fluents.
    pub info3_default: u64,
    /// Floor on plan-constraint weights.
    pub plan_default: u64,
    pub conflict_budget: Option<u64>,
}

impl Default for ArmsParams {
    fn default() -> Self {
        ArmsParams {
            upper_bound: 2,
            min_support: 2,
            action_weight: 110,
            info_weight: 100,
            threshold: 0.6,
            info3_default: 30,
            plan_default: 30,
            conflict_budget: None,
        }
    }
}

impl ArmsParams {
    pub fn validate(&self) -> Result<(), ExtractError> {
        let bad = |m: &str| Err(ExtractError::InvalidParams(m.to_string()));
        if self.upper_bound == 0 || self.min_support == 0 {
            return bad("upper_bound and min_support must be positive");
        }
        if self.action_weight == 0 || self.info_weight == 0 || self.info3_default == 0 || self.plan_default == 0 {
            return bad("weights must be positive");
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return bad("threshold must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Known initial state and goal of a trace, as canonical fluents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Boundary {
    pub init: Option<Vec<String>>,
    pub goal: Vec<String>,
}

impl Boundary {
    pub fn from_observed(obs: &ObservedTraceList) -> Vec<Boundary> {
        obs.traces
            .iter()
            .map(|t| Boundary {
                init: t.init.clone(),
                goal: t.goal.clone().unwrap_or_default(),
            })
            .collect()
    }
}

/// Weighted CNF of one round together with a readable name per decision
/// variable.
#[derive(Debug, Clone)]
pub struct ArmsEncoding {
    pub cnf: Cnf,
    pub var_names: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ArmsOutput {
    pub model: LearnedModel,
    /// MaxSAT cost of the last round.
    pub cost: u64,
    pub rounds: usize,
    /// Decision-variable assignment of the last round, before pruning.
    pub assignment: Vec<bool>,
    /// Full solver model of the last round, auxiliary variables included.
    pub solution: Vec<bool>,
    pub encoding: ArmsEncoding,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PredSchema {
    pred: String,
    pos: Vec<usize>,
}

struct Schema {
    name: String,
    arity: usize,
    types: Vec<String>,
    preds: Vec<PredSchema>,
    index: HashMap<PredSchema, usize>,
    occurrences: usize,
    offset: usize,
}

struct Occ {
    trace: usize,
    step: usize,
    schema: usize,
    args: Vec<String>,
    /// fluent id → predicate-schema indices of this action grounding to it
    rel: BTreeMap<usize, Vec<usize>>,
}

struct FrequentPair {
    a: usize,
    b: usize,
    freq: f64,
}

/// (value, weight) of each fluent at each step of each trace.
type Views = Vec<Vec<Vec<Option<(bool, u64)>>>>;

struct Context {
    schemas: Vec<Schema>,
    occs: Vec<Occ>,
    /// (trace, step) → occurrence
    occ_at: Vec<Vec<Option<usize>>>,
    views: Views,
    pairs: Vec<FrequentPair>,
    num_vars: usize,
}

const PRE: usize = 0;
const ADD: usize = 1;
const DEL: usize = 2;

impl Context {
    fn var(&self, schema: usize, ps: usize, kind: usize) -> Var {
        Var((self.schemas[schema].offset + 3 * ps + kind) as u32)
    }

    fn lit(&self, schema: usize, ps: usize, kind: usize, positive: bool) -> Lit {
        self.var(schema, ps, kind).lit(positive)
    }

    fn var_names(&self) -> Vec<String> {
        let mut out = vec![String::new(); self.num_vars];
        for (si, s) in self.schemas.iter().enumerate() {
            for (pi, p) in s.preds.iter().enumerate() {
                let atom: Vec<String> = std::iter::once(p.pred.clone())
                    .chain(p.pos.iter().map(|i| format!("x{i}")))
                    .collect();
                for (k, kind) in ["pre", "add", "del"].iter().enumerate() {
                    out[self.var(si, pi, k).index()] = format!("{kind}({}/{}, {})", s.name, s.arity, atom.join(" "));
                }
            }
        }
        out
    }
}

fn resolve_boundaries(obs: &ObservedTraceList, given: &[Boundary]) -> Result<Vec<Boundary>, ExtractError> {
    let n = obs.traces.len();
    match given.len() {
        0 => Ok(Boundary::from_observed(obs)),
        1 => Ok(vec![given[0].clone(); n]),
        m if m == n => Ok(given.to_vec()),
        m => Err(ExtractError::BoundaryCount { expected: n, found: m }),
    }
}

fn build_context(
    obs: &ObservedTraceList,
    params: &ArmsParams,
    boundaries: &[Boundary],
) -> Result<Context, ExtractError> {
    if !matches!(obs.token_type, TokenType::Identity | TokenType::PartialState) {
        return Err(ExtractError::IncompatibleTokens {
            extractor: "arms",
            found: obs.token_type,
        });
    }
    params.validate()?;
    let boundaries = resolve_boundaries(obs, boundaries)?;
    let index: HashMap<&str, usize> = obs.fluents.iter().enumerate().map(|(i, f)| (f.as_str(), i)).collect();
    let fid = |f: &String| {
        index
            .get(f.as_str())
            .copied()
            .ok_or_else(|| ExtractError::VocabularyMismatch(f.clone()))
    };
    let parsed: Vec<(&str, Vec<&str>)> = obs.fluents.iter().map(|f| split_canonical(f)).collect();

    // views with closed-world init and goal fluents at the end
    let mut views: Views = Vec::with_capacity(obs.traces.len());
    for (t, b) in obs.traces.iter().zip(&boundaries) {
        let mut tv: Vec<Vec<Option<(bool, u64)>>> = t
            .tokens
            .iter()
            .map(|tok| {
                (0..obs.fluents.len())
                    .map(|f| tok.value(f).map(|v| (v, params.info_weight)))
                    .collect()
            })
            .collect();
        if let (Some(init), Some(first)) = (&b.init, tv.first_mut()) {
            first.iter_mut().for_each(|x| *x = Some((false, params.info_weight)));
            for f in init {
                first[fid(f)?] = Some((true, params.info_weight));
            }
        }
        if let Some(last) = tv.last_mut() {
            for f in &b.goal {
                let i = fid(f)?;
                if last[i].is_none() {
                    last[i] = Some((true, params.info3_default));
                }
            }
        }
        views.push(tv);
    }

    let mut schemas: Vec<Schema> = Vec::new();
    let mut schema_index: BTreeMap<(String, usize), usize> = BTreeMap::new();
    let mut occs = Vec::new();
    let mut occ_at = Vec::with_capacity(obs.traces.len());
    for (ti, t) in obs.traces.iter().enumerate() {
        let mut row = vec![None; t.tokens.len()];
        for (si, tok) in t.tokens.iter().enumerate() {
            let Some(label) = tok.action() else {
                if si + 1 < t.tokens.len() {
                    return Err(ExtractError::MissingAction { trace: ti, step: si });
                }
                continue;
            };
            if si + 1 == t.tokens.len() {
                // an action with no successor observation carries no evidence
                continue;
            }
            let key = (label.name.clone(), label.arity());
            let s = *schema_index.entry(key).or_insert_with(|| {
                schemas.push(Schema {
                    name: label.name.clone(),
                    arity: label.arity(),
                    types: label
                        .args
                        .iter()
                        .map(|o| obs.objects.get(o).cloned().unwrap_or_else(|| ROOT_TYPE.to_string()))
                        .collect(),
                    preds: Vec::new(),
                    index: HashMap::new(),
                    occurrences: 0,
                    offset: 0,
                });
                schemas.len() - 1
            });
            let sch = &mut schemas[s];
            sch.occurrences += 1;
            for (i, o) in label.args.iter().enumerate() {
                let ty = obs.objects.get(o).map(String::as_str).unwrap_or(ROOT_TYPE);
                if sch.types[i] != ty {
                    sch.types[i] = ROOT_TYPE.to_string();
                }
            }
            let mut rel: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (f, (pred, fargs)) in parsed.iter().enumerate() {
                // propositional fluents only matter to unparameterized actions
                if fargs.is_empty() && label.arity() > 0 {
                    continue;
                }
                let choices: Vec<Vec<usize>> = fargs
                    .iter()
                    .map(|a| (0..label.arity()).filter(|&p| label.args[p] == *a).collect())
                    .collect();
                if choices.iter().any(Vec::is_empty) {
                    continue;
                }
                // cartesian product of position choices
                let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
                for c in &choices {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| {
                            c.iter().map(move |&p| {
                                let mut t = t.clone();
                                t.push(p);
                                t
                            })
                        })
                        .collect();
                }
                for pos in tuples {
                    let ps = PredSchema {
                        pred: pred.to_string(),
                        pos,
                    };
                    let next = sch.preds.len();
                    let idx = *sch.index.entry(ps.clone()).or_insert(next);
                    if idx == next {
                        sch.preds.push(ps);
                    }
                    rel.entry(f).or_default().push(idx);
                }
            }
            row[si] = Some(occs.len());
            occs.push(Occ {
                trace: ti,
                step: si,
                schema: s,
                args: label.args.clone(),
                rel,
            });
        }
        occ_at.push(row);
    }
    let mut num_vars = 0;
    for s in &mut schemas {
        s.offset = num_vars;
        num_vars += 3 * s.preds.len();
    }

    // frequent consecutive pairs sharing arguments
    let mut followed = vec![0usize; schemas.len()];
    // (first schema, second schema, shared argument positions) -> count and a witness pair of occurrences
    type PairKey = (usize, usize, Vec<(usize, usize)>);
    let mut support: BTreeMap<PairKey, (usize, usize, usize)> = BTreeMap::new();
    for row in &occ_at {
        for w in row.windows(2) {
            let (Some(a), Some(b)) = (w[0], w[1]) else { continue };
            followed[occs[a].schema] += 1;
            let mut pattern = Vec::new();
            for (p, x) in occs[a].args.iter().enumerate() {
                for (q, y) in occs[b].args.iter().enumerate() {
                    if x == y {
                        pattern.push((p, q));
                    }
                }
            }
            if pattern.is_empty() {
                continue;
            }
            support
                .entry((occs[a].schema, occs[b].schema, pattern))
                .or_insert((0, a, b))
                .0 += 1;
        }
    }
    let pairs = support
        .into_iter()
        .filter_map(|((sa, _, _), (count, a, b))| {
            let freq = count as f64 / followed[sa] as f64;
            (count >= params.min_support && freq >= params.threshold).then_some(FrequentPair { a, b, freq })
        })
        .collect();

    Ok(Context {
        schemas,
        occs,
        occ_at,
        views,
        pairs,
        num_vars,
    })
}

fn soft(cnf: &mut Cnf, lits: Vec<Lit>, w: u64) {
    if !lits.is_empty() {
        cnf.add_soft(lits, w).expect("literals are in range");
    }
}

fn hard(cnf: &mut Cnf, lits: Vec<Lit>) {
    cnf.add_clause(lits).expect("literals are in range");
}

fn encode(ctx: &Context, params: &ArmsParams, fixed: &BTreeMap<usize, bool>) -> Cnf {
    let mut cnf = Cnf::new(ctx.num_vars);
    for (s, sch) in ctx.schemas.iter().enumerate() {
        for p in 0..sch.preds.len() {
            let l = |k, pos| ctx.lit(s, p, k, pos);
            hard(&mut cnf, vec![l(PRE, false), l(ADD, false)]);
            hard(&mut cnf, vec![l(DEL, false), l(PRE, true)]);
            hard(&mut cnf, vec![l(ADD, false), l(DEL, false)]);
        }
    }
    for (&v, &b) in fixed {
        hard(&mut cnf, vec![Var(v as u32).lit(b)]);
    }

    // information constraints at each occurrence
    for o in &ctx.occs {
        let before = &ctx.views[o.trace][o.step];
        let after = &ctx.views[o.trace][o.step + 1];
        for (&f, pss) in &o.rel {
            let any = |k: usize| -> Vec<Lit> { pss.iter().map(|&p| ctx.lit(o.schema, p, k, true)).collect() };
            let each = |cnf: &mut Cnf, k: usize, w: u64| {
                for &p in pss {
                    soft(cnf, vec![ctx.lit(o.schema, p, k, false)], w);
                }
            };
            match before[f] {
                Some((false, w)) => each(&mut cnf, PRE, w),
                Some((true, w)) => soft(&mut cnf, any(PRE), w),
                None => {}
            }
            if let Some((false, w)) = after[f] {
                each(&mut cnf, ADD, w);
            }
            match (before[f], after[f]) {
                (Some((true, wb)), Some((false, wa))) => soft(&mut cnf, any(DEL), wb.min(wa)),
                (Some((false, wb)), Some((true, wa))) => soft(&mut cnf, any(ADD), wb.min(wa)),
                (Some((true, wb)), Some((true, wa))) => each(&mut cnf, DEL, wb.min(wa)),
                (None, Some((true, w))) => {
                    for &p in pss {
                        soft(
                            &mut cnf,
                            vec![ctx.lit(o.schema, p, ADD, true), ctx.lit(o.schema, p, DEL, false)],
                            w,
                        );
                    }
                }
                _ => {}
            }
        }
    }

    // preconditions on fluents unknown before the action must be supported
    // by the last known value and the effects in between
    for o in &ctx.occs {
        let tv = &ctx.views[o.trace];
        for (&f, pss) in &o.rel {
            if tv[o.step][f].is_some() {
                continue;
            }
            let Some((i, (v, w))) = (0..o.step).rev().find_map(|i| tv[i][f].map(|x| (i, x))) else {
                continue;
            };
            let effects = |from: usize, kind: usize| -> Vec<Lit> {
                (from..o.step)
                    .filter_map(|k| ctx.occ_at[o.trace][k])
                    .flat_map(|ok| {
                        let ok = &ctx.occs[ok];
                        ok.rel
                            .get(&f)
                            .into_iter()
                            .flatten()
                            .map(move |&p| ctx.lit(ok.schema, p, kind, true))
                    })
                    .collect()
            };
            for &p in pss {
                let not_pre = ctx.lit(o.schema, p, PRE, false);
                if !v {
                    let mut lits = vec![not_pre];
                    lits.extend(effects(i, ADD));
                    soft(&mut cnf, lits, w);
                    continue;
                }
                for k in i..o.step {
                    let Some(ok) = ctx.occ_at[o.trace][k] else { continue };
                    let ok = &ctx.occs[ok];
                    for &pk in ok.rel.get(&f).into_iter().flatten() {
                        let mut lits = vec![not_pre, ctx.lit(ok.schema, pk, DEL, false)];
                        lits.extend(effects(k + 1, ADD));
                        soft(&mut cnf, lits, w);
                    }
                }
            }
        }
    }

    // changes across gaps of unknown values
    let n =ctx.views.first().and_then(|v| v.first()).map_or(0, Vec::len);
    for (t, tv) in ctx.views.iter().enumerate() {
        for f in 0..n {
            let mut last: Option<(usize, bool, u64)> = None;
            for (j, step) in tv.iter().enumerate() {
                let Some((v, w)) = step[f] else { continue };
                if let Some((i, u, wi)) = last {
                    if j > i + 1 && u != v {
                        let kind = if v { ADD } else { DEL };
                        let lits: Vec<Lit> = (i..j)
                            .filter_map(|k| ctx.occ_at[t][k])
                            .flat_map(|oi| {
                                let o = &ctx.occs[oi];
                                o.rel
                                    .get(&f)
                                    .into_iter()
                                    .flatten()
                                    .map(move |&p| ctx.lit(o.schema, p, kind, true))
                            })
                            .collect();
                        soft(&mut cnf, lits, wi.min(w));
                    }
                }
                last = Some((j, v, w));
            }
        }
    }

    // plan constraints
    for pair in &ctx.pairs {
        let (a, b) = (&ctx.occs[pair.a], &ctx.occs[pair.b]);
        let mut options = Vec::new();
        for (f, pas) in &a.rel {
            let Some(pbs) = b.rel.get(f) else { continue };
            for &pa in pas {
                for &pb in pbs {
                    let la = |k, pos| ctx.lit(a.schema, pa, k, pos);
                    let lb = |k, pos| ctx.lit(b.schema, pb, k, pos);
                    let conjunctions = [
                        vec![la(ADD, true), lb(PRE, true)],
                        vec![la(PRE, true), lb(PRE, true), la(DEL, false)],
                        vec![la(DEL, true), lb(ADD, true)],
                    ];
                    for conj in conjunctions {
                        let aux = cnf.new_var();
                        for l in conj {
                            hard(&mut cnf, vec![aux.lit(false), l]);
                        }
                        options.push(aux.lit(true));
                    }
                }
            }
        }
        let w = ((params.action_weight as f64 * pair.freq).round() as u64).max(params.plan_default);
        soft(&mut cnf, options, w);
    }
    cnf
}

/// Round-one encoding, e.g. for export to an external MaxSAT solver.
pub fn encode_arms(
    obs: &ObservedTraceList,
    params: &ArmsParams,
    boundaries: &[Boundary],
) -> Result<ArmsEncoding, ExtractError> {
    let ctx = build_context(obs, params, boundaries)?;
    Ok(ArmsEncoding {
        cnf: encode(&ctx, params, &BTreeMap::new()),
        var_names: ctx.var_names(),
    })
}

/// Runs ARMS-lite. `boundaries` holds the known initial state and goal: empty
/// to use those recorded in each trace, one entry shared by all traces, or
/// one entry per trace.
pub fn extract_arms(
    obs: &ObservedTraceList,
    params: &ArmsParams,
    boundaries: &[Boundary],
) -> Result<ArmsOutput, ExtractError> {
    let ctx = build_context(obs, params, boundaries)?;
    let solver = MaxSatSolver {
        conflict_budget: params.conflict_budget,
    };
    let mut fixed: BTreeMap<usize, bool> = BTreeMap::new();
    let mut fixed_schemas: BTreeSet<usize> = BTreeSet::new();
    let mut rounds = 0;
    let mut last = None;
    while rounds < params.upper_bound {
        rounds += 1;
        let cnf = encode(&ctx, params, &fixed);
        let sol = solver.solve(&cnf).map_err(|e| match e {
            MaxSatError::HardUnsat => ExtractError::Unsatisfiable,
            MaxSatError::BudgetExceeded => ExtractError::SolverBudgetExceeded,
        })?;
        let assignment = sol.model[..ctx.num_vars].to_vec();
        let next = (0..ctx.schemas.len())
            .filter(|s| !fixed_schemas.contains(s))
            .max_by_key(|&s| (ctx.schemas[s].occurrences, std::cmp::Reverse(s)));
        last = Some((cnf, sol.cost, assignment, sol.model));
        let Some(s) = next else { break };
        fixed_schemas.insert(s);
        let sch = &ctx.schemas[s];
        let assignment = &last.as_ref().expect("just set").2;
        let span = sch.offset..sch.offset + 3 * sch.preds.len();
        fixed.extend(span.clone().zip(assignment[span].iter().copied()));
    }
    let (cnf, cost, assignment, solution) = match last {
        Some(x) => x,
        None => {
            let cnf = encode(&ctx, params, &fixed);
            let zeros = vec![false; cnf.num_vars()];
            (cnf, 0, zeros[..ctx.num_vars].to_vec(), zeros)
        }
    };

    // Every observed action was executable, so a precondition that is false
    // in the ternary simulation (observations plus decoded effects) is
    // dropped together with its delete. Dropping deletes only makes fluents
    // true, so this reaches a fixpoint.
    let mut pre: Vec<bool> = assignment.clone();
    loop {
        let mut changed = false;
        for (t, tv) in ctx.views.iter().enumerate() {
            let mut sim: Vec<Option<bool>> = vec![None; tv.first().map_or(0, Vec::len)];
            for (j, step) in tv.iter().enumerate() {
                for (s, v) in sim.iter_mut().zip(step) {
                    if let Some((b, _)) = v {
                        *s = Some(*b);
                    }
                }
                let Some(oi) = ctx.occ_at[t].get(j).copied().flatten() else { continue };
                let o = &ctx.occs[oi];
                for (&f, pss) in &o.rel {
                    for &p in pss {
                        let v = ctx.var(o.schema, p, PRE).index();
                        if pre[v] && sim[f] == Some(false) {
                            pre[v] = false;
                            changed = true;
                        }
                    }
                }
                let mut next = sim.clone();
                for (&f, pss) in &o.rel {
                    for &p in pss {
                        if pre[ctx.var(o.schema, p, PRE).index()] && assignment[ctx.var(o.schema, p, DEL).index()] {
                            next[f] = Some(false);
                        }
                    }
                }
                for (&f, pss) in &o.rel {
                    if pss.iter().any(|&p| assignment[ctx.var(o.schema, p, ADD).index()]) {
                        next[f] = Some(true);
                    }
                }
                sim = next;
            }
        }
        if !changed {
            break;
        }
    }

    let mut model = LearnedModel::new(obs.fluents.clone());
    for (s, sch) in ctx.schemas.iter().enumerate() {
        let params_list: Vec<TypedParam> = sch
            .types
            .iter()
            .enumerate()
            .map(|(i, t)| TypedParam::new(format!("x{i}"), t.clone()))
            .collect();
        let mut action = LiftedAction {
            name: sch.name.clone(),
            params: params_list,
            ..Default::default()
        };
        for (p, ps) in sch.preds.iter().enumerate() {
            let atom = Atom::new(ps.pred.clone(), ps.pos.iter().map(|i| Term::Var(format!("x{i}"))).collect());
            let val = |k| assignment[ctx.var(s, p, k).index()];
            let keep_pre = pre[ctx.var(s, p, PRE).index()];
            if keep_pre {
                action.precond.insert(atom.clone());
                if val(DEL) {
                    action.delete.insert(atom.clone());
                }
            }
            if val(ADD) {
                action.add.insert(atom);
            }
        }
        model.insert_with_types(action, &obs.objects);
    }

    Ok(ArmsOutput {
        model,
        cost,
        rounds,
        assignment,
        solution,
        encoding: ArmsEncoding {
            cnf,
            var_names: ctx.var_names(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::BLOCKSWORLD_4;
    use crate::extraction::replay_consistency;
    use crate::observation::{tokenize, TokenizeParams};
    use crate::tracegen::random_walk;

    #[test]
    fn zero_traces_give_empty_model() {
        let obs = ObservedTraceList {
            token_type: TokenType::PartialState,
            fluents: vec!["p".into()],
            objects: BTreeMap::new(),
            provenance: Vec::new(),
            traces: Vec::new(),
        };
        let out = extract_arms(&obs, &ArmsParams::default(), &[]).unwrap();
        assert!(out.model.actions.is_empty());
    }

    #[test]
    fn invalid_threshold() {
        let p = ArmsParams {
            threshold: 1.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn fully_observed_blocksworld_replays() {
        let task = BLOCKSWORLD_4.task().unwrap();
        let traces = random_walk(&task, 12, 4, 3);
        let obs = tokenize(&traces, TokenType::Identity, &TokenizeParams::default(), 0).unwrap();
        let out = extract_arms(&obs, &ArmsParams::default(), &[]).unwrap();
        let r = replay_consistency(&out.model, &obs).unwrap();
        assert_eq!(r.total().precondition_violations, 0);
        // 0-ary predicates share no parameter with any action, so changes
        // of `handempty` stay unexplained; parameterized effects are learned.
        let stack = out.model.find("stack", 2).unwrap();
        let v = |x: &str| Term::Var(x.into());
        assert!(stack.add.contains(&Atom::new("on", vec![v("x0"), v("x1")])));
        assert!(stack.delete.contains(&Atom::new("holding", vec![v("x0")])));
        for a in out.model.actions.values() {
            assert!(a.add.is_disjoint(&a.delete));
            assert!(a.delete.is_subset(&a.precond));
            assert!(a.add.is_disjoint(&a.precond));
        }
    }
}
