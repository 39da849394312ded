//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use modelacq::domains::{Bundled, BLOCKSWORLD_4, GRIPPER_2, LOGISTICS_3, ROVER_1};
use modelacq::extraction::{extract_arms, extract_observer, observe, replay_consistency, ArmsParams};
use modelacq::model::LearnedModel;
use modelacq::observation::{tokenize, ObservationToken, TokenType, TokenizeParams};
use modelacq::pddl::{apply, parse_domain, serialize_model, GroundTask, State};
use modelacq::recommender::{
    nearest_techniques, recommend, replay_preferences, Constraint, ConstraintKind, FeatureLit, FeatureSchema,
    RecommendError, TechniqueEntry, Taxonomy,
};
use modelacq::trace::{load_csv, Trace, TraceList};
use modelacq::tracegen::{
    goal_quality, random_walk, sample_goals, trace_from_goal, trace_list, GoalSamplerConfig, DEFAULT_PLAN_BUDGET,
};
use modelacq_logic::{compile_ddnnf, parse_dimacs, solve_maxsat, solve_sat, write_dimacs, write_wcnf, Cnf, Lit, MaxSatError};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

// ---------------------------------------------------------------------------
// brute-force helpers

/// Clause as bit masks over at most 32 variables.
struct MaskClause {
    pos: u32,
    neg: u32,
}

fn masks(cnf: &Cnf, hard: bool) -> Vec<(MaskClause, u64)> {
    cnf.clauses()
        .iter()
        .filter(|c| c.is_hard() == hard)
        .map(|c| {
            let mut m = MaskClause { pos: 0, neg: 0 };
            for l in &c.lits {
                let bit = 1u32 << l.var().index();
                if l.is_positive() {
                    m.pos |= bit;
                } else {
                    m.neg |= bit;
                }
            }
            (m, c.weight.unwrap_or(0))
        })
        .collect()
}

fn sat_by(m: &MaskClause, a: u32) -> bool {
    a & m.pos != 0 || !a & m.neg != 0
}

fn models(cnf: &Cnf) -> impl Iterator<Item = u32> + '_ {
    let hard = masks(cnf, true);
    let empty = cnf.clauses().iter().any(|c| c.is_hard() && c.lits.is_empty());
    (0..1u32 << cnf.num_vars()).filter(move |&a| !empty && hard.iter().all(|(m, _)| sat_by(m, a)))
}

fn bools(a: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| a >> i & 1 == 1).collect()
}

fn random_clause(rng: &mut ChaCha8Rng, n: usize, width: usize) -> Vec<Lit> {
    let mut vars: Vec<usize> = (0..n).collect();
    vars.shuffle(rng);
    vars.into_iter()
        .take(width.min(n))
        .map(|v| Lit::from_dimacs(if rng.random_bool(0.5) { v as i32 + 1 } else { -(v as i32 + 1) }))
        .collect()
}

// ---------------------------------------------------------------------------
// 1. Observer exact recovery

/// Ground actions applicable in at least one reachable state.
fn reachable_actions(task: &GroundTask) -> BTreeSet<usize> {
    let mut seen: HashSet<State> = HashSet::from([task.init.clone()]);
    let mut queue = VecDeque::from([task.init.clone()]);
    let mut acts = BTreeSet::new();
    while let Some(s) = queue.pop_front() {
        for a in task.applicable(&s) {
            acts.insert(a);
            let n = apply(&s, a, task).unwrap();
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    acts
}

fn observer_on(b: Bundled) -> Result<String, String> {
    let task = b.task().map_err(|e| e.to_string())?;
    let needed = reachable_actions(&task);
    let mut traces: Vec<Trace> = Vec::new();
    let mut counts: HashMap<String, usize> = HashMap::new();
    let covered = |counts: &HashMap<String, usize>| {
        needed
            .iter()
            .all(|&a| counts.get(&task.actions[a].name).copied().unwrap_or(0) >= 5)
    };
    let mut seed = 0;
    while !covered(&counts) {
        if seed == 500 {
            return Err(format!("{}: coverage not reached", b.name));
        }
        for t in random_walk(&task, 40, 10, seed).traces {
            for a in t.actions() {
                *counts.entry(a.to_string()).or_default() += 1;
            }
            traces.push(t);
        }
        seed += 1;
    }
    let list = trace_list(&task, traces);
    let obs = tokenize(&list, TokenType::Identity, &TokenizeParams::default(), 0).map_err(|e| e.to_string())?;
    let out = observe(&obs).map_err(|e| e.to_string())?;
    let names = |bits: &fixedbitset::FixedBitSet| -> BTreeSet<String> {
        bits.ones().map(|f| task.fluent_names()[f].clone()).collect()
    };

    // every observed (s, a) pair is reproduced
    let mut pairs = 0;
    for t in &list.traces {
        for w in t.steps.windows(2) {
            let a = w[0].action.as_ref().unwrap();
            let e = &out.ground.actions[&a.to_string()];
            let s = names(&w[0].state.0);
            let next = names(&w[1].state.0);
            ensure(e.precond.is_subset(&s), || format!("{}: {a} precondition fails", b.name))?;
            let mut pred: BTreeSet<String> = s.difference(&e.delete).cloned().collect();
            pred.extend(e.add.iter().cloned());
            ensure(pred == next, || format!("{}: {a} transition differs", b.name))?;
            pairs += 1;
        }
    }
    // effects converge to the ground truth
    for &a in &needed {
        let g = &task.actions[a];
        let e = &out.ground.actions[&g.name];
        ensure(e.add == names(&g.add), || format!("{}: add of {} differs", b.name, g.name))?;
        ensure(e.delete == names(&g.del), || format!("{}: delete of {} differs", b.name, g.name))?;
    }
    Ok(format!("{} {} actions/{} pairs", b.name, needed.len(), pairs))
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let mut parts = Vec::new();
    for b in [BLOCKSWORLD_4, LOGISTICS_3, GRIPPER_2] {
        parts.push(observer_on(b)?);
    }
    within(t0.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{} in {:.2?}", parts.join(", "), t0.elapsed()))
}

// ---------------------------------------------------------------------------
// 2. ARMS-lite on Rover

fn rover_traces() -> Result<TraceList, String> {
    let task = ROVER_1.task().map_err(|e| e.to_string())?;
    let goals = [
        ["communicated_soil_data waypoint2", "communicated_rock_data waypoint3", "communicated_image_data objective1 high_res"],
        ["communicated_soil_data waypoint3", "communicated_rock_data waypoint2", "communicated_image_data objective1 high_res"],
    ];
    let traces = goals
        .iter()
        .map(|g| {
            let g: Vec<String> = g.iter().map(|s| s.to_string()).collect();
            trace_from_goal(&task, &g, DEFAULT_PLAN_BUDGET).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(trace_list(&task, traces))
}

fn criterion_2() -> Outcome {
    let list = rover_traces()?;
    let obs = tokenize(&list, TokenType::PartialState, &TokenizeParams::partial(0.6), 0).map_err(|e| e.to_string())?;
    let params = ArmsParams {
        upper_bound: 2,
        min_support: 2,
        action_weight: 110,
        info_weight: 100,
        threshold: 0.6,
        info3_default: 30,
        plan_default: 30,
        ..Default::default()
    };
    let t0 = Instant::now();
    let out = extract_arms(&obs, &params, &[]).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    ensure(out.encoding.cnf.satisfies_hard(&out.solution), || {
        "solver assignment violates a hard clause".into()
    })?;
    for a in out.model.actions.values() {
        ensure(a.add.is_disjoint(&a.delete), || format!("{}: add and delete overlap", a.name))?;
        ensure(a.delete.is_subset(&a.precond), || format!("{}: delete outside precondition", a.name))?;
        ensure(a.add.is_disjoint(&a.precond), || format!("{}: add inside precondition", a.name))?;
    }
    let r = replay_consistency(&out.model, &obs).map_err(|e| e.to_string())?;
    let rate = r.precondition_violation_rate();
    ensure(rate <= 0.05, || format!("violation rate {rate:.3}"))?;
    Ok(format!(
        "{} steps, violation rate {:.3}, {} schemas in {:.2?}",
        r.total().steps,
        rate,
        out.model.actions.len(),
        elapsed
    ))
}

// ---------------------------------------------------------------------------
// 3. tokenization statistics

fn criterion_3() -> Outcome {
    let task = BLOCKSWORLD_4.task().map_err(|e| e.to_string())?;
    let list = random_walk(&task, 20, 5, 1);
    let truth: Vec<Vec<bool>> = list
        .traces
        .iter()
        .flat_map(|t| t.steps.iter().map(|s| s.state.to_bools()))
        .collect();
    let n: usize = truth.iter().map(Vec::len).sum();
    ensure(n >= 1000, || format!("only {n} observations"))?;
    let mut lines = Vec::new();
    for (seed, pm) in [(0, 0.6), (1, 0.3)] {
        let obs = tokenize(&list, TokenType::PartialState, &TokenizeParams::partial(pm), seed).map_err(|e| e.to_string())?;
        let masked: usize = obs
            .traces
            .iter()
            .flat_map(|t| &t.tokens)
            .map(|tok| tok.view().unwrap().iter().filter(|v| v.is_none()).count())
            .sum();
        let frac = masked as f64 / n as f64;
        ensure((frac - pm).abs() <= 0.03, || format!("masked {frac:.3} vs {pm}"))?;
        lines.push(format!("masked {frac:.3}/{pm}"));
    }
    for (seed, fp) in [(2, 0.1), (3, 0.25)] {
        let obs = tokenize(&list, TokenType::NoisyState, &TokenizeParams::noisy(fp), seed).map_err(|e| e.to_string())?;
        let views = obs.traces.iter().flat_map(|t| &t.tokens);
        let flipped: usize = views
            .zip(&truth)
            .map(|(tok, s)| match tok {
                ObservationToken::NoisyState { view, .. } => view.iter().zip(s).filter(|(a, b)| a != b).count(),
                _ => usize::MAX / 4,
            })
            .sum();
        let frac = flipped as f64 / n as f64;
        ensure((frac - fp).abs() <= 0.03, || format!("flipped {frac:.3} vs {fp}"))?;
        lines.push(format!("flipped {frac:.3}/{fp}"));
    }
    Ok(format!("n = {n}: {}", lines.join(", ")))
}

// ---------------------------------------------------------------------------
// 4. SAT and MaxSAT oracles

fn criterion_4() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut sat, mut unsat) = (0, 0);
    for i in 0..500 {
        let n = 3 + i % 18;
        let m = (n as f64 * rng.random_range(3.0..5.5)) as usize;
        let mut cnf = Cnf::new(n);
        for _ in 0..m {
            cnf.add_clause(random_clause(&mut rng, n, 3)).unwrap();
        }
        let expected = models(&cnf).next().is_some();
        let got = solve_sat(&cnf);
        ensure(got.is_some() == expected, || format!("SAT instance {i}: verdict differs"))?;
        if let Some(a) = got {
            ensure(cnf.satisfies_hard(&a), || format!("SAT instance {i}: bad model"))?;
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    for i in 0..200 {
        let n = 2 + i % 14;
        let mut cnf = Cnf::new(n);
        for _ in 0..rng.random_range(0..=n) {
            let w = rng.random_range(1..=3);
            cnf.add_clause(random_clause(&mut rng, n, w)).unwrap();
        }
        for _ in 0..rng.random_range(1..=3 * n) {
            let w = rng.random_range(1..=3);
            let lits = random_clause(&mut rng, n, w);
            cnf.add_soft(lits, rng.random_range(1..=20)).unwrap();
        }
        let soft = masks(&cnf, false);
        let best = models(&cnf)
            .map(|a| soft.iter().filter(|(m, _)| !sat_by(m, a)).map(|(_, w)| w).sum::<u64>())
            .min();
        match (solve_maxsat(&cnf), best) {
            (Ok(sol), Some(b)) => {
                ensure(sol.cost == b, || format!("MaxSAT instance {i}: cost {} vs {b}", sol.cost))?;
                ensure(cnf.satisfies_hard(&sol.model) && cnf.cost(&sol.model) == b, || {
                    format!("MaxSAT instance {i}: model does not realize the cost")
                })?;
            }
            (Err(MaxSatError::HardUnsat), None) => {}
            (r, b) => return Err(format!("MaxSAT instance {i}: {r:?} vs {b:?}")),
        }
    }
    within(t0.elapsed(), Duration::from_secs(60))?;
    Ok(format!("500 SAT ({sat} sat/{unsat} unsat), 200 MaxSAT in {:.2?}", t0.elapsed()))
}

// ---------------------------------------------------------------------------
// 5. knowledge compilation

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..200 {
        let n = 1 + i % 16;
        let m = rng.random_range(0..=3 * n);
        let mut cnf = Cnf::new(n);
        for _ in 0..m {
            let w = rng.random_range(1..=3);
            cnf.add_clause(random_clause(&mut rng, n, w)).unwrap();
        }
        let d = compile_ddnnf(&cnf).map_err(|e| e.to_string())?;
        d.validate().map_err(|e| format!("instance {i}: {e}"))?;
        let expected = models(&cnf).count() as u128;
        ensure(d.count_models() == expected, || {
            format!("instance {i}: count {} vs {expected}", d.count_models())
        })?;
        let v = rng.random_range(0..n);
        let pos = rng.random_bool(0.5);
        let lit = Lit::from_dimacs(if pos { v as i32 + 1 } else { -(v as i32 + 1) });
        let c = d.condition(lit);
        c.validate().map_err(|e| format!("conditioned {i}: {e}"))?;
        let filtered = models(&cnf).filter(|a| (a >> v & 1 == 1) == pos).count() as u128;
        ensure(c.count_models() == filtered, || {
            format!("instance {i}: conditioned count {} vs {filtered}", c.count_models())
        })?;
    }
    Ok("200 compilations and 200 conditionings match enumeration".into())
}

// ---------------------------------------------------------------------------
// 6. recommendation

fn random_lits(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<FeatureLit> {
    let mut fs: Vec<usize> = (0..n).collect();
    fs.shuffle(rng);
    fs.into_iter()
        .take(k.min(n))
        .map(|f| FeatureLit::new(f, rng.random_bool(0.5)))
        .collect()
}

struct Greedy {
    assignment: Vec<bool>,
    enforced: Vec<FeatureLit>,
    skipped: Vec<FeatureLit>,
}

/// Filters every model of the theory through the preference pass.
fn brute_greedy(schema: &FeatureSchema, entries: &[TechniqueEntry], prefs: &[FeatureLit]) -> Option<Greedy> {
    let n = schema.len();
    let mut live: Vec<Vec<bool>> = (0..1u32 << n)
        .map(|a| bools(a, n))
        .filter(|a| schema.constraints().iter().all(|c| c.holds(a)))
        .filter(|a| entries.iter().all(|e| !e.cube.iter().all(|l| a[l.feature] == l.positive)))
        .collect();
    if live.is_empty() {
        return None;
    }
    let (mut enforced, mut skipped) = (Vec::new(), Vec::new());
    for &p in prefs {
        let keep: Vec<Vec<bool>> = live.iter().filter(|a| a[p.feature] == p.positive).cloned().collect();
        if keep.is_empty() {
            skipped.push(p);
        } else {
            live = keep;
            enforced.push(p);
        }
    }
    // false sorts before true, feature 0 first
    let assignment = live.into_iter().min().unwrap();
    Some(Greedy {
        assignment,
        enforced,
        skipped,
    })
}

fn brute_nearest(assignment: &[bool], entries: &[TechniqueEntry], k: usize) -> Vec<String> {
    let mut scored: Vec<(usize, usize, String)> = entries
        .iter()
        .map(|e| {
            let mut dist = 0;
            let mut spec = vec![false; assignment.len()];
            for l in &e.cube {
                spec[l.feature] = true;
                if assignment[l.feature] != l.positive {
                    dist += 1;
                }
            }
            (dist, spec.iter().filter(|s| !**s).count(), e.id.clone())
        })
        .collect();
    scored.sort();
    scored.into_iter().take(k).map(|s| s.2).collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let kinds = [
        ConstraintKind::Clause,
        ConstraintKind::AtLeastOne,
        ConstraintKind::AtMostOne,
        ConstraintKind::ExactlyOne,
    ];
    let mut saturated = 0;
    for i in 0..50 {
        let n = rng.random_range(4..=14);
        let constraints: Vec<Constraint> = (0..rng.random_range(1..=n / 2 + 1))
            .map(|c| {
                let w = rng.random_range(2..=3);
                Constraint {
                    name: format!("c{c}"),
                    kind: kinds[rng.random_range(0..kinds.len())],
                    lits: random_lits(&mut rng, n, w),
                }
            })
            .collect();
        let schema = FeatureSchema::anonymous(n, constraints).map_err(|e| e.to_string())?;
        let entries: Vec<TechniqueEntry> = (0..rng.random_range(3..=10))
            .map(|e| {
                let w = rng.random_range(1..=n.min(6));
                TechniqueEntry {
                    id: format!("e{e}"),
                    title: String::new(),
                    year: None,
                    cube: random_lits(&mut rng, n, w),
                }
            })
            .collect();
        let w = rng.random_range(0..=n);
        let prefs = random_lits(&mut rng, n, w);
        match (recommend(&schema, &entries, &prefs), brute_greedy(&schema, &entries, &prefs)) {
            (Ok(r), Some(b)) => {
                ensure(r.enforced == b.enforced && r.skipped == b.skipped, || {
                    format!("schema {i}: preference partition differs")
                })?;
                ensure(r.assignment == b.assignment, || format!("schema {i}: assignment differs"))?;
            }
            (Err(RecommendError::FieldSaturated), None) => saturated += 1,
            (r, b) => return Err(format!("schema {i}: {:?} vs oracle {}", r.map(|_| ()), b.is_some())),
        }
    }

    let t = Taxonomy::shipped();
    let r = recommend(&t.schema, &t.entries, &t.preferences).map_err(|e| e.to_string())?;
    ensure(t.schema.satisfies(&r.assignment), || "shipped: constraint violated".into())?;
    ensure(t.entries.iter().all(|e| !e.matches(&r.assignment)), || {
        "shipped: recommendation matches a registered cube".into()
    })?;
    replay_preferences(&t.schema, &t.entries, &t.preferences, &r).map_err(|e| format!("shipped: {e}"))?;
    let near: Vec<String> = nearest_techniques(&r.assignment, &t.entries, 3)
        .into_iter()
        .map(|n| n.id)
        .collect();
    ensure(near.len() == 3, || format!("shipped: {} neighbors", near.len()))?;
    ensure(near == brute_nearest(&r.assignment, &t.entries, 3), || {
        "shipped: neighbors differ from full sort".into()
    })?;
    Ok(format!(
        "50 random schemas match the greedy oracle ({saturated} saturated); shipped taxonomy ok, neighbors {}",
        near.join(", ")
    ))
}

// ---------------------------------------------------------------------------
// 7. goal-oriented sampling

fn bfs_reaches(task: &GroundTask, goal: &[usize]) -> Option<usize> {
    let mut seen: HashSet<State> = HashSet::from([task.init.clone()]);
    let mut queue = VecDeque::from([(task.init.clone(), 0)]);
    while let Some((s, d)) = queue.pop_front() {
        if task.satisfies(&s, goal) {
            return Some(d);
        }
        for a in task.applicable(&s) {
            let n = apply(&s, a, task).unwrap();
            if seen.insert(n.clone()) {
                queue.push_back((n, d + 1));
            }
        }
    }
    None
}

fn criterion_7() -> Outcome {
    let task = BLOCKSWORLD_4.task().map_err(|e| e.to_string())?;
    let cfg = GoalSamplerConfig::new(6, 2, 5, 7);
    let goals = sample_goals(&task, &cfg).map_err(|e| e.to_string())?;
    for c in &goals {
        ensure(c.goal.len() == 2, || format!("goal size {}", c.goal.len()))?;
        let depth = bfs_reaches(&task, &c.goal).ok_or_else(|| format!("{:?} unreachable", c.goal_names(&task)))?;
        let mut s = task.init.clone();
        for &a in &c.plan {
            ensure(task.actions[a].is_applicable(&s), || "plan not executable".into())?;
            s = apply(&s, a, &task).unwrap();
        }
        ensure(task.satisfies(&s, &c.goal), || "plan misses its goal".into())?;
        ensure(depth <= c.plan.len(), || "plan shorter than BFS depth".into())?;
        let q = 1.0 - (c.plan.len() as f64 - 6.0).abs() / 6.0;
        ensure(q == c.quality && q == goal_quality(c.plan.len(), 6), || {
            format!("quality {} vs recomputed {q}", c.quality)
        })?;
    }
    Ok(format!("{} goals reachable, qualities recomputed", goals.len()))
}

// ---------------------------------------------------------------------------
// 8. round trips

fn learned_models() -> Result<Vec<LearnedModel>, String> {
    let mut out = Vec::new();
    for b in [BLOCKSWORLD_4, LOGISTICS_3, GRIPPER_2, ROVER_1] {
        let task = b.task().map_err(|e| e.to_string())?;
        for seed in 0..4 {
            let list = random_walk(&task, 15, 3, seed);
            let obs = tokenize(&list, TokenType::Identity, &TokenizeParams::default(), 0).map_err(|e| e.to_string())?;
            out.push(extract_observer(&obs).map_err(|e| e.to_string())?);
        }
        let list = random_walk(&task, 10, 2, 99);
        let obs = tokenize(&list, TokenType::PartialState, &TokenizeParams::partial(0.5), 1).map_err(|e| e.to_string())?;
        out.push(extract_arms(&obs, &ArmsParams::default(), &[]).map_err(|e| e.to_string())?.model);
    }
    Ok(out)
}

fn criterion_8() -> Outcome {
    let models = learned_models()?;
    ensure(models.len() == 20, || format!("{} models", models.len()))?;
    for (i, m) in models.iter().enumerate() {
        let text = serialize_model(m, "learned").pddl;
        let d = parse_domain(&text).map_err(|e| format!("model {i}: {e}"))?;
        ensure(LearnedModel::from_domain(&d).same_theory(m), || format!("model {i}: PDDL round trip differs"))?;
    }

    let task = LOGISTICS_3.task().map_err(|e| e.to_string())?;
    let list = random_walk(&task, 12, 4, 8);
    let back = TraceList::from_json(&list.to_json()).map_err(|e| e.to_string())?;
    ensure(back == list, || "JSON trace round trip differs".into())?;
    for i in 0..list.len() {
        let csv = list.trace_to_csv(i);
        let import = load_csv(&csv, "action").map_err(|e| e.to_string())?;
        ensure(import.traces.fluents == list.fluents, || "CSV fluents differ".into())?;
        let (a, b) = (&import.traces.traces[0], &list.traces[i]);
        ensure(a.steps == b.steps, || format!("CSV trace {i} differs"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let n = rng.random_range(1..=12);
        let mut cnf = Cnf::new(n);
        for _ in 0..rng.random_range(0..=2 * n) {
            let w = rng.random_range(1..=4);
            cnf.add_clause(random_clause(&mut rng, n, w)).unwrap();
        }
        let plain = parse_dimacs(&write_dimacs(&cnf)).map_err(|e| e.to_string())?;
        ensure(plain == cnf, || format!("DIMACS instance {i} differs"))?;
        for _ in 0..rng.random_range(1..=n) {
            let w = rng.random_range(1..=3);
            let lits = random_clause(&mut rng, n, w);
            cnf.add_soft(lits, rng.random_range(1..=50)).unwrap();
        }
        let weighted = parse_dimacs(&write_wcnf(&cnf)).map_err(|e| e.to_string())?;
        ensure(weighted == cnf, || format!("WCNF instance {i} differs"))?;
    }
    Ok("20 PDDL models, JSON and CSV traces, 100 DIMACS and WCNF instances".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("observer exact recovery", criterion_1),
        ("ARMS-lite on Rover", criterion_2),
        ("tokenization statistics", criterion_3),
        ("SAT and MaxSAT oracles", criterion_4),
        ("knowledge compilation", criterion_5),
        ("recommendation", criterion_6),
        ("goal-oriented sampling", criterion_7),
        ("round trips", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
