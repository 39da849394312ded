//! Trace generation: random walks, heuristic-depth walks, planning and
//! goal-oriented sampling.
//!
//! Every trace draws from its own ChaCha8 stream derived from `(seed, index)`,
//! so traces are reproducible regardless of how many are generated.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::pddl::{apply, GroundTask, State};
use crate::trace::{ActionLabel, Step, Trace, TraceList};

pub const DEFAULT_PLAN_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("search budget of {0} expansions exhausted")]
    BudgetExhausted(usize),
    #[error("goal is unreachable from the initial state")]
    ProvedUnsolvable,
    #[error("no goal candidate survived planning and filtering")]
    NoCandidates,
    #[error("unknown fluent `{0}`")]
    UnknownFluent(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub(crate) fn trace_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn empty_list(task: &GroundTask) -> TraceList {
    TraceList {
        fluents: task.fluent_names().to_vec(),
        objects: task.object_types(),
        traces: Vec::new(),
    }
}

fn label(task: &GroundTask, action: usize) -> ActionLabel {
    ActionLabel::parse(&task.actions[action].name)
}

fn walk(task: &GroundTask, length: usize, rng: &mut ChaCha8Rng) -> Trace {
    let mut state = task.init.clone();
    let mut steps = Vec::with_capacity(length + 1);
    let mut dead_end = None;
    for i in 0..length {
        let app = task.applicable(&state);
        let Some(&a) = app.choose(rng) else {
            dead_end = Some(i);
            break;
        };
        let next = apply(&state, a, task).expect("chosen action is applicable");
        steps.push(Step {
            state,
            action: Some(label(task, a)),
        });
        state = next;
    }
    steps.push(Step { state, action: None });
    Trace {
        steps,
        task: Some(task.name.clone()),
        goal: None,
        dead_end,
    }
}

/// `count` uniform random walks of `length` actions from the initial state.
/// The goal is ignored. Walks reaching a dead end are truncated and record
/// the step in [`Trace::dead_end`].
pub fn random_walk(task: &GroundTask, length: usize, count: usize, seed: u64) -> TraceList {
    let mut list = empty_list(task);
    list.traces = (0..count)
        .map(|i| walk(task, length, &mut trace_rng(seed, i)))
        .collect();
    list
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthConfig {
    /// Proportionality constant between the heuristic and the mean length.
    pub constant: f64,
    /// Hard cap on sampled lengths.
    pub max_length: usize,
}

impl Default for DepthConfig {
    fn default() -> Self {
        DepthConfig {
            constant: 2.0,
            max_length: 1000,
        }
    }
}

/// Samples a walk length from Binomial(2·h·c, 1/2), whose mean is h·c.
pub fn sample_depth(h: usize, cfg: &DepthConfig, rng: &mut impl Rng) -> usize {
    let n = (2.0 * h as f64 * cfg.constant).round().max(0.0) as u64;
    if n == 0 {
        return 0;
    }
    let len = Binomial::new(n, 0.5).expect("p = 0.5 is valid").sample(rng);
    (len as usize).min(cfg.max_length)
}

pub fn heuristic_depth_walk(task: &GroundTask, count: usize, seed: u64) -> TraceList {
    heuristic_depth_walk_with(task, count, seed, &DepthConfig::default())
}

/// Random walks whose lengths scale with the goal-count heuristic of the
/// initial state.
pub fn heuristic_depth_walk_with(
    task: &GroundTask,
    count: usize,
    seed: u64,
    cfg: &DepthConfig,
) -> TraceList {
    let h = task.goal_count(&task.init, &task.goal);
    let mut list = empty_list(task);
    list.traces = (0..count)
        .map(|i| {
            let mut rng = trace_rng(seed, i);
            let len = sample_depth(h, cfg, &mut rng);
            walk(task, len, &mut rng)
        })
        .collect();
    list
}

/// Greedy best-first search with the goal-count heuristic.
pub fn plan(task: &GroundTask, goal: &[usize], budget: usize) -> Result<Vec<usize>, GenError> {
    plan_from(task, &task.init, goal, budget)
}

pub fn plan_from(
    task: &GroundTask,
    start: &State,
    goal: &[usize],
    budget: usize,
) -> Result<Vec<usize>, GenError> {
    // node = (state, parent node, action from parent)
    let mut nodes: Vec<(State, usize, usize)> = vec![(start.clone(), usize::MAX, usize::MAX)];
    let mut seen: HashSet<State> = HashSet::from([start.clone()]);
    let mut open = BinaryHeap::from([Reverse((task.goal_count(start, goal), 0usize))]);
    let mut expanded = 0;

    while let Some(Reverse((_, id))) = open.pop() {
        if task.satisfies(&nodes[id].0, goal) {
            let mut plan = Vec::new();
            let mut cur = id;
            while nodes[cur].1 != usize::MAX {
                plan.push(nodes[cur].2);
                cur = nodes[cur].1;
            }
            plan.reverse();
            return Ok(plan);
        }
        if expanded >= budget {
            return Err(GenError::BudgetExhausted(budget));
        }
        expanded += 1;
        let state = nodes[id].0.clone();
        for a in task.applicable(&state) {
            let next = apply(&state, a, task).expect("applicable");
            if seen.insert(next.clone()) {
                let h = task.goal_count(&next, goal);
                nodes.push((next, id, a));
                open.push(Reverse((h, nodes.len() - 1)));
            }
        }
    }
    Err(GenError::ProvedUnsolvable)
}

/// Executes a plan from the initial state.
pub fn trace_from_plan(task: &GroundTask, plan: &[usize]) -> Result<Trace, crate::pddl::PddlError> {
    let mut state = task.init.clone();
    let mut steps = Vec::with_capacity(plan.len() + 1);
    for &a in plan {
        let next = apply(&state, a, task)?;
        steps.push(Step {
            state,
            action: Some(label(task, a)),
        });
        state = next;
    }
    steps.push(Step { state, action: None });
    Ok(Trace {
        steps,
        task: Some(task.name.clone()),
        goal: None,
        dead_end: None,
    })
}

/// Plans for `goal` (canonical fluent strings) and records the executed plan.
pub fn trace_from_goal(task: &GroundTask, goal: &[String], budget: usize) -> Result<Trace, GenError> {
    let ids = goal
        .iter()
        .map(|f| task.fluent_id(f).ok_or_else(|| GenError::UnknownFluent(f.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let p = plan(task, &ids, budget)?;
    let mut t = trace_from_plan(task, &p).expect("planner output is executable");
    t.goal = Some(goal.to_vec());
    Ok(t)
}

/// Wraps traces generated on `task` into a list.
pub fn trace_list(task: &GroundTask, traces: Vec<Trace>) -> TraceList {
    let mut list = empty_list(task);
    list.traces = traces;
    list
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalSamplerConfig {
    /// Random-walk length, also the target plan length.
    pub k: usize,
    /// Goal size.
    pub g: usize,
    /// Number of accepted goals wanted.
    pub num_goals: usize,
    pub seed: u64,
    /// Candidates with shorter plans count as easily achieved and are dropped.
    pub min_plan_len: usize,
    /// Sampling weight of fluents whose predicate occurs in the task goal.
    pub goal_predicate_weight: f64,
    pub plan_budget: usize,
    /// Candidate draws before giving up.
    pub max_attempts: usize,
}

impl GoalSamplerConfig {
    pub fn new(k: usize, g: usize, num_goals: usize, seed: u64) -> Self {
        GoalSamplerConfig {
            k,
            g,
            num_goals,
            seed,
            min_plan_len: k.div_ceil(4),
            goal_predicate_weight: 4.0,
            plan_budget: DEFAULT_PLAN_BUDGET,
            max_attempts: 10 * num_goals.max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalCandidate {
    pub goal: Vec<usize>,
    pub plan: Vec<usize>,
    pub quality: f64,
}

impl GoalCandidate {
    pub fn goal_names(&self, task: &GroundTask) -> Vec<String> {
        self.goal
            .iter()
            .map(|&f| task.fluent_names()[f].clone())
            .collect()
    }
}

/// `1 − |len − k| / k`, clamped to `[0, 1]`.
pub fn goal_quality(plan_len: usize, k: usize) -> f64 {
    if k == 0 {
        return if plan_len == 0 { 1.0 } else { 0.0 };
    }
    (1.0 - (plan_len as f64 - k as f64).abs() / k as f64).clamp(0.0, 1.0)
}

/// Goal-oriented sampling: walk `k` steps, draw `g` fluents true at the end
/// (favouring goal predicates), plan for them from the initial state and
/// score the candidate by how close the plan length is to `k`.
pub fn sample_goals(task: &GroundTask, cfg: &GoalSamplerConfig) -> Result<Vec<GoalCandidate>, GenError> {
    if cfg.k == 0 || cfg.g == 0 || cfg.num_goals == 0 {
        return Err(GenError::InvalidConfig("k, g and num_goals must be positive".into()));
    }
    if cfg.g > task.num_fluents() {
        return Err(GenError::InvalidConfig(format!(
            "g = {} exceeds the {} fluents",
            cfg.g,
            task.num_fluents()
        )));
    }
    let goal_preds: HashSet<&str> = task
        .goal
        .iter()
        .map(|&f| task.fluents[f].predicate.as_str())
        .collect();

    let mut out = Vec::new();
    for attempt in 0..cfg.max_attempts {
        if out.len() == cfg.num_goals {
            break;
        }
        let mut rng = trace_rng(cfg.seed, attempt);
        let t = walk(task, cfg.k, &mut rng);
        let last = &t.steps.last().expect("walk has a final step").state;
        let pool: Vec<usize> = last.ones().collect();
        if pool.len() < cfg.g {
            continue;
        }
        let weight = |f: &usize| {
            if goal_preds.contains(task.fluents[*f].predicate.as_str()) {
                cfg.goal_predicate_weight
            } else {
                1.0
            }
        };
        let mut goal: Vec<usize> = pool
            .choose_multiple_weighted(&mut rng, cfg.g, weight)
            .expect("weights are positive")
            .copied()
            .collect();
        goal.sort_unstable();
        if out.iter().any(|c: &GoalCandidate| c.goal == goal) {
            continue;
        }
        let Ok(p) = plan(task, &goal, cfg.plan_budget) else {
            continue;
        };
        if p.len() < cfg.min_plan_len {
            continue;
        }
        out.push(GoalCandidate {
            quality: goal_quality(p.len(), cfg.k),
            goal,
            plan: p,
        });
    }
    if out.is_empty() {
        Err(GenError::NoCandidates)
    } else {
        Ok(out)
    }
}

/// Checks the apply-chain invariant of every trace against `task`.
pub fn check_replay(task: &GroundTask, traces: &TraceList) -> Result<(), String> {
    for (ti, t) in traces.traces.iter().enumerate() {
        for (si, w) in t.steps.windows(2).enumerate() {
            let Some(a) = &w[0].action else {
                return Err(format!("trace {ti} step {si}: missing action"));
            };
            let id = task
                .action_id(&a.to_string())
                .ok_or_else(|| format!("trace {ti} step {si}: unknown action `{a}`"))?;
            let next = apply(&w[0].state, id, task).map_err(|e| format!("trace {ti} step {si}: {e}"))?;
            if next != w[1].state {
                return Err(format!("trace {ti} step {si}: successor mismatch"));
            }
        }
    }
    Ok(())
}
