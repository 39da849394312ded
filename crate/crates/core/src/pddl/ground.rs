use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;

use super::{Domain, Fluent, PddlError, PlanningObject, Problem, TypedParam};

/// Default cap on the number of ground actions.
pub const DEFAULT_GROUNDING_CAP: usize = 1_000_000;

/// Truth assignment over a task's fluent universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State(pub FixedBitSet);

impl State {
    pub fn empty(num_fluents: usize) -> Self {
        State(FixedBitSet::with_capacity(num_fluents))
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = State::empty(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.0.set(i, b);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn holds(&self, fluent: usize) -> bool {
        self.0.contains(fluent)
    }

    pub fn set(&mut self, fluent: usize, value: bool) {
        self.0.set(fluent, value);
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.holds(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    /// Canonical `name obj1 obj2 ...`
    pub name: String,
    pub schema: String,
    pub args: Vec<PlanningObject>,
    pub pre: FixedBitSet,
    pub add: FixedBitSet,
    pub del: FixedBitSet,
}

impl GroundAction {
    pub fn is_applicable(&self, state: &State) -> bool {
        self.pre.is_subset(&state.0)
    }
}

/// Grounded STRIPS task with dense fluent and action ids, both ordered
/// lexicographically by canonical name.
#[derive(Debug, Clone)]
pub struct GroundTask {
    pub name: String,
    pub objects: Vec<PlanningObject>,
    pub fluents: Vec<Fluent>,
    pub actions: Vec<GroundAction>,
    pub init: State,
    pub goal: Vec<usize>,
    fluent_names: Vec<String>,
    fluent_index: HashMap<String, usize>,
    action_index: HashMap<String, usize>,
}

impl GroundTask {
    pub fn num_fluents(&self) -> usize {
        self.fluents.len()
    }

    pub fn fluent_names(&self) -> &[String] {
        &self.fluent_names
    }

    pub fn fluent_id(&self, canonical: &str) -> Option<usize> {
        self.fluent_index.get(canonical).copied()
    }

    pub fn action_id(&self, canonical: &str) -> Option<usize> {
        self.action_index.get(canonical).copied()
    }

    pub fn applicable(&self, state: &State) -> Vec<usize> {
        (0..self.actions.len())
            .filter(|&a| self.actions[a].is_applicable(state))
            .collect()
    }

    /// Number of goal fluents not yet true.
    pub fn goal_count(&self, state: &State, goal: &[usize]) -> usize {
        goal.iter().filter(|&&g| !state.holds(g)).count()
    }

    pub fn satisfies(&self, state: &State, goal: &[usize]) -> bool {
        goal.iter().all(|&g| state.holds(g))
    }

    /// Object name → type name.
    pub fn object_types(&self) -> BTreeMap<String, String> {
        self.objects
            .iter()
            .map(|o| (o.name.clone(), o.obj_type.clone()))
            .collect()
    }
}

/// Successor state under delete-then-add semantics.
pub fn apply(state: &State, action: usize, task: &GroundTask) -> Result<State, PddlError> {
    let a = task
        .actions
        .get(action)
        .ok_or_else(|| PddlError::UnknownAction(action.to_string()))?;
    if !a.is_applicable(state) {
        let missing = a
            .pre
            .ones()
            .filter(|&f| !state.holds(f))
            .map(|f| task.fluent_names[f].clone())
            .collect();
        return Err(PddlError::PreconditionViolation {
            action: a.name.clone(),
            missing,
        });
    }
    let mut next = state.0.clone();
    next.difference_with(&a.del);
    next.union_with(&a.add);
    Ok(State(next))
}

pub fn ground(domain: &Domain, problem: &Problem) -> Result<GroundTask, PddlError> {
    ground_with_cap(domain, problem, DEFAULT_GROUNDING_CAP)
}

fn candidates<'a>(domain: &Domain, problem: &'a Problem, params: &[TypedParam]) -> Vec<Vec<&'a PlanningObject>> {
    params
        .iter()
        .map(|p| {
            let mut objs: Vec<&PlanningObject> = problem
                .objects
                .iter()
                .filter(|o| domain.is_subtype(&o.obj_type, &p.ty))
                .collect();
            objs.sort_by(|a, b| a.name.cmp(&b.name));
            objs
        })
        .collect()
}

/// Calls `f` with every tuple of the cartesian product, in odometer order.
fn for_each_tuple<'a>(cands: &[Vec<&'a PlanningObject>], mut f: impl FnMut(&[&'a PlanningObject])) {
    if cands.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; cands.len()];
    let mut tuple: Vec<&PlanningObject> = cands.iter().map(|c| c[0]).collect();
    loop {
        f(&tuple);
        let mut k = cands.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                tuple[k] = cands[k][idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = cands[k][0];
        }
    }
}

pub fn ground_with_cap(domain: &Domain, problem: &Problem, cap: usize) -> Result<GroundTask, PddlError> {
    let mut total: u128 = 0;
    for a in &domain.actions {
        let n: u128 = candidates(domain, problem, &a.params)
            .iter()
            .map(|c| c.len() as u128)
            .product();
        total += n;
    }
    if total > cap as u128 {
        return Err(PddlError::GroundingExplosion { count: total, cap });
    }

    let mut universe: BTreeMap<String, Fluent> = BTreeMap::new();
    for p in &domain.predicates {
        for_each_tuple(&candidates(domain, problem, &p.params), |t| {
            let f = Fluent::new(p.name.clone(), t.iter().map(|&o| o.clone()).collect());
            universe.insert(f.to_string(), f);
        });
    }
    for f in problem.init.iter().chain(&problem.goal) {
        universe.insert(f.to_string(), f.clone());
    }

    struct Raw {
        name: String,
        schema: String,
        args: Vec<PlanningObject>,
        pre: Vec<String>,
        add: Vec<String>,
        del: Vec<String>,
    }
    let mut raw: Vec<Raw> = Vec::new();
    let by_name: HashMap<&str, &PlanningObject> =
        problem.objects.iter().map(|o| (o.name.as_str(), o)).collect();
    for a in &domain.actions {
        for_each_tuple(&candidates(domain, problem, &a.params), |t| {
            let args: Vec<String> = t.iter().map(|o| o.name.clone()).collect();
            let eff = a.instantiate(&args).expect("parameters bound by parser");
            for s in eff.precond.iter().chain(&eff.add).chain(&eff.delete) {
                if !universe.contains_key(s) {
                    let (pred, names) = super::split_canonical(s);
                    let objs = names
                        .iter()
                        .map(|n| by_name.get(n).map(|&o| o.clone()).unwrap_or_else(|| PlanningObject::new(super::ROOT_TYPE, *n)))
                        .collect();
                    universe.insert(s.clone(), Fluent::new(pred, objs));
                }
            }
            let mut name = a.name.clone();
            for n in &args {
                name.push(' ');
                name.push_str(n);
            }
            raw.push(Raw {
                name,
                schema: a.name.clone(),
                args: t.iter().map(|&o| o.clone()).collect(),
                pre: eff.precond.into_iter().collect(),
                add: eff.add.into_iter().collect(),
                del: eff.delete.into_iter().collect(),
            });
        });
    }

    let fluent_names: Vec<String> = universe.keys().cloned().collect();
    let fluents: Vec<Fluent> = universe.into_values().collect();
    let fluent_index: HashMap<String, usize> = fluent_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let n = fluents.len();
    let bits = |names: &[String]| -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(n);
        for s in names {
            b.insert(fluent_index[s]);
        }
        b
    };

    raw.sort_by(|a, b| a.name.cmp(&b.name));
    let actions: Vec<GroundAction> = raw
        .iter()
        .map(|r| GroundAction {
            name: r.name.clone(),
            schema: r.schema.clone(),
            args: r.args.clone(),
            pre: bits(&r.pre),
            add: bits(&r.add),
            del: bits(&r.del),
        })
        .collect();
    let action_index = actions
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.clone(), i))
        .collect();

    let mut init = State::empty(n);
    for f in &problem.init {
        init.set(fluent_index[&f.to_string()], true);
    }
    let mut goal: Vec<usize> = problem
        .goal
        .iter()
        .map(|f| fluent_index[&f.to_string()])
        .collect();
    goal.sort_unstable();
    goal.dedup();

    Ok(GroundTask {
        name: problem.name.clone(),
        objects: problem.objects.clone(),
        fluents,
        actions,
        init,
        goal,
        fluent_names,
        fluent_index,
        action_index,
    })
}
