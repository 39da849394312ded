//! Decision-DNNF compilation, conditioning and model counting.
//!
//! The compiler records the trace of an exhaustive DPLL search: unit
//! propagation yields literal conjuncts, disconnected residual components
//! become decomposable AND nodes, and every branch on a variable `x` becomes an
//! OR node whose children are conjunctions containing `x` and `¬x`. Residual
//! components are cached by their clause set.
//!
//! Nodes are stored children-first, so node indices are a topological order.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::cnf::{Cnf, Lit, Var};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DdnnfNode {
    True,
    False,
    Lit(Lit),
    /// Conjunction over pairwise variable-disjoint children.
    And(Vec<NodeId>),
    /// Decision on `var`: `hi` contains the conjunct `var`, `lo` contains `¬var`.
    Or { var: Var, hi: NodeId, lo: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("formula has {num_vars} variables, compilation cap is {cap}")]
    CapExceeded { num_vars: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("node {node} references later node {child}")]
    NotTopological { node: NodeId, child: NodeId },
    #[error("AND node {node} has children sharing variables")]
    NotDecomposable { node: NodeId },
    #[error("OR node {node} children are not separated by its decision variable")]
    NotDeterministic { node: NodeId },
}

/// Default variable cap for [`compile_ddnnf`].
pub const DEFAULT_VAR_CAP: usize = 64;

#[derive(Debug, Clone)]
pub struct Ddnnf {
    num_vars: usize,
    nodes: Vec<DdnnfNode>,
    vars: Vec<FixedBitSet>,
    root: NodeId,
}

/// Compiles the hard clauses of `cnf` with the default variable cap.
pub fn compile_ddnnf(cnf: &Cnf) -> Result<Ddnnf, CompileError> {
    compile_ddnnf_capped(cnf, DEFAULT_VAR_CAP)
}

pub fn compile_ddnnf_capped(cnf: &Cnf, cap: usize) -> Result<Ddnnf, CompileError> {
    if cnf.num_vars() > cap {
        return Err(CompileError::CapExceeded {
            num_vars: cnf.num_vars(),
            cap,
        });
    }
    let mut b = Builder::new(cnf.num_vars());
    let clauses: Vec<Vec<Lit>> = cnf.hard_clauses().map(|c| c.lits.clone()).collect();
    let root = b.compile_top(clauses);
    Ok(b.finish(root))
}

struct Builder {
    num_vars: usize,
    nodes: Vec<DdnnfNode>,
    vars: Vec<FixedBitSet>,
    unique: HashMap<DdnnfNode, NodeId>,
    cache: HashMap<Vec<Vec<Lit>>, NodeId>,
}

const TRUE: NodeId = 0;
const FALSE: NodeId = 1;

impl Builder {
    fn new(num_vars: usize) -> Self {
        let mut b = Builder {
            num_vars,
            nodes: Vec::new(),
            vars: Vec::new(),
            unique: HashMap::new(),
            cache: HashMap::new(),
        };
        b.intern(DdnnfNode::True);
        b.intern(DdnnfNode::False);
        b
    }

    fn intern(&mut self, node: DdnnfNode) -> NodeId {
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let mut vs = FixedBitSet::with_capacity(self.num_vars);
        match &node {
            DdnnfNode::True | DdnnfNode::False => {}
            DdnnfNode::Lit(l) => vs.insert(l.var().index()),
            DdnnfNode::And(cs) => {
                for &c in cs {
                    vs.union_with(&self.vars[c]);
                }
            }
            DdnnfNode::Or { hi, lo, .. } => {
                vs.union_with(&self.vars[*hi]);
                vs.union_with(&self.vars[*lo]);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.vars.push(vs);
        self.unique.insert(node, id);
        id
    }

    fn lit(&mut self, l: Lit) -> NodeId {
        self.intern(DdnnfNode::Lit(l))
    }

    /// Conjunction with flattening and constant folding.
    fn and(&mut self, children: Vec<NodeId>) -> NodeId {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match &self.nodes[c] {
                DdnnfNode::False => return FALSE,
                DdnnfNode::True => {}
                DdnnfNode::And(cs) => flat.extend(cs.iter().copied()),
                _ => flat.push(c),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        match flat.len() {
            0 => TRUE,
            1 => flat[0],
            _ => self.intern(DdnnfNode::And(flat)),
        }
    }

    fn or(&mut self, var: Var, hi: NodeId, lo: NodeId) -> NodeId {
        if hi == FALSE {
            return lo;
        }
        if lo == FALSE {
            return hi;
        }
        self.intern(DdnnfNode::Or { var, hi, lo })
    }

    fn compile_top(&mut self, clauses: Vec<Vec<Lit>>) -> NodeId {
        match propagate(clauses, None) {
            None => FALSE,
            Some((residual, implied)) => self.compile_residual(residual, implied),
        }
    }

    fn compile_residual(&mut self, residual: Vec<Vec<Lit>>, implied: Vec<Lit>) -> NodeId {
        let mut children: Vec<NodeId> = implied.into_iter().map(|l| self.lit(l)).collect();
        for comp in components(residual) {
            let c = self.compile_component(comp);
            if c == FALSE {
                return FALSE;
            }
            children.push(c);
        }
        self.and(children)
    }

    fn compile_component(&mut self, clauses: Vec<Vec<Lit>>) -> NodeId {
        if clauses.is_empty() {
            return TRUE;
        }
        if let Some(&id) = self.cache.get(&clauses) {
            return id;
        }
        let var = branch_var(&clauses);
        let branch = |b: &mut Builder, positive: bool| -> NodeId {
            match propagate(clauses.clone(), Some(var.lit(positive))) {
                None => FALSE,
                Some((residual, implied)) => b.compile_residual(residual, implied),
            }
        };
        let hi = branch(self, true);
        let lo = branch(self, false);
        let id = self.or(var, hi, lo);
        self.cache.insert(clauses, id);
        id
    }

    fn finish(self, root: NodeId) -> Ddnnf {
        Ddnnf {
            num_vars: self.num_vars,
            nodes: self.nodes,
            vars: self.vars,
            root,
        }
    }
}

/// Most frequent variable, ties to the smallest index.
fn branch_var(clauses: &[Vec<Lit>]) -> Var {
    let mut counts: HashMap<Var, usize> = HashMap::new();
    for c in clauses {
        for l in c {
            *counts.entry(l.var()).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(v, _)| v)
        .expect("non-empty component")
}

/// Assigns `decision` (if any) and unit-propagates. Returns the canonical
/// residual clause set and every literal fixed along the way, or `None` on
/// conflict.
fn propagate(mut clauses: Vec<Vec<Lit>>, decision: Option<Lit>) -> Option<(Vec<Vec<Lit>>, Vec<Lit>)> {
    let mut implied: Vec<Lit> = Vec::new();
    let mut pending: Vec<Lit> = decision.into_iter().collect();
    loop {
        if pending.is_empty() {
            if let Some(unit) = clauses.iter().find(|c| c.len() == 1) {
                pending.push(unit[0]);
            } else {
                break;
            }
        }
        while let Some(l) = pending.pop() {
            if implied.contains(&l) {
                continue;
            }
            if implied.contains(&!l) {
                return None;
            }
            implied.push(l);
            let mut next = Vec::with_capacity(clauses.len());
            for mut c in clauses.into_iter() {
                if c.contains(&l) {
                    continue;
                }
                c.retain(|&x| x != !l);
                if c.is_empty() {
                    return None;
                }
                next.push(c);
            }
            clauses = next;
        }
    }
    for c in clauses.iter_mut() {
        c.sort_unstable();
        c.dedup();
    }
    clauses.retain(|c| !c.windows(2).any(|w| w[1] == !w[0]));
    clauses.sort();
    clauses.dedup();
    implied.sort_unstable();
    Some((clauses, implied))
}

/// Splits clauses into variable-connected components, each canonically sorted.
fn components(clauses: Vec<Vec<Lit>>) -> Vec<Vec<Vec<Lit>>> {
    if clauses.is_empty() {
        return Vec::new();
    }
    let max_var = clauses
        .iter()
        .flatten()
        .map(|l| l.var().index())
        .max()
        .unwrap_or(0);
    let mut parent: Vec<usize> = (0..=max_var).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in &clauses {
        let a = find(&mut parent, c[0].var().index());
        for l in &c[1..] {
            let b = find(&mut parent, l.var().index());
            if a != b {
                parent[b] = a;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Vec<Lit>>)> = Vec::new();
    for c in clauses {
        let r = find(&mut parent, c[0].var().index());
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, v)) => v.push(c),
            None => groups.push((r, vec![c])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

impl Ddnnf {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[DdnnfNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &DdnnfNode {
        &self.nodes[id]
    }

    /// Variables mentioned below `id`.
    pub fn var_set(&self, id: NodeId) -> &FixedBitSet {
        &self.vars[id]
    }

    pub fn is_false(&self) -> bool {
        self.nodes[self.root] == DdnnfNode::False
    }

    /// Number of nodes reachable from the root.
    pub fn size(&self) -> usize {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        let mut n = 0;
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                continue;
            }
            n += 1;
            match &self.nodes[id] {
                DdnnfNode::And(cs) => stack.extend(cs),
                DdnnfNode::Or { hi, lo, .. } => stack.extend([*hi, *lo]),
                _ => {}
            }
        }
        n
    }

    /// Evaluates the circuit under a total assignment.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        let mut val = vec![false; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            val[i] = match n {
                DdnnfNode::True => true,
                DdnnfNode::False => false,
                DdnnfNode::Lit(l) => l.eval(assignment),
                DdnnfNode::And(cs) => cs.iter().all(|&c| val[c]),
                DdnnfNode::Or { hi, lo, .. } => val[*hi] || val[*lo],
            };
        }
        val[self.root]
    }

    /// Model count over all `num_vars` variables.
    pub fn count_models(&self) -> u128 {
        let mut counts = vec![0u128; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            counts[i] = match n {
                DdnnfNode::True | DdnnfNode::Lit(_) => 1,
                DdnnfNode::False => 0,
                DdnnfNode::And(cs) => cs.iter().map(|&c| counts[c]).product(),
                DdnnfNode::Or { hi, lo, .. } => {
                    let here = self.vars[i].count_ones(..);
                    let scale = |c: NodeId| counts[c] << (here - self.vars[c].count_ones(..));
                    scale(*hi) + scale(*lo)
                }
            };
        }
        let free = self.num_vars - self.vars[self.root].count_ones(..);
        counts[self.root] << free
    }

    /// Returns `self ∧ lit` as a new d-DNNF.
    pub fn condition(&self, lit: Lit) -> Ddnnf {
        assert!(lit.var().index() < self.num_vars, "literal out of range");
        let mut b = Builder::new(self.num_vars);
        let mut map: Vec<NodeId> = vec![usize::MAX; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            map[i] = match n {
                DdnnfNode::True => TRUE,
                DdnnfNode::False => FALSE,
                DdnnfNode::Lit(l) if l.var() == lit.var() => {
                    if *l == lit {
                        TRUE
                    } else {
                        FALSE
                    }
                }
                DdnnfNode::Lit(l) => b.lit(*l),
                DdnnfNode::And(cs) => {
                    let kids = cs.iter().map(|&c| map[c]).collect();
                    b.and(kids)
                }
                DdnnfNode::Or { var, hi, lo } if *var == lit.var() => {
                    if lit.is_positive() {
                        map[*hi]
                    } else {
                        map[*lo]
                    }
                }
                DdnnfNode::Or { var, hi, lo } => b.or(*var, map[*hi], map[*lo]),
            };
        }
        let body = map[self.root];
        let l = b.lit(lit);
        let root = b.and(vec![l, body]);
        let mut out = b.finish(root);
        out.gc();
        out
    }

    /// Drops nodes unreachable from the root, keeping topological order.
    fn gc(&mut self) {
        let mut live = vec![false; self.nodes.len()];
        live[self.root] = true;
        for i in (0..self.nodes.len()).rev() {
            if !live[i] {
                continue;
            }
            match &self.nodes[i] {
                DdnnfNode::And(cs) => cs.iter().for_each(|&c| live[c] = true),
                DdnnfNode::Or { hi, lo, .. } => {
                    live[*hi] = true;
                    live[*lo] = true;
                }
                _ => {}
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        let mut vars = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            remap[i] = nodes.len();
            nodes.push(match n {
                DdnnfNode::And(cs) => DdnnfNode::And(cs.iter().map(|&c| remap[c]).collect()),
                DdnnfNode::Or { var, hi, lo } => DdnnfNode::Or {
                    var: *var,
                    hi: remap[*hi],
                    lo: remap[*lo],
                },
                other => other.clone(),
            });
            vars.push(self.vars[i].clone());
        }
        self.root = remap[self.root];
        self.nodes = nodes;
        self.vars = vars;
    }

    /// Checks topological order, decomposability and (structural) determinism.
    pub fn validate(&self) -> Result<(), StructureError> {
        let has_conjunct = |id: NodeId, l: Lit| -> bool {
            match &self.nodes[id] {
                DdnnfNode::Lit(x) => *x == l,
                DdnnfNode::And(cs) => cs.iter().any(|&c| self.nodes[c] == DdnnfNode::Lit(l)),
                _ => false,
            }
        };
        for (i, n) in self.nodes.iter().enumerate() {
            match n {
                DdnnfNode::And(cs) => {
                    if let Some(&c) = cs.iter().find(|&&c| c >= i) {
                        return Err(StructureError::NotTopological { node: i, child: c });
                    }
                    let mut acc = FixedBitSet::with_capacity(self.num_vars);
                    for &c in cs {
                        if !acc.is_disjoint(&self.vars[c]) {
                            return Err(StructureError::NotDecomposable { node: i });
                        }
                        acc.union_with(&self.vars[c]);
                    }
                }
                DdnnfNode::Or { var, hi, lo } => {
                    for &c in [hi, lo] {
                        if c >= i {
                            return Err(StructureError::NotTopological { node: i, child: c });
                        }
                    }
                    if !has_conjunct(*hi, var.lit(true)) || !has_conjunct(*lo, var.lit(false)) {
                        return Err(StructureError::NotDeterministic { node: i });
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}
