//! Weighted partial MaxSAT by linear SAT-UNSAT search.
//!
//! Each soft clause gets a relaxation literal that may be set only when the
//! clause is falsified. After the first model, a generalized totalizer over
//! the relaxation literals is built with the model's cost as upper bound; every
//! improved model then forbids the totalizer outputs at or above its cost with
//! unit clauses, until the solver proves no cheaper model exists.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cnf::{Cnf, Lit};
use crate::sat::{SolveResult, Solver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaxSatError {
    #[error("hard clauses are unsatisfiable")]
    HardUnsat,
    #[error("conflict budget exhausted before optimality was proved")]
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSatSolution {
    /// Assignment over the formula's variables (auxiliary variables stripped).
    pub model: Vec<bool>,
    /// Total weight of falsified soft clauses.
    pub cost: u64,
}

/// Solves `cnf` to optimality with default settings.
pub fn solve_maxsat(cnf: &Cnf) -> Result<MaxSatSolution, MaxSatError> {
    MaxSatSolver::default().solve(cnf)
}

#[derive(Debug, Clone, Default)]
pub struct MaxSatSolver {
    /// Total conflict budget across all SAT calls; `None` means unlimited.
    pub conflict_budget: Option<u64>,
}

/// One totalizer node: sorted (sum, output literal) pairs.
type Outputs = Vec<(u64, Lit)>;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl MaxSatSolver {
    pub fn solve(&self, cnf: &Cnf) -> Result<MaxSatSolution, MaxSatError> {
        let n = cnf.num_vars();
        let mut solver = Solver::new(n);
        for c in cnf.hard_clauses() {
            if !solver.add_clause(&c.lits) {
                return Err(MaxSatError::HardUnsat);
            }
        }

        // relaxation literal -> accumulated weight; empty softs are constant cost
        let mut base_cost = 0u64;
        let mut relax: BTreeMap<Lit, u64> = BTreeMap::new();
        for c in cnf.soft_clauses() {
            let w = c.weight.unwrap_or(0);
            match c.lits.len() {
                0 => base_cost += w,
                1 => *relax.entry(!c.lits[0]).or_insert(0) += w,
                _ => {
                    let r = solver.new_var();
                    solver.set_phase(r, false);
                    let mut lits = c.lits.clone();
                    lits.push(r.lit(true));
                    solver.add_clause(&lits);
                    relax.insert(r.lit(true), w);
                }
            }
        }
        for &l in relax.keys() {
            if l.var().index() < n {
                solver.set_phase(l.var(), !l.is_positive());
            }
        }

        let mut budget = self.conflict_budget;
        let mut call = |solver: &mut Solver| -> Result<Option<Vec<bool>>, MaxSatError> {
            let before = solver.conflicts();
            let r = solver.solve_limited(budget);
            if let Some(b) = budget.as_mut() {
                *b = b.saturating_sub(solver.conflicts() - before);
            }
            match r {
                SolveResult::Sat(m) => Ok(Some(m)),
                SolveResult::Unsat => Ok(None),
                SolveResult::Unknown => Err(MaxSatError::BudgetExceeded),
            }
        };

        let first = call(&mut solver)?.ok_or(MaxSatError::HardUnsat)?;
        let mut best_model: Vec<bool> = first[..n].to_vec();
        let mut best = cnf.cost(&best_model);
        if best == 0 || relax.is_empty() {
            return Ok(MaxSatSolution {
                model: best_model,
                cost: best,
            });
        }

        let unit = relax.values().copied().fold(0, gcd).max(1);
        let inputs: Vec<(u64, Lit)> = relax.iter().map(|(&l, &w)| (w / unit, l)).collect();
        // sums reaching `best` are forbidden outright; outputs exist below it
        let bound = (best - base_cost).div_ceil(unit);
        let root = build_totalizer(&mut solver, &inputs, bound);

        loop {
            match call(&mut solver)? {
                None => break,
                Some(m) => {
                    let model = m[..n].to_vec();
                    let cost = cnf.cost(&model);
                    debug_assert!(cost < best);
                    best = cost;
                    best_model = model;
                    if best == base_cost {
                        break;
                    }
                    let limit = (best - base_cost).div_ceil(unit);
                    for &(_, o) in root.iter().filter(|(s, _)| *s >= limit) {
                        solver.add_clause(&[!o]);
                    }
                }
            }
        }
        Ok(MaxSatSolution {
            model: best_model,
            cost: best,
        })
    }
}

/// Builds a generalized totalizer over weighted inputs. Outputs exist only for
/// sums strictly below `bound`; combinations reaching `bound` are forbidden.
fn build_totalizer(solver: &mut Solver, inputs: &[(u64, Lit)], bound: u64) -> Outputs {
    if inputs.len() == 1 {
        let (w, l) = inputs[0];
        if w >= bound {
            solver.add_clause(&[!l]);
            return Vec::new();
        }
        return vec![(w, l)];
    }
    let mid = inputs.len() / 2;
    let left = build_totalizer(solver, &inputs[..mid], bound);
    let right = build_totalizer(solver, &inputs[mid..], bound);

    let mut sums: BTreeMap<u64, Lit> = BTreeMap::new();
    let mut out_lit = |solver: &mut Solver, s: u64| -> Lit {
        *sums.entry(s).or_insert_with(|| {
            let v = solver.new_var();
            solver.set_phase(v, false);
            v.lit(true)
        })
    };
    // zero entry stands for "no input of this side is set"
    let with_zero = |side: &Outputs| -> Vec<(u64, Option<Lit>)> {
        std::iter::once((0, None))
            .chain(side.iter().map(|&(s, l)| (s, Some(l))))
            .collect()
    };
    for (a, la) in with_zero(&left) {
        for (b, lb) in with_zero(&right) {
            if la.is_none() && lb.is_none() {
                continue;
            }
            let s = a + b;
            let mut clause: Vec<Lit> = la.into_iter().chain(lb).map(|l| !l).collect();
            if s < bound {
                clause.push(out_lit(solver, s));
            }
            solver.add_clause(&clause);
        }
    }
    sums.into_iter().collect()
}
