use std::fmt;
use std::ops::Not;

use thiserror::Error;

/// A propositional variable, 0-based internally. DIMACS variable `v` is `Var(v - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn lit(self, positive: bool) -> Lit {
        Lit::new(self, positive)
    }
}

/// A literal encoded as `2 * var + sign`, where sign 1 means negated.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 * 2 + u32::from(!positive))
    }

    /// Builds a literal from a non-zero DIMACS integer.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "0 is not a DIMACS literal");
        Lit::new(Var(value.unsigned_abs() - 1), value > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = (self.var().0 + 1) as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense index usable for per-literal tables.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// Truth value of the literal under a total assignment.
    #[inline]
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var().index()] == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("empty clause added without explicit request")]
    EmptyClause,
    #[error("literal {lit} out of range for {num_vars} variables")]
    LiteralOutOfRange { lit: i32, num_vars: usize },
    #[error("soft clause weight must be positive")]
    ZeroWeight,
}

/// A clause with an optional weight; `None` marks a hard clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub lits: Vec<Lit>,
    pub weight: Option<u64>,
}

impl Clause {
    pub fn is_hard(&self) -> bool {
        self.weight.is_none()
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.lits.iter().any(|l| l.eval(assignment))
    }
}

/// A (weighted partial) CNF formula.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(num_vars: usize) -> Self {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var(self.num_vars as u32 - 1)
    }

    /// Grows the variable count so that `num_vars >= n`.
    pub fn ensure_vars(&mut self, n: usize) {
        self.num_vars = self.num_vars.max(n);
    }

    fn check(&self, lits: &[Lit]) -> Result<(), CnfError> {
        for l in lits {
            if l.var().index() >= self.num_vars {
                return Err(CnfError::LiteralOutOfRange {
                    lit: l.to_dimacs(),
                    num_vars: self.num_vars,
                });
            }
        }
        Ok(())
    }

    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) -> Result<(), CnfError> {
        let lits: Vec<Lit> = lits.into_iter().collect();
        if lits.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        self.check(&lits)?;
        self.clauses.push(Clause { lits, weight: None });
        Ok(())
    }

    /// Adds a clause given as DIMACS integers.
    pub fn add_dimacs(&mut self, lits: &[i32]) -> Result<(), CnfError> {
        if lits.contains(&0) {
            return Err(CnfError::LiteralOutOfRange {
                lit: 0,
                num_vars: self.num_vars,
            });
        }
        self.add_clause(lits.iter().map(|&d| Lit::from_dimacs(d)))
    }

    pub fn add_soft(
        &mut self,
        lits: impl IntoIterator<Item = Lit>,
        weight: u64,
    ) -> Result<(), CnfError> {
        if weight == 0 {
            return Err(CnfError::ZeroWeight);
        }
        let lits: Vec<Lit> = lits.into_iter().collect();
        if lits.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        self.check(&lits)?;
        self.clauses.push(Clause {
            lits,
            weight: Some(weight),
        });
        Ok(())
    }

    /// Adds the empty (always false) clause. Hard when `weight` is `None`.
    pub fn add_empty_clause(&mut self, weight: Option<u64>) {
        self.clauses.push(Clause {
            lits: Vec::new(),
            weight,
        });
    }

    /// Pushes a clause as-is after range checking. Used by readers that must
    /// preserve empty clauses.
    pub(crate) fn push_raw(&mut self, clause: Clause) -> Result<(), CnfError> {
        self.check(&clause.lits)?;
        self.clauses.push(clause);
        Ok(())
    }

    pub fn hard_clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| c.is_hard())
    }

    pub fn soft_clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.is_hard())
    }

    pub fn has_soft(&self) -> bool {
        self.clauses.iter().any(|c| !c.is_hard())
    }

    /// True when every hard clause is satisfied.
    pub fn satisfies_hard(&self, assignment: &[bool]) -> bool {
        self.hard_clauses().all(|c| c.is_satisfied(assignment))
    }

    /// Total weight of falsified soft clauses.
    pub fn cost(&self, assignment: &[bool]) -> u64 {
        self.soft_clauses()
            .filter(|c| !c.is_satisfied(assignment))
            .map(|c| c.weight.unwrap_or(0))
            .sum()
    }

    /// Hard-clause view of the formula, dropping every soft clause.
    pub fn hard_only(&self) -> Cnf {
        Cnf {
            num_vars: self.num_vars,
            clauses: self.hard_clauses().cloned().collect(),
        }
    }
}
