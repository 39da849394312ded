//! Self-contained propositional toolbox.
//!
//! - [`cnf`]: literals, clauses and (weighted) CNF formulas
//! - [`sat`]: a CDCL SAT solver (two watched literals, VSIDS, Luby restarts)
//! - [`maxsat`]: linear-search weighted partial MaxSAT over a generalized totalizer
//! - [`dimacs`]: DIMACS CNF / WCNF reading and writing
//! - [`ddnnf`]: Decision-DNNF compilation, conditioning and model counting

pub mod cnf;
pub mod ddnnf;
pub mod dimacs;
pub mod maxsat;
pub mod sat;

pub use cnf::{Clause, Cnf, CnfError, Lit, Var};
pub use ddnnf::{compile_ddnnf, CompileError, Ddnnf, DdnnfNode, NodeId};
pub use dimacs::{parse_dimacs, write_dimacs, write_wcnf, DimacsError};
pub use maxsat::{solve_maxsat, MaxSatError, MaxSatSolution, MaxSatSolver};
pub use sat::{solve_sat, SolveResult, Solver};
