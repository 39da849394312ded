//! DIMACS CNF and (old-style) WCNF reading and writing.
//!
//! Written output is canonical: a single `p` line, one clause per line, single
//! spaces, `0` terminators, no comments. WCNF hard clauses carry the `top`
//! weight, which is one more than the sum of all soft weights.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, Cnf, Lit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn err(line: usize, message: impl Into<String>) -> DimacsError {
    DimacsError::Parse {
        line,
        message: message.into(),
    }
}

/// Writes a hard-only formula as DIMACS CNF. Soft clauses are written as hard.
pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses().len());
    for c in cnf.clauses() {
        write_lits(&mut out, &c.lits);
    }
    out
}

/// Writes a weighted formula as WCNF with a `top` weight for hard clauses.
pub fn write_wcnf(cnf: &Cnf) -> String {
    let top: u64 = cnf.soft_clauses().map(|c| c.weight.unwrap_or(0)).sum::<u64>() + 1;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p wcnf {} {} {}",
        cnf.num_vars(),
        cnf.clauses().len(),
        top
    );
    for c in cnf.clauses() {
        let _ = write!(out, "{} ", c.weight.unwrap_or(top));
        write_lits(&mut out, &c.lits);
    }
    out
}

fn write_lits(out: &mut String, lits: &[Lit]) {
    for l in lits {
        let _ = write!(out, "{} ", l.to_dimacs());
    }
    out.push_str("0\n");
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Format {
    Cnf,
    Wcnf { top: u64 },
}

/// Parses DIMACS CNF or WCNF, selected by the problem line.
pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(Format, usize, usize)> = None;
    let mut cnf = Cnf::new(0);
    let mut current: Vec<Lit> = Vec::new();
    let mut weight: Option<u64> = None;
    let mut expecting_weight = true;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<u64, DimacsError> {
                parts
                    .get(i)
                    .ok_or_else(|| err(line_no, "truncated problem line"))?
                    .parse::<u64>()
                    .map_err(|_| err(line_no, format!("bad number `{}`", parts[i])))
            };
            let fmt = match parts.get(1) {
                Some(&"cnf") if parts.len() == 4 => Format::Cnf,
                Some(&"wcnf") if parts.len() == 5 => Format::Wcnf { top: num(4)? },
                _ => return Err(err(line_no, format!("unsupported problem line `{line}`"))),
            };
            let nv = num(2)? as usize;
            let nc = num(3)? as usize;
            cnf = Cnf::new(nv);
            header = Some((fmt, nv, nc));
            continue;
        }
        let Some((fmt, nv, _)) = header else {
            return Err(err(line_no, "clause before problem line"));
        };
        for tok in line.split_whitespace() {
            last_line = line_no;
            if let Format::Wcnf { top } = fmt {
                if expecting_weight {
                    let w: u64 = tok
                        .parse()
                        .map_err(|_| err(line_no, format!("bad weight `{tok}`")))?;
                    if w == 0 {
                        return Err(err(line_no, "zero weight"));
                    }
                    weight = if w >= top { None } else { Some(w) };
                    expecting_weight = false;
                    continue;
                }
            }
            let v: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("bad literal `{tok}`")))?;
            if v == 0 {
                cnf.push_raw(Clause {
                    lits: std::mem::take(&mut current),
                    weight,
                })
                .map_err(|e| err(line_no, e.to_string()))?;
                weight = None;
                expecting_weight = true;
            } else {
                if v.unsigned_abs() as usize > nv {
                    return Err(err(
                        line_no,
                        format!("literal {v} exceeds declared {nv} variables"),
                    ));
                }
                current.push(Lit::from_dimacs(v as i32));
            }
        }
    }
    let Some((_, _, nc)) = header else {
        return Err(err(last_line.max(1), "missing problem line"));
    };
    if !current.is_empty() || !expecting_weight {
        return Err(err(last_line, "clause not terminated by 0"));
    }
    if cnf.clauses().len() != nc {
        return Err(err(
            last_line,
            format!(
                "problem line declares {nc} clauses, found {}",
                cnf.clauses().len()
            ),
        ));
    }
    Ok(cnf)
}
