//! Browser bindings for three small demos: technique recommendation,
//! observation degradation with model extraction, and d-DNNF model counting.
//!
//! Every export takes and returns plain strings, so the same functions run
//! natively in tests.

use std::fmt::Write;

use modelacq::domains::{Bundled, ALL};
use modelacq::extraction::{extract_arms, extract_observer, ArmsParams};
use modelacq::observation::{compatible_extractors, default_registry, tokenize, ObservationToken, TokenType, TokenizeParams};
use modelacq::pddl::serialize_model;
use modelacq::recommender::{nearest_techniques, parse_preference_text, recommend, Report, Taxonomy, DEFAULT_TAXONOMY};
use modelacq::tracegen::random_walk;
use modelacq_logic::{compile_ddnnf, parse_dimacs, Lit};
use wasm_bindgen::prelude::*;

/// Walks longer than this are refused to keep the page responsive.
pub const MAX_STEPS: usize = 200;

#[wasm_bindgen]
pub fn shipped_taxonomy() -> String {
    DEFAULT_TAXONOMY.to_string()
}

#[wasm_bindgen]
pub fn bundled_tasks() -> String {
    ALL.iter().map(|b| b.name).collect::<Vec<_>>().join(",")
}

/// Recommendation report as text. An empty taxonomy means the shipped one;
/// empty preferences mean the taxonomy's own list.
#[wasm_bindgen]
pub fn recommend_profile(taxonomy: &str, preferences: &str, neighbors: usize) -> Result<String, String> {
    let tax = if taxonomy.trim().is_empty() {
        Taxonomy::shipped()
    } else {
        Taxonomy::from_toml(taxonomy).map_err(|e| e.to_string())?
    };
    let prefs = if preferences.trim().is_empty() {
        tax.preferences.clone()
    } else {
        parse_preference_text(&tax.schema, preferences).map_err(|e| e.to_string())?
    };
    let r = recommend(&tax.schema, &tax.entries, &prefs).map_err(|e| e.to_string())?;
    let n = nearest_techniques(&r.assignment, &tax.entries, neighbors);
    Ok(Report::new(&tax.schema, &tax.entries, &r, &n).to_text())
}

fn render_token(out: &mut String, i: usize, tok: &ObservationToken, fluents: &[String]) {
    match tok {
        ObservationToken::StateId { id } => writeln!(out, "s{i}  state #{id}").unwrap(),
        _ => match tok.view() {
            None => writeln!(out, "s{i}  (state not observed)").unwrap(),
            Some(view) => {
                let known = view.iter().filter(|v| v.is_some()).count();
                let on: Vec<&str> = view
                    .iter()
                    .zip(fluents)
                    .filter(|(v, _)| **v == Some(true))
                    .map(|(_, f)| f.as_str())
                    .collect();
                writeln!(out, "s{i}  known {known}/{}  true: {}", view.len(), on.join(", ")).unwrap();
            }
        },
    }
    if let Some(a) = tok.action() {
        writeln!(out, "    -> {a}").unwrap();
    }
}

/// Generates random walks on a bundled task, degrades them into `token_type`
/// tokens and runs `method` on the result. Returns the first trace as seen by
/// the learner followed by the learned model.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn observe_and_learn(
    task: &str,
    length: usize,
    count: usize,
    token_type: &str,
    percent_missing: f64,
    flip_prob: f64,
    method: &str,
    seed: u64,
) -> Result<String, String> {
    let b = Bundled::by_name(task).ok_or_else(|| format!("unknown task `{task}`"))?;
    if length * count > MAX_STEPS {
        return Err(format!("at most {MAX_STEPS} steps in total"));
    }
    let tag: TokenType = token_type.parse().map_err(|e| format!("{e}"))?;
    let task = b.task().map_err(|e| e.to_string())?;
    let list = random_walk(&task, length, count, seed);
    let params = TokenizeParams { percent_missing, flip_prob, eligible: None };
    let obs = tokenize(&list, tag, &params, seed).map_err(|e| e.to_string())?;

    let mut out = String::new();
    writeln!(out, "Trace 1 as observed ({tag})").unwrap();
    if let Some(t) = obs.traces.first() {
        for (i, tok) in t.tokens.iter().enumerate() {
            render_token(&mut out, i, tok, &obs.fluents);
        }
    }
    out.push('\n');
    let model = match method {
        "observer" => extract_observer(&obs),
        "arms" => extract_arms(&obs, &ArmsParams::default(), &[]).map(|o| o.model),
        other => return Err(format!("unknown method `{other}`")),
    };
    match model {
        Ok(m) => out.push_str(&serialize_model(&m, "learned").details),
        Err(e) => {
            let names: Vec<&str> = compatible_extractors(tag, &default_registry())
                .into_iter()
                .filter(|x| x.implemented)
                .map(|x| x.name)
                .collect();
            let hint = if names.is_empty() { "none".to_string() } else { names.join(", ") };
            return Err(format!("{e} (usable with {tag}: {hint})"));
        }
    }
    Ok(out)
}

/// Compiles a DIMACS CNF and counts models, then conditions on each
/// assumption literal in turn and reports the shrinking counts.
#[wasm_bindgen]
pub fn count_models(dimacs: &str, assumptions: &str) -> Result<String, String> {
    let cnf = parse_dimacs(dimacs).map_err(|e| e.to_string())?;
    let mut d = compile_ddnnf(&cnf).map_err(|e| e.to_string())?;
    let mut out = format!("{} variables, {} clauses\nmodels: {}\n", cnf.num_vars(), cnf.clauses().len(), d.count_models());
    for tok in assumptions.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let v: i32 = tok.parse().map_err(|_| format!("`{tok}` is not a literal"))?;
        if v == 0 || v.unsigned_abs() as usize > cnf.num_vars() {
            return Err(format!("literal {v} is out of range 1..={}", cnf.num_vars()));
        }
        d = d.condition(Lit::from_dimacs(v));
        writeln!(out, "after {v}: {}", d.count_models()).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_list_names_every_bundle() {
        assert_eq!(bundled_tasks().split(',').count(), ALL.len());
    }

    #[test]
    fn zero_is_not_an_assumption() {
        assert!(count_models("p cnf 1 0\n", "0").is_err());
    }
}
