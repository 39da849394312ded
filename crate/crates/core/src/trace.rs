//! Plan traces: alternating states and action labels, with JSON and CSV IO.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::State;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("invalid trace JSON: {0}")]
    Json(String),
    #[error("invalid CSV: {0}")]
    Csv(String),
    #[error("action column `{0}` not found in CSV header")]
    MissingActionColumn(String),
    #[error("CSV input has no header or no rows")]
    EmptyFile,
    #[error("trace {trace}, step {step}: state has {found} values, expected {expected}")]
    StateLength {
        trace: usize,
        step: usize,
        expected: usize,
        found: usize,
    },
    #[error("trace {trace}, step {step}: state values must be 0 or 1")]
    BadBit { trace: usize, step: usize },
}

/// Ground action label `name obj1 obj2 ...`. Labels that do not tokenize
/// into identifiers are kept whole as an opaque name with no arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionLabel {
    pub name: String,
    pub args: Vec<String>,
}

fn is_identifier(tok: &str) -> bool {
    !tok.is_empty()
        && tok
            .chars()
            .all(|c| c.is_alphanumeric() || c == '-' || c == '_')
}

impl ActionLabel {
    pub fn new(name: impl Into<String>, args: Vec<String>) -> Self {
        ActionLabel {
            name: name.into(),
            args,
        }
    }

    pub fn parse(text: &str) -> Self {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if !toks.is_empty() && toks.iter().all(|t| is_identifier(t)) {
            ActionLabel::new(toks[0], toks[1..].iter().map(|s| s.to_string()).collect())
        } else {
            ActionLabel::new(text.trim(), Vec::new())
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub state: State,
    /// Action taken in `state`; `None` on the final step.
    pub action: Option<ActionLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<Step>,
    /// Originating task, when generated from one.
    pub task: Option<String>,
    /// Goal the trace was planned for, as canonical fluents.
    pub goal: Option<Vec<String>>,
    /// Step at which a walk hit a state with no applicable action.
    pub dead_end: Option<usize>,
}

impl Trace {
    pub fn actions(&self) -> impl Iterator<Item = &ActionLabel> {
        self.steps.iter().filter_map(|s| s.action.as_ref())
    }

    pub fn num_actions(&self) -> usize {
        self.actions().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceList {
    pub fluents: Vec<String>,
    /// Object name → type, when known.
    pub objects: BTreeMap<String, String>,
    pub traces: Vec<Trace>,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    state: Vec<u8>,
    action: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TraceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    task: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dead_end: Option<usize>,
    steps: Vec<StepJson>,
}

#[derive(Serialize, Deserialize)]
struct TraceListJson {
    fluents: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    objects: BTreeMap<String, String>,
    traces: Vec<TraceJson>,
}

/// Result of a CSV import together with the dropped-column warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvImport {
    pub traces: TraceList,
    pub warnings: Vec<String>,
}

fn canonical_header(h: &str) -> String {
    h.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

impl TraceList {
    pub fn new(fluents: Vec<String>) -> Self {
        TraceList {
            fluents,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn fluent_index(&self, name: &str) -> Option<usize> {
        self.fluents.iter().position(|f| f == name)
    }

    pub fn to_json(&self) -> String {
        let doc = TraceListJson {
            fluents: self.fluents.clone(),
            objects: self.objects.clone(),
            traces: self
                .traces
                .iter()
                .map(|t| TraceJson {
                    task: t.task.clone(),
                    goal: t.goal.clone(),
                    dead_end: t.dead_end,
                    steps: t
                        .steps
                        .iter()
                        .map(|s| StepJson {
                            state: s.state.to_bools().into_iter().map(u8::from).collect(),
                            action: s.action.as_ref().map(|a| a.to_string()),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("trace JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, TraceError> {
        let doc: TraceListJson =
            serde_json::from_str(text).map_err(|e| TraceError::Json(e.to_string()))?;
        let n = doc.fluents.len();
        let mut traces = Vec::with_capacity(doc.traces.len());
        for (ti, t) in doc.traces.into_iter().enumerate() {
            let mut steps = Vec::with_capacity(t.steps.len());
            for (si, s) in t.steps.into_iter().enumerate() {
                if s.state.len() != n {
                    return Err(TraceError::StateLength {
                        trace: ti,
                        step: si,
                        expected: n,
                        found: s.state.len(),
                    });
                }
                if s.state.iter().any(|&b| b > 1) {
                    return Err(TraceError::BadBit { trace: ti, step: si });
                }
                let bits: Vec<bool> = s.state.iter().map(|&b| b == 1).collect();
                steps.push(Step {
                    state: State::from_bools(&bits),
                    action: s.action.as_deref().map(ActionLabel::parse),
                });
            }
            traces.push(Trace {
                steps,
                task: t.task,
                goal: t.goal,
                dead_end: t.dead_end,
            });
        }
        Ok(TraceList {
            fluents: doc.fluents,
            objects: doc.objects,
            traces,
        })
    }

    /// One trace as CSV: a column per fluent plus a trailing `action` column.
    pub fn trace_to_csv(&self, index: usize) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = self.fluents.clone();
        header.push("action".to_string());
        w.write_record(&header).expect("in-memory write");
        for s in &self.traces[index].steps {
            let mut row: Vec<String> = s
                .state
                .to_bools()
                .into_iter()
                .map(|b| if b { "1" } else { "0" }.to_string())
                .collect();
            row.push(s.action.as_ref().map(|a| a.to_string()).unwrap_or_default());
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
    }
}

/// Reads one trace from CSV. Columns whose every value is `0` or `1`
/// become fluents; any other column except `action_column` is dropped and
/// reported in [`CsvImport::warnings`].
pub fn load_csv(text: &str, action_column: &str) -> Result<CsvImport, TraceError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| TraceError::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        return Err(TraceError::EmptyFile);
    }
    let action_idx = headers
        .iter()
        .position(|h| h == action_column)
        .ok_or_else(|| TraceError::MissingActionColumn(action_column.to_string()))?;
    let rows: Vec<csv::StringRecord> = rdr
        .records()
        .collect::<Result<_, _>>()
        .map_err(|e| TraceError::Csv(e.to_string()))?;
    if rows.is_empty() {
        return Err(TraceError::EmptyFile);
    }

    let mut warnings = Vec::new();
    let mut kept = Vec::new();
    for (c, h) in headers.iter().enumerate() {
        if c == action_idx {
            continue;
        }
        match rows.iter().enumerate().find(|(_, r)| !matches!(&r[c], "0" | "1")) {
            None => kept.push(c),
            Some((ri, r)) => warnings.push(format!(
                "dropped column `{h}`: non-boolean value `{}` in row {}",
                &r[c],
                ri + 1
            )),
        }
    }

    let steps = rows
        .iter()
        .map(|r| {
            let bits: Vec<bool> = kept.iter().map(|&c| &r[c] == "1").collect();
            let cell = &r[action_idx];
            Step {
                state: State::from_bools(&bits),
                action: (!cell.is_empty()).then(|| ActionLabel::parse(cell)),
            }
        })
        .collect();
    let mut traces = TraceList::new(kept.iter().map(|&c| canonical_header(&headers[c])).collect());
    traces.traces.push(Trace {
        steps,
        ..Default::default()
    });
    Ok(CsvImport { traces, warnings })
}
