//! Replay of observed traces under a learned model.

use std::collections::HashMap;

use super::{ActionTheory, ExtractError};
use crate::observation::ObservedTraceList;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TraceReplay {
    /// Steps carrying an action.
    pub steps: usize,
    /// Steps where an observed-true fluent is false in the simulated state.
    pub state_violations: usize,
    /// Steps where some learned precondition is false in the simulated state.
    pub precondition_violations: usize,
    /// Steps whose action the model does not know.
    pub unknown_actions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    State,
    Precondition,
}

/// One offending fluent at one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub trace: usize,
    pub step: usize,
    pub kind: ViolationKind,
    pub fluent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReplayReport {
    pub traces: Vec<TraceReplay>,
    pub violations: Vec<Violation>,
}

impl ReplayReport {
    pub fn total(&self) -> TraceReplay {
        self.traces.iter().fold(TraceReplay::default(), |a, t| TraceReplay {
            steps: a.steps + t.steps,
            state_violations: a.state_violations + t.state_violations,
            precondition_violations: a.precondition_violations + t.precondition_violations,
            unknown_actions: a.unknown_actions + t.unknown_actions,
        })
    }

    pub fn precondition_violation_rate(&self) -> f64 {
        let t = self.total();
        if t.steps == 0 {
            0.0
        } else {
            t.precondition_violations as f64 / t.steps as f64
        }
    }

    pub fn is_clean(&self) -> bool {
        let t = self.total();
        t.state_violations == 0 && t.precondition_violations == 0 && t.unknown_actions == 0
    }
}

/// Ternary simulation of every trace, re-synchronized with each observed
/// value. The initial state is closed-world when the trace records it.
pub fn replay_consistency(
    model: &impl ActionTheory,
    obs: &ObservedTraceList,
) -> Result<ReplayReport, ExtractError> {
    let index: HashMap<&str, usize> = obs
        .fluents
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_str(), i))
        .collect();
    let id = |f: &String| -> Result<usize, ExtractError> {
        index
            .get(f.as_str())
            .copied()
            .ok_or_else(|| ExtractError::VocabularyMismatch(f.clone()))
    };
    let n = obs.fluents.len();
    let mut report = ReplayReport::default();
    for (ti, t) in obs.traces.iter().enumerate() {
        let mut r = TraceReplay::default();
        let mut sim: Vec<Option<bool>> = match &t.init {
            Some(init) => {
                let mut s = vec![Some(false); n];
                for f in init {
                    s[id(f)?] = Some(true);
                }
                s
            }
            None => vec![None; n],
        };
        for (i, tok) in t.tokens.iter().enumerate() {
            if let Some(view) = tok.view() {
                if i > 0 {
                    let bad: Vec<usize> = (0..n)
                        .filter(|&f| view[f] == Some(true) && sim[f] == Some(false))
                        .collect();
                    if !bad.is_empty() {
                        r.state_violations += 1;
                    }
                    report.violations.extend(bad.into_iter().map(|f| Violation {
                        trace: ti,
                        step: i,
                        kind: ViolationKind::State,
                        fluent: obs.fluents[f].clone(),
                    }));
                }
                for (s, o) in sim.iter_mut().zip(view) {
                    if o.is_some() {
                        *s = o;
                    }
                }
            }
            let Some(action) = tok.action() else { continue };
            r.steps += 1;
            let Some(eff) = model.effects(action) else {
                r.unknown_actions += 1;
                sim = vec![None; n];
                continue;
            };
            let mut violated = false;
            for f in &eff.precond {
                if sim[id(f)?] == Some(false) {
                    violated = true;
                    report.violations.push(Violation {
                        trace: ti,
                        step: i,
                        kind: ViolationKind::Precondition,
                        fluent: f.clone(),
                    });
                }
            }
            if violated {
                r.precondition_violations += 1;
            }
            for f in &eff.delete {
                sim[id(f)?] = Some(false);
            }
            for f in &eff.add {
                sim[id(f)?] = Some(true);
            }
        }
        report.traces.push(r);
    }
    Ok(report)
}
