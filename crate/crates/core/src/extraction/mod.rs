//! Action-model extraction from observation tokens.

mod arms;
mod observer;
mod replay;

use std::collections::BTreeMap;

use thiserror::Error;

pub use arms::{encode_arms, extract_arms, ArmsEncoding, ArmsOutput, ArmsParams, Boundary};
pub use observer::{extract_observer, observe, GroundModel, ObserverOutput};
pub use replay::{replay_consistency, ReplayReport, TraceReplay, Violation, ViolationKind};

use crate::model::LearnedModel;
use crate::observation::TokenType;
use crate::pddl::GroundEffects;
use crate::trace::ActionLabel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("{extractor} cannot consume {found} tokens")]
    IncompatibleTokens {
        extractor: &'static str,
        found: TokenType,
    },
    #[error("trace {trace}, step {step}: missing action label")]
    MissingAction { trace: usize, step: usize },
    #[error("`{action}` has contradictory effects on `{fluent}`")]
    InconsistentTransitions { action: String, fluent: String },
    #[error("hard constraints are unsatisfiable")]
    Unsatisfiable,
    #[error("MaxSAT conflict budget exceeded")]
    SolverBudgetExceeded,
    #[error("fluent `{0}` is not in the observed vocabulary")]
    VocabularyMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("expected 0, 1 or {expected} boundaries, got {found}")]
    BoundaryCount { expected: usize, found: usize },
}

/// Anything that can ground an action label into STRIPS effects.
pub trait ActionTheory {
    fn effects(&self, action: &ActionLabel) -> Option<GroundEffects>;
}

impl ActionTheory for LearnedModel {
    fn effects(&self, action: &ActionLabel) -> Option<GroundEffects> {
        self.ground_effects(&action.name, &action.args)
    }
}

impl ActionTheory for GroundModel {
    fn effects(&self, action: &ActionLabel) -> Option<GroundEffects> {
        self.actions.get(&action.to_string()).cloned()
    }
}

/// Ground truth as an action theory, keyed by canonical ground action.
impl ActionTheory for BTreeMap<String, GroundEffects> {
    fn effects(&self, action: &ActionLabel) -> Option<GroundEffects> {
        self.get(&action.to_string()).cloned()
    }
}
