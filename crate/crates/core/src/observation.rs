//! Observation tokens: degraded per-step views of ground-truth traces.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::State;
use crate::trace::{ActionLabel, TraceList};
use crate::tracegen::trace_rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObsError {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("cannot cast {from} tokens to {to}")]
    InfeasibleCast { from: TokenType, to: TokenType },
    #[error("unknown fluent `{0}`")]
    UnknownFluent(String),
    #[error("unknown token type `{0}`")]
    UnknownTokenType(String),
    #[error("invalid observation JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenType {
    Identity,
    PartialState,
    StateId,
    NoisyState,
    ActionOnly,
}

impl TokenType {
    pub const ALL: [TokenType; 5] = [
        TokenType::Identity,
        TokenType::PartialState,
        TokenType::StateId,
        TokenType::NoisyState,
        TokenType::ActionOnly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TokenType::Identity => "identity",
            TokenType::PartialState => "partial_state",
            TokenType::StateId => "state_id",
            TokenType::NoisyState => "noisy_state",
            TokenType::ActionOnly => "action_only",
        }
    }

    pub fn has_actions(self) -> bool {
        self != TokenType::StateId
    }
}

impl fmt::Display for TokenType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TokenType {
    type Err = ObsError;

    fn from_str(s: &str) -> Result<Self, ObsError> {
        Ok(match s.to_lowercase().replace('-', "_").as_str() {
            "identity" | "full" => TokenType::Identity,
            "partial" | "partial_state" => TokenType::PartialState,
            "state_id" | "stateid" => TokenType::StateId,
            "noisy" | "noisy_state" => TokenType::NoisyState,
            "action_only" | "action" | "actions" => TokenType::ActionOnly,
            _ => return Err(ObsError::UnknownTokenType(s.to_string())),
        })
    }
}

/// Whether `from` tokens can be degraded into `to` tokens. Only
/// information-losing edges exist; every type casts to itself unchanged.
pub fn can_cast(from: TokenType, to: TokenType) -> bool {
    use TokenType::*;
    from == to
        || matches!(
            (from, to),
            (Identity, PartialState | NoisyState | StateId | ActionOnly)
                | (PartialState, ActionOnly)
                | (NoisyState, ActionOnly)
        )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObservationToken {
    Identity {
        state: Vec<bool>,
        action: Option<ActionLabel>,
    },
    /// `None` entries are unknown.
    PartialState {
        view: Vec<Option<bool>>,
        action: Option<ActionLabel>,
    },
    StateId {
        id: usize,
    },
    /// Fully specified but possibly wrong.
    NoisyState {
        view: Vec<bool>,
        action: Option<ActionLabel>,
    },
    ActionOnly {
        action: Option<ActionLabel>,
    },
}

impl ObservationToken {
    pub fn tag(&self) -> TokenType {
        match self {
            ObservationToken::Identity { .. } => TokenType::Identity,
            ObservationToken::PartialState { .. } => TokenType::PartialState,
            ObservationToken::StateId { .. } => TokenType::StateId,
            ObservationToken::NoisyState { .. } => TokenType::NoisyState,
            ObservationToken::ActionOnly { .. } => TokenType::ActionOnly,
        }
    }

    pub fn action(&self) -> Option<&ActionLabel> {
        match self {
            ObservationToken::Identity { action, .. }
            | ObservationToken::PartialState { action, .. }
            | ObservationToken::NoisyState { action, .. }
            | ObservationToken::ActionOnly { action } => action.as_ref(),
            ObservationToken::StateId { .. } => None,
        }
    }

    /// Observed value of fluent `f`; `None` when unknown or not observed.
    pub fn value(&self, f: usize) -> Option<bool> {
        match self {
            ObservationToken::Identity { state, .. } => state.get(f).copied(),
            ObservationToken::PartialState { view, .. } => view.get(f).copied().flatten(),
            ObservationToken::NoisyState { view, .. } => view.get(f).copied(),
            _ => None,
        }
    }

    /// Ternary view over all fluents, absent for state-free tokens.
    pub fn view(&self) -> Option<Vec<Option<bool>>> {
        match self {
            ObservationToken::Identity { state, .. } => Some(state.iter().map(|&b| Some(b)).collect()),
            ObservationToken::PartialState { view, .. } => Some(view.clone()),
            ObservationToken::NoisyState { view, .. } => Some(view.iter().map(|&b| Some(b)).collect()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObservedTrace {
    pub tokens: Vec<ObservationToken>,
    /// Canonical fluents of the initial state, when known.
    pub init: Option<Vec<String>>,
    pub goal: Option<Vec<String>>,
}

impl ObservedTrace {
    pub fn actions(&self) -> impl Iterator<Item = &ActionLabel> {
        self.tokens.iter().filter_map(ObservationToken::action)
    }
}

/// One tokenization or cast applied to the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub op: String,
    pub token_type: TokenType,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub percent_missing: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eligible: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservedTraceList {
    pub token_type: TokenType,
    pub fluents: Vec<String>,
    pub objects: BTreeMap<String, String>,
    pub provenance: Vec<ProvenanceEntry>,
    pub traces: Vec<ObservedTrace>,
}

/// Masking and noise parameters. `eligible` restricts which fluents may be
/// masked or flipped; `None` means all of them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TokenizeParams {
    pub percent_missing: f64,
    pub flip_prob: f64,
    pub eligible: Option<BTreeSet<String>>,
}

impl TokenizeParams {
    pub fn partial(percent_missing: f64) -> Self {
        TokenizeParams {
            percent_missing,
            ..Default::default()
        }
    }

    pub fn noisy(flip_prob: f64) -> Self {
        TokenizeParams {
            flip_prob,
            ..Default::default()
        }
    }
}

fn check_prob(p: f64) -> Result<(), ObsError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ObsError::InvalidProbability(p))
    }
}

fn eligible_mask(fluents: &[String], params: &TokenizeParams) -> Result<Vec<bool>, ObsError> {
    match &params.eligible {
        None => Ok(vec![true; fluents.len()]),
        Some(set) => {
            let mut mask = vec![false; fluents.len()];
            for name in set {
                let i = fluents
                    .iter()
                    .position(|f| f == name)
                    .ok_or_else(|| ObsError::UnknownFluent(name.clone()))?;
                mask[i] = true;
            }
            Ok(mask)
        }
    }
}

type FullStep = (Vec<bool>, Option<ActionLabel>);

/// Shared core: degrade fully observed steps into `tag` tokens.
fn degrade(
    full: &[Vec<FullStep>],
    fluents: &[String],
    tag: TokenType,
    params: &TokenizeParams,
    seed: u64,
) -> Result<Vec<Vec<ObservationToken>>, ObsError> {
    check_prob(params.percent_missing)?;
    check_prob(params.flip_prob)?;
    let mask = eligible_mask(fluents, params)?;
    let mut ids: HashMap<&[bool], usize> = HashMap::new();
    let mut out = Vec::with_capacity(full.len());
    for (ti, steps) in full.iter().enumerate() {
        let mut rng = trace_rng(seed, ti);
        let mut tokens = Vec::with_capacity(steps.len());
        for (state, action) in steps {
            let action = action.clone();
            tokens.push(match tag {
                TokenType::Identity => ObservationToken::Identity {
                    state: state.clone(),
                    action,
                },
                TokenType::PartialState => ObservationToken::PartialState {
                    view: state
                        .iter()
                        .zip(&mask)
                        .map(|(&b, &m)| (!(m && rng.random_bool(params.percent_missing))).then_some(b))
                        .collect(),
                    action,
                },
                TokenType::NoisyState => ObservationToken::NoisyState {
                    view: state
                        .iter()
                        .zip(&mask)
                        .map(|(&b, &m)| b ^ (m && rng.random_bool(params.flip_prob)))
                        .collect(),
                    action,
                },
                TokenType::StateId => {
                    let next = ids.len();
                    ObservationToken::StateId {
                        id: *ids.entry(state.as_slice()).or_insert(next),
                    }
                }
                TokenType::ActionOnly => ObservationToken::ActionOnly { action },
            });
        }
        out.push(tokens);
    }
    Ok(out)
}

fn provenance(op: &str, tag: TokenType, params: &TokenizeParams, seed: u64) -> ProvenanceEntry {
    ProvenanceEntry {
        op: op.to_string(),
        token_type: tag,
        seed,
        percent_missing: (tag == TokenType::PartialState).then_some(params.percent_missing),
        flip_prob: (tag == TokenType::NoisyState).then_some(params.flip_prob),
        eligible: match tag {
            TokenType::PartialState | TokenType::NoisyState => {
                params.eligible.as_ref().map(|s| s.iter().cloned().collect())
            }
            _ => None,
        },
    }
}

/// Turns ground-truth traces into tokens of type `tag`. Masking and flipping
/// are independent per fluent and step; state ids are assigned by first
/// occurrence across the whole list.
pub fn tokenize(
    traces: &TraceList,
    tag: TokenType,
    params: &TokenizeParams,
    seed: u64,
) -> Result<ObservedTraceList, ObsError> {
    let full: Vec<Vec<FullStep>> = traces
        .traces
        .iter()
        .map(|t| {
            t.steps
                .iter()
                .map(|s| (s.state.to_bools(), s.action.clone()))
                .collect()
        })
        .collect();
    let tokens = degrade(&full, &traces.fluents, tag, params, seed)?;
    let observed = traces
        .traces
        .iter()
        .zip(tokens)
        .map(|(t, tokens)| ObservedTrace {
            tokens,
            init: t.steps.first().map(|s| {
                s.state
                    .ones()
                    .map(|f| traces.fluents[f].clone())
                    .collect()
            }),
            goal: t.goal.clone(),
        })
        .collect();
    Ok(ObservedTraceList {
        token_type: tag,
        fluents: traces.fluents.clone(),
        objects: traces.objects.clone(),
        provenance: vec![provenance("tokenize", tag, params, seed)],
        traces: observed,
    })
}

/// Casts along the information-loss graph.
pub fn cast(
    obs: &ObservedTraceList,
    target: TokenType,
    params: &TokenizeParams,
    seed: u64,
) -> Result<ObservedTraceList, ObsError> {
    let source = obs.token_type;
    if !can_cast(source, target) {
        return Err(ObsError::InfeasibleCast { from: source, to: target });
    }
    if source == target {
        return Ok(obs.clone());
    }
    let tokens: Vec<Vec<ObservationToken>> = if source == TokenType::Identity {
        let full: Vec<Vec<FullStep>> = obs
            .traces
            .iter()
            .map(|t| {
                t.tokens
                    .iter()
                    .map(|tok| match tok {
                        ObservationToken::Identity { state, action } => (state.clone(), action.clone()),
                        _ => unreachable!("homogeneous identity list"),
                    })
                    .collect()
            })
            .collect();
        degrade(&full, &obs.fluents, target, params, seed)?
    } else {
        // PartialState / NoisyState → ActionOnly
        obs.traces
            .iter()
            .map(|t| {
                t.tokens
                    .iter()
                    .map(|tok| ObservationToken::ActionOnly {
                        action: tok.action().cloned(),
                    })
                    .collect()
            })
            .collect()
    };
    let mut out = obs.clone();
    out.token_type = target;
    for (t, toks) in out.traces.iter_mut().zip(tokens) {
        t.tokens = toks;
    }
    out.provenance.push(provenance("cast", target, params, seed));
    Ok(out)
}

/// An extraction method and the token types it consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractorInfo {
    pub name: &'static str,
    pub accepts: &'static [TokenType],
    pub implemented: bool,
}

/// Known extractors. SLAF and AMDN are listed for discovery but have no
/// implementation.
pub fn default_registry() -> Vec<ExtractorInfo> {
    use TokenType::*;
    vec![
        ExtractorInfo {
            name: "observer",
            accepts: &[Identity],
            implemented: true,
        },
        ExtractorInfo {
            name: "arms",
            accepts: &[Identity, PartialState],
            implemented: true,
        },
        ExtractorInfo {
            name: "slaf",
            accepts: &[Identity, PartialState],
            implemented: false,
        },
        ExtractorInfo {
            name: "amdn",
            accepts: &[Identity, PartialState, NoisyState],
            implemented: false,
        },
    ]
}

pub fn compatible_extractors(tag: TokenType, registry: &[ExtractorInfo]) -> Vec<ExtractorInfo> {
    registry
        .iter()
        .filter(|e| e.accepts.contains(&tag))
        .copied()
        .collect()
}

// ---- JSON ----

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Cell {
    Bit(u8),
    Word(String),
}

#[derive(Serialize, Deserialize)]
struct TokenJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state: Option<Vec<Cell>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state_id: Option<usize>,
    #[serde(default)]
    action: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct ObservedTraceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    init: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal: Option<Vec<String>>,
    tokens: Vec<TokenJson>,
}

#[derive(Serialize, Deserialize)]
struct ObservedListJson {
    token_type: TokenType,
    fluents: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    objects: BTreeMap<String, String>,
    #[serde(default)]
    provenance: Vec<ProvenanceEntry>,
    traces: Vec<ObservedTraceJson>,
}

fn bits(v: &[bool]) -> Vec<Cell> {
    v.iter().map(|&b| Cell::Bit(b as u8)).collect()
}

fn token_json(tok: &ObservationToken) -> TokenJson {
    let action = tok.action().map(|a| a.to_string());
    match tok {
        ObservationToken::Identity { state, .. } => TokenJson {
            state: Some(bits(state)),
            state_id: None,
            action,
        },
        ObservationToken::NoisyState { view, .. } => TokenJson {
            state: Some(bits(view)),
            state_id: None,
            action,
        },
        ObservationToken::PartialState { view, .. } => TokenJson {
            state: Some(
                view.iter()
                    .map(|v| match v {
                        Some(b) => Cell::Bit(*b as u8),
                        None => Cell::Word("unknown".into()),
                    })
                    .collect(),
            ),
            state_id: None,
            action,
        },
        ObservationToken::StateId { id } => TokenJson {
            state: None,
            state_id: Some(*id),
            action: None,
        },
        ObservationToken::ActionOnly { .. } => TokenJson {
            state: None,
            state_id: None,
            action,
        },
    }
}

fn parse_token(j: TokenJson, tag: TokenType, n: usize) -> Result<ObservationToken, ObsError> {
    let action = j.action.as_deref().map(ActionLabel::parse);
    let cells = || -> Result<Vec<Option<bool>>, ObsError> {
        let cells = j
            .state
            .as_ref()
            .ok_or_else(|| ObsError::Json(format!("{tag} token without `state`")))?;
        if cells.len() != n {
            return Err(ObsError::Json(format!(
                "state has {} values, expected {n}",
                cells.len()
            )));
        }
        cells
            .iter()
            .map(|c| match c {
                Cell::Bit(0) => Ok(Some(false)),
                Cell::Bit(1) => Ok(Some(true)),
                Cell::Word(w) if w == "unknown" => Ok(None),
                _ => Err(ObsError::Json("state values must be 0, 1 or \"unknown\"".into())),
            })
            .collect()
    };
    let certain = |v: Vec<Option<bool>>| -> Result<Vec<bool>, ObsError> {
        v.into_iter()
            .map(|x| x.ok_or_else(|| ObsError::Json(format!("{tag} token contains \"unknown\""))))
            .collect()
    };
    Ok(match tag {
        TokenType::Identity => ObservationToken::Identity {
            state: certain(cells()?)?,
            action,
        },
        TokenType::NoisyState => ObservationToken::NoisyState {
            view: certain(cells()?)?,
            action,
        },
        TokenType::PartialState => ObservationToken::PartialState { view: cells()?, action },
        TokenType::StateId => ObservationToken::StateId {
            id: j
                .state_id
                .ok_or_else(|| ObsError::Json("state_id token without `state_id`".into()))?,
        },
        TokenType::ActionOnly => ObservationToken::ActionOnly { action },
    })
}

impl ObservedTraceList {
    pub fn to_json(&self) -> String {
        let doc = ObservedListJson {
            token_type: self.token_type,
            fluents: self.fluents.clone(),
            objects: self.objects.clone(),
            provenance: self.provenance.clone(),
            traces: self
                .traces
                .iter()
                .map(|t| ObservedTraceJson {
                    init: t.init.clone(),
                    goal: t.goal.clone(),
                    tokens: t.tokens.iter().map(token_json).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("observation JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, ObsError> {
        let doc: ObservedListJson =
            serde_json::from_str(text).map_err(|e| ObsError::Json(e.to_string()))?;
        let n = doc.fluents.len();
        let tag = doc.token_type;
        let traces = doc
            .traces
            .into_iter()
            .map(|t| {
                Ok(ObservedTrace {
                    tokens: t
                        .tokens
                        .into_iter()
                        .map(|j| parse_token(j, tag, n))
                        .collect::<Result<_, _>>()?,
                    init: t.init,
                    goal: t.goal,
                })
            })
            .collect::<Result<_, ObsError>>()?;
        Ok(ObservedTraceList {
            token_type: tag,
            fluents: doc.fluents,
            objects: doc.objects,
            provenance: doc.provenance,
            traces,
        })
    }

    /// Fully observed tokens back as a trace list (Identity only).
    pub fn to_trace_list(&self) -> Option<TraceList> {
        if self.token_type != TokenType::Identity {
            return None;
        }
        let mut list = TraceList::new(self.fluents.clone());
        list.objects = self.objects.clone();
        for t in &self.traces {
            let steps = t
                .tokens
                .iter()
                .map(|tok| match tok {
                    ObservationToken::Identity { state, action } => crate::trace::Step {
                        state: State::from_bools(state),
                        action: action.clone(),
                    },
                    _ => unreachable!(),
                })
                .collect();
            list.traces.push(crate::trace::Trace {
                steps,
                goal: t.goal.clone(),
                ..Default::default()
            });
        }
        Some(list)
    }
}
