//! Research-space recommendation over a boolean feature taxonomy.
//!
//! A taxonomy file declares features, constraints over them, the known
//! techniques as cubes, and a default preference order. The valid and
//! unexplored space is `constraints ∧ ¬(cube_1 ∨ … ∨ cube_n)`; a
//! recommendation greedily enforces preferences on a compiled form of that
//! theory and then picks the lexicographically smallest remaining model.

mod neighbors;
mod report;
mod solve;

use std::collections::HashMap;
use std::fmt;

use modelacq_logic::{Cnf, Lit, Var};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use neighbors::{nearest_techniques, Hop, Neighbor, DEFAULT_NEIGHBORS};
pub use report::{NeighborReport, Report};
pub use solve::{
    build_theory, recommend, recommend_sat, replay_preferences, validate_registry, EntryVerdict, Recommendation,
    ValidationReport,
};

/// The taxonomy shipped with the crate.
pub const DEFAULT_TAXONOMY: &str = include_str!("../../data/taxonomy.toml");

#[derive(Debug, Error)]
pub enum RecommendError {
    #[error("taxonomy: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("feature `{0}` declared twice")]
    DuplicateFeature(String),
    #[error("{context}: unknown feature `{name}`")]
    UnknownFeature { context: String, name: String },
    #[error("{context}: malformed literal `{literal}`")]
    BadLiteral { context: String, literal: String },
    #[error("{context}: feature `{name}` appears more than once")]
    RepeatedFeature { context: String, name: String },
    #[error("constraint `{0}` has no literals")]
    EmptyConstraint(String),
    #[error("constraints and known techniques leave no unexplored setting")]
    FieldSaturated,
    #[error("{0} features exceed the compilation limit")]
    TooManyFeatures(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    pub facet: String,
    #[serde(default)]
    pub group: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

/// A feature or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureLit {
    pub feature: usize,
    pub positive: bool,
}

impl FeatureLit {
    pub fn new(feature: usize, positive: bool) -> Self {
        FeatureLit { feature, positive }
    }

    pub fn negate(self) -> Self {
        FeatureLit::new(self.feature, !self.positive)
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.feature] == self.positive
    }

    pub fn to_lit(self) -> Lit {
        Var(self.feature as u32).lit(self.positive)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    Clause,
    AtLeastOne,
    AtMostOne,
    ExactlyOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub kind: ConstraintKind,
    pub lits: Vec<FeatureLit>,
}

impl Constraint {
    pub fn holds(&self, assignment: &[bool]) -> bool {
        let n = self.lits.iter().filter(|l| l.holds(assignment)).count();
        match self.kind {
            ConstraintKind::Clause | ConstraintKind::AtLeastOne => n >= 1,
            ConstraintKind::AtMostOne => n <= 1,
            ConstraintKind::ExactlyOne => n == 1,
        }
    }

    /// Clausal form (pairwise encoding for at-most-one).
    pub fn clauses(&self) -> Vec<Vec<FeatureLit>> {
        let mut out = Vec::new();
        if self.kind != ConstraintKind::AtMostOne {
            out.push(self.lits.clone());
        }
        if matches!(self.kind, ConstraintKind::AtMostOne | ConstraintKind::ExactlyOne) {
            for (i, a) in self.lits.iter().enumerate() {
                for b in &self.lits[i + 1..] {
                    out.push(vec![a.negate(), b.negate()]);
                }
            }
        }
        out
    }
}

/// Features and the constraints between them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureSchema {
    features: Vec<Feature>,
    constraints: Vec<Constraint>,
    index: HashMap<String, usize>,
}

impl FeatureSchema {
    pub fn new(features: Vec<Feature>, constraints: Vec<Constraint>) -> Result<Self, RecommendError> {
        let mut index = HashMap::new();
        for (i, f) in features.iter().enumerate() {
            if index.insert(f.name.clone(), i).is_some() {
                return Err(RecommendError::DuplicateFeature(f.name.clone()));
            }
        }
        for c in &constraints {
            if c.lits.is_empty() {
                return Err(RecommendError::EmptyConstraint(c.name.clone()));
            }
            if let Some(l) = c.lits.iter().find(|l| l.feature >= features.len()) {
                return Err(RecommendError::UnknownFeature {
                    context: format!("constraint `{}`", c.name),
                    name: format!("#{}", l.feature),
                });
            }
        }
        Ok(FeatureSchema {
            features,
            constraints,
            index,
        })
    }

    /// Schema with features named `f0`, `f1`, … in a single facet.
    pub fn anonymous(n: usize, constraints: Vec<Constraint>) -> Result<Self, RecommendError> {
        let features = (0..n)
            .map(|i| Feature {
                name: format!("f{i}"),
                facet: "all".into(),
                group: String::new(),
                description: String::new(),
            })
            .collect();
        Self::new(features, constraints)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Parses `name` or `!name`.
    pub fn parse_lit(&self, text: &str, context: &str) -> Result<FeatureLit, RecommendError> {
        let t = text.trim();
        let (positive, name) = match t.strip_prefix('!') {
            Some(rest) => (false, rest.trim()),
            None => (true, t),
        };
        if name.is_empty() || name.contains(char::is_whitespace) || name.starts_with('!') {
            return Err(RecommendError::BadLiteral {
                context: context.into(),
                literal: text.into(),
            });
        }
        let feature = self.index_of(name).ok_or_else(|| RecommendError::UnknownFeature {
            context: context.into(),
            name: name.into(),
        })?;
        Ok(FeatureLit::new(feature, positive))
    }

    /// Parses a partial assignment: at most one literal per feature.
    pub fn parse_cube<S: AsRef<str>>(&self, lits: &[S], context: &str) -> Result<Vec<FeatureLit>, RecommendError> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::with_capacity(lits.len());
        for s in lits {
            let l = self.parse_lit(s.as_ref(), context)?;
            if std::mem::replace(&mut seen[l.feature], true) {
                return Err(RecommendError::RepeatedFeature {
                    context: context.into(),
                    name: self.features[l.feature].name.clone(),
                });
            }
            out.push(l);
        }
        Ok(out)
    }

    pub fn lit_name(&self, l: FeatureLit) -> String {
        let name = &self.features[l.feature].name;
        if l.positive {
            name.clone()
        } else {
            format!("!{name}")
        }
    }

    pub fn satisfies(&self, assignment: &[bool]) -> bool {
        self.constraints.iter().all(|c| c.holds(assignment))
    }

    pub fn violated(&self, assignment: &[bool]) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.holds(assignment))
            .map(|c| c.name.as_str())
            .collect()
    }

    /// The constraints as CNF over one variable per feature.
    pub fn to_cnf(&self) -> Cnf {
        let mut cnf = Cnf::new(self.len());
        for c in &self.constraints {
            for cl in c.clauses() {
                cnf.add_clause(cl.iter().map(|l| l.to_lit()))
                    .expect("constraint literals are in range");
            }
        }
        cnf
    }

    /// Renders an assignment as a total cube of literals.
    pub fn assignment_lits(&self, assignment: &[bool]) -> Vec<String> {
        assignment
            .iter()
            .enumerate()
            .map(|(i, &v)| self.lit_name(FeatureLit::new(i, v)))
            .collect()
    }
}

/// A known technique and the features it documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TechniqueEntry {
    pub id: String,
    pub title: String,
    pub year: Option<u32>,
    pub cube: Vec<FeatureLit>,
}

impl TechniqueEntry {
    pub fn matches(&self, assignment: &[bool]) -> bool {
        self.cube.iter().all(|l| l.holds(assignment))
    }
}

/// Schema, registry and default preference order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Taxonomy {
    pub schema: FeatureSchema,
    pub entries: Vec<TechniqueEntry>,
    pub preferences: Vec<FeatureLit>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawConstraint {
    name: String,
    kind: ConstraintKind,
    literals: Vec<String>,
}

/// Entry as written in taxonomy and report files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<u32>,
    pub cube: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawTaxonomy {
    #[serde(default)]
    preferences: Vec<String>,
    #[serde(default, rename = "feature")]
    features: Vec<Feature>,
    #[serde(default, rename = "constraint")]
    constraints: Vec<RawConstraint>,
    #[serde(default, rename = "entry")]
    entries: Vec<RawEntry>,
}

impl Taxonomy {
    pub fn from_toml(text: &str) -> Result<Self, RecommendError> {
        let raw: RawTaxonomy = toml::from_str(text)?;
        let bare = FeatureSchema::new(raw.features, Vec::new())?;
        let mut constraints = Vec::with_capacity(raw.constraints.len());
        for c in raw.constraints {
            let lits = bare.parse_cube(&c.literals, &format!("constraint `{}`", c.name))?;
            constraints.push(Constraint {
                name: c.name,
                kind: c.kind,
                lits,
            });
        }
        let schema = FeatureSchema::new(bare.features, constraints)?;
        let entries = raw
            .entries
            .iter()
            .map(|e| schema.parse_entry(e))
            .collect::<Result<Vec<_>, _>>()?;
        let preferences = parse_preferences(&schema, &raw.preferences)?;
        Ok(Taxonomy {
            schema,
            entries,
            preferences,
        })
    }

    pub fn shipped() -> Self {
        Self::from_toml(DEFAULT_TAXONOMY).expect("shipped taxonomy parses")
    }

    pub fn to_toml(&self) -> String {
        let s = &self.schema;
        let raw = RawTaxonomy {
            preferences: self.preferences.iter().map(|&l| s.lit_name(l)).collect(),
            features: s.features.clone(),
            constraints: s
                .constraints
                .iter()
                .map(|c| RawConstraint {
                    name: c.name.clone(),
                    kind: c.kind,
                    literals: c.lits.iter().map(|&l| s.lit_name(l)).collect(),
                })
                .collect(),
            entries: self.entries.iter().map(|e| s.raw_entry(e)).collect(),
        };
        toml::to_string(&raw).expect("taxonomy serializes")
    }
}

impl FeatureSchema {
    pub fn parse_entry(&self, e: &RawEntry) -> Result<TechniqueEntry, RecommendError> {
        Ok(TechniqueEntry {
            id: e.id.clone(),
            title: e.title.clone(),
            year: e.year,
            cube: self.parse_cube(&e.cube, &format!("entry `{}`", e.id))?,
        })
    }

    pub fn raw_entry(&self, e: &TechniqueEntry) -> RawEntry {
        RawEntry {
            id: e.id.clone(),
            title: e.title.clone(),
            year: e.year,
            cube: e.cube.iter().map(|&l| self.lit_name(l)).collect(),
        }
    }
}

/// Parses a preference order; each feature may appear once.
pub fn parse_preferences<S: AsRef<str>>(schema: &FeatureSchema, lits: &[S]) -> Result<Vec<FeatureLit>, RecommendError> {
    schema.parse_cube(lits, "preferences")
}

/// Reads literals separated by whitespace or commas; `#` starts a comment.
pub fn parse_preference_text(schema: &FeatureSchema, text: &str) -> Result<Vec<FeatureLit>, RecommendError> {
    let tokens: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .collect();
    parse_preferences(schema, &tokens)
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintKind::Clause => "clause",
            ConstraintKind::AtLeastOne => "at_least_one",
            ConstraintKind::AtMostOne => "at_most_one",
            ConstraintKind::ExactlyOne => "exactly_one",
        })
    }
}
