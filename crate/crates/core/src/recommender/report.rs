use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{FeatureSchema, Hop, Neighbor, RawEntry, Recommendation, RecommendError, TechniqueEntry};

/// Identifier given to the recommended profile in reports.
pub const PROFILE_ID: &str = "recommended";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborReport {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<u32>,
    pub distance: usize,
    pub relax: Vec<String>,
    pub extend: Vec<String>,
}

/// A recommendation with its nearest known techniques. The profile is
/// written in the taxonomy entry format so it can be loaded back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub profile: RawEntry,
    pub enforced: Vec<String>,
    pub skipped: Vec<String>,
    pub neighbors: Vec<NeighborReport>,
    #[serde(skip)]
    groups: Vec<(String, String, Vec<String>)>,
}

impl Report {
    pub fn new(
        schema: &FeatureSchema,
        entries: &[TechniqueEntry],
        rec: &Recommendation,
        neighbors: &[Neighbor],
    ) -> Self {
        let names = |ls: &[super::FeatureLit]| ls.iter().map(|&l| schema.lit_name(l)).collect::<Vec<_>>();
        let mut groups: Vec<(String, String, Vec<String>)> = Vec::new();
        for (f, v) in schema.features().iter().zip(&rec.assignment) {
            let pos = match groups.iter().position(|(fa, g, _)| *fa == f.facet && *g == f.group) {
                Some(p) => p,
                None => {
                    groups.push((f.facet.clone(), f.group.clone(), Vec::new()));
                    groups.len() - 1
                }
            };
            if *v {
                groups[pos].2.push(f.name.clone());
            }
        }
        Report {
            profile: RawEntry {
                id: PROFILE_ID.into(),
                title: String::new(),
                year: None,
                cube: schema.assignment_lits(&rec.assignment),
            },
            enforced: names(&rec.enforced),
            skipped: names(&rec.skipped),
            neighbors: neighbors
                .iter()
                .map(|n| {
                    let e = &entries[n.index];
                    let hop = |h: Hop| {
                        n.hops
                            .iter()
                            .filter(|(_, x)| *x == h)
                            .map(|(l, _)| schema.features()[l.feature].name.clone())
                            .collect()
                    };
                    NeighborReport {
                        id: e.id.clone(),
                        title: e.title.clone(),
                        year: e.year,
                        distance: n.distance,
                        relax: hop(Hop::Relax),
                        extend: hop(Hop::Extend),
                    }
                })
                .collect(),
            groups,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, RecommendError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Loads the profile through the schema, as a registry entry.
    pub fn profile_entry(&self, schema: &FeatureSchema) -> Result<TechniqueEntry, RecommendError> {
        schema.parse_entry(&self.profile)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("Feature profile\n");
        let mut facet = None;
        for (fa, g, on) in &self.groups {
            if facet != Some(fa) {
                let _ = writeln!(s, "  {fa}");
                facet = Some(fa);
            }
            let label = if g.is_empty() { "features" } else { g };
            let value = if on.is_empty() { "none".to_string() } else { on.join(", ") };
            let _ = writeln!(s, "    {label}: {value}");
        }
        s.push_str("\nPreferences\n");
        if self.skipped.is_empty() {
            s.push_str("  all preferences enforced\n");
        } else {
            let _ = writeln!(s, "  skipped: {}", self.skipped.join(", "));
        }
        let _ = writeln!(
            s,
            "  enforced: {}",
            if self.enforced.is_empty() { "none".into() } else { self.enforced.join(", ") }
        );
        s.push_str("\nNearest techniques\n");
        if self.neighbors.is_empty() {
            s.push_str("  none registered\n");
        }
        for (i, n) in self.neighbors.iter().enumerate() {
            let year = n.year.map(|y| format!(" ({y})")).unwrap_or_default();
            let _ = writeln!(s, "  [{}] {}{}", i + 1, n.id, year);
            if !n.title.is_empty() {
                let _ = writeln!(s, "      {}", n.title);
            }
            let _ = writeln!(s, "      distance: {}", n.distance);
            if !n.relax.is_empty() {
                let _ = writeln!(s, "      relax: {}", n.relax.join(", "));
            }
            if !n.extend.is_empty() {
                let _ = writeln!(s, "      extend: {}", n.extend.join(", "));
            }
        }
        s
    }
}
