use super::{FeatureLit, TechniqueEntry};

pub const DEFAULT_NEIGHBORS: usize = 3;

/// How a known technique must change to reach the recommendation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hop {
    /// The technique has the feature, the recommendation does not.
    Relax,
    /// The recommendation has a feature the technique rules out.
    Extend,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    /// Position in the registry.
    pub index: usize,
    pub id: String,
    /// Cube literals contradicted by the recommendation.
    pub distance: usize,
    /// Features the entry leaves unspecified.
    pub unspecified: usize,
    pub hops: Vec<(FeatureLit, Hop)>,
}

/// The `k` entries closest to `assignment`, ordered by distance, then by
/// fewer unspecified features, then by id.
pub fn nearest_techniques(assignment: &[bool], entries: &[TechniqueEntry], k: usize) -> Vec<Neighbor> {
    let mut all: Vec<Neighbor> = entries
        .iter()
        .enumerate()
        .map(|(index, e)| {
            let hops: Vec<(FeatureLit, Hop)> = e
                .cube
                .iter()
                .filter(|l| !l.holds(assignment))
                .map(|&l| (l, if l.positive { Hop::Relax } else { Hop::Extend }))
                .collect();
            Neighbor {
                index,
                id: e.id.clone(),
                distance: hops.len(),
                unspecified: assignment.len() - e.cube.len(),
                hops,
            }
        })
        .collect();
    all.sort_by(|a, b| (a.distance, a.unspecified, &a.id).cmp(&(b.distance, b.unspecified, &b.id)));
    all.truncate(k);
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str, cube: &[(usize, bool)]) -> TechniqueEntry {
        TechniqueEntry {
            id: id.into(),
            title: String::new(),
            year: None,
            cube: cube.iter().map(|&(f, p)| FeatureLit::new(f, p)).collect(),
        }
    }

    #[test]
    fn empty_registry() {
        assert!(nearest_techniques(&[true, false], &[], 3).is_empty());
    }

    #[test]
    fn satisfied_cube_ranks_first() {
        let a = [true, false, true];
        let es = [
            entry("far", &[(0, false), (2, false)]),
            entry("match", &[(0, true)]),
            entry("near", &[(1, true), (2, true)]),
        ];
        let n = nearest_techniques(&a, &es, 3);
        assert_eq!(n[0].id, "match");
        assert_eq!(n[0].distance, 0);
        assert_eq!(n[1].id, "near");
        assert_eq!(n[1].hops, vec![(FeatureLit::new(1, true), Hop::Relax)]);
        assert_eq!(n[2].hops[0].1, Hop::Extend);
    }

    #[test]
    fn ties_prefer_specific_entries_then_id() {
        let a = [false, false];
        let es = [entry("b", &[(0, false)]), entry("a", &[(0, false)]), entry("c", &[(0, false), (1, false)])];
        let ids: Vec<_> = nearest_techniques(&a, &es, 3).into_iter().map(|n| n.id).collect();
        assert_eq!(ids, ["c", "a", "b"]);
    }
}
