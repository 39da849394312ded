use modelacq_logic::{compile_ddnnf, solve_sat, Cnf, Ddnnf};

use super::{FeatureLit, FeatureSchema, RecommendError, TechniqueEntry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryVerdict {
    pub id: String,
    pub consistent: bool,
    /// A minimal set of constraints the cube cannot satisfy together.
    pub violated: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub verdicts: Vec<EntryVerdict>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.verdicts.iter().all(|v| v.consistent)
    }

    pub fn invalid(&self) -> impl Iterator<Item = &EntryVerdict> {
        self.verdicts.iter().filter(|v| !v.consistent)
    }
}

fn cube_with(schema: &FeatureSchema, cube: &[FeatureLit], constraints: &[usize]) -> Cnf {
    let mut cnf = Cnf::new(schema.len());
    for &c in constraints {
        for cl in schema.constraints()[c].clauses() {
            cnf.add_clause(cl.iter().map(|l| l.to_lit())).expect("in range");
        }
    }
    for l in cube {
        cnf.add_clause([l.to_lit()]).expect("in range");
    }
    cnf
}

/// Checks each entry's cube against the constraints. Inconsistent entries
/// name a minimal conflicting subset of constraints.
pub fn validate_registry(schema: &FeatureSchema, entries: &[TechniqueEntry]) -> ValidationReport {
    let all: Vec<usize> = (0..schema.constraints().len()).collect();
    let verdicts = entries
        .iter()
        .map(|e| {
            if solve_sat(&cube_with(schema, &e.cube, &all)).is_some() {
                return EntryVerdict {
                    id: e.id.clone(),
                    consistent: true,
                    violated: Vec::new(),
                };
            }
            // deletion-based shrinking to a minimal unsatisfiable subset
            let mut core = all.clone();
            let mut i = 0;
            while i < core.len() {
                let mut rest = core.clone();
                rest.remove(i);
                if solve_sat(&cube_with(schema, &e.cube, &rest)).is_none() {
                    core = rest;
                } else {
                    i += 1;
                }
            }
            EntryVerdict {
                id: e.id.clone(),
                consistent: false,
                violated: core.iter().map(|&c| schema.constraints()[c].name.clone()).collect(),
            }
        })
        .collect();
    ValidationReport { verdicts }
}

/// `constraints ∧ ¬cube_1 ∧ … ∧ ¬cube_n`; each negated cube is one clause.
pub fn build_theory(schema: &FeatureSchema, entries: &[TechniqueEntry]) -> Cnf {
    let mut cnf = schema.to_cnf();
    for e in entries {
        if e.cube.is_empty() {
            cnf.add_empty_clause(None);
        } else {
            cnf.add_clause(e.cube.iter().map(|l| l.negate().to_lit()))
                .expect("in range");
        }
    }
    cnf
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recommendation {
    /// One value per feature.
    pub assignment: Vec<bool>,
    pub enforced: Vec<FeatureLit>,
    pub skipped: Vec<FeatureLit>,
}

/// Compiles the theory, enforces each preference that is still consistent,
/// and returns the lexicographically smallest remaining model (false before
/// true, in feature order).
pub fn recommend(
    schema: &FeatureSchema,
    entries: &[TechniqueEntry],
    prefs: &[FeatureLit],
) -> Result<Recommendation, RecommendError> {
    let theory = build_theory(schema, entries);
    let mut s: Ddnnf = compile_ddnnf(&theory).map_err(|_| RecommendError::TooManyFeatures(schema.len()))?;
    if s.count_models() == 0 {
        return Err(RecommendError::FieldSaturated);
    }
    let (mut enforced, mut skipped) = (Vec::new(), Vec::new());
    for &p in prefs {
        let c = s.condition(p.to_lit());
        if c.count_models() > 0 {
            s = c;
            enforced.push(p);
        } else {
            skipped.push(p);
        }
    }
    let mut assignment = Vec::with_capacity(schema.len());
    for f in 0..schema.len() {
        let neg = s.condition(FeatureLit::new(f, false).to_lit());
        if neg.count_models() > 0 {
            s = neg;
            assignment.push(false);
        } else {
            s = s.condition(FeatureLit::new(f, true).to_lit());
            assignment.push(true);
        }
    }
    Ok(Recommendation {
        assignment,
        enforced,
        skipped,
    })
}

fn sat_with(theory: &Cnf, units: &[FeatureLit]) -> Option<Vec<bool>> {
    let mut cnf = theory.clone();
    for l in units {
        cnf.add_clause([l.to_lit()]).expect("in range");
    }
    solve_sat(&cnf)
}

/// Same procedure as [`recommend`] with repeated SAT calls over accumulated
/// unit clauses instead of a compiled theory.
pub fn recommend_sat(
    schema: &FeatureSchema,
    entries: &[TechniqueEntry],
    prefs: &[FeatureLit],
) -> Result<Recommendation, RecommendError> {
    let theory = build_theory(schema, entries);
    if solve_sat(&theory).is_none() {
        return Err(RecommendError::FieldSaturated);
    }
    let (mut units, mut enforced, mut skipped) = (Vec::new(), Vec::new(), Vec::new());
    for &p in prefs {
        units.push(p);
        if sat_with(&theory, &units).is_some() {
            enforced.push(p);
        } else {
            units.pop();
            skipped.push(p);
        }
    }
    let mut assignment = Vec::with_capacity(schema.len());
    for f in 0..schema.len() {
        units.push(FeatureLit::new(f, false));
        if sat_with(&theory, &units).is_some() {
            assignment.push(false);
        } else {
            units.pop();
            units.push(FeatureLit::new(f, true));
            assignment.push(true);
        }
    }
    Ok(Recommendation {
        assignment,
        enforced,
        skipped,
    })
}

/// Replays the preference pass with a SAT solver and checks that every
/// enforced preference was consistent at its turn, every skipped one was
/// not, and the assignment honours the enforced ones.
pub fn replay_preferences(
    schema: &FeatureSchema,
    entries: &[TechniqueEntry],
    prefs: &[FeatureLit],
    rec: &Recommendation,
) -> Result<(), String> {
    let theory = build_theory(schema, entries);
    let mut units = Vec::new();
    let (mut e, mut s) = (rec.enforced.iter(), rec.skipped.iter());
    for &p in prefs {
        units.push(p);
        if sat_with(&theory, &units).is_some() {
            if e.next() != Some(&p) {
                return Err(format!("{} was consistent but not enforced", schema.lit_name(p)));
            }
        } else {
            units.pop();
            if s.next() != Some(&p) {
                return Err(format!("{} was inconsistent but not skipped", schema.lit_name(p)));
            }
        }
    }
    if e.next().is_some() || s.next().is_some() {
        return Err("recommendation lists preferences that were not given".into());
    }
    if let Some(p) = rec.enforced.iter().find(|p| !p.holds(&rec.assignment)) {
        return Err(format!("assignment drops enforced {}", schema.lit_name(*p)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recommender::{Constraint, ConstraintKind, Taxonomy};

    fn lit(f: usize, p: bool) -> FeatureLit {
        FeatureLit::new(f, p)
    }

    fn entry(id: &str, cube: Vec<FeatureLit>) -> TechniqueEntry {
        TechniqueEntry {
            id: id.into(),
            title: String::new(),
            year: None,
            cube,
        }
    }

    fn partial_needs_full() -> FeatureSchema {
        // f0 = full, f1 = partial
        FeatureSchema::anonymous(
            2,
            vec![Constraint {
                name: "partial_needs_full".into(),
                kind: ConstraintKind::Clause,
                lits: vec![lit(1, false), lit(0, true)],
            }],
        )
        .unwrap()
    }

    #[test]
    fn partial_without_full_is_flagged() {
        let s = partial_needs_full();
        let r = validate_registry(&s, &[entry("bad", vec![lit(1, true), lit(0, false)])]);
        assert!(!r.is_valid());
        assert_eq!(r.verdicts[0].violated, vec!["partial_needs_full".to_string()]);
    }

    #[test]
    fn empty_cube_is_valid() {
        let s = partial_needs_full();
        assert!(validate_registry(&s, &[entry("e", vec![])]).is_valid());
    }

    #[test]
    fn no_entries_theory_is_constraints() {
        let s = partial_needs_full();
        assert_eq!(build_theory(&s, &[]), s.to_cnf());
    }

    #[test]
    fn full_cube_is_excluded() {
        let s = partial_needs_full();
        let m = [true, true];
        let t = build_theory(&s, &[entry("e", vec![lit(0, true), lit(1, true)])]);
        assert!(!t.satisfies_hard(&m));
    }

    #[test]
    fn saturated_field() {
        let s = FeatureSchema::anonymous(1, Vec::new()).unwrap();
        let entries = [entry("a", vec![lit(0, true)]), entry("b", vec![lit(0, false)])];
        assert!(matches!(recommend(&s, &entries, &[]), Err(RecommendError::FieldSaturated)));
        assert!(matches!(recommend_sat(&s, &entries, &[]), Err(RecommendError::FieldSaturated)));
    }

    #[test]
    fn consistent_preferences_are_all_enforced() {
        let s = partial_needs_full();
        let prefs = [lit(1, true), lit(0, true)];
        let r = recommend(&s, &[], &prefs).unwrap();
        assert_eq!(r.enforced, prefs);
        assert!(r.skipped.is_empty());
        assert_eq!(r.assignment, vec![true, true]);
    }

    #[test]
    fn shipped_taxonomy_recommendation() {
        let t = Taxonomy::shipped();
        assert!(validate_registry(&t.schema, &t.entries).is_valid());
        let r = recommend(&t.schema, &t.entries, &t.preferences).unwrap();
        assert!(t.schema.satisfies(&r.assignment));
        assert!(t.entries.iter().all(|e| !e.matches(&r.assignment)));
        replay_preferences(&t.schema, &t.entries, &t.preferences, &r).unwrap();
        assert_eq!(recommend_sat(&t.schema, &t.entries, &t.preferences).unwrap(), r);
    }

    #[test]
    fn reversed_order_is_also_greedy_maximal() {
        let t = Taxonomy::shipped();
        let rev: Vec<_> = t.preferences.iter().rev().copied().collect();
        let r = recommend(&t.schema, &t.entries, &rev).unwrap();
        replay_preferences(&t.schema, &t.entries, &rev, &r).unwrap();
    }

    #[test]
    fn replay_detects_tampering() {
        let s = partial_needs_full();
        let prefs = [lit(1, true), lit(0, false)];
        let mut r = recommend(&s, &[], &prefs).unwrap();
        assert_eq!(r.skipped, vec![lit(0, false)]);
        r.enforced.push(r.skipped.pop().unwrap());
        assert!(replay_preferences(&s, &[], &prefs, &r).is_err());
    }
}
