//! Catalog of the quotient orbifolds of the tabulated families, grouped into
//! orientation-preserving diffeomorphism classes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::classifier::{ClassifyError, CrossClass, DiffeoKey, Engine, FibrationCount, KeyClass};
use crate::duval::{self, Family, GroupError, GroupSpec, Quotient};
use crate::lens::{EquivalenceMode, LensSpace};
use crate::orbifold::FiberedOrbifold;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AtlasSource {
    pub group: GroupSpec,
    pub anti_hopf: bool,
}

impl std::fmt::Display for AtlasSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.group, if self.anti_hopf { "anti-hopf" } else { "hopf" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasClass {
    pub index: usize,
    pub count: FibrationCount,
    /// All fibrations for finite classes; the tabulated ones otherwise.
    pub fibrations: Vec<FiberedOrbifold>,
    pub key: Option<DiffeoKey>,
    pub sources: Vec<AtlasSource>,
}

#[derive(Debug, thiserror::Error)]
pub enum AtlasError {
    #[error("{origin}: {error}")]
    Group { origin: String, error: GroupError },
    #[error("{origin}: {error}")]
    Classify { origin: String, error: ClassifyError },
}

/// Grouping key: finite classes by their fibration set, infinite ones by a
/// canonical form of the lens key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum ClassId {
    Finite(Vec<FiberedOrbifold>),
    Cross(CrossClass),
    Infinite(KeyClass, LensSpace, (u64, u64), EquivalenceMode),
}

fn class_id(key: &DiffeoKey) -> ClassId {
    match key.cross {
        Some(c) => ClassId::Cross(c),
        // lens q is already canonical for the key's mode
        None => ClassId::Infinite(key.class, key.lens.clone(), key.iota, key.mode),
    }
}

/// Every tabulated quotient with group order at most `max_order`.
pub fn quotients(max_order: u64) -> Result<Vec<(AtlasSource, FiberedOrbifold)>, AtlasError> {
    let mut out = Vec::new();
    for family in Family::all().filter(|f| f.has_hopf_row()) {
        for group in duval::instances(family, max_order) {
            for anti_hopf in [false, true] {
                let q = if anti_hopf { duval::quotient_antihopf(&group) } else { duval::quotient_hopf(&group) };
                let q = q.map_err(|error| AtlasError::Group { origin: group.to_string(), error })?;
                if let Quotient::Fibration(f) = q {
                    out.push((AtlasSource { group, anti_hopf }, f));
                }
            }
        }
    }
    Ok(out)
}

/// Builds the atlas. Output order is deterministic: classes are sorted by
/// their grouping key and sources within a class by family and parameters.
pub fn atlas(engine: &Engine, max_order: u64) -> Result<Vec<AtlasClass>, AtlasError> {
    let entries = quotients(max_order)?;
    let classified: Vec<_> = entries
        .par_iter()
        .map(|(src, f)| {
            let err = |error| AtlasError::Classify { origin: src.to_string(), error };
            let closure = engine.closure(f).map_err(err)?;
            match closure.representatives.first() {
                None => {
                    let members: Vec<FiberedOrbifold> = closure.members.into_iter().collect();
                    Ok((ClassId::Finite(members), None))
                }
                Some(rep) => {
                    let key = crate::classifier::key_of_representative(rep).map_err(err)?;
                    Ok((class_id(&key), Some(key)))
                }
            }
        })
        .collect::<Result<_, AtlasError>>()?;

    let mut groups: BTreeMap<ClassId, (Option<DiffeoKey>, Vec<FiberedOrbifold>, Vec<AtlasSource>)> = BTreeMap::new();
    for ((src, f), (id, key)) in entries.into_iter().zip(classified) {
        let slot = groups.entry(id).or_insert_with(|| (None, Vec::new(), Vec::new()));
        // keep the smallest key seen so the printed one does not depend on order
        if let Some(k) = key {
            if slot.0.as_ref().map_or(true, |old| k < *old) {
                slot.0 = Some(k);
            }
        }
        slot.1.push(f);
        slot.2.push(src);
    }
    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(index, (id, (key, mut fibrations, mut sources)))| {
            let count = match &id {
                ClassId::Finite(members) => {
                    fibrations = members.clone();
                    match members.len() {
                        1 => FibrationCount::One,
                        2 => FibrationCount::Two,
                        _ => FibrationCount::Three,
                    }
                }
                _ => {
                    fibrations.sort();
                    fibrations.dedup();
                    FibrationCount::Infinite
                }
            };
            sources.sort();
            sources.dedup();
            AtlasClass { index, count, fibrations, key, sources }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_atlas_is_consistent() {
        let engine = Engine::default();
        let classes = atlas(&engine, 48).unwrap();
        assert!(!classes.is_empty());
        // every tabulated fibration in a class is diffeomorphic to the first
        for c in &classes {
            let first = &c.fibrations[0];
            for g in &c.fibrations[1..] {
                assert!(engine.are_diffeomorphic(first, g).unwrap(), "{first} vs {g}");
            }
        }
        // and representatives of different classes are not; closures are
        // computed once per class since the pairwise check is quadratic
        let sigs: Vec<_> = classes
            .iter()
            .map(|c| {
                let closure = engine.closure(&c.fibrations[0]).unwrap();
                let key = closure.representatives.first().map(|r| crate::classifier::key_of_representative(r).unwrap());
                (closure.members, key)
            })
            .collect();
        for (i, (ma, ka)) in sigs.iter().enumerate() {
            for (mb, kb) in &sigs[i + 1..] {
                match (ka, kb) {
                    (Some(a), Some(b)) => assert!(!a.equivalent(b), "{a} ~ {b}"),
                    (None, None) => assert!(ma.is_disjoint(mb)),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let engine = Engine::default();
        assert_eq!(atlas(&engine, 60).unwrap(), atlas(&engine, 60).unwrap());
    }
}
