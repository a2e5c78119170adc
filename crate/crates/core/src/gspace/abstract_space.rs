//! Stratified spaces given as data: strata with stabilizers, the
//! specialization pairs, and the limit subgroups for each pair.

use std::collections::{BTreeMap, BTreeSet};

use super::{Model, PointDescriptor, StratifiedGSpace, Stratum};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

#[derive(Clone, Debug)]
pub struct AbstractStratum {
    pub id: String,
    pub stabilizer: Subgroup,
    pub principal: bool,
}

/// Points of `source` accumulate at `target` with stabilizers converging to
/// each of `subgroups`.
#[derive(Clone, Debug)]
pub struct AbstractLimit {
    pub source: String,
    pub target: String,
    pub subgroups: Vec<Subgroup>,
}

pub fn build_abstract_space(
    g: FiniteGroup,
    strata: Vec<AbstractStratum>,
    limits: Vec<AbstractLimit>,
) -> Result<StratifiedGSpace> {
    if strata.is_empty() {
        return Err(Error::Space("an abstract space needs at least one stratum".into()));
    }
    let mut strata = strata;
    strata.sort_by(|a, b| a.id.cmp(&b.id));
    for w in strata.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::Space(format!("duplicate stratum id '{}'", w[0].id)));
        }
    }
    for s in &strata {
        if !s.stabilizer.belongs_to(&g) {
            return Err(Error::Space(format!("stabilizer of '{}' is not a subgroup of G", s.id)));
        }
    }
    let index = |id: &str| {
        strata.iter().position(|s| s.id == id).ok_or_else(|| Error::Space(format!("unknown stratum '{id}'")))
    };

    let mut admissible: BTreeMap<(usize, usize), Vec<Subgroup>> = BTreeMap::new();
    for limit in &limits {
        let key = (index(&limit.source)?, index(&limit.target)?);
        if admissible.contains_key(&key) {
            return Err(Error::Space(format!("limits for {} -> {} listed twice", limit.source, limit.target)));
        }
        let mut hs = limit.subgroups.clone();
        hs.sort();
        hs.dedup();
        admissible.insert(key, hs);
    }
    let specializations: BTreeSet<(usize, usize)> = admissible.keys().copied().collect();

    let space = StratifiedGSpace {
        subgroups: g.all_subgroups()?,
        group: g,
        model: Model::Abstract,
        strata: strata
            .into_iter()
            .map(|s| Stratum {
                basepoint: PointDescriptor::Abstract(s.id.clone()),
                id: s.id,
                stabilizer: s.stabilizer,
                is_principal: s.principal,
                dim: None,
            })
            .collect(),
        specializations,
        admissible,
        arrangement: None,
    };
    space.validate()?;
    Ok(space)
}
