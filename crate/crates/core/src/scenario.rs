//! Scenario files: a group, a space model, optional data, oracle settings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chars::{CharacterTable, C64};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, IntMatrix, Permutation, Subgroup};
use crate::gspace::point::serde_rational;
use crate::gspace::{
    build_abstract_space, build_permutation_space, build_torus_space, AbstractLimit, AbstractStratum, Model,
    PointDescriptor, Rational, StratifiedGSpace,
};
use crate::oracle::limit::{Profile, Sequence};

pub const SCENARIO_VERSION: u32 = 1;

/// A product of generators, `[i, j]` meaning `g_i·g_j`.
pub type Word = Vec<usize>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub group: GroupSpec,
    pub space: SpaceSpec,
    #[serde(default)]
    pub character_table: Option<TableSpec>,
    #[serde(default)]
    pub oracle: OracleSettings,
    #[serde(default)]
    pub sequences: Vec<SequenceSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub degree: usize,
    /// Each generator as its list of images.
    pub generators: Vec<Vec<usize>>,
    /// One integer matrix per generator.
    #[serde(default)]
    pub matrix_annotations: Option<Vec<Vec<Vec<i64>>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceSpec {
    Permutation,
    Torus,
    Abstract { strata: Vec<AbstractStratumSpec>, specializations: Vec<SpecializationSpec> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractStratumSpec {
    pub id: String,
    /// Generators of the stabilizer, as words.
    pub stabilizer: Vec<Word>,
    #[serde(default)]
    pub principal: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecializationSpec {
    pub source: String,
    pub target: String,
    /// Each limit subgroup by generator words.
    pub admissible_limits: Vec<Vec<Word>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub class_reps: Vec<Word>,
    pub rows: Vec<Vec<ComplexSpec>>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexSpec> for C64 {
    fn from(c: ComplexSpec) -> C64 {
        match c {
            ComplexSpec::Real(x) => C64::new(x, 0.0),
            ComplexSpec::Pair([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSettings {
    pub seed: u64,
    /// Random elements per trace-formula check.
    pub trials: usize,
    /// Random elements per decomposition check.
    pub decomposition_trials: usize,
    pub tolerances: Tolerances,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings { seed: 0, trials: 50, decomposition_trials: 20, tolerances: Tolerances::default() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    #[serde(default)]
    pub name: Option<String>,
    /// The limit point `z`.
    #[serde(with = "serde_rational::vec")]
    pub limit: Vec<Rational>,
    /// `x_n = limit + direction / n`.
    #[serde(default, with = "option_rational_vec")]
    pub direction: Option<Vec<Rational>>,
    #[serde(default)]
    pub n: Vec<u64>,
    /// Explicit terms, used instead of `direction` and `n`.
    #[serde(default)]
    pub points: Vec<RationalPoint>,
    /// Row of the sequence stabilizer's character table.
    #[serde(rename = "V", default)]
    pub v: usize,
    pub profile: Profile,
    #[serde(default = "default_batch")]
    pub batch: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalPoint(#[serde(with = "serde_rational::vec")] pub Vec<Rational>);

fn default_batch() -> usize {
    8
}

mod option_rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(xs) => serde_rational::vec::serialize(xs, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        Ok(Some(serde_rational::vec::deserialize(d)?))
    }
}

/// Everything a scenario describes, built and validated.
pub struct Built {
    pub space: StratifiedGSpace,
    pub group_table: Option<CharacterTable>,
    pub settings: OracleSettings,
    pub sequences: Vec<(String, Sequence, usize, Profile, usize)>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let scenario: Scenario = serde_json::from_str(text)?;
        if scenario.version != SCENARIO_VERSION {
            return Err(Error::Scenario(format!("unsupported scenario version {}", scenario.version)));
        }
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn group(&self) -> Result<FiniteGroup> {
        let spec = &self.group;
        let gens: Vec<Permutation> =
            spec.generators.iter().map(|im| Permutation::from_images(im.clone())).collect::<Result<_>>()?;
        for p in &gens {
            if p.degree() != spec.degree {
                return Err(Error::DegreeMismatch { expected: spec.degree, found: p.degree() });
            }
        }
        match &spec.matrix_annotations {
            Some(ms) => {
                let mats: Vec<IntMatrix> = ms.iter().map(|m| IntMatrix::new(m)).collect::<Result<_>>()?;
                FiniteGroup::from_annotated_generators(spec.degree, &gens, &mats)
            }
            None => FiniteGroup::from_generators(spec.degree, &gens),
        }
    }

    pub fn build(&self) -> Result<Built> {
        let g = self.group()?;
        let group_table = match &self.character_table {
            Some(t) => {
                let reps: Vec<usize> = t.class_reps.iter().map(|w| g.word(w)).collect::<Result<_>>()?;
                let rows: Vec<Vec<C64>> = t.rows.iter().map(|r| r.iter().map(|&c| c.into()).collect()).collect();
                Some(CharacterTable::from_supplied(&g, &reps, &rows, &self.oracle.tolerances)?)
            }
            None => None,
        };
        let space = match &self.space {
            SpaceSpec::Permutation => build_permutation_space(g)?,
            SpaceSpec::Torus => build_torus_space(g)?,
            SpaceSpec::Abstract { strata, specializations } => {
                let subgroup = |words: &[Word]| -> Result<Subgroup> {
                    let gens: Vec<usize> = words.iter().map(|w| g.word(w)).collect::<Result<_>>()?;
                    Ok(g.generate(&gens))
                };
                let strata = strata
                    .iter()
                    .map(|s| {
                        Ok(AbstractStratum {
                            id: s.id.clone(),
                            stabilizer: subgroup(&s.stabilizer)?,
                            principal: s.principal,
                        })
                    })
                    .collect::<Result<_>>()?;
                let limits = specializations
                    .iter()
                    .map(|s| {
                        Ok(AbstractLimit {
                            source: s.source.clone(),
                            target: s.target.clone(),
                            subgroups: s.admissible_limits.iter().map(|ws| subgroup(ws)).collect::<Result<_>>()?,
                        })
                    })
                    .collect::<Result<_>>()?;
                build_abstract_space(g.clone(), strata, limits)?
            }
        };
        let sequences = self
            .sequences
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let name = s.name.clone().unwrap_or_else(|| format!("sequence {i}"));
                Ok((name, s.to_sequence(space.model())?, s.v, s.profile.clone(), s.batch))
            })
            .collect::<Result<_>>()?;
        Ok(Built { space, group_table, settings: self.oracle.clone(), sequences })
    }
}

impl SequenceSpec {
    pub fn to_sequence(&self, model: Model) -> Result<Sequence> {
        let point = |coords: &[Rational]| -> Result<PointDescriptor> {
            match model {
                Model::Permutation => Ok(PointDescriptor::Euclidean(coords.to_vec())),
                Model::Torus => Ok(PointDescriptor::torus(coords.to_vec())),
                Model::Abstract => Err(Error::Scenario("sequences need a concrete space model".into())),
            }
        };
        let limit = point(&self.limit)?;
        match (&self.direction, self.points.is_empty()) {
            (Some(d), true) => {
                if self.n.is_empty() || self.n.contains(&0) {
                    return Err(Error::Scenario("a directed sequence needs positive indices n".into()));
                }
                Sequence::along(&limit, d, &self.n)
            }
            (None, false) => {
                let terms = self
                    .points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| Ok((i as u64 + 1, point(&p.0)?)))
                    .collect::<Result<_>>()?;
                Ok(Sequence { terms, limit })
            }
            _ => Err(Error::Scenario("give either direction and n, or explicit points".into())),
        }
    }
}

/// Scenarios shipped with the crate.
pub mod bundled {
    pub const S3_R3: &str = include_str!("../scenarios/s3_r3.json");
    pub const D4_T2: &str = include_str!("../scenarios/d4_t2.json");
    pub const Z2_TORUS: &str = include_str!("../scenarios/z2_torus.json");
    pub const S3_ABSTRACT: &str = include_str!("../scenarios/s3_abstract.json");

    pub const ALL: [(&str, &str); 4] =
        [("s3_r3", S3_R3), ("d4_t2", D4_T2), ("z2_torus", Z2_TORUS), ("s3_abstract", S3_ABSTRACT)];
}
