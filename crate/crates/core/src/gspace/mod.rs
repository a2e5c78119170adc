//! G-spaces as orbit-type stratifications.
//!
//! A [`StratifiedGSpace`] lists one stratum per G-orbit of "pieces" (maximal
//! sets of points sharing a stabilizer and lying on the same flat of the
//! fixed-point arrangement), the specialization order between strata, and
//! for every specialization the subgroups that occur as limits of
//! stabilizers along sequences from the source stratum into the target.
//!
//! For the concrete models the limit subgroups come from the linearised
//! action of `S_z` at a basepoint `z`: a point `z + εd` with small `ε` has
//! stabilizer `{g ∈ S_z : g d = d}`, and the stabilizers of generic
//! directions in `Fix(H)` are exactly the closures
//! `cl(H) = {g ∈ S_z : g acts trivially on Fix(H)}`. The admissible-limit
//! structure is assumed constant along a stratum, which holds for both
//! concrete models since their actions are affine.

mod abstract_space;
pub mod linalg;
mod permutation;
pub mod point;
mod torus;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, IntMatrix, Subgroup};

pub use abstract_space::{build_abstract_space, AbstractLimit, AbstractStratum};
pub use permutation::build_permutation_space;
pub use point::{PointDescriptor, Rational};
pub use torus::build_torus_space;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// `G ≤ S_n` permuting the coordinates of `ℝⁿ`.
    Permutation,
    /// A finite subgroup of `GL₂(ℤ)` acting on `(ℝ/ℤ)²`.
    Torus,
    /// Strata, specializations and limit subgroups supplied as data.
    Abstract,
}

#[derive(Clone, Debug)]
pub struct Stratum {
    pub id: String,
    pub stabilizer: Subgroup,
    pub basepoint: PointDescriptor,
    pub is_principal: bool,
    pub dim: Option<usize>,
}

/// A stabilizer occurring along a ray `z + εd`, with a generic direction.
#[derive(Clone, Debug)]
pub struct DirectionClass {
    pub subgroup: Subgroup,
    pub direction: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct StratifiedGSpace {
    group: FiniteGroup,
    model: Model,
    strata: Vec<Stratum>,
    specializations: BTreeSet<(usize, usize)>,
    admissible: BTreeMap<(usize, usize), Vec<Subgroup>>,
    subgroups: Vec<Subgroup>,
    arrangement: Option<torus::Arrangement>,
}

impl StratifiedGSpace {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum(&self, index: usize) -> &Stratum {
        &self.strata[index]
    }

    pub fn stratum_index(&self, id: &str) -> Option<usize> {
        self.strata.iter().position(|s| s.id == id)
    }

    /// Pairs `(source, target)` of stratum indices; points of the source
    /// accumulate at the target.
    pub fn specializations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.specializations.iter().copied()
    }

    pub fn admissible_limits(&self, source: usize, target: usize) -> Option<&[Subgroup]> {
        self.admissible.get(&(source, target)).map(Vec::as_slice)
    }

    /// Every subgroup of `G`, sorted.
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// Linear part of the action of `g`.
    pub fn tangent_matrix(&self, g: usize) -> Option<IntMatrix> {
        match self.model {
            Model::Permutation => Some(IntMatrix::permutation(self.group.element(g))),
            Model::Torus => self.group.matrix(g).cloned(),
            Model::Abstract => None,
        }
    }

    pub fn act(&self, g: usize, point: &PointDescriptor) -> Result<PointDescriptor> {
        self.check_point(point)?;
        match point {
            PointDescriptor::Euclidean(x) => {
                // (g·x)_{g(i)} = x_i
                let p = self.group.element(g);
                let mut y = vec![Rational::zero(); x.len()];
                for (i, xi) in x.iter().enumerate() {
                    y[p.apply(i)] = *xi;
                }
                Ok(PointDescriptor::Euclidean(y))
            }
            PointDescriptor::Torus(x) => {
                let m = self.group.matrix(g).expect("torus model carries matrices");
                Ok(PointDescriptor::torus(linalg::mat_vec(&m.rows(), x)))
            }
            PointDescriptor::Abstract(_) => Ok(point.clone()),
        }
    }

    pub fn check_point(&self, point: &PointDescriptor) -> Result<()> {
        let ok = match (self.model, point) {
            (Model::Permutation, PointDescriptor::Euclidean(x)) => x.len() == self.group.degree(),
            (Model::Torus, PointDescriptor::Torus(x)) => x.len() == 2 && x.iter().all(|c| c.floor().is_zero()),
            (Model::Abstract, PointDescriptor::Abstract(id)) => self.stratum_index(id).is_some(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Point(format!("{point} is not a point of this {:?} space", self.model)))
        }
    }

    /// `S_x = {g : g·x = x}`.
    pub fn stabilizer(&self, point: &PointDescriptor) -> Result<Subgroup> {
        self.check_point(point)?;
        if let PointDescriptor::Abstract(id) = point {
            return Ok(self.strata[self.stratum_index(id).unwrap()].stabilizer.clone());
        }
        let mut members = Vec::new();
        for g in 0..self.group.order() {
            if self.act(g, point)? == *point {
                members.push(g);
            }
        }
        self.group.subgroup_from_members(members)
    }

    /// Index of the stratum containing a point.
    pub fn locate(&self, point: &PointDescriptor) -> Result<usize> {
        self.check_point(point)?;
        match self.model {
            Model::Permutation => permutation::locate(self, point),
            Model::Torus => self.arrangement.as_ref().expect("torus arrangement").locate(point),
            Model::Abstract => match point {
                PointDescriptor::Abstract(id) => Ok(self.stratum_index(id).unwrap()),
                _ => unreachable!(),
            },
        }
    }

    /// Stabilizers of the rays leaving `point`, with a generic direction for
    /// each. Includes `S_z` itself whenever some direction is fixed by all
    /// of `S_z`.
    pub fn direction_classes(&self, point: &PointDescriptor) -> Result<Vec<DirectionClass>> {
        if self.model == Model::Abstract {
            return Err(Error::Space("abstract models have no tangent directions".into()));
        }
        let s = self.stabilizer(point)?;
        let dim = self.tangent_matrix(0).map_or(0, |m| m.dim());
        let displacement = |g: usize| -> Vec<Vec<Rational>> {
            let m = self.tangent_matrix(g).unwrap();
            (0..dim)
                .map(|i| (0..dim).map(|j| Rational::from_integer(m.get(i, j) - i64::from(i == j))).collect())
                .collect()
        };
        let fixes_all = |g: usize, basis: &[Vec<Rational>]| {
            let a = displacement(g);
            basis.iter().all(|b| a.iter().all(|row| row.iter().zip(b).map(|(x, y)| x * y).sum::<Rational>().is_zero()))
        };

        let mut out: Vec<DirectionClass> = Vec::new();
        for h in self.subgroups.iter().filter(|h| h.is_subgroup_of(&s)) {
            let rows: Vec<Vec<Rational>> = h.members().iter().flat_map(|&x| displacement(x)).collect();
            let basis = linalg::null_space(&rows, dim);
            if basis.is_empty() {
                continue;
            }
            let closure: Vec<usize> = s.members().iter().copied().filter(|&g| fixes_all(g, &basis)).collect();
            let closure = self.group.subgroup_from_members(closure)?;
            if out.iter().any(|c| c.subgroup == closure) {
                continue;
            }
            let direction = generic_direction(&basis, &closure, &s, |g, d| fixes_all(g, &[d.to_vec()]))
                .ok_or_else(|| Error::Internal("no generic direction found".into()))?;
            out.push(DirectionClass { subgroup: closure, direction });
        }
        out.sort_by(|a, b| a.subgroup.cmp(&b.subgroup));
        Ok(out)
    }

    /// Subgroups `H ≤ S_x` arising as limits of stabilizers along sequences
    /// converging to `x` (constant sequences included, so `S_x` is always
    /// present).
    pub fn admissible_limits_at(&self, point: &PointDescriptor) -> Result<Vec<Subgroup>> {
        let mut out: Vec<Subgroup> = match self.model {
            Model::Abstract => {
                let z = self.locate(point)?;
                self.admissible.iter().filter(|((_, t), _)| *t == z).flat_map(|(_, hs)| hs.iter().cloned()).collect()
            }
            _ => self.direction_classes(point)?.into_iter().map(|c| c.subgroup).collect(),
        };
        out.push(self.stabilizer(point)?);
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn admissible_limit_subgroups(&self, stratum: usize) -> Result<Vec<Subgroup>> {
        self.admissible_limits_at(&self.strata[stratum].basepoint)
    }

    /// The conjugacy class (by a representative) of the principal
    /// stabilizer, if there is one.
    pub fn principal_orbit_type(&self) -> Result<Option<Subgroup>> {
        let flagged: Vec<&Stratum> = self.strata.iter().filter(|s| s.is_principal).collect();
        let Some(first) = flagged.first() else {
            return Ok(None);
        };
        for other in &flagged[1..] {
            if self.group.are_conjugate(&first.stabilizer, &other.stabilizer)?.is_none() {
                return Err(Error::Space(format!(
                    "strata {} and {} are both principal with non-conjugate stabilizers",
                    first.id, other.id
                )));
            }
        }
        Ok(Some(first.stabilizer.clone()))
    }

    /// Checks the structural invariants shared by all models.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        for (a, b) in self.specializations() {
            if a == b || self.specializations.contains(&(b, a)) {
                return Err(Error::Space(format!(
                    "specialization between {} and {} is not antisymmetric",
                    self.strata[a].id, self.strata[b].id
                )));
            }
            for (c, d) in self.specializations() {
                if c == b && !self.specializations.contains(&(a, d)) {
                    return Err(Error::Space(format!(
                        "specializations are not transitively closed: {} -> {} is missing",
                        self.strata[a].id, self.strata[d].id
                    )));
                }
            }
            let limits = self.admissible.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[]);
            if limits.is_empty() {
                return Err(Error::Space(format!(
                    "no admissible limit subgroups for {} -> {}",
                    self.strata[a].id, self.strata[b].id
                )));
            }
            for h in limits {
                if !h.is_subgroup_of(&self.strata[b].stabilizer) {
                    return Err(Error::Space(format!(
                        "a limit subgroup for {} is not inside its stabilizer",
                        self.strata[b].id
                    )));
                }
                if g.are_conjugate(h, &self.strata[a].stabilizer)?.is_none() {
                    return Err(Error::Space(format!(
                        "a limit subgroup for {} -> {} is not conjugate to the source stabilizer",
                        self.strata[a].id, self.strata[b].id
                    )));
                }
            }
        }
        if self.admissible.keys().any(|k| !self.specializations.contains(k)) {
            return Err(Error::Space("admissible limits listed for a pair that is not a specialization".into()));
        }
        self.principal_orbit_type()?;
        if self.model != Model::Abstract {
            for s in &self.strata {
                if self.stabilizer(&s.basepoint)? != s.stabilizer {
                    return Err(Error::Internal(format!("basepoint of {} has the wrong stabilizer", s.id)));
                }
            }
        }
        Ok(())
    }

    /// Fills the admissible-limit map of a concrete model by sampling one
    /// generic ray per direction class at each stratum basepoint.
    fn admissible_by_sampling(&mut self) -> Result<()> {
        let mut admissible: BTreeMap<(usize, usize), Vec<Subgroup>> = BTreeMap::new();
        for (target, stratum) in self.strata.iter().enumerate() {
            for class in self.direction_classes(&stratum.basepoint)? {
                // shrink the step until the sample sees exactly the ray stabilizer
                let mut sample = None;
                for k in 3..16 {
                    let p = stratum.basepoint.offset(&class.direction, Rational::new(1, 1 << k))?;
                    if self.stabilizer(&p)? == class.subgroup {
                        sample = Some(p);
                        break;
                    }
                }
                let sample = sample.ok_or_else(|| {
                    Error::Internal(format!("no sample along a ray from {} realises its stabilizer", stratum.id))
                })?;
                let source = self.locate(&sample)?;
                if source != target {
                    admissible.entry((source, target)).or_default().push(class.subgroup);
                }
            }
        }
        for v in admissible.values_mut() {
            v.sort();
            v.dedup();
        }
        self.admissible = admissible;
        Ok(())
    }
}

/// A vector of the span of `basis` whose stabilizer in `s` is exactly
/// `closure`, scaled so that its largest coordinate has absolute value 1.
fn generic_direction<F>(basis: &[Vec<Rational>], closure: &Subgroup, s: &Subgroup, fixes: F) -> Option<Vec<Rational>>
where
    F: Fn(usize, &[Rational]) -> bool,
{
    const PRIMES: [i64; 16] = [1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let n = basis[0].len();
    for shift in 0..PRIMES.len() {
        let mut d = vec![Rational::zero(); n];
        for (i, b) in basis.iter().enumerate() {
            let c = Rational::new(1, PRIMES[(i + shift) % PRIMES.len()]);
            for (x, y) in d.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        let scale = point::abs_max(&d);
        if scale.is_zero() {
            continue;
        }
        for x in d.iter_mut() {
            *x /= scale;
        }
        let stab: Vec<usize> = s.members().iter().copied().filter(|&g| fixes(g, &d)).collect();
        if stab == closure.members() {
            return Some(d);
        }
    }
    None
}
