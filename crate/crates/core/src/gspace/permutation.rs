//! `G ≤ S_n` permuting coordinates of `ℝⁿ`. Strata are G-orbits of
//! coordinate-coincidence patterns (set partitions of the coordinates).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Model, PointDescriptor, Rational, StratifiedGSpace, Stratum};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Permutation, Subgroup};

const MAX_DEGREE: usize = 10;

/// A set partition as a restricted growth string: `labels[i]` is the block
/// of coordinate `i`, blocks numbered by first appearance.
type Pattern = Vec<usize>;

fn canonical(labels: &[usize]) -> Pattern {
    let mut rename = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = rename.len();
            *rename.entry(*l).or_insert(next)
        })
        .collect()
}

fn all_patterns(n: usize) -> Vec<Pattern> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(n: usize, current: &mut Vec<usize>, max: usize, out: &mut Vec<Pattern>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        let limit = if current.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            current.push(b);
            rec(n, current, max.max(b), out);
            current.pop();
        }
    }
    rec(n, &mut current, 0, &mut out);
    out
}

/// Pattern of `g·x` when `x` has pattern `p`.
fn act(g: &Permutation, p: &[usize]) -> Pattern {
    let mut labels = vec![0; p.len()];
    for (i, &l) in p.iter().enumerate() {
        labels[g.apply(i)] = l;
    }
    canonical(&labels)
}

/// `p` refines `q`: every block of `p` lies inside a block of `q`.
fn refines(p: &[usize], q: &[usize]) -> bool {
    (0..p.len()).all(|i| (0..p.len()).all(|j| p[i] != p[j] || q[i] == q[j]))
}

fn block_count(p: &[usize]) -> usize {
    p.iter().max().map_or(0, |m| m + 1)
}

fn pattern_stabilizer(g: &FiniteGroup, p: &[usize]) -> Subgroup {
    let members = (0..g.order()).filter(|&x| (0..p.len()).all(|i| p[g.element(x).apply(i)] == p[i])).collect();
    g.subgroup_from_members(members).expect("block stabilizers are subgroups")
}

fn pattern_id(p: &[usize]) -> String {
    let blocks: Vec<String> = (0..block_count(p))
        .map(|b| {
            let members: Vec<String> = (0..p.len()).filter(|&i| p[i] == b).map(|i| i.to_string()).collect();
            members.join(",")
        })
        .collect();
    format!("perm[{}]", blocks.join("|"))
}

fn pattern_of(x: &[Rational]) -> Pattern {
    let mut labels = Vec::with_capacity(x.len());
    for (i, xi) in x.iter().enumerate() {
        let label = (0..i).find(|&j| x[j] == *xi).map_or(i, |j| labels[j]);
        labels.push(label);
    }
    canonical(&labels)
}

pub fn build_permutation_space(g: FiniteGroup) -> Result<StratifiedGSpace> {
    let n = g.degree();
    if n > MAX_DEGREE {
        return Err(Error::Space(format!("permutation model supports degree <= {MAX_DEGREE}, got {n}")));
    }
    let subgroups = g.all_subgroups()?;

    // G-orbits of patterns, each represented by its smallest pattern
    let mut orbit_of: BTreeMap<Pattern, usize> = BTreeMap::new();
    let mut orbits: Vec<Vec<Pattern>> = Vec::new();
    for p in all_patterns(n) {
        if orbit_of.contains_key(&p) {
            continue;
        }
        let members: BTreeSet<Pattern> = g.elements().iter().map(|x| act(x, &p)).collect();
        for m in &members {
            orbit_of.insert(m.clone(), orbits.len());
        }
        orbits.push(members.into_iter().collect());
    }

    let mut strata: Vec<(Stratum, Vec<Pattern>)> = orbits
        .into_iter()
        .map(|members| {
            let rep = members[0].clone();
            let stratum = Stratum {
                id: pattern_id(&rep),
                stabilizer: pattern_stabilizer(&g, &rep),
                basepoint: PointDescriptor::Euclidean(rep.iter().map(|&l| Rational::from_integer(l as i64)).collect()),
                is_principal: block_count(&rep) == n,
                dim: Some(block_count(&rep)),
            };
            (stratum, members)
        })
        .collect();
    strata.sort_by(|a, b| a.0.id.cmp(&b.0.id));

    let mut specializations = BTreeSet::new();
    let mut admissible: BTreeMap<(usize, usize), Vec<Subgroup>> = BTreeMap::new();
    for (t, (target, target_members)) in strata.iter().enumerate() {
        let rep = &target_members[0];
        for (s, (_, source_members)) in strata.iter().enumerate() {
            if s == t {
                continue;
            }
            let mut limits: Vec<Subgroup> = source_members
                .iter()
                .filter(|q| refines(q, rep))
                .map(|q| pattern_stabilizer(&g, q))
                .filter(|h| h.is_subgroup_of(&target.stabilizer))
                .collect();
            if limits.is_empty() {
                continue;
            }
            limits.sort();
            limits.dedup();
            specializations.insert((s, t));
            admissible.insert((s, t), limits);
        }
    }

    let space = StratifiedGSpace {
        group: g,
        model: Model::Permutation,
        strata: strata.into_iter().map(|(s, _)| s).collect(),
        specializations,
        admissible,
        subgroups,
        arrangement: None,
    };
    space.validate()?;
    Ok(space)
}

pub(super) fn locate(space: &StratifiedGSpace, point: &PointDescriptor) -> Result<usize> {
    let PointDescriptor::Euclidean(x) = point else { unreachable!() };
    let p = pattern_of(x);
    let g = space.group();
    g.elements()
        .iter()
        .map(|e| act(e, &p))
        .find_map(|q| {
            let id = pattern_id(&q);
            space.stratum_index(&id)
        })
        .ok_or_else(|| Error::Internal(format!("no stratum contains {point}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| all_patterns(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn pattern_action_and_refinement() {
        let swap = Permutation::from_cycles(3, &[&[0, 2]]).unwrap();
        assert_eq!(act(&swap, &[0, 0, 1]), vec![0, 1, 1]);
        assert!(refines(&[0, 1, 2], &[0, 0, 1]));
        assert!(refines(&[0, 0, 1], &[0, 0, 0]));
        assert!(!refines(&[0, 1, 1], &[0, 0, 1]));
        assert_eq!(
            pattern_of(&[Rational::from_integer(5), Rational::from_integer(2), Rational::from_integer(5)]),
            vec![0, 1, 0]
        );
        assert_eq!(pattern_id(&[0, 0, 1]), "perm[0,1|2]");
    }
}
