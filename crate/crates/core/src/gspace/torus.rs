//! A finite subgroup of `GL₂(ℤ)` acting on `T² = (ℝ/ℤ)²`.
//!
//! Fixed sets `Fix(g) = {x : (M_g − I)x ∈ ℤ²}` are finite unions of points
//! or of closed circles `{x : n·x ≡ c}`. The arrangement consists of the
//! whole torus, every such circle, and every point that is either isolated
//! in some `Fix(g)` or lies on two circles. A stratum is the G-orbit of the
//! set of points whose smallest containing flat is a given flat.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use super::linalg::{mat_vec, smith_normal_form};
use super::point::{format_rational, reduce_mod_one};
use super::{Model, PointDescriptor, Rational, StratifiedGSpace, Stratum};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// `{x ∈ T² : normal·x ≡ offset (mod 1)}` with a primitive normal whose
/// first non-zero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Circle {
    normal: [i64; 2],
    offset: Rational,
}

impl Circle {
    /// The circle through `base` with primitive integer direction `d`.
    fn through(base: &[Rational], d: [i64; 2]) -> Circle {
        let mut normal = [-d[1], d[0]];
        if normal[0] < 0 || (normal[0] == 0 && normal[1] < 0) {
            normal = [-normal[0], -normal[1]];
        }
        let offset = reduce_mod_one(base[0] * normal[0] + base[1] * normal[1]);
        Circle { normal, offset }
    }

    fn direction(&self) -> [i64; 2] {
        [self.normal[1], -self.normal[0]]
    }

    fn base(&self) -> Vec<Rational> {
        let e = i64::extended_gcd(&self.normal[0], &self.normal[1]);
        // e.gcd == 1 since the normal is primitive
        vec![self.offset * e.x, self.offset * e.y]
    }

    fn contains(&self, x: &[Rational]) -> bool {
        (x[0] * self.normal[0] + x[1] * self.normal[1] - self.offset).is_integer()
    }

    fn label(&self) -> String {
        let mut lhs = String::new();
        for (k, var) in self.normal.iter().zip(["x", "y"]) {
            if *k == 0 {
                continue;
            }
            if *k < 0 {
                lhs.push('-');
            } else if !lhs.is_empty() {
                lhs.push('+');
            }
            if k.abs() != 1 {
                lhs.push_str(&k.abs().to_string());
            }
            lhs.push_str(var);
        }
        format!("line({lhs}={})", format_rational(&self.offset))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Flat {
    Point(Vec<Rational>),
    Circle(Circle),
    Whole,
}

impl Flat {
    fn dim(&self) -> usize {
        match self {
            Flat::Point(_) => 0,
            Flat::Circle(_) => 1,
            Flat::Whole => 2,
        }
    }

    fn label(&self) -> String {
        match self {
            Flat::Point(x) => format!("pt({},{})", format_rational(&x[0]), format_rational(&x[1])),
            Flat::Circle(c) => c.label(),
            Flat::Whole => "generic".to_string(),
        }
    }

    /// `self ⊊ other`
    fn strictly_inside(&self, other: &Flat) -> bool {
        match (self, other) {
            (Flat::Point(x), Flat::Circle(c)) => c.contains(x),
            (Flat::Point(_) | Flat::Circle(_), Flat::Whole) => true,
            _ => false,
        }
    }
}

/// Flat pieces of the torus, each tagged with the index of its stratum.
#[derive(Clone, Debug)]
pub(crate) struct Arrangement {
    points: BTreeMap<Vec<Rational>, usize>,
    circles: Vec<(Circle, usize)>,
    whole: usize,
}

impl Arrangement {
    pub(crate) fn locate(&self, point: &PointDescriptor) -> Result<usize> {
        let PointDescriptor::Torus(x) = point else {
            return Err(Error::Point(format!("{point} is not a torus point")));
        };
        if let Some(&s) = self.points.get(x) {
            return Ok(s);
        }
        Ok(self.circles.iter().find(|(c, _)| c.contains(x)).map_or(self.whole, |(_, s)| *s))
    }
}

fn matrix_rows(g: &FiniteGroup, e: usize) -> Vec<Vec<i64>> {
    g.matrix(e).expect("checked annotations").rows()
}

fn act_point(m: &[Vec<i64>], x: &[Rational]) -> Vec<Rational> {
    mat_vec(m, x).into_iter().map(reduce_mod_one).collect()
}

fn act_flat(m: &[Vec<i64>], f: &Flat) -> Flat {
    match f {
        Flat::Point(x) => Flat::Point(act_point(m, x)),
        Flat::Circle(c) => {
            let d = c.direction();
            let md = [m[0][0] * d[0] + m[0][1] * d[1], m[1][0] * d[0] + m[1][1] * d[1]];
            Flat::Circle(Circle::through(&mat_vec(m, &c.base()), md))
        }
        Flat::Whole => Flat::Whole,
    }
}

fn flat_stabilizer(g: &FiniteGroup, f: &Flat) -> Result<Subgroup> {
    let members = (0..g.order())
        .filter(|&e| {
            let m = matrix_rows(g, e);
            match f {
                Flat::Point(x) => act_point(&m, x) == *x,
                Flat::Circle(c) => {
                    let d = c.direction();
                    let fixes_direction = (0..2).all(|i| m[i][0] * d[0] + m[i][1] * d[1] == d[i]);
                    fixes_direction && act_point(&m, &c.base()) == c.base()
                }
                Flat::Whole => g.matrix(e).unwrap().is_identity(),
            }
        })
        .collect();
    g.subgroup_from_members(members)
}

/// Isolated fixed points and fixed circles of one matrix.
fn fixed_flats(m: &[Vec<i64>], points: &mut BTreeSet<Vec<Rational>>, circles: &mut BTreeSet<Circle>) {
    let a: Vec<Vec<i64>> = (0..2).map(|i| (0..2).map(|j| m[i][j] - i64::from(i == j)).collect()).collect();
    let smith = smith_normal_form(&a);
    let (d1, d2) = (smith.diagonal[0], smith.diagonal[1]);
    let v = &smith.v;
    if d1 == 0 {
        return;
    }
    if d2 != 0 {
        for k1 in 0..d1 {
            for k2 in 0..d2 {
                let y = [Rational::new(k1, d1), Rational::new(k2, d2)];
                points.insert(mat_vec(v, &y).into_iter().map(reduce_mod_one).collect());
            }
        }
    } else {
        let direction = [v[0][1], v[1][1]];
        for k in 0..d1 {
            let t = Rational::new(k, d1);
            let base = vec![t * v[0][0], t * v[1][0]];
            circles.insert(Circle::through(&base, direction));
        }
    }
}

/// Points lying on both circles.
fn intersections(a: &Circle, b: &Circle) -> Vec<Vec<Rational>> {
    let det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
    if det == 0 {
        return Vec::new();
    }
    // N⁻¹ = adj(N) / det
    let adj = [[b.normal[1], -a.normal[1]], [-b.normal[0], a.normal[0]]];
    let n = det.abs();
    let mut out = BTreeSet::new();
    for k0 in 0..n {
        for k1 in 0..n {
            let rhs = [a.offset + k0, b.offset + k1];
            let x: Vec<Rational> =
                (0..2).map(|i| reduce_mod_one((rhs[0] * adj[i][0] + rhs[1] * adj[i][1]) / det)).collect();
            out.insert(x);
        }
    }
    out.into_iter().collect()
}

fn point_stabilizer(g: &FiniteGroup, x: &[Rational]) -> Vec<usize> {
    (0..g.order()).filter(|&e| act_point(&matrix_rows(g, e), x) == x).collect()
}

const SAMPLE_PRIMES: [i64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

fn generic_point_of(
    g: &FiniteGroup,
    flat: &Flat,
    stab: &Subgroup,
    points: &BTreeSet<Vec<Rational>>,
) -> Result<Vec<Rational>> {
    let candidates: Vec<Vec<Rational>> = match flat {
        Flat::Point(x) => vec![x.clone()],
        Flat::Circle(c) => {
            let (b, d) = (c.base(), c.direction());
            SAMPLE_PRIMES
                .iter()
                .map(|&p| {
                    let t = Rational::new(1, p);
                    vec![reduce_mod_one(b[0] + t * d[0]), reduce_mod_one(b[1] + t * d[1])]
                })
                .collect()
        }
        Flat::Whole => SAMPLE_PRIMES
            .iter()
            .zip(SAMPLE_PRIMES.iter().skip(3))
            .map(|(&p, &q)| vec![Rational::new(1, p), Rational::new(2, q)])
            .collect(),
    };
    candidates
        .into_iter()
        .find(|x| (flat.dim() == 0 || !points.contains(x)) && point_stabilizer(g, x) == stab.members())
        .ok_or_else(|| Error::Internal(format!("no generic point found on {}", flat.label())))
}

pub fn build_torus_space(g: FiniteGroup) -> Result<StratifiedGSpace> {
    let Some(matrices) = g.matrices() else {
        return Err(Error::Space("the torus model needs matrix annotations".into()));
    };
    for m in matrices {
        if m.dim() != 2 {
            return Err(Error::Space(format!("torus matrices must be 2x2, got {}x{}", m.dim(), m.dim())));
        }
        if m.determinant().abs() != 1 {
            return Err(Error::Space("torus matrices must have determinant ±1".into()));
        }
    }
    let subgroups = g.all_subgroups()?;

    let mut point_set = BTreeSet::new();
    let mut circle_set = BTreeSet::new();
    for e in 0..g.order() {
        fixed_flats(&matrix_rows(&g, e), &mut point_set, &mut circle_set);
    }
    let circle_list: Vec<Circle> = circle_set.iter().cloned().collect();
    for (i, a) in circle_list.iter().enumerate() {
        for b in &circle_list[i + 1..] {
            point_set.extend(intersections(a, b));
        }
    }

    let mut flats: Vec<Flat> = vec![Flat::Whole];
    flats.extend(circle_list.into_iter().map(Flat::Circle));
    flats.extend(point_set.iter().cloned().map(Flat::Point));
    let stabs: Vec<Subgroup> = flats.iter().map(|f| flat_stabilizer(&g, f)).collect::<Result<_>>()?;
    let kept: Vec<(Flat, Subgroup)> = flats
        .iter()
        .zip(&stabs)
        .filter(|(f, s)| !flats.iter().zip(&stabs).any(|(h, t)| f.strictly_inside(h) && t == *s))
        .map(|(f, s)| (f.clone(), s.clone()))
        .collect();
    let kept_points: BTreeSet<Vec<Rational>> = kept
        .iter()
        .filter_map(|(f, _)| match f {
            Flat::Point(x) => Some(x.clone()),
            _ => None,
        })
        .collect();

    // group the kept flats into G-orbits, represented by their least member
    let all_matrices: Vec<Vec<Vec<i64>>> = (0..g.order()).map(|e| matrix_rows(&g, e)).collect();
    let mut orbit_rep: BTreeMap<Flat, Flat> = BTreeMap::new();
    for (f, _) in &kept {
        if orbit_rep.contains_key(f) {
            continue;
        }
        let orbit: BTreeSet<Flat> = all_matrices.iter().map(|m| act_flat(m, f)).collect();
        let rep = orbit.iter().next().unwrap().clone();
        for member in orbit {
            orbit_rep.insert(member, rep.clone());
        }
    }
    let mut reps: Vec<Flat> = orbit_rep.values().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    reps.sort_by_key(Flat::label);

    let kernel = stabs[0].clone();
    let mut strata = Vec::with_capacity(reps.len());
    for rep in &reps {
        let stab = kept
            .iter()
            .find(|(f, _)| f == rep)
            .map(|(_, s)| s.clone())
            .ok_or_else(|| Error::Internal(format!("orbit representative {} is not a kept flat", rep.label())))?;
        let basepoint = generic_point_of(&g, rep, &stab, &kept_points)?;
        strata.push(Stratum {
            id: rep.label(),
            is_principal: stab == kernel,
            stabilizer: stab,
            basepoint: PointDescriptor::Torus(basepoint),
            dim: Some(rep.dim()),
        });
    }

    let index_of = |f: &Flat| reps.iter().position(|r| r == &orbit_rep[f]).unwrap();
    let mut arrangement = Arrangement { points: BTreeMap::new(), circles: Vec::new(), whole: 0 };
    for (f, _) in &kept {
        let s = index_of(f);
        match f {
            Flat::Point(x) => {
                arrangement.points.insert(x.clone(), s);
            }
            Flat::Circle(c) => arrangement.circles.push((c.clone(), s)),
            Flat::Whole => arrangement.whole = s,
        }
    }

    let mut space = StratifiedGSpace {
        group: g,
        model: Model::Torus,
        strata,
        specializations: BTreeSet::new(),
        admissible: BTreeMap::new(),
        subgroups,
        arrangement: Some(arrangement),
    };
    space.admissible_by_sampling()?;
    space.specializations = space.admissible.keys().copied().collect();
    space.validate()?;
    Ok(space)
}
