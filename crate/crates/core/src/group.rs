//! Finite permutation groups: closure from generators, conjugacy classes and
//! the subgroup lattice.
//!
//! Products follow function composition: `g * h` applies `h` first. Element
//! lists are produced breadth-first from the identity by right
//! multiplication with the generators in the order given, so element
//! indices are reproducible and the identity always has index 0.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::config::{GROUP_SIZE_CAP, SUBGROUP_ENUMERATION_CAP};
use crate::error::{Error, Result};

/// A bijection of `{0, .., degree - 1}` stored by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a >= degree || b >= degree {
                    return Err(Error::InvalidPermutation(format!("cycle {cycle:?} exceeds degree {degree}")));
                }
                images[a] = b;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self * other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.0[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Matrix(format!("expected a square matrix, got {rows:?}")));
        }
        Ok(IntMatrix { n, entries: rows.iter().flatten().copied().collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IntMatrix { n, entries }
    }

    /// Matrix of the coordinate permutation `e_i -> e_{p(i)}`.
    pub fn permutation(p: &Permutation) -> Self {
        let n = p.degree();
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[p.apply(i) * n + i] = 1;
        }
        IntMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        IntMatrix { n, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    /// Determinant by cofactor expansion; the matrices here are tiny.
    pub fn determinant(&self) -> i64 {
        fn det(m: &[Vec<i64>]) -> i64 {
            match m.len() {
                1 => m[0][0],
                2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
                n => (0..n)
                    .map(|j| {
                        let minor: Vec<Vec<i64>> = m[1..]
                            .iter()
                            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                            .collect();
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        sign * m[0][j] * det(&minor)
                    })
                    .sum(),
            }
        }
        det(&self.rows())
    }
}

/// A finite group of permutations with an optional faithful integer matrix
/// representation carried alongside (used by the torus model).
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    generators: Vec<usize>,
    mul_table: Vec<usize>,
    inverses: Vec<usize>,
    matrices: Option<Vec<IntMatrix>>,
    fingerprint: u64,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint && self.elements == other.elements
    }
}

impl FiniteGroup {
    /// Closure of the generators, with the default size cap.
    pub fn from_generators(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::build(degree, generators, None, GROUP_SIZE_CAP)
    }

    /// Closure of generators that carry integer matrix annotations. The
    /// annotations must define a homomorphism consistent with the
    /// permutations.
    pub fn from_annotated_generators(
        degree: usize,
        generators: &[Permutation],
        matrices: &[IntMatrix],
    ) -> Result<Self> {
        if matrices.len() != generators.len() {
            return Err(Error::Matrix(format!(
                "{} matrix annotations for {} generators",
                matrices.len(),
                generators.len()
            )));
        }
        Self::build(degree, generators, Some(matrices), GROUP_SIZE_CAP)
    }

    pub fn from_generators_with_cap(degree: usize, generators: &[Permutation], cap: usize) -> Result<Self> {
        Self::build(degree, generators, None, cap)
    }

    fn build(degree: usize, generators: &[Permutation], matrices: Option<&[IntMatrix]>, cap: usize) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let mat_dim = match matrices {
            Some(ms) => {
                let d = ms.first().map(IntMatrix::dim).unwrap_or(2);
                if ms.iter().any(|m| m.dim() != d) {
                    return Err(Error::Matrix("annotations have differing dimensions".into()));
                }
                Some(d)
            }
            None => None,
        };

        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut mats: Vec<IntMatrix> = mat_dim.map(|d| vec![IntMatrix::identity(d)]).unwrap_or_default();
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (k, s) in generators.iter().enumerate() {
                let y = elements[x].compose(s);
                let ym = matrices.map(|ms| mats[x].mul(&ms[k]));
                match index.get(&y) {
                    Some(&j) => {
                        if let Some(m) = ym {
                            if mats[j] != m {
                                return Err(Error::Matrix(format!(
                                    "annotations are not a function of the permutation {y}"
                                )));
                            }
                        }
                    }
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::SizeCapExceeded { cap });
                        }
                        index.insert(y.clone(), elements.len());
                        queue.push_back(elements.len());
                        elements.push(y);
                        if let Some(m) = ym {
                            mats.push(m);
                        }
                    }
                }
            }
        }
        let generators = generators.iter().map(|g| index[g]).collect();
        Ok(Self::finish(degree, elements, index, generators, matrices.map(|_| mats)))
    }

    /// Wraps an element list that is already closed; the identity must come
    /// first. Used to view a subgroup as a group in its own right.
    fn from_closed(degree: usize, elements: Vec<Permutation>, matrices: Option<Vec<IntMatrix>>) -> Self {
        let index: HashMap<Permutation, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let generators = (1..elements.len()).collect();
        Self::finish(degree, elements, index, generators, matrices)
    }

    fn finish(
        degree: usize,
        elements: Vec<Permutation>,
        index: HashMap<Permutation, usize>,
        generators: Vec<usize>,
        matrices: Option<Vec<IntMatrix>>,
    ) -> Self {
        let n = elements.len();
        let mut mul_table = vec![0; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mul_table[a * n + b] = index[&pa.compose(pb)];
            }
        }
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        degree.hash(&mut hasher);
        elements.hash(&mut hasher);
        let fingerprint = hasher.finish();
        FiniteGroup { degree, elements, index, generators, mul_table, inverses, matrices, fingerprint }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g h g^-1`
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Product of generators named by their position in the generator list.
    pub fn word(&self, letters: &[usize]) -> Result<usize> {
        letters.iter().try_fold(0, |acc, &l| {
            self.generators
                .get(l)
                .map(|&g| self.mul(acc, g))
                .ok_or_else(|| Error::Scenario(format!("generator index {l} out of range")))
        })
    }

    pub fn matrices(&self) -> Option<&[IntMatrix]> {
        self.matrices.as_deref()
    }

    pub fn matrix(&self, a: usize) -> Option<&IntMatrix> {
        self.matrices.as_ref().map(|m| &m[a])
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::new(self, (0..self.order()).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::new(self, vec![0])
    }

    pub fn center(&self) -> Subgroup {
        let n = self.order();
        Subgroup::new(self, (0..n).filter(|&z| (0..n).all(|g| self.mul(z, g) == self.mul(g, z))).collect())
    }

    /// Subgroup generated by a set of elements.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut members = vec![0usize];
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                }
            }
            k += 1;
        }
        Subgroup::new(self, members)
    }

    /// Checks that `members` is closed and returns it as a subgroup.
    pub fn subgroup_from_members(&self, members: Vec<usize>) -> Result<Subgroup> {
        let set: HashSet<usize> = members.iter().copied().collect();
        if !set.contains(&0) || members.iter().any(|&m| m >= self.order()) {
            return Err(Error::Space(format!("{members:?} is not a subgroup")));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::Space(format!("{members:?} is not closed under products")));
                }
            }
        }
        Ok(Subgroup::new(self, set.into_iter().collect()))
    }

    /// Conjugacy classes, identity class first, each represented by its
    /// smallest element index.
    pub fn conjugacy_classes(&self) -> Vec<ConjClass> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                assigned[m] = true;
            }
            classes.push(ConjClass { representative: x, members });
        }
        classes
    }

    /// Every subgroup exactly once, sorted by order and then member set.
    ///
    /// Built bottom-up: start from the cyclic subgroups and close the family
    /// under joins with cyclic subgroups. Every subgroup is generated by its
    /// cyclic subgroups, so the fixpoint is the whole lattice.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        if self.order() > SUBGROUP_ENUMERATION_CAP {
            return Err(Error::SizeCapExceeded { cap: SUBGROUP_ENUMERATION_CAP });
        }
        let mut cyclic: Vec<(usize, Subgroup)> = Vec::new();
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        for g in 0..self.order() {
            let c = self.generate(&[g]);
            if found.insert(c.members.clone()) {
                cyclic.push((g, c));
            }
        }
        let mut all: Vec<(Vec<usize>, Subgroup)> = cyclic.iter().map(|(g, c)| (vec![*g], c.clone())).collect();
        let mut frontier: Vec<usize> = (0..all.len()).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &i in &frontier {
                for (g, c) in &cyclic {
                    if all[i].1.contains_all(c) {
                        continue;
                    }
                    let mut gens = all[i].0.clone();
                    gens.push(*g);
                    let joined = self.generate(&gens);
                    if found.insert(joined.members.clone()) {
                        next.push(all.len());
                        all.push((gens, joined));
                    }
                }
            }
            frontier = next;
        }
        let mut subgroups: Vec<Subgroup> = all.into_iter().map(|(_, s)| s).collect();
        subgroups.sort();
        Ok(subgroups)
    }

    /// `g H g^-1`
    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        Subgroup::new(self, h.members.iter().map(|&x| self.conjugate(g, x)).collect())
    }

    /// Returns a witness `g` with `g H1 g^-1 = H2`, if one exists.
    pub fn are_conjugate(&self, h1: &Subgroup, h2: &Subgroup) -> Result<Option<usize>> {
        if h1.fingerprint != self.fingerprint || h2.fingerprint != self.fingerprint {
            return Err(Error::ParentMismatch);
        }
        if h1.order() != h2.order() {
            return Ok(None);
        }
        Ok((0..self.order()).find(|&g| self.conjugate_subgroup(g, h1) == *h2))
    }

    /// The subgroup as a group of its own. Local index `i` corresponds to the
    /// returned parent index `embedding[i]`; the identity stays first.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let embedding = h.members.clone();
        let perms = embedding.iter().map(|&i| self.elements[i].clone()).collect();
        let mats = self.matrices.as_ref().map(|ms| embedding.iter().map(|&i| ms[i].clone()).collect());
        (FiniteGroup::from_closed(self.degree, perms, mats), embedding)
    }
}

/// A subgroup of a parent [`FiniteGroup`], stored as sorted parent indices.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<u64>,
    fingerprint: u64,
}

impl Subgroup {
    fn new(parent: &FiniteGroup, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![0u64; parent.order().div_ceil(64)];
        for &m in &members {
            mask[m / 64] |= 1 << (m % 64);
        }
        Subgroup { members, mask, fingerprint: parent.fingerprint }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        g / 64 < self.mask.len() && self.mask[g / 64] & (1 << (g % 64)) != 0
    }

    pub fn contains_all(&self, other: &Subgroup) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| b & !a == 0)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        other.contains_all(self)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn belongs_to(&self, g: &FiniteGroup) -> bool {
        self.fingerprint == g.fingerprint
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let members: Vec<usize> = self.members.iter().copied().filter(|&m| other.contains(m)).collect();
        let mask = self.mask.iter().zip(&other.mask).map(|(a, b)| a & b).collect();
        Subgroup { members, mask, fingerprint: self.fingerprint }
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order().cmp(&other.order()).then_with(|| self.members.cmp(&other.members))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Small groups used throughout the tests and the bundled scenarios.
pub mod catalog {
    use super::*;

    pub fn symmetric(n: usize) -> FiniteGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
        }
        if n >= 3 {
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[&cycle]).unwrap());
        }
        FiniteGroup::from_generators(n.max(1), &gens).unwrap()
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let cycle: Vec<usize> = (0..n).collect();
        let gens = if n > 1 { vec![Permutation::from_cycles(n, &[&cycle]).unwrap()] } else { vec![] };
        FiniteGroup::from_generators(n.max(1), &gens).unwrap()
    }

    /// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> FiniteGroup {
        let rot = Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap();
        let flip = Permutation::from_images((0..n).map(|i| (n - i) % n).collect()).unwrap();
        FiniteGroup::from_generators(n, &[rot, flip]).unwrap()
    }

    /// D4 as signed permutation matrices of the plane, permuting the four
    /// points `e1, e2, -e1, -e2` (indices 0..4), annotated with its matrices.
    pub fn d4_on_plane() -> FiniteGroup {
        let rot = Permutation::from_images(vec![1, 2, 3, 0]).unwrap();
        let flip = Permutation::from_images(vec![0, 3, 2, 1]).unwrap();
        let mats =
            [IntMatrix::new(&[vec![0, -1], vec![1, 0]]).unwrap(), IntMatrix::new(&[vec![1, 0], vec![0, -1]]).unwrap()];
        FiniteGroup::from_annotated_generators(4, &[rot, flip], &mats).unwrap()
    }

    /// `{I, -I}` acting on the plane.
    pub fn minus_identity_on_plane() -> FiniteGroup {
        let neg = Permutation::from_images(vec![2, 3, 0, 1]).unwrap();
        let mats = [IntMatrix::new(&[vec![-1, 0], vec![0, -1]]).unwrap()];
        FiniteGroup::from_annotated_generators(4, &[neg], &mats).unwrap()
    }

    pub fn trivial_on_plane() -> FiniteGroup {
        FiniteGroup::from_annotated_generators(4, &[], &[]).unwrap()
    }

    /// Quaternion group of order 8 via its regular representation.
    pub fn quaternion() -> FiniteGroup {
        // elements 1,i,j,k,-1,-i,-j,-k as 0..8; left multiplication by i and j
        let i = Permutation::from_images(vec![1, 4, 3, 6, 5, 0, 7, 2]).unwrap();
        let j = Permutation::from_images(vec![2, 7, 4, 1, 6, 3, 0, 5]).unwrap();
        FiniteGroup::from_generators(8, &[i, j]).unwrap()
    }

    pub fn alternating4() -> FiniteGroup {
        let a = Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap();
        FiniteGroup::from_generators(4, &[a, b]).unwrap()
    }
}
