//! Character tables and the induction/restriction multiplicity arithmetic.
//!
//! Tables are computed numerically by simultaneous diagonalisation of the
//! class-sum multiplication operators on the centre of the group algebra.
//! Every table lives inside an ambient [`FiniteGroup`]: a table for a
//! subgroup `H` is indexed by the parent's element indices, which lets
//! tables of nested stabilizers be compared without re-indexing.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::group::{ConjClass, FiniteGroup, Subgroup};

pub type C64 = Complex64;

const NOT_A_MEMBER: usize = usize::MAX;

/// A function constant on conjugacy classes, one value per class in the
/// class order of the table it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    values: Vec<C64>,
}

impl ClassFunction {
    pub fn new(values: Vec<C64>) -> Self {
        ClassFunction { values }
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Value on the identity class.
    pub fn degree(&self) -> f64 {
        self.values[0].re
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction { values: self.values.iter().map(|v| v.conj()).collect() }
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: f64) -> ClassFunction {
        ClassFunction { values: self.values.iter().map(|v| v * k).collect() }
    }
}

/// Irreducible characters of a subgroup of an ambient group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    subgroup: Subgroup,
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
    irreducibles: Vec<ClassFunction>,
}

impl CharacterTable {
    /// Character table of the whole group.
    pub fn compute(g: &FiniteGroup) -> Result<Self> {
        Self::for_subgroup(g, &g.whole())
    }

    /// Character table of `h`, with classes taken under `h`-conjugation.
    pub fn for_subgroup(g: &FiniteGroup, h: &Subgroup) -> Result<Self> {
        let (classes, class_of) = subgroup_classes(g, h);
        let irreducibles = burnside(g, h, &classes, &class_of)?;
        let mut table = CharacterTable { subgroup: h.clone(), classes, class_of, irreducibles };
        table.sort_rows();
        table.validate(&Tolerances::default())?;
        Ok(table)
    }

    /// A user-supplied table for the whole group. `class_reps[k]` names an
    /// element of the class whose values are in column `k` of `rows`.
    pub fn from_supplied(g: &FiniteGroup, class_reps: &[usize], rows: &[Vec<C64>], tol: &Tolerances) -> Result<Self> {
        let whole = g.whole();
        let (classes, class_of) = subgroup_classes(g, &whole);
        if class_reps.len() != classes.len() {
            return Err(Error::CharacterTable(format!(
                "supplied table has {} classes, the group has {}",
                class_reps.len(),
                classes.len()
            )));
        }
        let mut column_of_class = vec![NOT_A_MEMBER; classes.len()];
        for (col, &rep) in class_reps.iter().enumerate() {
            let c = *class_of.get(rep).ok_or_else(|| Error::CharacterTable(format!("element {rep} out of range")))?;
            if column_of_class[c] != NOT_A_MEMBER {
                return Err(Error::CharacterTable(format!("class of element {rep} listed twice")));
            }
            column_of_class[c] = col;
        }
        let irreducibles = rows
            .iter()
            .map(|row| {
                if row.len() != classes.len() {
                    return Err(Error::CharacterTable("row length differs from class count".into()));
                }
                Ok(ClassFunction::new(column_of_class.iter().map(|&col| row[col]).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = CharacterTable { subgroup: whole, classes, class_of, irreducibles };
        table.sort_rows();
        table.validate(tol)?;
        Ok(table)
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn order(&self) -> usize {
        self.subgroup.order()
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(ConjClass::size).collect()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn irreducible(&self, row: usize) -> &ClassFunction {
        &self.irreducibles[row]
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn dim(&self, row: usize) -> usize {
        self.irreducibles[row].degree().round() as usize
    }

    /// Class index of a parent element, if it lies in the subgroup.
    pub fn class_of(&self, parent_element: usize) -> Option<usize> {
        match self.class_of.get(parent_element) {
            Some(&c) if c != NOT_A_MEMBER => Some(c),
            _ => None,
        }
    }

    /// Value of a class function of this table at a parent element.
    pub fn value(&self, f: &ClassFunction, parent_element: usize) -> C64 {
        let c = self.class_of(parent_element).expect("element outside the subgroup");
        f.values[c]
    }

    pub fn trivial(&self) -> ClassFunction {
        ClassFunction::new(vec![C64::new(1.0, 0.0); self.num_classes()])
    }

    pub fn regular(&self) -> ClassFunction {
        let mut values = vec![C64::new(0.0, 0.0); self.num_classes()];
        values[0] = C64::new(self.order() as f64, 0.0);
        ClassFunction::new(values)
    }

    pub fn zero(&self) -> ClassFunction {
        ClassFunction::new(vec![C64::new(0.0, 0.0); self.num_classes()])
    }

    /// Rows of dimension one.
    pub fn linear_rows(&self) -> Vec<usize> {
        (0..self.len()).filter(|&r| self.dim(r) == 1).collect()
    }

    /// `(1/|H|) Σ_h f(h) conj(g(h))`
    pub fn inner_product(&self, f: &ClassFunction, g: &ClassFunction) -> C64 {
        let total: C64 = self
            .classes
            .iter()
            .zip(f.values.iter().zip(&g.values))
            .map(|(c, (a, b))| a * b.conj() * c.size() as f64)
            .sum();
        total / self.order() as f64
    }

    /// Multiplicities of the irreducibles in a genuine character; zero
    /// multiplicities are omitted.
    pub fn decompose(&self, f: &ClassFunction, tol: &Tolerances) -> Result<Vec<(usize, u32)>> {
        let mut out = Vec::new();
        for (row, chi) in self.irreducibles.iter().enumerate() {
            let m = round_multiplicity(self.inner_product(f, chi), tol.rounding)?;
            if m > 0 {
                out.push((row, m));
            }
        }
        Ok(out)
    }

    fn sort_rows(&mut self) {
        // dimension ascending, then value tuples in descending lexicographic
        // order so that the trivial character leads
        let key = |f: &ClassFunction| -> Vec<i64> {
            f.values.iter().flat_map(|v| [quantize(v.re), quantize(v.im)]).collect()
        };
        self.irreducibles.sort_by(|a, b| {
            let (da, db) = (a.degree().round() as i64, b.degree().round() as i64);
            da.cmp(&db).then_with(|| key(b).cmp(&key(a)))
        });
    }

    /// Row and column orthogonality, integral degrees, and `Σ dim² = |H|`.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let k = self.num_classes();
        if self.irreducibles.len() != k {
            return Err(Error::CharacterTable(format!(
                "{} irreducibles for {k} conjugacy classes",
                self.irreducibles.len()
            )));
        }
        let mut dims_sq = 0usize;
        for chi in &self.irreducibles {
            let d = chi.values[0];
            if d.im.abs() > tol.orthogonality || (d.re - d.re.round()).abs() > tol.orthogonality || d.re.round() < 1.0 {
                return Err(Error::CharacterTable(format!("degree {d} is not a positive integer")));
            }
            dims_sq += (d.re.round() as usize).pow(2);
        }
        if dims_sq != self.order() {
            return Err(Error::CharacterTable(format!("sum of squared degrees {dims_sq} != {}", self.order())));
        }
        for i in 0..k {
            for j in 0..k {
                let ip = self.inner_product(&self.irreducibles[i], &self.irreducibles[j]);
                let expected = if i == j { 1.0 } else { 0.0 };
                if (ip - C64::new(expected, 0.0)).norm() > tol.orthogonality {
                    return Err(Error::CharacterTable(format!("rows {i} and {j} are not orthonormal: {ip}")));
                }
            }
        }
        let n = self.order() as f64;
        for a in 0..k {
            for b in 0..k {
                let s: C64 = self.irreducibles.iter().map(|chi| chi.values[a] * chi.values[b].conj()).sum();
                let expected = if a == b { n / self.classes[a].size() as f64 } else { 0.0 };
                if (s - C64::new(expected, 0.0)).norm() > tol.orthogonality * n {
                    return Err(Error::CharacterTable(format!("columns {a} and {b} are not orthogonal")));
                }
            }
        }
        Ok(())
    }
}

fn quantize(x: f64) -> i64 {
    (x * 1e8).round() as i64
}

/// Rounds an inner product that must be a non-negative integer.
pub fn round_multiplicity(raw: C64, tolerance: f64) -> Result<u32> {
    let rounded = raw.re.round();
    let residual = (raw - C64::new(rounded, 0.0)).norm();
    if residual >= tolerance || rounded < 0.0 {
        return Err(Error::Residual { residual: residual.max(-rounded), tolerance });
    }
    Ok(rounded as u32)
}

/// `[V|_H : R] = (1/|H|) Σ_{h∈H} χ_V(h) conj(χ_R(h))` for `H ≤ S`.
pub fn restriction_multiplicity(
    table_s: &CharacterTable,
    v: &ClassFunction,
    table_h: &CharacterTable,
    r: &ClassFunction,
    tol: &Tolerances,
) -> Result<u32> {
    let raw = restricted_inner_product(table_s, v, table_h, r)?;
    round_multiplicity(raw, tol.rounding)
}

fn restricted_inner_product(
    table_s: &CharacterTable,
    v: &ClassFunction,
    table_h: &CharacterTable,
    r: &ClassFunction,
) -> Result<C64> {
    if !table_h.subgroup.is_subgroup_of(&table_s.subgroup) {
        return Err(Error::CharacterTable("restriction to a subgroup that is not contained in S".into()));
    }
    let total: C64 = table_h.subgroup.members().iter().map(|&h| table_s.value(v, h) * table_h.value(r, h).conj()).sum();
    Ok(total / table_h.order() as f64)
}

/// Restriction of a class function of `S` to the classes of `H ≤ S`.
pub fn restrict(table_s: &CharacterTable, v: &ClassFunction, table_h: &CharacterTable) -> ClassFunction {
    ClassFunction::new(table_h.classes.iter().map(|c| table_s.value(v, c.representative)).collect())
}

/// Frobenius formula `χ↑(g) = (1/|H|) Σ_{r∈G, r⁻¹gr∈H} χ(r⁻¹gr)`, where
/// `G` is the subgroup of `table_g` and `H` that of `table_h`.
pub fn induced_character(
    ambient: &FiniteGroup,
    table_g: &CharacterTable,
    table_h: &CharacterTable,
    chi: &ClassFunction,
) -> ClassFunction {
    let values = table_g
        .classes
        .iter()
        .map(|c| {
            let g = c.representative;
            let total: C64 = table_g
                .subgroup
                .members()
                .iter()
                .map(|&r| ambient.mul(ambient.mul(ambient.inv(r), g), r))
                .filter_map(|x| table_h.class_of(x).map(|k| chi.values[k]))
                .sum();
            total / table_h.order() as f64
        })
        .collect();
    ClassFunction::new(values)
}

fn subgroup_classes(g: &FiniteGroup, h: &Subgroup) -> (Vec<ConjClass>, Vec<usize>) {
    let mut class_of = vec![NOT_A_MEMBER; g.order()];
    let mut classes = Vec::new();
    for &x in h.members() {
        if class_of[x] != NOT_A_MEMBER {
            continue;
        }
        let mut members: Vec<usize> = h.members().iter().map(|&y| g.conjugate(y, x)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class_of[m] = classes.len();
        }
        classes.push(ConjClass { representative: x, members });
    }
    (classes, class_of)
}

/// Burnside's method. The class sums `C_i` span the centre of the group
/// algebra; in the orthonormal basis `C_j / sqrt|C_j|` the adjoint of
/// multiplication by `C_i` is multiplication by the class of inverses, so a
/// random real combination of `A_i + A_i*` and `i(A_i - A_i*)` is Hermitian.
/// Its eigenvectors are the primitive central idempotents, whose
/// coordinates are proportional to `conj(χ(g_j))`.
fn burnside(g: &FiniteGroup, h: &Subgroup, classes: &[ConjClass], class_of: &[usize]) -> Result<Vec<ClassFunction>> {
    let k = classes.len();
    let order = h.order() as f64;
    let sizes: Vec<f64> = classes.iter().map(|c| c.size() as f64).collect();
    let inverse_class: Vec<usize> = classes.iter().map(|c| class_of[g.inv(c.representative)]).collect();

    // mult[i][l][j] = coefficient of C_l in C_i C_j
    let mut mult = vec![vec![vec![0.0f64; k]; k]; k];
    for (i, ci) in classes.iter().enumerate() {
        for (l, cl) in classes.iter().enumerate() {
            for &x in &ci.members {
                let y = g.mul(g.inv(x), cl.representative);
                let j = class_of[y];
                if j != NOT_A_MEMBER {
                    mult[i][l][j] += 1.0;
                }
            }
        }
    }
    let scaled =
        |i: usize| DMatrix::from_fn(k, k, |l, j| C64::new(mult[i][l][j] * sizes[l].sqrt() / sizes[j].sqrt(), 0.0));
    let ops: Vec<DMatrix<C64>> = (0..k).map(scaled).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c1a5);
    for _attempt in 0..16 {
        let mut herm = DMatrix::<C64>::zeros(k, k);
        for i in 0..k {
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            let sum = &ops[i] + &ops[inverse_class[i]];
            let diff = (&ops[i] - &ops[inverse_class[i]]) * C64::new(0.0, 1.0);
            herm += sum * C64::new(a, 0.0) + diff * C64::new(b, 0.0);
        }
        let eig = SymmetricEigen::new(herm);
        let mut evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        evals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let scale = evals.iter().map(|v| v.abs()).fold(1.0, f64::max);
        let separated = evals.windows(2).all(|w| w[1] - w[0] > 1e-7 * scale);
        if !separated {
            continue;
        }
        let mut chars = Vec::with_capacity(k);
        for col in 0..k {
            let u = eig.eigenvectors.column(col);
            let coords: Vec<C64> = (0..k).map(|j| u[j] / sizes[j].sqrt()).collect();
            if coords[0].norm() < 1e-12 {
                return Err(Error::CharacterTable("eigenvector vanishes on the identity class".into()));
            }
            let w: Vec<C64> = coords.iter().map(|c| c / coords[0]).collect();
            let norm: f64 = w.iter().zip(&sizes).map(|(x, s)| x.norm_sqr() * s).sum();
            let degree = (order / norm).sqrt();
            let rounded = degree.round();
            if (degree - rounded).abs() > 1e-6 {
                return Err(Error::CharacterTable(format!("non-integral degree {degree}")));
            }
            chars.push(ClassFunction::new(w.iter().map(|x| snap(x.conj() * rounded)).collect()));
        }
        return Ok(chars);
    }
    Err(Error::CharacterTable("class-sum eigenvalues could not be separated".into()))
}

/// Snaps real and imaginary parts lying within 1e-9 of a multiple of 1/2.
fn snap(v: C64) -> C64 {
    let s = |x: f64| {
        let r = (x * 2.0).round() / 2.0;
        if (x - r).abs() < 1e-9 {
            r
        } else {
            x
        }
    };
    C64::new(s(v.re), s(v.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::*;
    use crate::group::Permutation;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn dims(t: &CharacterTable) -> Vec<usize> {
        (0..t.len()).map(|r| t.dim(r)).collect()
    }

    #[test]
    fn s3_table() {
        let g = symmetric(3);
        let t = CharacterTable::compute(&g).unwrap();
        assert_eq!(dims(&t), vec![1, 1, 2]);
        // trivial first
        assert!(t.irreducible(0).values().iter().all(|v| (v - c(1.0)).norm() < 1e-12));
    }

    #[test]
    fn cyclic4_table_has_fourth_roots_of_unity() {
        let t = CharacterTable::compute(&cyclic(4)).unwrap();
        assert_eq!(dims(&t), vec![1, 1, 1, 1]);
        for chi in t.irreducibles() {
            for v in chi.values() {
                let ok =
                    [c(1.0), c(-1.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)].iter().any(|u| (v - u).norm() < 1e-12);
                assert!(ok, "{v}");
            }
        }
    }

    /// Decomposes the regular representation of D4 into isotypic pieces by
    /// brute force: the 2-dim character is the unique one appearing with
    /// multiplicity 2, and its values follow from the traces of the plane
    /// matrices.
    #[test]
    fn d4_two_dimensional_character_matches_plane_traces() {
        let g = d4_on_plane();
        let t = CharacterTable::compute(&g).unwrap();
        assert_eq!(dims(&t), vec![1, 1, 1, 1, 2]);
        let lambda = t.irreducible(4);
        for x in 0..g.order() {
            let m = g.matrix(x).unwrap();
            let trace = (m.get(0, 0) + m.get(1, 1)) as f64;
            assert!((t.value(lambda, x) - c(trace)).norm() < 1e-12);
        }
        // values (2, -2, 0, 0, 0) in class order e, r², ...
        let r2 = g.index_of(&Permutation::from_images(vec![2, 3, 0, 1]).unwrap()).unwrap();
        assert!((t.value(lambda, r2) - c(-2.0)).norm() < 1e-12);
    }

    #[test]
    fn restriction_examples() {
        let tol = Tolerances::default();
        let g = symmetric(3);
        let ts = CharacterTable::compute(&g).unwrap();
        let q = ts.irreducible(2).clone();
        let te = CharacterTable::for_subgroup(&g, &g.trivial()).unwrap();
        assert_eq!(restriction_multiplicity(&ts, &q, &te, te.irreducible(0), &tol).unwrap(), 2);

        let t01 = g.index_of(&Permutation::from_cycles(3, &[&[0, 1]]).unwrap()).unwrap();
        let h = g.generate(&[t01]);
        let th = CharacterTable::for_subgroup(&g, &h).unwrap();
        let sign_h = th.irreducible(1);
        assert!((th.value(sign_h, t01) - c(-1.0)).norm() < 1e-12);
        assert_eq!(restriction_multiplicity(&ts, &q, &th, sign_h, &tol).unwrap(), 1);
    }

    #[test]
    fn d4_lambda_restricted_to_rotations() {
        let tol = Tolerances::default();
        let g = d4_on_plane();
        let t = CharacterTable::compute(&g).unwrap();
        let rot = g.index_of(&Permutation::from_images(vec![1, 2, 3, 0]).unwrap()).unwrap();
        let z4 = g.generate(&[rot]);
        let tz = CharacterTable::for_subgroup(&g, &z4).unwrap();
        let r_i =
            (0..tz.len()).find(|&r| (tz.value(tz.irreducible(r), rot) - C64::new(0.0, 1.0)).norm() < 1e-12).unwrap();
        // independent sum over the four rotations: λ(r^k) = 2cos(kπ/2), χ(r^k) = i^k
        let direct: C64 = (0..4)
            .map(|k| c(2.0 * (k as f64 * std::f64::consts::FRAC_PI_2).cos()) * C64::new(0.0, 1.0).powu(k).conj())
            .sum::<C64>()
            / 4.0;
        assert!((direct - c(1.0)).norm() < 1e-12);
        assert_eq!(restriction_multiplicity(&t, t.irreducible(4), &tz, tz.irreducible(r_i), &tol).unwrap(), 1);
    }

    #[test]
    fn induction_examples() {
        let tol = Tolerances::default();
        let g = symmetric(3);
        let ts = CharacterTable::compute(&g).unwrap();
        let te = CharacterTable::for_subgroup(&g, &g.trivial()).unwrap();
        let reg = induced_character(&g, &ts, &te, &te.trivial());
        assert_eq!(reg, ts.regular());

        let q = ts.irreducible(2);
        let same = induced_character(&g, &ts, &ts, q);
        assert!(same.values().iter().zip(q.values()).all(|(a, b)| (a - b).norm() < 1e-12));

        let c3 = g.generate(&[g.index_of(&Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()).unwrap()]);
        let tc = CharacterTable::for_subgroup(&g, &c3).unwrap();
        let ind = induced_character(&g, &ts, &tc, &tc.trivial());
        // (2, 0, 2) on (e, transpositions, 3-cycles)
        for cls in ts.classes() {
            let expected = if cls.size() == 3 { 0.0 } else { 2.0 };
            assert!((ts.value(&ind, cls.representative) - c(expected)).norm() < 1e-12);
        }
        assert_eq!(ts.decompose(&ind, &tol).unwrap(), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn decomposition_examples() {
        let tol = Tolerances::default();
        let g = symmetric(3);
        let ts = CharacterTable::compute(&g).unwrap();
        assert_eq!(ts.decompose(&ts.regular(), &tol).unwrap(), vec![(0, 1), (1, 1), (2, 2)]);
        assert!(ts.decompose(&ts.zero(), &tol).unwrap().is_empty());
        let t01 = g.generate(&[g.index_of(&Permutation::from_cycles(3, &[&[0, 1]]).unwrap()).unwrap()]);
        let th = CharacterTable::for_subgroup(&g, &t01).unwrap();
        let ind = induced_character(&g, &ts, &th, &th.trivial());
        assert_eq!(ts.decompose(&ind, &tol).unwrap(), vec![(0, 1), (2, 1)]);
    }

    #[test]
    fn non_character_is_rejected() {
        let ts = CharacterTable::compute(&symmetric(3)).unwrap();
        let half = ts.trivial().scale(0.5);
        assert!(matches!(ts.decompose(&half, &Tolerances::default()), Err(Error::Residual { .. })));
    }

    #[test]
    fn supplied_table_round_trip_and_rejection() {
        let g = symmetric(3);
        let t = CharacterTable::compute(&g).unwrap();
        let reps: Vec<usize> = t.classes().iter().map(|c| c.representative).rev().collect();
        let rows: Vec<Vec<C64>> =
            t.irreducibles().iter().map(|chi| reps.iter().map(|&r| t.value(chi, r)).collect()).collect();
        let supplied = CharacterTable::from_supplied(&g, &reps, &rows, &Tolerances::default()).unwrap();
        assert_eq!(supplied.irreducibles(), t.irreducibles());

        let mut bad = rows.clone();
        bad[2][0] = c(3.0);
        assert!(CharacterTable::from_supplied(&g, &reps, &bad, &Tolerances::default()).is_err());
    }

    #[test]
    fn subgroup_tables_are_valid() {
        let g = symmetric(4);
        for h in g.all_subgroups().unwrap() {
            let t = CharacterTable::for_subgroup(&g, &h).unwrap();
            assert_eq!(t.order(), h.order());
        }
    }
}
