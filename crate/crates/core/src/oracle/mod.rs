//! Brute-force checks of the trace formulae for induced representations of
//! `C(G, C(X))` restricted to a single orbit.
//!
//! Measures on `G` and `H` are normalised to total mass one, so sums over a
//! group carry a factor `1/|G|`.

mod irrep;
pub mod limit;

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chars::{restriction_multiplicity, CharacterTable, C64};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::gspace::{PointDescriptor, StratifiedGSpace};

pub use irrep::IrrepMatrices;

/// A G-orbit `G·x` together with the action table on it.
#[derive(Clone, Debug)]
pub struct Orbit {
    group: FiniteGroup,
    points: Vec<PointDescriptor>,
    /// `action[g][i]` is the index of `g·points[i]`.
    action: Vec<Vec<usize>>,
}

impl Orbit {
    pub fn new(space: &StratifiedGSpace, x: &PointDescriptor) -> Result<Arc<Orbit>> {
        let g = space.group().clone();
        let mut points = vec![x.clone()];
        let mut i = 0;
        while i < points.len() {
            for e in 0..g.order() {
                let y = space.act(e, &points[i])?;
                if !points.contains(&y) {
                    points.push(y);
                }
            }
            i += 1;
        }
        let action = (0..g.order())
            .map(|e| {
                points
                    .iter()
                    .map(|p| {
                        let y = space.act(e, p)?;
                        Ok(points.iter().position(|q| *q == y).unwrap())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Arc::new(Orbit { group: g, points, action }))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn points(&self) -> &[PointDescriptor] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn act(&self, g: usize, i: usize) -> usize {
        self.action[g][i]
    }

    pub fn index_of(&self, p: &PointDescriptor) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    fn fixes(&self, h: &Subgroup, i: usize) -> bool {
        h.members().iter().all(|&t| self.act(t, i) == i)
    }
}

/// An element `a` of `C(G, C(G·x))`, stored as the table `a(s)(x_i)`.
#[derive(Clone, Debug)]
pub struct CrossedElement {
    orbit: Arc<Orbit>,
    values: Vec<Vec<C64>>,
}

impl CrossedElement {
    pub fn from_fn(orbit: &Arc<Orbit>, f: impl Fn(usize, &PointDescriptor) -> C64) -> Self {
        let values = (0..orbit.group.order()).map(|s| orbit.points.iter().map(|p| f(s, p)).collect()).collect();
        CrossedElement { orbit: orbit.clone(), values }
    }

    /// `1` at the group identity, `0` elsewhere.
    pub fn identity_indicator(orbit: &Arc<Orbit>) -> Self {
        let e = orbit.group.identity();
        Self::from_fn(orbit, |s, _| C64::new(if s == e { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn constant(orbit: &Arc<Orbit>, c: C64) -> Self {
        Self::from_fn(orbit, |_, _| c)
    }

    /// Entries with real and imaginary parts uniform in `[-1, 1)`.
    pub fn random(orbit: &Arc<Orbit>, rng: &mut ChaCha8Rng) -> Self {
        let values = (0..orbit.group.order())
            .map(|_| (0..orbit.len()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect();
        CrossedElement { orbit: orbit.clone(), values }
    }

    /// `b*·b` for a random `b`.
    pub fn random_positive(orbit: &Arc<Orbit>, rng: &mut ChaCha8Rng) -> Self {
        let b = Self::random(orbit, rng);
        b.star().mul(&b)
    }

    pub fn orbit(&self) -> &Arc<Orbit> {
        &self.orbit
    }

    pub fn value(&self, s: usize, i: usize) -> C64 {
        self.values[s][i]
    }

    /// `a*(s)(x) = conj(a(s⁻¹)(s⁻¹·x))`
    pub fn star(&self) -> Self {
        let g = &self.orbit.group;
        let values = (0..g.order())
            .map(|s| {
                let s_inv = g.inv(s);
                (0..self.orbit.len()).map(|i| self.values[s_inv][self.orbit.act(s_inv, i)].conj()).collect()
            })
            .collect();
        CrossedElement { orbit: self.orbit.clone(), values }
    }

    /// `(a·b)(s)(x) = (1/|G|) Σ_r a(r)(x) b(r⁻¹s)(r⁻¹·x)`
    pub fn mul(&self, other: &Self) -> Self {
        let g = &self.orbit.group;
        let n = g.order() as f64;
        let values = (0..g.order())
            .map(|s| {
                (0..self.orbit.len())
                    .map(|i| {
                        let total: C64 = (0..g.order())
                            .map(|r| {
                                let r_inv = g.inv(r);
                                self.values[r][i] * other.values[g.mul(r_inv, s)][self.orbit.act(r_inv, i)]
                            })
                            .sum();
                        total / n
                    })
                    .collect()
            })
            .collect();
        CrossedElement { orbit: self.orbit.clone(), values }
    }

    pub fn add(&self, other: &Self) -> Self {
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        CrossedElement { orbit: self.orbit.clone(), values }
    }

    pub fn scale(&self, c: C64) -> Self {
        let values = self.values.iter().map(|row| row.iter().map(|x| x * c).collect()).collect();
        CrossedElement { orbit: self.orbit.clone(), values }
    }
}

/// `(1/|G|) Σ_r (1/|H|) Σ_{t∈H} a(r t⁻¹ r⁻¹)(r·x) conj(χ(t))`, where `chi`
/// lists the character on `h.members()` in order.
pub fn trace_formula(a: &CrossedElement, x: usize, h: &Subgroup, chi: &[C64]) -> Result<C64> {
    let orbit = &a.orbit;
    let g = &orbit.group;
    if !orbit.fixes(h, x) {
        return Err(Error::Oracle(format!("the subgroup does not fix {}", orbit.points[x])));
    }
    let mut total = C64::new(0.0, 0.0);
    for r in 0..g.order() {
        let rx = orbit.act(r, x);
        let r_inv = g.inv(r);
        for (k, &t) in h.members().iter().enumerate() {
            let s = g.mul(g.mul(r, g.inv(t)), r_inv);
            total += a.values[s][rx] * chi[k].conj();
        }
    }
    Ok(total / (g.order() * h.order()) as f64)
}

/// Values of an irreducible on the members of its subgroup.
pub fn character_values(table: &CharacterTable, row: usize) -> Vec<C64> {
    let chi = table.irreducible(row);
    table.subgroup().members().iter().map(|&t| table.value(chi, t)).collect()
}

/// `ρ(a)` on `L²(G/H) ⊗ V`, in blocks indexed by a transversal of `G/H`.
#[derive(Clone, Debug)]
pub struct InducedMatrix {
    pub transversal: Vec<usize>,
    pub dim_v: usize,
    pub matrix: DMatrix<C64>,
}

impl InducedMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

/// Least element of each left coset `rH`.
pub fn transversal(g: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for r in 0..g.order() {
        if seen[r] {
            continue;
        }
        out.push(r);
        for &t in h.members() {
            seen[g.mul(r, t)] = true;
        }
    }
    out
}

/// Block `(i, j) = (1/|G|) Σ_{h∈H} a(r_i h⁻¹ r_j⁻¹)(r_i·x) V_{h⁻¹}`.
pub fn induced_matrix(a: &CrossedElement, x: usize, v: &IrrepMatrices) -> Result<InducedMatrix> {
    let orbit = &a.orbit;
    let g = &orbit.group;
    let h = v.subgroup();
    if !orbit.fixes(h, x) {
        return Err(Error::Oracle(format!("the subgroup does not fix {}", orbit.points[x])));
    }
    let reps = transversal(g, h);
    let d = v.dim();
    let m = reps.len();
    let mut matrix = DMatrix::<C64>::zeros(m * d, m * d);
    for (i, &ri) in reps.iter().enumerate() {
        let rx = orbit.act(ri, x);
        for (j, &rj) in reps.iter().enumerate() {
            let rj_inv = g.inv(rj);
            let mut block = DMatrix::<C64>::zeros(d, d);
            for &t in h.members() {
                let t_inv = g.inv(t);
                let s = g.mul(g.mul(ri, t_inv), rj_inv);
                let c = a.values[s][rx];
                if c != C64::new(0.0, 0.0) {
                    block += v.matrix(t_inv) * c;
                }
            }
            matrix.view_mut((i * d, j * d), (d, d)).copy_from(&(block * C64::new(1.0 / g.order() as f64, 0.0)));
        }
    }
    Ok(InducedMatrix { transversal: reps, dim_v: d, matrix })
}

/// Generator for trial `k` under `seed`; trials are independent streams so
/// serial and parallel runs agree.
pub fn trial_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub label: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(label: String, residuals: &[f64], tolerance: f64) -> Self {
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        CheckOutcome { label, trials: residuals.len(), max_residual, tolerance, passed: max_residual < tolerance }
    }
}

/// `|trace_formula − tr ρ(a)|` over random positive elements, plus the
/// positivity of the trace.
pub fn verify_trace_formula(
    a_orbit: &Arc<Orbit>,
    x: usize,
    table: &CharacterTable,
    row: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let g = a_orbit.group();
    let v = IrrepMatrices::from_table(g, table, row, tol.orthogonality)?;
    let chi = character_values(table, row);
    let residuals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let a = CrossedElement::random_positive(a_orbit, &mut trial_rng(seed, k as u64));
            let formula = trace_formula(&a, x, table.subgroup(), &chi)?;
            let matrix = induced_matrix(&a, x, &v)?.trace();
            // positivity shows up as a residual too
            let negativity = (-formula.re).max(0.0) + formula.im.abs();
            Ok((formula - matrix).norm().max(negativity))
        })
        .collect::<Result<_>>()?;
    Ok(CheckOutcome::new(
        format!("trace formula at {} with |H|={} V{row}", a_orbit.points[x], table.order()),
        &residuals,
        tol.identity,
    ))
}

/// `tr(H, V) = Σ_{W ∈ Ŝ_z} [W|_H : V] tr(S_z, W)` over random positive elements.
#[allow(clippy::too_many_arguments)]
pub fn verify_decomposition(
    orbit: &Arc<Orbit>,
    z: usize,
    table_s: &CharacterTable,
    table_h: &CharacterTable,
    row: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let chi_v = character_values(table_h, row);
    let v = table_h.irreducible(row);
    let terms: Vec<(u32, Vec<C64>)> = (0..table_s.len())
        .map(|w| {
            let m = restriction_multiplicity(table_s, table_s.irreducible(w), table_h, v, tol)?;
            Ok((m, character_values(table_s, w)))
        })
        .collect::<Result<_>>()?;
    let residuals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let a = CrossedElement::random_positive(orbit, &mut trial_rng(seed, k as u64));
            let lhs = trace_formula(&a, z, table_h.subgroup(), &chi_v)?;
            let mut rhs = C64::new(0.0, 0.0);
            for (m, chi_w) in &terms {
                if *m > 0 {
                    rhs += trace_formula(&a, z, table_s.subgroup(), chi_w)? * f64::from(*m);
                }
            }
            Ok((lhs - rhs).norm())
        })
        .collect::<Result<_>>()?;
    Ok(CheckOutcome::new(
        format!("decomposition at {} with |H|={} V{row}", orbit.points[z], table_h.order()),
        &residuals,
        tol.decomposition,
    ))
}

/// `tr(x, S_x, V)(a) = tr(g·x, S_{g·x}, g·V)(a)` with `(g·V)(t) = V(g⁻¹tg)`.
pub fn verify_conjugation(
    a: &CrossedElement,
    x: usize,
    table: &CharacterTable,
    row: usize,
    g_elem: usize,
) -> Result<f64> {
    let orbit = &a.orbit;
    let g = &orbit.group;
    let s_x = table.subgroup();
    let chi = table.irreducible(row);
    let lhs = trace_formula(a, x, s_x, &character_values(table, row))?;
    let gx = orbit.act(g_elem, x);
    let moved = g.conjugate_subgroup(g_elem, s_x);
    let g_inv = g.inv(g_elem);
    let moved_chi: Vec<C64> = moved.members().iter().map(|&t| table.value(chi, g.conjugate(g_inv, t))).collect();
    let rhs = trace_formula(a, gx, &moved, &moved_chi)?;
    Ok((lhs - rhs).norm())
}
