//! Traces along a sequence `x_n → z` with constant stabilizer `H`.
//!
//! Test elements are continuous functions `a(s)(x) = Σ_k c_k(s) φ_k(x)`
//! built from radial profiles, so the same element can be evaluated on the
//! orbit of every `x_n` and on the orbit of `z`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{character_values, trace_formula, trial_rng, CrossedElement, Orbit};
use crate::chars::{restriction_multiplicity, CharacterTable, C64};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::gspace::{Model, PointDescriptor, Rational, StratifiedGSpace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Profile {
    /// `exp(−‖x − p‖²)`
    Gaussian,
    /// `1` within `radius` of the centre, `0` beyond `2·radius`, smooth in
    /// between.
    Plateau {
        #[serde(with = "crate::gspace::point::serde_rational")]
        radius: Rational,
    },
}

impl Profile {
    pub fn eval(&self, distance: f64) -> f64 {
        match self {
            Profile::Gaussian => (-distance * distance).exp(),
            Profile::Plateau { radius } => {
                let r = crate::gspace::point::rational_to_f64(radius);
                let u = (distance - r) / r;
                if u <= 0.0 {
                    1.0
                } else if u >= 1.0 {
                    0.0
                } else {
                    let bump = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
                    bump(1.0 - u) / (bump(1.0 - u) + bump(u))
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProfileTerm {
    /// `c(s)` indexed by group element.
    pub coeffs: Vec<C64>,
    pub centre: Vec<f64>,
    pub profile: Profile,
}

#[derive(Clone, Debug)]
pub struct ContinuousElement {
    pub model: Model,
    pub terms: Vec<ProfileTerm>,
}

impl ContinuousElement {
    pub fn eval(&self, s: usize, x: &PointDescriptor) -> C64 {
        let coords = x.to_f64().expect("concrete point");
        self.terms.iter().map(|t| t.coeffs[s] * t.profile.eval(distance(self.model, &coords, &t.centre))).sum()
    }

    pub fn on_orbit(&self, orbit: &std::sync::Arc<Orbit>) -> CrossedElement {
        CrossedElement::from_fn(orbit, |s, p| self.eval(s, p))
    }
}

/// Euclidean distance, or the flat distance on the torus.
pub fn distance(model: Model, x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = (a - b).abs();
            let d = if model == Model::Torus {
                let r = d.rem_euclid(1.0);
                r.min(1.0 - r)
            } else {
                d
            };
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Random coefficients in `[-1, 1)` (real and imaginary parts) with one
/// profile centred at `centre`.
pub fn random_element(
    model: Model,
    group_order: usize,
    centre: &[f64],
    profile: &Profile,
    seed: u64,
    k: u64,
) -> ContinuousElement {
    let mut rng = trial_rng(seed, k);
    let coeffs = (0..group_order).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ContinuousElement { model, terms: vec![ProfileTerm { coeffs, centre: centre.to_vec(), profile: profile.clone() }] }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitResidual {
    pub n: u64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    pub limit: String,
    pub stabilizer_order: usize,
    pub v: usize,
    pub residuals: Vec<LimitResidual>,
    /// Coefficients of `tr(S_z, W)` recovered by least squares at the last term.
    pub recovered: Vec<i64>,
    /// `[W|_H : V]` for each irreducible `W` of `S_z`.
    pub expected: Vec<u32>,
    pub fit_residual: f64,
    pub passed: bool,
}

/// A sequence `x_n` with the index `n` that produced each term.
#[derive(Clone, Debug)]
pub struct Sequence {
    pub terms: Vec<(u64, PointDescriptor)>,
    pub limit: PointDescriptor,
}

impl Sequence {
    /// `x_n = base + direction / n`.
    pub fn along(base: &PointDescriptor, direction: &[Rational], ns: &[u64]) -> Result<Sequence> {
        let terms =
            ns.iter().map(|&n| Ok((n, base.offset(direction, Rational::new(1, n as i64))?))).collect::<Result<_>>()?;
        Ok(Sequence { terms, limit: base.clone() })
    }
}

/// Compares `tr ρ_n(a)` with `Σ_W [W|_H:V] tr(Ind_{S_z}^G W)(a)` along the
/// sequence, for `batch` test elements, and recovers the coefficients.
#[allow(clippy::too_many_arguments)]
pub fn limit_trace_check(
    space: &StratifiedGSpace,
    sequence: &Sequence,
    v_row: usize,
    profile: &Profile,
    batch: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<LimitCheck> {
    let g = space.group();
    let z = &sequence.limit;
    let s_z = space.stabilizer(z)?;
    let first = sequence.terms.first().ok_or_else(|| Error::Oracle("empty sequence".into()))?;
    let h = space.stabilizer(&first.1)?;
    for (n, x) in &sequence.terms {
        if space.stabilizer(x)? != h {
            return Err(Error::Oracle(format!("stabilizer changes along the sequence at n = {n}")));
        }
    }
    if !h.is_subgroup_of(&s_z) {
        return Err(Error::Oracle("the sequence stabilizer is not contained in the limit stabilizer".into()));
    }
    let table_s = CharacterTable::for_subgroup(g, &s_z)?;
    let table_h = CharacterTable::for_subgroup(g, &h)?;
    if v_row >= table_h.len() {
        return Err(Error::Oracle(format!("V{v_row} is not an irreducible of the sequence stabilizer")));
    }
    let expected: Vec<u32> = (0..table_s.len())
        .map(|w| restriction_multiplicity(&table_s, table_s.irreducible(w), &table_h, table_h.irreducible(v_row), tol))
        .collect::<Result<_>>()?;
    let chi_v = character_values(&table_h, v_row);
    let chi_w: Vec<Vec<C64>> = (0..table_s.len()).map(|w| character_values(&table_s, w)).collect();

    let centre = z.to_f64().ok_or_else(|| Error::Oracle("limits need a concrete model".into()))?;
    let elements: Vec<ContinuousElement> =
        (0..batch).map(|k| random_element(space.model(), g.order(), &centre, profile, seed, k as u64)).collect();

    let z_orbit = Orbit::new(space, z)?;
    let z_index = z_orbit.index_of(z).unwrap();
    // tr(Ind_{S_z}^G W)(a_k) for every test element and irreducible W
    let limit_traces: Vec<Vec<C64>> = elements
        .iter()
        .map(|el| {
            let a = el.on_orbit(&z_orbit);
            chi_w.iter().map(|chi| trace_formula(&a, z_index, &s_z, chi)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let predicted: Vec<C64> =
        limit_traces.iter().map(|row| row.iter().zip(&expected).map(|(t, m)| t * f64::from(*m)).sum()).collect();

    let mut residuals = Vec::new();
    let mut last_traces = Vec::new();
    for (n, x) in &sequence.terms {
        let orbit = Orbit::new(space, x)?;
        let xi = orbit.index_of(x).unwrap();
        let traces: Vec<C64> =
            elements.iter().map(|el| trace_formula(&el.on_orbit(&orbit), xi, &h, &chi_v)).collect::<Result<_>>()?;
        let residual = traces.iter().zip(&predicted).map(|(t, p)| (t - p).norm()).fold(0.0, f64::max);
        residuals.push(LimitResidual { n: *n, residual });
        last_traces = traces;
    }

    // least squares for the coefficients of tr(S_z, W) in the last traces
    let rows = batch;
    let cols = table_s.len();
    let a = DMatrix::<C64>::from_fn(rows, cols, |k, w| limit_traces[k][w]);
    let b = DVector::<C64>::from_iterator(rows, last_traces.iter().copied());
    let svd = a.clone().svd(true, true);
    let solution = svd.solve(&b, 1e-12).map_err(|e| Error::Oracle(format!("least squares failed: {e}")))?;
    let fit_residual = (&a * &solution - &b).norm();
    let recovered: Vec<i64> = solution.iter().map(|c| c.re.round() as i64).collect();
    let rounding_ok = solution.iter().all(|c| (c - C64::new(c.re.round(), 0.0)).norm() < 1e-3);

    let last = residuals.last().map_or(f64::INFINITY, |r| r.residual);
    let decreasing = residuals.windows(2).all(|w| w[1].residual <= w[0].residual + tol.identity);
    let matches = recovered.iter().zip(&expected).all(|(r, e)| *r == i64::from(*e));
    Ok(LimitCheck {
        limit: z.to_string(),
        stabilizer_order: h.order(),
        v: v_row,
        residuals,
        passed: last < tol.limit && decreasing && matches && rounding_ok && batch >= cols,
        recovered,
        expected,
        fit_residual,
    })
}
