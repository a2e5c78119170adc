//! The spectrum of `C₀(X)⋊G` and its upper multiplicities.
//!
//! Irreducible representations are `Ind_{S_z}^G(π_z ⋊ V)` for a stratum
//! basepoint `z` and `V ∈ Ŝ_z`. The upper multiplicity is
//! `M_U = max_H max_{R ∈ Ĥ} [V|_H : R]` over the subgroups `H` that occur as
//! limits of stabilizers at `z`. Every admissible `H` bounds `M_U` from
//! below and the optimal one is admissible, so maximising over the whole
//! admissible set is exact. Values are computed once per stratum, assuming
//! the limit structure is constant along each stratum.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chars::{restriction_multiplicity, CharacterTable};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::gspace::StratifiedGSpace;

/// `(stratum index, row of the stabilizer's character table)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpectrumPoint {
    pub stratum: usize,
    pub v: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicity {
    pub m_u: u32,
    pub witness_h: Subgroup,
    pub witness_r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSummary {
    pub order: usize,
    /// Members in cycle notation, in element-index order.
    pub elements: Vec<String>,
}

impl SubgroupSummary {
    pub fn new(g: &FiniteGroup, h: &Subgroup) -> Self {
        SubgroupSummary { order: h.order(), elements: h.members().iter().map(|&x| g.element(x).to_string()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub stratum: String,
    pub stabilizer_order: usize,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    #[serde(rename = "MU")]
    pub m_u: u32,
    #[serde(rename = "witness_H")]
    pub witness_h: SubgroupSummary,
    #[serde(rename = "witness_R")]
    pub witness_r: usize,
    #[serde(rename = "dimR")]
    pub dim_r: usize,
    /// `[S_z : H]` for the witness.
    #[serde(rename = "index_Sz_H")]
    pub index_sz_h: usize,
    /// `[G : S]` for the principal stabilizer, when there is one.
    #[serde(rename = "index_G_S")]
    pub index_g_s: Option<usize>,
    pub fell: bool,
    #[serde(rename = "in_O_char")]
    pub in_o_char: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonFellPoint {
    pub stratum: String,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "MU")]
    pub m_u: u32,
    #[serde(rename = "witness_H")]
    pub witness_h: SubgroupSummary,
    #[serde(rename = "witness_R")]
    pub witness_r: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub group_order: usize,
    pub points: Vec<PointReport>,
    pub non_fell_points: Vec<NonFellPoint>,
    pub is_fell: bool,
    pub is_continuous_trace: bool,
    pub principal_stabilizer: Option<SubgroupSummary>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub is_fell: bool,
    pub is_continuous_trace: bool,
    pub non_fell_points: Vec<(SpectrumPoint, Multiplicity)>,
}

/// Character tables for every subgroup the analysis touches, computed once.
pub struct Spectrum<'a> {
    space: &'a StratifiedGSpace,
    tol: Tolerances,
    group_table: CharacterTable,
    tables: BTreeMap<Vec<usize>, CharacterTable>,
    admissible: Vec<Vec<Subgroup>>,
}

impl<'a> Spectrum<'a> {
    /// `group_table` replaces the computed table of `G` when given.
    pub fn new(space: &'a StratifiedGSpace, group_table: Option<CharacterTable>, tol: Tolerances) -> Result<Self> {
        let g = space.group();
        let group_table = match group_table {
            Some(t) => t,
            None => CharacterTable::compute(g)?,
        };
        let admissible: Vec<Vec<Subgroup>> = (0..space.strata().len())
            .map(|i| {
                space
                    .admissible_limit_subgroups(i)
                    .map(|hs| dedup_up_to_conjugacy(g, &space.strata()[i].stabilizer, hs))
            })
            .collect::<Result<_>>()?;
        let mut needed: Vec<Subgroup> = space.strata().iter().map(|s| s.stabilizer.clone()).collect();
        needed.extend(admissible.iter().flatten().cloned());
        needed.sort();
        needed.dedup();
        let whole = g.whole();
        let computed: Vec<(Vec<usize>, CharacterTable)> = needed
            .par_iter()
            .filter(|h| **h != whole)
            .map(|h| CharacterTable::for_subgroup(g, h).map(|t| (h.members().to_vec(), t)))
            .collect::<Result<_>>()?;
        let mut tables: BTreeMap<Vec<usize>, CharacterTable> = computed.into_iter().collect();
        tables.insert(whole.members().to_vec(), group_table.clone());
        Ok(Spectrum { space, tol, group_table, tables, admissible })
    }

    pub fn space(&self) -> &StratifiedGSpace {
        self.space
    }

    pub fn group_table(&self) -> &CharacterTable {
        &self.group_table
    }

    pub fn table(&self, h: &Subgroup) -> Result<&CharacterTable> {
        self.tables
            .get(h.members())
            .ok_or_else(|| Error::Internal("no character table cached for this subgroup".into()))
    }

    pub fn stabilizer_table(&self, stratum: usize) -> &CharacterTable {
        &self.tables[self.space.stratum(stratum).stabilizer.members()]
    }

    /// Admissible limit subgroups at a stratum, one per `S_z`-conjugacy
    /// class, sorted.
    pub fn admissible(&self, stratum: usize) -> &[Subgroup] {
        &self.admissible[stratum]
    }

    /// One entry per stratum and irreducible of its stabilizer, ordered by
    /// stratum id and then table row.
    pub fn enumerate(&self) -> Vec<SpectrumPoint> {
        (0..self.space.strata().len())
            .flat_map(|stratum| (0..self.stabilizer_table(stratum).len()).map(move |v| SpectrumPoint { stratum, v }))
            .collect()
    }

    pub fn upper_multiplicity(&self, p: SpectrumPoint) -> Result<Multiplicity> {
        let table_s = self.stabilizer_table(p.stratum);
        let v = table_s.irreducible(p.v);
        let mut best: Option<Multiplicity> = None;
        for h in &self.admissible[p.stratum] {
            let table_h = self.table(h)?;
            for (row, r) in table_h.irreducibles().iter().enumerate() {
                let m = restriction_multiplicity(table_s, v, table_h, r, &self.tol)?;
                if best.as_ref().is_none_or(|b| m > b.m_u) {
                    best = Some(Multiplicity { m_u: m, witness_h: h.clone(), witness_r: row });
                }
            }
        }
        let best = best.ok_or_else(|| Error::Internal("empty admissible set".into()))?;
        if best.m_u == 0 || best.m_u as usize > table_s.dim(p.v) {
            return Err(Error::Internal(format!("M_U = {} outside [1, dim V]", best.m_u)));
        }
        Ok(best)
    }

    /// `V = τ|_{S_z}` for a linear character `τ` of `G`.
    pub fn in_o_char(&self, p: SpectrumPoint) -> Result<bool> {
        let table_s = self.stabilizer_table(p.stratum);
        if table_s.dim(p.v) != 1 {
            return Ok(false);
        }
        let v = table_s.irreducible(p.v);
        for row in self.group_table.linear_rows() {
            let tau = self.group_table.irreducible(row);
            if restriction_multiplicity(&self.group_table, tau, table_s, v, &self.tol)? == 1 {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Points of the open set built from linear characters of `G`. Each must
    /// have `M_U = 1`; anything else is reported as an internal error.
    pub fn char_open_set(&self) -> Result<Vec<SpectrumPoint>> {
        let mut out = Vec::new();
        for p in self.enumerate() {
            if self.in_o_char(p)? {
                let m = self.upper_multiplicity(p)?;
                if m.m_u != 1 {
                    return Err(Error::Internal(format!(
                        "point ({}, V{}) restricts from a linear character of G but has M_U = {}",
                        self.space.stratum(p.stratum).id,
                        p.v,
                        m.m_u
                    )));
                }
                out.push(p);
            }
        }
        Ok(out)
    }

    /// The stabilizer map is locally constant exactly when no stratum sees a
    /// limit subgroup other than its own stabilizer.
    pub fn is_continuous_trace(&self) -> Result<bool> {
        for (i, s) in self.space.strata().iter().enumerate() {
            if self.space.admissible_limit_subgroups(i)? != [s.stabilizer.clone()] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn classify(&self) -> Result<Classification> {
        let points = self.enumerate();
        let mults: Vec<Multiplicity> = points.par_iter().map(|&p| self.upper_multiplicity(p)).collect::<Result<_>>()?;
        let non_fell_points: Vec<(SpectrumPoint, Multiplicity)> =
            points.into_iter().zip(mults).filter(|(_, m)| m.m_u > 1).collect();
        Ok(Classification {
            is_fell: non_fell_points.is_empty(),
            is_continuous_trace: self.is_continuous_trace()?,
            non_fell_points,
        })
    }

    pub fn report(&self) -> Result<MultiplicityReport> {
        let g = self.space.group();
        let principal = self.space.principal_orbit_type()?;
        let points = self.enumerate();
        let rows: Vec<PointReport> = points
            .par_iter()
            .map(|&p| {
                let m = self.upper_multiplicity(p)?;
                let stratum = self.space.stratum(p.stratum);
                let table_s = self.stabilizer_table(p.stratum);
                Ok(PointReport {
                    stratum: stratum.id.clone(),
                    stabilizer_order: stratum.stabilizer.order(),
                    v: p.v,
                    dim_v: table_s.dim(p.v),
                    m_u: m.m_u,
                    witness_h: SubgroupSummary::new(g, &m.witness_h),
                    witness_r: m.witness_r,
                    dim_r: self.table(&m.witness_h)?.dim(m.witness_r),
                    index_sz_h: stratum.stabilizer.order() / m.witness_h.order(),
                    index_g_s: principal.as_ref().map(|s| g.order() / s.order()),
                    fell: m.m_u == 1,
                    in_o_char: self.in_o_char(p)?,
                })
            })
            .collect::<Result<_>>()?;
        let non_fell_points = rows
            .iter()
            .filter(|r| !r.fell)
            .map(|r| NonFellPoint {
                stratum: r.stratum.clone(),
                v: r.v,
                m_u: r.m_u,
                witness_h: r.witness_h.clone(),
                witness_r: r.witness_r,
            })
            .collect::<Vec<_>>();
        Ok(MultiplicityReport {
            group_order: g.order(),
            is_fell: non_fell_points.is_empty(),
            is_continuous_trace: self.is_continuous_trace()?,
            points: rows,
            non_fell_points,
            principal_stabilizer: principal.as_ref().map(|s| SubgroupSummary::new(g, s)),
            notes: vec!["M_U is computed at each stratum basepoint and assumed constant along the stratum".into()],
        })
    }

    /// Consequences of the multiplicity theorem that every report must obey.
    pub fn corollary_violations(&self, report: &MultiplicityReport) -> Result<Vec<String>> {
        let g = self.space.group();
        let principal = self.space.principal_orbit_type()?;
        let central_principal = principal.as_ref().is_some_and(|s| s.is_subgroup_of(&g.center()));
        let mut out = Vec::new();
        for row in &report.points {
            let i = self
                .space
                .stratum_index(&row.stratum)
                .ok_or_else(|| Error::Internal(format!("unknown stratum {}", row.stratum)))?;
            let s_z = &self.space.stratum(i).stabilizer;
            let at = format!("({}, V{})", row.stratum, row.v);
            if row.dim_v == 1 && row.m_u != 1 {
                out.push(format!("{at}: dim V = 1 but M_U = {}", row.m_u));
            }
            if let Some(s) = &principal {
                if g.are_conjugate(s, s_z)?.is_some() && row.m_u != 1 {
                    out.push(format!("{at}: principal stabilizer but M_U = {}", row.m_u));
                }
            }
            if central_principal && row.m_u as usize != row.dim_v {
                out.push(format!("{at}: central principal stabilizer but M_U = {} != dim V = {}", row.m_u, row.dim_v));
            }
            if self.space.admissible_limit_subgroups(i)? == [s_z.clone()] && row.m_u != 1 {
                out.push(format!("{at}: stabilizer map continuous but M_U = {}", row.m_u));
            }
            if row.in_o_char && row.m_u != 1 {
                out.push(format!("{at}: in O_char but M_U = {}", row.m_u));
            }
        }
        Ok(out)
    }
}

/// Keeps the first subgroup of each `S`-conjugacy class.
fn dedup_up_to_conjugacy(g: &FiniteGroup, s: &Subgroup, mut hs: Vec<Subgroup>) -> Vec<Subgroup> {
    hs.sort();
    let mut out: Vec<Subgroup> = Vec::new();
    for h in hs {
        let seen =
            out.iter().any(|k| k.order() == h.order() && s.members().iter().any(|&x| g.conjugate_subgroup(x, k) == h));
        if !seen {
            out.push(h);
        }
    }
    out
}

/// Violated inequalities among `M_U`, the witness and the indices.
pub fn check_bounds(row: &PointReport) -> Vec<String> {
    let mut out = Vec::new();
    let at = format!("({}, V{})", row.stratum, row.v);
    let m = row.m_u as usize;
    if m * row.dim_r > row.dim_v {
        out.push(format!("{at}: M_U·dim R = {} > dim V = {}", m * row.dim_r, row.dim_v));
    }
    if m * row.dim_v > row.dim_r * row.index_sz_h {
        out.push(format!("{at}: M_U·dim V = {} > dim R·[S_z:H] = {}", m * row.dim_v, row.dim_r * row.index_sz_h));
    }
    if m * m > row.index_sz_h {
        out.push(format!("{at}: M_U² = {} > [S_z:H] = {}", m * m, row.index_sz_h));
    }
    if let Some(k) = row.index_g_s {
        if m * m > k {
            out.push(format!("{at}: M_U² = {} > [G:S] = {k}", m * m));
        }
    }
    out
}

impl MultiplicityReport {
    pub fn bound_violations(&self) -> Vec<String> {
        self.points.iter().flat_map(check_bounds).collect()
    }

    pub fn to_table(&self) -> String {
        let header = ["stratum", "|S_z|", "V", "dimV", "M_U", "|H|", "R", "fell", "O_char"];
        let rows: Vec<Vec<String>> = self
            .points
            .iter()
            .map(|p| {
                vec![
                    p.stratum.clone(),
                    p.stabilizer_order.to_string(),
                    p.v.to_string(),
                    p.dim_v.to_string(),
                    p.m_u.to_string(),
                    p.witness_h.order.to_string(),
                    p.witness_r.to_string(),
                    yes_no(p.fell),
                    yes_no(p.in_o_char),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap())
            .collect();
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(header.to_vec(), &mut out);
        line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect(), &mut out);
        for r in &rows {
            line(r.iter().map(String::as_str).collect(), &mut out);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "is_fell: {}", self.is_fell);
        let _ = writeln!(out, "is_continuous_trace: {}", self.is_continuous_trace);
        match &self.principal_stabilizer {
            Some(s) => {
                let _ = writeln!(out, "principal stabilizer order: {}", s.order);
            }
            None => {
                let _ = writeln!(out, "principal stabilizer: none");
            }
        }
        for p in &self.non_fell_points {
            let _ = writeln!(
                out,
                "non-Fell: {} V{} M_U={} (|H|={}, R{})",
                p.stratum, p.v, p.m_u, p.witness_h.order, p.witness_r
            );
        }
        out
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}
