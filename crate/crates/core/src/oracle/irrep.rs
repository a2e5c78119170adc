//! Explicit unitary matrices for an irreducible character.
//!
//! The isotypic block of the left regular representation for `χ` is the
//! image of `e_χ = (d/|H|) Σ_t conj(χ(t)) L_t`. Right translations commute
//! with `L`, so an eigenspace of a random Hermitian combination of them,
//! restricted to the block, is a single copy of the irreducible.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chars::{CharacterTable, C64};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

const BASIS_SEED: u64 = 0x5eed;
const ATTEMPTS: u64 = 8;

#[derive(Clone, Debug)]
pub struct IrrepMatrices {
    subgroup: Subgroup,
    dim: usize,
    /// `matrices[k]` represents `subgroup.members()[k]`.
    matrices: Vec<DMatrix<C64>>,
}

impl IrrepMatrices {
    pub fn from_table(g: &FiniteGroup, table: &CharacterTable, row: usize, tol: f64) -> Result<Self> {
        let h = table.subgroup().clone();
        let members = h.members().to_vec();
        let n = members.len();
        let d = table.dim(row);
        let chi = table.irreducible(row);
        let pos = |x: usize| members.binary_search(&x).expect("closed under multiplication");

        let left: Vec<DMatrix<C64>> = members
            .iter()
            .map(|&t| {
                let mut m = DMatrix::zeros(n, n);
                for (k, &x) in members.iter().enumerate() {
                    m[(pos(g.mul(t, x)), k)] = C64::new(1.0, 0.0);
                }
                m
            })
            .collect();
        let mut projector = DMatrix::<C64>::zeros(n, n);
        for (k, &t) in members.iter().enumerate() {
            projector += &left[k] * (table.value(chi, t).conj() * (d as f64 / n as f64));
        }
        let block = eigenvectors_near(&projector, 1.0, d * d)?;

        for attempt in 0..ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(BASIS_SEED);
            rng.set_stream(attempt);
            // Hermitian combination of right translations x ↦ x s⁻¹
            let mut herm = DMatrix::<C64>::zeros(n, n);
            for &s in &members {
                let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let s_inv = g.inv(s);
                for (k, &x) in members.iter().enumerate() {
                    herm[(pos(g.mul(x, s_inv)), k)] += c;
                    herm[(pos(g.mul(x, s)), k)] += c.conj();
                }
            }
            let restricted = block.adjoint() * &herm * &block;
            let eig = SymmetricEigen::new(restricted);
            let mut order: Vec<usize> = (0..d * d).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            if d < d * d && (eig.eigenvalues[order[d]] - eig.eigenvalues[order[d - 1]]).abs() < 1e-6 {
                continue;
            }
            let mut coords = DMatrix::<C64>::zeros(d * d, d);
            for (j, &k) in order[..d].iter().enumerate() {
                coords.set_column(j, &eig.eigenvectors.column(k));
            }
            let basis = &block * coords;
            let matrices: Vec<DMatrix<C64>> = left.iter().map(|l| basis.adjoint() * l * &basis).collect();
            let irrep = IrrepMatrices { subgroup: h.clone(), dim: d, matrices };
            if irrep.check(g, table, row, tol).is_ok() {
                return Ok(irrep);
            }
        }
        Err(Error::Oracle(format!("could not isolate irreducible {row} of a subgroup of order {n}")))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// The matrix of a parent element lying in the subgroup.
    pub fn matrix(&self, parent_element: usize) -> &DMatrix<C64> {
        let k = self.subgroup.members().binary_search(&parent_element).expect("element of the subgroup");
        &self.matrices[k]
    }

    /// Unitarity, the homomorphism law, and agreement with the character.
    pub fn check(&self, g: &FiniteGroup, table: &CharacterTable, row: usize, tol: f64) -> Result<()> {
        let identity = DMatrix::<C64>::identity(self.dim, self.dim);
        let chi = table.irreducible(row);
        for &s in self.subgroup.members() {
            let vs = self.matrix(s);
            let unitarity = (vs * vs.adjoint() - &identity).norm();
            let trace = (vs.trace() - table.value(chi, s)).norm();
            if unitarity > tol || trace > tol {
                return Err(Error::Oracle(format!("unitarity {unitarity:.2e}, trace {trace:.2e}")));
            }
            for &t in self.subgroup.members() {
                let hom = (vs * self.matrix(t) - self.matrix(g.mul(s, t))).norm();
                if hom > tol {
                    return Err(Error::Oracle(format!("homomorphism residual {hom:.2e}")));
                }
            }
        }
        Ok(())
    }
}

/// Orthonormal eigenvectors of a Hermitian matrix whose eigenvalues are
/// within 1e-6 of `target`; exactly `expected` of them.
fn eigenvectors_near(m: &DMatrix<C64>, target: f64, expected: usize) -> Result<DMatrix<C64>> {
    let eig = SymmetricEigen::new(m.clone());
    let picked: Vec<usize> = (0..m.nrows()).filter(|&k| (eig.eigenvalues[k] - target).abs() < 1e-6).collect();
    if picked.len() != expected {
        return Err(Error::Oracle(format!("isotypic block has dimension {}, expected {expected}", picked.len())));
    }
    let mut out = DMatrix::zeros(m.nrows(), expected);
    for (j, &k) in picked.iter().enumerate() {
        out.set_column(j, &eig.eigenvectors.column(k));
    }
    Ok(out)
}
