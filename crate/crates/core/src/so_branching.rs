//! Branching `SO(n) ↓ SO(n−1)` for integral highest weights.
//!
//! Restriction is multiplicity free and given by interlacing; the Weyl
//! dimension formula certifies each decomposition exactly.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HighestWeight {
    pub n: usize,
    pub entries: Vec<i64>,
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "SO({})({})", self.n, parts.join(","))
    }
}

impl HighestWeight {
    /// Checks dominance: `λ₁ ≥ … ≥ λ_k ≥ 0` for odd `n`,
    /// `λ₁ ≥ … ≥ λ_{k−1} ≥ |λ_k|` for even `n`.
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Weight(format!("SO({n}) is not supported")));
        }
        let k = n / 2;
        if entries.len() != k {
            return Err(Error::Weight(format!("SO({n}) weights have {k} entries, got {}", entries.len())));
        }
        let bad = || Error::Weight(format!("{entries:?} is not dominant for SO({n})"));
        if n == 2 {
            return Ok(HighestWeight { n, entries });
        }
        for w in entries.windows(2).take(k.saturating_sub(2)) {
            if w[0] < w[1] {
                return Err(bad());
            }
        }
        let last = entries[k - 1];
        if n % 2 == 1 {
            if k >= 2 && entries[k - 2] < last {
                return Err(bad());
            }
            if last < 0 {
                return Err(bad());
            }
        } else if k >= 2 && entries[k - 2] < last.abs() {
            return Err(bad());
        }
        Ok(HighestWeight { n, entries })
    }

    pub fn trivial(n: usize) -> Self {
        HighestWeight { n, entries: vec![0; n / 2] }
    }
}

/// Interlacing weights of `SO(n−1)` occurring in `λ`, in lexicographic order.
pub fn branch(lambda: &HighestWeight) -> Result<Vec<HighestWeight>> {
    let n = lambda.n;
    if n < 3 {
        return Err(Error::Weight("branching needs n >= 3".into()));
    }
    HighestWeight::new(n, lambda.entries.clone())?;
    let l = &lambda.entries;
    let k = n / 2;
    // bounds[i] = (low, high) for μ_i
    let bounds: Vec<(i64, i64)> = if n % 2 == 1 {
        // SO(2k+1) ↓ SO(2k): λ₁ ≥ μ₁ ≥ λ₂ ≥ … ≥ μ_{k−1} ≥ λ_k ≥ |μ_k|
        (0..k).map(|i| if i + 1 < k { (l[i + 1], l[i]) } else { (-l[i], l[i]) }).collect()
    } else {
        // SO(2k) ↓ SO(2k−1): λ₁ ≥ μ₁ ≥ λ₂ ≥ … ≥ μ_{k−1} ≥ |λ_k|
        (0..k - 1).map(|i| (if i + 1 == k - 1 { l[i + 1].abs() } else { l[i + 1] }, l[i])).collect()
    };
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(bounds.len());
    fn rec(bounds: &[(i64, i64)], current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = current.len();
        if i == bounds.len() {
            out.push(current.clone());
            return;
        }
        for m in bounds[i].0..=bounds[i].1 {
            current.push(m);
            rec(bounds, current, out);
            current.pop();
        }
    }
    rec(&bounds, &mut current, &mut out);
    out.into_iter().map(|entries| HighestWeight::new(n - 1, entries)).collect()
}

/// Weyl dimension formula for types B and D; `SO(2)` weights have dimension 1.
pub fn weyl_dimension(lambda: &HighestWeight) -> Result<u64> {
    let n = lambda.n;
    HighestWeight::new(n, lambda.entries.clone())?;
    if n == 2 {
        return Ok(1);
    }
    let k = n / 2;
    let overflow = || Error::Overflow(format!("dimension of {lambda} exceeds 64 bits"));
    // doubled ρ-shifted coordinates keep type B integral: 2ρ_i = 2k − 2i + 1
    let two_rho: Vec<i128> =
        (0..k).map(|i| if n % 2 == 1 { 2 * (k - i) as i128 - 1 } else { 2 * (k - i - 1) as i128 }).collect();
    let two_l: Vec<i128> = lambda.entries.iter().zip(&two_rho).map(|(&x, r)| 2 * x as i128 + r).collect();
    let mut dim = Ratio::from_integer(1i128);
    let mul = |acc: Ratio<i128>, num: i128, den: i128| -> Result<Ratio<i128>> {
        let (a, b) =
            (acc.numer().checked_mul(num).ok_or_else(overflow)?, acc.denom().checked_mul(den).ok_or_else(overflow)?);
        Ok(Ratio::new(a, b))
    };
    for i in 0..k {
        for j in i + 1..k {
            let num = two_l[i] * two_l[i] - two_l[j] * two_l[j];
            let den = two_rho[i] * two_rho[i] - two_rho[j] * two_rho[j];
            dim = mul(dim, num, den)?;
        }
        if n % 2 == 1 {
            dim = mul(dim, two_l[i], two_rho[i])?;
        }
    }
    if !dim.is_integer() || *dim.numer() <= 0 {
        return Err(Error::Internal(format!("non-integral dimension {dim} for {lambda}")));
    }
    u64::try_from(*dim.numer()).map_err(|_| overflow())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchingCheck {
    pub weight: HighestWeight,
    pub dimension: u64,
    pub branches: Vec<(HighestWeight, u64)>,
    pub multiplicity_free: bool,
    pub dimension_sum: u64,
    pub passed: bool,
}

/// Multiplicity freeness and `Σ_μ dim μ = dim λ`. When both hold, the
/// corresponding spectrum point of `C₀(ℝⁿ)⋊SO(n)` has `M_U = 1`.
pub fn verify_branching(lambda: &HighestWeight) -> Result<BranchingCheck> {
    let mus = branch(lambda)?;
    let dimension = weyl_dimension(lambda)?;
    let branches: Vec<(HighestWeight, u64)> =
        mus.into_iter().map(|m| weyl_dimension(&m).map(|d| (m, d))).collect::<Result<_>>()?;
    let mut sorted: Vec<&HighestWeight> = branches.iter().map(|(m, _)| m).collect();
    sorted.sort();
    let multiplicity_free = sorted.windows(2).all(|w| w[0] != w[1]);
    let dimension_sum = branches.iter().map(|(_, d)| d).sum();
    Ok(BranchingCheck {
        passed: multiplicity_free && dimension_sum == dimension,
        weight: lambda.clone(),
        dimension,
        branches,
        multiplicity_free,
        dimension_sum,
    })
}

/// Every dominant integral weight of `SO(n)` with entries bounded by
/// `max_entry` in absolute value.
pub fn dominant_weights(n: usize, max_entry: i64) -> Vec<HighestWeight> {
    let k = n / 2;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, max: i64, current: &mut Vec<i64>, out: &mut Vec<HighestWeight>) {
        if current.len() == k {
            if let Ok(w) = HighestWeight::new(n, current.clone()) {
                out.push(w);
            }
            return;
        }
        let hi = current.last().copied().unwrap_or(max);
        let lo = if n.is_multiple_of(2) && current.len() + 1 == k { -hi } else { 0 };
        for x in (lo..=hi).rev() {
            current.push(x);
            rec(n, k, max, current, out);
            current.pop();
        }
    }
    rec(n, k, max_entry, &mut current, &mut out);
    out
}

/// Checks every weight with entries up to `max_entry` for `3 ≤ n ≤ max_n`.
pub fn sweep(max_entry: i64, max_n: usize) -> Result<Vec<BranchingCheck>> {
    use rayon::prelude::*;
    let weights: Vec<HighestWeight> = (3..=max_n).flat_map(|n| dominant_weights(n, max_entry)).collect();
    weights.par_iter().map(verify_branching).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, e: &[i64]) -> HighestWeight {
        HighestWeight::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(HighestWeight::new(5, vec![1, 2]).is_err());
        assert!(HighestWeight::new(5, vec![1, -1]).is_err());
        assert!(HighestWeight::new(6, vec![2, 1, -1]).is_ok());
        assert!(HighestWeight::new(6, vec![2, 1, -2]).is_err());
        assert!(HighestWeight::new(4, vec![1]).is_err());
        assert!(HighestWeight::new(2, vec![-3]).is_ok());
    }

    #[test]
    fn so4_dimensions() {
        assert_eq!(weyl_dimension(&w(4, &[1, 1])).unwrap(), 3);
        assert_eq!(weyl_dimension(&w(4, &[1, -1])).unwrap(), 3);
        assert_eq!(weyl_dimension(&w(6, &[1, 0, 0])).unwrap(), 6);
        assert_eq!(weyl_dimension(&w(7, &[1, 0, 0])).unwrap(), 7);
        assert_eq!(weyl_dimension(&w(7, &[1, 1, 0])).unwrap(), 21);
    }

    #[test]
    fn dominant_enumeration() {
        assert_eq!(dominant_weights(3, 3).len(), 4);
        // (a, b) with a ≥ |b|, a ≤ 1: (0,0), (1,1), (1,0), (1,-1)
        assert_eq!(dominant_weights(4, 1).len(), 4);
    }
}
