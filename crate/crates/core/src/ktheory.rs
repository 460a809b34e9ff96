//! `KQ¹` of tori and the `KSp` groups of a point.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest torus dimension supported by the counting functions.
pub const MAX_TORUS_DIM: usize = 64;
/// Largest dimension for which only singletons and pairs carry torsion.
pub const MAX_CENSUS_DIM: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KTheoryError {
    #[error("dimension {n} exceeds the limit {max}")]
    DimensionTooLarge { n: usize, max: usize },
}

/// `(Z/2)^z2_count ⊕ Z^z_count`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbGroupSum {
    pub z2_count: u128,
    pub z_count: u128,
}

impl std::ops::Add for AbGroupSum {
    type Output = AbGroupSum;

    fn add(self, other: AbGroupSum) -> AbGroupSum {
        AbGroupSum {
            z2_count: self.z2_count + other.z2_count,
            z_count: self.z_count + other.z_count,
        }
    }
}

impl AbGroupSum {
    pub fn times(self, k: u128) -> AbGroupSum {
        AbGroupSum {
            z2_count: self.z2_count * k,
            z_count: self.z_count * k,
        }
    }
}

impl fmt::Display for AbGroupSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.z2_count > 0 {
            parts.push(format!("Z/2^{}", self.z2_count));
        }
        if self.z_count > 0 {
            parts.push(format!("Z^{}", self.z_count));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointGroup {
    Zero,
    Z,
    Z2,
}

impl PointGroup {
    fn as_sum(self) -> AbGroupSum {
        match self {
            PointGroup::Zero => AbGroupSum::default(),
            PointGroup::Z => AbGroupSum {
                z2_count: 0,
                z_count: 1,
            },
            PointGroup::Z2 => AbGroupSum {
                z2_count: 1,
                z_count: 0,
            },
        }
    }
}

/// `KSp^{-i}(pt)` for `i = 0..7`.
pub const KSP_TABLE: [PointGroup; 8] = [
    PointGroup::Z,
    PointGroup::Zero,
    PointGroup::Zero,
    PointGroup::Zero,
    PointGroup::Z,
    PointGroup::Z2,
    PointGroup::Z2,
    PointGroup::Zero,
];

/// `KSp^{j}(pt)` for any integer `j`, by 8-periodicity.
pub fn ksp(j: i64) -> PointGroup {
    KSP_TABLE[(-j).rem_euclid(8) as usize]
}

fn check(n: usize) -> Result<(), KTheoryError> {
    if n > MAX_TORUS_DIM {
        Err(KTheoryError::DimensionTooLarge {
            n,
            max: MAX_TORUS_DIM,
        })
    } else {
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

/// Closed form: `Z/2` for every `k ≡ 1, 2` and `Z` for every `k ≡ 3, 7 (mod 8)`,
/// each with multiplicity `C(n, k)`.
pub fn kq1_torus(n: usize) -> Result<AbGroupSum, KTheoryError> {
    check(n)?;
    let mut out = AbGroupSum::default();
    for k in 1..=n {
        match k % 8 {
            1 | 2 => out.z2_count += binomial(n, k),
            3 | 7 => out.z_count += binomial(n, k),
            _ => {}
        }
    }
    Ok(out)
}

/// Stable splitting `𝕋ⁿ ≃ 𝕋¹ ∧ …`: repeatedly applies
/// `R_n[i] = R_1[i] + R_{n-1}[i] + R_{n-1}[i+1]`, where `R_m[i]` is the reduced
/// `KQ^i` of `𝕋^m` and `R_1[i] = KSp^{i-7}(pt)`.
pub fn kq1_torus_recursive(n: usize) -> Result<AbGroupSum, KTheoryError> {
    check(n)?;
    let base: [AbGroupSum; 8] = std::array::from_fn(|i| ksp(i as i64 - 7).as_sum());
    let mut current = [AbGroupSum::default(); 8];
    for _ in 0..n {
        current = std::array::from_fn(|i| base[i] + current[i] + current[(i + 1) % 8]);
    }
    Ok(current[1])
}

/// Number of independent mod-2 spectral-flow bits; equals the number of
/// subsets of size 1 or 2.
pub fn torsion_bit_census(n: usize) -> Result<u128, KTheoryError> {
    if n > MAX_CENSUS_DIM {
        return Err(KTheoryError::DimensionTooLarge {
            n,
            max: MAX_CENSUS_DIM,
        });
    }
    let z2 = kq1_torus(n)?.z2_count;
    assert_eq!(z2, binomial(n, 1) + binomial(n, 2));
    Ok(z2)
}
