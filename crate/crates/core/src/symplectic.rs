//! Integer symplectic matrices, the image of the mapping class group acting
//! on `H_1(Σ_g; Z)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::surface::{intersection, HomologyClass};

/// A `2g × 2g` integer matrix with `MᵀJM = J`, stored row-major.
///
/// Column `j` is the image of the `j`-th basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpMatrix {
    dim: usize,
    entries: Vec<i64>,
}

/// The block form `J` with `J[2i][2i+1] = 1`, `J[2i+1][2i] = -1`.
fn form_entry(i: usize, j: usize) -> i64 {
    if i / 2 != j / 2 {
        0
    } else if i.is_multiple_of(2) && j == i + 1 {
        1
    } else if i % 2 == 1 && j + 1 == i {
        -1
    } else {
        0
    }
}

impl SpMatrix {
    /// Builds and checks a matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<i64>) -> Result<Self> {
        if !dim.is_multiple_of(2) {
            return Err(Error::Dimension {
                expected: dim + 1,
                found: dim,
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let m = SpMatrix { dim, entries };
        if !m.preserves_form()? {
            return Err(Error::NotSymplectic);
        }
        Ok(m)
    }

    pub fn identity(genus: u32) -> Self {
        let dim = 2 * genus as usize;
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        SpMatrix { dim, entries }
    }

    /// The matrix of `t_c^k`: `v ↦ v + k⟨v,c⟩c`.
    pub fn transvection(c: &HomologyClass, k: i64) -> Result<Self> {
        let dim = c.len();
        let cv = c.coefficients();
        // ⟨v,c⟩ = Σ_j v_j (Jc)_j
        let jc: Vec<i64> = (0..dim)
            .map(|j| (0..dim).map(|l| form_entry(j, l) * cv[l]).sum())
            .collect();
        let mut entries = vec![0i64; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let delta = i64::from(i == j);
                let term = cv[i]
                    .checked_mul(jc[j])
                    .and_then(|t| t.checked_mul(k))
                    .and_then(|t| t.checked_add(delta))
                    .ok_or(Error::Overflow("transvection matrix"))?;
                entries[i * dim + j] = term;
            }
        }
        SpMatrix::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn genus(&self) -> u32 {
        (self.dim / 2) as u32
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == SpMatrix::identity(self.genus())
    }

    pub fn column(&self, j: usize) -> HomologyClass {
        HomologyClass::new((0..self.dim).map(|i| self.get(i, j)).collect())
    }

    pub fn apply(&self, v: &HomologyClass) -> Result<HomologyClass> {
        if v.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: v.len(),
            });
        }
        let x = v.coefficients();
        (0..self.dim)
            .map(|i| {
                (0..self.dim).try_fold(0i64, |acc, j| {
                    self.get(i, j)
                        .checked_mul(x[j])
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(Error::Overflow("matrix application"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(HomologyClass::new)
    }

    fn raw_mul(&self, rhs: &SpMatrix) -> Result<SpMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = a
                        .checked_mul(rhs.get(l, j))
                        .and_then(|t| entries[i * n + j].checked_add(t))
                        .ok_or(Error::Overflow("matrix product"))?;
                    entries[i * n + j] = t;
                }
            }
        }
        Ok(SpMatrix { dim: n, entries })
    }

    /// `self · rhs`; `rhs` acts first.
    pub fn mul(&self, rhs: &SpMatrix) -> Result<SpMatrix> {
        let m = self.raw_mul(rhs)?;
        if !m.preserves_form()? {
            return Err(Error::NotSymplectic);
        }
        Ok(m)
    }

    /// `J⁻¹ Mᵀ J`, exact because `M` is symplectic.
    pub fn inverse(&self) -> SpMatrix {
        let n = self.dim;
        let mut entries = vec![0i64; n * n];
        // (J⁻¹ Mᵀ J)_{ij} = Σ_{k,l} (−J)_{ik} M_{lk} J_{lj}; J has one entry per row.
        for i in 0..n {
            let k = i ^ 1;
            let jik = -form_entry(i, k);
            for j in 0..n {
                let l = j ^ 1;
                let jlj = form_entry(l, j);
                entries[i * n + j] = jik * self.get(l, k) * jlj;
            }
        }
        SpMatrix { dim: n, entries }
    }

    pub fn pow(&self, k: i64) -> Result<SpMatrix> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = SpMatrix::identity(self.genus());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Checks `⟨Mu, Mv⟩ = ⟨u, v⟩` on all basis pairs, i.e. `MᵀJM = J`.
    pub fn preserves_form(&self) -> Result<bool> {
        let cols: Vec<HomologyClass> = (0..self.dim).map(|j| self.column(j)).collect();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if intersection(&cols[i], &cols[j])? != form_entry(i, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// First basis index on which the two matrices differ.
    pub fn first_difference(&self, other: &SpMatrix) -> Option<usize> {
        (0..self.dim).find(|&j| self.column(j) != other.column(j))
    }
}

impl fmt::Display for SpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| format!("{:>3}", self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_symplectic() {
        let id = SpMatrix::identity(3);
        assert!(id.preserves_form().unwrap());
        assert!(id.is_identity());
    }

    #[test]
    fn non_symplectic_rejected() {
        // diag(2, 1) scales the pairing
        assert_eq!(SpMatrix::new(2, vec![2, 0, 0, 1]), Err(Error::NotSymplectic));
        assert!(SpMatrix::new(3, vec![0; 9]).is_err());
    }

    #[test]
    fn transvection_and_inverse() {
        let c = HomologyClass::new(vec![1, 0, 0, 1]);
        let t = SpMatrix::transvection(&c, 1).unwrap();
        let tinv = SpMatrix::transvection(&c, -1).unwrap();
        assert_eq!(t.inverse(), tinv);
        assert!(t.mul(&tinv).unwrap().is_identity());
        assert_eq!(t.pow(3).unwrap(), SpMatrix::transvection(&c, 3).unwrap());
        assert_eq!(t.pow(-2).unwrap(), SpMatrix::transvection(&c, -2).unwrap());
    }

    #[test]
    fn transvection_matches_vector_formula() {
        let c = HomologyClass::new(vec![1, -2, 0, 3]);
        let v = HomologyClass::new(vec![4, 1, -1, 2]);
        let t = SpMatrix::transvection(&c, 1).unwrap();
        let expected = crate::surface::transvect(&c, &v, 1).unwrap();
        assert_eq!(t.apply(&v).unwrap(), expected);
    }
}
