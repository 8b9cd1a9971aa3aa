//! Exact integer and rational linear algebra.
//!
//! Determinants are computed fraction-free over the integers with Bareiss
//! elimination, inverses by Gauss-Jordan elimination over the rationals, and
//! the inverses of atomic exponent matrices by closed formulas. The closed
//! forms deliberately share no code with [`invert_matrix`] so the two can be
//! checked against each other.

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::potential::{Atom, AtomKind};

/// Arbitrary-precision integer used throughout the crate.
pub type Int = BigInt;
/// Arbitrary-precision rational used throughout the crate.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("matrix is singular")]
    Singular,
    #[error("row {row} has length {len}, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("matrix must have at least one row")]
    Empty,
}

/// Square integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    /// Builds a square matrix from its rows.
    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self, LinAlgError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(LinAlgError::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(LinAlgError::RaggedRow {
                    row,
                    len: r.len(),
                    expected: dim,
                });
            }
            entries.extend(r);
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![Int::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set_entry(i, i, Int::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.dim + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: Int) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Int]> {
        self.entries.chunks(self.dim)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set_entry(j, i, self.entry(i, j).clone());
            }
        }
        t
    }
}

/// Square rational matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinAlgError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(LinAlgError::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(LinAlgError::RaggedRow {
                    row,
                    len: r.len(),
                    expected: dim,
                });
            }
            entries.extend(r);
        }
        Ok(RatMatrix { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        RatMatrix {
            dim,
            entries: vec![Rat::zero(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.dim + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: Rat) {
        self.entries[i * self.dim + j] = value;
    }

    /// Sum of the entries in row `i`.
    pub fn row_sum(&self, i: usize) -> Rat {
        (0..self.dim).map(|j| self.entry(i, j).clone()).sum()
    }

    /// Sum of the entries in column `j`.
    pub fn column_sum(&self, j: usize) -> Rat {
        (0..self.dim).map(|i| self.entry(i, j).clone()).sum()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set_entry(j, i, self.entry(i, j).clone());
            }
        }
        t
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.dim).map(|i| self.entry(i, j).clone()).collect()
    }

    /// Product with an integer matrix on the left: `a * self`.
    pub fn left_mul_int(&self, a: &IntMatrix) -> RatMatrix {
        assert_eq!(self.dim, a.dim());
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = Rat::zero();
                for k in 0..self.dim {
                    acc += Rat::from(a.entry(i, k).clone()) * self.entry(k, j);
                }
                out.set_entry(i, j, acc);
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }
}

/// Determinant by fraction-free Bareiss elimination.
///
/// Every intermediate value is a minor of the input, so the computation stays
/// in the integers with no rational bookkeeping.
pub fn determinant(matrix: &IntMatrix) -> Int {
    let n = matrix.dim();
    let mut m: Vec<Vec<Int>> = matrix.rows().map(|r| r.to_vec()).collect();
    let mut sign = 1i8;
    let mut prev = Int::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Int::zero();
            };
            m.swap(k, pivot);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = Int::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Inverse by Gauss-Jordan elimination over the rationals.
pub fn invert_matrix(matrix: &IntMatrix) -> Result<RatMatrix, LinAlgError> {
    let n = matrix.dim();
    let mut a: Vec<Vec<Rat>> = matrix
        .rows()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Rat> = r.iter().cloned().map(Rat::from).collect();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Err(LinAlgError::Singular);
        };
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let sub = &f * &a[col][j];
                    a[r][j] -= sub;
                }
            }
        }
    }
    RatMatrix::from_rows(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverse of an atomic exponent matrix by closed formula.
///
/// The result is indexed by the atom's local positions, in the same order as
/// `atom.indices`. For a loop with exponents `b_1, ..., b_k` the determinant is
/// `b_1 ... b_k + (-1)^{k-1}`; for a chain it is `b_1 ... b_k`; for a Fermat
/// monomial `x^b` it is `b`. This function must stay independent of
/// [`invert_matrix`]: the two are compared in tests.
pub fn atom_inverse(atom: &Atom) -> RatMatrix {
    let k = atom.exponents.len();
    let b = &atom.exponents;
    match atom.kind {
        AtomKind::Fermat => {
            let mut m = RatMatrix::zero(1);
            m.set_entry(0, 0, Rat::new(Int::one(), b[0].clone()));
            m
        }
        AtomKind::Loop | AtomKind::Chain => {
            // prefix[i] = b_0 ... b_{i-1}, suffix[i] = b_i ... b_{k-1}
            let mut prefix = vec![Int::one(); k + 1];
            for i in 0..k {
                prefix[i + 1] = &prefix[i] * &b[i];
            }
            let mut suffix = vec![Int::one(); k + 1];
            for i in (0..k).rev() {
                suffix[i] = &suffix[i + 1] * &b[i];
            }
            let det = match atom.kind {
                AtomKind::Loop => {
                    let corner = if k % 2 == 1 { Int::one() } else { -Int::one() };
                    &prefix[k] + corner
                }
                _ => prefix[k].clone(),
            };
            let mut m = RatMatrix::zero(k);
            for i in 0..k {
                for j in 0..k {
                    let num = if j >= i {
                        let mag = &prefix[i] * &suffix[j + 1];
                        if (j - i) % 2 == 0 {
                            mag
                        } else {
                            -mag
                        }
                    } else if atom.kind == AtomKind::Loop {
                        let mut mag = Int::one();
                        for t in j + 1..i {
                            mag *= &b[t];
                        }
                        if (k - i + j) % 2 == 0 {
                            mag
                        } else {
                            -mag
                        }
                    } else {
                        Int::zero()
                    };
                    m.set_entry(i, j, Rat::new(num, det.clone()));
                }
            }
            m
        }
    }
}

/// Assembles the block inverses of a full atom decomposition into the inverse
/// of the global exponent matrix.
///
/// Entry `(s, t)` of each atom's local inverse lands at global position
/// `(indices[s], indices[t])`; all cross-atom entries are zero because the
/// exponent matrix is block-diagonal up to the simultaneous row/column
/// permutation encoded by the atom index lists.
pub fn assemble_atom_inverses(atoms: &[Atom], dim: usize) -> RatMatrix {
    let mut out = RatMatrix::zero(dim);
    for atom in atoms {
        let local = atom_inverse(atom);
        for (s, &gi) in atom.indices.iter().enumerate() {
            for (t, &gj) in atom.indices.iter().enumerate() {
                out.set_entry(gi, gj, local.entry(s, t).clone());
            }
        }
    }
    out
}
