//! Exact integer linear algebra: Smith normal form, kernels of integer
//! matrices acting on `Z_d^n`, and fraction-free determinants.
//!
//! All arithmetic is arbitrary precision.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: alloc::vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. An empty slice gives a
    /// `0×0` matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::Ragged);
            }
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Entries as machine integers, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// The submatrix with the given row and column indices, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `A·v mod d` for a vector of residues.
    pub fn mul_vec_mod(&self, v: &[u64], d: u64) -> Result<Vec<u64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let dd = BigInt::from(d);
        Ok((0..self.rows)
            .map(|i| {
                let acc: BigInt = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, &x)| a * BigInt::from(x))
                    .sum();
                residue(&acc, &dd)
            })
            .collect())
    }

    /// Entry reduced into `[0, d)`.
    pub fn entry_mod(&self, i: usize, j: usize, d: u64) -> u64 {
        residue(&self[(i, j)], &BigInt::from(d))
    }

    // Elementary operations used by the Smith normal form.

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -core::mem::take(x);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = -core::mem::take(x);
        }
    }

    /// row[dst] += k·row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let delta = k * &self[(src, j)];
            self[(dst, j)] += delta;
        }
    }

    /// col[dst] += k·col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let delta = k * &self[(i, src)];
            self[(i, dst)] += delta;
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

fn residue(x: &BigInt, d: &BigInt) -> u64 {
    x.mod_floor(d)
        .to_u64()
        .expect("residue below a u64 modulus")
}

/// `A = U·S·V` with `U`, `V` unimodular and `S` diagonal, its nonzero
/// diagonal entries positive and forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// `V⁻¹`; its columns span the kernel directions.
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal of `S` (length `min(rows, cols)`).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .filter(|x| !x.is_zero())
            .count()
    }
}

/// Smallest nonzero `|a_ij|` with `i, j ≥ t`, ties broken by lowest `(i, j)`.
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form by elementary row and column operations, using the
/// smallest-absolute-value pivot rule.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows, a.cols);
    let mut s = a.clone();
    // Invariant: p·A·q = s, with p_inv = p⁻¹ and q_inv = q⁻¹.
    let mut p = IntMatrix::identity(rows);
    let mut p_inv = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);
    let mut q_inv = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = find_pivot(&s, t) {
            s.swap_rows(t, pi);
            p.swap_rows(t, pi);
            p_inv.swap_cols(t, pi);
            s.swap_cols(t, pj);
            q.swap_cols(t, pj);
            q_inv.swap_rows(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let k = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row(i, t, &k);
                p.add_row(i, t, &k);
                p_inv.add_col(t, i, &-&k);
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let k = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col(j, t, &k);
                q.add_col(j, t, &k);
                q_inv.add_row(t, j, &-&k);
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column t are clear; enforce divisibility of the rest.
            let pivot = s[(t, t)].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    p.add_row(t, i, &one);
                    p_inv.add_col(i, t, &-one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            p.negate_row(t);
            p_inv.negate_col(t);
        }
    }

    SmithDecomposition {
        u: p_inv,
        s,
        v: q_inv,
        v_inv: q,
    }
}

/// Generators of `{x ∈ Z_d^n : A·x ≡ 0 (mod d)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub modulus: u64,
    pub generators: Vec<Vec<u64>>,
}

impl KernelBasis {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Kernel of `x ↦ A·x` over `Z_d`.
///
/// With `A = U·S·V` the condition becomes `s_i·y_i ≡ 0` for `y = V·x`, so
/// `y_i` ranges over multiples of `d / gcd(s_i, d)` (all of `Z_d` when `i`
/// exceeds the diagonal), and `x = V⁻¹·y`.
pub fn kernel_mod(a: &IntMatrix, d: u64) -> Result<KernelBasis, LinalgError> {
    if d < 2 {
        return Err(LinalgError::BadModulus(d));
    }
    let snf = smith_normal_form(a);
    let dd = BigInt::from(d);
    let diag = snf.invariant_factors();
    let mut generators = Vec::new();
    for i in 0..a.cols {
        let s_i = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let step = &dd / s_i.gcd(&dd);
        let g: Vec<u64> = (0..a.cols)
            .map(|r| residue(&(&snf.v_inv[(r, i)] * &step), &dd))
            .collect();
        if g.iter().any(|&x| x != 0) {
            generators.push(g);
        }
    }
    Ok(KernelBasis {
        modulus: d,
        generators,
    })
}

/// True iff `A·x ≡ 0 (mod d)` forces `x = 0`.
pub fn kernel_trivial(a: &IntMatrix, d: u64) -> Result<bool, LinalgError> {
    Ok(kernel_mod(a, d)?.is_trivial())
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det_exact(a: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[(k, k)].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                m[(i, j)] = v / &prev;
            }
        }
        prev = m[(k, k)].clone();
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    Ok(sign * &m[(n - 1, n - 1)])
}
