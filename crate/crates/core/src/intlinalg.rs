//! Exact integer matrices, Smith normal form and cokernels.
//!
//! All arithmetic is carried out on [`BigInt`], so no entry can overflow
//! regardless of how far intermediate values grow during elimination.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row slices. Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            entries.extend(row.iter().map(|&x| x.into()));
        }
        Self {
            rows: nrows,
            cols: ncols,
            entries,
        }
    }

    /// Builds a `rows x columns.len()` matrix whose j-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column has wrong length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
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

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
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

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn sub(&self, other: &IntMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(BigInt::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square matrices only;
    /// the empty matrix has determinant 1.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        if n == 0 {
            BigInt::one()
        } else {
            sign * &a[(n - 1, n - 1)]
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// The diagonal `(0,0), (1,1), ...` up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * &self[(source, j)];
            self[(target, j)] += delta;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = factor * &self[(i, source)];
            self[(i, target)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let delta = a * &rhs[(k, j)];
                    out[(i, j)] += delta;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{})[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `d == u * m * v`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries of `d`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d
            .diagonal()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form of an arbitrary integer matrix.
///
/// Returns `D, U, V` with `D = U·M·V`, `U` and `V` unimodular, `D` diagonal
/// with nonnegative entries and `d_i | d_{i+1}`. The pivot is always the
/// nonzero entry of minimal absolute value in the remaining block (first in
/// row-major order on ties), which keeps the output deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Reduce row and column t against the pivot; restart with a smaller
        // pivot whenever a remainder survives.
        let mut dirty = false;
        for i in t + 1..rows {
            if d[(i, t)].is_zero() {
                continue;
            }
            let q = -d[(i, t)].div_floor(&d[(t, t)]);
            d.add_row_multiple(i, t, &q);
            u.add_row_multiple(i, t, &q);
            dirty |= !d[(i, t)].is_zero();
        }
        for j in t + 1..cols {
            if d[(t, j)].is_zero() {
                continue;
            }
            let q = -d[(t, j)].div_floor(&d[(t, t)]);
            d.add_col_multiple(j, t, &q);
            v.add_col_multiple(j, t, &q);
            dirty |= !d[(t, j)].is_zero();
        }
        if dirty {
            continue;
        }

        // Pivot now isolated; enforce divisibility over the remaining block.
        if let Some((bi, _)) = non_divisible_entry(&d, t) {
            let one = BigInt::one();
            d.add_row_multiple(t, bi, &one);
            u.add_row_multiple(t, bi, &one);
            continue;
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    SmithForm { d, u, v }
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let a = d[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn non_divisible_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let p = &d[(t, t)];
    for i in t + 1..d.rows {
        for j in t + 1..d.cols {
            if !d[(i, j)].is_multiple_of(p) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`
/// with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "decimal_list")]
    pub torsion: Vec<BigInt>,
}

/// Torsion coefficients travel as JSON integers when they fit in `u64` and as
/// decimal strings otherwise.
mod decimal_list {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Int(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            match u64::try_from(x) {
                Ok(small) => seq.serialize_element(&small)?,
                Err(_) => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| match e {
                Entry::Int(i) => Ok(BigInt::from(i)),
                Entry::Text(t) => t.parse().map_err(D::Error::custom),
            })
            .collect()
    }
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Normalizes arbitrary cyclic factors into invariant-factor form.
    /// Zeros count as free summands and units are dropped.
    pub fn from_cyclic_factors(free_rank: usize, factors: &[BigInt]) -> Self {
        let mut extra_free = 0;
        let mut diag = Vec::new();
        for f in factors {
            if f.is_zero() {
                extra_free += 1;
            } else {
                diag.push(f.abs());
            }
        }
        let n = diag.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, x) in diag.into_iter().enumerate() {
            m[(i, i)] = x;
        }
        let g = cokernel(&m);
        Self {
            free_rank: free_rank + extra_free,
            torsion: g.torsion,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup (1 when torsion-free).
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Direct sum with `Z^extra`.
    pub fn with_extra_free(&self, extra: usize) -> Self {
        Self {
            free_rank: self.free_rank + extra,
            torsion: self.torsion.clone(),
        }
    }

    /// Checks the invariant-factor normal form.
    pub fn is_normalized(&self) -> bool {
        let two = BigInt::from(2);
        self.torsion.iter().all(|d| *d >= two)
            && self
                .torsion
                .windows(2)
                .all(|w| w[1].is_multiple_of(&w[0]))
    }
}

impl fmt::Display for AbelianGroup {
    /// Renders as `0`, `Z`, `Z^3`, `Z/5`, `Z^2 + Z/2 + Z/4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cokernel of `M: Z^cols -> Z^rows`, i.e. `Z^rows / colspan(M)`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(m);
    let factors = snf.invariant_factors();
    let one = BigInt::one();
    AbelianGroup {
        free_rank: m.rows - factors.len(),
        torsion: factors.into_iter().filter(|d| *d != one).collect(),
    }
}

/// Integer solvability of `x · M = target` for a row vector `x`.
///
/// With `D = U·M·V` we need `(x U^{-1}) D = target·V`, so the system is
/// solvable iff every coordinate of `target·V` is divisible by the matching
/// diagonal entry and vanishes past the rank.
pub fn row_span_contains(m: &IntMatrix, target: &[BigInt]) -> bool {
    assert_eq!(target.len(), m.cols);
    let snf = smith_normal_form(m);
    let tv = snf.v.transpose().mul_vec(target);
    let diag = snf.d.diagonal();
    tv.iter().enumerate().all(|(j, x)| match diag.get(j) {
        Some(dj) if !dj.is_zero() => x.is_multiple_of(dj),
        _ => x.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        assert!(s.d.is_diagonal());
        let diag = s.d.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn empty_matrix() {
        let m = IntMatrix::zeros(0, 0);
        let s = check_snf(&m);
        assert_eq!(s.d.rows(), 0);
        assert_eq!(s.u.rows(), 0);
        assert_eq!(s.v.cols(), 0);
        assert!(cokernel(&m).is_trivial());
    }

    #[test]
    fn rectangular_empty_shapes() {
        // Z^3 / 0
        assert_eq!(cokernel(&IntMatrix::zeros(3, 0)), AbelianGroup::free(3));
        assert!(cokernel(&IntMatrix::zeros(0, 4)).is_trivial());
    }

    #[test]
    fn reorders_diagonal() {
        let m = IntMatrix::from_rows(&[vec![3, 0], vec![0, 1]]);
        assert_eq!(check_snf(&m).d.diagonal(), big(&[1, 3]));
    }

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(check_snf(&m).d.diagonal(), big(&[2, 4]));
        let g = cokernel(&m);
        assert_eq!(g.free_rank, 0);
        assert_eq!(g.torsion, big(&[2, 4]));
    }

    #[test]
    fn cyclic_cokernels() {
        for k in 2..10 {
            let g = cokernel(&IntMatrix::from_rows(&[vec![k]]));
            assert_eq!(g, AbelianGroup { free_rank: 0, torsion: big(&[k]) });
        }
        assert!(cokernel(&IntMatrix::identity(2)).is_trivial());
        assert!(cokernel(&IntMatrix::from_rows(&[vec![-1]])).is_trivial());
    }

    #[test]
    fn coprime_diagonal_merges() {
        let g = AbelianGroup::from_cyclic_factors(0, &big(&[2, 3]));
        assert_eq!(g.torsion, big(&[6]));
        let g = AbelianGroup::from_cyclic_factors(1, &big(&[4, 0, 6, 1]));
        assert_eq!(g.free_rank, 2);
        assert_eq!(g.torsion, big(&[2, 12]));
    }

    #[test]
    fn display_forms() {
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert_eq!(AbelianGroup::free(1).to_string(), "Z");
        let g = AbelianGroup { free_rank: 2, torsion: big(&[2, 4]) };
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/4");
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-8));
        let m = IntMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
    }

    #[test]
    fn large_entries_do_not_overflow() {
        let huge = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
        let mut m = IntMatrix::zeros(2, 2);
        m[(0, 0)] = huge.clone();
        m[(1, 1)] = &huge * 2;
        m[(0, 1)] = BigInt::from(3);
        check_snf(&m);
    }

    #[test]
    fn row_span_membership() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(row_span_contains(&m, &big(&[4, 9])));
        assert!(!row_span_contains(&m, &big(&[1, 0])));
        let z = IntMatrix::zeros(0, 2);
        assert!(row_span_contains(&z, &big(&[0, 0])));
        assert!(!row_span_contains(&z, &big(&[0, 1])));
    }
}
