//! Dense matrices over GF(2^r) and the row-reduction toolkit.
//!
//! Everything downstream (code construction, decoding, the hypergraph
//! product) runs through [`Mat`]: row-major storage, exact arithmetic via the
//! attached field handle. Reduction is deterministic - pivots are chosen
//! leftmost column first, topmost row first - so transforms and column
//! permutations are reproducible across runs, which the serialised
//! descriptors and the Monte-Carlo harness rely on.

use crate::gf::{FieldRef, Gf};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MatError {
    /// The matrix does not have full row rank, so no systematic form exists.
    #[error("matrix is rank deficient (rank {rank} of {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
}

/// Dense row-major matrix over a shared field.
#[derive(Clone)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
    field: FieldRef,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && *self.field == *other.field
    }
}
impl Eq for Mat {}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over GF(2^{})", self.rows, self.cols, self.field.r())?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{:>4}", format!("{}", self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: FieldRef, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Gf::ZERO; rows * cols], field }
    }

    pub fn identity(field: FieldRef, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Gf::ONE);
        }
        m
    }

    pub fn from_rows(field: FieldRef, rows: Vec<Vec<Gf>>) -> Mat {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nr * nc);
        for r in &rows {
            assert_eq!(r.len(), nc, "ragged rows");
            data.extend_from_slice(r);
        }
        debug_assert!(data.iter().all(|&x| field.contains(x)));
        Mat { rows: nr, cols: nc, data, field }
    }

    pub fn from_fn(field: FieldRef, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Gf) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
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

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gf {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Gf) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Gf] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Gf> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn same_field(&self, other: &Mat) {
        assert_eq!(*self.field, *other.field, "field mismatch");
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data, field: self.field.clone() }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let f = &*self.field;
        let mut out = Mat::zeros(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, cur + f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Gf]) -> Vec<Gf> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        let f = &*self.field;
        let mut out = vec![Gf::ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = Gf::ZERO;
            for (j, &x) in v.iter().enumerate() {
                if !x.is_zero() {
                    acc += f.mul(self.get(i, j), x);
                }
            }
            out[i] = acc;
        }
        out
    }

    /// Matrix-vector product driven by the support of v: cost is
    /// nnz(v) * rows instead of cols * rows, which matters for the big
    /// product-code matrices multiplied by sparse error vectors.
    pub fn mul_vec_sparse(&self, v: &[Gf]) -> Vec<Gf> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        let f = &*self.field;
        let mut out = vec![Gf::ZERO; self.rows];
        for (j, &x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += f.mul(a, x);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// [self | other] side by side.
    pub fn hstack(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.field.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// self stacked on top of other.
    pub fn vstack(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data, field: self.field.clone() }
    }

    /// New matrix whose column j is column `perm[j]` of self.
    pub fn permute_cols(&self, perm: &[usize]) -> Mat {
        assert_eq!(perm.len(), self.cols);
        Mat::from_fn(self.field.clone(), self.rows, self.cols, |i, j| self.get(i, perm[j]))
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Mat {
        Mat::from_fn(self.field.clone(), self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// Kronecker product; block (i1, j1) of the result is self[i1][j1] * other.
    pub fn kron(&self, other: &Mat) -> Mat {
        self.same_field(other);
        let f = &*self.field;
        let mut out = Mat::zeros(self.field.clone(), self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if !b.is_zero() {
                            out.set(i1 * other.rows + i2, j1 * other.cols + j2, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form with the transform that produced it.
    ///
    /// Pivoting is deterministic: columns scanned left to right, within a
    /// column the topmost not-yet-used row wins. `transform * self == r` and
    /// `transform` is invertible.
    pub fn rref(&self) -> Rref {
        let f = self.field.clone();
        let mut r = self.clone();
        let mut t = Mat::identity(f.clone(), self.rows);
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            let Some(pr) = (next_row..self.rows).find(|&i| !r.get(i, col).is_zero()) else {
                continue;
            };
            r.swap_rows(next_row, pr);
            t.swap_rows(next_row, pr);
            let inv = f.inv(r.get(next_row, col));
            r.scale_row(next_row, inv);
            t.scale_row(next_row, inv);
            for i in 0..self.rows {
                if i != next_row {
                    let c = r.get(i, col);
                    if !c.is_zero() {
                        r.add_scaled_row(i, next_row, c);
                        t.add_scaled_row(i, next_row, c);
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        Rref { r, transform: t, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j), self.get(b, j));
            self.set(a, j, y);
            self.set(b, j, x);
        }
    }

    fn scale_row(&mut self, i: usize, c: Gf) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, f.mul(v, c));
        }
    }

    /// row[i] += c * row[src]
    fn add_scaled_row(&mut self, i: usize, src: usize, c: Gf) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = self.get(i, j) + f.mul(c, self.get(src, j));
            self.set(i, j, v);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel {x : self * x = 0}, one vector per free
    /// column, ordered by ascending free-column index.
    pub fn kernel_basis(&self) -> Vec<Vec<Gf>> {
        let Rref { r, pivots, .. } = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Gf::ZERO; self.cols];
            v[free] = Gf::ONE;
            // characteristic two: the pivot entry equals the free-column
            // entry of the reduced row rather than its negation
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Row transform and column permutation bringing self to `[I | P]`.
    ///
    /// Requires full row rank. The permutation lists pivot columns first (in
    /// pivot order) then free columns ascending, and
    /// `row_transform * self.permute_cols(&col_perm) == [I | P]`.
    pub fn systematic_form(&self) -> Result<Systematic, MatError> {
        let Rref { r, transform, pivots } = self.rref();
        if pivots.len() < self.rows {
            return Err(MatError::RankDeficient { rank: pivots.len(), rows: self.rows });
        }
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut col_perm = pivots.clone();
        col_perm.extend_from_slice(&free);
        let p = r.submatrix_cols(&free);
        Ok(Systematic { p, col_perm, row_transform: transform })
    }

    /// Whether v lies in the row space of self. One-shot; build a
    /// [`RowSpace`] for repeated queries against the same matrix.
    pub fn in_row_space(&self, v: &[Gf]) -> bool {
        RowSpace::new(self).contains(v)
    }

    /// Solves self * X = B for a matrix X, or None when any column of B is
    /// outside the column space. Free variables are set to zero, so the
    /// result is deterministic.
    pub fn solve_columns(&self, b: &Mat) -> Option<Mat> {
        self.same_field(b);
        assert_eq!(self.rows, b.rows());
        let aug = self.hstack(b);
        let Rref { r, pivots, .. } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None; // pivot in the augmented block: inconsistent
        }
        let mut x = Mat::zeros(self.field.clone(), self.cols, b.cols());
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                x.set(pc, j, r.get(row, self.cols + j));
            }
        }
        Some(x)
    }

    /// Full solution set of self * x = rhs: a particular solution (free
    /// variables zero) plus a kernel basis, or None when inconsistent.
    pub fn solve_affine(&self, rhs: &[Gf]) -> Option<AffineSolution> {
        assert_eq!(rhs.len(), self.rows);
        let b = Mat::from_fn(self.field.clone(), self.rows, 1, |i, _| rhs[i]);
        let particular = self.solve_columns(&b)?;
        Some(AffineSolution {
            particular: (0..self.cols).map(|i| particular.get(i, 0)).collect(),
            kernel: self.kernel_basis(),
        })
    }
}

/// Result of [`Mat::solve_affine`]: particular + span(kernel).
pub struct AffineSolution {
    pub particular: Vec<Gf>,
    pub kernel: Vec<Vec<Gf>>,
}

/// Result of [`Mat::rref`].
pub struct Rref {
    pub r: Mat,
    pub transform: Mat,
    pub pivots: Vec<usize>,
}

/// Result of [`Mat::systematic_form`].
pub struct Systematic {
    /// The non-identity block, rows x (cols - rows).
    pub p: Mat,
    /// Column j of the systematic matrix is column `col_perm[j]` of the
    /// original.
    pub col_perm: Vec<usize>,
    pub row_transform: Mat,
}

/// Precomputed reduced basis for fast repeated row-space membership tests.
///
/// Over GF(2) the rows are bit-packed into u64 words, which is what makes
/// residual/logical checks on product codes with thousands of columns cheap
/// enough to run inside Monte-Carlo loops.
#[derive(Debug)]
pub enum RowSpace {
    Packed {
        cols: usize,
        /// One packed row per pivot, paired with its pivot column.
        rows: Vec<(usize, Vec<u64>)>,
    },
    Dense {
        field: FieldRef,
        /// One reduced row per pivot, paired with its pivot column.
        rows: Vec<(usize, Vec<Gf>)>,
    },
}

impl RowSpace {
    pub fn new(m: &Mat) -> RowSpace {
        let Rref { r, pivots, .. } = m.rref();
        if m.field().r() == 1 {
            let words = m.cols().div_ceil(64);
            let rows = pivots
                .iter()
                .enumerate()
                .map(|(i, &pc)| {
                    let mut w = vec![0u64; words];
                    for j in 0..m.cols() {
                        if !r.get(i, j).is_zero() {
                            w[j / 64] |= 1 << (j % 64);
                        }
                    }
                    (pc, w)
                })
                .collect();
            RowSpace::Packed { cols: m.cols(), rows }
        } else {
            let rows = pivots
                .iter()
                .enumerate()
                .map(|(i, &pc)| (pc, r.row_vec(i)))
                .collect();
            RowSpace::Dense { field: m.field().clone(), rows }
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            RowSpace::Packed { rows, .. } => rows.len(),
            RowSpace::Dense { rows, .. } => rows.len(),
        }
    }

    pub fn contains(&self, v: &[Gf]) -> bool {
        match self {
            RowSpace::Packed { cols, rows } => {
                assert_eq!(v.len(), *cols);
                let words = cols.div_ceil(64);
                let mut acc = vec![0u64; words];
                for (j, x) in v.iter().enumerate() {
                    debug_assert!(x.0 <= 1, "packed row space holds a GF(2) matrix");
                    if !x.is_zero() {
                        acc[j / 64] |= 1 << (j % 64);
                    }
                }
                for (pc, row) in rows {
                    if acc[pc / 64] >> (pc % 64) & 1 == 1 {
                        for (a, b) in acc.iter_mut().zip(row) {
                            *a ^= b;
                        }
                    }
                }
                acc.iter().all(|&w| w == 0)
            }
            RowSpace::Dense { field, rows } => {
                let mut acc = v.to_vec();
                for (pc, row) in rows {
                    let c = acc[*pc];
                    if !c.is_zero() {
                        for (a, b) in acc.iter_mut().zip(row) {
                            *a += field.mul(c, *b);
                        }
                    }
                }
                acc.iter().all(|x| x.is_zero())
            }
        }
    }
}

/// Hamming weight (number of nonzero coordinates).
pub fn weight(v: &[Gf]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// Indices of nonzero coordinates, ascending.
pub fn support(v: &[Gf]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

pub fn add_vecs(a: &[Gf], b: &[Gf]) -> Vec<Gf> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

/// Scatters x through a column permutation: if B = A.permute_cols(perm) then
/// B * x == A * scatter_perm(x, perm).
pub fn scatter_perm(x: &[Gf], perm: &[usize]) -> Vec<Gf> {
    assert_eq!(x.len(), perm.len());
    let mut out = vec![Gf::ZERO; x.len()];
    for (j, &p) in perm.iter().enumerate() {
        out[p] = x[j];
    }
    out
}

/// Inverse of [`scatter_perm`]: picks out[j] = x[perm[j]].
pub fn gather_perm(x: &[Gf], perm: &[usize]) -> Vec<Gf> {
    assert_eq!(x.len(), perm.len());
    perm.iter().map(|&p| x[p]).collect()
}
