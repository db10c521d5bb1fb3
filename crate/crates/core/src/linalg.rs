//! Exact linear algebra over a [`Field`]: echelon forms, rank, kernels,
//! cokernels and linear solves.
//!
//! Computations use a dense row-major [`Matrix`]; [`SparseMatrix`] is the
//! exchange format. Pivoting always takes the first nonzero entry, so bases
//! are reproducible.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_columns(field: &Field, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn is_zero(&self, field: &Field) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !field.is_zero(b) {
                        let cur = out.get(i, j);
                        let v = field.add(cur, &field.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, field: &Field, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !field.is_zero(a) && !field.is_zero(b) {
                        acc = field.add(&acc, &field.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().chain(other.row(i)).cloned().collect())
            .collect();
        Matrix::from_rows(self.cols + other.cols, rows)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows(self.cols, idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }
}

/// Row reduced echelon form and the pivot column of each nonzero row.
pub fn rref(field: &Field, m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !field.is_zero(a.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = field.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..a.cols {
            let v = field.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || field.is_zero(a.get(i, c)) {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..a.cols {
                let pv = a.get(r, j);
                if field.is_zero(pv) {
                    continue;
                }
                let v = field.sub(a.get(i, j), &field.mul(&f, pv));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    rref(field, m).1.len()
}

/// Basis of the column space in reduced column echelon form, with the
/// leading (pivot) row of each basis column.
pub fn column_echelon(field: &Field, m: &Matrix) -> (Matrix, Vec<usize>) {
    let (r, pivots) = rref(field, &m.transpose());
    let nonzero = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
    (nonzero.transpose(), pivots)
}

/// Basis of the right kernel `{v : M v = 0}` as the columns of a matrix in
/// reduced column echelon form.
pub fn kernel(field: &Field, m: &Matrix) -> Matrix {
    kernel_with_pivots(field, m).0
}

/// [`kernel`] plus the leading row of each basis column. A kernel vector's
/// coordinates in this basis are its entries at those rows.
pub fn kernel_with_pivots(field: &Field, m: &Matrix) -> (Matrix, Vec<usize>) {
    let (r, pivots) = rref(field, m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<Scalar>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![field.zero(); m.cols];
            v[f] = field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(r.get(i, f));
            }
            v
        })
        .collect();
    if vectors.is_empty() {
        return (Matrix::zeros(field, m.cols, 0), Vec::new());
    }
    column_echelon(field, &Matrix::from_columns(field, m.cols, &vectors))
}

/// The quotient of the ambient space `k^rows` by the column space of `M`.
#[derive(Clone, Debug)]
pub struct Cokernel {
    /// Column space basis in reduced column echelon form.
    pub image: Matrix,
    /// Leading rows of `image`.
    pub pivots: Vec<usize>,
    /// Ambient coordinates that survive, ascending; the quotient basis is the
    /// image of the corresponding unit vectors.
    pub complement: Vec<usize>,
    /// `dim x rows` matrix sending a vector to its coset coordinates.
    pub projection: Matrix,
}

impl Cokernel {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// `rows x dim` matrix embedding coset representatives (the section).
    pub fn section(&self, field: &Field) -> Matrix {
        let ambient = self.projection.cols();
        let mut s = Matrix::zeros(field, ambient, self.dim());
        for (k, &i) in self.complement.iter().enumerate() {
            s.set(i, k, field.one());
        }
        s
    }

    pub fn project(&self, field: &Field, v: &[Scalar]) -> Vec<Scalar> {
        self.projection.apply(field, v)
    }
}

pub fn cokernel(field: &Field, m: &Matrix) -> Cokernel {
    let ambient = m.rows;
    let (image, pivots) = column_echelon(field, m);
    let complement: Vec<usize> = (0..ambient).filter(|i| !pivots.contains(i)).collect();
    let mut projection = Matrix::zeros(field, complement.len(), ambient);
    for (k, &i) in complement.iter().enumerate() {
        projection.set(k, i, field.one());
    }
    // e_p for a pivot p equals b_p minus the non-pivot part of b_p
    for (col, &p) in pivots.iter().enumerate() {
        for (k, &i) in complement.iter().enumerate() {
            let v = image.get(i, col);
            if !field.is_zero(v) {
                projection.set(k, p, field.neg(v));
            }
        }
    }
    Cokernel {
        image,
        pivots,
        complement,
        projection,
    }
}

/// Some solution `x` of `A x = b`, or `None` when `b` is not in the column
/// space.
pub fn solve(field: &Field, a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(b.len(), a.rows);
    let aug = a.hstack(&Matrix::from_columns(field, a.rows, &[b.to_vec()]));
    let (r, pivots) = rref(field, &aug);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![field.zero(); a.cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(i, a.cols).clone();
    }
    Some(x)
}

/// Rank of a matrix given as sparse columns `(row, value)`, by column
/// reduction against pivots keyed on the lowest nonzero row. Suited to large,
/// very sparse boundary matrices.
pub fn sparse_rank(field: &Field, columns: Vec<Vec<(usize, Scalar)>>) -> usize {
    if let crate::field::FieldSpec::Prime(p) = field.spec() {
        let cols = columns
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|(i, v)| match v {
                        Scalar::Prime(x) => (i, x),
                        _ => unreachable!("scalar outside the prime field"),
                    })
                    .collect()
            })
            .collect();
        return sparse_rank_mod_p(p, cols);
    }
    use std::collections::HashMap;
    let mut pivot_of: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
    let mut rank = 0;
    for mut col in columns {
        col.sort_by_key(|e| e.0);
        col.retain(|(_, v)| !field.is_zero(v));
        while let Some(&(low, _)) = col.last() {
            let Some(piv) = pivot_of.get(&low) else { break };
            let factor = field.div(&col.last().unwrap().1, &piv.last().unwrap().1).expect("nonzero pivot");
            col = axpy_sparse(field, &col, &factor, piv);
        }
        if !col.is_empty() {
            pivot_of.insert(col.last().unwrap().0, col);
            rank += 1;
        }
    }
    rank
}

/// `a - f * b` for sorted sparse vectors.
fn axpy_sparse(field: &Field, a: &[(usize, Scalar)], f: &Scalar, b: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.neg(&field.mul(f, &b[j].1))));
            j += 1;
        } else {
            let v = field.sub(&a[i].1, &field.mul(f, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn sparse_rank_mod_p(p: u64, columns: Vec<Vec<(usize, u64)>>) -> usize {
    use std::collections::HashMap;
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    // pivots stored normalized so the lowest entry is 1
    let mut pivot_of: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let mut rank = 0;
    for mut col in columns {
        col.sort_by_key(|e| e.0);
        col.retain(|&(_, v)| v % p != 0);
        while let Some(&(low, lv)) = col.last() {
            let Some(piv) = pivot_of.get(&low) else { break };
            let mut out = Vec::with_capacity(col.len() + piv.len());
            let (mut i, mut j) = (0, 0);
            while i < col.len() || j < piv.len() {
                if j == piv.len() || (i < col.len() && col[i].0 < piv[j].0) {
                    out.push(col[i]);
                    i += 1;
                } else if i == col.len() || piv[j].0 < col[i].0 {
                    out.push((piv[j].0, (p - mulm(lv, piv[j].1)) % p));
                    j += 1;
                } else {
                    let v = (col[i].1 + p - mulm(lv, piv[j].1)) % p;
                    if v != 0 {
                        out.push((col[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            col = out;
        }
        if let Some(&(low, lv)) = col.last() {
            let s = inv(lv);
            for e in col.iter_mut() {
                e.1 = mulm(e.1, s);
            }
            pivot_of.insert(low, col);
            rank += 1;
        }
    }
    rank
}

/// A matrix stored as its nonzero entries, ordered column-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize, entries: Vec<(usize, usize, Scalar)>) -> Result<Self> {
        let mut e: Vec<(usize, usize, Scalar)> = entries.into_iter().filter(|(_, _, v)| !field.is_zero(v)).collect();
        if let Some((r, c, _)) = e.iter().find(|(r, c, _)| *r >= rows || *c >= cols) {
            return Err(Error::Dimension(format!("entry ({r},{c}) outside {rows}x{cols}")));
        }
        e.sort_by_key(|&(r, c, _)| (c, r));
        if e.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::Dimension("duplicate entry".into()));
        }
        Ok(SparseMatrix { rows, cols, entries: e })
    }

    pub fn entries(&self) -> &[(usize, usize, Scalar)] {
        &self.entries
    }

    pub fn from_dense(field: &Field, m: &Matrix) -> SparseMatrix {
        let mut entries = Vec::new();
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                if !field.is_zero(m.get(i, j)) {
                    entries.push((i, j, m.get(i, j).clone()));
                }
            }
        }
        SparseMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn to_dense(&self, field: &Field) -> Matrix {
        let mut m = Matrix::zeros(field, self.rows, self.cols);
        for (i, j, v) in &self.entries {
            m.set(*i, *j, v.clone());
        }
        m
    }
}

pub fn kernel_basis(field: &Field, m: &SparseMatrix) -> SparseMatrix {
    SparseMatrix::from_dense(field, &kernel(field, &m.to_dense(field)))
}

/// Dimension of the cokernel and the projection onto coset coordinates.
pub fn cokernel_data(field: &Field, m: &SparseMatrix) -> (usize, SparseMatrix) {
    let c = cokernel(field, &m.to_dense(field));
    (c.dim(), SparseMatrix::from_dense(field, &c.projection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(f: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect())
    }

    #[test]
    fn kernel_examples() {
        let f = Field::rational();
        assert_eq!(kernel(&f, &Matrix::identity(&f, 3)).cols(), 0);
        let k = kernel(&f, &ints(&f, &[&[1, 1, 1]]));
        assert_eq!(k, ints(&f, &[&[1, 0], &[0, 1], &[-1, -1]]));
        let z = Matrix::zeros(&f, 2, 2);
        assert_eq!(kernel(&f, &z), Matrix::identity(&f, 2));
    }

    #[test]
    fn cokernel_examples() {
        let f = Field::rational();
        assert_eq!(cokernel(&f, &Matrix::identity(&f, 3)).dim(), 0);
        let c = cokernel(&f, &Matrix::zeros(&f, 3, 2));
        assert_eq!(c.dim(), 3);
        assert_eq!(c.projection, Matrix::identity(&f, 3));
        let c = cokernel(&f, &ints(&f, &[&[1], &[0]]));
        assert_eq!(c.dim(), 1);
        assert_eq!(c.complement, vec![1]);
        let sm = SparseMatrix::from_dense(&f, &ints(&f, &[&[1], &[0]]));
        let (d, proj) = cokernel_data(&f, &sm);
        assert_eq!(d, 1);
        assert_eq!(proj.to_dense(&f), ints(&f, &[&[0, 1]]));
    }

    #[test]
    fn projection_kills_image() {
        let f = Field::rational();
        let m = ints(&f, &[&[1, 2], &[2, 4], &[0, 1], &[3, 0]]);
        let c = cokernel(&f, &m);
        assert!(c.projection.mul(&f, &m).unwrap().is_zero(&f));
        assert_eq!(c.dim(), 2);
        // section followed by projection is the identity
        assert_eq!(c.projection.mul(&f, &c.section(&f)).unwrap(), Matrix::identity(&f, 2));
    }

    #[test]
    fn solve_examples() {
        let f = Field::rational();
        let a = ints(&f, &[&[1, 1], &[0, 1]]);
        let x = solve(&f, &a, &[f.from_i64(3), f.from_i64(1)]).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(1)]);
        let b = ints(&f, &[&[1], &[1]]);
        assert!(solve(&f, &b, &[f.from_i64(1), f.from_i64(0)]).is_none());
    }

    fn fields() -> Vec<Field> {
        vec![Field::rational(), Field::prime(5).unwrap(), Field::cyclotomic(3).unwrap()]
    }

    fn to_matrix(f: &Field, rows: usize, cols: usize, vals: &[i64]) -> Matrix {
        Matrix::from_rows(
            cols,
            (0..rows).map(|i| (0..cols).map(|j| f.from_i64(vals[i * cols + j])).collect()).collect(),
        )
    }

    proptest! {
        #[test]
        fn rank_nullity(which in 0usize..3, rows in 1usize..6, cols in 1usize..6, vals in prop::collection::vec(-2i64..3, 36)) {
            let f = fields()[which].clone();
            let m = to_matrix(&f, rows, cols, &vals);
            let k = kernel(&f, &m);
            prop_assert_eq!(rank(&f, &m) + k.cols(), cols);
            prop_assert!(m.mul(&f, &k).unwrap().is_zero(&f));
            let c = cokernel(&f, &m);
            prop_assert_eq!(c.dim(), rows - rank(&f, &m));
            prop_assert!(c.projection.mul(&f, &m).unwrap().is_zero(&f));
            let sparse: Vec<Vec<(usize, Scalar)>> = m.columns().into_iter()
                .map(|c| c.into_iter().enumerate().filter(|(_, v)| !f.is_zero(v)).collect())
                .collect();
            prop_assert_eq!(sparse_rank(&f, sparse), rank(&f, &m));
        }

        #[test]
        fn kernel_is_reduced_column_echelon(rows in 1usize..5, cols in 1usize..7, vals in prop::collection::vec(-2i64..3, 35)) {
            let f = Field::rational();
            let m = to_matrix(&f, rows, cols, &vals);
            let (k, piv) = kernel_with_pivots(&f, &m);
            for (j, &p) in piv.iter().enumerate() {
                prop_assert!(f.is_one(k.get(p, j)));
                for i in 0..p {
                    prop_assert!(f.is_zero(k.get(i, j)));
                }
                for jj in 0..k.cols() {
                    if jj != j {
                        prop_assert!(f.is_zero(k.get(p, jj)));
                    }
                }
            }
            prop_assert!(piv.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
