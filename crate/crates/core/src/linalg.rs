//! Dense exact matrices and subspaces over a [`Field`]: reduced row echelon
//! form, kernels, rank, inverses, and the exterior-square action.

use crate::gf::{Field, FieldElement};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("malformed matrix document: {0}")]
    BadDocument(String),
}

/// Row-major dense matrix; all entries live in one field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(field: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&v| field.from_int(v)).collect()).collect(),
        )
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, entries }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut FieldElement {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<FieldElement> {
        self.row(i).to_vec()
    }

    /// Flat coefficient key for hashing/dedup in closure enumeration.
    pub fn key(&self) -> Vec<u64> {
        self.entries.iter().flat_map(|e| e.coeffs().iter().copied()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let entries = self.entries.iter().map(|a| self.field.mul(a, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = f.mul(a, b);
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = f.add(&cur, &t);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.rows, "vector/matrix shape mismatch");
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                out[j] = f.add(&out[j], &f.mul(vi, a));
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let one = self.field.one();
        let zero = self.field.zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { &one } else { &zero };
                if self.at(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        // rref on [A | I].
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = f.one();
        }
        let (red, rank) = rref(&aug);
        if rank < n {
            return Err(LinalgError::Singular);
        }
        // Left block must be the identity when rank = n.
        Ok(Matrix::from_fn(f, n, n, |i, j| red.at(i, n + j).clone()))
    }

    /// JSON array-of-rows of serialized field elements.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.rows)
            .map(|i| {
                serde_json::Value::Array(
                    self.row(i).iter().map(|e| serde_json::Value::String(self.field.serialize_elem(e))).collect(),
                )
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn from_json(field: &Field, v: &serde_json::Value) -> Result<Matrix, LinalgError> {
        let bad = |m: &str| LinalgError::BadDocument(m.to_string());
        let rows = v.as_array().ok_or_else(|| bad("expected array of rows"))?;
        let mut out: Vec<Vec<FieldElement>> = Vec::with_capacity(rows.len());
        for row in rows {
            let cells = row.as_array().ok_or_else(|| bad("expected array row"))?;
            let mut r = Vec::with_capacity(cells.len());
            for c in cells {
                let s = c.as_str().ok_or_else(|| bad("expected element literal"))?;
                r.push(field.parse_elem(s).map_err(|e| bad(&e.to_string()))?);
            }
            out.push(r);
        }
        if out.is_empty() {
            return Err(bad("empty matrix"));
        }
        let c = out[0].len();
        if out.iter().any(|r| r.len() != c) {
            return Err(bad("ragged rows"));
        }
        Ok(Matrix::from_rows(field, out))
    }
}

/// Reduced row echelon form with deterministic pivot choice (leftmost column,
/// first nonzero row), plus the rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let f = m.field().clone();
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let mut sel = None;
        for r in pivot_row..rows {
            if !a.at(r, col).is_zero() {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        if sel != pivot_row {
            for j in 0..cols {
                let tmp = a.at(sel, j).clone();
                *a.at_mut(sel, j) = a.at(pivot_row, j).clone();
                *a.at_mut(pivot_row, j) = tmp;
            }
        }
        let inv = f.inv(a.at(pivot_row, col)).expect("pivot is nonzero");
        for j in col..cols {
            let v = f.mul(a.at(pivot_row, j), &inv);
            *a.at_mut(pivot_row, j) = v;
        }
        for r in 0..rows {
            if r == pivot_row || a.at(r, col).is_zero() {
                continue;
            }
            let factor = a.at(r, col).clone();
            for j in col..cols {
                let t = f.mul(&factor, a.at(pivot_row, j));
                let v = f.sub(a.at(r, j), &t);
                *a.at_mut(r, j) = v;
            }
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    (a, pivot_row)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1
}

/// Right null space of m: canonical basis of {v : m v = 0}, dim = cols - rank.
pub fn kernel(m: &Matrix) -> Subspace {
    let f = m.field().clone();
    let (red, rank) = rref(m);
    let cols = m.cols();
    // Identify pivot columns.
    let mut pivots = Vec::with_capacity(rank);
    let mut col = 0usize;
    for r in 0..rank {
        while col < cols && red.at(r, col).is_zero() {
            col += 1;
        }
        pivots.push(col);
        col += 1;
    }
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::with_capacity(cols - rank);
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(red.at(r, free));
        }
        basis.push(v);
    }
    Subspace::from_rows(&f, cols, basis)
}

/// Subspace of F^n held as a reduced-echelon row basis, so equality of
/// subspaces is equality of representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    /// dim x ambient matrix in RREF with no zero rows.
    basis: Matrix,
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient) }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::identity(field, ambient) }
    }

    /// Canonicalizes arbitrary spanning rows.
    pub fn from_rows(field: &Field, ambient: usize, rows: Vec<Vec<FieldElement>>) -> Subspace {
        if rows.is_empty() {
            return Subspace::zero(field, ambient);
        }
        assert!(rows.iter().all(|r| r.len() == ambient), "ambient mismatch");
        let m = Matrix::from_rows(field, rows);
        let (red, rank) = rref(&m);
        let basis = Matrix::from_fn(field, rank, ambient, |i, j| red.at(i, j).clone());
        Subspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.dim()).map(|i| self.basis.row_vec(i)).collect()
    }

    /// Reduces v against the basis; returns the residue.
    fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.basis.field();
        let mut v = v.to_vec();
        for r in 0..self.dim() {
            // Leading column of row r.
            let lead = (0..self.ambient).find(|&j| !self.basis.at(r, j).is_zero());
            let Some(lead) = lead else { continue };
            if v[lead].is_zero() {
                continue;
            }
            let c = v[lead].clone();
            for j in 0..self.ambient {
                let t = f.mul(&c, self.basis.at(r, j));
                v[j] = f.sub(&v[j], &t);
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        self.reduce(v).iter().all(|e| e.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|r| self.contains(r))
    }
}

/// Index of e_i wedge e_j (i < j) in the lexicographic wedge basis.
pub fn wedge_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// All wedge pairs in lexicographic order.
pub fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

/// Induced action of g on the exterior square, on the basis e_i ^ e_j
/// (i < j, lexicographic): (e_i ^ e_j) g = sum over a < b of
/// (g_ia g_jb - g_ib g_ja) e_a ^ e_b.
pub fn exterior_square(g: &Matrix) -> Matrix {
    assert_eq!(g.rows(), g.cols(), "exterior square of a non-square matrix");
    let n = g.rows();
    let f = g.field();
    let pairs = wedge_pairs(n);
    let dim = pairs.len();
    let mut out = Matrix::zeros(f, dim, dim);
    for (row, &(i, j)) in pairs.iter().enumerate() {
        for (col, &(a, b)) in pairs.iter().enumerate() {
            let t1 = f.mul(g.at(i, a), g.at(j, b));
            let t2 = f.mul(g.at(i, b), g.at(j, a));
            *out.at_mut(row, col) = f.sub(&t1, &t2);
        }
    }
    out
}
