//! Invariant alternating bilinear products: the space Hom(Λ²M, M) of a
//! representation, Jacobi-identity residuals, and the Lie-subalgebra
//! containment test.

use crate::gf::{Field, FieldElement};
use crate::linalg::{exterior_square, wedge_index, wedge_pairs, Matrix, Subspace};
use crate::rep::{MatrixRep, RepError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RybaError {
    #[error("dimension {dim} exceeds cap {cap}")]
    DimCap { dim: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("malformed product document: {0}")]
    BadDocument(String),
}

/// An alternating bilinear product on F^dim: the values b(e_i, e_j) for
/// i < j, stored on the lexicographic wedge basis. Antisymmetry is enforced
/// by the storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AltProduct {
    field: Field,
    dim: usize,
    /// rows[wedge_index(i,j)] = b(e_i, e_j), a vector of length dim.
    rows: Vec<Vec<FieldElement>>,
}

impl AltProduct {
    pub fn new(field: &Field, dim: usize, rows: Vec<Vec<FieldElement>>) -> AltProduct {
        assert_eq!(rows.len(), dim * (dim - 1) / 2, "wrong number of wedge rows");
        assert!(rows.iter().all(|r| r.len() == dim), "wrong value length");
        AltProduct { field: field.clone(), dim, rows }
    }

    pub fn zero(field: &Field, dim: usize) -> AltProduct {
        AltProduct {
            field: field.clone(),
            dim,
            rows: vec![vec![field.zero(); dim]; dim * (dim - 1) / 2],
        }
    }

    /// Wraps an intertwiner matrix from Hom(Λ²M, M).
    pub fn from_hom_matrix(field: &Field, dim: usize, x: &Matrix) -> AltProduct {
        assert_eq!(x.rows(), dim * (dim - 1) / 2);
        assert_eq!(x.cols(), dim);
        AltProduct {
            field: field.clone(),
            dim,
            rows: (0..x.rows()).map(|i| x.row_vec(i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Sets b(e_i, e_j) for i < j.
    pub fn set_row(&mut self, i: usize, j: usize, value: Vec<FieldElement>) {
        assert!(i < j && j < self.dim, "indices must satisfy i < j < dim");
        assert_eq!(value.len(), self.dim, "value vector has wrong length");
        self.rows[wedge_index(self.dim, i, j)] = value;
    }

    /// b(e_i, e_j) with the sign handled for any index order.
    pub fn basis_value(&self, i: usize, j: usize) -> Vec<FieldElement> {
        let f = &self.field;
        if i == j {
            return vec![f.zero(); self.dim];
        }
        if i < j {
            self.rows[wedge_index(self.dim, i, j)].clone()
        } else {
            self.rows[wedge_index(self.dim, j, i)].iter().map(|e| f.neg(e)).collect()
        }
    }

    /// Bilinear expansion on arbitrary vectors.
    pub fn apply(&self, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(u.len(), self.dim);
        assert_eq!(v.len(), self.dim);
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (idx, &(i, j)) in wedge_pairs(self.dim).iter().enumerate() {
            // coefficient of e_i ^ e_j in u ^ v
            let c = f.sub(&f.mul(&u[i], &v[j]), &f.mul(&u[j], &v[i]));
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(self.rows[idx].iter()) {
                *o = f.add(o, &f.mul(&c, r));
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> AltProduct {
        let f = &self.field;
        AltProduct {
            field: self.field.clone(),
            dim: self.dim,
            rows: self.rows.iter().map(|r| r.iter().map(|e| f.mul(e, c)).collect()).collect(),
        }
    }

    pub fn add(&self, other: &AltProduct) -> AltProduct {
        assert_eq!(self.dim, other.dim);
        let f = &self.field;
        AltProduct {
            field: self.field.clone(),
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect())
                .collect(),
        }
    }

    /// Flattens to a single vector, for span membership questions.
    pub fn flatten(&self) -> Vec<FieldElement> {
        self.rows.iter().flatten().cloned().collect()
    }

    /// Equivariance check: b(v g, w g) = b(v, w) g on all basis pairs.
    pub fn commutes_with(&self, g: &Matrix) -> bool {
        let n = self.dim;
        for (i, j) in wedge_pairs(n) {
            let gi = g.row_vec(i);
            let gj = g.row_vec(j);
            let lhs = self.apply(&gi, &gj);
            let rhs = g.apply_row(&self.basis_value(i, j));
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// JSON list of (i, j, value-vector) records for i < j.
    pub fn to_json(&self) -> serde_json::Value {
        let recs: Vec<serde_json::Value> = wedge_pairs(self.dim)
            .iter()
            .enumerate()
            .map(|(idx, &(i, j))| {
                serde_json::json!([
                    i,
                    j,
                    self.rows[idx]
                        .iter()
                        .map(|e| self.field.serialize_elem(e))
                        .collect::<Vec<_>>()
                ])
            })
            .collect();
        serde_json::Value::Array(recs)
    }

    pub fn from_json(field: &Field, dim: usize, v: &serde_json::Value) -> Result<AltProduct, RybaError> {
        let bad = |m: &str| RybaError::BadDocument(m.to_string());
        let recs = v.as_array().ok_or_else(|| bad("expected list of records"))?;
        let mut out = AltProduct::zero(field, dim);
        for rec in recs {
            let triple = rec.as_array().ok_or_else(|| bad("expected [i, j, vector]"))?;
            if triple.len() != 3 {
                return Err(bad("expected [i, j, vector]"));
            }
            let i = triple[0].as_u64().ok_or_else(|| bad("index"))? as usize;
            let j = triple[1].as_u64().ok_or_else(|| bad("index"))? as usize;
            if i >= j || j >= dim {
                return Err(bad("indices must satisfy i < j < dim"));
            }
            let vals = triple[2].as_array().ok_or_else(|| bad("vector"))?;
            if vals.len() != dim {
                return Err(bad("value vector has wrong length"));
            }
            let mut row = Vec::with_capacity(dim);
            for s in vals {
                let lit = s.as_str().ok_or_else(|| bad("element literal"))?;
                row.push(field.parse_elem(lit).map_err(|e| bad(&e.to_string()))?);
            }
            out.rows[wedge_index(dim, i, j)] = row;
        }
        Ok(out)
    }
}

/// Basis of the space of invariant alternating bilinear products
/// Hom(Λ²M, M), via the exterior-square action and the intertwiner solver.
pub fn ryba_space(rep: &MatrixRep) -> Result<Vec<AltProduct>, RybaError> {
    const CAP: usize = 80;
    let dim = rep.dim();
    if dim > CAP {
        return Err(RybaError::DimCap { dim, cap: CAP });
    }
    if dim < 2 {
        return Ok(Vec::new());
    }
    let field = rep.field().clone();
    let wedge_gens: Vec<(String, Matrix)> = rep
        .generators()
        .iter()
        .map(|(name, g)| (name.clone(), exterior_square(g)))
        .collect();
    let wedge_rep = MatrixRep::new(&field, dim * (dim - 1) / 2, wedge_gens)?;
    let homs = MatrixRep::hom_space(&wedge_rep, rep)?;
    Ok(homs.iter().map(|x| AltProduct::from_hom_matrix(&field, dim, x)).collect())
}

/// For each triple (i,j,k): the Jacobi residual
/// [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j].
/// An all-zero output certifies the Jacobi identity on those triples.
pub fn jacobi_residual(prod: &AltProduct, triples: &[(usize, usize, usize)]) -> Vec<Vec<FieldElement>> {
    let f = prod.field().clone();
    let n = prod.dim();
    let basis = |i: usize| -> Vec<FieldElement> {
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        v
    };
    triples
        .iter()
        .map(|&(i, j, k)| {
            assert!(i < n && j < n && k < n, "triple index out of range");
            let mut acc = vec![f.zero(); n];
            for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                let inner = prod.apply(&basis(a), &basis(b));
                let term = prod.apply(&inner, &basis(c));
                for (slot, t) in acc.iter_mut().zip(term.iter()) {
                    *slot = f.add(slot, t);
                }
            }
            acc
        })
        .collect()
}

/// All sorted index triples (i <= j <= k would kill the bracket; we use
/// strictly increasing triples, which suffice by antisymmetry).
pub fn all_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Containment test behind the Lie-subalgebra criterion: W is closed under
/// the given product and under every basis element of the ambient invariant-
/// product space, i.e. the image of Λ²W lands inside W for each of them.
pub fn subalgebra_check(
    prod: &AltProduct,
    w: &Subspace,
    ambient_ryba: &[AltProduct],
) -> Result<bool, RybaError> {
    if w.ambient_dim() != prod.dim() {
        return Err(RybaError::Dimension(format!(
            "subspace ambient {} vs product dim {}",
            w.ambient_dim(),
            prod.dim()
        )));
    }
    for b in ambient_ryba {
        if b.dim() != prod.dim() {
            return Err(RybaError::Dimension("ambient basis has mismatched dimension".into()));
        }
    }
    let basis_rows = w.basis_rows();
    let mut check = |b: &AltProduct| -> bool {
        for (s, u) in basis_rows.iter().enumerate() {
            for v in basis_rows.iter().skip(s + 1) {
                if !w.contains(&b.apply(u, v)) {
                    return false;
                }
            }
        }
        true
    };
    if !check(prod) {
        return Ok(false);
    }
    Ok(ambient_ryba.iter().all(&mut check))
}

/// The structure tensor of sl2 on the ordered basis (e, f, h):
/// [h,e] = 2e, [h,f] = -2f, [e,f] = h.
pub fn sl2_bracket(field: &Field) -> AltProduct {
    let mut prod = AltProduct::zero(field, 3);
    let two = field.from_u64(2);
    // rows in lex order: (0,1) = (e,f), (0,2) = (e,h), (1,2) = (f,h)
    prod.rows[wedge_index(3, 0, 1)] = vec![field.zero(), field.zero(), field.one()]; // [e,f] = h
    prod.rows[wedge_index(3, 0, 2)] = vec![field.neg(&two), field.zero(), field.zero()]; // [e,h] = -2e
    prod.rows[wedge_index(3, 1, 2)] = vec![field.zero(), two, field.zero()]; // [f,h] = 2f
    prod
}
