//! Matrix representations of finite groups: generator closure, intertwiner
//! spaces, fixed points, symmetric-cube invariants, and pressure.

use crate::gf::{Field, FieldElement};
use crate::linalg::{kernel, Matrix, Subspace};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("generator {0} is not invertible")]
    NotInvertible(String),
    #[error("generator {0} has the wrong shape")]
    BadShape(String),
    #[error("duplicate or empty generator name {0}")]
    BadName(String),
    #[error("relation {0} does not evaluate to the identity")]
    RelationFailed(String),
    #[error("unknown generator {0} in word")]
    UnknownGenerator(String),
    #[error("group order exceeds bound {bound}")]
    BoundExceeded { bound: u64 },
    #[error("representations have mismatched fields")]
    MismatchedFields,
    #[error("representations have mismatched generator names")]
    MismatchedGenerators,
    #[error("dimension {dim} exceeds cap {cap}")]
    DimCap { dim: usize, cap: usize },
    #[error("malformed representation document: {0}")]
    BadDocument(String),
}

/// A word in the generators: pairs (name, exponent), exponent possibly
/// negative.
pub type Word = Vec<(String, i64)>;

fn word_display(w: &Word) -> String {
    w.iter()
        .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A group given by named invertible generator matrices acting on row
/// vectors, with optional relations to verify.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    field: Field,
    dim: usize,
    gens: Vec<(String, Matrix)>,
    relations: Vec<Word>,
}

impl MatrixRep {
    pub fn new(field: &Field, dim: usize, gens: Vec<(String, Matrix)>) -> Result<MatrixRep, RepError> {
        let mut seen = std::collections::HashSet::new();
        for (name, m) in &gens {
            if name.is_empty() || !seen.insert(name.clone()) {
                return Err(RepError::BadName(name.clone()));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(RepError::BadShape(name.clone()));
            }
            if m.field() != field {
                return Err(RepError::MismatchedFields);
            }
            if m.inverse().is_err() {
                return Err(RepError::NotInvertible(name.clone()));
            }
        }
        Ok(MatrixRep { field: field.clone(), dim, gens, relations: Vec::new() })
    }

    pub fn with_relations(mut self, relations: Vec<Word>) -> Result<MatrixRep, RepError> {
        self.relations = relations;
        self.verify_relations()?;
        Ok(self)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[(String, Matrix)] {
        &self.gens
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    pub fn generator(&self, name: &str) -> Option<&Matrix> {
        self.gens.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn evaluate_word(&self, word: &Word) -> Result<Matrix, RepError> {
        let mut acc = Matrix::identity(&self.field, self.dim);
        for (name, exp) in word {
            let g = self.generator(name).ok_or_else(|| RepError::UnknownGenerator(name.clone()))?;
            let m = if *exp >= 0 {
                g.pow(*exp as u64)
            } else {
                g.inverse().expect("generators are invertible").pow((-exp) as u64)
            };
            acc = acc.mul(&m);
        }
        Ok(acc)
    }

    pub fn verify_relations(&self) -> Result<(), RepError> {
        for w in &self.relations {
            if !self.evaluate_word(w)?.is_identity() {
                return Err(RepError::RelationFailed(word_display(w)));
            }
        }
        Ok(())
    }

    /// Closes the generator set under multiplication and returns the group
    /// order, provided it does not exceed the bound.
    pub fn enumerate_group(&self, bound: u64) -> Result<u64, RepError> {
        assert!(bound >= 1);
        let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
        let id = Matrix::identity(&self.field, self.dim);
        seen.insert(id.key());
        let mut frontier = vec![id];
        let mut order = 1u64;
        while let Some(m) = frontier.pop() {
            for (_, g) in &self.gens {
                let next = m.mul(g);
                if seen.insert(next.key()) {
                    order += 1;
                    if order > bound {
                        return Err(RepError::BoundExceeded { bound });
                    }
                    frontier.push(next);
                }
            }
        }
        Ok(order)
    }

    /// The subspace of row vectors fixed by every generator.
    pub fn fixed_points(&self) -> Subspace {
        if self.gens.is_empty() {
            return Subspace::full(&self.field, self.dim);
        }
        // v (g - 1) = 0 for all g: kernel of the vertically stacked (g - 1)^T.
        let n = self.dim;
        let stacked = Matrix::from_fn(&self.field, n * self.gens.len(), n, |i, j| {
            let (block, r) = (i / n, i % n);
            let g = &self.gens[block].1;
            // (g - 1)^T entry (r, j) = g[j][r] - delta.
            let v = g.at(j, r).clone();
            if r == j {
                self.field.sub(&v, &self.field.one())
            } else {
                v
            }
        });
        kernel(&stacked)
    }

    /// Basis of the intertwiner space {X : gA X = X gB for all generators},
    /// joined by generator name. The two representations act on row vectors,
    /// so X maps A's module to B's.
    pub fn hom_space(a: &MatrixRep, b: &MatrixRep) -> Result<Vec<Matrix>, RepError> {
        if a.field != b.field {
            return Err(RepError::MismatchedFields);
        }
        let mut names_a: Vec<&String> = a.gens.iter().map(|(n, _)| n).collect();
        let mut names_b: Vec<&String> = b.gens.iter().map(|(n, _)| n).collect();
        names_a.sort();
        names_b.sort();
        if names_a != names_b {
            return Err(RepError::MismatchedGenerators);
        }
        let f = &a.field;
        let (m, n) = (a.dim, b.dim);
        let mn = m * n;
        // Current solution basis, as coefficient matrices X.
        let mut basis: Vec<Matrix> = Vec::new();
        for t in 0..mn {
            let mut x = Matrix::zeros(f, m, n);
            *x.at_mut(t / n, t % n) = f.one();
            basis.push(x);
        }
        for name in names_a {
            let ga = a.generator(name).unwrap();
            let gb = b.generator(name).unwrap();
            // Residual per basis element: R_t = ga X_t - X_t gb; solve
            // sum c_t R_t = 0 for the coefficients c.
            let residuals: Vec<Matrix> =
                basis.iter().map(|x| ga.mul(x).sub(&x.mul(gb))).collect();
            let r = basis.len();
            let constraint = Matrix::from_fn(f, mn, r, |row, t| {
                residuals[t].at(row / n, row % n).clone()
            });
            let coeffs = kernel(&constraint);
            let mut next = Vec::with_capacity(coeffs.dim());
            for c in coeffs.basis_rows() {
                let mut x = Matrix::zeros(f, m, n);
                for (t, ct) in c.iter().enumerate() {
                    if ct.is_zero() {
                        continue;
                    }
                    x = x.add(&basis[t].scale(ct));
                }
                next.push(x);
            }
            basis = next;
            if basis.is_empty() {
                break;
            }
        }
        Ok(basis)
    }

    /// Dimension of the space of fixed vectors in the symmetric cube,
    /// realized on the basis of degree-3 monomials.
    pub fn sym_cube_fixed_dim(&self) -> Result<usize, RepError> {
        const CAP: usize = 40;
        if self.dim > CAP {
            return Err(RepError::DimCap { dim: self.dim, cap: CAP });
        }
        let f = &self.field;
        let n = self.dim;
        let monos = sym3_basis(n);
        let index: HashMap<(usize, usize, usize), usize> =
            monos.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let big = monos.len();
        if self.gens.is_empty() {
            return Ok(big);
        }
        // Intersect fixed spaces generator by generator. The current space is
        // a row basis; the constraint for g is (row basis) * (S3(g) - 1) = 0.
        let mut basis: Vec<Vec<FieldElement>> = (0..big)
            .map(|i| {
                let mut v = vec![f.zero(); big];
                v[i] = f.one();
                v
            })
            .collect();
        for (_, g) in &self.gens {
            if basis.is_empty() {
                break;
            }
            // Residual rows: r_t = v_t * S3(g) - v_t.
            let mut residuals: Vec<Vec<FieldElement>> = Vec::with_capacity(basis.len());
            for v in &basis {
                let mut out = vec![f.zero(); big];
                for (mi, coeff) in v.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let (aa, bb, cc) = monos[mi];
                    // Row mi of S3(g): the product (e_a g)(e_b g)(e_c g).
                    let ra = g.row(aa);
                    let rb = g.row(bb);
                    let rc = g.row(cc);
                    for i in 0..n {
                        if ra[i].is_zero() {
                            continue;
                        }
                        for j in 0..n {
                            if rb[j].is_zero() {
                                continue;
                            }
                            let ab = f.mul(&ra[i], &rb[j]);
                            for k in 0..n {
                                if rc[k].is_zero() {
                                    continue;
                                }
                                let mut t = [i, j, k];
                                t.sort_unstable();
                                let target = index[&(t[0], t[1], t[2])];
                                let term = f.mul(&ab, &rc[k]);
                                let scaled = f.mul(coeff, &term);
                                out[target] = f.add(&out[target], &scaled);
                            }
                        }
                    }
                }
                for (o, v0) in out.iter_mut().zip(v.iter()) {
                    *o = f.sub(o, v0);
                }
                residuals.push(out);
            }
            // Solve sum c_t r_t = 0.
            let r = basis.len();
            let constraint = Matrix::from_fn(f, big, r, |row, t| residuals[t][row].clone());
            let coeffs = kernel(&constraint);
            let mut next = Vec::with_capacity(coeffs.dim());
            for c in coeffs.basis_rows() {
                let mut v = vec![f.zero(); big];
                for (t, ct) in c.iter().enumerate() {
                    if ct.is_zero() {
                        continue;
                    }
                    for (slot, b) in v.iter_mut().zip(basis[t].iter()) {
                        *slot = f.add(slot, &f.mul(ct, b));
                    }
                }
                next.push(v);
            }
            basis = next;
        }
        Ok(basis.len())
    }

    /// Serializes to `{field, dim, generators, relations}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut gens = serde_json::Map::new();
        for (name, m) in &self.gens {
            gens.insert(name.clone(), m.to_json());
        }
        serde_json::json!({
            "field": { "p": self.field.p(), "k": self.field.k() },
            "dim": self.dim,
            "generators": serde_json::Value::Object(gens),
            "relations": self.relations,
        })
    }

    /// Reads a representation document; generators come out sorted by name.
    pub fn from_json(v: &serde_json::Value) -> Result<MatrixRep, RepError> {
        let bad = |m: &str| RepError::BadDocument(m.to_string());
        let p = v["field"]["p"].as_u64().ok_or_else(|| bad("field.p"))?;
        let k = v["field"]["k"].as_u64().ok_or_else(|| bad("field.k"))? as u32;
        let field = Field::new(p, k).map_err(|e| bad(&e.to_string()))?;
        let dim = v["dim"].as_u64().ok_or_else(|| bad("dim"))? as usize;
        let gens_obj = v["generators"].as_object().ok_or_else(|| bad("generators"))?;
        let mut names: Vec<&String> = gens_obj.keys().collect();
        names.sort();
        let mut gens = Vec::with_capacity(names.len());
        for name in names {
            let m = Matrix::from_json(&field, &gens_obj[name]).map_err(|e| bad(&e.to_string()))?;
            gens.push((name.clone(), m));
        }
        let relations: Vec<Word> = match v.get("relations") {
            None | Some(serde_json::Value::Null) => Vec::new(),
            Some(r) => serde_json::from_value(r.clone()).map_err(|e| bad(&e.to_string()))?,
        };
        MatrixRep::new(&field, dim, gens)?.with_relations(relations)
    }
}

/// Sorted-triple monomial basis of the symmetric cube, lexicographic.
pub fn sym3_basis(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// One composition factor of a module restriction: its dimension, the
/// dimension of its first cohomology (supplied as input data), and whether
/// it is the trivial module.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Factor {
    pub label: String,
    pub dim: u32,
    pub h1_dim: u32,
    #[serde(default)]
    pub is_trivial: bool,
}

/// The multiset of composition factors of a module, with cohomology data.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct CompositionProfile {
    pub factors: Vec<Factor>,
}

impl CompositionProfile {
    pub fn validate(&self) -> Result<(), String> {
        for f in &self.factors {
            if f.dim == 0 {
                return Err(format!("factor {} has dimension 0", f.label));
            }
            if f.is_trivial && f.dim != 1 {
                return Err(format!("trivial factor {} must have dimension 1", f.label));
            }
        }
        Ok(())
    }

    pub fn concat(&self, other: &CompositionProfile) -> CompositionProfile {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.clone());
        CompositionProfile { factors }
    }
}

/// Pressure of a module from its composition profile: the sum over factors of
/// dim H^1 minus the number of trivial factors.
///
/// Negative pressure forces a stabilized line. The sharper pressure-zero
/// statement (a stabilized line or hyperplane) additionally needs
/// dim H^1(H,V) = dim H^1(H,V*) for all simple V; that is a property of the
/// supplied cohomology data which this function cannot check.
pub fn pressure(profile: &CompositionProfile) -> i64 {
    profile
        .factors
        .iter()
        .map(|f| f.h1_dim as i64 - if f.is_trivial { 1 } else { 0 })
        .sum()
}
