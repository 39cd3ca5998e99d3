//! Conjugacy-class counting for complements to a finite abelian normal
//! subgroup under a cyclic action: the centralizer bound and an explicit
//! enumeration oracle for cross-checking it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplementError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("instance too large: |T| * m = {size} exceeds {cap}")]
    SizeCap { size: u128, cap: u128 },
    #[error("malformed instance document: {0}")]
    BadDocument(String),
}

/// Finite abelian group as a product of cyclic factors; elements are integer
/// tuples reduced mod the orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinAbelianGroup {
    pub orders: Vec<u64>,
}

impl FinAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<FinAbelianGroup, ComplementError> {
        if orders.iter().any(|&n| n == 0) {
            return Err(ComplementError::InvalidAction("cyclic factor of order 0".into()));
        }
        Ok(FinAbelianGroup { orders })
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&n| n as u128).product()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &n)| (x + y) % n).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(&x, &n)| (n - x % n) % n).collect()
    }

    /// Iterates every element; only sensible for small groups.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![self.zero()];
        for (i, &n) in self.orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for base in &out {
                for v in 0..n {
                    let mut t = base.clone();
                    t[i] = v;
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }
}

/// An automorphism of T given by an integer matrix acting on tuples, with a
/// declared order m for the cyclic group it generates in the extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicAction {
    /// Row i is the image of the i-th standard generator.
    pub matrix: Vec<Vec<i64>>,
    pub order: u64,
}

impl CyclicAction {
    /// Checks that the matrix induces an endomorphism of T whose order
    /// divides the declared m, and that it is invertible.
    pub fn validate(&self, t: &FinAbelianGroup) -> Result<(), ComplementError> {
        let r = t.rank();
        if self.matrix.len() != r || self.matrix.iter().any(|row| row.len() != r) {
            return Err(ComplementError::InvalidAction("matrix shape must match the rank of T".into()));
        }
        if self.order == 0 {
            return Err(ComplementError::InvalidAction("declared order must be positive".into()));
        }
        // Well-definedness: the image of n_i * e_i must vanish, i.e.
        // n_j | W[i][j] * n_i for all i, j.
        for i in 0..r {
            for j in 0..r {
                let ni = t.orders[i] as i128;
                let nj = t.orders[j] as i128;
                if (self.matrix[i][j] as i128 * ni) % nj != 0 {
                    return Err(ComplementError::InvalidAction(format!(
                        "matrix entry ({i},{j}) does not respect the factor orders"
                    )));
                }
            }
        }
        // w^m must act as the identity on the generators.
        for i in 0..r {
            let mut e = t.zero();
            e[i] = 1 % t.orders[i];
            let mut img = e.clone();
            for _ in 0..self.order {
                img = self.apply(t, &img);
            }
            if img != e {
                return Err(ComplementError::InvalidAction(
                    "matrix does not have the declared order as an action".into(),
                ));
            }
        }
        // Invertibility follows: w * w^(m-1) = identity.
        Ok(())
    }

    pub fn apply(&self, t: &FinAbelianGroup, x: &[u64]) -> Vec<u64> {
        let r = t.rank();
        let mut out = t.zero();
        for (j, out_j) in out.iter_mut().enumerate() {
            let nj = t.orders[j] as i128;
            let mut acc: i128 = 0;
            for i in 0..r {
                acc += self.matrix[i][j] as i128 * x[i] as i128;
            }
            *out_j = acc.rem_euclid(nj) as u64;
        }
        out
    }

    /// t + w(t) + w^2(t) + ... + w^(m-1)(t): the T-part of (t w)^m.
    pub fn norm(&self, t: &FinAbelianGroup, x: &[u64]) -> Vec<u64> {
        let mut acc = t.zero();
        let mut cur = x.to_vec();
        for _ in 0..self.order {
            acc = t.add(&acc, &cur);
            cur = self.apply(t, &cur);
        }
        acc
    }
}

/// |C_T(w)|: the number of fixed points of the action.
pub fn centralizer_order(t: &FinAbelianGroup, w: &CyclicAction) -> Result<u128, ComplementError> {
    w.validate(t)?;
    const CAP: u128 = 100_000_000;
    if t.order() > CAP {
        return Err(ComplementError::SizeCap { size: t.order(), cap: CAP });
    }
    let mut count = 0u128;
    for x in t.elements() {
        if w.apply(t, &x) == x {
            count += 1;
        }
    }
    Ok(count)
}

/// Upper bound on the number of T-conjugacy classes of complements to T in
/// T ⋊ <w>: the largest divisor of |C_T(w)| supported on the primes of m.
pub fn complement_class_bound(t: &FinAbelianGroup, w: &CyclicAction) -> Result<u128, ComplementError> {
    let c = centralizer_order(t, w)?;
    let mut n = 1u128;
    let mut rest = c;
    for (r, _) in crate::arith::factor(w.order) {
        while rest % r as u128 == 0 {
            rest /= r as u128;
            n *= r as u128;
        }
    }
    Ok(n)
}

/// Explicit oracle: builds T ⋊ <w>, enumerates every complement as a cyclic
/// subgroup generated by an element of the coset wT of order exactly m, and
/// counts T-conjugacy orbits of the resulting subgroups.
pub fn complement_classes_bruteforce(
    t: &FinAbelianGroup,
    w: &CyclicAction,
) -> Result<u128, ComplementError> {
    w.validate(t)?;
    const CAP: u128 = 100_000;
    let size = t.order() * w.order as u128;
    if size > CAP {
        return Err(ComplementError::SizeCap { size, cap: CAP });
    }
    let m = w.order;
    // A complement is a cyclic subgroup of order m mapping onto the quotient.
    // It contains exactly one element of the coset (., w), and that element
    // generates it; so candidates are the elements (x, w), kept when the
    // materialized subgroup really is a complement.
    let mut generators: Vec<Vec<u64>> = Vec::new();
    for x in t.elements() {
        // <(x, w)> = {(x_a, w^a)} with x_{a+1} = x + w(x_a).
        let mut elems: Vec<(Vec<u64>, u64)> = Vec::with_capacity(m as usize);
        let mut cur = t.zero();
        for a in 0..m {
            elems.push((cur.clone(), a));
            cur = t.add(&x, &w.apply(t, &cur));
        }
        // (x, w)^m = (norm(x), 1): closure and order-exactly-m check.
        if cur != t.zero() {
            continue;
        }
        // Trivial intersection with T: only the identity sits over w^0.
        if elems.iter().filter(|(y, a)| *a == 0 && *y == t.zero()).count() != 1
            || elems.iter().any(|(y, a)| *a == 0 && *y != t.zero())
        {
            continue;
        }
        generators.push(x);
    }
    if generators.is_empty() {
        return Ok(0);
    }
    // Distinct generators give distinct subgroups (the subgroup determines
    // its unique element over w). T-conjugacy translates the generator:
    // u^-1 (x, w) u = (x + w(u) - u, w).
    let index: std::collections::HashMap<Vec<u64>, usize> =
        generators.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut deltas: Vec<Vec<u64>> = t
        .elements()
        .into_iter()
        .map(|u| t.add(&w.apply(t, &u), &t.neg(&u)))
        .collect();
    deltas.sort();
    deltas.dedup();
    let mut seen = vec![false; generators.len()];
    let mut classes = 0u128;
    for start in 0..generators.len() {
        if seen[start] {
            continue;
        }
        classes += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for d in &deltas {
                let y = t.add(&generators[i], d);
                let j = *index.get(&y).expect("conjugate of a complement is a complement");
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    Ok(classes)
}

/// Number of T-conjugacy classes of the coset wT itself (elements, not
/// subgroups), by explicit orbit counting. Used to cross-check the
/// centralizer computation when |T| divides a power of m.
pub fn coset_classes_bruteforce(t: &FinAbelianGroup, w: &CyclicAction) -> Result<u128, ComplementError> {
    w.validate(t)?;
    const CAP: u128 = 100_000;
    if t.order() > CAP {
        return Err(ComplementError::SizeCap { size: t.order(), cap: CAP });
    }
    // (x, w) ~ (x + w(u) - u, w); orbits under translation by im(w - 1).
    let mut image: Vec<Vec<u64>> = t
        .elements()
        .into_iter()
        .map(|u| t.add(&w.apply(t, &u), &t.neg(&u)))
        .collect();
    image.sort();
    image.dedup();
    let total = t.order();
    assert_eq!(total % image.len() as u128, 0);
    Ok(total / image.len() as u128)
}

/// JSON instance format: {"orders": [...], "action": [[...]], "order_w": m}.
pub fn instance_from_json(v: &serde_json::Value) -> Result<(FinAbelianGroup, CyclicAction), ComplementError> {
    let bad = |m: &str| ComplementError::BadDocument(m.to_string());
    let orders: Vec<u64> =
        serde_json::from_value(v.get("orders").cloned().ok_or_else(|| bad("missing orders"))?)
            .map_err(|e| bad(&e.to_string()))?;
    let matrix: Vec<Vec<i64>> =
        serde_json::from_value(v.get("action").cloned().ok_or_else(|| bad("missing action"))?)
            .map_err(|e| bad(&e.to_string()))?;
    let order = v.get("order_w").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing order_w"))?;
    let t = FinAbelianGroup::new(orders)?;
    let w = CyclicAction { matrix, order };
    w.validate(&t)?;
    Ok((t, w))
}
