//! Exact computational toolkit for the subgroup structure of the exceptional
//! groups F4(q), E6(q) and 2E6(q): finite-field arithmetic, exact linear
//! algebra, matrix representations, invariant trilinear forms, Ryba spaces,
//! complement counting, and a queryable maximal-subgroup oracle.

pub mod arith;
pub mod gf;
pub mod linalg;
pub mod rep;
pub mod ryba;
pub mod complements;
pub mod sl28;
pub mod atlas;
pub mod acceptance;
