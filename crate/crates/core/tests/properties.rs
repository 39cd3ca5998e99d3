//! Property tests over randomly generated inputs: field axioms, echelon
//! invariants, root-set correctness, and pressure additivity.

use maxatlas::gf::{splits, splits_by_congruence, Field, PolyId};
use maxatlas::linalg::{exterior_square, kernel, rank, rref, Matrix};
use maxatlas::rep::{pressure, CompositionProfile, Factor};
use proptest::prelude::*;

fn small_field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::new(2, 1).unwrap()),
        Just(Field::new(7, 1).unwrap()),
        Just(Field::new(29, 1).unwrap()),
        Just(Field::new(3, 2).unwrap()),
        Just(Field::new(5, 3).unwrap()),
        Just(Field::new(2, 5).unwrap()),
    ]
}

fn element(field: &Field, seed: u64) -> maxatlas::gf::FieldElement {
    field.from_index(seed as u128 % field.size())
}

proptest! {
    #[test]
    fn field_axioms(f in small_field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (element(&f, a), element(&f, b), element(&f, c));
        // Commutativity, associativity, distributivity.
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        // Frobenius is additive.
        prop_assert_eq!(
            f.frobenius(&f.add(&a, &b)),
            f.add(&f.frobenius(&a), &f.frobenius(&b))
        );
        // Inverses invert.
        if !a.is_zero() {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }

    #[test]
    fn nth_roots_are_exactly_the_solution_set(
        p in prop_oneof![Just(7u64), Just(11), Just(13), Just(29)],
        a_seed in any::<u64>(),
        n in 1u64..10,
    ) {
        let f = Field::new(p, 1).unwrap();
        let a = element(&f, a_seed);
        let roots = f.nth_roots(&a, n);
        // Sortedness and correctness.
        for w in roots.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for r in &roots {
            prop_assert_eq!(&f.pow(r, n as u128), &a);
        }
        // Completeness by scan.
        let expect = f
            .elements()
            .filter(|x| f.pow(x, n as u128) == a && !(a.is_zero() && x.is_zero()))
            .count()
            + usize::from(a.is_zero());
        prop_assert_eq!(roots.len(), expect);
    }

    #[test]
    fn splitting_congruences_match_factorization(p_idx in 0usize..168, k in 1u32..3) {
        let primes = maxatlas::arith::primes_below(1000);
        let p = primes[p_idx % primes.len()];
        let f = Field::new(p, k).unwrap();
        for id in [PolyId::F1, PolyId::F2, PolyId::F3, PolyId::F4, PolyId::F5] {
            prop_assert_eq!(
                splits(&id.poly(&f), &f),
                splits_by_congruence(id, p.pow(k)).unwrap(),
                "{:?} over {}^{}", id, p, k
            );
        }
    }

    #[test]
    fn rref_is_idempotent_and_kernel_solves(
        entries in proptest::collection::vec(any::<u64>(), 12),
        p in prop_oneof![Just(5u64), Just(13)],
    ) {
        let f = Field::new(p, 1).unwrap();
        let m = Matrix::from_fn(&f, 3, 4, |i, j| f.from_u64(entries[i * 4 + j]));
        let (r1, rk) = rref(&m);
        let (r2, rk2) = rref(&r1);
        prop_assert_eq!(&r1, &r2);
        prop_assert_eq!(rk, rk2);
        let ker = kernel(&m);
        prop_assert_eq!(ker.dim() + rank(&m), 4);
        for v in ker.basis_rows() {
            for i in 0..3 {
                let mut acc = f.zero();
                for j in 0..4 {
                    acc = f.add(&acc, &f.mul(m.at(i, j), &v[j]));
                }
                prop_assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn exterior_square_respects_products(
        ea in proptest::collection::vec(0u64..5, 9),
        eb in proptest::collection::vec(0u64..5, 9),
    ) {
        let f = Field::new(5, 1).unwrap();
        let a = Matrix::from_fn(&f, 3, 3, |i, j| f.from_u64(ea[i * 3 + j]));
        let b = Matrix::from_fn(&f, 3, 3, |i, j| f.from_u64(eb[i * 3 + j]));
        // The identity holds for all matrices, invertible or not.
        prop_assert_eq!(exterior_square(&a.mul(&b)), exterior_square(&a).mul(&exterior_square(&b)));
    }

    #[test]
    fn pressure_is_additive(
        dims_a in proptest::collection::vec((1u32..20, 0u32..3, any::<bool>()), 0..6),
        dims_b in proptest::collection::vec((1u32..20, 0u32..3, any::<bool>()), 0..6),
    ) {
        let mk = |desc: &[(u32, u32, bool)]| CompositionProfile {
            factors: desc
                .iter()
                .enumerate()
                .map(|(i, &(dim, h1, triv))| Factor {
                    label: format!("f{i}"),
                    dim: if triv { 1 } else { dim },
                    h1_dim: h1,
                    is_trivial: triv,
                })
                .collect(),
        };
        let a = mk(&dims_a);
        let b = mk(&dims_b);
        prop_assert_eq!(pressure(&a.concat(&b)), pressure(&a) + pressure(&b));
    }
}
