//! The acceptance suite: every verifiable headline claim wired to an exact
//! check with its tolerance pinned in code (all checks here are exact).
//! Callable from tests and from the `selftest` subcommand.

use crate::arith;
use crate::atlas::{self, Atlas, Family};
use crate::complements::{
    complement_class_bound, complement_classes_bruteforce, CyclicAction, FinAbelianGroup,
};
use crate::gf::{splits, Field, PolyId};
use crate::linalg::{kernel, rref, Matrix, Subspace};
use crate::rep::{pressure, CompositionProfile, Factor, MatrixRep};
use crate::ryba::{all_triples, jacobi_residual, ryba_space, sl2_bracket, subalgebra_check, AltProduct};
use crate::sl28::{
    self, build_form, delta_system, embedding_decision, solve_coefficients, Block, Sl28Module, Sub,
    SINGULAR_ORBIT_SIZE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
    pub millis: u128,
}

pub const CRITERION_NAMES: [&str; 8] = [
    "splitting congruences reproduce direct factorization for p < 10^4",
    "27-dimensional representation: relations and group order 1512",
    "invariant trilinear form: singular radical 17, delta system rank 1",
    "embedding decision: three independent routes agree for q < 500",
    "complement classes: brute force never exceeds the centralizer bound",
    "invariant alternating products match the exhaustive oracle",
    "pressure arithmetic",
    "table fidelity: row checksums and spot queries",
];

pub fn run_criterion(id: u8) -> CriterionReport {
    let start = Instant::now();
    let (pass, details) = match id {
        1 => criterion_splitting(),
        2 => criterion_representation(),
        3 => criterion_form(),
        4 => criterion_embedding_routes(),
        5 => criterion_complements(),
        6 => criterion_ryba(),
        7 => criterion_pressure(),
        8 => criterion_atlas(),
        _ => (false, format!("no criterion {id}")),
    };
    CriterionReport {
        id,
        name: CRITERION_NAMES[(id as usize).saturating_sub(1).min(7)],
        pass,
        details,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=8).map(run_criterion).collect()
}

fn criterion_splitting() -> (bool, String) {
    let primes = arith::primes_below(10_000);
    let mut checked = 0u64;
    for &p in &primes {
        let fp = Field::new(p, 1).expect("prime field");
        for id in [PolyId::F1, PolyId::F2, PolyId::F3, PolyId::F4] {
            let direct = splits(&id.poly(&fp), &fp);
            let cong = crate::gf::splits_by_congruence(id, p).expect("prime power");
            if direct != cong {
                return (false, format!("{:?} disagrees at p = {p}", id));
            }
            checked += 1;
        }
        for k in 1..=3u32 {
            let fq = Field::new(p, k).expect("field");
            let direct = splits(&PolyId::F5.poly(&fq), &fq);
            let cong = crate::gf::splits_by_congruence(PolyId::F5, p.pow(k)).expect("prime power");
            if direct != cong {
                return (false, format!("f5 disagrees at q = {}^{k}", p));
            }
            checked += 1;
        }
    }
    (true, format!("{} prime/polynomial pairs, exact agreement", checked))
}

fn criterion_representation() -> (bool, String) {
    let mut details = Vec::new();
    for (p, k) in [(29u64, 1u32), (11, 3)] {
        let field = Field::new(p, k).expect("field");
        let module = match Sl28Module::build(&field) {
            Ok(m) => m,
            Err(e) => return (false, format!("build over {p}^{k} failed: {e}")),
        };
        if let Err(e) = module.rep().verify_relations() {
            return (false, format!("relations over {p}^{k}: {e}"));
        }
        match module.rep().enumerate_group(2000) {
            Ok(1512) => details.push(format!("{p}^{k}: order 1512")),
            Ok(n) => return (false, format!("closure over {p}^{k} gave {n}")),
            Err(e) => return (false, format!("closure over {p}^{k}: {e}")),
        }
    }
    (true, details.join("; "))
}

fn check_form_field(field: &Field, expected_sets: usize) -> Result<String, String> {
    let module = Sl28Module::build(field).map_err(|e| e.to_string())?;
    let sols = solve_coefficients(field).map_err(|e| e.to_string())?;
    if sols.len() != expected_sets {
        return Err(format!(
            "expected {expected_sets} solved sets over {}^{}, found {}",
            field.p(),
            field.k(),
            sols.len()
        ));
    }
    let x_inf = module.basis_vector(Block::X, Sub::Infinity);
    for (i, c) in sols.iter().enumerate() {
        if !c.verify_solved(field) {
            return Err(format!("set {i} fails the solved identities"));
        }
        let (form, report) = build_form(&module, c).map_err(|e| format!("set {i}: {e}"))?;
        if report.unreached_triples != SINGULAR_ORBIT_SIZE {
            return Err(format!("set {i}: unexpected unreached count {}", report.unreached_triples));
        }
        if !form.is_invariant(module.rep()) {
            return Err(format!("set {i}: form not invariant"));
        }
        if !form.is_singular(&x_inf) {
            return Err(format!("set {i}: x_inf not singular"));
        }
        let d = delta_system(field, c);
        let (_, rank) = rref(&d);
        if rank != 1 || kernel(&d).dim() != 2 {
            return Err(format!("set {i}: delta system rank {rank}"));
        }
        // Sweep every nonzero c_inf: the radical dimension stays 17.
        for idx in 1..field.size() {
            let swept = c.clone().with_c_inf(field.from_index(idx));
            let (f2, _) = build_form(&module, &swept).map_err(|e| format!("sweep: {e}"))?;
            let dim = f2.singular_radical(&x_inf).dim();
            if dim != 17 {
                return Err(format!("set {i}, c_inf index {idx}: radical dim {dim}"));
            }
        }
    }
    Ok(format!(
        "{}^{}: {} set(s), radical 17 across {} swept c_inf values",
        field.p(),
        field.k(),
        sols.len(),
        field.size() - 1
    ))
}

fn criterion_form() -> (bool, String) {
    let mut details = Vec::new();
    // GF(29): one solved set; GF(113): 113 = 1 mod 7, 113 = 2 mod 3, one set.
    for p in [29u64, 113] {
        match check_form_field(&Field::new(p, 1).expect("field"), 1) {
            Ok(d) => details.push(d),
            Err(e) => return (false, e),
        }
    }
    // A q = 1 mod 3 case with three sets, found by search among q < 500.
    let mut found = None;
    for q in 2..500u64 {
        let Some((p, a)) = arith::as_prime_power(q) else { continue };
        if p == 2 || p == 3 || p == 7 || q % 7 != 1 || q % 3 != 1 {
            continue;
        }
        let field = Field::new(p, a).expect("field");
        if solve_coefficients(&field).map(|s| s.len()).unwrap_or(0) == 3 {
            found = Some(field);
            break;
        }
    }
    let Some(field) = found else {
        return (false, "no q < 500 with three solved sets".into());
    };
    match check_form_field(&field, 3) {
        Ok(d) => details.push(d),
        Err(e) => return (false, e),
    }
    (true, details.join("; "))
}

fn criterion_embedding_routes() -> (bool, String) {
    let mut checked = 0u64;
    for q in 2..500u64 {
        let Some((p, _)) = arith::as_prime_power(q) else { continue };
        if p == 2 || p == 3 || p == 7 {
            continue;
        }
        let d = match embedding_decision(q) {
            Ok(d) => d,
            Err(e) => return (false, format!("decision at q = {q}: {e}")),
        };
        // H' flags are the printed mod-7 classes, and exclusive.
        let expect_e6 = matches!(q % 7, 1 | 2 | 4);
        if d.h_prime_in_e6 != expect_e6 || d.h_prime_in_2e6 == expect_e6 {
            return (false, format!("H' flags wrong at q = {q}"));
        }
        let cube = match sl28::h_in_e6_by_cube_route(q) {
            Ok(v) => v,
            Err(e) => return (false, format!("cube route at q = {q}: {e}")),
        };
        let constructed = match sl28::h_in_e6_by_construction(q) {
            Ok(v) => v,
            Err(e) => return (false, format!("construction route at q = {q}: {e}")),
        };
        if d.h_in_e6 != cube || d.h_in_e6 != constructed {
            return (
                false,
                format!(
                    "routes disagree at q = {q}: decision {}, cube {}, construction {}",
                    d.h_in_e6, cube, constructed
                ),
            );
        }
        checked += 1;
    }
    (true, format!("{checked} prime powers, three routes in exact agreement"))
}

/// Deterministic 200-instance sample of valid cyclic actions.
pub fn complement_sample(count: usize) -> Vec<(FinAbelianGroup, CyclicAction)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let kind = rng.gen_range(0..5u8);
        let inst: Option<(FinAbelianGroup, CyclicAction)> = match kind {
            // Inversion on a random abelian group.
            0 => {
                let r = rng.gen_range(1..=3usize);
                let orders: Vec<u64> = (0..r).map(|_| rng.gen_range(2..=12u64)).collect();
                let t = FinAbelianGroup::new(orders).unwrap();
                let w = CyclicAction {
                    matrix: (0..r)
                        .map(|i| (0..r).map(|j| if i == j { -1 } else { 0 }).collect())
                        .collect(),
                    order: 2,
                };
                Some((t, w))
            }
            // Coordinate rotation on C_n^r.
            1 => {
                let r = rng.gen_range(2..=4usize);
                let n = rng.gen_range(2..=8u64);
                let t = FinAbelianGroup::new(vec![n; r]).unwrap();
                let w = CyclicAction {
                    matrix: (0..r)
                        .map(|i| (0..r).map(|j| i64::from(j == (i + 1) % r)).collect())
                        .collect(),
                    order: r as u64,
                };
                Some((t, w))
            }
            // Multiplication by a unit on C_n.
            2 => {
                let n = rng.gen_range(3..=500u64);
                let mut u = rng.gen_range(2..n);
                let mut tries = 0;
                while arith::gcd(u, n) != 1 && tries < 32 {
                    u = rng.gen_range(2..n);
                    tries += 1;
                }
                if arith::gcd(u, n) != 1 {
                    None
                } else {
                    // multiplicative order of u mod n
                    let mut m = 1u64;
                    let mut acc = u % n;
                    while acc != 1 {
                        acc = acc * u % n;
                        m += 1;
                    }
                    let t = FinAbelianGroup::new(vec![n]).unwrap();
                    Some((t, CyclicAction { matrix: vec![vec![u as i64]], order: m }))
                }
            }
            // Identity with a declared order.
            3 => {
                let n = rng.gen_range(2..=30u64);
                let m = rng.gen_range(1..=4u64);
                let t = FinAbelianGroup::new(vec![n]).unwrap();
                Some((t, CyclicAction { matrix: vec![vec![1]], order: m }))
            }
            // Companion matrix on C_p^2 (Singer-type) for small primes.
            _ => {
                let p = *[3u64, 5, 7].get(rng.gen_range(0..3usize)).unwrap();
                let a = rng.gen_range(0..p) as i64;
                let b = rng.gen_range(1..p) as i64;
                let t = FinAbelianGroup::new(vec![p, p]).unwrap();
                let w0 = CyclicAction { matrix: vec![vec![0, 1], vec![-b, a]], order: 1 };
                // Determine the actual order by iterating on basis vectors.
                let mut m = 1u64;
                let apply_pow = |k: u64, x: &[u64]| {
                    let mut v = x.to_vec();
                    for _ in 0..k {
                        v = w0.apply(&t, &v);
                    }
                    v
                };
                loop {
                    if apply_pow(m, &[1, 0]) == vec![1, 0] && apply_pow(m, &[0, 1]) == vec![0, 1] {
                        break;
                    }
                    m += 1;
                    if m > p * p {
                        break;
                    }
                }
                if m > p * p {
                    None // not invertible
                } else {
                    Some((t, CyclicAction { matrix: w0.matrix, order: m }))
                }
            }
        };
        let Some((t, w)) = inst else { continue };
        if w.validate(&t).is_err() {
            continue;
        }
        if t.order() > 1000 || t.order() * w.order as u128 > 100_000 {
            continue;
        }
        out.push((t, w));
    }
    out
}

fn criterion_complements() -> (bool, String) {
    // The dihedral pin: C4 with inversion gives exactly two classes.
    let c4 = FinAbelianGroup::new(vec![4]).unwrap();
    let inv = CyclicAction { matrix: vec![vec![-1]], order: 2 };
    match complement_classes_bruteforce(&c4, &inv) {
        Ok(2) => {}
        other => return (false, format!("dihedral case gave {other:?}")),
    }
    let mut coprime = 0u64;
    for (i, (t, w)) in complement_sample(200).iter().enumerate() {
        let bound = match complement_class_bound(t, w) {
            Ok(b) => b,
            Err(e) => return (false, format!("instance {i}: {e}")),
        };
        let brute = match complement_classes_bruteforce(t, w) {
            Ok(b) => b,
            Err(e) => return (false, format!("instance {i}: {e}")),
        };
        if brute > bound {
            return (false, format!("instance {i}: brute {brute} exceeds bound {bound}"));
        }
        if arith::gcd_u128(t.order(), w.order as u128) == 1 {
            coprime += 1;
            if brute != 1 {
                return (false, format!("instance {i}: coprime case has {brute} classes"));
            }
        }
    }
    (true, format!("200 instances within the bound; {coprime} coprime cases all give one class"))
}

/// Exhaustive oracle: the number of invariant alternating products over a
/// small field, by enumerating every product.
fn ryba_oracle_count(rep: &MatrixRep) -> u64 {
    let f = rep.field();
    let p = f.p();
    let n = rep.dim();
    let slots = n * (n - 1) / 2 * n;
    let total = (p as u64).pow(slots as u32);
    let mut count = 0u64;
    for code in 0..total {
        let mut c = code;
        let mut rows = Vec::with_capacity(n * (n - 1) / 2);
        for _ in 0..n * (n - 1) / 2 {
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                row.push(f.from_u64(c % p));
                c /= p;
            }
            rows.push(row);
        }
        let prod = AltProduct::new(f, n, rows);
        if rep.generators().iter().all(|(_, g)| prod.commutes_with(g)) {
            count += 1;
        }
    }
    count
}

fn criterion_ryba() -> (bool, String) {
    // Corpus of all-dimensions-at-most-3 representations over GF(2)/GF(3).
    let corpus: Vec<(u64, usize, Vec<Vec<i64>>)> = vec![
        (2, 2, vec![vec![1, 0, 0, 1]]),                            // trivial
        (2, 2, vec![vec![0, 1, 1, 0]]),                            // swap
        (2, 2, vec![vec![1, 1, 0, 1]]),                            // unipotent
        (2, 3, vec![vec![0, 1, 0, 0, 0, 1, 1, 0, 0]]),             // 3-cycle
        (2, 3, vec![vec![0, 1, 0, 1, 0, 0, 0, 0, 1]]),             // transposition
        (2, 3, vec![vec![0, 1, 0, 0, 0, 1, 1, 0, 0], vec![0, 1, 0, 1, 0, 0, 0, 0, 1]]), // Sym(3)
        (3, 2, vec![vec![1, 1, 0, 1]]),
        (3, 2, vec![vec![2, 0, 0, 2]]),                            // -1
        (3, 3, vec![vec![0, 1, 0, 0, 0, 1, 1, 0, 0]]),
        (3, 3, vec![vec![2, 0, 0, 0, 2, 0, 0, 0, 1]]),
        (3, 3, vec![vec![1, 1, 0, 0, 1, 1, 0, 0, 1]]),             // regular unipotent
    ];
    for (p, n, gens) in &corpus {
        let f = Field::new(*p, 1).unwrap();
        let mats: Vec<(String, Matrix)> = gens
            .iter()
            .enumerate()
            .map(|(i, flat)| {
                (format!("g{i}"), Matrix::from_fn(&f, *n, *n, |r, c| f.from_int(flat[r * n + c])))
            })
            .collect();
        let rep = MatrixRep::new(&f, *n, mats).expect("corpus rep");
        let dim = match ryba_space(&rep) {
            Ok(basis) => basis.len(),
            Err(e) => return (false, format!("ryba failed on corpus: {e}")),
        };
        let count = ryba_oracle_count(&rep);
        if (*p).pow(dim as u32) != count {
            return (false, format!("dimension {dim} disagrees with oracle count {count} (p={p}, n={n})"));
        }
    }
    // The hand-built sl2 bracket: zero residual on all triples, and the
    // block embedding passes the closure test while a twisted one fails.
    let f = Field::new(7, 1).unwrap();
    let bracket = sl2_bracket(&f);
    let residuals = jacobi_residual(&bracket, &all_triples(3));
    if !residuals.iter().all(|r| r.iter().all(|e| e.is_zero())) {
        return (false, "sl2 bracket has a nonzero Jacobi residual".into());
    }
    let mut big = AltProduct::zero(&f, 6);
    for (i, j) in crate::linalg::wedge_pairs(3) {
        let v = bracket.basis_value(i, j);
        let mut row = vec![f.zero(); 6];
        row[..3].clone_from_slice(&v);
        big.set_row(i, j, row);
    }
    let unit = |i: usize| {
        let mut v = vec![f.zero(); 6];
        v[i] = f.one();
        v
    };
    let w = Subspace::from_rows(&f, 6, vec![unit(0), unit(1), unit(2)]);
    let w_bad = Subspace::from_rows(&f, 6, vec![unit(0), unit(1), unit(3)]);
    match subalgebra_check(&big, &w, &[big.clone()]) {
        Ok(true) => {}
        other => return (false, format!("block subalgebra check gave {other:?}")),
    }
    match subalgebra_check(&big, &w_bad, &[big.clone()]) {
        Ok(false) => {}
        other => return (false, format!("negative control gave {other:?}")),
    }
    (true, format!("{} corpus representations match the oracle; sl2 checks pass", corpus.len()))
}

fn criterion_pressure() -> (bool, String) {
    let profile = CompositionProfile {
        factors: vec![
            Factor { label: "10".into(), dim: 10, h1_dim: 0, is_trivial: false },
            Factor { label: "5a".into(), dim: 5, h1_dim: 1, is_trivial: false },
            Factor { label: "5b".into(), dim: 5, h1_dim: 1, is_trivial: false },
            Factor { label: "5*".into(), dim: 5, h1_dim: 1, is_trivial: false },
            Factor { label: "1a".into(), dim: 1, h1_dim: 0, is_trivial: true },
            Factor { label: "1b".into(), dim: 1, h1_dim: 0, is_trivial: true },
        ],
    };
    if pressure(&profile) != 1 {
        return (false, format!("reference profile gave {}", pressure(&profile)));
    }
    let no_trivial = CompositionProfile {
        factors: vec![Factor { label: "8".into(), dim: 8, h1_dim: 0, is_trivial: false }],
    };
    let one_trivial = CompositionProfile {
        factors: vec![Factor { label: "1".into(), dim: 1, h1_dim: 0, is_trivial: true }],
    };
    if pressure(&no_trivial) != 0 || pressure(&one_trivial) != -1 {
        return (false, "trivial cases wrong".into());
    }
    let combined = profile.concat(&one_trivial);
    if pressure(&combined) != pressure(&profile) + pressure(&one_trivial) {
        return (false, "additivity fails".into());
    }
    (true, "reference profile = 1; additivity and trivial cases hold".into())
}

fn criterion_atlas() -> (bool, String) {
    let a = match Atlas::embedded() {
        Ok(a) => a,
        Err(e) => return (false, format!("load: {e}")),
    };
    let counts = atlas::row_counts(&a);
    let expect: std::collections::BTreeMap<u8, usize> =
        [(1, 14), (2, 12), (3, 8), (5, 15), (6, 19), (7, 24), (8, 23)].into_iter().collect();
    if counts != expect {
        return (false, format!("row counts {counts:?}"));
    }
    // F4(7): exactly the Table 1 rows satisfied at (7,7).
    let hits = a.query_maximals(Family::F4, 7, &[]).unwrap();
    let s_rows: Vec<&str> =
        hits.iter().filter(|h| h.source_table == 1).map(|h| h.group.as_str()).collect();
    if s_rows != vec!["3D_4(2).3", "PGL_2(13)", "PSL_2(25).2", "PSL_2(27).3", "PSL_2(8).3"] {
        return (false, format!("F4(7) rows {s_rows:?}"));
    }
    // E6(5): M_12 with 4 classes.
    let hits = a.query_maximals(Family::E6, 5, &[]).unwrap();
    if !hits.iter().any(|h| h.group == "M_12" && h.classes == 4) {
        return (false, "E6(5) lacks M_12 with 4 classes".into());
    }
    // 2E6(2): Fi_22 with 3 classes; Omega_7(3).2 only under phi.
    let hits = a.query_maximals(Family::TwoE6, 2, &[]).unwrap();
    if !hits.iter().any(|h| h.group == "Fi_22" && h.classes == 3) {
        return (false, "2E6(2) lacks Fi_22 with 3 classes".into());
    }
    if hits.iter().any(|h| h.group == "Omega_7(3).2") {
        return (false, "Omega_7(3).2 appeared without phi".into());
    }
    let phi = [atlas::AutoGen::parse("phi").unwrap()];
    let hits = a.query_maximals(Family::TwoE6, 2, &phi).unwrap();
    if !hits.iter().any(|h| h.group == "Omega_7(3).2" && h.novelty) {
        return (false, "Omega_7(3).2 novelty missing under phi".into());
    }
    // PGL_2(13) novelties require the printed automorphism.
    let gamma = [atlas::AutoGen::parse("gamma").unwrap()];
    let without = a.query_maximals(Family::E6, 53, &[]).unwrap();
    let with = a.query_maximals(Family::E6, 53, &gamma).unwrap();
    if without.iter().any(|h| h.group == "PGL_2(13)") || !with.iter().any(|h| h.group == "PGL_2(13)") {
        return (false, "E6 PGL_2(13) novelty gating wrong".into());
    }
    let without = a.query_maximals(Family::TwoE6, 3, &[]).unwrap();
    let with = a.query_maximals(Family::TwoE6, 3, &phi).unwrap();
    if without.iter().any(|h| h.group == "PGL_2(13)") || !with.iter().any(|h| h.group == "PGL_2(13)") {
        return (false, "2E6 PGL_2(13) novelty gating wrong".into());
    }
    (true, "row checksums 14/12/8/15/19/24/23; spot queries reproduce the printed rows".into())
}
