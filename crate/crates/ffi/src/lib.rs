//! C ABI over the toolkit. Every function returns a [`MaxatlasStatus`];
//! results come back through out-parameters. Structured results are JSON
//! strings allocated here and released with [`maxatlas_string_free`];
//! the atlas handle is opaque and released with [`maxatlas_atlas_free`].

use maxatlas::arith;
use maxatlas::atlas::{Atlas, AutoGen, Family};
use maxatlas::complements;
use maxatlas::gf::{splits, splits_by_congruence, Field, PolyId};
use maxatlas::rep::{pressure, CompositionProfile};
use maxatlas::sl28;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes of every FFI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MaxatlasStatus {
    Ok = 0,
    /// Bad arguments: unknown names, non prime powers, unparseable JSON.
    InvalidArgument = 2,
    /// The toolkit detected a mathematical inconsistency.
    MathInconsistency = 3,
    /// An internal error or panic; the library state is still sound.
    InternalError = 4,
    /// A required pointer was null.
    NullPointer = 5,
}

/// Opaque handle over the loaded maximal-subgroup tables.
pub struct MaxatlasAtlas {
    inner: Atlas,
}

fn guard<F: FnOnce() -> MaxatlasStatus>(f: F) -> MaxatlasStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => MaxatlasStatus::InternalError,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, MaxatlasStatus> {
    if ptr.is_null() {
        return Err(MaxatlasStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| MaxatlasStatus::InvalidArgument)
}

fn give_string(s: String, out: *mut *mut c_char) -> MaxatlasStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            MaxatlasStatus::Ok
        }
        Err(_) => MaxatlasStatus::InternalError,
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously produced by a maxatlas function, not yet
/// freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string (do not free).
#[no_mangle]
pub extern "C" fn maxatlas_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Loads the maximal-subgroup tables. `data_dir` may be null for the
/// embedded data, or a directory holding the seven table files.
///
/// # Safety
/// `out` must be a valid pointer; `data_dir` must be null or a valid C
/// string.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_atlas_new(
    data_dir: *const c_char,
    out: *mut *mut MaxatlasAtlas,
) -> MaxatlasStatus {
    if out.is_null() {
        return MaxatlasStatus::NullPointer;
    }
    guard(|| {
        let loaded = if data_dir.is_null() {
            Atlas::embedded()
        } else {
            match read_str(data_dir) {
                Ok(dir) => Atlas::from_dir(std::path::Path::new(dir)),
                Err(status) => return status,
            }
        };
        match loaded {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(MaxatlasAtlas { inner })) };
                MaxatlasStatus::Ok
            }
            Err(_) => MaxatlasStatus::InvalidArgument,
        }
    })
}

/// Releases an atlas handle.
///
/// # Safety
/// `atlas` must come from [`maxatlas_atlas_new`] and not be freed twice;
/// null is ignored.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_atlas_free(atlas: *mut MaxatlasAtlas) {
    if !atlas.is_null() {
        drop(Box::from_raw(atlas));
    }
}

/// Queries the maximal subgroups of `family` ("F4", "E6", "2E6") at q.
/// `induced` is a comma-separated list of induced outer automorphisms
/// ("gamma,phi") or null for none. The result is a JSON document.
///
/// # Safety
/// `atlas` must be a live handle; string arguments must be valid C strings
/// or null as documented; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_query_maximals(
    atlas: *const MaxatlasAtlas,
    family: *const c_char,
    q: u64,
    induced: *const c_char,
    out_json: *mut *mut c_char,
) -> MaxatlasStatus {
    if atlas.is_null() || out_json.is_null() {
        return MaxatlasStatus::NullPointer;
    }
    guard(|| {
        let atlas = unsafe { &(*atlas).inner };
        let family = match unsafe { read_str(family) }.and_then(|s| {
            Family::parse(s).map_err(|_| MaxatlasStatus::InvalidArgument)
        }) {
            Ok(f) => f,
            Err(status) => return status,
        };
        let mut gens = Vec::new();
        if !induced.is_null() {
            let list = match unsafe { read_str(induced) } {
                Ok(s) => s,
                Err(status) => return status,
            };
            for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                match AutoGen::parse(tok) {
                    Ok(g) => gens.push(g),
                    Err(_) => return MaxatlasStatus::InvalidArgument,
                }
            }
        }
        match atlas.query_maximals(family, q, &gens) {
            Ok(hits) => {
                let doc = serde_json::json!({
                    "family": family.name(),
                    "q": q,
                    "maximals": hits,
                });
                give_string(doc.to_string(), out_json)
            }
            Err(_) => MaxatlasStatus::InvalidArgument,
        }
    })
}

/// Embedding decision for PSL(2,8) and PSL(2,8).3 at q, as JSON.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_embedding_decision(
    q: u64,
    out_json: *mut *mut c_char,
) -> MaxatlasStatus {
    if out_json.is_null() {
        return MaxatlasStatus::NullPointer;
    }
    guard(|| match sl28::embedding_decision(q) {
        Ok(d) => give_string(serde_json::to_string(&d).expect("serializable"), out_json),
        Err(_) => MaxatlasStatus::InvalidArgument,
    })
}

/// Whether the named polynomial (f1..f5) splits over F_q. With
/// `direct_route` the answer comes from exact factorization in a
/// constructed field; otherwise from the congruence classes. The two
/// always agree; a disagreement would be reported as an inconsistency.
///
/// # Safety
/// `poly` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_splits(
    poly: *const c_char,
    q: u64,
    direct_route: bool,
    out: *mut bool,
) -> MaxatlasStatus {
    if out.is_null() {
        return MaxatlasStatus::NullPointer;
    }
    guard(|| {
        let id = match unsafe { read_str(poly) }
            .and_then(|s| PolyId::parse(s).map_err(|_| MaxatlasStatus::InvalidArgument))
        {
            Ok(id) => id,
            Err(status) => return status,
        };
        let Some((p, a)) = arith::as_prime_power(q) else {
            return MaxatlasStatus::InvalidArgument;
        };
        let cong = match splits_by_congruence(id, q) {
            Ok(v) => v,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        let answer = if direct_route {
            let field = match Field::new(p, a) {
                Ok(f) => f,
                Err(_) => return MaxatlasStatus::InvalidArgument,
            };
            let direct = splits(&id.poly(&field), &field);
            if direct != cong {
                return MaxatlasStatus::MathInconsistency;
            }
            direct
        } else {
            cong
        };
        unsafe { *out = answer };
        MaxatlasStatus::Ok
    })
}

/// Builds the PSL(2,8).3 form report at q as JSON: the embedding flags, the
/// field containing the 7th root of unity, and per-solution invariance,
/// singularity and radical dimension.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_sl28_report(
    q: u64,
    out_json: *mut *mut c_char,
) -> MaxatlasStatus {
    if out_json.is_null() {
        return MaxatlasStatus::NullPointer;
    }
    guard(|| {
        let decision = match sl28::embedding_decision(q) {
            Ok(d) => d,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        let Some((p, a)) = arith::as_prime_power(q) else {
            return MaxatlasStatus::InvalidArgument;
        };
        let mut m = 1u32;
        let mut t = q % 7;
        while t != 1 {
            t = t * (q % 7) % 7;
            m += 1;
        }
        let field = match Field::new(p, a * m) {
            Ok(f) => f,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        let module = match sl28::Sl28Module::build(&field) {
            Ok(mo) => mo,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        let sols = match sl28::solve_coefficients(&field) {
            Ok(s) => s,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        let x_inf = module.basis_vector(sl28::Block::X, sl28::Sub::Infinity);
        let mut reports = Vec::new();
        for c in &sols {
            let (form, prop) = match sl28::build_form(&module, c) {
                Ok(v) => v,
                Err(_) => return MaxatlasStatus::MathInconsistency,
            };
            reports.push(serde_json::json!({
                "c_yx": field.serialize_elem(&c.c_yx),
                "invariant": form.is_invariant(module.rep()),
                "singular_at_x_inf": form.is_singular(&x_inf),
                "radical_dim": form.singular_radical(&x_inf).dim(),
                "unreached_triples": prop.unreached_triples,
            }));
        }
        let doc = serde_json::json!({
            "q": q,
            "zeta_field": format!("{}^{}", field.p(), field.k()),
            "omega": field.serialize_elem(&module.omega()),
            "embedding": decision,
            "solution_count": sols.len(),
            "solutions": reports,
        });
        give_string(doc.to_string(), out_json)
    })
}

/// Pressure of a composition profile given as JSON (a list of factors
/// {label, dim, h1_dim, is_trivial}).
///
/// # Safety
/// `profile_json` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_pressure(
    profile_json: *const c_char,
    out: *mut i64,
) -> MaxatlasStatus {
    if out.is_null() {
        return MaxatlasStatus::NullPointer;
    }
    guard(|| {
        let text = match unsafe { read_str(profile_json) } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let profile: CompositionProfile = match serde_json::from_str(text) {
            Ok(p) => p,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        if profile.validate().is_err() {
            return MaxatlasStatus::InvalidArgument;
        }
        unsafe { *out = pressure(&profile) };
        MaxatlasStatus::Ok
    })
}

/// Complement-class computations for an instance document
/// {"orders": [...], "action": [[...]], "order_w": m}: writes the
/// centralizer bound and the brute-force class count.
///
/// # Safety
/// `instance_json` must be a valid C string; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn maxatlas_complement_classes(
    instance_json: *const c_char,
    out_bound: *mut u64,
    out_bruteforce: *mut u64,
) -> MaxatlasStatus {
    if out_bound.is_null() || out_bruteforce.is_null() {
        return MaxatlasStatus::NullPointer;
    }
    guard(|| {
        let text = match unsafe { read_str(instance_json) } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let doc: serde_json::Value = match serde_json::from_str(text) {
            Ok(d) => d,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        let (t, w) = match complements::instance_from_json(&doc) {
            Ok(v) => v,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        let bound = match complements::complement_class_bound(&t, &w) {
            Ok(b) => b,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        let brute = match complements::complement_classes_bruteforce(&t, &w) {
            Ok(b) => b,
            Err(_) => return MaxatlasStatus::InvalidArgument,
        };
        if brute > bound {
            return MaxatlasStatus::MathInconsistency;
        }
        let (Ok(bound), Ok(brute)) = (u64::try_from(bound), u64::try_from(brute)) else {
            return MaxatlasStatus::InternalError;
        };
        unsafe {
            *out_bound = bound;
            *out_bruteforce = brute;
        }
        MaxatlasStatus::Ok
    })
}
