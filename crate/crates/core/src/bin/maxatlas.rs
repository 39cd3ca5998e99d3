//! Command-line surface over the toolkit: table queries, the PSL(2,8).3
//! engine, splitting tests, pressure, complement counting, invariant
//! products, and the acceptance scoreboard.
//!
//! Exit codes: 0 success, 2 usage error, 3 mathematical inconsistency.

use clap::{Parser, Subcommand, ValueEnum};
use maxatlas::arith;
use maxatlas::atlas::{Atlas, AutoGen, Family};
use maxatlas::complements;
use maxatlas::gf::{splits, Field, PolyId};
use maxatlas::linalg::{kernel, rref};
use maxatlas::rep::{pressure, CompositionProfile, MatrixRep};
use maxatlas::ryba::{all_triples, jacobi_residual, ryba_space};
use maxatlas::sl28::{
    self, build_form, delta_system, embedding_decision, frobenius_on_forms, solve_coefficients,
    Block, Sl28Module, Sub,
};
use serde::Serialize;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "maxatlas",
    version,
    about = "Exact finite-field toolkit and maximal-subgroup oracle for F4(q), E6(q) and 2E6(q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Query the maximal-subgroup tables for a family at q.
    Maximals {
        /// F4, E6 or 2E6.
        #[arg(long)]
        family: String,
        /// The field size, a prime power.
        #[arg(long)]
        q: u64,
        /// Outer automorphisms induced by the almost simple group
        /// (repeatable): gamma, phi, delta, phi^2, ...
        #[arg(long = "ext")]
        ext: Vec<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// The 27-dimensional PSL(2,8).3 engine: embedding flags and the
    /// invariant trilinear form.
    Sl28 {
        /// The field size, a power of a prime outside {2,3,7}.
        #[arg(long)]
        q: u64,
        /// Report only the embedding decision.
        #[arg(long)]
        check_embedding: bool,
        /// Build the form(s) over the field where the 7th root of unity
        /// lives and verify invariance, singularity and the radical.
        #[arg(long)]
        build_form: bool,
        /// Sweep every nonzero value of the free constant c_inf and report
        /// the radical dimension for each.
        #[arg(long)]
        sweep_cinf: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Does one of the five reference polynomials split over F_q?
    Split {
        /// f1..f5.
        #[arg(long)]
        poly: String,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Pressure of a composition profile read from a JSON file.
    Pressure {
        /// Path to a JSON list of factors {label, dim, h1_dim, is_trivial}.
        #[arg(long)]
        profile: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Complement class bound and explicit count for T semidirect <w>.
    Complements {
        /// Cyclic factor orders, comma separated, e.g. 4 or 3,3.
        #[arg(long)]
        orders: String,
        /// Action matrix as a JSON array of rows, e.g. [[-1]].
        #[arg(long)]
        action: String,
        /// Order of w in the extension.
        #[arg(long)]
        order_w: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Invariant alternating products of a representation read from JSON.
    Ryba {
        /// Path to a representation document {field, dim, generators, relations}.
        #[arg(long)]
        rep: std::path::PathBuf,
        /// Also report Jacobi residual counts per basis element.
        #[arg(long)]
        jacobi: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the acceptance suite and print a scoreboard.
    Selftest {
        /// Run a subset of criteria (repeatable), 1..=8.
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Maximals { family, q, ext, format } => cmd_maximals(&family, q, &ext, format),
        Command::Sl28 { q, check_embedding, build_form, sweep_cinf, format } => {
            cmd_sl28(q, check_embedding, build_form, sweep_cinf, format)
        }
        Command::Split { poly, q, format } => cmd_split(&poly, q, format),
        Command::Pressure { profile, format } => cmd_pressure(&profile, format),
        Command::Complements { orders, action, order_w, format } => {
            cmd_complements(&orders, &action, order_w, format)
        }
        Command::Ryba { rep, jacobi, format } => cmd_ryba(&rep, jacobi, format),
        Command::Selftest { criteria, format } => cmd_selftest(&criteria, format),
    }
}

#[derive(Serialize)]
struct MaximalsOut {
    family: String,
    q: u64,
    induced: Vec<String>,
    maximals: Vec<maxatlas::atlas::QueryHit>,
}

fn cmd_maximals(family: &str, q: u64, ext: &[String], format: Format) -> ExitCode {
    let family = match Family::parse(family) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    if arith::as_prime_power(q).is_none() {
        return fail(EXIT_USAGE, &format!("{q} is not a prime power"));
    }
    let mut induced = Vec::new();
    for s in ext {
        match AutoGen::parse(s) {
            Ok(g) => induced.push(g),
            Err(e) => return fail(EXIT_USAGE, &e.to_string()),
        }
    }
    let atlas = match Atlas::load() {
        Ok(a) => a,
        Err(e) => return fail(EXIT_INCONSISTENT, &e.to_string()),
    };
    let hits = match atlas.query_maximals(family, q, &induced) {
        Ok(h) => h,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    match format {
        Format::Json => emit(&MaximalsOut {
            family: family.name().to_string(),
            q,
            induced: induced.iter().map(|g| g.display()).collect(),
            maximals: hits,
        }),
        Format::Table => {
            println!(
                "maximal subgroups over {}({}) inducing [{}]",
                family.name(),
                q,
                induced.iter().map(|g| g.display()).collect::<Vec<_>>().join(",")
            );
            println!("{:<55} {:>7}  {:<28} {:>5}  {}", "group", "classes", "stabilizer", "table", "flags");
            for h in &hits {
                let mut flags = Vec::new();
                if h.novelty {
                    flags.push("novelty".to_string());
                }
                if h.stabilizer_resolution == "paper-ambiguous" {
                    flags.push("paper-ambiguous".to_string());
                }
                if let Some((q0, r)) = h.subfield {
                    flags.push(format!("q0={q0},r={r}"));
                }
                println!(
                    "{:<55} {:>7}  {:<28} {:>5}  {}",
                    h.group,
                    h.classes,
                    h.stabilizer,
                    h.source_table,
                    flags.join(" ")
                );
            }
        }
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct SolutionOut {
    c_yx: String,
    c_x: String,
    c_xy: String,
    c: String,
    c_inf: String,
    singular_at_x_inf: bool,
    radical_dim: usize,
    invariant: bool,
    zero_forced_triples: usize,
    unreached_triples: usize,
    delta_rank: usize,
    delta_kernel_dim: usize,
}

#[derive(Serialize)]
struct FrobeniusOut {
    field: String,
    permutation: Vec<usize>,
    fixed_forms: usize,
}

#[derive(Serialize)]
struct CinfSweepOut {
    values_tested: u64,
    all_radical_17: bool,
    exceptions: Vec<String>,
}

#[derive(Serialize)]
struct Sl28Out {
    q: u64,
    embedding: sl28::EmbeddingDecision,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta_field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solution_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solutions: Option<Vec<SolutionOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frobenius: Option<FrobeniusOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frobenius_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cinf_sweep: Option<CinfSweepOut>,
}

fn cmd_sl28(q: u64, check_embedding: bool, do_form: bool, sweep: bool, format: Format) -> ExitCode {
    let decision = match embedding_decision(q) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let mut out = Sl28Out {
        q,
        embedding: decision,
        zeta_field: None,
        omega: None,
        solution_count: None,
        solutions: None,
        frobenius: None,
        frobenius_note: None,
        cinf_sweep: None,
    };
    let want_form = do_form || sweep || !check_embedding;
    if want_form {
        let (p, a) = arith::as_prime_power(q).expect("validated");
        // zeta lives in F_{q^m}, m the order of q mod 7.
        let mut m = 1u32;
        let mut t = q % 7;
        while t != 1 {
            t = t * (q % 7) % 7;
            m += 1;
        }
        let field = match Field::new(p, a * m) {
            Ok(f) => f,
            Err(e) => return fail(EXIT_USAGE, &e.to_string()),
        };
        out.zeta_field = Some(format!("{}^{}", field.p(), field.k()));
        let module = match Sl28Module::build(&field) {
            Ok(mo) => mo,
            Err(e) => return fail(EXIT_USAGE, &e.to_string()),
        };
        out.omega = Some(field.serialize_elem(&module.omega()));
        let sols = match solve_coefficients(&field) {
            Ok(s) => s,
            Err(e) => return fail(EXIT_USAGE, &e.to_string()),
        };
        out.solution_count = Some(sols.len());
        if do_form || sweep {
            let x_inf = module.basis_vector(Block::X, Sub::Infinity);
            let mut reports = Vec::new();
            let mut forms = Vec::new();
            for c in &sols {
                let (form, rep) = match build_form(&module, c) {
                    Ok(v) => v,
                    Err(e) => return fail(EXIT_INCONSISTENT, &e.to_string()),
                };
                let d = delta_system(&field, c);
                let (_, rank) = rref(&d);
                reports.push(SolutionOut {
                    c_yx: field.serialize_elem(&c.c_yx),
                    c_x: field.serialize_elem(&c.c_x),
                    c_xy: field.serialize_elem(&c.c_xy),
                    c: field.serialize_elem(&c.c),
                    c_inf: field.serialize_elem(&c.c_inf),
                    singular_at_x_inf: form.is_singular(&x_inf),
                    radical_dim: form.singular_radical(&x_inf).dim(),
                    invariant: form.is_invariant(module.rep()),
                    zero_forced_triples: rep.zero_forced_triples,
                    unreached_triples: rep.unreached_triples,
                    delta_rank: rank,
                    delta_kernel_dim: kernel(&d).dim(),
                });
                forms.push(form);
            }
            out.solutions = Some(reports);
            if !forms.is_empty() {
                match frobenius_on_forms(q, &module, &forms) {
                    Ok(perm) => {
                        let fixed = perm.iter().enumerate().filter(|(i, &j)| *i == j).count();
                        out.frobenius = Some(FrobeniusOut {
                            field: format!("{}^{}", field.p(), field.k()),
                            permutation: perm,
                            fixed_forms: fixed,
                        });
                    }
                    Err(e) => out.frobenius_note = Some(e.to_string()),
                }
            } else {
                out.frobenius_note =
                    Some("no solved coefficient sets over the zeta field; omega+1 has no cube root there".into());
            }
            if sweep {
                if sols.is_empty() {
                    out.cinf_sweep = Some(CinfSweepOut {
                        values_tested: 0,
                        all_radical_17: false,
                        exceptions: vec!["no solved sets to sweep".into()],
                    });
                } else {
                    let mut exceptions = Vec::new();
                    let cap: u128 = 5000;
                    let limit = (field.size() - 1).min(cap);
                    for idx in 1..=limit {
                        let c = sols[0].clone().with_c_inf(field.from_index(idx));
                        match build_form(&module, &c) {
                            Ok((f2, _)) => {
                                let dim = f2.singular_radical(&x_inf).dim();
                                if dim != 17 {
                                    exceptions.push(format!("c_inf index {idx}: radical {dim}"));
                                }
                            }
                            Err(e) => exceptions.push(format!("c_inf index {idx}: {e}")),
                        }
                    }
                    out.cinf_sweep = Some(CinfSweepOut {
                        values_tested: limit as u64,
                        all_radical_17: exceptions.is_empty(),
                        exceptions,
                    });
                }
            }
        }
    }
    match format {
        Format::Json => emit(&out),
        Format::Table => {
            println!("q = {q}");
            println!(
                "PSL(2,8)  : E6 {}  2E6 {}",
                out.embedding.h_prime_in_e6, out.embedding.h_prime_in_2e6
            );
            println!(
                "PSL(2,8).3: E6 {}  2E6 {}",
                out.embedding.h_in_e6, out.embedding.h_in_2e6
            );
            if let Some(zf) = &out.zeta_field {
                println!("zeta field: {zf}  solutions: {}", out.solution_count.unwrap_or(0));
            }
            if let Some(sols) = &out.solutions {
                for (i, s) in sols.iter().enumerate() {
                    println!(
                        "form {i}: invariant {}  singular {}  radical {}  delta rank {} kernel {}",
                        s.invariant, s.singular_at_x_inf, s.radical_dim, s.delta_rank, s.delta_kernel_dim
                    );
                }
            }
            if let Some(f) = &out.frobenius {
                println!("frobenius on forms: {:?} ({} fixed)", f.permutation, f.fixed_forms);
            }
            if let Some(sweep) = &out.cinf_sweep {
                println!(
                    "c_inf sweep: {} values, all radical 17: {}",
                    sweep.values_tested, sweep.all_radical_17
                );
            }
        }
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct SplitOut {
    poly: String,
    q: u64,
    splits: bool,
    congruence_route: bool,
    direct_route: bool,
}

fn cmd_split(poly: &str, q: u64, format: Format) -> ExitCode {
    let id = match PolyId::parse(poly) {
        Ok(id) => id,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let Some((p, a)) = arith::as_prime_power(q) else {
        return fail(EXIT_USAGE, &format!("{q} is not a prime power"));
    };
    let cong = maxatlas::gf::splits_by_congruence(id, q).expect("prime power");
    let field = match Field::new(p, a) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let direct = splits(&id.poly(&field), &field);
    if cong != direct {
        return fail(
            EXIT_INCONSISTENT,
            &format!("congruence route ({cong}) disagrees with direct factorization ({direct})"),
        );
    }
    let out = SplitOut { poly: poly.to_string(), q, splits: direct, congruence_route: cong, direct_route: direct };
    match format {
        Format::Json => emit(&out),
        Format::Table => println!("{poly} over F_{q}: splits = {direct}"),
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct PressureOut {
    factors: usize,
    pressure: i64,
}

fn cmd_pressure(path: &std::path::Path, format: Format) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_USAGE, &format!("{}: {e}", path.display())),
    };
    let profile: CompositionProfile = match serde_json::from_str(&text) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, &format!("parse: {e}")),
    };
    if let Err(e) = profile.validate() {
        return fail(EXIT_USAGE, &e);
    }
    let out = PressureOut { factors: profile.factors.len(), pressure: pressure(&profile) };
    match format {
        Format::Json => emit(&out),
        Format::Table => println!("pressure = {} over {} factors", out.pressure, out.factors),
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct ComplementsOut {
    orders: Vec<u64>,
    order_w: u64,
    centralizer_order: u128,
    class_bound: u128,
    bruteforce_classes: u128,
    bound_respected: bool,
}

fn cmd_complements(orders: &str, action: &str, order_w: u64, format: Format) -> ExitCode {
    let orders: Result<Vec<u64>, _> = orders.split(',').map(|s| s.trim().parse::<u64>()).collect();
    let Ok(orders) = orders else {
        return fail(EXIT_USAGE, "orders must be a comma-separated list of integers");
    };
    let matrix: Vec<Vec<i64>> = match serde_json::from_str(action) {
        Ok(m) => m,
        Err(e) => return fail(EXIT_USAGE, &format!("action: {e}")),
    };
    let doc = serde_json::json!({ "orders": orders, "action": matrix, "order_w": order_w });
    let (t, w) = match complements::instance_from_json(&doc) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let centralizer = match complements::centralizer_order(&t, &w) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let bound = complements::complement_class_bound(&t, &w).expect("validated");
    let brute = match complements::complement_classes_bruteforce(&t, &w) {
        Ok(b) => b,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let out = ComplementsOut {
        orders: t.orders.clone(),
        order_w,
        centralizer_order: centralizer,
        class_bound: bound,
        bruteforce_classes: brute,
        bound_respected: brute <= bound,
    };
    if brute > bound {
        emit(&out);
        return fail(EXIT_INCONSISTENT, "brute-force count exceeds the centralizer bound");
    }
    match format {
        Format::Json => emit(&out),
        Format::Table => println!(
            "|C_T(w)| = {centralizer}, bound = {bound}, brute force = {brute}"
        ),
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct JacobiOut {
    element: usize,
    triples: usize,
    nonzero_residuals: usize,
}

#[derive(Serialize)]
struct RybaOut {
    dim: usize,
    ryba_dimension: usize,
    basis: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    jacobi: Option<Vec<JacobiOut>>,
}

fn cmd_ryba(path: &std::path::Path, jacobi: bool, format: Format) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_USAGE, &format!("{}: {e}", path.display())),
    };
    let doc: serde_json::Value = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_USAGE, &format!("parse: {e}")),
    };
    let rep = match MatrixRep::from_json(&doc) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let basis = match ryba_space(&rep) {
        Ok(b) => b,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let jac = if jacobi {
        let triples = all_triples(rep.dim());
        Some(
            basis
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let res = jacobi_residual(b, &triples);
                    JacobiOut {
                        element: i,
                        triples: triples.len(),
                        nonzero_residuals: res
                            .iter()
                            .filter(|r| !r.iter().all(|e| e.is_zero()))
                            .count(),
                    }
                })
                .collect(),
        )
    } else {
        None
    };
    let out = RybaOut {
        dim: rep.dim(),
        ryba_dimension: basis.len(),
        basis: basis.iter().map(|b| b.to_json()).collect(),
        jacobi: jac,
    };
    match format {
        Format::Json => emit(&out),
        Format::Table => {
            println!("module dim {}, invariant product space dim {}", out.dim, out.ryba_dimension);
            if let Some(jac) = &out.jacobi {
                for j in jac {
                    println!(
                        "element {}: {}/{} triples with nonzero residual",
                        j.element, j.nonzero_residuals, j.triples
                    );
                }
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_selftest(criteria: &[u8], format: Format) -> ExitCode {
    let ids: Vec<u8> = if criteria.is_empty() { (1..=8).collect() } else { criteria.to_vec() };
    if ids.iter().any(|&c| c == 0 || c > 8) {
        return fail(EXIT_USAGE, "criteria are numbered 1..=8");
    }
    let reports: Vec<_> = ids.iter().map(|&c| maxatlas::acceptance::run_criterion(c)).collect();
    let all_pass = reports.iter().all(|r| r.pass);
    match format {
        Format::Json => emit(&reports),
        Format::Table => {
            for r in &reports {
                println!(
                    "{} [{}] {} ({} ms) - {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.millis,
                    r.details
                );
            }
            println!(
                "{}/{} criteria passed",
                reports.iter().filter(|r| r.pass).count(),
                reports.len()
            );
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INCONSISTENT)
    }
}
