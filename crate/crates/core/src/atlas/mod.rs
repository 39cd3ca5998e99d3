//! The maximal-subgroup oracle: the printed tables as editable JSON data, a
//! condition DSL evaluated against (p, q), symbolic class counts, stabilizer
//! descriptors, and the novelty classification of normalizers.

use crate::arith;
use crate::gf::{splits_by_congruence, PolyId};
use crate::sl28;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtlasError {
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("malformed data file {file}: {msg}")]
    BadData { file: String, msg: String },
    #[error("unparseable class count {0}")]
    BadClassCount(String),
    #[error("unparseable stabilizer descriptor {0}")]
    BadStabilizer(String),
    #[error("unparseable automorphism token {0}")]
    BadAutomorphism(String),
    #[error("class count needs a subfield context (q0, r)")]
    NeedsContext,
    #[error("insufficient data: fusion information required for an overgroup")]
    InsufficientFusionData,
    #[error(transparent)]
    Sl28(#[from] sl28::Sl28Error),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Family {
    #[serde(rename = "F4", alias = "f4")]
    F4,
    #[serde(rename = "E6", alias = "e6")]
    E6,
    #[serde(rename = "2E6", alias = "2e6")]
    TwoE6,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family, AtlasError> {
        match s {
            "F4" | "f4" => Ok(Family::F4),
            "E6" | "e6" => Ok(Family::E6),
            "2E6" | "2e6" => Ok(Family::TwoE6),
            other => Err(AtlasError::UnknownFamily(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::F4 => "F4",
            Family::E6 => "E6",
            Family::TwoE6 => "2E6",
        }
    }
}

/// Polynomial splitting is asked either of the prime field or of F_q itself.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitsOver {
    Fp,
    Fq,
}

/// Shape constraints on q = p^a.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QForm {
    P,
    P2,
    P3,
    PEven,
    POdd,
    PCubePower,
    SubfieldPrime,
    SubfieldOddPrime,
    SubfieldSquare,
}

/// Expression tree over atoms evaluable from (p, q) alone.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Always,
    PrimeIs(u64),
    PrimeNe(Vec<u64>),
    PrimeGe(u64),
    PMod { m: u64, classes: Vec<u64> },
    QMod { m: u64, classes: Vec<u64> },
    QForm(QForm),
    QIs(u64),
    QGt(u64),
    QOdd,
    QEven,
    Splits { poly: PolyId, over: SplitsOver },
    MinimalSplittingField(PolyId),
    CubeRootOmegaPlusOne,
    Sl28Normalizer(Family),
    All(Vec<Condition>),
    Any(Vec<Condition>),
    Not(Box<Condition>),
}

/// Truth value of a condition at (p, q). Conjunctions short-circuit left to
/// right, so guards like `prime_ne` protect delegating atoms.
pub fn evaluate_condition(c: &Condition, p: u64, q: u64) -> Result<bool, AtlasError> {
    let (qp, a) = arith::as_prime_power(q).ok_or(AtlasError::NotPrimePower(q))?;
    assert_eq!(qp, p, "q must be a power of p");
    eval_cond(c, p, q, a, None)
}

fn eval_cond(c: &Condition, p: u64, q: u64, a: u32, ctx: Option<(u64, u32)>) -> Result<bool, AtlasError> {
    Ok(match c {
        Condition::Always => true,
        Condition::PrimeIs(v) => p == *v,
        Condition::PrimeNe(vs) => !vs.contains(&p),
        Condition::PrimeGe(v) => p >= *v,
        Condition::PMod { m, classes } => classes.contains(&(p % m)),
        Condition::QMod { m, classes } => classes.contains(&(q % m)),
        Condition::QIs(v) => q == *v,
        Condition::QGt(v) => q > *v,
        Condition::QOdd => q % 2 == 1,
        Condition::QEven => q % 2 == 0,
        Condition::QForm(form) => match form {
            QForm::P => a == 1,
            QForm::P2 => a == 2,
            QForm::P3 => a == 3,
            QForm::PEven => a % 2 == 0,
            QForm::POdd => a % 2 == 1,
            QForm::PCubePower => a % 3 == 0,
            QForm::SubfieldPrime => match ctx {
                Some((_, r)) => arith::is_prime(r as u64) && a % r == 0 && r > 1,
                None => arith::factor(a as u64).len() >= 1 && a > 1,
            },
            QForm::SubfieldOddPrime => match ctx {
                Some((_, r)) => r % 2 == 1 && arith::is_prime(r as u64) && a % r == 0,
                None => arith::factor(a as u64).iter().any(|&(r, _)| r % 2 == 1),
            },
            QForm::SubfieldSquare => match ctx {
                Some((_, r)) => r == 2 && a % 2 == 0,
                None => a % 2 == 0,
            },
        },
        Condition::Splits { poly, over } => match over {
            SplitsOver::Fp => splits_by_congruence(*poly, p).map_err(|e| AtlasError::BadData {
                file: "<condition>".into(),
                msg: e.to_string(),
            })?,
            SplitsOver::Fq => splits_by_congruence(*poly, q).map_err(|e| AtlasError::BadData {
                file: "<condition>".into(),
                msg: e.to_string(),
            })?,
        },
        Condition::MinimalSplittingField(poly) => {
            // Splits over F_q and over no proper subfield F_{p^b}, b | a.
            let splits_here = splits_by_congruence(*poly, q).map_err(|e| AtlasError::BadData {
                file: "<condition>".into(),
                msg: e.to_string(),
            })?;
            if !splits_here {
                false
            } else {
                let mut minimal = true;
                for b in 1..a {
                    if a % b == 0 {
                        let sub = p.pow(b);
                        if splits_by_congruence(*poly, sub).unwrap_or(false) {
                            minimal = false;
                            break;
                        }
                    }
                }
                minimal
            }
        }
        Condition::CubeRootOmegaPlusOne => {
            if p == 2 || p == 3 || p == 7 {
                false
            } else {
                sl28::omega_plus_one_is_cube(p, a)?
            }
        }
        Condition::Sl28Normalizer(family) => {
            if p == 2 || p == 3 || p == 7 || a != 1 {
                false
            } else {
                let d = sl28::embedding_decision(p)?;
                let embeds = match family {
                    Family::E6 => d.h_in_e6,
                    Family::TwoE6 => d.h_in_2e6,
                    Family::F4 => false,
                };
                // When only PSL(2,8) itself is the normalizer, it is maximal
                // only if x^3 - 3x + 1 does not split over F_p.
                embeds || !(p % 9 == 1 || p % 9 == 8)
            }
        }
        Condition::All(cs) => {
            for c in cs {
                if !eval_cond(c, p, q, a, ctx)? {
                    return Ok(false);
                }
            }
            true
        }
        Condition::Any(cs) => {
            for c in cs {
                if eval_cond(c, p, q, a, ctx)? {
                    return Ok(true);
                }
            }
            false
        }
        Condition::Not(c) => !eval_cond(c, p, q, a, ctx)?,
    })
}

fn find_subfield_form(c: &Condition) -> Option<QForm> {
    match c {
        Condition::QForm(f @ (QForm::SubfieldPrime | QForm::SubfieldOddPrime | QForm::SubfieldSquare)) => {
            Some(*f)
        }
        Condition::All(cs) | Condition::Any(cs) => cs.iter().find_map(find_subfield_form),
        Condition::Not(c) => find_subfield_form(c),
        _ => None,
    }
}

/// The scalars of the class-count arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scalar {
    D,
    E,
    EPrime,
    F,
    FPrime,
    G,
}

impl Scalar {
    pub fn value(self, q: u64) -> u64 {
        match self {
            Scalar::D => arith::gcd(2, q - 1),
            Scalar::E => arith::gcd(3, q - 1),
            Scalar::EPrime => arith::gcd(3, q + 1),
            Scalar::F => arith::gcd(4, q - 1),
            Scalar::FPrime => arith::gcd(4, q + 1),
            Scalar::G => arith::gcd(5, q - 1),
        }
    }
}

/// Symbolic class count, parsed from the printed table entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClassCount {
    Const(u64),
    Scaled(u64, Scalar),
    /// gcd(e, r) or gcd(e', r) for a subfield row.
    GcdScalarR(Scalar),
    /// gcd(3, q0 - 1) for the twisted subfield row.
    GcdQ0Three,
    /// Resolved by the cube-root trichotomy of the embedding decision.
    Sl28(Family),
}

impl ClassCount {
    pub fn parse(s: &str) -> Result<ClassCount, AtlasError> {
        let bad = || AtlasError::BadClassCount(s.to_string());
        match s {
            "gcd(e,r)" => return Ok(ClassCount::GcdScalarR(Scalar::E)),
            "gcd(e',r)" => return Ok(ClassCount::GcdScalarR(Scalar::EPrime)),
            "gcd(3,q0-1)" => return Ok(ClassCount::GcdQ0Three),
            "sl28_e6" => return Ok(ClassCount::Sl28(Family::E6)),
            "sl28_2e6" => return Ok(ClassCount::Sl28(Family::TwoE6)),
            _ => {}
        }
        if let Ok(n) = s.parse::<u64>() {
            return Ok(ClassCount::Const(n));
        }
        let (num, sym) = s.split_at(s.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?);
        let mult: u64 = if num.is_empty() { 1 } else { num.parse().map_err(|_| bad())? };
        let scalar = match sym {
            "d" => Scalar::D,
            "e" => Scalar::E,
            "e'" => Scalar::EPrime,
            "f" => Scalar::F,
            "f'" => Scalar::FPrime,
            "g" => Scalar::G,
            _ => return Err(bad()),
        };
        Ok(ClassCount::Scaled(mult, scalar))
    }

    /// Integer value at q; subfield-context-free callers get an error on
    /// r-dependent counts.
    pub fn eval(&self, q: u64, ctx: Option<(u64, u32)>) -> Result<u64, AtlasError> {
        Ok(match self {
            ClassCount::Const(n) => *n,
            ClassCount::Scaled(k, s) => k * s.value(q),
            ClassCount::GcdScalarR(s) => {
                let (_, r) = ctx.ok_or(AtlasError::NeedsContext)?;
                arith::gcd(s.value(q), r as u64)
            }
            ClassCount::GcdQ0Three => {
                let (q0, _) = ctx.ok_or(AtlasError::NeedsContext)?;
                arith::gcd(3, q0 - 1)
            }
            ClassCount::Sl28(family) => {
                let d = sl28::embedding_decision(q)?;
                match family {
                    Family::E6 => {
                        if d.h_in_e6 {
                            2 * Scalar::E.value(q)
                        } else {
                            2
                        }
                    }
                    Family::TwoE6 => {
                        if d.h_in_2e6 {
                            2 * Scalar::EPrime.value(q)
                        } else {
                            2
                        }
                    }
                    Family::F4 => return Err(AtlasError::BadClassCount("sl28 count in F4".into())),
                }
            }
        })
    }
}

/// Integer class count of a symbolic expression at q.
pub fn class_count_value(expr: &str, q: u64, family: Family) -> Result<u64, AtlasError> {
    let _ = family;
    ClassCount::parse(expr)?.eval(q, None)
}

/// Outer-automorphism generator kinds occurring in stabilizer columns.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum AutoBase {
    Delta,
    Phi,
    Gamma,
    PhiGamma,
}

impl AutoBase {
    fn parse(s: &str) -> Result<AutoBase, AtlasError> {
        match s {
            "delta" | "diagonal" | "diag" => Ok(AutoBase::Delta),
            "phi" | "field" => Ok(AutoBase::Phi),
            "gamma" | "graph" => Ok(AutoBase::Gamma),
            "phi*gamma" | "field*graph" => Ok(AutoBase::PhiGamma),
            other => Err(AtlasError::BadAutomorphism(other.to_string())),
        }
    }

    fn name(self) -> &'static str {
        match self {
            AutoBase::Delta => "delta",
            AutoBase::Phi => "phi",
            AutoBase::Gamma => "gamma",
            AutoBase::PhiGamma => "phi*gamma",
        }
    }
}

/// An induced outer automorphism, e.g. `phi`, `delta^2`, `phi*gamma`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub struct AutoGen {
    pub base: AutoBase,
    pub exp: u32,
}

impl AutoGen {
    pub fn parse(s: &str) -> Result<AutoGen, AtlasError> {
        let (base, exp) = match s.split_once('^') {
            Some((b, e)) => (
                AutoBase::parse(b)?,
                e.parse::<u32>().map_err(|_| AtlasError::BadAutomorphism(s.to_string()))?,
            ),
            None => (AutoBase::parse(s)?, 1),
        };
        Ok(AutoGen { base, exp })
    }

    pub fn display(&self) -> String {
        if self.exp == 1 {
            self.base.name().to_string()
        } else {
            format!("{}^{}", self.base.name(), self.exp)
        }
    }
}

/// Exponent of a stabilizer generator, possibly symbolic.
#[derive(Clone, PartialEq, Eq, Debug)]
enum StabExp {
    Int(u32),
    GcdScalarR(Scalar),
    GcdQ0Three,
}

impl StabExp {
    fn eval(&self, q: u64, ctx: Option<(u64, u32)>) -> Result<u32, AtlasError> {
        Ok(match self {
            StabExp::Int(n) => *n,
            StabExp::GcdScalarR(s) => {
                let (_, r) = ctx.ok_or(AtlasError::NeedsContext)?;
                arith::gcd(s.value(q), r as u64) as u32
            }
            StabExp::GcdQ0Three => {
                let (q0, _) = ctx.ok_or(AtlasError::NeedsContext)?;
                arith::gcd(3, q0 - 1) as u32
            }
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabGen {
    base: AutoBase,
    exp: StabExp,
}

impl StabGen {
    pub fn simple(base: AutoBase) -> StabGen {
        StabGen { base, exp: StabExp::Int(1) }
    }
}

/// A stabilizer column entry: one or more alternative generator sets, kept
/// verbatim ("\<phi*gamma\> or \<phi\>" is two alternatives).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stabilizer {
    pub display: String,
    alts: Vec<Vec<StabGen>>,
}

impl Stabilizer {
    pub fn parse(s: &str) -> Result<Stabilizer, AtlasError> {
        let bad = || AtlasError::BadStabilizer(s.to_string());
        let mut alts = Vec::new();
        for alt in s.split(" or ") {
            let alt = alt.trim();
            if alt == "1" {
                alts.push(Vec::new());
                continue;
            }
            let inner = alt.strip_prefix('<').and_then(|t| t.strip_suffix('>')).ok_or_else(bad)?;
            // Split on commas outside parentheses ("gcd(e,r)" stays whole).
            let mut toks: Vec<String> = Vec::new();
            let mut depth = 0usize;
            let mut cur = String::new();
            for ch in inner.chars() {
                match ch {
                    '(' => {
                        depth += 1;
                        cur.push(ch);
                    }
                    ')' => {
                        depth = depth.checked_sub(1).ok_or_else(bad)?;
                        cur.push(ch);
                    }
                    ',' if depth == 0 => toks.push(std::mem::take(&mut cur)),
                    _ => cur.push(ch),
                }
            }
            if !cur.is_empty() {
                toks.push(cur);
            }
            let mut gens = Vec::new();
            for tok in &toks {
                let tok = tok.trim();
                let (base_s, exp) = match tok.split_once('^') {
                    Some((b, e)) => {
                        let exp = match e {
                            "gcd(e,r)" => StabExp::GcdScalarR(Scalar::E),
                            "gcd(e',r)" => StabExp::GcdScalarR(Scalar::EPrime),
                            "gcd(3,q0-1)" => StabExp::GcdQ0Three,
                            n => StabExp::Int(n.parse().map_err(|_| bad())?),
                        };
                        (b, exp)
                    }
                    None => (tok, StabExp::Int(1)),
                };
                gens.push(StabGen { base: AutoBase::parse(base_s)?, exp });
            }
            alts.push(gens);
        }
        if alts.is_empty() {
            return Err(bad());
        }
        Ok(Stabilizer { display: s.to_string(), alts })
    }

    pub fn alternatives(&self) -> usize {
        self.alts.len()
    }

    /// Whether one alternative's generator set covers every induced
    /// automorphism (symbolic subgroup membership: matching kind with
    /// dividing exponent, plus (phi gamma)^2 = phi^2 and
    /// \<gamma, phi\> containing phi*gamma).
    fn alt_covers(
        alt: &[StabGen],
        induced: &[AutoGen],
        q: u64,
        ctx: Option<(u64, u32)>,
    ) -> Result<bool, AtlasError> {
        for g in induced {
            let mut ok = false;
            for t in alt {
                let texp = t.exp.eval(q, ctx)?;
                if t.base == g.base && texp != 0 && g.exp % texp == 0 {
                    ok = true;
                    break;
                }
                if t.base == AutoBase::PhiGamma && g.base == AutoBase::Phi && g.exp % 2 == 0 {
                    ok = true;
                    break;
                }
            }
            if !ok && g.base == AutoBase::PhiGamma {
                let has = |b: AutoBase| {
                    alt.iter().any(|t| t.base == b && matches!(t.exp, StabExp::Int(1)))
                };
                ok = has(AutoBase::Phi) && has(AutoBase::Gamma);
            }
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coverage across alternatives: Some(answer) when they agree, None when
    /// the printed disjunction leaves the answer ambiguous.
    pub fn covers(
        &self,
        induced: &[AutoGen],
        q: u64,
        ctx: Option<(u64, u32)>,
    ) -> Result<Option<bool>, AtlasError> {
        let mut verdicts = Vec::with_capacity(self.alts.len());
        for alt in &self.alts {
            verdicts.push(Self::alt_covers(alt, induced, q, ctx)?);
        }
        if verdicts.iter().all(|&v| v) {
            Ok(Some(true))
        } else if verdicts.iter().all(|&v| !v) {
            Ok(Some(false))
        } else {
            Ok(None)
        }
    }
}

/// One row of a table, with everything parsed.
#[derive(Clone, Debug)]
pub struct AtlasEntry {
    pub family: Family,
    pub source_table: u8,
    pub group: String,
    pub condition: Condition,
    pub classes: ClassCount,
    pub classes_display: String,
    pub stabilizer: Stabilizer,
    pub novelty: bool,
    pub novelty_requires: Option<AutoBase>,
    pub note: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Applies {
    All,
    QOdd,
    QEven,
}

#[derive(Deserialize)]
struct RawTable {
    schema_version: u32,
    family: Family,
    source_table: u8,
    #[allow(dead_code)]
    kind: String,
    applies: Applies,
    #[serde(default)]
    note: Option<String>,
    rows: Vec<RawRow>,
}

#[derive(Deserialize)]
struct RawRow {
    group: String,
    condition: Condition,
    classes: String,
    stabilizer: String,
    novelty: bool,
    #[serde(default)]
    novelty_requires: Option<String>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Table {
    pub family: Family,
    pub source_table: u8,
    applies: Applies,
    pub note: Option<String>,
    pub entries: Vec<AtlasEntry>,
}

/// The loaded oracle. Data ships embedded; ATLAS_DATA_DIR overrides it with
/// files of the same names.
pub struct Atlas {
    pub tables: Vec<Table>,
}

pub const DATA_FILES: [&str; 7] = [
    "f4_s.json",
    "f4_other_odd.json",
    "f4_other_even.json",
    "e6_s.json",
    "e6_other.json",
    "2e6_s.json",
    "2e6_other.json",
];

const EMBEDDED: [(&str, &str); 7] = [
    ("f4_s.json", include_str!("data/f4_s.json")),
    ("f4_other_odd.json", include_str!("data/f4_other_odd.json")),
    ("f4_other_even.json", include_str!("data/f4_other_even.json")),
    ("e6_s.json", include_str!("data/e6_s.json")),
    ("e6_other.json", include_str!("data/e6_other.json")),
    ("2e6_s.json", include_str!("data/2e6_s.json")),
    ("2e6_other.json", include_str!("data/2e6_other.json")),
];

impl Atlas {
    /// Loads the embedded tables, or the ATLAS_DATA_DIR override if set.
    pub fn load() -> Result<Atlas, AtlasError> {
        match std::env::var_os("ATLAS_DATA_DIR") {
            Some(dir) => Atlas::from_dir(std::path::Path::new(&dir)),
            None => Atlas::embedded(),
        }
    }

    pub fn embedded() -> Result<Atlas, AtlasError> {
        let mut tables = Vec::new();
        for (name, text) in EMBEDDED {
            tables.push(parse_table(name, text)?);
        }
        Ok(Atlas { tables })
    }

    pub fn from_dir(dir: &std::path::Path) -> Result<Atlas, AtlasError> {
        let mut tables = Vec::new();
        for name in DATA_FILES {
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path).map_err(|e| AtlasError::BadData {
                file: path.display().to_string(),
                msg: e.to_string(),
            })?;
            tables.push(parse_table(name, &text)?);
        }
        Ok(Atlas { tables })
    }

    pub fn table(&self, source_table: u8) -> Option<&Table> {
        self.tables.iter().find(|t| t.source_table == source_table)
    }

    /// All maximal subgroups of the almost simple groups over the chosen
    /// family at q, given the outer automorphisms the extension induces.
    /// Novelty rows appear only when their required automorphism is induced;
    /// ordinary rows are suppressed when the induced automorphisms are not
    /// covered by the stabilizer column. Output is sorted by source table,
    /// then group name, then subfield context.
    pub fn query_maximals(
        &self,
        family: Family,
        q: u64,
        induced: &[AutoGen],
    ) -> Result<Vec<QueryHit>, AtlasError> {
        let (p, a) = arith::as_prime_power(q).ok_or(AtlasError::NotPrimePower(q))?;
        let mut hits = Vec::new();
        for table in &self.tables {
            if table.family != family {
                continue;
            }
            match table.applies {
                Applies::All => {}
                Applies::QOdd if q % 2 == 1 => {}
                Applies::QEven if q % 2 == 0 => {}
                _ => continue,
            }
            for entry in &table.entries {
                let ctxs: Vec<Option<(u64, u32)>> = match find_subfield_form(&entry.condition) {
                    None => vec![None],
                    Some(QForm::SubfieldPrime) => arith::factor(a as u64)
                        .iter()
                        .map(|&(r, _)| Some((p.pow(a / r as u32), r as u32)))
                        .collect(),
                    Some(QForm::SubfieldOddPrime) => arith::factor(a as u64)
                        .iter()
                        .filter(|&&(r, _)| r % 2 == 1)
                        .map(|&(r, _)| Some((p.pow(a / r as u32), r as u32)))
                        .collect(),
                    Some(QForm::SubfieldSquare) => {
                        if a % 2 == 0 {
                            vec![Some((p.pow(a / 2), 2))]
                        } else {
                            Vec::new()
                        }
                    }
                    Some(_) => unreachable!(),
                };
                for ctx in ctxs {
                    if !eval_cond(&entry.condition, p, q, a, ctx)? {
                        continue;
                    }
                    if entry.novelty {
                        let req = entry.novelty_requires.expect("novelty rows carry a requirement");
                        let induced_has = induced.iter().any(|g| g.base == req && g.exp == 1);
                        if !induced_has {
                            continue;
                        }
                    }
                    let (resolution, shown) = if entry.novelty {
                        ("resolved", true)
                    } else {
                        match entry.stabilizer.covers(induced, q, ctx)? {
                            Some(true) => ("resolved", true),
                            Some(false) => ("resolved", false),
                            None => ("paper-ambiguous", true),
                        }
                    };
                    if !shown {
                        continue;
                    }
                    let (classes, branch) = match &entry.classes {
                        ClassCount::Sl28(fam) => {
                            let d = sl28::embedding_decision(q)?;
                            let embeds = match fam {
                                Family::E6 => d.h_in_e6,
                                _ => d.h_in_2e6,
                            };
                            let n = entry.classes.eval(q, ctx)?;
                            let b = if embeds {
                                "normalizer is PSL_2(8).3; stabilizer 1"
                            } else {
                                "normalizer is PSL_2(8); stabilizer <delta>"
                            };
                            (n, Some(b.to_string()))
                        }
                        other => (other.eval(q, ctx)?, None),
                    };
                    hits.push(QueryHit {
                        group: entry.group.clone(),
                        family,
                        source_table: entry.source_table,
                        classes,
                        classes_expr: entry.classes_display.clone(),
                        stabilizer: entry.stabilizer.display.clone(),
                        stabilizer_resolution: resolution.to_string(),
                        novelty: entry.novelty,
                        subfield: ctx,
                        branch,
                        note: entry.note.clone(),
                    });
                }
            }
        }
        hits.sort_by(|x, y| {
            (x.source_table, &x.group, x.subfield).cmp(&(y.source_table, &y.group, y.subfield))
        });
        Ok(hits)
    }
}

fn parse_table(name: &str, text: &str) -> Result<Table, AtlasError> {
    let bad = |msg: String| AtlasError::BadData { file: name.to_string(), msg };
    let raw: RawTable = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    if raw.schema_version != 1 {
        return Err(bad(format!("unsupported schema version {}", raw.schema_version)));
    }
    let mut entries = Vec::with_capacity(raw.rows.len());
    for row in raw.rows {
        let novelty_requires = match &row.novelty_requires {
            Some(s) => Some(AutoBase::parse(s)?),
            None => None,
        };
        if row.novelty && novelty_requires.is_none() {
            return Err(bad(format!("novelty row {} lacks a required automorphism", row.group)));
        }
        entries.push(AtlasEntry {
            family: raw.family,
            source_table: raw.source_table,
            group: row.group,
            condition: row.condition,
            classes: ClassCount::parse(&row.classes)?,
            classes_display: row.classes,
            stabilizer: Stabilizer::parse(&row.stabilizer)?,
            novelty: row.novelty,
            novelty_requires,
            note: row.note,
        });
    }
    Ok(Table {
        family: raw.family,
        source_table: raw.source_table,
        applies: raw.applies,
        note: raw.note,
        entries,
    })
}

/// One row of a query result.
#[derive(Clone, Debug, Serialize)]
pub struct QueryHit {
    pub group: String,
    pub family: Family,
    pub source_table: u8,
    pub classes: u64,
    pub classes_expr: String,
    pub stabilizer: String,
    pub stabilizer_resolution: String,
    pub novelty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subfield: Option<(u64, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoveltyVerdict {
    Contained,
    TypeINovelty,
    TypeIINovelty,
}

/// One overgroup fact for the novelty test: the stabilizer of K in the
/// outer-automorphism group, and whether N(K) in the extension fuses more
/// than one class of subgroups containing H (explicit input data; the
/// toolkit never derives fusion).
#[derive(Clone, Debug)]
pub struct OvergroupFact {
    pub name: String,
    pub stabilizer: Vec<StabGen>,
    pub fuses_classes: Option<bool>,
}

/// The normalizer-maximality test: H (non-maximal in G, with the given
/// stabilizer) yields a maximal normalizer in the extension inducing the
/// given automorphisms iff every overgroup K either fails to spread over
/// the extension (type I) or fuses classes (type II).
pub fn novelty_check(
    q: u64,
    h_stabilizer: &[StabGen],
    overgroups: &[OvergroupFact],
    induced: &[AutoGen],
) -> Result<NoveltyVerdict, AtlasError> {
    assert!(!overgroups.is_empty(), "the test needs at least one overgroup");
    if !Stabilizer::alt_covers(h_stabilizer, induced, q, None)? {
        // N(H) does not spread over the extension, so it sits inside a
        // proper subgroup containing the socle.
        return Ok(NoveltyVerdict::Contained);
    }
    let mut used_fusion = false;
    for k in overgroups {
        if !Stabilizer::alt_covers(&k.stabilizer, induced, q, None)? {
            continue; // type I with respect to this overgroup
        }
        match k.fuses_classes {
            Some(true) => used_fusion = true,
            Some(false) => return Ok(NoveltyVerdict::Contained),
            None => return Err(AtlasError::InsufficientFusionData),
        }
    }
    Ok(if used_fusion { NoveltyVerdict::TypeIINovelty } else { NoveltyVerdict::TypeINovelty })
}

/// Names of groups in a hit list, collated for compact assertions.
pub fn hit_names(hits: &[QueryHit]) -> Vec<&str> {
    hits.iter().map(|h| h.group.as_str()).collect()
}

/// Row-count fingerprint of the loaded tables, keyed by source table.
pub fn row_counts(atlas: &Atlas) -> BTreeMap<u8, usize> {
    atlas.tables.iter().map(|t| (t.source_table, t.entries.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atlas() -> Atlas {
        Atlas::embedded().unwrap()
    }

    fn gens(list: &[&str]) -> Vec<AutoGen> {
        list.iter().map(|s| AutoGen::parse(s).unwrap()).collect()
    }

    #[test]
    fn row_count_checksums_match_printed_tables() {
        let counts = row_counts(&atlas());
        let expect: BTreeMap<u8, usize> =
            [(1, 14), (2, 12), (3, 8), (5, 15), (6, 19), (7, 24), (8, 23)].into_iter().collect();
        assert_eq!(counts, expect);
    }

    #[test]
    fn condition_examples() {
        // PSL_2(17) row of the F4 table at (13, 13): 13 = -4 mod 17.
        let c = Condition::All(vec![
            Condition::PrimeNe(vec![2]),
            Condition::PMod { m: 17, classes: vec![1, 2, 4, 8, 9, 13, 15, 16] },
            Condition::QForm(QForm::P),
        ]);
        assert!(evaluate_condition(&c, 13, 13).unwrap());
        assert!(!evaluate_condition(&c, 3, 3).unwrap());

        // M_12 at (5, 25) fails because q = p is required.
        let m12 = Condition::All(vec![Condition::PrimeIs(5), Condition::QForm(QForm::P)]);
        assert!(!evaluate_condition(&m12, 5, 25).unwrap());
        assert!(evaluate_condition(&Condition::Always, 5, 25).unwrap());
    }

    #[test]
    fn condition_splits_atom_matches_congruences() {
        // The PSL_2(17) congruence list is exactly "f1 splits over F_p".
        let by_split = Condition::Splits { poly: PolyId::F1, over: SplitsOver::Fp };
        let by_cong = Condition::PMod { m: 17, classes: vec![0, 1, 2, 4, 8, 9, 13, 15, 16] };
        for p in crate::arith::primes_below(500) {
            assert_eq!(
                evaluate_condition(&by_split, p, p).unwrap(),
                evaluate_condition(&by_cong, p, p).unwrap(),
                "p = {p}"
            );
        }
    }

    #[test]
    fn minimal_splitting_field_examples() {
        // f1 splits over F_13 already, so F_13 is minimal and F_169 is not.
        let c = Condition::MinimalSplittingField(PolyId::F1);
        assert!(evaluate_condition(&c, 13, 13).unwrap());
        assert!(!evaluate_condition(&c, 13, 169).unwrap());
        // 3 is a nonresidue mod 17, so the minimal splitting field of f1
        // over F_3 is F_9.
        assert!(!evaluate_condition(&c, 3, 3).unwrap());
        assert!(evaluate_condition(&c, 3, 9).unwrap());
        // f5 first splits over F_{p^3} when p = 2,3,4,5 mod 7.
        assert!(evaluate_condition(&Condition::MinimalSplittingField(PolyId::F5), 5, 125).unwrap());
        assert!(!evaluate_condition(&Condition::MinimalSplittingField(PolyId::F5), 5, 5).unwrap());
    }

    #[test]
    fn table_conditions_agree_with_minimal_splitting_fields() {
        // The two PSL_2(8) rows of the F4 table encode the splitting of the
        // degree-3 polynomial: q = p with the polynomial split, and q = p^3
        // as its minimal splitting field.
        let row_p = Condition::All(vec![
            Condition::PMod { m: 7, classes: vec![1, 6] },
            Condition::QForm(QForm::P),
        ]);
        let row_p3 = Condition::All(vec![
            Condition::PrimeNe(vec![2, 3]),
            Condition::PMod { m: 7, classes: vec![2, 3, 4, 5] },
            Condition::QForm(QForm::P3),
        ]);
        for p in arith::primes_below(300) {
            if p == 7 {
                continue; // the q = 0 mod 7 case is its own table row
            }
            let by_split = Condition::All(vec![
                Condition::Splits { poly: PolyId::F5, over: SplitsOver::Fq },
                Condition::QForm(QForm::P),
            ]);
            assert_eq!(
                evaluate_condition(&row_p, p, p).unwrap(),
                evaluate_condition(&by_split, p, p).unwrap(),
                "p = {p}"
            );
            if p == 2 || p == 3 {
                continue; // the printed p^3 row excludes these explicitly
            }
            let q3 = p * p * p;
            assert_eq!(
                evaluate_condition(&row_p3, p, q3).unwrap(),
                evaluate_condition(&Condition::MinimalSplittingField(PolyId::F5), p, q3).unwrap(),
                "p = {p}"
            );
        }
    }

    #[test]
    fn class_count_values() {
        assert_eq!(class_count_value("2e", 7, Family::E6).unwrap(), 6);
        assert_eq!(class_count_value("2e'", 5, Family::TwoE6).unwrap(), 6);
        assert_eq!(class_count_value("1", 4, Family::F4).unwrap(), 1);
        assert_eq!(class_count_value("e", 4, Family::E6).unwrap(), 3);
        assert_eq!(class_count_value("g", 11, Family::E6).unwrap(), 5);
        assert!(matches!(
            class_count_value("gcd(e,r)", 64, Family::E6),
            Err(AtlasError::NeedsContext)
        ));
        assert_eq!(
            ClassCount::parse("gcd(e,r)").unwrap().eval(64, Some((8, 2))).unwrap(),
            1 // e = gcd(3,63) = 3, gcd(3,2) = 1
        );
    }

    #[test]
    fn f4_at_7_matches_table_rows() {
        // Exactly the Table 1 rows whose condition holds at (7,7).
        let hits = atlas().query_maximals(Family::F4, 7, &[]).unwrap();
        let s_rows: Vec<&str> = hits
            .iter()
            .filter(|h| h.source_table == 1)
            .map(|h| h.group.as_str())
            .collect();
        assert_eq!(
            s_rows,
            vec!["3D_4(2).3", "PGL_2(13)", "PSL_2(25).2", "PSL_2(27).3", "PSL_2(8).3"]
        );
        // And the accompanying Table 5 rows exist (q odd).
        assert!(hits.iter().any(|h| h.source_table == 5 && h.group == "G_2(q)"));
        assert!(hits.iter().any(|h| h.source_table == 5 && h.group == "3^3:SL_3(3)"));
    }

    #[test]
    fn e6_at_5_contains_m12_with_4_classes() {
        let hits = atlas().query_maximals(Family::E6, 5, &[]).unwrap();
        let m12 = hits.iter().find(|h| h.group == "M_12").expect("M_12 present");
        assert_eq!(m12.classes, 4);
        assert_eq!(m12.source_table, 2);
        // PSL_2(19) at p = 5 with a single class is also in the table.
        assert!(hits.iter().any(|h| h.group == "PSL_2(19)" && h.classes == 1));
    }

    #[test]
    fn twoe6_at_2_fi22_and_novelty() {
        let a = atlas();
        let plain = a.query_maximals(Family::TwoE6, 2, &[]).unwrap();
        let fi22 = plain.iter().find(|h| h.group == "Fi_22").expect("Fi_22 present");
        assert_eq!(fi22.classes, 3);
        assert!(!plain.iter().any(|h| h.group == "Omega_7(3).2"));
        // The delta-novelties of Table 8 are absent without delta.
        assert!(!plain.iter().any(|h| h.novelty && h.source_table == 8));

        let with_phi = a.query_maximals(Family::TwoE6, 2, &gens(&["phi"])).unwrap();
        let nov = with_phi.iter().find(|h| h.group == "Omega_7(3).2").expect("novelty shown");
        assert!(nov.novelty);
        assert_eq!(nov.classes, 1);

        let with_delta = a.query_maximals(Family::TwoE6, 2, &gens(&["delta"])).unwrap();
        assert!(with_delta.iter().any(|h| h.novelty && h.group == "(q+1)^6/e'.W(E_6)"));
    }

    #[test]
    fn pgl213_novelty_requires_the_printed_automorphism() {
        let a = atlas();
        // p = 53: 53 = 4 mod 7 and 53 = 1 mod 13.
        let without = a.query_maximals(Family::E6, 53, &[]).unwrap();
        assert!(!without.iter().any(|h| h.group == "PGL_2(13)"));
        let with_gamma = a.query_maximals(Family::E6, 53, &gens(&["gamma"])).unwrap();
        assert!(with_gamma.iter().any(|h| h.group == "PGL_2(13)" && h.novelty));

        // p = 3: 3 = 3 mod 7 and 3 mod 13 = 3; the 2E6 twin wants phi.
        let without = a.query_maximals(Family::TwoE6, 3, &[]).unwrap();
        assert!(!without.iter().any(|h| h.group == "PGL_2(13)"));
        let with_phi = a.query_maximals(Family::TwoE6, 3, &gens(&["phi"])).unwrap();
        assert!(with_phi.iter().any(|h| h.group == "PGL_2(13)" && h.novelty));
    }

    #[test]
    fn f4_graph_novelties_only_under_gamma() {
        let a = atlas();
        let plain = a.query_maximals(Family::F4, 4, &[]).unwrap();
        assert!(!plain.iter().any(|h| h.novelty));
        let with_gamma = a.query_maximals(Family::F4, 4, &gens(&["gamma"])).unwrap();
        let novs: Vec<&str> = with_gamma.iter().filter(|h| h.novelty).map(|h| h.group.as_str()).collect();
        assert!(novs.contains(&"Sp_4(q^2).2"));
        // q = 4 excludes the q > 4 torus normalizer but keeps the q > 2 ones.
        assert!(!novs.contains(&"(q-1)^4.W(F_4)"));
        assert!(novs.contains(&"(q+1)^4.W(F_4)"));
    }

    #[test]
    fn ordinary_rows_suppressed_when_not_stabilized() {
        let a = atlas();
        // Table 5's rows are phi-stabilized only; inducing gamma on odd q
        // suppresses them (no graph automorphism is available to stabilize).
        let hits = a.query_maximals(Family::F4, 7, &gens(&["gamma"])).unwrap();
        assert!(!hits.iter().any(|h| h.source_table == 5));

        // E6 rows with <delta,phi> but not gamma vanish under gamma.
        let with_gamma = a.query_maximals(Family::E6, 5, &gens(&["gamma"])).unwrap();
        assert!(!with_gamma
            .iter()
            .any(|h| h.group.starts_with("[q^16]") || h.group.starts_with("[q^25]")));
        // But the gamma-stable parabolic-type rows survive.
        assert!(with_gamma.iter().any(|h| h.group.starts_with("[q^21]")));
    }

    #[test]
    fn g2_row_is_paper_ambiguous_under_phi() {
        // The G_2(q) stabilizer prints as <phi*gamma> or <phi>: under an
        // induced phi the alternatives disagree, so the row is returned
        // tagged rather than resolved.
        let a = atlas();
        let hits = a.query_maximals(Family::E6, 11, &gens(&["phi"])).unwrap();
        let g2 = hits.iter().find(|h| h.group == "G_2(q)").expect("11 = 4 mod 7 keeps G_2");
        assert_eq!(g2.stabilizer_resolution, "paper-ambiguous");
        // Under phi^2 both alternatives agree.
        let hits = a.query_maximals(Family::E6, 11, &gens(&["phi^2"])).unwrap();
        let g2 = hits.iter().find(|h| h.group == "G_2(q)").unwrap();
        assert_eq!(g2.stabilizer_resolution, "resolved");
    }

    #[test]
    fn subfield_rows_enumerate_decompositions() {
        let a = atlas();
        // q = p^6 admits r = 2 and r = 3.
        let hits = a.query_maximals(Family::E6, 5u64.pow(6), &[]).unwrap();
        let subs: Vec<(u64, u32)> = hits
            .iter()
            .filter(|h| h.group == "E_6(q_0).gcd(e,r)")
            .map(|h| h.subfield.unwrap())
            .collect();
        assert_eq!(subs, vec![(5u64.pow(2), 3), (5u64.pow(3), 2)]);
        let twisted: Vec<(u64, u32)> = hits
            .iter()
            .filter(|h| h.group == "2E_6(q_0)")
            .map(|h| h.subfield.unwrap())
            .collect();
        assert_eq!(twisted, vec![(125, 2)]);

        // Inducing delta suppresses the r = 3 decomposition, whose
        // stabilizer only contains delta^gcd(e,3) = delta^3.
        let hits = a.query_maximals(Family::E6, 5u64.pow(6), &gens(&["delta", "gamma", "phi"])).unwrap();
        let subs: Vec<(u64, u32)> = hits
            .iter()
            .filter(|h| h.group == "E_6(q_0).gcd(e,r)")
            .map(|h| h.subfield.unwrap())
            .collect();
        assert_eq!(subs, vec![(5u64.pow(3), 2)]);

        // 2E6 subfield rows demand odd r.
        let hits = a.query_maximals(Family::TwoE6, 25, &gens(&["delta", "phi"])).unwrap();
        assert!(!hits.iter().any(|h| h.group.starts_with("2E_6(q_0)")));
        let hits = a.query_maximals(Family::TwoE6, 125, &[]).unwrap();
        assert!(hits.iter().any(|h| h.group.starts_with("2E_6(q_0)") && h.subfield == Some((5, 3))));
    }

    #[test]
    fn class_counts_always_positive() {
        let a = atlas();
        let all = gens(&["delta", "gamma", "phi"]);
        for family in [Family::F4, Family::E6, Family::TwoE6] {
            for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 29, 64, 81, 113, 125] {
                let Some((p, _)) = arith::as_prime_power(q) else { continue };
                // sl28 rows reject p in {2,3,7}; they are guarded by their
                // own conditions, so every returned count must be positive.
                let _ = p;
                let hits = a.query_maximals(family, q, &all).unwrap();
                for h in hits {
                    assert!(h.classes >= 1, "{} at q={q}", h.group);
                }
            }
        }
    }

    #[test]
    fn psl213_rows_select_exactly_one_family() {
        // For odd p away from 7 and 13, the four PSL_2(13)/PGL_2(13) rows
        // pick exactly one of E6(p) / 2E6(p).
        let a = atlas();
        let table = |fam: Family, src: u8| {
            a.tables
                .iter()
                .find(|t| t.family == fam && t.source_table == src)
                .unwrap()
        };
        let rows: Vec<(&AtlasEntry, Family)> = table(Family::E6, 2)
            .entries
            .iter()
            .filter(|e| e.group.contains("L_2(13)"))
            .map(|e| (e, Family::E6))
            .chain(
                table(Family::TwoE6, 3)
                    .entries
                    .iter()
                    .filter(|e| e.group.contains("L_2(13)"))
                    .map(|e| (e, Family::TwoE6)),
            )
            .collect();
        assert_eq!(rows.len(), 4);
        for p in arith::primes_below(1000) {
            if p == 2 || p == 7 || p == 13 {
                continue;
            }
            let mut families = Vec::new();
            for (e, fam) in &rows {
                if evaluate_condition(&e.condition, p, p).unwrap() {
                    families.push(*fam);
                }
            }
            families.dedup();
            assert_eq!(families.len(), 1, "p = {p} selects {families:?}");
        }
    }

    #[test]
    fn sl28_rows_resolve_by_trichotomy() {
        let a = atlas();
        // p = 29: H = PSL_2(8).3 embeds, e = gcd(3,28) = 1, so 2e = 2
        // classes with the PSL_2(8).3 branch.
        let hits = a.query_maximals(Family::E6, 29, &[]).unwrap();
        let row = hits.iter().find(|h| h.group == "N_G(PSL_2(8))").expect("29 = 1 mod 7");
        assert_eq!(row.classes, 2);
        assert!(row.branch.as_deref().unwrap().contains("PSL_2(8).3"));

        // p = 43: H does not embed, 43 = 7 mod 9, so PSL_2(8) is maximal
        // with 2 classes.
        let hits = a.query_maximals(Family::E6, 43, &[]).unwrap();
        let row = hits.iter().find(|h| h.group == "N_G(PSL_2(8))").expect("43 = 1 mod 7");
        assert_eq!(row.classes, 2);
        assert!(row.branch.as_deref().unwrap().contains("PSL_2(8);"));

        // p = 127: 127 = 1 mod 7 and 127 = 1 mod 9; the cube-root branch
        // decides visibility entirely.
        let d = sl28::embedding_decision(127).unwrap();
        let hits = a.query_maximals(Family::E6, 127, &[]).unwrap();
        let present = hits.iter().any(|h| h.group == "N_G(PSL_2(8))");
        assert_eq!(present, d.h_in_e6, "127 = +-1 mod 9 forces the embed branch");
    }

    #[test]
    fn novelty_check_examples() {
        // PGL_2(13) inside E6(p).2 with gamma induced: the only relevant
        // overgroup class is G_2(p), whose stabilizer (either printed
        // alternative) does not contain gamma. Type I novelty.
        let h_stab = vec![StabGen::simple(AutoBase::Gamma)];
        let g2 = OvergroupFact {
            name: "G_2(p)".into(),
            stabilizer: vec![StabGen::simple(AutoBase::Phi)],
            fuses_classes: None,
        };
        let verdict = novelty_check(53, &h_stab, &[g2], &gens(&["gamma"])).unwrap();
        assert_eq!(verdict, NoveltyVerdict::TypeINovelty);

        // Omega_7(3) in 2E6(2).2: the overgroup Fi_22 is phi-stable, but its
        // extension fuses the classes of Omega_7(3). Type II novelty.
        let h_stab = vec![StabGen::simple(AutoBase::Phi)];
        let fi22 = OvergroupFact {
            name: "Fi_22".into(),
            stabilizer: vec![StabGen::simple(AutoBase::Phi)],
            fuses_classes: Some(true),
        };
        let verdict = novelty_check(2, &h_stab, &[fi22.clone()], &gens(&["phi"])).unwrap();
        assert_eq!(verdict, NoveltyVerdict::TypeIINovelty);

        // A compatibly stabilized overgroup with no fusion means containment.
        let k = OvergroupFact { fuses_classes: Some(false), ..fi22.clone() };
        let verdict = novelty_check(2, &h_stab, &[k], &gens(&["phi"])).unwrap();
        assert_eq!(verdict, NoveltyVerdict::Contained);

        // Missing fusion data is an explicit failure, never a guess.
        let k = OvergroupFact { fuses_classes: None, ..fi22 };
        assert_eq!(
            novelty_check(2, &h_stab, &[k], &gens(&["phi"])).unwrap_err(),
            AtlasError::InsufficientFusionData
        );
    }

    #[test]
    fn data_dir_override_roundtrip() {
        // Write the embedded data out and reload through from_dir.
        let dir = std::env::temp_dir().join(format!("atlas_data_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        for (name, text) in EMBEDDED {
            std::fs::write(dir.join(name), text).unwrap();
        }
        let reloaded = Atlas::from_dir(&dir).unwrap();
        assert_eq!(row_counts(&reloaded), row_counts(&atlas()));
        std::fs::remove_dir_all(&dir).ok();
    }
}
