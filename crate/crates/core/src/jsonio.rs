//! JSON schemas and conversions for everything the command line reads and
//! writes. Rationals travel as strings "a/b" so that float-based readers
//! cannot corrupt exact values; valuations additionally admit "inf" and
//! ">=a/b" (a truncation bound).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::good::{GoodifyCertificate, HypothesisReport, TamePrimeReport};
use crate::localfield::{FieldContext, FieldElement, Val};
use crate::rootsys::{build_root_datum, LatticeChoice, RootDatum, SimpleType, TypeSpec};
use crate::torus::{GoodnessReport, RootStatus, TorusGroupElement, TorusLieElement};
use crate::weyl::ClassInfo;
use crate::{Error, Int, Rat, Result};

// ---------------------------------------------------------------- rationals

/// Parse "a/b" or "a" into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::BadInput(format!("malformed rational {s:?} (expected \"a/b\" or \"a\")"));
    let mut it = s.splitn(2, '/');
    let num: Int = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let den: Int = match it.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => 1,
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

pub fn rat_string(r: Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn val_string(v: &Val) -> String {
    match v {
        Val::Finite(r) => rat_string(*r),
        Val::Infinite => "inf".to_string(),
        Val::Indeterminate(b) => format!(">={}", rat_string(*b)),
    }
}

// -------------------------------------------------------------------- datum

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeJson {
    Name(String),
    Generators { generators: Vec<Vec<Int>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatumJson {
    pub components: Vec<ComponentJson>,
    pub lattice: LatticeJson,
}

impl DatumJson {
    /// Single irreducible component with a named lattice, as the CLI flags
    /// describe it.
    pub fn from_flags(kind: &str, rank: usize, lattice: &str) -> DatumJson {
        DatumJson {
            components: vec![ComponentJson { kind: kind.to_string(), rank }],
            lattice: LatticeJson::Name(lattice.to_string()),
        }
    }
}

pub fn datum_from_json(dj: &DatumJson) -> Result<RootDatum> {
    let mut specs = Vec::with_capacity(dj.components.len());
    for c in &dj.components {
        specs.push(TypeSpec::new(SimpleType::parse(&c.kind)?, c.rank)?);
    }
    let lattice = match &dj.lattice {
        LatticeJson::Name(name) => match name.trim().to_ascii_lowercase().as_str() {
            "sc" | "simply-connected" | "simply_connected" => LatticeChoice::SimplyConnected,
            "adjoint" => LatticeChoice::Adjoint,
            other => {
                return Err(Error::BadInput(format!(
                    "unknown lattice {other:?} (expected \"sc\", \"adjoint\" or generators)"
                )))
            }
        },
        LatticeJson::Generators { generators } => LatticeChoice::Generators(generators.clone()),
    };
    build_root_datum(&specs, &lattice)
}

// -------------------------------------------------------------------- field

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub f: u32,
    pub m: u32,
    pub e: i64,
    pub precision: String,
}

/// Build the context, optionally overriding the precision.
pub fn field_from_json(fj: &FieldJson, precision: Option<Rat>) -> Result<Arc<FieldContext>> {
    let prec = match precision {
        Some(p) => p,
        None => parse_rat(&fj.precision)?,
    };
    Ok(Arc::new(FieldContext::new(fj.p, fj.f, fj.m, fj.e, prec)?))
}

pub fn field_to_json(ctx: &FieldContext) -> FieldJson {
    FieldJson {
        p: ctx.p,
        f: ctx.f,
        m: ctx.m,
        e: ctx.e,
        precision: rat_string(ctx.precision()),
    }
}

// ------------------------------------------------------------------- series

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_up_to: Option<String>,
}

/// Read one series. `source_precision` is the precision of the document the
/// series came from: when the working context is finer than the source, the
/// element is only known up to what the source could express.
pub fn series_from_json(
    ctx: &Arc<FieldContext>,
    sj: &SeriesJson,
    source_precision: Option<Rat>,
) -> Result<FieldElement> {
    let mut terms = Vec::with_capacity(sj.terms.len());
    for t in &sj.terms {
        terms.push((parse_rat(&t.exp)?, t.coeff.clone()));
    }
    let mut x = FieldElement::from_terms(ctx, &terms)?;
    let mut ku = ctx.precision();
    if let Some(sp) = source_precision {
        ku = ku.min(sp);
    }
    if let Some(s) = &sj.known_up_to {
        ku = ku.min(parse_rat(s)?);
    }
    if ku < ctx.precision() {
        x = x.with_known_up_to(ku)?;
    }
    Ok(x)
}

pub fn series_to_json(x: &FieldElement) -> SeriesJson {
    let terms = x
        .terms()
        .into_iter()
        .map(|(exp, coeff)| TermJson { exp: rat_string(exp), coeff })
        .collect();
    let ku = x.known_up_to();
    let known_up_to =
        if ku < x.context().precision() { Some(rat_string(ku)) } else { None };
    SeriesJson { terms, known_up_to }
}

// ----------------------------------------------------------------- elements

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieElementJson {
    pub datum: DatumJson,
    pub field: FieldJson,
    pub coords: Vec<SeriesJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupElementJson {
    pub datum: DatumJson,
    pub field: FieldJson,
    pub values: Vec<SeriesJson>,
}

/// Either kind of torus element, told apart by its field name.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Lie(LieElementJson),
    Group(GroupElementJson),
}

fn series_vec_from_json(
    ctx: &Arc<FieldContext>,
    fj: &FieldJson,
    list: &[SeriesJson],
) -> Result<Vec<FieldElement>> {
    let source_precision = parse_rat(&fj.precision)?;
    list.iter()
        .map(|sj| series_from_json(ctx, sj, Some(source_precision)))
        .collect()
}

pub fn lie_from_json(
    j: &LieElementJson,
    precision: Option<Rat>,
) -> Result<(Arc<RootDatum>, TorusLieElement)> {
    let datum = Arc::new(datum_from_json(&j.datum)?);
    let ctx = field_from_json(&j.field, precision)?;
    let coords = series_vec_from_json(&ctx, &j.field, &j.coords)?;
    let x = TorusLieElement::new(Arc::clone(&datum), coords)?;
    Ok((datum, x))
}

pub fn group_from_json(
    j: &GroupElementJson,
    precision: Option<Rat>,
) -> Result<(Arc<RootDatum>, TorusGroupElement)> {
    let datum = Arc::new(datum_from_json(&j.datum)?);
    let ctx = field_from_json(&j.field, precision)?;
    let values = series_vec_from_json(&ctx, &j.field, &j.values)?;
    let g = TorusGroupElement::new(Arc::clone(&datum), values)?;
    Ok((datum, g))
}

/// Re-emit an element, echoing the datum description it was read with.
pub fn lie_to_json(datum: &DatumJson, x: &TorusLieElement) -> LieElementJson {
    LieElementJson {
        datum: datum.clone(),
        field: field_to_json(x.context()),
        coords: x.coords().iter().map(series_to_json).collect(),
    }
}

pub fn group_to_json(datum: &DatumJson, g: &TorusGroupElement) -> GroupElementJson {
    GroupElementJson {
        datum: datum.clone(),
        field: field_to_json(g.context()),
        values: g.values().iter().map(series_to_json).collect(),
    }
}

// ------------------------------------------------------------------ reports

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TamePrimesJson {
    pub excluded_lower: Vec<u64>,
    pub excluded_upper: Vec<u64>,
}

impl TamePrimesJson {
    pub fn from_report(r: &TamePrimeReport) -> TamePrimesJson {
        TamePrimesJson {
            excluded_lower: r.excluded_lower.clone(),
            excluded_upper: r.excluded_upper.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisJson {
    pub p: u64,
    pub bad_prime_ok: bool,
    pub bad_primes: Vec<u64>,
    pub char_torsion_ok: bool,
    pub torsion_primes: Vec<u64>,
    pub subsystem_index_ok: bool,
    pub dual_connection_index: u128,
}

impl HypothesisJson {
    pub fn from_report(r: &HypothesisReport) -> HypothesisJson {
        HypothesisJson {
            p: r.p,
            bad_prime_ok: r.bad_prime_ok,
            bad_primes: r.bad_primes.clone(),
            char_torsion_ok: r.char_torsion_ok,
            torsion_primes: r.torsion_primes.clone(),
            subsystem_index_ok: r.subsystem_index_ok,
            dual_connection_index: r.dual_connection_index,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassJson {
    pub order: u64,
    pub size: u128,
    pub centralizer_order: u128,
    pub char_poly: Vec<Int>,
}

impl ClassJson {
    pub fn from_class(c: &ClassInfo) -> ClassJson {
        ClassJson {
            order: c.order,
            size: c.size,
            centralizer_order: c.centralizer_order,
            char_poly: c.char_poly.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootReportJson {
    pub root: usize,
    pub status: String,
    pub val: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoodnessJson {
    pub good: bool,
    pub depth: String,
    pub certified: bool,
    pub vanishing: Vec<usize>,
    pub violating: Vec<usize>,
    pub roots: Vec<RootReportJson>,
}

pub fn status_string(s: RootStatus) -> &'static str {
    match s {
        RootStatus::Vanishing => "vanishing",
        RootStatus::AtDepth => "at-depth",
        RootStatus::Violating => "violating",
    }
}

pub fn goodness_to_json(r: &GoodnessReport) -> GoodnessJson {
    GoodnessJson {
        good: r.good,
        depth: val_string(&r.depth),
        certified: r.certified,
        vanishing: r.vanishing.clone(),
        violating: r.violating.clone(),
        roots: r
            .roots
            .iter()
            .map(|rr| RootReportJson {
                root: rr.root_index,
                status: status_string(rr.status).to_string(),
                val: val_string(&rr.val),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NEntryJson {
    pub root: usize,
    pub n: Int,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub depth: String,
    pub phi0: Vec<usize>,
    pub delta0: Vec<usize>,
    pub n_map: Vec<NEntryJson>,
    pub before: Vec<String>,
    pub after: Vec<String>,
    pub hypotheses: HypothesisJson,
}

pub fn certificate_to_json(c: &GoodifyCertificate) -> CertificateJson {
    CertificateJson {
        depth: val_string(&c.depth),
        phi0: c.phi0.clone(),
        delta0: c.delta0.clone(),
        n_map: c.n_map.iter().map(|&(root, n)| NEntryJson { root, n }).collect(),
        before: c.before.iter().map(val_string).collect(),
        after: c.after.iter().map(val_string).collect(),
        hypotheses: HypothesisJson::from_report(&c.hypotheses),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoodifyLieJson {
    pub certificate: CertificateJson,
    pub x1: LieElementJson,
    pub x2: LieElementJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoodifyGroupJson {
    pub certificate: CertificateJson,
    pub gamma1: GroupElementJson,
    pub gamma2: GroupElementJson,
}

// ------------------------------------------------------- small CLI payloads

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderJson {
    pub order: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateJson {
    pub order: u128,
    pub generators: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinusOneJson {
    pub contains_minus_one: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedSubgroupJson {
    pub fixed_order: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BadPrimesJson {
    pub bad_primes: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectionIndexJson {
    pub connection_index: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DepthJson {
    pub depth: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootsJson {
    pub rank: usize,
    pub num_roots: usize,
    pub simple_indices: Vec<usize>,
    pub roots: Vec<Vec<Int>>,
    pub coroots: Vec<Vec<Int>>,
    pub cartan: Vec<Vec<Int>>,
}

/// Input document selecting a subsystem by seed roots (closure is taken).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsystemSeedsJson {
    pub seeds: Vec<usize>,
}

/// Input document for a diagram automorphism.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutomorphismJson {
    pub simple_perm: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorContextJson {
    pub subcommand: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorJson {
    pub code: String,
    pub message: String,
    pub context: ErrorContextJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionJson {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyJson {
    pub pass: bool,
    pub criteria: Vec<CriterionJson>,
}
