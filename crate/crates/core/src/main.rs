//! Command-line front end: every library operation behind one subcommand,
//! JSON in and JSON out. Exit codes: 0 success, 1 failed verification,
//! 2 domain error (with a structured error document), 3 precision
//! indeterminacy, 64 bad command line, 65 malformed JSON input.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use rootfield::good::{check_hypotheses, goodify_group, goodify_lie, tame_prime_bounds};
use rootfield::jsonio::{
    self, AutomorphismJson, BadPrimesJson, ClassJson, ConnectionIndexJson, CriterionJson,
    DatumJson, DepthJson, ElementJson, ErrorContextJson, ErrorJson, FixedSubgroupJson,
    GenerateJson, GoodifyGroupJson, GoodifyLieJson, HypothesisJson, MinusOneJson, OrderJson,
    RootsJson, SubsystemSeedsJson, TamePrimesJson, VerifyJson,
};
use rootfield::rootsys::{RootDatum, SimpleType, TypeSpec};
use rootfield::suite::run_suite;
use rootfield::weyl::{diagram_automorphism, generate_group, DEFAULT_CAP};
use rootfield::{Error, Rat};

#[derive(Parser)]
#[command(
    name = "rootfield",
    about = "Exact root-datum, Weyl-group and local-field computations",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags naming a root datum: either --type/--rank/--lattice or --input with
/// a datum document.
#[derive(Args)]
struct DatumArgs {
    /// Simple type letter (A..G)
    #[arg(long = "type", value_name = "LETTER")]
    kind: Option<String>,
    /// Rank of the simple type
    #[arg(long)]
    rank: Option<usize>,
    /// Character lattice: "sc" or "adjoint"
    #[arg(long, default_value = "sc")]
    lattice: String,
    /// Datum document (path, inline JSON, or "-" for stdin)
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args)]
struct OutputArg {
    /// Write the JSON document to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CapArg {
    /// Enumeration cap on the group order
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
}

#[derive(Args)]
struct ElementInput {
    /// Element document (path, inline JSON, or "-" for stdin)
    #[arg(long)]
    input: String,
    /// Override the working precision (rational, e.g. "12" or "25/2")
    #[arg(long)]
    precision: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the root and coroot tables of a datum
    Roots {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Weyl group order by closed formula
    WeylOrder {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Generate the Weyl group explicitly and report its size
    WeylGenerate {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Does the Weyl group contain -1? (by direct search)
    MinusOne {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Conjugacy classes with orders, sizes, centralizers and char polys
    Conjugacy {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Order of the fixed subgroup under a diagram automorphism
    FixedSubgroup {
        #[command(flatten)]
        datum: DatumArgs,
        /// Automorphism document {"simple_perm":[...]}
        #[arg(long = "automorphism", value_name = "JSON")]
        automorphism: Option<String>,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Bad primes of the ambient root system
    BadPrimes {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Index of connection (weight lattice over root lattice)
    ConnectionIndex {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Excluded-prime bounds for tame descent of one simple type
    TamePrimes {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Check the residue-characteristic hypotheses for a closed subsystem
    CheckHypotheses {
        #[command(flatten)]
        datum: DatumArgs,
        /// Residue characteristic
        #[arg(long)]
        p: u64,
        /// Seed document {"seeds":[root indices]}; closure is taken
        #[arg(long = "seeds", value_name = "JSON")]
        seeds: Option<String>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Split a Lie-algebra torus element into good + deeper parts
    GoodifyLie {
        #[command(flatten)]
        element: ElementInput,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Split a torus group element into good + deeper parts
    GoodifyGroup {
        #[command(flatten)]
        element: ElementInput,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Filtration depth of a torus element (Lie or group)
    Depth {
        #[command(flatten)]
        element: ElementInput,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Goodness verdict with the per-root valuation picture
    IsGood {
        #[command(flatten)]
        element: ElementInput,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Run acceptance criteria ("all" or a single number)
    Verify {
        /// Criterion selector
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        out: OutputArg,
    },
}

enum Failure {
    /// Domain or precision error from the library.
    Domain(Error),
    /// Input text that is not valid JSON for the expected schema.
    Json(String),
    /// I/O on input/output paths.
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let _ = e.print();
            return 64;
        }
    };
    let subcommand = cli.cmd.name().to_string();
    let (doc, output, verify_failed) = match dispatch(cli.cmd) {
        Ok(t) => t,
        Err(fail) => {
            let (code, message, exit) = match &fail {
                Failure::Domain(e) if e.is_indeterminate() => (e.code(), e.to_string(), 3),
                Failure::Domain(e) => (e.code(), e.to_string(), 2),
                Failure::Json(m) => ("malformed-json", m.clone(), 65),
                Failure::Io(m) => ("io", m.clone(), 2),
            };
            let env = ErrorJson {
                code: code.to_string(),
                message,
                context: ErrorContextJson { subcommand },
            };
            println!("{}", serde_json::to_string(&env).expect("error document serializes"));
            return exit;
        }
    };
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, format!("{doc}\n")) {
                eprintln!("cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => println!("{doc}"),
    }
    if verify_failed {
        1
    } else {
        0
    }
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Roots { .. } => "roots",
            Cmd::WeylOrder { .. } => "weyl-order",
            Cmd::WeylGenerate { .. } => "weyl-generate",
            Cmd::MinusOne { .. } => "minus-one",
            Cmd::Conjugacy { .. } => "conjugacy",
            Cmd::FixedSubgroup { .. } => "fixed-subgroup",
            Cmd::BadPrimes { .. } => "bad-primes",
            Cmd::ConnectionIndex { .. } => "connection-index",
            Cmd::TamePrimes { .. } => "tame-primes",
            Cmd::CheckHypotheses { .. } => "check-hypotheses",
            Cmd::GoodifyLie { .. } => "goodify-lie",
            Cmd::GoodifyGroup { .. } => "goodify-group",
            Cmd::Depth { .. } => "depth",
            Cmd::IsGood { .. } => "is-good",
            Cmd::Verify { .. } => "verify",
        }
    }
}

/// Returns (document, output path, verify-failed flag).
fn dispatch(cmd: Cmd) -> CliResult<(String, Option<PathBuf>, bool)> {
    match cmd {
        Cmd::Roots { datum, out } => {
            let d = resolve_datum(&datum)?;
            let doc = RootsJson {
                rank: d.rank(),
                num_roots: d.num_roots(),
                simple_indices: d.simple_indices().to_vec(),
                roots: (0..d.num_roots()).map(|i| d.root(i).to_vec()).collect(),
                coroots: (0..d.num_roots()).map(|i| d.coroot(i).to_vec()).collect(),
                cartan: d.cartan().rows_vec(),
            };
            emit(&doc, out)
        }
        Cmd::WeylOrder { datum, out } => {
            let d = resolve_datum(&datum)?;
            emit(&OrderJson { order: d.weyl_order()? }, out)
        }
        Cmd::WeylGenerate { datum, cap, out } => {
            let d = resolve_datum(&datum)?;
            let w = generate_group(&d, cap.cap)?;
            emit(&GenerateJson { order: w.order(), generators: w.generators().len() }, out)
        }
        Cmd::MinusOne { datum, cap, out } => {
            let d = resolve_datum(&datum)?;
            let w = generate_group(&d, cap.cap)?;
            emit(&MinusOneJson { contains_minus_one: w.has_minus_one() }, out)
        }
        Cmd::Conjugacy { datum, cap, out } => {
            let d = resolve_datum(&datum)?;
            let w = generate_group(&d, cap.cap)?;
            let classes: Vec<ClassJson> =
                w.conjugacy_classes().iter().map(ClassJson::from_class).collect();
            emit(&classes, out)
        }
        Cmd::FixedSubgroup { datum, automorphism, cap, out } => {
            let d = resolve_datum(&datum)?;
            let text = read_input(automorphism.as_deref().ok_or_else(|| {
                Failure::Domain(Error::BadInput(
                    "--automorphism with {\"simple_perm\":[...]} is required".into(),
                ))
            })?)?;
            let aj: AutomorphismJson = parse_json(&text)?;
            let sigma = diagram_automorphism(&d, &aj.simple_perm)?;
            let w = generate_group(&d, cap.cap)?;
            emit(&FixedSubgroupJson { fixed_order: w.diagram_fixed_subgroup(&sigma) }, out)
        }
        Cmd::BadPrimes { datum, out } => {
            let d = resolve_datum(&datum)?;
            emit(&BadPrimesJson { bad_primes: d.bad_primes() }, out)
        }
        Cmd::ConnectionIndex { datum, out } => {
            let d = resolve_datum(&datum)?;
            emit(&ConnectionIndexJson { connection_index: d.connection_index() }, out)
        }
        Cmd::TamePrimes { datum, out } => {
            let ts = single_type(&datum)?;
            emit(&TamePrimesJson::from_report(&tame_prime_bounds(&ts)), out)
        }
        Cmd::CheckHypotheses { datum, p, seeds, out } => {
            let d = resolve_datum(&datum)?;
            let phi0 = match seeds {
                None => d.closure(&d.simple_indices().to_vec()),
                Some(s) => {
                    let sj: SubsystemSeedsJson = parse_json(&read_input(&s)?)?;
                    for &i in &sj.seeds {
                        if i >= d.num_roots() {
                            return Err(Failure::Domain(Error::BadInput(format!(
                                "seed {i} out of range (datum has {} roots)",
                                d.num_roots()
                            ))));
                        }
                    }
                    d.closure(&sj.seeds)
                }
            };
            let rep = check_hypotheses(p, &d, &phi0);
            emit(&HypothesisJson::from_report(&rep), out)
        }
        Cmd::GoodifyLie { element, out } => {
            let (doc, precision) = read_element(&element)?;
            let lj = match doc {
                ElementJson::Lie(lj) => lj,
                ElementJson::Group(_) => {
                    return Err(Failure::Domain(Error::BadInput(
                        "expected a Lie element document with \"coords\"".into(),
                    )))
                }
            };
            let (_, x) = jsonio::lie_from_json(&lj, precision)?;
            let g = goodify_lie(&x)?;
            let doc = GoodifyLieJson {
                certificate: jsonio::certificate_to_json(&g.certificate),
                x1: jsonio::lie_to_json(&lj.datum, &g.x1),
                x2: jsonio::lie_to_json(&lj.datum, &g.x2),
            };
            emit(&doc, out)
        }
        Cmd::GoodifyGroup { element, out } => {
            let (doc, precision) = read_element(&element)?;
            let gj = match doc {
                ElementJson::Group(gj) => gj,
                ElementJson::Lie(_) => {
                    return Err(Failure::Domain(Error::BadInput(
                        "expected a group element document with \"values\"".into(),
                    )))
                }
            };
            let (_, gamma) = jsonio::group_from_json(&gj, precision)?;
            let g = goodify_group(&gamma)?;
            let doc = GoodifyGroupJson {
                certificate: jsonio::certificate_to_json(&g.certificate),
                gamma1: jsonio::group_to_json(&gj.datum, &g.gamma1),
                gamma2: jsonio::group_to_json(&gj.datum, &g.gamma2),
            };
            emit(&doc, out)
        }
        Cmd::Depth { element, out } => {
            let (doc, precision) = read_element(&element)?;
            let depth = match doc {
                ElementJson::Lie(lj) => jsonio::lie_from_json(&lj, precision)?.1.depth()?,
                ElementJson::Group(gj) => jsonio::group_from_json(&gj, precision)?.1.depth()?,
            };
            emit(&DepthJson { depth: jsonio::val_string(&depth) }, out)
        }
        Cmd::IsGood { element, out } => {
            let (doc, precision) = read_element(&element)?;
            let report = match doc {
                ElementJson::Lie(lj) => jsonio::lie_from_json(&lj, precision)?.1.is_good()?,
                ElementJson::Group(gj) => jsonio::group_from_json(&gj, precision)?.1.is_good()?,
            };
            emit(&jsonio::goodness_to_json(&report), out)
        }
        Cmd::Verify { suite, out } => {
            let reports = run_suite(&suite)?;
            let criteria: Vec<CriterionJson> = reports
                .iter()
                .map(|r| CriterionJson {
                    id: r.id,
                    name: r.name.clone(),
                    pass: r.pass,
                    detail: r.detail.clone(),
                    elapsed_ms: r.elapsed_ms,
                })
                .collect();
            let pass = criteria.iter().all(|c| c.pass);
            let path = out.output.clone();
            let (doc, _, _) = emit(&VerifyJson { pass, criteria }, out)?;
            Ok((doc, path, !pass))
        }
    }
}

fn emit<T: Serialize>(doc: &T, out: OutputArg) -> CliResult<(String, Option<PathBuf>, bool)> {
    let text = serde_json::to_string(doc)
        .map_err(|e| Failure::Io(format!("cannot serialize output: {e}")))?;
    Ok((text, out.output, false))
}

/// `--input` and friends accept a file path, inline JSON (starts with '{' or
/// '['), or "-" for standard input.
fn read_input(arg: &str) -> CliResult<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Io(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Io(format!("cannot read {arg}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| Failure::Json(e.to_string()))
}

fn resolve_datum(args: &DatumArgs) -> CliResult<Arc<RootDatum>> {
    let dj = datum_doc(args)?;
    Ok(Arc::new(jsonio::datum_from_json(&dj)?))
}

fn datum_doc(args: &DatumArgs) -> CliResult<DatumJson> {
    if let Some(input) = &args.input {
        return parse_json(&read_input(input)?);
    }
    let kind = args.kind.as_deref().ok_or_else(|| {
        Failure::Domain(Error::BadInput("--type and --rank (or --input) are required".into()))
    })?;
    let rank = args.rank.ok_or_else(|| {
        Failure::Domain(Error::BadInput("--rank is required with --type".into()))
    })?;
    Ok(DatumJson::from_flags(kind, rank, &args.lattice))
}

/// Subcommands that take one simple type, not a whole datum.
fn single_type(args: &DatumArgs) -> CliResult<TypeSpec> {
    if args.input.is_some() {
        let dj: DatumJson = parse_json(&read_input(args.input.as_deref().unwrap())?)?;
        if dj.components.len() != 1 {
            return Err(Failure::Domain(Error::BadInput(
                "this subcommand takes exactly one simple type".into(),
            )));
        }
        let c = &dj.components[0];
        return Ok(TypeSpec::new(SimpleType::parse(&c.kind)?, c.rank)?);
    }
    let kind = args.kind.as_deref().ok_or_else(|| {
        Failure::Domain(Error::BadInput("--type and --rank are required".into()))
    })?;
    let rank = args.rank.ok_or_else(|| {
        Failure::Domain(Error::BadInput("--rank is required with --type".into()))
    })?;
    Ok(TypeSpec::new(SimpleType::parse(kind)?, rank)?)
}

fn read_element(element: &ElementInput) -> CliResult<(ElementJson, Option<Rat>)> {
    let text = read_input(&element.input)?;
    let doc: ElementJson = parse_json(&text)?;
    let precision = match &element.precision {
        None => None,
        Some(s) => Some(jsonio::parse_rat(s)?),
    };
    Ok((doc, precision))
}
