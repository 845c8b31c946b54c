use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ravol::census::{self, CensusConfig, CensusResult};
use ravol::generators::{self, Edge, Matching, MoveDescriptor};
use ravol::numerics::{self, PrecisionSpec};
use ravol::polyhedron::parse_polyhedron;
use ravol::realization;
use ravol::spectra::{self, SummandStats};
use ravol::volumes;
use ravol::{andreev_check, Kind, Polyhedron};

const SCHEMA: &str = "1";

#[derive(Parser)]
#[command(name = "ravol", version, about = "Right-angled hyperbolic polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Decimal digits for reported reals.
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Solver tolerance for circle-pattern realization.
    #[arg(long, global = true, default_value_t = realization::DEFAULT_TOL)]
    tol: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Ideal,
    Compact,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Ideal => Kind::Ideal,
            KindArg::Compact => Kind::Compact,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Antiprism,
    Lobell,
    Tower,
}

#[derive(Subcommand)]
enum Command {
    /// Check the realizability conditions of a polyhedron.
    Validate {
        /// JSON face list or RA1 code; `-` reads stdin.
        input: String,
    },
    /// Build a member of a named family.
    Gen(FamilyArgs),
    /// Apply a generating move.
    Move {
        #[command(subcommand)]
        op: MoveOp,
    },
    /// Enumerate all polyhedra of a kind up to a vertex count.
    Census {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        max_n: usize,
        /// Only the number of polyhedra per vertex count.
        #[arg(long)]
        summary: bool,
        /// Include the move log that rebuilds each member.
        #[arg(long)]
        provenance: bool,
    },
    /// Closed-form volume of a family member.
    Volume(FamilyArgs),
    /// Realize an ideal polyhedron by a circle pattern and compute its volume.
    Realize {
        input: String,
        /// Include the solved circle pattern.
        #[arg(long)]
        dump: bool,
    },
    /// Normalized-volume statistics over the census at one vertex count.
    Spectrum {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
    },
    /// Copy counts of two summands whose sums approach a target ω̃.
    Schedule {
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long, default_value_t = 40)]
        max_terms: usize,
        /// ω̃ and ṽer of the first summand (default: the smallest antiprism with
        /// ω̃ within 0.005 of v_oct/4).
        #[arg(long, num_args = 2, value_names = ["OMEGA_TILDE", "VER_TILDE"])]
        first: Option<Vec<f64>>,
        /// ω̃ and ṽer of the second summand (default: ω̃ = v_oct/2 − 0.005, ṽer = 37).
        #[arg(long, num_args = 2, value_names = ["OMEGA_TILDE", "VER_TILDE"])]
        second: Option<Vec<f64>>,
    },
    /// Locate a normalized volume relative to the landmark constants.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Check one of the two Lobachevsky identities for the 4-antiprism volume.
    Identity {
        #[arg(long, value_parser = clap::value_parser!(u8).range(8..=9))]
        eq: u8,
    },
    /// v_oct, v_tet and the landmark constants a..k.
    Constants,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: u64,
    /// Number of stacked copies (towers only).
    #[arg(long, default_value_t = 2)]
    k: u64,
}

#[derive(Subcommand)]
enum MoveOp {
    /// List the applicable twists and the surgery classes of edges.
    List { input: String },
    /// Edge twist on two edges `a,b` and `c,d`.
    Twist {
        input: String,
        #[arg(long, value_parser = parse_edge)]
        e1: Edge,
        #[arg(long, value_parser = parse_edge)]
        e2: Edge,
    },
    /// Edge addition across face `face` between edges `ea` and `eb`.
    Addition {
        input: String,
        #[arg(long)]
        face: usize,
        #[arg(long, value_parser = parse_edge)]
        ea: Edge,
        #[arg(long, value_parser = parse_edge)]
        eb: Edge,
    },
    /// Edge surgery on a very good edge.
    Surgery {
        input: String,
        #[arg(long, value_parser = parse_edge)]
        edge: Edge,
    },
    /// Connected sum along face `face` of the first and `other-face` of the second.
    Sum {
        input: String,
        other: String,
        #[arg(long)]
        face: usize,
        #[arg(long)]
        other_face: usize,
        /// Rotation of the identification; every rotation and reflection when absent.
        #[arg(long)]
        offset: Option<usize>,
        #[arg(long)]
        reflect: bool,
    },
}

fn parse_edge(s: &str) -> Result<Edge, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

#[derive(Debug)]
struct Failure {
    code: &'static str,
    message: String,
}

fn fail<E: std::fmt::Display>(code: &'static str) -> impl FnOnce(E) -> Failure {
    move |e| Failure {
        code,
        message: e.to_string(),
    }
}

type Outcome = Result<Output, Failure>;

struct Output {
    json: Value,
    text: String,
}

impl Output {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Output {
            json,
            text: text.into(),
        }
    }
}

fn real(x: f64, digits: u32) -> Value {
    Value::String(format!("{x:.prec$}", prec = digits.min(15) as usize))
}

fn opt_real(x: Option<f64>, digits: u32) -> Value {
    x.map_or(Value::Null, |x| real(x, digits))
}

fn read_input(path: &str) -> Result<Polyhedron, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(fail("io_error"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(fail("io_error"))?
    };
    parse_polyhedron(&text).map_err(fail("parse_error"))
}

fn poly_json(p: &Polyhedron) -> Value {
    json!({
        "code": p.canonical_code().to_string(),
        "kind": p.kind().as_str(),
        "faces": p.to_json().faces,
    })
}

fn poly_output(p: &Polyhedron) -> Output {
    Output::new(poly_json(p), p.canonical_code().to_string())
}

fn precision(digits: Option<u32>, default: u32) -> Result<PrecisionSpec, Failure> {
    PrecisionSpec::new(digits.unwrap_or(default)).map_err(fail("precision_unattainable"))
}

fn build_family(f: &FamilyArgs) -> Result<Polyhedron, Failure> {
    let n = f.n as usize;
    match f.family {
        Family::Antiprism => generators::antiprism(n),
        Family::Lobell => generators::lobell(n),
        Family::Tower => generators::tower(n, f.k as usize),
    }
    .map_err(fail("bad_parameter"))
}

fn run_census(kind: KindArg, max_n: usize) -> Result<CensusResult, Failure> {
    match kind {
        KindArg::Ideal => census::ideal_census_with(CensusConfig::ideal(max_n)),
        KindArg::Compact => census::compact_census_with(CensusConfig::compact(max_n)),
    }
    .map_err(|e| match e {
        census::CensusError::BudgetExceeded(_) => fail("budget_exceeded")(e),
        _ => fail("bad_parameter")(e),
    })
}

fn run(cli: &Cli) -> Outcome {
    let digits = cli.digits.unwrap_or(10);
    match &cli.command {
        Command::Validate { input } => {
            let p = read_input(input)?;
            let report = andreev_check(&p);
            let valid = report.valid();
            let json = json!({
                "valid": valid,
                "kind": report.kind.as_str(),
                "code": p.canonical_code().to_string(),
                "counts": p.counts(),
                "report": report,
            });
            let text = if valid {
                format!("valid {}", report.kind)
            } else {
                format!("invalid {}", report.kind)
            };
            Ok(Output::new(json, text))
        }
        Command::Gen(f) => Ok(poly_output(&build_family(f)?)),
        Command::Move { op } => run_move(op),
        Command::Census {
            kind,
            max_n,
            summary,
            provenance,
        } => {
            let res = run_census(*kind, *max_n)?;
            let counts: Map<String, Value> = res
                .counts()
                .into_iter()
                .map(|(n, c)| (n.to_string(), json!(c)))
                .collect();
            let mut json = json!({
                "kind": res.kind.as_str(),
                "max_n": res.n_max,
                "counts": counts,
            });
            let mut text = String::new();
            if *summary {
                for (n, c) in res.counts() {
                    text.push_str(&format!("{n} {c}\n"));
                }
            } else {
                let mut levels = Map::new();
                for (n, members) in &res.levels {
                    text.push_str(&format!("# n={n}\n"));
                    let entries: Vec<Value> = members
                        .iter()
                        .map(|m| {
                            text.push_str(&format!("{}\n", m.code));
                            if *provenance {
                                json!({
                                    "code": m.code.to_string(),
                                    "volume": opt_real(m.volume, digits),
                                    "replay": res.replay_log(&m.code),
                                })
                            } else {
                                json!(m.code.to_string())
                            }
                        })
                        .collect();
                    levels.insert(n.to_string(), Value::Array(entries));
                }
                json["levels"] = Value::Object(levels);
            }
            Ok(Output::new(json, text.trim_end()))
        }
        Command::Volume(f) => {
            let prec = precision(cli.digits, 15)?;
            let v = match f.family {
                Family::Antiprism => volumes::antiprism_volume(f.n, prec),
                Family::Lobell => volumes::lobell_volume(f.n, prec),
                Family::Tower => volumes::tower_volume(f.n, f.k, prec),
            }
            .map_err(fail("bad_parameter"))?;
            let json = json!({
                "value": v.decimal,
                "digits": v.digits,
                "method": v.method,
            });
            Ok(Output::new(json, v.decimal))
        }
        Command::Realize { input, dump } => {
            let p = read_input(input)?;
            let apex = realization::default_apex(&p);
            let pattern =
                realization::solve_pattern_at(&p, apex, cli.tol).map_err(fail("realization"))?;
            let r = realization::realize(&p, &pattern, cli.tol).map_err(fail("realization"))?;
            let vol = realization::decomposition_volume(&p, &r.positions, r.apex, cli.tol)
                .map_err(fail("realization"))?;
            let mut json = json!({
                "code": p.canonical_code().to_string(),
                "apex": apex,
                "volume": real(vol, digits),
                "digits": digits.min(15),
                "iterations": pattern.iterations,
                "residual": format!("{:.3e}", pattern.residual),
            });
            if *dump {
                json["pattern"] = realization::debug_dump(&pattern);
            }
            Ok(Output::new(
                json,
                format!("{:.prec$}", vol, prec = digits.min(15) as usize),
            ))
        }
        Command::Spectrum { kind, n } => {
            let mut res = run_census(*kind, *n)?;
            res.levels.retain(|&m, _| m == *n);
            let points = spectra::spectrum_points(&res, cli.tol).map_err(fail("spectrum"))?;
            let row =
                spectra::spectrum_table((*kind).into(), *n, &points).map_err(fail("spectrum"))?;
            let pts: Vec<Value> = points
                .iter()
                .map(|p| {
                    json!({
                        "code": p.code.to_string(),
                        "volume": opt_real(p.vol.as_ref().map(|v| v.value), digits),
                        "omega": opt_real(p.omega, digits),
                        "omega_tilde": opt_real(p.omega_tilde, digits),
                    })
                })
                .collect();
            let json = json!({
                "kind": row.kind.as_str(),
                "n": row.n,
                "count": row.count,
                "distinct": row.distinct,
                "min_omega": opt_real(row.min_omega, digits),
                "max_omega": opt_real(row.max_omega, digits),
                "partial": row.partial,
                "points": pts,
            });
            let show = |x: Option<f64>| {
                x.map_or("-".to_string(), |x| {
                    format!("{x:.prec$}", prec = digits.min(15) as usize)
                })
            };
            let text = format!(
                "{} {} {} {} {}{}",
                row.n,
                row.count,
                row.distinct,
                show(row.min_omega),
                show(row.max_omega),
                if row.partial { " partial" } else { "" }
            );
            Ok(Output::new(json, text))
        }
        Command::Schedule {
            target,
            eps,
            max_terms,
            first,
            second,
        } => {
            let stats = |v: &Option<Vec<f64>>, default: SummandStats| -> Result<_, Failure> {
                match v.as_deref() {
                    None => Ok(default),
                    Some(&[w, n]) if n >= 1.0 && n.fract() == 0.0 => Ok(SummandStats {
                        ver_tilde: n as u64,
                        omega_tilde: w,
                    }),
                    Some(_) => Err(Failure {
                        code: "bad_parameter",
                        message: "ṽer must be a positive integer".into(),
                    }),
                }
            };
            let (_, default1) = spectra::antiprism_summand(0.005).map_err(fail("bad_parameter"))?;
            let default2 = SummandStats {
                ver_tilde: 37,
                omega_tilde: numerics::v_oct_f64() / 2.0 - 0.005,
            };
            let p1 = stats(first, default1)?;
            let p2 = stats(second, default2)?;
            let s = spectra::approximation_schedule(*target, p1, p2, *eps, *max_terms)
                .map_err(fail("schedule"))?;
            let pairs: Vec<Value> = s.pairs.iter().map(|&(k, m)| json!([k, m])).collect();
            let (k, m) = *s.pairs.last().expect("nonempty");
            let json = json!({
                "target": real(s.target, digits),
                "first": {"omega_tilde": real(p1.omega_tilde, digits), "ver_tilde": p1.ver_tilde},
                "second": {"omega_tilde": real(p2.omega_tilde, digits), "ver_tilde": p2.ver_tilde},
                "pairs": pairs,
                "predicted": real(s.predicted, digits),
            });
            Ok(Output::new(json, format!("{k} {m} {:.10}", s.predicted)))
        }
        Command::Classify { omega, kind } => {
            let region =
                spectra::classify(*omega, (*kind).into()).map_err(fail("bad_parameter"))?;
            let name = serde_json::to_value(region).expect("serializable");
            let text = name.as_str().unwrap_or_default().to_string();
            Ok(Output::new(
                json!({"omega": omega.to_string(), "region": name}),
                text,
            ))
        }
        Command::Identity { eq } => {
            let d = cli.digits.unwrap_or(50);
            let v = match eq {
                8 => numerics::check_identity_eq8(d),
                _ => numerics::check_identity_eq9(d),
            }
            .map_err(fail("precision_unattainable"))?;
            let json = json!({
                "name": format!("identity_{eq}"),
                "digits": v.digits,
                "value": v.lhs,
                "lhs": v.lhs,
                "rhs": v.rhs,
                "agree_digits": v.agree_digits,
                "verdict": v.verdict,
            });
            let verdict = serde_json::to_value(v.verdict).expect("serializable");
            Ok(Output::new(
                json,
                format!(
                    "{} {}",
                    verdict.as_str().unwrap_or_default(),
                    v.agree_digits
                ),
            ))
        }
        Command::Constants => {
            let prec = precision(cli.digits, 15)?;
            let mut entries: Vec<(String, numerics::Value)> = vec![
                (
                    "v_oct".into(),
                    numerics::v_oct(prec).map_err(fail("precision_unattainable"))?,
                ),
                (
                    "v_tet".into(),
                    numerics::v_tet(prec).map_err(fail("precision_unattainable"))?,
                ),
            ];
            let lm: BTreeMap<char, numerics::Value> =
                volumes::landmark_constants(prec).map_err(fail("precision_unattainable"))?;
            entries.extend(lm.into_iter().map(|(c, v)| (c.to_string(), v)));
            let mut text = String::new();
            let list: Vec<Value> = entries
                .into_iter()
                .map(|(name, v)| {
                    text.push_str(&format!("{name} {}\n", v.decimal));
                    json!({"name": name, "digits": v.digits, "value": v.decimal})
                })
                .collect();
            Ok(Output::new(json!({"constants": list}), text.trim_end()))
        }
    }
}

fn run_move(op: &MoveOp) -> Outcome {
    let moved = |p: Polyhedron, step: MoveDescriptor| {
        let mut json = poly_json(&p);
        json["valid"] = json!(andreev_check(&p).valid());
        json["step"] = serde_json::to_value(step).expect("serializable");
        Output::new(json, p.canonical_code().to_string())
    };
    match op {
        MoveOp::List { input } => {
            let p = read_input(input)?;
            let twists: Vec<Value> = generators::edge_twist_candidates(&p)
                .into_iter()
                .map(|(a, b)| json!([[a.0, a.1], [b.0, b.1]]))
                .collect();
            let mut json = json!({"code": p.canonical_code().to_string(), "twists": twists});
            if p.kind() == Kind::Compact {
                let edges = generators::good_edges(&p).map_err(fail("move"))?;
                json["surgery"] = json!(edges);
            }
            let text = format!("{} twists", twists.len());
            Ok(Output::new(json, text))
        }
        MoveOp::Twist { input, e1, e2 } => {
            let p = read_input(input)?;
            let q = generators::edge_twist(&p, *e1, *e2).map_err(fail("move"))?;
            Ok(moved(q, MoveDescriptor::Twist { e1: *e1, e2: *e2 }))
        }
        MoveOp::Addition {
            input,
            face,
            ea,
            eb,
        } => {
            let p = read_input(input)?;
            let cycle = p
                .faces()
                .get(*face)
                .cloned()
                .ok_or_else(|| fail("move")(format!("no face {face}")))?;
            let (q, _) = generators::edge_addition(&p, *face, *ea, *eb).map_err(fail("move"))?;
            Ok(moved(
                q,
                MoveDescriptor::Addition {
                    face: cycle,
                    ea: *ea,
                    eb: *eb,
                },
            ))
        }
        MoveOp::Surgery { input, edge } => {
            let p = read_input(input)?;
            let q = generators::edge_surgery(&p, *edge).map_err(fail("move"))?;
            Ok(moved(q, MoveDescriptor::Surgery { edge: *edge }))
        }
        MoveOp::Sum {
            input,
            other,
            face,
            other_face,
            offset,
            reflect,
        } => {
            let p = read_input(input)?;
            let q = read_input(other)?;
            for (poly, f) in [(&p, *face), (&q, *other_face)] {
                if f >= poly.face_count() {
                    return Err(fail("move")(format!("no face {f}")));
                }
            }
            let matching = match offset {
                Some(o) => Matching::Single {
                    offset: *o,
                    reflect: *reflect,
                },
                None => Matching::All,
            };
            let sums = generators::connect_sum(&p, *face, &q, *other_face, matching)
                .map_err(fail("move"))?;
            let mut text = String::new();
            let results: Vec<Value> = sums
                .iter()
                .map(|s| {
                    text.push_str(&format!("{}\n", s.poly.canonical_code()));
                    let mut j = poly_json(&s.poly);
                    j["valid"] = json!(andreev_check(&s.poly).valid());
                    j["isometric"] = json!(s.isometric);
                    j["offset"] = json!(s.offset);
                    j["reflect"] = json!(s.reflect);
                    j
                })
                .collect();
            Ok(Output::new(json!({"sums": results}), text.trim_end()))
        }
    }
}

fn emit(format: Format, out: Output) {
    match format {
        Format::Json => {
            let mut json = out.json;
            if let Value::Object(map) = &mut json {
                map.insert("schema".into(), json!(SCHEMA));
            }
            println!("{}", serde_json::to_string(&json).expect("serializable"));
        }
        Format::Text => println!("{}", out.text),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("ravol: {e}");
            return ExitCode::FAILURE;
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(out) => {
            emit(cli.format, out);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let json = json!({"schema": SCHEMA, "error": {"code": f.code, "message": f.message}});
            println!("{json}");
            eprintln!("ravol: {}", f.message);
            ExitCode::FAILURE
        }
    }
}
