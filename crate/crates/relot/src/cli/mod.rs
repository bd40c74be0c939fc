//! Command-line front end.
//!
//! Five subcommands over JSON instance files (or CSV persistence
//! diagrams):
//!
//! * `dist INSTANCE A B [--p P] [--coupling] [--certify]` — the transport
//!   distance between two named measures, optionally with the optimal plan
//!   and a duality-gap certificate;
//! * `coupling INSTANCE A B` — alias for `dist --coupling`;
//! * `dual INSTANCE A B` — the dual certificate: potentials, value, gap
//!   (two-potential form when the instance carries a `cost` matrix, the
//!   single-potential `W_1` form otherwise);
//! * `norm INSTANCE M` — transport norm and operator norm of a signed
//!   measure, with their gap;
//! * `lattice OP INSTANCE A [B]` — `sup`, `inf`, `residual`, `jordan`, or
//!   `truncate` on measures (`truncate` takes `--lo`, and `--hi` for a
//!   band).
//!
//! Common flags: `--rational` switches every computation to exact
//! arbitrary-precision arithmetic; `--format json|csv` selects the output
//! encoding; `--seed` drives the sampled validation of large explicit
//! distance matrices; `--csv FILE...` imports persistence diagrams
//! (measures are then named `"0"`, `"1"`, … in file order). `dist` also
//! accepts `--emit-dot FILE` to dump the optimal coupling as a Graphviz
//! digraph.
//!
//! Exit codes: `0` success, `2` bad input (parse, schema, validation), `3`
//! internal solver failure on valid input.
//!
//! Output is deterministic: atoms and coupling edges are emitted in sorted
//! order (edges by kind — `direct`, `from_res`, `to_res` — then endpoint
//! indices), floats in the shortest form that round-trips, rationals as
//! exact `"num/den"` strings that re-read bit-identically.

mod instance;

pub use instance::Instance;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::coupling::Coupling;
use crate::duality::{kr_dual, mk_dual, op_norm, DualCertificate};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::scalar::{Rational, Real, Scalar};
use crate::solver::{kr_norm, solve_wp};

/// Command-line interface definition.
#[derive(Parser)]
#[command(
    name = "relot",
    version,
    about = "Exact relative optimal transport: distances against a mass reservoir"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transport distance between two measures.
    Dist(DistArgs),
    /// Transport distance plus the optimal coupling (dist --coupling).
    Coupling(DistArgs),
    /// Duality certificate: potentials, dual value, and gap.
    Dual(DualArgs),
    /// Transport norm and operator norm of a signed measure.
    Norm(NormArgs),
    /// Lattice operations: sup, inf, residual, jordan, truncate.
    Lattice(LatticeArgs),
}

/// Output encoding.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// A single JSON object (the primary format).
    Json,
    /// Flat comma-separated records.
    Csv,
}

/// Arguments shared by every subcommand: the input source and the global
/// evaluation switches.
#[derive(Args)]
struct InputArgs {
    /// JSON instance file.
    #[arg(value_name = "INSTANCE", required_unless_present = "csv")]
    instance: Option<PathBuf>,

    /// Import persistence diagrams from CSV files (birth,death[,weight])
    /// instead of an instance file; measures are named "0", "1", … in
    /// file order over a half-plane L∞ geometry.
    #[arg(long, value_name = "FILE", num_args = 1.., conflicts_with = "instance")]
    csv: Vec<PathBuf>,

    /// Compute in exact arbitrary-precision rational arithmetic.
    #[arg(long)]
    rational: bool,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for the sampled metric validation of large explicit matrices.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DistArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Name of the first measure.
    #[arg(value_name = "A")]
    a: Option<String>,

    /// Name of the second measure.
    #[arg(value_name = "B")]
    b: Option<String>,

    /// Cost exponent p ≥ 1 (integer in rational mode).
    #[arg(long, default_value_t = 1.0)]
    p: f64,

    /// Also emit the optimal coupling as an edge list.
    #[arg(long)]
    coupling: bool,

    /// Also certify the value with a dual potential (p = 1 only); emits
    /// the duality gap.
    #[arg(long)]
    certify: bool,

    /// Write the optimal coupling as a Graphviz digraph to this file.
    #[arg(long, value_name = "FILE")]
    emit_dot: Option<PathBuf>,
}

#[derive(Args)]
struct DualArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Name of the first measure.
    #[arg(value_name = "A")]
    a: Option<String>,

    /// Name of the second measure.
    #[arg(value_name = "B")]
    b: Option<String>,
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Name of the (possibly signed) measure.
    #[arg(value_name = "MEASURE")]
    measure: Option<String>,
}

#[derive(Args)]
struct LatticeArgs {
    /// Operation: sup, inf, residual, jordan, or truncate.
    #[arg(value_name = "OP")]
    op: String,

    #[command(flatten)]
    input: InputArgs,

    /// Measure name(s): two for sup/inf/residual, one for jordan/truncate.
    #[arg(value_name = "MEASURE")]
    names: Vec<String>,

    /// truncate: drop atoms with reservoir distance at most this value.
    #[arg(long, default_value = "0")]
    lo: String,

    /// truncate: also drop atoms with reservoir distance above this value.
    #[arg(long)]
    hi: Option<String>,
}

impl Command {
    fn input(&self) -> &InputArgs {
        match self {
            Command::Dist(a) | Command::Coupling(a) => &a.input,
            Command::Dual(a) => &a.input,
            Command::Norm(a) => &a.input,
            Command::Lattice(a) => &a.input,
        }
    }
}

/// Parses the process arguments, runs the requested command, prints its
/// output, and returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = if cli.command.input().rational {
        execute::<Rational>(&cli.command)
    } else {
        execute::<Real>(&cli.command)
    };
    match outcome {
        Ok(output) => {
            println!("{output}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute<S: Scalar>(command: &Command) -> Result<String> {
    match command {
        Command::Dist(args) => cmd_dist::<S>(args, args.coupling),
        Command::Coupling(args) => cmd_dist::<S>(args, true),
        Command::Dual(args) => cmd_dual::<S>(args),
        Command::Norm(args) => cmd_norm::<S>(args),
        Command::Lattice(args) => cmd_lattice::<S>(args),
    }
}

fn load<S: Scalar>(input: &InputArgs) -> Result<Instance<S>> {
    if input.csv.is_empty() {
        let path = input.instance.as_ref().ok_or_else(|| Error::Parse {
            reason: "an instance file (or --csv) is required".into(),
        })?;
        Instance::from_json_file(path, input.seed)
    } else {
        Instance::from_diagram_csvs(&input.csv)
    }
}

/// Resolves a measure name: explicit names win; in CSV mode the `index`-th
/// diagram is the default.
fn measure_name(explicit: &Option<String>, input: &InputArgs, index: usize) -> Result<String> {
    if let Some(name) = explicit {
        return Ok(name.clone());
    }
    if index < input.csv.len() {
        return Ok(index.to_string());
    }
    Err(Error::Parse {
        reason: format!(
            "measure argument {} is required (only {} CSV diagrams were given)",
            index + 1,
            input.csv.len()
        ),
    })
}

// ---------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------

fn cmd_dist<S: Scalar>(args: &DistArgs, with_coupling: bool) -> Result<String> {
    if args.certify && args.p != 1.0 {
        return Err(Error::InvalidExponent {
            p: args.p,
            reason: "--certify uses the single-potential dual, which certifies p = 1 only".into(),
        });
    }
    let instance: Instance<S> = load(&args.input)?;
    let name_a = measure_name(&args.a, &args.input, 0)?;
    let name_b = measure_name(&args.b, &args.input, 1)?;
    let (mu, dropped_a) = instance.measure(&name_a)?;
    let (nu, dropped_b) = instance.measure(&name_b)?;

    let result = solve_wp(&mu, &nu, args.p)?;

    if let Some(path) = &args.emit_dot {
        std::fs::write(path, coupling_dot(result.coupling()))?;
    }

    let mut fields: Vec<(&'static str, Json)> = vec![
        ("p", Json::Raw(f64::json_token(&args.p))),
        ("value", value_token(result.cost(), args.p)?),
        ("cost", token(result.cost())),
        (
            "dropped_mass",
            Json::Arr(vec![token(&dropped_a), token(&dropped_b)]),
        ),
    ];
    if with_coupling {
        fields.push(("edges", edges_json(result.coupling())));
    }
    if args.certify {
        let certificate = kr_dual(&mu, &nu)?;
        fields.push(("gap", token(certificate.gap())));
    }

    match args.input.format {
        Format::Json => Ok(render_json(&Json::Obj(fields))),
        Format::Csv => {
            if with_coupling {
                edges_csv(result.coupling())
            } else {
                fields_csv(&fields)
            }
        }
    }
}

fn cmd_dual<S: Scalar>(args: &DualArgs) -> Result<String> {
    let instance: Instance<S> = load(&args.input)?;
    let name_a = measure_name(&args.a, &args.input, 0)?;
    let name_b = measure_name(&args.b, &args.input, 1)?;
    let (mu, _) = instance.measure(&name_a)?;
    let (nu, _) = instance.measure(&name_b)?;

    let certificate: DualCertificate<S> = match instance.pair_cost()? {
        Some(h) => mk_dual(&h, &mu, &nu)?,
        None => kr_dual(&mu, &nu)?,
    };

    let potential = |map: &std::collections::BTreeMap<crate::metric_pair::PointId, S>| {
        Json::Arr(
            map.iter()
                .map(|(x, v)| Json::Arr(vec![Json::Raw(x.0.to_string()), token(v)]))
                .collect(),
        )
    };
    let fields = vec![
        ("value", token(certificate.value())),
        ("gap", token(certificate.gap())),
        ("potential_f", potential(certificate.potential_f())),
        (
            "potential_g",
            match certificate.potential_g() {
                Some(g) => potential(g),
                None => Json::Null,
            },
        ),
    ];
    match args.input.format {
        Format::Json => Ok(render_json(&Json::Obj(fields))),
        Format::Csv => fields_csv(&fields),
    }
}

fn cmd_norm<S: Scalar>(args: &NormArgs) -> Result<String> {
    let instance: Instance<S> = load(&args.input)?;
    let name = measure_name(&args.measure, &args.input, 0)?;
    let (sigma, _) = instance.signed_measure(&name)?;

    let kr = kr_norm(&sigma)?;
    let op = op_norm(&sigma)?;
    let gap = (kr.clone() - op.clone()).abs();
    let fields = vec![
        ("kr_norm", token(&kr)),
        ("op_norm", token(&op)),
        ("gap", token(&gap)),
    ];
    match args.input.format {
        Format::Json => Ok(render_json(&Json::Obj(fields))),
        Format::Csv => fields_csv(&fields),
    }
}

fn cmd_lattice<S: Scalar>(args: &LatticeArgs) -> Result<String> {
    let instance: Instance<S> = load(&args.input)?;
    let name = |index: usize| measure_name(&args.names.get(index).cloned(), &args.input, index);

    let fields: Vec<(&'static str, Json)> = match args.op.as_str() {
        "sup" | "inf" | "residual" => {
            let (a, dropped_a) = instance.measure(&name(0)?)?;
            let (b, dropped_b) = instance.measure(&name(1)?)?;
            let result = match args.op.as_str() {
                "sup" => a.sup(&b)?,
                "inf" => a.inf(&b)?,
                _ => a.residual(&b)?,
            };
            vec![
                ("measure", measure_json(&result)),
                (
                    "dropped_mass",
                    Json::Arr(vec![token(&dropped_a), token(&dropped_b)]),
                ),
            ]
        }
        "jordan" => {
            let (sigma, dropped) = instance.signed_measure(&name(0)?)?;
            let (plus, minus) = sigma.jordan();
            vec![
                ("plus", measure_json(&plus)),
                ("minus", measure_json(&minus)),
                ("dropped_mass", token(&dropped)),
            ]
        }
        "truncate" => {
            let (m, dropped) = instance.measure(&name(0)?)?;
            let lo = S::parse_decimal(&args.lo)?;
            let result = match &args.hi {
                Some(hi) => m.band(&lo, &S::parse_decimal(hi)?)?,
                None => m.truncate_lower(&lo)?,
            };
            vec![
                ("measure", measure_json(&result)),
                ("dropped_mass", token(&dropped)),
            ]
        }
        other => {
            return Err(Error::Parse {
                reason: format!(
                    "unknown lattice operation {other:?} (expected sup, inf, residual, jordan, or truncate)"
                ),
            })
        }
    };
    match args.input.format {
        Format::Json => Ok(render_json(&Json::Obj(fields))),
        Format::Csv => lattice_csv(&fields),
    }
}

// ---------------------------------------------------------------------
// Output rendering
// ---------------------------------------------------------------------

/// A JSON value with pre-rendered number tokens, so rationals serialize
/// exactly and floats in shortest round-trip form.
enum Json {
    /// An already-rendered token (number or quoted rational).
    Raw(String),
    Str(&'static str),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
    Null,
}

fn token<S: Scalar>(s: &S) -> Json {
    Json::Raw(s.json_token())
}

/// The distance token: exact when the root exists in the scalar type, a
/// float approximation of the exact cost otherwise (rational mode with an
/// irrational root — the `cost` field stays authoritative).
fn value_token<S: Scalar>(cost: &S, p: f64) -> Result<Json> {
    match cost.root_checked(p) {
        Ok(v) => Ok(token(&v)),
        Err(Error::InexactRoot { .. }) => {
            let approx = cost.to_f64().powf(p.recip());
            Ok(Json::Raw(f64::json_token(&approx)))
        }
        Err(e) => Err(e),
    }
}

fn measure_json<S: Scalar>(m: &DiscreteMeasure<S>) -> Json {
    Json::Arr(
        m.atoms()
            .map(|(x, w)| Json::Arr(vec![Json::Raw(x.0.to_string()), token(w)]))
            .collect(),
    )
}

/// The coupling as a flat edge list, sorted by (kind, from, to) with kinds
/// in alphabetical order: direct, from_res, to_res. Reservoir endpoints
/// are `null`.
fn edges_json<S: Scalar>(coupling: &Coupling<S>) -> Json {
    let edge = |kind: &'static str, from: Json, to: Json, w: &S| {
        Json::Obj(vec![
            ("kind", Json::Str(kind)),
            ("from", from),
            ("to", to),
            ("w", token(w)),
        ])
    };
    let mut edges = Vec::new();
    for (x, y, w) in coupling.direct() {
        edges.push(edge(
            "direct",
            Json::Raw(x.0.to_string()),
            Json::Raw(y.0.to_string()),
            w,
        ));
    }
    for (y, w) in coupling.from_reservoir() {
        edges.push(edge("from_res", Json::Null, Json::Raw(y.0.to_string()), w));
    }
    for (x, w) in coupling.to_reservoir() {
        edges.push(edge("to_res", Json::Raw(x.0.to_string()), Json::Null, w));
    }
    Json::Arr(edges)
}

fn render_json(value: &Json) -> String {
    let mut out = String::new();
    render_into(value, 0, &mut out);
    out
}

fn render_into(value: &Json, indent: usize, out: &mut String) {
    match value {
        Json::Raw(tok) => out.push_str(tok),
        Json::Str(s) => {
            out.push('"');
            out.push_str(s); // fixed identifiers only; nothing to escape
            out.push('"');
        }
        Json::Null => out.push_str("null"),
        Json::Arr(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                render_into(item, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Json::Obj(fields) => {
            if fields.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, val)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                out.push('"');
                out.push_str(key);
                out.push_str("\": ");
                render_into(val, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

/// CSV fallback for scalar outputs: `field,value` records. Nested arrays
/// are flattened with dotted indices.
fn fields_csv(fields: &[(&'static str, Json)]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["field", "value"])
        .map_err(csv_error)?;
    for (key, value) in fields {
        write_csv_field(&mut writer, key, value)?;
    }
    finish_csv(writer)
}

fn write_csv_field(
    writer: &mut csv::Writer<Vec<u8>>,
    key: &str,
    value: &Json,
) -> Result<()> {
    match value {
        Json::Raw(tok) => writer
            .write_record([key, tok.trim_matches('"')])
            .map_err(csv_error)?,
        Json::Str(s) => writer.write_record([key, s]).map_err(csv_error)?,
        Json::Null => writer.write_record([key, ""]).map_err(csv_error)?,
        Json::Arr(items) => {
            for (i, item) in items.iter().enumerate() {
                write_csv_field(writer, &format!("{key}.{i}"), item)?;
            }
        }
        Json::Obj(fields) => {
            for (k, v) in fields {
                write_csv_field(writer, &format!("{key}.{k}"), v)?;
            }
        }
    }
    Ok(())
}

/// CSV edges table for the coupling command: `kind,from,to,w` records with
/// empty cells for the reservoir.
fn edges_csv<S: Scalar>(coupling: &Coupling<S>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["kind", "from", "to", "w"])
        .map_err(csv_error)?;
    for (x, y, w) in coupling.direct() {
        writer
            .write_record(["direct", &x.0.to_string(), &y.0.to_string(), &csv_number(w)])
            .map_err(csv_error)?;
    }
    for (y, w) in coupling.from_reservoir() {
        writer
            .write_record(["from_res", "", &y.0.to_string(), &csv_number(w)])
            .map_err(csv_error)?;
    }
    for (x, w) in coupling.to_reservoir() {
        writer
            .write_record(["to_res", &x.0.to_string(), "", &csv_number(w)])
            .map_err(csv_error)?;
    }
    finish_csv(writer)
}

/// CSV measures for the lattice command: `part,point,weight` records.
fn lattice_csv(fields: &[(&'static str, Json)]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["part", "point", "weight"])
        .map_err(csv_error)?;
    for (key, value) in fields {
        if let Json::Arr(atoms) = value {
            for atom in atoms {
                if let Json::Arr(pair) = atom {
                    if let [Json::Raw(idx), Json::Raw(w)] = pair.as_slice() {
                        writer
                            .write_record([*key, idx, w.trim_matches('"')])
                            .map_err(csv_error)?;
                    }
                }
            }
        }
    }
    finish_csv(writer)
}

fn csv_number<S: Scalar>(w: &S) -> String {
    w.json_token().trim_matches('"').to_string()
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse {
        reason: format!("csv output: {e}"),
    }
}

fn finish_csv(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer.into_inner().map_err(|e| Error::Parse {
        reason: format!("csv output: {e}"),
    })?;
    String::from_utf8(bytes).map_err(|e| Error::Parse {
        reason: format!("csv output: {e}"),
    })
}

/// The optimal coupling as a Graphviz digraph: one node per support point,
/// a doubled node for the reservoir, one labeled edge per flow.
fn coupling_dot<S: Scalar>(coupling: &Coupling<S>) -> String {
    use std::collections::BTreeSet;
    let mut nodes: BTreeSet<usize> = BTreeSet::new();
    for (x, y, _) in coupling.direct() {
        nodes.insert(x.0);
        nodes.insert(y.0);
    }
    for (y, _) in coupling.from_reservoir() {
        nodes.insert(y.0);
    }
    for (x, _) in coupling.to_reservoir() {
        nodes.insert(x.0);
    }

    let mut out = String::from("digraph coupling {\n  rankdir=LR;\n");
    out.push_str("  res [label=\"reservoir\", shape=doublecircle];\n");
    for n in &nodes {
        out.push_str(&format!("  p{n} [label=\"{n}\", shape=circle];\n"));
    }
    for (x, y, w) in coupling.direct() {
        out.push_str(&format!("  p{} -> p{} [label=\"{w}\"];\n", x.0, y.0));
    }
    for (y, w) in coupling.from_reservoir() {
        out.push_str(&format!("  res -> p{} [label=\"{w}\"];\n", y.0));
    }
    for (x, w) in coupling.to_reservoir() {
        out.push_str(&format!("  p{} -> res [label=\"{w}\"];\n", x.0));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_pair::PointId;
    use crate::solver::line_pair;

    #[test]
    fn json_rendering_is_stable() {
        let doc = Json::Obj(vec![
            ("p", Json::Raw("1.0".into())),
            ("value", Json::Raw("2.0".into())),
            ("list", Json::Arr(vec![Json::Raw("1".into()), Json::Null])),
        ]);
        let text = render_json(&doc);
        assert_eq!(
            text,
            "{\n  \"p\": 1.0,\n  \"value\": 2.0,\n  \"list\": [\n    1,\n    null\n  ]\n}"
        );
    }

    #[test]
    fn edges_are_sorted_by_kind_then_endpoints() {
        let pair = line_pair(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let coupling = Coupling::new(
            &pair,
            &[
                (PointId(1), PointId(3), 0.5),
                (PointId(0), PointId(2), 0.5),
            ],
            &[(PointId(1), 0.25)],
            &[(PointId(2), 0.25)],
        )
        .unwrap();
        let rendered = render_json(&edges_json(&coupling));
        let direct_pos = rendered.find("\"direct\"").unwrap();
        let from_pos = rendered.find("\"from_res\"").unwrap();
        let to_pos = rendered.find("\"to_res\"").unwrap();
        assert!(direct_pos < from_pos && from_pos < to_pos);
        // Within the direct block the (0, 2) edge precedes (1, 3).
        let first_direct = rendered.find("\"from\": 0").unwrap();
        let second_direct = rendered.find("\"from\": 1").unwrap();
        assert!(first_direct < second_direct);
    }

    #[test]
    fn dot_output_names_every_flow() {
        let pair = line_pair(&[1.0, 2.0]).unwrap();
        let coupling = Coupling::new(
            &pair,
            &[(PointId(0), PointId(1), 1.0)],
            &[(PointId(0), 0.5)],
            &[],
        )
        .unwrap();
        let dot = coupling_dot(&coupling);
        assert!(dot.contains("p0 -> p1"));
        assert!(dot.contains("p0 -> res"));
        assert!(dot.starts_with("digraph coupling {"));
    }

    #[test]
    fn csv_fields_flatten_nested_values() {
        let fields = vec![
            ("value", Json::Raw("2.0".into())),
            (
                "dropped_mass",
                Json::Arr(vec![Json::Raw("0.0".into()), Json::Raw("1.0".into())]),
            ),
        ];
        let text = fields_csv(&fields).unwrap();
        assert!(text.contains("value,2.0"));
        assert!(text.contains("dropped_mass.0,0.0"));
        assert!(text.contains("dropped_mass.1,1.0"));
    }
}
