//! `thetastab` command-line tool.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on unreadable input.

mod render;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thetastab::canonical::{canonical_filtration, hn_filtration, is_semistable, leading_term};
use thetastab::invariant::{b_norm, nu_delta, polytope, weight_graded};
use thetastab::oracle::{brute_force_max, brute_force_rows};
use thetastab::pairs::{pair_canonical, pair_semistable, sweep, PairVerdict, PairWitness};
use thetastab::ratpoly::{format_rational, RatPoly};
use thetastab::sheafmodel::{
    parse_lattice_file, LatticeDocument, ModelError, PairObject, SubobjectLattice, UnweightedFiltration,
};

use render::*;

#[derive(Parser)]
#[command(name = "thetastab", version, about = "Exact stability computations on subobject lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct Common {
    /// Lattice document (JSON).
    lattice: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Gieseker semistability of the top member.
    Check(Common),
    /// Harder–Narasimhan filtration.
    Hn(Common),
    /// Canonical maximizer of nu for an unstable object.
    Canonical(Common),
    /// nu (or nu^(delta) with --delta) of a weighted chain.
    Nu {
        #[command(flatten)]
        common: Common,
        /// Comma-separated member ids, top first.
        #[arg(long)]
        chain: String,
        /// Comma-separated strictly increasing integer weights.
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
    },
    /// Polytope of a chain for coefficient index i.
    Polytope {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        chain: String,
        /// Defaults to the leading index of the HN filtration.
        #[arg(long)]
        index: Option<u32>,
    },
    /// Pair semistability for a stability polynomial.
    PairCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
    },
    /// Destabilizing filtration of an unstable pair.
    PairCanonical {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        /// Weight bound for the exhaustive fallback and cross-check.
        #[arg(long, default_value_t = 6)]
        bound: u32,
    },
    /// Pair verdicts over a list of deltas, marking walls.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated polynomial literals.
        #[arg(long, allow_hyphen_values = true)]
        sweep_deltas: String,
    },
    /// Exhaustive search over chains and bounded weights.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        bound: u32,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        /// Respect the pair constraint of the document.
        #[arg(long)]
        pair: bool,
        /// Write every candidate to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Point at which the CSV reports decimal values.
        #[arg(long, default_value_t = 100.0)]
        n0: f64,
    },
}

enum Failure {
    Domain(String, String),
    Input(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Domain(name, msg) => write!(f, "error[{name}]: {msg}"),
            Failure::Input(msg) => write!(f, "error[Input]: {msg}"),
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Domain(e.name().to_string(), e.to_string())
            }
        }
    )*};
}
domain_from!(
    thetastab::canonical::CanonicalError,
    thetastab::invariant::InvariantError,
    thetastab::pairs::PairError
);

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Parse(msg) => Failure::Input(msg),
            e => Failure::Domain(e.name().to_string(), e.to_string()),
        }
    }
}

struct Output {
    text: Vec<String>,
    json: Value,
}

fn load(path: &PathBuf) -> Result<LatticeDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_lattice_file(&text)?)
}

fn poly_arg(s: &str) -> Result<RatPoly, Failure> {
    RatPoly::parse(s).map_err(|e| Failure::Input(format!("--delta {s:?}: {e}")))
}

fn chain_arg(lat: &Arc<SubobjectLattice>, s: &str) -> Result<UnweightedFiltration, Failure> {
    let labels: Vec<&str> = s.split(',').map(str::trim).collect();
    Ok(UnweightedFiltration::from_labels(lat, &labels)?)
}

fn weights_arg(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|w| {
            w.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Input(format!("bad weight {w:?}")))
        })
        .collect()
}

fn need_pair(doc: &LatticeDocument) -> Result<&PairObject, Failure> {
    doc.pair
        .as_ref()
        .ok_or_else(|| Failure::Domain("NoPair".into(), "document declares no pair".into()))
}

fn verdict_parts(lat: &SubobjectLattice, v: &PairVerdict) -> (String, Value) {
    let (text, j) = match &v.witness {
        None => ("semistable".to_string(), Value::Null),
        Some(PairWitness::ZeroMap) => ("unstable: zero section map".to_string(), json!({"kind": "zero_map"})),
        Some(PairWitness::NegativeDelta) => (
            "unstable: negative delta".to_string(),
            json!({"kind": "negative_delta"}),
        ),
        Some(PairWitness::Subobject { member, contains_image }) => (
            format!(
                "unstable: witness {} ({} the image)",
                lat.label(*member),
                if *contains_image { "contains" } else { "misses" }
            ),
            json!({"kind": "subobject", "member": lat.label(*member), "contains_image": contains_image}),
        ),
    };
    (text, json!({"semistable": v.semistable, "witness": j}))
}

fn run(cmd: Command) -> Result<(Format, Output), Failure> {
    match cmd {
        Command::Check(c) => {
            let doc = load(&c.lattice)?;
            let lat = &doc.lattice;
            let v = is_semistable(lat);
            let witness = v.witness.map(|m| label(lat, m));
            let text = match &witness {
                None => vec!["semistable".to_string()],
                Some(w) => vec![format!("unstable: witness {w}")],
            };
            Ok((c.format, Output { text, json: json!({"semistable": v.semistable, "witness": witness}) }))
        }
        Command::Hn(c) => {
            let doc = load(&c.lattice)?;
            let hn = hn_filtration(&doc.lattice)?;
            let mut text = vec![format!("HN: {}", chain_text(&hn.filtration))];
            text.extend(gradeds_text(&hn.filtration));
            let gr: Vec<Value> = hn.gradeds().iter().map(stats_json).collect();
            Ok((c.format, Output { text, json: json!({"chain": hn.filtration.labels(), "gradeds": gr}) }))
        }
        Command::Canonical(c) => {
            let doc = load(&c.lattice)?;
            let lt = leading_term(&hn_filtration(&doc.lattice)?)?;
            debug_assert_eq!(canonical_filtration(&doc.lattice).ok().as_ref(), Some(&lt.filtration));
            let v = nu_delta(&lt.filtration, &RatPoly::zero());
            let text = vec![
                format!("canonical: {}", filtration_text(&lt.filtration)),
                pieces_text(&lt.filtration),
                format!("leading index: {}", lt.index),
                format!("nu: {}", nu_text(&v)),
            ];
            let mut j = filtration_json(&lt.filtration);
            j["graded_pieces"] = pieces_json(&lt.filtration);
            j["leading_index"] = json!(lt.index);
            j["nu"] = nu_json(&v);
            Ok((c.format, Output { text, json: j }))
        }
        Command::Nu { common, chain, weights, delta } => {
            let doc = load(&common.lattice)?;
            let f = chain_arg(&doc.lattice, &chain)?.with_weights(weights_arg(&weights)?)?;
            let delta = delta.as_deref().map(poly_arg).transpose()?.unwrap_or_default();
            let v = nu_delta(&f, &delta);
            let b = b_norm(&f).ok();
            let text = vec![
                format!("filtration: {}", filtration_text(&f)),
                format!("weight: {}", weight_graded(&f)),
                format!("nu: {}", nu_text(&v)),
            ];
            let mut j = filtration_json(&f);
            j["delta"] = json!(delta.to_string());
            j["weight"] = json!(weight_graded(&f).to_string());
            j["b"] = json!(b.as_ref().map(format_rational));
            j["nu"] = nu_json(&v);
            Ok((common.format, Output { text, json: j }))
        }
        Command::Polytope { common, chain, index } => {
            let doc = load(&common.lattice)?;
            let f = chain_arg(&doc.lattice, &chain)?;
            let i = match index {
                Some(i) => i,
                None => leading_term(&hn_filtration(&doc.lattice)?)?.index,
            };
            let p = polytope(&f, i)?;
            let verts: Vec<(String, String)> = p
                .vertices()
                .iter()
                .map(|(x, y)| (format_rational(x), format_rational(y)))
                .collect();
            let text = vec![
                format!("index: {i}"),
                format!(
                    "vertices: {}",
                    verts.iter().map(|(x, y)| format!("({x}, {y})")).collect::<Vec<_>>().join(" ")
                ),
            ];
            Ok((common.format, Output { text, json: json!({"index": i, "vertices": verts}) }))
        }
        Command::PairCheck { common, delta } => {
            let doc = load(&common.lattice)?;
            let delta = poly_arg(&delta)?;
            let pair = need_pair(&doc)?;
            let (text, mut j) = verdict_parts(&doc.lattice, &pair_semistable(pair, &delta));
            j["delta"] = json!(delta.to_string());
            Ok((common.format, Output { text: vec![text], json: j }))
        }
        Command::PairCanonical { common, delta, bound } => {
            let doc = load(&common.lattice)?;
            let delta = poly_arg(&delta)?;
            let pair = need_pair(&doc)?;
            let pc = pair_canonical(pair, &delta, bound)?;
            let method = format!("{:?}", pc.method);
            let text = vec![
                format!("filtration: {}", filtration_text(&pc.filtration)),
                pieces_text(&pc.filtration),
                format!("nu^(delta): {}", nu_text(&pc.value)),
                format!("method: {method}"),
            ];
            let mut j = filtration_json(&pc.filtration);
            j["delta"] = json!(delta.to_string());
            j["graded_pieces"] = pieces_json(&pc.filtration);
            j["nu"] = nu_json(&pc.value);
            j["method"] = json!(method);
            Ok((common.format, Output { text, json: j }))
        }
        Command::Sweep { common, sweep_deltas } => {
            let doc = load(&common.lattice)?;
            let pair = need_pair(&doc)?;
            let deltas = sweep_deltas.split(',').map(poly_arg).collect::<Result<Vec<_>, _>>()?;
            let rows = sweep(pair, &deltas);
            let mut text = Vec::new();
            let mut js = Vec::new();
            for r in &rows {
                let (t, mut j) = verdict_parts(&doc.lattice, &r.verdict);
                let wall = if r.wall { "  <- wall" } else { "" };
                text.push(format!("delta = {}: {t}{wall}", r.delta));
                j["delta"] = json!(r.delta.to_string());
                j["wall"] = json!(r.wall);
                js.push(j);
            }
            Ok((common.format, Output { text, json: json!({"rows": js}) }))
        }
        Command::Oracle { common, bound, delta, pair, csv, n0 } => {
            let doc = load(&common.lattice)?;
            let delta = delta.as_deref().map(poly_arg).transpose()?.unwrap_or_default();
            let pair_obj = if pair { Some(need_pair(&doc)?) } else { None };
            let res = brute_force_max(&doc.lattice, pair_obj, &delta, bound);
            if let Some(path) = csv {
                let io = |e: csv::Error| Failure::Input(format!("{}: {e}", path.display()));
                let mut w = csv::Writer::from_path(&path).map_err(io)?;
                w.write_record(["chain", "weights", "numerator", "norm_sq", "value_at_n0"]).map_err(io)?;
                for row in brute_force_rows(&doc.lattice, pair_obj, &delta, bound) {
                    let ws: Vec<String> = row.weights.iter().map(i64::to_string).collect();
                    w.write_record([
                        row.chain.labels().join(" > "),
                        ws.join(" "),
                        row.value.numerator().to_string(),
                        format_rational(row.value.norm_sq()),
                        format!("{:.6}", row.value.eval_f64(n0)),
                    ])
                    .map_err(io)?;
                }
                w.flush().map_err(|e| Failure::Input(e.to_string()))?;
            }
            let mut text = vec![
                format!("explored: {}", res.explored),
                format!("max: {}", nu_text(&res.value)),
            ];
            text.push(match &res.best {
                Some(f) => format!("best: {}", filtration_text(f)),
                None => "best: none (no candidate is positive)".to_string(),
            });
            let j = json!({
                "bound": bound,
                "delta": delta.to_string(),
                "explored": res.explored,
                "value": nu_json(&res.value),
                "best": res.best.as_ref().map(filtration_json),
            });
            Ok((common.format, Output { text, json: j }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((Format::Text, out)) => {
            for line in out.text {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Ok((Format::Structured, out)) => {
            println!("{}", serde_json::to_string_pretty(&out.json).expect("json renders"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            match e {
                Failure::Domain(..) => ExitCode::from(1),
                Failure::Input(_) => ExitCode::from(2),
            }
        }
    }
}

