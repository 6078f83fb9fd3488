//! Text and JSON rendering of results.

use serde_json::{json, Value};
use thetastab::ratpoly::{format_rational, HilbertStats, NuValue};
use thetastab::sheafmodel::{SubobjectLattice, UnweightedFiltration, WeightedFiltration};

pub fn nu_text(v: &NuValue) -> String {
    let mut approx = String::new();
    for (k, (e, c)) in v.approx_coefficients().iter().enumerate() {
        let sign = match (k, *c < 0.0) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        let a = c.abs();
        let term = match e {
            0 => format!("{a:.6}"),
            1 => format!("{a:.6}n"),
            _ => format!("{a:.6}n^{e}"),
        };
        approx.push_str(sign);
        approx.push_str(&term);
    }
    if approx.is_empty() {
        approx.push('0');
    }
    format!(
        "L = {}, b = {}  (~ {} approx.)",
        v.numerator(),
        format_rational(v.norm_sq()),
        approx
    )
}

pub fn nu_json(v: &NuValue) -> Value {
    let approx: Vec<Value> = v
        .approx_coefficients()
        .iter()
        .map(|(e, c)| json!({"exponent": e, "coefficient": format!("{c:.6}")}))
        .collect();
    json!({
        "numerator": v.numerator().to_string(),
        "norm_sq": format_rational(v.norm_sq()),
        "approximate_coefficients": approx,
    })
}

pub fn stats_json(s: &HilbertStats) -> Value {
    json!({
        "hilbert": s.poly().to_string(),
        "rank": format_rational(s.rank()),
        "reduced": s.reduced().to_string(),
        "slopes": s.slopes().iter().map(format_rational).collect::<Vec<_>>(),
    })
}

pub fn chain_text(f: &UnweightedFiltration) -> String {
    f.labels().join(" > ")
}

pub fn filtration_json(f: &WeightedFiltration) -> Value {
    json!({
        "chain": f.base().labels(),
        "weights": f.weights(),
    })
}

pub fn filtration_text(f: &WeightedFiltration) -> String {
    let w: Vec<String> = f.weights().iter().map(i64::to_string).collect();
    format!("{}  weights ({})", chain_text(f.base()), w.join(", "))
}

pub fn gradeds_text(f: &UnweightedFiltration) -> Vec<String> {
    f.gradeds()
        .iter()
        .enumerate()
        .map(|(k, g)| {
            format!(
                "  gr_{k} = {}/{}: P = {}, rank {}, pbar = {}",
                f.lattice().label(f.chain()[k]),
                f.lattice().label(f.below(k)),
                g.poly(),
                format_rational(g.rank()),
                g.reduced()
            )
        })
        .collect()
}

pub fn label(lat: &SubobjectLattice, id: thetastab::sheafmodel::MemberId) -> String {
    lat.label(id).to_string()
}

/// Graded pieces `(quotient label, Hilbert polynomial, weight)`, deepest first.
fn pieces(f: &WeightedFiltration) -> Vec<(String, String, i64)> {
    let base = f.base();
    let lat = base.lattice();
    (0..f.steps())
        .rev()
        .map(|k| {
            let q = format!("{}/{}", lat.label(base.chain()[k]), lat.label(base.below(k)));
            (q, base.graded(k).poly().to_string(), f.weights()[k])
        })
        .collect()
}

pub fn pieces_text(f: &WeightedFiltration) -> String {
    let parts: Vec<String> = pieces(f).into_iter().map(|(q, p, w)| format!("{q} [{p}] weight {w}")).collect();
    format!("graded pieces, deepest first: {}", parts.join("; "))
}

pub fn pieces_json(f: &WeightedFiltration) -> Value {
    pieces(f)
        .into_iter()
        .map(|(q, p, w)| json!({"quotient": q, "hilbert": p, "weight": w}))
        .collect()
}
