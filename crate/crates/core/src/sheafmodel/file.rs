//! JSON lattice documents.
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "objects": [
//!     {"id": "0", "hilbert": {}},
//!     {"id": "O(2)", "hilbert": {"1": "1", "0": "3"}},
//!     {"id": "O", "hilbert": "n + 1"},
//!     {"id": "F", "hilbert": {"1": "2", "0": "4"}}
//!   ],
//!   "relations": [],
//!   "pair": {"beta_image": "O"}
//! }
//! ```
//!
//! `hilbert` is either a map from exponent to rational coefficient or a
//! polynomial literal. `top` may name the top member explicitly.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{validate_lattice, LatticeSpec, ModelError, PairObject, SubobjectLattice};
use crate::ratpoly::{format_rational, parse_rational, RatPoly};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    dimension: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    top: Option<String>,
    objects: Vec<ObjectEntry>,
    #[serde(default)]
    relations: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pair: Option<PairEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectEntry {
    id: String,
    hilbert: HilbertEntry,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum HilbertEntry {
    Coefficients(BTreeMap<String, String>),
    Literal(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairEntry {
    beta_image: Option<String>,
}

/// A parsed and validated lattice document.
#[derive(Debug, Clone)]
pub struct LatticeDocument {
    pub lattice: Arc<SubobjectLattice>,
    /// Present when the document declares a pair.
    pub pair: Option<PairObject>,
}

fn entry_poly(id: &str, h: &HilbertEntry) -> Result<RatPoly, ModelError> {
    let wrap = |e: String| ModelError::Parse(format!("hilbert polynomial of {id:?}: {e}"));
    match h {
        HilbertEntry::Literal(s) => RatPoly::parse(s).map_err(|e| wrap(e.to_string())),
        HilbertEntry::Coefficients(map) => {
            let mut terms = Vec::with_capacity(map.len());
            for (e, c) in map {
                let e: i32 = e
                    .trim()
                    .parse()
                    .map_err(|_| wrap(format!("bad exponent {e:?}")))?;
                terms.push((e, parse_rational(c).map_err(|x| wrap(x.to_string()))?));
            }
            Ok(RatPoly::from_terms(terms))
        }
    }
}

/// Parses a JSON lattice document.
///
/// Syntax problems yield [`ModelError::Parse`]; everything else is a
/// validation error from [`validate_lattice`] or [`PairObject::new`].
pub fn parse_lattice_file(text: &str) -> Result<LatticeDocument, ModelError> {
    let raw: LatticeFile =
        serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
    let objects = raw
        .objects
        .iter()
        .map(|o| Ok((o.id.clone(), entry_poly(&o.id, &o.hilbert)?)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    let spec = LatticeSpec {
        dimension: raw.dimension,
        top: raw.top,
        objects,
        relations: raw.relations,
    };
    let lattice = Arc::new(validate_lattice(&spec)?);
    let pair = match raw.pair {
        None => None,
        Some(p) => {
            let b = p.beta_image.as_deref().map(|l| lattice.lookup(l)).transpose()?;
            Some(PairObject::new(&lattice, b)?)
        }
    };
    Ok(LatticeDocument { lattice, pair })
}

/// Serializes a lattice (and optional pair) to a deterministic JSON document.
pub fn write_lattice_file(lattice: &SubobjectLattice, pair: Option<&PairObject>) -> String {
    let spec = lattice.to_spec();
    let objects = spec
        .objects
        .iter()
        .map(|(id, p)| ObjectEntry {
            id: id.clone(),
            hilbert: HilbertEntry::Coefficients(
                p.terms()
                    .map(|(e, c)| (e.to_string(), format_rational(c)))
                    .collect(),
            ),
        })
        .collect();
    let file = LatticeFile {
        dimension: spec.dimension,
        top: spec.top,
        objects,
        relations: spec.relations,
        pair: pair.map(|p| PairEntry {
            beta_image: p.beta_image().map(|b| lattice.label(b).to_string()),
        }),
    };
    serde_json::to_string_pretty(&file).expect("lattice document serializes")
}
