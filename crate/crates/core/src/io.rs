//! JSON formats for polygraphs, cells and maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::compose::{compose_many, identity};
use crate::error::{Error, Result};
use crate::expr::cell_to_expr;
use crate::functor::PolyMap;
use crate::model::{
    build_polygraph, eval_context, Body, BoundarySpec, Cell, Context, Name, Polygraph,
    RawGenerator, RawPolygraph, Whisker,
};
use crate::polyplex::PolyplexLifting;
use crate::presheaf::{Plex, PlexTable};
use crate::support::supp;

pub fn polygraph_from_json(text: &str) -> Result<Polygraph> {
    let raw: RawPolygraph = serde_json::from_str(text)?;
    build_polygraph(&raw)
}

pub fn polygraph_to_raw(p: &Polygraph) -> RawPolygraph {
    let generators = p
        .generators()
        .map(|g| RawGenerator {
            name: g.name().to_string(),
            dim: g.dim(),
            src: g
                .src()
                .map(|c| BoundarySpec::Text(cell_to_expr(c, Some(p)).to_string())),
            tgt: g
                .tgt()
                .map(|c| BoundarySpec::Text(cell_to_expr(c, Some(p)).to_string())),
        })
        .collect();
    let dim = match (p.declared_dim(), p.top_dim()) {
        (Some(d), Some(t)) if d > t => Some(d),
        (Some(d), None) => Some(d),
        _ => None,
    };
    RawPolygraph { generators, dim }
}

pub fn polygraph_to_json(p: &Polygraph) -> Value {
    serde_json::to_value(polygraph_to_raw(p)).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhiskerJson {
    pub left: CellJson,
    pub right: CellJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub generator: String,
    pub context: Vec<WhiskerJson>,
}

/// Normal form as JSON: exactly one of `point`, `identity`, `whiskers` is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Box<CellJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub whiskers: Option<Vec<EntryJson>>,
}

pub fn cell_to_json(u: &Cell) -> CellJson {
    let mut out = CellJson {
        dim: u.dim(),
        point: None,
        identity: None,
        whiskers: None,
    };
    match u.body() {
        Body::Point(g) => out.point = Some(g.name().to_string()),
        Body::Identity(b) => out.identity = Some(Box::new(cell_to_json(b))),
        Body::Whiskers(es) => {
            out.whiskers = Some(
                es.iter()
                    .map(|e| EntryJson {
                        generator: e.generator.name().to_string(),
                        context: e
                            .context
                            .levels
                            .iter()
                            .map(|w| WhiskerJson {
                                left: cell_to_json(&w.left),
                                right: cell_to_json(&w.right),
                            })
                            .collect(),
                    })
                    .collect(),
            )
        }
    }
    out
}

/// Reads a cell over `p`, checking every composition on the way.
pub fn cell_from_json(p: &Polygraph, j: &CellJson) -> Result<Cell> {
    let cell = match (&j.point, &j.identity, &j.whiskers) {
        (Some(name), None, None) => p.lookup(name, Some(0))?.cell(),
        (None, Some(b), None) => identity(&cell_from_json(p, b)?),
        (None, None, Some(es)) if !es.is_empty() => {
            let mut parts = Vec::with_capacity(es.len());
            for e in es {
                let g = p.lookup(&e.generator, Some(j.dim))?;
                let mut levels = Vec::with_capacity(e.context.len());
                for w in &e.context {
                    levels.push(Whisker {
                        left: cell_from_json(p, &w.left)?,
                        right: cell_from_json(p, &w.right)?,
                    });
                }
                parts.push(eval_context(&Context { levels }, &g.cell())?);
            }
            compose_many(&parts, j.dim - 1)?
        }
        _ => {
            return Err(Error::Input(
                "a cell needs exactly one of point, identity or a nonempty whiskers list".into(),
            ))
        }
    };
    if cell.dim() != j.dim {
        return Err(Error::Input(format!(
            "cell declares dimension {} but has dimension {}",
            j.dim,
            cell.dim()
        )));
    }
    Ok(cell)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyMapJson {
    pub src: RawPolygraph,
    pub tgt: RawPolygraph,
    pub map: BTreeMap<String, BTreeMap<String, String>>,
}

pub fn polymap_from_value(j: PolyMapJson) -> Result<PolyMap> {
    let src = Arc::new(build_polygraph(&j.src)?);
    let tgt = Arc::new(build_polygraph(&j.tgt)?);
    let mut assign = Vec::new();
    for (d, table) in j.map {
        let d: usize = d
            .parse()
            .map_err(|_| Error::Input(format!("map key {d:?} is not a dimension")))?;
        while assign.len() <= d {
            assign.push(BTreeMap::new());
        }
        for (a, b) in table {
            assign[d].insert(a.as_str().into(), b.as_str().into());
        }
    }
    PolyMap::new(src, tgt, assign)
}

pub fn polymap_from_json(text: &str) -> Result<PolyMap> {
    polymap_from_value(serde_json::from_str(text)?)
}

pub fn polymap_to_json(f: &PolyMap) -> Value {
    let mut map = serde_json::Map::new();
    for (d, table) in f.assign.iter().enumerate() {
        if table.is_empty() {
            continue;
        }
        let t: serde_json::Map<String, Value> = table
            .iter()
            .map(|(a, b)| (a.to_string(), Value::String(b.to_string())))
            .collect();
        map.insert(d.to_string(), Value::Object(t));
    }
    json!({
        "src": polygraph_to_json(&f.src),
        "tgt": polygraph_to_json(&f.tgt),
        "map": map,
    })
}

/// `{"cell": …, "expr": …}` for a cell of `p`.
pub fn cell_envelope(p: &Polygraph, u: &Cell) -> Value {
    json!({
        "cell": cell_to_json(u),
        "expr": cell_to_expr(u, Some(p)).to_string(),
    })
}

/// `{"support": [{"dim", "name"}, …]}`, sorted by dimension then name.
pub fn support_to_json(p: &Polygraph, u: &Cell) -> Value {
    let s: Vec<Value> = supp(p, u)
        .into_iter()
        .map(|(d, n)| json!({"dim": d, "name": n.to_string()}))
        .collect();
    json!({ "support": s })
}

pub fn lifting_to_json(l: &PolyplexLifting) -> Value {
    json!({
        "shape": polygraph_to_json(&l.shape.pol),
        "cell": cell_to_expr(&l.shape.cell, Some(&l.shape.pol)).to_string(),
        "map": polymap_to_json(&l.map),
    })
}

/// `{"measure": {name: count}}`; names shared across dimensions get an
/// `@dim` suffix.
pub fn measure_to_json(p: &Polygraph, m: &BTreeMap<(usize, Name), usize>) -> Value {
    let out: BTreeMap<String, usize> = m
        .iter()
        .map(|((d, n), c)| {
            let key = if p.is_ambiguous(n) {
                format!("{n}@{d}")
            } else {
                n.to_string()
            };
            (key, *c)
        })
        .collect();
    json!({ "measure": out })
}

/// `[{"plex": …, "cell": …}]` for the plexes of dimension `dim`.
pub fn plexes_to_json(table: &PlexTable, dim: usize) -> Value {
    Value::Array(table.of_dim(dim).map(plex_to_json).collect())
}

pub fn plex_to_json(u: &Plex) -> Value {
    json!({
        "plex": polygraph_to_json(&u.shape.pol),
        "cell": cell_to_expr(&u.shape.cell, Some(&u.shape.pol)).to_string(),
    })
}
