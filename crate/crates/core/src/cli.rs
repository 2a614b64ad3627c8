//! The `precat` command line: every subcommand reads JSON or expression
//! text and writes one JSON document (or DOT) to stdout.

use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::compose::compose;
use crate::error::{Error, Result};
use crate::expr::{cell_to_expr, eval, parse, Expr, ExprJson};
use crate::functor::conduche_factorize;
use crate::io::{
    cell_envelope, lifting_to_json, measure_to_json, plex_to_json, plexes_to_json,
    polygraph_to_json, polymap_from_json, polymap_to_json, support_to_json,
};
use crate::model::{boundary, validate_polygraph, Body, Cell, Element, Polygraph, RawPolygraph, Sign};
use crate::oracle;
use crate::polyplex::{polyplex_lift, polyplex_measure};
use crate::presheaf::{enumerate_plexes, hom_set, makkai_check};
use crate::support::restrict;

const DEFAULT_MAX_DIM: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "precat", version, about = "Cells, normal forms and shapes for precategories presented by polygraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a polygraph and list every problem found
    Validate { polygraph: String },
    /// Normal form of an expression
    Normalize {
        polygraph: String,
        expr: String,
        /// Use the rewriting normalizer instead of composition
        #[arg(long)]
        oracle: bool,
    },
    /// Compose two cells along dimension I
    Compose {
        polygraph: String,
        left: String,
        i: usize,
        right: String,
    },
    /// Iterated source or target
    Boundary {
        polygraph: String,
        expr: String,
        /// `-` or `src` for sources, `+` or `tgt` for targets
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
        #[arg(long)]
        dim: usize,
    },
    /// Generators a cell depends on
    Support { polygraph: String, expr: String },
    /// Restrict a polygraph to the support of a cell
    Restrict { polygraph: String, expr: String },
    /// Lift a splitting of an image cell along a map of polygraphs
    Conduche {
        map: String,
        u: String,
        v1: String,
        v2: String,
        #[arg(long)]
        dim: usize,
    },
    /// Universal shape of a cell
    Polyplex { polygraph: String, expr: String },
    /// Polyplex measure of a cell
    Measure { polygraph: String, expr: String },
    /// Plexes of a given dimension up to a weight
    Plexes {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        weight: usize,
    },
    /// Hom-sets from plexes into a polygraph
    Presheaf {
        polygraph: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        weight: usize,
    },
    /// Check that generators match plexes with unique morphisms
    Makkai {
        #[arg(long)]
        input: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        weight: Option<usize>,
    },
    /// DOT rendering of the generators
    Dot { polygraph: String },
    /// Compare composition with rewriting on seeded random expressions
    Oracle {
        polygraph: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 12)]
        walk: usize,
    },
}

/// Runs one invocation; returns the exit code and the text for stdout.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let max_dim = std::env::var("PRECAT_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM);
    match dispatch(cli.command, max_dim) {
        Ok(Output::Json(v)) => (0, pretty(&v)),
        Ok(Output::Text(s)) => (0, s),
        Err(e) => {
            let code = if e.is_input_error() { 2 } else { 1 };
            let v = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            (code, pretty(&v))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

enum Output {
    Json(Value),
    Text(String),
}

fn read(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Input(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))
    }
}

fn load(path: &str, max_dim: usize) -> Result<Arc<Polygraph>> {
    let raw: RawPolygraph = serde_json::from_str(&read(path)?)?;
    let p = crate::model::build_polygraph(&raw)?;
    check_dim(p.top_dim().unwrap_or(0), max_dim)?;
    Ok(Arc::new(p))
}

fn check_dim(d: usize, max_dim: usize) -> Result<()> {
    if d > max_dim {
        return Err(Error::Bounds(format!(
            "dimension {d} exceeds PRECAT_MAX_DIM = {max_dim}"
        )));
    }
    Ok(())
}

/// Expression text, or its JSON form when the argument starts with `{`.
fn expr_arg(text: &str) -> Result<Expr> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str::<ExprJson>(text)?.to_expr()
    } else {
        parse(text)
    }
}

fn cell_arg(p: &Polygraph, text: &str) -> Result<Cell> {
    eval(p, &expr_arg(text)?)
}

fn dispatch(cmd: Command, max_dim: usize) -> Result<Output> {
    Ok(Output::Json(match cmd {
        Command::Validate { polygraph } => {
            let raw: RawPolygraph = serde_json::from_str(&read(&polygraph)?)?;
            let r = validate_polygraph(&raw);
            json!({"ok": r.is_ok(), "errors": r.errors, "warnings": r.warnings})
        }
        Command::Normalize {
            polygraph,
            expr,
            oracle: use_oracle,
        } => {
            let p = load(&polygraph, max_dim)?;
            let e = expr_arg(&expr)?;
            let u = if use_oracle {
                oracle::normalize_expr(&p, &e)?
            } else {
                eval(&p, &e)?
            };
            cell_envelope(&p, &u)
        }
        Command::Compose {
            polygraph,
            left,
            i,
            right,
        } => {
            let p = load(&polygraph, max_dim)?;
            let u = compose(&cell_arg(&p, &left)?, i, &cell_arg(&p, &right)?)?;
            cell_envelope(&p, &u)
        }
        Command::Boundary {
            polygraph,
            expr,
            sign,
            dim,
        } => {
            let p = load(&polygraph, max_dim)?;
            let s = Sign::parse(&sign)
                .ok_or_else(|| Error::Input(format!("unknown sign {sign:?}; use - or +")))?;
            let u = boundary(&cell_arg(&p, &expr)?, s, dim)?;
            cell_envelope(&p, &u)
        }
        Command::Support { polygraph, expr } => {
            let p = load(&polygraph, max_dim)?;
            let u = cell_arg(&p, &expr)?;
            support_to_json(&p, &u)
        }
        Command::Restrict { polygraph, expr } => {
            let p = load(&polygraph, max_dim)?;
            let u = cell_arg(&p, &expr)?;
            let (sub, inc, v) = restrict(&p, &u)?;
            json!({
                "polygraph": polygraph_to_json(&sub),
                "inclusion": polymap_to_json(&inc),
                "cell": cell_to_expr(&v, Some(&sub)).to_string(),
            })
        }
        Command::Conduche { map, u, v1, v2, dim } => {
            let f = polymap_from_json(&read(&map)?)?;
            let u = cell_arg(&f.src, &u)?;
            let v1 = cell_arg(&f.tgt, &v1)?;
            let v2 = cell_arg(&f.tgt, &v2)?;
            let (u1, u2) = conduche_factorize(&f, &u, &v1, &v2, dim)?;
            json!({
                "u1": cell_to_expr(&u1, Some(&f.src)).to_string(),
                "u2": cell_to_expr(&u2, Some(&f.src)).to_string(),
            })
        }
        Command::Polyplex { polygraph, expr } => {
            let p = load(&polygraph, max_dim)?;
            let u = cell_arg(&p, &expr)?;
            lifting_to_json(&polyplex_lift(&Element::new(p, u)?)?)
        }
        Command::Measure { polygraph, expr } => {
            let p = load(&polygraph, max_dim)?;
            let u = cell_arg(&p, &expr)?;
            let m = polyplex_measure(&Element::new(p.clone(), u)?)?;
            measure_to_json(&p, &m)
        }
        Command::Plexes { dim, weight } => {
            check_dim(dim, max_dim)?;
            plexes_to_json(&enumerate_plexes(dim, weight)?, dim)
        }
        Command::Presheaf {
            polygraph,
            dim,
            weight,
        } => {
            check_dim(dim, max_dim)?;
            let p = load(&polygraph, max_dim)?;
            let table = enumerate_plexes(dim, weight)?;
            let out: Vec<Value> = table
                .plexes
                .iter()
                .map(|u| {
                    let homs: Vec<Value> = hom_set(u, &p)
                        .iter()
                        .map(|f| json!(polymap_to_json(f)["map"]))
                        .collect();
                    let mut v = plex_to_json(u);
                    v["morphisms"] = Value::Array(homs);
                    v
                })
                .collect();
            Value::Array(out)
        }
        Command::Makkai { input, dim, weight } => {
            let p = load(&input, max_dim)?;
            let bounds = match (dim, weight) {
                (None, None) => None,
                (d, w) => {
                    let r = makkai_check(&p, None)?;
                    Some((d.unwrap_or(r.dim_bound), w.unwrap_or(r.weight_bound)))
                }
            };
            serde_json::to_value(makkai_check(&p, bounds)?).expect("serializable")
        }
        Command::Dot { polygraph } => {
            let p = load(&polygraph, max_dim)?;
            return Ok(Output::Text(dot(&p)));
        }
        Command::Oracle {
            polygraph,
            seed,
            count,
            walk,
        } => {
            let p = load(&polygraph, max_dim)?;
            let mut agree = 0u64;
            let mut failures = Vec::new();
            for s in seed..seed + count {
                let (a, b) = oracle::random_equal_pair(&p, s, walk)?;
                let na = oracle::normalize_expr(&p, &a)?;
                let nb = oracle::normalize_expr(&p, &b)?;
                let direct = eval(&p, &a)?;
                if na == nb && na == direct {
                    agree += 1;
                } else {
                    failures.push(json!({"seed": s, "left": a.to_string(), "right": b.to_string()}));
                }
            }
            json!({"pairs": count, "agreements": agree, "failures": failures})
        }
    }))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Points become nodes and 1-generators edges; higher generators become
/// boxes linked to the generators of their source and target.
pub fn dot(p: &Polygraph) -> String {
    let id = |d: usize, n: &str| quote(&format!("{d}:{n}"));
    let mut out = String::from("digraph polygraph {\n");
    for g in p.table(0) {
        out.push_str(&format!("  {} [label={}];\n", id(0, g.name()), quote(g.name())));
    }
    for g in p.table(1) {
        let s = point_name(g.src().unwrap());
        let t = point_name(g.tgt().unwrap());
        out.push_str(&format!(
            "  {} -> {} [label={}];\n",
            id(0, &s),
            id(0, &t),
            quote(g.name())
        ));
    }
    for d in 2..=p.top_dim().unwrap_or(0) {
        for g in p.table(d) {
            out.push_str(&format!(
                "  {} [shape=box,label={}];\n",
                id(d, g.name()),
                quote(g.name())
            ));
            for (sign, style) in [(Sign::Source, "dashed"), (Sign::Target, "solid")] {
                let mut seen = std::collections::BTreeSet::new();
                g.face(sign).unwrap().for_each_generator(&mut |h| {
                    if h.dim() == d - 1 && seen.insert(h.name().clone()) {
                        let from = if h.dim() == 1 {
                            // 1-generators are edges, so point at their source node
                            id(0, &point_name(h.src().unwrap()))
                        } else {
                            id(h.dim(), h.name())
                        };
                        let (a, b) = match sign {
                            Sign::Source => (from, id(d, g.name())),
                            Sign::Target => (id(d, g.name()), from),
                        };
                        out.push_str(&format!(
                            "  {a} -> {b} [style={style},label={}];\n",
                            quote(h.name())
                        ));
                    }
                });
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Name of the generator of a 0-cell.
fn point_name(u: &Cell) -> String {
    match u.body() {
        Body::Point(g) => g.name().to_string(),
        _ => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn ok(args: &[&str]) -> Value {
        let (code, out) = run(std::iter::once("precat").chain(args.iter().copied()));
        assert_eq!(code, 0, "{out}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn normalize_interchange() {
        let v = ok(&[
            "normalize",
            &fixture("fix_int.json"),
            "comp_1(comp_0(gen phi,gen g),comp_0(gen f',gen psi))",
        ]);
        assert_eq!(v["cell"]["whiskers"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn illegal_composition_exits_one() {
        let (code, out) = run([
            "precat",
            "normalize",
            &fixture("fix_int.json"),
            "comp_0(gen phi,gen psi)",
        ]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            v["error"]["message"],
            "illegal composition: no ∘_0 of two 2-cells"
        );
    }

    #[test]
    fn parse_errors_exit_two() {
        let (code, _) = run(["precat", "normalize", &fixture("fix_int.json"), "comp_0(gen phi)"]);
        assert_eq!(code, 2);
        let (code, _) = run(["precat", "validate", "/nonexistent.json"]);
        assert_eq!(code, 2);
        let (code, _) = run(["precat", "frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn plexes_of_dimension_one() {
        let v = ok(&["plexes", "--dim", "1", "--weight", "10"]);
        assert_eq!(v.as_array().unwrap().len(), 1);
    }

    #[test]
    fn boundary_accepts_minus_sign() {
        let v = ok(&["boundary", &fixture("fix_int.json"), "gen phi", "--sign", "-", "--dim", "1"]);
        assert_eq!(v["expr"], "gen f");
    }

    #[test]
    fn support_and_measure() {
        let v = ok(&["support", &fixture("fix_int.json"), "comp_0(gen f, gen g)"]);
        assert_eq!(v["support"].as_array().unwrap().len(), 5);
        let v = ok(&["measure", &fixture("loop.json"), "comp_1(gen gamma, gen gamma)"]);
        assert_eq!(v["measure"]["gamma"], 2);
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["precat", "polyplex", &fixture("fix_int.json"), "comp_0(gen phi, gen g)"];
        assert_eq!(run(args), run(args));
    }

    #[test]
    fn dot_lists_edges() {
        let (code, out) = run(["precat", "dot", &fixture("fix_int.json")]);
        assert_eq!(code, 0);
        assert!(out.contains("\"0:x\" -> \"0:y\" [label=\"f\"]"));
    }
}
