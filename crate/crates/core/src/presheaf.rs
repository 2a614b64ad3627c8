//! Plexes, the shapes of single generators: enumeration from a bounded
//! fragment of the terminal polygraph, hom-sets into a polygraph, and a
//! desk-scale check that generators correspond to (plex, morphism) pairs.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functor::{enumerate_maps, enumerate_maps_with, rename, PolyMap};
use crate::model::{boundary, classify, Cell, Classification, Element, GenRef, Polygraph, Sign};
use crate::oracle::Term;
use crate::polyplex::{canonical_key, element_iso, Lifter, PolyplexLifting};
use crate::sample::cells_within;
use crate::support::is_principal;

/// Upper bound on hom-set sizes explored by the checks below.
const HOM_LIMIT: usize = 1_000_000;

/// Largest dimension for which the makkai check enumerates every plex.
const FULL_TABLE_DIM: usize = 2;

/// The truncation of the terminal polygraph to dimension `dim_bound`,
/// keeping only generators whose plex has at most `weight_bound` generators.
pub fn terminal_fragment(dim_bound: usize, weight_bound: usize) -> Result<Polygraph> {
    Ok(build_fragment(dim_bound, weight_bound)?.0)
}

fn build_fragment(dim_bound: usize, weight_bound: usize) -> Result<(Polygraph, Lifter)> {
    let mut p = Polygraph::new();
    let mut lifter = Lifter::new(Arc::new(p.clone()));
    if weight_bound == 0 {
        return Ok((p, lifter));
    }
    let star = p.add_point("*")?;
    lifter.extend_target(Arc::new(p.clone()));
    for k in 1..=dim_bound {
        let cells = {
            let snapshot = p.clone();
            let mut measure = |c: &Cell| lifter.weight(c).unwrap_or(usize::MAX);
            cells_within(&snapshot, k - 1, weight_bound, &mut measure)
        };
        let lower: Vec<&Cell> = cells.iter().filter(|c| c.dim() == k - 1).collect();
        let mut groups: BTreeMap<Option<(Cell, Cell)>, Vec<&Cell>> = BTreeMap::new();
        for c in lower {
            let key = match k {
                1 => None,
                _ => Some((
                    boundary(c, Sign::Source, k - 2)?,
                    boundary(c, Sign::Target, k - 2)?,
                )),
            };
            groups.entry(key).or_default().push(c);
        }
        let mut pairs: Vec<(Cell, Cell)> = Vec::new();
        for group in groups.values() {
            for s in group {
                for t in group {
                    if lifter.pair_weight_bound(s, t)? > weight_bound {
                        continue;
                    }
                    if lifter.pair_weight(s, t)? <= weight_bound {
                        pairs.push(((*s).clone(), (*t).clone()));
                    }
                }
            }
        }
        if pairs.is_empty() {
            break;
        }
        pairs.sort();
        let single = pairs.len() == 1 && k == 1;
        for (n, (s, t)) in pairs.into_iter().enumerate() {
            let name = if single { "e".to_string() } else { format!("c{k}_{}", n + 1) };
            p.add_generator(&name, Some((s, t)))?;
        }
        lifter.extend_target(Arc::new(p.clone()));
    }
    debug_assert!(p.contains(&star));
    Ok((p, lifter))
}

/// A plex: the shape of a generator, with its distinguished top generator.
#[derive(Debug, Clone)]
pub struct Plex {
    pub shape: Element,
    pub top: GenRef,
    pub dim: usize,
    pub weight: usize,
    pub key: String,
}

impl Plex {
    fn new(shape: Element) -> Result<Plex> {
        let top = match classify(&shape.cell) {
            Classification::IsGenerator(g) => g,
            _ => {
                return Err(Error::Internal(format!(
                    "plex cell {} is not a generator",
                    shape.cell
                )))
            }
        };
        Ok(Plex {
            dim: top.dim(),
            weight: shape.pol.num_generators(),
            key: canonical_key(&shape),
            top,
            shape,
        })
    }

    /// Number of entries of the source and target of the top generator;
    /// zero for an identity.
    pub fn boundary_lengths(&self) -> Option<(usize, usize)> {
        let len = |c: &Cell| c.entries().len();
        Some((len(self.top.src()?), len(self.top.tgt()?)))
    }
}

/// Plexes up to isomorphism, ordered by dimension, weight and canonical key.
#[derive(Debug, Clone, Default)]
pub struct PlexTable {
    pub plexes: Vec<Plex>,
    index: HashMap<String, usize>,
}

impl PlexTable {
    fn from_plexes(mut plexes: Vec<Plex>) -> PlexTable {
        plexes.sort_by(|a, b| (a.dim, a.weight, &a.key).cmp(&(b.dim, b.weight, &b.key)));
        plexes.dedup_by(|a, b| a.key == b.key);
        let index = plexes
            .iter()
            .enumerate()
            .map(|(k, p)| (p.key.clone(), k))
            .collect();
        PlexTable { plexes, index }
    }

    pub fn len(&self) -> usize {
        self.plexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plexes.is_empty()
    }

    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = &Plex> {
        self.plexes.iter().filter(move |p| p.dim == d)
    }

    /// Position of the plex isomorphic to `shape`.
    pub fn find(&self, shape: &Element) -> Option<usize> {
        self.index.get(&canonical_key(shape)).copied()
    }
}

/// One plex per generator of the terminal fragment.
pub fn enumerate_plexes(dim_bound: usize, weight_bound: usize) -> Result<PlexTable> {
    let (p, mut lifter) = build_fragment(dim_bound, weight_bound)?;
    let mut plexes = Vec::with_capacity(p.num_generators());
    for g in p.generators() {
        let l = lifter.lift_cell(&g.cell())?;
        plexes.push(Plex::new(l.shape)?);
    }
    Ok(PlexTable::from_plexes(plexes))
}

/// Morphisms from a plex into `p`.
pub fn hom_set(plex: &Plex, p: &Arc<Polygraph>) -> Vec<PolyMap> {
    enumerate_maps(&plex.shape.pol, p, HOM_LIMIT)
}

/// The part of the terminal polygraph reached by `p`, with the unique map
/// into it. A generator of the terminal polygraph in dimension `k` is a
/// parallel pair of `(k-1)`-cells, so it can be built one image at a time.
pub fn terminal_image(p: &Arc<Polygraph>) -> Result<(Arc<Polygraph>, PolyMap)> {
    let mut t = Polygraph::new();
    let mut image: HashMap<GenRef, GenRef> = HashMap::new();
    let mut by_pair: HashMap<(Cell, Cell), GenRef> = HashMap::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut memo = HashMap::new();
    for g in p.generators() {
        let h = match (g.src(), g.tgt()) {
            (Some(s), Some(tg)) => {
                let f = |x: &GenRef| image[x].clone();
                let pair = (rename(s, &f, &mut memo), rename(tg, &f, &mut memo));
                match by_pair.get(&pair) {
                    Some(h) => h.clone(),
                    None => {
                        let k = g.dim();
                        counts.resize(counts.len().max(k + 1), 0);
                        counts[k] += 1;
                        let name = match k {
                            1 => "e".to_string(),
                            _ => format!("c{k}_{}", counts[k]),
                        };
                        let h = t.add_generator(&name, Some(pair.clone()))?;
                        by_pair.insert(pair, h.clone());
                        h
                    }
                }
            }
            _ => match t.get(0, "*") {
                Some(h) => h.clone(),
                None => t.add_point("*")?,
            },
        };
        image.insert(g.clone(), h);
    }
    let t = Arc::new(t);
    let tau = PolyMap::from_pairs(p.clone(), t.clone(), &image);
    Ok((t, tau))
}

/// The presheaf of `p` on the plex table: one hom-set per plex.
pub fn realize_presheaf(p: &Arc<Polygraph>, table: &PlexTable) -> Vec<Vec<PolyMap>> {
    table.plexes.iter().map(|u| hom_set(u, p)).collect()
}

/// Restriction of `x ∈ Hom(U, P)` along `m: V → U`.
pub fn restrict_along(m: &PolyMap, x: &PolyMap) -> Result<PolyMap> {
    m.then(x)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub dim: usize,
    pub name: String,
    /// Position of the generator's plex in the table.
    pub plex: Option<usize>,
    pub plex_weight: usize,
    pub lifting: bool,
    pub morphisms: usize,
    pub isomorphic_liftings: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MakkaiReport {
    pub ok: bool,
    pub partial: bool,
    pub dim_bound: usize,
    pub weight_bound: usize,
    pub plexes: usize,
    /// Whether the plex table is complete up to the bounds, or only covers
    /// the image of the map to the terminal polygraph.
    pub full_table: bool,
    pub generators: usize,
    pub checked: usize,
    /// Sum over the plex table of the sizes of the hom-sets into the polygraph.
    pub hom_total: usize,
    /// Every checked generator is the image of the top of exactly one
    /// morphism from a plex.
    pub bijective: bool,
    pub entries: Vec<GeneratorCheck>,
    pub violations: Vec<String>,
}

/// For each generator: a plex lifting exists and its plex is in the table;
/// exactly one morphism from that plex picks the generator; two liftings
/// from different expressions are isomorphic over the generator. Then the
/// hom-sets from all plexes must account for each generator exactly once.
///
/// Bounds default to the top dimension of `p` and the largest plex weight
/// among its generators. Generators beyond explicit bounds are skipped and
/// the report is flagged partial.
pub fn makkai_check(p: &Arc<Polygraph>, bounds: Option<(usize, usize)>) -> Result<MakkaiReport> {
    let mut lifter = Lifter::new(p.clone());
    let mut lifts: Vec<(GenRef, PolyplexLifting)> = Vec::new();
    let mut violations = Vec::new();
    for g in p.generators() {
        lifts.push((g.clone(), lifter.lift_cell(&g.cell())?));
    }
    let natural = (
        p.top_dim().unwrap_or(0),
        lifts
            .iter()
            .map(|(_, l)| l.shape.pol.num_generators())
            .max()
            .unwrap_or(0),
    );
    let (dim_bound, weight_bound) = bounds.unwrap_or(natural);
    // A morphism from the plex of a terminal generator c sends its top to
    // some g with τ(g) = c, so plexes outside the image of τ have empty
    // hom-sets. Above dimension 2 the full table is out of reach and only
    // the image is enumerated.
    let (t, tau) = terminal_image(p)?;
    let mut tlifter = Lifter::new(t.clone());
    let mut image_plexes = Vec::new();
    for c in t.generators().filter(|c| c.dim() <= dim_bound) {
        let plex = Plex::new(tlifter.lift_cell(&c.cell())?.shape)?;
        if plex.weight <= weight_bound {
            image_plexes.push(plex);
        }
    }
    let full = dim_bound <= FULL_TABLE_DIM;
    let table = if full {
        enumerate_plexes(dim_bound, weight_bound)?
    } else {
        PlexTable::from_plexes(image_plexes.clone())
    };
    for u in &image_plexes {
        if table.find(&u.shape).is_none() {
            violations.push(format!("plex {} of the terminal image is missing", u.key));
        }
    }
    let mut entries = Vec::new();
    let mut partial = false;
    for (g, l) in &lifts {
        let weight = l.shape.pol.num_generators();
        if g.dim() > dim_bound || weight > weight_bound {
            partial = true;
            continue;
        }
        let lifting = is_principal(&l.shape)
            && matches!(classify(&l.shape.cell), Classification::IsGenerator(_));
        let plex = table.find(&l.shape);
        if plex.is_none() {
            violations.push(format!("plex of {g:?} is missing from the table"));
        }
        let tg = tau.image(g).expect("τ is total");
        let typed = Plex::new(tlifter.lift_cell(&tg.cell())?.shape)?;
        if plex != table.find(&typed.shape) {
            violations.push(format!("plex of {g:?} differs from the plex of its type"));
        }
        let top = match classify(&l.shape.cell) {
            Classification::IsGenerator(t) => Some(t),
            _ => None,
        };
        let morphisms = match &top {
            Some(t) => {
                let fixed = HashMap::from([(t.clone(), g.clone())]);
                enumerate_maps_with(&l.shape.pol, p, &fixed, 2).len()
            }
            None => 0,
        };
        if morphisms != 1 {
            violations.push(format!(
                "{morphisms} morphisms from the plex of {g:?} pick it out"
            ));
        }
        let other = Lifter::new(p.clone()).lift_term(&alternative_term(g))?;
        let isomorphic_liftings = element_iso(l, &other).is_ok();
        if !isomorphic_liftings {
            violations.push(format!("two liftings of {g:?} are not isomorphic"));
        }
        if !lifting {
            violations.push(format!("lifting of {g:?} is not a principal generator"));
        }
        entries.push(GeneratorCheck {
            dim: g.dim(),
            name: g.name().to_string(),
            plex,
            plex_weight: weight,
            lifting,
            morphisms,
            isomorphic_liftings,
        });
    }
    let mut hits: HashMap<GenRef, usize> = HashMap::new();
    let mut hom_total = 0;
    for u in &table.plexes {
        for f in hom_set(u, p) {
            hom_total += 1;
            let g = f
                .image(&u.top)
                .ok_or_else(|| Error::Internal("morphism misses the top generator".into()))?;
            *hits.entry(g.clone()).or_insert(0) += 1;
        }
    }
    let bijective = entries.len() == hom_total
        && lifts
            .iter()
            .filter(|(g, l)| g.dim() <= dim_bound && l.shape.pol.num_generators() <= weight_bound)
            .all(|(g, _)| hits.get(g) == Some(&1));
    if !bijective {
        violations.push(format!(
            "{hom_total} morphisms from plexes for {} generators",
            entries.len()
        ));
    }
    Ok(MakkaiReport {
        ok: violations.is_empty(),
        partial,
        dim_bound,
        weight_bound,
        plexes: table.len(),
        full_table: full,
        generators: p.num_generators(),
        checked: entries.len(),
        hom_total,
        bijective,
        entries,
        violations,
    })
}

/// `1 ∘ g` along the top boundary: the same cell as `g`, written differently.
fn alternative_term(g: &GenRef) -> Term {
    match g.src() {
        None => Term::gen(g),
        Some(s) => Term::comp(
            g.dim() - 1,
            Term::id(crate::oracle::cell_to_term(s)),
            Term::gen(g),
        ),
    }
}

/// The point polygraph.
pub fn point() -> Polygraph {
    let mut p = Polygraph::new();
    p.add_point("*").expect("fresh polygraph");
    p
}
