//! Pushouts of polygraphs and polyplex liftings: the universal shape of a
//! cell, built from the shapes of its pieces.
//!
//! Shapes are relabelled canonically by a first-visit walk of their
//! distinguished cell, so isomorphic elements come out identical.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::compose::{compose, identity};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::functor::{apply_free, is_mono, rename, PolyMap};
use crate::model::{boundary, Body, Cell, Element, GenRef, Name, Polygraph, Sign};
use crate::oracle::{self, Term, TermKind};
use crate::support::unique_morphism;

/// A pushout square `P → S ← Q` under `R`.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub pol: Arc<Polygraph>,
    pub inl: PolyMap,
    pub inr: PolyMap,
}

/// Pushout of `h: R → P` and `k: R → Q`, computed dimension by dimension
/// as a quotient of the disjoint union. Generators are named `L.name` and
/// `R.name`; a merged class takes the least of its members' names.
pub fn pushout(h: &PolyMap, k: &PolyMap) -> Result<Pushout> {
    if h.src != k.src {
        return Err(Error::Precondition(
            "pushout needs two maps out of the same polygraph".into(),
        ));
    }
    let (p, q) = (&h.tgt, &k.tgt);
    let top = p.top_dim().max(q.top_dim());
    let mut s = Polygraph::new();
    let mut left: HashMap<GenRef, GenRef> = HashMap::new();
    let mut right: HashMap<GenRef, GenRef> = HashMap::new();
    for d in 0..=top.unwrap_or(0) {
        if top.is_none() {
            break;
        }
        let members: Vec<(bool, GenRef)> = p
            .table(d)
            .map(|g| (true, g.clone()))
            .chain(q.table(d).map(|g| (false, g.clone())))
            .collect();
        let index: HashMap<(bool, Name), usize> = members
            .iter()
            .enumerate()
            .map(|(k, (side, g))| ((*side, g.name().clone()), k))
            .collect();
        let mut parent: Vec<usize> = (0..members.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for r in h.src.table(d) {
            let (Some(a), Some(b)) = (h.image(r), k.image(r)) else {
                return Err(Error::Precondition(format!("{r:?} has no image")));
            };
            let ia = index[&(true, a.name().clone())];
            let ib = index[&(false, b.name().clone())];
            let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..members.len() {
            let r = find(&mut parent, x);
            classes.entry(r).or_default().push(x);
        }
        let tagged = |x: usize| {
            let (side, g) = &members[x];
            format!("{}.{}", if *side { "L" } else { "R" }, g.name())
        };
        for xs in classes.values() {
            let name = xs.iter().map(|&x| tagged(x)).min().unwrap();
            let mut faces: Option<Option<(Cell, Cell)>> = None;
            for &x in xs {
                let (side, g) = &members[x];
                let map = if *side { &left } else { &right };
                let mut memo = HashMap::new();
                let f = |y: &GenRef| map[y].clone();
                let these = g
                    .src()
                    .zip(g.tgt())
                    .map(|(a, b)| (rename(a, &f, &mut memo), rename(b, &f, &mut memo)));
                match &faces {
                    None => faces = Some(these),
                    Some(prev) if *prev == these => {}
                    Some(_) => {
                        return Err(Error::Precondition(format!(
                            "boundaries of the generators glued into {name} disagree"
                        )))
                    }
                }
            }
            let new = s.add_generator(&name, faces.unwrap())?;
            for &x in xs {
                let (side, g) = &members[x];
                if *side {
                    left.insert(g.clone(), new.clone());
                } else {
                    right.insert(g.clone(), new.clone());
                }
            }
        }
    }
    let s = Arc::new(s);
    Ok(Pushout {
        inl: PolyMap::from_pairs(p.clone(), s.clone(), &left),
        inr: PolyMap::from_pairs(q.clone(), s.clone(), &right),
        pol: s,
    })
}

/// The map out of a pushout induced by a cocone `f: P → X`, `g: Q → X`.
pub fn copair(po: &Pushout, f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
    let mut pairs: HashMap<GenRef, GenRef> = HashMap::new();
    for (inj, m) in [(&po.inl, f), (&po.inr, g)] {
        for a in inj.src.generators() {
            let s = inj.image(a).expect("injections are total");
            let x = m
                .image(a)
                .ok_or_else(|| Error::Precondition(format!("{a:?} has no image in the cocone")))?;
            if let Some(prev) = pairs.insert(s.clone(), x.clone()) {
                if &prev != x {
                    return Err(Error::Precondition(
                        "the cocone does not commute with the span".into(),
                    ));
                }
            }
        }
    }
    Ok(PolyMap::from_pairs(po.pol.clone(), f.tgt.clone(), &pairs))
}

pub fn empty_map(tgt: &Arc<Polygraph>) -> PolyMap {
    PolyMap {
        src: Arc::new(Polygraph::new()),
        tgt: tgt.clone(),
        assign: Vec::new(),
    }
}

/// Disjoint union, as the pushout over the empty polygraph.
pub fn coproduct(p: &Arc<Polygraph>, q: &Arc<Polygraph>) -> Pushout {
    let e = Arc::new(Polygraph::new());
    let h = PolyMap {
        src: e.clone(),
        tgt: p.clone(),
        assign: Vec::new(),
    };
    let k = PolyMap {
        src: e,
        tgt: q.clone(),
        assign: Vec::new(),
    };
    pushout(&h, &k).expect("coproducts always exist")
}

/// A principal element `shape` with a morphism to the lifted element.
#[derive(Debug, Clone)]
pub struct PolyplexLifting {
    pub shape: Element,
    pub map: PolyMap,
}

#[derive(Clone)]
struct Shape {
    pol: Arc<Polygraph>,
    cell: Cell,
    img: HashMap<GenRef, GenRef>,
}

impl Shape {
    fn element(&self) -> Element {
        Element {
            pol: self.pol.clone(),
            cell: self.cell.clone(),
        }
    }
}

/// Computes liftings of cells of one polygraph, remembering every shape it
/// has built.
pub struct Lifter {
    target: Arc<Polygraph>,
    cells: HashMap<Cell, Shape>,
}

impl Lifter {
    pub fn new(target: Arc<Polygraph>) -> Lifter {
        Lifter {
            target,
            cells: HashMap::new(),
        }
    }

    pub fn target(&self) -> &Arc<Polygraph> {
        &self.target
    }

    /// Switches to a larger polygraph sharing the generators of the current
    /// target; shapes built so far stay valid.
    pub fn extend_target(&mut self, target: Arc<Polygraph>) {
        debug_assert!(self.target.generators().all(|g| target.contains(g)));
        self.target = target;
    }

    pub fn lift_cell(&mut self, u: &Cell) -> Result<PolyplexLifting> {
        if !self.target.owns(u) {
            return Err(Error::Precondition(format!(
                "{u} is not a cell of the lifted polygraph"
            )));
        }
        let s = self.cell_shape(u)?;
        Ok(self.finish(&s))
    }

    /// Lifts along the given expression tree rather than the normal form.
    pub fn lift_term(&mut self, t: &Term) -> Result<PolyplexLifting> {
        oracle::check(t)?;
        let s = self.term_shape(t)?;
        Ok(self.finish(&s))
    }

    /// Number of generators of the polyplex of `u`.
    pub fn weight(&mut self, u: &Cell) -> Result<usize> {
        Ok(self.cell_shape(u)?.pol.num_generators())
    }

    /// Number of generators of the plex of a would-be generator `s ⇒ t`.
    pub fn pair_weight(&mut self, s: &Cell, t: &Cell) -> Result<usize> {
        Ok(self.pair_shape(s, t)?.0.pol.num_generators())
    }

    /// Lower bound for [`Lifter::pair_weight`] from the shapes of the two
    /// sides and of their common boundary.
    pub fn pair_weight_bound(&mut self, s: &Cell, t: &Cell) -> Result<usize> {
        let ws = self.weight(s)?;
        let wt = self.weight(t)?;
        let shared = match s.dim() {
            0 => 0,
            d => {
                self.weight(&boundary(s, Sign::Source, d - 1)?)?
                    + self.weight(&boundary(s, Sign::Target, d - 1)?)?
            }
        };
        Ok((ws + wt + 1).saturating_sub(shared))
    }

    fn finish(&self, s: &Shape) -> PolyplexLifting {
        PolyplexLifting {
            shape: s.element(),
            map: PolyMap::from_pairs(s.pol.clone(), self.target.clone(), &s.img),
        }
    }

    fn cell_shape(&mut self, u: &Cell) -> Result<Shape> {
        if let Some(s) = self.cells.get(u) {
            return Ok(s.clone());
        }
        let s = match u.body() {
            Body::Identity(b) => {
                let s = self.cell_shape(b)?;
                Shape {
                    cell: identity(&s.cell),
                    ..s
                }
            }
            _ => self.term_shape(&oracle::cell_to_term(u))?,
        };
        self.cells.insert(u.clone(), s.clone());
        Ok(s)
    }

    fn term_shape(&mut self, t: &Term) -> Result<Shape> {
        match t.kind() {
            TermKind::Gen(g) => {
                if let Some(s) = self.cells.get(&g.cell()) {
                    return Ok(s.clone());
                }
                let s = self.gen_shape(g)?;
                self.cells.insert(g.cell(), s.clone());
                Ok(s)
            }
            TermKind::Id(a) => {
                let s = self.term_shape(a)?;
                Ok(Shape {
                    cell: identity(&s.cell),
                    ..s
                })
            }
            TermKind::Comp(i, a, b) => {
                let sa = self.term_shape(a)?;
                let sb = self.term_shape(b)?;
                self.glue(&sa, *i, &sb)
            }
        }
    }

    fn gen_shape(&mut self, g: &GenRef) -> Result<Shape> {
        let (Some(s), Some(t)) = (g.src(), g.tgt()) else {
            let mut p = Polygraph::new();
            let x = p.add_point("x1")?;
            return Ok(Shape {
                cell: x.cell(),
                pol: Arc::new(p),
                img: HashMap::from([(x, g.clone())]),
            });
        };
        let (mut shape, top) = self.pair_shape(s, t)?;
        shape.img.insert(top, g.clone());
        Ok(shape)
    }

    /// Shape of a generator `s ⇒ t`: the two boundary shapes glued along
    /// their common boundary, plus a top generator (returned unmapped).
    fn pair_shape(&mut self, s: &Cell, t: &Cell) -> Result<(Shape, GenRef)> {
        let bs = self.cell_shape(s)?;
        let bt = self.cell_shape(t)?;
        let n = s.dim() + 1;
        let (h, k) = if n == 1 {
            (empty_map(&bs.pol), empty_map(&bt.pol))
        } else {
            let lo = self.cell_shape(&boundary(s, Sign::Source, n - 2)?)?;
            let hi = self.cell_shape(&boundary(s, Sign::Target, n - 2)?)?;
            let co = coproduct(&lo.pol, &hi.pol);
            let into = |side: &Shape| -> Result<PolyMap> {
                let a = morphism(&lo, &side.pol, &boundary(&side.cell, Sign::Source, n - 2)?)?;
                let b = morphism(&hi, &side.pol, &boundary(&side.cell, Sign::Target, n - 2)?)?;
                copair(&co, &a, &b)
            };
            (into(&bs)?, into(&bt)?)
        };
        let po = pushout(&h, &k)?;
        let src = apply_free(&po.inl, &bs.cell)?;
        let tgt = apply_free(&po.inr, &bt.cell)?;
        let mut pol = (*po.pol).clone();
        let top = pol.add_generator("top", Some((src, tgt)))?;
        let img = merge_images(&po, &bs, &bt)?;
        let shape = Shape {
            cell: top.cell(),
            pol: Arc::new(pol),
            img,
        };
        let (shape, renaming) = canonical_shape(&shape);
        let top = renaming[&top].clone();
        Ok((shape, top))
    }

    fn glue(&mut self, sa: &Shape, i: usize, sb: &Shape) -> Result<Shape> {
        let image = rename(&sa.cell, &|g| sa.img[g].clone(), &mut HashMap::new());
        let shared = self.cell_shape(&boundary(&image, Sign::Target, i)?)?;
        let h = morphism(&shared, &sa.pol, &boundary(&sa.cell, Sign::Target, i)?)?;
        let k = morphism(&shared, &sb.pol, &boundary(&sb.cell, Sign::Source, i)?)?;
        let po = pushout(&h, &k)?;
        let cell = compose(
            &apply_free(&po.inl, &sa.cell)?,
            i,
            &apply_free(&po.inr, &sb.cell)?,
        )?;
        let img = merge_images(&po, sa, sb)?;
        Ok(canonical_shape(&Shape {
            pol: po.pol.clone(),
            cell,
            img,
        })
        .0)
    }
}

fn morphism(from: &Shape, pol: &Arc<Polygraph>, cell: &Cell) -> Result<PolyMap> {
    let to = Element {
        pol: pol.clone(),
        cell: cell.clone(),
    };
    unique_morphism(&from.element(), &to)?.ok_or_else(|| {
        Error::Internal(format!(
            "no morphism from the shape of {} into its occurrence {}",
            from.cell, cell
        ))
    })
}

fn merge_images(po: &Pushout, a: &Shape, b: &Shape) -> Result<HashMap<GenRef, GenRef>> {
    let mut img: HashMap<GenRef, GenRef> = HashMap::new();
    for (inj, s) in [(&po.inl, a), (&po.inr, b)] {
        for (g, x) in &s.img {
            let y = inj.image(g).expect("injections are total").clone();
            if let Some(prev) = img.insert(y, x.clone()) {
                if &prev != x {
                    return Err(Error::Internal(
                        "glued generators have different images".into(),
                    ));
                }
            }
        }
    }
    Ok(img)
}

fn dim_prefix(d: usize) -> String {
    match d {
        0 => "x".into(),
        1 => "f".into(),
        2 => "a".into(),
        3 => "m".into(),
        _ => format!("g{d}_"),
    }
}

/// Order in which generators are first met walking a cell: the generator
/// of each entry, then its boundaries, then the entry's whiskers.
fn visit_order(u: &Cell) -> Vec<GenRef> {
    fn cell(u: &Cell, seen: &mut HashSet<GenRef>, out: &mut Vec<GenRef>) {
        match u.body() {
            Body::Point(g) => gen(g, seen, out),
            Body::Identity(b) => cell(b, seen, out),
            Body::Whiskers(es) => {
                for e in es {
                    gen(&e.generator, seen, out);
                    for w in &e.context.levels {
                        cell(&w.left, seen, out);
                        cell(&w.right, seen, out);
                    }
                }
            }
        }
    }
    fn gen(g: &GenRef, seen: &mut HashSet<GenRef>, out: &mut Vec<GenRef>) {
        if seen.insert(g.clone()) {
            out.push(g.clone());
            if let (Some(s), Some(t)) = (g.src(), g.tgt()) {
                cell(s, seen, out);
                cell(t, seen, out);
            }
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    cell(u, &mut seen, &mut out);
    out
}

/// Relabels an element by visit order; generators outside the support of
/// the cell keep their relative order after the visited ones.
fn relabel(e: &Element) -> (Element, HashMap<GenRef, GenRef>) {
    let mut order = visit_order(&e.cell);
    let seen: HashSet<GenRef> = order.iter().cloned().collect();
    order.extend(e.pol.generators().filter(|g| !seen.contains(*g)).cloned());
    let mut counters: Vec<usize> = Vec::new();
    let mut named: Vec<(usize, usize, GenRef, String)> = order
        .into_iter()
        .enumerate()
        .map(|(k, g)| {
            let d = g.dim();
            while counters.len() <= d {
                counters.push(0);
            }
            counters[d] += 1;
            let name = format!("{}{}", dim_prefix(d), counters[d]);
            (d, k, g, name)
        })
        .collect();
    named.sort_by_key(|(d, k, _, _)| (*d, *k));
    let mut pol = Polygraph::new();
    let mut map: HashMap<GenRef, GenRef> = HashMap::new();
    for (_, _, g, name) in named {
        let faces = {
            let f = |x: &GenRef| map[x].clone();
            let mut memo = HashMap::new();
            g.src()
                .zip(g.tgt())
                .map(|(s, t)| (rename(s, &f, &mut memo), rename(t, &f, &mut memo)))
        };
        let new = pol.add_generator(&name, faces).expect("relabelling keeps validity");
        map.insert(g, new);
    }
    let cell = rename(&e.cell, &|x| map[x].clone(), &mut HashMap::new());
    (
        Element {
            pol: Arc::new(pol),
            cell,
        },
        map,
    )
}

fn canonical_shape(s: &Shape) -> (Shape, HashMap<GenRef, GenRef>) {
    let (e, map) = relabel(&s.element());
    let img = s
        .img
        .iter()
        .map(|(g, x)| (map[g].clone(), x.clone()))
        .collect();
    (
        Shape {
            pol: e.pol,
            cell: e.cell,
            img,
        },
        map,
    )
}

/// The canonical representative of an element's isomorphism class.
pub fn canonical(e: &Element) -> Element {
    relabel(e).0
}

/// A string that identifies an element up to isomorphism.
pub fn canonical_key(e: &Element) -> String {
    let c = canonical(e);
    let mut out = String::new();
    for g in c.pol.generators() {
        match (g.src(), g.tgt()) {
            (Some(s), Some(t)) => out.push_str(&format!("{}:{}->{};", g.name(), s, t)),
            _ => out.push_str(&format!("{};", g.name())),
        }
    }
    out.push_str(&format!("|{}", c.cell));
    out
}

pub fn polyplex_lift(e: &Element) -> Result<PolyplexLifting> {
    Lifter::new(e.pol.clone()).lift_cell(&e.cell)
}

/// Lifts along the structure of an expression instead of the normal form.
pub fn polyplex_lift_expr(p: &Arc<Polygraph>, e: &Expr) -> Result<PolyplexLifting> {
    let t = oracle::resolve(p, e)?;
    Lifter::new(p.clone()).lift_term(&t)
}

/// The isomorphism `Θ` between two liftings of one element, with
/// `L2.map ∘ Θ = L1.map`.
pub fn element_iso(l1: &PolyplexLifting, l2: &PolyplexLifting) -> Result<PolyMap> {
    if l1.map.tgt != l2.map.tgt {
        return Err(Error::Precondition(
            "liftings of elements of different polygraphs".into(),
        ));
    }
    let c1 = apply_free(&l1.map, &l1.shape.cell)?;
    let c2 = apply_free(&l2.map, &l2.shape.cell)?;
    if c1 != c2 {
        return Err(Error::Precondition(format!(
            "liftings of different cells {c1} and {c2}"
        )));
    }
    let missing = || Error::Internal("liftings of one element are not isomorphic".into());
    let there = unique_morphism(&l1.shape, &l2.shape)?.ok_or_else(missing)?;
    let back = unique_morphism(&l2.shape, &l1.shape)?.ok_or_else(missing)?;
    if !there.then(&back)?.is_identity() || !back.then(&there)?.is_identity() {
        return Err(missing());
    }
    if there.then(&l2.map)?.assign != l1.map.assign {
        return Err(Error::Internal("lifting triangle does not commute".into()));
    }
    Ok(there)
}

/// True when the lifting map of `e` is an isomorphism.
pub fn is_polyplex(e: &Element) -> Result<bool> {
    let l = polyplex_lift(e)?;
    Ok(is_iso(&l.map))
}

/// A cell classifies a generic map out of a globe exactly when its element
/// is a polyplex.
pub fn is_generic(p: &Arc<Polygraph>, u: &Cell) -> Result<bool> {
    is_polyplex(&Element::new(p.clone(), u.clone())?)
}

fn is_iso(f: &PolyMap) -> bool {
    let covered: usize = f.assign.iter().map(|t| t.len()).sum();
    is_mono(f).mono
        && covered == f.src.num_generators()
        && f.src.num_generators() == f.tgt.num_generators()
}

/// Generators of the polyplex of `e` counted by their image.
pub fn polyplex_measure(e: &Element) -> Result<BTreeMap<(usize, Name), usize>> {
    measure_of(&polyplex_lift(e)?)
}

pub fn measure_of(l: &PolyplexLifting) -> Result<BTreeMap<(usize, Name), usize>> {
    let mut out = BTreeMap::new();
    for g in l.shape.pol.generators() {
        let x = l
            .map
            .image(g)
            .ok_or_else(|| Error::Internal(format!("{g:?} has no image")))?;
        *out.entry(x.key()).or_insert(0) += 1;
    }
    Ok(out)
}

/// The `n`-globe: `s_k, t_k` in each dimension below `n` and one top cell.
pub fn build_dn(n: usize) -> (Arc<Polygraph>, Cell) {
    let mut p = Polygraph::new();
    if n == 0 {
        let top = p.add_point("top").unwrap();
        return (Arc::new(p), top.cell());
    }
    let mut s = p.add_point("s0").unwrap().cell();
    let mut t = p.add_point("t0").unwrap().cell();
    for k in 1..n {
        let s2 = p
            .add_generator(&format!("s{k}"), Some((s.clone(), t.clone())))
            .unwrap()
            .cell();
        let t2 = p.add_generator(&format!("t{k}"), Some((s, t))).unwrap().cell();
        s = s2;
        t = t2;
    }
    let top = p.add_generator("top", Some((s, t))).unwrap();
    (Arc::new(p), top.cell())
}

/// A `k`-globe and an `l`-globe glued along their common boundary of
/// dimension `min(k, l) - 1`, with the composite of the two top cells.
pub fn build_dkl(k: usize, l: usize) -> Result<(Arc<Polygraph>, Cell)> {
    if k == 0 || l == 0 {
        return Err(Error::Precondition("globe dimensions must be positive".into()));
    }
    let i = k.min(l) - 1;
    let (pk, uk) = build_dn(k);
    let (pl, ul) = build_dn(l);
    let (pi, ui) = build_dn(i);
    let shared = Element { pol: pi, cell: ui };
    let into = |pol: &Arc<Polygraph>, cell: Cell| -> Result<PolyMap> {
        unique_morphism(&shared, &Element { pol: pol.clone(), cell })?
            .ok_or_else(|| Error::Internal("globe boundary does not embed".into()))
    };
    let h = into(&pk, boundary(&uk, Sign::Target, i)?)?;
    let g = into(&pl, boundary(&ul, Sign::Source, i)?)?;
    let po = pushout(&h, &g)?;
    let u = compose(&apply_free(&po.inl, &uk)?, i, &apply_free(&po.inr, &ul)?)?;
    Ok((po.pol, u))
}
