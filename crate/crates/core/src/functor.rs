//! Morphisms of polygraphs, their free extension to cells, monomorphism
//! testing and Conduché factorization.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::compose::{compose, identity};
use crate::error::{Error, Result};
use crate::model::{
    boundary_unchecked, Body, Cell, Context, Entry, GenRef, IssueKind, Name, Polygraph, Report,
    Sign, Whisker,
};

/// A dimension-preserving assignment of generators compatible with boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    pub src: Arc<Polygraph>,
    pub tgt: Arc<Polygraph>,
    /// `assign[d]` maps names of `d`-generators of `src` to names in `tgt`.
    pub assign: Vec<BTreeMap<Name, Name>>,
}

impl PolyMap {
    /// Builds a map and checks it.
    pub fn new(
        src: Arc<Polygraph>,
        tgt: Arc<Polygraph>,
        assign: Vec<BTreeMap<Name, Name>>,
    ) -> Result<PolyMap> {
        let f = PolyMap { src, tgt, assign };
        let r = check_polymap(&f);
        if r.is_ok() {
            Ok(f)
        } else {
            Err(Error::InvalidMap(r))
        }
    }

    pub fn identity(p: Arc<Polygraph>) -> PolyMap {
        let mut assign = Vec::new();
        for g in p.generators() {
            while assign.len() <= g.dim() {
                assign.push(BTreeMap::new());
            }
            assign[g.dim()].insert(g.name().clone(), g.name().clone());
        }
        PolyMap {
            src: p.clone(),
            tgt: p,
            assign,
        }
    }

    /// Image of a source generator, if assigned and present in the target.
    pub fn image(&self, g: &GenRef) -> Option<&GenRef> {
        let n = self.assign.get(g.dim())?.get(g.name())?;
        self.tgt.get(g.dim(), n)
    }

    pub fn image_name(&self, dim: usize, name: &str) -> Option<&Name> {
        self.assign.get(dim)?.get(name)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &PolyMap) -> Result<PolyMap> {
        let mut assign = vec![BTreeMap::new(); self.assign.len()];
        for (d, table) in self.assign.iter().enumerate() {
            for (a, b) in table {
                let c = other.image_name(d, b).ok_or_else(|| {
                    Error::Precondition(format!("{b} has no image under the second map"))
                })?;
                assign[d].insert(a.clone(), c.clone());
            }
        }
        Ok(PolyMap {
            src: self.src.clone(),
            tgt: other.tgt.clone(),
            assign,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.assign.iter().all(|t| t.iter().all(|(a, b)| a == b))
    }

    pub(crate) fn from_pairs(
        src: Arc<Polygraph>,
        tgt: Arc<Polygraph>,
        pairs: &HashMap<GenRef, GenRef>,
    ) -> PolyMap {
        let mut assign = Vec::new();
        for (a, b) in pairs {
            while assign.len() <= a.dim() {
                assign.push(BTreeMap::new());
            }
            assign[a.dim()].insert(a.name().clone(), b.name().clone());
        }
        PolyMap { src, tgt, assign }
    }
}

/// Lists every way in which `f` fails to be a morphism of polygraphs.
pub fn check_polymap(f: &PolyMap) -> Report {
    let mut r = Report::default();
    for (d, table) in f.assign.iter().enumerate() {
        for (a, b) in table {
            if f.src.get(d, a).is_none() {
                r.error(
                    IssueKind::DanglingReference,
                    Some(a),
                    format!("assignment for {a}, which is not a {d}-generator of the source"),
                );
            }
            if f.tgt.get(d, b).is_none() {
                r.error(
                    IssueKind::NotInTarget,
                    Some(a),
                    format!("{a} is sent to {b}, which is not a {d}-generator of the target"),
                );
            }
        }
    }
    if !r.is_ok() {
        return r;
    }
    for g in f.src.generators() {
        if f.image(g).is_none() {
            r.error(
                IssueKind::Unassigned,
                Some(g.name()),
                format!("{}-generator {} has no image", g.dim(), g.name()),
            );
        }
    }
    if !r.is_ok() {
        return r;
    }
    let mut memo = HashMap::new();
    for g in f.src.generators() {
        let h = f.image(g).unwrap();
        for sign in [Sign::Source, Sign::Target] {
            if let (Some(a), Some(b)) = (g.face(sign), h.face(sign)) {
                let fa = rename(a, &|x| f.image(x).unwrap().clone(), &mut memo);
                if &fa != b {
                    r.error(
                        IssueKind::BoundaryMismatch,
                        Some(g.name()),
                        format!(
                            "{} of {} maps to {fa} but {} of {} is {b}",
                            side(sign),
                            g.name(),
                            side(sign),
                            h.name()
                        ),
                    );
                }
            }
        }
    }
    r
}

fn side(s: Sign) -> &'static str {
    match s {
        Sign::Source => "src",
        Sign::Target => "tgt",
    }
}

/// Structural renaming of generators. When `f` sends generators to
/// generators compatibly with boundaries the result is again a normal form.
pub(crate) fn rename(
    u: &Cell,
    f: &dyn Fn(&GenRef) -> GenRef,
    memo: &mut HashMap<Cell, Cell>,
) -> Cell {
    if let Some(c) = memo.get(u) {
        return c.clone();
    }
    let out = match u.body() {
        Body::Point(g) => Cell::point(f(g)),
        Body::Identity(b) => identity(&rename(b, f, memo)),
        Body::Whiskers(es) => Cell::from_entries(
            u.dim(),
            es.iter()
                .map(|e| Entry {
                    generator: f(&e.generator),
                    context: Context {
                        levels: e
                            .context
                            .levels
                            .iter()
                            .map(|w| Whisker {
                                left: rename(&w.left, f, memo),
                                right: rename(&w.right, f, memo),
                            })
                            .collect(),
                    },
                })
                .collect(),
        ),
    };
    memo.insert(u.clone(), out.clone());
    out
}

/// The free functor of `f` applied to a cell of its source.
pub fn apply_free(f: &PolyMap, u: &Cell) -> Result<Cell> {
    if !f.src.owns(u) {
        return Err(Error::Precondition(format!(
            "{u} is not a cell of the source polygraph"
        )));
    }
    let mut missing = None;
    u.for_each_generator(&mut |g| {
        if missing.is_none() && f.image(g).is_none() {
            missing = Some(g.clone());
        }
    });
    if let Some(g) = missing {
        return Err(Error::Precondition(format!("{g:?} has no image")));
    }
    Ok(rename(u, &|g| f.image(g).unwrap().clone(), &mut HashMap::new()))
}

/// Outcome of [`is_mono`]; `witness` names two generators with one image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoCheck {
    pub mono: bool,
    pub witness: Option<(usize, Name, Name)>,
}

/// A map is a monomorphism exactly when it is injective in every dimension.
/// Point collisions are reported last since edge collisions usually force them.
pub fn is_mono(f: &PolyMap) -> MonoCheck {
    let n = f.assign.len();
    for d in (1..n).chain(0..n.min(1)) {
        let table = &f.assign[d];
        let mut seen: BTreeMap<&Name, &Name> = BTreeMap::new();
        for (a, b) in table {
            if let Some(prev) = seen.insert(b, a) {
                return MonoCheck {
                    mono: false,
                    witness: Some((d, prev.clone(), a.clone())),
                };
            }
        }
    }
    MonoCheck {
        mono: true,
        witness: None,
    }
}

/// Unique `(u1, u2)` with `u = u1 ∘_i u2`, `F u1 = v1` and `F u2 = v2`,
/// given that `F u = v1 ∘_i v2`.
pub fn conduche_factorize(
    f: &PolyMap,
    u: &Cell,
    v1: &Cell,
    v2: &Cell,
    i: usize,
) -> Result<(Cell, Cell)> {
    let image = apply_free(f, u)?;
    let split = compose(v1, i, v2)
        .map_err(|e| Error::Precondition(format!("the given factors do not compose: {e}")))?;
    if split != image {
        return Err(Error::Precondition(format!(
            "image {image} differs from {split}"
        )));
    }
    let (u1, u2) = factor(u, v1, v2, i)?;
    let ok = compose(&u1, i, &u2).ok().as_ref() == Some(u)
        && apply_free(f, &u1)? == *v1
        && apply_free(f, &u2)? == *v2;
    if !ok {
        return Err(Error::Internal(format!(
            "factorization of {u} along {v1} and {v2} failed"
        )));
    }
    Ok((u1, u2))
}

fn factor(u: &Cell, v1: &Cell, v2: &Cell, i: usize) -> Result<(Cell, Cell)> {
    let (k, l) = (v1.dim(), v2.dim());
    if k == l {
        if v1.is_identity() {
            return Ok((identity(&boundary_unchecked(u, Sign::Source, i)), u.clone()));
        }
        if v2.is_identity() {
            return Ok((u.clone(), identity(&boundary_unchecked(u, Sign::Target, i))));
        }
        let es = u.entries();
        let n = v1.entries().len();
        if es.len() != n + v2.entries().len() {
            return Err(Error::Internal("whisker list lengths disagree".into()));
        }
        Ok((
            Cell::from_entries(k, es[..n].to_vec()),
            Cell::from_entries(k, es[n..].to_vec()),
        ))
    } else if k < l {
        let b = boundary_unchecked(u, Sign::Source, i + 1);
        let (u1, _) = factor(&b, v1, &boundary_unchecked(v2, Sign::Source, i + 1), i)?;
        let u2 = divide_left(&u1, i, u)
            .ok_or_else(|| Error::Internal(format!("{u1} is not a left factor of {u}")))?;
        Ok((u1, u2))
    } else {
        let b = boundary_unchecked(u, Sign::Source, i + 1);
        let (_, u2) = factor(&b, &boundary_unchecked(v1, Sign::Source, i + 1), v2, i)?;
        let u1 = divide_right(u, i, &u2)
            .ok_or_else(|| Error::Internal(format!("{u2} is not a right factor of {u}")))?;
        Ok((u1, u2))
    }
}

/// Unique `u'` with `u = 1_{u'}` and `F u' = v`, given `F u = 1_v`.
pub fn lift_identity(f: &PolyMap, u: &Cell, v: &Cell) -> Result<Cell> {
    let image = apply_free(f, u)?;
    if image != identity(v) {
        return Err(Error::Precondition(format!(
            "{image} is not the identity on {v}"
        )));
    }
    match u.body() {
        Body::Identity(b) => Ok(b.clone()),
        _ => Err(Error::Internal(format!(
            "{u} maps to an identity without being one"
        ))),
    }
}

/// Some `w` with `a ∘_i w = u`, where `dim a = i + 1 < dim u`.
pub fn divide_left(a: &Cell, i: usize, u: &Cell) -> Option<Cell> {
    divide(a, i, u, Side::Left)
}

/// Some `w` with `w ∘_i a = u`, where `dim a = i + 1 < dim u`.
pub fn divide_right(u: &Cell, i: usize, a: &Cell) -> Option<Cell> {
    divide(a, i, u, Side::Right)
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn divide(a: &Cell, i: usize, u: &Cell, side: Side) -> Option<Cell> {
    if a.dim() != i + 1 || u.dim() <= i + 1 {
        return None;
    }
    if a.is_identity() {
        return Some(u.clone());
    }
    match u.body() {
        Body::Identity(b) => {
            let inner = if b.dim() == i + 1 {
                strip(a, i, b, side)?
            } else {
                divide(a, i, b, side)?
            };
            Some(identity(&inner))
        }
        Body::Whiskers(es) => {
            let mut out = Vec::with_capacity(es.len());
            for e in es {
                let mut levels = e.context.levels.clone();
                for (j, lv) in levels.iter_mut().enumerate().skip(i) {
                    if j == i {
                        match side {
                            Side::Left => lv.left = strip(a, i, &lv.left, side)?,
                            Side::Right => lv.right = strip(a, i, &lv.right, side)?,
                        }
                    } else {
                        lv.left = divide(a, i, &lv.left, side)?;
                        lv.right = divide(a, i, &lv.right, side)?;
                    }
                }
                out.push(Entry {
                    context: Context { levels },
                    generator: e.generator.clone(),
                });
            }
            Some(Cell::from_entries(u.dim(), out))
        }
        Body::Point(_) => None,
    }
}

/// Removes the non-identity `a` from the front (or back) of the equal-dimension `c`.
fn strip(a: &Cell, i: usize, c: &Cell, side: Side) -> Option<Cell> {
    if c.is_identity() {
        return None;
    }
    let (ae, ce) = (a.entries(), c.entries());
    if ae.len() > ce.len() {
        return None;
    }
    let rest = match side {
        Side::Left if ce[..ae.len()] == *ae => &ce[ae.len()..],
        Side::Right if ce[ce.len() - ae.len()..] == *ae => &ce[..ce.len() - ae.len()],
        _ => return None,
    };
    if rest.is_empty() {
        let sign = match side {
            Side::Left => Sign::Target,
            Side::Right => Sign::Source,
        };
        Some(identity(&boundary_unchecked(a, sign, i)))
    } else {
        Some(Cell::from_entries(c.dim(), rest.to_vec()))
    }
}

/// Every decomposition `w = w1 ∘_i w2` with legal dimensions.
pub fn enumerate_splittings(w: &Cell, i: usize) -> Vec<(Cell, Cell)> {
    let d = w.dim();
    let mut out = Vec::new();
    if i >= d {
        return out;
    }
    if i + 1 == d {
        match w.body() {
            Body::Identity(_) => out.push((w.clone(), w.clone())),
            Body::Whiskers(es) => {
                let n = es.len();
                for k in 0..=n {
                    let a = if k == 0 {
                        identity(&boundary_unchecked(w, Sign::Source, i))
                    } else {
                        Cell::from_entries(d, es[..k].to_vec())
                    };
                    let b = if k == n {
                        identity(&boundary_unchecked(w, Sign::Target, i))
                    } else {
                        Cell::from_entries(d, es[k..].to_vec())
                    };
                    out.push((a, b));
                }
            }
            Body::Point(_) => {}
        }
        return out;
    }
    let b = boundary_unchecked(w, Sign::Source, i + 1);
    let mut lefts = vec![identity(&boundary_unchecked(w, Sign::Source, i))];
    let mut rights = vec![identity(&boundary_unchecked(w, Sign::Target, i))];
    let es = b.entries();
    for k in 1..=es.len() {
        lefts.push(Cell::from_entries(i + 1, es[..k].to_vec()));
        rights.push(Cell::from_entries(i + 1, es[es.len() - k..].to_vec()));
    }
    for a in lefts {
        if let Some(rest) = divide_left(&a, i, w) {
            if compose(&a, i, &rest).ok().as_ref() == Some(w) {
                out.push((a, rest));
            }
        }
    }
    for a in rights {
        if let Some(rest) = divide_right(w, i, &a) {
            if compose(&rest, i, &a).ok().as_ref() == Some(w) {
                out.push((rest, a));
            }
        }
    }
    out
}

/// All morphisms `src → tgt`, stopping after `limit` of them.
pub fn enumerate_maps(src: &Arc<Polygraph>, tgt: &Arc<Polygraph>, limit: usize) -> Vec<PolyMap> {
    enumerate_maps_with(src, tgt, &HashMap::new(), limit)
}

/// Like [`enumerate_maps`], with some assignments forced in advance.
pub fn enumerate_maps_with(
    src: &Arc<Polygraph>,
    tgt: &Arc<Polygraph>,
    fixed: &HashMap<GenRef, GenRef>,
    limit: usize,
) -> Vec<PolyMap> {
    let order: Vec<GenRef> = src.generators().cloned().collect();
    let mut by_face: ByFace = HashMap::new();
    for h in tgt.generators() {
        by_face
            .entry((h.dim(), h.src().cloned(), h.tgt().cloned()))
            .or_default()
            .push(h.clone());
    }
    let mut out = Vec::new();
    let mut current: HashMap<GenRef, GenRef> = HashMap::new();
    search(
        &order, 0, &by_face, fixed, &mut current, &mut out, src, tgt, limit,
    );
    out
}

/// Target generators indexed by dimension and boundary.
type ByFace = HashMap<(usize, Option<Cell>, Option<Cell>), Vec<GenRef>>;

#[allow(clippy::too_many_arguments)]
fn search(
    order: &[GenRef],
    k: usize,
    by_face: &ByFace,
    fixed: &HashMap<GenRef, GenRef>,
    current: &mut HashMap<GenRef, GenRef>,
    out: &mut Vec<PolyMap>,
    src: &Arc<Polygraph>,
    tgt: &Arc<Polygraph>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if k == order.len() {
        out.push(PolyMap::from_pairs(src.clone(), tgt.clone(), current));
        return;
    }
    let g = &order[k];
    let mut memo = HashMap::new();
    let faces = {
        let f = |x: &GenRef| current[x].clone();
        (
            g.src().map(|c| rename(c, &f, &mut memo)),
            g.tgt().map(|c| rename(c, &f, &mut memo)),
        )
    };
    let Some(cands) = by_face.get(&(g.dim(), faces.0, faces.1)) else {
        return;
    };
    for h in cands {
        if fixed.get(g).is_some_and(|want| want != h) {
            continue;
        }
        current.insert(g.clone(), h.clone());
        search(order, k + 1, by_face, fixed, current, out, src, tgt, limit);
        current.remove(g);
        if out.len() >= limit {
            return;
        }
    }
}

/// Re-evaluates a cell through composition after renaming; used to cross-check
/// the structural renaming in [`apply_free`].
pub fn apply_free_by_composition(f: &PolyMap, u: &Cell) -> Result<Cell> {
    match u.body() {
        Body::Point(g) => Ok(f
            .image(g)
            .ok_or_else(|| Error::Precondition(format!("{g:?} has no image")))?
            .cell()),
        Body::Identity(b) => Ok(identity(&apply_free_by_composition(f, b)?)),
        Body::Whiskers(es) => {
            let mut acc: Option<Cell> = None;
            for e in es {
                let g = f
                    .image(&e.generator)
                    .ok_or_else(|| Error::Precondition(format!("{:?} has no image", e.generator)))?;
                let mut x = g.cell();
                for (j, w) in e.context.levels.iter().enumerate() {
                    let l = apply_free_by_composition(f, &w.left)?;
                    let r = apply_free_by_composition(f, &w.right)?;
                    x = compose(&compose(&l, j, &x)?, j, &r)?;
                }
                acc = Some(match acc {
                    None => x,
                    Some(a) => compose(&a, u.dim() - 1, &x)?,
                });
            }
            Ok(acc.unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{classify, truncate};

    fn gen(p: &Polygraph, name: &str) -> Cell {
        p.lookup(name, None).unwrap().cell()
    }

    fn c(a: &Cell, i: usize, b: &Cell) -> Cell {
        compose(a, i, b).unwrap()
    }

    #[test]
    fn identity_map_is_clean() {
        let f = PolyMap::identity(fixtures::fix_int_arc());
        assert!(check_polymap(&f).is_ok());
        assert!(is_mono(&f).mono);
    }

    #[test]
    fn collapse_is_clean_and_not_mono() {
        let f = fixtures::collapse();
        assert!(check_polymap(&f).is_ok());
        let m = is_mono(&f);
        assert!(!m.mono);
        assert_eq!(m.witness, Some((1, "f".into(), "f'".into())));
    }

    #[test]
    fn dangling_assignment_is_reported() {
        let mut f = fixtures::collapse();
        f.assign[1].remove("f'");
        let r = check_polymap(&f);
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].kind, IssueKind::Unassigned);
        let mut f = fixtures::collapse();
        f.assign[1].insert("f'".into(), "nope".into());
        assert_eq!(check_polymap(&f).errors[0].kind, IssueKind::NotInTarget);
    }

    #[test]
    fn boundary_mismatch_is_reported() {
        let p = Arc::new(fixtures::fix_int());
        let mut f = PolyMap::identity(p);
        f.assign[1].insert("f".into(), "g".into());
        let r = check_polymap(&f);
        assert!(r.errors.iter().any(|i| i.kind == IssueKind::BoundaryMismatch));
    }

    #[test]
    fn inclusion_of_truncation_is_mono() {
        let p = fixtures::fix_int_arc();
        let t = Arc::new(truncate(&p, 1));
        let mut assign = PolyMap::identity(t.clone()).assign;
        assign.truncate(2);
        let f = PolyMap::new(t, p, assign).unwrap();
        assert!(is_mono(&f).mono);
    }

    #[test]
    fn collapse_sends_whiskered_phi_to_whiskered_beta() {
        let f = fixtures::collapse();
        let p = &f.src;
        let q = &f.tgt;
        let u = c(&gen(p, "phi"), 0, &gen(p, "g"));
        let v = apply_free(&f, &u).unwrap();
        assert_eq!(v, c(&gen(q, "beta"), 0, &gen(q, "h")));
        assert_eq!(apply_free_by_composition(&f, &u).unwrap(), v);
        assert_eq!(
            apply_free(&f, &identity(&u)).unwrap(),
            identity(&apply_free(&f, &u).unwrap())
        );
        assert_eq!(classify(&v).tag(), classify(&u).tag());
    }

    #[test]
    fn identity_map_fixes_cells() {
        let p = fixtures::fix_int_arc();
        let f = PolyMap::identity(p.clone());
        let u = c(&gen(&p, "phi"), 0, &gen(&p, "g"));
        assert_eq!(apply_free(&f, &u).unwrap(), u);
    }

    #[test]
    fn conduche_along_identity() {
        let p = fixtures::fix_int_arc();
        let f = PolyMap::identity(p.clone());
        let v1 = c(&gen(&p, "phi"), 0, &gen(&p, "g"));
        let v2 = c(&gen(&p, "f'"), 0, &gen(&p, "psi"));
        let u = c(&v1, 1, &v2);
        assert_eq!(conduche_factorize(&f, &u, &v1, &v2, 1).unwrap(), (v1, v2));
    }

    #[test]
    fn conduche_along_collapse_is_unique() {
        let f = fixtures::collapse();
        let p = f.src.clone();
        let a = c(&gen(&p, "phi"), 0, &gen(&p, "g"));
        let b = c(&gen(&p, "f'"), 0, &gen(&p, "psi"));
        let u = c(&a, 1, &b);
        let v1 = apply_free(&f, &a).unwrap();
        let v2 = apply_free(&f, &b).unwrap();
        assert_eq!(conduche_factorize(&f, &u, &v1, &v2, 1).unwrap(), (a, b));
        let lifts: Vec<_> = enumerate_splittings(&u, 1)
            .into_iter()
            .filter(|(x, y)| apply_free(&f, x).unwrap() == v1 && apply_free(&f, y).unwrap() == v2)
            .collect();
        assert_eq!(lifts.len(), 1);
    }

    #[test]
    fn conduche_whiskering_split() {
        let f = fixtures::collapse();
        let p = f.src.clone();
        let u = c(&gen(&p, "f"), 0, &gen(&p, "psi"));
        let image = apply_free(&f, &u).unwrap();
        let splits = enumerate_splittings(&image, 0);
        assert!(!splits.is_empty());
        for (v1, v2) in splits {
            let (u1, u2) = conduche_factorize(&f, &u, &v1, &v2, 0).unwrap();
            assert_eq!(c(&u1, 0, &u2), u);
        }
    }

    #[test]
    fn conduche_rejects_mismatched_factors() {
        let f = fixtures::collapse();
        let p = f.src.clone();
        let q = f.tgt.clone();
        let u = gen(&p, "phi");
        let beta = gen(&q, "beta");
        let e = conduche_factorize(&f, &u, &beta, &beta, 1).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
    }

    #[test]
    fn lift_identity_cases() {
        let p = fixtures::fix_int_arc();
        let id = PolyMap::identity(p.clone());
        let fc = gen(&p, "f");
        assert_eq!(lift_identity(&id, &identity(&fc), &fc).unwrap(), fc);
        let col = fixtures::collapse();
        let fg = c(&gen(&p, "f"), 0, &gen(&p, "g"));
        let h = gen(&col.tgt, "h");
        let hh = c(&h, 0, &h);
        assert_eq!(lift_identity(&col, &identity(&fg), &hh).unwrap(), fg);
        assert!(lift_identity(&id, &gen(&p, "phi"), &fc).is_err());
    }

    #[test]
    fn splittings_of_two_entry_cell() {
        let p = fixtures::fix_int();
        let u = c(&c(&gen(&p, "phi"), 0, &gen(&p, "g")), 1, &c(&gen(&p, "f'"), 0, &gen(&p, "psi")));
        assert_eq!(enumerate_splittings(&u, 1).len(), 3);
        for (a, b) in enumerate_splittings(&u, 0) {
            assert_eq!(c(&a, 0, &b), u);
        }
    }

    #[test]
    fn maps_into_fix_q() {
        let p = fixtures::fix_int_arc();
        let q = Arc::new(fixtures::fix_q());
        let maps = enumerate_maps(&p, &q, 10);
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0], fixtures::collapse());
    }
}
