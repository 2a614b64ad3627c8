//! Supports of cells, restriction to a support, principal elements and
//! morphisms out of them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::{check_polymap, PolyMap};
use crate::model::{Body, Cell, Element, GenRef, Name, Polygraph};

/// Generators occurring in a cell or, recursively, in the boundaries of
/// generators that occur.
pub fn support_gens(u: &Cell) -> BTreeSet<GenRef> {
    let mut out = BTreeSet::new();
    collect(u, &mut out);
    out
}

fn collect(u: &Cell, out: &mut BTreeSet<GenRef>) {
    u.for_each_generator(&mut |g| add_gen(g, out));
}

fn add_gen(g: &GenRef, out: &mut BTreeSet<GenRef>) {
    if out.insert(g.clone()) {
        if let (Some(s), Some(t)) = (g.src(), g.tgt()) {
            collect(s, out);
            collect(t, out);
        }
    }
}

/// The support of `u` as `(dim, name)` pairs.
pub fn supp(p: &Polygraph, u: &Cell) -> BTreeSet<(usize, Name)> {
    debug_assert!(p.owns(u));
    support_gens(u).iter().map(GenRef::key).collect()
}

/// The sub-polygraph on the support of `u`, its inclusion into `p`, and
/// `u` seen as a cell of the sub-polygraph.
pub fn restrict(p: &Arc<Polygraph>, u: &Cell) -> Result<(Arc<Polygraph>, PolyMap, Cell)> {
    if !p.owns(u) {
        return Err(Error::Precondition(format!(
            "{u} is not a cell of the given polygraph"
        )));
    }
    let keep = support_gens(u);
    let sub = Arc::new(p.filtered(|g| keep.contains(g)));
    let mut assign = vec![BTreeMap::new(); sub.declared_dim().map_or(0, |d| d + 1)];
    for g in sub.generators() {
        assign[g.dim()].insert(g.name().clone(), g.name().clone());
    }
    let inclusion = PolyMap::new(sub.clone(), p.clone(), assign)?;
    // generators are shared, so the cell is literally the same value
    Ok((sub, inclusion, u.clone()))
}

pub fn is_principal(e: &Element) -> bool {
    support_gens(&e.cell).len() == e.pol.num_generators()
}

/// The morphism of elements `src → tgt` if there is one. It is unique
/// because `src` is principal, and is found by walking both normal forms
/// in parallel.
pub fn unique_morphism(src: &Element, tgt: &Element) -> Result<Option<PolyMap>> {
    if !is_principal(src) {
        return Err(Error::Precondition(format!(
            "the source element {} is not principal",
            src.cell
        )));
    }
    let mut asg: HashMap<GenRef, GenRef> = HashMap::new();
    if !walk(&src.cell, &tgt.cell, &mut asg) {
        return Ok(None);
    }
    let f = PolyMap::from_pairs(src.pol.clone(), tgt.pol.clone(), &asg);
    if asg.len() != src.pol.num_generators() || !check_polymap(&f).is_ok() {
        return Ok(None);
    }
    Ok(Some(f))
}

fn walk(a: &Cell, b: &Cell, asg: &mut HashMap<GenRef, GenRef>) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    match (a.body(), b.body()) {
        (Body::Point(g), Body::Point(h)) => assign(g, h, asg),
        (Body::Identity(x), Body::Identity(y)) => walk(x, y, asg),
        (Body::Whiskers(es), Body::Whiskers(fs)) => {
            es.len() == fs.len()
                && es.iter().zip(fs).all(|(e, f)| {
                    assign(&e.generator, &f.generator, asg)
                        && e.context.levels.len() == f.context.levels.len()
                        && e.context.levels.iter().zip(&f.context.levels).all(|(v, w)| {
                            walk(&v.left, &w.left, asg) && walk(&v.right, &w.right, asg)
                        })
                })
        }
        _ => false,
    }
}

fn assign(g: &GenRef, h: &GenRef, asg: &mut HashMap<GenRef, GenRef>) -> bool {
    if g.dim() != h.dim() {
        return false;
    }
    if let Some(prev) = asg.get(g) {
        return prev == h;
    }
    asg.insert(g.clone(), h.clone());
    match (g.src(), g.tgt(), h.src(), h.tgt()) {
        (Some(gs), Some(gt), Some(hs), Some(ht)) => walk(gs, hs, asg) && walk(gt, ht, asg),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::{compose, identity};
    use crate::fixtures;

    fn gen(p: &Polygraph, name: &str) -> Cell {
        p.lookup(name, None).unwrap().cell()
    }

    fn interchange(p: &Polygraph) -> Cell {
        let l = compose(&gen(p, "phi"), 0, &gen(p, "g")).unwrap();
        let r = compose(&gen(p, "f'"), 0, &gen(p, "psi")).unwrap();
        compose(&l, 1, &r).unwrap()
    }

    fn names(s: &BTreeSet<(usize, Name)>) -> Vec<String> {
        s.iter().map(|(_, n)| n.to_string()).collect()
    }

    #[test]
    fn support_of_identity_is_base() {
        let p = fixtures::fix_int();
        assert_eq!(names(&supp(&p, &identity(&gen(&p, "x")))), ["x"]);
    }

    #[test]
    fn support_of_interchange_is_everything() {
        let p = fixtures::fix_int();
        assert_eq!(supp(&p, &interchange(&p)).len(), 9);
    }

    #[test]
    fn support_of_path() {
        let p = fixtures::fix_int();
        let u = compose(&gen(&p, "f"), 0, &gen(&p, "g")).unwrap();
        assert_eq!(names(&supp(&p, &u)), ["x", "y", "z", "f", "g"]);
    }

    #[test]
    fn restriction_of_phi() {
        let p = fixtures::fix_int_arc();
        let phi = gen(&p, "phi");
        let (sub, inc, u) = restrict(&p, &phi).unwrap();
        let keys: Vec<String> = sub.generators().map(|g| g.name().to_string()).collect();
        assert_eq!(keys, ["x", "y", "f", "f'", "phi"]);
        assert_eq!(crate::functor::apply_free(&inc, &u).unwrap(), phi);
        assert!(is_principal(&Element::new(sub, u).unwrap()));
        assert!(!is_principal(&Element::new(p, phi).unwrap()));
    }

    #[test]
    fn restriction_to_full_support_is_identity() {
        let p = fixtures::fix_int_arc();
        let (sub, inc, _) = restrict(&p, &interchange(&p)).unwrap();
        assert_eq!(*sub, *p);
        assert!(inc.is_identity());
        assert!(is_principal(&Element::new(p.clone(), interchange(&p)).unwrap()));
    }

    #[test]
    fn unique_morphism_to_self_is_identity() {
        let p = fixtures::fix_int_arc();
        let e = Element::new(p.clone(), interchange(&p)).unwrap();
        assert!(unique_morphism(&e, &e).unwrap().unwrap().is_identity());
    }

    #[test]
    fn unique_morphism_requires_principal_source() {
        let p = fixtures::fix_int_arc();
        let e = Element::new(p.clone(), gen(&p, "phi")).unwrap();
        assert!(unique_morphism(&e, &e).is_err());
    }

    #[test]
    fn unique_morphism_fails_on_shape_mismatch() {
        let p = fixtures::fix_int_arc();
        let (sub, _, u) = restrict(&p, &gen(&p, "phi")).unwrap();
        let src = Element::new(sub, u).unwrap();
        let psi_g = Element::new(p.clone(), compose(&gen(&p, "f"), 0, &gen(&p, "psi")).unwrap()).unwrap();
        assert!(unique_morphism(&src, &psi_g).unwrap().is_none());
        let psi = Element::new(p.clone(), gen(&p, "psi")).unwrap();
        let m = unique_morphism(&src, &psi).unwrap().unwrap();
        assert_eq!(m.image_name(2, "phi").map(|n| n.to_string()), Some("psi".into()));
    }
}
