//! Exhaustive checks on small instances: pushouts, primitivity of
//! liftings, morphisms out of principal elements and plex tables.

use std::collections::HashMap;
use std::sync::Arc;

use precat::fixtures;
use precat::functor::{apply_free, enumerate_maps, is_mono, PolyMap};
use precat::model::{boundary, Cell, Element, Polygraph, Sign};
use precat::polyplex::{build_dn, copair, polyplex_lift, pushout};
use precat::presheaf::{enumerate_plexes, terminal_fragment};
use precat::sample::cells_by_entries;
use precat::support::{restrict, unique_morphism};

fn fixtures() -> Vec<Arc<Polygraph>> {
    vec![
        fixtures::fix_int_arc(),
        Arc::new(fixtures::fix_eh()),
        Arc::new(fixtures::fix_q()),
        Arc::new(fixtures::loop_fixture()),
    ]
}

fn small_cells(p: &Polygraph, entries: usize) -> Vec<Cell> {
    cells_by_entries(p, entries, 2 * entries, p.top_dim().unwrap())
}

fn is_iso(m: &PolyMap) -> bool {
    is_mono(m).mono && m.src.num_generators() == m.tgt.num_generators()
}

/// The `i`-globe included as the `sign` boundary of the `k`-globe.
fn globe_face(k: usize, i: usize, sign: Sign) -> PolyMap {
    let (pk, uk) = build_dn(k);
    let (pi, ui) = build_dn(i);
    let face = boundary(&uk, sign, i).unwrap();
    unique_morphism(&Element::new(pi, ui).unwrap(), &Element::new(pk, face).unwrap())
        .unwrap()
        .unwrap()
}

#[test]
fn pushouts_are_universal_against_all_cocones() {
    let cases = [
        (globe_face(1, 0, Sign::Target), globe_face(1, 0, Sign::Source)),
        (globe_face(2, 1, Sign::Target), globe_face(2, 1, Sign::Source)),
        (globe_face(2, 0, Sign::Target), globe_face(1, 0, Sign::Source)),
    ];
    let mut cocones = 0;
    for (h, k) in &cases {
        let po = pushout(h, k).unwrap();
        assert_eq!(h.then(&po.inl).unwrap(), k.then(&po.inr).unwrap());
        for d in fixtures() {
            let glued = enumerate_maps(&po.pol, &d, 10_000);
            for f in enumerate_maps(&h.tgt, &d, 10_000) {
                for g in enumerate_maps(&k.tgt, &d, 10_000) {
                    if h.then(&f).unwrap() != k.then(&g).unwrap() {
                        continue;
                    }
                    cocones += 1;
                    let u = copair(&po, &f, &g).unwrap();
                    assert_eq!(po.inl.then(&u).unwrap(), f);
                    assert_eq!(po.inr.then(&u).unwrap(), g);
                    let factorizations = glued
                        .iter()
                        .filter(|m| po.inl.then(m).unwrap() == f && po.inr.then(m).unwrap() == g)
                        .count();
                    assert_eq!(factorizations, 1);
                }
            }
        }
    }
    assert!(cocones > 10, "only {cocones} cocones");
}

#[test]
fn liftings_are_primitive() {
    let mut candidates: Vec<Element> = Vec::new();
    let mut lifts = Vec::new();
    for p in fixtures() {
        for u in small_cells(&p, 3) {
            let (sub, _, v) = restrict(&p, &u).unwrap();
            candidates.push(Element::new(sub, v).unwrap());
            let l = polyplex_lift(&Element::new(p.clone(), u).unwrap()).unwrap();
            candidates.push(l.shape.clone());
            lifts.push(l);
        }
    }
    let mut morphisms = 0;
    for l in &lifts {
        for e in &candidates {
            if let Some(m) = unique_morphism(e, &l.shape).unwrap() {
                morphisms += 1;
                assert!(is_iso(&m), "{} maps non-invertibly into the shape of {}", e.cell, l.shape.cell);
            }
        }
    }
    assert!(morphisms >= lifts.len());
}

#[test]
fn maps_from_principal_elements_are_determined_by_the_cell() {
    for p in fixtures() {
        for u in small_cells(&p, 2) {
            let (sub, _, v) = restrict(&p, &u).unwrap();
            for target in fixtures() {
                let mut by_image: HashMap<Cell, usize> = HashMap::new();
                for m in enumerate_maps(&sub, &target, 10_000) {
                    *by_image.entry(apply_free(&m, &v).unwrap()).or_default() += 1;
                }
                assert!(by_image.values().all(|&n| n == 1), "{u}");
            }
        }
    }
}

#[test]
fn plex_tables_only_grow_with_the_weight_budget() {
    for (d, lo, hi) in [(2, 9, 13), (3, 4, 5)] {
        let small = enumerate_plexes(d, lo).unwrap();
        let large = enumerate_plexes(d, hi).unwrap();
        let kept: Vec<&String> = large
            .plexes
            .iter()
            .filter(|u| u.weight <= lo)
            .map(|u| &u.key)
            .collect();
        let before: Vec<&String> = small.plexes.iter().map(|u| &u.key).collect();
        assert_eq!(kept, before);
        assert!(large.len() > small.len());
    }
}

#[test]
fn terminal_fragment_weights_stay_in_budget() {
    let t = Arc::new(terminal_fragment(2, 11).unwrap());
    for g in t.generators() {
        let l = polyplex_lift(&Element::new(t.clone(), g.cell()).unwrap()).unwrap();
        assert!(l.shape.pol.num_generators() <= 11, "{g:?}");
    }
}
