//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use precat::compose::{compose, identity};
use precat::expr::{eval, parse};
use precat::fixtures;
use precat::functor::{apply_free, conduche_factorize, enumerate_splittings, is_mono, PolyMap};
use precat::model::{boundary, size, Cell, Polygraph, Sign};
use precat::oracle::{self, cell_to_term, random_walk};
use precat::polyplex::{build_dkl, element_iso, measure_of, Lifter};
use precat::presheaf::{enumerate_plexes, makkai_check};
use precat::sample::{cells_by_entries, random_polygraph, random_quotient, Pool};
use precat::support::is_principal;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn random_polygraphs(seed: u64, count: usize) -> Vec<Arc<Polygraph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Arc::new(random_polygraph(&mut rng, 3, 3)))
        .collect()
}

fn test_polygraphs() -> Vec<Arc<Polygraph>> {
    let mut ps = vec![fixtures::fix_int_arc(), Arc::new(fixtures::fix_eh())];
    ps.extend(random_polygraphs(7, 20));
    ps
}

fn normal_form_uniqueness() -> Outcome {
    let ps = test_polygraphs();
    let start = Instant::now();
    let n = 10_000u64;
    for k in 0..n {
        let p = &ps[(k as usize) % ps.len()];
        let (a, b) = oracle::random_equal_pair(p, k, 12).map_err(|e| format!("seed {k}: {e}"))?;
        let na = eval(p, &a).map_err(|e| format!("seed {k}: {e}"))?;
        let nb = eval(p, &b).map_err(|e| format!("seed {k}: {e}"))?;
        let ra = oracle::normalize_expr(p, &a).map_err(|e| format!("seed {k}: {e}"))?;
        let rb = oracle::normalize_expr(p, &b).map_err(|e| format!("seed {k}: {e}"))?;
        if na != nb || ra != rb || na != ra {
            return Err(format!("seed {k}: {a} and {b} normalize differently"));
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("{n} pairs took {t:.1?}, over 60 s"));
    }
    Ok(format!("{n} pairs over {} polygraphs in {t:.1?}", ps.len()))
}

/// Pools of random well-typed cells, one per test polygraph.
fn pools(seed: u64) -> Vec<Pool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    test_polygraphs()
        .iter()
        .map(|p| Pool::grown(p, &mut rng, 400, 6))
        .collect()
}

fn pick<'a>(pool: &'a Pool, rng: &mut ChaCha8Rng) -> &'a Cell {
    &pool.items[rng.gen_range(0..pool.items.len())].1
}

/// A random partner composable with `c` along `i`, on the given side.
fn partner<'a>(pool: &'a Pool, rng: &mut ChaCha8Rng, c: &Cell, i: usize, c_is_left: bool) -> Option<&'a Cell> {
    pool.partners(c, i, c_is_left)
        .choose(rng)
        .map(|&k| &pool.items[k].1)
}

fn comp(u: &Cell, i: usize, v: &Cell) -> Cell {
    compose(u, i, v).unwrap_or_else(|e| panic!("{u} ∘_{i} {v}: {e}"))
}

fn face(u: &Cell, s: Sign) -> Cell {
    boundary(u, s, u.dim() - 1).unwrap()
}

/// Runs `instance` until it has produced `want` checked instances.
fn axiom(
    name: &str,
    pools: &[Pool],
    rng: &mut ChaCha8Rng,
    want: usize,
    mut instance: impl FnMut(&Pool, &mut ChaCha8Rng) -> Option<std::result::Result<(), String>>,
) -> std::result::Result<(), String> {
    let mut done = 0;
    let mut tries = 0;
    while done < want {
        tries += 1;
        if tries > want * 200 {
            return Err(format!("{name}: only {done} legal instances found"));
        }
        let pool = &pools[rng.gen_range(0..pools.len())];
        match instance(pool, rng) {
            None => continue,
            Some(Ok(())) => done += 1,
            Some(Err(e)) => return Err(format!("{name}: {e}")),
        }
    }
    Ok(())
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Option<std::result::Result<(), String>> {
    Some(if ok { Ok(()) } else { Err(what()) })
}

fn axiom_suite() -> Outcome {
    let pools = pools(11);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 10_000;

    axiom("source and target of identities", &pools, &mut rng, n, |pool, rng| {
        let u = pick(pool, rng);
        let e = identity(u);
        check(face(&e, Sign::Source) == *u && face(&e, Sign::Target) == *u, || {
            format!("{u}")
        })
    })?;

    axiom("boundary of composites", &pools, &mut rng, n, |pool, rng| {
        let u = pick(pool, rng);
        if u.dim() == 0 {
            return None;
        }
        let i = rng.gen_range(0..u.dim());
        let v = partner(pool, rng, u, i, true)?;
        let w = comp(u, i, v);
        let (k, l) = (u.dim(), v.dim());
        let ok = [Sign::Source, Sign::Target].iter().all(|&s| {
            let expect = if k < l {
                comp(u, i, &face(v, s))
            } else if k > l {
                comp(&face(u, s), i, v)
            } else if s == Sign::Source {
                face(u, s)
            } else {
                face(v, s)
            };
            face(&w, s) == expect
        });
        check(ok, || format!("{u} ∘_{i} {v}"))
    })?;

    axiom("identity absorption", &pools, &mut rng, n, |pool, rng| {
        let u = pick(pool, rng);
        let e = identity(u);
        let k = e.dim();
        let i = rng.gen_range(0..k);
        let left = rng.gen_bool(0.5);
        let v = partner(pool, rng, &e, i, left)?;
        let l = v.dim();
        let (got, expect) = if left {
            let expect = if k <= l { v.clone() } else { identity(&comp(u, i, v)) };
            (comp(&e, i, v), expect)
        } else {
            let expect = if k <= l { v.clone() } else { identity(&comp(v, i, u)) };
            (comp(v, i, &e), expect)
        };
        check(got == expect, || format!("{e} and {v} along {i}"))
    })?;

    axiom("associativity", &pools, &mut rng, n, |pool, rng| {
        let u = pick(pool, rng);
        if u.dim() == 0 {
            return None;
        }
        let i = rng.gen_range(0..u.dim());
        let v = partner(pool, rng, u, i, true)?;
        let w = partner(pool, rng, v, i, true)?;
        // dimensions 2, 1, 2 along 0 satisfy the side conditions pairwise,
        // but neither bracketing is defined
        let a = compose(&comp(u, i, v), i, w).ok()?;
        let b = comp(u, i, &comp(v, i, w));
        check(a == b, || format!("{u}, {v}, {w} along {i}"))
    })?;

    axiom("distribution", &pools, &mut rng, n, |pool, rng| {
        let v = pick(pool, rng);
        if v.dim() < 2 {
            return None;
        }
        let j = rng.gen_range(1..v.dim());
        let v2 = partner(pool, rng, v, j, true)?;
        let vv = comp(v, j, v2);
        let i = rng.gen_range(0..j);
        let left = rng.gen_bool(0.5);
        let u = partner(pool, rng, &vv, i, !left)?;
        let (a, b) = if left {
            (comp(u, i, &vv), comp(&comp(u, i, v), j, &comp(u, i, v2)))
        } else {
            (comp(&vv, i, u), comp(&comp(v, i, u), j, &comp(v2, i, u)))
        };
        check(a == b, || format!("{u} against {v} ∘_{j} {v2} along {i}"))
    })?;

    axiom("symmetric distribution", &pools, &mut rng, n, |pool, rng| {
        let w = pick(pool, rng);
        if w.dim() < 2 {
            return None;
        }
        let k = w.dim();
        let j = rng.gen_range(1..k);
        let i = rng.gen_range(0..j);
        let sized = |c: &Cell, d: usize, s: Sign, rng: &mut ChaCha8Rng| -> Cell {
            // a partner of the right dimension, or an identity on the boundary
            let found: Vec<&Cell> = pool
                .partners(c, d, s == Sign::Target)
                .into_iter()
                .map(|x| &pool.items[x].1)
                .filter(|x| x.dim() == d + 1)
                .collect();
            match found.choose(rng) {
                Some(x) if rng.gen_bool(0.8) => (*x).clone(),
                _ => {
                    let mut b = boundary(c, s, d).unwrap();
                    while b.dim() < d + 1 {
                        b = identity(&b);
                    }
                    b
                }
            }
        };
        let v1 = sized(w, j, Sign::Source, rng);
        let v2 = sized(w, j, Sign::Target, rng);
        let mid = comp(&comp(&v1, j, w), j, &v2);
        let u1 = sized(&mid, i, Sign::Source, rng);
        let u2 = sized(&mid, i, Sign::Target, rng);
        let around = |x: &Cell| comp(&comp(&u1, i, x), i, &u2);
        let a = around(&mid);
        let b = comp(&comp(&around(&v1), j, &around(w)), j, &around(&v2));
        check(a == b, || format!("{u1}, {v1}, {w}, {v2}, {u2} along {i}, {j}"))
    })?;

    Ok(format!("{n} instances of each of six axioms"))
}

/// Cells indexed by iterated boundary, for finding composable pairs.
fn by_face(cells: &[Cell]) -> HashMap<(usize, Sign, Cell), Vec<usize>> {
    let mut idx: HashMap<(usize, Sign, Cell), Vec<usize>> = HashMap::new();
    for (k, c) in cells.iter().enumerate() {
        for i in 0..c.dim() {
            for s in [Sign::Source, Sign::Target] {
                idx.entry((i, s, boundary(c, s, i).unwrap())).or_default().push(k);
            }
        }
    }
    idx
}

fn cancellativity() -> Outcome {
    let mut checked = 0usize;
    for p in [fixtures::fix_eh(), fixtures::fix_int()] {
        let top = p.top_dim().unwrap();
        let cells = cells_by_entries(&p, 4, 8, top);
        let idx = by_face(&cells);
        for u in &cells {
            for i in 0..u.dim() {
                for (mine, theirs, u_left) in [
                    (Sign::Target, Sign::Source, true),
                    (Sign::Source, Sign::Target, false),
                ] {
                    let Some(ks) = idx.get(&(i, theirs, boundary(u, mine, i).unwrap())) else {
                        continue;
                    };
                    let mut seen: HashMap<Cell, usize> = HashMap::new();
                    for &k in ks {
                        let v = &cells[k];
                        if u.dim().min(v.dim()) != i + 1 {
                            continue;
                        }
                        let w = if u_left { comp(u, i, v) } else { comp(v, i, u) };
                        checked += 1;
                        if let Some(prev) = seen.insert(w, k) {
                            return Err(format!(
                                "{u} along {i} identifies {} and {v}",
                                cells[prev]
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} composites with a fixed factor, all distinct"))
}

fn conduche() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut sources = vec![fixtures::fix_int_arc(), Arc::new(fixtures::fix_eh())];
    sources.extend(random_polygraphs(42, 10));
    let mut splittings = 0usize;
    let mut unique_checked = 0usize;
    for case in 0..1000 {
        let p = sources[case % sources.len()].clone();
        let f = random_quotient(&mut rng, &p, 0.6);
        let pool = Pool::grown(&p, &mut rng, 60, 6);
        let u = pool.random_cell(&mut rng).unwrap();
        let w = apply_free(&f, &u).map_err(|e| e.to_string())?;
        for i in 0..w.dim() {
            let lifts = enumerate_splittings(&u, i);
            for (v1, v2) in enumerate_splittings(&w, i) {
                splittings += 1;
                let (u1, u2) = conduche_factorize(&f, &u, &v1, &v2, i)
                    .map_err(|e| format!("case {case}: {u} over {v1} ∘_{i} {v2}: {e}"))?;
                if compose(&u1, i, &u2).ok().as_ref() != Some(&u)
                    || apply_free(&f, &u1).unwrap() != v1
                    || apply_free(&f, &u2).unwrap() != v2
                {
                    return Err(format!("case {case}: wrong factors {u1}, {u2}"));
                }
                if size(&u) <= 6 {
                    let matching = lifts
                        .iter()
                        .filter(|(a, b)| {
                            apply_free(&f, a).unwrap() == v1 && apply_free(&f, b).unwrap() == v2
                        })
                        .count();
                    if matching != 1 {
                        return Err(format!(
                            "case {case}: {matching} lifts of {v1} ∘_{i} {v2} for {u}"
                        ));
                    }
                    unique_checked += 1;
                }
            }
        }
    }
    Ok(format!(
        "1000 cases, {splittings} splittings lifted, {unique_checked} checked unique"
    ))
}

fn interchange_fixtures() -> Outcome {
    let p = fixtures::fix_int();
    let cell = |s: &str| eval(&p, &parse(s).unwrap()).unwrap();
    let a = cell("comp_1(comp_0(gen phi,gen g),comp_0(gen f',gen psi))");
    let b = cell("comp_1(comp_0(gen f,gen psi),comp_0(gen phi,gen g'))");
    if a == b {
        return Err("the two interchange composites coincide".into());
    }
    if boundary(&a, Sign::Source, 1).unwrap() != boundary(&b, Sign::Source, 1).unwrap()
        || boundary(&a, Sign::Target, 1).unwrap() != boundary(&b, Sign::Target, 1).unwrap()
    {
        return Err("the two interchange composites are not parallel".into());
    }
    let q = fixtures::fix_eh();
    let cell = |s: &str| eval(&q, &parse(s).unwrap()).unwrap();
    let af = cell("comp_0(gen alpha,gen f)");
    let fa = cell("comp_0(gen f,gen alpha)");
    if af == fa {
        return Err("alpha ∘_0 f equals f ∘_0 alpha".into());
    }
    let x = cell("comp_1(gen alpha,comp_0(gen alpha,gen f))");
    let y = cell("comp_1(gen alpha,comp_0(gen f,gen alpha))");
    if x == y {
        return Err("alpha ∘_1 (alpha ∘_0 f) equals alpha ∘_1 (f ∘_0 alpha)".into());
    }
    Ok("both fixtures keep their composites apart".into())
}

fn lifting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut total = 0usize;
    for p in [
        fixtures::fix_int_arc(),
        Arc::new(fixtures::fix_eh()),
        Arc::new(fixtures::fix_q()),
        Arc::new(fixtures::loop_fixture()),
    ] {
        let mut lifter = Lifter::new(p.clone());
        let top = p.top_dim().unwrap();
        for u in cells_by_entries(&p, 5, 10, top) {
            total += 1;
            let t1 = cell_to_term(&u);
            let l1 = lifter.lift_term(&t1).map_err(|e| format!("{u}: {e}"))?;
            let shape = &l1.shape;
            if !is_principal(shape) {
                return Err(format!("lifting of {u} is not principal"));
            }
            if apply_free(&l1.map, &shape.cell).unwrap() != u {
                return Err(format!("lifting of {u} does not map onto it"));
            }
            let t2 = random_walk(&t1, &mut rng, 8, 24);
            let l2 = lifter.lift_term(&t2).map_err(|e| format!("{u}: {e}"))?;
            element_iso(&l1, &l2).map_err(|e| format!("{u} via {t1} and {t2}: {e}"))?;
            if measure_of(&l1).unwrap() != measure_of(&l2).unwrap() {
                return Err(format!("measures of {u} differ across trees"));
            }
        }
    }
    Ok(format!("{total} cells lifted along two trees each"))
}

fn plex_counts() -> Outcome {
    let counts = |w| -> std::result::Result<(Vec<usize>, Vec<String>), String> {
        let table = enumerate_plexes(2, w).map_err(|e| e.to_string())?;
        let small = table
            .of_dim(2)
            .filter(|x| matches!(x.boundary_lengths(), Some((s, t)) if s <= 3 && t <= 3))
            .count();
        let keys = table.plexes.iter().map(|x| x.key.clone()).collect();
        Ok((vec![table.of_dim(0).count(), table.of_dim(1).count(), small], keys))
    };
    let (a, ka) = counts(13)?;
    let (b, kb) = counts(13)?;
    if a != [1, 1, 16] {
        return Err(format!("counts {a:?}"));
    }
    if a != b || ka != kb {
        return Err("two enumerations disagree".into());
    }
    Ok(format!("{a:?} plexes, stable across runs"))
}

fn makkai() -> Outcome {
    let (d22, _) = build_dkl(2, 2).map_err(|e| e.to_string())?;
    let mut cases: Vec<(String, Arc<Polygraph>)> = vec![
        ("FIX_INT".into(), fixtures::fix_int_arc()),
        ("FIX_EH".into(), Arc::new(fixtures::fix_eh())),
        ("D22".into(), d22),
    ];
    for (k, p) in random_polygraphs(81, 20).into_iter().enumerate() {
        cases.push((format!("random {}", k + 1), p));
    }
    let mut generators = 0;
    for (name, p) in &cases {
        let t = Instant::now();
        let r = makkai_check(p, None).map_err(|e| format!("{name}: {e}"))?;
        if !r.ok || !r.bijective || r.partial || r.checked != r.generators {
            return Err(format!("{name}: {:?}", r.violations));
        }
        generators += r.generators;
        eprintln!("  makkai {name}: {} generators in {:.1?}", r.generators, t.elapsed());
    }
    Ok(format!("{} polygraphs, {generators} generators", cases.len()))
}

fn small_cells(p: &Polygraph) -> Vec<Cell> {
    cells_by_entries(p, 4, 6, p.top_dim().unwrap_or(0))
}

fn injective_on(f: &PolyMap, cells: &[Cell]) -> bool {
    let mut seen = HashSet::new();
    cells.iter().all(|u| seen.insert(apply_free(f, u).unwrap()))
}

fn mono() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let sources: Vec<Arc<Polygraph>> = (0..10)
        .map(|_| Arc::new(random_polygraph(&mut rng, 3, 2)))
        .collect();
    let cells: Vec<Vec<Cell>> = sources.iter().map(|p| small_cells(p)).collect();
    let (mut monos, mut others) = (0, 0);
    for k in 0..50 {
        let p = &sources[k % sources.len()];
        let f = random_quotient(&mut rng, p, [0.0, 0.3, 0.8][k % 3]);
        let claim = is_mono(&f).mono;
        if claim != injective_on(&f, &cells[k % sources.len()]) {
            return Err(format!("map {k}: is_mono says {claim}"));
        }
        if claim {
            monos += 1
        } else {
            others += 1
        }
    }
    let f = fixtures::collapse();
    if is_mono(&f).mono || injective_on(&f, &small_cells(&f.src)) {
        return Err("the collapse map counts as mono".into());
    }
    let total: usize = cells.iter().map(Vec::len).sum();
    Ok(format!(
        "50 maps agree ({monos} mono, {others} not) on {total} source cells"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("normal-form uniqueness", normal_form_uniqueness),
        ("axiom suite", axiom_suite),
        ("cancellativity", cancellativity),
        ("Conduché lifting", conduche),
        ("interchange fixtures", interchange_fixtures),
        ("polyplex lifting", lifting),
        ("plex counts", plex_counts),
        ("Makkai conditions", makkai),
        ("mono characterization", mono),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match r {
            Ok(detail) => println!("PASS {} {name}: {detail} ({:.1?})", k + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({:.1?})", k + 1, t.elapsed())
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
