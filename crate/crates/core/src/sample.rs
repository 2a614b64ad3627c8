//! Random and exhaustive generation of polygraphs, cells and maps.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::compose::{compose, identity};
use crate::functor::{rename, PolyMap};
use crate::model::{boundary_unchecked, parallel, size, Cell, GenRef, Name, Polygraph, Sign};
use crate::oracle::Term;

/// A growing collection of well-typed terms paired with their cells,
/// indexed by iterated boundaries so that composable partners are cheap to find.
pub struct Pool {
    pub items: Vec<(Term, Cell)>,
    by_face: HashMap<(usize, Sign, Cell), Vec<usize>>,
    seen: HashSet<Term>,
    max_dim: usize,
}

impl Pool {
    /// Generators of `p` and identities of points.
    pub fn new(p: &Polygraph, max_dim: usize) -> Pool {
        let mut pool = Pool {
            items: Vec::new(),
            by_face: HashMap::new(),
            seen: HashSet::new(),
            max_dim,
        };
        for g in p.generators() {
            if g.dim() <= max_dim {
                pool.push(Term::gen(g), g.cell());
            }
        }
        if max_dim >= 1 {
            for g in p.table(0) {
                pool.push(Term::id(Term::gen(g)), identity(&g.cell()));
            }
        }
        pool
    }

    /// A pool over `p` grown by `steps` random compositions, up to `top_dim + 1`.
    pub fn grown(p: &Polygraph, rng: &mut impl Rng, steps: usize, max_size: usize) -> Pool {
        let mut pool = Pool::new(p, p.top_dim().unwrap_or(0) + 1);
        pool.grow(rng, steps, max_size);
        pool
    }

    fn push(&mut self, t: Term, c: Cell) -> bool {
        if !self.seen.insert(t.clone()) {
            return false;
        }
        let k = self.items.len();
        for i in 0..c.dim() {
            for sign in [Sign::Source, Sign::Target] {
                self.by_face
                    .entry((i, sign, boundary_unchecked(&c, sign, i)))
                    .or_default()
                    .push(k);
            }
        }
        self.items.push((t, c));
        true
    }

    /// Indices of items that compose with `c` along `i`, with `c` on the
    /// given side (`Source` means `c` is the left factor).
    pub fn partners(&self, c: &Cell, i: usize, c_is_left: bool) -> Vec<usize> {
        let (mine, theirs) = if c_is_left {
            (Sign::Target, Sign::Source)
        } else {
            (Sign::Source, Sign::Target)
        };
        if i >= c.dim() {
            return Vec::new();
        }
        let key = (i, theirs, boundary_unchecked(c, mine, i));
        let Some(ks) = self.by_face.get(&key) else {
            return Vec::new();
        };
        ks.iter()
            .copied()
            .filter(|&k| c.dim().min(self.items[k].1.dim()) == i + 1)
            .collect()
    }

    pub fn grow(&mut self, rng: &mut impl Rng, steps: usize, max_size: usize) {
        if self.items.is_empty() {
            return;
        }
        for _ in 0..steps {
            let (t, c) = self.items[rng.gen_range(0..self.items.len())].clone();
            if c.dim() == 0 || (c.dim() < self.max_dim && rng.gen_bool(0.15)) {
                if c.dim() < self.max_dim {
                    self.push(Term::id(t), identity(&c));
                }
                continue;
            }
            let i = rng.gen_range(0..c.dim());
            let left = rng.gen_bool(0.5);
            let ks = self.partners(&c, i, left);
            let Some(&k) = ks.choose(rng) else {
                continue;
            };
            let (t2, c2) = self.items[k].clone();
            if t.size() + t2.size() > max_size {
                continue;
            }
            let (term, cell) = if left {
                (Term::comp(i, t, t2), compose(&c, i, &c2))
            } else {
                (Term::comp(i, t2, t), compose(&c2, i, &c))
            };
            self.push(term, cell.expect("partners are composable"));
        }
    }

    /// A random term, biased towards the larger ones.
    pub fn pick_large(&self, rng: &mut impl Rng) -> Option<Term> {
        let top = self.items.iter().map(|(t, _)| t.size()).max()?;
        let big: Vec<&Term> = self
            .items
            .iter()
            .filter(|(t, c)| c.dim() > 0 && 2 * t.size() >= top)
            .map(|(t, _)| t)
            .collect();
        match big.choose(rng) {
            Some(t) => Some((*t).clone()),
            None => self.items.choose(rng).map(|(t, _)| t.clone()),
        }
    }

    pub fn random_cell(&self, rng: &mut impl Rng) -> Option<Cell> {
        self.items.choose(rng).map(|(_, c)| c.clone())
    }
}

fn prefix(d: usize) -> String {
    match d {
        0 => "x".into(),
        1 => "f".into(),
        2 => "a".into(),
        3 => "m".into(),
        _ => format!("g{d}_"),
    }
}

/// A random valid polygraph with at most `per_dim` generators in each
/// dimension up to `max_dim`. Boundaries are drawn from small composites.
pub fn random_polygraph(rng: &mut impl Rng, per_dim: usize, max_dim: usize) -> Polygraph {
    let mut p = Polygraph::new();
    let n0 = rng.gen_range(1..=per_dim.max(1));
    for k in 1..=n0 {
        p.add_point(&format!("x{k}")).unwrap();
    }
    for d in 1..=max_dim {
        let lo = if d == 1 { 1 } else { 0 };
        let n = rng.gen_range(lo..=per_dim.max(lo));
        let mut pool = Pool::new(&p, d - 1);
        pool.grow(rng, 40, 2);
        let cells: Vec<Cell> = pool
            .items
            .iter()
            .filter(|(_, c)| c.dim() == d - 1)
            .map(|(_, c)| c.clone())
            .collect();
        let mut made = 0;
        for _ in 0..n * 8 {
            if made == n {
                break;
            }
            let Some(s) = cells.choose(rng) else { break };
            let ts: Vec<&Cell> = cells.iter().filter(|t| parallel(s, t)).collect();
            let Some(t) = ts.choose(rng) else { continue };
            // identity-to-identity generators make every dimension above them explode
            if s.is_identity() && t.is_identity() {
                continue;
            }
            made += 1;
            p.add_generator(&format!("{}{made}", prefix(d)), Some((s.clone(), (*t).clone())))
                .unwrap();
        }
    }
    p
}

/// A random surjective map out of `p` that merges generators whose
/// boundaries already agree in the image.
pub fn random_quotient(rng: &mut impl Rng, p: &Arc<Polygraph>, merge_prob: f64) -> PolyMap {
    let mut q = Polygraph::new();
    let mut image: HashMap<GenRef, GenRef> = HashMap::new();
    let mut assign: Vec<BTreeMap<Name, Name>> = Vec::new();
    for g in p.generators() {
        while assign.len() <= g.dim() {
            assign.push(BTreeMap::new());
        }
        let mut memo = HashMap::new();
        let f = |x: &GenRef| image[x].clone();
        let faces = g
            .src()
            .map(|s| (rename(s, &f, &mut memo), rename(g.tgt().unwrap(), &f, &mut memo)));
        let same: Vec<GenRef> = q
            .table(g.dim())
            .filter(|h| h.src().cloned().zip(h.tgt().cloned()) == faces)
            .cloned()
            .collect();
        let h = match same.choose(rng) {
            Some(h) if rng.gen_bool(merge_prob) => h.clone(),
            _ => q.add_generator(g.name(), faces).unwrap(),
        };
        assign[g.dim()].insert(g.name().clone(), h.name().clone());
        image.insert(g.clone(), h);
    }
    PolyMap {
        src: p.clone(),
        tgt: Arc::new(q),
        assign,
    }
}

/// Every cell of dimension at most `max_dim` over `p` with at most
/// `max_size` generator occurrences, identities included.
pub fn all_cells(p: &Polygraph, max_size: usize, max_dim: usize) -> Vec<Cell> {
    cells_within(p, max_dim, max_size, &mut |c| size(c))
}

/// Cells with at most `max_entries` whisker entries. A single entry can
/// carry arbitrarily long whiskers, so `max_size` caps the total number of
/// generator occurrences.
pub fn cells_by_entries(p: &Polygraph, max_entries: usize, max_size: usize, max_dim: usize) -> Vec<Cell> {
    let mut cells = all_cells(p, max_size, max_dim);
    cells.retain(|c| c.entries().len() <= max_entries);
    cells
}

/// Closure of the generators under identities and composition, keeping
/// cells whose `measure` is at most `bound`. Complete when the measure of
/// a composite is at least the measure of each factor.
pub fn cells_within(
    p: &Polygraph,
    max_dim: usize,
    bound: usize,
    measure: &mut dyn FnMut(&Cell) -> usize,
) -> Vec<Cell> {
    let mut seen: HashSet<Cell> = HashSet::new();
    let mut out: Vec<Cell> = Vec::new();
    let mut by_face: HashMap<(usize, Sign, Cell), Vec<usize>> = HashMap::new();
    let mut queue: Vec<Cell> = p
        .generators()
        .filter(|g| g.dim() <= max_dim)
        .map(|g| g.cell())
        .collect();
    while let Some(c) = queue.pop() {
        if c.dim() > max_dim || seen.contains(&c) || measure(&c) > bound {
            continue;
        }
        seen.insert(c.clone());
        let k = out.len();
        out.push(c.clone());
        for i in 0..c.dim() {
            for sign in [Sign::Source, Sign::Target] {
                by_face
                    .entry((i, sign, boundary_unchecked(&c, sign, i)))
                    .or_default()
                    .push(k);
            }
        }
        if c.dim() < max_dim {
            queue.push(identity(&c));
        }
        for i in 0..c.dim() {
            for (left, mine, theirs) in [
                (true, Sign::Target, Sign::Source),
                (false, Sign::Source, Sign::Target),
            ] {
                let key = (i, theirs, boundary_unchecked(&c, mine, i));
                let Some(ks) = by_face.get(&key) else { continue };
                for &j in ks {
                    let d = &out[j];
                    if c.dim().min(d.dim()) != i + 1 {
                        continue;
                    }
                    let r = if left {
                        compose(&c, i, d)
                    } else {
                        compose(d, i, &c)
                    };
                    let r = r.expect("indexed partners compose");
                    if !seen.contains(&r) {
                        queue.push(r);
                    }
                }
            }
        }
    }
    out.sort();
    out
}
