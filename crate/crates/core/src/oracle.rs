//! An independent normalizer for composition expressions.
//!
//! Expressions are rewritten with the precategory axioms oriented as rules
//! and the resulting term is read off as a [`Cell`], without using the
//! composition code in [`crate::compose`]. The rules, applied innermost
//! first and tried in this order at each node:
//!
//! * `1_a ∘_i b → b` when `dim 1_a ≤ dim b`, else `1_(a ∘_i b)` (and mirrored)
//! * `(a ∘_i b) ∘_i c → a ∘_i (b ∘_i c)`
//! * `a ∘_i (b ∘_j c) → (a ∘_i b) ∘_j (a ∘_i c)` for `j > i` (and mirrored)

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::model::{Body, Cell, Context, Entry, GenRef, Polygraph, Sign, Whisker};
use crate::sample::Pool;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term(Arc<TermNode>);

#[derive(PartialEq, Eq, Hash)]
struct TermNode {
    dim: usize,
    size: usize,
    kind: TermKind,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    Gen(GenRef),
    Id(Term),
    Comp(usize, Term, Term),
}

impl Term {
    pub fn gen(g: &GenRef) -> Term {
        Term(Arc::new(TermNode {
            dim: g.dim(),
            size: 1,
            kind: TermKind::Gen(g.clone()),
        }))
    }

    pub fn id(a: Term) -> Term {
        Term(Arc::new(TermNode {
            dim: a.dim() + 1,
            size: a.size(),
            kind: TermKind::Id(a),
        }))
    }

    pub fn comp(i: usize, a: Term, b: Term) -> Term {
        Term(Arc::new(TermNode {
            dim: a.dim().max(b.dim()),
            size: a.size() + b.size(),
            kind: TermKind::Comp(i, a, b),
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Number of generator leaves.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    fn as_id(&self) -> Option<&Term> {
        match self.kind() {
            TermKind::Id(a) => Some(a),
            _ => None,
        }
    }

    fn as_comp(&self) -> Option<(usize, &Term, &Term)> {
        match self.kind() {
            TermKind::Comp(i, a, b) => Some((*i, a, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", term_to_expr(self, None))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn resolve(p: &Polygraph, e: &Expr) -> Result<Term> {
    Ok(match e {
        Expr::Gen { name, dim } => Term::gen(p.lookup(name, *dim)?),
        Expr::Id(a) => Term::id(resolve(p, a)?),
        Expr::Comp(i, a, b) => Term::comp(*i, resolve(p, a)?, resolve(p, b)?),
    })
}

pub fn term_to_expr(t: &Term, p: Option<&Polygraph>) -> Expr {
    match t.kind() {
        TermKind::Gen(g) => Expr::Gen {
            name: g.name().to_string(),
            dim: p.filter(|p| p.is_ambiguous(g.name())).map(|_| g.dim()),
        },
        TermKind::Id(a) => Expr::id(term_to_expr(a, p)),
        TermKind::Comp(i, a, b) => Expr::comp(*i, term_to_expr(a, p), term_to_expr(b, p)),
    }
}

/// Structural translation of a normal form, omitting identity whiskers.
pub fn cell_to_term(u: &Cell) -> Term {
    match u.body() {
        Body::Point(g) => Term::gen(g),
        Body::Identity(b) => Term::id(cell_to_term(b)),
        Body::Whiskers(es) => {
            let mut parts: Vec<Term> = es
                .iter()
                .map(|e| {
                    let mut x = Term::gen(&e.generator);
                    for (j, w) in e.context.levels.iter().enumerate() {
                        if !w.left.is_identity() {
                            x = Term::comp(j, cell_to_term(&w.left), x);
                        }
                        if !w.right.is_identity() {
                            x = Term::comp(j, x, cell_to_term(&w.right));
                        }
                    }
                    x
                })
                .collect();
            let mut acc = parts.pop().unwrap();
            while let Some(prev) = parts.pop() {
                acc = Term::comp(u.dim() - 1, prev, acc);
            }
            acc
        }
    }
}

/// One-step source or target of a term, following the boundary axioms.
pub fn face(t: &Term, sign: Sign) -> Term {
    match t.kind() {
        TermKind::Gen(g) => cell_to_term(g.face(sign).expect("positive dimension")),
        TermKind::Id(a) => a.clone(),
        TermKind::Comp(i, a, b) => {
            let (k, l) = (a.dim(), b.dim());
            if k < l {
                Term::comp(*i, a.clone(), face(b, sign))
            } else if k > l {
                Term::comp(*i, face(a, sign), b.clone())
            } else {
                match sign {
                    Sign::Source => face(a, sign),
                    Sign::Target => face(b, sign),
                }
            }
        }
    }
}

pub fn term_boundary(t: &Term, sign: Sign, k: usize) -> Term {
    let mut c = t.clone();
    while c.dim() > k {
        c = face(&c, sign);
    }
    c
}

/// Checks dimensions and boundaries of every composition node.
pub fn check(t: &Term) -> Result<()> {
    match t.kind() {
        TermKind::Gen(_) => Ok(()),
        TermKind::Id(a) => check(a),
        TermKind::Comp(i, a, b) => {
            check(a)?;
            check(b)?;
            let m = a.dim().min(b.dim());
            if m == 0 || i + 1 != m {
                return Err(Error::IllegalComposition {
                    i: *i,
                    left_dim: a.dim(),
                    right_dim: b.dim(),
                });
            }
            let tl = norm(&term_boundary(a, Sign::Target, *i));
            let sr = norm(&term_boundary(b, Sign::Source, *i));
            if tl != sr {
                return Err(Error::NotComposable {
                    i: *i,
                    target: format!("{tl} (of {a})"),
                    found: format!("{sr} (of {b})"),
                });
            }
            Ok(())
        }
    }
}

/// Normal form of a well-typed term.
pub fn norm(t: &Term) -> Term {
    match t.kind() {
        TermKind::Gen(_) => t.clone(),
        TermKind::Id(a) => Term::id(norm(a)),
        TermKind::Comp(i, a, b) => step(*i, &norm(a), &norm(b)),
    }
}

fn step(i: usize, a: &Term, b: &Term) -> Term {
    if let Some(a1) = a.as_id() {
        if a.dim() <= b.dim() {
            return b.clone();
        }
        return Term::id(step(i, a1, b));
    }
    if let Some(b1) = b.as_id() {
        if b.dim() <= a.dim() {
            return a.clone();
        }
        return Term::id(step(i, a, b1));
    }
    if let Some((j, a1, a2)) = a.as_comp() {
        if j == i {
            return step(i, a1, &step(i, a2, b));
        }
    }
    if let Some((j, b1, b2)) = b.as_comp() {
        if j > i {
            return step(j, &step(i, a, b1), &step(i, a, b2));
        }
    }
    if let Some((j, a1, a2)) = a.as_comp() {
        if j > i {
            return step(j, &step(i, a1, b), &step(i, a2, b));
        }
    }
    Term::comp(i, a.clone(), b.clone())
}

/// Every term reachable by one rule application at one position.
pub fn one_step_rewrites(t: &Term) -> Vec<Term> {
    let mut out = root_rewrites(t);
    match t.kind() {
        TermKind::Gen(_) => {}
        TermKind::Id(a) => out.extend(one_step_rewrites(a).into_iter().map(Term::id)),
        TermKind::Comp(i, a, b) => {
            out.extend(
                one_step_rewrites(a)
                    .into_iter()
                    .map(|x| Term::comp(*i, x, b.clone())),
            );
            out.extend(
                one_step_rewrites(b)
                    .into_iter()
                    .map(|x| Term::comp(*i, a.clone(), x)),
            );
        }
    }
    out
}

fn root_rewrites(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let Some((i, a, b)) = t.as_comp() else {
        return out;
    };
    if let Some(a1) = a.as_id() {
        out.push(if a.dim() <= b.dim() {
            b.clone()
        } else {
            Term::id(Term::comp(i, a1.clone(), b.clone()))
        });
    }
    if let Some(b1) = b.as_id() {
        out.push(if b.dim() <= a.dim() {
            a.clone()
        } else {
            Term::id(Term::comp(i, a.clone(), b1.clone()))
        });
    }
    if let Some((j, a1, a2)) = a.as_comp() {
        if j == i {
            out.push(Term::comp(i, a1.clone(), Term::comp(i, a2.clone(), b.clone())));
        } else if j > i {
            out.push(Term::comp(
                j,
                Term::comp(i, a1.clone(), b.clone()),
                Term::comp(i, a2.clone(), b.clone()),
            ));
        }
    }
    if let Some((j, b1, b2)) = b.as_comp() {
        if j > i {
            out.push(Term::comp(
                j,
                Term::comp(i, a.clone(), b1.clone()),
                Term::comp(i, a.clone(), b2.clone()),
            ));
        }
    }
    out
}

/// True when every one-step rewrite of `t` normalizes to the normal form of `t`.
pub fn locally_confluent_at(t: &Term) -> bool {
    let n = norm(t);
    one_step_rewrites(t).iter().all(|r| norm(r) == n)
}

/// Reads a normal term as a cell.
pub fn read_off(t: &Term) -> Result<Cell> {
    match t.kind() {
        TermKind::Gen(g) if g.dim() == 0 => Ok(Cell::point(g.clone())),
        TermKind::Id(a) => Ok(Cell::wrap_identity(read_off(a)?)),
        _ => {
            let d = t.dim();
            let entries = spine(t, d - 1)
                .iter()
                .map(|e| read_entry(e, d))
                .collect::<Result<Vec<_>>>()?;
            Ok(Cell::from_entries(d, entries))
        }
    }
}

/// Flattens the right spine of `∘_i` nodes.
fn spine(t: &Term, i: usize) -> Vec<Term> {
    let mut out = Vec::new();
    let mut cur = t.clone();
    loop {
        match cur.as_comp() {
            Some((j, a, b)) if j == i => {
                out.push(a.clone());
                let next = b.clone();
                cur = next;
            }
            _ => {
                out.push(cur);
                return out;
            }
        }
    }
}

fn read_entry(t: &Term, m: usize) -> Result<Entry> {
    let mut cur = t.clone();
    let mut sides: Vec<(Vec<Term>, Vec<Term>, Term)> = Vec::with_capacity(m.saturating_sub(1));
    for j in (1..m).rev() {
        let chain = spine(&cur, j - 1);
        let holes: Vec<usize> = (0..chain.len()).filter(|&k| chain[k].dim() == m).collect();
        if holes.len() != 1 {
            return Err(Error::Internal(format!(
                "term {t} has no unique {m}-dimensional factor at level {j}"
            )));
        }
        let h = holes[0];
        cur = chain[h].clone();
        sides.push((chain[..h].to_vec(), chain[h + 1..].to_vec(), cur.clone()));
    }
    let g = match cur.kind() {
        TermKind::Gen(g) if g.dim() == m => g.clone(),
        _ => {
            return Err(Error::Internal(format!(
                "term {t} does not reduce to a whiskered generator"
            )))
        }
    };
    sides.reverse();
    let mut levels = Vec::with_capacity(sides.len());
    for (k, (left, right, hole)) in sides.into_iter().enumerate() {
        let j = k + 1;
        let whisker = |parts: &[Term], sign: Sign| -> Result<Cell> {
            if parts.is_empty() {
                let b = norm(&term_boundary(&hole, sign, j - 1));
                Ok(Cell::wrap_identity(read_off(&b)?))
            } else {
                let es = parts
                    .iter()
                    .map(|p| {
                        if p.dim() != j {
                            return Err(Error::Internal(format!(
                                "whisker {p} should have dimension {j}"
                            )));
                        }
                        read_entry(p, j)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Cell::from_entries(j, es))
            }
        };
        levels.push(Whisker {
            left: whisker(&left, Sign::Source)?,
            right: whisker(&right, Sign::Target)?,
        });
    }
    Ok(Entry {
        context: Context { levels },
        generator: g,
    })
}

/// Type-checks, rewrites to normal form and reads off the cell.
pub fn normalize_expr(p: &Polygraph, e: &Expr) -> Result<Cell> {
    let t = resolve(p, e)?;
    normalize_term(&t)
}

pub fn normalize_term(t: &Term) -> Result<Cell> {
    check(t)?;
    read_off(&norm(t))
}

/// A random well-typed expression with at most `size_budget` generator leaves.
pub fn random_expr(p: &Polygraph, seed: u64, size_budget: usize) -> Result<Expr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = Pool::grown(p, &mut rng, 120, size_budget.max(1));
    let t = pool
        .pick_large(&mut rng)
        .ok_or_else(|| Error::Bounds("no well-typed expression within budget".into()))?;
    Ok(term_to_expr(&t, Some(p)))
}

/// Two expressions for the same cell: a random one and the result of a
/// random walk of `walk_length` axiom instances applied in either direction.
pub fn random_equal_pair(p: &Polygraph, seed: u64, walk_length: usize) -> Result<(Expr, Expr)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = Pool::grown(p, &mut rng, 120, 6);
    let t = pool
        .pick_large(&mut rng)
        .ok_or_else(|| Error::Bounds("no well-typed expression within budget".into()))?;
    let w = random_walk(&t, &mut rng, walk_length, 64);
    Ok((term_to_expr(&t, Some(p)), term_to_expr(&w, Some(p))))
}

/// Applies `steps` random axiom instances, forward or backward, keeping the
/// term below `max_size` leaves.
pub fn random_walk(t: &Term, rng: &mut impl Rng, steps: usize, max_size: usize) -> Term {
    let mut cur = t.clone();
    let mut done = 0;
    let mut attempts = 0;
    while done < steps && attempts < steps * 20 + 20 {
        attempts += 1;
        let paths = positions(&cur);
        let path = paths.choose(rng).unwrap();
        let sub = at(&cur, path);
        let mut moves = root_rewrites(&sub);
        moves.extend(backward_moves(&sub, rng));
        let Some(m) = moves.choose(rng) else {
            continue;
        };
        let next = replace(&cur, path, m.clone());
        if next.size() > max_size {
            continue;
        }
        cur = next;
        done += 1;
    }
    cur
}

fn backward_moves(s: &Term, rng: &mut impl Rng) -> Vec<Term> {
    let mut out = Vec::new();
    if s.dim() > 0 {
        let i = rng.gen_range(0..s.dim());
        let src = norm(&term_boundary(s, Sign::Source, i));
        let tgt = norm(&term_boundary(s, Sign::Target, i));
        out.push(Term::comp(i, Term::id(src), s.clone()));
        out.push(Term::comp(i, s.clone(), Term::id(tgt)));
    }
    if let Some(inner) = s.as_id() {
        if let Some((i, a, b)) = inner.as_comp() {
            if a.dim() > b.dim() {
                out.push(Term::comp(i, Term::id(a.clone()), b.clone()));
            } else if b.dim() > a.dim() {
                out.push(Term::comp(i, a.clone(), Term::id(b.clone())));
            }
        }
    }
    if let Some((i, a, rest)) = s.as_comp() {
        if let Some((j, b, c)) = rest.as_comp() {
            if j == i {
                out.push(Term::comp(i, Term::comp(i, a.clone(), b.clone()), c.clone()));
            }
        }
    }
    if let Some((j, x, y)) = s.as_comp() {
        if let (Some((i1, a1, b1)), Some((i2, a2, b2))) = (x.as_comp(), y.as_comp()) {
            if i1 == i2 && i1 < j {
                let i = i1;
                if a1 == a2 && a1.dim() == i + 1 && b1.dim() > i + 1 && b2.dim() > i + 1 {
                    out.push(Term::comp(i, a1.clone(), Term::comp(j, b1.clone(), b2.clone())));
                }
                if b1 == b2 && b1.dim() == i + 1 && a1.dim() > i + 1 && a2.dim() > i + 1 {
                    out.push(Term::comp(i, Term::comp(j, a1.clone(), a2.clone()), b1.clone()));
                }
            }
        }
    }
    out
}

fn positions(t: &Term) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_positions(t, &mut path, &mut out);
    out
}

fn collect_positions(t: &Term, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    out.push(path.clone());
    match t.kind() {
        TermKind::Gen(_) => {}
        TermKind::Id(a) => {
            path.push(0);
            collect_positions(a, path, out);
            path.pop();
        }
        TermKind::Comp(_, a, b) => {
            path.push(0);
            collect_positions(a, path, out);
            path.pop();
            path.push(1);
            collect_positions(b, path, out);
            path.pop();
        }
    }
}

fn at(t: &Term, path: &[u8]) -> Term {
    let mut cur = t.clone();
    for &d in path {
        let next = match (cur.kind(), d) {
            (TermKind::Id(a), _) => a.clone(),
            (TermKind::Comp(_, a, _), 0) => a.clone(),
            (TermKind::Comp(_, _, b), _) => b.clone(),
            (TermKind::Gen(_), _) => unreachable!(),
        };
        cur = next;
    }
    cur
}

fn replace(t: &Term, path: &[u8], new: Term) -> Term {
    let Some((&d, rest)) = path.split_first() else {
        return new;
    };
    match t.kind() {
        TermKind::Id(a) => Term::id(replace(a, rest, new)),
        TermKind::Comp(i, a, b) if d == 0 => Term::comp(*i, replace(a, rest, new), b.clone()),
        TermKind::Comp(i, a, b) => Term::comp(*i, a.clone(), replace(b, rest, new)),
        TermKind::Gen(_) => unreachable!(),
    }
}

/// Distinct terms seen along the walk, used to widen local confluence checks.
pub fn walk_terms(t: &Term, rng: &mut impl Rng, steps: usize) -> Vec<Term> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut cur = t.clone();
    for _ in 0..steps {
        cur = random_walk(&cur, rng, 1, 48);
        if seen.insert(cur.clone()) {
            out.push(cur.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{eval, parse};
    use crate::fixtures;

    fn nf(p: &Polygraph, s: &str) -> Cell {
        normalize_expr(p, &parse(s).unwrap()).unwrap()
    }

    #[test]
    fn agrees_with_composition_on_interchange() {
        let p = fixtures::fix_int();
        for s in [
            "comp_1(comp_0(gen phi, gen g), comp_0(gen f', gen psi))",
            "comp_1(comp_0(gen f, gen psi), comp_0(gen phi, gen g'))",
        ] {
            let e = parse(s).unwrap();
            assert_eq!(normalize_expr(&p, &e).unwrap(), eval(&p, &e).unwrap());
        }
    }

    #[test]
    fn identity_of_point() {
        let p = fixtures::fix_int();
        let x = p.lookup("x", None).unwrap().cell();
        assert_eq!(nf(&p, "id(gen x)"), crate::compose::identity(&x));
    }

    #[test]
    fn whiskering_sides_stay_apart() {
        let p = fixtures::fix_eh();
        let a = nf(&p, "comp_1(gen alpha, comp_0(gen alpha, gen f))");
        let b = nf(&p, "comp_1(gen alpha, comp_0(gen f, gen alpha))");
        assert_ne!(a, b);
    }

    #[test]
    fn rejects_ill_typed() {
        let p = fixtures::fix_int();
        let e = normalize_expr(&p, &parse("comp_0(gen phi, gen psi)").unwrap()).unwrap_err();
        assert_eq!(e.to_string(), "illegal composition: no ∘_0 of two 2-cells");
        let e = normalize_expr(&p, &parse("comp_0(gen g, gen f)").unwrap()).unwrap_err();
        assert!(matches!(e, Error::NotComposable { .. }));
    }

    #[test]
    fn unit_and_distribution_rules() {
        let p = fixtures::fix_int();
        assert_eq!(
            nf(&p, "comp_0(id(gen x), comp_1(gen phi, id(gen f')))"),
            nf(&p, "gen phi")
        );
        assert_eq!(
            nf(&p, "comp_0(comp_1(gen phi, id(gen f')), gen g)"),
            nf(&p, "comp_0(gen phi, gen g)")
        );
        assert_eq!(
            nf(&p, "comp_0(gen f, id(gen g))"),
            nf(&p, "id(comp_0(gen f, gen g))")
        );
    }

    #[test]
    fn reads_generator_with_identity_context() {
        let p = fixtures::fix_int();
        assert_eq!(nf(&p, "gen phi"), p.lookup("phi", None).unwrap().cell());
    }

    #[test]
    fn zero_length_walk_gives_equal_expressions() {
        let p = fixtures::fix_int();
        let (a, b) = random_equal_pair(&p, 7, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_pairs_normalize_identically() {
        for p in [fixtures::fix_int(), fixtures::fix_eh()] {
            for seed in 0..40 {
                let (a, b) = random_equal_pair(&p, seed, 12).unwrap();
                let na = normalize_expr(&p, &a).unwrap();
                let nb = normalize_expr(&p, &b).unwrap();
                assert_eq!(na, nb, "{a} vs {b}");
                assert_eq!(na, eval(&p, &a).unwrap());
            }
        }
    }

    #[test]
    fn random_expr_is_well_typed() {
        let p = fixtures::fix_eh();
        for seed in 0..20 {
            let e = random_expr(&p, seed, 5).unwrap();
            assert!(e.size() <= 5);
            assert_eq!(normalize_expr(&p, &e).unwrap(), eval(&p, &e).unwrap());
        }
    }

    #[test]
    fn local_confluence_on_walks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [fixtures::fix_int(), fixtures::fix_eh()] {
            let pool = Pool::grown(&p, &mut rng, 80, 5);
            for _ in 0..20 {
                let t = pool.pick_large(&mut rng).unwrap();
                for w in walk_terms(&t, &mut rng, 8) {
                    assert!(locally_confluent_at(&w), "{w}");
                }
            }
        }
    }
}
