//! Identities and normalizing composition on normal forms.

use crate::error::{Error, Result};
use crate::model::{boundary_unchecked, Body, Cell, Context, Entry, Sign, Whisker};

pub fn identity(u: &Cell) -> Cell {
    Cell::wrap_identity(u.clone())
}

/// `u ∘_i v`, checking that `i = min(dim u, dim v) - 1` and that the
/// `i`-target of `u` is the `i`-source of `v`.
pub fn compose(u: &Cell, i: usize, v: &Cell) -> Result<Cell> {
    let m = u.dim().min(v.dim());
    if m == 0 || i + 1 != m {
        return Err(Error::IllegalComposition {
            i,
            left_dim: u.dim(),
            right_dim: v.dim(),
        });
    }
    let t = boundary_unchecked(u, Sign::Target, i);
    let s = boundary_unchecked(v, Sign::Source, i);
    if t != s {
        return Err(Error::NotComposable {
            i,
            target: t.to_string(),
            found: s.to_string(),
        });
    }
    Ok(comp(u, i, v))
}

/// Left fold of [`compose`] over a nonempty list.
pub fn compose_many(cells: &[Cell], i: usize) -> Result<Cell> {
    let (first, rest) = cells
        .split_first()
        .ok_or_else(|| Error::Precondition("compose_many needs at least one cell".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, c| compose(&acc, i, c))
}

/// Composition without checks; callers guarantee well-typedness.
pub(crate) fn comp(u: &Cell, i: usize, v: &Cell) -> Cell {
    let (du, dv) = (u.dim(), v.dim());
    if du == dv {
        debug_assert_eq!(i + 1, du);
        if u.is_identity() {
            return v.clone();
        }
        if v.is_identity() {
            return u.clone();
        }
        let mut es = u.entries().to_vec();
        es.extend_from_slice(v.entries());
        Cell::from_entries(du, es)
    } else if du < dv {
        debug_assert_eq!(i + 1, du);
        if u.is_identity() {
            return v.clone();
        }
        match v.body() {
            Body::Identity(b) => identity(&comp(u, i, b)),
            Body::Whiskers(es) => Cell::from_entries(
                dv,
                es.iter().map(|e| whisker_entry(e, i, u, Side::Left)).collect(),
            ),
            Body::Point(_) => unreachable!(),
        }
    } else {
        debug_assert_eq!(i + 1, dv);
        if v.is_identity() {
            return u.clone();
        }
        match u.body() {
            Body::Identity(b) => identity(&comp(b, i, v)),
            Body::Whiskers(es) => Cell::from_entries(
                du,
                es.iter().map(|e| whisker_entry(e, i, v, Side::Right)).collect(),
            ),
            Body::Point(_) => unreachable!(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Whiskers one entry by an `(i+1)`-cell `w`: levels above `i+1` get `w`
/// distributed onto both whiskers, level `i+1` absorbs `w` on its own side.
fn whisker_entry(e: &Entry, i: usize, w: &Cell, side: Side) -> Entry {
    let mut levels = e.context.levels.clone();
    for (j, lv) in levels.iter_mut().enumerate().skip(i) {
        let touch = |c: &Cell| match side {
            Side::Left => comp(w, i, c),
            Side::Right => comp(c, i, w),
        };
        if j == i {
            match side {
                Side::Left => lv.left = touch(&lv.left),
                Side::Right => lv.right = touch(&lv.right),
            }
        } else {
            *lv = Whisker {
                left: touch(&lv.left),
                right: touch(&lv.right),
            };
        }
    }
    Entry {
        context: Context { levels },
        generator: e.generator.clone(),
    }
}

/// Evaluates the context of `e` at the source or target of its generator.
pub(crate) fn entry_face(e: &Entry, sign: Sign) -> Cell {
    let base = e
        .generator
        .face(sign)
        .expect("whiskered generator has positive dimension")
        .clone();
    plug(&e.context, base)
}

/// Evaluates a context at a cell without checks.
pub(crate) fn plug(ctx: &Context, u: Cell) -> Cell {
    let mut x = u;
    for (j, w) in ctx.levels.iter().enumerate() {
        x = comp(&comp(&w.left, j, &x), j, &w.right);
    }
    x
}
