//! Polygraphs, generators and cells of the free precategory in normal form.
//!
//! A cell of dimension `d` is either a point (`d = 0`), an identity on a
//! `(d-1)`-cell, or a nonempty list of whiskered `d`-generators composed
//! along dimension `d-1`. Each whiskered generator carries a [`Context`]
//! holding one pair of whiskers per level, outermost level last.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::compose::{self, identity};
use crate::error::{Error, Result};
use crate::expr::{self, Expr, ExprJson};

pub type Name = Arc<str>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Source,
    Target,
}

impl Sign {
    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "-" | "src" | "source" => Some(Sign::Source),
            "+" | "tgt" | "target" => Some(Sign::Target),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Source => Sign::Target,
            Sign::Target => Sign::Source,
        }
    }
}

/// A generator together with its boundary cells.
#[derive(Debug)]
pub struct Generator {
    name: Name,
    dim: usize,
    src: Option<Cell>,
    tgt: Option<Cell>,
}

/// Shared handle on a [`Generator`]. Cells hold these directly, so a cell
/// knows its own boundaries without a polygraph at hand.
#[derive(Clone)]
pub struct GenRef(Arc<Generator>);

impl GenRef {
    pub fn name(&self) -> &Name {
        &self.0.name
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn src(&self) -> Option<&Cell> {
        self.0.src.as_ref()
    }

    pub fn tgt(&self) -> Option<&Cell> {
        self.0.tgt.as_ref()
    }

    pub fn face(&self, sign: Sign) -> Option<&Cell> {
        match sign {
            Sign::Source => self.src(),
            Sign::Target => self.tgt(),
        }
    }

    /// The generator viewed as a cell: a single entry with an identity context.
    pub fn cell(&self) -> Cell {
        if self.dim() == 0 {
            return Cell::point(self.clone());
        }
        let src = self.src().expect("positive-dimensional generator has a source");
        let levels = (1..self.dim())
            .map(|j| Whisker {
                left: identity(&boundary_unchecked(src, Sign::Source, j - 1)),
                right: identity(&boundary_unchecked(src, Sign::Target, j - 1)),
            })
            .collect();
        Cell::from_entries(
            self.dim(),
            vec![Entry {
                context: Context { levels },
                generator: self.clone(),
            }],
        )
    }

    pub fn ptr_eq(&self, other: &GenRef) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// `(dim, name)` key used by maps and supports.
    pub fn key(&self) -> (usize, Name) {
        (self.dim(), self.name().clone())
    }
}

impl PartialEq for GenRef {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.0.dim == other.0.dim
                && self.0.name == other.0.name
                && self.0.src == other.0.src
                && self.0.tgt == other.0.tgt)
    }
}

impl Eq for GenRef {}

impl Hash for GenRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.dim.hash(state);
        self.0.name.hash(state);
    }
}

impl PartialOrd for GenRef {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GenRef {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.ptr_eq(other) {
            return std::cmp::Ordering::Equal;
        }
        (self.0.dim, &self.0.name, &self.0.src, &self.0.tgt).cmp(&(
            other.0.dim,
            &other.0.name,
            &other.0.src,
            &other.0.tgt,
        ))
    }
}

impl fmt::Debug for GenRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name(), self.dim())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Whisker {
    pub left: Cell,
    pub right: Cell,
}

/// Whiskers `(l_j, r_j)` for `j = 1 .. m-1` around an `m`-dimensional hole;
/// `levels[j-1]` holds level `j`, composed along dimension `j-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Context {
    pub levels: Vec<Whisker>,
}

impl Context {
    pub fn is_identity(&self) -> bool {
        self.levels
            .iter()
            .all(|w| w.left.is_identity() && w.right.is_identity())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub context: Context,
    pub generator: GenRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Body {
    Point(GenRef),
    Identity(Cell),
    Whiskers(Vec<Entry>),
}

struct CellNode {
    dim: usize,
    body: Body,
    hash: u64,
    faces: OnceLock<(Cell, Cell)>,
}

/// A cell in normal form. Structural equality is equality in the free precategory.
#[derive(Clone)]
pub struct Cell(Arc<CellNode>);

impl Cell {
    fn make(dim: usize, body: Body) -> Cell {
        let mut h = DefaultHasher::new();
        dim.hash(&mut h);
        body.hash(&mut h);
        Cell(Arc::new(CellNode {
            dim,
            body,
            hash: h.finish(),
            faces: OnceLock::new(),
        }))
    }

    pub fn point(g: GenRef) -> Cell {
        debug_assert_eq!(g.dim(), 0);
        Cell::make(0, Body::Point(g))
    }

    pub(crate) fn wrap_identity(base: Cell) -> Cell {
        Cell::make(base.dim() + 1, Body::Identity(base))
    }

    /// Builds a whisker-list cell without checking composability.
    pub(crate) fn from_entries(dim: usize, entries: Vec<Entry>) -> Cell {
        debug_assert!(!entries.is_empty());
        debug_assert!(entries.iter().all(|e| e.generator.dim() == dim));
        Cell::make(dim, Body::Whiskers(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn body(&self) -> &Body {
        &self.0.body
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.0.body, Body::Identity(_))
    }

    pub fn entries(&self) -> &[Entry] {
        match &self.0.body {
            Body::Whiskers(es) => es,
            _ => &[],
        }
    }

    pub fn ptr_eq(&self, other: &Cell) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Dimension once all identity layers are stripped.
    pub fn true_dim(&self) -> usize {
        let mut c = self;
        while let Body::Identity(b) = &c.0.body {
            c = b;
        }
        c.dim()
    }

    /// The `(dim-1)`-dimensional source or target; `None` for points.
    pub fn face(&self, sign: Sign) -> Option<Cell> {
        if self.dim() == 0 {
            return None;
        }
        let (s, t) = self.0.faces.get_or_init(|| match &self.0.body {
            Body::Identity(b) => (b.clone(), b.clone()),
            Body::Whiskers(es) => (
                compose::entry_face(&es[0], Sign::Source),
                compose::entry_face(&es[es.len() - 1], Sign::Target),
            ),
            Body::Point(_) => unreachable!(),
        });
        Some(match sign {
            Sign::Source => s.clone(),
            Sign::Target => t.clone(),
        })
    }

    pub fn src(&self) -> Option<Cell> {
        self.face(Sign::Source)
    }

    pub fn tgt(&self) -> Option<Cell> {
        self.face(Sign::Target)
    }

    /// Every generator occurring in the normal form, including inside contexts,
    /// but not inside generator boundaries.
    pub fn for_each_generator(&self, f: &mut impl FnMut(&GenRef)) {
        match self.body() {
            Body::Point(g) => f(g),
            Body::Identity(b) => b.for_each_generator(f),
            Body::Whiskers(es) => {
                for e in es {
                    f(&e.generator);
                    for w in &e.context.levels {
                        w.left.for_each_generator(f);
                        w.right.for_each_generator(f);
                    }
                }
            }
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.0.hash == other.0.hash
                && self.0.dim == other.0.dim
                && self.0.body == other.0.body)
    }
}

impl Eq for Cell {}

impl Hash for Cell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.ptr_eq(other) {
            return std::cmp::Ordering::Equal;
        }
        (self.0.dim, &self.0.body).cmp(&(other.0.dim, &other.0.body))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", expr::cell_to_expr(self, None))
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Iterated source or target at dimension `k`.
pub fn boundary(u: &Cell, sign: Sign, k: usize) -> Result<Cell> {
    if k > u.dim() {
        return Err(Error::DimensionOutOfRange {
            requested: k,
            dim: u.dim(),
        });
    }
    Ok(boundary_unchecked(u, sign, k))
}

pub(crate) fn boundary_unchecked(u: &Cell, sign: Sign, k: usize) -> Cell {
    let mut c = u.clone();
    while c.dim() > k {
        c = c.face(sign).expect("positive dimension");
    }
    c
}

/// Two cells of the same dimension `d` are parallel when their `(d-1)`-faces
/// agree; all points are parallel.
pub fn parallel(a: &Cell, b: &Cell) -> bool {
    a.dim() == b.dim() && (a.dim() == 0 || (a.src() == b.src() && a.tgt() == b.tgt()))
}

/// Plugs `u` into the context, checking every composition.
pub fn eval_context(ctx: &Context, u: &Cell) -> Result<Cell> {
    let expected = if u.dim() == 0 { 0 } else { u.dim() - 1 };
    if ctx.levels.len() != expected {
        return Err(Error::ContextMismatch(format!(
            "context has {} levels but the cell has dimension {}",
            ctx.levels.len(),
            u.dim()
        )));
    }
    let mut x = u.clone();
    for (j, w) in ctx.levels.iter().enumerate() {
        if w.left.dim() != j + 1 || w.right.dim() != j + 1 {
            return Err(Error::ContextMismatch(format!(
                "whiskers at level {} must have dimension {}",
                j + 1,
                j + 1
            )));
        }
        let step = compose::compose(&w.left, j, &x)
            .and_then(|y| compose::compose(&y, j, &w.right))
            .map_err(|e| Error::ContextMismatch(format!("level {}: {e}", j + 1)))?;
        x = step;
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    IsIdentity(Cell),
    IsGenerator(GenRef),
    IsComposite,
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::IsIdentity(_) => "identity",
            Classification::IsGenerator(_) => "generator",
            Classification::IsComposite => "composite",
        }
    }
}

pub fn classify(u: &Cell) -> Classification {
    match u.body() {
        Body::Point(g) => Classification::IsGenerator(g.clone()),
        Body::Identity(b) => Classification::IsIdentity(b.clone()),
        Body::Whiskers(es) if es.len() == 1 && es[0].context.is_identity() => {
            Classification::IsGenerator(es[0].generator.clone())
        }
        Body::Whiskers(_) => Classification::IsComposite,
    }
}

/// Number of generator occurrences of positive dimension in the normal form,
/// counting non-identity whiskers recursively.
pub fn size(u: &Cell) -> usize {
    match u.body() {
        Body::Point(_) => 0,
        Body::Identity(b) => size(b),
        Body::Whiskers(es) => es.iter().map(entry_size).sum(),
    }
}

pub fn entry_size(e: &Entry) -> usize {
    1 + e
        .context
        .levels
        .iter()
        .map(|w| whisker_size(&w.left) + whisker_size(&w.right))
        .sum::<usize>()
}

fn whisker_size(w: &Cell) -> usize {
    if w.is_identity() {
        0
    } else {
        size(w)
    }
}

/// Dimension-indexed generator tables.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Polygraph {
    tables: Vec<BTreeMap<Name, GenRef>>,
}

impl Polygraph {
    pub fn new() -> Polygraph {
        Polygraph::default()
    }

    pub fn add_point(&mut self, name: &str) -> Result<GenRef> {
        self.add_generator(name, None)
    }

    /// Adds a generator. `boundary` is `None` for points and `(src, tgt)` otherwise.
    pub fn add_generator(&mut self, name: &str, boundary: Option<(Cell, Cell)>) -> Result<GenRef> {
        let dim = match &boundary {
            None => 0,
            Some((s, t)) => {
                if s.dim() != t.dim() {
                    return Err(Error::Precondition(format!(
                        "source and target of {name} have dimensions {} and {}",
                        s.dim(),
                        t.dim()
                    )));
                }
                if !parallel(s, t) {
                    return Err(Error::Precondition(format!(
                        "source {s} and target {t} of {name} are not parallel"
                    )));
                }
                for c in [s, t] {
                    if let Some(g) = self.foreign_generator(c) {
                        return Err(Error::Precondition(format!(
                            "boundary of {name} uses {g:?}, which is not in the polygraph"
                        )));
                    }
                }
                s.dim() + 1
            }
        };
        if self.get(dim, name).is_some() {
            return Err(Error::Precondition(format!(
                "duplicate generator {name} in dimension {dim}"
            )));
        }
        let (src, tgt) = match boundary {
            None => (None, None),
            Some((s, t)) => (Some(s), Some(t)),
        };
        let g = GenRef(Arc::new(Generator {
            name: Name::from(name),
            dim,
            src,
            tgt,
        }));
        while self.tables.len() <= dim {
            self.tables.push(BTreeMap::new());
        }
        self.tables[dim].insert(g.name().clone(), g.clone());
        Ok(g)
    }

    fn foreign_generator(&self, c: &Cell) -> Option<GenRef> {
        let mut bad = None;
        c.for_each_generator(&mut |g| {
            if bad.is_none() && !self.contains(g) {
                bad = Some(g.clone());
            }
        });
        bad
    }

    /// True when every generator of `u` belongs to this polygraph.
    pub fn owns(&self, u: &Cell) -> bool {
        self.foreign_generator(u).is_none()
    }

    pub fn contains(&self, g: &GenRef) -> bool {
        self.get(g.dim(), g.name()).is_some_and(|h| h == g)
    }

    pub fn get(&self, dim: usize, name: &str) -> Option<&GenRef> {
        self.tables.get(dim).and_then(|t| t.get(name))
    }

    /// Resolves a name, using `dim` when given and failing on ambiguity otherwise.
    pub fn lookup(&self, name: &str, dim: Option<usize>) -> Result<&GenRef> {
        if let Some(d) = dim {
            return self
                .get(d, name)
                .ok_or_else(|| Error::UnknownGenerator(format!("{name}@{d}")));
        }
        let mut found = self.tables.iter().filter_map(|t| t.get(name));
        match (found.next(), found.next()) {
            (Some(g), None) => Ok(g),
            (Some(_), Some(_)) => Err(Error::AmbiguousGenerator(name.to_string())),
            (None, _) => Err(Error::UnknownGenerator(name.to_string())),
        }
    }

    pub fn is_ambiguous(&self, name: &str) -> bool {
        self.tables.iter().filter(|t| t.contains_key(name)).count() > 1
    }

    /// Highest dimension holding a generator.
    pub fn top_dim(&self) -> Option<usize> {
        self.tables.iter().rposition(|t| !t.is_empty())
    }

    /// Declared dimension, which may exceed [`Polygraph::top_dim`] after [`include`].
    pub fn declared_dim(&self) -> Option<usize> {
        self.tables.len().checked_sub(1)
    }

    pub fn table(&self, dim: usize) -> impl Iterator<Item = &GenRef> {
        self.tables.get(dim).into_iter().flat_map(|t| t.values())
    }

    pub fn count(&self, dim: usize) -> usize {
        self.tables.get(dim).map_or(0, |t| t.len())
    }

    /// All generators ordered by `(dim, name)`.
    pub fn generators(&self) -> impl Iterator<Item = &GenRef> {
        self.tables.iter().flat_map(|t| t.values())
    }

    pub fn num_generators(&self) -> usize {
        self.tables.iter().map(|t| t.len()).sum()
    }

    pub fn keys(&self) -> BTreeSet<(usize, Name)> {
        self.generators().map(|g| g.key()).collect()
    }

    /// The sub-polygraph on the generators accepted by `keep`, sharing them.
    /// `keep` must be closed under boundaries.
    pub fn filtered(&self, keep: impl Fn(&GenRef) -> bool) -> Polygraph {
        let mut q = Polygraph {
            tables: self
                .tables
                .iter()
                .map(|t| {
                    t.iter()
                        .filter(|(_, g)| keep(g))
                        .map(|(n, g)| (n.clone(), g.clone()))
                        .collect()
                })
                .collect(),
        };
        while q.tables.last().is_some_and(|t| t.is_empty()) {
            q.tables.pop();
        }
        q
    }
}

impl fmt::Debug for Polygraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for g in self.generators() {
            match (g.src(), g.tgt()) {
                (Some(s), Some(t)) => l.entry(&format_args!("{}: {} -> {}", g.name(), s, t)),
                _ => l.entry(&format_args!("{}", g.name())),
            };
        }
        l.finish()
    }
}

/// Drops every generator of dimension above `n`.
pub fn truncate(p: &Polygraph, n: usize) -> Polygraph {
    let mut q = p.clone();
    q.tables.truncate(n + 1);
    q
}

/// Views `p` as an `n`-polygraph with empty tables above its top dimension.
pub fn include(p: &Polygraph, n: usize) -> Result<Polygraph> {
    if let Some(top) = p.top_dim() {
        if n < top {
            return Err(Error::Precondition(format!(
                "cannot include a {top}-polygraph as a {n}-polygraph"
            )));
        }
    }
    let mut q = p.clone();
    q.tables.truncate(n + 1);
    while q.tables.len() <= n {
        q.tables.push(BTreeMap::new());
    }
    Ok(q)
}

/// A polygraph together with one of its cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub pol: Arc<Polygraph>,
    pub cell: Cell,
}

impl Element {
    pub fn new(pol: Arc<Polygraph>, cell: Cell) -> Result<Element> {
        if !pol.owns(&cell) {
            return Err(Error::Precondition(format!(
                "cell {cell} is not a cell of the given polygraph"
            )));
        }
        Ok(Element { pol, cell })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    DanglingReference,
    DuplicateName,
    DimensionMismatch,
    MissingBoundary,
    NonParallel,
    IllTyped,
    NameCollision,
    Unassigned,
    BoundaryMismatch,
    NotInTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub message: String,
}

/// Result of a structural check; empty `errors` means success.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub(crate) fn error(&mut self, kind: IssueKind, subject: Option<&str>, message: String) {
        self.errors.push(Issue {
            kind,
            subject: subject.map(str::to_string),
            message,
        });
    }

    pub(crate) fn warn(&mut self, kind: IssueKind, subject: Option<&str>, message: String) {
        self.warnings.push(Issue {
            kind,
            subject: subject.map(str::to_string),
            message,
        });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<&str> = self.errors.iter().map(|i| i.message.as_str()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

/// Boundary as written in input: expression text or the JSON expression tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundarySpec {
    Text(String),
    Tree(ExprJson),
}

impl BoundarySpec {
    fn to_expr(&self) -> Result<Expr> {
        match self {
            BoundarySpec::Text(s) => expr::parse(s),
            BoundarySpec::Tree(t) => t.to_expr(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawGenerator {
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src: Option<BoundarySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tgt: Option<BoundarySpec>,
}

/// Polygraph as read from JSON, before any checking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPolygraph {
    pub generators: Vec<RawGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

/// Checks a raw polygraph and lists every violated invariant.
pub fn validate_polygraph(raw: &RawPolygraph) -> Report {
    build(raw).1
}

/// Builds a polygraph, failing with the validation report if it is not clean.
pub fn build_polygraph(raw: &RawPolygraph) -> Result<Polygraph> {
    match build(raw) {
        (Some(p), r) if r.is_ok() => Ok(p),
        (_, r) => Err(Error::InvalidPolygraph(r)),
    }
}

fn build(raw: &RawPolygraph) -> (Option<Polygraph>, Report) {
    let mut report = Report::default();
    let mut p = Polygraph::new();
    let mut order: Vec<&RawGenerator> = raw.generators.iter().collect();
    order.sort_by_key(|g| g.dim);

    let mut dims_of: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    for g in &raw.generators {
        dims_of.entry(g.name.as_str()).or_default().insert(g.dim);
    }
    for (name, dims) in &dims_of {
        if dims.len() > 1 {
            report.warn(
                IssueKind::NameCollision,
                Some(name),
                format!("name {name} is used in dimensions {dims:?}"),
            );
        }
    }

    for g in order {
        let subject = Some(g.name.as_str());
        if g.name.is_empty() || g.name.chars().any(|c| c.is_whitespace() || "(),@".contains(c)) {
            report.error(
                IssueKind::IllTyped,
                subject,
                format!("invalid generator name {:?}", g.name),
            );
            continue;
        }
        if p.get(g.dim, &g.name).is_some() {
            report.error(
                IssueKind::DuplicateName,
                subject,
                format!("duplicate generator {} in dimension {}", g.name, g.dim),
            );
            continue;
        }
        if g.dim == 0 {
            if g.src.is_some() || g.tgt.is_some() {
                report.error(
                    IssueKind::DimensionMismatch,
                    subject,
                    format!("point {} must not have a boundary", g.name),
                );
                continue;
            }
            p.add_point(&g.name).expect("fresh point");
            continue;
        }
        let (Some(s), Some(t)) = (&g.src, &g.tgt) else {
            report.error(
                IssueKind::MissingBoundary,
                subject,
                format!("generator {} of dimension {} needs src and tgt", g.name, g.dim),
            );
            continue;
        };
        let mut faces = Vec::new();
        for (label, spec) in [("src", s), ("tgt", t)] {
            let cell = spec.to_expr().and_then(|e| expr::eval(&p, &e));
            match cell {
                Ok(c) if c.dim() + 1 == g.dim => faces.push(c),
                Ok(c) => report.error(
                    IssueKind::DimensionMismatch,
                    subject,
                    format!(
                        "{label} of {} has dimension {} but should have dimension {}",
                        g.name,
                        c.dim(),
                        g.dim - 1
                    ),
                ),
                Err(Error::UnknownGenerator(n)) => report.error(
                    IssueKind::DanglingReference,
                    subject,
                    format!("{label} of {} refers to missing generator {n}", g.name),
                ),
                Err(e) => report.error(
                    IssueKind::IllTyped,
                    subject,
                    format!("{label} of {}: {e}", g.name),
                ),
            }
        }
        if faces.len() != 2 {
            continue;
        }
        let tgt = faces.pop().unwrap();
        let src = faces.pop().unwrap();
        if !parallel(&src, &tgt) {
            report.error(
                IssueKind::NonParallel,
                subject,
                format!("src {src} and tgt {tgt} of {} are not parallel", g.name),
            );
            continue;
        }
        p.add_generator(&g.name, Some((src, tgt)))
            .expect("checked generator");
    }
    if let Some(d) = raw.dim {
        match include(&p, d) {
            Ok(q) => p = q,
            Err(e) => report.error(IssueKind::DimensionMismatch, None, e.to_string()),
        }
    }
    (Some(p), report)
}
