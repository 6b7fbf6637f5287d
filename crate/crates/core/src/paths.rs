//! Finite paths, surfaces and eventually periodic infinite paths.
//!
//! An [`InfinitePathSpec`] realises a bi-infinite path `t ↦ γ(t)`:
//! steps `0..c` are the core, steps `t ≥ c` cycle through the positive period
//! and steps `t < 0` cycle through the negative period, which is stored in
//! forward (increasing `t`) order and therefore read right to left when walking
//! away from the core. Vertex `v(t)` is the start of step `t`; `v(0)` is the base.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::lattice::{chain_boundary, faces_boundary, Axis, Direction, Edge, Face, Region, Sign, Vertex};

pub type Word = Vec<Direction>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Negative,
    Positive,
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tail::Negative => "negative",
            Tail::Positive => "positive",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("path has no edges")]
    Empty,
    #[error("edge {index} does not start where the previous edge ends")]
    NotConnected { index: usize },
    #[error("path revisits vertex {vertex}")]
    SelfIntersecting { vertex: Vertex },
    #[error("{tail} period is empty")]
    EmptyPeriod { tail: Tail },
    #[error("{tail} period has zero net displacement")]
    ZeroDisplacement { tail: Tail },
    #[error("window [{a}, {b}] is empty")]
    BadWindow { a: i64, b: i64 },
    #[error("replacement segment ends at {got}, expected {expected}")]
    SegmentMismatch { expected: Vertex, got: Vertex },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("surface has no faces")]
    Empty,
    #[error("surface boundary is not a single closed path")]
    MalformedBoundary,
    #[error("surface intersects itself")]
    SelfIntersecting,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid step atom {atom:?} at offset {offset}")]
pub struct WordError {
    pub offset: usize,
    pub atom: String,
}

/// Parses a word of two-character atoms such as `"X+Y-Z+"`.
pub fn parse_word(s: &str) -> Result<Word, WordError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::with_capacity(chars.len() / 2);
    for chunk in chars.chunks(2) {
        let offset = chunk[0].0;
        let atom: String = chunk.iter().map(|&(_, c)| c).collect();
        match atom.parse::<Direction>() {
            Ok(d) if chunk.len() == 2 => out.push(d),
            _ => return Err(WordError { offset, atom }),
        }
    }
    Ok(out)
}

pub fn format_word(w: &[Direction]) -> String {
    w.iter().map(|d| d.to_string()).collect()
}

fn displacement(w: &[Direction]) -> Vertex {
    w.iter().fold(Vertex::ORIGIN, |acc, d| acc + d.unit())
}

fn prefixes(w: &[Direction]) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(w.len());
    let mut acc = Vertex::ORIGIN;
    for d in w {
        out.push(acc);
        acc = acc + d.unit();
    }
    out
}

/// Reverses a word and every letter in it: the walk back along the same edges.
pub fn reverse_word(w: &[Direction]) -> Word {
    w.iter().rev().map(|d| d.reversed()).collect()
}

fn walk_vertices(start: Vertex, steps: &[Direction]) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(steps.len() + 1);
    let mut v = start;
    out.push(v);
    for &d in steps {
        v = v.step(d);
        out.push(v);
    }
    out
}

/// A sequence of steps with no validity requirement (projections may
/// revisit vertices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    pub start: Vertex,
    pub steps: Word,
}

impl Walk {
    pub fn vertices(&self) -> Vec<Vertex> {
        walk_vertices(self.start, &self.steps)
    }

    pub fn end(&self) -> Vertex {
        self.start + displacement(&self.steps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePath {
    start: Vertex,
    steps: Word,
    closed: bool,
}

impl FinitePath {
    pub fn new(start: Vertex, steps: Word) -> Result<Self, PathError> {
        if steps.is_empty() {
            return Err(PathError::Empty);
        }
        let verts = walk_vertices(start, &steps);
        let closed = verts[0] == verts[verts.len() - 1];
        let interior = if closed { &verts[..verts.len() - 1] } else { &verts[..] };
        let mut seen = HashSet::with_capacity(interior.len());
        for &v in interior {
            if !seen.insert(v) {
                return Err(PathError::SelfIntersecting { vertex: v });
            }
        }
        // a closed walk of length two is an immediate backtrack
        if closed && steps.len() < 4 {
            return Err(PathError::SelfIntersecting { vertex: start });
        }
        Ok(FinitePath { start, steps, closed })
    }

    pub fn from_edges(edges: &[Edge]) -> Result<Self, PathError> {
        validate_finite_path(edges)
    }

    pub fn start(&self) -> Vertex {
        self.start
    }

    pub fn end(&self) -> Vertex {
        self.start + displacement(&self.steps)
    }

    pub fn steps(&self) -> &[Direction] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        walk_vertices(self.start, &self.steps)
    }

    /// Oriented edges in traversal order.
    pub fn edges(&self) -> Vec<Edge> {
        let verts = self.vertices();
        self.steps.iter().zip(verts).map(|(&d, v)| Edge::from_step(v, d)).collect()
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().into_iter().map(Edge::canonical).collect()
    }

    pub fn reversed(&self) -> FinitePath {
        FinitePath { start: self.end(), steps: reverse_word(&self.steps), closed: self.closed }
    }

    pub fn as_walk(&self) -> Walk {
        Walk { start: self.start, steps: self.steps.clone() }
    }
}

impl fmt::Display for FinitePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, format_word(&self.steps))
    }
}

pub fn validate_finite_path(edges: &[Edge]) -> Result<FinitePath, PathError> {
    let first = edges.first().ok_or(PathError::Empty)?;
    for i in 1..edges.len() {
        if edges[i - 1].end() != edges[i].start() {
            return Err(PathError::NotConnected { index: i });
        }
    }
    FinitePath::new(first.start(), edges.iter().map(|e| e.direction()).collect())
}

/// A finite face set with its mod-2 boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    faces: BTreeSet<Face>,
    boundary: BTreeSet<Edge>,
}

impl Surface {
    pub fn faces(&self) -> &BTreeSet<Face> {
        &self.faces
    }

    /// Canonical boundary edges.
    pub fn boundary(&self) -> &BTreeSet<Edge> {
        &self.boundary
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    /// The boundary as a closed path starting at the least boundary edge,
    /// traversed in its positive direction.
    pub fn boundary_cycle(&self) -> Option<FinitePath> {
        let first = *self.boundary.iter().next()?;
        let mut incident: BTreeMap<Vertex, Vec<Edge>> = BTreeMap::new();
        for &e in &self.boundary {
            incident.entry(e.base).or_default().push(e);
            incident.entry(e.tip()).or_default().push(e);
        }
        let mut steps = vec![first.direction()];
        let mut prev = first;
        let mut at = first.tip();
        while at != first.base {
            let next = *incident[&at].iter().find(|&&e| e != prev)?;
            let dir = if next.base == at { next.direction() } else { next.direction().reversed() };
            steps.push(dir);
            at = at.step(dir);
            prev = next;
        }
        FinitePath::new(first.base, steps).ok()
    }
}

pub fn validate_surface(faces: &[Face]) -> Result<Surface, SurfaceError> {
    if faces.is_empty() {
        return Err(SurfaceError::Empty);
    }
    let set: BTreeSet<Face> = faces.iter().copied().collect();
    if set.len() != faces.len() {
        return Err(SurfaceError::SelfIntersecting);
    }
    let boundary = faces_boundary(&set);
    if !boundary.is_empty() && !is_single_cycle(&boundary) {
        return Err(SurfaceError::MalformedBoundary);
    }
    // independent face boundaries, except for the single relation of a closed surface
    let edges: Vec<Edge> = set
        .iter()
        .flat_map(|&f| crate::lattice::boundary_face(f))
        .map(Edge::canonical)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let rows: Vec<crate::gf2::BitVec> = set
        .iter()
        .map(|&f| {
            crate::gf2::BitVec::from_indices(
                edges.len(),
                crate::lattice::boundary_face(f).iter().map(|e| index[&e.canonical()]),
            )
        })
        .collect();
    let expected = if boundary.is_empty() { set.len() - 1 } else { set.len() };
    if crate::gf2::rank(&rows) != expected {
        return Err(SurfaceError::SelfIntersecting);
    }
    Ok(Surface { faces: set, boundary })
}

fn is_single_cycle(edges: &BTreeSet<Edge>) -> bool {
    let mut degree: BTreeMap<Vertex, usize> = BTreeMap::new();
    for e in edges {
        *degree.entry(e.base).or_default() += 1;
        *degree.entry(e.tip()).or_default() += 1;
    }
    if degree.values().any(|&d| d != 2) {
        return false;
    }
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in edges {
        adj.entry(e.base).or_default().push(e.tip());
        adj.entry(e.tip()).or_default().push(e.base);
    }
    let start = *adj.keys().next().expect("nonempty boundary");
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == adj.len() && chain_boundary(edges).is_empty()
}

/// A set of the six directions, one bit per [`Direction::index`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DirSet(u8);

impl DirSet {
    pub const EMPTY: DirSet = DirSet(0);

    pub fn from_bits(bits: u8) -> Self {
        DirSet(bits & 0b11_1111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn single(d: Direction) -> Self {
        DirSet(1 << d.index())
    }

    pub fn insert(&mut self, d: Direction) {
        self.0 |= 1 << d.index();
    }

    pub fn contains(self, d: Direction) -> bool {
        self.0 >> d.index() & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: DirSet) -> DirSet {
        DirSet(self.0 | o.0)
    }

    pub fn intersection(self, o: DirSet) -> DirSet {
        DirSet(self.0 & o.0)
    }

    pub fn is_disjoint(self, o: DirSet) -> bool {
        self.0 & o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Direction> {
        Direction::ALL.into_iter().filter(move |d| self.contains(*d))
    }

    pub fn reversed(self) -> DirSet {
        self.iter().map(Direction::reversed).collect()
    }

    /// No axis appears with both signs.
    pub fn is_sign_consistent(self) -> bool {
        (0..3).all(|a| self.0 >> (2 * a) & 0b11 != 0b11)
    }

    /// Both signs of a single axis and nothing else.
    pub fn is_line(self) -> bool {
        self.len() == 2 && !self.is_sign_consistent()
    }
}

impl FromIterator<Direction> for DirSet {
    fn from_iter<I: IntoIterator<Item = Direction>>(iter: I) -> Self {
        let mut s = DirSet::EMPTY;
        for d in iter {
            s.insert(d);
        }
        s
    }
}

impl fmt::Display for DirSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for DirSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Infinity directions of an infinite path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectionSet {
    pub plus: DirSet,
    pub minus: DirSet,
}

impl DirectionSet {
    pub fn all(&self) -> DirSet {
        self.plus.union(self.minus)
    }

    pub fn swapped(&self) -> DirectionSet {
        DirectionSet { plus: self.minus, minus: self.plus }
    }
}

/// A ray `s ↦ start + ⌊s/p⌋·d + pre[s mod p]` for `s ≥ 0`, with `d` the
/// displacement of one period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub start: Vertex,
    pub word: Word,
    pre: Vec<Vertex>,
    d: Vertex,
}

impl Ray {
    pub fn new(start: Vertex, word: Word) -> Self {
        let pre = prefixes(&word);
        let d = displacement(&word);
        Ray { start, word, pre, d }
    }

    pub fn displacement(&self) -> Vertex {
        self.d
    }

    pub fn period(&self) -> i64 {
        self.word.len() as i64
    }

    pub fn vertex(&self, s: i64) -> Vertex {
        let p = self.period();
        self.start + s.div_euclid(p) * self.d + self.pre[s.rem_euclid(p) as usize]
    }

    pub fn edge(&self, s: i64) -> Edge {
        Edge::from_step(self.vertex(s), self.word[s.rem_euclid(self.period()) as usize])
    }

    /// Largest period index `m` for which some vertex of period `m` can lie in
    /// `region`; `-1` when none can.
    fn last_period_in(&self, region: &Region) -> i64 {
        let axis = *Axis::ALL.iter().max_by_key(|&&a| self.d.get(a).abs()).expect("three axes");
        let di = self.d.get(axis);
        let s = self.start.get(axis);
        let lo = self.pre.iter().map(|p| p.get(axis)).min().unwrap_or(0);
        let hi = self.pre.iter().map(|p| p.get(axis)).max().unwrap_or(0);
        let m = if di > 0 {
            (region.max().get(axis) - s - lo).div_euclid(di)
        } else {
            (s + hi - region.min().get(axis)).div_euclid(-di)
        };
        m.max(-1)
    }

    /// Edges of the bi-infinite periodic line through this ray, reduced
    /// modulo the translation `t`, which must be a positive multiple of `d`.
    fn line_reps(&self, t: Vertex) -> BTreeSet<Edge> {
        let tt = t.dot(t);
        let k = ratio(t, self.d).expect("translation parallel to displacement");
        let mut out = BTreeSet::new();
        for s in 0..k * self.period() {
            let e = self.edge(s).canonical();
            let j = e.base.dot(t).div_euclid(tt);
            out.insert(Edge::new(e.base - j * t, e.axis));
        }
        out
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: Vertex) -> (Vertex, i64) {
    let g = gcd(gcd(v.x, v.y), v.z);
    (Vertex::new(v.x / g, v.y / g, v.z / g), g)
}

/// `λ` with `a = λ·b`, when it exists as an integer.
fn ratio(a: Vertex, b: Vertex) -> Option<i64> {
    let axis = *Axis::ALL.iter().find(|&&ax| b.get(ax) != 0)?;
    let (num, den) = (a.get(axis), b.get(axis));
    if num % den != 0 {
        return None;
    }
    let lam = num / den;
    (lam * b == a).then_some(lam)
}

fn cross128(a: Vertex, b: Vertex) -> [i128; 3] {
    let (ax, ay, az) = (a.x as i128, a.y as i128, a.z as i128);
    let (bx, by, bz) = (b.x as i128, b.y as i128, b.z as i128);
    [ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx]
}

fn dot128(a: [i128; 3], b: [i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn to128(v: Vertex) -> [i128; 3] {
    [v.x as i128, v.y as i128, v.z as i128]
}

/// Vertex coincidences between two rays, as `(s_a, s_b)` pairs.
struct RayHits {
    pairs: Vec<(i64, i64)>,
    infinite: bool,
}

fn ray_point_hits(ray: &Ray, x: Vertex) -> Vec<i64> {
    let p = ray.period();
    let mut out = Vec::new();
    for (k, pre) in ray.pre.iter().enumerate() {
        if let Some(m) = ratio(x - ray.start - *pre, ray.d) {
            if m >= 0 {
                out.push(m * p + k as i64);
            }
        }
    }
    out
}

fn ray_self_hits(ray: &Ray) -> bool {
    for k in 0..ray.pre.len() {
        for l in k + 1..ray.pre.len() {
            let diff = ray.pre[l] - ray.pre[k];
            if diff.is_zero() || ratio(diff, ray.d).is_some() {
                return true;
            }
        }
    }
    false
}

fn ray_ray_hits(a: &Ray, b: &Ray) -> RayHits {
    let mut pairs = Vec::new();
    let mut infinite = false;
    let cross = cross128(a.d, b.d);
    let cc = dot128(cross, cross);
    let (pa, pb) = (a.period(), b.period());
    for (k, prea) in a.pre.iter().enumerate() {
        for (l, preb) in b.pre.iter().enumerate() {
            // m·da − n·db = r with m, n ≥ 0
            let r = b.start + *preb - a.start - *prea;
            if cc != 0 {
                if dot128(to128(r), cross) != 0 {
                    continue;
                }
                let mnum = dot128(cross128(r, b.d), cross);
                let nnum = dot128(cross128(r, a.d), cross);
                if mnum % cc != 0 || nnum % cc != 0 {
                    continue;
                }
                let (m, n) = ((mnum / cc) as i64, (nnum / cc) as i64);
                if m >= 0 && n >= 0 && m * a.d - n * b.d == r {
                    pairs.push((m * pa + k as i64, n * pb + l as i64));
                }
                continue;
            }
            let (u, ga) = primitive(a.d);
            let gb = ratio(b.d, u).expect("parallel displacements");
            let Some(rho) = (if r.is_zero() { Some(0) } else { ratio(r, u) }) else {
                continue;
            };
            if gb > 0 {
                if rho % gcd(ga, gb) == 0 {
                    infinite = true;
                }
                continue;
            }
            // m·ga + n·|gb| = rho
            let gb = -gb;
            if rho < 0 {
                continue;
            }
            for n in 0..=rho / gb {
                let rest = rho - n * gb;
                if rest % ga == 0 {
                    pairs.push(((rest / ga) * pa + k as i64, n * pb + l as i64));
                }
            }
        }
    }
    RayHits { pairs, infinite }
}

/// Eventually equal edge sets for two rays.
pub fn rays_equivalent(a: &Ray, b: &Ray) -> bool {
    let (u, ga) = primitive(a.d);
    let Some(gb) = ratio(b.d, u) else {
        return false;
    };
    if gb <= 0 {
        return false;
    }
    let t = (ga / gcd(ga, gb) * gb) * u;
    a.line_reps(t) == b.line_reps(t)
}

/// The periodic lines through two rays share an edge, so the rays overlap
/// in infinitely many edges.
fn rays_share_infinitely(a: &Ray, b: &Ray) -> bool {
    let (u, ga) = primitive(a.d);
    let Some(gb) = ratio(b.d, u) else {
        return false;
    };
    if gb <= 0 {
        return false;
    }
    let t = (ga / gcd(ga, gb) * gb) * u;
    !a.line_reps(t).is_disjoint(&b.line_reps(t))
}

/// Finite description of a bi-infinite, non-self-intersecting dual path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfinitePathSpec {
    neg: Word,
    core: Word,
    pos: Word,
    base: Vertex,
    core_vertices: Vec<Vertex>,
    pre_neg: Vec<Vertex>,
    pre_pos: Vec<Vertex>,
    d_neg: Vertex,
    d_pos: Vertex,
}

impl InfinitePathSpec {
    pub fn new(neg: Word, core: Word, pos: Word, base: Vertex) -> Result<Self, PathError> {
        if neg.is_empty() {
            return Err(PathError::EmptyPeriod { tail: Tail::Negative });
        }
        if pos.is_empty() {
            return Err(PathError::EmptyPeriod { tail: Tail::Positive });
        }
        let (d_neg, d_pos) = (displacement(&neg), displacement(&pos));
        if d_neg.is_zero() {
            return Err(PathError::ZeroDisplacement { tail: Tail::Negative });
        }
        if d_pos.is_zero() {
            return Err(PathError::ZeroDisplacement { tail: Tail::Positive });
        }
        let spec = InfinitePathSpec {
            core_vertices: walk_vertices(base, &core),
            pre_neg: prefixes(&neg),
            pre_pos: prefixes(&pos),
            neg,
            core,
            pos,
            base,
            d_neg,
            d_pos,
        };
        spec.check_injective()?;
        Ok(spec)
    }

    /// Parses the three words of a spec.
    pub fn parse(neg: &str, core: &str, pos: &str, base: Vertex) -> Result<Self, SpecParseError> {
        let w = |s: &str, field: &'static str| parse_word(s).map_err(|e| SpecParseError::Word { field, error: e });
        let (n, c, p) = (w(neg, "neg_period")?, w(core, "core")?, w(pos, "pos_period")?);
        InfinitePathSpec::new(n, c, p, base).map_err(SpecParseError::Path)
    }

    pub fn neg_period(&self) -> &[Direction] {
        &self.neg
    }

    pub fn core(&self) -> &[Direction] {
        &self.core
    }

    pub fn pos_period(&self) -> &[Direction] {
        &self.pos
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn core_len(&self) -> i64 {
        self.core.len() as i64
    }

    pub fn step(&self, t: i64) -> Direction {
        let c = self.core_len();
        if t >= c {
            self.pos[(t - c).rem_euclid(self.pos.len() as i64) as usize]
        } else if t >= 0 {
            self.core[t as usize]
        } else {
            self.neg[t.rem_euclid(self.neg.len() as i64) as usize]
        }
    }

    pub fn vertex(&self, t: i64) -> Vertex {
        let c = self.core_len();
        if t > c {
            let (p, s) = (self.pos.len() as i64, t - c);
            self.core_vertices[c as usize] + s.div_euclid(p) * self.d_pos + self.pre_pos[s.rem_euclid(p) as usize]
        } else if t >= 0 {
            self.core_vertices[t as usize]
        } else {
            let q = self.neg.len() as i64;
            let k = t.rem_euclid(q);
            let periods = (k - t) / q;
            self.base - periods * self.d_neg + self.pre_neg[k as usize]
        }
    }

    pub fn edge(&self, t: i64) -> Edge {
        Edge::from_step(self.vertex(t), self.step(t))
    }

    /// Steps `a..b`.
    pub fn steps(&self, a: i64, b: i64) -> Word {
        (a..b).map(|t| self.step(t)).collect()
    }

    pub fn displacement(&self, tail: Tail) -> Vertex {
        match tail {
            Tail::Negative => self.d_neg,
            Tail::Positive => self.d_pos,
        }
    }

    /// Edges `t ≥ c`, starting at `v(c)`.
    pub fn positive_ray(&self) -> Ray {
        Ray::new(self.vertex(self.core_len()), self.pos.clone())
    }

    /// Edges `t < 0`, walked outward from the base.
    pub fn negative_ray(&self) -> Ray {
        Ray::new(self.base, reverse_word(&self.neg))
    }

    fn check_injective(&self) -> Result<(), PathError> {
        let c = self.core_len();
        let mut seen = HashSet::with_capacity(self.core_vertices.len());
        for &v in &self.core_vertices {
            if !seen.insert(v) {
                return Err(PathError::SelfIntersecting { vertex: v });
            }
        }
        let (pos, neg) = (self.positive_ray(), self.negative_ray());
        if ray_self_hits(&pos) {
            return Err(PathError::SelfIntersecting { vertex: pos.start });
        }
        if ray_self_hits(&neg) {
            return Err(PathError::SelfIntersecting { vertex: neg.start });
        }
        for (t, &v) in self.core_vertices.iter().enumerate() {
            let t = t as i64;
            if ray_point_hits(&pos, v).into_iter().any(|s| c + s != t)
                || ray_point_hits(&neg, v).into_iter().any(|s| -s != t)
            {
                return Err(PathError::SelfIntersecting { vertex: v });
            }
        }
        let hits = ray_ray_hits(&pos, &neg);
        if hits.infinite {
            return Err(PathError::SelfIntersecting { vertex: pos.start });
        }
        if let Some(&(s, _)) = hits.pairs.iter().find(|&&(s1, s2)| c + s1 != -s2) {
            return Err(PathError::SelfIntersecting { vertex: pos.vertex(s) });
        }
        Ok(())
    }

    /// Same path with `t ↦ c − t`, steps reversed.
    pub fn reversed(&self) -> InfinitePathSpec {
        InfinitePathSpec::new(
            reverse_word(&self.pos),
            reverse_word(&self.core),
            reverse_word(&self.neg),
            self.vertex(self.core_len()),
        )
        .expect("reversal preserves validity")
    }

    fn rotated_neg(&self, lo: i64) -> Word {
        let q = self.neg.len() as i64;
        (0..q).map(|k| self.neg[(k + lo).rem_euclid(q) as usize]).collect()
    }

    fn rotated_pos(&self, hi: i64) -> Word {
        let (p, c) = (self.pos.len() as i64, self.core_len());
        (0..p).map(|k| self.pos[(k + hi - c).rem_euclid(p) as usize]).collect()
    }

    /// `(neg, base, prefix)` such that the steps before `a` are the negative
    /// tail `neg` followed by `prefix`, starting at `base`.
    pub fn negative_half(&self, a: i64) -> (Word, Vertex, Word) {
        let lo = a.min(0);
        (self.rotated_neg(lo), self.vertex(lo), self.steps(lo, a))
    }

    /// `(suffix, pos)` such that the steps from `b` on are `suffix` followed
    /// by the positive tail `pos`.
    pub fn positive_half(&self, b: i64) -> (Word, Word) {
        let hi = b.max(self.core_len());
        (self.steps(b, hi), self.rotated_pos(hi))
    }

    /// Replaces steps `i..j` by `segment`, which must join `v(i)` to `v(j)`.
    pub fn with_segment_replaced(&self, i: i64, j: i64, segment: &[Direction]) -> Result<Self, PathError> {
        if i > j {
            return Err(PathError::BadWindow { a: i, b: j });
        }
        let (from, to) = (self.vertex(i), self.vertex(j));
        let got = from + displacement(segment);
        if got != to {
            return Err(PathError::SegmentMismatch { expected: to, got });
        }
        let (neg, base, mut core) = self.negative_half(i);
        let (suffix, pos) = self.positive_half(j);
        core.extend_from_slice(segment);
        core.extend(suffix);
        InfinitePathSpec::new(neg, core, pos, base)
    }

    /// Equivalent spec whose core spans at least `[lo, hi)` of the current
    /// parametrisation.
    pub fn rewindowed(&self, lo: i64, hi: i64) -> Self {
        let (lo, hi) = (lo.min(0), hi.max(self.core_len()));
        let seg = self.steps(lo, hi);
        self.with_segment_replaced(lo, hi, &seg).expect("rewindowing preserves validity")
    }

    /// `(a, b)` with `v(t)` outside `region` whenever `t < a` or `t > b`.
    pub fn exit_window(&self, region: &Region) -> (i64, i64) {
        let (pos, neg) = (self.positive_ray(), self.negative_ray());
        let b = self.core_len() + (pos.last_period_in(region) + 1) * pos.period();
        let a = -(neg.last_period_in(region) + 1) * neg.period();
        (a.min(0), b.max(self.core_len()))
    }

    /// Parameters `t` with `v(t)` in `region`, ascending.
    pub fn visits(&self, region: &Region) -> Vec<i64> {
        let (a, b) = self.exit_window(region);
        (a..=b).filter(|&t| region.contains(self.vertex(t))).collect()
    }

    /// Realised edges (canonical) with both endpoints in `region`, with their parameters.
    pub fn edges_in(&self, region: &Region) -> Vec<(i64, Edge)> {
        let (a, b) = self.exit_window(region);
        (a..b)
            .filter(|&t| region.contains(self.vertex(t)) && region.contains(self.vertex(t + 1)))
            .map(|t| (t, self.edge(t).canonical()))
            .collect()
    }

    /// Parameters at which `self` and `other` traverse the same edge.
    /// Errors when they share infinitely many edges.
    pub fn shared_edges(&self, other: &InfinitePathSpec) -> Result<Vec<(i64, i64)>, InfiniteOverlap> {
        let mut vertex_hits: BTreeSet<(i64, i64)> = BTreeSet::new();
        let ca = self.core_len();
        let cb = other.core_len();
        let pieces = |s: &InfinitePathSpec| {
            let c = s.core_len();
            [(s.positive_ray(), c, 1i64), (s.negative_ray(), 0, -1i64)]
        };
        let (pa, pb) = (pieces(self), pieces(other));
        for (ta, &va) in self.core_vertices.iter().enumerate() {
            for (tb, &vb) in other.core_vertices.iter().enumerate() {
                if va == vb {
                    vertex_hits.insert((ta as i64, tb as i64));
                }
            }
            for (ray, off, sgn) in &pb {
                for s in ray_point_hits(ray, va) {
                    vertex_hits.insert((ta as i64, off + sgn * s));
                }
            }
        }
        for (tb, &vb) in other.core_vertices.iter().enumerate() {
            for (ray, off, sgn) in &pa {
                for s in ray_point_hits(ray, vb) {
                    vertex_hits.insert((off + sgn * s, tb as i64));
                }
            }
        }
        for (ra, offa, sa) in &pa {
            for (rb, offb, sb) in &pb {
                let hits = ray_ray_hits(ra, rb);
                if hits.infinite {
                    if rays_share_infinitely(ra, rb) {
                        return Err(InfiniteOverlap);
                    }
                    continue;
                }
                for (s1, s2) in hits.pairs {
                    vertex_hits.insert((offa + sa * s1, offb + sb * s2));
                }
            }
        }
        let _ = (ca, cb);
        let mut out = BTreeSet::new();
        for (ta, tb) in vertex_hits {
            for da in [ta - 1, ta] {
                for db in [tb - 1, tb] {
                    if self.edge(da).canonical() == other.edge(db).canonical() {
                        out.insert((da, db));
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("paths share infinitely many edges")]
pub struct InfiniteOverlap;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecParseError {
    #[error("{field}: {error}")]
    Word { field: &'static str, error: WordError },
    #[error(transparent)]
    Path(PathError),
}

impl fmt::Display for InfinitePathSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "neg={} core={} pos={} base={}",
            format_word(&self.neg),
            format_word(&self.core),
            format_word(&self.pos),
            self.base
        )
    }
}

pub fn truncate(spec: &InfinitePathSpec, a: i64, b: i64) -> Result<FinitePath, PathError> {
    if a > b {
        return Err(PathError::BadWindow { a, b });
    }
    FinitePath::new(spec.vertex(a), spec.steps(a, b + 1))
}

pub fn infinity_directions(spec: &InfinitePathSpec) -> DirectionSet {
    DirectionSet { plus: spec.pos.iter().copied().collect(), minus: spec.neg.iter().map(|d| d.reversed()).collect() }
}

/// Per-axis sign assignment of a monotone path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monotonicity {
    pub monotone: bool,
    /// Sign used on each axis, `None` when the axis is unused (free).
    pub signs: [Option<Sign>; 3],
    /// Axes traversed with both signs.
    pub conflicting: Vec<Axis>,
}

pub fn word_monotonicity<'a, I: IntoIterator<Item = &'a Direction>>(steps: I) -> Monotonicity {
    let used: DirSet = steps.into_iter().copied().collect();
    let mut signs = [None; 3];
    let mut conflicting = Vec::new();
    for axis in Axis::ALL {
        let p = used.contains(Direction::new(axis, Sign::Plus));
        let m = used.contains(Direction::new(axis, Sign::Minus));
        signs[axis.index()] = match (p, m) {
            (true, true) => {
                conflicting.push(axis);
                None
            }
            (true, false) => Some(Sign::Plus),
            (false, true) => Some(Sign::Minus),
            (false, false) => None,
        };
    }
    Monotonicity { monotone: conflicting.is_empty(), signs, conflicting }
}

pub fn is_monotonic(spec: &InfinitePathSpec) -> Monotonicity {
    word_monotonicity(spec.neg.iter().chain(&spec.core).chain(&spec.pos))
}

/// Finite symmetric difference of the realised edge sets.
pub fn path_equivalent(p: &InfinitePathSpec, q: &InfinitePathSpec) -> bool {
    let (p1, p2) = (p.positive_ray(), p.negative_ray());
    let (q1, q2) = (q.positive_ray(), q.negative_ray());
    (rays_equivalent(&p1, &q1) && rays_equivalent(&p2, &q2)) || (rays_equivalent(&p1, &q2) && rays_equivalent(&p2, &q1))
}

pub fn count_edges_in_region(spec: &InfinitePathSpec, region: &Region) -> usize {
    spec.edges_in(region).len()
}

/// A cuboid outside which every step points along an infinity direction
/// (negative-tail steps counted in their outward orientation).
pub fn enclosing_region(spec: &InfinitePathSpec) -> Region {
    let dirs = infinity_directions(spec);
    let mut region = Region::point(spec.base);
    for t in 0..spec.core_len() {
        let d = spec.step(t);
        if !(dirs.plus.contains(d) || dirs.minus.contains(d.reversed())) {
            region = region.including(spec.vertex(t)).including(spec.vertex(t + 1));
        }
    }
    region
}
