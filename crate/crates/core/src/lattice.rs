//! Geometry of the cubic lattice Z³ and its dual.
//!
//! Both lattices use integer coordinates. A dual vertex `w` sits at the centre
//! of the primal cell whose lesser corner is `w`, i.e. at `w + (½,½,½)`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("region corner {min} exceeds {max}")]
    InvertedRegion { min: Vertex, max: Vertex },
    #[error("unknown direction {0:?}; expected one of X+ X- Y+ Y- Z+ Z-")]
    BadDirection(String),
    #[error("unknown axis {0:?}; expected x, y or z")]
    BadAxis(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl Vertex {
    pub const ORIGIN: Vertex = Vertex { x: 0, y: 0, z: 0 };

    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        Vertex { x, y, z }
    }

    pub fn unit(axis: Axis) -> Self {
        let mut v = Vertex::ORIGIN;
        v.set(axis, 1);
        v
    }

    pub fn get(&self, axis: Axis) -> i64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn set(&mut self, axis: Axis, value: i64) {
        match axis {
            Axis::X => self.x = value,
            Axis::Y => self.y = value,
            Axis::Z => self.z = value,
        }
    }

    pub fn step(self, dir: Direction) -> Vertex {
        self + dir.unit()
    }

    pub fn dot(self, other: Vertex) -> i64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, o: Vertex) -> Vertex {
        Vertex::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn l1(self) -> i64 {
        self.x.abs() + self.y.abs() + self.z.abs()
    }

    pub fn is_zero(self) -> bool {
        self == Vertex::ORIGIN
    }

    pub fn componentwise_min(self, o: Vertex) -> Vertex {
        Vertex::new(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn componentwise_max(self, o: Vertex) -> Vertex {
        Vertex::new(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

impl Add for Vertex {
    type Output = Vertex;
    fn add(self, o: Vertex) -> Vertex {
        Vertex::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vertex {
    type Output = Vertex;
    fn sub(self, o: Vertex) -> Vertex {
        Vertex::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vertex {
    type Output = Vertex;
    fn neg(self) -> Vertex {
        Vertex::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Vertex> for i64 {
    type Output = Vertex;
    fn mul(self, v: Vertex) -> Vertex {
        Vertex::new(self * v.x, self * v.y, self * v.z)
    }
}

impl From<[i64; 3]> for Vertex {
    fn from(c: [i64; 3]) -> Self {
        Vertex::new(c[0], c[1], c[2])
    }
}

impl From<Vertex> for [i64; 3] {
    fn from(v: Vertex) -> Self {
        [v.x, v.y, v.z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    /// The two axes perpendicular to `self`, in increasing order.
    pub fn perpendicular(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::X, Axis::Z),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(LatticeError::BadAxis(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn of(value: i64) -> Option<Sign> {
        match value.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One of the six lattice directions `(r, σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    pub axis: Axis,
    pub sign: Sign,
}

impl Direction {
    pub const ALL: [Direction; 6] = [
        Direction::new(Axis::X, Sign::Plus),
        Direction::new(Axis::X, Sign::Minus),
        Direction::new(Axis::Y, Sign::Plus),
        Direction::new(Axis::Y, Sign::Minus),
        Direction::new(Axis::Z, Sign::Plus),
        Direction::new(Axis::Z, Sign::Minus),
    ];

    pub const fn new(axis: Axis, sign: Sign) -> Self {
        Direction { axis, sign }
    }

    /// Position in [`Direction::ALL`]; used as a bit index.
    pub fn index(self) -> usize {
        2 * self.axis.index() + usize::from(self.sign == Sign::Minus)
    }

    pub fn from_index(i: usize) -> Direction {
        Direction::ALL[i]
    }

    pub fn reversed(self) -> Direction {
        Direction::new(self.axis, self.sign.flip())
    }

    pub fn unit(self) -> Vertex {
        self.sign.value() * Vertex::unit(self.axis)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.axis {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        };
        write!(f, "{}{}", a, self.sign.symbol())
    }
}

impl FromStr for Direction {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let (Some(a), Some(sg), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(LatticeError::BadDirection(s.to_string()));
        };
        let axis = match a {
            'X' | 'x' => Axis::X,
            'Y' | 'y' => Axis::Y,
            'Z' | 'z' => Axis::Z,
            _ => return Err(LatticeError::BadDirection(s.to_string())),
        };
        let sign = match sg {
            '+' => Sign::Plus,
            '-' => Sign::Minus,
            _ => return Err(LatticeError::BadDirection(s.to_string())),
        };
        Ok(Direction::new(axis, sign))
    }
}

/// An edge `(base, axis)` with a traversal sign. `base` is always the lesser
/// endpoint; two edges with the same `(base, axis)` are the same site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub base: Vertex,
    pub axis: Axis,
    pub sign: Sign,
}

impl Edge {
    pub fn new(base: Vertex, axis: Axis) -> Self {
        Edge { base, axis, sign: Sign::Plus }
    }

    /// The edge traversed when stepping from `start` in direction `dir`.
    pub fn from_step(start: Vertex, dir: Direction) -> Self {
        let base = match dir.sign {
            Sign::Plus => start,
            Sign::Minus => start - Vertex::unit(dir.axis),
        };
        Edge { base, axis: dir.axis, sign: dir.sign }
    }

    pub fn canonical(self) -> Edge {
        Edge { sign: Sign::Plus, ..self }
    }

    pub fn reversed(self) -> Edge {
        Edge { sign: self.sign.flip(), ..self }
    }

    pub fn direction(self) -> Direction {
        Direction::new(self.axis, self.sign)
    }

    pub fn tip(self) -> Vertex {
        self.base + Vertex::unit(self.axis)
    }

    pub fn start(self) -> Vertex {
        boundary_edge(self).0
    }

    pub fn end(self) -> Vertex {
        boundary_edge(self).1
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.base, self.axis, self.sign.symbol())
    }
}

/// `(∂₀e, ∂₁e)` in traversal order.
pub fn boundary_edge(e: Edge) -> (Vertex, Vertex) {
    match e.sign {
        Sign::Plus => (e.base, e.tip()),
        Sign::Minus => (e.tip(), e.base),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    pub base: Vertex,
    pub normal: Axis,
}

impl Face {
    pub fn new(base: Vertex, normal: Axis) -> Self {
        Face { base, normal }
    }

    pub fn corners(self) -> [Vertex; 4] {
        let (a, b) = self.normal.perpendicular();
        let (ea, eb) = (Vertex::unit(a), Vertex::unit(b));
        [self.base, self.base + ea, self.base + ea + eb, self.base + eb]
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.base, self.normal)
    }
}

/// The four edges of `f` as a closed path `base → +a → +b → −a → −b`,
/// where `a < b` are the axes perpendicular to the normal.
pub fn boundary_face(f: Face) -> [Edge; 4] {
    let (a, b) = f.normal.perpendicular();
    let (ea, eb) = (Vertex::unit(a), Vertex::unit(b));
    [
        Edge { base: f.base, axis: a, sign: Sign::Plus },
        Edge { base: f.base + ea, axis: b, sign: Sign::Plus },
        Edge { base: f.base + eb, axis: a, sign: Sign::Minus },
        Edge { base: f.base, axis: b, sign: Sign::Minus },
    ]
}

/// Dual face pierced by the primal edge `e`.
pub fn dual_face_of_edge(e: Edge) -> Face {
    let (a, b) = e.axis.perpendicular();
    Face::new(e.base - Vertex::unit(a) - Vertex::unit(b), e.axis)
}

/// Primal edge piercing the dual face `f`; inverse of [`dual_face_of_edge`].
pub fn dual_edge_of_face(f: Face) -> Edge {
    let (a, b) = f.normal.perpendicular();
    Edge::new(f.base + Vertex::unit(a) + Vertex::unit(b), f.normal)
}

/// Primal face pierced by the dual edge `e`.
pub fn primal_face_of_dual_edge(e: Edge) -> Face {
    Face::new(e.base + Vertex::unit(e.axis), e.axis)
}

/// Dual edge piercing the primal face `f`; inverse of [`primal_face_of_dual_edge`].
pub fn dual_edge_of_primal_face(f: Face) -> Edge {
    Edge::new(f.base - Vertex::unit(f.normal), f.normal)
}

/// Inclusive cuboid `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Region {
    min: Vertex,
    max: Vertex,
}

impl Region {
    pub fn new(min: Vertex, max: Vertex) -> Result<Self, LatticeError> {
        if min.x > max.x || min.y > max.y || min.z > max.z {
            return Err(LatticeError::InvertedRegion { min, max });
        }
        Ok(Region { min, max })
    }

    /// Smallest region containing both corners, in any order.
    pub fn spanning(a: Vertex, b: Vertex) -> Self {
        Region { min: a.componentwise_min(b), max: a.componentwise_max(b) }
    }

    pub fn point(v: Vertex) -> Self {
        Region { min: v, max: v }
    }

    /// `[0, n-1]³`.
    pub fn cube(n: i64) -> Self {
        assert!(n >= 1, "cube side must be positive");
        Region { min: Vertex::ORIGIN, max: Vertex::new(n - 1, n - 1, n - 1) }
    }

    pub fn bounding<I: IntoIterator<Item = Vertex>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        Some(it.fold(Region::point(first), |r, v| r.including(v)))
    }

    pub fn min(&self) -> Vertex {
        self.min
    }

    pub fn max(&self) -> Vertex {
        self.max
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (self.min.x..=self.max.x).contains(&v.x)
            && (self.min.y..=self.max.y).contains(&v.y)
            && (self.min.z..=self.max.z).contains(&v.z)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.contains(e.base) && self.contains(e.tip())
    }

    pub fn including(self, v: Vertex) -> Region {
        Region { min: self.min.componentwise_min(v), max: self.max.componentwise_max(v) }
    }

    pub fn union(self, o: Region) -> Region {
        Region { min: self.min.componentwise_min(o.min), max: self.max.componentwise_max(o.max) }
    }

    pub fn inflate(self, k: i64) -> Region {
        let d = Vertex::new(k, k, k);
        Region::new(self.min - d, self.max + d).expect("inflation by a negative amount")
    }

    pub fn side(&self, axis: Axis) -> i64 {
        self.max.get(axis) - self.min.get(axis) + 1
    }

    pub fn volume(&self) -> usize {
        Axis::ALL.iter().map(|&a| self.side(a) as usize).product()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let (lo, hi) = (self.min, self.max);
        (lo.x..=hi.x)
            .flat_map(move |x| (lo.y..=hi.y).flat_map(move |y| (lo.z..=hi.z).map(move |z| Vertex::new(x, y, z))))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

/// All canonical edges with both endpoints in `region`.
pub fn edges_in_region(region: &Region) -> Vec<Edge> {
    let mut out = Vec::new();
    for v in region.vertices() {
        for axis in Axis::ALL {
            let e = Edge::new(v, axis);
            if region.contains(e.tip()) {
                out.push(e);
            }
        }
    }
    out
}

/// Mod-2 toggle of `item` in `set`.
pub fn toggle<T: Ord>(set: &mut BTreeSet<T>, item: T) {
    if !set.remove(&item) {
        set.insert(item);
    }
}

/// Vertices of odd degree in the mod-2 chain `edges`.
pub fn chain_boundary<'a, I: IntoIterator<Item = &'a Edge>>(edges: I) -> BTreeSet<Vertex> {
    let mut out = BTreeSet::new();
    for e in edges {
        toggle(&mut out, e.base);
        toggle(&mut out, e.tip());
    }
    out
}

/// Mod-2 boundary of a face chain, as canonical edges.
pub fn faces_boundary<'a, I: IntoIterator<Item = &'a Face>>(faces: I) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    for &f in faces {
        for e in boundary_face(f) {
            toggle(&mut out, e.canonical());
        }
    }
    out
}

/// A face chain whose mod-2 boundary is the cycle `cycle`.
///
/// Sweeps every horizontal edge down to the plane `z = z0`, then sweeps the
/// shadow in that plane along y to the line `y = y0`. Returns `None` when the
/// input has a nonzero boundary.
pub fn fill_cycle(cycle: &BTreeSet<Edge>) -> Option<BTreeSet<Face>> {
    if !chain_boundary(cycle).is_empty() {
        return None;
    }
    let mut faces = BTreeSet::new();
    let Some(z0) = cycle.iter().map(|e| e.base.z).min() else {
        return Some(faces);
    };
    let mut shadow = BTreeSet::new();
    for e in cycle {
        if e.axis == Axis::Z {
            continue;
        }
        let normal = if e.axis == Axis::X { Axis::Y } else { Axis::X };
        for k in z0..e.base.z {
            toggle(&mut faces, Face::new(Vertex::new(e.base.x, e.base.y, k), normal));
        }
        toggle(&mut shadow, Edge::new(Vertex::new(e.base.x, e.base.y, z0), e.axis));
    }
    let Some(y0) = shadow.iter().map(|e| e.base.y).min() else {
        return Some(faces);
    };
    for e in &shadow {
        if e.axis != Axis::X {
            continue;
        }
        for k in y0..e.base.y {
            toggle(&mut faces, Face::new(Vertex::new(e.base.x, k, z0), Axis::Z));
        }
    }
    Some(faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64, z: i64) -> Vertex {
        Vertex::new(x, y, z)
    }

    #[test]
    fn edge_endpoints_follow_traversal() {
        let e = Edge::new(v(0, 0, 0), Axis::Z);
        assert_eq!(boundary_edge(e), (v(0, 0, 0), v(0, 0, 1)));
        assert_eq!(boundary_edge(e.reversed()), (v(0, 0, 1), v(0, 0, 0)));
        assert_eq!(boundary_edge(Edge::new(v(2, -1, 5), Axis::X)), (v(2, -1, 5), v(3, -1, 5)));
    }

    #[test]
    fn from_step_round_trips() {
        for d in Direction::ALL {
            let e = Edge::from_step(v(1, 2, 3), d);
            assert_eq!(e.start(), v(1, 2, 3));
            assert_eq!(e.end(), v(1, 2, 3).step(d));
            assert_eq!(e.direction(), d);
        }
    }

    #[test]
    fn face_boundary_is_closed_path() {
        for normal in Axis::ALL {
            let f = Face::new(v(1, 1, 1), normal);
            let edges = boundary_face(f);
            for i in 0..4 {
                assert_eq!(edges[i].end(), edges[(i + 1) % 4].start());
                assert_ne!(edges[i].axis, normal);
            }
            assert!(chain_boundary(edges.iter()).is_empty());
        }
        let sq = boundary_face(Face::new(v(0, 0, 0), Axis::Z));
        let canon: BTreeSet<_> = sq.iter().map(|e| e.canonical()).collect();
        let expect: BTreeSet<_> = [
            Edge::new(v(0, 0, 0), Axis::X),
            Edge::new(v(0, 0, 0), Axis::Y),
            Edge::new(v(1, 0, 0), Axis::Y),
            Edge::new(v(0, 1, 0), Axis::X),
        ]
        .into_iter()
        .collect();
        assert_eq!(canon, expect);
    }

    #[test]
    fn duality_maps_are_inverse() {
        let r = Region::new(v(-2, -2, -2), v(2, 2, 2)).unwrap();
        for p in r.vertices() {
            for a in Axis::ALL {
                let f = Face::new(p, a);
                assert_eq!(dual_face_of_edge(dual_edge_of_face(f)), f);
                assert_eq!(dual_edge_of_face(f).axis, a);
                let e = Edge::new(p, a);
                assert_eq!(primal_face_of_dual_edge(dual_edge_of_primal_face(f)), f);
                assert_eq!(dual_edge_of_primal_face(primal_face_of_dual_edge(e)), e);
            }
        }
    }

    // incidence straight from coordinates: both endpoints are corners
    fn face_contains_edge(face: Face, e: Edge) -> bool {
        face.corners().contains(&e.base) && face.corners().contains(&e.tip())
    }

    #[test]
    fn dual_face_boundary_dualises_to_faces_around_edge() {
        let block = Region::cube(3);
        for p in block.vertices() {
            for a in Axis::ALL {
                let e = Edge::new(p, a);
                let df = dual_face_of_edge(e);
                assert_eq!(df.normal, a);
                // dual face centre (doubled) equals primal edge midpoint (doubled)
                let (b, c) = a.perpendicular();
                let centre2 = 2 * df.base + Vertex::new(1, 1, 1) + Vertex::unit(b) + Vertex::unit(c);
                let mid2 = 2 * e.base + Vertex::unit(a);
                assert_eq!(centre2, mid2);
                for de in boundary_face(df) {
                    assert!(face_contains_edge(primal_face_of_dual_edge(de.canonical()), e));
                }
            }
        }
        let f = dual_face_of_edge(Edge::new(v(0, 0, 0), Axis::Z));
        assert_eq!(f, Face::new(v(-1, -1, 0), Axis::Z));
    }

    #[test]
    fn region_edge_counts() {
        assert!(edges_in_region(&Region::point(v(3, 3, 3))).is_empty());
        assert_eq!(edges_in_region(&Region::new(v(0, 0, 0), v(1, 1, 1)).unwrap()).len(), 12);
        for n in 0..=4i64 {
            let r = Region::new(v(0, 0, 0), v(n, n, n)).unwrap();
            let brute = r
                .vertices()
                .flat_map(|p| r.vertices().map(move |q| (p, q)))
                .filter(|(p, q)| p < q && (*q - *p).l1() == 1)
                .count();
            assert_eq!(edges_in_region(&r).len() as i64, 3 * n * (n + 1) * (n + 1));
            assert_eq!(brute as i64, 3 * n * (n + 1) * (n + 1));
        }
    }

    #[test]
    fn translation_covariance() {
        let shift = v(5, -3, 7);
        for a in Axis::ALL {
            let f = Face::new(v(1, 0, -1), a);
            let moved = Face::new(f.base + shift, a);
            let b1: Vec<_> = boundary_face(f).iter().map(|e| Edge { base: e.base + shift, ..*e }).collect();
            assert_eq!(b1, boundary_face(moved).to_vec());
            let e = Edge::new(v(1, 0, -1), a);
            assert_eq!(dual_face_of_edge(Edge { base: e.base + shift, ..e }).base, dual_face_of_edge(e).base + shift);
        }
    }

    #[test]
    fn fill_recovers_cycle() {
        let square: BTreeSet<Edge> =
            boundary_face(Face::new(v(2, 3, 4), Axis::Y)).iter().map(|e| e.canonical()).collect();
        let fill = fill_cycle(&square).unwrap();
        assert_eq!(faces_boundary(&fill), square);
        let open: BTreeSet<Edge> = [Edge::new(v(0, 0, 0), Axis::X)].into_iter().collect();
        assert!(fill_cycle(&open).is_none());
    }

    #[test]
    fn direction_parsing() {
        for d in Direction::ALL {
            assert_eq!(d.to_string().parse::<Direction>().unwrap(), d);
            assert_eq!(Direction::from_index(d.index()), d);
        }
        assert!("Q+".parse::<Direction>().is_err());
        assert!("X".parse::<Direction>().is_err());
    }
}
