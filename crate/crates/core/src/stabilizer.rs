//! Finite-size F₂ Pauli algebra for the toric code: stars, plaquettes,
//! string and membrane operators, syndromes, and the surface-net counting
//! on cubic blocks.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::gf2::{null_space, rank, BitVec, EchelonBasis};
use crate::lattice::{
    boundary_face, dual_edge_of_face, fill_cycle, primal_face_of_dual_edge, toggle, Axis, Direction, Edge, Face,
    Region, Sign, Vertex,
};
use crate::paths::{FinitePath, InfinitePathSpec, Surface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("edge {edge} is not a qubit of the lattice")]
    OutOfRegion { edge: Edge },
    #[error("operators act on {left} and {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("block side {n} is too large for exhaustive enumeration")]
    TooLarge { n: usize },
    #[error("block side must be at least 1")]
    InvalidSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 3] = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }
}

/// Pauli operator up to phase: x and z supports over the lattice qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
}

impl PauliOperator {
    pub fn identity(len: usize) -> Self {
        PauliOperator { x: BitVec::zeros(len), z: BitVec::zeros(len) }
    }

    pub fn from_parts(x: BitVec, z: BitVec) -> Result<Self, StabilizerError> {
        if x.len() != z.len() {
            return Err(StabilizerError::DimensionMismatch { left: x.len(), right: z.len() });
        }
        Ok(PauliOperator { x, z })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn x_weight(&self) -> usize {
        self.x.count_ones()
    }

    pub fn z_weight(&self) -> usize {
        self.z.count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    fn check(&self, other: &PauliOperator) -> Result<(), StabilizerError> {
        if self.len() != other.len() {
            return Err(StabilizerError::DimensionMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }

    /// Product up to phase.
    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator, StabilizerError> {
        self.check(other)?;
        Ok(PauliOperator { x: self.x.xor(&other.x), z: self.z.xor(&other.z) })
    }

    /// Symplectic form `⟨x, z'⟩ + ⟨z, x'⟩`; true means anticommuting.
    pub fn symplectic(&self, other: &PauliOperator) -> Result<bool, StabilizerError> {
        self.check(other)?;
        Ok(self.x.dot(&other.z) ^ self.z.dot(&other.x))
    }
}

pub fn commutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool, StabilizerError> {
    p.symplectic(q).map(|a| !a)
}

/// `U O U†` for Pauli `U`: the same support with a sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPauli {
    pub negative: bool,
    pub op: PauliOperator,
}

pub fn conjugate(o: &PauliOperator, by: &PauliOperator) -> Result<SignedPauli, StabilizerError> {
    Ok(SignedPauli { negative: o.symplectic(by)?, op: o.clone() })
}

/// Qubits on the edges touching a block of vertices `V`, plus the remaining
/// edges of faces that touch `V`.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    region: Region,
    qubits: Vec<Edge>,
    index: HashMap<Edge, usize>,
    interior: usize,
}

impl FiniteLattice {
    pub fn new(region: Region) -> Self {
        let mut inner: BTreeSet<Edge> = BTreeSet::new();
        for v in region.vertices() {
            for axis in Axis::ALL {
                inner.insert(Edge::new(v, axis));
                inner.insert(Edge::new(v - Vertex::unit(axis), axis));
            }
        }
        let mut outer: BTreeSet<Edge> = BTreeSet::new();
        for f in faces_touching(&region) {
            for e in boundary_face(f) {
                let e = e.canonical();
                if !inner.contains(&e) {
                    outer.insert(e);
                }
            }
        }
        let interior = inner.len();
        let qubits: Vec<Edge> = inner.into_iter().chain(outer).collect();
        let index = qubits.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        FiniteLattice { region, qubits, index, interior }
    }

    /// The block `[0, n-1]³`.
    pub fn cube(n: usize) -> Result<Self, StabilizerError> {
        if n == 0 {
            return Err(StabilizerError::InvalidSize);
        }
        Ok(FiniteLattice::new(Region::cube(n as i64)))
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn vertex_count(&self) -> usize {
        self.region.volume()
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits.len()
    }

    /// Edges with at least one endpoint in the block.
    pub fn interior_edges(&self) -> &[Edge] {
        &self.qubits[..self.interior]
    }

    /// Edges of touching faces that are not interior edges.
    pub fn frontier_edges(&self) -> &[Edge] {
        &self.qubits[self.interior..]
    }

    pub fn qubits(&self) -> &[Edge] {
        &self.qubits
    }

    pub fn index_of(&self, e: Edge) -> Option<usize> {
        self.index.get(&e.canonical()).copied()
    }

    fn require(&self, e: Edge) -> Result<usize, StabilizerError> {
        self.index_of(e).ok_or(StabilizerError::OutOfRegion { edge: e.canonical() })
    }

    pub fn identity(&self) -> PauliOperator {
        PauliOperator::identity(self.qubit_count())
    }

    pub fn x_on<I: IntoIterator<Item = Edge>>(&self, edges: I) -> Result<PauliOperator, StabilizerError> {
        let mut op = self.identity();
        for e in edges {
            op.x.toggle(self.require(e)?);
        }
        Ok(op)
    }

    pub fn z_on<I: IntoIterator<Item = Edge>>(&self, edges: I) -> Result<PauliOperator, StabilizerError> {
        let mut op = self.identity();
        for e in edges {
            op.z.toggle(self.require(e)?);
        }
        Ok(op)
    }

    /// Product of single-site Paulis.
    pub fn sites(&self, sites: &[(Edge, PauliLetter)]) -> Result<PauliOperator, StabilizerError> {
        let mut op = self.identity();
        for &(e, p) in sites {
            let i = self.require(e)?;
            let (x, z) = p.bits();
            if x {
                op.x.toggle(i);
            }
            if z {
                op.z.toggle(i);
            }
        }
        Ok(op)
    }

    /// `A_v`: σˣ on the six edges at `v`.
    pub fn star(&self, v: Vertex) -> Result<PauliOperator, StabilizerError> {
        self.x_on(Direction::ALL.iter().map(|&d| Edge::from_step(v, d)))
    }

    /// `B_f`: σᶻ on the four edges of `f`.
    pub fn plaquette(&self, f: Face) -> Result<PauliOperator, StabilizerError> {
        self.z_on(boundary_face(f))
    }

    /// σᶻ along a primal path.
    pub fn string_op(&self, path: &FinitePath) -> Result<PauliOperator, StabilizerError> {
        self.z_on(path.edges())
    }

    /// σˣ on the primal edges piercing a dual surface.
    pub fn membrane_op(&self, surface: &Surface) -> Result<PauliOperator, StabilizerError> {
        self.membrane_op_faces(surface.faces().iter().copied())
    }

    /// As [`membrane_op`](Self::membrane_op) for an arbitrary dual face chain (mod 2).
    pub fn membrane_op_faces<I: IntoIterator<Item = Face>>(&self, faces: I) -> Result<PauliOperator, StabilizerError> {
        self.x_on(faces.into_iter().map(dual_edge_of_face))
    }

    /// `2 ×` the stabilizers anticommuting with `flip`: stars at vertices of
    /// `region` read as primal, plaquettes pierced by dual edges of `region`
    /// read as dual.
    pub fn syndrome_energy(&self, flip: &PauliOperator, region: &Region) -> Result<usize, StabilizerError> {
        let mut violated = 0;
        for v in region.vertices() {
            if self.star(v)?.symplectic(flip)? {
                violated += 1;
            }
            for axis in Axis::ALL {
                let e = Edge::new(v, axis);
                if region.contains(e.tip()) && self.plaquette(primal_face_of_dual_edge(e))?.symplectic(flip)? {
                    violated += 1;
                }
            }
        }
        Ok(2 * violated)
    }

    /// Star generators of the block.
    pub fn gauge_basis(&self) -> Vec<PauliOperator> {
        self.region.vertices().map(|v| self.star(v).expect("stars of the block are supported")).collect()
    }

    /// Faces with at least one corner in the block.
    pub fn faces(&self) -> Vec<Face> {
        faces_touching(&self.region).into_iter().collect()
    }
}

fn faces_touching(region: &Region) -> BTreeSet<Face> {
    let mut out = BTreeSet::new();
    for v in region.vertices() {
        for normal in Axis::ALL {
            let (a, b) = normal.perpendicular();
            for (da, db) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                out.insert(Face::new(v - da * Vertex::unit(a) - db * Vertex::unit(b), normal));
            }
        }
    }
    out
}

pub fn gauge_rank(n: usize) -> Result<usize, StabilizerError> {
    let lat = FiniteLattice::cube(n)?;
    Ok(rank(lat.gauge_basis().iter().map(|g| &g.x)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceNetReport {
    pub n: usize,
    pub gauge_order: usize,
    /// Distinct gauge elements give distinct nets from the all-up state.
    pub orthogonal: bool,
    /// Every gauge image is flux free with trivial boundary condition.
    pub flux_free: bool,
    /// Flux-free trivial-boundary nets counted by enumeration.
    pub trivial_nets: usize,
    /// Gauge orbits among them, i.e. the dimension of the invariant space.
    pub orbits: usize,
    pub boundary_conditions: usize,
    pub nets_per_boundary: usize,
    pub boundary_bijection: bool,
}

impl SurfaceNetReport {
    pub fn passed(&self) -> bool {
        self.orthogonal
            && self.flux_free
            && self.orbits == 1
            && self.trivial_nets == self.gauge_order
            && self.boundary_bijection
    }
}

/// Exhaustive surface-net checks on the `n³` block.
pub fn surface_net_checks(n: usize) -> Result<SurfaceNetReport, StabilizerError> {
    if n > 2 {
        return Err(StabilizerError::TooLarge { n });
    }
    let lat = FiniteLattice::cube(n)?;
    let q = lat.qubit_count();
    let inner = lat.interior_edges().len();
    let plaquettes: Vec<PauliOperator> =
        lat.faces().into_iter().map(|f| lat.plaquette(f).expect("touching faces are supported")).collect();
    let flux_free = |x: &BitVec| plaquettes.iter().all(|p| !p.z.dot(x));

    let gens: Vec<BitVec> = lat.gauge_basis().into_iter().map(|g| g.x).collect();
    let order = 1usize << gens.len();
    let mut images = HashSet::with_capacity(order);
    let mut all_flux_free = true;
    for mask in 0..order {
        let mut x = BitVec::zeros(q);
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x.xor_assign(g);
            }
        }
        all_flux_free &= flux_free(&x) && (inner..q).all(|i| !x.get(i));
        images.insert(x);
    }
    let orthogonal = images.len() == order;

    // flux-free nets supported on interior edges
    let rows: Vec<BitVec> =
        plaquettes.iter().map(|p| BitVec::from_indices(inner, p.z.ones().filter(|&i| i < inner))).collect();
    let kernel = null_space(&rows, inner);
    if kernel.len() > 16 {
        return Err(StabilizerError::TooLarge { n });
    }
    let lift = |v: &BitVec| BitVec::from_indices(q, v.ones());
    let mut nets: Vec<BitVec> = Vec::with_capacity(1 << kernel.len());
    for mask in 0..1usize << kernel.len() {
        let mut x = BitVec::zeros(q);
        for (i, k) in kernel.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x.xor_assign(&lift(k));
            }
        }
        nets.push(x);
    }
    let mut orbit_reps = HashSet::new();
    for net in &nets {
        let rep =
            images.iter().map(|g| net.xor(g)).min_by(|a, b| a.words().cmp(b.words())).expect("nonempty gauge group");
        orbit_reps.insert(rep);
    }

    let (conditions, per_boundary, bijection) = boundary_condition_check(&lat, &plaquettes)?;
    Ok(SurfaceNetReport {
        n,
        gauge_order: order,
        orthogonal,
        flux_free: all_flux_free,
        trivial_nets: nets.len(),
        orbits: orbit_reps.len(),
        boundary_conditions: conditions,
        nets_per_boundary: per_boundary,
        boundary_bijection: bijection,
    })
}

/// Translation by a representative `r_b` maps trivial-boundary nets onto
/// nets with boundary condition `b`, for up to 2⁸ conditions `b`.
fn boundary_condition_check(
    lat: &FiniteLattice,
    plaquettes: &[PauliOperator],
) -> Result<(usize, usize, bool), StabilizerError> {
    let q = lat.qubit_count();
    let inner = lat.interior_edges().len();
    let rows: Vec<BitVec> = plaquettes.iter().map(|p| p.z.clone()).collect();
    let kernel = null_space(&rows, q);
    let project = |x: &BitVec| BitVec::from_indices(q - inner, x.ones().filter(|&i| i >= inner).map(|i| i - inner));

    // basis of achievable boundary conditions, each with a preimage
    let mut basis = EchelonBasis::new();
    let mut reps: Vec<(BitVec, BitVec)> = Vec::new();
    for k in &kernel {
        let b = project(k);
        if basis.insert(&b) && reps.len() < 8 {
            reps.push((b, k.clone()));
        }
    }
    let p0 = trivial_boundary_space(&kernel, inner, q);
    if p0.len() > 12 {
        return Err(StabilizerError::TooLarge { n: lat.region().side(Axis::X) as usize });
    }
    let p0_elems: Vec<BitVec> = span(&p0, q);
    let mut ok = true;
    let conditions = 1usize << reps.len();
    for mask in 0..conditions {
        let mut b = BitVec::zeros(q - inner);
        let mut r = BitVec::zeros(q);
        for (i, (rb, rk)) in reps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                b.xor_assign(rb);
                r.xor_assign(rk);
            }
        }
        let mut image = HashSet::with_capacity(p0_elems.len());
        for alpha in &p0_elems {
            let moved = alpha.xor(&r);
            ok &= plaquettes.iter().all(|p| !p.z.dot(&moved)) && project(&moved) == b;
            ok &= moved.xor(&r) == *alpha;
            image.insert(moved);
        }
        ok &= image.len() == p0_elems.len();
    }
    // |P^b| = |P^0| for achievable b by rank counting
    ok &= kernel.len() - basis.rank() == p0.len();
    Ok((conditions, p0_elems.len(), ok))
}

fn trivial_boundary_space(kernel: &[BitVec], inner: usize, q: usize) -> Vec<BitVec> {
    // kernel ∩ {x : x_i = 0 for frontier i}: null space of the frontier
    // projection restricted to the kernel coordinates
    let k = kernel.len();
    let rows: Vec<BitVec> = (inner..q).map(|i| BitVec::from_indices(k, (0..k).filter(|&j| kernel[j].get(i)))).collect();
    null_space(&rows, k)
        .into_iter()
        .map(|c| {
            let mut x = BitVec::zeros(q);
            for j in c.ones() {
                x.xor_assign(&kernel[j]);
            }
            x
        })
        .collect()
}

fn span(basis: &[BitVec], len: usize) -> Vec<BitVec> {
    (0..1usize << basis.len())
        .map(|mask| {
            let mut x = BitVec::zeros(len);
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x.xor_assign(b);
                }
            }
            x
        })
        .collect()
}

/// Growing operator families used to probe truncation stability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncated {
    /// σᶻ on the edges `(0,0,-k) → (0,0,1-k)`, `k = 1..=n`.
    String,
    /// σˣ through the dual faces `((x,0,z), y)`, `0 ≤ x, z < n`.
    Membrane,
}

impl Truncated {
    pub fn edges(self, n: i64) -> Vec<Edge> {
        match self {
            Truncated::String => (1..=n).map(|k| Edge::new(Vertex::new(0, 0, -k), Axis::Z)).collect(),
            Truncated::Membrane => (0..n)
                .flat_map(|x| (0..n).map(move |z| dual_edge_of_face(Face::new(Vertex::new(x, 0, z), Axis::Y))))
                .collect(),
        }
    }

    pub fn operator(self, lat: &FiniteLattice, n: i64) -> Result<PauliOperator, StabilizerError> {
        match self {
            Truncated::String => lat.z_on(self.edges(n)),
            Truncated::Membrane => lat.x_on(self.edges(n)),
        }
    }

    /// A single-site observable just past the `n`-truncation that the
    /// `n+1`-truncation flips.
    pub fn frontier_observable(self, n: i64) -> (Edge, PauliLetter) {
        match self {
            Truncated::String => (Edge::new(Vertex::new(0, 0, -n - 1), Axis::Z), PauliLetter::X),
            Truncated::Membrane => (dual_edge_of_face(Face::new(Vertex::new(n, 0, 0), Axis::Y)), PauliLetter::Z),
        }
    }
}

/// Qubits with both endpoints in the `m`-block `[-m, m]³`.
pub fn block_sites(m: i64) -> Vec<Edge> {
    let r = Region::new(Vertex::new(-m, -m, -m), Vertex::new(m, m, m)).expect("m is nonnegative");
    crate::lattice::edges_in_region(&r)
}

/// A lattice large enough for every truncation up to `n`.
pub fn truncation_lattice(n: i64) -> FiniteLattice {
    let reach = n + 2;
    FiniteLattice::new(
        Region::new(Vertex::new(-reach, -reach, -reach), Vertex::new(reach, reach, reach)).expect("positive reach"),
    )
}

/// Conjugating `observable` by the `n`- and `n2`-truncations gives the same
/// signed operator.
pub fn truncation_stability(
    lat: &FiniteLattice,
    object: Truncated,
    observable: &[(Edge, PauliLetter)],
    n: i64,
    n2: i64,
) -> Result<bool, StabilizerError> {
    let o = lat.sites(observable)?;
    let a = conjugate(&o, &object.operator(lat, n)?)?;
    let b = conjugate(&o, &object.operator(lat, n2)?)?;
    Ok(a == b)
}

/// Conjugation by a string and by its reverse agree on every single-site Pauli.
pub fn orientation_independence(path: &FinitePath) -> Result<bool, StabilizerError> {
    let region = crate::lattice::Region::bounding(path.vertices()).expect("paths have vertices").inflate(1);
    let lat = FiniteLattice::new(region);
    let fwd = lat.string_op(path)?;
    let back = lat.string_op(&path.reversed())?;
    single_site_agreement(&lat, &fwd, &back)
}

/// Same for a membrane and its orientation reversal (the face chain walked backwards).
pub fn membrane_orientation_independence(surface: &Surface) -> Result<bool, StabilizerError> {
    let region =
        Region::bounding(surface.faces().iter().flat_map(|f| f.corners())).expect("surfaces have faces").inflate(2);
    let lat = FiniteLattice::new(region);
    let fwd = lat.membrane_op(surface)?;
    let back = lat.membrane_op_faces(surface.faces().iter().rev().copied())?;
    single_site_agreement(&lat, &fwd, &back)
}

fn single_site_agreement(lat: &FiniteLattice, a: &PauliOperator, b: &PauliOperator) -> Result<bool, StabilizerError> {
    for &e in lat.qubits() {
        for p in PauliLetter::ALL {
            let o = lat.sites(&[(e, p)])?;
            if conjugate(&o, a)? != conjugate(&o, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Shortest path from `from` to `to` through vertices of `bounds` outside `avoid`.
fn detour(from: Vertex, to: Vertex, avoid: &Region, bounds: &Region) -> Option<Vec<Direction>> {
    let mut prev: HashMap<Vertex, Direction> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = HashSet::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut steps = Vec::new();
            let mut at = to;
            while at != from {
                let d = prev[&at];
                steps.push(d);
                at = at.step(d.reversed());
            }
            steps.reverse();
            return Some(steps);
        }
        for d in Direction::ALL {
            let w = v.step(d);
            if bounds.contains(w) && !avoid.contains(w) && seen.insert(w) {
                prev.insert(w, d);
                queue.push_back(w);
            }
        }
    }
    None
}

fn l_path(a: Vertex, b: Vertex) -> Vec<Edge> {
    let mut out = Vec::new();
    let mut at = a;
    for axis in Axis::ALL {
        while at.get(axis) != b.get(axis) {
            let sign = if b.get(axis) > at.get(axis) { Sign::Plus } else { Sign::Minus };
            let d = Direction::new(axis, sign);
            out.push(Edge::from_step(at, d));
            at = at.step(d);
        }
    }
    out
}

/// A Pauli flip on a finite lattice whose syndrome inside `region` matches
/// the given excitations: strings are cut outside `region` and closed by a
/// detour avoiding it, loops are kept, and all flux cycles are filled by a
/// membrane; charges are paired by σᶻ strings, an odd one out joined to a
/// vertex far outside `region`.
pub fn excitation_flip(
    charges: &[Vertex],
    strings: &[InfinitePathSpec],
    loops: &[FinitePath],
    region: &Region,
) -> Result<(FiniteLattice, PauliOperator), StabilizerError> {
    let mut cycle: BTreeSet<Edge> = BTreeSet::new();
    for s in strings {
        let (a, b) = s.exit_window(region);
        let (a, b) = (a - 1, b + 1);
        for t in a..b {
            toggle(&mut cycle, s.edge(t).canonical());
        }
        let (start, end) = (s.vertex(a), s.vertex(b));
        let bounds = region.inflate(1).including(start).including(end);
        let back = detour(end, start, region, &bounds).expect("the shell around a box is connected");
        let mut at = end;
        for d in back {
            toggle(&mut cycle, Edge::from_step(at, d).canonical());
            at = at.step(d);
        }
    }
    for l in loops {
        for e in l.edges() {
            toggle(&mut cycle, e.canonical());
        }
    }
    let faces = fill_cycle(&cycle).expect("closed flux chain");

    let mut z_edges: BTreeSet<Edge> = BTreeSet::new();
    let mut odd: BTreeSet<Vertex> = BTreeSet::new();
    for &c in charges {
        toggle(&mut odd, c);
    }
    let mut pending: Vec<Vertex> = odd.into_iter().collect();
    let far = region.max() + Vertex::new(2, 2, 2);
    if pending.len() % 2 == 1 {
        pending.push(far);
    }
    for pair in pending.chunks(2) {
        for e in l_path(pair[0], pair[1]) {
            toggle(&mut z_edges, e);
        }
    }

    let mut points: Vec<Vertex> = vec![region.min(), region.max()];
    points.extend(faces.iter().flat_map(|f| f.corners()));
    points.extend(z_edges.iter().flat_map(|e| [e.base, e.tip()]));
    let lat = FiniteLattice::new(Region::bounding(points).expect("nonempty").inflate(2));
    let flip = lat.membrane_op_faces(faces)?.mul(&lat.z_on(z_edges)?)?;
    Ok((lat, flip))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::edges_in_region;
    use crate::paths::{parse_word, validate_surface};

    fn v(x: i64, y: i64, z: i64) -> Vertex {
        Vertex::new(x, y, z)
    }

    #[test]
    fn lattice_counts() {
        let one = FiniteLattice::cube(1).unwrap();
        assert_eq!(one.vertex_count(), 1);
        assert_eq!(one.interior_edges().len(), 6);
        // the 12 faces at a vertex have 24 further edges
        assert_eq!(one.frontier_edges().len(), 24);
        let two = FiniteLattice::cube(2).unwrap();
        assert_eq!(two.vertex_count(), 8);
        // brute force: edges with an endpoint in the block
        let block = Region::cube(2);
        let brute = edges_in_region(&block.inflate(1))
            .into_iter()
            .filter(|e| block.contains(e.base) || block.contains(e.tip()))
            .count();
        assert_eq!(two.interior_edges().len(), brute);
        assert_eq!(FiniteLattice::cube(3).unwrap().vertex_count(), 27);
        assert!(FiniteLattice::cube(0).is_err());
    }

    #[test]
    fn operator_weights() {
        let lat = FiniteLattice::cube(3).unwrap();
        assert_eq!(lat.star(v(1, 1, 1)).unwrap().x_weight(), 6);
        assert_eq!(lat.plaquette(Face::new(v(0, 0, 0), Axis::Z)).unwrap().z_weight(), 4);
        let rect: Vec<Face> = (0..2).flat_map(|x| (0..2).map(move |y| Face::new(v(x, y, 0), Axis::Z))).collect();
        let s = validate_surface(&rect).unwrap();
        assert_eq!(lat.membrane_op(&s).unwrap().x_weight(), 4);
        assert!(matches!(lat.star(v(9, 9, 9)), Err(StabilizerError::OutOfRegion { .. })));
    }

    #[test]
    fn stars_and_plaquettes_commute() {
        for n in 1..=3 {
            let lat = FiniteLattice::cube(n).unwrap();
            let stars = lat.gauge_basis();
            let plaqs: Vec<PauliOperator> = lat.faces().into_iter().map(|f| lat.plaquette(f).unwrap()).collect();
            for s in &stars {
                for p in &plaqs {
                    assert!(commutes(s, p).unwrap());
                }
            }
        }
    }

    #[test]
    fn commutation_basics() {
        let lat = FiniteLattice::cube(2).unwrap();
        let p = lat.star(v(0, 0, 0)).unwrap();
        assert!(commutes(&p, &p).unwrap());
        let other = FiniteLattice::cube(1).unwrap().identity();
        assert!(matches!(commutes(&p, &other), Err(StabilizerError::DimensionMismatch { .. })));
    }

    #[test]
    fn linked_loop_anticommutes_with_membrane() {
        let lat = FiniteLattice::new(Region::new(v(-2, -2, -2), v(3, 3, 3)).unwrap());
        let face = Face::new(v(0, 0, 0), Axis::Z);
        let s = validate_surface(&[face]).unwrap();
        // primal loop around the pierced edge
        let e = dual_edge_of_face(face);
        let loop_path = FinitePath::new(e.base, parse_word("Z+X+Z-X-").unwrap()).unwrap();
        assert!(loop_path.edges().iter().any(|x| x.canonical() == e));
        assert!(!commutes(&lat.string_op(&loop_path).unwrap(), &lat.membrane_op(&s).unwrap()).unwrap());
    }

    #[test]
    fn syndrome_energy_examples() {
        let lat = FiniteLattice::new(Region::new(v(-3, -3, -3), v(6, 6, 6)).unwrap());
        let region = Region::new(v(-2, -2, -2), v(5, 5, 5)).unwrap();
        let open = FinitePath::new(v(0, 0, 0), parse_word("Z+Z+Z+").unwrap()).unwrap();
        assert_eq!(lat.syndrome_energy(&lat.string_op(&open).unwrap(), &region).unwrap(), 4);
        let face = Face::new(v(0, 0, 0), Axis::X);
        assert_eq!(lat.syndrome_energy(&lat.membrane_op_faces([face]).unwrap(), &region).unwrap(), 8);
        assert_eq!(lat.syndrome_energy(&lat.identity(), &region).unwrap(), 0);
    }

    #[test]
    fn membranes_add_mod_two() {
        let lat = FiniteLattice::cube(3).unwrap();
        let a: Vec<Face> = vec![Face::new(v(0, 0, 0), Axis::Z), Face::new(v(1, 0, 0), Axis::Z)];
        let b: Vec<Face> = vec![Face::new(v(1, 0, 0), Axis::Z), Face::new(v(1, 1, 0), Axis::Z)];
        let sum: BTreeSet<Face> = a
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .symmetric_difference(&b.iter().copied().collect())
            .copied()
            .collect();
        let lhs = lat.membrane_op_faces(a).unwrap().mul(&lat.membrane_op_faces(b).unwrap()).unwrap();
        assert_eq!(lhs, lat.membrane_op_faces(sum).unwrap());
    }

    #[test]
    fn gauge_ranks() {
        assert_eq!(gauge_rank(1).unwrap(), 1);
        assert_eq!(gauge_rank(2).unwrap(), 8);
        assert_eq!(gauge_rank(3).unwrap(), 27);
    }

    #[test]
    fn surface_nets_small_blocks() {
        let one = surface_net_checks(1).unwrap();
        assert!(one.passed(), "{one:?}");
        assert_eq!((one.gauge_order, one.nets_per_boundary, one.orbits), (2, 2, 1));
        assert_eq!(one.boundary_conditions, 256);
        let two = surface_net_checks(2).unwrap();
        assert!(two.passed(), "{two:?}");
        assert_eq!((two.gauge_order, two.orbits), (256, 1));
        assert!(matches!(surface_net_checks(3), Err(StabilizerError::TooLarge { .. })));
    }

    #[test]
    fn truncations_stabilise_inside_and_not_at_frontier() {
        let lat = truncation_lattice(3);
        for object in [Truncated::String, Truncated::Membrane] {
            let inside: Vec<(Edge, PauliLetter)> =
                block_sites(1).into_iter().flat_map(|e| PauliLetter::ALL.map(|p| (e, p))).collect();
            for &site in &inside {
                assert!(truncation_stability(&lat, object, &[site], 2, 3).unwrap());
            }
            assert!(!truncation_stability(&lat, object, &[object.frontier_observable(2)], 2, 3).unwrap());
        }
    }

    #[test]
    fn orientation_never_matters() {
        let p = FinitePath::new(v(0, 0, 0), parse_word("X+Y+Z+X+").unwrap()).unwrap();
        assert!(orientation_independence(&p).unwrap());
        let s = validate_surface(&[Face::new(v(0, 0, 0), Axis::Y), Face::new(v(1, 0, 0), Axis::Y)]).unwrap();
        assert!(membrane_orientation_independence(&s).unwrap());
    }

    #[test]
    fn excitation_flip_for_one_charge_inside() {
        let region = Region::new(v(0, 0, 0), v(3, 3, 3)).unwrap();
        let (lat, flip) = excitation_flip(&[v(1, 1, 1), v(10, 10, 10)], &[], &[], &region).unwrap();
        assert_eq!(lat.syndrome_energy(&flip, &region).unwrap(), 2);
        let line =
            InfinitePathSpec::new(parse_word("Z+").unwrap(), vec![], parse_word("Z+").unwrap(), v(1, 1, 0)).unwrap();
        let (lat, flip) = excitation_flip(&[], &[line], &[], &region).unwrap();
        assert_eq!(lat.syndrome_energy(&flip, &region).unwrap(), 2 * 3);
    }
}
