//! Energy accounting, straightening of non-monotone segments, and surgery
//! along a membrane boundary.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lattice::{dual_face_of_edge, toggle, Axis, Direction, Edge, Region, Sign, Vertex};
use crate::paths::{word_monotonicity, FinitePath, InfiniteOverlap, InfinitePathSpec, PathError, Surface, Walk, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("lift endpoints {got} differ from {expected}")]
    EndpointMismatch { expected: Vertex, got: Vertex },
    #[error("path does not visit the region")]
    NotInRegion,
    #[error("path enters the region more than once")]
    MultipleCrossings,
    #[error("path is already monotone inside the region")]
    AlreadyMonotonicInRegion,
    #[error("surface boundary meets no string")]
    NoOverlap,
    #[error("string {string} meets the surface boundary in more than one run")]
    MultipleOverlapRuns { string: usize },
    #[error("surface has no boundary")]
    InvalidSurface,
    #[error("spliced string {string} intersects itself")]
    SpliceIntersects { string: usize },
    #[error("strings {first} and {second} overlap")]
    OverlappingStrings { first: usize, second: usize },
    #[error("strings {first} and {second} share infinitely many edges")]
    InfiniteOverlap { first: usize, second: usize },
    #[error("loop {index} is not closed")]
    OpenLoop { index: usize },
}

/// Charges on primal vertices, infinite flux strings and finite flux loops.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Configuration {
    pub charges: Vec<Vertex>,
    pub strings: Vec<InfinitePathSpec>,
    pub loops: Vec<FinitePath>,
}

impl Configuration {
    pub fn new(
        charges: Vec<Vertex>,
        strings: Vec<InfinitePathSpec>,
        loops: Vec<FinitePath>,
    ) -> Result<Self, TransformError> {
        if let Some(index) = loops.iter().position(|l| !l.is_closed()) {
            return Err(TransformError::OpenLoop { index });
        }
        Ok(Configuration { charges, strings, loops })
    }

    pub fn with_strings(strings: Vec<InfinitePathSpec>) -> Self {
        Configuration { strings, ..Default::default() }
    }

    /// First pair of strings sharing an edge.
    pub fn first_overlap(&self) -> Result<Option<(usize, usize)>, TransformError> {
        for i in 0..self.strings.len() {
            for j in i + 1..self.strings.len() {
                let shared = self.strings[i]
                    .shared_edges(&self.strings[j])
                    .map_err(|InfiniteOverlap| TransformError::InfiniteOverlap { first: i, second: j })?;
                if !shared.is_empty() {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyReport {
    pub region: Region,
    pub flux_energy: usize,
    pub charge_energy: usize,
    pub total: usize,
}

/// Mod-2 flux chain of the configuration inside `region`.
pub fn flux_chain(cfg: &Configuration, region: &Region) -> BTreeSet<Edge> {
    let mut chain = BTreeSet::new();
    for s in &cfg.strings {
        for (_, e) in s.edges_in(region) {
            toggle(&mut chain, e);
        }
    }
    for l in &cfg.loops {
        for e in l.edges() {
            if region.contains_edge(e) {
                toggle(&mut chain, e.canonical());
            }
        }
    }
    chain
}

/// Energy of `region`, read as dual coordinates for flux and primal
/// coordinates for charges.
pub fn energy(cfg: &Configuration, region: &Region) -> EnergyReport {
    let flux = flux_chain(cfg, region).len();
    let mut charges = BTreeSet::new();
    for &c in &cfg.charges {
        toggle(&mut charges, c);
    }
    let inside = charges.iter().filter(|&&c| region.contains(c)).count();
    EnergyReport { region: *region, flux_energy: 2 * flux, charge_energy: 2 * inside, total: 2 * (flux + inside) }
}

/// Positions of steps removed by [`project`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DropRecord {
    pub axis: Axis,
    /// `(original index, step, kept steps before it)`.
    pub dropped: Vec<(usize, Direction, usize)>,
}

impl DropRecord {
    pub fn indices(&self) -> Vec<usize> {
        self.dropped.iter().map(|&(i, _, _)| i).collect()
    }
}

pub fn project(path: &Walk, axis: Axis) -> (Walk, DropRecord) {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (i, &d) in path.steps.iter().enumerate() {
        if d.axis == axis {
            dropped.push((i, d, kept.len()));
        } else {
            kept.push(d);
        }
    }
    (Walk { start: path.start, steps: kept }, DropRecord { axis, dropped })
}

/// Reinserts the dropped steps into `rerouted`, each before the kept step
/// it originally preceded (clamped to the end).
pub fn lift(original: &Walk, rerouted: &Walk, record: &DropRecord) -> Result<FinitePath, TransformError> {
    let (projected, _) = project(original, record.axis);
    if rerouted.start != projected.start {
        return Err(TransformError::EndpointMismatch { expected: projected.start, got: rerouted.start });
    }
    if rerouted.end() != projected.end() {
        return Err(TransformError::EndpointMismatch { expected: projected.end(), got: rerouted.end() });
    }
    Ok(FinitePath::new(original.start, lift_steps(&rerouted.steps, record))?)
}

fn lift_steps(rerouted: &[Direction], record: &DropRecord) -> Word {
    let mut out = Vec::with_capacity(rerouted.len() + record.dropped.len());
    let mut next = record.dropped.iter().peekable();
    for (k, &d) in rerouted.iter().enumerate() {
        while let Some(&&(_, dd, before)) = next.peek() {
            if before > k {
                break;
            }
            out.push(dd);
            next.next();
        }
        out.push(d);
    }
    out.extend(next.map(|&(_, d, _)| d));
    out
}

/// Monotone path from `from` to `to` taking the axes in the given order.
pub fn staircase(from: Vertex, to: Vertex, order: &[Axis]) -> Word {
    let mut out = Vec::new();
    for &axis in order {
        let delta = to.get(axis) - from.get(axis);
        let sign = if delta >= 0 { Sign::Plus } else { Sign::Minus };
        out.extend(std::iter::repeat_n(Direction::new(axis, sign), delta.unsigned_abs() as usize));
    }
    out
}

/// How the segment inside the region was rerouted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StraightenCase {
    /// One backtracking axis, at most two axes in use.
    Planar,
    /// One backtracking axis in three dimensions: project, reroute, lift.
    Projected { axis: Axis },
    /// Several backtracking axes: a sub-run with one of them is rerouted.
    SubRun { start: i64, end: i64 },
    /// Several backtracking axes and the sub-run reroute collided.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StraightenStep {
    pub spec: InfinitePathSpec,
    pub case: StraightenCase,
    pub energy_before: usize,
    pub energy_after: usize,
}

/// The parameter interval `[i, j]` of vertices inside `region`.
fn crossing(spec: &InfinitePathSpec, region: &Region) -> Result<(i64, i64), TransformError> {
    let visits = spec.visits(region);
    let (&i, &j) = (visits.first().ok_or(TransformError::NotInRegion)?, visits.last().expect("nonempty"));
    if j - i + 1 != visits.len() as i64 {
        return Err(TransformError::MultipleCrossings);
    }
    Ok((i, j))
}

/// Monotone reroute of the walk `w` with a single backtracking axis.
fn reroute_one_axis(w: &Walk) -> (Word, Option<Axis>) {
    let m = word_monotonicity(&w.steps);
    let used: Vec<Axis> = Axis::ALL.into_iter().filter(|&a| w.steps.iter().any(|d| d.axis == a)).collect();
    if used.len() <= 2 {
        return (staircase(w.start, w.end(), &Axis::ALL), None);
    }
    let nu = *used.iter().find(|a| !m.conflicting.contains(a)).expect("a monotone axis when only one backtracks");
    let (projected, record) = project(w, nu);
    let order: Vec<Axis> = Axis::ALL.into_iter().filter(|&a| a != nu).collect();
    let straight = staircase(projected.start, projected.end(), &order);
    (lift_steps(&straight, &record), Some(nu))
}

pub fn straighten_once(spec: &InfinitePathSpec, region: &Region) -> Result<StraightenStep, TransformError> {
    let (i, j) = crossing(spec, region)?;
    let segment = spec.steps(i, j);
    let m = word_monotonicity(&segment);
    if m.monotone {
        return Err(TransformError::AlreadyMonotonicInRegion);
    }
    let before = 2 * segment.len();
    let whole = Walk { start: spec.vertex(i), steps: segment.clone() };
    let (next, case) = if m.conflicting.len() == 1 {
        let (steps, nu) = reroute_one_axis(&whole);
        let case = nu.map_or(StraightenCase::Planar, |axis| StraightenCase::Projected { axis });
        (spec.with_segment_replaced(i, j, &steps)?, case)
    } else {
        let (s, e) = longest_single_conflict_run(&segment);
        let sub = Walk { start: spec.vertex(i + s as i64), steps: segment[s..e].to_vec() };
        let (steps, _) = reroute_one_axis(&sub);
        match spec.with_segment_replaced(i + s as i64, i + e as i64, &steps) {
            Ok(next) => (next, StraightenCase::SubRun { start: i + s as i64, end: i + e as i64 }),
            Err(_) => {
                let steps = staircase(spec.vertex(i), spec.vertex(j), &Axis::ALL);
                (spec.with_segment_replaced(i, j, &steps)?, StraightenCase::Full)
            }
        }
    };
    let after = 2 * crate::paths::count_edges_in_region(&next, region);
    Ok(StraightenStep { spec: next, case, energy_before: before, energy_after: after })
}

/// Longest window `[s, e)` whose steps backtrack along exactly one axis,
/// earliest on ties.
fn longest_single_conflict_run(steps: &[Direction]) -> (usize, usize) {
    let mut best = (0, 0);
    for s in 0..steps.len() {
        let mut seen = 0u8;
        for (e, d) in steps.iter().enumerate().skip(s) {
            seen |= 1 << d.index();
            let conflicts = (0..3).filter(|a| seen >> (2 * a) & 0b11 == 0b11).count();
            if conflicts > 1 {
                break;
            }
            if conflicts == 1 && e + 1 - s > best.1 - best.0 {
                best = (s, e + 1);
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Straightened {
    pub spec: InfinitePathSpec,
    pub steps: usize,
    /// In-region energy before the first step and after each step.
    pub energies: Vec<usize>,
}

pub fn straighten_fixpoint(spec: &InfinitePathSpec, region: &Region) -> Result<Straightened, TransformError> {
    crossing(spec, region)?;
    let mut current = spec.clone();
    let mut energies = vec![2 * crate::paths::count_edges_in_region(spec, region)];
    loop {
        match straighten_once(&current, region) {
            Ok(step) => {
                energies.push(step.energy_after);
                current = step.spec;
            }
            Err(TransformError::AlreadyMonotonicInRegion) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(Straightened { spec: current, steps: energies.len() - 1, energies })
}

struct Run {
    string: usize,
    spec: InfinitePathSpec,
    /// First and last parameter of the overlap, in the oriented string.
    first: i64,
    last: i64,
    /// Cycle position where the run starts in cycle order.
    arc_start: usize,
}

/// Splices strings along the boundary of `surface`.
pub fn surgery(cfg: &Configuration, surface: &Surface) -> Result<Configuration, TransformError> {
    let cycle = surface.boundary_cycle().ok_or(TransformError::InvalidSurface)?;
    if let Some((first, second)) = cfg.first_overlap()? {
        return Err(TransformError::OverlappingStrings { first, second });
    }
    let cyc_edges = cycle.edges();
    let len = cyc_edges.len();
    let position: BTreeMap<Edge, usize> = cyc_edges.iter().enumerate().map(|(k, e)| (e.canonical(), k)).collect();
    let bbox = Region::bounding(cycle.vertices()).expect("cycle has vertices");

    let mut runs = Vec::new();
    for (n, s) in cfg.strings.iter().enumerate() {
        let hits: Vec<(i64, usize)> =
            s.edges_in(&bbox).into_iter().filter_map(|(t, e)| position.get(&e).map(|&k| (t, k))).collect();
        if hits.is_empty() {
            continue;
        }
        let (t0, k0) = hits[0];
        if hits.len() as i64 != hits[hits.len() - 1].0 - t0 + 1 {
            return Err(TransformError::MultipleOverlapRuns { string: n });
        }
        // the string must run against the cycle on the overlap
        let along = s.step(t0) == cyc_edges[k0].direction();
        let spec = if along { s.reversed() } else { s.clone() };
        let c = s.core_len();
        let (first, last) =
            if along { (c - 1 - hits[hits.len() - 1].0, c - 1 - t0) } else { (t0, hits[hits.len() - 1].0) };
        let arc_start = position[&spec.edge(last).canonical()];
        for t in first..=last {
            let k = position[&spec.edge(t).canonical()];
            if spec.step(t) != cyc_edges[k].direction().reversed()
                || (k + (t - first) as usize) % len != (arc_start + (last - first) as usize) % len
            {
                return Err(TransformError::MultipleOverlapRuns { string: n });
            }
        }
        runs.push(Run { string: n, spec, first, last, arc_start });
    }
    if runs.is_empty() {
        return Err(TransformError::NoOverlap);
    }
    runs.sort_by_key(|r| r.arc_start);
    let mut out = cfg.clone();
    for idx in 0..runs.len() {
        let (cur, next) = (&runs[idx], &runs[(idx + 1) % runs.len()]);
        let run_len = (cur.last - cur.first + 1) as usize;
        let gap_start = (cur.arc_start + run_len) % len;
        let gap = (next.arc_start + len - gap_start) % len;
        let (neg, base, mut core) = cur.spec.negative_half(cur.first);
        core.extend((0..gap).map(|k| cyc_edges[(gap_start + k) % len].direction()));
        let (suffix, pos) = next.spec.positive_half(next.last + 1);
        core.extend(suffix);
        let spliced = InfinitePathSpec::new(neg, core, pos, base)
            .map_err(|_| TransformError::SpliceIntersects { string: cur.string })?;
        out.strings[cur.string] = spliced;
    }
    Ok(out)
}

/// Detours overlapping strings until no two share an edge; the later string
/// of each pair moves one unit along the smallest axis the overlap does not use.
pub fn separate_overlaps(cfg: &Configuration) -> Result<Configuration, TransformError> {
    let mut out = cfg.clone();
    for _ in 0..64 {
        let Some((i, j)) = out.first_overlap()? else {
            return Ok(out);
        };
        let shared = out.strings[i].shared_edges(&out.strings[j]).expect("finite overlap");
        let (_, tj) = shared[0];
        let spec = &out.strings[j];
        let dir = spec.step(tj);
        let mut candidates: Vec<Direction> = Vec::new();
        for axis in Axis::ALL.into_iter().filter(|&a| a != dir.axis) {
            candidates.push(Direction::new(axis, Sign::Plus));
            candidates.push(Direction::new(axis, Sign::Minus));
        }
        let current = overlap_with_others(&out, j, spec).expect("finite overlaps");
        let mut moved = None;
        for side in candidates {
            let Ok(next) = spec.with_segment_replaced(tj, tj + 1, &[side, dir, side.reversed()]) else {
                continue;
            };
            if overlap_with_others(&out, j, &next).is_some_and(|n| n < current) {
                moved = Some(next);
                break;
            }
        }
        out.strings[j] = moved.ok_or(TransformError::OverlappingStrings { first: i, second: j })?;
    }
    Err(TransformError::OverlappingStrings { first: 0, second: 1 })
}

/// Edges `candidate` would share with the strings other than `j`.
fn overlap_with_others(cfg: &Configuration, j: usize, candidate: &InfinitePathSpec) -> Option<usize> {
    let mut total = 0;
    for (k, other) in cfg.strings.iter().enumerate() {
        if k != j {
            total += other.shared_edges(candidate).ok()?.len();
        }
    }
    Some(total)
}

/// Parity of the primal loop edges piercing faces of the dual surface.
pub fn linking_parity(primal_loop: &FinitePath, surface: &Surface) -> Result<bool, TransformError> {
    if !primal_loop.is_closed() {
        return Err(TransformError::OpenLoop { index: 0 });
    }
    let crossings =
        primal_loop.edge_set().into_iter().filter(|&e| surface.faces().contains(&dual_face_of_edge(e))).count();
    Ok(crossings % 2 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Face;
    use crate::paths::{
        count_edges_in_region, format_word, infinity_directions, parse_word, path_equivalent, validate_surface,
    };

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn v(x: i64, y: i64, z: i64) -> Vertex {
        Vertex::new(x, y, z)
    }

    fn spec_at(neg: &str, core: &str, pos: &str, base: Vertex) -> InfinitePathSpec {
        InfinitePathSpec::new(w(neg), w(core), w(pos), base).unwrap()
    }

    #[test]
    fn energy_examples() {
        let unit = FinitePath::new(v(0, 0, 0), w("X+Y+X-Y-")).unwrap();
        let cfg = Configuration::new(vec![], vec![], vec![unit]).unwrap();
        let r = Region::new(v(-1, -1, -1), v(2, 2, 2)).unwrap();
        assert_eq!(energy(&cfg, &r).flux_energy, 8);
        assert_eq!(energy(&Configuration::default(), &r).total, 0);
        let charged = Configuration::new(vec![v(0, 0, 0), v(9, 9, 9)], vec![], vec![]).unwrap();
        assert_eq!(energy(&charged, &r).charge_energy, 2);
        // overlapping strings cancel
        let line = spec_at("Z+", "", "Z+", v(0, 0, 0));
        let both = Configuration::with_strings(vec![line.clone(), line]);
        assert_eq!(energy(&both, &r).flux_energy, 0);
        assert!(Configuration::new(vec![], vec![], vec![FinitePath::new(v(0, 0, 0), w("X+")).unwrap()]).is_err());
    }

    #[test]
    fn projection_examples() {
        let (p, rec) = project(&Walk { start: v(0, 0, 0), steps: w("X+Z+X+") }, Axis::Z);
        assert_eq!((format_word(&p.steps), rec.indices()), ("X+X+".to_string(), vec![1]));
        let (p, rec) = project(&Walk { start: v(0, 0, 0), steps: w("Z+Z+") }, Axis::Z);
        assert!(p.steps.is_empty());
        assert_eq!(rec.indices(), vec![0, 1]);
    }

    #[test]
    fn lift_round_trip() {
        let original = Walk { start: v(0, 0, 0), steps: w("X+Z+Y+Z+X+Y-") };
        let (p, rec) = project(&original, Axis::Z);
        assert_eq!(lift(&original, &p, &rec).unwrap().steps(), &original.steps[..]);
        let bad = Walk { start: v(0, 0, 0), steps: w("X+") };
        assert!(matches!(lift(&original, &bad, &rec), Err(TransformError::EndpointMismatch { .. })));
    }

    #[test]
    fn lift_after_reroute_keeps_endpoints() {
        // three-dimensional detour with a y backtrack
        let original = Walk { start: v(0, 0, 0), steps: w("Y+Z+X+Z+Y-X+") };
        let (p, rec) = project(&original, Axis::Z);
        let straight = Walk { start: p.start, steps: staircase(p.start, p.end(), &[Axis::X, Axis::Y]) };
        let lifted = lift(&original, &straight, &rec).unwrap();
        assert_eq!((lifted.start(), lifted.end()), (original.start, original.end()));
        assert_eq!(lifted.len(), 4);
    }

    #[test]
    fn inverse_u_straightens_to_line() {
        let u = spec_at("Z+", "X+", "Z-", v(0, 0, 0));
        let region = Region::new(v(0, 0, -3), v(1, 0, 0)).unwrap();
        assert_eq!(count_edges_in_region(&u, &region), 7);
        let step = straighten_once(&u, &region).unwrap();
        assert_eq!(step.case, StraightenCase::Planar);
        assert_eq!((step.energy_before, step.energy_after), (14, 2));
        assert!(path_equivalent(&u, &step.spec));
        let fix = straighten_fixpoint(&u, &region).unwrap();
        assert_eq!(fix.steps, 1);
        assert!(matches!(straighten_once(&fix.spec, &region), Err(TransformError::AlreadyMonotonicInRegion)));
    }

    #[test]
    fn straighten_preconditions() {
        let stair = spec_at("X+Y+", "", "X+Y+", v(0, 0, 0));
        let r = Region::new(v(-2, -2, 0), v(2, 2, 0)).unwrap();
        assert_eq!(straighten_once(&stair, &r), Err(TransformError::AlreadyMonotonicInRegion));
        assert_eq!(straighten_fixpoint(&stair, &r).unwrap().steps, 0);
        let far = Region::new(v(10, 10, 10), v(11, 11, 11)).unwrap();
        assert_eq!(straighten_once(&stair, &far), Err(TransformError::NotInRegion));
        // U with legs two apart crosses a thin slab twice
        let u = spec_at("Z+", "X+X+", "Z-", v(0, 0, 0));
        let thin = Region::new(v(0, 0, -2), v(2, 0, -2)).unwrap();
        assert_eq!(straighten_once(&u, &thin), Err(TransformError::MultipleCrossings));
    }

    #[test]
    fn three_dimensional_case_uses_projection() {
        let s = spec_at("Z+", "Y+X+Z+Y-", "Z+", v(0, 0, 0));
        let r = Region::new(v(-1, -1, 0), v(2, 2, 3)).unwrap();
        let step = straighten_once(&s, &r).unwrap();
        assert!(matches!(step.case, StraightenCase::Projected { axis: Axis::X }));
        assert!(step.energy_after < step.energy_before);
        assert!(path_equivalent(&s, &step.spec));
    }

    #[test]
    fn multi_axis_case_shrinks() {
        let s = spec_at("Z+", "X+Y+Y+X-X-Y-", "Z+", v(0, 0, 0));
        let r = Region::new(v(-3, -3, 0), v(3, 3, 0)).unwrap();
        let fix = straighten_fixpoint(&s, &r).unwrap();
        assert!(fix.steps >= 1);
        assert!(fix.energies.windows(2).all(|p| p[1] < p[0] && (p[0] - p[1]) % 2 == 0));
        assert!(path_equivalent(&s, &fix.spec));
    }

    #[test]
    fn longest_run_prefers_earliest() {
        assert_eq!(longest_single_conflict_run(&w("X+X-Y+Y-")), (0, 3));
        assert_eq!(longest_single_conflict_run(&w("X+Y+X-Y-")), (0, 3));
    }

    fn parallel_lines() -> (Configuration, Surface) {
        let a = spec_at("Z+", "", "Z+", v(0, 0, 0));
        let b = spec_at("Z+", "", "Z+", v(2, 0, 0));
        let faces: Vec<Face> = (0..2).flat_map(|x| (0..3).map(move |z| Face::new(v(x, 0, z), Axis::Y))).collect();
        (Configuration::with_strings(vec![a, b]), validate_surface(&faces).unwrap())
    }

    #[test]
    fn parallel_lines_become_two_u_shapes() {
        let (cfg, s) = parallel_lines();
        let out = surgery(&cfg, &s).unwrap();
        assert_eq!(out.strings.len(), 2);
        for g in &out.strings {
            let d = infinity_directions(g);
            assert_eq!(d.plus.len(), 1);
            assert_eq!(d.plus, d.minus);
        }
        let window = Region::new(v(-5, -5, -10), v(7, 5, 12)).unwrap();
        let mut expected = flux_chain(&cfg, &window);
        for e in s.boundary() {
            toggle(&mut expected, *e);
        }
        assert_eq!(flux_chain(&out, &window), expected);
    }

    #[test]
    fn unit_square_gives_detour() {
        let line = spec_at("Z+", "", "Z+", v(0, 0, 0));
        let s = validate_surface(&[Face::new(v(0, 0, 0), Axis::X)]).unwrap();
        let out = surgery(&Configuration::with_strings(vec![line.clone()]), &s).unwrap();
        assert!(path_equivalent(&out.strings[0], &line));
        let window = Region::new(v(-3, -3, -3), v(3, 3, 3)).unwrap();
        assert_eq!(count_edges_in_region(&out.strings[0], &window), count_edges_in_region(&line, &window) + 2);
    }

    #[test]
    fn surgery_errors() {
        let (cfg, _) = parallel_lines();
        let far = validate_surface(&[Face::new(v(9, 9, 9), Axis::Z)]).unwrap();
        assert_eq!(surgery(&cfg, &far), Err(TransformError::NoOverlap));
        let cube: Vec<Face> = vec![
            Face::new(v(0, 0, 0), Axis::X),
            Face::new(v(1, 0, 0), Axis::X),
            Face::new(v(0, 0, 0), Axis::Y),
            Face::new(v(0, 1, 0), Axis::Y),
            Face::new(v(0, 0, 0), Axis::Z),
            Face::new(v(0, 0, 1), Axis::Z),
        ];
        assert_eq!(surgery(&cfg, &validate_surface(&cube).unwrap()), Err(TransformError::InvalidSurface));
        // a boundary touching one line in two separate runs
        let zig = spec_at("Z+", "", "Z+", v(0, 0, 0));
        let c_shape = [
            Face::new(v(0, 0, 0), Axis::Y),
            Face::new(v(1, 0, 0), Axis::Y),
            Face::new(v(1, 0, 1), Axis::Y),
            Face::new(v(1, 0, 2), Axis::Y),
            Face::new(v(0, 0, 2), Axis::Y),
        ];
        let s = validate_surface(&c_shape).unwrap();
        assert_eq!(
            surgery(&Configuration::with_strings(vec![zig]), &s),
            Err(TransformError::MultipleOverlapRuns { string: 0 })
        );
    }

    #[test]
    fn overlaps_are_separated() {
        let a = spec_at("Z+", "", "Z+", v(0, 0, 0));
        let b = spec_at("X+", "X+Z+Z+X+", "X+", v(-1, 0, -1));
        let cfg = Configuration::with_strings(vec![a, b.clone()]);
        assert_eq!(cfg.first_overlap().unwrap(), Some((0, 1)));
        let out = separate_overlaps(&cfg).unwrap();
        assert_eq!(out.first_overlap().unwrap(), None);
        assert!(path_equivalent(&out.strings[1], &b));
        let same = Configuration::with_strings(vec![cfg.strings[0].clone(), cfg.strings[0].clone()]);
        assert!(matches!(separate_overlaps(&same), Err(TransformError::InfiniteOverlap { .. })));
    }

    #[test]
    fn linking_examples() {
        let face = Face::new(v(0, 0, 0), Axis::Z);
        let s = validate_surface(&[face]).unwrap();
        let e = crate::lattice::dual_edge_of_face(face);
        let around = FinitePath::new(e.base, w("Z+X+Z-X-")).unwrap();
        assert!(linking_parity(&around, &s).unwrap());
        let away = FinitePath::new(v(5, 5, 5), w("Z+X+Z-X-")).unwrap();
        assert!(!linking_parity(&away, &s).unwrap());
    }
}
