//! Ground-state and ground-sector decisions, sector labels and the
//! enumeration of admissible infinity-direction assignments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lattice::{toggle, Axis, Direction, Region, Sign, Vertex};
use crate::paths::{infinity_directions, is_monotonic, DirSet, DirectionSet, InfinitePathSpec};
use crate::transforms::{straighten_fixpoint, Configuration, TransformError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SectorError {
    #[error("configuration is not in a ground state sector")]
    NotAGroundSector,
    #[error("script step {step} failed: {source}")]
    Script { step: usize, source: TransformError },
    #[error("script step {step} is inconsistent with the configuration")]
    BadScript { step: usize },
}

/// Which reading of the multi-string condition to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GscMode {
    /// Infinity-direction sets pairwise disjoint.
    #[default]
    Pairwise,
    /// Only the common intersection of all sets must be empty.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    GroundState,
    GroundSectorNotGroundState,
    NotGroundSector,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::GroundState => "GroundState",
            VerdictKind::GroundSectorNotGroundState => "GroundSectorNotGroundState",
            VerdictKind::NotGroundSector => "NotGroundSector",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStep {
    /// Straighten string `index` inside `region` to a fixpoint.
    StraightenString { index: usize, region: Region, steps: usize, energies: Vec<usize> },
    /// Shrink finite loop `index` away.
    RemoveLoop { index: usize },
    /// Fuse charge pairs, leaving at most one.
    AnnihilateCharges { pairs: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A direction in both `D₊` and `D₋` of one string.
    NonEscaping {
        string: usize,
        direction: Direction,
    },
    /// The tails of one string backtrack along `axis`.
    TailBacktrack {
        string: usize,
        axis: Axis,
    },
    /// Two strings sharing an infinity direction.
    Colliding {
        first: usize,
        second: usize,
        direction: Direction,
    },
    /// A direction shared by every string.
    CommonDirection {
        direction: Direction,
    },
    Script(Vec<ScriptStep>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorVerdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
}

pub fn charge_parity(cfg: &Configuration) -> u8 {
    (cfg.charges.len() % 2) as u8
}

/// Tails admit a monotone representative: `D₊ ∪ reverse(D₋)` uses each axis
/// with one sign, which forces `D₊ ∩ D₋ = ∅`.
pub fn tails_escape(d: &DirectionSet) -> bool {
    d.plus.union(d.minus.reversed()).is_sign_consistent()
}

fn single_string_witness(index: usize, d: &DirectionSet) -> Option<Witness> {
    if let Some(direction) = d.plus.intersection(d.minus).iter().next() {
        return Some(Witness::NonEscaping { string: index, direction });
    }
    let forward = d.plus.union(d.minus.reversed());
    Axis::ALL
        .into_iter()
        .find(|&a| forward.contains(Direction::new(a, Sign::Plus)) && forward.contains(Direction::new(a, Sign::Minus)))
        .map(|axis| Witness::TailBacktrack { string: index, axis })
}

fn sector_obstruction(cfg: &Configuration, mode: GscMode) -> Option<Witness> {
    let dirs: Vec<DirectionSet> = cfg.strings.iter().map(infinity_directions).collect();
    for (i, d) in dirs.iter().enumerate() {
        if let Some(w) = single_string_witness(i, d) {
            return Some(w);
        }
    }
    match mode {
        GscMode::Pairwise => {
            for i in 0..dirs.len() {
                for j in i + 1..dirs.len() {
                    if let Some(direction) = dirs[i].all().intersection(dirs[j].all()).iter().next() {
                        return Some(Witness::Colliding { first: i, second: j, direction });
                    }
                }
            }
            None
        }
        GscMode::Strict if dirs.len() >= 2 => {
            let common = dirs.iter().fold(DirSet::from_bits(0b11_1111), |acc, d| acc.intersection(d.all()));
            common.iter().next().map(|direction| Witness::CommonDirection { direction })
        }
        GscMode::Strict => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundStateReport {
    pub ground_state: bool,
    /// Every string monotone and the direction sets pairwise disjoint.
    pub strings_minimal: bool,
    pub loops_absent: bool,
    /// At most one charge after pairwise fusion.
    pub charges_minimal: bool,
    /// No excitation of any kind beyond the strings.
    pub frustration_free: bool,
    pub witness: Option<Witness>,
}

pub fn is_ground_state(cfg: &Configuration) -> GroundStateReport {
    let mut witness = None;
    for (i, s) in cfg.strings.iter().enumerate() {
        let m = is_monotonic(s);
        if !m.monotone {
            let d = infinity_directions(s);
            witness =
                single_string_witness(i, &d).or(Some(Witness::TailBacktrack { string: i, axis: m.conflicting[0] }));
            break;
        }
    }
    if witness.is_none() {
        witness = sector_obstruction(cfg, GscMode::Pairwise);
    }
    let strings_minimal = witness.is_none();
    let loops_absent = cfg.loops.is_empty();
    let mut charges = BTreeSet::new();
    for &c in &cfg.charges {
        toggle(&mut charges, c);
    }
    let charges_minimal = charges.len() <= 1;
    GroundStateReport {
        ground_state: strings_minimal && loops_absent && charges_minimal,
        strings_minimal,
        loops_absent,
        charges_minimal,
        frustration_free: strings_minimal && loops_absent && charges.is_empty(),
        witness,
    }
}

pub fn is_ground_sector(cfg: &Configuration, mode: GscMode) -> SectorVerdict {
    if let Some(w) = sector_obstruction(cfg, mode) {
        return SectorVerdict { kind: VerdictKind::NotGroundSector, witness: Some(w) };
    }
    if cfg.strings.len() >= 4 && mode == GscMode::Pairwise {
        unreachable!("four strings with disjoint direction sets need more than six directions");
    }
    if is_ground_state(cfg).ground_state {
        return SectorVerdict { kind: VerdictKind::GroundState, witness: None };
    }
    match ground_state_script(cfg) {
        Ok(script) => {
            SectorVerdict { kind: VerdictKind::GroundSectorNotGroundState, witness: Some(Witness::Script(script)) }
        }
        // monotone strings whose sets still meet under the strict reading
        Err(_) => SectorVerdict { kind: VerdictKind::GroundSectorNotGroundState, witness: None },
    }
}

/// Region around `v(-k·q) .. v(c + k·p)` in which straightening yields a
/// monotone string, growing `k` until it does.
fn straightening_region(spec: &InfinitePathSpec) -> Option<Region> {
    let d = infinity_directions(spec);
    let forward = d.plus.union(d.minus.reversed());
    let (q, p, c) = (spec.neg_period().len() as i64, spec.pos_period().len() as i64, spec.core_len());
    let mut k = 1;
    while k <= 1 << 12 {
        let region = Region::bounding((-k * q..=c + k * p).map(|t| spec.vertex(t))).expect("nonempty window");
        let visits = spec.visits(&region);
        let (i, j) = (visits[0], visits[visits.len() - 1]);
        if j - i + 1 == visits.len() as i64 {
            let delta = spec.vertex(j) - spec.vertex(i);
            let agrees = Axis::ALL.into_iter().all(|a| match Sign::of(delta.get(a)) {
                Some(sign) => !forward.contains(Direction::new(a, sign.flip())),
                None => true,
            });
            if agrees {
                return Some(region);
            }
        }
        k *= 2;
    }
    None
}

/// Steps taking a ground-sector configuration to a ground state.
pub fn ground_state_script(cfg: &Configuration) -> Result<Vec<ScriptStep>, SectorError> {
    if sector_obstruction(cfg, GscMode::Pairwise).is_some() {
        return Err(SectorError::NotAGroundSector);
    }
    let mut script = Vec::new();
    for (index, s) in cfg.strings.iter().enumerate() {
        if is_monotonic(s).monotone {
            continue;
        }
        let region = straightening_region(s).ok_or(SectorError::NotAGroundSector)?;
        let out =
            straighten_fixpoint(s, &region).map_err(|source| SectorError::Script { step: script.len(), source })?;
        script.push(ScriptStep::StraightenString { index, region, steps: out.steps, energies: out.energies });
    }
    for index in (0..cfg.loops.len()).rev() {
        script.push(ScriptStep::RemoveLoop { index });
    }
    let mut charges = BTreeSet::new();
    for &c in &cfg.charges {
        toggle(&mut charges, c);
    }
    let pairs = cfg.charges.len() / 2;
    if pairs > 0 && charges.len() + 2 * pairs > 1 {
        script.push(ScriptStep::AnnihilateCharges { pairs });
    }
    Ok(script)
}

/// Replays a script, checking every straightening step lowers the energy.
pub fn run_script(cfg: &Configuration, script: &[ScriptStep]) -> Result<Configuration, SectorError> {
    let mut out = cfg.clone();
    for (step, s) in script.iter().enumerate() {
        match s {
            ScriptStep::StraightenString { index, region, .. } => {
                let spec = out.strings.get(*index).ok_or(SectorError::BadScript { step })?;
                let done = straighten_fixpoint(spec, region).map_err(|source| SectorError::Script { step, source })?;
                if done.energies.windows(2).any(|w| w[1] >= w[0] || (w[0] - w[1]) % 2 != 0) {
                    return Err(SectorError::BadScript { step });
                }
                out.strings[*index] = done.spec;
            }
            ScriptStep::RemoveLoop { index } => {
                if *index >= out.loops.len() {
                    return Err(SectorError::BadScript { step });
                }
                out.loops.remove(*index);
            }
            ScriptStep::AnnihilateCharges { .. } => {
                let parity = out.charges.len() % 2;
                out.charges = out.charges.iter().take(parity).copied().collect();
            }
        }
    }
    Ok(out)
}

/// An asymptotic ray: direction and the two coordinates transverse to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfLine {
    pub direction: Direction,
    pub transverse: [i64; 2],
}

fn transverse(v: Vertex, axis: Axis) -> [i64; 2] {
    let (a, b) = axis.perpendicular();
    [v.get(a), v.get(b)]
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StringClass {
    /// Both tails straight: two half-lines, sorted.
    P { halves: [HalfLine; 2] },
    /// One straight tail pinned, the other described by directions only.
    Q { directions: DirSet, pinned: HalfLine },
    /// Directions only.
    R { directions: DirSet },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseName {
    I,
    IIA,
    IIB,
    IIC,
    IIIA,
    IIIB,
    IVA,
    A,
    B,
    C,
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseName::I => "I",
            CaseName::IIA => "II.A",
            CaseName::IIB => "II.B",
            CaseName::IIC => "II.C",
            CaseName::IIIA => "III.A",
            CaseName::IIIB => "III.B",
            CaseName::IVA => "IV.A",
            CaseName::A => "A",
            CaseName::B => "B",
            CaseName::C => "C",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorLabel {
    pub charge_parity: u8,
    pub strings: Vec<StringClass>,
    pub case: Option<CaseName>,
}

pub fn string_class(spec: &InfinitePathSpec) -> StringClass {
    let d = infinity_directions(spec);
    let pos = (d.plus.len() == 1).then(|| {
        let direction = spec.pos_period()[0];
        HalfLine { direction, transverse: transverse(spec.vertex(spec.core_len()), direction.axis) }
    });
    let neg = (d.minus.len() == 1).then(|| {
        let direction = spec.neg_period()[0].reversed();
        HalfLine { direction, transverse: transverse(spec.base(), direction.axis) }
    });
    match (pos, neg) {
        (Some(a), Some(b)) => StringClass::P { halves: if a <= b { [a, b] } else { [b, a] } },
        (Some(pinned), None) | (None, Some(pinned)) => StringClass::Q { directions: d.all(), pinned },
        (None, None) => StringClass::R { directions: d.all() },
    }
}

/// Case of a two- or three-string assignment with pairwise disjoint sets.
pub fn case_name(sets: &[DirSet]) -> Option<CaseName> {
    match sets {
        [a, b] => {
            let (d1, d2) = if a.len() <= b.len() { (*a, *b) } else { (*b, *a) };
            match (d1.len(), d2.len()) {
                (2, 2) => Some(CaseName::I),
                (2, 3) if d1.is_line() => Some(CaseName::IIC),
                (2, 3) if d1.reversed().intersection(d2) == d1.reversed() => Some(CaseName::IIA),
                (2, 3) => Some(CaseName::IIB),
                (2, 4) if d1.is_line() => Some(CaseName::IIIA),
                (2, 4) => Some(CaseName::IIIB),
                (3, 3) => Some(CaseName::IVA),
                _ => None,
            }
        }
        [_, _, _] if sets.iter().all(|s| s.len() == 2) => match sets.iter().filter(|s| s.is_line()).count() {
            3 => Some(CaseName::A),
            1 => Some(CaseName::B),
            0 => Some(CaseName::C),
            _ => None,
        },
        _ => None,
    }
}

pub fn sector_label(cfg: &Configuration, mode: GscMode) -> Result<SectorLabel, SectorError> {
    if sector_obstruction(cfg, mode).is_some() {
        return Err(SectorError::NotAGroundSector);
    }
    let sets: Vec<DirSet> = cfg.strings.iter().map(|s| infinity_directions(s).all()).collect();
    Ok(SectorLabel {
        charge_parity: charge_parity(cfg),
        strings: cfg.strings.iter().map(string_class).collect(),
        case: case_name(&sets),
    })
}

/// A signed permutation of the axes acting on direction indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Octahedral {
    map: [usize; 6],
}

impl Octahedral {
    pub fn all() -> Vec<Octahedral> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::with_capacity(48);
        for perm in PERMS {
            for flips in 0..8 {
                let mut map = [0; 6];
                for d in Direction::ALL {
                    let a = d.axis.index();
                    let flip = flips >> a & 1 == 1;
                    let sign = if flip { d.sign.flip() } else { d.sign };
                    map[d.index()] = Direction::new(Axis::from_index(perm[a]), sign).index();
                }
                out.push(Octahedral { map });
            }
        }
        out
    }

    pub fn apply(&self, s: DirSet) -> DirSet {
        s.iter().map(|d| Direction::from_index(self.map[d.index()])).collect()
    }
}

pub type Assignment = Vec<DirectionSet>;

/// Canonical orbit representative under octahedral symmetry, string
/// relabelling and tail swaps.
pub fn canonical_form(a: &[DirectionSet], group: &[Octahedral]) -> Vec<(u8, u8)> {
    group
        .iter()
        .map(|g| {
            let mut v: Vec<(u8, u8)> = a
                .iter()
                .map(|d| {
                    let (p, m) = (g.apply(d.plus).bits(), g.apply(d.minus).bits());
                    (p.min(m), p.max(m))
                })
                .collect();
            v.sort_unstable();
            v
        })
        .min()
        .expect("nonempty group")
}

/// Single-string assignments from ternary digits: each direction lies in
/// `D₊`, in `D₋`, or in neither.
fn single_string_assignments() -> Vec<DirectionSet> {
    let mut out = Vec::new();
    for code in 0..729u32 {
        let (mut plus, mut minus, mut c) = (DirSet::EMPTY, DirSet::EMPTY, code);
        for d in Direction::ALL {
            match c % 3 {
                1 => plus.insert(d),
                2 => minus.insert(d),
                _ => {}
            }
            c /= 3;
        }
        let d = DirectionSet { plus, minus };
        if !plus.is_empty() && !minus.is_empty() && tails_escape(&d) {
            out.push(d);
        }
    }
    out
}

/// All ordered assignments for `n` strings satisfying the ground-sector condition.
pub fn raw_solutions(n: usize) -> Vec<Assignment> {
    let singles = single_string_assignments();
    let mut out = Vec::new();
    let mut stack: Vec<DirectionSet> = Vec::with_capacity(n);
    fn extend(
        n: usize,
        singles: &[DirectionSet],
        used: DirSet,
        stack: &mut Vec<DirectionSet>,
        out: &mut Vec<Assignment>,
    ) {
        if stack.len() == n {
            out.push(stack.clone());
            return;
        }
        for d in singles {
            if d.all().is_disjoint(used) {
                stack.push(*d);
                extend(n, singles, used.union(d.all()), stack, out);
                stack.pop();
            }
        }
    }
    extend(n, &singles, DirSet::EMPTY, &mut stack, &mut out);
    out
}

/// Independent count of the same solutions, over raw bit masks with the
/// last string outermost.
pub fn raw_solution_count_by_masks(n: usize) -> usize {
    let ok = |p: u8, m: u8| -> bool {
        if p == 0 || m == 0 || p & m != 0 {
            return false;
        }
        // reverse(D₋): swap the two bits of every axis
        let rm = ((m & 0b01_0101) << 1) | ((m & 0b10_1010) >> 1);
        let fwd = p | rm;
        (0..3).all(|a| (fwd >> (2 * a)) & 0b11 != 0b11)
    };
    let masks: Vec<u8> =
        (0..64u8).flat_map(|p| (0..64u8).map(move |m| (p, m))).filter(|&(p, m)| ok(p, m)).map(|(p, m)| p | m).collect();
    fn count(depth: usize, used: u8, masks: &[u8]) -> usize {
        if depth == 0 {
            return 1;
        }
        masks.iter().rev().filter(|&&m| m & used == 0).map(|&m| count(depth - 1, used | m, masks)).sum()
    }
    count(n, 0, &masks)
}

/// Re-pairings of tails achievable by surgery, as new assignments.
fn repairings(a: &[DirectionSet]) -> Vec<Assignment> {
    let flip = |d: DirectionSet| DirectionSet { plus: d.minus, minus: d.plus };
    let mut out = Vec::new();
    let n = a.len();
    for i in 0..n {
        for j in i + 1..n {
            for bj in [a[j], flip(a[j])] {
                let mut b = a.to_vec();
                b[i] = DirectionSet { plus: a[i].plus, minus: bj.minus };
                b[j] = DirectionSet { plus: bj.plus, minus: a[i].minus };
                out.push(b);
            }
        }
    }
    if n == 3 {
        for orient in 0..8 {
            let o: Vec<DirectionSet> = (0..3).map(|k| if orient >> k & 1 == 1 { flip(a[k]) } else { a[k] }).collect();
            for shift in [1, 2] {
                out.push((0..3).map(|k| DirectionSet { plus: o[k].plus, minus: o[(k + shift) % 3].minus }).collect());
            }
        }
    }
    out.retain(|b| {
        b.iter().all(|d| !d.plus.is_empty() && !d.minus.is_empty() && tails_escape(d)) && pairwise_disjoint(b)
    });
    out
}

fn pairwise_disjoint(a: &[DirectionSet]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| a[i].all().is_disjoint(a[j].all())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Vec<(u8, u8)>,
    pub size: usize,
    pub case: Option<CaseName>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub strings: usize,
    pub raw_count: usize,
    pub orbits: Vec<Orbit>,
    pub cases: BTreeSet<CaseName>,
    /// Case reachable from case by a sequence of surgeries (transitively closed).
    pub reductions: BTreeSet<(CaseName, CaseName)>,
}

pub fn enumerate_gsc_solutions(n: usize) -> Enumeration {
    let group = Octahedral::all();
    let raw = raw_solutions(n);
    let mut orbits: BTreeMap<Vec<(u8, u8)>, Orbit> = BTreeMap::new();
    for a in &raw {
        let key = canonical_form(a, &group);
        let case = case_name(&a.iter().map(|d| d.all()).collect::<Vec<_>>());
        orbits.entry(key.clone()).or_insert(Orbit { representative: key, size: 0, case }).size += 1;
    }
    let mut direct: BTreeSet<(CaseName, CaseName)> = BTreeSet::new();
    for a in &raw {
        let Some(from) = case_name(&a.iter().map(|d| d.all()).collect::<Vec<_>>()) else {
            continue;
        };
        for b in repairings(a) {
            if let Some(to) = case_name(&b.iter().map(|d| d.all()).collect::<Vec<_>>()) {
                if to != from {
                    direct.insert((from, to));
                }
            }
        }
    }
    let mut reductions = direct.clone();
    loop {
        let extra: Vec<(CaseName, CaseName)> = reductions
            .iter()
            .flat_map(|&(a, b)| reductions.iter().filter(move |&&(c, _)| c == b).map(move |&(_, d)| (a, d)))
            .filter(|&(a, d)| a != d && !reductions.contains(&(a, d)))
            .collect();
        if extra.is_empty() {
            break;
        }
        reductions.extend(extra);
    }
    let cases = orbits.values().filter_map(|o| o.case).collect();
    Enumeration { strings: n, raw_count: raw.len(), orbits: orbits.into_values().collect(), cases, reductions }
}
