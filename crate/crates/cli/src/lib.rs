//! Configuration ingestion, command dispatch and JSON reports for `toric3d`.

pub mod config;
pub mod report;

use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use toric3d::lattice::Face;
use toric3d::sectors::{
    enumerate_gsc_solutions, is_ground_sector, is_ground_state, raw_solution_count_by_masks, sector_label,
};
use toric3d::stabilizer::{
    block_sites, commutes, excitation_flip, gauge_rank, surface_net_checks, truncation_lattice, truncation_stability,
    PauliLetter, Truncated,
};
use toric3d::transforms::{energy, straighten_once};
use toric3d::{
    Axis, Configuration, Direction, FiniteLattice, FinitePath, GscMode, InfinitePathSpec, Region, Sign, Surface,
    TransformError, VerdictKind, Vertex,
};

pub use config::{parse_config, parse_surface, ConfigDocument, ParseError};
pub use report::SCHEMA_VERSION;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("invalid flag: {0}")]
    Flag(String),
    #[error("string index {index} out of range ({count} strings)")]
    NoSuchString { index: usize, count: usize },
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn to_value(&self) -> Value {
        let mut v = json!({"kind": self.kind(), "message": self.to_string()});
        match self {
            CliError::Parse(ParseError::Syntax { line, column, .. }) => {
                v["line"] = json!(line);
                v["column"] = json!(column);
            }
            CliError::Parse(ParseError::Semantic { kind, index, .. }) => {
                v["item"] = json!(kind);
                v["index"] = json!(index);
            }
            _ => {}
        }
        v
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(ParseError::Syntax { .. }) => "SyntaxError",
            CliError::Parse(ParseError::Semantic { .. }) => "SemanticError",
            CliError::UnknownCommand(_) => "UnknownCommand",
            CliError::Flag(_) => "FlagError",
            CliError::NoSuchString { .. } => "FlagError",
            CliError::Transform(_) => "TransformError",
            CliError::Io(_) => "IoError",
        }
    }
}

/// Inclusive box `x0,y0,z0:x1,y1,z1`.
pub fn parse_region(s: &str) -> Result<Region, CliError> {
    let bad = || CliError::Flag(format!("region {s:?} is not x0,y0,z0:x1,y1,z1"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let corner = |p: &str| -> Result<Vertex, CliError> {
        let xs: Vec<i64> =
            p.split(',').map(|t| t.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        match xs[..] {
            [x, y, z] => Ok(Vertex::new(x, y, z)),
            _ => Err(bad()),
        }
    };
    Region::new(corner(a)?, corner(b)?).map_err(|e| CliError::Flag(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Commutation,
    Energy,
    Gauge,
    Nets,
    Truncation,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::Commutation, Check::Energy, Check::Gauge, Check::Nets, Check::Truncation];

    fn name(self) -> &'static str {
        match self {
            Check::Commutation => "commutation",
            Check::Energy => "energy",
            Check::Gauge => "gauge",
            Check::Nets => "nets",
            Check::Truncation => "truncation",
        }
    }
}

impl FromStr for Check {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| CliError::Flag(format!("unknown check {s:?}")))
    }
}

/// `all` or a comma separated list of checks.
pub fn parse_checks(s: &str) -> Result<Vec<Check>, CliError> {
    if s == "all" {
        return Ok(Check::ALL.to_vec());
    }
    let mut out = s.split(',').map(|t| t.trim().parse()).collect::<Result<Vec<Check>, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone)]
pub enum Command {
    Validate,
    Classify,
    Energy { region: Region },
    Straighten { region: Region, string: Option<usize> },
    Surgery { surface: Surface },
    Enumerate { strings: usize },
    Verify { n: usize, checks: Vec<Check> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Classify => "classify",
            Command::Energy { .. } => "energy",
            Command::Straighten { .. } => "straighten",
            Command::Surgery { .. } => "surgery",
            Command::Enumerate { .. } => "enumerate",
            Command::Verify { .. } => "verify",
        }
    }

    pub fn needs_config(&self) -> bool {
        !matches!(self, Command::Enumerate { .. } | Command::Verify { .. })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Flags {
    pub strict_gss: bool,
    pub expect_ground: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub body: Value,
    pub exit_code: u8,
}

impl Report {
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("reports serialise")
    }
}

pub fn error_report(command: &str, e: &CliError) -> Report {
    Report { body: json!({"schema_version": SCHEMA_VERSION, "command": command, "error": e.to_value()}), exit_code: 2 }
}

pub fn run(command: &Command, config: Option<&Configuration>, flags: &Flags) -> Result<Report, CliError> {
    let empty = Configuration::default();
    let cfg = config.unwrap_or(&empty);
    let mode = if flags.strict_gss { GscMode::Strict } else { GscMode::Pairwise };
    let mut exit_code = 0;
    let mut body = json!({"schema_version": SCHEMA_VERSION, "command": command.name()});
    match command {
        Command::Validate => {
            body["valid"] = json!(true);
            body["strings"] = json!(cfg.strings.iter().map(report::spec).collect::<Vec<_>>());
            body["charges"] = json!(cfg.charges.len());
            body["loops"] = json!(cfg.loops.len());
        }
        Command::Classify => {
            let verdict = is_ground_sector(cfg, mode);
            body["strict_gss"] = json!(flags.strict_gss);
            body["verdict"] = json!(verdict.kind.to_string());
            body["witness"] = verdict.witness.as_ref().map_or(Value::Null, report::witness);
            body["ground_state"] = report::ground_state(&is_ground_state(cfg));
            body["label"] = sector_label(cfg, mode).ok().as_ref().map_or(Value::Null, report::label);
            body["strings"] = json!(cfg.strings.iter().map(report::spec).collect::<Vec<_>>());
            if flags.expect_ground && verdict.kind == VerdictKind::NotGroundSector {
                exit_code = 1;
            }
        }
        Command::Energy { region } => {
            let e = energy(cfg, region);
            body["region"] = report::region(region);
            body["flux_energy"] = json!(e.flux_energy);
            body["charge_energy"] = json!(e.charge_energy);
            body["total"] = json!(e.total);
        }
        Command::Straighten { region, string } => {
            let indices: Vec<usize> = match string {
                Some(i) if *i >= cfg.strings.len() => {
                    return Err(CliError::NoSuchString { index: *i, count: cfg.strings.len() })
                }
                Some(i) => vec![*i],
                None => (0..cfg.strings.len()).collect(),
            };
            let mut out = cfg.clone();
            let mut results = Vec::new();
            for i in indices {
                match straighten_string(&cfg.strings[i], region) {
                    Ok((spec, steps)) => {
                        results.push(json!({"string": i, "steps": steps, "result": report::spec(&spec)}));
                        out.strings[i] = spec;
                    }
                    Err(e) if string.is_some() => return Err(e.into()),
                    Err(e) => results.push(json!({"string": i, "skipped": e.to_string()})),
                }
            }
            body["region"] = report::region(region);
            body["results"] = json!(results);
            body["configuration"] = report::configuration(&out);
        }
        Command::Surgery { surface } => {
            let out = toric3d::transforms::surgery(cfg, surface)?;
            body["surface"] = json!({
                "faces": surface.faces().iter().map(face_value).collect::<Vec<_>>(),
                "boundary_length": surface.boundary().len(),
            });
            body["strings"] = json!(out.strings.iter().map(report::spec).collect::<Vec<_>>());
            body["configuration"] = report::configuration(&out);
        }
        Command::Enumerate { strings } => {
            if !(1..=3).contains(strings) {
                return Err(CliError::Flag(format!("--strings must be 1, 2 or 3, got {strings}")));
            }
            let e = enumerate_gsc_solutions(*strings);
            body["strings"] = json!(strings);
            body["raw_count"] = json!(e.raw_count);
            body["raw_count_by_masks"] = json!(raw_solution_count_by_masks(*strings));
            body["cases"] = json!(e.cases.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            body["orbits"] = json!(e
                .orbits
                .iter()
                .map(|o| json!({
                    "representative": o.representative.iter().map(|&(p, m)| json!([
                        report::dirs(toric3d::DirSet::from_bits(p)),
                        report::dirs(toric3d::DirSet::from_bits(m)),
                    ])).collect::<Vec<_>>(),
                    "size": o.size,
                    "case": o.case.map(|c| c.to_string()),
                }))
                .collect::<Vec<_>>());
            body["reductions"] = json!(e.reductions.iter().map(|(a, b)| format!("{a} -> {b}")).collect::<Vec<_>>());
        }
        Command::Verify { n, checks } => {
            if *n == 0 || *n > 4 {
                return Err(CliError::Flag(format!("--n must be between 1 and 4, got {n}")));
            }
            let results: Vec<Value> = checks.iter().map(|&c| verify(c, *n)).collect();
            let pass = results.iter().all(|r| r["pass"] != json!(false));
            body["n"] = json!(n);
            body["checks"] = json!(results);
            body["pass"] = json!(pass);
            if !pass {
                exit_code = 1;
            }
        }
    }
    Ok(Report { body, exit_code })
}

fn face_value(f: &Face) -> Value {
    json!({"base": [f.base.x, f.base.y, f.base.z], "normal": f.normal.to_string()})
}

fn straighten_string(
    spec: &InfinitePathSpec,
    region: &Region,
) -> Result<(InfinitePathSpec, Vec<Value>), TransformError> {
    let mut current = spec.clone();
    let mut steps = Vec::new();
    loop {
        match straighten_once(&current, region) {
            Ok(step) => {
                let mut v = report::straighten_case(&step.case);
                v["energy_before"] = json!(step.energy_before);
                v["energy_after"] = json!(step.energy_after);
                steps.push(v);
                current = step.spec;
            }
            Err(TransformError::AlreadyMonotonicInRegion) if !steps.is_empty() => return Ok((current, steps)),
            Err(e) => return Err(e),
        }
    }
}

fn verify(check: Check, n: usize) -> Value {
    let mut v = match check {
        Check::Commutation => verify_commutation(n),
        Check::Energy => verify_energy(n),
        Check::Gauge => {
            let rank = gauge_rank(n).ok();
            json!({"gauge_rank": rank, "expected": n * n * n, "pass": rank == Some(n * n * n)})
        }
        Check::Nets if n > 2 => json!({"pass": Value::Null, "skipped": "surface nets are enumerated for n <= 2"}),
        Check::Nets => match surface_net_checks(n) {
            Ok(r) => json!({
                "gauge_order": r.gauge_order,
                "orthogonal": r.orthogonal,
                "flux_free": r.flux_free,
                "trivial_nets": r.trivial_nets,
                "orbits": r.orbits,
                "boundary_conditions": r.boundary_conditions,
                "nets_per_boundary": r.nets_per_boundary,
                "boundary_bijection": r.boundary_bijection,
                "pass": r.passed(),
            }),
            Err(e) => json!({"pass": false, "error": e.to_string()}),
        },
        Check::Truncation => verify_truncation(n),
    };
    v["check"] = json!(check.name());
    v
}

fn verify_commutation(n: usize) -> Value {
    let lat = FiniteLattice::cube(n).expect("n checked");
    let mut ops: Vec<_> = lat.region().vertices().map(|v| lat.star(v).expect("in block")).collect();
    ops.extend(lat.faces().into_iter().map(|f| lat.plaquette(f).expect("touching face")));
    let mut bad = 0;
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !commutes(&ops[i], &ops[j]).expect("same lattice") {
                bad += 1;
            }
        }
    }
    json!({"stabilizers": ops.len(), "anticommuting_pairs": bad, "pass": bad == 0})
}

fn verify_energy(n: usize) -> Value {
    let region = Region::cube(n as i64);
    let mut cases: Vec<Configuration> = Vec::new();
    let (lo, hi) = (region.min(), region.max());
    for axis in Axis::ALL {
        let (a, b) = axis.perpendicular();
        let d = vec![Direction::new(axis, Sign::Plus)];
        for p in lo.get(a)..=hi.get(a) {
            for q in lo.get(b)..=hi.get(b) {
                let mut base = lo;
                base.set(a, p);
                base.set(b, q);
                let line = InfinitePathSpec::new(d.clone(), vec![], d.clone(), base).expect("straight line");
                cases.push(Configuration::with_strings(vec![line]));
            }
        }
        let square = vec![
            Direction::new(a, Sign::Plus),
            Direction::new(b, Sign::Plus),
            Direction::new(a, Sign::Minus),
            Direction::new(b, Sign::Minus),
        ];
        for v in region.vertices() {
            let lp = FinitePath::new(v, square.clone()).expect("unit square");
            cases.push(Configuration::new(vec![], vec![], vec![lp]).expect("closed"));
        }
    }
    for v in region.vertices() {
        cases.push(Configuration::new(vec![v], vec![], vec![]).expect("charges only"));
    }
    let mut mismatches = 0;
    for cfg in &cases {
        let geometric = energy(cfg, &region).total;
        let syndrome = excitation_flip(&cfg.charges, &cfg.strings, &cfg.loops, &region)
            .and_then(|(lat, flip)| lat.syndrome_energy(&flip, &region));
        if syndrome.ok() != Some(geometric) {
            mismatches += 1;
        }
    }
    json!({"configurations": cases.len(), "mismatches": mismatches, "pass": mismatches == 0})
}

fn verify_truncation(n: usize) -> Value {
    if n < 2 {
        return json!({"pass": Value::Null, "skipped": "truncation needs n >= 2"});
    }
    let n = n as i64;
    let lat = truncation_lattice(n + 1);
    let mut stable = 0;
    let mut unstable = 0;
    for object in [Truncated::String, Truncated::Membrane] {
        for e in block_sites(n - 1) {
            for letter in [PauliLetter::X, PauliLetter::Z] {
                match truncation_stability(&lat, object, &[(e, letter)], n, n + 1) {
                    Ok(true) => stable += 1,
                    _ => unstable += 1,
                }
            }
        }
    }
    let controls_flip = [Truncated::String, Truncated::Membrane]
        .into_iter()
        .all(|o| truncation_stability(&lat, o, &[o.frontier_observable(n)], n, n + 1) == Ok(false));
    json!({
        "observables": stable + unstable,
        "unstable": unstable,
        "frontier_controls_flip": controls_flip,
        "pass": unstable == 0 && controls_flip,
    })
}
