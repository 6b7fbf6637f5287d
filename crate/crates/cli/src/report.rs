//! JSON renderings of library results.

use serde_json::{json, Value};

use toric3d::paths::infinity_directions;
use toric3d::sectors::{GroundStateReport, HalfLine, ScriptStep};
use toric3d::transforms::StraightenCase;
use toric3d::{Configuration, DirSet, InfinitePathSpec, Region, SectorLabel, StringClass, Vertex, Witness};

use crate::config::{string_doc, ConfigDocument};

pub const SCHEMA_VERSION: u32 = 1;

fn v3(v: Vertex) -> Value {
    json!([v.x, v.y, v.z])
}

fn half(v: Vertex) -> Value {
    json!([v.x as f64 + 0.5, v.y as f64 + 0.5, v.z as f64 + 0.5])
}

/// The box as dual labels, their positions, and as primal vertices.
pub fn region(r: &Region) -> Value {
    json!({
        "dual": {"min": v3(r.min()), "max": v3(r.max()), "min_position": half(r.min()), "max_position": half(r.max())},
        "primal": {"min": v3(r.min()), "max": v3(r.max())},
    })
}

pub fn dirs(s: DirSet) -> Value {
    json!(s.iter().map(|d| d.to_string()).collect::<Vec<_>>())
}

pub fn spec(s: &InfinitePathSpec) -> Value {
    let d = infinity_directions(s);
    let mut v = serde_json::to_value(string_doc(s)).expect("documents serialise");
    v["d_plus"] = dirs(d.plus);
    v["d_minus"] = dirs(d.minus);
    v
}

pub fn configuration(cfg: &Configuration) -> Value {
    serde_json::to_value(ConfigDocument::from_configuration(cfg)).expect("documents serialise")
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::NonEscaping { string, direction } => {
            json!({"kind": "non_escaping", "string": string, "direction": direction.to_string()})
        }
        Witness::TailBacktrack { string, axis } => {
            json!({"kind": "tail_backtrack", "string": string, "axis": axis.to_string()})
        }
        Witness::Colliding { first, second, direction } => {
            json!({"kind": "colliding", "pair": [first, second], "direction": direction.to_string()})
        }
        Witness::CommonDirection { direction } => {
            json!({"kind": "common_direction", "direction": direction.to_string()})
        }
        Witness::Script(steps) => json!({"kind": "script", "steps": steps.iter().map(script_step).collect::<Vec<_>>()}),
    }
}

fn script_step(s: &ScriptStep) -> Value {
    match s {
        ScriptStep::StraightenString { index, region: r, steps, energies } => {
            json!({"op": "straighten_string", "string": index, "region": region(r), "steps": steps, "energies": energies})
        }
        ScriptStep::RemoveLoop { index } => json!({"op": "remove_loop", "loop": index}),
        ScriptStep::AnnihilateCharges { pairs } => json!({"op": "annihilate_charges", "pairs": pairs}),
    }
}

fn half_line(h: &HalfLine) -> Value {
    json!({"direction": h.direction.to_string(), "transverse": h.transverse})
}

pub fn label(l: &SectorLabel) -> Value {
    let strings: Vec<Value> = l
        .strings
        .iter()
        .map(|c| match c {
            StringClass::P { halves } => {
                json!({"class": "P", "halves": [half_line(&halves[0]), half_line(&halves[1])]})
            }
            StringClass::Q { directions, pinned } => {
                json!({"class": "Q", "directions": dirs(*directions), "pinned": half_line(pinned)})
            }
            StringClass::R { directions } => json!({"class": "R", "directions": dirs(*directions)}),
        })
        .collect();
    json!({"charge_parity": l.charge_parity, "case": l.case.map(|c| c.to_string()), "strings": strings})
}

pub fn ground_state(g: &GroundStateReport) -> Value {
    json!({
        "ground_state": g.ground_state,
        "strings_minimal": g.strings_minimal,
        "loops_absent": g.loops_absent,
        "charges_minimal": g.charges_minimal,
        "frustration_free": g.frustration_free,
    })
}

pub fn straighten_case(c: &StraightenCase) -> Value {
    match c {
        StraightenCase::Planar => json!({"case": "planar"}),
        StraightenCase::Projected { axis } => json!({"case": "projected", "axis": axis.to_string()}),
        StraightenCase::SubRun { start, end } => json!({"case": "sub_run", "start": start, "end": end}),
        StraightenCase::Full => json!({"case": "full"}),
    }
}
