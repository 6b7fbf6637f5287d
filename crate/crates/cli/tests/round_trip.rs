use proptest::prelude::*;

use toric3d::lattice::Face;
use toric3d::paths::validate_surface;
use toric3d::transforms::{straighten_fixpoint, surgery};
use toric3d::{Axis, Configuration, Direction, FinitePath, InfinitePathSpec, Region, Sign, Vertex};
use toric3d_cli::config::{parse_config, to_json};

fn direction() -> impl Strategy<Value = Direction> {
    (0..6usize).prop_map(Direction::from_index)
}

fn vertex(r: i64) -> impl Strategy<Value = Vertex> {
    (-r..=r, -r..=r, -r..=r).prop_map(|(x, y, z)| Vertex::new(x, y, z))
}

fn spec() -> impl Strategy<Value = InfinitePathSpec> {
    (
        prop::collection::vec(direction(), 1..3),
        prop::collection::vec(direction(), 0..8),
        prop::collection::vec(direction(), 1..3),
        vertex(5),
    )
        .prop_filter_map("self-intersecting", |(n, c, p, b)| InfinitePathSpec::new(n, c, p, b).ok())
}

fn square(at: Vertex, normal: Axis) -> FinitePath {
    let (a, b) = normal.perpendicular();
    let steps = vec![
        Direction::new(a, Sign::Plus),
        Direction::new(b, Sign::Plus),
        Direction::new(a, Sign::Minus),
        Direction::new(b, Sign::Minus),
    ];
    FinitePath::new(at, steps).unwrap()
}

fn configuration() -> impl Strategy<Value = Configuration> {
    (
        prop::collection::vec(spec(), 0..4),
        prop::collection::vec(vertex(9), 0..4),
        prop::collection::vec((vertex(9), 0..3usize), 0..3),
    )
        .prop_map(|(strings, charges, loops)| {
            let loops = loops.into_iter().map(|(v, a)| square(v, Axis::ALL[a])).collect();
            Configuration::new(charges, strings, loops).unwrap()
        })
}

proptest! {
    #[test]
    fn configurations_round_trip(cfg in configuration()) {
        prop_assert_eq!(parse_config(&to_json(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn straightened_outputs_round_trip(s in spec(), grow in 0i64..2) {
        let region = Region::bounding((0..=s.core_len()).map(|t| s.vertex(t))).unwrap().inflate(grow);
        if let Ok(out) = straighten_fixpoint(&s, &region) {
            let cfg = Configuration::with_strings(vec![out.spec]);
            prop_assert_eq!(parse_config(&to_json(&cfg)).unwrap(), cfg);
        }
    }

    #[test]
    fn surgery_outputs_round_trip(w in 1i64..4, h in 1i64..4, k0 in -2i64..1) {
        let line = |x| InfinitePathSpec::parse("Z+", "", "Z+", Vertex::new(x, 0, 0)).unwrap();
        let faces: Vec<Face> = (0..w).flat_map(|i| (k0..k0 + h).map(move |k| Face::new(Vertex::new(i, 0, k), Axis::Y))).collect();
        let out = surgery(&Configuration::with_strings(vec![line(0), line(w)]), &validate_surface(&faces).unwrap()).unwrap();
        prop_assert_eq!(parse_config(&to_json(&out)).unwrap(), out);
    }
}
