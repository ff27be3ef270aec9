use std::sync::OnceLock;

use proptest::prelude::*;

use dodeca_ca::catalog::load_default;
use dodeca_ca::pentagrid::{enumerate_levels, fibonacci_word};
use dodeca_ca::scenario::track::{horizontal_corner_kinds, horizontal_exits};
use dodeca_ca::scenario::{
    build_bridge, build_horizontal_segment, build_vertical_segment, Direction,
};
use dodeca_ca::verify::check_traversal;
use dodeca_ca::RuleTable;

fn catalog() -> &'static RuleTable {
    static T: OnceLock<RuleTable> = OnceLock::new();
    T.get_or_init(|| load_default().unwrap())
}

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Forward), Just(Direction::Backward)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn vertical_segments(n in 3usize..=12, dir in direction()) {
        let s = build_vertical_segment(n).unwrap();
        prop_assert_eq!(check_traversal(&s, catalog(), 0, dir).unwrap(), n + 1);
    }

    #[test]
    fn horizontal_segments(k in 2usize..=12, dir in direction()) {
        let s = build_horizontal_segment(k).unwrap();
        prop_assert!(check_traversal(&s, catalog(), 0, dir).is_ok());
    }
}

#[test]
fn seven_cell_segment_is_idle_after_ten_steps() {
    let s = build_vertical_segment(7).unwrap();
    let trace = s.run(catalog(), 10).unwrap();
    let last = trace.last();
    assert!(s.print_order.iter().all(|c| last.state(*c).is_blank()));
    // The front moves one cell per step while inside the segment.
    for (t, row) in trace.rows.iter().take(7).enumerate() {
        assert_eq!(row.state(s.print_order[t]), dodeca_ca::CellState::B);
    }
}

#[test]
fn horizontal_exit_pattern_is_a_fibonacci_factor() {
    let word = fibonacci_word(5000);
    for k in 2..=40 {
        let pattern: String = horizontal_exits(k)
            .iter()
            .map(|(e, _)| if *e == 4 { 'a' } else { 'b' })
            .collect();
        assert!(word.contains(&pattern), "k={k}: {pattern}");
        assert!(horizontal_corner_kinds(k)
            .iter()
            .all(|c| *c == dodeca_ca::pentagrid::NodeKind::Black));
    }
    let tree = enumerate_levels(8);
    for level in 0..=8 {
        assert!(word.contains(&tree.level_word(level)), "level {level}");
    }
}

#[test]
fn bridge_traversals() {
    let s = build_bridge().unwrap();
    for track in 0..2 {
        for dir in [Direction::Forward, Direction::Backward] {
            check_traversal(&s, catalog(), track, dir)
                .unwrap_or_else(|e| panic!("track {track} {dir:?}: {e}"));
        }
    }
}

#[test]
fn bridge_tracks_share_no_face() {
    let s = build_bridge().unwrap();
    let v0 = s.tracks[0].all_cells();
    let v1 = s.tracks[1].all_cells();
    for a in &v0 {
        for b in &v1 {
            assert!(s.graph.face_towards(*a, *b).is_none());
        }
    }
}
