//! Track elements and the segments, bridge and runoff built from them.

use crate::engine::{Cell, CellGraph, CellId, Configuration, Port};
use crate::geometry::FACE_COUNT;
use crate::pentagrid::{enumerate_levels, level_size, NodeKind};
use crate::state::CellState;

use super::{Layout, Point, Scenario, ScenarioError, Track};

/// Straight cells added beyond each end of a segment. A locomotive cannot
/// run into a white boundary (no rule lets it vanish), so it runs off into
/// these instead; they are not part of the printed segment.
pub const RUNOFF: usize = 12;

pub const STRAIGHT_MILESTONES: [usize; 4] = [2, 5, 6, 7];
pub const CORNER_MILESTONES: [usize; 7] = [3, 5, 6, 7, 8, 10, 11];
pub const STRAIGHT_EXITS: [usize; 4] = [3, 4, 8, 10];
pub const ENTRY_FACE: usize = 1;
pub const CORNER_EXIT: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Straight,
    Corner,
}

/// A white cell with permanent blue milestones and two linkable faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrackElement {
    pub kind: ElementKind,
    pub entry: usize,
    pub exit: usize,
}

impl TrackElement {
    pub fn milestones(&self) -> &'static [usize] {
        match self.kind {
            ElementKind::Straight => &STRAIGHT_MILESTONES,
            ElementKind::Corner => &CORNER_MILESTONES,
        }
    }

    /// The cell with its milestones; the entry and exit stay white until
    /// linked.
    pub fn cell(&self, label: u32) -> Cell {
        let mut cell = Cell::blank(label);
        for &f in self.milestones() {
            cell.ports[f] = Port::Fixed(CellState::B);
        }
        cell
    }

    /// States seen by the idle element with white neighbours on both exits.
    pub fn idle_neighbors(&self) -> [CellState; FACE_COUNT] {
        let mut n = [CellState::W; FACE_COUNT];
        for &f in self.milestones() {
            n[f] = CellState::B;
        }
        n
    }
}

pub fn build_straight_element(exit_pair: (usize, usize)) -> Result<TrackElement, ScenarioError> {
    let (a, b) = exit_pair;
    let exit = match (a, b) {
        (ENTRY_FACE, e) | (e, ENTRY_FACE) if STRAIGHT_EXITS.contains(&e) => e,
        _ => return Err(ScenarioError::InvalidExitPair(a, b)),
    };
    Ok(TrackElement {
        kind: ElementKind::Straight,
        entry: ENTRY_FACE,
        exit,
    })
}

pub fn build_corner() -> TrackElement {
    TrackElement {
        kind: ElementKind::Corner,
        entry: ENTRY_FACE,
        exit: CORNER_EXIT,
    }
}

fn plain() -> TrackElement {
    build_straight_element((1, 4)).expect("valid pair")
}

/// Links consecutive elements exit to entry. Cells get labels
/// `first_label, first_label + 1, …` and ids starting at `first_id`.
fn chain(elements: &[TrackElement], first_id: usize, first_label: u32) -> Vec<Cell> {
    let mut cells: Vec<Cell> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| e.cell(first_label + i as u32))
        .collect();
    for i in 0..elements.len().saturating_sub(1) {
        cells[i].ports[elements[i].exit] = Port::Link(CellId(first_id + i + 1));
        cells[i + 1].ports[elements[i + 1].entry] = Port::Link(CellId(first_id + i));
    }
    cells
}

/// A track with runoff on both sides, appended to `cells`. Runoff cells
/// get labels after the segment's so that segment labels run 1..n.
fn push_track(
    cells: &mut Vec<Cell>,
    name: &str,
    segment: &[TrackElement],
    label_base: u32,
) -> Track {
    let mut elements = vec![plain(); RUNOFF];
    elements.extend_from_slice(segment);
    elements.extend(std::iter::repeat_n(plain(), RUNOFF));
    let first_id = cells.len();
    let mut chained = chain(&elements, first_id, 0);
    let n = segment.len() as u32;
    for (i, cell) in chained.iter_mut().enumerate() {
        let i = i as u32;
        cell.label = if i < RUNOFF as u32 {
            label_base + n + 1 + i
        } else if i < RUNOFF as u32 + n {
            label_base + i - RUNOFF as u32 + 1
        } else {
            label_base + i + 1
        };
    }
    cells.extend(chained);
    let ids = |r: std::ops::Range<usize>| r.map(|i| CellId(first_id + i)).collect::<Vec<_>>();
    let s = segment.len();
    Track {
        name: name.to_string(),
        before: ids(0..RUNOFF),
        cells: ids(RUNOFF..RUNOFF + s),
        after: ids(RUNOFF + s..2 * RUNOFF + s),
    }
}

fn line_layout(track: &Track, origin: Point, step: Point, layout: &mut Layout) {
    for (i, id) in track.cells.iter().enumerate() {
        let i = i as f64;
        layout.place(
            *id,
            Point {
                x: origin.x + step.x * i,
                y: origin.y + step.y * i,
            },
        );
    }
}

fn finish(
    name: String,
    cells: Vec<Cell>,
    tracks: Vec<Track>,
    layout: Layout,
    steps: usize,
) -> Result<Scenario, ScenarioError> {
    let graph = CellGraph::new(cells)?;
    let initial = Configuration::blank(&graph);
    let print_order = tracks
        .iter()
        .flat_map(|t| t.cells.iter().copied())
        .collect();
    Ok(Scenario {
        name,
        graph,
        initial,
        print_order,
        golden_name: None,
        steps,
        layout: Some(layout),
        tracks,
        switch: None,
    })
}

/// `n` straight elements chained through faces 4 and 1.
pub fn build_vertical_segment(n: usize) -> Result<Scenario, ScenarioError> {
    if n < 3 {
        return Err(ScenarioError::TooShort {
            what: "vertical segment",
            min: 3,
            got: n,
        });
    }
    let mut cells = Vec::new();
    let track = push_track(&mut cells, "vertical", &vec![plain(); n], 0);
    let mut layout = Layout::default();
    line_layout(
        &track,
        Point { x: 0.0, y: 0.0 },
        Point { x: 0.0, y: 1.0 },
        &mut layout,
    );
    let mut s = finish("vertical".into(), cells, vec![track], layout, n + 3)?;
    s.place_locomotive(0, Direction::Forward)?;
    Ok(s)
}

/// Exit faces of the straight elements of a horizontal segment, read off
/// one level of the Fibonacci tree: exit 4 on a white node, 10 on a black
/// node. Returns the exits and the node kinds.
pub fn horizontal_exits(k: usize) -> Vec<(usize, NodeKind)> {
    let mut level = 0;
    while (level_size(level) as usize) < k {
        level += 1;
    }
    let tree = enumerate_levels(level + 1);
    tree.level(level)
        .iter()
        .take(k)
        .map(|node| {
            let exit = match node.kind {
                NodeKind::White => 4,
                NodeKind::Black => 10,
            };
            (exit, node.kind)
        })
        .collect()
}

/// Kind of the node carrying each corner: the leftmost son of the node
/// carrying the preceding straight element.
pub fn horizontal_corner_kinds(k: usize) -> Vec<NodeKind> {
    horizontal_exits(k)
        .iter()
        .map(|(_, kind)| kind.sons()[0])
        .collect()
}

/// `(SeC)^k`: `k` straight elements, each followed by a corner.
pub fn build_horizontal_segment(k: usize) -> Result<Scenario, ScenarioError> {
    if k < 2 {
        return Err(ScenarioError::TooShort {
            what: "horizontal segment",
            min: 2,
            got: k,
        });
    }
    let mut segment = Vec::with_capacity(2 * k);
    for (exit, _) in horizontal_exits(k) {
        segment.push(TrackElement {
            kind: ElementKind::Straight,
            entry: ENTRY_FACE,
            exit,
        });
        segment.push(build_corner());
    }
    let mut cells = Vec::new();
    let track = push_track(&mut cells, "horizontal", &segment, 0);
    let mut layout = Layout::default();
    for (i, id) in track.cells.iter().enumerate() {
        let y = if i % 2 == 0 { 0.0 } else { 0.8 };
        layout.place(
            *id,
            Point {
                x: i as f64 * 0.6,
                y,
            },
        );
    }
    let mut s = finish("horizontal".into(), cells, vec![track], layout, 2 * k + 3)?;
    s.place_locomotive(0, Direction::Forward)?;
    Ok(s)
}

/// Straight cells of the crossing-free track of the bridge.
pub const BRIDGE_V0_LEN: usize = 9;
/// Number of (SeC) blocks on the raised part of the other track.
pub const BRIDGE_SPAN: usize = 2;

/// Two tracks meeting above one another. V0 runs straight; V1 leaves its
/// guideline through face 3, runs as a horizontal segment in the plane
/// above, and comes back through face 8. The two tracks share no face.
pub fn build_bridge() -> Result<Scenario, ScenarioError> {
    let v0 = vec![plain(); BRIDGE_V0_LEN];
    let mut v1 = vec![plain(), plain()];
    v1.push(build_straight_element((1, 3))?);
    for (exit, _) in horizontal_exits(BRIDGE_SPAN) {
        v1.push(TrackElement {
            kind: ElementKind::Straight,
            entry: ENTRY_FACE,
            exit,
        });
        v1.push(build_corner());
    }
    v1.push(build_straight_element((1, 8))?);
    v1.extend([plain(), plain()]);

    let mut cells = Vec::new();
    let t0 = push_track(&mut cells, "V0", &v0, 0);
    let t1 = push_track(&mut cells, "V1", &v1, 100);
    let mut layout = Layout::default();
    line_layout(
        &t0,
        Point { x: 4.0, y: 0.0 },
        Point { x: 0.0, y: 1.0 },
        &mut layout,
    );
    let mid = (t1.cells.len() as f64 - 1.0) / 2.0;
    for (i, id) in t1.cells.iter().enumerate() {
        let i = i as f64;
        let lifted = (3.0..t1.cells.len() as f64 - 3.0).contains(&i);
        layout.place(
            *id,
            Point {
                x: 4.0 + (i - mid),
                y: if lifted { 4.0 - 0.5 } else { 4.0 },
            },
        );
    }
    let steps = v1.len() + 3;
    finish("bridge".into(), cells, vec![t0, t1], layout, steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{minimal_context, RuleContext};

    #[test]
    fn straight_exit_pairs() {
        for e in STRAIGHT_EXITS {
            let s = build_straight_element((1, e)).unwrap();
            assert_eq!(s.exit, e);
            assert_eq!(s.milestones(), &[2, 5, 6, 7]);
        }
        assert_eq!(build_straight_element((4, 1)).unwrap().exit, 4);
        assert!(matches!(
            build_straight_element((1, 2)),
            Err(ScenarioError::InvalidExitPair(1, 2))
        ));
        assert!(build_straight_element((3, 4)).is_err());
    }

    #[test]
    fn idle_contexts() {
        let s = build_straight_element((1, 3)).unwrap();
        let ctx = RuleContext::new(CellState::W, s.idle_neighbors());
        assert_eq!(ctx.to_string(), "W | W W B W W B B B W W W W");
        let s4 = build_straight_element((1, 4)).unwrap();
        let ctx4 = RuleContext::new(CellState::W, s4.idle_neighbors());
        assert_eq!(minimal_context(&ctx), minimal_context(&ctx4));
        let c = build_corner();
        assert_eq!(
            RuleContext::new(CellState::W, c.idle_neighbors()).to_string(),
            "W | W W W B W B B B B W B B"
        );
        assert_eq!(c.cell(1).ports[0], Port::Fixed(CellState::W));
    }

    #[test]
    fn segment_sizes() {
        assert!(matches!(
            build_vertical_segment(2),
            Err(ScenarioError::TooShort { min: 3, .. })
        ));
        assert!(build_horizontal_segment(1).is_err());
        let v = build_vertical_segment(7).unwrap();
        assert_eq!(v.print_order.len(), 7);
        assert_eq!(v.graph.len(), 7 + 2 * RUNOFF);
        let labels: Vec<u32> = v.print_order.iter().map(|c| v.graph.label(*c)).collect();
        assert_eq!(labels, (1..=7).collect::<Vec<_>>());
        let h = build_horizontal_segment(5).unwrap();
        assert_eq!(h.print_order.len(), 10);
    }

    #[test]
    fn corners_sit_on_black_nodes() {
        for k in 2..=12 {
            assert!(horizontal_corner_kinds(k)
                .iter()
                .all(|k| *k == NodeKind::Black));
        }
    }
}
