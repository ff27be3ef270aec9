//! The 22-cell switch graphs.
//!
//! The wiring lives in `data/switches/wiring.txt`; this module parses it and
//! sets the idle colours of sensors, controllers and markers.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::engine::{Cell, CellGraph, CellId, Configuration, Port};
use crate::geometry::FACE_COUNT;
use crate::oracle::{Laterality, SwitchKind};
use crate::state::CellState;

use super::{Layout, Point, Scenario, ScenarioError, SwitchSpec, Track};

const WIRING: &str = include_str!("../../data/switches/wiring.txt");

pub const SWITCH_CELLS: u32 = 22;
/// Cells of the single track, farthest first.
pub const APPROACH: [u32; 5] = [1, 2, 3, 4, 5];
pub const CENTRE: u32 = 6;
pub const LEFT_ARM: [u32; 5] = [7, 8, 9, 10, 11];
pub const RIGHT_ARM: [u32; 5] = [12, 13, 14, 15, 16];
/// Sensors, lower and upper controllers, markers.
pub const CONTROL: [u32; 6] = [17, 18, 19, 20, 21, 22];

/// Number of steps in each switch run.
pub const SWITCH_STEPS: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiringError {
    pub line: usize,
    pub reason: String,
}

type PortSpec = [Port; FACE_COUNT];
type Wiring = BTreeMap<(SwitchKind, u32), PortSpec>;

/// Ports of every cell, per kind. Links hold cell numbers (1-based labels)
/// as `CellId(label - 1)`.
fn wiring() -> &'static Result<Wiring, WiringError> {
    static W: OnceLock<Result<Wiring, WiringError>> = OnceLock::new();
    W.get_or_init(|| parse_wiring(WIRING))
}

fn parse_wiring(text: &str) -> Result<Wiring, WiringError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |reason: String| WiringError { line, reason };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let kinds = tokens.next().unwrap_or_default();
        let cell: u32 = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .filter(|c| (1..=SWITCH_CELLS).contains(c))
            .ok_or_else(|| err("missing or bad cell number".into()))?;
        let mut ports = [Port::Fixed(CellState::W); FACE_COUNT];
        for tok in tokens {
            let (face, target) = tok
                .split_once(':')
                .ok_or_else(|| err(format!("bad port {tok:?}")))?;
            let face: usize = face
                .parse()
                .ok()
                .filter(|f| *f < FACE_COUNT)
                .ok_or_else(|| err(format!("bad face in {tok:?}")))?;
            ports[face] = match target.parse::<u32>() {
                Ok(n) if (1..=SWITCH_CELLS).contains(&n) => Port::Link(CellId(n as usize - 1)),
                Ok(_) => return Err(err(format!("bad cell in {tok:?}"))),
                Err(_) => Port::Fixed(
                    target
                        .parse()
                        .map_err(|e: crate::state::UnknownState| err(e.to_string()))?,
                ),
            };
        }
        for c in kinds.chars() {
            let kind = match c {
                'm' => SwitchKind::Memory,
                'x' => SwitchKind::Fixed,
                'f' => SwitchKind::FlipFlop,
                _ => return Err(err(format!("unknown kind letter {c:?}"))),
            };
            if out.insert((kind, cell), ports).is_some() {
                return Err(err(format!("cell {cell} given twice for {kind}")));
            }
        }
    }
    for kind in SwitchKind::ALL {
        for cell in 1..=SWITCH_CELLS {
            if !out.contains_key(&(kind, cell)) {
                return Err(WiringError {
                    line: 0,
                    reason: format!("cell {cell} missing for {kind}"),
                });
            }
        }
    }
    Ok(out)
}

/// Idle states of cells 17..22.
pub fn idle_control(kind: SwitchKind, side: Laterality) -> [CellState; 6] {
    use CellState::*;
    let (l, r) = match side {
        Laterality::Left => (B, R),
        Laterality::Right => (R, B),
    };
    match kind {
        SwitchKind::Memory => [l, r, B, B, r, l],
        SwitchKind::Fixed => [l, r, W, B, r, l],
        SwitchKind::FlipFlop => [l, r, B, W, W, W],
    }
}

/// Side selected by the sensor and marker colours, or `None` if the
/// pattern matches neither side.
pub fn selected_side(kind: SwitchKind, control: &[CellState]) -> Option<Laterality> {
    [Laterality::Left, Laterality::Right]
        .into_iter()
        .find(|side| {
            let idle = idle_control(kind, *side);
            match kind {
                SwitchKind::FlipFlop => control[..2] == idle[..2],
                _ => control[..2] == idle[..2] && control[4..6] == idle[4..6],
            }
        })
}

pub fn build_switch(kind: SwitchKind, side: Laterality) -> Result<Scenario, ScenarioError> {
    if kind == SwitchKind::Fixed && side == Laterality::Right {
        return Err(ScenarioError::UnsupportedSwitch(kind, side));
    }
    let wiring = wiring().as_ref().map_err(|e| ScenarioError::Wiring {
        line: e.line,
        reason: e.reason.clone(),
    })?;
    let cells = (1..=SWITCH_CELLS)
        .map(|label| Cell {
            label,
            ports: wiring[&(kind, label)],
        })
        .collect();
    let graph = CellGraph::new(cells)?;
    let mut initial = Configuration::blank(&graph);
    for (label, state) in CONTROL.iter().zip(idle_control(kind, side)) {
        initial.set(CellId(*label as usize - 1), state);
    }
    let id = |l: &u32| CellId(*l as usize - 1);
    let tracks = vec![
        Track {
            name: "u".into(),
            before: vec![],
            cells: APPROACH.iter().map(id).collect(),
            after: vec![],
        },
        Track {
            name: "left".into(),
            before: vec![],
            cells: LEFT_ARM.iter().map(id).collect(),
            after: vec![],
        },
        Track {
            name: "right".into(),
            before: vec![],
            cells: RIGHT_ARM.iter().map(id).collect(),
            after: vec![],
        },
    ];
    Ok(Scenario {
        name: format!("{kind}-{side}"),
        print_order: graph.ids().collect(),
        graph,
        initial,
        golden_name: None,
        steps: SWITCH_STEPS,
        layout: Some(switch_layout()),
        tracks,
        switch: Some(SwitchSpec { kind, side }),
    })
}

/// Schematic positions, seen from above: the arriving track comes up from
/// the bottom, the left arm goes up-left and the right arm up-right.
fn switch_layout() -> Layout {
    let mut layout = Layout::default();
    let mut put =
        |label: u32, x: f64, y: f64| layout.place(CellId(label as usize - 1), Point { x, y });
    for (i, l) in APPROACH.iter().enumerate() {
        put(*l, 0.0, 6.0 - i as f64);
    }
    put(CENTRE, 0.0, 1.0);
    for (i, l) in LEFT_ARM.iter().enumerate() {
        put(*l, -1.0 - i as f64, 0.5 - 0.5 * i as f64);
    }
    for (i, l) in RIGHT_ARM.iter().enumerate() {
        put(*l, 1.0 + i as f64, 0.5 - 0.5 * i as f64);
    }
    put(17, -1.6, 1.4);
    put(18, 1.6, 1.4);
    put(19, 0.0, 2.3);
    put(20, 0.0, -0.6);
    put(21, -0.9, -1.3);
    put(22, 0.9, -1.3);
    layout
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::context_of;

    #[test]
    fn wiring_file_is_complete() {
        assert!(wiring().is_ok(), "{:?}", wiring().as_ref().err());
    }

    #[test]
    fn wiring_errors_carry_lines() {
        assert_eq!(parse_wiring("m 1 0:Q\n").unwrap_err().line, 1);
        assert_eq!(parse_wiring("\nm 40\n").unwrap_err().line, 2);
        assert_eq!(parse_wiring("m 1\nm 1\n").unwrap_err().line, 2);
    }

    #[test]
    fn fixed_right_is_unsupported() {
        assert!(matches!(
            build_switch(SwitchKind::Fixed, Laterality::Right),
            Err(ScenarioError::UnsupportedSwitch(..))
        ));
    }

    #[test]
    fn idle_contexts_of_memory_switch() {
        let s = build_switch(SwitchKind::Memory, Laterality::Left).unwrap();
        let ctx = |l: u32| context_of(&s.graph, &s.initial, CellId(l as usize - 1)).to_string();
        assert_eq!(ctx(7), "W | B W B W W B B B W W W B");
        assert_eq!(ctx(20), "B | B W R W W R R R R W B R");
    }

    #[test]
    fn flip_flop_sensors_have_five_red_milestones() {
        let s = build_switch(SwitchKind::FlipFlop, Laterality::Left).unwrap();
        for label in [17u32, 18] {
            let reds = s.graph.cells()[label as usize - 1]
                .ports
                .iter()
                .filter(|p| **p == Port::Fixed(CellState::R))
                .count();
            assert_eq!(reds, 5);
        }
    }

    #[test]
    fn selected_side_reads_idle_patterns() {
        for kind in SwitchKind::ALL {
            for side in [Laterality::Left, Laterality::Right] {
                assert_eq!(selected_side(kind, &idle_control(kind, side)), Some(side));
            }
        }
    }
}
