//! Ready-made cell graphs: track segments, the bridge and the switches,
//! with the reference traces they are checked against.

pub mod switch;
pub mod track;

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::engine::{run, CellGraph, CellId, Configuration, EngineError, Trace};
use crate::oracle::{Laterality, SwitchKind};
use crate::rules::RuleTable;
use crate::state::CellState;
use crate::trace::{TraceParseError, TraceTable};

pub use switch::build_switch;
pub use track::{
    build_bridge, build_corner, build_horizontal_segment, build_straight_element,
    build_vertical_segment, Direction, TrackElement,
};

pub fn default_golden_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/golden"))
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("({0}, {1}) is not an exit pair of a straight element")]
    InvalidExitPair(usize, usize),
    #[error("{what} needs at least {min} elements, got {got}")]
    TooShort {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("no {1} version of the {0} switch")]
    UnsupportedSwitch(SwitchKind, Laterality),
    #[error("{mode} crossing is not valid for a {kind} switch")]
    InvalidMode {
        kind: SwitchKind,
        mode: CrossingMode,
    },
    #[error("scenario {0} is not a switch")]
    NotASwitch(String),
    #[error("unknown scenario {0:?}")]
    Unknown(String),
    #[error("track {track} has no runoff on the {side} side")]
    NoRunoff { track: String, side: &'static str },
    #[error("switch wiring line {line}: {reason}")]
    Wiring { line: usize, reason: String },
    #[error("golden trace {path} is missing")]
    MissingGolden { path: PathBuf },
    #[error("cannot read golden trace {path}: {source}")]
    GoldenIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("golden trace {path}: {source}")]
    GoldenParse {
        path: PathBuf,
        #[source]
        source: TraceParseError,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossingMode {
    Active,
    PassiveSelected,
    PassiveNonSelected,
}

impl fmt::Display for CrossingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossingMode::Active => "active",
            CrossingMode::PassiveSelected => "sel",
            CrossingMode::PassiveNonSelected => "nonsel",
        })
    }
}

impl FromStr for CrossingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "active" => Ok(CrossingMode::Active),
            "sel" | "selected" => Ok(CrossingMode::PassiveSelected),
            "nonsel" | "non-selected" => Ok(CrossingMode::PassiveNonSelected),
            _ => Err(format!("unknown crossing mode {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Schematic drawing positions of the cells worth drawing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layout {
    positions: HashMap<CellId, Point>,
}

impl Layout {
    pub fn place(&mut self, id: CellId, p: Point) {
        self.positions.insert(id, p);
    }

    pub fn position(&self, id: CellId) -> Option<Point> {
        self.positions.get(&id).copied()
    }

    /// Placed cells in id order.
    pub fn cells(&self) -> Vec<CellId> {
        let mut ids: Vec<CellId> = self.positions.keys().copied().collect();
        ids.sort();
        ids
    }
}

/// Track cells in order, with the runoff cells beyond each end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Track {
    pub name: String,
    pub before: Vec<CellId>,
    pub cells: Vec<CellId>,
    pub after: Vec<CellId>,
}

impl Track {
    /// Runoff, segment and runoff cells in order.
    pub fn all_cells(&self) -> Vec<CellId> {
        let mut v = self.before.clone();
        v.extend(&self.cells);
        v.extend(&self.after);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchSpec {
    pub kind: SwitchKind,
    pub side: Laterality,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub graph: CellGraph,
    pub initial: Configuration,
    pub print_order: Vec<CellId>,
    /// File stem of the reference trace, if there is one.
    pub golden_name: Option<&'static str>,
    pub steps: usize,
    pub layout: Option<Layout>,
    pub tracks: Vec<Track>,
    pub switch: Option<SwitchSpec>,
}

impl Scenario {
    /// Puts a locomotive at one end of track `track`, about to run through
    /// it: the rear in the last runoff cell, the front in the first segment
    /// cell.
    pub fn place_locomotive(&mut self, track: usize, dir: Direction) -> Result<(), ScenarioError> {
        let t = &self.tracks[track];
        let (rear, front) = match dir {
            Direction::Forward => (t.before.last(), t.cells.first()),
            Direction::Backward => (t.after.first(), t.cells.last()),
        };
        let (Some(&rear), Some(&front)) = (rear, front) else {
            return Err(ScenarioError::NoRunoff {
                track: t.name.clone(),
                side: match dir {
                    Direction::Forward => "entry",
                    Direction::Backward => "exit",
                },
            });
        };
        self.clear_locomotives();
        self.initial.set(rear, CellState::R);
        self.initial.set(front, CellState::B);
        Ok(())
    }

    /// Whitens every track cell.
    pub fn clear_locomotives(&mut self) {
        for t in &self.tracks {
            for id in t.all_cells() {
                self.initial.set(id, CellState::W);
            }
        }
    }

    pub fn run(&self, table: &RuleTable, steps: usize) -> Result<Trace, ScenarioError> {
        Ok(run(&self.graph, &self.initial, table, steps)?)
    }

    pub fn label_id(&self, label: u32) -> Result<CellId, ScenarioError> {
        Ok(self.graph.id_of(label)?)
    }

    /// The reference trace from `dir`. A scenario without one gives `None`;
    /// a scenario whose file is absent is an error.
    pub fn load_golden(&self, dir: &Path) -> Result<Option<TraceTable>, ScenarioError> {
        let Some(name) = self.golden_name else {
            return Ok(None);
        };
        load_golden(dir, name).map(Some)
    }
}

pub fn load_golden(dir: &Path, name: &str) -> Result<TraceTable, ScenarioError> {
    let path = dir.join(format!("{name}.trace"));
    if !path.exists() {
        return Err(ScenarioError::MissingGolden { path });
    }
    let text = std::fs::read_to_string(&path).map_err(|source| ScenarioError::GoldenIo {
        path: path.clone(),
        source,
    })?;
    TraceTable::parse(&text).map_err(|source| ScenarioError::GoldenParse { path, source })
}

/// Places the locomotive for `mode` on a switch scenario: on the single
/// track for an active crossing, otherwise on the selected or non-selected
/// arm, heading for the centre.
pub fn place_crossing(s: &mut Scenario, mode: CrossingMode) -> Result<(), ScenarioError> {
    let spec = s
        .switch
        .ok_or_else(|| ScenarioError::NotASwitch(s.name.clone()))?;
    if spec.kind == SwitchKind::FlipFlop && mode != CrossingMode::Active {
        return Err(ScenarioError::InvalidMode {
            kind: spec.kind,
            mode,
        });
    }
    s.clear_locomotives();
    let (rear, front) = match mode {
        CrossingMode::Active => (2, 3),
        CrossingMode::PassiveSelected | CrossingMode::PassiveNonSelected => {
            let arm = if mode == CrossingMode::PassiveSelected {
                spec.side
            } else {
                spec.side.other()
            };
            match arm {
                Laterality::Left => (10, 9),
                Laterality::Right => (15, 14),
            }
        }
    };
    let (rear, front) = (s.label_id(rear)?, s.label_id(front)?);
    s.initial.set(rear, CellState::R);
    s.initial.set(front, CellState::B);
    Ok(())
}

/// Runs a switch scenario for the given crossing.
pub fn drive_crossing(
    s: &Scenario,
    mode: CrossingMode,
    table: &RuleTable,
) -> Result<Trace, ScenarioError> {
    let mut s = s.clone();
    place_crossing(&mut s, mode)?;
    s.run(table, s.steps)
}

/// Every registered scenario name, with the reference trace of the switch
/// scenarios.
pub const SWITCH_SCENARIOS: [(&str, SwitchKind, Laterality, CrossingMode, &str); 11] = [
    (
        "memo-left-active",
        SwitchKind::Memory,
        Laterality::Left,
        CrossingMode::Active,
        "exec_memog1",
    ),
    (
        "memo-left-sel",
        SwitchKind::Memory,
        Laterality::Left,
        CrossingMode::PassiveSelected,
        "exec_memog3",
    ),
    (
        "memo-left-nonsel",
        SwitchKind::Memory,
        Laterality::Left,
        CrossingMode::PassiveNonSelected,
        "exec_memog4",
    ),
    (
        "memo-right-active",
        SwitchKind::Memory,
        Laterality::Right,
        CrossingMode::Active,
        "exec_memod1",
    ),
    (
        "memo-right-sel",
        SwitchKind::Memory,
        Laterality::Right,
        CrossingMode::PassiveSelected,
        "exec_memod4",
    ),
    (
        "memo-right-nonsel",
        SwitchKind::Memory,
        Laterality::Right,
        CrossingMode::PassiveNonSelected,
        "exec_memod3",
    ),
    (
        "fixed-active",
        SwitchKind::Fixed,
        Laterality::Left,
        CrossingMode::Active,
        "exec_fix1",
    ),
    (
        "fixed-sel",
        SwitchKind::Fixed,
        Laterality::Left,
        CrossingMode::PassiveSelected,
        "exec_fix3",
    ),
    (
        "fixed-nonsel",
        SwitchKind::Fixed,
        Laterality::Left,
        CrossingMode::PassiveNonSelected,
        "exec_fix4",
    ),
    (
        "flipflop-left-active",
        SwitchKind::FlipFlop,
        Laterality::Left,
        CrossingMode::Active,
        "exec_flip_flop_G",
    ),
    (
        "flipflop-right-active",
        SwitchKind::FlipFlop,
        Laterality::Right,
        CrossingMode::Active,
        "exec_flip_flop_D",
    ),
];

/// Segment length used by the `vertical` scenario.
pub const DEFAULT_VERTICAL: usize = 7;
/// Block count used by the `horizontal` scenario.
pub const DEFAULT_HORIZONTAL: usize = 5;

pub fn scenario_names() -> Vec<&'static str> {
    let mut names = vec!["vertical", "horizontal", "bridge"];
    names.extend(SWITCH_SCENARIOS.iter().map(|s| s.0));
    names
}

/// Builds a named scenario with its locomotive in place.
pub fn scenario(name: &str) -> Result<Scenario, ScenarioError> {
    match name {
        "vertical" => build_vertical_segment(DEFAULT_VERTICAL),
        "horizontal" => build_horizontal_segment(DEFAULT_HORIZONTAL),
        "bridge" => {
            let mut s = build_bridge()?;
            s.place_locomotive(1, Direction::Forward)?;
            Ok(s)
        }
        _ => {
            let &(n, kind, side, mode, golden) = SWITCH_SCENARIOS
                .iter()
                .find(|s| s.0 == name)
                .ok_or_else(|| ScenarioError::Unknown(name.to_string()))?;
            let mut s = build_switch(kind, side)?;
            place_crossing(&mut s, mode)?;
            s.name = n.to_string();
            s.golden_name = Some(golden);
            Ok(s)
        }
    }
}

/// Crossing mode of a registered switch scenario.
pub fn scenario_mode(name: &str) -> Option<CrossingMode> {
    SWITCH_SCENARIOS.iter().find(|s| s.0 == name).map(|s| s.3)
}
