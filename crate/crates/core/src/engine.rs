//! Synchronous execution over an explicit graph of cells.
//!
//! Each cell has 12 ports, one per face. A port either holds a permanent
//! state (a milestone, or the white space around the modelled region) or
//! links to another cell of the graph.

use std::fmt;

use thiserror::Error;

use crate::geometry::FACE_COUNT;
use crate::rules::{RuleContext, RuleError, RuleTable};
use crate::state::CellState;
use crate::trace::{TraceRow, TraceTable};

/// Dense index of a cell inside its [`CellGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    Fixed(CellState),
    Link(CellId),
}

impl Default for Port {
    fn default() -> Self {
        Port::Fixed(CellState::W)
    }
}

/// A cell with a printable label (the number used in traces).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub label: u32,
    pub ports: [Port; FACE_COUNT],
}

impl Cell {
    pub fn blank(label: u32) -> Self {
        Cell {
            label,
            ports: [Port::default(); FACE_COUNT],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("cell {cell} face {face} links to unknown cell {target}")]
    DanglingLink {
        cell: u32,
        face: usize,
        target: CellId,
    },
    #[error("cell {from} links to cell {to}, which links back {back} times")]
    AsymmetricLink { from: u32, to: u32, back: usize },
    #[error("duplicate cell label {0}")]
    DuplicateLabel(u32),
    #[error("configuration has {got} states for {expected} cells")]
    SizeMismatch { expected: usize, got: usize },
    #[error("unknown cell label {0}")]
    UnknownLabel(u32),
    #[error("time {time}, cell {cell}: no rule for context {context}")]
    MissingRule {
        cell: u32,
        time: u64,
        context: RuleContext,
    },
}

/// Cells and their wiring. Links are checked for symmetry on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGraph {
    cells: Vec<Cell>,
}

impl CellGraph {
    pub fn new(cells: Vec<Cell>) -> Result<Self, EngineError> {
        let n = cells.len();
        let mut labels: Vec<u32> = cells.iter().map(|c| c.label).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(EngineError::DuplicateLabel(w[0]));
        }
        for (a, cell) in cells.iter().enumerate() {
            for (face, port) in cell.ports.iter().enumerate() {
                let Port::Link(b) = *port else { continue };
                let Some(target) = cells.get(b.0).filter(|_| b.0 < n) else {
                    return Err(EngineError::DanglingLink {
                        cell: cell.label,
                        face,
                        target: b,
                    });
                };
                let back = target
                    .ports
                    .iter()
                    .filter(|p| **p == Port::Link(CellId(a)))
                    .count();
                if back != 1 {
                    return Err(EngineError::AsymmetricLink {
                        from: cell.label,
                        to: target.label,
                        back,
                    });
                }
            }
        }
        Ok(CellGraph { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.0]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn ids(&self) -> impl Iterator<Item = CellId> {
        (0..self.cells.len()).map(CellId)
    }

    pub fn label(&self, id: CellId) -> u32 {
        self.cells[id.0].label
    }

    pub fn id_of(&self, label: u32) -> Result<CellId, EngineError> {
        self.cells
            .iter()
            .position(|c| c.label == label)
            .map(CellId)
            .ok_or(EngineError::UnknownLabel(label))
    }

    /// Face of `from` that links to `to`, if any.
    pub fn face_towards(&self, from: CellId, to: CellId) -> Option<usize> {
        self.cells[from.0]
            .ports
            .iter()
            .position(|p| *p == Port::Link(to))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub states: Vec<CellState>,
    pub time: u64,
}

impl Configuration {
    pub fn blank(graph: &CellGraph) -> Self {
        Configuration {
            states: vec![CellState::W; graph.len()],
            time: 0,
        }
    }

    pub fn from_states(graph: &CellGraph, states: Vec<CellState>) -> Result<Self, EngineError> {
        if states.len() != graph.len() {
            return Err(EngineError::SizeMismatch {
                expected: graph.len(),
                got: states.len(),
            });
        }
        Ok(Configuration { states, time: 0 })
    }

    pub fn state(&self, id: CellId) -> CellState {
        self.states[id.0]
    }

    pub fn set(&mut self, id: CellId, state: CellState) {
        self.states[id.0] = state;
    }

    /// Cells whose state is not white.
    pub fn occupied(&self) -> impl Iterator<Item = (CellId, CellState)> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_blank())
            .map(|(i, s)| (CellId(i), *s))
    }
}

pub fn context_of(graph: &CellGraph, config: &Configuration, cell: CellId) -> RuleContext {
    let ports = &graph.cell(cell).ports;
    let mut neighbors = [CellState::W; FACE_COUNT];
    for (slot, port) in neighbors.iter_mut().zip(ports) {
        *slot = match *port {
            Port::Fixed(s) => s,
            Port::Link(other) => config.state(other),
        };
    }
    RuleContext::new(config.state(cell), neighbors)
}

/// One synchronous step; every new state is computed from `config`.
pub fn step(
    graph: &CellGraph,
    config: &Configuration,
    table: &RuleTable,
) -> Result<Configuration, EngineError> {
    let mut next = Vec::with_capacity(graph.len());
    for id in graph.ids() {
        let ctx = context_of(graph, config, id);
        let state = table.lookup(&ctx).map_err(|e| match e {
            RuleError::MissingRule { context } => EngineError::MissingRule {
                cell: graph.label(id),
                time: config.time,
                context,
            },
            other => unreachable!("lookup only reports missing rules: {other}"),
        })?;
        next.push(state);
    }
    Ok(Configuration {
        states: next,
        time: config.time + 1,
    })
}

/// Configurations at times `t0 ..= t0 + n_steps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub labels: Vec<u32>,
    pub rows: Vec<Configuration>,
}

impl Trace {
    pub fn last(&self) -> &Configuration {
        self.rows.last().expect("a trace has at least one row")
    }

    /// Projects the trace onto an ordered list of cells.
    pub fn table(&self, cells: &[CellId]) -> TraceTable {
        TraceTable {
            labels: cells.iter().map(|c| self.labels[c.0]).collect(),
            rows: self
                .rows
                .iter()
                .map(|cfg| TraceRow {
                    time: cfg.time,
                    states: cells.iter().map(|c| cfg.state(*c)).collect(),
                })
                .collect(),
        }
    }
}

pub fn run(
    graph: &CellGraph,
    config: &Configuration,
    table: &RuleTable,
    n_steps: usize,
) -> Result<Trace, EngineError> {
    let mut rows = Vec::with_capacity(n_steps + 1);
    rows.push(config.clone());
    for _ in 0..n_steps {
        let next = step(graph, rows.last().unwrap(), table)?;
        rows.push(next);
    }
    Ok(Trace {
        labels: graph.cells().iter().map(|c| c.label).collect(),
        rows,
    })
}

/// Column text of `trace` restricted to `cells`.
pub fn format_trace(trace: &Trace, cells: &[CellId]) -> String {
    trace.table(cells).to_text()
}
