//! A three-state cellular automaton on the dodecagrid, the tiling of
//! hyperbolic 3-space by right-angled dodecahedra, together with the track,
//! switch and bridge gadgets that route a locomotive through it.

pub mod catalog;
pub mod engine;
pub mod geometry;
pub mod oracle;
pub mod pentagrid;
pub mod render;
pub mod rules;
pub mod scenario;
pub mod state;
pub mod trace;
pub mod verify;

pub use engine::{CellGraph, CellId, Configuration, Port, Trace};
pub use geometry::{FaceId, FacePermutation, Motion, RotationGroup};
pub use rules::{Rule, RuleContext, RuleTable};
pub use scenario::{CrossingMode, Scenario};
pub use state::CellState;
pub use trace::TraceTable;
