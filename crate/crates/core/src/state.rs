//! The three automaton states.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// State of a cell. White is the quiescent state; a locomotive is a Blue
/// front followed by a Red rear.
///
/// The derived order `W < B < R` is the order used for minimal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum CellState {
    #[default]
    W,
    B,
    R,
}

impl CellState {
    pub const ALL: [CellState; 3] = [CellState::W, CellState::B, CellState::R];

    pub fn letter(self) -> char {
        match self {
            CellState::W => 'W',
            CellState::B => 'B',
            CellState::R => 'R',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'W' => Some(CellState::W),
            'B' => Some(CellState::B),
            'R' => Some(CellState::R),
            _ => None,
        }
    }

    pub fn is_blank(self) -> bool {
        self == CellState::W
    }
}

impl fmt::Display for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown cell state {0:?} (expected W, B or R)")]
pub struct UnknownState(pub String);

impl FromStr for CellState {
    type Err = UnknownState;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => CellState::from_letter(c).ok_or_else(|| UnknownState(s.to_string())),
            _ => Err(UnknownState(s.to_string())),
        }
    }
}
