//! Event-level model of the railway: switches as small state machines and
//! the one-bit elementary circuit. No cells, no timing.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SwitchKind {
    Memory,
    Fixed,
    FlipFlop,
}

impl SwitchKind {
    pub const ALL: [SwitchKind; 3] = [SwitchKind::Memory, SwitchKind::Fixed, SwitchKind::FlipFlop];
}

impl fmt::Display for SwitchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwitchKind::Memory => "memory",
            SwitchKind::Fixed => "fixed",
            SwitchKind::FlipFlop => "flipflop",
        })
    }
}

impl FromStr for SwitchKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "memory" | "memo" => Ok(SwitchKind::Memory),
            "fixed" => Ok(SwitchKind::Fixed),
            "flipflop" | "flip-flop" => Ok(SwitchKind::FlipFlop),
            _ => Err(format!("unknown switch kind {s:?}")),
        }
    }
}

/// Left or right; for a switch, the side of its selected track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Laterality {
    Left,
    Right,
}

impl Laterality {
    pub fn other(self) -> Self {
        match self {
            Laterality::Left => Laterality::Right,
            Laterality::Right => Laterality::Left,
        }
    }
}

impl fmt::Display for Laterality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Laterality::Left => "left",
            Laterality::Right => "right",
        })
    }
}

impl FromStr for Laterality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Laterality::Left),
            "right" => Ok(Laterality::Right),
            _ => Err(format!("unknown side {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwitchState {
    pub kind: SwitchKind,
    pub selected: Laterality,
}

impl SwitchState {
    pub fn new(kind: SwitchKind, selected: Laterality) -> Self {
        SwitchState { kind, selected }
    }
}

/// How the locomotive meets the switch: from the single track, or from
/// one of the two arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Crossing {
    Active,
    Passive(Laterality),
}

/// Where the locomotive leaves the switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exit {
    Arm(Laterality),
    Single,
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exit::Arm(side) => write!(f, "{side} arm"),
            Exit::Single => f.write_str("single track"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("a flip-flop is only crossed actively")]
    PassiveFlipFlop,
}

pub fn cross(s: SwitchState, mode: Crossing) -> Result<(Exit, SwitchState), OracleError> {
    match (s.kind, mode) {
        (SwitchKind::FlipFlop, Crossing::Passive(_)) => Err(OracleError::PassiveFlipFlop),
        (SwitchKind::FlipFlop, Crossing::Active) => Ok((
            Exit::Arm(s.selected),
            SwitchState::new(s.kind, s.selected.other()),
        )),
        (_, Crossing::Active) => Ok((Exit::Arm(s.selected), s)),
        (SwitchKind::Memory, Crossing::Passive(arm)) => {
            Ok((Exit::Single, SwitchState::new(s.kind, arm)))
        }
        (SwitchKind::Fixed, Crossing::Passive(_)) => Ok((Exit::Single, s)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    /// Read: the locomotive leaves through O1 or O2 depending on the bit.
    E,
    /// Write: the bit is toggled and the locomotive returns through U.
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircuitExit {
    O1,
    O2,
    UReturn,
}

/// One bit: a memory switch near E and a flip-flop near U whose selected
/// sides are kept equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementaryCircuit {
    pub e_switch: SwitchState,
    pub u_switch: SwitchState,
}

impl ElementaryCircuit {
    pub fn new(bit: Laterality) -> Self {
        ElementaryCircuit {
            e_switch: SwitchState::new(SwitchKind::Memory, bit),
            u_switch: SwitchState::new(SwitchKind::FlipFlop, bit),
        }
    }

    pub fn bit(&self) -> Laterality {
        self.e_switch.selected
    }
}

pub fn circuit_enter(c: ElementaryCircuit, gate: Gate) -> (CircuitExit, ElementaryCircuit) {
    match gate {
        Gate::E => {
            let (exit, e_switch) = cross(c.e_switch, Crossing::Active).expect("active crossing");
            let out = match exit {
                Exit::Arm(Laterality::Left) => CircuitExit::O1,
                _ => CircuitExit::O2,
            };
            (out, ElementaryCircuit { e_switch, ..c })
        }
        Gate::U => {
            // The flip-flop sends the locomotive down its selected arm and
            // toggles; that arm reaches the memory switch passively through
            // the same side, which it then selects.
            let (exit, u_switch) = cross(c.u_switch, Crossing::Active).expect("active crossing");
            let Exit::Arm(arm) = exit else { unreachable!() };
            let (_, e_switch) =
                cross(c.e_switch, Crossing::Passive(arm.other())).expect("memory accepts passive");
            (
                CircuitExit::UReturn,
                ElementaryCircuit { e_switch, u_switch },
            )
        }
    }
}
