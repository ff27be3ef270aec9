//! Checks shared by the test suites and the command line: reference-trace
//! comparison, locomotive traversal properties and agreement with the
//! railway oracle.

use std::path::Path;

use thiserror::Error;

use crate::engine::{CellId, Configuration, EngineError};
use crate::oracle::{cross, Crossing, Exit, Laterality, SwitchState};
use crate::rules::{check_rotation_invariance, RuleTable};
use crate::scenario::switch::{selected_side, APPROACH, CONTROL, LEFT_ARM, RIGHT_ARM};
use crate::scenario::{
    build_bridge, build_horizontal_segment, build_vertical_segment, drive_crossing, scenario,
    CrossingMode, Direction, Scenario, ScenarioError, SWITCH_SCENARIOS,
};
use crate::state::CellState;
use crate::trace::Divergence;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("trace diverges from the reference: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Diverged(Vec<Divergence>),
    #[error("time {time}: {reason}")]
    Traversal { time: u64, reason: String },
    #[error("{0}")]
    Oracle(String),
    #[error("{0} rotation conflicts")]
    Conflicts(usize),
}

/// The 1D rule for a track cell with neighbours `l` and `r` along the
/// track, or `None` when no rule covers the triple. All-white is left out.
pub fn one_dimensional_rule(l: CellState, c: CellState, r: CellState) -> Option<CellState> {
    use CellState::*;
    match (l, c, r) {
        (B, W, W) | (W, W, B) => Some(B),
        (R, B, W) | (W, B, R) => Some(R),
        (W, R, B) | (B, R, W) => Some(W),
        (W, W, R) | (R, W, W) => Some(W),
        _ => None,
    }
}

/// Runs scenario `name` and compares it with its reference trace.
pub fn check_golden(name: &str, table: &RuleTable, golden_dir: &Path) -> Result<(), VerifyError> {
    let s = scenario(name)?;
    let Some(golden) = s.load_golden(golden_dir)? else {
        return Err(ScenarioError::Unknown(format!("{name} has no reference trace")).into());
    };
    let got = s.run(table, s.steps)?.table(&s.print_order);
    let diff = golden.diff(&got);
    if diff.is_empty() {
        Ok(())
    } else {
        Err(VerifyError::Diverged(diff))
    }
}

/// Sends a locomotive through track `track` of `s` and checks that it moves
/// one cell per step, that every transition along the track follows the
/// 1D rules, that cells off the track stay white and that the segment is
/// idle again once the locomotive has left. Returns the number of steps.
pub fn check_traversal(
    s: &Scenario,
    table: &RuleTable,
    track: usize,
    dir: Direction,
) -> Result<usize, VerifyError> {
    let mut s = s.clone();
    s.place_locomotive(track, dir)?;
    let t = &s.tracks[track];
    let mut seq = t.all_cells();
    let mut front0 = t.before.len();
    if dir == Direction::Backward {
        seq.reverse();
        front0 = t.after.len();
    }
    let on_track: std::collections::HashSet<CellId> = seq.iter().copied().collect();
    let steps = t.cells.len() + 1;
    let trace = s.run(table, steps)?;

    let fail = |time: u64, reason: String| VerifyError::Traversal { time, reason };
    for (i, cfg) in trace.rows.iter().enumerate() {
        let along: Vec<CellState> = seq.iter().map(|c| cfg.state(*c)).collect();
        let expected_front = front0 + i;
        for (j, st) in along.iter().enumerate() {
            let want = if j == expected_front {
                CellState::B
            } else if j + 1 == expected_front {
                CellState::R
            } else {
                CellState::W
            };
            if *st != want {
                return Err(fail(
                    cfg.time,
                    format!(
                        "track {} position {j} (cell {}) is {st}, expected {want}",
                        t.name,
                        s.graph.label(seq[j])
                    ),
                ));
            }
        }
        if let Some((id, st)) = cfg.occupied().find(|(id, _)| !on_track.contains(id)) {
            return Err(fail(
                cfg.time,
                format!("cell {} off the track is {st}", s.graph.label(id)),
            ));
        }
        if let Some(next) = trace.rows.get(i + 1) {
            check_1d(&seq, cfg, next).map_err(|r| fail(cfg.time, r))?;
        }
    }
    let last = trace.last();
    if let Some(c) = t.cells.iter().find(|c| !last.state(**c).is_blank()) {
        return Err(fail(
            last.time,
            format!("segment cell {} not idle after exit", s.graph.label(*c)),
        ));
    }
    Ok(steps)
}

fn check_1d(seq: &[CellId], now: &Configuration, next: &Configuration) -> Result<(), String> {
    for w in 1..seq.len().saturating_sub(1) {
        let (l, c, r) = (
            now.state(seq[w - 1]),
            now.state(seq[w]),
            now.state(seq[w + 1]),
        );
        if (l, c, r) == (CellState::W, CellState::W, CellState::W) {
            continue;
        }
        let got = next.state(seq[w]);
        match one_dimensional_rule(l, c, r) {
            Some(want) if want == got => {}
            want => {
                return Err(format!(
                    "position {w}: {l} {c} {r} became {got}, 1D rule gives {want:?}"
                ))
            }
        }
    }
    Ok(())
}

/// What a switch run did, read off the cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchOutcome {
    pub exit: Option<Exit>,
    pub before: Option<Laterality>,
    pub after: Option<Laterality>,
}

fn exit_of(cfg: &Configuration, s: &Scenario) -> Option<Exit> {
    let occupied = |cells: &[u32]| {
        cells
            .iter()
            .any(|l| s.label_id(*l).is_ok_and(|id| !cfg.state(id).is_blank()))
    };
    match (
        occupied(&APPROACH),
        occupied(&LEFT_ARM),
        occupied(&RIGHT_ARM),
    ) {
        (true, false, false) => Some(Exit::Single),
        (false, true, false) => Some(Exit::Arm(Laterality::Left)),
        (false, false, true) => Some(Exit::Arm(Laterality::Right)),
        _ => None,
    }
}

fn control(cfg: &Configuration, s: &Scenario) -> Vec<CellState> {
    CONTROL
        .iter()
        .map(|l| cfg.state(s.label_id(*l).expect("switch cell")))
        .collect()
}

/// Runs a crossing and reads the exit branch and the selected side before
/// and after.
pub fn switch_outcome(
    s: &Scenario,
    mode: CrossingMode,
    table: &RuleTable,
) -> Result<SwitchOutcome, VerifyError> {
    let spec = s
        .switch
        .ok_or_else(|| ScenarioError::NotASwitch(s.name.clone()))?;
    let trace = drive_crossing(s, mode, table)?;
    Ok(SwitchOutcome {
        exit: exit_of(trace.last(), s),
        before: selected_side(spec.kind, &control(&trace.rows[0], s)),
        after: selected_side(spec.kind, &control(trace.last(), s)),
    })
}

/// The oracle's crossing for a CA crossing mode on a switch selecting `side`.
pub fn oracle_crossing(mode: CrossingMode, side: Laterality) -> Crossing {
    match mode {
        CrossingMode::Active => Crossing::Active,
        CrossingMode::PassiveSelected => Crossing::Passive(side),
        CrossingMode::PassiveNonSelected => Crossing::Passive(side.other()),
    }
}

/// Compares a switch scenario with the railway oracle.
pub fn check_oracle(name: &str, table: &RuleTable) -> Result<(), VerifyError> {
    let s = scenario(name)?;
    let spec = s
        .switch
        .ok_or_else(|| ScenarioError::NotASwitch(s.name.clone()))?;
    let mode = crate::scenario::scenario_mode(name).expect("switch scenario");
    let got = switch_outcome(&s, mode, table)?;
    let before = got
        .before
        .ok_or_else(|| VerifyError::Oracle(format!("{name}: idle pattern unreadable")))?;
    let (exit, next) = cross(
        SwitchState::new(spec.kind, before),
        oracle_crossing(mode, before),
    )
    .map_err(|e| VerifyError::Oracle(e.to_string()))?;
    if got.exit != Some(exit) || got.after != Some(next.selected) {
        return Err(VerifyError::Oracle(format!(
            "{name}: automaton gives exit {:?}, selected {:?}; oracle gives {exit}, {}",
            got.exit, got.after, next.selected
        )));
    }
    Ok(())
}

/// One line of the [`verify_all`] matrix.
#[derive(Debug)]
pub struct CheckResult {
    pub group: &'static str,
    pub name: String,
    pub outcome: Result<(), VerifyError>,
}

#[derive(Debug, Default)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.outcome.is_ok())
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.outcome.is_err()).count()
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in &self.results {
            match &r.outcome {
                Ok(()) => writeln!(f, "PASS  {:<10} {}", r.group, r.name)?,
                Err(e) => writeln!(f, "FAIL  {:<10} {}: {e}", r.group, r.name)?,
            }
        }
        write!(
            f,
            "{} checks, {} failed",
            self.results.len(),
            self.failures()
        )
    }
}

type Job<'a> = (
    &'static str,
    String,
    Box<dyn Fn() -> Result<(), VerifyError> + Send + Sync + 'a>,
);

/// Rotation invariance, every reference trace, segment and bridge
/// traversals and oracle agreement. Checks run on up to `jobs` threads;
/// results come back in a fixed order.
pub fn verify_all(table: &RuleTable, golden_dir: &Path, jobs: usize) -> Report {
    let mut checks: Vec<Job> = Vec::new();
    checks.push((
        "rules",
        "rotation invariance".into(),
        Box::new(|| {
            let r = check_rotation_invariance(table);
            if r.is_ok() {
                Ok(())
            } else {
                Err(VerifyError::Conflicts(r.conflicts.len()))
            }
        }),
    ));
    for (name, ..) in SWITCH_SCENARIOS {
        checks.push((
            "golden",
            name.into(),
            Box::new(move || check_golden(name, table, golden_dir)),
        ));
    }
    for n in [3, 7, 12] {
        for dir in [Direction::Forward, Direction::Backward] {
            checks.push((
                "segment",
                format!("vertical n={n} {dir:?}"),
                Box::new(move || {
                    check_traversal(&build_vertical_segment(n)?, table, 0, dir).map(|_| ())
                }),
            ));
        }
    }
    for k in [2, 5, 12] {
        for dir in [Direction::Forward, Direction::Backward] {
            checks.push((
                "segment",
                format!("horizontal k={k} {dir:?}"),
                Box::new(move || {
                    check_traversal(&build_horizontal_segment(k)?, table, 0, dir).map(|_| ())
                }),
            ));
        }
    }
    for track in [0, 1] {
        for dir in [Direction::Forward, Direction::Backward] {
            checks.push((
                "bridge",
                format!("V{track} {dir:?}"),
                Box::new(move || check_traversal(&build_bridge()?, table, track, dir).map(|_| ())),
            ));
        }
    }
    for (name, ..) in SWITCH_SCENARIOS {
        checks.push((
            "oracle",
            name.into(),
            Box::new(move || check_oracle(name, table)),
        ));
    }

    let jobs = jobs.max(1);
    let mut outcomes: Vec<Option<Result<(), VerifyError>>> =
        (0..checks.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<_> = checks
            .iter()
            .enumerate()
            .collect::<Vec<_>>()
            .chunks(checks.len().div_ceil(jobs).max(1))
            .map(|c| c.to_vec())
            .collect();
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|(i, (_, _, f))| (i, f()))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("check thread panicked") {
                outcomes[i] = Some(r);
            }
        }
    });
    Report {
        results: checks
            .into_iter()
            .zip(outcomes)
            .map(|((group, name, _), outcome)| CheckResult {
                group,
                name,
                outcome: outcome.expect("every check ran"),
            })
            .collect(),
    }
}
