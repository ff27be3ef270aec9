//! Rules, rotated forms, minimal forms and the canonical lookup index.
//!
//! A rule is written `CURRENT N0 … N11 -> NEW`, where `Ni` is the state of
//! the neighbour sharing face `i`. Two rules whose contexts are rotated forms
//! of one another must agree on the new state; [`check_rotation_invariance`]
//! verifies this by comparing minimal forms.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{FacePermutation, RotationGroup, FACE_COUNT};
use crate::state::CellState;

/// Minimum number of white neighbours for the implicit conservative rule.
pub const DEFAULT_RULE_BLANKS: usize = 10;

/// Current state plus the 12 neighbour states, indexed by face.
///
/// The derived order compares `current` first, then neighbours 0..11,
/// with `W < B < R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleContext {
    pub current: CellState,
    pub neighbors: [CellState; FACE_COUNT],
}

impl RuleContext {
    pub fn new(current: CellState, neighbors: [CellState; FACE_COUNT]) -> Self {
        RuleContext { current, neighbors }
    }

    pub fn quiescent() -> Self {
        RuleContext::new(CellState::W, [CellState::W; FACE_COUNT])
    }

    pub fn blank_neighbors(&self) -> usize {
        self.neighbors.iter().filter(|s| s.is_blank()).count()
    }

    /// Base-3 code of the 13 states; a compact hash key.
    fn code(&self) -> u32 {
        std::iter::once(self.current)
            .chain(self.neighbors)
            .fold(0u32, |acc, s| acc * 3 + s as u32)
    }
}

impl fmt::Display for RuleContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |", self.current)?;
        for n in &self.neighbors {
            write!(f, " {n}")?;
        }
        Ok(())
    }
}

impl FromStr for RuleContext {
    type Err = String;

    /// Accepts `R | W B …` or `R W B …` (13 state letters).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let states = s
            .split_whitespace()
            .filter(|t| *t != "|")
            .map(|t| t.parse::<CellState>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        if states.len() != FACE_COUNT + 1 {
            return Err(format!("expected 13 states, found {}", states.len()));
        }
        let mut neighbors = [CellState::W; FACE_COUNT];
        neighbors.copy_from_slice(&states[1..]);
        Ok(RuleContext::new(states[0], neighbors))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub context: RuleContext,
    pub new_state: CellState,
}

impl Rule {
    pub fn new(context: RuleContext, new_state: CellState) -> Self {
        Rule { context, new_state }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.context.current)?;
        for n in &self.context.neighbors {
            write!(f, " {n}")?;
        }
        write!(f, " -> {}", self.new_state)
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lhs, rhs) = s
            .split_once("->")
            .ok_or_else(|| "missing '->'".to_string())?;
        let context = lhs.parse::<RuleContext>()?;
        let new_state = rhs.trim().parse::<CellState>().map_err(|e| e.to_string())?;
        Ok(Rule::new(context, new_state))
    }
}

/// Output slot `i` receives the input neighbour at face `σ(i)`.
pub fn rotated_context(ctx: &RuleContext, sigma: &FacePermutation) -> RuleContext {
    let images = sigma.images();
    let mut neighbors = [CellState::W; FACE_COUNT];
    for (slot, &src) in neighbors.iter_mut().zip(images.iter()) {
        *slot = ctx.neighbors[src as usize];
    }
    RuleContext::new(ctx.current, neighbors)
}

/// Lexicographic minimum over the 60 rotated forms.
pub fn minimal_context(ctx: &RuleContext) -> RuleContext {
    RotationGroup::get()
        .elements()
        .iter()
        .map(|sigma| rotated_context(ctx, sigma))
        .min()
        .expect("group is non-empty")
}

pub fn minimal_form(rule: &Rule) -> Rule {
    Rule::new(minimal_context(&rule.context), rule.new_state)
}

/// Where a rule came from: source name, 1-based line and optional row label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleOrigin {
    pub source: String,
    pub line: usize,
    pub label: Option<String>,
}

impl fmt::Display for RuleOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.line)?;
        if let Some(label) = &self.label {
            write!(f, " {label}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourcedRule {
    pub rule: Rule,
    pub origin: RuleOrigin,
}

/// Two rules with equal minimal context but different new states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub first: SourcedRule,
    pub second: SourcedRule,
    pub minimal: RuleContext,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}  vs  [{}] {}  (minimal context {})",
            self.first.origin, self.first.rule, self.second.origin, self.second.rule, self.minimal
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{source_name}:{line}: {reason}")]
    Parse {
        source_name: String,
        line: usize,
        reason: String,
    },
    #[error("rotation invariance violated: {}", .0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; "))]
    DuplicateConflict(Vec<Conflict>),
    #[error("no rule for context {context}")]
    MissingRule { context: RuleContext },
}

/// Result of [`check_rotation_invariance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub rules_checked: usize,
    pub distinct_minimal_contexts: usize,
    pub conflicts: Vec<Conflict>,
}

impl InvarianceReport {
    pub fn is_ok(&self) -> bool {
        self.conflicts.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
struct IndexEntry {
    new_state: CellState,
    rule: usize,
}

/// Ordered rule list with a canonical index keyed by minimal context.
///
/// When two rules conflict the index keeps the first; the conflict is
/// recorded and reported by [`check_rotation_invariance`]. Every rotated
/// form of an indexed context is also stored in `orbit`, so a lookup is a
/// single hash probe.
#[derive(Debug, Clone, Default)]
pub struct RuleTable {
    rules: Vec<SourcedRule>,
    index: HashMap<u32, IndexEntry>,
    orbit: HashMap<u32, CellState>,
    conflicts: Vec<Conflict>,
}

impl RuleTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rules(rules: impl IntoIterator<Item = SourcedRule>) -> Self {
        let mut table = RuleTable::new();
        for r in rules {
            table.push(r);
        }
        table
    }

    pub fn push(&mut self, sourced: SourcedRule) {
        let minimal = minimal_context(&sourced.rule.context);
        let key = minimal.code();
        let pos = self.rules.len();
        match self.index.get(&key) {
            Some(entry) if entry.new_state != sourced.rule.new_state => {
                self.conflicts.push(Conflict {
                    first: self.rules[entry.rule].clone(),
                    second: sourced.clone(),
                    minimal,
                });
            }
            Some(_) => {}
            None => {
                for sigma in RotationGroup::get().elements() {
                    let rotated = rotated_context(&sourced.rule.context, sigma);
                    self.orbit.insert(rotated.code(), sourced.rule.new_state);
                }
                self.index.insert(
                    key,
                    IndexEntry {
                        new_state: sourced.rule.new_state,
                        rule: pos,
                    },
                );
            }
        }
        self.rules.push(sourced);
    }

    /// Appends every rule of `other`, re-checking against the index.
    pub fn extend(&mut self, other: RuleTable) {
        for r in other.rules {
            self.push(r);
        }
    }

    pub fn rules(&self) -> &[SourcedRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn distinct_minimal_contexts(&self) -> usize {
        self.index.len()
    }

    /// Explicit rule only, without the default.
    pub fn explicit(&self, ctx: &RuleContext) -> Option<CellState> {
        self.orbit.get(&ctx.code()).copied()
    }

    /// Explicit rule (up to rotation), else the implicit conservative rule
    /// for cells with at least ten white neighbours, else `MissingRule`.
    pub fn lookup(&self, ctx: &RuleContext) -> Result<CellState, RuleError> {
        if let Some(s) = self.explicit(ctx) {
            return Ok(s);
        }
        if ctx.blank_neighbors() >= DEFAULT_RULE_BLANKS {
            return Ok(ctx.current);
        }
        Err(RuleError::MissingRule { context: *ctx })
    }
}

pub fn lookup(table: &RuleTable, ctx: &RuleContext) -> Result<CellState, RuleError> {
    table.lookup(ctx)
}

pub fn check_rotation_invariance(table: &RuleTable) -> InvarianceReport {
    InvarianceReport {
        rules_checked: table.len(),
        distinct_minimal_contexts: table.distinct_minimal_contexts(),
        conflicts: table.conflicts.clone(),
    }
}

/// Parses rule-file text without rejecting conflicts.
pub fn parse_rules(source_name: &str, text: &str) -> Result<RuleTable, RuleError> {
    let mut table = RuleTable::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (body, comment) = match raw.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (raw, None),
        };
        if body.trim().is_empty() {
            continue;
        }
        let rule = parse_rule_line(body).map_err(|reason| RuleError::Parse {
            source_name: source_name.to_string(),
            line,
            reason,
        })?;
        let label = comment
            .map(str::trim)
            .filter(|c| c.starts_with('('))
            .map(|c| c.split_whitespace().next().unwrap_or(c).to_string());
        table.push(SourcedRule {
            rule,
            origin: RuleOrigin {
                source: source_name.to_string(),
                line,
                label,
            },
        });
    }
    Ok(table)
}

fn parse_rule_line(body: &str) -> Result<Rule, String> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let arrow = tokens
        .iter()
        .position(|t| *t == "->")
        .ok_or_else(|| "missing '->'".to_string())?;
    if arrow != FACE_COUNT + 1 {
        return Err(format!(
            "expected current state and 12 neighbour states before '->', found {arrow} tokens"
        ));
    }
    if tokens.len() != arrow + 2 {
        return Err("expected exactly one new state after '->'".to_string());
    }
    let mut states = [CellState::W; FACE_COUNT + 2];
    for (slot, tok) in states
        .iter_mut()
        .zip(tokens[..arrow].iter().chain(&tokens[arrow + 1..]))
    {
        *slot = tok
            .parse()
            .map_err(|e: crate::state::UnknownState| e.to_string())?;
    }
    let mut neighbors = [CellState::W; FACE_COUNT];
    neighbors.copy_from_slice(&states[1..=FACE_COUNT]);
    Ok(Rule::new(
        RuleContext::new(states[0], neighbors),
        states[FACE_COUNT + 1],
    ))
}

/// Strict parse: malformed lines and rotation conflicts are errors.
pub fn parse_rule_table(source_name: &str, text: &str) -> Result<RuleTable, RuleError> {
    let table = parse_rules(source_name, text)?;
    if !table.conflicts.is_empty() {
        return Err(RuleError::DuplicateConflict(table.conflicts));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{permutation_from_motion, Motion};

    fn ctx(s: &str) -> RuleContext {
        s.parse().unwrap()
    }

    #[test]
    fn identity_and_uniform_rotations() {
        let c = ctx("R | W B B W W B B B W W W W");
        assert_eq!(rotated_context(&c, &FacePermutation::IDENTITY), c);
        let q = RuleContext::quiescent();
        for sigma in RotationGroup::get().elements() {
            assert_eq!(rotated_context(&q, sigma), q);
        }
    }

    #[test]
    fn straight_rear_rule_and_cell_twelve_form_are_rotations() {
        let straight = ctx("R | W B B W W B B B W W W W");
        let cell12 = ctx("R | W B W W W B B B W W W B");
        let m106 = permutation_from_motion(Motion::new(10, 6).unwrap());
        let m87 = permutation_from_motion(Motion::new(8, 7).unwrap());
        assert_eq!(rotated_context(&cell12, &m106), straight);
        assert_eq!(rotated_context(&straight, &m87), cell12);
        assert_eq!(minimal_context(&straight), minimal_context(&cell12));
    }

    #[test]
    fn minimal_form_basics() {
        let q = Rule::new(RuleContext::quiescent(), CellState::W);
        assert_eq!(minimal_form(&q), q);
        let r: Rule = "W W W B W W B B B W W W W -> W".parse().unwrap();
        let m = minimal_form(&r);
        assert_eq!(minimal_form(&m), m);
        assert_eq!(m.new_state, CellState::W);
        assert!(m.context <= r.context);
    }

    #[test]
    fn parse_and_lookup() {
        let table = parse_rule_table(
            "t",
            "# comment\n\nW W W B W W B B B W W W W -> W  # (0)\nW  W B B W W B B B W W W W  -> B   # (1)\n",
        )
        .unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.rules()[1].origin.label.as_deref(), Some("(1)"));
        assert_eq!(table.rules()[1].origin.line, 4);
        assert_eq!(
            table.lookup(&ctx("W | W B B W W B B B W W W W")),
            Ok(CellState::B)
        );
    }

    #[test]
    fn empty_table_falls_back_to_default_or_missing() {
        let table = parse_rule_table("empty", "").unwrap();
        assert!(table.is_empty());
        assert_eq!(table.lookup(&RuleContext::quiescent()), Ok(CellState::W));
        let one_red = ctx("B | R W W W W W W W W W W W");
        assert_eq!(table.lookup(&one_red), Ok(CellState::B));
        let busy = ctx("W | W B B W W B B B W W W W");
        assert_eq!(
            table.lookup(&busy),
            Err(RuleError::MissingRule { context: busy })
        );
    }

    #[test]
    fn explicit_rule_beats_default() {
        let table = parse_rule_table("t", "B R W W W W W W W W W W W -> R\n").unwrap();
        assert_eq!(
            table.lookup(&ctx("B | W W W W W W W W W W W R")),
            Ok(CellState::R)
        );
    }

    #[test]
    fn arity_and_token_errors() {
        let err = parse_rule_table("bad", "W W W B W W B B B W W W -> W\n").unwrap_err();
        assert!(matches!(err, RuleError::Parse { line: 1, .. }));
        let err = parse_rule_table("bad", "\nW W W B W W B B B W W W X -> W\n").unwrap_err();
        assert!(matches!(err, RuleError::Parse { line: 2, .. }));
        let err = parse_rule_table("bad", "W W W B W W B B B W W W W W\n").unwrap_err();
        assert!(matches!(err, RuleError::Parse { .. }));
        let err = parse_rule_table("bad", "W W W B W W B B B W W W W -> W W\n").unwrap_err();
        assert!(matches!(err, RuleError::Parse { .. }));
    }

    #[test]
    fn rotated_duplicate_with_other_outcome_is_a_conflict() {
        let text = "W W W W W W W W W W W W W -> W\nW W W W W W W W W W W W W -> B\n";
        let table = parse_rules("t", text).unwrap();
        let report = check_rotation_invariance(&table);
        assert_eq!(report.conflicts.len(), 1);
        assert_eq!(report.conflicts[0].first.origin.line, 1);
        assert_eq!(report.conflicts[0].second.origin.line, 2);
        assert!(matches!(
            parse_rule_table("t", text),
            Err(RuleError::DuplicateConflict(_))
        ));

        // A genuinely rotated copy (not syntactically equal) also conflicts.
        let rotated = rotated_context(
            &ctx("R | W B B W W B B B W W W W"),
            &permutation_from_motion(Motion::new(4, 9).unwrap()),
        );
        let text = format!(
            "R W B B W W B B B W W W W -> W\n{} -> B\n",
            rule_body(&rotated)
        );
        assert!(!check_rotation_invariance(&parse_rules("t", &text).unwrap()).is_ok());
    }

    fn rule_body(c: &RuleContext) -> String {
        Rule::new(*c, CellState::W)
            .to_string()
            .trim_end_matches(" -> W")
            .to_string()
    }
}
