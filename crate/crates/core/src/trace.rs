//! Printed traces: the `time N :` table layout, a TSV variant, a parser
//! for the golden files and a token-level comparison.

use std::fmt::Write as _;

use thiserror::Error;

use crate::state::CellState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub time: u64,
    pub states: Vec<CellState>,
}

/// Rows of states over an ordered list of cell labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceTable {
    pub labels: Vec<u32>,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("no header line with cell labels")]
    MissingHeader,
}

/// One cell whose state differs between two traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub time: u64,
    pub cell: u32,
    pub expected: Option<CellState>,
    pub got: Option<CellState>,
}

impl std::fmt::Display for Divergence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |s: Option<CellState>| s.map_or("-".to_string(), |s| s.to_string());
        write!(
            f,
            "time {} cell {}: expected {} got {}",
            self.time,
            self.cell,
            show(self.expected),
            show(self.got)
        )
    }
}

impl TraceTable {
    pub fn to_text(&self) -> String {
        let mut out = String::from("        ");
        for l in &self.labels {
            let _ = write!(out, " {l:>2}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "time {} :", row.time);
            for s in &row.states {
                let _ = write!(out, "  {s}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("time");
        for l in &self.labels {
            let _ = write!(out, "\t{l}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{}", row.time);
            for s in &row.states {
                let _ = write!(out, "\t{s}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the layout written by `to_text`. `#` lines and blank lines are skipped;
    /// the first other line that is all integers is the header.
    pub fn parse(text: &str) -> Result<Self, TraceParseError> {
        let mut table = TraceTable::default();
        let mut have_header = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let malformed = |reason: String| TraceParseError::Malformed { line, reason };
            if let Some(rest) = trimmed.strip_prefix("time") {
                if !have_header {
                    return Err(TraceParseError::MissingHeader);
                }
                let (t, states) = rest
                    .split_once(':')
                    .ok_or_else(|| malformed("missing ':' after time".into()))?;
                let time = t
                    .trim()
                    .parse()
                    .map_err(|_| malformed(format!("bad time index {:?}", t.trim())))?;
                let states = states
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<CellState>()
                            .map_err(|e| malformed(e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if states.len() != table.labels.len() {
                    return Err(malformed(format!(
                        "{} states for {} cells",
                        states.len(),
                        table.labels.len()
                    )));
                }
                table.rows.push(TraceRow { time, states });
            } else if !have_header {
                table.labels = trimmed
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse()
                            .map_err(|_| malformed(format!("bad cell label {tok:?}")))
                    })
                    .collect::<Result<_, _>>()?;
                have_header = true;
            } else {
                return Err(malformed(format!("unexpected line {trimmed:?}")));
            }
        }
        if !have_header {
            return Err(TraceParseError::MissingHeader);
        }
        Ok(table)
    }

    pub fn column(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    /// States of the given labels at row `row`.
    pub fn slice(&self, row: usize, labels: &[u32]) -> Option<Vec<CellState>> {
        let r = self.rows.get(row)?;
        labels
            .iter()
            .map(|l| self.column(*l).map(|c| r.states[c]))
            .collect()
    }

    /// Token-level differences, `self` being the expected table. Rows are
    /// matched by position; extra rows or labels show up with `None`.
    pub fn diff(&self, got: &TraceTable) -> Vec<Divergence> {
        let mut out = Vec::new();
        let mut labels = self.labels.clone();
        labels.extend(got.labels.iter().filter(|l| !self.labels.contains(l)));
        for i in 0..self.rows.len().max(got.rows.len()) {
            let (e, g) = (self.rows.get(i), got.rows.get(i));
            let time = e.or(g).map(|r| r.time).unwrap_or_default();
            if let (Some(e), Some(g)) = (e, g) {
                if e.time != g.time {
                    out.push(Divergence {
                        time: e.time,
                        cell: 0,
                        expected: None,
                        got: None,
                    });
                }
            }
            for &l in &labels {
                let pick = |t: &TraceTable, r: Option<&TraceRow>| {
                    r.and_then(|r| t.column(l).map(|c| r.states[c]))
                };
                let (es, gs) = (pick(self, e), pick(got, g));
                if es != gs {
                    out.push(Divergence {
                        time,
                        cell: l,
                        expected: es,
                        got: gs,
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# title\n\n          1  2  3\n\ntime 0 :  W  R  B\ntime 1 :  W  W  R\n";

    #[test]
    fn parse_and_reprint() {
        let t = TraceTable::parse(SAMPLE).unwrap();
        assert_eq!(t.labels, vec![1, 2, 3]);
        assert_eq!(t.rows.len(), 2);
        assert_eq!(TraceTable::parse(&t.to_text()).unwrap(), t);
        assert_eq!(t.to_tsv().lines().nth(1), Some("0\tW\tR\tB"));
    }

    #[test]
    fn header_only() {
        let t = TraceTable {
            labels: vec![1, 2],
            rows: vec![],
        };
        assert_eq!(t.to_text().lines().count(), 1);
        assert_eq!(TraceTable::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            TraceTable::parse("1 2\ntime 0 : W\n"),
            Err(TraceParseError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            TraceTable::parse("1 2\ntime 0 : W X\n"),
            Err(TraceParseError::Malformed { line: 2, .. })
        ));
        assert_eq!(
            TraceTable::parse("time 0 : W"),
            Err(TraceParseError::MissingHeader)
        );
    }

    #[test]
    fn diff_reports_cells() {
        let a = TraceTable::parse(SAMPLE).unwrap();
        let mut b = a.clone();
        b.rows[1].states[2] = CellState::B;
        let d = a.diff(&b);
        assert_eq!(
            d,
            vec![Divergence {
                time: 1,
                cell: 3,
                expected: Some(CellState::R),
                got: Some(CellState::B)
            }]
        );
        assert!(a.diff(&a).is_empty());
        assert_eq!(a.slice(0, &[3, 2]), Some(vec![CellState::B, CellState::R]));
    }
}
