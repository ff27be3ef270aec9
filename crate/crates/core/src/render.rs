//! Schematic SVG drawings of a configuration.
//!
//! Each cell is a pentagon. Its centre is the face turned to the viewer
//! (face 11 from above, face 0 from below), the inner band shows the five
//! faces around it and the outer band the five faces around the opposite
//! face. Every face is painted with the state of the neighbour across it,
//! never with the cell's own state. From below, left and right are
//! exchanged and a track cell occupied by the locomotive gets a pale disc.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::engine::{context_of, CellId, Configuration};
use crate::geometry::{ring_of, FaceId};
use crate::scenario::Scenario;
use crate::state::CellState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewSide {
    Above,
    Below,
}

impl FromStr for ViewSide {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "above" => Ok(ViewSide::Above),
            "below" => Ok(ViewSide::Below),
            _ => Err(format!("unknown view side {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("scenario {0} has no layout")]
    MissingLayout(String),
}

const SCALE: f64 = 60.0;
const RADIUS: f64 = 26.0;

pub fn colour(s: CellState) -> &'static str {
    match s {
        CellState::W => "#ffffff",
        CellState::B => "#1f5fd6",
        CellState::R => "#d62828",
    }
}

pub fn pale(s: CellState) -> &'static str {
    match s {
        CellState::W => "#ffffff",
        CellState::B => "#b9cbef",
        CellState::R => "#f1bcbc",
    }
}

fn ring(face: usize) -> [usize; 5] {
    ring_of(FaceId::new(face).expect("valid face")).map(|f| f.index())
}

fn vertex(cx: f64, cy: f64, r: f64, k: usize, mirror: bool) -> (f64, f64) {
    let a = -std::f64::consts::FRAC_PI_2 + k as f64 * 2.0 * std::f64::consts::PI / 5.0;
    let x = r * a.cos();
    (cx + if mirror { -x } else { x }, cy + r * a.sin())
}

fn polygon(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_scenario(
    s: &Scenario,
    config: &Configuration,
    side: ViewSide,
) -> Result<String, RenderError> {
    let layout = s
        .layout
        .as_ref()
        .ok_or_else(|| RenderError::MissingLayout(s.name.clone()))?;
    let mirror = side == ViewSide::Below;
    let (viewed, opposite) = match side {
        ViewSide::Above => (11, 0),
        ViewSide::Below => (0, 11),
    };
    let track: std::collections::HashSet<CellId> =
        s.tracks.iter().flat_map(|t| t.all_cells()).collect();
    let drawn: Vec<(CellId, f64, f64)> = layout
        .cells()
        .into_iter()
        .filter(|id| {
            let ctx = context_of(&s.graph, config, *id);
            !(ctx.current.is_blank() && ctx.blank_neighbors() == ctx.neighbors.len())
        })
        .map(|id| {
            let p = layout.position(id).expect("placed");
            let x = if mirror { -p.x } else { p.x };
            (id, x * SCALE, p.y * SCALE)
        })
        .collect();

    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    if let Some(&(_, x, y)) = drawn.first() {
        (x0, y0, x1, y1) = (x, y, x, y);
    }
    for &(_, x, y) in &drawn {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let m = RADIUS + 10.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.2} {:.2} {:.2} {:.2}">"#,
        x0 - m,
        y0 - m,
        x1 - x0 + 2.0 * m,
        y1 - y0 + 2.0 * m
    );
    let _ = writeln!(
        out,
        r#"<title>{} at time {} from {}</title>"#,
        s.name,
        config.time,
        if mirror { "below" } else { "above" }
    );
    for (id, cx, cy) in drawn {
        let ctx = context_of(&s.graph, config, id);
        let label = s.graph.label(id);
        let _ = writeln!(out, r#"<g data-cell="{label}">"#);
        let outer = ring(opposite);
        let inner = ring(viewed);
        for (band, faces, r_out, r_in) in [
            ("outer", outer, RADIUS, RADIUS * 0.62),
            ("inner", inner, RADIUS * 0.62, RADIUS * 0.3),
        ] {
            for (k, &f) in faces.iter().enumerate() {
                let pts = [
                    vertex(cx, cy, r_out, k, mirror),
                    vertex(cx, cy, r_out, k + 1, mirror),
                    vertex(cx, cy, r_in, k + 1, mirror),
                    vertex(cx, cy, r_in, k, mirror),
                ];
                let st = ctx.neighbors[f];
                let _ = writeln!(
                    out,
                    r##"  <polygon class="face {band}" data-face="{f}" data-state="{st}" points="{}" fill="{}" stroke="#777" stroke-width="0.6"/>"##,
                    polygon(&pts),
                    colour(st)
                );
            }
        }
        let centre: Vec<_> = (0..5)
            .map(|k| vertex(cx, cy, RADIUS * 0.3, k, mirror))
            .collect();
        let st = ctx.neighbors[viewed];
        let _ = writeln!(
            out,
            r##"  <polygon class="face centre" data-face="{viewed}" data-state="{st}" points="{}" fill="{}" stroke="#777" stroke-width="0.6"/>"##,
            polygon(&centre),
            colour(st)
        );
        if mirror && !ctx.current.is_blank() && track.contains(&id) {
            let _ = writeln!(
                out,
                r#"  <circle class="pale" data-state="{}" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="{}" fill-opacity="0.8"/>"#,
                ctx.current,
                RADIUS * 0.22,
                pale(ctx.current)
            );
        }
        let _ = writeln!(
            out,
            r#"  <text x="{cx:.2}" y="{:.2}" font-size="9" text-anchor="middle">{label}</text>"#,
            cy + RADIUS + 9.0
        );
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Cell, CellGraph};
    use crate::scenario::{build_vertical_segment, scenario, Layout, Point};

    fn body(svg: &str) -> Vec<&str> {
        svg.lines()
            .filter(|l| {
                !l.starts_with("<svg") && !l.starts_with("<title") && !l.starts_with("</svg")
            })
            .collect()
    }

    #[test]
    fn idle_vertical_segment_draws_every_cell() {
        let mut s = build_vertical_segment(7).unwrap();
        s.clear_locomotives();
        let svg = render_scenario(&s, &s.initial, ViewSide::Above).unwrap();
        assert_eq!(svg.matches("<g data-cell").count(), 7);
        assert!(svg.contains(colour(CellState::B)));
        assert!(!svg.contains("class=\"pale\""));
    }

    #[test]
    fn blank_configuration_has_empty_body() {
        let g = CellGraph::new(vec![Cell::blank(1), Cell::blank(2)]).unwrap();
        let mut layout = Layout::default();
        layout.place(CellId(0), Point { x: 0.0, y: 0.0 });
        layout.place(CellId(1), Point { x: 1.0, y: 0.0 });
        let mut s = scenario("vertical").unwrap();
        s.initial = Configuration::blank(&g);
        s.graph = g;
        s.layout = Some(layout);
        let svg = render_scenario(&s, &s.initial, ViewSide::Above).unwrap();
        assert!(body(&svg).is_empty(), "{svg}");
    }

    #[test]
    fn missing_layout_is_an_error() {
        let mut s = scenario("vertical").unwrap();
        s.layout = None;
        assert_eq!(
            render_scenario(&s, &s.initial, ViewSide::Above),
            Err(RenderError::MissingLayout("vertical".into()))
        );
    }

    #[test]
    fn below_view_mirrors_and_marks_the_locomotive() {
        let s = scenario("memo-left-active").unwrap();
        let above = render_scenario(&s, &s.initial, ViewSide::Above).unwrap();
        let below = render_scenario(&s, &s.initial, ViewSide::Below).unwrap();
        assert_ne!(above, below);
        assert_eq!(below.matches("class=\"pale\"").count(), 2);
        assert_eq!(
            render_scenario(&s, &s.initial, ViewSide::Below).unwrap(),
            below
        );
    }
}
