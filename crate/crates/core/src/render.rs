//! SVG figures of zig-zag graphs and rectangular limit sets.
//!
//! Output is plain SVG 1.1 using only `rect`, `polyline`, `circle` and
//! `text`. Coordinates are the mathematical ones, written as exact decimals
//! at the requested precision; the viewBox flips `y`.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::FieldElement;
use crate::galois::{LimitSet, LimitSetOutcome};
use crate::zigzag::{PostcriticalData, Sign, ZigZagMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Palette {
    pub background: String,
    pub frame: String,
    pub graph: String,
    pub critical: String,
    /// one color per periodic orbit, the orbit of 1 first
    pub orbits: Vec<String>,
    pub rect_fill: String,
    pub rect_stroke: String,
    pub boundary: String,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            background: "white".into(),
            frame: "#999999".into(),
            graph: "black".into(),
            critical: "#4477aa".into(),
            orbits: vec!["red".into(), "#228833".into()],
            rect_fill: "#dddddd".into(),
            rect_stroke: "black".into(),
            boundary: "#ee7733".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FigureSpec {
    /// maximal size in pixels; the aspect ratio follows the data
    pub width: u32,
    pub height: u32,
    /// padding around the data, in percent of its larger side
    pub margin: u32,
    /// decimal places for coordinates
    pub precision: u32,
    pub palette: Palette,
}

impl Default for FigureSpec {
    fn default() -> Self {
        FigureSpec {
            width: 480,
            height: 480,
            margin: 6,
            precision: 8,
            palette: Palette::default(),
        }
    }
}

struct Canvas<'a> {
    spec: &'a FigureSpec,
    out: String,
    /// viewBox side lengths, for stroke and marker sizes
    unit: f64,
}

impl<'a> Canvas<'a> {
    /// `[x0, x1] x [y0, y1]` in math coordinates, given as exact decimals.
    fn new(spec: &'a FigureSpec, x0: f64, x1: f64, y0: f64, y1: f64) -> Canvas<'a> {
        let pad = (x1 - x0).max(y1 - y0) * spec.margin as f64 / 100.0;
        let (vx, vy) = (x0 - pad, -(y1 + pad));
        let (vw, vh) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
        let scale = (spec.width as f64 / vw).min(spec.height as f64 / vh);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
            (vw * scale).round() as u32,
            (vh * scale).round() as u32,
            fmt_f(vx, 6),
            fmt_f(vy, 6),
            fmt_f(vw, 6),
            fmt_f(vh, 6)
        );
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            fmt_f(vx, 6),
            fmt_f(vy, 6),
            fmt_f(vw, 6),
            fmt_f(vh, 6),
            spec.palette.background
        );
        Canvas {
            spec,
            out,
            unit: vw.max(vh),
        }
    }

    fn stroke(&self, px: f64) -> String {
        fmt_f(self.unit * px / self.spec.width.max(self.spec.height) as f64, 6)
    }

    fn polyline(&mut self, pts: &[(String, String)], color: &str, px: f64, class: &str, dashed: bool) {
        let p: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
        let dash = if dashed {
            format!(" stroke-dasharray=\"{} {}\"", self.stroke(6.0), self.stroke(4.0))
        } else {
            String::new()
        };
        let _ = writeln!(
            self.out,
            "<polyline class=\"{class}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"{dash}/>",
            p.join(" "),
            self.stroke(px)
        );
    }

    fn circle(&mut self, x: &str, y: &str, color: &str, class: &str) {
        let _ = writeln!(
            self.out,
            "<circle class=\"{class}\" cx=\"{x}\" cy=\"{y}\" r=\"{}\" fill=\"{color}\"/>",
            self.stroke(4.0)
        );
    }

    fn text(&mut self, x: f64, y: f64, s: &str) {
        let _ = writeln!(
            self.out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\">{}</text>",
            fmt_f(x, 6),
            fmt_f(-y, 6),
            self.stroke(14.0),
            escape(s)
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt_f(v: f64, places: usize) -> String {
    let s = format!("{v:.places$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn dec(x: &FieldElement, spec: &FigureSpec) -> String {
    x.to_decimal(spec.precision)
}

fn neg_dec(y: &FieldElement, spec: &FigureSpec) -> String {
    (-y).to_decimal(spec.precision)
}

/// Graph of `f` on the unit square with the orbit of 1 marked.
pub fn render_zigzag_svg(f: &ZigZagMap, orbit: &PostcriticalData, spec: &FigureSpec) -> String {
    let mut c = Canvas::new(spec, 0.0, 1.0, 0.0, 1.0);
    let pal = &spec.palette;
    let (zero, one) = (f.int(0), f.int(1));
    c.polyline(
        &[
            ("0".into(), "0".into()),
            ("1".into(), "0".into()),
            ("1".into(), "-1".into()),
            ("0".into(), "-1".into()),
            ("0".into(), "0".into()),
        ],
        &pal.frame,
        1.0,
        "frame",
        false,
    );
    c.polyline(&[("0".into(), "0".into()), ("1".into(), "-1".into())], &pal.frame, 1.0, "diagonal", true);
    for x in f.critical_points() {
        c.polyline(
            &[(dec(&x, spec), dec(&zero, spec)), (dec(&x, spec), neg_dec(&one, spec))],
            &pal.critical,
            1.0,
            "critical",
            true,
        );
    }
    let mut knots = vec![zero.clone()];
    knots.extend(f.critical_points());
    knots.push(one.clone());
    let pts: Vec<(String, String)> = knots
        .iter()
        .map(|x| {
            let y = f.evaluate(x).expect("knots lie in the unit interval");
            (dec(x, spec), neg_dec(&y, spec))
        })
        .collect();
    c.polyline(&pts, &pal.graph, 2.0, "graph", false);
    let red = pal.orbits.first().cloned().unwrap_or_else(|| "red".into());
    for label in orbit.base..orbit.base + orbit.period() {
        let x = orbit.point(label);
        let y = f.evaluate(x).expect("orbit lies in the unit interval");
        c.circle(&dec(x, spec), &neg_dec(&y, spec), &red, &format!("orbit label-{label}"));
    }
    if f.sign() == Sign::Positive {
        let other = pal.orbits.get(1).cloned().unwrap_or_else(|| red.clone());
        c.circle("0", "0", &other, "fixed");
    }
    c.text(0.0, 1.02, &format!("m = {}, lambda = {}", f.modality(), f.lambda_elem().to_decimal(6)));
    c.finish()
}

fn render_rects(ls: &LimitSet, spec: &FigureSpec) -> String {
    let pal = &spec.palette;
    let y0 = ls.rects.iter().map(|r| r.y_lo.to_f64()).fold(f64::INFINITY, f64::min);
    let y1 = ls.rects.iter().map(|r| r.y_hi.to_f64()).fold(f64::NEG_INFINITY, f64::max);
    let mut c = Canvas::new(spec, 0.0, 1.0, y0, y1);
    for (i, r) in ls.rects.iter().enumerate() {
        let sw = c.stroke(1.0);
        let _ = writeln!(
            c.out,
            "<rect class=\"cell-{i}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{sw}\"/>",
            dec(&r.x_lo, spec),
            neg_dec(&r.y_hi, spec),
            dec(&r.width(), spec),
            dec(&r.height(), spec),
            pal.rect_fill,
            pal.rect_stroke
        );
    }
    for b in &ls.components {
        let x = dec(&b.x, spec);
        c.polyline(
            &[(x.clone(), neg_dec(&b.y_lo, spec)), (x, neg_dec(&b.y_hi, spec))],
            &pal.boundary,
            3.0,
            "boundary",
            false,
        );
    }
    let red = pal.orbits.first().cloned().unwrap_or_else(|| "red".into());
    for l in &ls.lifts {
        c.circle(&dec(&l.x, spec), &neg_dec(&l.y, spec), &red, "lift");
    }
    c.finish()
}

/// Rectangles of a rectangular limit set with boundary components and
/// the lifts of the postcritical points.
pub fn render_limit_set_svg(outcome: &LimitSetOutcome, spec: &FigureSpec) -> Result<String> {
    match outcome {
        LimitSetOutcome::Rectangular(ls) => Ok(render_rects(ls, spec)),
        LimitSetOutcome::NotRectangular { reason, .. } => {
            Err(Error::InvalidInput(format!("limit set is not rectangular: {reason}")))
        }
    }
}
