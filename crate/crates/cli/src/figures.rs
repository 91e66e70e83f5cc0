//! Self-contained SVG charts. Output depends only on the input data, so the
//! same report always renders to the same bytes.

use std::fmt::Write;

use mga_core::geometry::hull_2d;
use thiserror::Error;

pub const MAX_PANEL_VARS: usize = 12;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];
const BASE_COLOR: &str = "#d62728";

#[derive(Debug, Error, PartialEq)]
pub enum FigureError {
    #[error("nothing to plot")]
    Empty,
    #[error("pairwise panels need 2 to {MAX_PANEL_VARS} variables, got {0}")]
    PanelCount(usize),
    #[error("variable index {0} out of range")]
    BadVar(usize),
    #[error("series {0:?} has {1} unique points; pairwise hulls need at least 3")]
    TooFewPoints(String, usize),
}

/// One method's solutions in MGA space.
#[derive(Debug, Clone)]
pub struct PointSeries {
    pub name: String,
    pub points: Vec<Vec<f64>>,
    /// Base optimum, drawn in red.
    pub base: Option<Vec<f64>>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(w: f64, h: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"11\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    )
}

/// Maps data ranges onto a pixel box, y pointing up.
struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Frame {
    fn new(x0: f64, y0: f64, w: f64, h: f64, lo: [f64; 2], hi: [f64; 2]) -> Self {
        let pad = |lo: f64, hi: f64| {
            let span = hi - lo;
            if span > 0.0 {
                (lo - 0.05 * span, hi + 0.05 * span)
            } else {
                (lo - 1.0, hi + 1.0)
            }
        };
        let (ax, bx) = pad(lo[0], hi[0]);
        let (ay, by) = pad(lo[1], hi[1]);
        Frame {
            x0,
            y0,
            w,
            h,
            lo: [ax, ay],
            hi: [bx, by],
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.x0 + (x - self.lo[0]) / (self.hi[0] - self.lo[0]) * self.w
    }

    fn py(&self, y: f64) -> f64 {
        self.y0 + self.h - (y - self.lo[1]) / (self.hi[1] - self.lo[1]) * self.h
    }
}

fn bounds<'a>(pts: impl Iterator<Item = [f64; 2]> + 'a) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Scatter matrix with one panel per variable pair: every solution point,
/// each series' 2-D hull, and the base optimum in red. A hull that
/// collapses to a segment is drawn as a line without fill.
pub fn pairwise_hulls(
    series: &[PointSeries],
    labels: &[String],
    vars: &[usize],
) -> Result<String, FigureError> {
    if series.is_empty() {
        return Err(FigureError::Empty);
    }
    if vars.len() < 2 || vars.len() > MAX_PANEL_VARS {
        return Err(FigureError::PanelCount(vars.len()));
    }
    if let Some(&v) = vars.iter().find(|&&v| v >= labels.len()) {
        return Err(FigureError::BadVar(v));
    }
    for s in series {
        if s.points.len() < 3 {
            return Err(FigureError::TooFewPoints(s.name.clone(), s.points.len()));
        }
        if s.points
            .iter()
            .chain(&s.base)
            .any(|p| p.len() != labels.len())
        {
            return Err(FigureError::BadVar(labels.len()));
        }
    }
    let k = vars.len() - 1;
    let (cell, margin, legend) = (190.0, 40.0, 22.0 * series.len() as f64 + 10.0);
    let size = margin + k as f64 * cell;
    let mut out = header(size + 10.0, size + legend);
    let _ = writeln!(out, "<title>pairwise convex hulls</title>");
    for (a, &i) in vars.iter().enumerate() {
        for (b, &j) in vars.iter().enumerate().skip(a + 1) {
            let pair = |p: &Vec<f64>| [p[i], p[j]];
            let (lo, hi) = bounds(
                series
                    .iter()
                    .flat_map(|s| s.points.iter().chain(&s.base))
                    .map(pair),
            );
            let (x0, y0) = (margin + (b - 1) as f64 * cell, 10.0 + a as f64 * cell);
            let f = Frame::new(x0 + 4.0, y0 + 4.0, cell - 28.0, cell - 38.0, lo, hi);
            let _ = writeln!(
                out,
                "<g class=\"panel\" data-x-var=\"{}\" data-y-var=\"{}\">\n\
                 <rect x=\"{x0:.2}\" y=\"{y0:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#999\"/>\n\
                 <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n\
                 <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 {:.2} {:.2})\">{}</text>",
                esc(&labels[i]),
                esc(&labels[j]),
                cell - 20.0,
                cell - 30.0,
                x0 + (cell - 20.0) / 2.0,
                y0 + cell - 16.0,
                esc(&labels[i]),
                x0 - 6.0,
                y0 + (cell - 30.0) / 2.0,
                x0 - 6.0,
                y0 + (cell - 30.0) / 2.0,
                esc(&labels[j]),
            );
            for (n, s) in series.iter().enumerate() {
                let color = PALETTE[n % PALETTE.len()];
                let flat: Vec<[f64; 2]> = s.points.iter().map(pair).collect();
                if let Ok(h) = hull_2d(&flat) {
                    let path: Vec<String> = h
                        .vertices()
                        .iter()
                        .map(|v| format!("{:.2},{:.2}", f.px(v[0]), f.py(v[1])))
                        .collect();
                    if h.vertices().len() >= 3 && !h.is_degenerate() {
                        let _ = writeln!(
                            out,
                            "<polygon class=\"hull\" points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"{color}\"/>",
                            path.join(" ")
                        );
                    } else if path.len() == 2 {
                        let _ = writeln!(
                            out,
                            "<polyline class=\"hull segment\" points=\"{}\" fill=\"none\" stroke=\"{color}\"/>",
                            path.join(" ")
                        );
                    }
                }
                for p in &flat {
                    let _ = writeln!(
                        out,
                        "<circle class=\"point\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\" data-x=\"{}\" data-y=\"{}\"/>",
                        f.px(p[0]),
                        f.py(p[1]),
                        p[0],
                        p[1]
                    );
                }
            }
            for s in series {
                if let Some(b) = &s.base {
                    let p = pair(b);
                    let _ = writeln!(
                        out,
                        "<circle class=\"base\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{BASE_COLOR}\" data-x=\"{}\" data-y=\"{}\"/>",
                        f.px(p[0]),
                        f.py(p[1]),
                        p[0],
                        p[1]
                    );
                    break;
                }
            }
            out.push_str("</g>\n");
        }
    }
    legend_block(
        &mut out,
        series.iter().map(|s| s.name.as_str()),
        10.0,
        size + 4.0,
        true,
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn legend_block<'a>(
    out: &mut String,
    names: impl Iterator<Item = &'a str>,
    x: f64,
    y: f64,
    base: bool,
) {
    let mut row = 0;
    for (n, name) in names.enumerate() {
        let yy = y + 18.0 * row as f64;
        let _ = writeln!(
            out,
            "<rect x=\"{x:.2}\" y=\"{yy:.2}\" width=\"12\" height=\"12\" fill=\"{}\"/>\
             <text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            PALETTE[n % PALETTE.len()],
            x + 18.0,
            yy + 10.0,
            esc(name)
        );
        row += 1;
    }
    if base {
        let yy = y + 18.0 * row as f64;
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{BASE_COLOR}\"/>\
             <text x=\"{:.2}\" y=\"{:.2}\">base optimum</text>",
            x + 6.0,
            yy + 6.0,
            x + 18.0,
            yy + 10.0
        );
    }
}

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .collect()
}

fn tick_label(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

/// Volume estimate against iteration, one line per series.
pub fn trajectories(series: &[(String, Vec<f64>)]) -> Result<String, FigureError> {
    if series.iter().all(|(_, t)| t.is_empty()) {
        return Err(FigureError::Empty);
    }
    let (w, h) = (640.0, 400.0);
    let n_max = series.iter().map(|(_, t)| t.len()).max().unwrap_or(0);
    let y_max = series
        .iter()
        .flat_map(|(_, t)| t.iter().copied())
        .fold(0.0f64, f64::max);
    let f = Frame {
        x0: 70.0,
        y0: 20.0,
        w: w - 90.0,
        h: h - 80.0,
        lo: [1.0, 0.0],
        hi: [
            (n_max as f64).max(2.0),
            if y_max > 0.0 { y_max * 1.05 } else { 1.0 },
        ],
    };
    let mut out = header(w, h + 18.0 * series.len() as f64);
    let _ = writeln!(out, "<title>volume estimate trajectories</title>");
    axes(&mut out, &f, "iteration", "VESA total");
    for (n, (name, t)) in series.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let pts: Vec<String> = t
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.2},{:.2}", f.px((i + 1) as f64), f.py(v)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline class=\"series\" data-name=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            esc(name),
            pts.join(" ")
        );
    }
    legend_block(
        &mut out,
        series.iter().map(|(n, _)| n.as_str()),
        80.0,
        h - 22.0,
        false,
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn axes(out: &mut String, f: &Frame, x_title: &str, y_title: &str) {
    let (left, right, top, bottom) = (f.x0, f.x0 + f.w, f.y0, f.y0 + f.h);
    let _ = writeln!(
        out,
        "<line x1=\"{left:.2}\" y1=\"{bottom:.2}\" x2=\"{right:.2}\" y2=\"{bottom:.2}\" stroke=\"black\"/>\n\
         <line x1=\"{left:.2}\" y1=\"{top:.2}\" x2=\"{left:.2}\" y2=\"{bottom:.2}\" stroke=\"black\"/>"
    );
    for x in nice_ticks(f.lo[0], f.hi[0], 5) {
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            f.px(x),
            bottom + 14.0,
            x.round()
        );
    }
    for y in nice_ticks(f.lo[1], f.hi[1], 5) {
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            left - 4.0,
            f.py(y) + 4.0,
            tick_label(y)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>",
        (left + right) / 2.0,
        bottom + 30.0,
        esc(x_title),
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        esc(y_title)
    );
}

/// Mean time per iteration spent building objectives and solving, on a
/// log scale, two bars per series.
pub fn runtime_bars(series: &[(String, f64, f64)]) -> Result<String, FigureError> {
    if series.is_empty() {
        return Err(FigureError::Empty);
    }
    let (w, h) = (120.0 + 90.0 * series.len() as f64, 360.0);
    let top = series
        .iter()
        .flat_map(|s| [s.1, s.2])
        .fold(1.0f64, f64::max)
        .log10()
        .ceil()
        .max(1.0);
    let f = Frame {
        x0: 70.0,
        y0: 20.0,
        w: w - 90.0,
        h: h - 80.0,
        lo: [0.0, 0.0],
        hi: [series.len() as f64, top],
    };
    let mut out = header(w, h + 40.0);
    let _ = writeln!(out, "<title>mean time per iteration</title>");
    let (left, bottom) = (f.x0, f.y0 + f.h);
    let _ = writeln!(
        out,
        "<line x1=\"{left:.2}\" y1=\"{bottom:.2}\" x2=\"{:.2}\" y2=\"{bottom:.2}\" stroke=\"black\"/>\n\
         <line x1=\"{left:.2}\" y1=\"{:.2}\" x2=\"{left:.2}\" y2=\"{bottom:.2}\" stroke=\"black\"/>",
        f.x0 + f.w,
        f.y0
    );
    for d in 0..=top as i32 {
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">1e{d}</text>",
            left - 4.0,
            f.py(d as f64) + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{0:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {0:.2})\">mean ns per iteration</text>",
        f.y0 + f.h / 2.0
    );
    let slot = f.w / series.len() as f64;
    for (n, (name, formulate, solve)) in series.iter().enumerate() {
        let x = f.x0 + slot * n as f64;
        for (k, (v, color, class)) in [
            (*formulate, PALETTE[0], "formulate"),
            (*solve, PALETTE[3], "solve"),
        ]
        .into_iter()
        .enumerate()
        {
            let y = f.py(v.max(1.0).log10());
            let _ = writeln!(
                out,
                "<rect class=\"{class}\" x=\"{:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{color}\" data-ns=\"{v}\"/>",
                x + slot * (0.15 + 0.35 * k as f64),
                slot * 0.33,
                bottom - y
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            x + slot / 2.0,
            bottom + 14.0,
            esc(name)
        );
    }
    let _ = writeln!(
        out,
        "<rect x=\"80\" y=\"{0:.2}\" width=\"12\" height=\"12\" fill=\"{1}\"/><text x=\"98\" y=\"{2:.2}\">formulate</text>\n\
         <rect x=\"180\" y=\"{0:.2}\" width=\"12\" height=\"12\" fill=\"{3}\"/><text x=\"198\" y=\"{2:.2}\">solve</text>",
        h + 10.0,
        PALETTE[0],
        h + 20.0,
        PALETTE[3]
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|k| format!("x{k}")).collect()
    }

    fn series(points: Vec<Vec<f64>>) -> PointSeries {
        PointSeries {
            name: "random".into(),
            points,
            base: Some(vec![0.0, 0.0, 0.0]),
        }
    }

    #[test]
    fn three_vars_give_three_panels() {
        let s = series(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let svg = pairwise_hulls(&[s], &labels(3), &[0, 1, 2]).unwrap();
        assert_eq!(svg.matches("class=\"panel\"").count(), 3);
        assert_eq!(svg.matches("class=\"base\"").count(), 3);
        assert_eq!(svg.matches("class=\"point\"").count(), 9);
    }

    #[test]
    fn collinear_pair_is_a_segment() {
        let s = series(vec![
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 2.0],
            vec![2.0, 2.0, 0.0],
        ]);
        let svg = pairwise_hulls(&[s], &labels(3), &[0, 1]).unwrap();
        assert!(svg.contains("class=\"hull segment\""));
        assert!(!svg.contains("<polygon"));
    }

    #[test]
    fn overlay_draws_each_series() {
        let a = series(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let mut b = a.clone();
        b.name = "hsj".into();
        b.points.push(vec![1.0, 1.0, 1.0]);
        let svg = pairwise_hulls(&[a, b], &labels(3), &[0, 1, 2]).unwrap();
        assert!(svg.contains(PALETTE[0]) && svg.contains(PALETTE[1]));
        assert_eq!(svg.matches("class=\"hull\"").count(), 6);
    }

    #[test]
    fn panel_guards() {
        let s = series(vec![vec![0.0; 13]; 3]);
        let vars: Vec<usize> = (0..13).collect();
        assert_eq!(
            pairwise_hulls(&[s], &labels(13), &vars),
            Err(FigureError::PanelCount(13))
        );
        let s = series(vec![vec![0.0, 0.0, 0.0]; 2]);
        assert!(matches!(
            pairwise_hulls(&[s], &labels(3), &[0, 1]),
            Err(FigureError::TooFewPoints(_, 2))
        ));
    }

    #[test]
    fn trajectory_rules() {
        assert_eq!(trajectories(&[]), Err(FigureError::Empty));
        assert_eq!(
            trajectories(&[("a".into(), vec![])]),
            Err(FigureError::Empty)
        );
        let one = trajectories(&[("a".into(), vec![0.0, 1.0, 2.0])]).unwrap();
        assert_eq!(one.matches("class=\"series\"").count(), 1);
        assert!(one.contains(">iteration<") && one.contains(">VESA total<"));
        let two =
            trajectories(&[("a".into(), vec![1.0]), ("b & c".into(), vec![2.0, 3.0])]).unwrap();
        assert_eq!(two.matches("class=\"series\"").count(), 2);
        assert!(two.contains("b &amp; c"));
        assert_eq!(
            two,
            trajectories(&[("a".into(), vec![1.0]), ("b & c".into(), vec![2.0, 3.0])]).unwrap()
        );
    }

    #[test]
    fn runtime_bars_per_series() {
        let svg = runtime_bars(&[("maa".into(), 2e5, 3e3), ("random".into(), 250.0, 3e3)]).unwrap();
        assert_eq!(svg.matches("class=\"formulate\"").count(), 2);
        assert_eq!(svg.matches("class=\"solve\"").count(), 2);
        assert_eq!(runtime_bars(&[]), Err(FigureError::Empty));
    }
}
