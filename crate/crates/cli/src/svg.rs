//! Hand-written, self-contained SVG charts.
//!
//! Output depends only on the data, so identical runs give identical files.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

/// Viridis sampled at 0, 1/4, 1/2, 3/4, 1; colors in between are linear in
/// RGB. Used for every heatmap so panels from different runs compare
/// directly.
pub const HEATMAP_STOPS: [(f64, [u8; 3]); 5] = [
    (0.0, [0x44, 0x01, 0x54]),
    (0.25, [0x3b, 0x52, 0x8b]),
    (0.5, [0x21, 0x91, 0x8c]),
    (0.75, [0x5e, 0xc9, 0x62]),
    (1.0, [0xfd, 0xe7, 0x25]),
];

pub fn heatmap_color(v: f64) -> String {
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    let i = HEATMAP_STOPS
        .iter()
        .rposition(|(s, _)| *s <= v)
        .unwrap_or(0)
        .min(HEATMAP_STOPS.len() - 2);
    let (s0, c0) = HEATMAP_STOPS[i];
    let (s1, c1) = HEATMAP_STOPS[i + 1];
    let f = (v - s0) / (s1 - s0);
    let mix = |a: u8, b: u8| (a as f64 + f * (b as f64 - a as f64)).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(c0[0], c1[0]),
        mix(c0[1], c1[1]),
        mix(c0[2], c1[2])
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
    /// Half-widths of vertical error bars, one per point.
    pub errors: Option<Vec<f64>>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Round tick spacing giving roughly `target` intervals over `[lo, hi]`.
fn nice_step(lo: f64, hi: f64, target: f64) -> f64 {
    let raw = (hi - lo) / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(lo, hi, 5.0);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.4}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Data range padded by 5%, widened when flat.
fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    if span < 1e-12 * lo.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1.0) * 0.1;
        return (lo - pad, hi + pad);
    }
    (lo - 0.05 * span, hi + 0.05 * span)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn open(out: &mut String, title: &str, description: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <title>{}</title>\n<desc>{}</desc>\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        escape(title),
        escape(description),
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(title)
    );
}

fn axes(
    out: &mut String,
    frame: &Frame,
    xlabel: &str,
    ylabel: &str,
    xticks: &[f64],
    yticks: &[f64],
) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    );
    for &t in xticks {
        let px = frame.px(t);
        let _ = writeln!(
            out,
            "<line x1=\"{px:.2}\" y1=\"{y0}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"black\"/><text x=\"{px:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            y0 + 5.0,
            y0 + 19.0,
            tick_label(t)
        );
    }
    for &t in yticks {
        let py = frame.py(t);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{py:.2}\" x2=\"{x0}\" y2=\"{py:.2}\" stroke=\"black\"/><text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        "<text transform=\"translate(18 {:.2}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

pub fn line_chart(
    title: &str,
    description: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[Series],
) -> String {
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|s| {
        s.points.iter().enumerate().flat_map(move |(i, p)| {
            let e = s.errors.as_ref().map_or(0.0, |e| e[i]);
            [p.1 - e, p.1 + e]
        })
    });
    let (xlo, xhi) = xs
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    let (xlo, xhi) = if xlo.is_finite() {
        (xlo, xhi)
    } else {
        (0.0, 1.0)
    };
    let frame = Frame {
        x: if xhi > xlo {
            (xlo, xhi)
        } else {
            (xlo - 0.5, xhi + 0.5)
        },
        y: padded_range(ys),
    };
    let mut out = String::new();
    open(&mut out, title, description);
    axes(
        &mut out,
        &frame,
        xlabel,
        ylabel,
        &ticks(frame.x.0, frame.x.1),
        &ticks(frame.y.0, frame.y.1),
    );
    for s in series {
        if let Some(errors) = &s.errors {
            for (p, e) in s.points.iter().zip(errors) {
                let px = frame.px(p.0);
                let _ = writeln!(
                    out,
                    "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"{}\"/>",
                    frame.py(p.1 - e),
                    frame.py(p.1 + e),
                    s.color
                );
            }
        }
        match s.style {
            Style::Line => {
                let path: Vec<String> = s
                    .points
                    .iter()
                    .map(|p| format!("{:.2},{:.2}", frame.px(p.0), frame.py(p.1)))
                    .collect();
                let _ = writeln!(
                    out,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
                    path.join(" "),
                    s.color
                );
            }
            Style::Markers => {
                for p in &s.points {
                    let _ = writeln!(
                        out,
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\"/>",
                        frame.px(p.0),
                        frame.py(p.1),
                        s.color
                    );
                }
            }
        }
    }
    for (i, s) in series.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        let x = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            out,
            "<line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{}\" stroke-width=\"2\"/><text x=\"{}\" y=\"{}\">{}</text>",
            x + 18.0,
            s.color,
            x + 24.0,
            y + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Cells of `values[i][x]` at time `times[i]` and site `x`, colored on
/// [`HEATMAP_STOPS`] over `[0, 1]`.
pub fn heatmap(title: &str, description: &str, times: &[f64], values: &[Vec<f64>]) -> String {
    let n_sites = values.first().map_or(1, Vec::len).max(1);
    let n_t = times.len().max(1);
    let frame = Frame {
        x: (0.0, n_t as f64),
        y: (0.0, n_sites as f64),
    };
    let mut out = String::new();
    open(&mut out, title, description);
    let cell_w = frame.px(1.0) - frame.px(0.0);
    let cell_h = frame.py(0.0) - frame.py(1.0);
    for (i, row) in values.iter().enumerate() {
        for (x, v) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                frame.px(i as f64),
                frame.py(x as f64 + 1.0),
                cell_w + 0.3,
                cell_h + 0.3,
                heatmap_color(*v)
            );
        }
    }
    let (x0, y0, y1) = (LEFT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        WIDTH - RIGHT - LEFT,
        y0 - y1
    );
    let every = n_t.div_ceil(10);
    for (i, t) in times.iter().enumerate().step_by(every) {
        let px = frame.px(i as f64 + 0.5);
        let _ = writeln!(
            out,
            "<text x=\"{px:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            y0 + 17.0,
            tick_label(*t)
        );
    }
    for x in 0..n_sites {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{x}</text>",
            x0 - 8.0,
            frame.py(x as f64 + 0.5) + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{}\" text-anchor=\"middle\">t</text>\n<text transform=\"translate(18 {:.2}) rotate(-90)\" text-anchor=\"middle\">site x</text>",
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 12.0,
        (y0 + y1) / 2.0
    );
    // color bar
    let bx = WIDTH - RIGHT + 30.0;
    let steps = 50;
    let bar_h = (y0 - y1) / steps as f64;
    for k in 0..steps {
        let v = (k as f64 + 0.5) / steps as f64;
        let _ = writeln!(
            out,
            "<rect x=\"{bx}\" y=\"{:.2}\" width=\"18\" height=\"{:.2}\" fill=\"{}\"/>",
            y0 - (k + 1) as f64 * bar_h,
            bar_h + 0.3,
            heatmap_color(v)
        );
    }
    for v in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{:.2}\">{}</text>",
            bx + 24.0,
            y0 - v * (y0 - y1) + 4.0,
            tick_label(v)
        );
    }
    out.push_str("</svg>\n");
    out
}
