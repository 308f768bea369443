//! Trajectory CSV and SVG plot output.

use std::fmt::Write as _;

use crate::affine::rat_to_f64;
use crate::dynamics::Trajectory;
use crate::timing::{GesturalScore, ParameterTable};
use crate::tract::TractVar;

/// CSV with a fixed header and fixed-point 6-decimal formatting, one row per
/// sample: `t_ms,VA,LP,LA,TH,TP,TTH,TTP,PR,CT,GA,voiced`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(traj.len() * 96 + 64);
    out.push_str("t_ms");
    for var in TractVar::ALL {
        out.push(',');
        out.push_str(var.as_str());
    }
    out.push_str(",voiced\n");
    for i in 0..traj.len() {
        let _ = write!(out, "{:.6}", traj.time_at(i));
        for var in TractVar::ALL {
            let _ = write!(out, ",{:.6}", traj.of(var)[i]);
        }
        let _ = writeln!(out, ",{}", if traj.voiced[i] { 1 } else { 0 });
    }
    out
}

const PANEL_W: f64 = 840.0;
const PANEL_H: f64 = 64.0;
const PANEL_GAP: f64 = 14.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_T: f64 = 28.0;

/// One stacked panel per tract variable: the sampled curve, a dashed neutral
/// line, and shaded boxes over gestural activation intervals. A final strip
/// marks the voicing annotation.
pub fn trajectory_svg(score: &GesturalScore, traj: &Trajectory, table: &ParameterTable) -> String {
    let span = score.span_ms[1].max(1e-9);
    let n_panels = TractVar::ALL.len();
    let voicing_h = 18.0;
    let height = MARGIN_T + n_panels as f64 * (PANEL_H + PANEL_GAP) + voicing_h + 30.0;
    let width = MARGIN_L + PANEL_W + 20.0;

    let x_of = |t: f64| MARGIN_L + t / span * PANEL_W;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let title = score.utterance.join(" ");
    let _ = writeln!(
        svg,
        "<text x=\"{MARGIN_L:.0}\" y=\"18\" font-family=\"monospace\" font-size=\"13\">{}</text>",
        escape(&title)
    );

    for (p, var) in TractVar::ALL.into_iter().enumerate() {
        let top = MARGIN_T + p as f64 * (PANEL_H + PANEL_GAP);
        let params = table.tract(var).expect("complete table");
        let lo = rat_to_f64(&params.min);
        let hi = rat_to_f64(&params.max);
        let y_of = |v: f64| top + (hi - v) / (hi - lo) * PANEL_H;

        let _ = writeln!(
            svg,
            "<rect x=\"{MARGIN_L:.1}\" y=\"{top:.1}\" width=\"{PANEL_W:.1}\" height=\"{PANEL_H:.1}\" fill=\"none\" stroke=\"#444\" stroke-width=\"0.8\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"8\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\">{}</text>",
            top + PANEL_H / 2.0 + 4.0,
            var.as_str()
        );

        // Shaded activation intervals.
        for g in score.on_tract(var) {
            let x0 = x_of(g.start_ms);
            let x1 = x_of(g.end_ms.min(span));
            let _ = writeln!(
                svg,
                "<rect x=\"{x0:.1}\" y=\"{top:.1}\" width=\"{:.1}\" height=\"{PANEL_H:.1}\" fill=\"#9db8d9\" fill-opacity=\"0.45\"/>",
                (x1 - x0).max(0.0)
            );
        }

        // Neutral line.
        let yn = y_of(rat_to_f64(&params.neutral));
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN_L:.1}\" y1=\"{yn:.1}\" x2=\"{:.1}\" y2=\"{yn:.1}\" stroke=\"#999\" stroke-width=\"0.6\" stroke-dasharray=\"4,3\"/>",
            MARGIN_L + PANEL_W
        );

        // The trajectory polyline.
        if !traj.is_empty() {
            let mut points = String::new();
            for i in 0..traj.len() {
                let x = x_of(traj.time_at(i));
                let y = y_of(traj.of(var)[i]);
                let _ = write!(points, "{x:.2},{y:.2} ");
            }
            let _ = writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"#1a3a6b\" stroke-width=\"1.2\" points=\"{}\"/>",
                points.trim_end()
            );
        }
    }

    // Voicing strip: filled where the annotation says voiced.
    let top = MARGIN_T + n_panels as f64 * (PANEL_H + PANEL_GAP);
    let _ = writeln!(
        svg,
        "<text x=\"8\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\">voiced</text>",
        top + voicing_h - 5.0
    );
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_L:.1}\" y=\"{top:.1}\" width=\"{PANEL_W:.1}\" height=\"{voicing_h:.1}\" fill=\"none\" stroke=\"#444\" stroke-width=\"0.8\"/>"
    );
    if !traj.is_empty() {
        let dt = 1000.0 / traj.sample_rate;
        let mut i = 0usize;
        while i < traj.len() {
            if traj.voiced[i] {
                let start = traj.time_at(i);
                let mut j = i;
                while j + 1 < traj.len() && traj.voiced[j + 1] {
                    j += 1;
                }
                let end = traj.time_at(j) + dt;
                let x0 = x_of(start);
                let x1 = x_of(end.min(span));
                let _ = writeln!(
                    svg,
                    "<rect x=\"{x0:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"#2e6b2e\"/>",
                    top + 2.0,
                    (x1 - x0).max(0.0),
                    voicing_h - 4.0
                );
                i = j + 1;
            } else {
                i += 1;
            }
        }
    }

    // Time axis labels.
    let axis_y = top + voicing_h + 18.0;
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let t = span * frac;
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{axis_y:.1}\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"middle\">{t:.0} ms</text>",
            x_of(t)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
