//! Hand-written SVG output: ECDF step plots and the assignment heatmap.
//!
//! Coordinates are printed with three decimals and every element is emitted in
//! a fixed order, so the same inputs always give the same bytes. Step curves
//! are single `<path>` elements built from `M`, `H` and `V` commands whose
//! horizontal stops are exactly the ECDF support points.

use std::fmt::Write;

use ecdfclust_core::{AssignmentMatrix, Ecdf};

const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 32.0;
const MARGIN_BOTTOM: f64 = 44.0;

pub const MEMBER_STROKE: &str = "#b0b0b0";
pub const MEDOID_STROKE: &str = "#000000";
pub const CENTROID_STROKE: &str = "#1f4fd8";

/// Maps data coordinates (similarity, cumulative fraction) into the plot area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub width: f64,
    pub height: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl Frame {
    /// Frame covering every support point, padded on the left and extending
    /// at least to 1 on the right.
    pub fn for_ecdfs<'a>(
        width: f64,
        height: f64,
        ecdfs: impl IntoIterator<Item = &'a Ecdf>,
    ) -> Frame {
        let (lo, hi) = ecdfs
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
                (lo.min(e.min()), hi.max(e.max()))
            });
        let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
        let x_max = hi.max(1.0);
        let margin = 0.05 * (x_max - lo).max(0.1);
        Frame {
            width,
            height,
            x_min: lo - margin,
            x_max,
        }
    }

    pub fn plot_left(&self) -> f64 {
        MARGIN_LEFT
    }

    pub fn plot_right(&self) -> f64 {
        self.width - MARGIN_RIGHT
    }

    pub fn plot_top(&self) -> f64 {
        MARGIN_TOP
    }

    pub fn plot_bottom(&self) -> f64 {
        self.height - MARGIN_BOTTOM
    }

    pub fn x(&self, v: f64) -> f64 {
        self.plot_left()
            + (v - self.x_min) / (self.x_max - self.x_min) * (self.plot_right() - self.plot_left())
    }

    pub fn y(&self, p: f64) -> f64 {
        self.plot_bottom() - p * (self.plot_bottom() - self.plot_top())
    }

    pub fn inverse_x(&self, px: f64) -> f64 {
        self.x_min
            + (px - self.plot_left()) / (self.plot_right() - self.plot_left())
                * (self.x_max - self.x_min)
    }

    pub fn inverse_y(&self, py: f64) -> f64 {
        (self.plot_bottom() - py) / (self.plot_bottom() - self.plot_top())
    }
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Path data for the right-continuous step function of `ecdf`.
pub fn step_path(ecdf: &Ecdf, frame: &Frame) -> String {
    let mut d = format!("M {:.3} {:.3}", frame.x(frame.x_min), frame.y(0.0));
    for (x, p) in ecdf.support().iter().zip(ecdf.cumulative()) {
        let _ = write!(d, " H {:.3} V {:.3}", frame.x(*x), frame.y(p));
    }
    let _ = write!(d, " H {:.3}", frame.x(frame.x_max));
    d
}

fn open_svg(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
}

fn axes(out: &mut String, frame: &Frame, title: &str) {
    let (l, r, t, b) = (
        frame.plot_left(),
        frame.plot_right(),
        frame.plot_top(),
        frame.plot_bottom(),
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        (l + r) / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{l:.3}" y="{t:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#404040"/>"##,
        r - l,
        b - t
    );
    for k in 0..=4 {
        let v = frame.x_min + (frame.x_max - frame.x_min) * k as f64 / 4.0;
        let px = frame.x(v);
        let _ = writeln!(
            out,
            r##"<line x1="{px:.3}" y1="{b:.3}" x2="{px:.3}" y2="{:.3}" stroke="#404040"/><text x="{px:.3}" y="{:.3}" text-anchor="middle">{v:.2}</text>"##,
            b + 4.0,
            b + 16.0
        );
    }
    for k in 0..=4 {
        let p = k as f64 / 4.0;
        let py = frame.y(p);
        let _ = writeln!(
            out,
            r##"<line x1="{:.3}" y1="{py:.3}" x2="{l:.3}" y2="{py:.3}" stroke="#404040"/><text x="{:.3}" y="{:.3}" text-anchor="end">{p:.2}</text>"##,
            l - 4.0,
            l - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">cosine similarity</text>"#,
        (l + r) / 2.0,
        frame.height - 8.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.3}" text-anchor="middle" transform="rotate(-90 14 {:.3})">ECDF</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0
    );
}

fn curve(out: &mut String, ecdf: &Ecdf, frame: &Frame, role: &str, stroke: &str, width: f64) {
    let _ = writeln!(
        out,
        r#"<path data-role="{role}" d="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
        step_path(ecdf, frame)
    );
}

/// Overlaid step curves of one group: thin grey members, then the medoid in
/// black and the pooled centroid in blue when given.
pub fn ecdf_panel(
    title: &str,
    members: &[&Ecdf],
    medoid: Option<&Ecdf>,
    centroid: Option<&Ecdf>,
    frame: &Frame,
) -> String {
    let mut out = String::new();
    open_svg(&mut out, frame.width, frame.height);
    axes(&mut out, frame, title);
    for e in members {
        curve(&mut out, e, frame, "member", MEMBER_STROKE, 1.0);
    }
    if let Some(e) = medoid {
        curve(&mut out, e, frame, "medoid", MEDOID_STROKE, 2.0);
    }
    if let Some(e) = centroid {
        curve(&mut out, e, frame, "centroid", CENTROID_STROKE, 2.0);
    }
    out.push_str("</svg>\n");
    out
}

/// Grey level for a cluster label: label 0 is darkest.
pub fn cluster_shade(cluster: usize, m: usize) -> u8 {
    if m <= 1 {
        return 40;
    }
    (40.0 + 200.0 * cluster as f64 / (m - 1) as f64).round() as u8
}

/// Heatmap of the assignment matrix in display order.
pub fn assignment_heatmap(
    c: &AssignmentMatrix,
    m: usize,
    row_labels: &[String],
    col_labels: &[String],
) -> String {
    let cell = 14.0;
    let left = 8.0
        + 7.0
            * row_labels
                .iter()
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0) as f64;
    let top = 24.0
        + 7.0
            * col_labels
                .iter()
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0) as f64;
    let legend = 24.0 + 18.0 * m as f64;
    let width = left + cell * c.n_agents as f64 + 60.0;
    let height = (top + cell * c.n_questions as f64 + 16.0).max(legend + 16.0);

    let mut out = String::new();
    open_svg(&mut out, width, height);
    for (pos, &j) in c.col_order.iter().enumerate() {
        let x = left + cell * (pos as f64 + 0.5);
        let _ = writeln!(
            out,
            r#"<text x="{x:.3}" y="{:.3}" transform="rotate(-90 {x:.3} {:.3})" font-size="10">{}</text>"#,
            top - 4.0,
            top - 4.0,
            escape(&col_labels[j])
        );
    }
    for (pos, &i) in c.row_order.iter().enumerate() {
        let y = top + cell * pos as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end" font-size="10">{}</text>"#,
            left - 4.0,
            y + cell - 3.0,
            escape(&row_labels[i])
        );
        for (cpos, &j) in c.col_order.iter().enumerate() {
            let k = c.entries[i][j];
            let g = cluster_shade(k, m);
            let _ = writeln!(
                out,
                r#"<rect data-row="{i}" data-col="{j}" data-cluster="{k}" x="{:.3}" y="{y:.3}" width="{cell}" height="{cell}" fill="rgb({g},{g},{g})"/>"#,
                left + cell * cpos as f64
            );
        }
    }
    let lx = left + cell * c.n_agents as f64 + 12.0;
    for k in 0..m {
        let g = cluster_shade(k, m);
        let y = 24.0 + 18.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{lx:.3}" y="{y:.3}" width="12" height="12" fill="rgb({g},{g},{g})"/><text x="{:.3}" y="{:.3}">{k}</text>"#,
            lx + 16.0,
            y + 10.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ecdfclust_core::ecdf_from_samples;

    #[test]
    fn frame_round_trips() {
        let f = Frame {
            width: 400.0,
            height: 300.0,
            x_min: -0.2,
            x_max: 1.0,
        };
        for v in [-0.2, 0.0, 0.37, 1.0] {
            assert!((f.inverse_x(f.x(v)) - v).abs() < 1e-12);
            assert!((f.inverse_y(f.y(v.max(0.0))) - v.max(0.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_reaches_one() {
        let e = ecdf_from_samples(&[0.2, 0.5]).unwrap();
        let f = Frame::for_ecdfs(400.0, 300.0, [&e]);
        assert_eq!(f.x_max, 1.0);
        assert!(f.x_min < 0.2);
    }

    #[test]
    fn step_path_shape() {
        let e = ecdf_from_samples(&[0.5]).unwrap();
        let f = Frame {
            width: 172.0,
            height: 176.0,
            x_min: 0.0,
            x_max: 1.0,
        };
        // plot area is x 56..156, y 32..132
        assert_eq!(
            step_path(&e, &f),
            "M 56.000 132.000 H 106.000 V 32.000 H 156.000"
        );
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn shades_darken_with_rank() {
        assert!(cluster_shade(0, 4) < cluster_shade(1, 4));
        assert_eq!(cluster_shade(3, 4), 240);
        assert_eq!(cluster_shade(0, 1), 40);
    }
}
