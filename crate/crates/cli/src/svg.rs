//! Static SVG panels: each polygon drawn as a closed path with vertex dots
//! inside a fixed per-panel viewBox. Mirrors the figure style of the
//! experiments; no interactivity.

use polyflow_core::Polygon;

const PANEL: f64 = 240.0;
const MARGIN: f64 = 24.0;

pub struct Panel<'a> {
    pub label: String,
    pub polygon: &'a Polygon,
}

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

fn panel_svg(panel: &Panel, x_off: f64, y_off: f64) -> String {
    let vs = panel.polygon.vertices();
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in vs {
        min_x = min_x.min(z.re);
        max_x = max_x.max(z.re);
        min_y = min_y.min(z.im);
        max_y = max_y.max(z.im);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
    let scale = (PANEL - 2.0 * MARGIN) / span;
    let cx = 0.5 * (min_x + max_x);
    let cy = 0.5 * (min_y + max_y);
    // Screen y grows downward; flip the imaginary axis.
    let to_screen = |z: &polyflow_core::Complex64| {
        (
            x_off + PANEL / 2.0 + (z.re - cx) * scale,
            y_off + PANEL / 2.0 - (z.im - cy) * scale,
        )
    };

    let mut path = String::new();
    for (i, z) in vs.iter().enumerate() {
        let (x, y) = to_screen(z);
        path.push_str(if i == 0 { "M " } else { "L " });
        path.push_str(&format!("{} {} ", fmt(x), fmt(y)));
    }
    path.push('Z');

    let mut out = String::new();
    out.push_str(&format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{PANEL}\" height=\"{PANEL}\" fill=\"none\" stroke=\"#cccccc\"/>\n",
        fmt(x_off),
        fmt(y_off)
    ));
    out.push_str(&format!(
        "  <path d=\"{path}\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"/>\n"
    ));
    for z in vs {
        let (x, y) = to_screen(z);
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"#d03a2b\"/>\n",
            fmt(x),
            fmt(y)
        ));
    }
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">{}</text>\n",
        fmt(x_off + 8.0),
        fmt(y_off + 16.0),
        panel.label
    ));
    out
}

/// Grid of panels, `columns` wide. With `reproducible` the timestamp
/// comment is suppressed so identical runs emit identical bytes.
pub fn render_panels(panels: &[Panel<'_>], columns: usize, reproducible: bool) -> String {
    let columns = columns.max(1);
    let rows = panels.len().div_ceil(columns);
    let width = PANEL * columns.min(panels.len().max(1)) as f64;
    let height = PANEL * rows.max(1) as f64;
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if !reproducible {
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        out.push_str(&format!("<!-- generated at unix time {stamp} -->\n"));
    }
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">\n",
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    ));
    for (i, panel) in panels.iter().enumerate() {
        let x_off = (i % columns) as f64 * PANEL;
        let y_off = (i / columns) as f64 * PANEL;
        out.push_str(&panel_svg(panel, x_off, y_off));
    }
    out.push_str("</svg>\n");
    out
}
