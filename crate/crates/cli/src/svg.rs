//! Static SVG rendering with y pointing up.

use std::fmt::Write;

use nspmr::{Scenario, Trajectory};

const COLORS: [&str; 4] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd"];

/// One `<polygon>` per obstacle (initial pose) and one `<polyline>` per
/// trajectory.
pub fn render_svg(s: &Scenario, trajectories: &[&Trajectory]) -> String {
    let b = &s.bounds;
    let stroke = (b.width().max(b.height()) / 400.0).max(0.01);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        b.xmin,
        b.ymin,
        b.width(),
        b.height(),
        (800.0 * b.height() / b.width()).round()
    );
    // mirror about the horizontal centre line so that +y points up
    let _ = writeln!(out, r#"<g transform="matrix(1 0 0 -1 0 {})">"#, b.ymin + b.ymax);
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff" stroke="#000000" stroke-width="{stroke}"/>"##,
        b.xmin,
        b.ymin,
        b.width(),
        b.height()
    );
    for ob in &s.obstacles {
        let pts: Vec<String> = ob.shape.vertices().iter().map(|p| format!("{},{}", p.x, p.y)).collect();
        let fill = if ob.is_dynamic() { "#f4b183" } else { "#7f7f7f" };
        let _ = writeln!(out, r#"<polygon points="{}" fill="{fill}"/>"#, pts.join(" "));
    }
    for (i, t) in trajectories.iter().enumerate() {
        let pts: Vec<String> = t.points().map(|p| format!("{:.4},{:.4}", p.x, p.y)).collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="{stroke}"/>"#,
            pts.join(" "),
            COLORS[i % COLORS.len()]
        );
    }
    for (p, color) in [(s.start, "#000000"), (s.goal, "#2ca02c")] {
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="{color}"/>"#, p.x, p.y, stroke * 4.0);
    }
    out.push_str("</g>\n</svg>\n");
    out
}
