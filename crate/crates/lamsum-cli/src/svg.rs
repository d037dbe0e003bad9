//! Poincaré-disk rendering of the axes in a run: the two current axes of
//! every step, color-graded by step, and the boundary axis in black.
//!
//! A hyperboloid point maps to the disk by (x1, x2)/(1 + x0); the geodesic
//! dual to a spacelike vector becomes a circular arc orthogonal to the
//! unit circle, or a diameter when the dual has no time component.

use crate::report::RunReport;
use std::collections::HashSet;
use std::fmt::Write;

const TAU_DIAMETER: f64 = 1e-9;

/// Ideal endpoints of the geodesic dual to `u`, as disk boundary points.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // the negation rejects NaN
fn endpoints(u: [f64; 3]) -> Option<([f64; 2], [f64; 2])> {
    let s = u[0].abs().max(u[1].abs()).max(u[2].abs());
    if !(s > 0.0) || !s.is_finite() {
        return None;
    }
    let (t, a, b) = (u[0] / s, u[1] / s, u[2] / s);
    let q = a * a + b * b;
    // boundary solutions of a·n1 + b·n2 = t on the unit circle
    let h2 = 1.0 - t * t / q;
    if h2 <= 0.0 {
        return None;
    }
    let h = h2.sqrt();
    let foot = [a * t / q, b * t / q];
    let dir = [-b / q.sqrt(), a / q.sqrt()];
    Some((
        [foot[0] - h * dir[0], foot[1] - h * dir[1]],
        [foot[0] + h * dir[0], foot[1] + h * dir[1]],
    ))
}

/// SVG path for the geodesic dual to `u`: a diameter when u has no time
/// component, otherwise the arc of the circle through the two ideal
/// endpoints orthogonal to the unit circle.
fn geodesic_path(u: [f64; 3]) -> Option<String> {
    let (e1, e2) = endpoints(u)?;
    let s = u[0].abs().max(u[1].abs()).max(u[2].abs());
    if u[0].abs() <= TAU_DIAMETER * s {
        return Some(format!(
            "M {:.6} {:.6} L {:.6} {:.6}",
            e1[0], e1[1], e2[0], e2[1]
        ));
    }
    // circle through e1, e2 orthogonal to the unit circle: its center is
    // the inversion image scaled by 1/(1 + e1·e2)
    let dot = e1[0] * e2[0] + e1[1] * e2[1];
    let center = [(e1[0] + e2[0]) / (1.0 + dot), (e1[1] + e2[1]) / (1.0 + dot)];
    let r = ((e1[0] - center[0]).powi(2) + (e1[1] - center[1]).powi(2)).sqrt();
    let phi1 = (e1[1] - center[1]).atan2(e1[0] - center[0]);
    let phi2 = (e2[1] - center[1]).atan2(e2[0] - center[0]);
    let mut dphi = phi2 - phi1;
    while dphi > std::f64::consts::PI {
        dphi -= 2.0 * std::f64::consts::PI;
    }
    while dphi < -std::f64::consts::PI {
        dphi += 2.0 * std::f64::consts::PI;
    }
    let sweep = if dphi > 0.0 { 1 } else { 0 };
    Some(format!(
        "M {:.6} {:.6} A {:.6} {:.6} 0 0 {} {:.6} {:.6}",
        e1[0], e1[1], r, r, sweep, e2[0], e2[1]
    ))
}

fn step_color(k: usize, n: usize) -> String {
    let t = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.0 };
    format!("hsl({:.0},70%,45%)", 210.0 - 190.0 * t)
}

/// Renders the report's axes into a standalone SVG document.
pub fn render_svg(rep: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"640\" height=\"640\">\n",
    );
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    out.push_str(
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"white\" stroke=\"black\" stroke-width=\"0.01\"/>\n",
    );

    let n = rep.trace.len();
    let mut seen: HashSet<[u64; 3]> = HashSet::new();
    let mut draw = |out: &mut String, u: [f64; 3], color: &str, width: f64, dash: &str| {
        let key = [u[0].to_bits(), u[1].to_bits(), u[2].to_bits()];
        let neg = [(-u[0]).to_bits(), (-u[1]).to_bits(), (-u[2]).to_bits()];
        if !seen.insert(key) || seen.contains(&neg) {
            return;
        }
        if let Some(path) = geodesic_path(u) {
            let _ = writeln!(
                out,
                "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{width:.4}\"{dash}/>"
            );
        }
    };

    draw(
        &mut out,
        rep.boundary_axis,
        "black",
        0.014,
        " stroke-dasharray=\"0.03,0.02\"",
    );
    for (i, step) in rep.trace.iter().enumerate() {
        let color = step_color(i, n);
        draw(&mut out, step.axis_gamma, &color, 0.008, "");
        draw(&mut out, step.axis_delta, &color, 0.008, "");
    }

    out.push_str("</g>\n</svg>\n");
    out
}
