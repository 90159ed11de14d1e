//! Plain SVG rendering of plans. Output is byte-for-byte deterministic.

use std::fmt::Write as _;

use crate::coordspace::{CollisionRect, CoordinationScenario};
use crate::priority::PriorityGraph;
use crate::trajectory::Trajectory;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;
const SPAN: f64 = SIZE - 2.0 * MARGIN;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn px(x: f64) -> f64 {
    MARGIN + SPAN * x
}

fn py(y: f64) -> f64 {
    SIZE - MARGIN - SPAN * y
}

fn header(out: &mut String) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
}

/// Axis-aligned box in unit coordinates.
fn unit_rect(out: &mut String, x0: f64, x1: f64, y0: f64, y1: f64, style: &str) {
    writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" {style}/>"#,
        px(x0),
        py(y1),
        px(x1) - px(x0),
        py(y0) - py(y1)
    )
    .unwrap();
}

fn frame(out: &mut String, x_label: &str, y_label: &str) {
    unit_rect(out, 0.0, 1.0, 0.0, 1.0, r#"fill="none" stroke="black""#);
    let (lx, ly) = (px(0.5), SIZE - MARGIN / 3.0);
    writeln!(out, r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" font-size="14">{x_label}</text>"#).unwrap();
    let (tx, ty) = (MARGIN / 2.5, py(0.5));
    writeln!(
        out,
        r#"<text x="{tx:.2}" y="{ty:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 {tx:.2} {ty:.2})">{y_label}</text>"#
    )
    .unwrap();
}

fn polyline(out: &mut String, points: impl Iterator<Item = (f64, f64)>, color: &str) {
    let coords: Vec<String> = points.map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, coords.join(" ")).unwrap();
}

/// The `(s_i, s_j)` plane of one obstacle: the rectangle in blue, the gate
/// the realized priority forbids in red, the gate it uses dashed, and the
/// projected trajectory in black.
pub fn pair_svg(rect: &CollisionRect<f64>, traj: &Trajectory<f64>, graph: &PriorityGraph) -> String {
    let (i, j) = (rect.pair().lo(), rect.pair().hi());
    let (x, y) = (rect.first(), rect.second());
    let mut out = String::new();
    header(&mut out);
    // Gate where the first vehicle goes first, and its mirror.
    let first_gate = (x.lo, x.hi, 0.0, y.lo);
    let second_gate = (0.0, x.lo, y.lo, y.hi);
    let dashed = r##"fill="none" stroke="#d62728" stroke-width="1.5" stroke-dasharray="6 4""##;
    let forbidden = r##"fill="#d62728" fill-opacity="0.45" stroke="none""##;
    let (allowed, banned) = match graph.winner(rect.pair()) {
        Some(w) if w == i => (Some(first_gate), Some(second_gate)),
        Some(_) => (Some(second_gate), Some(first_gate)),
        None => (None, None),
    };
    unit_rect(&mut out, x.lo, x.hi, y.lo, y.hi, r##"fill="#1f77b4" fill-opacity="0.7" stroke="none""##);
    match (allowed, banned) {
        (Some(a), Some(b)) => {
            unit_rect(&mut out, b.0, b.1, b.2, b.3, forbidden);
            unit_rect(&mut out, a.0, a.1, a.2, a.3, dashed);
        }
        _ => {
            for g in [first_gate, second_gate] {
                unit_rect(&mut out, g.0, g.1, g.2, g.3, dashed);
            }
        }
    }
    frame(&mut out, &format!("s_{}", i + 1), &format!("s_{}", j + 1));
    polyline(&mut out, traj.states().iter().map(|s| (px(s[i]), py(s[j]))), "black");
    out.push_str("</svg>\n");
    out
}

/// Every `s_i(t)` against time, one color per vehicle.
pub fn time_space_svg(traj: &Trajectory<f64>) -> String {
    let t_end = traj.end_time().max(f64::MIN_POSITIVE);
    let mut out = String::new();
    header(&mut out);
    frame(&mut out, "t", "s");
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{t_end:.3}</text>"#,
        px(1.0),
        py(0.0) + 14.0
    )
    .unwrap();
    for v in 0..traj.n() {
        let color = PALETTE[v % PALETTE.len()];
        polyline(&mut out, traj.breakpoints().map(|(t, s)| (px(t / t_end), py(s[v]))), color);
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">{}</text>"#,
            px(0.02),
            py(0.97) + 14.0 * v as f64,
            v + 1
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Named SVG documents for a plan: `pair_I_J.svg` per obstacle and
/// `time_space.svg`.
pub fn plan_figures(
    scn: &CoordinationScenario<f64>,
    traj: &Trajectory<f64>,
    graph: &PriorityGraph,
) -> Vec<(String, String)> {
    let mut figures: Vec<(String, String)> = scn
        .obstacles()
        .iter()
        .map(|r| {
            let name = format!("pair_{}_{}.svg", r.pair().lo() + 1, r.pair().hi() + 1);
            (name, pair_svg(r, traj, graph))
        })
        .collect();
    figures.push(("time_space.svg".to_string(), time_space_svg(traj)));
    figures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::plan_exhaustive;
    use crate::priority::tests::all_pairs_scenario;

    #[test]
    fn one_figure_per_pair_plus_time_space() {
        let scn = all_pairs_scenario(3, 0.4, 0.6);
        let plan = plan_exhaustive(&scn).unwrap();
        let figs = plan_figures(&scn, &plan.trajectory, &plan.graph);
        let names: Vec<&str> = figs.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["pair_1_2.svg", "pair_1_3.svg", "pair_2_3.svg", "time_space.svg"]);
        assert_eq!(figs, plan_figures(&scn, &plan.trajectory, &plan.graph));
    }

    #[test]
    fn forbidden_gate_follows_priority() {
        let scn = all_pairs_scenario(2, 0.4, 0.6);
        let plan = plan_exhaustive(&scn).unwrap();
        let svg = pair_svg(&scn.obstacles()[0], &plan.trajectory, &plan.graph);
        // 1 goes first, so the red strip is left of the rectangle.
        let red = format!(r##"<rect x="{:.2}" y="{:.2}" width="{:.2}""##, px(0.0), py(0.6), px(0.4) - px(0.0));
        assert!(svg.contains(&red), "{svg}");
        assert!(svg.contains(r##"fill="#d62728" fill-opacity="0.45""##));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }
}
