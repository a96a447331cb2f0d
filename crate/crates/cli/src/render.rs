//! CSV and SVG writers for sampled slices.

use std::fmt::Write as _;
use std::io::Write;

use pt_horizon::topology::{BoundaryCurve, ComponentReport, SliceGrid};
use pt_horizon::Factor;

pub const CSV_HEADER: [&str; 7] = ["u", "v", "W", "Q", "P", "inside", "component"];

/// 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per sample in scan order (`u` fastest).
pub fn write_csv(out: impl Write, grid: &SliceGrid, report: &ComponentReport) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let n = grid.spec.resolution;
    for j in 0..n {
        for i in 0..n {
            let idx = grid.spec.index(i, j);
            let (u, v) = grid.spec.uv(i, j);
            let d = &grid.discriminants[idx];
            let component = report.label(idx).map_or(-1, i64::from);
            w.write_record([
                float(u),
                float(v),
                float(d.w),
                float(d.q),
                float(d.p),
                u8::from(grid.membership[idx]).to_string(),
                component.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

const PALETTE: [&str; 6] = ["#9ecae1", "#fdae6b", "#a1d99b", "#bcbddc", "#fc9272", "#d9d9d9"];

fn stroke(f: Factor) -> (&'static str, &'static str) {
    match f {
        Factor::W => ("#08519c", ""),
        Factor::Q => ("#a63603", " stroke-dasharray=\"6 4\""),
        Factor::P => ("#252525", " stroke-dasharray=\"1.5 3\""),
    }
}

/// Inside cells as rects (runs of equal label merged along rows, coloured
/// by component) with boundary polylines on top: W solid, Q dashed, P dotted.
pub fn render_svg(grid: &SliceGrid, report: &ComponentReport, curves: &[BoundaryCurve]) -> String {
    let spec = &grid.spec;
    let n = spec.resolution;
    let (du, dv) = spec.cell_size();
    let (u_axis, v_axis) = spec.free_axes();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 {n} {n}\">"
    );
    let _ = writeln!(
        s,
        "<title>{}={} slice, {} horizontal, {} vertical</title>",
        spec.fixed_axis.name(),
        spec.fixed_value,
        u_axis.name(),
        v_axis.name()
    );
    let _ = writeln!(s, "<rect width=\"{n}\" height=\"{n}\" fill=\"white\"/>");
    s.push_str("<g shape-rendering=\"crispEdges\">\n");
    for j in 0..n {
        let y = n - 1 - j;
        let mut i = 0;
        while i < n {
            let Some(label) = report.label(spec.index(i, j)) else {
                i += 1;
                continue;
            };
            let start = i;
            while i < n && report.label(spec.index(i, j)) == Some(label) {
                i += 1;
            }
            let _ = writeln!(
                s,
                "<rect x=\"{start}\" y=\"{y}\" width=\"{}\" height=\"1\" fill=\"{}\"/>",
                i - start,
                PALETTE[label as usize % PALETTE.len()]
            );
        }
    }
    s.push_str("</g>\n");
    for curve in curves {
        if curve.polyline.len() < 2 {
            continue;
        }
        let (color, dash) = stroke(curve.factor);
        let points: Vec<String> = curve
            .polyline
            .iter()
            .map(|p| {
                let x = (p[0] - spec.u_range.0) / du;
                let y = n as f64 - (p[1] - spec.v_range.0) / dv;
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            "<polyline class=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
             vector-effect=\"non-scaling-stroke\"{dash}/>",
            curve.factor,
            points.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}
