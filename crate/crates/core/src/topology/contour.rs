//! Marching-squares tracing of `F = 0` on a slice.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::Result;
use crate::model::{eval_factor, Factor};
use crate::topology::grid::SliceSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub factor: Factor,
    /// Vertices in the slice's `(u, v)` coordinates.
    pub polyline: Vec<[f64; 2]>,
    pub closed: bool,
}

/// Trace the zero set of `factor` on the sample grid of `spec`.
///
/// Crossings are located on cell edges by linear interpolation and then
/// polished with Illinois regula falsi against the exact discriminant, so
/// vertices sit on the zero set to round-off. Curves are oriented with the
/// positive side on the left. With `clip = Some(eta)`, segments whose
/// midpoint has one of the other two discriminants at or below `-eta` are
/// dropped.
pub fn trace_boundary(spec: &SliceSpec, factor: Factor, clip: Option<f64>) -> Result<Vec<BoundaryCurve>> {
    spec.validate()?;
    let n = spec.resolution;
    let f = |u: f64, v: f64| eval_factor(&spec.point_at(u, v), factor);

    let values: Vec<f64> = (0..n * n)
        .map(|idx| {
            let (u, v) = spec.uv(idx % n, idx / n);
            f(u, v)
        })
        .collect();
    let val = |i: usize, j: usize| values[j * n + i];
    let positive = |x: f64| x > 0.0;

    // Edge ids: horizontal (i,j)-(i+1,j) -> 2 (j n + i); vertical (i,j)-(i,j+1) -> 2 (j n + i) + 1.
    let mut crossing_cache: HashMap<usize, [f64; 2]> = HashMap::new();
    let mut crossing = |edge: usize| -> [f64; 2] {
        *crossing_cache.entry(edge).or_insert_with(|| {
            let base = edge / 2;
            let (i, j) = (base % n, base / n);
            let (i2, j2) = if edge.is_multiple_of(2) { (i + 1, j) } else { (i, j + 1) };
            let (u0, v0) = spec.uv(i, j);
            let (u1, v1) = spec.uv(i2, j2);
            let t = refine_root(|t| f(u0 + t * (u1 - u0), v0 + t * (v1 - v0)), val(i, j), val(i2, j2));
            [u0 + t * (u1 - u0), v0 + t * (v1 - v0)]
        })
    };

    let others: Vec<Factor> = Factor::ALL.into_iter().filter(|g| *g != factor).collect();
    let keep = |p: [f64; 2]| match clip {
        None => true,
        Some(eta) => {
            let q = spec.point_at(p[0], p[1]);
            others.iter().all(|g| eval_factor(&q, *g) > -eta)
        }
    };

    // Oriented segments: start edge -> end edge.
    let mut next: HashMap<usize, usize> = HashMap::new();
    let mut starts: Vec<usize> = Vec::new();
    for j in 0..n.saturating_sub(1) {
        for i in 0..n - 1 {
            let corner_val = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let pos = corner_val.map(positive);
            // Cell edges counter-clockwise: bottom, right, top, left.
            let edge_ids = [
                2 * (j * n + i),
                2 * (j * n + i + 1) + 1,
                2 * ((j + 1) * n + i),
                2 * (j * n + i) + 1,
            ];
            let exits: Vec<usize> = (0..4).filter(|&e| pos[e] && !pos[(e + 1) % 4]).collect();
            let entries: Vec<usize> = (0..4).filter(|&e| !pos[e] && pos[(e + 1) % 4]).collect();
            let pairs: Vec<(usize, usize)> = match exits.len() {
                0 => Vec::new(),
                1 => vec![(exits[0], entries[0])],
                _ => {
                    let (uc, vc) = {
                        let (u0, v0) = spec.uv(i, j);
                        let (u1, v1) = spec.uv(i + 1, j + 1);
                        (0.5 * (u0 + u1), 0.5 * (v0 + v1))
                    };
                    if positive(f(uc, vc)) {
                        exits.iter().map(|&e| (e, (e + 1) % 4)).collect()
                    } else {
                        exits.iter().map(|&e| (e, (e + 3) % 4)).collect()
                    }
                }
            };
            for (from, to) in pairs {
                let (a, b) = (edge_ids[from], edge_ids[to]);
                let (pa, pb) = (crossing(a), crossing(b));
                if keep([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]) {
                    next.insert(a, b);
                    starts.push(a);
                }
            }
        }
    }

    let has_incoming: HashSet<usize> = next.values().copied().collect();
    starts.sort_unstable();

    let mut used: HashSet<usize> = HashSet::new();
    let mut chains: Vec<(Vec<usize>, bool)> = Vec::new();
    let follow = |start: usize, used: &mut HashSet<usize>| {
        let mut chain = vec![start];
        let mut cur = start;
        let mut closed = false;
        while let Some(&to) = next.get(&cur) {
            if !used.insert(cur) {
                break;
            }
            chain.push(to);
            if to == start {
                closed = true;
                break;
            }
            cur = to;
        }
        (chain, closed)
    };
    // Open chains first (start edges with no incoming segment), then loops.
    for &s in &starts {
        if !has_incoming.contains(&s) {
            chains.push(follow(s, &mut used));
        }
    }
    for &s in &starts {
        if !used.contains(&s) {
            chains.push(follow(s, &mut used));
        }
    }
    let curves = chains
        .into_iter()
        .map(|(edges, closed)| BoundaryCurve {
            factor,
            polyline: edges.into_iter().map(&mut crossing).collect(),
            closed,
        })
        .collect();
    Ok(curves)
}

/// Root of `g` on `[0, 1]` given `g(0) = g0`, `g(1) = g1` of opposite sign
/// (zero allowed): linear guess polished by Illinois regula falsi.
fn refine_root(g: impl Fn(f64) -> f64, g0: f64, g1: f64) -> f64 {
    if g0 == 0.0 {
        return 0.0;
    }
    if g1 == 0.0 {
        return 1.0;
    }
    let (mut a, mut b, mut fa, mut fb) = (0.0f64, 1.0f64, g0, g1);
    let mut side = 0i8;
    let mut x = a - fa * (b - a) / (fb - fa);
    for _ in 0..100 {
        x = (a * fb - b * fa) / (fb - fa);
        let fx = g(x);
        if fx == 0.0 || (b - a).abs() < 1e-15 {
            break;
        }
        if (fx > 0.0) == (fb > 0.0) {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    x.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::grid::Axis;

    #[test]
    fn illinois_converges() {
        let t = refine_root(|t| t * t - 0.3, -0.3, 0.7);
        assert!((t - 0.3f64.sqrt()).abs() < 1e-12);
        assert_eq!(refine_root(|t| t, 0.0, 1.0), 0.0);
    }

    #[test]
    fn circle_of_p_is_closed() {
        let spec = SliceSpec::new(Axis::B, 1.5, 64);
        let curves = trace_boundary(&spec, Factor::P, None).unwrap();
        assert_eq!(curves.len(), 1);
        assert!(curves[0].closed);
        let r = (10.0f64 - 4.5).sqrt();
        for p in &curves[0].polyline {
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - r).abs() < 1e-9);
        }
    }

    #[test]
    fn orientation_keeps_positive_side_left() {
        let spec = SliceSpec::new(Axis::B, 1.5, 64);
        let c = &trace_boundary(&spec, Factor::P, None).unwrap()[0];
        // P > 0 inside the circle: counter-clockwise traversal has positive area.
        let mut area = 0.0;
        for w in c.polyline.windows(2) {
            area += w[0][0] * w[1][1] - w[1][0] * w[0][1];
        }
        assert!(area > 0.0);
    }

    #[test]
    fn q_at_b0_is_four_lines() {
        let spec = SliceSpec::new(Axis::B, 0.0, 101);
        let curves = trace_boundary(&spec, Factor::Q, None).unwrap();
        let mut on_line = [0usize; 4];
        for p in curves.iter().flat_map(|c| c.polyline.iter()) {
            let hits = [(p[0] - 3.0).abs(), (p[0] + 3.0).abs(), (p[1] - 1.0).abs(), (p[1] + 1.0).abs()];
            let (k, d) = hits.iter().enumerate().fold((0, f64::MAX), |m, (k, &d)| if d < m.1 { (k, d) } else { m });
            assert!(d < 1e-9, "vertex {p:?} off every line");
            on_line[k] += 1;
        }
        assert!(on_line.iter().all(|&n| n > 10), "{on_line:?}");
    }

    #[test]
    fn w_at_b1_contains_antidiagonal() {
        let spec = SliceSpec::new(Axis::B, 1.0, 101);
        let curves = trace_boundary(&spec, Factor::W, None).unwrap();
        let on_diag = curves
            .iter()
            .flat_map(|c| c.polyline.iter())
            .filter(|p| (p[0] + p[1]).abs() < 1e-9)
            .count();
        assert!(on_diag > 20, "{on_diag}");
    }

    #[test]
    fn vertices_sit_on_zero_set() {
        let spec = SliceSpec::new(Axis::B, 0.4, 80);
        for f in Factor::ALL {
            for c in trace_boundary(&spec, f, None).unwrap() {
                for p in &c.polyline {
                    let q = spec.point_at(p[0], p[1]);
                    let n2 = q.norm_sq();
                    assert!(eval_factor(&q, f).abs() < 1e-6 * (1.0 + n2 * n2), "{f} at {p:?}");
                }
            }
        }
    }

    #[test]
    fn clipping_drops_segments() {
        let spec = SliceSpec::new(Axis::B, 0.4, 80);
        let count = |clip| -> usize {
            trace_boundary(&spec, Factor::P, clip)
                .unwrap()
                .iter()
                .map(|c| c.polyline.len())
                .sum()
        };
        assert!(count(Some(0.0)) < count(None));
    }
}
