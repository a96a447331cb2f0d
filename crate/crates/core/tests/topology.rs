use pt_horizon::model::eval_discriminants;
use pt_horizon::oracle::in_domain_oracle;
use pt_horizon::topology::{
    components2d, components3d, sample_slice, trace_boundary, Axis, BoxSpec, FactorSet, Mode, SliceSpec,
};
use pt_horizon::{Error, Factor};

#[test]
fn grid_agrees_with_oracle_on_slices() {
    for (axis, value) in [(Axis::B, 0.1), (Axis::B, 0.999), (Axis::C, 0.0), (Axis::A, 0.0), (Axis::C, 0.95)] {
        let grid = sample_slice(&SliceSpec::new(axis, value, 256)).unwrap();
        let n = grid.spec.resolution;
        for j in 0..n {
            for i in 0..n {
                let p = grid.spec.sample(i, j);
                let d = eval_discriminants(&p);
                if d.w.abs() > 1e-6 && d.q.abs() > 1e-6 && d.p.abs() > 1e-6 {
                    assert_eq!(grid.is_member(i, j), in_domain_oracle(&p).unwrap(), "{p:?}");
                }
            }
        }
    }
}

#[test]
fn fish_tails_on_c0_slice() {
    let grid = sample_slice(&SliceSpec::new(Axis::C, 0.0, 400)).unwrap();
    let report = components2d(&grid);
    assert_eq!(report.count, 3);
    let label = |u: f64, v: f64| {
        let (i, j) = grid.spec.nearest_sample(u, v).unwrap();
        report.label(grid.spec.index(i, j))
    };
    let (left, right, centre) = (label(-2.9, 0.0), label(2.9, 0.0), label(0.0, 0.0));
    assert!(left.is_some() && right.is_some() && centre.is_some());
    assert_ne!(left, centre);
    assert_ne!(right, centre);
    assert_ne!(left, right);
}

#[test]
fn counts_stable_under_eta() {
    for (axis, value, want) in [(Axis::B, 0.2, 3), (Axis::B, 1.01, 2), (Axis::A, 0.0, 1)] {
        for eta in [0.0, 1e-9, 1e-6] {
            let grid = sample_slice(&SliceSpec::new(axis, value, 400).with_eta(eta)).unwrap();
            assert_eq!(components2d(&grid).count, want, "{axis:?}={value} eta={eta}");
        }
    }
}

#[test]
fn empty_near_ellipsoid_top() {
    let grid = sample_slice(&SliceSpec::new(Axis::B, 2.226068, 256)).unwrap();
    assert_eq!(grid.inside_count(), 0);
    assert_eq!(components2d(&grid).count, 0);
}

#[test]
fn single_factor_boxes() {
    let p_only = components3d(&BoxSpec::new(48).with_factors(FactorSet::only(Factor::P))).unwrap();
    assert_eq!(p_only.count, 1);
    let q_only = components3d(&BoxSpec::new(64).with_factors(FactorSet::only(Factor::Q))).unwrap();
    assert_eq!(q_only.count, 3);
}

#[test]
fn box_guards() {
    assert!(matches!(components3d(&BoxSpec::new(16)), Err(Error::InvalidInput(_))));
    assert!(matches!(components3d(&BoxSpec::new(1001)), Err(Error::MemoryGuard { .. })));
}

#[test]
fn components_deterministic() {
    let spec = SliceSpec::new(Axis::B, 0.1, 300);
    let a = components2d(&sample_slice(&spec).unwrap());
    let b = components2d(&sample_slice(&spec).unwrap());
    assert_eq!(a, b);
    let real = components2d(&sample_slice(&spec.with_mode(Mode::RealOnly)).unwrap());
    assert!(real.count <= a.count);
}

#[test]
fn p_circle_within_two_diagonals() {
    let spec = SliceSpec::new(Axis::B, 1.5, 200);
    let curves = trace_boundary(&spec, Factor::P, None).unwrap();
    assert_eq!(curves.len(), 1);
    let (du, dv) = spec.cell_size();
    let diag = (du * du + dv * dv).sqrt();
    let r = 5.5f64.sqrt();
    let worst = curves[0]
        .polyline
        .iter()
        .map(|p| ((p[0] * p[0] + p[1] * p[1]).sqrt() - r).abs())
        .fold(0.0, f64::max);
    assert!(worst < 2.0 * diag, "{worst}");
}
