//! Frozen spectra. Expected values come from block decompositions worked by
//! hand, not from the closed forms under test.

use pt_horizon::model::{build_circular, build_straight, energies, limit_energies};
use pt_horizon::oracle::{eigenpair_residual, eigenvalues};
use pt_horizon::{CouplingPoint, Factor, SpectrumClass};

fn sorted(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn oracle(a: f64, b: f64, c: f64) -> pt_horizon::SpectrumF64 {
    eigenvalues(&build_circular(&CouplingPoint { a, b, c }).unwrap()).unwrap()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < tol, "{got:?} vs {want:?}");
    }
}

#[test]
fn c0_b0_splits_into_two_blocks() {
    // Sites {1,4}: [[-3,-a],[a,3]] -> +-sqrt(9-a^2); sites {2,3}: +-1.
    for a in [0.5, 1.7, 2.9] {
        let s = oracle(a, 0.0, 0.0);
        assert_eq!(s.classification, SpectrumClass::RealSimple);
        let e = (9.0f64 - a * a).sqrt();
        assert_close(&sorted(s.values.iter().map(|z| z.re)), &sorted([-e, e, -1.0, 1.0]), 1e-12);
    }
    let fish = sorted(oracle(2.9, 0.0, 0.0).values.iter().map(|z| z.re));
    assert_close(&fish, &[-1.0, -0.768_114_574_786_860_9, 0.768_114_574_786_860_9, 1.0], 1e-12);
}

#[test]
fn a0_b0_blocks() {
    // Sites {2,3}: [[-1,c],[-c,1]] -> +-sqrt(1-c^2); sites {1,4}: +-3.
    let s = oracle(0.0, 0.0, 0.6);
    assert_close(&sorted(s.values.iter().map(|z| z.re)), &[-3.0, -0.8, 0.8, 3.0], 1e-12);
    let s = oracle(0.0, 0.0, 1.5);
    assert_eq!(s.classification, SpectrumClass::Complex);
}

#[test]
fn pinch_and_corner_limits() {
    let s = oracle(8f64.sqrt(), 0.0, 0.0);
    assert_eq!(s.classification, SpectrumClass::RealDegenerate);
    assert_close(&sorted(s.values.iter().map(|z| z.re)), &[-1.0, -1.0, 1.0, 1.0], 1e-7);

    let s = oracle(3.0, 0.0, 0.0);
    assert_close(&sorted(s.values.iter().map(|z| z.re)), &[-1.0, 0.0, 0.0, 1.0], 1e-8);

    // Rectangle corner: every discriminant vanishes, all energies collapse.
    let s = oracle(3.0, 0.0, -1.0);
    assert!(s.values.iter().all(|z| z.norm() < 1e-6), "{:?}", s.values);
    let lim = limit_energies(&CouplingPoint { a: 3.0, b: 0.0, c: -1.0 }, Factor::P).unwrap();
    assert_eq!(lim, vec![0.0; 4]);
}

#[test]
fn closed_form_agrees_with_oracle() {
    for (a, b, c) in [(1.0, 1.0, 1.0), (0.3, -0.7, 0.2), (-1.2, 0.4, 0.9), (0.0, 2.0, 0.0)] {
        let p = CouplingPoint { a, b, c };
        let closed = energies(&p);
        let num = oracle(a, b, c);
        assert_eq!(closed.classification, num.classification, "{p:?}");
        for z in closed.values {
            assert!(num.values.iter().any(|w| (w - z).norm() < 1e-9), "{p:?}: {z}");
        }
    }
    let s = oracle(1.0, 1.0, 1.0);
    let r5 = 5f64.sqrt();
    assert_close(&sorted(s.values.iter().map(|z| z.re)), &[-r5, -1.0, 1.0, r5], 1e-12);
}

#[test]
fn straight_line_model_is_a0_slice() {
    let h = build_straight(0.5, 0.5).unwrap();
    assert_eq!(h, build_circular(&CouplingPoint { a: 0.0, b: 0.5, c: 0.5 }).unwrap());
    let s = eigenvalues(&h).unwrap();
    for z in s.values {
        assert!(eigenpair_residual(&h, z) < 1e-12);
    }
}
