//! Verification of the algebraic relations between the closed forms.
//!
//! Polynomial identities of degree at most four in each variable are checked
//! in exact integer arithmetic on the grid `{0, ..., 5}` per variable; six
//! nodes per axis exceed the degree, so agreement there is a proof. Relations
//! involving floating point (determinants, trigonometric reparametrizations)
//! are checked on seeded random samples or dense grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::model::{
    build_circular, eval_discriminants, eval_p, eval_q, eval_w, eval_w_expanded, secular_coeffs, strip_coords,
    Couplings, Hamiltonian4,
};
use crate::oracle::determinant;
use crate::topology::{DEFAULT_AC_RANGE, DEFAULT_B_RANGE};
use crate::{CouplingPoint, ExactPoint};

/// Seed for every randomized check.
pub const VERIFY_SEED: u64 = 0x5EED_0004;

/// Integer nodes per axis for exact proofs.
pub const PROOF_GRID: std::ops::RangeInclusive<i64> = 0..=5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    /// Exact equality on a unisolvent integer grid.
    Proved,
    /// Holds on every sampled point within tolerance.
    Holds,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub status: Status,
    /// First counterexample found, as coordinates.
    pub witness: Option<Vec<f64>>,
    /// Largest deviation observed (absolute for exact checks, relative or
    /// mismatch count otherwise; see `note`).
    pub detail: f64,
    #[serde(rename = "paper_ref")]
    pub reference: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IdentityResult {
    fn new(name: &str, reference: &str) -> Self {
        Self {
            name: name.into(),
            status: Status::Holds,
            witness: None,
            detail: 0.0,
            reference: reference.into(),
            note: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub checks: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fails)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Checks carrying an annotation (the printed-form discrepancy).
    pub fn flagged(&self) -> Vec<&IdentityResult> {
        self.checks.iter().filter(|c| c.note.is_some()).collect()
    }
}

/// A check run under a seed; deterministic checks ignore it.
type Check = fn(u64) -> IdentityResult;

pub const CHECKS: [(&str, Check); 8] = [
    ("b0_square", |_| verify_b0_square()),
    ("c0_forms", |_| verify_c0_forms()),
    ("factor_b1", |_| verify_factor_b1()),
    ("pseudo_hermiticity", verify_pseudo_hermiticity_seeded),
    ("secular_vs_charpoly", verify_secular_vs_charpoly_seeded),
    ("strip_equivalence", |_| verify_strip_equivalence()),
    ("w_forms", |_| verify_w_forms()),
    ("wpq_relation", |_| verify_wpq_relation()),
];

/// Run every check under [`VERIFY_SEED`]; the report is ordered by check name.
pub fn run_all() -> IdentityReport {
    run_all_seeded(VERIFY_SEED)
}

pub fn run_all_seeded(seed: u64) -> IdentityReport {
    let mut checks: Vec<IdentityResult> = CHECKS.par_iter().map(|(_, f)| f(seed)).collect();
    checks.sort_by(|x, y| x.name.cmp(&y.name));
    IdentityReport { seed, checks }
}

/// Compare two integer polynomials on `{0..5}^dim`.
pub fn prove_on_integer_grid(
    name: &str,
    reference: &str,
    dim: usize,
    lhs: impl Fn(&[i64]) -> i64,
    rhs: impl Fn(&[i64]) -> i64,
) -> IdentityResult {
    let mut res = IdentityResult::new(name, reference);
    res.status = Status::Proved;
    let nodes: Vec<i64> = PROOF_GRID.collect();
    let total = nodes.len().pow(dim as u32);
    let mut x = vec![0i64; dim];
    for flat in 0..total {
        let mut r = flat;
        for slot in x.iter_mut() {
            *slot = nodes[r % nodes.len()];
            r /= nodes.len();
        }
        let (l, rv) = (lhs(&x), rhs(&x));
        let dev = (l - rv).unsigned_abs() as f64;
        if dev > res.detail {
            res.detail = dev;
        }
        if l != rv && res.witness.is_none() {
            res.status = Status::Fails;
            res.witness = Some(x.iter().map(|&v| v as f64).collect());
        }
    }
    res
}

fn exact(a: i64, b: i64, c: i64) -> ExactPoint {
    Couplings { a, b, c }
}

pub fn verify_w_forms() -> IdentityResult {
    prove_on_integer_grid(
        "w_forms",
        "W compact (8+c^2-a^2)^2-4[16-(a+c)^2]b^2 vs expanded monomial form",
        3,
        |x| eval_w(&exact(x[0], x[1], x[2])),
        |x| eval_w_expanded(&exact(x[0], x[1], x[2])),
    )
}

pub fn verify_wpq_relation() -> IdentityResult {
    let mut r = prove_on_integer_grid(
        "wpq_relation",
        "domain inequalities W>0, Q>0, P>0 with S(s)=s^2-Ps+Q",
        3,
        |x| eval_w(&exact(x[0], x[1], x[2])),
        |x| {
            let p = exact(x[0], x[1], x[2]);
            let pv = eval_p(&p);
            pv * pv - 4 * eval_q(&p)
        },
    );
    r.reference.push_str("; W = P^2 - 4Q is derived, not stated in closed form");
    r
}

pub fn verify_factor_b1() -> IdentityResult {
    prove_on_integer_grid(
        "factor_b1",
        "W(a,1,c) = (a+c)(a^3 - c a^2 - 12 a - c^2 a + 20 c + c^3)",
        2,
        |x| eval_w(&exact(x[0], 1, x[1])),
        |x| {
            let (a, c) = (x[0], x[1]);
            (a + c) * (a * a * a - c * a * a - 12 * a - c * c * a + 20 * c + c * c * c)
        },
    )
}

pub fn verify_b0_square() -> IdentityResult {
    let mut r = prove_on_integer_grid(
        "b0_square",
        "W(a,0,c) = (8+c^2-a^2)^2, a sign-non-changing double zero",
        2,
        |x| eval_w(&exact(x[0], 0, x[1])),
        |x| {
            let s = 8 + x[1] * x[1] - x[0] * x[0];
            s * s
        },
    );
    // Non-negativity follows from the square; confirm on the grid as well.
    for a in PROOF_GRID {
        for c in PROOF_GRID {
            if eval_w(&exact(a, 0, c)) < 0 && r.status != Status::Fails {
                r.status = Status::Fails;
                r.witness = Some(vec![a as f64, 0.0, c as f64]);
            }
        }
    }
    r
}

/// Restricted forms at `c = 0` (exact), plus the admissible-`|b|` bound
/// tested with prefactors 1/2 and 1/4 against the sign of `W(a, b, 0)`.
pub fn verify_c0_forms() -> IdentityResult {
    let w0 = prove_on_integer_grid(
        "c0_forms",
        "",
        2,
        |x| eval_w(&exact(x[0], x[1], 0)),
        |x| {
            let (a, b) = (x[0], x[1]);
            (8 - a * a) * (8 - a * a) - 4 * (16 - a * a) * b * b
        },
    );
    let q0 = prove_on_integer_grid(
        "c0_forms",
        "",
        2,
        |x| eval_q(&exact(x[0], x[1], 0)),
        |x| {
            let (a, b) = (x[0], x[1]);
            (3 + b * b + a) * (3 + b * b - a)
        },
    );
    let p0 = prove_on_integer_grid(
        "c0_forms",
        "",
        2,
        |x| eval_p(&exact(x[0], x[1], 0)),
        |x| 10 - x[0] * x[0] - 2 * x[1] * x[1],
    );

    let mut r = IdentityResult::new(
        "c0_forms",
        "W, Q, P at c=0 and the bound |b| < k |8-a^2| / sqrt(16-a^2) with k = 1/2 vs printed 1/4",
    );
    for part in [&w0, &q0, &p0] {
        if part.status == Status::Fails {
            r.status = Status::Fails;
            r.witness = part.witness.clone();
            r.detail = part.detail;
            return r;
        }
    }

    let (half, half_witness) = c0_prefactor_mismatches(0.5);
    let (quarter, _) = c0_prefactor_mismatches(0.25);
    r.detail = half as f64;
    if half == 0 && quarter > 0 {
        r.status = Status::Holds;
        r.note = Some(format!(
            "printed-form mismatch: prefactor 1/4 disagrees with sign W(a,b,0) at {quarter} of {n} grid points; \
             prefactor 1/2 agrees at all of them",
            n = C0_GRID * C0_GRID
        ));
    } else {
        r.status = Status::Fails;
        r.witness = half_witness;
        r.note = Some(format!("prefactor 1/2: {half} mismatches, prefactor 1/4: {quarter} mismatches"));
    }
    r
}

const C0_GRID: usize = 200;

/// Mismatches between `W(a, b, 0) > 0` and the bound with prefactor `k`
/// on a 200x200 cell-centered grid over `(-3.9, 3.9) x (-2.3, 2.3)`.
/// Points with `W` numerically zero or `a^2 = 8` to round-off are skipped.
pub fn c0_prefactor_mismatches(k: f64) -> (usize, Option<Vec<f64>>) {
    let mut count = 0;
    let mut witness = None;
    for i in 0..C0_GRID {
        let a = -3.9 + (i as f64 + 0.5) * 7.8 / C0_GRID as f64;
        for j in 0..C0_GRID {
            let b = -2.3 + (j as f64 + 0.5) * 4.6 / C0_GRID as f64;
            let p = Couplings { a, b, c: 0.0 };
            let w = eval_w(&p);
            if w.abs() <= 1e-9 * (1.0 + p.norm_sq().powi(2)) {
                continue;
            }
            let bound = k * (8.0 - a * a).abs() / (16.0 - a * a).sqrt();
            if (w > 0.0) != (b.abs() < bound) {
                count += 1;
                witness.get_or_insert_with(|| vec![a, b, 0.0]);
            }
        }
    }
    (count, witness)
}

/// Uniform points in the default sampling box.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<CouplingPoint> {
    (0..n)
        .map(|_| Couplings {
            a: rng.gen_range(DEFAULT_AC_RANGE.0..DEFAULT_AC_RANGE.1),
            b: rng.gen_range(DEFAULT_B_RANGE.0..DEFAULT_B_RANGE.1),
            c: rng.gen_range(DEFAULT_AC_RANGE.0..DEFAULT_AC_RANGE.1),
        })
        .collect()
}

/// Relative deviation of `det(E I - H(p))` from `S(E^2)`, measured against
/// the magnitude of the terms of `S`.
pub fn secular_deviation(p: &CouplingPoint, e: f64) -> f64 {
    let h = build_circular(p).expect("finite point");
    let shifted = Hamiltonian4::from_rows(std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { e - h.entries[i][j] } else { -h.entries[i][j] })
    }));
    let det = determinant(&shifted);
    let s = secular_coeffs(p);
    let e2 = e * e;
    let scale = e2 * e2 + s.q1.abs() * e2 + s.q0.abs();
    (det - s.eval_energy(e)).abs() / scale
}

pub fn verify_secular_vs_charpoly() -> IdentityResult {
    verify_secular_vs_charpoly_seeded(VERIFY_SEED)
}

pub fn verify_secular_vs_charpoly_seeded(seed: u64) -> IdentityResult {
    let mut r = IdentityResult::new(
        "secular_vs_charpoly",
        "det(E I - H) = S(E^2) with S(s) = s^2 + (a^2+2b^2+c^2-10) s + q0",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in random_points(&mut rng, 100) {
        for _ in 0..20 {
            let e: f64 = rng.gen_range(-5.0..5.0);
            let dev = secular_deviation(&p, e);
            if dev > r.detail {
                r.detail = dev;
            }
            if dev >= 1e-10 && r.witness.is_none() {
                r.status = Status::Fails;
                r.witness = Some(vec![p.a, p.b, p.c, e]);
            }
        }
    }
    r
}

pub fn verify_pseudo_hermiticity() -> IdentityResult {
    verify_pseudo_hermiticity_seeded(VERIFY_SEED)
}

pub fn verify_pseudo_hermiticity_seeded(seed: u64) -> IdentityResult {
    let mut r = IdentityResult::new(
        "pseudo_hermiticity",
        "(P H)^T = P H with P = diag(1,-1,1,-1), T acting as transposition",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
    for p in random_points(&mut rng, 100) {
        let h = build_circular(&p).expect("finite point");
        let ph = Hamiltonian4::parity().matmul(&h);
        let t = ph.transpose();
        let dev = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (ph.entries[i][j] - t.entries[i][j]).abs())
            .fold(0.0, f64::max);
        r.detail = r.detail.max(dev);
        if dev != 0.0 && r.witness.is_none() {
            r.status = Status::Fails;
            r.witness = Some(vec![p.a, p.b, p.c]);
        }
    }
    r
}

/// Sign of `W` vs sign of `(1 + tau sin phi)^2 - b^2 cos^2 phi` inside the
/// strip `|a + c| < 4`.
pub fn verify_strip_equivalence() -> IdentityResult {
    let mut r = IdentityResult::new(
        "strip_equivalence",
        "W = 64[(1 + tau sin phi)^2 - b^2 cos^2 phi], c - a = 2 tau, c + a = 4 sin phi",
    );
    const N: usize = 100;
    let axis = |range: (f64, f64), i: usize| range.0 + (i as f64 + 0.5) * (range.1 - range.0) / N as f64;
    let mut checked = 0usize;
    for ia in 0..N {
        let a = axis(DEFAULT_AC_RANGE, ia);
        for ic in 0..N {
            let c = axis(DEFAULT_AC_RANGE, ic);
            if (a + c).abs() >= 4.0 - 1e-6 {
                continue;
            }
            let s = strip_coords(a, c).expect("inside strip");
            let (sin, cos) = s.phi.sin_cos();
            for ib in 0..N {
                let b = axis(DEFAULT_B_RANGE, ib);
                let p = Couplings { a, b, c };
                let w = eval_discriminants(&p).w;
                if w.abs() <= 1e-9 * (1.0 + p.norm_sq().powi(2)) {
                    continue;
                }
                let g = (1.0 + s.tau * sin).powi(2) - b * b * cos * cos;
                checked += 1;
                if (w > 0.0) != (g > 0.0) {
                    r.detail += 1.0;
                    if r.witness.is_none() {
                        r.status = Status::Fails;
                        r.witness = Some(vec![a, b, c]);
                    }
                }
            }
        }
    }
    r.reference.push_str(&format!(" ({checked} grid points)"));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        // (1,1,1): compact and expanded 16, P^2 - 4Q = 36 - 20
        let p = exact(1, 1, 1);
        assert_eq!((eval_w(&p), eval_w_expanded(&p)), (16, 16));
        assert_eq!(eval_p(&p).pow(2) - 4 * eval_q(&p), 16);
        let z = exact(0, 0, 0);
        assert_eq!(eval_p(&z).pow(2) - 4 * eval_q(&z), 64);
        // (0, sqrt5, 0): P = 0, Q = (-8)(-8) = 64, W = 64 - 320 = -256 = P^2 - 4Q
        let f = Couplings { a: 0.0, b: 5f64.sqrt(), c: 0.0 };
        let d = eval_discriminants(&f);
        assert!((d.w - (d.p * d.p - 4.0 * d.q)).abs() < 1e-12);
        assert!((d.w + 256.0).abs() < 1e-12);
    }

    #[test]
    fn factor_b1_spots() {
        let f = |a: i64, c: i64| (a + c) * (a * a * a - c * a * a - 12 * a - c * c * a + 20 * c + c * c * c);
        assert_eq!((eval_w(&exact(1, 1, -1)), f(1, -1)), (0, 0));
        assert_eq!((eval_w(&exact(2, 1, 1)), f(2, 1)), (-3, -3));
        assert_eq!((eval_w(&exact(0, 1, 0)), f(0, 0)), (0, 0));
    }

    #[test]
    fn b0_square_spots() {
        assert_eq!(eval_w(&exact(3, 0, 1)), 0);
        assert_eq!(eval_w(&exact(1, 0, 0)), 49);
        assert_eq!(eval_w(&exact(0, 0, 2)), 144);
    }

    #[test]
    fn c0_prefactor_spots() {
        // (0, 0.7): W > 0, 0.7 < 1 (k = 1/2) but 0.7 > 0.5 (k = 1/4).
        let w = eval_w(&Couplings { a: 0.0, b: 0.7, c: 0.0 });
        assert!(w > 0.0);
        assert!(eval_w(&Couplings { a: 0.0, b: 1.1, c: 0.0 }) < 0.0);
        let a = 8f64.sqrt();
        for k in [0.25, 0.5] {
            assert!(k * (8.0 - a * a).abs() / (16.0 - a * a).sqrt() < 1e-15);
        }
    }

    #[test]
    fn secular_spots() {
        let z = Couplings { a: 0.0, b: 0.0, c: 0.0 };
        assert_eq!(secular_coeffs(&z).eval_energy(2.0), -15.0);
        assert_eq!(secular_coeffs(&z).eval_energy(0.0), 9.0);
        assert!(secular_deviation(&z, 2.0) < 1e-15);
        let one = Couplings { a: 1.0, b: 1.0, c: 1.0 };
        assert_eq!(secular_coeffs(&one).eval_energy(1.0), 0.0);
        assert!(secular_deviation(&one, 1.0) < 1e-14);
    }

    #[test]
    fn strip_spots() {
        for (b, sign) in [(0.5, true), (1.5, false)] {
            let s = strip_coords(0.0f64, 0.0).unwrap();
            let g = (1.0 + s.tau * s.phi.sin()).powi(2) - b * b * s.phi.cos().powi(2);
            assert_eq!(g > 0.0, sign);
            assert_eq!(eval_w(&Couplings { a: 0.0, b, c: 0.0 }) > 0.0, sign);
        }
        let b = crate::model::c0_bound(2.0f64).unwrap();
        let s = strip_coords(2.0f64, 0.0).unwrap();
        let g = (1.0 + s.tau * s.phi.sin()).powi(2) - b * b * s.phi.cos().powi(2);
        assert!(g.abs() < 1e-6);
        assert!(eval_w(&Couplings { a: 2.0, b, c: 0.0 }).abs() < 1e-6);
    }

    #[test]
    fn tampered_form_is_caught() {
        let r = prove_on_integer_grid(
            "w_forms",
            "",
            3,
            |x| -eval_w(&exact(x[0], x[1], x[2])),
            |x| eval_w_expanded(&exact(x[0], x[1], x[2])),
        );
        assert_eq!(r.status, Status::Fails);
        assert_eq!(r.witness, Some(vec![0.0, 0.0, 0.0]));
        assert!(r.detail >= 128.0);
    }

    #[test]
    fn full_report() {
        let report = run_all();
        assert_eq!(report.checks.len(), 8);
        assert!(report.all_passed(), "{report:#?}");
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for n in ["w_forms", "wpq_relation", "factor_b1", "b0_square"] {
            assert_eq!(report.get(n).unwrap().status, Status::Proved, "{n}");
        }
        assert_eq!(report.flagged().len(), 1);
        assert_eq!(report.flagged()[0].name, "c0_forms");
        assert_eq!(run_all(), report);
    }
}
