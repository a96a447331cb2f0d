use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{circular_unchecked, eval_factor, Couplings, Factor};
use crate::oracle::eigenvalues;
use crate::poly::Poly4;
use crate::CouplingPoint;

/// Relative floor below which a discriminant counts as numerically zero:
/// `1e-12 (1 + |p|^4)`. Keeps float round-off (for instance
/// `W(sqrt 8, 0, 0) ~ 4e-30`) from admitting points that lie on a boundary.
pub const ZERO_TOL_REL: f64 = 1e-12;

pub fn zero_tolerance(norm_sq: f64) -> f64 {
    ZERO_TOL_REL * (1.0 + norm_sq * norm_sq)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Real and non-degenerate spectrum: `W, Q, P > eta`.
    #[default]
    StrictSimple,
    /// Real spectrum, degeneracies allowed: zeros of `W` that the oracle
    /// confirms as real (double) levels are admitted.
    RealOnly,
}

/// Which discriminants take part in membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorSet {
    pub w: bool,
    pub q: bool,
    pub p: bool,
}

impl Default for FactorSet {
    fn default() -> Self {
        Self::ALL
    }
}

impl FactorSet {
    pub const ALL: Self = Self { w: true, q: true, p: true };

    pub fn only(f: Factor) -> Self {
        Self {
            w: f == Factor::W,
            q: f == Factor::Q,
            p: f == Factor::P,
        }
    }

    pub fn contains(&self, f: Factor) -> bool {
        match f {
            Factor::W => self.w,
            Factor::Q => self.q,
            Factor::P => self.p,
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Factor> {
        Factor::ALL.into_iter().filter(move |f| self.contains(*f))
    }
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("margin eta must be finite and >= 0, got {eta}")))
    }
}

/// Membership of `p` in the domain under margin `eta`.
pub fn membership(p: &CouplingPoint, eta: f64, mode: Mode) -> Result<bool> {
    check_eta(eta)?;
    p.validate()?;
    Ok(membership_with(p, eta, mode, FactorSet::ALL))
}

/// Membership restricted to a subset of the discriminants. `eta` is assumed
/// validated.
pub fn membership_with(p: &CouplingPoint, eta: f64, mode: Mode, factors: FactorSet) -> bool {
    let floor = eta + zero_tolerance(p.norm_sq());
    let mut w_failed = false;
    for f in factors.iter() {
        if eval_factor(p, f) <= floor {
            if f == Factor::W && mode == Mode::RealOnly {
                w_failed = true;
            } else {
                return false;
            }
        }
    }
    if !w_failed {
        return true;
    }
    eval_factor(p, Factor::W) >= -floor && spectrum_is_real(p)
}

fn spectrum_is_real(p: &CouplingPoint) -> bool {
    eigenvalues(&circular_unchecked(p))
        .map(|s| s.classification.is_real())
        .unwrap_or(false)
}

/// Restriction of a discriminant to `p1 + t (p2 - p1)` as a polynomial in `t`.
pub(crate) fn restrict(p1: &CouplingPoint, p2: &CouplingPoint, f: Factor) -> Poly4<f64> {
    let line = Couplings {
        a: Poly4::linear(p1.a, p2.a - p1.a),
        b: Poly4::linear(p1.b, p2.b - p1.b),
        c: Poly4::linear(p1.c, p2.c - p1.c),
    };
    eval_factor(&line, f)
}

/// Whether the straight segment between two member points stays inside the
/// domain (all three discriminants above `eta` on the closed segment).
pub fn segment_connected(p1: &CouplingPoint, p2: &CouplingPoint, eta: f64) -> bool {
    segment_connected_with(p1, p2, eta, Mode::StrictSimple, FactorSet::ALL)
}

/// Segment test with explicit mode and factor subset.
///
/// Each discriminant is restricted exactly to the segment (degree <= 4 in the
/// line parameter) and its minimum over `[0, 1]` taken from the endpoints and
/// the real critical points. In [`Mode::RealOnly`] a `W` minimum that only
/// touches zero is accepted when the oracle reports a real spectrum there.
pub fn segment_connected_with(
    p1: &CouplingPoint,
    p2: &CouplingPoint,
    eta: f64,
    mode: Mode,
    factors: FactorSet,
) -> bool {
    let n2 = p1.norm_sq().max(p2.norm_sq());
    let floor = eta + zero_tolerance(n2);
    for f in factors.iter() {
        let poly = restrict(p1, p2, f);
        let (min, _) = poly.min_on_interval(0.0, 1.0);
        if min > floor {
            continue;
        }
        if !(mode == Mode::RealOnly && f == Factor::W) {
            return false;
        }
        let lerp = |t: f64| Couplings {
            a: p1.a + t * (p2.a - p1.a),
            b: p1.b + t * (p2.b - p1.b),
            c: p1.c + t * (p2.c - p1.c),
        };
        let touches_real = poly
            .extremal_candidates(0.0, 1.0)
            .into_iter()
            .filter(|&t| poly.eval(t) <= floor)
            .all(|t| poly.eval(t) >= -floor && spectrum_is_real(&lerp(t)));
        if !touches_real {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64, b: f64, c: f64) -> CouplingPoint {
        Couplings::new(a, b, c).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(membership(&pt(0.0, 0.0, 0.0), 0.0, Mode::StrictSimple).unwrap());
        let pinch = pt(8f64.sqrt(), 0.0, 0.0);
        assert!(!membership(&pinch, 0.0, Mode::StrictSimple).unwrap());
        assert!(membership(&pinch, 0.0, Mode::RealOnly).unwrap());
        let outside = pt(0.0, 5f64.sqrt(), 0.0);
        for eta in [0.0, 1e-9, 1e-3] {
            assert!(!membership(&outside, eta, Mode::StrictSimple).unwrap());
            assert!(!membership(&outside, eta, Mode::RealOnly).unwrap());
        }
    }

    #[test]
    fn negative_eta_rejected() {
        assert!(matches!(membership(&pt(0.0, 0.0, 0.0), -1e-3, Mode::StrictSimple), Err(Error::InvalidInput(_))));
        assert!(membership(&pt(0.0, 0.0, 0.0), f64::NAN, Mode::StrictSimple).is_err());
    }

    #[test]
    fn restriction_matches_pointwise_evaluation() {
        let (p1, p2) = (pt(0.3, -1.2, 2.0), pt(-1.1, 0.4, 0.5));
        for f in Factor::ALL {
            let poly = restrict(&p1, &p2, f);
            for t in [0.0, 0.25, 0.6, 1.0] {
                let q = pt(p1.a + t * (p2.a - p1.a), p1.b + t * (p2.b - p1.b), p1.c + t * (p2.c - p1.c));
                let direct = eval_factor(&q, f);
                assert!((poly.eval(t) - direct).abs() < 1e-12 * (1.0 + direct.abs()), "{f} at {t}");
            }
        }
    }

    #[test]
    fn segment_examples() {
        let r8 = 8f64.sqrt();
        assert!(!segment_connected(&pt(r8 - 0.01, 0.0, 0.0), &pt(r8 + 0.01, 0.0, 0.0), 0.0));
        assert!(segment_connected(&pt(0.0, 0.0, 0.0), &pt(0.1, 0.0, 0.0), 0.0));
        assert!(segment_connected(&pt(2.85, 0.0, 0.0), &pt(2.95, 0.0, 0.0), 0.0));
        assert!(!segment_connected(&pt(2.80, 0.0, 0.0), &pt(2.90, 0.0, 0.0), 0.0));
    }

    #[test]
    fn real_only_bridges_double_zero() {
        let r8 = 8f64.sqrt();
        let (p1, p2) = (pt(r8 - 0.01, 0.0, 0.0), pt(r8 + 0.01, 0.0, 0.0));
        assert!(segment_connected_with(&p1, &p2, 0.0, Mode::RealOnly, FactorSet::ALL));
        // A genuine sign change of W is never bridged.
        let (p1, p2) = (pt(0.0, 0.5, 0.0), pt(0.0, 1.5, 0.0));
        assert!(!segment_connected_with(&p1, &p2, 0.0, Mode::RealOnly, FactorSet::ALL));
    }

    #[test]
    fn factor_subsets() {
        // (0, 1.5, 0) violates W only.
        let p = pt(0.0, 1.5, 0.0);
        assert!(!membership_with(&p, 0.0, Mode::StrictSimple, FactorSet::ALL));
        assert!(membership_with(&p, 0.0, Mode::StrictSimple, FactorSet::only(Factor::P)));
        assert!(membership_with(&p, 0.0, Mode::StrictSimple, FactorSet::only(Factor::Q)));
        assert_eq!(FactorSet::only(Factor::Q).iter().collect::<Vec<_>>(), vec![Factor::Q]);
    }
}
