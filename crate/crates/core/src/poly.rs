//! Univariate polynomials of degree at most four.
//!
//! Every discriminant of the four-site model has total degree four, so its
//! restriction to a line, and the characteristic polynomial of a 4x4 matrix,
//! fit in five coefficients. [`Poly4`] is itself a [`Ring`], which lets the
//! closed forms in [`crate::model`] be evaluated symbolically along a segment.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{k, Real, Ring};

/// `coeffs[i]` multiplies `x^i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Poly4<T> {
    pub coeffs: [T; 5],
}

impl<T: Ring> Poly4<T> {
    pub fn new(coeffs: [T; 5]) -> Self {
        Self { coeffs }
    }

    pub fn constant(v: T) -> Self {
        let mut coeffs = [T::zero(); 5];
        coeffs[0] = v;
        Self { coeffs }
    }

    /// `offset + slope * x`
    pub fn linear(offset: T, slope: T) -> Self {
        let mut coeffs = [T::zero(); 5];
        coeffs[0] = offset;
        coeffs[1] = slope;
        Self { coeffs }
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::linear(T::zero(), T::one())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != T::zero())
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x + *c)
    }

    pub fn derivative(&self) -> Self {
        let mut coeffs = [T::zero(); 5];
        for i in 1..5 {
            coeffs[i - 1] = self.coeffs[i] * k(i as i32);
        }
        Self { coeffs }
    }

    /// `true` when all odd-power coefficients vanish.
    pub fn is_even(&self) -> bool {
        self.coeffs[1] == T::zero() && self.coeffs[3] == T::zero()
    }
}

impl<T: Real> Poly4<T> {
    /// Sum of absolute coefficient values; bounds `|p(x)|` on `[-1, 1]`.
    pub fn magnitude(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.abs())
    }

    /// Minimum of the polynomial over `[lo, hi]`, together with its argument.
    pub fn min_on_interval(&self, lo: T, hi: T) -> (T, T) {
        self.extremal_candidates(lo, hi)
            .into_iter()
            .map(|x| (self.eval(x), x))
            .fold((T::infinity(), lo), |best, cand| if cand.0 < best.0 { cand } else { best })
    }

    /// The endpoints plus every real critical point inside `[lo, hi]`.
    ///
    /// Critical points are isolated through the roots of the second
    /// derivative (closed-form quadratic) and refined by bisection on each
    /// monotone piece of the first derivative.
    pub fn extremal_candidates(&self, lo: T, hi: T) -> Vec<T> {
        let d1 = self.derivative();
        let d2 = d1.derivative();

        let mut knots = vec![lo];
        for r in quadratic_real_roots(d2.coeffs[0], d2.coeffs[1], d2.coeffs[2]) {
            if r > lo && r < hi {
                knots.push(r);
            }
        }
        knots.push(hi);
        knots.sort_by(|x, y| x.partial_cmp(y).expect("finite knots"));

        let mut out = vec![lo, hi];
        for w in knots.windows(2) {
            if let Some(r) = bisect_sign_change(&d1, w[0], w[1]) {
                out.push(r);
            }
        }
        out
    }
}

/// Real roots of `c0 + c1 x + c2 x^2`, degenerate cases included.
fn quadratic_real_roots<T: Real>(c0: T, c1: T, c2: T) -> Vec<T> {
    if c2 == T::zero() {
        if c1 == T::zero() {
            return Vec::new();
        }
        return vec![-c0 / c1];
    }
    let disc = c1 * c1 - k::<T>(4) * c2 * c0;
    if disc < T::zero() {
        return Vec::new();
    }
    // Cancellation-free form.
    let sq = disc.sqrt();
    let q = -(c1 + c1.signum() * sq) / k(2);
    let mut roots = Vec::with_capacity(2);
    if q != T::zero() {
        roots.push(q / c2);
        roots.push(c0 / q);
    } else {
        roots.push(T::zero());
    }
    roots
}

/// Root of `p` in `[a, b]` when `p` changes sign there (`p` assumed monotone).
fn bisect_sign_change<T: Real>(p: &Poly4<T>, a: T, b: T) -> Option<T> {
    let (mut lo, mut hi) = (a, b);
    let (flo, fhi) = (p.eval(lo), p.eval(hi));
    if flo == T::zero() {
        return Some(lo);
    }
    if fhi == T::zero() {
        return Some(hi);
    }
    if (flo > T::zero()) == (fhi > T::zero()) {
        return None;
    }
    let rising = fhi > T::zero();
    for _ in 0..200 {
        let mid = (lo + hi) / k(2);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == T::zero() {
            return Some(mid);
        }
        if (fm > T::zero()) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some((lo + hi) / k(2))
}

impl<T: Ring> Add for Poly4<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            coeffs: std::array::from_fn(|i| self.coeffs[i] + rhs.coeffs[i]),
        }
    }
}

impl<T: Ring> Sub for Poly4<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            coeffs: std::array::from_fn(|i| self.coeffs[i] - rhs.coeffs[i]),
        }
    }
}

impl<T: Ring> Neg for Poly4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.map(|c| -c),
        }
    }
}

impl<T: Ring> Mul for Poly4<T> {
    type Output = Self;

    /// Product truncated at degree four. Callers only form products whose
    /// exact degree stays within that bound; debug builds check it.
    fn mul(self, rhs: Self) -> Self {
        let mut coeffs = [T::zero(); 5];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == T::zero() {
                continue;
            }
            for (j, &y) in rhs.coeffs.iter().enumerate() {
                if i + j < 5 {
                    coeffs[i + j] = coeffs[i + j] + x * y;
                } else {
                    debug_assert!(y == T::zero(), "degree overflow in Poly4 product");
                }
            }
        }
        Self { coeffs }
    }
}

impl<T: Ring> Zero for Poly4<T> {
    fn zero() -> Self {
        Self::constant(T::zero())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == T::zero())
    }
}

impl<T: Ring> One for Poly4<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Ring> Ring for Poly4<T> {
    fn from_i32(v: i32) -> Self {
        Self::constant(T::from_i32(v))
    }

    fn is_finite_scalar(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite_scalar())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_eval() {
        // (1 + x)^4 = 1 + 4x + 6x^2 + 4x^3 + x^4
        let p = Poly4::<i64>::linear(1, 1);
        let q = p * p * p * p;
        assert_eq!(q.coeffs, [1, 4, 6, 4, 1]);
        assert_eq!(q.eval(2), 81);
        assert_eq!(q.derivative().coeffs, [4, 12, 12, 4, 0]);
        assert_eq!(q.degree(), Some(4));
        assert_eq!(Poly4::<i64>::zero().degree(), None);
    }

    #[test]
    fn min_of_double_root_is_zero() {
        // (x - 0.5)^2 on [0,1]
        let p = Poly4::<f64>::linear(-0.5, 1.0);
        let q = p * p;
        let (m, at) = q.min_on_interval(0.0, 1.0);
        assert!(m.abs() < 1e-15);
        assert!((at - 0.5).abs() < 1e-8);
    }

    #[test]
    fn min_of_quartic_interior() {
        // x^4 - x^2 has minima at x = +-1/sqrt(2), value -1/4.
        let p = Poly4::<f64>::new([0.0, 0.0, -1.0, 0.0, 1.0]);
        let (m, at) = p.min_on_interval(0.0, 1.0);
        assert!((m + 0.25).abs() < 1e-14);
        assert!((at - 0.5f64.sqrt()).abs() < 1e-7);
        let (m, _) = p.min_on_interval(-1.0, -0.9);
        // monotone piece, min at the endpoint -0.9
        assert!((m - (0.9f64.powi(4) - 0.81)).abs() < 1e-14);
    }

    #[test]
    fn min_at_endpoint_for_monotone() {
        let p = Poly4::<f64>::linear(3.0, -2.0);
        assert_eq!(p.min_on_interval(0.0, 1.0), (1.0, 1.0));
    }
}
