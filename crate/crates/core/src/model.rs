//! Closed forms for the circular four-site lattice.
//!
//! The Hamiltonian couples neighbouring sites of a four-site ring with
//! antisymmetric real hoppings `b` (outer bonds), `c` (central bond) and `a`
//! (the bond closing the ring) on top of the fixed diagonal `(-3, -1, 1, 3)`.
//! Its spectrum is real and non-degenerate exactly when the three
//! discriminants `W`, `Q`, `P` are all positive.
//!
//! Polynomial quantities are generic over [`Ring`] so they can be evaluated
//! exactly (integers, rationals) or symbolically along a line
//! ([`crate::poly::Poly4`]); anything with a square root needs [`Real`].

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{classify, Spectrum};
use crate::scalar::{k, Real, Ring};

/// A point `(a, b, c)` of coupling space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Couplings<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Ring> Couplings<T> {
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        let p = Self { a, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_finite_scalar() && self.b.is_finite_scalar() && self.c.is_finite_scalar() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "non-finite coupling ({:?}, {:?}, {:?})",
                self.a, self.b, self.c
            )))
        }
    }

    pub fn norm_sq(&self) -> T {
        self.a * self.a + self.b * self.b + self.c * self.c
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> Couplings<U> {
        Couplings {
            a: f(self.a),
            b: f(self.b),
            c: f(self.c),
        }
    }
}

/// One of the three discriminants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    W,
    Q,
    P,
}

impl Factor {
    pub const ALL: [Factor; 3] = [Factor::W, Factor::Q, Factor::P];

    pub fn name(self) -> &'static str {
        match self {
            Factor::W => "W",
            Factor::Q => "Q",
            Factor::P => "P",
        }
    }
}

impl std::fmt::Display for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Factor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "W" | "w" => Ok(Factor::W),
            "Q" | "q" => Ok(Factor::Q),
            "P" | "p" => Ok(Factor::P),
            other => Err(Error::InvalidInput(format!("unknown factor {other:?}"))),
        }
    }
}

/// Dense real 4x4 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hamiltonian4<T> {
    pub entries: [[T; 4]; 4],
}

impl<T: Ring> Hamiltonian4<T> {
    pub fn from_rows(entries: [[T; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn diagonal(d: [T; 4]) -> Self {
        let mut entries = [[T::zero(); 4]; 4];
        for i in 0..4 {
            entries[i][i] = d[i];
        }
        Self { entries }
    }

    /// `diag(1, -1, 1, -1)`.
    pub fn parity() -> Self {
        Self::diagonal([k(1), k(-1), k(1), k(-1)])
    }

    pub fn transpose(&self) -> Self {
        Self {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| self.entries[j][i])),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        Self {
            entries: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..4).fold(T::zero(), |acc, m| acc + self.entries[i][m] * rhs.entries[m][j])
                })
            }),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// `(P H)^T == P H` with `P` the alternating parity.
    pub fn is_parity_pseudo_hermitian(&self) -> bool {
        Self::parity().matmul(self).is_symmetric()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_finite_scalar())
    }
}

impl<T: Real> Hamiltonian4<T> {
    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.entries
            .iter()
            .flatten()
            .fold(T::zero(), |acc, &x| acc + x * x)
            .sqrt()
    }
}

/// The values `(W, Q, P)` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantTriple<T> {
    pub w: T,
    pub q: T,
    pub p: T,
}

impl<T: Copy> DiscriminantTriple<T> {
    pub fn get(&self, f: Factor) -> T {
        match f {
            Factor::W => self.w,
            Factor::Q => self.q,
            Factor::P => self.p,
        }
    }
}

impl<T: Ring + PartialOrd> DiscriminantTriple<T> {
    /// Joint positivity: the defining inequalities of the reality domain.
    pub fn all_positive(&self) -> bool {
        self.w > T::zero() && self.q > T::zero() && self.p > T::zero()
    }
}

/// `S(s) = s^2 + q1 s + q0`, the characteristic polynomial in `s = E^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecularQuadratic<T> {
    pub q1: T,
    pub q0: T,
}

impl<T: Ring> SecularQuadratic<T> {
    pub fn eval(&self, s: T) -> T {
        s * s + self.q1 * s + self.q0
    }

    /// `S(E^2)`, i.e. the characteristic polynomial in the energy.
    pub fn eval_energy(&self, e: T) -> T {
        self.eval(e * e)
    }
}

/// Roots `s+`, `s-` of the secular quadratic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SRoots<T> {
    pub s_plus: Complex<T>,
    pub s_minus: Complex<T>,
}

/// Coordinates inside the strip `|a + c| < 4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripCoordinates<T> {
    /// `(c - a) / 2`
    pub tau: T,
    /// `arcsin((c + a) / 4)`, in `(-pi/2, pi/2)`
    pub phi: T,
}

impl<T: Real> StripCoordinates<T> {
    /// Inverse map back to `(a, c)`.
    pub fn to_ac(&self) -> (T, T) {
        let sum = k::<T>(4) * self.phi.sin();
        let diff = k::<T>(2) * self.tau;
        ((sum - diff) / k(2), (sum + diff) / k(2))
    }
}

/// Circular-lattice Hamiltonian: diagonal `(-3,-1,1,3)`, antisymmetric
/// hoppings `b` on bonds 1-2 and 3-4, `c` on 2-3, and `a` closing the ring
/// with `H[0][3] = -a`, `H[3][0] = a`.
pub fn build_circular<T: Ring>(p: &Couplings<T>) -> Result<Hamiltonian4<T>> {
    p.validate()?;
    Ok(circular_unchecked(p))
}

pub(crate) fn circular_unchecked<T: Ring>(p: &Couplings<T>) -> Hamiltonian4<T> {
    let z = T::zero();
    let Couplings { a, b, c } = *p;
    Hamiltonian4::from_rows([
        [k(-3), b, z, -a],
        [-b, k(-1), c, z],
        [z, -c, k(1), b],
        [a, z, -b, k(3)],
    ])
}

/// Open-chain (straight-line) Hamiltonian: the circular one with `a = 0`.
pub fn build_straight<T: Ring>(b: T, c: T) -> Result<Hamiltonian4<T>> {
    build_circular(&Couplings { a: T::zero(), b, c })
}

/// `diag(1, -1, 1, -1, ...)` of size `n`.
pub fn parity_matrix<T: Ring>(n: usize) -> Result<Vec<Vec<T>>> {
    if n == 0 {
        return Err(Error::InvalidInput("parity matrix of size 0".into()));
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, i % 2) {
                    (false, _) => T::zero(),
                    (true, 0) => T::one(),
                    (true, _) => -T::one(),
                })
                .collect()
        })
        .collect())
}

/// `W = (8 + c^2 - a^2)^2 - 4 [16 - (a + c)^2] b^2`
pub fn eval_w<T: Ring>(p: &Couplings<T>) -> T {
    let Couplings { a, b, c } = *p;
    let head = k::<T>(8) + c * c - a * a;
    let s = a + c;
    head * head - k::<T>(4) * (k::<T>(16) - s * s) * b * b
}

/// `Q = [(a + 3)(c - 1) - b^2] [(a - 3)(c + 1) - b^2]`
pub fn eval_q<T: Ring>(p: &Couplings<T>) -> T {
    let Couplings { a, b, c } = *p;
    let b2 = b * b;
    ((a + k(3)) * (c - k(1)) - b2) * ((a - k(3)) * (c + k(1)) - b2)
}

/// `P = 10 - a^2 - 2 b^2 - c^2`
pub fn eval_p<T: Ring>(p: &Couplings<T>) -> T {
    let Couplings { a, b, c } = *p;
    k::<T>(10) - a * a - k::<T>(2) * b * b - c * c
}

pub fn eval_factor<T: Ring>(p: &Couplings<T>, f: Factor) -> T {
    match f {
        Factor::W => eval_w(p),
        Factor::Q => eval_q(p),
        Factor::P => eval_p(p),
    }
}

pub fn eval_discriminants<T: Ring>(p: &Couplings<T>) -> DiscriminantTriple<T> {
    DiscriminantTriple {
        w: eval_w(p),
        q: eval_q(p),
        p: eval_p(p),
    }
}

/// Fully expanded monomial form of `W`.
pub fn eval_w_expanded<T: Ring>(p: &Couplings<T>) -> T {
    let Couplings { a, b, c } = *p;
    let (a2, b2, c2) = (a * a, b * b, c * c);
    k::<T>(64) + k::<T>(16) * c2 - k::<T>(64) * b2 - k::<T>(16) * a2
        + c2 * c2
        + k::<T>(4) * c2 * b2
        - k::<T>(2) * c2 * a2
        + k::<T>(4) * b2 * a2
        + a2 * a2
        + k::<T>(8) * c * a * b2
}

/// Coefficients of the secular quadratic, written out monomial by monomial.
pub fn secular_coeffs<T: Ring>(p: &Couplings<T>) -> SecularQuadratic<T> {
    let Couplings { a, b, c } = *p;
    let (a2, b2, c2) = (a * a, b * b, c * c);
    SecularQuadratic {
        q1: k::<T>(-10) + c2 + k::<T>(2) * b2 + a2,
        q0: k::<T>(9) + k::<T>(6) * b2 - k::<T>(9) * c2 + b2 * b2 - k::<T>(2) * c * a * b2 - a2
            + c2 * a2,
    }
}

/// `s± = (P ± sqrt(W)) / 2`, principal complex branch when `W < 0`.
pub fn s_roots<T: Real>(p: &Couplings<T>) -> SRoots<T> {
    let d = eval_discriminants(p);
    let root_w = Complex::new(d.w, T::zero()).sqrt();
    let half_p = Complex::new(d.p / k(2), T::zero());
    let half = T::lit(0.5);
    SRoots {
        s_plus: half_p + root_w * half,
        s_minus: half_p - root_w * half,
    }
}

/// The four energies `±sqrt(s+)`, `±sqrt(s-)` with their classification.
pub fn energies<T: Real>(p: &Couplings<T>) -> Spectrum<T> {
    let r = s_roots(p);
    let (e_plus, e_minus) = (r.s_plus.sqrt(), r.s_minus.sqrt());
    classify([e_plus, -e_plus, e_minus, -e_minus])
}

/// `1e-9 (1 + |p|^4)`: how close to zero a discriminant must be to count as
/// lying on its boundary surface.
pub fn boundary_tolerance<T: Real>(p: &Couplings<T>) -> T {
    let n2 = p.norm_sq();
    T::lit(1e-9) * (T::one() + n2 * n2)
}

/// Limiting energies on one of the three boundary surfaces.
///
/// * `W = 0`: two doubly degenerate levels `±sqrt(P/2)` (needs `P > 0`)
/// * `Q = 0`: `{0, 0, +sqrt(P), -sqrt(P)}` (needs `P >= 0`)
/// * `P = 0`: all four energies vanish
pub fn limit_energies<T: Real>(p: &Couplings<T>, boundary: Factor) -> Result<Vec<T>> {
    p.validate()?;
    let d = eval_discriminants(p);
    let tol = boundary_tolerance(p);
    let value = d.get(boundary);
    if value.abs() > tol {
        return Err(Error::Precondition(format!(
            "{boundary} = {value:e} is not zero within {tol:e}"
        )));
    }
    let z = T::zero();
    match boundary {
        Factor::W => {
            if d.p <= z {
                return Err(Error::Domain(format!("W-boundary limit needs P > 0, got {:e}", d.p)));
            }
            let e = (d.p / k(2)).sqrt();
            Ok(vec![e, e, -e, -e])
        }
        Factor::Q => {
            if d.p < -tol {
                return Err(Error::Domain(format!("Q-boundary limit needs P >= 0, got {:e}", d.p)));
            }
            let e = d.p.max(z).sqrt();
            Ok(vec![z, z, e, -e])
        }
        Factor::P => Ok(vec![z; 4]),
    }
}

/// Strip coordinates for `|a + c| < 4`, `None` outside the strip.
pub fn strip_coords<T: Real>(a: T, c: T) -> Option<StripCoordinates<T>> {
    let sum = a + c;
    if sum.abs() >= k(4) {
        return None;
    }
    Some(StripCoordinates {
        tau: (c - a) / k(2),
        phi: (sum / k(4)).asin(),
    })
}

/// Sign test for `W` through the strip reparametrization.
///
/// Outside the strip `W` is a sum of a square and a non-negative term, so it
/// is positive except where both vanish; that case is settled by direct
/// evaluation. Inside, `W = 64 [(1 + tau sin phi)^2 - b^2 cos^2 phi]`.
pub fn w_positive_via_strip<T: Real>(p: &Couplings<T>) -> bool {
    match strip_coords(p.a, p.c) {
        None => eval_w(p) > T::zero(),
        Some(s) => {
            let (sin, cos) = s.phi.sin_cos();
            p.b.abs() < (T::one() + s.tau * sin).abs() / cos
        }
    }
}

/// Largest `|b|` with `W(a, b, 0) > 0`: `|8 - a^2| / (2 sqrt(16 - a^2))`.
pub fn c0_bound<T: Real>(a: T) -> Result<T> {
    let a2 = a * a;
    if !a.is_finite() || a2 >= k(16) {
        return Err(Error::Domain(format!("c0_bound needs a^2 < 16, got a = {a}")));
    }
    Ok((k::<T>(8) - a2).abs() / (k::<T>(2) * (k::<T>(16) - a2).sqrt()))
}
