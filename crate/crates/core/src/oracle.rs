//! Ground-truth spectra for arbitrary real 4x4 matrices.
//!
//! Nothing here uses the secular quadratic or the closed-form energies of
//! [`crate::model`]: eigenvalues come from a Householder reduction to upper
//! Hessenberg form followed by Francis double-shift QR iteration, and the
//! characteristic polynomial from a direct Leibniz expansion.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{circular_unchecked, Couplings, Hamiltonian4};
use crate::poly::Poly4;
use crate::scalar::{k, Real, Ring};

/// Total QR sweeps allowed before giving up.
pub const MAX_SWEEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpectrumClass {
    RealSimple,
    RealDegenerate,
    Complex,
}

impl SpectrumClass {
    pub fn is_real(self) -> bool {
        self != SpectrumClass::Complex
    }
}

/// Four eigenvalues with their reality/degeneracy verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub values: [Complex<T>; 4],
    pub classification: SpectrumClass,
    /// Smallest pairwise distance among `values`.
    pub min_gap: T,
}

impl<T: Real> Spectrum<T> {
    pub fn spectral_radius(&self) -> T {
        self.values.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Values ordered by `(|Re|, |Im|, Re, Im)`; ±-partners end up adjacent.
    pub fn sorted_by_modulus(&self) -> [Complex<T>; 4] {
        let mut v = self.values;
        v.sort_by(|x, y| {
            let key = |z: &Complex<T>| (z.re.abs(), z.im.abs(), z.re, z.im);
            key(x).partial_cmp(&key(y)).unwrap_or(std::cmp::Ordering::Equal)
        });
        v
    }
}

/// Classify four eigenvalues.
///
/// Complex if any `|Im| > tol_im`, otherwise RealDegenerate if the minimum
/// pairwise gap is below `tol_gap`, otherwise RealSimple, where
/// `tol_im = tol (1 + rho)`, `tol_gap = 10 tol (1 + rho)` and `rho` is the
/// spectral radius.
pub fn classify<T: Real>(values: [Complex<T>; 4]) -> Spectrum<T> {
    let rho = values.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let base = T::lit(T::CLASSIFY_TOL) * (T::one() + rho);
    let tol_im = base;
    let tol_gap = base * k(10);

    let mut min_gap = T::infinity();
    for i in 0..4 {
        for j in i + 1..4 {
            min_gap = min_gap.min((values[i] - values[j]).norm());
        }
    }

    let classification = if values.iter().any(|z| z.im.abs() > tol_im) {
        SpectrumClass::Complex
    } else if min_gap < tol_gap {
        SpectrumClass::RealDegenerate
    } else {
        SpectrumClass::RealSimple
    };
    Spectrum {
        values,
        classification,
        min_gap,
    }
}

/// Monic quartic `det(E I - H)`, coefficients indexed by power of `E`.
pub type QuarticPoly<T> = Poly4<T>;

/// `det(E I - H)` by Leibniz expansion over polynomial entries. Exact for
/// integer and rational matrices.
pub fn char_poly<T: Ring>(h: &Hamiltonian4<T>) -> QuarticPoly<T> {
    let m: [[Poly4<T>; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let slope = if i == j { T::one() } else { T::zero() };
            Poly4::linear(-h.entries[i][j], slope)
        })
    });
    leibniz_det(&m)
}

fn leibniz_det<R: Ring>(m: &[[R; 4]; 4]) -> R {
    let mut total = R::zero();
    for perm in PERMUTATIONS_4 {
        let mut term = R::one();
        for (row, &col) in perm.0.iter().enumerate() {
            term = term * m[row][col];
        }
        total = if perm.1 { total + term } else { total - term };
    }
    total
}

/// All permutations of `0..4` with their parity (`true` = even).
const PERMUTATIONS_4: [([usize; 4], bool); 24] = [
    ([0, 1, 2, 3], true),
    ([0, 1, 3, 2], false),
    ([0, 2, 1, 3], false),
    ([0, 2, 3, 1], true),
    ([0, 3, 1, 2], true),
    ([0, 3, 2, 1], false),
    ([1, 0, 2, 3], false),
    ([1, 0, 3, 2], true),
    ([1, 2, 0, 3], true),
    ([1, 2, 3, 0], false),
    ([1, 3, 0, 2], false),
    ([1, 3, 2, 0], true),
    ([2, 0, 1, 3], true),
    ([2, 0, 3, 1], false),
    ([2, 1, 0, 3], false),
    ([2, 1, 3, 0], true),
    ([2, 3, 0, 1], true),
    ([2, 3, 1, 0], false),
    ([3, 0, 1, 2], false),
    ([3, 0, 2, 1], true),
    ([3, 1, 0, 2], true),
    ([3, 1, 2, 0], false),
    ([3, 2, 0, 1], false),
    ([3, 2, 1, 0], true),
];

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<T: Real>(h: &Hamiltonian4<T>) -> T {
    let mut a = h.entries;
    let mut det = T::one();
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det = det * a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for j in col..4 {
                a[row][j] = a[row][j] - f * a[col][j];
            }
        }
    }
    det
}

/// All four eigenvalues of `h`, classified.
pub fn eigenvalues<T: Real>(h: &Hamiltonian4<T>) -> Result<Spectrum<T>> {
    if !h.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut a = h.entries;
    reduce_to_hessenberg(&mut a);
    let values = hessenberg_qr(a)?;
    Ok(classify(values))
}

/// `true` iff the circular Hamiltonian at `p` has a real, simple spectrum.
pub fn in_domain_oracle<T: Real>(p: &Couplings<T>) -> Result<bool> {
    p.validate()?;
    let spec = eigenvalues(&circular_unchecked(p))?;
    Ok(spec.classification == SpectrumClass::RealSimple)
}

/// Householder reduction to upper Hessenberg form, in place.
fn reduce_to_hessenberg<T: Real>(a: &mut [[T; 4]; 4]) {
    const N: usize = 4;
    for m in 1..N - 1 {
        let scale = (m..N).fold(T::zero(), |s, i| s + a[i][m - 1].abs());
        if scale == T::zero() {
            continue;
        }
        let mut u = [T::zero(); N];
        let mut h = T::zero();
        for i in (m..N).rev() {
            u[i] = a[i][m - 1] / scale;
            h = h + u[i] * u[i];
        }
        let mut g = h.sqrt();
        if u[m] > T::zero() {
            g = -g;
        }
        h = h - u[m] * g;
        u[m] = u[m] - g;

        // a <- (I - u u^T / h) a
        for j in m..N {
            let f = (m..N).fold(T::zero(), |s, i| s + u[i] * a[i][j]) / h;
            for i in m..N {
                a[i][j] = a[i][j] - f * u[i];
            }
        }
        // a <- a (I - u u^T / h)
        for row in a.iter_mut() {
            let f = (m..N).fold(T::zero(), |s, j| s + u[j] * row[j]) / h;
            for j in m..N {
                row[j] = row[j] - f * u[j];
            }
        }
        a[m][m - 1] = scale * g;
        for row in a.iter_mut().skip(m + 1) {
            row[m - 1] = T::zero();
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg 4x4 matrix.
///
/// Indices are 1-based inside (row/column 0 unused) so the deflation and
/// bulge-chasing bounds read naturally.
fn hessenberg_qr<T: Real>(hess: [[T; 4]; 4]) -> Result<[Complex<T>; 4]> {
    let n = 4usize;
    let mut a = [[T::zero(); 5]; 5];
    for i in 0..4 {
        for j in 0..4 {
            a[i + 1][j + 1] = hess[i][j];
        }
    }
    let mut wr = [T::zero(); 5];
    let mut wi = [T::zero(); 5];

    let mut anorm = T::zero();
    for i in 1..=n {
        for j in (i - 1).max(1)..=n {
            anorm = anorm + a[i][j].abs();
        }
    }
    let eps = T::epsilon();
    let half = T::lit(0.5);

    let mut nn = n;
    let mut t = T::zero();
    let mut sweeps = 0usize;
    while nn >= 1 {
        let mut its = 0usize;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= eps * s {
                    a[l][l - 1] = T::zero();
                    break;
                }
                l -= 1;
            }
            let l = l.max(1);

            let mut x = a[nn][nn];
            if l == nn {
                // One root found.
                wr[nn] = x + t;
                wi[nn] = T::zero();
                nn -= 1;
                break;
            }
            let mut y = a[nn - 1][nn - 1];
            let mut w = a[nn][nn - 1] * a[nn - 1][nn];
            if l == nn - 1 {
                // Two roots from the trailing 2x2 block.
                let p = half * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x = x + t;
                if q >= T::zero() {
                    z = p + z.copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = if z != T::zero() { x - w / z } else { x + z };
                    wi[nn - 1] = T::zero();
                    wi[nn] = T::zero();
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn = nn.saturating_sub(2);
                break;
            }

            if sweeps == MAX_SWEEPS {
                return Err(Error::NumericalFailure { sweeps: MAX_SWEEPS });
            }
            if its > 0 && its.is_multiple_of(10) {
                // Exceptional shift. Spectra of the form {+-z, +-conj z} stall
                // the standard shift (it cannot separate z from -z), so this
                // fires every ten iterations rather than only twice.
                t = t + x;
                for i in 1..=nn {
                    a[i][i] = a[i][i] - x;
                }
                let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                x = T::lit(0.75) * s;
                y = x;
                w = T::lit(-0.4375) * s * s;
            }
            its += 1;
            sweeps += 1;

            // Form shift and look for two consecutive small subdiagonals.
            let (mut p, mut q, mut r);
            let mut m = nn - 2;
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p = p / s;
                q = q / s;
                r = r / s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[i][i - 2] = T::zero();
                if i != m + 2 {
                    a[i][i - 3] = T::zero();
                }
            }

            // Double QR step on rows l..nn and columns m..nn.
            let mut kk = m;
            while kk < nn {
                if kk != m {
                    p = a[kk][kk - 1];
                    q = a[kk + 1][kk - 1];
                    r = if kk != nn - 1 { a[kk + 2][kk - 1] } else { T::zero() };
                    x = p.abs() + q.abs() + r.abs();
                    if x != T::zero() {
                        p = p / x;
                        q = q / x;
                        r = r / x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != T::zero() {
                    if kk == m {
                        if l != m {
                            a[kk][kk - 1] = -a[kk][kk - 1];
                        }
                    } else {
                        a[kk][kk - 1] = -s * x;
                    }
                    p = p + s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q = q / p;
                    r = r / p;
                    for j in kk..=nn {
                        let mut pp = a[kk][j] + q * a[kk + 1][j];
                        if kk != nn - 1 {
                            pp = pp + r * a[kk + 2][j];
                            a[kk + 2][j] = a[kk + 2][j] - pp * z;
                        }
                        a[kk + 1][j] = a[kk + 1][j] - pp * y;
                        a[kk][j] = a[kk][j] - pp * x;
                    }
                    let mmin = nn.min(kk + 3);
                    for i in l..=mmin {
                        let mut pp = x * a[i][kk] + y * a[i][kk + 1];
                        if kk != nn - 1 {
                            pp = pp + z * a[i][kk + 2];
                            a[i][kk + 2] = a[i][kk + 2] - pp * r;
                        }
                        a[i][kk + 1] = a[i][kk + 1] - pp * q;
                        a[i][kk] = a[i][kk] - pp;
                    }
                }
                kk += 1;
            }
        }
    }

    Ok(std::array::from_fn(|i| Complex::new(wr[i + 1], wi[i + 1])))
}

/// `|H v - lambda v| / |v|` for an approximate eigenvector `v` of `lambda`,
/// obtained as the null vector of `H - lambda I` by fully pivoted elimination.
pub fn eigenpair_residual<T: Real>(h: &Hamiltonian4<T>, lambda: Complex<T>) -> T {
    let v = null_vector(h, lambda);
    let mut res = T::zero();
    for i in 0..4 {
        let mut hv = Complex::new(T::zero(), T::zero());
        for j in 0..4 {
            hv = hv + v[j] * h.entries[i][j];
        }
        res = res + (hv - v[i] * lambda).norm_sqr();
    }
    let vn = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    res.sqrt() / vn
}

fn null_vector<T: Real>(h: &Hamiltonian4<T>, lambda: Complex<T>) -> [Complex<T>; 4] {
    let zero = Complex::new(T::zero(), T::zero());
    let mut m: [[Complex<T>; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let d = if i == j { lambda } else { zero };
            Complex::new(h.entries[i][j], T::zero()) - d
        })
    });
    let mut cols = [0usize, 1, 2, 3];
    for step in 0..3 {
        let (mut pr, mut pc, mut best) = (step, step, T::zero());
        for (i, row) in m.iter().enumerate().skip(step) {
            for (j, z) in row.iter().enumerate().skip(step) {
                if z.norm() > best {
                    best = z.norm();
                    pr = i;
                    pc = j;
                }
            }
        }
        if best == T::zero() {
            break;
        }
        m.swap(step, pr);
        for row in m.iter_mut() {
            row.swap(step, pc);
        }
        cols.swap(step, pc);
        for i in step + 1..4 {
            let f = m[i][step] / m[step][step];
            for j in step..4 {
                let upd = m[step][j] * f;
                m[i][j] = m[i][j] - upd;
            }
        }
    }
    // Last pivot is (numerically) zero: fix the last unknown to 1.
    let mut y = [zero; 4];
    y[3] = Complex::new(T::one(), T::zero());
    for i in (0..3).rev() {
        let mut s = zero;
        for j in i + 1..4 {
            s = s + m[i][j] * y[j];
        }
        y[i] = if m[i][i].norm() > T::zero() {
            -s / m[i][i]
        } else {
            Complex::new(T::one(), T::zero())
        };
    }
    let mut v = [zero; 4];
    for (pos, &col) in cols.iter().enumerate() {
        v[col] = y[pos];
    }
    v
}
