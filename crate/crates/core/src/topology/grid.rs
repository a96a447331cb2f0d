use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{eval_discriminants, Couplings};
use crate::topology::membership::{check_eta, membership_with, FactorSet, Mode};
use crate::{CouplingPoint, Discriminants};

/// Default window for `a` and `c`: the P-ellipsoid has semi-axis sqrt(10).
pub const DEFAULT_AC_RANGE: (f64, f64) = (-3.6, 3.6);
/// Default window for `b`: semi-axis sqrt(5).
pub const DEFAULT_B_RANGE: (f64, f64) = (-2.3, 2.3);

pub const MIN_SLICE_RESOLUTION: usize = 16;
pub const MAX_SLICE_RESOLUTION: usize = 20_000;
pub const MIN_BOX_RESOLUTION: usize = 32;
pub const MAX_BOX_SAMPLES: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    A,
    B,
    C,
}

impl Axis {
    pub fn default_range(self) -> (f64, f64) {
        match self {
            Axis::B => DEFAULT_B_RANGE,
            Axis::A | Axis::C => DEFAULT_AC_RANGE,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::A => "a",
            Axis::B => "b",
            Axis::C => "c",
        }
    }

    /// The two free axes of a slice that fixes `self`, in `(u, v)` order.
    pub fn free_axes(self) -> (Axis, Axis) {
        match self {
            Axis::A => (Axis::B, Axis::C),
            Axis::B => (Axis::A, Axis::C),
            Axis::C => (Axis::A, Axis::B),
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" | "A" => Ok(Axis::A),
            "b" | "B" => Ok(Axis::B),
            "c" | "C" => Ok(Axis::C),
            other => Err(Error::InvalidInput(format!("unknown axis {other:?}"))),
        }
    }
}

fn check_range(name: &str, r: (f64, f64)) -> Result<()> {
    if r.0.is_finite() && r.1.is_finite() && r.0 < r.1 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} range must satisfy min < max, got {:?}", r)))
    }
}

/// Center of cell `i` out of `n` uniform cells on `range`. Measured from the
/// window midpoint so mirrored cells of a symmetric window are exact negatives.
#[inline]
pub(crate) fn cell_center(range: (f64, f64), n: usize, i: usize) -> f64 {
    let h = (range.1 - range.0) / n as f64;
    let mid = 0.5 * (range.0 + range.1);
    mid + (i as f64 + 0.5 - 0.5 * n as f64) * h
}

/// A 2-D section of coupling space at one fixed coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub fixed_axis: Axis,
    pub fixed_value: f64,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    /// Samples per axis.
    pub resolution: usize,
    pub eta: f64,
    pub mode: Mode,
    pub factors: FactorSet,
}

impl SliceSpec {
    /// Slice with the default window for the free axes, `eta = 0`,
    /// strict membership over all three discriminants.
    pub fn new(fixed_axis: Axis, fixed_value: f64, resolution: usize) -> Self {
        let (u, v) = fixed_axis.free_axes();
        Self {
            fixed_axis,
            fixed_value,
            u_range: u.default_range(),
            v_range: v.default_range(),
            resolution,
            eta: 0.0,
            mode: Mode::StrictSimple,
            factors: FactorSet::ALL,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_ranges(mut self, u_range: (f64, f64), v_range: (f64, f64)) -> Self {
        self.u_range = u_range;
        self.v_range = v_range;
        self
    }

    pub fn with_factors(mut self, factors: FactorSet) -> Self {
        self.factors = factors;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.fixed_value.is_finite() {
            return Err(Error::InvalidInput("fixed value must be finite".into()));
        }
        check_range("u", self.u_range)?;
        check_range("v", self.v_range)?;
        if !(MIN_SLICE_RESOLUTION..=MAX_SLICE_RESOLUTION).contains(&self.resolution) {
            return Err(Error::InvalidInput(format!(
                "slice resolution must be in {MIN_SLICE_RESOLUTION}..={MAX_SLICE_RESOLUTION}, got {}",
                self.resolution
            )));
        }
        check_eta(self.eta)
    }

    pub fn free_axes(&self) -> (Axis, Axis) {
        self.fixed_axis.free_axes()
    }

    pub fn cell_size(&self) -> (f64, f64) {
        let n = self.resolution as f64;
        ((self.u_range.1 - self.u_range.0) / n, (self.v_range.1 - self.v_range.0) / n)
    }

    /// Coupling point at in-plane coordinates `(u, v)`.
    pub fn point_at(&self, u: f64, v: f64) -> CouplingPoint {
        match self.fixed_axis {
            Axis::A => Couplings { a: self.fixed_value, b: u, c: v },
            Axis::B => Couplings { a: u, b: self.fixed_value, c: v },
            Axis::C => Couplings { a: u, b: v, c: self.fixed_value },
        }
    }

    /// In-plane coordinates of sample `(i, j)`; `i` runs along `u`.
    pub fn uv(&self, i: usize, j: usize) -> (f64, f64) {
        (
            cell_center(self.u_range, self.resolution, i),
            cell_center(self.v_range, self.resolution, j),
        )
    }

    pub fn sample(&self, i: usize, j: usize) -> CouplingPoint {
        let (u, v) = self.uv(i, j);
        self.point_at(u, v)
    }

    /// Row-major sample index (`j` is the row).
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.resolution + i
    }

    /// Nearest sample to `(u, v)`, if inside the window.
    pub fn nearest_sample(&self, u: f64, v: f64) -> Option<(usize, usize)> {
        let (du, dv) = self.cell_size();
        let fi = ((u - self.u_range.0) / du).floor();
        let fj = ((v - self.v_range.0) / dv).floor();
        let n = self.resolution as f64;
        if fi < 0.0 || fj < 0.0 || fi >= n || fj >= n {
            return None;
        }
        Some((fi as usize, fj as usize))
    }
}

/// Sampled slice: membership and discriminants at every cell center.
#[derive(Clone, Debug)]
pub struct SliceGrid {
    pub spec: SliceSpec,
    /// Row-major, `resolution * resolution` entries.
    pub membership: Vec<bool>,
    pub discriminants: Vec<Discriminants>,
}

impl SliceGrid {
    pub fn is_member(&self, i: usize, j: usize) -> bool {
        self.membership[self.spec.index(i, j)]
    }

    pub fn inside_count(&self) -> usize {
        self.membership.iter().filter(|m| **m).count()
    }
}

/// Evaluate a slice at the centers of a uniform grid.
pub fn sample_slice(spec: &SliceSpec) -> Result<SliceGrid> {
    spec.validate()?;
    let n = spec.resolution;
    let rows: Vec<(Vec<bool>, Vec<Discriminants>)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut inside = Vec::with_capacity(n);
            let mut disc = Vec::with_capacity(n);
            for i in 0..n {
                let p = spec.sample(i, j);
                disc.push(eval_discriminants(&p));
                inside.push(membership_with(&p, spec.eta, spec.mode, spec.factors));
            }
            (inside, disc)
        })
        .collect();
    let mut membership = Vec::with_capacity(n * n);
    let mut discriminants = Vec::with_capacity(n * n);
    for (m, d) in rows {
        membership.extend(m);
        discriminants.extend(d);
    }
    Ok(SliceGrid {
        spec: spec.clone(),
        membership,
        discriminants,
    })
}

/// A 3-D box of coupling space sampled on `resolution^3` cell centers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub c_range: (f64, f64),
    pub resolution: usize,
    pub eta: f64,
    pub mode: Mode,
    pub factors: FactorSet,
}

impl BoxSpec {
    /// Default box `[-3.6, 3.6] x [-2.3, 2.3] x [-3.6, 3.6]`.
    pub fn new(resolution: usize) -> Self {
        Self {
            a_range: DEFAULT_AC_RANGE,
            b_range: DEFAULT_B_RANGE,
            c_range: DEFAULT_AC_RANGE,
            resolution,
            eta: 0.0,
            mode: Mode::StrictSimple,
            factors: FactorSet::ALL,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_factors(mut self, factors: FactorSet) -> Self {
        self.factors = factors;
        self
    }

    pub fn sample_count(&self) -> u64 {
        (self.resolution as u64).saturating_pow(3)
    }

    pub fn validate(&self) -> Result<()> {
        check_range("a", self.a_range)?;
        check_range("b", self.b_range)?;
        check_range("c", self.c_range)?;
        if self.resolution < MIN_BOX_RESOLUTION {
            return Err(Error::InvalidInput(format!(
                "box resolution must be >= {MIN_BOX_RESOLUTION}, got {}",
                self.resolution
            )));
        }
        if self.sample_count() > MAX_BOX_SAMPLES {
            return Err(Error::MemoryGuard {
                requested: self.sample_count(),
                limit: MAX_BOX_SAMPLES,
            });
        }
        check_eta(self.eta)
    }

    pub fn sample(&self, ia: usize, ib: usize, ic: usize) -> CouplingPoint {
        let n = self.resolution;
        Couplings {
            a: cell_center(self.a_range, n, ia),
            b: cell_center(self.b_range, n, ib),
            c: cell_center(self.c_range, n, ic),
        }
    }

    /// Linear index with `a` fastest, then `b`, then `c`.
    #[inline]
    pub fn index(&self, ia: usize, ib: usize, ic: usize) -> usize {
        (ic * self.resolution + ib) * self.resolution + ia
    }

    pub fn cell_volume(&self) -> f64 {
        let n = self.resolution as f64;
        (self.a_range.1 - self.a_range.0) * (self.b_range.1 - self.b_range.0) * (self.c_range.1 - self.c_range.0)
            / (n * n * n)
    }
}
