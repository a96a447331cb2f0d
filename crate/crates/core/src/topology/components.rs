use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::topology::grid::{BoxSpec, SliceGrid};
use crate::topology::membership::{membership_with, segment_connected_with};
use crate::topology::union_find::UnionFind;
use crate::CouplingPoint;

/// Axis-aligned bounding box of a component's sample coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundingBox {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl BoundingBox {
    fn empty(dim: usize) -> Self {
        Self {
            min: vec![f64::INFINITY; dim],
            max: vec![f64::NEG_INFINITY; dim],
        }
    }

    fn include(&mut self, x: &[f64]) {
        for (d, &v) in x.iter().enumerate() {
            self.min[d] = self.min[d].min(v);
            self.max[d] = self.max[d].max(v);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .enumerate()
            .all(|(d, &v)| self.min[d] <= v && v <= self.max[d])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentInfo {
    pub id: usize,
    pub samples: usize,
    pub bbox: BoundingBox,
    /// `samples` times the cell area (2-D) or volume (3-D).
    pub area: f64,
}

/// Labeled connected components of a sampled domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub count: usize,
    pub components: Vec<ComponentInfo>,
    /// Per-sample component id in scan order; `None` outside the domain.
    #[serde(skip)]
    pub labels: Vec<Option<u32>>,
}

impl ComponentReport {
    pub fn label(&self, index: usize) -> Option<u32> {
        self.labels[index]
    }
}

/// Radius, in cells, of the second-pass stencil that links boundary samples
/// to nearby samples of other provisional components.
pub const BRIDGE_RADIUS: usize = 6;

/// Row-major lattice of up to three axes, axis 0 fastest.
struct Lattice {
    dims: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Lattice {
    fn new(dims: &[usize]) -> Self {
        let mut strides = Vec::with_capacity(dims.len());
        let mut len = 1;
        for &d in dims {
            strides.push(len);
            len *= d;
        }
        Self {
            dims: dims.to_vec(),
            strides,
            len,
        }
    }

    fn offset(&self, idx: usize, delta: &[isize]) -> Option<usize> {
        let mut out = idx;
        for (k, &dk) in delta.iter().enumerate() {
            let x = (idx / self.strides[k]) % self.dims[k];
            let y = x as isize + dk;
            if y < 0 || y as usize >= self.dims[k] {
                return None;
            }
            out = out + y as usize * self.strides[k] - x * self.strides[k];
        }
        Some(out)
    }

    /// All offsets in `[-r, r]^dim` other than zero.
    fn cube(dim: usize, r: isize) -> Vec<Vec<isize>> {
        let mut out: Vec<Vec<isize>> = vec![Vec::new()];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (-r..=r).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out.retain(|v| v.iter().any(|&x| x != 0));
        out
    }
}

/// Connected components of the inside samples of a lattice.
///
/// Pass one joins Moore neighbours (8 in 2-D, 26 in 3-D). Pass two links each
/// boundary sample, one with an outside Moore neighbour, to samples of other
/// provisional components within [`BRIDGE_RADIUS`] cells. Every link requires
/// the straight segment between the two samples to stay in the domain; the
/// segment test is exact, so no link crosses a boundary, while the wider
/// stencil follows cusps and slivers thinner than a cell. Candidate links are
/// found in parallel and merged in a fixed sequential order.
fn label_lattice(
    dims: &[usize],
    inside: &[bool],
    point: impl Fn(usize) -> CouplingPoint + Sync,
    link: impl Fn(&CouplingPoint, &CouplingPoint) -> bool + Sync,
    coord: impl Fn(usize) -> Vec<f64>,
    cell_measure: f64,
) -> ComponentReport {
    let lat = Lattice::new(dims);
    let moore = Lattice::cube(dims.len(), 1);
    // Half of the Moore stencil: offsets whose last non-zero entry is positive.
    let forward: Vec<&Vec<isize>> = moore
        .iter()
        .filter(|v| v.iter().rev().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect();
    let joins = |idx: usize, stencil: &[&Vec<isize>]| -> Vec<usize> {
        let p = point(idx);
        stencil
            .iter()
            .filter_map(|d| lat.offset(idx, d))
            .filter(|&nb| inside[nb] && link(&p, &point(nb)))
            .collect()
    };
    let first: Vec<(usize, usize)> = (0..lat.len)
        .into_par_iter()
        .filter(|&idx| inside[idx])
        .flat_map_iter(|idx| joins(idx, &forward).into_iter().map(move |nb| (idx, nb)))
        .collect();
    let mut uf = UnionFind::new(lat.len);
    for &(x, y) in &first {
        uf.union(x, y);
    }

    let roots: Vec<usize> = (0..lat.len).map(|idx| uf.find(idx)).collect();
    let r = BRIDGE_RADIUS as isize;
    let disk: Vec<Vec<isize>> = Lattice::cube(dims.len(), r)
        .into_iter()
        .filter(|v| v.iter().map(|x| x * x).sum::<isize>() <= r * r)
        .collect();
    let on_boundary = |idx: usize| {
        moore
            .iter()
            .any(|d| lat.offset(idx, d).is_some_and(|nb| !inside[nb]))
    };
    let bridges: Vec<(usize, usize)> = (0..lat.len)
        .into_par_iter()
        .filter(|&idx| inside[idx] && on_boundary(idx))
        .flat_map_iter(|idx| {
            let p = point(idx);
            let (lat, disk, roots, point, link) = (&lat, &disk, &roots, &point, &link);
            disk.iter().filter_map(move |d| {
                let nb = lat.offset(idx, d)?;
                (inside[nb] && roots[nb] != roots[idx] && link(&p, &point(nb))).then_some((idx, nb))
            })
        })
        .collect();
    for (x, y) in bridges {
        uf.union(x, y);
    }

    let mut root_label: Vec<u32> = vec![u32::MAX; lat.len];
    let mut labels = vec![None; lat.len];
    let mut components: Vec<ComponentInfo> = Vec::new();
    for idx in 0..lat.len {
        if !inside[idx] {
            continue;
        }
        let root = uf.find(idx);
        if root_label[root] == u32::MAX {
            root_label[root] = components.len() as u32;
            components.push(ComponentInfo {
                id: components.len(),
                samples: 0,
                bbox: BoundingBox::empty(dims.len()),
                area: 0.0,
            });
        }
        let id = root_label[root];
        labels[idx] = Some(id);
        let comp = &mut components[id as usize];
        comp.samples += 1;
        comp.bbox.include(&coord(idx));
    }
    for c in &mut components {
        c.area = c.samples as f64 * cell_measure;
    }
    ComponentReport {
        count: components.len(),
        components,
        labels,
    }
}

/// Components of a sampled slice; see [`label_lattice`] for the adjacency.
pub fn components2d(grid: &SliceGrid) -> ComponentReport {
    let spec = &grid.spec;
    let n = spec.resolution;
    let (du, dv) = spec.cell_size();
    label_lattice(
        &[n, n],
        &grid.membership,
        |idx| spec.sample(idx % n, idx / n),
        |p, q| segment_connected_with(p, q, spec.eta, spec.mode, spec.factors),
        |idx| {
            let (u, v) = spec.uv(idx % n, idx / n);
            vec![u, v]
        },
        du * dv,
    )
}

/// Components of a 3-D box with the same adjacency as [`components2d`].
pub fn components3d(spec: &BoxSpec) -> Result<ComponentReport> {
    spec.validate()?;
    let n = spec.resolution;
    let plane = n * n;
    let at = |idx: usize| spec.sample(idx % n, (idx / n) % n, idx / plane);
    let inside: Vec<bool> = (0..n * plane)
        .into_par_iter()
        .map(|idx| membership_with(&at(idx), spec.eta, spec.mode, spec.factors))
        .collect();
    Ok(label_lattice(
        &[n, n, n],
        &inside,
        at,
        |p, q| segment_connected_with(p, q, spec.eta, spec.mode, spec.factors),
        |idx| {
            let p = at(idx);
            vec![p.a, p.b, p.c]
        },
        spec.cell_volume(),
    ))
}
