//! Sampling and connectivity of the reality domain.
//!
//! Membership is decided from the signs of `W`, `Q`, `P`. Two neighbouring
//! samples are only joined when every required discriminant stays positive on
//! the whole segment between them, because the open domain pinches off at
//! double zeros of `W` that no finite grid lands on.

mod components;
mod contour;
mod grid;
mod membership;
mod union_find;

pub use components::{components2d, components3d, ComponentInfo, ComponentReport};
pub use contour::{trace_boundary, BoundaryCurve};
pub use grid::{sample_slice, Axis, BoxSpec, SliceGrid, SliceSpec, DEFAULT_AC_RANGE, DEFAULT_B_RANGE};
pub use membership::{
    membership, membership_with, segment_connected, segment_connected_with, zero_tolerance,
    FactorSet, Mode,
};
pub use union_find::UnionFind;
