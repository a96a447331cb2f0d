//! Reality domain of PT-symmetric four-site lattice Hamiltonians.
//!
//! * [`model`]: Hamiltonian builders and the closed-form discriminants
//!   `W`, `Q`, `P`, secular quadratic, energies and boundary limits.
//! * [`oracle`]: independent eigenvalue computation and classification.
//! * [`topology`]: grid sampling, pinch-aware connected components and
//!   boundary tracing of the domain `W > 0, Q > 0, P > 0`.
//! * [`identities`]: exact and randomized verification of the algebraic
//!   relations between the closed forms.
//!
//! The closed forms are generic over [`scalar::Ring`]; the aliases below fix
//! the common instantiations.

// Dense 4x4 kernels read more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod identities;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod topology;

pub use error::{Error, Result};
pub use model::{Couplings, DiscriminantTriple, Factor, Hamiltonian4};
pub use oracle::{Spectrum, SpectrumClass};
pub use poly::Poly4;
pub use scalar::{Real, Ring};

use num_rational::Ratio;

/// Double-precision coupling point.
pub type CouplingPoint = Couplings<f64>;
/// Single-precision coupling point.
pub type CouplingPoint32 = Couplings<f32>;
/// Integer coupling point for exact evaluation.
pub type ExactPoint = Couplings<i64>;
/// Rational coupling point for exact evaluation.
pub type RationalPoint = Couplings<Ratio<i64>>;

pub type Hamiltonian = Hamiltonian4<f64>;
pub type Discriminants = DiscriminantTriple<f64>;
pub type SpectrumF64 = Spectrum<f64>;
/// Discriminant restricted to a line `p0 + t d`, as a polynomial in `t`.
pub type LinePoly = Poly4<f64>;
