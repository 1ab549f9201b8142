//! Numerical laboratory for families of random one-dimensional quantum systems.
//!
//! The crate generates random confining potentials (Fourier series inside an
//! `x^10` envelope, or even polynomials), solves the resulting one- and
//! two-electron systems exactly on a uniform grid, propagates one-electron
//! states through a sudden uniform electric field, and measures how far any
//! two systems are apart with the natural wavefunction and density metrics
//!
//! ```text
//! D_psi(p1, p2) = sqrt(2N - 2|<p1|p2>|),   D_n(n1, n2) = integral |n1 - n2|
//! ```
//!
//! where the states are normalised to the electron number N. Everything is
//! deterministic: families are seeded, eigensolves and propagation have no
//! hidden state, and repeated runs reproduce results bit for bit.
//!
//! The crate is `no_std` (with `alloc`); all file formats, configuration and
//! parallel drivers live in the companion `qmslab` binary crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod lanczos;
mod math;
pub mod metrics;
pub mod potentials;
pub mod rng;
pub mod solver1e;
pub mod solver2e;
pub mod tridiag;

pub use error::{Error, Result};
pub use experiments::{DynamicsRun, FamilyKind, FamilyRun, SolvedSystem, TriangleStatistics};
pub use grid::Grid;
pub use metrics::{DistanceRecord, MetricConvention, NormalizationMode, SlopeFit};
pub use potentials::{FourierPotentialSpec, PolynomialPotentialSpec, Potential, PresetFamily};
pub use solver1e::{Spectrum, Wavefunction1e};
pub use solver2e::{Density, MeanFieldConfig, ProductState2e, Wavefunction2e};
