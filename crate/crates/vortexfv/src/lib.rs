//! Finite volume solvers for 2D linear acoustics on unstructured polygonal
//! meshes, organized around conservation over subedge fluxes summed at mesh
//! nodes instead of the classical per-edge flux cancellation.
//!
//! The crate provides
//!
//! - polygonal meshes (Cartesian, perturbed quadrangular, mixed
//!   triangular-quadrangular, brick-offset polygonal) with periodic or
//!   zero-gradient boundaries ([`mesh`]),
//! - the discrete gradient / nodal divergence / nodal curl operators and
//!   their exactness, duality and annihilation identities ([`operators`]),
//! - acoustic Riemann solvers with free flux parameters ([`riemann`]),
//! - the first-order nodal-pressure scheme (vorticity preserving) and the
//!   contrasting nodal-velocity scheme ([`scheme`]), plus a second-order
//!   least-squares extension,
//! - explicit time integration with CFL step control ([`timeint`]),
//! - a Cartesian Fourier analyzer for stationarity/involution structure and
//!   forward-Euler stability ([`fourier`]),
//! - benchmark cases with exact solutions, error norms and convergence
//!   studies ([`cases`]),
//! - a flat-file configuration format and run drivers backing the `vortexfv`
//!   command line tool ([`config`], [`driver`]).
//!
//! The `examples/` directory contains one runnable example per capability;
//! see the README for the CLI surface.

pub mod cases;
pub mod config;
pub mod driver;
pub mod fourier;
pub mod geom;
pub mod mesh;
pub mod operators;
pub mod riemann;
pub mod scheme;
pub mod state;
pub mod timeint;

pub use geom::{vec2, Vec2};
pub use mesh::{BoundaryKind, Mesh, StencilKind};
pub use state::State;
