//! Semi-discrete right-hand sides built on nodal conservation: fluxes live
//! on subedges (half-edges), and the free parameter of the Riemann solver
//! is fixed by requiring all subedge fluxes around each node to cancel.

pub mod first_order;
pub mod recon;
pub mod reference;
pub mod second_order;

pub use first_order::{nodal_pressure, nodal_velocity, rhs_nodal_pressure, rhs_nodal_velocity};
pub use recon::{reconstruct, Gradients};
pub use second_order::{nodal_pressure_2, rhs_second_order};

use crate::mesh::{Mesh, StencilKind};
use crate::state::State;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("singular 2x2 nodal system at node {node} (degenerate geometry)")]
    SingularNodalSystem { node: usize },
    #[error("degenerate least-squares stencil at cell {cell} (condition {cond:e})")]
    DegenerateStencil { cell: usize, cond: f64 },
}

/// Scheme selector: which nodal closure fixes the free Riemann parameter,
/// and at which order of accuracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Free pressure, one scalar per node; vorticity preserving.
    NodalPressure1,
    /// Free normal velocity; v*_n from a 2×2 system per node. Not
    /// vorticity preserving.
    NodalVelocity1,
    /// Nodal pressure with linear least-squares reconstruction.
    NodalPressure2(StencilKind),
}

impl Scheme {
    pub fn order(self) -> u8 {
        match self {
            Scheme::NodalPressure2(_) => 2,
            _ => 1,
        }
    }

    /// Evaluate the semi-discrete right-hand side. Ghost cells of `state`
    /// are refreshed in place first.
    pub fn rhs(self, mesh: &Mesh, state: &mut State) -> Result<State, SchemeError> {
        state.refresh_ghosts(mesh);
        match self {
            Scheme::NodalPressure1 => Ok(rhs_nodal_pressure(mesh, state)),
            Scheme::NodalVelocity1 => rhs_nodal_velocity(mesh, state),
            Scheme::NodalPressure2(stencil) => {
                let grads = reconstruct(mesh, state, stencil)?;
                Ok(rhs_second_order(mesh, state, &grads))
            }
        }
    }
}
