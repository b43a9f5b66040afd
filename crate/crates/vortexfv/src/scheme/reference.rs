//! Edge-walking reference assembly of the first-order updates, built
//! directly from the split-flux Riemann solvers and the fixed edge normals.
//! It is deliberately redundant with the cell-centric production path in
//! [`super::first_order`]: the two routes carry the orientation bookkeeping
//! differently, so their agreement (and invariance under flipping every
//! edge normal) validates both.

use super::first_order::{nodal_pressure, nodal_velocity};
use super::SchemeError;
use crate::mesh::Mesh;
use crate::riemann::{flux_free_pressure, flux_free_velocity, rotate_in, AcousticState, Rotation};
use crate::state::State;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    NodalPressure,
    NodalVelocity,
}

/// Accumulate the semi-discrete update by walking edges and applying the
/// rotated 1D solver on each of the two subedges. `flip_normals` reverses
/// every fixed edge normal (and the induced L/R labels), which must not
/// change the result.
pub fn rhs_by_subedge_fluxes(
    mesh: &Mesh,
    state: &State,
    kind: ClosureKind,
    flip_normals: bool,
) -> Result<State, SchemeError> {
    let pstar = match kind {
        ClosureKind::NodalPressure => Some(nodal_pressure(mesh, state)),
        ClosureKind::NodalVelocity => None,
    };
    let vstar = match kind {
        ClosureKind::NodalVelocity => Some(nodal_velocity(mesh, state)?),
        ClosureKind::NodalPressure => None,
    };

    let mut out = State::zeros(mesh);
    for edge in mesh.edges() {
        let (l, r) = match edge.cells {
            [Some(l), Some(r)] => {
                if flip_normals {
                    (r, l)
                } else {
                    (l, r)
                }
            }
            _ => continue, // outer rim of the ghost ring
        };
        let n_e = if flip_normals {
            -edge.normal
        } else {
            edge.normal
        };
        let rot = Rotation::new(n_e);
        let (ul, tl) = rotate_in(state.velocity(l), rot);
        let (ur, tr) = rotate_in(state.velocity(r), rot);
        let ql = AcousticState::new(ul, tl, state.p[l]);
        let qr = AcousticState::new(ur, tr, state.p[r]);
        let half = 0.5 * edge.length;

        for &node in &edge.nodes {
            let flux = match kind {
                ClosureKind::NodalPressure => {
                    flux_free_pressure(ql, qr, pstar.as_ref().unwrap()[node])
                }
                ClosureKind::NodalVelocity => {
                    let u_star = vstar.as_ref().unwrap()[node].dot(n_e);
                    flux_free_velocity(ql, qr, u_star)
                }
            };
            // vector momentum flux is p̄ n_e; tangential flux vanishes
            if l < mesh.n_cells() {
                let inv = half / mesh.area(l);
                out.u[l] -= inv * flux.flux_u_l * n_e.x;
                out.v[l] -= inv * flux.flux_u_l * n_e.y;
                out.p[l] -= inv * flux.flux_p_l;
            }
            if r < mesh.n_cells() {
                let inv = half / mesh.area(r);
                out.u[r] += inv * flux.flux_u_r * n_e.x;
                out.v[r] += inv * flux.flux_u_r * n_e.y;
                out.p[r] += inv * flux.flux_p_r;
            }
        }
    }
    Ok(out)
}

/// Maximum over active nodes of the nodal conservation residual
/// |Σ_{c∈C(n)} Σ_{s∈SE(n,c)} |s| f̂_{s,c}| (componentwise max), normalized
/// by the accumulated flux magnitude at the node.
pub fn nodal_conservation_residual(
    mesh: &Mesh,
    state: &State,
    kind: ClosureKind,
) -> Result<f64, SchemeError> {
    let pstar = match kind {
        ClosureKind::NodalPressure => Some(nodal_pressure(mesh, state)),
        ClosureKind::NodalVelocity => None,
    };
    let vstar = match kind {
        ClosureKind::NodalVelocity => Some(nodal_velocity(mesh, state)?),
        ClosureKind::NodalPressure => None,
    };

    let n_nodes = mesh.n_nodes_total();
    let mut res_u = vec![0.0f64; n_nodes];
    let mut res_v = vec![0.0f64; n_nodes];
    let mut res_p = vec![0.0f64; n_nodes];
    let mut scale = vec![0.0f64; n_nodes];

    for edge in mesh.edges() {
        let (l, r) = match edge.cells {
            [Some(l), Some(r)] => (l, r),
            _ => continue,
        };
        let n_e = edge.normal;
        let rot = Rotation::new(n_e);
        let (ul, tl) = rotate_in(state.velocity(l), rot);
        let (ur, tr) = rotate_in(state.velocity(r), rot);
        let ql = AcousticState::new(ul, tl, state.p[l]);
        let qr = AcousticState::new(ur, tr, state.p[r]);
        let half = 0.5 * edge.length;
        for &node in &edge.nodes {
            let flux = match kind {
                ClosureKind::NodalPressure => {
                    flux_free_pressure(ql, qr, pstar.as_ref().unwrap()[node])
                }
                ClosureKind::NodalVelocity => {
                    let u_star = vstar.as_ref().unwrap()[node].dot(n_e);
                    flux_free_velocity(ql, qr, u_star)
                }
            };
            // f̂ seen by L minus f̂ seen by R (the R side enters with the
            // reversed outward normal)
            res_u[node] += half * (flux.flux_u_l - flux.flux_u_r) * n_e.x;
            res_v[node] += half * (flux.flux_u_l - flux.flux_u_r) * n_e.y;
            res_p[node] += half * (flux.flux_p_l - flux.flux_p_r);
            scale[node] += half
                * (flux.flux_u_l.abs()
                    + flux.flux_u_r.abs()
                    + flux.flux_p_l.abs()
                    + flux.flux_p_r.abs()
                    + 1e-30);
        }
    }

    let mut worst = 0.0f64;
    for n in mesh.active_nodes() {
        let r = res_u[n].abs().max(res_v[n].abs()).max(res_p[n].abs());
        worst = worst.max(r / scale[n].max(1e-30));
    }
    Ok(worst)
}
