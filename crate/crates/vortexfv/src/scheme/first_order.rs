//! First-order schemes. Both variants share the structure: a nodal closure
//! pass fixes the free Riemann parameter at every node, then a cell pass
//! accumulates the subedge fluxes.
//!
//! All nodal sums are written cell-centrically via the node-normals
//! ℓ_nc n_nc, which makes them independent of the edge orientation choice;
//! the subedge-flux reference assembly in [`super::reference`] is the
//! orientation-carrying cross-check.

use super::SchemeError;
use crate::geom::{Mat2, Vec2};
use crate::mesh::Mesh;
use crate::state::State;
use rayon::prelude::*;

/// Nodal pressure closure,
/// p*_n = [Σ_{s∈SE(n)} |s| ((p_R+p_L)/2 − (v_R−v_L)·n_s/2)] / Σ_{s∈SE(n)} |s|,
/// accumulated per cell as Σ_c [w_nc p_c/2 + ℓ_nc n_nc · v_c/2].
pub fn nodal_pressure(mesh: &Mesh, state: &State) -> Vec<f64> {
    let pstar: Vec<f64> = (0..mesh.n_nodes_total())
        .into_par_iter()
        .map(|n| {
            if !mesh.is_active_node(n) {
                return 0.0;
            }
            let mut num = 0.0;
            for &(c, s) in mesh.node_cells(n) {
                let k = &mesh.corners(c)[s as usize];
                num += 0.5 * k.wsub * state.p[c] + 0.5 * k.nn.dot(state.velocity(c));
            }
            num / mesh.sub_len_total(n)
        })
        .collect();

    // Cross-check against the equivalent form through the nodal divergence:
    // p*_n = [Σ |s| (p_R+p_L)/2 − |c_n| D_n v / 2] / Σ |s|.
    #[cfg(debug_assertions)]
    {
        let v: Vec<Vec2> = (0..mesh.n_cells_total())
            .map(|c| state.velocity(c))
            .collect();
        let div = crate::operators::divergence_d(mesh, &v);
        let scale = 1.0 + state.max_abs(mesh.n_cells_total());
        for n in mesh.active_nodes() {
            let mut psum = 0.0;
            for &(c, s) in mesh.node_cells(n) {
                psum += 0.5 * mesh.corners(c)[s as usize].wsub * state.p[c];
            }
            let alt = (psum - 0.5 * mesh.dual_area(n) * div[n]) / mesh.sub_len_total(n);
            debug_assert!(
                (pstar[n] - alt).abs() <= 1e-11 * scale,
                "nodal pressure mismatch at node {n}: {} vs {alt}",
                pstar[n]
            );
        }
    }
    pstar
}

/// Semi-discrete update for the nodal-pressure scheme:
/// d v_c/dt = −G_c p*, d p_c/dt = −(1/|c|) Σ_n w_nc (p_c − p*_n).
/// The velocity contribution to the pressure update cancels cell-wise by
/// the node-normal sum identity, which is asserted numerically in debug
/// builds rather than carried along.
pub fn rhs_nodal_pressure(mesh: &Mesh, state: &State) -> State {
    let pstar = nodal_pressure(mesh, state);
    let n_total = mesh.n_cells_total();
    let n_int = mesh.n_cells();
    let mut out = State {
        u: vec![0.0; n_total],
        v: vec![0.0; n_total],
        p: vec![0.0; n_total],
    };
    let rows: Vec<(f64, f64, f64)> = (0..n_int)
        .into_par_iter()
        .map(|c| {
            let inv_area = 1.0 / mesh.area(c);
            let pc = state.p[c];
            let mut grad = Vec2::ZERO;
            let mut dp = 0.0;
            #[cfg(debug_assertions)]
            let mut nn_sum = Vec2::ZERO;
            for k in mesh.corners(c) {
                let ps = pstar[k.node];
                grad += k.nn * ps;
                dp += k.wsub * (pc - ps);
                #[cfg(debug_assertions)]
                {
                    nn_sum += k.nn;
                }
            }
            #[cfg(debug_assertions)]
            {
                // Σ_n ℓ_nc n_nc = 0 is what lets the velocity term drop out
                // of the pressure update; guard it against mesh defects.
                let vel_term = nn_sum.dot(state.velocity(c));
                debug_assert!(
                    vel_term.abs() <= 1e-11 * (1.0 + state.velocity(c).norm()) * mesh.perimeter(c),
                    "cell {c}: dropped velocity term {vel_term:e} is not negligible"
                );
            }
            (-grad.x * inv_area, -grad.y * inv_area, -dp * inv_area)
        })
        .collect();
    for (c, (du, dv, dp)) in rows.into_iter().enumerate() {
        out.u[c] = du;
        out.v[c] = dv;
        out.p[c] = dp;
    }
    out
}

/// Nodal velocity closure: v*_n solves the 2×2 system
/// [Σ_{s∈SE(n)} 2|s| n_s ⊗ n_s] v* = Σ_c [ℓ_nc n_nc p_c + M_nc v_c],
/// M_nc = Σ_{s∈SE(n,c)} |s| n_{s,c} ⊗ n_{s,c},
/// which is subedge flux conservation of the momentum components.
pub fn nodal_velocity(mesh: &Mesh, state: &State) -> Result<Vec<Vec2>, SchemeError> {
    let rows: Vec<Result<Vec2, SchemeError>> = (0..mesh.n_nodes_total())
        .into_par_iter()
        .map(|n| {
            if !mesh.is_active_node(n) {
                return Ok(Vec2::ZERO);
            }
            let mut m = Mat2::ZERO;
            let mut b = Vec2::ZERO;
            for &(c, s) in mesh.node_cells(n) {
                let k = &mesh.corners(c)[s as usize];
                let m_nc = corner_projector(k);
                m += m_nc;
                b += k.nn * state.p[c] + m_nc.mul_vec(state.velocity(c));
            }
            m.solve(b)
                .ok_or(SchemeError::SingularNodalSystem { node: n })
        })
        .collect();
    rows.into_iter().collect()
}

/// M_nc = Σ over the corner's two subedges of |s| n̂ ⊗ n̂.
fn corner_projector(k: &crate::mesh::Corner) -> Mat2 {
    let mut m = Mat2::ZERO;
    for sub in [k.sub_prev, k.sub_next] {
        let len = sub.norm();
        if len > 0.0 {
            m += Mat2::outer(sub, sub) * (1.0 / len);
        }
    }
    m
}

/// Semi-discrete update for the nodal-velocity scheme:
/// d v_c/dt = −(1/|c|) Σ_n [ℓ_nc n_nc p_c + M_nc (v_c − v*_n)],
/// d p_c/dt = −(1/|c|) Σ_n ℓ_nc n_nc · v*_n.
pub fn rhs_nodal_velocity(mesh: &Mesh, state: &State) -> Result<State, SchemeError> {
    let vstar = nodal_velocity(mesh, state)?;
    let n_total = mesh.n_cells_total();
    let n_int = mesh.n_cells();
    let mut out = State {
        u: vec![0.0; n_total],
        v: vec![0.0; n_total],
        p: vec![0.0; n_total],
    };
    let rows: Vec<(f64, f64, f64)> = (0..n_int)
        .into_par_iter()
        .map(|c| {
            let inv_area = 1.0 / mesh.area(c);
            let vc = state.velocity(c);
            let pc = state.p[c];
            let mut dv = Vec2::ZERO;
            let mut dp = 0.0;
            for k in mesh.corners(c) {
                let m_nc = corner_projector(k);
                dv += k.nn * pc + m_nc.mul_vec(vc - vstar[k.node]);
                dp += k.nn.dot(vstar[k.node]);
            }
            (-dv.x * inv_area, -dv.y * inv_area, -dp * inv_area)
        })
        .collect();
    for (c, (du, dv, dp)) in rows.into_iter().enumerate() {
        out.u[c] = du;
        out.v[c] = dv;
        out.p[c] = dp;
    }
    Ok(out)
}
