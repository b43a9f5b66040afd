//! Second-order nodal-pressure scheme: the closure and the fluxes evaluate
//! the linear reconstructions at the node locations (no edge quadrature is
//! needed at this order). The velocity update keeps the −G p* form, so
//! vorticity preservation carries over from the first-order scheme.

use super::recon::Gradients;
use crate::geom::Vec2;
use crate::mesh::Mesh;
use crate::state::State;
use rayon::prelude::*;

/// Reconstructed nodal pressure: the first-order closure with cell averages
/// replaced by reconstruction values at the node,
/// p*_n = [Σ_c w_nc p_{c,r}(x_n−x_c)/2 + Σ_c ℓ_nc n_nc · v_{c,r}(x_n−x_c)/2] / Σ|s|.
pub fn nodal_pressure_2(mesh: &Mesh, state: &State, grads: &Gradients) -> Vec<f64> {
    (0..mesh.n_nodes_total())
        .into_par_iter()
        .map(|n| {
            if !mesh.is_active_node(n) {
                return 0.0;
            }
            let mut num = 0.0;
            for &(c, s) in mesh.node_cells(n) {
                let k = &mesh.corners(c)[s as usize];
                let d = k.pos - mesh.centroid(c);
                let (ur, vr, pr) = grads.at(state, c, d);
                num += 0.5 * k.wsub * pr + 0.5 * (k.nn.x * ur + k.nn.y * vr);
            }
            num / mesh.sub_len_total(n)
        })
        .collect()
}

/// Second-order semi-discrete update. The velocity self-contribution to the
/// pressure flux no longer cancels; summed over a cell it equals the trace
/// of the velocity gradient (div v_{c,r}), which is asserted in debug builds
/// against the direct subedge summation.
pub fn rhs_second_order(mesh: &Mesh, state: &State, grads: &Gradients) -> State {
    let pstar = nodal_pressure_2(mesh, state, grads);
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
            let centroid = mesh.centroid(c);
            let mut grad = Vec2::ZERO;
            let mut dp = 0.0;
            #[cfg(debug_assertions)]
            let mut vel_flux = 0.0;
            for k in mesh.corners(c) {
                let ps = pstar[k.node];
                let d = k.pos - centroid;
                let (ur, vr, pr) = grads.at(state, c, d);
                grad += k.nn * ps;
                dp += k.nn.x * ur + k.nn.y * vr + k.wsub * (pr - ps);
                #[cfg(debug_assertions)]
                {
                    vel_flux += k.nn.x * ur + k.nn.y * vr;
                }
            }
            #[cfg(debug_assertions)]
            {
                // trace identity: (1/|c|) Σ ℓn·v_r(x_n) = tr w_c = div v_{c,r}
                let tr = grads.du[c].x + grads.dv[c].y;
                debug_assert!(
                    (vel_flux * inv_area - tr).abs()
                        <= 1e-11 * (1.0 + grads.du[c].norm() + grads.dv[c].norm()),
                    "cell {c}: velocity flux trace {} vs div v_r {tr}",
                    vel_flux * inv_area
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
