//! Discrete differential operators built from node-normals: the
//! cell-centered gradient, its dual node-centered divergence, the
//! node-centered curl, and the cell-centered divergence with its weights.

use crate::geom::Vec2;
use crate::mesh::Mesh;

/// Cell-centered gradient of a nodal scalar field,
/// (Gφ)_c = (1/|c|) Σ_{n∈N(c)} ℓ_nc n_nc φ_n. Exact on affine data.
pub fn gradient_g(mesh: &Mesh, phi: &[f64]) -> Vec<Vec2> {
    (0..mesh.n_cells_total())
        .map(|c| {
            let mut g = Vec2::ZERO;
            for k in mesh.corners(c) {
                g += k.nn * phi[k.node];
            }
            g / mesh.area(c)
        })
        .collect()
}

/// Node-centered divergence of a cell vector field,
/// (Dv)_n = −(1/|c_n|) Σ_{c∈C(n)} ℓ_nc n_nc · v_c. The ℓ² dual of the
/// gradient; values at inactive (outer ghost) nodes are zeroed.
pub fn divergence_d(mesh: &Mesh, v: &[Vec2]) -> Vec<f64> {
    let mut out = vec![0.0; mesh.n_nodes_total()];
    for c in 0..mesh.n_cells_total() {
        let vc = v[c];
        for k in mesh.corners(c) {
            out[k.node] -= k.nn.dot(vc);
        }
    }
    for n in 0..mesh.n_nodes_total() {
        if mesh.is_active_node(n) {
            out[n] /= mesh.dual_area(n);
        } else {
            out[n] = 0.0;
        }
    }
    out
}

/// Node-centered curl of a cell vector field,
/// (Cv)_n = −(1/|c_n|) Σ_{c∈C(n)} ℓ_nc n_nc × v_c.
pub fn curl_c(mesh: &Mesh, v: &[Vec2]) -> Vec<f64> {
    let mut out = vec![0.0; mesh.n_nodes_total()];
    for c in 0..mesh.n_cells_total() {
        let vc = v[c];
        for k in mesh.corners(c) {
            out[k.node] -= k.nn.cross(vc);
        }
    }
    for n in 0..mesh.n_nodes_total() {
        if mesh.is_active_node(n) {
            out[n] /= mesh.dual_area(n);
        } else {
            out[n] = 0.0;
        }
    }
    out
}

/// Per-(node-of-cell) weights α_nc: the cell-centered divergence is
/// D̃_c v = Σ_{n∈N(c)} α_nc (Dv)_n, and Σ_c |c| Σ_n α_nc φ_n = Σ_n |c_n| φ_n
/// for any nodal φ. Returned in cell-corner order.
pub fn alpha_coeffs(mesh: &Mesh) -> Vec<Vec<f64>> {
    (0..mesh.n_cells_total())
        .map(|c| {
            let inv_area = 1.0 / mesh.area(c);
            mesh.corners(c)
                .iter()
                .map(|k| {
                    inv_area * (k.wsub / mesh.sub_len_total(k.node)) * 0.5 * mesh.dual_area(k.node)
                })
                .collect()
        })
        .collect()
}

/// Cell-centered divergence D̃_c v as the α-weighted combination of the
/// nodal divergences.
pub fn cell_divergence_dtilde(mesh: &Mesh, v: &[Vec2]) -> Vec<f64> {
    let dn = divergence_d(mesh, v);
    let alpha = alpha_coeffs(mesh);
    (0..mesh.n_cells_total())
        .map(|c| {
            mesh.corners(c)
                .iter()
                .zip(alpha[c].iter())
                .map(|(k, &a)| a * dn[k.node])
                .sum()
        })
        .collect()
}
