//! Conservative linear least-squares reconstruction. With the cell centroid
//! as origin, the cell average of q_c + a·x equals q_c exactly, and the cell
//! average of the reconstruction over a neighbor is its value at the
//! neighbor's centroid; the minimization therefore reduces to fitting the
//! centroid offsets.

use super::SchemeError;
use crate::geom::{Mat2, Vec2};
use crate::mesh::{Mesh, StencilKind};
use crate::state::State;
use rayon::prelude::*;

/// Per-cell reconstruction slopes for the three variables.
#[derive(Clone, Debug)]
pub struct Gradients {
    pub du: Vec<Vec2>,
    pub dv: Vec<Vec2>,
    pub dp: Vec<Vec2>,
}

impl Gradients {
    pub fn zeros(mesh: &Mesh) -> Gradients {
        let n = mesh.n_cells_total();
        Gradients {
            du: vec![Vec2::ZERO; n],
            dv: vec![Vec2::ZERO; n],
            dp: vec![Vec2::ZERO; n],
        }
    }

    /// Reconstructed values at offset `d` from the cell centroid.
    pub fn at(&self, state: &State, c: usize, d: Vec2) -> (f64, f64, f64) {
        (
            state.u[c] + self.du[c].dot(d),
            state.v[c] + self.dv[c].dot(d),
            state.p[c] + self.dp[c].dot(d),
        )
    }
}

/// Least-squares slopes over the chosen stencil. Ghost cells inherit the
/// slopes of their source cell (the linear extension of the interior
/// reconstruction), matching the zero-gradient state copy.
pub fn reconstruct(
    mesh: &Mesh,
    state: &State,
    stencil: StencilKind,
) -> Result<Gradients, SchemeError> {
    let n_int = mesh.n_cells();
    let rows: Vec<Result<(Vec2, Vec2, Vec2), SchemeError>> = (0..n_int)
        .into_par_iter()
        .map(|c| {
            let nbrs = mesh.stencil(stencil, c);
            let mut a = Mat2::ZERO;
            let mut ru = Vec2::ZERO;
            let mut rv = Vec2::ZERO;
            let mut rp = Vec2::ZERO;
            for &(c2, d) in nbrs {
                a += Mat2::outer(d, d);
                ru += d * (state.u[c2] - state.u[c]);
                rv += d * (state.v[c2] - state.v[c]);
                rp += d * (state.p[c2] - state.p[c]);
            }
            let (lo, hi) = a.sym_eigenvalues();
            if nbrs.len() < 2 || lo <= 0.0 || hi / lo > 1e12 {
                return Err(SchemeError::DegenerateStencil {
                    cell: c,
                    cond: if lo > 0.0 { hi / lo } else { f64::INFINITY },
                });
            }
            let solve = |r: Vec2| a.solve(r).unwrap_or(Vec2::ZERO);
            Ok((solve(ru), solve(rv), solve(rp)))
        })
        .collect();

    let mut g = Gradients::zeros(mesh);
    for (c, row) in rows.into_iter().enumerate() {
        let (du, dv, dp) = row?;
        g.du[c] = du;
        g.dv[c] = dv;
        g.dp[c] = dp;
    }
    for (ghost, src) in mesh.ghosts() {
        g.du[ghost] = g.du[src];
        g.dv[ghost] = g.dv[src];
        g.dp[ghost] = g.dp[src];
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{
        generate_cartesian, generate_mixed_triquad, generate_perturbed_quad, BoundaryKind,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Fill all cells (ghosts included) by evaluating at centroids.
    fn fill(mesh: &Mesh, f: impl Fn(Vec2) -> (f64, f64, f64)) -> State {
        let mut s = State::zeros(mesh);
        for c in 0..mesh.n_cells_total() {
            let (u, v, p) = f(mesh.centroid(c));
            s.u[c] = u;
            s.v[c] = v;
            s.p[c] = p;
        }
        s
    }

    #[test]
    fn stencil_inclusion() {
        let m = generate_mixed_triquad(6, 5, 0.5, 3, BoundaryKind::Periodic).unwrap();
        for c in 0..m.n_cells() {
            let e = m.stencil(StencilKind::EdgeNeighbors, c);
            let n = m.stencil(StencilKind::NodeNeighbors, c);
            for (c2, _) in e {
                assert!(n.iter().any(|(cn, _)| cn == c2), "S_E ⊄ S_N at cell {c}");
            }
            assert!(e.len() >= 3);
            assert!(n.len() >= e.len());
        }
        // Cartesian: 4 edge neighbors, 8 node neighbors
        let m = generate_cartesian(5, 5, 0.2, 0.2, BoundaryKind::Periodic).unwrap();
        for c in 0..m.n_cells() {
            assert_eq!(m.stencil(StencilKind::EdgeNeighbors, c).len(), 4);
            assert_eq!(m.stencil(StencilKind::NodeNeighbors, c).len(), 8);
        }
    }

    #[test]
    fn constant_data_zero_slopes() {
        let m = generate_perturbed_quad(6, 6, 0.2, 4, BoundaryKind::Periodic).unwrap();
        let s = fill(&m, |_| (3.0, -1.0, 0.5));
        let g = reconstruct(&m, &s, StencilKind::NodeNeighbors).unwrap();
        for c in 0..m.n_cells() {
            assert!(g.du[c].norm() + g.dv[c].norm() + g.dp[c].norm() < 1e-12);
        }
    }

    #[test]
    fn affine_data_exact_slopes() {
        for stencil in [StencilKind::EdgeNeighbors, StencilKind::NodeNeighbors] {
            for m in [
                generate_perturbed_quad(7, 6, 0.2, 5, BoundaryKind::ZeroGradient).unwrap(),
                generate_mixed_triquad(6, 7, 0.5, 6, BoundaryKind::ZeroGradient).unwrap(),
            ] {
                let s = fill(&m, |p| (3.0 * p.x - 2.0 * p.y + 1.0, 0.0, -p.x + 4.0 * p.y));
                let g = reconstruct(&m, &s, stencil).unwrap();
                for c in 0..m.n_cells() {
                    assert!(
                        (g.du[c] - crate::geom::vec2(3.0, -2.0)).norm() < 1e-12,
                        "cell {c}: {:?}",
                        g.du[c]
                    );
                    assert!((g.dp[c] - crate::geom::vec2(-1.0, 4.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cartesian_5point_slope_is_central_difference() {
        let m = generate_cartesian(3, 3, 0.25, 0.25, BoundaryKind::Periodic).unwrap();
        let info = m.cartesian().unwrap();
        let mut s = State::zeros(&m);
        // values 0, ·, 2 left to right around the center cell, constant rows
        for j in -1..=3i64 {
            s.u[info.cell_at(0, j.rem_euclid(3))] = 0.0;
            s.u[info.cell_at(1, j.rem_euclid(3))] = 0.7;
            s.u[info.cell_at(2, j.rem_euclid(3))] = 2.0;
        }
        let g = reconstruct(&m, &s, StencilKind::EdgeNeighbors).unwrap();
        let c = info.cell_at(1, 1);
        assert!((g.du[c].x - (2.0 - 0.0) / (2.0 * 0.25)).abs() < 1e-12);
        assert!(g.du[c].y.abs() < 1e-12);
    }

    /// The 9-point slopes match the explicit formula
    /// a₁ = ([q]_{i±1,j−1} + [q]_{i±1,j} + [q]_{i±1,j+1}) / (6Δx).
    #[test]
    fn cartesian_9point_slopes_match_closed_form() {
        let (dx, dy) = (0.125, 0.2);
        let m = generate_cartesian(8, 5, dx, dy, BoundaryKind::Periodic).unwrap();
        let info = m.cartesian().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut s = State::zeros(&m);
        for q in [&mut s.u, &mut s.v, &mut s.p] {
            for x in q.iter_mut() {
                *x = rng.gen_range(-1.0..1.0);
            }
        }
        let g = reconstruct(&m, &s, StencilKind::NodeNeighbors).unwrap();
        let q = |i: i64, j: i64| s.p[info.cell_at(i, j)];
        for j in 0..5i64 {
            for i in 0..8i64 {
                let c = info.cell_at(i, j);
                let a1 = ((q(i + 1, j - 1) - q(i - 1, j - 1))
                    + (q(i + 1, j) - q(i - 1, j))
                    + (q(i + 1, j + 1) - q(i - 1, j + 1)))
                    / (6.0 * dx);
                let a2 = ((q(i - 1, j + 1) - q(i - 1, j - 1))
                    + (q(i, j + 1) - q(i, j - 1))
                    + (q(i + 1, j + 1) - q(i + 1, j - 1)))
                    / (6.0 * dy);
                assert!((g.dp[c].x - a1).abs() < 1e-13 / dx);
                assert!((g.dp[c].y - a2).abs() < 1e-13 / dy);
            }
        }
    }
}
