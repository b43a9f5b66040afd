//! Mesh generators: Cartesian, randomly perturbed quadrangular, mixed
//! triangular-quadrangular and a brick-offset polygonal pattern containing
//! quadrangles, pentagons and hexagons.

use super::{BoundaryKind, BuildOptions, CartesianInfo, Mesh, MeshError};
use crate::geom::{vec2, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

fn cartesian_nodes(nx: usize, ny: usize, dx: f64, dy: f64) -> Vec<Vec2> {
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push(vec2(i as f64 * dx, j as f64 * dy));
        }
    }
    nodes
}

fn cartesian_cells(nx: usize, ny: usize) -> Vec<Vec<usize>> {
    let mut cells = Vec::with_capacity(nx * ny);
    let v = |i: usize, j: usize| j * (nx + 1) + i;
    for j in 0..ny {
        for i in 0..nx {
            cells.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]);
        }
    }
    cells
}

/// Attach the structured (i, j) cell lookup, including the ghost halo for
/// zero-gradient meshes, by matching cell centroids.
fn attach_cartesian_info(mesh: &mut Mesh, nx: usize, ny: usize, dx: f64, dy: f64) {
    let periodic = mesh.boundary() == BoundaryKind::Periodic;
    let mut halo = Vec::new();
    if !periodic {
        let w = nx + 2;
        halo = vec![usize::MAX; w * (ny + 2)];
        let mut by_idx: HashMap<(i64, i64), usize> = HashMap::new();
        for c in 0..mesh.n_cells_total() {
            let p = mesh.centroid(c);
            let i = (p.x / dx - 0.5).round() as i64;
            let j = (p.y / dy - 0.5).round() as i64;
            by_idx.insert((i, j), c);
        }
        for j in -1..=(ny as i64) {
            for i in -1..=(nx as i64) {
                let c = by_idx[&(i, j)];
                halo[(j + 1) as usize * w + (i + 1) as usize] = c;
            }
        }
    }
    mesh.set_cartesian(CartesianInfo {
        nx,
        ny,
        dx,
        dy,
        halo,
        periodic,
    });
}

/// Axis-aligned nx × ny rectangle grid with spacings (dx, dy).
pub fn generate_cartesian(
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    boundary: BoundaryKind,
) -> Result<Mesh, MeshError> {
    if nx < 1 || ny < 1 || dx <= 0.0 || dy <= 0.0 {
        return Err(MeshError::InvalidParameter(
            "need nx, ny >= 1 and dx, dy > 0".into(),
        ));
    }
    let opts = BuildOptions {
        fix_orientation: false,
        period: Some(vec2(nx as f64 * dx, ny as f64 * dy)),
    };
    let mut mesh = Mesh::build(
        cartesian_nodes(nx, ny, dx, dy),
        cartesian_cells(nx, ny),
        boundary,
        opts,
    )?;
    attach_cartesian_info(&mut mesh, nx, ny, dx, dy);
    Ok(mesh)
}

/// Node displacements on the unit-domain lattice, one per lattice class.
/// Seam classes are shared by their duplicates so periodic meshes stay
/// consistent; the mask is applied afterwards.
fn lattice_displacements(nx: usize, ny: usize, amplitude: f64, seed: u64) -> Vec<Vec2> {
    let dx = 1.0 / nx as f64;
    let dy = 1.0 / ny as f64;
    let r_max = amplitude * dx.min(dy);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disp = Vec::with_capacity(nx * ny);
    for _ in 0..nx * ny {
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = rng.gen_range(0.0..=1.0) * r_max;
        disp.push(vec2(r * angle.cos(), r * angle.sin()));
    }
    disp
}

fn perturbed_nodes(
    nx: usize,
    ny: usize,
    amplitude: f64,
    seed: u64,
    boundary: BoundaryKind,
) -> Vec<Vec2> {
    let dx = 1.0 / nx as f64;
    let dy = 1.0 / ny as f64;
    let disp = lattice_displacements(nx, ny, amplitude, seed);
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let mut d = disp[(j % ny) * nx + (i % nx)];
            let on_x = i == 0 || i == nx;
            let on_y = j == 0 || j == ny;
            match boundary {
                BoundaryKind::Periodic => {
                    // seam nodes slide tangentially so the fundamental
                    // domain stays rectangular; corners stay put
                    if on_x {
                        d.x = 0.0;
                    }
                    if on_y {
                        d.y = 0.0;
                    }
                }
                BoundaryKind::ZeroGradient => {
                    if on_x || on_y {
                        d = Vec2::ZERO;
                    }
                }
            }
            nodes.push(vec2(i as f64 * dx + d.x, j as f64 * dy + d.y));
        }
    }
    nodes
}

/// Quadrangular grid on the unit square with seeded random node displacements of
/// magnitude ≤ amplitude·min(dx, dy).
pub fn generate_perturbed_quad(
    nx: usize,
    ny: usize,
    amplitude: f64,
    seed: u64,
    boundary: BoundaryKind,
) -> Result<Mesh, MeshError> {
    if nx < 1 || ny < 1 {
        return Err(MeshError::InvalidParameter("need nx, ny >= 1".into()));
    }
    if !(0.0..=0.3).contains(&amplitude) {
        return Err(MeshError::InvalidParameter(
            "amplitude must lie in [0, 0.3]".into(),
        ));
    }
    let nodes = perturbed_nodes(nx, ny, amplitude, seed, boundary);
    let opts = BuildOptions {
        fix_orientation: false,
        period: Some(vec2(1.0, 1.0)),
    };
    Mesh::build(nodes, cartesian_cells(nx, ny), boundary, opts).map_err(|e| match e {
        MeshError::ZeroAreaCell { .. }
        | MeshError::NonSimplePolygon { .. }
        | MeshError::InconsistentOrientation { .. } => MeshError::TangledMesh,
        other => other,
    })
}

/// Unit-domain grid where a seeded random subset of the quadrangles is split
/// along one diagonal, so #E(c) ≤ 4 everywhere.
pub fn generate_mixed_triquad(
    nx: usize,
    ny: usize,
    split_fraction: f64,
    seed: u64,
    boundary: BoundaryKind,
) -> Result<Mesh, MeshError> {
    if nx < 1 || ny < 1 {
        return Err(MeshError::InvalidParameter("need nx, ny >= 1".into()));
    }
    if !(0.0..=1.0).contains(&split_fraction) {
        return Err(MeshError::InvalidParameter(
            "split_fraction must lie in [0, 1]".into(),
        ));
    }
    let nodes = cartesian_nodes(nx, ny, 1.0 / nx as f64, 1.0 / ny as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = |i: usize, j: usize| j * (nx + 1) + i;
    let mut cells = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let split: bool = rng.gen_range(0.0..1.0) < split_fraction;
            let rising: bool = rng.gen();
            let (v00, v10, v11, v01) = (v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1));
            if !split {
                cells.push(vec![v00, v10, v11, v01]);
            } else if rising {
                cells.push(vec![v00, v10, v11]);
                cells.push(vec![v00, v11, v01]);
            } else {
                cells.push(vec![v00, v10, v01]);
                cells.push(vec![v10, v11, v01]);
            }
        }
    }
    let opts = BuildOptions {
        fix_orientation: false,
        period: Some(vec2(1.0, 1.0)),
    };
    Mesh::build(nodes, cells, boundary, opts).map_err(|e| match e {
        MeshError::ZeroAreaCell { .. } | MeshError::NonSimplePolygon { .. } => {
            MeshError::TangledMesh
        }
        other => other,
    })
}

/// Brick-offset pattern on the unit square: rows of 2·dx-wide bricks whose horizontal
/// offsets follow the period-4 sequence (0, 1, 0, 0)·dx, producing
/// quadrangles, pentagons and hexagons. Deterministic; `seed` is accepted
/// for interface uniformity and not used.
pub fn generate_polygonal(
    nx: usize,
    ny: usize,
    _seed: u64,
    boundary: BoundaryKind,
) -> Result<Mesh, MeshError> {
    if nx < 4 || nx % 2 != 0 {
        return Err(MeshError::InvalidParameter(
            "polygonal pattern needs even nx >= 4".into(),
        ));
    }
    match boundary {
        BoundaryKind::Periodic if ny % 4 != 0 || ny < 4 => {
            return Err(MeshError::InvalidParameter(
                "periodic polygonal pattern needs ny a multiple of 4".into(),
            ));
        }
        BoundaryKind::ZeroGradient if ny < 2 => {
            return Err(MeshError::InvalidParameter(
                "polygonal pattern needs ny >= 2".into(),
            ));
        }
        _ => {}
    }
    let dx = 1.0 / nx as f64;
    let dy = 1.0 / ny as f64;
    let pattern = [0usize, 1, 0, 0];
    let offset = |row: i64| -> usize {
        let r = row.rem_euclid(ny as i64) as usize;
        pattern[r % 4]
    };
    let periodic = boundary == BoundaryKind::Periodic;

    // node presence per horizontal line: a slot i carries a node when it is
    // a brick corner of the row below or above (domain corners always)
    let mut present = vec![vec![false; nx + 1]; ny + 1];
    for (line, pres) in present.iter_mut().enumerate() {
        let line = line as i64;
        let (below, above): (Option<usize>, Option<usize>) = if periodic {
            (Some(offset(line - 1)), Some(offset(line)))
        } else {
            (
                if line > 0 {
                    Some(offset(line - 1))
                } else {
                    None
                },
                if (line as usize) < ny {
                    Some(offset(line))
                } else {
                    None
                },
            )
        };
        for (i, p) in pres.iter_mut().enumerate() {
            let parity = i % 2;
            *p = below == Some(parity) || above == Some(parity);
            if !periodic && (i == 0 || i == nx) {
                *p = true;
            }
        }
    }

    let mut nodes: Vec<Vec2> = Vec::new();
    let mut node_id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut get_node = |line: usize, i: usize, nodes: &mut Vec<Vec2>| -> usize {
        *node_id.entry((line, i)).or_insert_with(|| {
            nodes.push(vec2(i as f64 * dx, line as f64 * dy));
            nodes.len() - 1
        })
    };
    let present_at = |line: usize, i: usize| -> bool {
        if i <= nx {
            present[line][i]
        } else {
            present[line][i - nx]
        }
    };

    let mut cells: Vec<Vec<usize>> = Vec::new();
    for row in 0..ny {
        let o = offset(row as i64);
        let mut spans: Vec<(usize, usize)> = Vec::new();
        if periodic {
            for b in 0..nx / 2 {
                spans.push((o + 2 * b, o + 2 * b + 2));
            }
        } else if o == 0 {
            for b in 0..nx / 2 {
                spans.push((2 * b, 2 * b + 2));
            }
        } else {
            spans.push((0, 1));
            for b in 0..nx / 2 - 1 {
                spans.push((1 + 2 * b, 3 + 2 * b));
            }
            spans.push((nx - 1, nx));
        }
        for (lo, hi) in spans {
            let mut cell = Vec::new();
            for i in lo..=hi {
                if present_at(row, i) {
                    cell.push(get_node(row, i, &mut nodes));
                }
            }
            for i in (lo..=hi).rev() {
                if present_at(row + 1, i) {
                    cell.push(get_node(row + 1, i, &mut nodes));
                }
            }
            cells.push(cell);
        }
    }
    let opts = BuildOptions {
        fix_orientation: false,
        period: Some(vec2(1.0, 1.0)),
    };
    Mesh::build(nodes, cells, boundary, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_2x2_counts() {
        let m = generate_cartesian(2, 2, 1.0, 1.0, BoundaryKind::ZeroGradient).unwrap();
        assert_eq!(m.n_cells(), 4);
        assert_eq!(m.n_nodes(), 9);
        assert_eq!(m.n_edges(), 12);
        // every interior node normal has magnitude sqrt(2)/2
        let center = m
            .active_nodes()
            .find(|&n| (m.node_pos(n) - vec2(1.0, 1.0)).norm() < 1e-12)
            .unwrap();
        for &(c, s) in m.node_cells(center) {
            let nn = m.corners(c)[s as usize].nn;
            assert!((nn.norm() - 0.5f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn cartesian_1x1_matches_unit_square() {
        let m = generate_cartesian(1, 1, 1.0, 1.0, BoundaryKind::ZeroGradient).unwrap();
        assert_eq!(m.n_cells(), 1);
        assert_eq!(m.area(0), 1.0);
    }

    #[test]
    fn cartesian_rect_areas() {
        let m = generate_cartesian(3, 2, 0.5, 1.0, BoundaryKind::ZeroGradient).unwrap();
        for c in 0..m.n_cells() {
            assert!((m.area(c) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn cartesian_periodic_torus() {
        let m = generate_cartesian(4, 4, 0.25, 0.25, BoundaryKind::Periodic).unwrap();
        assert_eq!(m.n_cells(), 16);
        assert_eq!(m.n_nodes(), 16);
        assert_eq!(m.edges().len(), 32);
        assert_eq!(m.n_cells_total(), 16); // no ghosts on a torus
        for n in m.active_nodes() {
            assert_eq!(m.node_cells(n).len(), 4);
        }
        assert!((m.total_area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_zero_amplitude_is_cartesian_bitwise() {
        let p = generate_perturbed_quad(5, 4, 0.0, 7, BoundaryKind::Periodic).unwrap();
        let c = generate_cartesian(5, 4, 1.0 / 5.0, 1.0 / 4.0, BoundaryKind::Periodic).unwrap();
        let (pn, pc) = p.raw();
        let (cn, cc) = c.raw();
        assert_eq!(pc, cc);
        assert!(pn
            .iter()
            .zip(cn.iter())
            .all(|(a, b)| a.x == b.x && a.y == b.y));
    }

    #[test]
    fn perturbed_deterministic_and_valid() {
        let a = generate_perturbed_quad(10, 10, 0.2, 42, BoundaryKind::Periodic).unwrap();
        let b = generate_perturbed_quad(10, 10, 0.2, 42, BoundaryKind::Periodic).unwrap();
        let (an, _) = a.raw();
        let (bn, _) = b.raw();
        assert!(an
            .iter()
            .zip(bn.iter())
            .all(|(p, q)| p.x == q.x && p.y == q.y));
        for c in 0..a.n_cells() {
            assert_eq!(a.corners(c).len(), 4);
            assert!(a.area(c) > 0.0);
        }
        assert!((a.total_area() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn triquad_full_split_areas() {
        let m = generate_mixed_triquad(2, 2, 1.0, 3, BoundaryKind::Periodic).unwrap();
        assert_eq!(m.n_cells(), 8);
        for c in 0..m.n_cells() {
            assert!((m.area(c) - 0.5 * 0.5 * 0.5).abs() < 1e-15);
            assert_eq!(m.corners(c).len(), 3);
        }
    }

    #[test]
    fn triquad_no_split_is_quad_grid() {
        let t = generate_mixed_triquad(4, 4, 0.0, 9, BoundaryKind::Periodic).unwrap();
        let q = generate_perturbed_quad(4, 4, 0.0, 9, BoundaryKind::Periodic).unwrap();
        let (tn, tc) = t.raw();
        let (qn, qc) = q.raw();
        assert_eq!(tc, qc);
        assert!(tn
            .iter()
            .zip(qn.iter())
            .all(|(a, b)| a.x == b.x && a.y == b.y));
    }

    #[test]
    fn polygonal_has_pentagons_and_hexagons() {
        for &bk in &[BoundaryKind::Periodic, BoundaryKind::ZeroGradient] {
            let m = generate_polygonal(8, 8, 0, bk).unwrap();
            let max_e = (0..m.n_cells()).map(|c| m.corners(c).len()).max().unwrap();
            assert!(max_e >= 5, "expected at least a pentagon, got max {max_e}");
            assert!((0..m.n_cells()).any(|c| m.corners(c).len() == 6));
            assert!((m.total_area() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cartesian_halo_lookup() {
        let m = generate_cartesian(3, 2, 1.0, 1.0, BoundaryKind::ZeroGradient).unwrap();
        let info = m.cartesian().unwrap();
        assert_eq!(info.cell_at(0, 0), 0);
        assert_eq!(info.cell_at(2, 1), 5);
        let g = info.cell_at(-1, 0);
        assert!(m.is_ghost(g));
        assert!((m.centroid(g) - vec2(-0.5, 0.5)).norm() < 1e-12);
        let corner = info.cell_at(-1, -1);
        assert!((m.centroid(corner) - vec2(-0.5, -0.5)).norm() < 1e-12);
    }
}
