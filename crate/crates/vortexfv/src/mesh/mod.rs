//! Polygonal mesh with the node/edge/cell connectivity and geometric
//! quantities the schemes need: node-normals, subedge normals, dual-cell
//! areas, least-squares stencils.
//!
//! Periodic meshes are stored in "cut-open" form: cells keep their own
//! planar coordinates (seam nodes are duplicated geometrically) and a
//! canonical node map glues duplicates into torus nodes. All per-cell
//! geometry is translation invariant, so nodal sums accumulated over
//! canonical nodes are exactly the torus quantities.
//!
//! Zero-gradient meshes get a one-cell ghost ring mirrored across the
//! (axis-aligned rectangular) boundary, so every physical node has a
//! complete ring of cells and the nodal formulas need no special casing.

mod generate;
mod io;

pub use generate::{
    generate_cartesian, generate_mixed_triquad, generate_perturbed_quad, generate_polygonal,
};
pub use io::{read_mesh, write_mesh, MeshIoError};

use crate::geom::{polygon_centroid, polygon_is_simple, polygon_signed_area2, vec2, Vec2};
use std::collections::HashMap;
use thiserror::Error;

pub type NodeId = usize;
pub type EdgeId = usize;
pub type CellId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Periodic,
    ZeroGradient,
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("cell {cell:?} references node {node} out of range (or node {node} is unused)")]
    DanglingNode { cell: Option<usize>, node: usize },
    #[error("cell {cell} is not a simple polygon")]
    NonSimplePolygon { cell: usize },
    #[error("cell {cell} has zero or negative area")]
    ZeroAreaCell { cell: usize },
    #[error("cell {cell} is ordered clockwise")]
    InconsistentOrientation { cell: usize },
    #[error("mesh tangled: a cell has non-positive area after perturbation")]
    TangledMesh,
    #[error("edge shared by more than two cells (nodes {n0}, {n1})")]
    NonManifoldEdge { n0: usize, n1: usize },
    #[error("periodic mesh has an unpaired edge (nodes {n0}, {n1})")]
    UnpairedPeriodicEdge { n0: usize, n1: usize },
    #[error("unsupported boundary: {0}")]
    UnsupportedBoundary(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mesh validation failed: {0}")]
    Validation(String),
}

/// Per-cell data attached to one of its polygon corners.
#[derive(Clone, Copy, Debug)]
pub struct Corner {
    /// Canonical node id.
    pub node: NodeId,
    /// Node position in the cell's own (cut-open) frame.
    pub pos: Vec2,
    /// Node-normal ℓ_nc n_nc: length-weighted sum of the outward normals of
    /// the two subedges of this cell adjacent to the node.
    pub nn: Vec2,
    /// |s| n_{s,c} for the subedge on the incoming (previous) edge.
    pub sub_prev: Vec2,
    /// |s| n_{s,c} for the subedge on the outgoing (next) edge.
    pub sub_next: Vec2,
    /// Total subedge length at this corner: Σ_{s∈SE(n,c)} |s|.
    pub wsub: f64,
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Canonical node ids of the endpoints.
    pub nodes: [NodeId; 2],
    /// Adjacent cells ordered (L, R) so `normal` points from L to R.
    pub cells: [Option<CellId>; 2],
    /// Fixed unit normal, pointing out of the lower-indexed cell.
    pub normal: Vec2,
    pub length: f64,
}

/// Structured-index bookkeeping for Cartesian meshes (used by the
/// Cartesian cross-check paths and the discrete-vorticity stencil).
#[derive(Clone, Debug)]
pub struct CartesianInfo {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    /// Cell lookup including one halo layer: index (i, j) with
    /// i ∈ [-1, nx], j ∈ [-1, ny]. Periodic meshes wrap instead.
    halo: Vec<CellId>,
    periodic: bool,
}

impl CartesianInfo {
    /// Cell id at logical index (i, j); accepts one layer outside the
    /// physical range (ghosts for zero-gradient, wrap for periodic).
    pub fn cell_at(&self, i: i64, j: i64) -> CellId {
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        if self.periodic {
            let i = i.rem_euclid(nx);
            let j = j.rem_euclid(ny);
            (j * nx + i) as CellId
        } else {
            debug_assert!(i >= -1 && i <= nx && j >= -1 && j <= ny);
            let w = (nx + 2) as usize;
            self.halo[(j + 1) as usize * w + (i + 1) as usize]
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Silently reverse clockwise cells instead of erroring.
    pub fix_orientation: bool,
    /// Fundamental-domain period for periodic meshes. When absent it is
    /// inferred from the node bounding box (valid only when no cell
    /// overhangs the seam by construction).
    pub period: Option<Vec2>,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    boundary: BoundaryKind,
    /// Physical node coordinates and cell node lists exactly as supplied
    /// to `build` (used for file round trips).
    raw_nodes: Vec<Vec2>,
    raw_cells: Vec<Vec<usize>>,

    // canonical nodes
    node_pos: Vec<Vec2>,
    node_active: Vec<bool>,
    /// Ring consists of physical cells only (no ghosts).
    node_interior: Vec<bool>,
    dual_area: Vec<f64>,
    /// Σ_{s∈SE(n)} |s| per canonical node.
    sub_len: Vec<f64>,
    /// Incident (cell, corner slot) pairs, counterclockwise around the node.
    node_cells: Vec<Vec<(CellId, u32)>>,
    node_edges: Vec<Vec<EdgeId>>,

    // cells; ghosts (if any) come after the first `n_interior` entries
    cell_corners: Vec<Vec<Corner>>,
    cell_centroid: Vec<Vec2>,
    cell_area: Vec<f64>,
    cell_edges: Vec<Vec<EdgeId>>,
    n_interior: usize,
    /// Source interior cell for each ghost (parallel to cells past n_interior).
    ghost_src: Vec<CellId>,

    edges: Vec<Edge>,
    n_physical_edges: usize,

    stencil_edge: Vec<Vec<(CellId, Vec2)>>,
    stencil_node: Vec<Vec<(CellId, Vec2)>>,

    cart: Option<CartesianInfo>,
    period: Option<Vec2>,
}

impl Mesh {
    // ------------------------------------------------------------------
    // accessors

    pub fn boundary(&self) -> BoundaryKind {
        self.boundary
    }

    /// Number of physical (non-ghost) cells.
    pub fn n_cells(&self) -> usize {
        self.n_interior
    }

    /// Total number of cells including the ghost ring.
    pub fn n_cells_total(&self) -> usize {
        self.cell_corners.len()
    }

    pub fn is_ghost(&self, c: CellId) -> bool {
        c >= self.n_interior
    }

    /// (ghost cell, source interior cell) pairs.
    pub fn ghosts(&self) -> impl Iterator<Item = (CellId, CellId)> + '_ {
        self.ghost_src
            .iter()
            .enumerate()
            .map(|(k, &src)| (self.n_interior + k, src))
    }

    /// Number of active canonical nodes (nodes of physical cells).
    pub fn n_nodes(&self) -> usize {
        self.node_active.iter().filter(|&&a| a).count()
    }

    /// Storage length for nodal fields (includes ghost-ring nodes).
    pub fn n_nodes_total(&self) -> usize {
        self.node_pos.len()
    }

    pub fn is_active_node(&self, n: NodeId) -> bool {
        self.node_active[n]
    }

    pub fn active_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_pos.len()).filter(|&n| self.node_active[n])
    }

    /// Nodes whose whole ring is physical. On periodic meshes this is every
    /// node; on zero-gradient meshes it excludes the physical boundary,
    /// where nodal quantities lean on the ghost extrapolation (dual cells
    /// are not defined there in the continuous description).
    pub fn is_interior_node(&self, n: NodeId) -> bool {
        self.node_interior[n]
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_pos.len()).filter(|&n| self.node_interior[n])
    }

    pub fn node_pos(&self, n: NodeId) -> Vec2 {
        self.node_pos[n]
    }

    /// Dual cell area |c_n|.
    pub fn dual_area(&self, n: NodeId) -> f64 {
        self.dual_area[n]
    }

    /// Σ_{s∈SE(n)} |s|.
    pub fn sub_len_total(&self, n: NodeId) -> f64 {
        self.sub_len[n]
    }

    /// Incident (cell, corner slot) pairs in counterclockwise order.
    pub fn node_cells(&self, n: NodeId) -> &[(CellId, u32)] {
        &self.node_cells[n]
    }

    pub fn node_edges(&self, n: NodeId) -> &[EdgeId] {
        &self.node_edges[n]
    }

    pub fn corners(&self, c: CellId) -> &[Corner] {
        &self.cell_corners[c]
    }

    pub fn centroid(&self, c: CellId) -> Vec2 {
        self.cell_centroid[c]
    }

    pub fn area(&self, c: CellId) -> f64 {
        self.cell_area[c]
    }

    pub fn perimeter(&self, c: CellId) -> f64 {
        let pts = &self.cell_corners[c];
        let k = pts.len();
        (0..k)
            .map(|i| (pts[(i + 1) % k].pos - pts[i].pos).norm())
            .sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cell_edges(&self, c: CellId) -> &[EdgeId] {
        &self.cell_edges[c]
    }

    /// Number of edges incident to at least one physical cell.
    pub fn n_edges(&self) -> usize {
        self.n_physical_edges
    }

    pub fn cartesian(&self) -> Option<&CartesianInfo> {
        self.cart.as_ref()
    }

    pub fn period(&self) -> Option<Vec2> {
        self.period
    }

    /// Least-squares stencil (neighbor cell, centroid offset) for a physical
    /// cell. Offsets are expressed in the cell's own frame, so they are
    /// correct across periodic seams.
    pub fn stencil(&self, kind: StencilKind, c: CellId) -> &[(CellId, Vec2)] {
        match kind {
            StencilKind::EdgeNeighbors => &self.stencil_edge[c],
            StencilKind::NodeNeighbors => &self.stencil_node[c],
        }
    }

    pub(crate) fn raw(&self) -> (&[Vec2], &[Vec<usize>]) {
        (&self.raw_nodes, &self.raw_cells)
    }

    /// Sum of physical cell areas.
    pub fn total_area(&self) -> f64 {
        self.cell_area[..self.n_interior].iter().sum()
    }

    // ------------------------------------------------------------------
    // construction

    pub fn build(
        nodes: Vec<Vec2>,
        cells: Vec<Vec<usize>>,
        boundary: BoundaryKind,
        opts: BuildOptions,
    ) -> Result<Mesh, MeshError> {
        let n_raw = nodes.len();
        let mut referenced = vec![false; n_raw];
        let mut cells = cells;

        for (ci, cell) in cells.iter_mut().enumerate() {
            if cell.len() < 3 {
                return Err(MeshError::NonSimplePolygon { cell: ci });
            }
            for &v in cell.iter() {
                if v >= n_raw {
                    return Err(MeshError::DanglingNode {
                        cell: Some(ci),
                        node: v,
                    });
                }
                referenced[v] = true;
            }
            let mut sorted = cell.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(MeshError::NonSimplePolygon { cell: ci });
            }
            let pts: Vec<Vec2> = cell.iter().map(|&v| nodes[v]).collect();
            let a2 = polygon_signed_area2(&pts);
            if a2 < 0.0 {
                if opts.fix_orientation {
                    cell.reverse();
                } else {
                    return Err(MeshError::InconsistentOrientation { cell: ci });
                }
            }
            let pts: Vec<Vec2> = cell.iter().map(|&v| nodes[v]).collect();
            if !polygon_is_simple(&pts) {
                return Err(MeshError::NonSimplePolygon { cell: ci });
            }
            let scale = pts
                .iter()
                .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
                .max(1e-300);
            if polygon_signed_area2(&pts) <= 1e-14 * scale * scale {
                return Err(MeshError::ZeroAreaCell { cell: ci });
            }
        }
        if let Some(node) = referenced.iter().position(|&r| !r) {
            return Err(MeshError::DanglingNode { cell: None, node });
        }

        let mut builder = Builder::new(nodes, cells, boundary, opts)?;
        builder.glue_periodic()?;
        if boundary == BoundaryKind::ZeroGradient {
            builder.build_ghosts()?;
        }
        let mesh = builder.finish()?;
        mesh.validate()?;
        Ok(mesh)
    }

    pub(crate) fn set_cartesian(&mut self, info: CartesianInfo) {
        self.cart = Some(info);
    }

    /// Geometric invariant checks: per-cell node-normal identities, the
    /// tri-quad area/cross-product identity, dual-area positivity and (for
    /// periodic meshes) the torus Euler characteristic.
    pub fn validate(&self) -> Result<(), MeshError> {
        for c in 0..self.n_cells_total() {
            let corners = &self.cell_corners[c];
            let area = self.cell_area[c];
            let perim = self.perimeter(c);

            let mut sum_nn = Vec2::ZERO;
            let mut sum_outer = [0.0f64; 4]; // Σ nn ⊗ x, row major
            let mut outer_scale = 0.0f64; // accumulation scale of the sum
            for k in corners {
                sum_nn += k.nn;
                sum_outer[0] += k.nn.x * k.pos.x;
                sum_outer[1] += k.nn.x * k.pos.y;
                sum_outer[2] += k.nn.y * k.pos.x;
                sum_outer[3] += k.nn.y * k.pos.y;
                outer_scale += k.nn.norm() * k.pos.norm();
                let sub_sum = k.sub_prev + k.sub_next;
                if (sub_sum - k.nn).norm() > 1e-12 * perim {
                    return Err(MeshError::Validation(format!(
                        "cell {c}: node-normal does not match its subedge sum"
                    )));
                }
            }
            if sum_nn.norm() > 1e-12 * perim {
                return Err(MeshError::Validation(format!(
                    "cell {c}: sum of node-normals is {:e}, expected 0",
                    sum_nn.norm()
                )));
            }
            let dev = (sum_outer[0] - area)
                .abs()
                .max(sum_outer[1].abs())
                .max(sum_outer[2].abs())
                .max((sum_outer[3] - area).abs());
            // the sum cancels from O(ℓ·|x|) terms down to |c|, so the
            // relative tolerance must account for the accumulation scale
            if dev > 1e-12 * area.max(outer_scale) {
                return Err(MeshError::Validation(format!(
                    "cell {c}: Σ ℓn ⊗ x deviates from |c|·I by {dev:e}"
                )));
            }
            // area from adjacent node-normal cross products, valid up to quads
            if corners.len() <= 4 {
                for k in 0..corners.len() {
                    let m = (k + 1) % corners.len();
                    let a = 2.0 * corners[k].nn.cross(corners[m].nn);
                    if (a - area).abs() > 1e-12 * area {
                        return Err(MeshError::Validation(format!(
                            "cell {c}: 2 ℓn_k × ℓn_k+1 = {a:e} differs from area {area:e}"
                        )));
                    }
                }
            }
        }
        for n in 0..self.n_nodes_total() {
            if self.node_active[n] && self.dual_area[n] <= 0.0 {
                return Err(MeshError::Validation(format!(
                    "node {n}: non-positive dual area"
                )));
            }
        }
        if self.boundary == BoundaryKind::Periodic {
            let chi = self.n_cells() as i64 - self.edges.len() as i64 + self.n_nodes_total() as i64;
            if chi != 0 {
                return Err(MeshError::Validation(format!(
                    "periodic mesh has Euler characteristic {chi}, expected 0"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilKind {
    /// Cells sharing an edge with the cell (S_E; 5-point on Cartesian grids).
    EdgeNeighbors,
    /// Cells sharing at least one node (S_N; 9-point on Cartesian grids).
    NodeNeighbors,
}

// ----------------------------------------------------------------------
// build internals

struct Builder {
    boundary: BoundaryKind,
    opts: BuildOptions,
    raw_n_nodes: usize,
    raw_cells: Vec<Vec<usize>>,
    /// Geometric nodes (raw + ghost-created).
    geo_nodes: Vec<Vec2>,
    /// All cells as geometric node lists (raw + ghosts).
    cells: Vec<Vec<usize>>,
    n_interior: usize,
    ghost_src: Vec<CellId>,
    /// geometric node -> dense canonical node id
    canon: Vec<usize>,
    n_canon: usize,
    canon_rep: Vec<usize>, // canonical -> representative geometric node
    period: Option<Vec2>,
}

impl Builder {
    fn new(
        nodes: Vec<Vec2>,
        cells: Vec<Vec<usize>>,
        boundary: BoundaryKind,
        opts: BuildOptions,
    ) -> Result<Builder, MeshError> {
        let n = nodes.len();
        let n_cells = cells.len();
        Ok(Builder {
            boundary,
            opts,
            raw_n_nodes: n,
            raw_cells: cells.clone(),
            geo_nodes: nodes,
            cells,
            n_interior: n_cells,
            ghost_src: Vec::new(),
            canon: (0..n).collect(),
            n_canon: n,
            canon_rep: (0..n).collect(),
            period: None,
        })
    }

    /// Identify geometric nodes that coincide modulo the period.
    fn glue_periodic(&mut self) -> Result<(), MeshError> {
        if self.boundary != BoundaryKind::Periodic {
            return Ok(());
        }
        let (mut lo, mut hi) = (vec2(f64::MAX, f64::MAX), vec2(f64::MIN, f64::MIN));
        for p in &self.geo_nodes {
            lo = vec2(lo.x.min(p.x), lo.y.min(p.y));
            hi = vec2(hi.x.max(p.x), hi.y.max(p.y));
        }
        let period = self.opts.period.unwrap_or(hi - lo);
        if period.x <= 0.0 || period.y <= 0.0 {
            return Err(MeshError::InvalidParameter(
                "degenerate periodic domain".into(),
            ));
        }
        self.period = Some(period);

        let tol = 1e-9;
        let wrap = |v: f64, origin: f64, len: f64| -> f64 {
            let t = (v - origin) / len;
            let mut f = t - (t + tol).floor();
            if f < 0.0 {
                f = 0.0;
            }
            f
        };
        // cluster fractional coordinates per axis, then glue by cluster pair
        let cluster = |vals: &mut Vec<(f64, usize)>| -> Vec<usize> {
            vals.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut id = vec![0usize; vals.len()];
            let mut current = 0usize;
            for k in 0..vals.len() {
                if k > 0 && vals[k].0 - vals[k - 1].0 > tol {
                    current += 1;
                }
                id[vals[k].1] = current;
            }
            id
        };
        let mut fx: Vec<(f64, usize)> = self
            .geo_nodes
            .iter()
            .enumerate()
            .map(|(i, p)| (wrap(p.x, lo.x, period.x), i))
            .collect();
        let mut fy: Vec<(f64, usize)> = self
            .geo_nodes
            .iter()
            .enumerate()
            .map(|(i, p)| (wrap(p.y, lo.y, period.y), i))
            .collect();
        let cx = cluster(&mut fx);
        let cy = cluster(&mut fy);

        let mut classes: HashMap<(usize, usize), usize> = HashMap::new();
        let mut canon_geom = vec![usize::MAX; self.geo_nodes.len()];
        for i in 0..self.geo_nodes.len() {
            let rep = *classes.entry((cx[i], cy[i])).or_insert(i);
            canon_geom[i] = rep;
        }
        // dense canonical ids in order of representative appearance
        let mut dense: HashMap<usize, usize> = HashMap::new();
        let mut rep_list = Vec::new();
        let mut canon = vec![usize::MAX; self.geo_nodes.len()];
        for i in 0..self.geo_nodes.len() {
            let rep = canon_geom[i];
            let next = rep_list.len();
            let id = *dense.entry(rep).or_insert_with(|| {
                rep_list.push(rep);
                next
            });
            canon[i] = id;
        }
        self.canon = canon;
        self.n_canon = rep_list.len();
        self.canon_rep = rep_list;
        Ok(())
    }

    /// Mirror a one-cell ghost ring across the (rectangular) boundary.
    fn build_ghosts(&mut self) -> Result<(), MeshError> {
        // bounding box of the physical nodes
        let (mut lo, mut hi) = (vec2(f64::MAX, f64::MAX), vec2(f64::MIN, f64::MIN));
        for p in &self.geo_nodes {
            lo = vec2(lo.x.min(p.x), lo.y.min(p.y));
            hi = vec2(hi.x.max(p.x), hi.y.max(p.y));
        }
        let scale = (hi - lo).norm().max(1e-300);
        let tol = 1e-9 * scale;

        // collect boundary edges: node-pair -> (cell, directed a->b)
        let mut by_pair: HashMap<(usize, usize), Vec<(usize, usize, usize)>> = HashMap::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            let k = cell.len();
            for s in 0..k {
                let (a, b) = (cell[s], cell[(s + 1) % k]);
                let key = (a.min(b), a.max(b));
                by_pair.entry(key).or_default().push((ci, a, b));
            }
        }

        // sides: 0: x=lo.x, 1: x=hi.x, 2: y=lo.y, 3: y=hi.y
        let on_side = |p: Vec2, side: usize| -> bool {
            match side {
                0 => (p.x - lo.x).abs() <= tol,
                1 => (p.x - hi.x).abs() <= tol,
                2 => (p.y - lo.y).abs() <= tol,
                _ => (p.y - hi.y).abs() <= tol,
            }
        };
        let mirror = |p: Vec2, side: usize| -> Vec2 {
            match side {
                0 => vec2(2.0 * lo.x - p.x, p.y),
                1 => vec2(2.0 * hi.x - p.x, p.y),
                2 => vec2(p.x, 2.0 * lo.y - p.y),
                _ => vec2(p.x, 2.0 * hi.y - p.y),
            }
        };

        // boundary edges must lie on the four bounding-box sides
        for (_, occ) in by_pair.iter() {
            if occ.len() > 2 {
                return Err(MeshError::NonManifoldEdge {
                    n0: occ[0].1,
                    n1: occ[0].2,
                });
            }
            if occ.len() != 1 {
                continue;
            }
            let (_, a, b) = occ[0];
            let (pa, pb) = (self.geo_nodes[a], self.geo_nodes[b]);
            if !(0..4).any(|s| on_side(pa, s) && on_side(pb, s)) {
                return Err(MeshError::UnsupportedBoundary(
                    "zero-gradient ghosts require an axis-aligned rectangular boundary".into(),
                ));
            }
        }

        // The ghost ring is the mirror image of the whole first interior
        // layer: across each side, every cell touching that side's line by
        // at least a node (so fans of triangles at boundary nodes reflect
        // completely), plus point reflections through each corner. This
        // closes the ring of every physical node.
        //
        // Mirrored nodes are deduplicated by exact coordinate bits: a node
        // on a side line mirrors to identical floats whether it came from
        // the side reflection or an adjacent corner reflection, which keeps
        // ghost-ghost edges paired.
        let mut mirrored: HashMap<(u64, u64), usize> = HashMap::new();
        let mut ghost_cells: Vec<(Vec<usize>, CellId)> = Vec::new();
        let mut intern = |p: Vec2, geo_nodes: &mut Vec<Vec2>| -> usize {
            *mirrored
                .entry((p.x.to_bits(), p.y.to_bits()))
                .or_insert_with(|| {
                    geo_nodes.push(p);
                    geo_nodes.len() - 1
                })
        };

        for side in 0..4 {
            for ci in 0..self.n_interior {
                if !self.cells[ci]
                    .iter()
                    .any(|&v| on_side(self.geo_nodes[v], side))
                {
                    continue;
                }
                // reflection reverses orientation: walk the node list backwards
                let src = self.cells[ci].clone();
                let mut ghost: Vec<usize> = Vec::with_capacity(src.len());
                for &v in src.iter().rev() {
                    let p = self.geo_nodes[v];
                    if on_side(p, side) {
                        ghost.push(v);
                    } else {
                        ghost.push(intern(mirror(p, side), &mut self.geo_nodes));
                    }
                }
                ghost_cells.push((ghost, ci));
            }
        }

        // corner ghosts: point reflection is a rotation by π, orientation kept
        let corners_pos = [lo, vec2(hi.x, lo.y), hi, vec2(lo.x, hi.y)];
        for &q in corners_pos.iter() {
            let corner_node = (0..self.raw_n_nodes)
                .find(|&i| (self.geo_nodes[i] - q).norm() <= tol)
                .ok_or_else(|| {
                    MeshError::UnsupportedBoundary("rectangle corner carries no node".into())
                })?;
            for ci in 0..self.n_interior {
                if !self.cells[ci].contains(&corner_node) {
                    continue;
                }
                let src = self.cells[ci].clone();
                let mut ghost: Vec<usize> = Vec::with_capacity(src.len());
                for &v in src.iter() {
                    let p = self.geo_nodes[v];
                    if (p - q).norm() <= tol {
                        ghost.push(v);
                    } else {
                        ghost.push(intern(q * 2.0 - p, &mut self.geo_nodes));
                    }
                }
                ghost_cells.push((ghost, ci));
            }
        }

        for (ghost, src) in ghost_cells {
            self.cells.push(ghost);
            self.ghost_src.push(src);
        }
        // canonical map stays the identity; extend it over the new nodes
        self.canon = (0..self.geo_nodes.len()).collect();
        self.n_canon = self.geo_nodes.len();
        self.canon_rep = (0..self.geo_nodes.len()).collect();
        Ok(())
    }

    fn finish(self) -> Result<Mesh, MeshError> {
        let n_all_cells = self.cells.len();
        let n_canon = self.n_canon;

        let mut cell_corners: Vec<Vec<Corner>> = Vec::with_capacity(n_all_cells);
        let mut cell_centroid = Vec::with_capacity(n_all_cells);
        let mut cell_area = Vec::with_capacity(n_all_cells);
        let mut dual_area = vec![0.0f64; n_canon];
        let mut sub_len = vec![0.0f64; n_canon];
        let mut node_cells: Vec<Vec<(CellId, u32)>> = vec![Vec::new(); n_canon];
        let mut node_active = vec![false; n_canon];

        for (ci, cell) in self.cells.iter().enumerate() {
            let pts: Vec<Vec2> = cell.iter().map(|&v| self.geo_nodes[v]).collect();
            let area = 0.5 * polygon_signed_area2(&pts);
            if area <= 0.0 {
                return Err(MeshError::ZeroAreaCell { cell: ci });
            }
            let centroid = polygon_centroid(&pts);
            let k = pts.len();
            let mut corners = Vec::with_capacity(k);
            for s in 0..k {
                let a = pts[(s + k - 1) % k];
                let n = pts[s];
                let b = pts[(s + 1) % k];
                let sub_prev = (n - a).perp() * 0.5;
                let sub_next = (b - n).perp() * 0.5;
                let nn = sub_prev + sub_next;
                let wsub = 0.5 * ((n - a).norm() + (b - n).norm());
                let canon_node = self.canon[cell[s]];
                corners.push(Corner {
                    node: canon_node,
                    pos: n,
                    nn,
                    sub_prev,
                    sub_next,
                    wsub,
                });

                let m1 = (a + n) * 0.5;
                let m2 = (n + b) * 0.5;
                dual_area[canon_node] +=
                    0.5 * ((m2 - n).cross(centroid - n) + (centroid - n).cross(m1 - n));
                sub_len[canon_node] += 0.5 * wsub;
                node_cells[canon_node].push((ci, s as u32));
                if ci < self.n_interior {
                    node_active[canon_node] = true;
                }
            }
            cell_corners.push(corners);
            cell_centroid.push(centroid);
            cell_area.push(area);
        }

        let node_interior: Vec<bool> = (0..n_canon)
            .map(|n| node_active[n] && node_cells[n].iter().all(|&(c, _)| c < self.n_interior))
            .collect();

        // counterclockwise ring order around each node
        for n in 0..n_canon {
            let ring = &mut node_cells[n];
            let mut keyed: Vec<(f64, (CellId, u32))> = ring
                .iter()
                .map(|&(c, s)| {
                    let dir = cell_centroid[c] - cell_corners[c][s as usize].pos;
                    (dir.y.atan2(dir.x), (c, s))
                })
                .collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1 .0.cmp(&b.1 .0)));
            *ring = keyed.into_iter().map(|(_, e)| e).collect();
        }

        // canonical edges; two distinct torus edges can share both canonical
        // endpoints (short periodic directions), so occurrences are further
        // split by the wrapped edge midpoint
        let (mut lo, mut hi) = (vec2(f64::MAX, f64::MAX), vec2(f64::MIN, f64::MIN));
        for p in &self.geo_nodes {
            lo = vec2(lo.x.min(p.x), lo.y.min(p.y));
            hi = vec2(hi.x.max(p.x), hi.y.max(p.y));
        }
        let mid_tol = 1e-9 * (hi - lo).norm().max(1e-300);
        let wrap_mid = |m: Vec2| -> Vec2 {
            match self.period {
                Some(p) => {
                    let f = |v: f64, origin: f64, len: f64| {
                        let t = (v - origin) / len;
                        let mut f = t - (t + 1e-9).floor();
                        if f < 0.0 {
                            f = 0.0;
                        }
                        origin + f * len
                    };
                    vec2(f(m.x, lo.x, p.x), f(m.y, lo.y, p.y))
                }
                None => m,
            }
        };

        let mut edge_map: HashMap<(usize, usize), Vec<(Vec2, usize)>> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_occ: Vec<Vec<(CellId, usize, usize)>> = Vec::new(); // (cell, geom a, geom b)
        let mut cell_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); n_all_cells];
        for (ci, cell) in self.cells.iter().enumerate() {
            let k = cell.len();
            for s in 0..k {
                let (a, b) = (cell[s], cell[(s + 1) % k]);
                let (ca, cb) = (self.canon[a], self.canon[b]);
                let key = (ca.min(cb), ca.max(cb));
                let mid = wrap_mid((self.geo_nodes[a] + self.geo_nodes[b]) * 0.5);
                let variants = edge_map.entry(key).or_default();
                let id = match variants.iter().find(|(m, _)| (*m - mid).norm() <= mid_tol) {
                    Some(&(_, id)) => id,
                    None => {
                        edges.push(Edge {
                            nodes: [key.0, key.1],
                            cells: [None, None],
                            normal: Vec2::ZERO,
                            length: 0.0,
                        });
                        edge_occ.push(Vec::new());
                        let id = edges.len() - 1;
                        variants.push((mid, id));
                        id
                    }
                };
                edge_occ[id].push((ci, a, b));
                cell_edges[ci].push(id);
            }
        }
        for (id, occ) in edge_occ.iter().enumerate() {
            if occ.len() > 2 {
                let e = &edges[id];
                return Err(MeshError::NonManifoldEdge {
                    n0: e.nodes[0],
                    n1: e.nodes[1],
                });
            }
            let any_interior = occ.iter().any(|&(c, _, _)| c < self.n_interior);
            if self.boundary == BoundaryKind::Periodic && occ.len() != 2 {
                let e = &edges[id];
                return Err(MeshError::UnpairedPeriodicEdge {
                    n0: e.nodes[0],
                    n1: e.nodes[1],
                });
            }
            if self.boundary == BoundaryKind::ZeroGradient && any_interior && occ.len() != 2 {
                return Err(MeshError::Validation(
                    "physical edge left unpaired after ghost construction".into(),
                ));
            }
            // lower cell id is L; normal points out of it
            let mut occ = occ.clone();
            occ.sort_by_key(|&(c, _, _)| c);
            let (lc, a, b) = occ[0];
            let rc = occ.get(1).map(|&(c, _, _)| c);
            let (pa, pb) = (self.geo_nodes[a], self.geo_nodes[b]);
            let t = pb - pa;
            edges[id].length = t.norm();
            edges[id].normal = t.perp().normalized();
            edges[id].cells = [Some(lc), rc];
        }
        let n_physical_edges = edge_occ
            .iter()
            .filter(|occ| occ.iter().any(|&(c, _, _)| c < self.n_interior))
            .count();

        let mut node_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); n_canon];
        for (id, e) in edges.iter().enumerate() {
            node_edges[e.nodes[0]].push(id);
            node_edges[e.nodes[1]].push(id);
        }
        for list in node_edges.iter_mut() {
            list.sort_unstable();
        }

        // least-squares stencils for physical cells
        let mut stencil_edge: Vec<Vec<(CellId, Vec2)>> = vec![Vec::new(); n_all_cells];
        let mut stencil_node: Vec<Vec<(CellId, Vec2)>> = vec![Vec::new(); n_all_cells];
        for c in 0..self.n_interior {
            let mut seen: HashMap<CellId, Vec2> = HashMap::new();
            for corner in &cell_corners[c] {
                for &(c2, s2) in &node_cells[corner.node] {
                    if c2 == c {
                        continue;
                    }
                    seen.entry(c2).or_insert_with(|| {
                        // express the neighbor centroid in this cell's frame via
                        // the shared node's two local positions
                        let p2 = cell_corners[c2][s2 as usize].pos;
                        cell_centroid[c2] - p2 + corner.pos - cell_centroid[c]
                    });
                }
            }
            let mut nbrs: Vec<(CellId, Vec2)> = seen.into_iter().collect();
            nbrs.sort_by_key(|&(c2, _)| c2);
            // edge neighbors are the subset sharing a full edge
            let mut edge_nbrs: Vec<(CellId, Vec2)> = Vec::new();
            for &eid in &cell_edges[c] {
                let e = &edges[eid];
                let other = match e.cells {
                    [Some(a), Some(b)] if a == c => Some(b),
                    [Some(a), Some(b)] if b == c => Some(a),
                    _ => None,
                };
                if let Some(o) = other {
                    if let Some(&(_, off)) = nbrs.iter().find(|&&(c2, _)| c2 == o) {
                        if !edge_nbrs.iter().any(|&(c2, _)| c2 == o) {
                            edge_nbrs.push((o, off));
                        }
                    }
                }
            }
            edge_nbrs.sort_by_key(|&(c2, _)| c2);
            stencil_edge[c] = edge_nbrs;
            stencil_node[c] = nbrs;
        }

        let node_pos: Vec<Vec2> = self.canon_rep.iter().map(|&g| self.geo_nodes[g]).collect();

        Ok(Mesh {
            boundary: self.boundary,
            raw_nodes: self.geo_nodes[..self.raw_n_nodes].to_vec(),
            raw_cells: self.raw_cells,
            node_pos,
            node_active,
            node_interior,
            dual_area,
            sub_len,
            node_cells,
            node_edges,
            cell_corners,
            cell_centroid,
            cell_area,
            cell_edges,
            n_interior: self.n_interior,
            ghost_src: self.ghost_src,
            edges,
            n_physical_edges,
            stencil_edge,
            stencil_node,
            cart: None,
            period: self.period,
        })
    }
}
