//! Benchmark setups on the unit square: an oblique sound wave with exact solution,
//! the four-quadrant Riemann problem with its singular radial profile, a
//! spherical (circular) Riemann problem, and a stationary vortex. Plus the
//! L¹ error norms, nodal diagnostics and the convergence-study harness.

use crate::geom::{vec2, Vec2};
use crate::mesh::{
    generate_cartesian, generate_mixed_triquad, generate_perturbed_quad, generate_polygonal,
    BoundaryKind, Mesh, MeshError,
};
use crate::scheme::Scheme;
use crate::state::State;
use crate::timeint::{run, TimeControl, TimeIntError};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("radial profile undefined for r/t <= 0")]
    DomainError,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaseSpec {
    /// p₀ = cos(2π ξ/(λ cos θ)), v₀ = 0, ξ = x cos θ + y sin θ; periodic.
    ObliqueWave { lambda: f64, theta: f64 },
    /// u₀ = 1 in the upper-right quadrant, 0 elsewhere; zero-gradient.
    FourQuadrant,
    /// p₀ = 1 inside a circle, 0 outside, v₀ = 0; zero-gradient.
    SphericalRp { radius: f64, center: Vec2 },
    /// Divergence-free vortex with triangular speed profile, p₀ = 0.
    StationaryVortex { w: f64, center: Vec2 },
}

impl CaseSpec {
    pub fn oblique_default() -> CaseSpec {
        CaseSpec::ObliqueWave {
            lambda: 0.5,
            theta: std::f64::consts::FRAC_PI_4,
        }
    }

    pub fn spherical_default() -> CaseSpec {
        CaseSpec::SphericalRp {
            radius: 0.2,
            center: vec2(0.5, 0.5),
        }
    }

    pub fn vortex_default() -> CaseSpec {
        CaseSpec::StationaryVortex {
            w: 0.2,
            center: vec2(0.5, 0.5),
        }
    }

    pub fn default_boundary(&self) -> BoundaryKind {
        match self {
            CaseSpec::ObliqueWave { .. } | CaseSpec::StationaryVortex { .. } => {
                BoundaryKind::Periodic
            }
            CaseSpec::FourQuadrant | CaseSpec::SphericalRp { .. } => BoundaryKind::ZeroGradient,
        }
    }

    /// Pointwise initial data (u, v, p).
    pub fn initial(&self, x: Vec2) -> (f64, f64, f64) {
        match *self {
            CaseSpec::ObliqueWave { lambda, theta } => {
                let xi = x.x * theta.cos() + x.y * theta.sin();
                (0.0, 0.0, (TAU * xi / (lambda * theta.cos())).cos())
            }
            CaseSpec::FourQuadrant => {
                let u = if x.x > 0.5 && x.y > 0.5 { 1.0 } else { 0.0 };
                (u, 0.0, 0.0)
            }
            CaseSpec::SphericalRp { radius, center } => {
                let p = if (x - center).norm() < radius {
                    1.0
                } else {
                    0.0
                };
                (0.0, 0.0, p)
            }
            CaseSpec::StationaryVortex { w, center } => {
                let d = x - center;
                let r = d.norm();
                let speed = vortex_speed(r, w);
                if r > 0.0 {
                    (-speed * d.y / r, speed * d.x / r, 0.0)
                } else {
                    (0.0, 0.0, 0.0)
                }
            }
        }
    }
}

/// Triangular vortex speed profile: r/w below w, 2 − r/w up to 2w, then 0.
pub fn vortex_speed(r: f64, w: f64) -> f64 {
    if r < w {
        r / w
    } else if r < 2.0 * w {
        2.0 - r / w
    } else {
        0.0
    }
}

/// Cell data set by evaluating the initial fields at centroids (no cell
/// averaging); ghost cells are filled by their zero-gradient copy.
pub fn initialize(case: &CaseSpec, mesh: &Mesh) -> State {
    let mut s = State::zeros(mesh);
    for c in 0..mesh.n_cells() {
        let (u, v, p) = case.initial(mesh.centroid(c));
        s.u[c] = u;
        s.v[c] = v;
        s.p[c] = p;
    }
    s.refresh_ghosts(mesh);
    s
}

/// Exact oblique-wave solution: two counter-propagating cosines along the
/// rotated coordinate ξ = x cos θ + y sin θ.
pub fn exact_oblique(t: f64, x: f64, y: f64, lambda: f64, theta: f64) -> (f64, f64, f64) {
    let xi = x * theta.cos() + y * theta.sin();
    let k = TAU / (lambda * theta.cos());
    let plus = (k * (xi + t)).cos();
    let minus = (k * (xi - t)).cos();
    let p = 0.5 * (plus + minus);
    let u = -0.5 * (plus - minus) * theta.cos();
    let v = -0.5 * (plus - minus) * theta.sin();
    (u, v, p)
}

/// Radial profile of the perpendicular velocity in the four-quadrant
/// problem: v = L(s)/(2π), L(s) = ln((1 + √(1−s²))/s), s = r/t ∈ (0, 1].
/// Returns `Ok(None)` outside the sonic circle (s > 1).
pub fn exact_fourquadrant_v(t: f64, r: f64) -> Result<Option<f64>, CaseError> {
    if t <= 0.0 || r <= 0.0 {
        return Err(CaseError::DomainError);
    }
    let s = r / t;
    if s > 1.0 {
        return Ok(None);
    }
    let l = ((1.0 + (1.0 - s * s).sqrt()) / s).ln();
    Ok(Some(l / TAU))
}

/// Per-variable L¹ errors Σ_c |c| |q_c − q_exact(x_c)| over physical cells.
pub fn error_l1(mesh: &Mesh, state: &State, exact: impl Fn(Vec2) -> (f64, f64, f64)) -> [f64; 3] {
    let mut e = [0.0; 3];
    for c in 0..mesh.n_cells() {
        let a = mesh.area(c);
        let (u, v, p) = exact(mesh.centroid(c));
        e[0] += a * (state.u[c] - u).abs();
        e[1] += a * (state.v[c] - v).abs();
        e[2] += a * (state.p[c] - p).abs();
    }
    e
}

/// Nodal diagnostics: dual-area weighted L¹ norms of the discrete curl and
/// divergence, plus the Cartesian four-cell vorticity stencil where the
/// mesh carries structured indexing. The norms run over interior-ring
/// nodes: at the physical boundary of zero-gradient meshes the nodal
/// operators lean on ghost extrapolation and the continuous description
/// defines no dual cells, so those nodes carry no diagnostic weight.
#[derive(Clone, Copy, Debug, Default)]
pub struct Diagnostics {
    pub l1_vorticity: f64,
    pub l1_divergence: f64,
    pub l1_cartesian_vorticity: Option<f64>,
}

pub fn diagnostics(mesh: &Mesh, state: &State) -> Diagnostics {
    let v: Vec<Vec2> = (0..mesh.n_cells_total())
        .map(|c| state.velocity(c))
        .collect();
    let curl = crate::operators::curl_c(mesh, &v);
    let div = crate::operators::divergence_d(mesh, &v);
    let mut l1_vorticity = 0.0;
    let mut l1_divergence = 0.0;
    for n in mesh.interior_nodes() {
        l1_vorticity += mesh.dual_area(n) * curl[n].abs();
        l1_divergence += mesh.dual_area(n) * div[n].abs();
    }
    let l1_cartesian_vorticity = mesh.cartesian().map(|info| {
        // four-cell stencil at node (i+1/2, j+1/2): [{u}]/(2Δy) − {[v]}/(2Δx)
        let periodic = mesh.boundary() == BoundaryKind::Periodic;
        let (lo, i_end, j_end) = if periodic {
            (0, info.nx as i64 - 1, info.ny as i64 - 1)
        } else {
            (0, info.nx as i64 - 2, info.ny as i64 - 2)
        };
        let mut total = 0.0;
        for j in lo..=j_end {
            for i in lo..=i_end {
                let u = |a: i64, b: i64| state.u[info.cell_at(a, b)];
                let v = |a: i64, b: i64| state.v[info.cell_at(a, b)];
                let uy =
                    ((u(i, j + 1) + u(i + 1, j + 1)) - (u(i, j) + u(i + 1, j))) / (2.0 * info.dy);
                let vx =
                    ((v(i + 1, j) + v(i + 1, j + 1)) - (v(i, j) + v(i, j + 1))) / (2.0 * info.dx);
                total += info.dx * info.dy * (uy - vx).abs();
            }
        }
        total
    });
    Diagnostics {
        l1_vorticity,
        l1_divergence,
        l1_cartesian_vorticity,
    }
}

/// Mesh families used by the benchmark and convergence runs (unit domain).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeshFamily {
    Cartesian,
    PerturbedQuad { amplitude: f64 },
    MixedTriquad { split_fraction: f64 },
    Polygonal,
}

impl MeshFamily {
    /// Build the family member with n cells per direction (the polygonal
    /// pattern uses 2n × n bricks for a comparable cell count).
    pub fn build(self, n: usize, boundary: BoundaryKind, seed: u64) -> Result<Mesh, MeshError> {
        match self {
            MeshFamily::Cartesian => {
                generate_cartesian(n, n, 1.0 / n as f64, 1.0 / n as f64, boundary)
            }
            MeshFamily::PerturbedQuad { amplitude } => {
                generate_perturbed_quad(n, n, amplitude, seed, boundary)
            }
            MeshFamily::MixedTriquad { split_fraction } => {
                generate_mixed_triquad(n, n, split_fraction, seed, boundary)
            }
            MeshFamily::Polygonal => generate_polygonal(2 * n, n, seed, boundary),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ErrorReport {
    pub n: usize,
    pub n_cells: usize,
    /// Effective mesh size 1/√N.
    pub h: f64,
    pub error: [f64; 3],
    /// Rate against the previous (coarser) level, log(e₁/e₂)/log(h₁/h₂).
    pub rate: [Option<f64>; 3],
}

#[derive(Debug, Error)]
pub enum StudyError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Time(#[from] TimeIntError),
}

/// Oblique-wave convergence study: run each refinement level to `t_end` and
/// report L¹ errors and successive rates (vs 1/√N; seeds are re-drawn per
/// level for the random families).
pub fn convergence_study(
    case: &CaseSpec,
    family: MeshFamily,
    scheme: Scheme,
    levels: &[usize],
    cfl: f64,
    t_end: f64,
    seed: u64,
) -> Result<Vec<ErrorReport>, StudyError> {
    let (lambda, theta) = match *case {
        CaseSpec::ObliqueWave { lambda, theta } => (lambda, theta),
        _ => panic!("convergence study requires the case with an exact solution"),
    };
    let mut reports: Vec<ErrorReport> = Vec::new();
    for (level, &n) in levels.iter().enumerate() {
        let mesh = family.build(n, BoundaryKind::Periodic, seed + level as u64)?;
        let initial = initialize(case, &mesh);
        let (state, _) = run(
            &mesh,
            initial,
            TimeControl { cfl, t_end },
            scheme,
            0.0,
            |_, _, _| {},
        )?;
        let error = error_l1(&mesh, &state, |x| {
            exact_oblique(t_end, x.x, x.y, lambda, theta)
        });
        let n_cells = mesh.n_cells();
        let h = 1.0 / (n_cells as f64).sqrt();
        let rate = match reports.last() {
            Some(prev) => {
                let mut r = [None; 3];
                for k in 0..3 {
                    r[k] = Some((prev.error[k] / error[k]).ln() / (prev.h / h).ln());
                }
                r
            }
            None => [None; 3],
        };
        reports.push(ErrorReport {
            n,
            n_cells,
            h,
            error,
            rate,
        });
    }
    Ok(reports)
}
