//! Run orchestration and file outputs behind the command line interface:
//! simulations with field dumps and diagnostic time series, convergence
//! tables, Fourier scans, and the operator identity checks.

use crate::cases::{self, diagnostics, initialize, CaseSpec, ErrorReport};
use crate::config::{ConfigError, MeshSource, RunConfig};
use crate::fourier::{kernel_dimension, spectral_radius, symbol, Mat3c, SymbolScheme};
use crate::geom::Vec2;
use crate::mesh::{read_mesh, Mesh, MeshError, MeshIoError};
use crate::state::State;
use crate::timeint::{run, TimeControl, TimeIntError};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    MeshIo(#[from] MeshIoError),
    #[error(transparent)]
    Time(#[from] TimeIntError),
    #[error(transparent)]
    Study(#[from] cases::StudyError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl DriverError {
    /// Process exit code: 2 config/input error, 3 numerical failure, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            DriverError::Config(_) | DriverError::Mesh(_) => 2,
            DriverError::Time(_) => 3,
            DriverError::Study(cases::StudyError::Mesh(_)) => 2,
            DriverError::Study(cases::StudyError::Time(_)) => 3,
            DriverError::MeshIo(MeshIoError::Io(_)) => 4,
            DriverError::MeshIo(_) => 2,
            DriverError::Io(_) => 4,
        }
    }
}

pub fn build_mesh(config: &RunConfig) -> Result<Mesh, DriverError> {
    let boundary = config.boundary_kind();
    match &config.mesh {
        MeshSource::Family { family, nx, ny } => {
            let mesh = match family {
                cases::MeshFamily::Cartesian => crate::mesh::generate_cartesian(
                    *nx,
                    *ny,
                    1.0 / *nx as f64,
                    1.0 / *ny as f64,
                    boundary,
                )?,
                cases::MeshFamily::PerturbedQuad { amplitude } => {
                    crate::mesh::generate_perturbed_quad(
                        *nx,
                        *ny,
                        *amplitude,
                        config.seed,
                        boundary,
                    )?
                }
                cases::MeshFamily::MixedTriquad { split_fraction } => {
                    crate::mesh::generate_mixed_triquad(
                        *nx,
                        *ny,
                        *split_fraction,
                        config.seed,
                        boundary,
                    )?
                }
                cases::MeshFamily::Polygonal => {
                    crate::mesh::generate_polygonal(*nx, *ny, config.seed, boundary)?
                }
            };
            Ok(mesh)
        }
        MeshSource::File(path) => Ok(read_mesh(path)?),
    }
}

fn write_field_dump(mesh: &Mesh, state: &State, path: &Path) -> Result<(), DriverError> {
    let mut out = String::new();
    out.push_str("cell_id,x_c,y_c,area,u,v,p\n");
    for c in 0..mesh.n_cells() {
        let x = mesh.centroid(c);
        writeln!(
            out,
            "{c},{},{},{},{},{},{}",
            x.x,
            x.y,
            mesh.area(c),
            state.u[c],
            state.v[c],
            state.p[c]
        )
        .unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_nodal_dump(mesh: &Mesh, state: &State, path: &Path) -> Result<(), DriverError> {
    let v: Vec<Vec2> = (0..mesh.n_cells_total())
        .map(|c| state.velocity(c))
        .collect();
    let div = crate::operators::divergence_d(mesh, &v);
    let curl = crate::operators::curl_c(mesh, &v);
    let mut out = String::new();
    out.push_str("node_id,x,y,dual_area,div,curl\n");
    for n in mesh.active_nodes() {
        let p = mesh.node_pos(n);
        writeln!(
            out,
            "{n},{},{},{},{},{}",
            p.x,
            p.y,
            mesh.dual_area(n),
            div[n],
            curl[n]
        )
        .unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Radial scatter export: r (distance of the centroid from `center`) and
/// one value per cell.
pub fn write_radial_scatter(
    mesh: &Mesh,
    center: Vec2,
    values: &[f64],
    path: &Path,
) -> Result<(), DriverError> {
    let mut out = String::new();
    out.push_str("r,value\n");
    for c in 0..mesh.n_cells() {
        let r = (mesh.centroid(c) - center).norm();
        writeln!(out, "{r},{}", values[c]).unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[derive(Clone, Debug, Default)]
pub struct RunSummary {
    pub steps: usize,
    pub t_end: f64,
    pub totals_initial: (f64, f64, f64),
    pub totals_final: (f64, f64, f64),
    pub l1_vorticity: f64,
    pub l1_divergence: f64,
    pub wall_seconds: f64,
}

/// Execute a simulation run: field dumps at the configured cadence, a
/// diagnostic time series, final nodal dump, manifest and summary.
pub fn run_simulation(config: &RunConfig) -> Result<RunSummary, DriverError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.resolved_threads())
        .build()
        .expect("thread pool");
    pool.install(|| run_simulation_inner(config))
}

fn run_simulation_inner(config: &RunConfig) -> Result<RunSummary, DriverError> {
    let start = std::time::Instant::now();
    std::fs::create_dir_all(&config.outdir)?;
    write_manifest(config)?;

    let mesh = build_mesh(config)?;
    let scheme = config.scheme_select();
    if scheme.order() == 2 {
        let max_edges = (0..mesh.n_cells())
            .map(|c| mesh.corners(c).len())
            .max()
            .unwrap_or(0);
        if max_edges > 4 {
            eprintln!(
                "warning: second order on a mesh with {max_edges}-sided cells; \
                 this combination is unstable over very long integration times"
            );
        }
    }
    let initial = initialize(&config.case, &mesh);
    let totals_initial = initial.totals(&mesh);

    let mut series = String::from("t,max_abs,l1_vorticity,l1_divergence\n");
    let mut dump_idx = 0usize;
    let outdir = config.outdir.clone();
    let mut dump_err: Option<DriverError> = None;
    let observe_every = config.output_every;
    let (final_state, steps) = run(
        &mesh,
        initial,
        TimeControl {
            cfl: config.cfl,
            t_end: config.t_end,
        },
        scheme,
        observe_every,
        |_step, t, state| {
            let d = diagnostics(&mesh, state);
            writeln!(
                series,
                "{t},{},{},{}",
                state.max_abs(mesh.n_cells()),
                d.l1_vorticity,
                d.l1_divergence
            )
            .unwrap();
            if observe_every > 0.0 && dump_err.is_none() {
                let path = outdir.join(format!("fields_{dump_idx:04}.csv"));
                if let Err(e) = write_field_dump(&mesh, state, &path) {
                    dump_err = Some(e);
                }
                dump_idx += 1;
            }
        },
    )?;
    if let Some(e) = dump_err {
        return Err(e);
    }

    write_field_dump(&mesh, &final_state, &config.outdir.join("fields_final.csv"))?;
    write_nodal_dump(&mesh, &final_state, &config.outdir.join("nodal_final.csv"))?;
    std::fs::write(config.outdir.join("series.csv"), series)?;

    let d = diagnostics(&mesh, &final_state);
    let summary = RunSummary {
        steps,
        t_end: config.t_end,
        totals_initial,
        totals_final: final_state.totals(&mesh),
        l1_vorticity: d.l1_vorticity,
        l1_divergence: d.l1_divergence,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    let mut text = String::from("{\n");
    writeln!(text, "  \"steps\": {},", summary.steps).unwrap();
    writeln!(text, "  \"t_end\": {},", summary.t_end).unwrap();
    writeln!(
        text,
        "  \"totals_initial\": [{}, {}, {}],",
        summary.totals_initial.0, summary.totals_initial.1, summary.totals_initial.2
    )
    .unwrap();
    writeln!(
        text,
        "  \"totals_final\": [{}, {}, {}],",
        summary.totals_final.0, summary.totals_final.1, summary.totals_final.2
    )
    .unwrap();
    writeln!(text, "  \"l1_vorticity\": {},", summary.l1_vorticity).unwrap();
    writeln!(text, "  \"l1_divergence\": {},", summary.l1_divergence).unwrap();
    writeln!(text, "  \"wall_seconds\": {}", summary.wall_seconds).unwrap();
    text.push_str("}\n");
    std::fs::write(config.outdir.join("summary.json"), text)?;
    Ok(summary)
}

fn write_manifest(config: &RunConfig) -> Result<(), DriverError> {
    let mut m = String::new();
    writeln!(m, "vortexfv {}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(m, "case = {:?}", config.case).unwrap();
    writeln!(m, "mesh = {:?}", config.mesh).unwrap();
    writeln!(m, "boundary = {:?}", config.boundary_kind()).unwrap();
    writeln!(m, "scheme = {:?}", config.scheme_select()).unwrap();
    writeln!(m, "cfl = {}", config.cfl).unwrap();
    writeln!(m, "t_end = {}", config.t_end).unwrap();
    writeln!(m, "output_every = {}", config.output_every).unwrap();
    writeln!(m, "seed = {}", config.seed).unwrap();
    writeln!(m, "threads = {}", config.resolved_threads()).unwrap();
    std::fs::write(config.outdir.join("manifest.txt"), m)?;
    Ok(())
}

/// Convergence study driver; writes `rates.csv` into the output directory.
pub fn run_convergence(config: &RunConfig) -> Result<Vec<ErrorReport>, DriverError> {
    std::fs::create_dir_all(&config.outdir)?;
    let family = match &config.mesh {
        MeshSource::Family { family, .. } => *family,
        MeshSource::File(_) => {
            return Err(DriverError::Config(ConfigError::UnsupportedCombination(
                "convergence runs need a generated mesh family, not a mesh file".into(),
            )))
        }
    };
    let case = match config.case {
        c @ CaseSpec::ObliqueWave { .. } => c,
        _ => {
            return Err(DriverError::Config(ConfigError::UnsupportedCombination(
                "convergence runs require the oblique wave (the case with an exact solution)"
                    .into(),
            )))
        }
    };
    let reports = cases::convergence_study(
        &case,
        family,
        config.scheme_select(),
        &config.levels,
        config.cfl,
        config.t_end,
        config.seed,
    )?;
    let mut out = String::from("n,cells,h,err_u,err_v,err_p,rate_u,rate_v,rate_p\n");
    for r in &reports {
        let fmt_rate = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.n_cells,
            r.h,
            r.error[0],
            r.error[1],
            r.error[2],
            fmt_rate(r.rate[0]),
            fmt_rate(r.rate[1]),
            fmt_rate(r.rate[2]),
        )
        .unwrap();
    }
    std::fs::write(config.outdir.join("rates.csv"), out)?;
    Ok(reports)
}

/// Fourier scan driver: kernel dimension and forward-Euler spectral radius
/// on an n × n sampling of the unit torus, written as CSV.
pub fn run_fourier(
    scheme: SymbolScheme,
    cfl: f64,
    samples: usize,
    out_path: &Path,
) -> Result<f64, DriverError> {
    let mut out = String::from("k_x,k_y,kernel_dim,spectral_radius\n");
    let mut max_radius: f64 = 0.0;
    for jy in 0..samples {
        for jx in 0..samples {
            let kx = std::f64::consts::TAU * jx as f64 / samples as f64;
            let ky = std::f64::consts::TAU * jy as f64 / samples as f64;
            let e = symbol(
                scheme,
                Complex64::from_polar(1.0, kx),
                Complex64::from_polar(1.0, ky),
                1.0,
                1.0,
            );
            let dim = kernel_dimension(&e, 1e-10);
            let rho = if e.max_abs() < 1e-13 {
                1.0
            } else {
                spectral_radius(&Mat3c::identity().sub(&e.scale(Complex64::new(cfl, 0.0))))
            };
            max_radius = max_radius.max(rho);
            writeln!(out, "{kx},{ky},{dim},{rho}").unwrap();
        }
    }
    if let Some(dir) = out_path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(out_path, out)?;
    Ok(max_radius)
}

/// Operator identity report for `operators check`: evaluates the exactness,
/// duality, weak-averaging and annihilation identities on a given mesh and
/// returns (description, residual, tolerance, pass) rows.
pub fn operator_checks(mesh: &Mesh, seed: u64) -> Vec<(String, f64, f64, bool)> {
    use crate::operators::{alpha_coeffs, curl_c, divergence_d, gradient_g};
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut push = |name: &str, resid: f64, tol: f64| {
        rows.push((name.to_string(), resid, tol, resid <= tol));
    };

    // gradient exactness on affine data (evaluated in each cell's frame via
    // a nodal field; valid on any boundary kind because it is per cell)
    let (bx, by) = (3.0, -2.0);
    let phi: Vec<f64> = (0..mesh.n_nodes_total())
        .map(|n| {
            let p = mesh.node_pos(n);
            1.0 + bx * p.x + by * p.y
        })
        .collect();
    if mesh.boundary() == crate::mesh::BoundaryKind::ZeroGradient {
        let g = gradient_g(mesh, &phi);
        let resid = (0..mesh.n_cells())
            .map(|c| (g[c] - crate::geom::vec2(bx, by)).norm())
            .fold(0.0f64, f64::max);
        push(
            "gradient exact on affine data",
            resid,
            1e-12 * (bx.abs() + by.abs()),
        );
    }

    let rand_phi: Vec<f64> = (0..mesh.n_nodes_total())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    let rand_v: Vec<Vec2> = (0..mesh.n_cells_total())
        .map(|_| crate::geom::vec2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();

    if mesh.boundary() == crate::mesh::BoundaryKind::Periodic {
        // duality of G and D
        let d = divergence_d(mesh, &rand_v);
        let g = gradient_g(mesh, &rand_phi);
        let lhs: f64 = mesh
            .active_nodes()
            .map(|n| d[n] * rand_phi[n] * mesh.dual_area(n))
            .sum();
        let rhs: f64 = (0..mesh.n_cells())
            .map(|c| rand_v[c].dot(g[c]) * mesh.area(c))
            .sum();
        let scale = lhs.abs().max(rhs.abs()).max(1e-30);
        push(
            "divergence is the l2 dual of the gradient",
            (lhs + rhs).abs() / scale,
            1e-12,
        );

        // weak averaging of the alpha weights
        let alpha = alpha_coeffs(mesh);
        let lhs: f64 = (0..mesh.n_cells())
            .map(|c| {
                mesh.area(c)
                    * mesh
                        .corners(c)
                        .iter()
                        .zip(alpha[c].iter())
                        .map(|(k, &a)| a * rand_phi[k.node])
                        .sum::<f64>()
            })
            .sum();
        let rhs: f64 = mesh
            .active_nodes()
            .map(|n| mesh.dual_area(n) * rand_phi[n])
            .sum();
        push(
            "alpha weights: weak averaging identity",
            (lhs - rhs).abs() / rhs.abs().max(1.0),
            1e-12,
        );

        // curl annihilation of gradients (only guaranteed up to quadrangles)
        let g = gradient_g(mesh, &rand_phi);
        let c = curl_c(mesh, &g);
        let resid = mesh
            .active_nodes()
            .map(|n| c[n].abs())
            .fold(0.0f64, f64::max);
        let h = (mesh.total_area() / mesh.n_cells() as f64).sqrt();
        let max_edges = (0..mesh.n_cells())
            .map(|c| mesh.corners(c).len())
            .max()
            .unwrap_or(0);
        if max_edges <= 4 {
            push(
                "curl annihilates gradients (tri-quad mesh)",
                resid * h,
                1e-12,
            );
        } else {
            let ok = resid * h > 1e-6;
            rows.push((
                "curl does NOT annihilate gradients (cells with >4 edges present)".into(),
                resid * h,
                1e-6,
                ok,
            ));
        }
    }
    rows
}
