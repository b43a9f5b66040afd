use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use vortexfv::config::{parse_config, ConfigError};
use vortexfv::driver::{self, DriverError};
use vortexfv::fourier::SymbolScheme;
use vortexfv::mesh::{self, BoundaryKind};

/// Finite volume solvers for 2D linear acoustics on polygonal meshes.
#[derive(Parser)]
#[command(name = "vortexfv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override any config key (repeatable), e.g. --set cfl=0.3.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Shorthand overrides for the common keys.
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    mesh: Option<String>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    order: Option<u8>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    outdir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
}

impl ConfigArgs {
    fn overrides(&self) -> Result<Vec<(String, String)>, ConfigError> {
        let mut kv = Vec::new();
        for s in &self.sets {
            let mut it = s.splitn(2, '=');
            let key = it.next().unwrap_or("").trim().to_string();
            let value = it.next().map(|v| v.trim().to_string());
            match value {
                Some(v) if !key.is_empty() && !v.is_empty() => kv.push((key, v)),
                _ => {
                    return Err(ConfigError::BadValue {
                        key: s.clone(),
                        msg: "--set expects KEY=VALUE".into(),
                    })
                }
            }
        }
        let mut push = |key: &str, v: Option<String>| {
            if let Some(v) = v {
                kv.push((key.to_string(), v));
            }
        };
        push("case", self.case.clone());
        push("mesh", self.mesh.clone());
        push("nx", self.nx.map(|v| v.to_string()));
        push("ny", self.ny.map(|v| v.to_string()));
        push("scheme", self.scheme.clone());
        push("order", self.order.map(|v| v.to_string()));
        push("cfl", self.cfl.map(|v| v.to_string()));
        push("t_end", self.t_end.map(|v| v.to_string()));
        push(
            "outdir",
            self.outdir.as_ref().map(|v| v.display().to_string()),
        );
        push("seed", self.seed.map(|v| v.to_string()));
        push("threads", self.threads.map(|v| v.to_string()));
        Ok(kv)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation case and write field dumps and diagnostics.
    Run(ConfigArgs),
    /// Run an oblique-wave convergence study over refinement levels.
    Converge(ConfigArgs),
    /// Sample the Fourier symbol: kernel dimensions and spectral radii.
    Fourier {
        /// nodal_pressure | nodal_velocity | nodal_pressure2
        #[arg(long, default_value = "nodal_pressure")]
        scheme: String,
        #[arg(long, default_value_t = 0.3)]
        cfl: f64,
        /// Samples per direction on the unit torus.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value = "fourier_scan.csv")]
        out: PathBuf,
    },
    /// Mesh utilities.
    Mesh {
        #[command(subcommand)]
        command: MeshCommand,
    },
    /// Discrete-operator identity checks.
    Operators {
        #[command(subcommand)]
        command: OperatorsCommand,
    },
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Generate a mesh and write it to a polymesh file.
    Gen {
        /// cartesian | quad | triquad | polygonal
        #[arg(long, default_value = "cartesian")]
        kind: String,
        #[arg(long, default_value_t = 16)]
        nx: usize,
        #[arg(long)]
        ny: Option<usize>,
        #[arg(long, default_value_t = 0.15)]
        amplitude: f64,
        #[arg(long, default_value_t = 0.5)]
        split_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// periodic | zerogradient
        #[arg(long, default_value = "periodic")]
        boundary: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Read a mesh file, validate it and print statistics.
    Check {
        #[arg(long)]
        path: PathBuf,
    },
}

#[derive(Subcommand)]
enum OperatorsCommand {
    /// Evaluate the operator identities on a mesh (generated or from file).
    Check {
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long, default_value = "triquad")]
        kind: String,
        #[arg(long, default_value_t = 16)]
        nx: usize,
        #[arg(long)]
        ny: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "periodic")]
        boundary: String,
    },
}

fn parse_boundary(s: &str) -> Result<BoundaryKind, DriverError> {
    match s {
        "periodic" => Ok(BoundaryKind::Periodic),
        "zerogradient" => Ok(BoundaryKind::ZeroGradient),
        other => Err(DriverError::Config(ConfigError::BadValue {
            key: "boundary".into(),
            msg: format!("unknown boundary '{other}'"),
        })),
    }
}

fn generate(
    kind: &str,
    nx: usize,
    ny: usize,
    amplitude: f64,
    split_fraction: f64,
    seed: u64,
    boundary: BoundaryKind,
) -> Result<mesh::Mesh, DriverError> {
    let m = match kind {
        "cartesian" => {
            mesh::generate_cartesian(nx, ny, 1.0 / nx as f64, 1.0 / ny as f64, boundary)?
        }
        "quad" => mesh::generate_perturbed_quad(nx, ny, amplitude, seed, boundary)?,
        "triquad" => mesh::generate_mixed_triquad(nx, ny, split_fraction, seed, boundary)?,
        "polygonal" => mesh::generate_polygonal(nx, ny, seed, boundary)?,
        other => {
            return Err(DriverError::Config(ConfigError::BadValue {
                key: "kind".into(),
                msg: format!("unknown mesh kind '{other}'"),
            }))
        }
    };
    Ok(m)
}

fn mesh_stats(m: &mesh::Mesh) {
    println!("cells:     {}", m.n_cells());
    println!("nodes:     {}", m.n_nodes());
    println!("edges:     {}", m.n_edges());
    println!("ghosts:    {}", m.n_cells_total() - m.n_cells());
    println!("area:      {}", m.total_area());
    let max_e = (0..m.n_cells())
        .map(|c| m.corners(c).len())
        .max()
        .unwrap_or(0);
    println!("max edges per cell: {max_e}");
    println!(
        "min length scale:   {}",
        vortexfv::timeint::min_length_scale(m)
    );
}

fn real_main() -> Result<(), DriverError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let cfg = parse_config(args.config.as_deref(), &args.overrides()?)?;
            let summary = driver::run_simulation(&cfg)?;
            println!(
                "done: {} steps to t = {}, wall {:.3} s",
                summary.steps, summary.t_end, summary.wall_seconds
            );
            println!(
                "l1 vorticity = {:e}, l1 divergence = {:e}",
                summary.l1_vorticity, summary.l1_divergence
            );
            println!("outputs in {}", cfg.outdir.display());
        }
        Command::Converge(args) => {
            let cfg = parse_config(args.config.as_deref(), &args.overrides()?)?;
            let reports = driver::run_convergence(&cfg)?;
            println!("n cells h err_u err_v err_p rate_u rate_v rate_p");
            for r in &reports {
                let fr =
                    |x: Option<f64>| x.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
                println!(
                    "{} {} {:.4e} {:.4e} {:.4e} {:.4e} {} {} {}",
                    r.n,
                    r.n_cells,
                    r.h,
                    r.error[0],
                    r.error[1],
                    r.error[2],
                    fr(r.rate[0]),
                    fr(r.rate[1]),
                    fr(r.rate[2]),
                );
            }
            println!(
                "rates written to {}",
                cfg.outdir.join("rates.csv").display()
            );
        }
        Command::Fourier {
            scheme,
            cfl,
            samples,
            out,
        } => {
            let scheme = match scheme.as_str() {
                "nodal_pressure" => SymbolScheme::NodalPressure1,
                "nodal_velocity" => SymbolScheme::NodalVelocity1,
                "nodal_pressure2" => SymbolScheme::NodalPressure2,
                other => {
                    return Err(DriverError::Config(ConfigError::BadValue {
                        key: "scheme".into(),
                        msg: format!("unknown scheme '{other}'"),
                    }))
                }
            };
            let max = driver::run_fourier(scheme, cfl, samples, &out)?;
            println!("max spectral radius at cfl {cfl}: {max:.12}");
            println!("scan written to {}", out.display());
        }
        Command::Mesh { command } => match command {
            MeshCommand::Gen {
                kind,
                nx,
                ny,
                amplitude,
                split_fraction,
                seed,
                boundary,
                out,
            } => {
                let boundary = parse_boundary(&boundary)?;
                let ny = ny.unwrap_or(nx);
                let m = generate(&kind, nx, ny, amplitude, split_fraction, seed, boundary)?;
                mesh::write_mesh(&m, &out)?;
                println!("wrote {}", out.display());
                mesh_stats(&m);
            }
            MeshCommand::Check { path } => {
                let m = mesh::read_mesh(&path)?;
                m.validate()?;
                println!("{} is valid", path.display());
                mesh_stats(&m);
            }
        },
        Command::Operators { command } => match command {
            OperatorsCommand::Check {
                mesh: mesh_path,
                kind,
                nx,
                ny,
                seed,
                boundary,
            } => {
                let m = match mesh_path {
                    Some(p) => mesh::read_mesh(&p)?,
                    None => {
                        let boundary = parse_boundary(&boundary)?;
                        let ny = ny.unwrap_or(nx);
                        generate(&kind, nx, ny, 0.15, 0.5, seed, boundary)?
                    }
                };
                let rows = driver::operator_checks(&m, seed);
                let mut all_ok = true;
                for (name, resid, tol, ok) in &rows {
                    all_ok &= ok;
                    println!(
                        "{} {name}: residual {resid:.3e} (tolerance {tol:.1e})",
                        if *ok { "PASS" } else { "FAIL" }
                    );
                }
                if !all_ok {
                    return Err(DriverError::Config(ConfigError::UnsupportedCombination(
                        "operator checks failed".into(),
                    )));
                }
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
