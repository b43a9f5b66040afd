//! Run configuration: a flat `key = value` text file with full flag
//! override (precedence: flags > file > defaults).

use crate::cases::{CaseSpec, MeshFamily};
use crate::geom::vec2;
use crate::mesh::{BoundaryKind, StencilKind};
use crate::scheme::Scheme;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config syntax error at line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("unknown config key '{0}'")]
    UnknownKey(String),
    #[error("invalid value for '{key}': {msg}")]
    BadValue { key: String, msg: String },
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeshSource {
    Family {
        family: MeshFamily,
        nx: usize,
        ny: usize,
    },
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    NodalPressure,
    NodalVelocity,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub case: CaseSpec,
    pub mesh: MeshSource,
    /// Overrides the case's natural boundary kind when set.
    pub boundary: Option<BoundaryKind>,
    pub scheme: SchemeKind,
    pub order: u8,
    pub stencil: StencilKind,
    pub cfl: f64,
    pub t_end: f64,
    /// Field-dump and observer cadence in time units (0: final state only).
    pub output_every: f64,
    pub outdir: PathBuf,
    pub seed: u64,
    /// Worker threads (0: take VORTEXFV_THREADS, else 1).
    pub threads: usize,
    /// Refinement levels for convergence runs.
    pub levels: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            case: CaseSpec::vortex_default(),
            mesh: MeshSource::Family {
                family: MeshFamily::Cartesian,
                nx: 64,
                ny: 64,
            },
            boundary: None,
            scheme: SchemeKind::NodalPressure,
            order: 1,
            stencil: StencilKind::NodeNeighbors,
            cfl: 0.3,
            t_end: 1.0,
            output_every: 0.0,
            outdir: PathBuf::from("out"),
            seed: 0,
            threads: 0,
            levels: vec![32, 64, 128],
        }
    }
}

impl RunConfig {
    pub fn boundary_kind(&self) -> BoundaryKind {
        self.boundary
            .unwrap_or_else(|| self.case.default_boundary())
    }

    pub fn scheme_select(&self) -> Scheme {
        match (self.scheme, self.order) {
            (SchemeKind::NodalPressure, 1) => Scheme::NodalPressure1,
            (SchemeKind::NodalPressure, _) => Scheme::NodalPressure2(self.stencil),
            (SchemeKind::NodalVelocity, _) => Scheme::NodalVelocity1,
        }
    }

    pub fn resolved_threads(&self) -> usize {
        if self.threads > 0 {
            return self.threads;
        }
        std::env::var("VORTEXFV_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(1)
    }
}

/// Parse the optional config file and apply `key=value` overrides on top.
pub fn parse_config(
    path: Option<&Path>,
    overrides: &[(String, String)],
) -> Result<RunConfig, ConfigError> {
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)?;
        for (ln, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut it = body.splitn(2, '=');
            let key = it.next().unwrap_or("").trim();
            let value = it
                .next()
                .ok_or(ConfigError::Syntax { line: ln + 1 })?
                .trim();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax { line: ln + 1 });
            }
            kv.insert(key.to_string(), value.to_string());
        }
    }
    for (k, v) in overrides {
        kv.insert(k.clone(), v.clone());
    }
    build_config(kv)
}

fn build_config(kv: BTreeMap<String, String>) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();

    let bad = |key: &str, msg: &str| ConfigError::BadValue {
        key: key.into(),
        msg: msg.into(),
    };
    let parse_f64 = |key: &str, v: &str| -> Result<f64, ConfigError> {
        v.parse().map_err(|_| bad(key, "expected a number"))
    };
    let parse_usize = |key: &str, v: &str| -> Result<usize, ConfigError> {
        v.parse()
            .map_err(|_| bad(key, "expected a non-negative integer"))
    };

    // case and mesh parameters may arrive in any order; collect first
    let mut case_name = "vortex".to_string();
    let mut lambda = 0.5;
    let mut theta = std::f64::consts::FRAC_PI_4;
    let mut rp_radius = 0.2;
    let mut rp_center = (0.5, 0.5);
    let mut vortex_w = 0.2;
    let mut mesh_name = "cartesian".to_string();
    let mut nx = 64usize;
    let mut ny = 0usize;
    let mut amplitude = 0.15;
    let mut split_fraction = 0.5;
    let mut mesh_file: Option<PathBuf> = None;

    for (key, v) in kv.iter() {
        match key.as_str() {
            "case" => case_name = v.clone(),
            "lambda" => lambda = parse_f64(key, v)?,
            "theta" => theta = parse_f64(key, v)?,
            "rp_radius" => rp_radius = parse_f64(key, v)?,
            "rp_center_x" => rp_center.0 = parse_f64(key, v)?,
            "rp_center_y" => rp_center.1 = parse_f64(key, v)?,
            "vortex_w" => vortex_w = parse_f64(key, v)?,
            "mesh" => mesh_name = v.clone(),
            "nx" => nx = parse_usize(key, v)?,
            "ny" => ny = parse_usize(key, v)?,
            "amplitude" => amplitude = parse_f64(key, v)?,
            "split_fraction" => split_fraction = parse_f64(key, v)?,
            "mesh_file" => mesh_file = Some(PathBuf::from(v)),
            "boundary" => {
                cfg.boundary = Some(match v.as_str() {
                    "periodic" => BoundaryKind::Periodic,
                    "zerogradient" => BoundaryKind::ZeroGradient,
                    _ => return Err(bad(key, "expected periodic|zerogradient")),
                })
            }
            "scheme" => {
                cfg.scheme = match v.as_str() {
                    "nodal_pressure" => SchemeKind::NodalPressure,
                    "nodal_velocity" => SchemeKind::NodalVelocity,
                    _ => return Err(bad(key, "expected nodal_pressure|nodal_velocity")),
                }
            }
            "order" => {
                cfg.order = match v.as_str() {
                    "1" => 1,
                    "2" => 2,
                    _ => return Err(bad(key, "expected 1 or 2")),
                }
            }
            "stencil" => {
                cfg.stencil = match v.as_str() {
                    "edge" => StencilKind::EdgeNeighbors,
                    "node" => StencilKind::NodeNeighbors,
                    _ => return Err(bad(key, "expected edge|node")),
                }
            }
            "cfl" => cfg.cfl = parse_f64(key, v)?,
            "t_end" => cfg.t_end = parse_f64(key, v)?,
            "output_every" => cfg.output_every = parse_f64(key, v)?,
            "outdir" => cfg.outdir = PathBuf::from(v),
            "seed" => cfg.seed = v.parse().map_err(|_| bad(key, "expected an integer"))?,
            "threads" => cfg.threads = parse_usize(key, v)?,
            "levels" => {
                let mut levels = Vec::new();
                for part in v.split(',') {
                    levels.push(parse_usize(key, part.trim())?);
                }
                cfg.levels = levels;
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
    }

    if ny == 0 {
        ny = nx;
    }
    cfg.case = match case_name.as_str() {
        "oblique" => CaseSpec::ObliqueWave { lambda, theta },
        "fourquadrant" => CaseSpec::FourQuadrant,
        "sphericalrp" => CaseSpec::SphericalRp {
            radius: rp_radius,
            center: vec2(rp_center.0, rp_center.1),
        },
        "vortex" => CaseSpec::StationaryVortex {
            w: vortex_w,
            center: vec2(rp_center.0, rp_center.1),
        },
        other => {
            return Err(ConfigError::BadValue {
                key: "case".into(),
                msg: format!("unknown case '{other}'"),
            })
        }
    };
    cfg.mesh = match mesh_name.as_str() {
        "cartesian" => MeshSource::Family {
            family: MeshFamily::Cartesian,
            nx,
            ny,
        },
        "quad" => MeshSource::Family {
            family: MeshFamily::PerturbedQuad { amplitude },
            nx,
            ny,
        },
        "triquad" => MeshSource::Family {
            family: MeshFamily::MixedTriquad { split_fraction },
            nx,
            ny,
        },
        "polygonal" => MeshSource::Family {
            family: MeshFamily::Polygonal,
            nx,
            ny,
        },
        "file" => MeshSource::File(mesh_file.ok_or_else(|| ConfigError::BadValue {
            key: "mesh_file".into(),
            msg: "mesh = file requires mesh_file".into(),
        })?),
        other => {
            return Err(ConfigError::BadValue {
                key: "mesh".into(),
                msg: format!("unknown mesh kind '{other}'"),
            })
        }
    };

    if cfg.scheme == SchemeKind::NodalVelocity && cfg.order == 2 {
        return Err(ConfigError::UnsupportedCombination(
            "the nodal-velocity scheme has no second-order variant".into(),
        ));
    }
    if !(cfg.cfl > 0.0 && cfg.cfl <= 1.0) {
        return Err(bad("cfl", "must lie in (0, 1]"));
    }
    if cfg.t_end < 0.0 {
        return Err(bad("t_end", "must be non-negative"));
    }
    if cfg.output_every < 0.0 {
        return Err(bad("output_every", "must be non-negative"));
    }
    Ok(cfg)
}
