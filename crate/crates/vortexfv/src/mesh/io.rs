//! Plain-text mesh files.
//!
//! ```text
//! polymesh 1
//! nodes N
//! x y            (N lines)
//! cells M
//! k i1 ... ik    (M lines, counterclockwise node indices)
//! boundary periodic|zerogradient
//! ```
//!
//! Whitespace-delimited; `#` starts a comment. Periodic meshes additionally
//! carry a `# domain Lx Ly` comment so the fundamental-domain period does
//! not have to be inferred from the node bounding box (which would be wrong
//! for meshes whose seam cells overhang the domain).

use super::{BoundaryKind, BuildOptions, Mesh, MeshError};
use crate::geom::{vec2, Vec2};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshIoError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn write_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<(), MeshIoError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "polymesh 1")?;
    if let Some(p) = mesh.period() {
        writeln!(out, "# domain {} {}", p.x, p.y)?;
    }
    let (nodes, cells) = mesh.raw();
    writeln!(out, "nodes {}", nodes.len())?;
    for p in nodes {
        writeln!(out, "{} {}", p.x, p.y)?;
    }
    writeln!(out, "cells {}", cells.len())?;
    for c in cells {
        write!(out, "{}", c.len())?;
        for v in c {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    let kind = match mesh.boundary() {
        BoundaryKind::Periodic => "periodic",
        BoundaryKind::ZeroGradient => "zerogradient",
    };
    writeln!(out, "boundary {kind}")?;
    Ok(())
}

struct Tokens {
    toks: Vec<(usize, String)>,
    pos: usize,
}

impl Tokens {
    fn next(&mut self) -> Option<(usize, &str)> {
        let t = self.toks.get(self.pos)?;
        self.pos += 1;
        Some((t.0, t.1.as_str()))
    }

    fn expect(&mut self, what: &str) -> Result<(usize, String), MeshIoError> {
        let last_line = self.toks.last().map(|t| t.0).unwrap_or(0);
        match self.next() {
            Some((line, t)) => Ok((line, t.to_string())),
            None => Err(MeshIoError::Parse {
                line: last_line,
                msg: format!("unexpected end of file, expected {what}"),
            }),
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, MeshIoError> {
        let (line, t) = self.expect(what)?;
        t.parse::<T>().map_err(|_| MeshIoError::Parse {
            line,
            msg: format!("expected {what}, got '{t}'"),
        })
    }
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh, MeshIoError> {
    let text = std::fs::read_to_string(path)?;
    let mut period: Option<Vec2> = None;
    let mut toks = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = match raw.find('#') {
            Some(k) => {
                let comment = raw[k + 1..].trim();
                let mut it = comment.split_whitespace();
                if it.next() == Some("domain") {
                    let lx = it.next().and_then(|s| s.parse::<f64>().ok());
                    let ly = it.next().and_then(|s| s.parse::<f64>().ok());
                    if let (Some(lx), Some(ly)) = (lx, ly) {
                        period = Some(vec2(lx, ly));
                    }
                }
                &raw[..k]
            }
            None => raw,
        };
        for t in body.split_whitespace() {
            toks.push((line, t.to_string()));
        }
    }
    let mut tk = Tokens { toks, pos: 0 };

    let (line, magic) = tk.expect("header 'polymesh'")?;
    let (_, version) = tk.expect("format version")?;
    if magic != "polymesh" || version != "1" {
        return Err(MeshIoError::Parse {
            line,
            msg: "expected header 'polymesh 1'".into(),
        });
    }
    let (line, kw) = tk.expect("'nodes'")?;
    if kw != "nodes" {
        return Err(MeshIoError::Parse {
            line,
            msg: format!("expected 'nodes', got '{kw}'"),
        });
    }
    let n: usize = tk.number("node count")?;
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        let x: f64 = tk.number("node x coordinate")?;
        let y: f64 = tk.number("node y coordinate")?;
        nodes.push(vec2(x, y));
    }
    let (line, kw) = tk.expect("'cells'")?;
    if kw != "cells" {
        return Err(MeshIoError::Parse {
            line,
            msg: format!("expected 'cells', got '{kw}'"),
        });
    }
    let m: usize = tk.number("cell count")?;
    let mut cells = Vec::with_capacity(m);
    for _ in 0..m {
        let k: usize = tk.number("cell node count")?;
        let mut cell = Vec::with_capacity(k);
        for _ in 0..k {
            cell.push(tk.number::<usize>("node index")?);
        }
        cells.push(cell);
    }
    let (line, kw) = tk.expect("'boundary'")?;
    if kw != "boundary" {
        return Err(MeshIoError::Parse {
            line,
            msg: format!("expected 'boundary', got '{kw}'"),
        });
    }
    let (line, kind) = tk.expect("boundary kind")?;
    let boundary = match kind.as_str() {
        "periodic" => BoundaryKind::Periodic,
        "zerogradient" => BoundaryKind::ZeroGradient,
        other => {
            return Err(MeshIoError::Parse {
                line,
                msg: format!("unknown boundary kind '{other}'"),
            })
        }
    };
    if let Some((line, t)) = tk.next() {
        return Err(MeshIoError::Parse {
            line,
            msg: format!("trailing content '{t}'"),
        });
    }
    Ok(Mesh::build(
        nodes,
        cells,
        boundary,
        BuildOptions {
            fix_orientation: false,
            period,
        },
    )?)
}
