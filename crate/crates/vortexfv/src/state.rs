//! Per-cell conserved fields (u, v, p) at one time level.

use crate::geom::{vec2, Vec2};
use crate::mesh::Mesh;

#[derive(Clone, Debug, Default)]
pub struct State {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
}

impl State {
    pub fn zeros(mesh: &Mesh) -> State {
        let n = mesh.n_cells_total();
        State {
            u: vec![0.0; n],
            v: vec![0.0; n],
            p: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn velocity(&self, c: usize) -> Vec2 {
        vec2(self.u[c], self.v[c])
    }

    /// Copy the source cell state into each ghost cell.
    pub fn refresh_ghosts(&mut self, mesh: &Mesh) {
        for (g, src) in mesh.ghosts() {
            self.u[g] = self.u[src];
            self.v[g] = self.v[src];
            self.p[g] = self.p[src];
        }
    }

    /// self + dt * k, evaluated on every cell.
    pub fn axpy(&self, dt: f64, k: &State) -> State {
        let n = self.len();
        let mut out = State {
            u: Vec::with_capacity(n),
            v: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
        };
        for c in 0..n {
            out.u.push(self.u[c] + dt * k.u[c]);
            out.v.push(self.v[c] + dt * k.v[c]);
            out.p.push(self.p[c] + dt * k.p[c]);
        }
        out
    }

    /// self + dt/2 (k1 + k2).
    pub fn heun_combine(&self, dt: f64, k1: &State, k2: &State) -> State {
        let n = self.len();
        let mut out = State {
            u: Vec::with_capacity(n),
            v: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
        };
        let h = 0.5 * dt;
        for c in 0..n {
            out.u.push(self.u[c] + h * (k1.u[c] + k2.u[c]));
            out.v.push(self.v[c] + h * (k1.v[c] + k2.v[c]));
            out.p.push(self.p[c] + h * (k1.p[c] + k2.p[c]));
        }
        out
    }

    pub fn all_finite(&self, n_interior: usize) -> bool {
        self.u[..n_interior].iter().all(|x| x.is_finite())
            && self.v[..n_interior].iter().all(|x| x.is_finite())
            && self.p[..n_interior].iter().all(|x| x.is_finite())
    }

    /// Area-weighted totals (Σ |c| q_c) over physical cells.
    pub fn totals(&self, mesh: &Mesh) -> (f64, f64, f64) {
        let mut t = (0.0, 0.0, 0.0);
        for c in 0..mesh.n_cells() {
            let a = mesh.area(c);
            t.0 += a * self.u[c];
            t.1 += a * self.v[c];
            t.2 += a * self.p[c];
        }
        t
    }

    pub fn max_abs(&self, n_interior: usize) -> f64 {
        let m = |xs: &[f64]| xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        m(&self.u[..n_interior])
            .max(m(&self.v[..n_interior]))
            .max(m(&self.p[..n_interior]))
    }
}
