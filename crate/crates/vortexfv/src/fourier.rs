//! Discrete-Fourier analysis of the Cartesian schemes. The evolution
//! matrix Ê(t_x, t_y) satisfies ∂_t q̂ + Ê q̂ = 0 for plane-wave data
//! q_ij = q̂ t_x^i t_y^j with t = exp(i k Δ). It is assembled here from the
//! closed-form index stencils, independently of the mesh code; plane-wave
//! application of the mesh-based right-hand sides is cross-checked against
//! −Ê q̂ in the test suites.
//!
//! The right kernel of Ê spans the discrete stationary states, the left
//! kernel the discrete involutions. Forward-Euler stability is scanned by
//! sampling the spectral radius of I − Δt Ê over the unit torus.

use num_complex::Complex64;
use rayon::prelude::*;

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Complex 3×3 matrix, row major.
#[derive(Clone, Copy, Debug)]
pub struct Mat3c(pub [[C; 3]; 3]);

impl Mat3c {
    pub const fn zero() -> Mat3c {
        Mat3c([[C::new(0.0, 0.0); 3]; 3])
    }

    pub fn identity() -> Mat3c {
        let mut m = Mat3c::zero();
        for i in 0..3 {
            m.0[i][i] = c(1.0);
        }
        m
    }

    pub fn neg(&self) -> Mat3c {
        self.scale(c(-1.0))
    }

    pub fn scale(&self, s: C) -> Mat3c {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        out
    }

    pub fn sub(&self, o: &Mat3c) -> Mat3c {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] -= o.0[i][j];
            }
        }
        out
    }

    pub fn mul_vec(&self, v: [C; 3]) -> [C; 3] {
        let mut out = [c(0.0); 3];
        for i in 0..3 {
            out[i] = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }

    pub fn det(&self) -> C {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |a, x| a.max(x.norm()))
    }

    fn column(&self, j: usize) -> [C; 3] {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    fn row(&self, i: usize) -> [C; 3] {
        self.0[i]
    }
}

fn vec_norm(v: [C; 3]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

/// Formal (bilinear, unconjugated) cross product; orthogonal to both
/// factors under the bilinear pairing, exactly like the real case.
fn cross3(a: [C; 3], b: [C; 3]) -> [C; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolScheme {
    NodalVelocity1,
    NodalPressure1,
    /// Second order with the 9-point (node-neighbor) stencil.
    NodalPressure2,
}

/// A point on the unit torus, t = exp(i k Δ).
#[derive(Clone, Copy, Debug)]
pub struct Wavenumber {
    pub tx: C,
    pub ty: C,
}

impl Wavenumber {
    pub fn from_angles(theta_x: f64, theta_y: f64) -> Wavenumber {
        Wavenumber {
            tx: C::from_polar(1.0, theta_x),
            ty: C::from_polar(1.0, theta_y),
        }
    }
}

/// Evolution matrix Ê(t_x, t_y) of the chosen scheme on a Δx × Δy grid,
/// with the convention ∂_t q̂ + Ê q̂ = 0 (so the semi-discrete right-hand
/// side applied to the plane wave is −Ê q̂).
pub fn symbol(scheme: SymbolScheme, tx: C, ty: C, dx: f64, dy: f64) -> Mat3c {
    let rhs = match scheme {
        SymbolScheme::NodalPressure1 => rhs_symbol_nodal_pressure_1(tx, ty, dx, dy),
        SymbolScheme::NodalVelocity1 => rhs_symbol_nodal_velocity_1(tx, ty, dx, dy),
        SymbolScheme::NodalPressure2 => rhs_symbol_nodal_pressure_2(tx, ty, dx, dy),
    };
    rhs.neg()
}

/// Coefficients (on û, v̂, p̂) of the nodal pressure at node (i+1/2, j+1/2),
/// relative to the phase of cell (i, j):
/// p* = {{p}}/4 − ({[u]}/(2Δx) + {[v]}/(2Δy)) / (2(1/Δx + 1/Δy)).
fn pstar_coeffs_1(tx: C, ty: C, dx: f64, dy: f64) -> [C; 3] {
    let a = tx + 1.0;
    let b = ty + 1.0;
    let ax = tx - 1.0;
    let by = ty - 1.0;
    let wsum = 1.0 / dx + 1.0 / dy;
    [
        -(ax * b / (2.0 * dx)) * 0.5 / wsum,
        -(a * by / (2.0 * dy)) * 0.5 / wsum,
        a * b * 0.25,
    ]
}

/// Right-hand-side symbol of the first-order nodal-pressure scheme.
fn rhs_symbol_nodal_pressure_1(tx: C, ty: C, dx: f64, dy: f64) -> Mat3c {
    let a = tx + 1.0;
    let b = ty + 1.0;
    let ax = tx - 1.0;
    let by = ty - 1.0;
    let t = tx * ty;
    let ps = pstar_coeffs_1(tx, ty, dx, dy);
    let mut m = Mat3c::zero();
    // du/dt = −{[p*]}_x / (2Δx), dv/dt = −{[p*]}_y / (2Δy)
    let fx = -(ax * b) / (t * 2.0 * dx);
    let fy = -(a * by) / (t * 2.0 * dy);
    for j in 0..3 {
        m.0[0][j] = fx * ps[j];
        m.0[1][j] = fy * ps[j];
    }
    // dp/dt = (1/2)(1/Δx + 1/Δy)({{p*}} − 4 p)
    let half_w = 0.5 * (1.0 / dx + 1.0 / dy);
    let avg = a * b / t;
    for j in 0..3 {
        m.0[2][j] = half_w * avg * ps[j];
    }
    m.0[2][2] -= c(4.0 * half_w);
    m
}

/// Right-hand-side symbol of the nodal-velocity scheme.
fn rhs_symbol_nodal_velocity_1(tx: C, ty: C, dx: f64, dy: f64) -> Mat3c {
    let a = tx + 1.0;
    let b = ty + 1.0;
    let ax = tx - 1.0;
    let by = ty - 1.0;
    let t = tx * ty;
    // u* = {{u}}/4 − {[p]}_x/4, v* = {{v}}/4 − {[p]}_y/4
    let us = [a * b * 0.25, c(0.0), -(ax * b) * 0.25];
    let vs = [c(0.0), a * b * 0.25, -(a * by) * 0.25];
    let mut m = Mat3c::zero();
    // du/dt = (−4u + {{u*}}) / (2Δx)
    let avg = a * b / t;
    for j in 0..3 {
        m.0[0][j] = avg * us[j] / (2.0 * dx);
        m.0[1][j] = avg * vs[j] / (2.0 * dy);
    }
    m.0[0][0] -= c(4.0 / (2.0 * dx));
    m.0[1][1] -= c(4.0 / (2.0 * dy));
    // dp/dt = −{[u*]}_x/(2Δx) − {[v*]}_y/(2Δy)
    let fx = (ax * b) / (t * 2.0 * dx);
    let fy = (a * by) / (t * 2.0 * dy);
    for j in 0..3 {
        m.0[2][j] = -(fx * us[j] + fy * vs[j]);
    }
    m
}

/// Right-hand-side symbol of the second-order nodal-pressure scheme with
/// the 9-point least-squares slopes
/// a₁ = (t_x − t_x⁻¹)(1 + t_y + t_y⁻¹)/(6Δx) (and symmetrically a₂).
fn rhs_symbol_nodal_pressure_2(tx: C, ty: C, dx: f64, dy: f64) -> Mat3c {
    let a = tx + 1.0;
    let b = ty + 1.0;
    let ax = tx - 1.0;
    let by = ty - 1.0;
    let t = tx * ty;
    let sx = (tx - tx.inv()) * (ty + ty.inv() + 1.0) / (6.0 * dx);
    let sy = (ty - ty.inv()) * (tx + tx.inv() + 1.0) / (6.0 * dy);
    // reconstruction value factor at centroid offset (ox, oy)
    let recon = |ox: f64, oy: f64| -> C { sx * ox + sy * oy + 1.0 };

    // the four cells around node (i+1/2, j+1/2): (phase, corner offset,
    // node-normal ℓ_nc n_nc)
    let cells = [
        (c(1.0), (0.5 * dx, 0.5 * dy), (0.5 * dy, 0.5 * dx)),
        (tx, (-0.5 * dx, 0.5 * dy), (-0.5 * dy, 0.5 * dx)),
        (ty, (0.5 * dx, -0.5 * dy), (0.5 * dy, -0.5 * dx)),
        (t, (-0.5 * dx, -0.5 * dy), (-0.5 * dy, -0.5 * dx)),
    ];
    let w = 0.5 * (dx + dy);
    let den = dx + dy;
    let mut ps = [c(0.0); 3];
    for &(phase, (ox, oy), (nnx, nny)) in &cells {
        let r = phase * recon(ox, oy);
        ps[2] += 0.5 * w * r / den;
        ps[0] += 0.5 * nnx * r / den;
        ps[1] += 0.5 * nny * r / den;
    }

    let mut m = Mat3c::zero();
    // velocity rows keep the first-order flux-difference structure
    let fx = -(ax * b) / (t * 2.0 * dx);
    let fy = -(a * by) / (t * 2.0 * dy);
    for j in 0..3 {
        m.0[0][j] = fx * ps[j];
        m.0[1][j] = fy * ps[j];
    }
    // pressure row: corners of the cell itself; node phases relative to it
    let corners = [
        (c(1.0), (0.5 * dx, 0.5 * dy), (0.5 * dy, 0.5 * dx)),
        (tx.inv(), (-0.5 * dx, 0.5 * dy), (-0.5 * dy, 0.5 * dx)),
        (ty.inv(), (0.5 * dx, -0.5 * dy), (0.5 * dy, -0.5 * dx)),
        (t.inv(), (-0.5 * dx, -0.5 * dy), (-0.5 * dy, -0.5 * dx)),
    ];
    let inv_area = 1.0 / (dx * dy);
    let mut row = [c(0.0); 3];
    for &(node_phase, (ox, oy), (nnx, nny)) in &corners {
        let r = recon(ox, oy); // own-cell reconstruction, phase 1
                               // velocity flux nn·v_r and the one-sided pressure part w (p_r − p*)
        row[0] += nnx * r;
        row[1] += nny * r;
        row[2] += w * r;
        for j in 0..3 {
            row[j] -= w * node_phase * ps[j];
        }
    }
    for j in 0..3 {
        m.0[2][j] = -inv_area * row[j];
    }
    m
}

/// Printed closed-form determinant of the nodal-velocity evolution matrix
/// (equal to det(−Ê) in the convention used here).
pub fn det_closed_form_nodal_velocity(tx: C, ty: C, dx: f64, dy: f64) -> C {
    let a = tx + 1.0;
    let b = ty + 1.0;
    let ax = tx - 1.0;
    let by = ty - 1.0;
    let t2 = (tx * ty) * (tx * ty);
    let first = (a * a * by * by * dx + ax * ax * b * b * dy) / (32.0 * dx * dx * dy * dy * t2);
    let second = b * b + tx * tx * b * b + 2.0 * tx * ((ty - 6.0) * ty + 1.0);
    -first * second
}

/// Numerical rank via Householder QR with column pivoting; singular values
/// below `tol` times the largest are treated as zero.
pub fn kernel_dimension(m: &Mat3c, tol: f64) -> usize {
    let mut cols = [m.column(0), m.column(1), m.column(2)];
    let mut rdiag = [0.0f64; 3];
    for k in 0..3 {
        // pivot on the largest remaining column
        let (jmax, nmax) = (k..3)
            .map(|j| {
                let n: f64 = (k..3).map(|i| cols[j][i].norm_sqr()).sum();
                (j, n.sqrt())
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        cols.swap(k, jmax);
        rdiag[k] = nmax;
        if nmax == 0.0 {
            break;
        }
        // Householder vector w ∝ x + e^{iθ}‖x‖ e_k with θ = arg x_k
        let mut w = [c(0.0); 3];
        for i in k..3 {
            w[i] = cols[k][i];
        }
        let phase = if w[k].norm() > 0.0 {
            w[k] / w[k].norm()
        } else {
            c(1.0)
        };
        w[k] += phase * nmax;
        let wn: f64 = (k..3).map(|i| w[i].norm_sqr()).sum::<f64>().sqrt();
        if wn > 0.0 {
            for x in w.iter_mut().skip(k) {
                *x /= wn;
            }
            for col in cols.iter_mut().skip(k + 1) {
                let dot: C = (k..3).map(|i| w[i].conj() * col[i]).sum();
                for i in k..3 {
                    col[i] -= 2.0 * dot * w[i];
                }
            }
        }
    }
    let rank = (0..3)
        .filter(|&k| rdiag[k] > tol * rdiag[0].max(1e-300))
        .count();
    3 - rank
}

/// Basis row of the left kernel when it is one-dimensional: a row r with
/// r Ê = 0, found as the cross product of the two largest columns.
pub fn left_kernel(m: &Mat3c) -> Option<[C; 3]> {
    if kernel_dimension(&transpose(m), 1e-10) != 1 {
        return None;
    }
    best_cross([m.column(0), m.column(1), m.column(2)])
}

/// Basis vector of the right kernel when it is one-dimensional.
pub fn right_kernel(m: &Mat3c) -> Option<[C; 3]> {
    if kernel_dimension(m, 1e-10) != 1 {
        return None;
    }
    best_cross([m.row(0), m.row(1), m.row(2)])
}

fn transpose(m: &Mat3c) -> Mat3c {
    let mut t = Mat3c::zero();
    for i in 0..3 {
        for j in 0..3 {
            t.0[i][j] = m.0[j][i];
        }
    }
    t
}

fn best_cross(v: [[C; 3]; 3]) -> Option<[C; 3]> {
    let mut best: Option<[C; 3]> = None;
    let mut best_norm = 0.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let x = cross3(v[i], v[j]);
        let n = vec_norm(x);
        if n > best_norm {
            best_norm = n;
            best = Some(x);
        }
    }
    let scale = v.iter().map(|r| vec_norm(*r)).fold(0.0f64, f64::max);
    if best_norm <= 1e-13 * scale * scale {
        None
    } else {
        best
    }
}

/// Roots of the characteristic polynomial. Cardano seeds are polished by
/// Newton; the best-separated root is then deflated and the remaining pair
/// solved in closed form, which keeps double eigenvalues (common on the
/// symmetry axes of the scans) at full accuracy instead of the √ε wobble
/// an iteration would leave.
pub fn eigenvalues(m: &Mat3c) -> [C; 3] {
    let tr = m.0[0][0] + m.0[1][1] + m.0[2][2];
    let m2 = (m.0[1][1] * m.0[2][2] - m.0[1][2] * m.0[2][1])
        + (m.0[0][0] * m.0[2][2] - m.0[0][2] * m.0[2][0])
        + (m.0[0][0] * m.0[1][1] - m.0[0][1] * m.0[1][0]);
    let det = m.det();
    // λ³ − tr λ² + m2 λ − det =: λ³ + b λ² + cc λ + d
    let (b, cc, d) = (-tr, m2, -det);
    // depressed: λ = y − b/3, y³ + p y + q
    let p = cc - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let (ua, ub) = (-q / 2.0 + disc, -q / 2.0 - disc);
    let u3 = if ua.norm() >= ub.norm() { ua } else { ub };
    let omega = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let u = u3.powf(1.0 / 3.0);
    let mut roots = [c(0.0); 3];
    for (k, r) in roots.iter_mut().enumerate() {
        let uk = u * omega.powu(k as u32);
        let y = if uk.norm() > 1e-30 {
            uk - p / (3.0 * uk)
        } else {
            uk
        };
        *r = y - b / 3.0;
    }
    let poly = |r: C| ((r + b) * r + cc) * r + d;
    let dpoly = |r: C| (3.0 * r + 2.0 * b) * r + cc;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let df = dpoly(*r);
            if df.norm() > 1e-30 {
                *r -= poly(*r) / df;
            }
        }
    }
    // deflate by the root with the largest |p'|: it is the best separated
    let k0 = (0..3)
        .max_by(|&i, &j| dpoly(roots[i]).norm().total_cmp(&dpoly(roots[j]).norm()))
        .unwrap();
    let r0 = roots[k0];
    // λ³ + b λ² + cc λ + d = (λ − r0)(λ² + b1 λ + c1)
    let b1 = b + r0;
    let c1 = cc + b1 * r0;
    let s = (b1 * b1 - 4.0 * c1).sqrt();
    // avoid cancellation in the quadratic formula
    let t = if (b1 + s).norm() >= (b1 - s).norm() {
        -(b1 + s) / 2.0
    } else {
        -(b1 - s) / 2.0
    };
    let (r1, r2) = if t.norm() > 1e-300 {
        (t, c1 / t)
    } else {
        (t, -b1 - t)
    };
    [r0, r1, r2]
}

pub fn spectral_radius(m: &Mat3c) -> f64 {
    eigenvalues(m).iter().fold(0.0f64, |a, l| a.max(l.norm()))
}

/// Maximum spectral radius of the forward-Euler amplification matrix
/// I − Δt Ê over an n × n uniform sampling of the unit torus, with
/// Δt = cfl (unit spacing, wave speed 1).
pub fn stability_scan(scheme: SymbolScheme, cfl: f64, n: usize) -> f64 {
    (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (jx, jy) = (idx % n, idx / n);
            let th = std::f64::consts::TAU;
            let k = Wavenumber::from_angles(th * jx as f64 / n as f64, th * jy as f64 / n as f64);
            let e = symbol(scheme, k.tx, k.ty, 1.0, 1.0);
            if e.max_abs() < 1e-13 {
                // exactly the constant mode: amplification is the identity
                return 1.0;
            }
            let g = Mat3c::identity().sub(&e.scale(c(cfl)));
            spectral_radius(&g)
        })
        .reduce(|| 0.0, f64::max)
}
