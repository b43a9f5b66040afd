//! Explicit time integration: forward Euler for the first-order schemes,
//! Heun's two-stage Runge-Kutta for the second-order scheme, with the time
//! step set by a CFL number against the smallest cell length scale.

use crate::mesh::Mesh;
use crate::scheme::{Scheme, SchemeError};
use crate::state::State;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TimeIntError {
    #[error("non-finite state after step {step} (t = {t}); CFL too large or data invalid")]
    NonFiniteState { step: usize, t: f64 },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Clone, Copy, Debug)]
pub struct TimeControl {
    /// CFL number in (0, 1]; the time step is cfl · min_c h_c (wave speed 1).
    pub cfl: f64,
    pub t_end: f64,
}

/// Per-cell length scale: twice the inscribed-circle radius proxy,
/// h_c = 2 · (2|c| / |∂c|). Equals Δx on square cells.
pub fn cell_length_scale(mesh: &Mesh, c: usize) -> f64 {
    4.0 * mesh.area(c) / mesh.perimeter(c)
}

/// Global time-step length scale min_c h_c over physical cells.
pub fn min_length_scale(mesh: &Mesh) -> f64 {
    (0..mesh.n_cells())
        .map(|c| cell_length_scale(mesh, c))
        .fold(f64::MAX, f64::min)
}

/// One forward-Euler step q + Δt RHS(q).
pub fn step_euler(
    mesh: &Mesh,
    state: &State,
    dt: f64,
    scheme: Scheme,
) -> Result<State, TimeIntError> {
    let mut q = state.clone();
    let k1 = scheme.rhs(mesh, &mut q)?;
    let out = q.axpy(dt, &k1);
    if !out.all_finite(mesh.n_cells()) {
        return Err(TimeIntError::NonFiniteState { step: 0, t: 0.0 });
    }
    Ok(out)
}

/// One Heun step q + Δt/2 (RHS(q) + RHS(q + Δt RHS(q))).
pub fn step_rk2(
    mesh: &Mesh,
    state: &State,
    dt: f64,
    scheme: Scheme,
) -> Result<State, TimeIntError> {
    let mut q = state.clone();
    let k1 = scheme.rhs(mesh, &mut q)?;
    let mut mid = q.axpy(dt, &k1);
    let k2 = scheme.rhs(mesh, &mut mid)?;
    let out = q.heun_combine(dt, &k1, &k2);
    if !out.all_finite(mesh.n_cells()) {
        return Err(TimeIntError::NonFiniteState { step: 0, t: 0.0 });
    }
    Ok(out)
}

/// Advance to `t_end` exactly (the last step is clipped). The observer is
/// called with (step, t, state) at t = 0, then whenever `observe_every`
/// time units have elapsed, and at the final time.
pub fn run(
    mesh: &Mesh,
    initial: State,
    control: TimeControl,
    scheme: Scheme,
    observe_every: f64,
    mut observer: impl FnMut(usize, f64, &State),
) -> Result<(State, usize), TimeIntError> {
    let dt0 = control.cfl * min_length_scale(mesh);
    let mut state = initial;
    let mut t = 0.0;
    let mut step = 0;
    let mut next_obs = if observe_every > 0.0 {
        observe_every
    } else {
        f64::MAX
    };
    observer(0, 0.0, &state);
    while t < control.t_end - 1e-14 * control.t_end.max(1.0) {
        let dt = dt0.min(control.t_end - t);
        let stepper = if scheme.order() == 2 {
            step_rk2
        } else {
            step_euler
        };
        state = stepper(mesh, &state, dt, scheme).map_err(|e| match e {
            TimeIntError::NonFiniteState { .. } => TimeIntError::NonFiniteState { step, t },
            other => other,
        })?;
        t += dt;
        step += 1;
        if t + 1e-14 >= next_obs || t >= control.t_end - 1e-14 * control.t_end.max(1.0) {
            observer(step, t, &state);
            while next_obs <= t + 1e-14 {
                next_obs += observe_every;
            }
        }
    }
    Ok((state, step))
}
