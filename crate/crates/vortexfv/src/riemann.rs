//! One-dimensional acoustic Riemann solvers (sound speed 1, wave speeds
//! −1, 0, 1): the classical exact solver and the two one-sided-flux solvers
//! that leave one value free (a velocity or a pressure), later fixed by
//! conservation around mesh nodes. Plus the rotation that embeds the
//! 1D problems on arbitrarily oriented subedges.

use crate::geom::{vec2, Vec2};

/// Trace state on one side of a discontinuity with unit normal n:
/// u = v·n (normal velocity), v = v·n⊥ (tangential velocity), p pressure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcousticState {
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl AcousticState {
    pub fn new(u: f64, v: f64, p: f64) -> Self {
        AcousticState { u, v, p }
    }
}

/// One-sided fluxes across a subedge. `flux_u_*` are the fluxes of the
/// normal velocity (pressures p̄), `flux_p_*` the fluxes of the pressure
/// (normal velocities ū). The tangential velocity has no flux.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitFlux {
    pub flux_u_l: f64,
    pub flux_u_r: f64,
    pub flux_p_l: f64,
    pub flux_p_r: f64,
}

/// Exact middle-state values of the classical solver:
/// u* = (u_R + u_L)/2 − (p_R − p_L)/2, p* = (p_R + p_L)/2 − (u_R − u_L)/2.
pub fn solve_classical(l: AcousticState, r: AcousticState) -> (f64, f64) {
    let u_star = 0.5 * (r.u + l.u) - 0.5 * (r.p - l.p);
    let p_star = 0.5 * (r.p + l.p) - 0.5 * (r.u - l.u);
    (u_star, p_star)
}

/// Solver with a free pressure: both sides see the same flux of u (namely
/// p*), while the pressure fluxes are one-sided:
/// ū_L = u_L + p_L − p*, ū_R = u_R − p_R + p*.
pub fn flux_free_pressure(l: AcousticState, r: AcousticState, p_star: f64) -> SplitFlux {
    SplitFlux {
        flux_u_l: p_star,
        flux_u_r: p_star,
        flux_p_l: l.u + l.p - p_star,
        flux_p_r: r.u - r.p + p_star,
    }
}

/// Solver with a free velocity: both sides see the same flux of p (namely
/// u*), while the fluxes of u are one-sided:
/// p̄_L = p_L + u_L − u*, p̄_R = p_R − u_R + u*.
pub fn flux_free_velocity(l: AcousticState, r: AcousticState, u_star: f64) -> SplitFlux {
    SplitFlux {
        flux_u_l: l.p + l.u - u_star,
        flux_u_r: r.p - r.u + u_star,
        flux_p_l: u_star,
        flux_p_r: u_star,
    }
}

/// Unit normal defining the rotation into the frame of a discontinuity.
#[derive(Clone, Copy, Debug)]
pub struct Rotation {
    pub n: Vec2,
}

impl Rotation {
    pub fn new(n: Vec2) -> Rotation {
        debug_assert!((n.norm() - 1.0).abs() < 1e-12);
        Rotation { n }
    }
}

/// Velocity vector into (normal, tangential) components: (v·n, v·n⊥) with
/// n⊥ = (−n_y, n_x). Pressure is untouched by rotation.
pub fn rotate_in(v: Vec2, rot: Rotation) -> (f64, f64) {
    (
        rot.n.x * v.x + rot.n.y * v.y,
        -rot.n.y * v.x + rot.n.x * v.y,
    )
}

/// Inverse rotation: assemble the velocity vector from (normal, tangential).
pub fn rotate_out(normal: f64, tangential: f64, rot: Rotation) -> Vec2 {
    vec2(
        rot.n.x * normal - rot.n.y * tangential,
        rot.n.y * normal + rot.n.x * tangential,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classical_no_jump() {
        let q = AcousticState::new(0.2, -0.4, 1.3);
        let (u, p) = solve_classical(q, q);
        assert_eq!(u, q.u);
        assert_eq!(p, q.p);
    }

    #[test]
    fn classical_velocity_jump() {
        let (u, p) = solve_classical(
            AcousticState::new(1.0, 0.0, 0.0),
            AcousticState::new(0.0, 0.0, 0.0),
        );
        assert_eq!((u, p), (0.5, 0.5));
    }

    #[test]
    fn classical_pressure_jump() {
        let (u, p) = solve_classical(
            AcousticState::new(0.0, 0.0, 1.0),
            AcousticState::new(0.0, 0.0, 0.0),
        );
        assert_eq!((u, p), (0.5, 0.5));
    }

    #[test]
    fn free_pressure_evaluations() {
        let q = AcousticState::new(0.75, 0.0, 0.5);
        let f = flux_free_pressure(q, q, q.p);
        assert_eq!(f.flux_p_l, q.u);
        assert_eq!(f.flux_p_r, q.u);

        let f = flux_free_pressure(
            AcousticState::new(0.0, 0.0, 1.0),
            AcousticState::new(0.0, 0.0, 0.0),
            0.0,
        );
        assert_eq!(f.flux_p_l, 1.0);
    }

    #[test]
    fn free_velocity_evaluations() {
        let l = AcousticState::new(0.25, 0.0, 0.5);
        let r = AcousticState::new(0.25, 0.0, 0.5);
        let f = flux_free_velocity(l, r, l.u);
        assert_eq!(f.flux_u_l, l.p);
        assert_eq!(f.flux_u_r, r.p);

        let f = flux_free_velocity(
            AcousticState::new(1.0, 0.0, 0.0),
            AcousticState::new(0.0, 0.0, 0.0),
            0.0,
        );
        assert_eq!(f.flux_u_l, 1.0);
    }

    #[test]
    fn rotation_axis_cases() {
        let r = Rotation::new(vec2(1.0, 0.0));
        assert_eq!(rotate_in(vec2(0.3, 0.7), r), (0.3, 0.7));
        let r = Rotation::new(vec2(0.0, 1.0));
        assert_eq!(rotate_in(vec2(1.0, 0.0), r), (0.0, -1.0));
    }

    /// HLL bookkeeping with λ = 1: the jump relations across the left and
    /// right waves hold for the intermediate states the split fluxes imply.
    #[test]
    fn rankine_hugoniot_jumps() {
        let l = AcousticState::new(0.4, -0.1, 1.2);
        let r = AcousticState::new(-0.7, 0.3, 0.2);
        for p_star in [-0.3, 0.0, 0.8] {
            let f = flux_free_pressure(l, r, p_star);
            // u*_L = ū_L, u*_R = ū_R and p across: −(u*_L−u_L) = p̄_L − p_L
            assert!((-(f.flux_p_l - l.u) - (f.flux_u_l - l.p)).abs() < 1e-14);
            assert!(((r.u - f.flux_p_r) - (r.p - f.flux_u_r)).abs() < 1e-14);
        }
        for u_star in [-0.5, 0.1, 0.6] {
            let f = flux_free_velocity(l, r, u_star);
            assert!((-(f.flux_u_l - l.p) - (f.flux_p_l - l.u)).abs() < 1e-14);
            assert!(((r.p - f.flux_u_r) - (r.u - f.flux_p_r)).abs() < 1e-14);
        }
    }

    proptest! {
        /// Classical-solver consistency: inserting the exact u*/p* makes
        /// both split-flux solvers collapse to the classical flux.
        #[test]
        fn free_solvers_reduce_to_classical(
            ul in -2.0..2.0f64, pl in -2.0..2.0f64,
            ur in -2.0..2.0f64, pr in -2.0..2.0f64,
        ) {
            let l = AcousticState::new(ul, 0.0, pl);
            let r = AcousticState::new(ur, 0.0, pr);
            let (u_star, p_star) = solve_classical(l, r);
            let fp = flux_free_pressure(l, r, p_star);
            prop_assert!((fp.flux_p_l - u_star).abs() < 1e-13);
            prop_assert!((fp.flux_p_r - u_star).abs() < 1e-13);
            let fv = flux_free_velocity(l, r, u_star);
            prop_assert!((fv.flux_u_l - p_star).abs() < 1e-13);
            prop_assert!((fv.flux_u_r - p_star).abs() < 1e-13);
        }

        /// The split property itself: free-pressure equalizes the u-fluxes,
        /// free-velocity the p-fluxes, and generically not the other pair.
        #[test]
        fn split_flux_identities(
            ul in -2.0..2.0f64, pl in -2.0..2.0f64,
            ur in -2.0..2.0f64, pr in -2.0..2.0f64,
            s in -1.0..1.0f64,
        ) {
            let l = AcousticState::new(ul, 0.0, pl);
            let r = AcousticState::new(ur, 0.0, pr);
            let fp = flux_free_pressure(l, r, s);
            prop_assert_eq!(fp.flux_u_l, fp.flux_u_r);
            let fv = flux_free_velocity(l, r, s);
            prop_assert_eq!(fv.flux_p_l, fv.flux_p_r);
            if (ul + pl) != (ur - pr) + 2.0 * s {
                prop_assert!(fp.flux_p_l != fp.flux_p_r);
            }
        }

        /// Rotating in and back out is the identity.
        #[test]
        fn rotation_round_trip(
            vx in -3.0..3.0f64, vy in -3.0..3.0f64, angle in 0.0..std::f64::consts::TAU,
        ) {
            let rot = Rotation::new(vec2(angle.cos(), angle.sin()));
            let v = vec2(vx, vy);
            let (n, t) = rotate_in(v, rot);
            let back = rotate_out(n, t, rot);
            prop_assert!((back - v).norm() <= 1e-15 * (1.0 + v.norm()));
        }

        /// Rotational covariance of the classical solver: solving in a
        /// rotated frame and mapping back agrees with solving directly.
        #[test]
        fn classical_rotational_covariance(
            vlx in -2.0..2.0f64, vly in -2.0..2.0f64, pl in -2.0..2.0f64,
            vrx in -2.0..2.0f64, vry in -2.0..2.0f64, pr in -2.0..2.0f64,
            angle in 0.0..std::f64::consts::TAU,
        ) {
            let rot = Rotation::new(vec2(angle.cos(), angle.sin()));
            let (ul, tl) = rotate_in(vec2(vlx, vly), rot);
            let (ur, tr) = rotate_in(vec2(vrx, vry), rot);
            let (u_star, p_star) =
                solve_classical(AcousticState::new(ul, tl, pl), AcousticState::new(ur, tr, pr));
            // the same problem posed along the x-axis after rotating the data:
            // its (u*, p*) must be the rotated-frame values
            let x_rot = Rotation::new(vec2(1.0, 0.0));
            let (ul2, _) = rotate_in(vec2(ul, tl), x_rot);
            let (ur2, _) = rotate_in(vec2(ur, tr), x_rot);
            let (u_star2, p_star2) =
                solve_classical(AcousticState::new(ul2, tl, pl), AcousticState::new(ur2, tr, pr));
            prop_assert!((u_star - u_star2).abs() < 1e-14);
            prop_assert!((p_star - p_star2).abs() < 1e-14);
        }
    }
}
