//! End-to-end acceptance suite. Each test checks one numbered claim about
//! the solvers at its stated tolerance and prints a pass/fail line
//! (visible with `cargo test -- --nocapture`).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use vortexfv::cases::{self, diagnostics, exact_fourquadrant_v, initialize, CaseSpec, MeshFamily};
use vortexfv::fourier::{
    det_closed_form_nodal_velocity, kernel_dimension, left_kernel, stability_scan, symbol,
    SymbolScheme,
};
use vortexfv::geom::{vec2, Vec2};
use vortexfv::mesh::{BoundaryKind, Mesh, StencilKind};
use vortexfv::operators::{alpha_coeffs, curl_c, divergence_d, gradient_g};
use vortexfv::scheme::Scheme;
use vortexfv::state::State;
use vortexfv::timeint::{run, TimeControl};

fn pass(line: &str) {
    println!("{line}");
}

// ---------------------------------------------------------------------
// 1. operator identity suite on 16² periodic meshes of three kinds, plus
//    the curl/gradient non-annihilation witness on the pentagon mesh

#[test]
fn acceptance_1_operator_identities() {
    let t0 = Instant::now();
    let meshes = [
        (
            "cartesian",
            MeshFamily::Cartesian
                .build(16, BoundaryKind::Periodic, 0)
                .unwrap(),
        ),
        (
            "perturbed quad",
            MeshFamily::PerturbedQuad { amplitude: 0.15 }
                .build(16, BoundaryKind::Periodic, 1)
                .unwrap(),
        ),
        (
            "mixed tri-quad",
            MeshFamily::MixedTriquad {
                split_fraction: 0.5,
            }
            .build(16, BoundaryKind::Periodic, 2)
            .unwrap(),
        ),
    ];
    for (name, mesh) in &meshes {
        // node-normal sum and first-moment identities, per cell
        for c in 0..mesh.n_cells_total() {
            let area = mesh.area(c);
            let perim = mesh.perimeter(c);
            let mut sum = Vec2::ZERO;
            let mut outer = [0.0f64; 4];
            for k in mesh.corners(c) {
                sum += k.nn;
                outer[0] += k.nn.x * k.pos.x;
                outer[1] += k.nn.x * k.pos.y;
                outer[2] += k.nn.y * k.pos.x;
                outer[3] += k.nn.y * k.pos.y;
            }
            assert!(sum.norm() <= 1e-12 * perim, "{name}: Σ ℓn ≠ 0 on cell {c}");
            let dev = (outer[0] - area)
                .abs()
                .max(outer[1].abs())
                .max(outer[2].abs())
                .max((outer[3] - area).abs());
            assert!(
                dev <= 1e-12 * 1.0f64.max(area),
                "{name}: Σ ℓn ⊗ x ≠ |c| I on cell {c}"
            );

            // gradient exactness on per-cell affine data
            let (bx, by) = (3.0, -2.0);
            let mut g = Vec2::ZERO;
            for k in mesh.corners(c) {
                g += k.nn * (1.0 + bx * k.pos.x + by * k.pos.y);
            }
            g = g / area;
            assert!(
                (g - vec2(bx, by)).norm() <= 1e-12 * (bx.abs() + by.abs()) / (area / perim),
                "{name}: gradient not exact on affine data at cell {c}: {g:?}"
            );

            // area from adjacent node-normal cross products (cells ≤ 4 edges)
            let ks = mesh.corners(c);
            if ks.len() <= 4 {
                for k in 0..ks.len() {
                    let m = (k + 1) % ks.len();
                    let a = 2.0 * ks[k].nn.cross(ks[m].nn);
                    assert!(
                        (a - area).abs() <= 1e-12 * area,
                        "{name}: cross-area identity"
                    );
                }
            }
        }

        // duality of gradient and divergence for random fields
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let phi: Vec<f64> = (0..mesh.n_nodes_total())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let v: Vec<Vec2> = (0..mesh.n_cells_total())
                .map(|_| vec2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let d = divergence_d(mesh, &v);
            let g = gradient_g(mesh, &phi);
            let lhs: f64 = mesh
                .active_nodes()
                .map(|n| d[n] * phi[n] * mesh.dual_area(n))
                .sum();
            let rhs: f64 = (0..mesh.n_cells())
                .map(|c| v[c].dot(g[c]) * mesh.area(c))
                .sum();
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!(
                (lhs + rhs).abs() <= 1e-12 * scale,
                "{name}: duality residual"
            );
        }

        // weak averaging of the alpha weights
        let alpha = alpha_coeffs(mesh);
        let phi: Vec<f64> = (0..mesh.n_nodes_total())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let lhs: f64 = (0..mesh.n_cells())
            .map(|c| {
                mesh.area(c)
                    * mesh
                        .corners(c)
                        .iter()
                        .zip(alpha[c].iter())
                        .map(|(k, &a)| a * phi[k.node])
                        .sum::<f64>()
            })
            .sum();
        let rhs: f64 = mesh
            .active_nodes()
            .map(|n| mesh.dual_area(n) * phi[n])
            .sum();
        assert!(
            (lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0),
            "{name}: alpha identity"
        );

        // the curl annihilates gradients: canonical basis at every node
        let h = (mesh.total_area() / mesh.n_cells() as f64).sqrt();
        for n0 in 0..mesh.n_nodes_total() {
            let mut phi = vec![0.0; mesh.n_nodes_total()];
            phi[n0] = 1.0;
            let g = gradient_g(mesh, &phi);
            let c = curl_c(mesh, &g);
            let max = c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            assert!(
                max <= 1e-12 / (h * h),
                "{name}: curl∘grad ≠ 0 at basis node {n0}: {max:e}"
            );
        }
    }

    // non-annihilation witness on the pentagon/hexagon mesh
    let poly = MeshFamily::Polygonal
        .build(16, BoundaryKind::Periodic, 0)
        .unwrap();
    let max_edges = (0..poly.n_cells())
        .map(|c| poly.corners(c).len())
        .max()
        .unwrap();
    assert!(max_edges >= 5);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = (poly.total_area() / poly.n_cells() as f64).sqrt();
    let mut witness = 0.0f64;
    for _ in 0..5 {
        let phi: Vec<f64> = (0..poly.n_nodes_total())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let norm = phi.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let g = gradient_g(&poly, &phi);
        let c = curl_c(&poly, &g);
        witness = witness.max(c.iter().fold(0.0f64, |a, x| a.max(x.abs())) * h / norm);
    }
    assert!(
        witness > 1e-6,
        "curl∘grad unexpectedly small on pentagon/hexagon mesh: {witness:e}"
    );

    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 10.0, "operator suite took {dt:.1} s (limit 10 s)");
    pass(&format!(
        "criterion 1: PASS — operator identities hold on 3 mesh kinds at 1e-12; \
         non-annihilation witness {witness:.2e} on the pentagon mesh ({dt:.1} s)"
    ));
}

// ---------------------------------------------------------------------
// 2. oblique-wave convergence at the pinned desk-scale resolutions

fn rate_table(
    family: MeshFamily,
    scheme: Scheme,
    levels: &[usize],
    seed: u64,
) -> Vec<cases::ErrorReport> {
    let case = CaseSpec::ObliqueWave {
        lambda: 0.5,
        theta: std::f64::consts::FRAC_PI_4,
    };
    cases::convergence_study(&case, family, scheme, levels, 0.3, 0.5, seed).unwrap()
}

#[test]
fn acceptance_2_convergence_rates() {
    let t0 = Instant::now();
    let families = [
        ("cartesian", MeshFamily::Cartesian),
        (
            "perturbed quad",
            MeshFamily::PerturbedQuad { amplitude: 0.15 },
        ),
        (
            "mixed tri-quad",
            MeshFamily::MixedTriquad {
                split_fraction: 0.5,
            },
        ),
    ];
    let mut failures = Vec::new();
    let mut summary = String::new();
    for (name, family) in families {
        for (scheme, window) in [
            (Scheme::NodalPressure1, (0.8, 1.2)),
            (
                Scheme::NodalPressure2(StencilKind::NodeNeighbors),
                (1.8, 2.2),
            ),
        ] {
            let reports = rate_table(family, scheme, &[32, 64, 128], 11);
            for r in reports.iter().skip(1) {
                for (k, var) in ["u", "v", "p"].iter().enumerate() {
                    let rate = r.rate[k].unwrap();
                    summary.push_str(&format!(
                        "{name} order {} n={} {var}: rate {rate:.2}\n",
                        scheme.order(),
                        r.n
                    ));
                    if !(window.0..=window.1).contains(&rate) {
                        failures.push(format!(
                            "{name}, order {}, level {}, variable {var}: rate {rate:.2} \
                             outside [{}, {}]",
                            scheme.order(),
                            r.n,
                            window.0,
                            window.1
                        ));
                    }
                }
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 300.0, "convergence study took {dt:.1} s (limit 300 s)");
    if failures.is_empty() {
        pass(&format!(
            "criterion 2: PASS — all rates in their windows ({dt:.1} s)"
        ));
    } else {
        println!("criterion 2: FAIL — measured rates at 32/64/128, t = 0.5, CFL 0.3:\n{summary}");
        panic!(
            "criterion 2: FAIL — {} rate(s) outside the stated windows at the stated \
             resolutions; see notes in the repository history and the asymptotic-range \
             companion test below, which demonstrates the design orders are reached on \
             finer grids:\n{}",
            failures.len(),
            failures.join("\n")
        );
    }
}

/// Companion to the convergence criterion: the same wave, same schemes,
/// measured in the resolution range where the leading-order error terms
/// dominate. First order needs k²·h·t ≪ 1 (here k = 2π/(λ cos θ) ≈ 17.8),
/// which at t = 0.5 starts beyond 128 cells per direction; the second-order
/// pressure error crosses zero near n = 64 (superconvergence) and is
/// measured away from the crossing.
#[test]
fn acceptance_2_companion_asymptotic_orders() {
    let t0 = Instant::now();
    let reports = rate_table(
        MeshFamily::Cartesian,
        Scheme::NodalPressure1,
        &[256, 512],
        11,
    );
    let mut o1 = Vec::new();
    for r in reports.iter().skip(1) {
        for k in 0..3 {
            let rate = r.rate[k].unwrap();
            o1.push(rate);
            assert!(
                (0.8..=1.2).contains(&rate),
                "first-order asymptotic rate {rate:.2} outside [0.8, 1.2]"
            );
        }
    }
    let reports = rate_table(
        MeshFamily::Cartesian,
        Scheme::NodalPressure2(StencilKind::NodeNeighbors),
        &[48, 96],
        11,
    );
    let mut o2 = Vec::new();
    for r in reports.iter().skip(1) {
        for k in 0..3 {
            let rate = r.rate[k].unwrap();
            o2.push(rate);
            assert!(
                (1.8..=2.2).contains(&rate),
                "second-order rate {rate:.2} outside [1.8, 2.2]"
            );
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    pass(&format!(
        "criterion 2 companion: PASS — order-1 rates {:.2?} at 256→512, order-2 rates {:.2?} \
         at 48→96 ({dt:.1} s)",
        o1, o2
    ));
}

// ---------------------------------------------------------------------
// 3. vorticity preservation on the spherical Riemann problem

fn vorticity_run(mesh: &Mesh, scheme: Scheme) -> (f64, Option<f64>) {
    let case = CaseSpec::SphericalRp {
        radius: 0.2,
        center: vec2(0.5, 0.5),
    };
    let initial = initialize(&case, mesh);
    let mut max_vort = 0.0f64;
    let mut max_cart: Option<f64> = None;
    let (_state, _) = run(
        mesh,
        initial,
        TimeControl {
            cfl: 0.3,
            t_end: 0.1,
        },
        scheme,
        0.01,
        |_, _, s| {
            let d = diagnostics(mesh, s);
            max_vort = max_vort.max(d.l1_vorticity);
            if let Some(cv) = d.l1_cartesian_vorticity {
                max_cart = Some(max_cart.unwrap_or(0.0).max(cv));
            }
        },
    )
    .unwrap();
    (max_vort, max_cart)
}

#[test]
fn acceptance_3_vorticity_preservation() {
    let t0 = Instant::now();
    let cart = MeshFamily::Cartesian
        .build(80, BoundaryKind::ZeroGradient, 0)
        .unwrap();
    let triquad = MeshFamily::MixedTriquad {
        split_fraction: 0.5,
    }
    .build(80, BoundaryKind::ZeroGradient, 3)
    .unwrap();
    for scheme in [
        Scheme::NodalPressure1,
        Scheme::NodalPressure2(StencilKind::NodeNeighbors),
    ] {
        let (v, cart_v) = vorticity_run(&cart, scheme);
        assert!(
            v <= 1e-11,
            "cartesian {scheme:?}: L1 vorticity reached {v:e}"
        );
        let cv = cart_v.unwrap();
        assert!(
            cv <= 1e-11,
            "cartesian {scheme:?}: stencil vorticity reached {cv:e}"
        );
        let (v, _) = vorticity_run(&triquad, scheme);
        assert!(
            v <= 1e-11,
            "tri-quad {scheme:?}: L1 vorticity reached {v:e}"
        );
    }
    // non-preservation on the pentagon/hexagon mesh
    let poly = MeshFamily::Polygonal
        .build(80, BoundaryKind::ZeroGradient, 0)
        .unwrap();
    let (v, _) = vorticity_run(&poly, Scheme::NodalPressure1);
    assert!(
        v > 1e-6,
        "pentagon mesh unexpectedly preserved vorticity: {v:e}"
    );
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 120.0, "vorticity runs took {dt:.1} s (limit 120 s)");
    pass(&format!(
        "criterion 3: PASS — vorticity stays ≤ 1e-11 on cartesian/tri-quad (both orders), \
         reaches {v:.2e} on the pentagon mesh ({dt:.1} s)"
    ));
}

// ---------------------------------------------------------------------
// 4. long-time stationarity of the vortex

#[test]
fn acceptance_4_vortex_stationarity() {
    let t0 = Instant::now();
    let case = CaseSpec::StationaryVortex {
        w: 0.2,
        center: vec2(0.5, 0.5),
    };
    let meshes = [
        (
            "cartesian",
            MeshFamily::Cartesian
                .build(64, BoundaryKind::Periodic, 0)
                .unwrap(),
        ),
        (
            "perturbed quad",
            MeshFamily::PerturbedQuad { amplitude: 0.15 }
                .build(64, BoundaryKind::Periodic, 5)
                .unwrap(),
        ),
        (
            "mixed tri-quad",
            MeshFamily::MixedTriquad {
                split_fraction: 0.5,
            }
            .build(64, BoundaryKind::Periodic, 6)
            .unwrap(),
        ),
    ];
    let mut failures: Vec<String> = Vec::new();
    let mut report = String::new();
    for (name, mesh) in &meshes {
        let initial = initialize(&case, mesh);
        let div0 = diagnostics(mesh, &initial).l1_divergence;
        assert!(div0 > 0.0);
        let mut series: Vec<f64> = Vec::new();
        let (at90, _) = run(
            mesh,
            initial,
            TimeControl {
                cfl: 0.3,
                t_end: 90.0,
            },
            Scheme::NodalPressure1,
            0.5,
            |_, _, s| series.push(diagnostics(mesh, s).l1_divergence),
        )
        .unwrap();
        let (at100, _) = run(
            mesh,
            at90.clone(),
            TimeControl {
                cfl: 0.3,
                t_end: 10.0,
            },
            Scheme::NodalPressure1,
            0.5,
            |_, _, s| series.push(diagnostics(mesh, s).l1_divergence),
        )
        .unwrap();

        // monotone decay after the transient (from the series maximum on),
        // ending at machine level relative to the initial value
        let peak = series
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        for w in series[peak..].windows(2) {
            if w[1] > w[0] * (1.0 + 1e-6) + 1e-13 * div0 {
                failures.push(format!(
                    "{name}: divergence series not monotone after transient ({} -> {})",
                    w[0], w[1]
                ));
                break;
            }
        }
        let final_div = *series.last().unwrap();
        if final_div > 1e-12 * div0 {
            failures.push(format!(
                "{name}: divergence at t=100 is {final_div:.2e} = {:.1e} of its initial value \
                 (target 1e-12)",
                final_div / div0
            ));
        }

        // the solution itself no longer changes between t = 90 and t = 100
        let mut diff = [0.0f64; 3];
        for c in 0..mesh.n_cells() {
            let a = mesh.area(c);
            diff[0] += a * (at100.u[c] - at90.u[c]).abs();
            diff[1] += a * (at100.v[c] - at90.v[c]).abs();
            diff[2] += a * (at100.p[c] - at90.p[c]).abs();
        }
        let d = diff[0].max(diff[1]).max(diff[2]);
        if d > 1e-10 {
            failures.push(format!(
                "{name}: solution moved between t=90 and t=100 by {d:e}"
            ));
        }
        report.push_str(&format!(
            "{name}: div {div0:.3e} -> {final_div:.3e} (ratio {:.1e}), |q(100)-q(90)| = {d:.1e}\n",
            final_div / div0
        ));
    }

    // contrast: the nodal-velocity scheme diffuses the vortex away
    let mesh = &meshes[0].1;
    let initial = initialize(&case, mesh);
    let max0 = initial.max_abs(mesh.n_cells());
    let (end, _) = run(
        mesh,
        initial,
        TimeControl {
            cfl: 0.3,
            t_end: 10.0,
        },
        Scheme::NodalVelocity1,
        0.0,
        |_, _, _| {},
    )
    .unwrap();
    let maxv = (0..mesh.n_cells())
        .map(|c| end.velocity(c).norm())
        .fold(0.0f64, f64::max);
    assert!(
        maxv <= 0.5 * max0,
        "nodal-velocity vortex kept {maxv:.3} of max |v| (initial {max0:.3})"
    );

    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 600.0, "stationarity runs took {dt:.1} s (limit 600 s)");
    if failures.is_empty() {
        pass(&format!(
            "criterion 4: PASS — divergence decays monotonically to ≤ 1e-12 of initial on 3 \
             meshes, solution stationary between t=90 and 100; contrast scheme kept only \
             {:.1}% of max |v| ({dt:.1} s)",
            100.0 * maxv / max0
        ));
    } else {
        println!("criterion 4: FAIL — measured:\n{report}");
        panic!(
            "criterion 4: FAIL — {} check(s) missed the stated deadline/threshold (the \
             perturbed-quad family reaches the 1e-12 divergence level around t = 200 rather \
             than t = 100; see the longer-horizon companion test):\n{}",
            failures.len(),
            failures.join("\n")
        );
    }
}

/// Companion to the stationarity criterion: the perturbed-quad family's
/// slowest divergence mode outlives t = 100 (for every seed tried), but the
/// numerically stationary end state is reached on a longer horizon.
#[test]
fn acceptance_4_companion_quad_long_horizon() {
    let t0 = Instant::now();
    let case = CaseSpec::StationaryVortex {
        w: 0.2,
        center: vec2(0.5, 0.5),
    };
    let mesh = MeshFamily::PerturbedQuad { amplitude: 0.15 }
        .build(64, BoundaryKind::Periodic, 5)
        .unwrap();
    let initial = initialize(&case, &mesh);
    let div0 = diagnostics(&mesh, &initial).l1_divergence;
    let (state, _) = run(
        &mesh,
        initial,
        TimeControl {
            cfl: 0.3,
            t_end: 200.0,
        },
        Scheme::NodalPressure1,
        0.0,
        |_, _, _| {},
    )
    .unwrap();
    let final_div = diagnostics(&mesh, &state).l1_divergence;
    assert!(
        final_div <= 1e-12 * div0,
        "perturbed quad at t=200: divergence {final_div:e} vs initial {div0:e}"
    );
    let dt = t0.elapsed().as_secs_f64();
    pass(&format!(
        "criterion 4 companion: PASS — perturbed quad reaches {:.1e} of its initial \
         divergence by t = 200 ({dt:.1} s)",
        final_div / div0
    ));
}

// ---------------------------------------------------------------------
// 5. Fourier kernel structure at random unit-circle samples

#[test]
fn acceptance_5_fourier_kernels() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (dx, dy) = (1.0, 1.0);
    let mut worst_collin = 0.0f64;
    let mut worst_det = 0.0f64;
    for _ in 0..1000 {
        let tx = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let ty = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));

        let ep = symbol(SymbolScheme::NodalPressure1, tx, ty, dx, dy);
        assert_eq!(
            kernel_dimension(&ep, 1e-10),
            1,
            "nodal-pressure kernel dim at {tx} {ty}"
        );
        let r = left_kernel(&ep).expect("left kernel");
        let expect = [
            (ty - 1.0) * (tx + 1.0) / (2.0 * dy),
            -(tx - 1.0) * (ty + 1.0) / (2.0 * dx),
            Complex64::new(0.0, 0.0),
        ];
        let norm =
            |v: &[Complex64; 3]| (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
        let inner = r[0].conj() * expect[0] + r[1].conj() * expect[1] + r[2].conj() * expect[2];
        let collin = 1.0 - inner.norm() / (norm(&r) * norm(&expect));
        worst_collin = worst_collin.max(collin);
        assert!(
            collin <= 1e-10,
            "left-kernel collinearity residual {collin:e}"
        );

        let ev = symbol(SymbolScheme::NodalVelocity1, tx, ty, dx, dy);
        assert_eq!(kernel_dimension(&ev, 1e-10), 0, "nodal-velocity kernel dim");
        let want = det_closed_form_nodal_velocity(tx, ty, dx, dy);
        let got = ev.neg().det();
        let resid = (got - want).norm() / want.norm();
        worst_det = worst_det.max(resid);
        assert!(resid <= 1e-12, "determinant residual {resid:e}");
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 5.0, "kernel scan took {dt:.1} s (limit 5 s)");
    pass(&format!(
        "criterion 5: PASS — kernel dims 1/0 at 1000 samples, left-kernel residual ≤ {:.1e}, \
         determinant residual ≤ {:.1e} ({dt:.2} s)",
        worst_collin, worst_det
    ));
}

// ---------------------------------------------------------------------
// 6. forward-Euler stability thresholds

#[test]
fn acceptance_6_cfl_thresholds() {
    let t0 = Instant::now();
    let r1 = stability_scan(SymbolScheme::NodalPressure1, 0.49, 128);
    assert!(r1 <= 1.0 + 1e-10, "nodal pressure at CFL 0.49: radius {r1}");
    let r2 = stability_scan(SymbolScheme::NodalPressure1, 0.55, 128);
    assert!(r2 > 1.0, "nodal pressure at CFL 0.55: radius {r2}");
    let r3 = stability_scan(SymbolScheme::NodalVelocity1, 0.99, 128);
    assert!(r3 <= 1.0 + 1e-10, "nodal velocity at CFL 0.99: radius {r3}");
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 10.0, "stability scans took {dt:.1} s (limit 10 s)");
    pass(&format!(
        "criterion 6: PASS — radii {r1:.12}, {r2:.3} (>1), {r3:.12} ({dt:.2} s)"
    ));
}

// ---------------------------------------------------------------------
// 7. four-quadrant singular radial profile (outer band)

#[test]
fn acceptance_7_four_quadrant_profile() {
    let t0 = Instant::now();
    let mesh = MeshFamily::Cartesian
        .build(200, BoundaryKind::ZeroGradient, 0)
        .unwrap();
    let case = CaseSpec::FourQuadrant;
    let initial = initialize(&case, &mesh);
    let t_end = 0.4;
    let (state, _) = run(
        &mesh,
        initial,
        TimeControl { cfl: 0.3, t_end },
        Scheme::NodalPressure2(StencilKind::NodeNeighbors),
        0.0,
        |_, _, _| {},
    )
    .unwrap();
    let mut num = 0.0;
    let mut den = 0.0;
    let mut cells = 0usize;
    for c in 0..mesh.n_cells() {
        let x = mesh.centroid(c);
        let r = (x - vec2(0.5, 0.5)).norm();
        let s = r / t_end;
        if !(0.2..=0.9).contains(&s) {
            continue;
        }
        // bands around the initial discontinuity lines are excluded
        if (0.49..=0.51).contains(&x.x) && x.y >= 0.51 {
            continue;
        }
        if (0.49..=0.51).contains(&x.y) && x.x >= 0.51 {
            continue;
        }
        let exact = exact_fourquadrant_v(t_end, r).unwrap().unwrap();
        let a = mesh.area(c);
        num += a * (state.v[c] - exact).abs();
        den += a * exact.abs();
        cells += 1;
    }
    let rel = num / den;
    assert!(cells > 10_000);
    assert!(rel <= 0.15, "radial profile deviation {rel:.3} exceeds 15%");
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 180.0, "four-quadrant run took {dt:.1} s (limit 180 s)");
    pass(&format!(
        "criterion 7: PASS — radial v profile within {:.2}% of the singular solution over \
         the band ({} cells, {dt:.1} s)",
        100.0 * rel,
        cells
    ));
}

// ---------------------------------------------------------------------
// 8. plane-wave cross-validation of mesh right-hand sides vs symbols

#[test]
fn acceptance_8_symbol_mesh_cross_validation() {
    let t0 = Instant::now();
    let n = 16usize;
    let dx = 1.0 / n as f64;
    let mesh = MeshFamily::Cartesian
        .build(n, BoundaryKind::Periodic, 0)
        .unwrap();
    let modes: [(i32, i32); 20] = [
        (1, 0),
        (0, 1),
        (1, 1),
        (2, 1),
        (1, 2),
        (2, 2),
        (3, 1),
        (1, 3),
        (3, 2),
        (2, 3),
        (3, 3),
        (4, 1),
        (1, 4),
        (4, 3),
        (5, 2),
        (2, 5),
        (4, 4),
        (5, 5),
        (6, 1),
        (7, 3),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let schemes = [
        (Scheme::NodalPressure1, SymbolScheme::NodalPressure1),
        (Scheme::NodalVelocity1, SymbolScheme::NodalVelocity1),
        (
            Scheme::NodalPressure2(StencilKind::NodeNeighbors),
            SymbolScheme::NodalPressure2,
        ),
    ];
    let mut worst = 0.0f64;
    for &(mx, my) in &modes {
        let kx = std::f64::consts::TAU * mx as f64;
        let ky = std::f64::consts::TAU * my as f64;
        let qhat: [Complex64; 3] = [
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ];
        // real and imaginary parts of the complex plane wave
        let mut re = State::zeros(&mesh);
        let mut im = State::zeros(&mesh);
        for c in 0..mesh.n_cells_total() {
            let x = mesh.centroid(c);
            let phase = Complex64::from_polar(1.0, kx * x.x + ky * x.y);
            for (k, (dst_re, dst_im)) in [
                (&mut re.u, &mut im.u),
                (&mut re.v, &mut im.v),
                (&mut re.p, &mut im.p),
            ]
            .into_iter()
            .enumerate()
            {
                let val = qhat[k] * phase;
                dst_re[c] = val.re;
                dst_im[c] = val.im;
            }
        }
        for (scheme, sym_scheme) in schemes {
            let mut re_s = re.clone();
            let mut im_s = im.clone();
            let rhs_re = scheme.rhs(&mesh, &mut re_s).unwrap();
            let rhs_im = scheme.rhs(&mesh, &mut im_s).unwrap();
            let tx = Complex64::from_polar(1.0, kx * dx);
            let ty = Complex64::from_polar(1.0, ky * dx);
            let e = symbol(sym_scheme, tx, ty, dx, dx);
            let minus_eq = e.neg().mul_vec(qhat);
            let scale = (1.0 / dx)
                * qhat
                    .iter()
                    .map(|q| q.norm())
                    .fold(0.0f64, f64::max)
                    .max(1e-30);
            for c in 0..mesh.n_cells() {
                let x = mesh.centroid(c);
                let phase = Complex64::from_polar(1.0, kx * x.x + ky * x.y);
                for (k, (ru, iu)) in [
                    (&rhs_re.u, &rhs_im.u),
                    (&rhs_re.v, &rhs_im.v),
                    (&rhs_re.p, &rhs_im.p),
                ]
                .into_iter()
                .enumerate()
                {
                    let got = Complex64::new(ru[c], iu[c]);
                    let want = minus_eq[k] * phase;
                    let err = (got - want).norm() / scale;
                    worst = worst.max(err);
                    assert!(
                        err <= 1e-12,
                        "mode ({mx},{my}), {sym_scheme:?}, cell {c}, var {k}: \
                         relative deviation {err:e}"
                    );
                }
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 5.0, "cross-validation took {dt:.1} s (limit 5 s)");
    pass(&format!(
        "criterion 8: PASS — mesh RHS equals −Ê q̂ for 3 schemes × 20 modes, \
         worst relative deviation {worst:.1e} ({dt:.2} s)"
    ));
}
