//! Flow-engine checks: self-similar closed forms, conservation and monotone
//! quantities, entropy monotonicity, the rescaled system, and the edge/angle
//! evolution identities, each against an independent oracle (closed forms,
//! centered differences along re-integrated runs, or quadrature).

use std::f64::consts::PI;

use polyflow_core::experiments::{perturbed_regular, random_polygon};
use polyflow_core::flow::{
    self, angle_bound_check, angle_rhs, dilation_sequence, edge_length_rhs, energy_decay_exponent,
    entropy_rho, evolve, evolve_rescaled, monotonicity_residual, regular_constants,
    rescaled_velocity, self_similar_residual, self_similar_scale, t_of_tau, tau_of_t, velocity,
    IntegratorConfig, MonotoneChecks, RescalingSchedule,
};
use polyflow_core::polygon::norm_sq;
use polyflow_core::rng::Lcg64;
use polyflow_core::{Complex64, Polygon};

fn tight() -> IntegratorConfig {
    IntegratorConfig { rel_tol: 1e-11, abs_tol: 1e-14, ..Default::default() }
}

/// max_j |x_j - y_j| / scale.
fn max_rel_deviation(x: &Polygon, y: &Polygon, scale: f64) -> f64 {
    x.vertices()
        .iter()
        .zip(y.vertices())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale
}

#[test]
fn velocity_of_point_polygon_is_zero() {
    let p = Polygon::point(6, Complex64::new(0.4, -2.0)).unwrap();
    for v in velocity(&p, 1.5) {
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }
}

#[test]
fn velocity_of_regular_polygon_is_eigen_mode() {
    for (n, k) in [(5usize, 1usize), (7, 1), (7, 2), (8, 3)] {
        let p = Polygon::regular(n, k).unwrap();
        let l = 2.0 * (PI * k as f64 / n as f64).sin();
        let lambda_k = -4.0 * (PI * k as f64 / n as f64).sin().powi(2);
        for beta in [0.0, 0.5, 1.0, 2.0] {
            let v = velocity(&p, beta);
            for (vj, pj) in v.iter().zip(p.vertices()) {
                let expect = l.powf(beta) * lambda_k * pj;
                assert!((vj - expect).norm() < 1e-12, "N={n} k={k} beta={beta}");
            }
        }
    }
}

#[test]
fn velocity_components_sum_to_zero() {
    let mut rng = Lcg64::new(3);
    for n in [4usize, 6, 9] {
        let p = random_polygon(n, &mut rng, 0.35).unwrap();
        let v = velocity(&p, 1.0);
        let total: Complex64 = v.iter().sum();
        assert!(total.norm() < 1e-13 * n as f64);
    }
}

#[test]
fn self_similar_scale_closed_forms() {
    assert_eq!(self_similar_scale(0.0, 1.7, 0.9, -1.2), 1.0);

    // N = 4, beta = 1: l = sqrt(2), lambda_1 = -2, a(t) = 1/(1 + 2 sqrt(2) t).
    let (l, lambda) = regular_constants(4);
    assert!((l - 2f64.sqrt()).abs() < 1e-15);
    assert!((lambda + 2.0).abs() < 1e-15);
    for t in [0.0, 0.1, 0.7, 3.0] {
        let got = self_similar_scale(t, 1.0, l, lambda);
        let expect = 1.0 / (1.0 + 2.0 * 2f64.sqrt() * t);
        assert!((got - expect).abs() < 1e-14);
    }

    // a is strictly decreasing toward 0.
    let a1 = self_similar_scale(10.0, 0.5, l, lambda);
    let a2 = self_similar_scale(100.0, 0.5, l, lambda);
    assert!(a1 > a2 && a2 > 0.0);
}

#[test]
fn self_similar_scale_satisfies_the_flow_ode() {
    // da/dt (centered difference) against M_{aP}(aP) = l^beta lambda a^(1+beta) P.
    let n = 7;
    let (l, lambda) = regular_constants(n);
    let p = Polygon::regular(n, 1).unwrap();
    let beta = 1.3;
    let h = 1e-6;
    for t in [0.05, 0.4, 1.1] {
        let a = self_similar_scale(t, beta, l, lambda);
        let da = (self_similar_scale(t + h, beta, l, lambda)
            - self_similar_scale(t - h, beta, l, lambda))
            / (2.0 * h);
        let scaled = p.apply_similarity(a, 0.0, Complex64::new(0.0, 0.0)).unwrap();
        let v = velocity(&scaled, beta);
        for (vj, pj) in v.iter().zip(p.vertices()) {
            assert!((vj - da * pj).norm() < 1e-8, "t={t}");
        }
    }
}

#[test]
fn time_change_round_trips_and_derivative() {
    let (l, lambda) = regular_constants(6);
    let beta = 0.8;
    assert_eq!(tau_of_t(0.0, beta, l, lambda), 0.0);

    let mut rng = Lcg64::new(17);
    for _ in 0..20 {
        let t = rng.uniform(1e-3, 50.0);
        let back = t_of_tau(tau_of_t(t, beta, l, lambda), beta, l, lambda);
        assert!((back - t).abs() <= 1e-12 * t);
    }

    // d tau/dt = l^beta a(t)^beta by centered differences.
    let h = 1e-6;
    for t in [0.1, 1.0, 4.0] {
        let numeric = (tau_of_t(t + h, beta, l, lambda) - tau_of_t(t - h, beta, l, lambda)) / (2.0 * h);
        let analytic = l.powf(beta) * self_similar_scale(t, beta, l, lambda).powf(beta);
        assert!((numeric - analytic).abs() <= 1e-6 * analytic);
    }
}

#[test]
fn rescaled_velocity_structure() {
    let n = 7;
    let p1 = Polygon::regular(n, 1).unwrap();
    let beta = 1.0;

    // Equilibrium at P_1.
    for v in rescaled_velocity(&p1, beta) {
        assert!(v.norm() < 1e-14);
    }

    // c P_1 moves radially: velocity = lambda_1 (c^beta - 1) * Y.
    let (_, lambda_1) = regular_constants(n);
    for c in [0.5, 1.5, 2.0] {
        let y = p1.apply_similarity(c, 0.0, Complex64::new(0.0, 0.0)).unwrap();
        let v = rescaled_velocity(&y, beta);
        let factor = lambda_1 * (c.powf(beta) - 1.0);
        for (vj, yj) in v.iter().zip(y.vertices()) {
            assert!((vj - factor * yj).norm() < 1e-12, "c={c}");
        }
        // Toward c = 1: shrink if c > 1 (factor < 0), grow if c < 1.
        assert!(factor * (c - 1.0) < 0.0 || c == 1.0);
    }

    // The center of mass obeys dq/dtau = -lambda_1 q at the velocity level.
    let mut rng = Lcg64::new(23);
    let y = random_polygon(n, &mut rng, 0.3)
        .unwrap()
        .map(|z| z + Complex64::new(0.25, -0.1));
    let q = y.center_of_mass();
    let v = rescaled_velocity(&y, beta);
    let v_mean: Complex64 = v.iter().sum::<Complex64>() / n as f64;
    assert!((v_mean - (-lambda_1) * q).norm() < 1e-13);
}

#[test]
fn evolve_tracks_self_similar_solution() {
    // Small sweep here; the full N/k/beta sweep is in the acceptance suite.
    for (n, k, beta) in [(5usize, 1usize, 1.0), (7, 2, 0.5), (9, 4, 2.0)] {
        let p = Polygon::regular(n, k).unwrap();
        let l = 2.0 * (PI * k as f64 / n as f64).sin();
        let lambda_k = -4.0 * (PI * k as f64 / n as f64).sin().powi(2);
        // Stop when a(t) = 0.1: t* = (10^beta - 1) / (beta l^beta |lambda_k|).
        let t_star = (10f64.powf(beta) - 1.0) / (beta * l.powf(beta) * lambda_k.abs());
        let traj = evolve(&p, beta, t_star, &tight()).unwrap();
        for s in traj.samples() {
            let a = self_similar_scale(s.t, beta, l, lambda_k);
            let expect = p.apply_similarity(a, 0.0, Complex64::new(0.0, 0.0)).unwrap();
            let err = max_rel_deviation(&s.polygon, &expect, a);
            assert!(err <= 1e-6, "N={n} k={k} beta={beta} t={} err={err:e}", s.t);
        }
        let a_end = self_similar_scale(traj.t_end(), beta, l, lambda_k);
        assert!((a_end - 0.1).abs() < 1e-12);
    }
}

#[test]
fn evolve_conserves_center_of_mass_and_monotones() {
    let mut rng = Lcg64::new(31);
    let p = random_polygon(6, &mut rng, 0.4).unwrap().map(|z| z + Complex64::new(0.3, 0.2));
    let cfg = IntegratorConfig::default();
    let traj = evolve(&p, 1.0, 2.0, &cfg).unwrap();
    let checks = MonotoneChecks::evaluate(&traj, None);
    assert!(checks.center_of_mass_pass, "drift {:e}", checks.center_of_mass_drift);
    assert_eq!(checks.energy_nonincreasing, Some(true));
    assert_eq!(checks.alpha_norm_nonincreasing, Some(true));
    assert_eq!(checks.rho_nonincreasing, Some(true));
    assert!(checks.entropy_integral_nondecreasing);
    assert!(checks.all_pass());

    // Times strictly increase across samples.
    for w in traj.samples().windows(2) {
        assert!(w[1].t > w[0].t);
    }
}

#[test]
fn evolve_accepts_beta_zero_linear_flow() {
    let p = Polygon::from_points(&[(1.0, 0.0), (0.2, 1.1), (-0.8, 0.3), (0.1, -0.9)]).unwrap();
    let traj = evolve(&p, 0.0, 1.0, &IntegratorConfig::default()).unwrap();
    // Linear flow solution: x(t) = e^{tM} x0 with M the unweighted cycle
    // Laplacian; center of mass still conserved, energy still decreasing.
    let checks = MonotoneChecks::evaluate(&traj, None);
    assert!(checks.center_of_mass_pass);
    assert_eq!(checks.energy_nonincreasing, Some(true));
    assert_eq!(checks.rho_nonincreasing, None);
    assert_eq!(traj.last().entropy_integral, 0.0);
}

#[test]
fn similarity_invariance_of_the_flow() {
    // Evolving c X E for time t equals c (evolution of X at time c^beta t) E.
    let mut rng = Lcg64::new(41);
    let p = random_polygon(5, &mut rng, 0.3).unwrap();
    let beta = 1.0;
    let (c, phi, q) = (1.7, 0.6, Complex64::new(0.3, -0.2));
    let t = 0.4;

    let transformed = p.apply_similarity(c, phi, q).unwrap();
    let left = evolve(&transformed, beta, t, &tight()).unwrap().last().polygon.clone();

    let base = evolve(&p, beta, c.powf(beta) * t, &tight()).unwrap().last().polygon.clone();
    let right = base.apply_similarity(c, phi, q).unwrap();

    let scale = right.p_norm(2.0).unwrap();
    assert!(max_rel_deviation(&left, &right, scale) <= 1e-6);
}

#[test]
fn energy_dissipation_identity() {
    // dF_alpha/dt = -|M_X X|^2, checked by centered differences of endpoint
    // states of re-integrated runs (no dense-output interpolation error).
    let mut rng = Lcg64::new(47);
    let p = random_polygon(6, &mut rng, 0.35).unwrap();
    let beta = 1.0;
    let alpha = beta + 2.0;
    let t_star = 0.3;
    let h = 1e-4;

    let base = evolve(&p, beta, t_star, &tight()).unwrap().last().polygon.clone();
    let fwd = evolve(&p, beta, t_star + h, &tight()).unwrap().last().polygon.energy(alpha);
    let bwd = evolve(&p, beta, t_star - h, &tight()).unwrap().last().polygon.energy(alpha);
    let df_dt = (fwd - bwd) / (2.0 * h);
    let dissipation = norm_sq(&velocity(&base, beta));
    assert!(
        (df_dt + dissipation).abs() <= 1e-5 * dissipation,
        "dF/dt = {df_dt:e}, -|MX|^2 = {:e}",
        -dissipation
    );
}

#[test]
fn rescaled_flow_fixes_regular_polygon() {
    let p1 = Polygon::regular(7, 1).unwrap();
    let traj = evolve_rescaled(&p1, 1.0, 5.0, &IntegratorConfig::default()).unwrap();
    let end = &traj.last().polygon;
    assert!(max_rel_deviation(end, &p1, 1.0) < 1e-8);
}

#[test]
fn rescaled_flow_converges_to_rotated_regular_heptagon() {
    let y0 = perturbed_regular(7, 21, 0.1).unwrap().centered();
    let traj = evolve_rescaled(&y0, 1.0, 90.0, &IntegratorConfig::default()).unwrap();
    let end = &traj.last().polygon;
    let (dist, _eta) = polyflow_core::experiments::distance_to_regular_orbit(end);
    assert!(dist < 1e-6, "distance to regular orbit {dist:e}");

    // Angle error shrinks to zero.
    let err: f64 = end
        .interior_angles()
        .unwrap()
        .iter()
        .map(|t| (t - 5.0 * PI / 7.0).powi(2))
        .sum();
    assert!(err < 1e-12);
}

#[test]
fn rescaled_flow_keeps_rhombus_a_rhombus() {
    // Near-square rhombus: equal edges forever, angles do not square up.
    let d: f64 = 0.15;
    let y0 = Polygon::from_points(&[
        (1.0 + d, 0.0),
        (0.0, 1.0 - d),
        (-(1.0 + d), 0.0),
        (0.0, -(1.0 - d)),
    ])
    .unwrap();
    let angle0 = y0.interior_angles().unwrap()[0];
    let traj = evolve_rescaled(&y0, 1.0, 30.0, &IntegratorConfig::default()).unwrap();
    let end = &traj.last().polygon;
    let l = end.edge_lengths();
    for w in l.windows(2) {
        assert!((w[0] - w[1]).abs() < 1e-9 * w[0]);
    }
    // The vertex angle is preserved by the purely radial motion.
    let angle_end = end.interior_angles().unwrap()[0];
    assert!((angle_end - angle0).abs() < 1e-8);
    // And the scale settles at the radial equilibrium, edge length sqrt(2).
    assert!((l[0] - 2f64.sqrt()).abs() < 1e-8);
}

#[test]
fn rescaled_flow_matches_normalized_plain_flow() {
    // evolve_rescaled(Y0) at tau equals (1/a(t)) (X(t) - Xbar), t = t(tau).
    let y0 = perturbed_regular(7, 33, 0.15).unwrap().centered();
    let beta = 1.0;
    let (l, lambda_1) = regular_constants(7);
    let tau_end = 1.5;
    let rescaled = evolve_rescaled(&y0, beta, tau_end, &tight()).unwrap();
    let plain = evolve(&y0, beta, t_of_tau(tau_end, beta, l, lambda_1), &tight()).unwrap();

    for s in rescaled.samples().iter().step_by(5) {
        let t = t_of_tau(s.t, beta, l, lambda_1);
        let x = plain.polygon_at(t).unwrap();
        let xbar = x.center_of_mass();
        let a = self_similar_scale(t, beta, l, lambda_1);
        let normalized = x.map(|z| (z - xbar) / a);
        let scale = normalized.p_norm(2.0).unwrap();
        assert!(
            max_rel_deviation(&s.polygon, &normalized, scale) <= 1e-6,
            "tau = {}",
            s.t
        );
    }
}

#[test]
fn entropy_rho_examples() {
    let mut rng = Lcg64::new(53);
    let p = random_polygon(5, &mut rng, 0.3).unwrap();
    let traj = evolve(&p, 1.0, 1.5, &IntegratorConfig::default()).unwrap();
    let x0 = p.center_of_mass();

    // t = 0: both exponent terms vanish.
    assert!((entropy_rho(&traj, x0, 0.0).unwrap() - 1.0).abs() < 1e-14);

    // Nonincreasing along samples.
    let mut prev = f64::INFINITY;
    for s in traj.samples() {
        let r = entropy_rho(&traj, x0, s.t).unwrap();
        assert!(r <= prev + 1e-9);
        assert!(r > 0.0 && r <= 1.0 + 1e-12);
        prev = r;
    }

    // beta = 0 is refused.
    let lin = evolve(&p, 0.0, 0.5, &IntegratorConfig::default()).unwrap();
    assert!(matches!(entropy_rho(&lin, x0, 0.1), Err(polyflow_core::Error::BetaZero)));
}

#[test]
fn entropy_rho_matches_quadrature_oracle_on_self_similar_run() {
    // X(t) = a(t) P_1, x0 = 0: |X - x0|^2 = N a^2 and |M_X X|^2 = N (da/dt)^2,
    // so rho = exp[-t^(2/beta) N a(t)^2 - (beta/2) N int_0^t s^(2/beta+1) a'(s)^2 ds].
    // The integral is done here by adaptive Simpson on the closed form.
    let n = 6;
    let beta = 1.0;
    let (l, lambda_1) = regular_constants(n);
    let p = Polygon::regular(n, 1).unwrap();
    let traj = evolve(&p, beta, 1.0, &tight()).unwrap();

    let a_prime = |t: f64| {
        let h = 1e-6;
        (self_similar_scale(t + h, beta, l, lambda_1) - self_similar_scale(t - h, beta, l, lambda_1))
            / (2.0 * h)
    };
    let integrand = |s: f64| 0.5 * beta * s.powf(2.0 / beta + 1.0) * n as f64 * a_prime(s).powi(2);
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64, parts: usize| -> f64 {
        let h = (b - a) / parts as f64;
        (0..parts)
            .map(|i| {
                let x0 = a + i as f64 * h;
                (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h)) * h / 6.0
            })
            .sum()
    };

    for t in [0.2, 0.6, 1.0] {
        let a = self_similar_scale(t, beta, l, lambda_1);
        let integral = simpson(&integrand, 0.0, t, 2000);
        let expect = (-t.powf(2.0 / beta) * n as f64 * a * a - integral).exp();
        let got = entropy_rho(&traj, Complex64::new(0.0, 0.0), t).unwrap();
        assert!((got - expect).abs() <= 1e-6 * expect, "t={t}: {got} vs {expect}");
    }
}

#[test]
fn monotonicity_residual_is_small_and_formula_nonpositive() {
    let mut rng = Lcg64::new(61);
    let p = random_polygon(5, &mut rng, 0.3).unwrap();
    let traj = evolve(&p, 1.0, 1.5, &IntegratorConfig::default()).unwrap();
    let x0 = p.center_of_mass();

    for t in [0.1, 0.5, 1.0] {
        let check = monotonicity_residual(&traj, x0, t).unwrap();
        assert!(check.formula <= 0.0);
        assert!(
            check.residual <= 1e-5 * check.formula.abs(),
            "t={t}: residual {:e} vs |drho/dt| {:e}",
            check.residual,
            check.formula.abs()
        );
    }
}

#[test]
fn monotonicity_residual_on_self_similar_trajectory() {
    // Along a(t) P_1 with x0 at the limit point, both sides carry the same
    // strictly negative value: d rho/dt = -(2/beta) rho t^(2/beta-1)
    // |(1 + beta kappa t / 2)/(1 + beta kappa t)|^2 N a^2 with
    // kappa = l^beta |lambda_1|; the bracket never vanishes at finite time.
    let n = 5;
    let beta = 1.0;
    let p = Polygon::regular(n, 1).unwrap();
    let traj = evolve(&p, beta, 1.0, &tight()).unwrap();
    let x0 = Complex64::new(0.0, 0.0);

    let (l, lambda_1) = regular_constants(n);
    let kappa = l.powf(beta) * lambda_1.abs();
    for t in [0.2, 0.7] {
        let check = monotonicity_residual(&traj, x0, t).unwrap();
        assert!(check.residual <= 1e-5 * check.formula.abs());
        // Bracket magnitude from the closed form.
        let a = self_similar_scale(t, beta, l, lambda_1);
        let bracket_coeff = a * (1.0 + 0.5 * beta * kappa * t) / (1.0 + beta * kappa * t);
        let rho = entropy_rho(&traj, x0, t).unwrap();
        let expect = -(2.0 / beta) * rho * t.powf(2.0 / beta - 1.0) * n as f64 * bracket_coeff.powi(2);
        assert!(
            (check.formula - expect).abs() <= 1e-6 * expect.abs(),
            "t={t}: {:e} vs {expect:e}",
            check.formula
        );
    }
}

#[test]
fn dilation_sequence_of_self_similar_run_is_regular() {
    let n = 5;
    let beta = 1.0;
    let p = Polygon::regular(n, 1).unwrap();
    let mut traj = evolve(&p, beta, 0.5, &IntegratorConfig::default()).unwrap();
    let sched = RescalingSchedule::new(vec![1.0, 2.0, 5.0, 10.0], 0.3).unwrap();
    let rescaled = dilation_sequence(&mut traj, Complex64::new(0.0, 0.0), &sched, &IntegratorConfig::default()).unwrap();
    let (l, lambda_1) = regular_constants(n);
    for (c, y) in sched.c_values().iter().zip(&rescaled) {
        // Y^k = c a(c^beta tau) P_1: a multiple of P_1.
        let a = self_similar_scale(c.powf(beta) * sched.tau(), beta, l, lambda_1);
        let expect = p.apply_similarity(c * a, 0.0, Complex64::new(0.0, 0.0)).unwrap();
        assert!(max_rel_deviation(y, &expect, c * a) < 1e-6);
    }
}

#[test]
fn dilation_sequence_of_heptagon_run_approaches_regular() {
    // Powers-of-ten dilations of one long run: the shape errors of the
    // rescaled polygons shrink with k.
    let p = perturbed_regular(7, 7, 0.2).unwrap().centered();
    let beta = 1.0;
    let cfg = IntegratorConfig::default();
    let mut traj = evolve(&p, beta, 1.0, &cfg).unwrap();
    let sched = RescalingSchedule::powers_of_ten(3, 1.0).unwrap();
    let rescaled = dilation_sequence(&mut traj, Complex64::new(0.0, 0.0), &sched, &cfg).unwrap();
    let angle_errors: Vec<f64> = rescaled
        .iter()
        .map(|y| polyflow_core::experiments::angle_error(y).unwrap())
        .collect();
    let edge_errors: Vec<f64> = rescaled
        .iter()
        .map(polyflow_core::experiments::edge_ratio_error)
        .collect();
    for w in angle_errors.windows(2) {
        assert!(w[1] < w[0], "angle errors {angle_errors:?}");
    }
    for w in edge_errors.windows(2) {
        assert!(w[1] < w[0], "edge errors {edge_errors:?}");
    }
}

#[test]
fn heptagon_experiment_with_zero_perturbation_has_zero_errors() {
    use polyflow_core::experiments::{heptagon_experiment, HeptagonParams};
    let params = HeptagonParams { perturb: 0.0, iterations: 3, ..Default::default() };
    let result = heptagon_experiment(&params, &IntegratorConfig::default()).unwrap();
    for r in &result.records {
        assert!(r.angle_error < 1e-20, "k={}: {}", r.k, r.angle_error);
        assert!(r.edge_ratio_error < 1e-20, "k={}: {}", r.k, r.edge_ratio_error);
    }
}

#[test]
fn dilation_sequence_tends_to_origin_for_fixed_k() {
    let p = perturbed_regular(5, 77, 0.2).unwrap().centered();
    let beta = 1.0;
    let mut traj = evolve(&p, beta, 0.1, &IntegratorConfig::default()).unwrap();
    let c = 3.0;
    let sizes: Vec<f64> = [1.0, 10.0, 100.0]
        .iter()
        .map(|&tau| {
            let sched = RescalingSchedule::new(vec![c], tau).unwrap();
            let y = dilation_sequence(&mut traj, Complex64::new(0.0, 0.0), &sched, &IntegratorConfig::default())
                .unwrap()
                .remove(0);
            y.p_norm(2.0).unwrap()
        })
        .collect();
    assert!(sizes[1] < 0.5 * sizes[0]);
    assert!(sizes[2] < 0.5 * sizes[1]);
}

#[test]
fn self_similar_residual_examples() {
    // Regular polygons: residual 0 and sigma = l^beta lambda_k < 0.
    for (n, k) in [(5usize, 1usize), (7, 3), (8, 1)] {
        let p = Polygon::regular(n, k).unwrap();
        let fit = self_similar_residual(&p, 1.0).unwrap();
        assert!(fit.residual <= 1e-12, "N={n} k={k}: {:e}", fit.residual);
        let l = 2.0 * (PI * k as f64 / n as f64).sin();
        let lambda_k = -4.0 * (PI * k as f64 / n as f64).sin().powi(2);
        assert!((fit.sigma - l * lambda_k).abs() < 1e-12);
    }

    // Random octagon: strictly positive, matching an independent evaluation
    // of the same projection formula built from dense pieces.
    let mut rng = Lcg64::new(71);
    let p = random_polygon(8, &mut rng, 0.3).unwrap();
    let fit = self_similar_residual(&p, 1.0).unwrap();
    assert!(fit.residual > 1e-3);

    let v = velocity(&p, 1.0);
    let com = p.center_of_mass();
    let z: Vec<Complex64> = p.vertices().iter().map(|x| x - com).collect();
    let sigma_oracle = v.iter().zip(&z).map(|(a, b)| (a * b.conj()).re).sum::<f64>() / norm_sq(&z);
    let resid_oracle = (v
        .iter()
        .zip(&z)
        .map(|(a, b)| (a - sigma_oracle * b).norm_sqr())
        .sum::<f64>()
        / norm_sq(&v))
        .sqrt();
    assert!((fit.residual - resid_oracle).abs() < 1e-14);

    // Fixed points are refused.
    let point = Polygon::point(4, Complex64::new(1.0, 1.0)).unwrap();
    assert!(matches!(self_similar_residual(&point, 1.0), Err(polyflow_core::Error::ZeroVelocity)));
}

#[test]
fn edge_length_rhs_closed_forms() {
    // Regular N-gon: dl/dt = -2 l^(beta+1) (1 + cos theta), theta = (N-2) pi / N.
    for n in [4usize, 7] {
        let p = Polygon::regular(n, 1).unwrap();
        let l = 2.0 * (PI / n as f64).sin();
        let theta = (n as f64 - 2.0) * PI / n as f64;
        for beta in [0.5, 1.0] {
            let expect = -2.0 * l.powf(beta + 1.0) * (1.0 + theta.cos());
            for j in 0..n {
                let got = edge_length_rhs(&p, beta, j).unwrap();
                assert!((got - expect).abs() < 1e-12, "N={n} beta={beta} j={j}");
            }
        }
    }

    // Square: the cosine terms vanish, dl/dt = -2 l^(beta+1).
    let square = Polygon::regular(4, 1).unwrap();
    let l = 2f64.sqrt();
    let got = edge_length_rhs(&square, 1.0, 0).unwrap();
    assert!((got + 2.0 * l * l).abs() < 1e-12);
}

#[test]
fn edge_and_angle_rhs_match_finite_differences_along_the_flow() {
    let mut rng = Lcg64::new(83);
    let p = random_polygon(6, &mut rng, 0.3).unwrap();
    let beta = 1.0;
    let t_star = 0.2;
    let h = 1e-4;

    let base = evolve(&p, beta, t_star, &tight()).unwrap().last().polygon.clone();
    let plus = evolve(&p, beta, t_star + h, &tight()).unwrap().last().polygon.clone();
    let minus = evolve(&p, beta, t_star - h, &tight()).unwrap().last().polygon.clone();

    let lp = plus.edge_lengths();
    let lm = minus.edge_lengths();
    let ap = plus.interior_angles().unwrap();
    let am = minus.interior_angles().unwrap();

    for j in 0..6 {
        let dl_numeric = (lp[j] - lm[j]) / (2.0 * h);
        let dl = edge_length_rhs(&base, beta, j).unwrap();
        assert!((dl - dl_numeric).abs() <= 1e-5 * dl.abs().max(1e-3), "edge {j}");

        let da_numeric = (ap[j] - am[j]) / (2.0 * h);
        let da = angle_rhs(&base, beta, j).unwrap();
        assert!((da - da_numeric).abs() <= 1e-5 * da.abs().max(1e-3), "angle {j}");
    }
}

#[test]
fn angle_rhs_vanishes_on_regular_and_matches_triangle_forms() {
    let p = Polygon::regular(8, 1).unwrap();
    for j in 0..8 {
        assert!(angle_rhs(&p, 1.0, j).unwrap().abs() < 1e-12);
    }

    // N = 3 reduces to the closed triangle forms.
    let mut rng = Lcg64::new(89);
    for _ in 0..10 {
        let t = polyflow_core::experiments::random_triangle(&mut rng);
        for beta in [0.5, 1.0, 2.0] {
            let tri_rhs = polyflow_core::triangle::triangle_angle_rhs(&t, beta).unwrap();
            for (j, &expected) in tri_rhs.iter().enumerate() {
                let general = angle_rhs(&t, beta, j).unwrap();
                assert!(
                    (general - expected).abs() <= 1e-10 * expected.abs().max(1e-6),
                    "j={j} beta={beta}: {general} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn angle_rhs_degenerate_errors() {
    let collinear = Polygon::from_points(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 2.0)]).unwrap();
    assert!(matches!(
        angle_rhs(&collinear, 1.0, 1),
        Err(polyflow_core::Error::CollinearVertex { index: 1, .. })
    ));
    let repeated = Polygon::from_points(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.5, 1.0)]).unwrap();
    assert!(matches!(edge_length_rhs(&repeated, 1.0, 0), Err(polyflow_core::Error::DegenerateVertex { .. })));
}

#[test]
fn angle_bound_check_examples() {
    let p = Polygon::regular(7, 1).unwrap();
    let traj = evolve(&p, 1.0, 0.5, &IntegratorConfig::default()).unwrap();
    // sin^2(5 pi / 7) ~ 0.6113 >= 0.5.
    let report = angle_bound_check(&traj, 0.5).unwrap();
    assert!(report.holds && report.first_violation.is_none());
    assert!((report.min_sin_sq - (5.0 * PI / 7.0).sin().powi(2)).abs() < 1e-6);

    // A tiny delta is satisfied by any nondegenerate run.
    assert!(angle_bound_check(&traj, 1e-300).unwrap().holds);

    // A run through a near-collinear configuration violates a high bound.
    let flatish = Polygon::from_points(&[(0.0, 0.0), (1.0, 0.01), (2.0, 0.0), (1.0, 1.5)]).unwrap();
    let traj2 = evolve(&flatish, 1.0, 0.2, &IntegratorConfig::default()).unwrap();
    let report2 = angle_bound_check(&traj2, 0.9).unwrap();
    assert!(!report2.holds);
    assert!(report2.first_violation.is_some());

    assert!(angle_bound_check(&traj, 0.0).is_err());
    assert!(angle_bound_check(&traj, 1.5).is_err());
}

#[test]
fn energy_cross_checks_against_edge_difference_norm() {
    let mut rng = Lcg64::new(97);
    let p = random_polygon(7, &mut rng, 0.4).unwrap();
    let alpha = 3.2;
    // alpha F_alpha = (p-norm of the edge-difference vector)^alpha.
    let diffs: Vec<Complex64> = (0..7)
        .map(|j| p.vertices()[(j + 1) % 7] - p.vertices()[j])
        .collect();
    let norm = polyflow_core::polygon::p_norm_slice(&diffs, alpha);
    assert!((p.energy(alpha) - norm.powf(alpha) / alpha).abs() < 1e-12);
}

#[test]
fn energy_decay_exponent_matches_self_similar_rate() {
    // F_alpha ~ t^(-(beta+2)/beta) on long self-similar runs.
    for beta in [1.0, 2.0] {
        let p = Polygon::regular(6, 1).unwrap();
        let (l, lambda_1) = regular_constants(6);
        // Run deep into the decay: until a(t) = 1e-3, so the fitted decade
        // sits in the power-law regime.
        let t_star = (1e3f64.powf(beta) - 1.0) / (beta * l.powf(beta) * lambda_1.abs());
        let traj = evolve(&p, beta, t_star, &IntegratorConfig::default()).unwrap();
        let slope = energy_decay_exponent(&traj).unwrap();
        let expect = -(beta + 2.0) / beta;
        assert!(
            (slope - expect).abs() < 0.02 * expect.abs(),
            "beta={beta}: slope {slope} vs {expect}"
        );
    }
}

#[test]
fn trajectory_extension_matches_single_run() {
    let p = perturbed_regular(5, 13, 0.2).unwrap();
    let beta = 1.0;
    let cfg = IntegratorConfig::default();
    let mut short = evolve(&p, beta, 0.5, &cfg).unwrap();
    flow::extend(&mut short, 1.0, &cfg).unwrap();
    let full = evolve(&p, beta, 1.0, &cfg).unwrap();
    let a = short.last().polygon.clone();
    let b = full.last().polygon.clone();
    let scale = b.p_norm(2.0).unwrap();
    assert!(max_rel_deviation(&a, &b, scale) < 1e-7);
    // Entropy integral agrees too.
    assert!((short.last().entropy_integral - full.last().entropy_integral).abs() < 1e-9);
}

#[test]
fn step_limit_propagates_from_evolve() {
    let p = Polygon::regular(5, 1).unwrap();
    let cfg = IntegratorConfig { max_steps: 2, ..Default::default() };
    assert!(matches!(
        evolve(&p, 1.0, 10.0, &cfg),
        Err(polyflow_core::Error::StepLimitExceeded { .. })
    ));
}

#[test]
fn evolve_handles_fixed_points_and_repeated_vertex_stars() {
    // Point polygon: fixed point of the flow, finishes quickly.
    let point = Polygon::point(5, Complex64::new(0.3, -0.7)).unwrap();
    let traj = evolve(&point, 1.0, 10.0, &IntegratorConfig::default()).unwrap();
    assert!((traj.last().polygon.vertices()[0] - Complex64::new(0.3, -0.7)).norm() < 1e-12);
    assert!(traj.steps_accepted < 100);

    // P_2 for N = 6 traverses a triangle twice; consecutive vertices stay
    // distinct so the flow is perfectly regular.
    let star = Polygon::regular(6, 2).unwrap();
    let traj = evolve(&star, 1.0, 0.3, &IntegratorConfig::default()).unwrap();
    assert!(traj.last().energy < traj.first().energy);
}

#[test]
fn rescaling_schedule_validation() {
    assert!(RescalingSchedule::new(vec![1.0, 2.0], 0.0).is_err());
    assert!(RescalingSchedule::new(vec![], 1.0).is_err());
    assert!(RescalingSchedule::new(vec![1.0, 1.0], 1.0).is_err());
    assert!(RescalingSchedule::new(vec![-1.0, 2.0], 1.0).is_err());
    let sched = RescalingSchedule::powers_of_ten(4, 1.0).unwrap();
    assert_eq!(sched.c_values(), &[1.0, 10.0, 100.0, 1000.0]);
}

#[test]
fn dilation_sequence_range_exceeded_maps_step_limit() {
    let p = Polygon::regular(5, 1).unwrap();
    let cfg = IntegratorConfig::default();
    let mut traj = evolve(&p, 1.0, 0.1, &cfg).unwrap();
    let sched = RescalingSchedule::new(vec![100.0], 1.0).unwrap();
    let starved = IntegratorConfig { max_steps: 2, ..Default::default() };
    assert!(matches!(
        dilation_sequence(&mut traj, Complex64::new(0.0, 0.0), &sched, &starved),
        Err(polyflow_core::Error::RangeExceeded { .. })
    ));
}

#[test]
fn core_types_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Polygon>();
    assert_send_sync::<polyflow_core::Trajectory>();
    assert_send_sync::<polyflow_core::LaplacianMatrix>();
    assert_send_sync::<polyflow_core::linearize::SpectralReport>();

    // Parameter sweeps over independent runs need no coordination.
    let results: Vec<f64> = std::thread::scope(|scope| {
        let handles: Vec<_> = [0.5, 1.0, 2.0]
            .map(|beta| {
                scope.spawn(move || {
                    let p = Polygon::regular(6, 1).unwrap();
                    evolve(&p, beta, 0.5, &IntegratorConfig::default()).unwrap().last().energy
                })
            })
            .into_iter()
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(results.len(), 3);
    assert!(results.iter().all(|e| e.is_finite() && *e > 0.0));
}
