use std::f64::consts::PI;

use bohmian_sn::stationary::{
    hj_residual, relax_with_history, solve_eq33_literal, solve_sn_ground_state, GridConfig, LiteralOptions,
    RelaxationOptions, ShootingOptions, SolverId,
};
use bohmian_sn::units::{gravitational_scales, PhysicalScales};

fn ground_energy(nodes: usize) -> f64 {
    let s = PhysicalScales::dimensionless();
    let sol = solve_sn_ground_state(&s, &GridConfig::new(30.0, nodes).unwrap(), &ShootingOptions::default()).unwrap();
    sol.eigenvalue.unwrap()
}

#[test]
fn ground_state_is_nodeless_normalised_and_decreasing() {
    let s = PhysicalScales::dimensionless();
    let sol = solve_sn_ground_state(&s, &GridConfig::new(30.0, 2000).unwrap(), &ShootingOptions::default()).unwrap();
    let amp = sol.profile.amp();
    assert!(amp.iter().all(|&a| a > 0.0));
    assert!(amp.windows(2).all(|w| w[1] <= w[0]));
    assert!((sol.profile.total_norm() - 1.0).abs() < 1e-10);
    assert_eq!(sol.solver, SolverId::Shooting);
    let e = sol.eigenvalue.unwrap();
    assert!(hj_residual(&sol.profile, &sol.phi, e, &s).unwrap() <= 1e-8);
    // Outside the bulk φ approaches the point-mass potential −Gm/r.
    let (r, phi) = (sol.profile.r(), &sol.phi);
    let last = r.len() - 1;
    assert!((phi[last] * r[last] + 1.0).abs() < 1e-6);
}

#[test]
fn eigenvalue_converges_at_second_order() {
    let e: Vec<f64> = [750, 1500, 3000].iter().map(|&n| ground_energy(n)).collect();
    let ratio = (e[0] - e[1]) / (e[1] - e[2]);
    assert!((ratio - 4.0).abs() < 0.05, "error ratio {ratio}");
    let extrapolated = (4.0 * e[2] - e[1]) / 3.0;
    assert!((extrapolated - e[2]).abs() < 1e-6);
    assert!((-0.1628..-0.1627).contains(&extrapolated));
}

#[test]
fn relaxation_energy_settles_on_the_shooting_eigenvalue() {
    let s = PhysicalScales::dimensionless();
    let grid = GridConfig::new(30.0, 1500).unwrap();
    let (sol, history) = relax_with_history(&s, &grid, &RelaxationOptions::default()).unwrap();
    assert_eq!(sol.solver, SolverId::Relaxation);
    assert!(history.iter().all(|h| (h.norm - 1.0).abs() < 1e-9));
    let shooting = ground_energy(1500);
    assert!((sol.eigenvalue.unwrap() / shooting - 1.0).abs() < 1e-6);
    let tail = &history[history.len() / 2..];
    assert!(tail.windows(2).all(|w| w[1].energy <= w[0].energy + 1e-12));
}

#[test]
fn physical_solution_follows_gravitational_units() {
    let grid = GridConfig::new(30.0, 1500).unwrap();
    let base = solve_sn_ground_state(&PhysicalScales::dimensionless(), &grid, &ShootingOptions::default()).unwrap();
    for (m, hbar, g) in [(3.0, 1.0, 1.0), (1.0, 2.0, 0.5)] {
        let s = gravitational_scales(m, hbar, g).unwrap();
        let sol = solve_sn_ground_state(&s, &grid, &ShootingOptions::default()).unwrap();
        let length = hbar * hbar / (g * m * m * m);
        let energy = g * g * m.powi(5) / (hbar * hbar);
        assert!((sol.half_width().unwrap() / (base.half_width().unwrap() * length) - 1.0).abs() < 1e-9);
        assert!((sol.eigenvalue.unwrap() / (base.eigenvalue.unwrap() * energy) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn literal_profile_is_set_by_the_bulk_length() {
    let mut reduced = Vec::new();
    for (m, hbar, g, rho0) in [(1.0, 1.0, 1.0, 1.0), (2.0, 1.0, 1.0, 1.0), (1.0, 0.5, 2.0, 3.0)] {
        let s = gravitational_scales(m, hbar, g).unwrap();
        let ell = (8.0 * PI * g * m * m / (hbar * hbar) * rho0).powf(-0.25);
        let sol = solve_eq33_literal(
            &s,
            rho0,
            &GridConfig::new(8.0 * ell, 1600).unwrap(),
            &LiteralOptions::default(),
        )
        .unwrap();
        assert_eq!(sol.solver, SolverId::InitialValue);
        assert!(sol.eigenvalue.is_none() && sol.residual_hj.is_none());
        assert!(sol.residual_eq33 <= LiteralOptions::default().tol);
        let rho_center = sol.profile.amp()[0].powi(2);
        assert!((rho_center / rho0 - 1.0).abs() < 1e-3);
        reduced.push(sol.half_width().unwrap() / ell);
    }
    assert!(
        reduced.iter().all(|w| (w / reduced[0] - 1.0).abs() < 1e-9),
        "{reduced:?}"
    );
}

#[test]
fn invalid_inputs_are_domain_errors() {
    assert_eq!(GridConfig::new(-1.0, 100).unwrap_err().exit_code(), 2);
    assert_eq!(GridConfig::new(10.0, 0).unwrap_err().exit_code(), 2);
    let s = PhysicalScales::dimensionless();
    let grid = GridConfig::new(30.0, 300).unwrap();
    let bad = ShootingOptions {
        mixing: 0.0,
        ..Default::default()
    };
    assert_eq!(solve_sn_ground_state(&s, &grid, &bad).unwrap_err().exit_code(), 2);
    let bad = LiteralOptions {
        p0: 1.0,
        ..Default::default()
    };
    assert!(solve_eq33_literal(&s, 1.0, &grid, &bad).is_err());
}
