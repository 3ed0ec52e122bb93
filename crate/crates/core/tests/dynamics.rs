use num_complex::Complex64;

use bohmian_sn::dynamics::{
    bohmian_trajectories, equivalence_transform, evolve_free, evolve_sn, force_balance_over_time, force_balance_scan,
    free_frame_on_grid, sample_packet_line, sample_packet_radial, Direction, FreeParams, Grid, Kinetic, SnParams,
};
use bohmian_sn::fields::RadialProfile;
use bohmian_sn::packet::{Packet1d, Packet3d};
use bohmian_sn::par::Execution;
use bohmian_sn::stationary::{solve_sn_ground_state, GridConfig, ShootingOptions};
use bohmian_sn::units::PhysicalScales;

fn ground_state(nodes: usize) -> (Grid, Vec<Complex64>, f64) {
    let s = PhysicalScales::dimensionless();
    let sol = solve_sn_ground_state(&s, &GridConfig::new(30.0, nodes).unwrap(), &ShootingOptions::default()).unwrap();
    let grid = Grid::radial(sol.profile.step(), sol.profile.len()).unwrap();
    let psi = sol.profile.amp().iter().map(|&a| Complex64::new(a, 0.0)).collect();
    (grid, psi, sol.half_width().unwrap())
}

#[test]
fn ground_state_is_stationary_under_evolution() {
    let (grid, psi, hw0) = ground_state(1500);
    let s = PhysicalScales::dimensionless();
    let params = SnParams {
        kinetic: Kinetic::FiniteDifference,
        store_every: 100,
        ..SnParams::new(s, 0.01, 1000)
    };
    let ev = evolve_sn(&psi, &grid, &params).unwrap();
    let e0 = ev.frames[0].energy;
    for f in &ev.frames {
        let hw = f.profile().unwrap().half_width().unwrap();
        assert!((hw / hw0 - 1.0).abs() < 1e-5, "t = {}: half-width {hw} vs {hw0}", f.t);
        assert!((f.energy - e0).abs() < 1e-9 * e0.abs());
        assert!((f.norm - 1.0).abs() < 1e-10);
    }
    for frame in force_balance_over_time(&ev, &s).unwrap() {
        assert!(
            frame.weighted_physical < 1e-4,
            "t = {}: {}",
            frame.t,
            frame.weighted_physical
        );
    }
}

#[test]
fn wide_packet_contracts_while_its_free_twin_spreads() {
    let s = PhysicalScales::dimensionless();
    let nodes = 1200;
    let grid = Grid::radial(60.0 / nodes as f64, nodes).unwrap();
    let p = Packet3d::at_rest(5.0, 1.0, 1.0).unwrap();
    let psi = sample_packet_radial(&p, &grid).unwrap();
    let run = |scales: PhysicalScales| {
        let ev = evolve_sn(
            &psi,
            &grid,
            &SnParams {
                store_every: 50,
                ..SnParams::new(scales, 0.05, 400)
            },
        )
        .unwrap();
        ev.frames.iter().map(|f| f.width()).collect::<Vec<_>>()
    };
    let (bound, free) = (run(s), run(s.without_gravity()));
    assert!(bound.windows(2).all(|w| w[1] < w[0]), "{bound:?}");
    assert!(free.windows(2).all(|w| w[1] > w[0]), "{free:?}");
    let t: f64 = 20.0;
    let spread = 5.0 * (1.0 + (t / (2.0 * 25.0)).powi(2)).sqrt();
    assert!((free.last().unwrap() / spread - 1.0).abs() < 1e-4);
}

#[test]
fn trajectories_scale_with_the_width() {
    let (m, hbar) = (1.0, 1.0);
    let grid = Grid::centered_line(20.0, 1024).unwrap();
    let p = Packet1d::at_rest(1.0, m, hbar).unwrap();
    let ev = evolve_free(
        &sample_packet_line(&p, &grid).unwrap(),
        &grid,
        &FreeParams {
            store_every: 4,
            ..FreeParams::new(m, hbar, 0.005, 400)
        },
    )
    .unwrap();
    let ens = bohmian_trajectories(&ev, m, hbar, 2000, 3, Execution::default()).unwrap();
    let mut worst: f64 = 0.0;
    for path in &ens.paths {
        for (t, x) in ens.times.iter().zip(path) {
            worst = worst.max((x - path[0] * (1.0 + t * t / 4.0).sqrt()).abs());
        }
    }
    assert!(worst < 1e-3, "{worst}");

    let seq = bohmian_trajectories(&ev, m, hbar, 2000, 3, Execution::Sequential).unwrap();
    let bits = |e: &bohmian_sn::dynamics::TrajectoryEnsemble| -> Vec<u64> {
        e.paths.iter().flatten().map(|x| x.to_bits()).collect()
    };
    assert_eq!(bits(&ens), bits(&seq));
    let other = bohmian_trajectories(&ev, m, hbar, 2000, 4, Execution::Sequential).unwrap();
    assert_ne!(other.seeds, seq.seeds);
}

#[test]
fn field_evolution_in_the_falling_frame_is_free_evolution() {
    let (m, hbar, g, t) = (1.0, 1.0, 0.7, 1.5);
    let grid = Grid::centered_line(25.0, 1024).unwrap();
    let p = Packet1d::at_rest(1.0, m, hbar).unwrap();
    let psi0 = sample_packet_line(&p, &grid).unwrap();
    // Splitting error: the kinetic and linear-potential steps do not commute.
    let gap = |dt: f64| {
        let steps = (t / dt).round() as usize;
        let field = evolve_free(
            &psi0,
            &grid,
            &FreeParams {
                g,
                ..FreeParams::new(m, hbar, dt, steps)
            },
        )
        .unwrap();
        let free = evolve_free(&psi0, &grid, &FreeParams::new(m, hbar, dt, steps)).unwrap();
        let last = field.last();
        let moved = free_frame_on_grid(&last.psi, &grid, g, last.t, m, hbar).unwrap();
        moved
            .iter()
            .zip(&free.last().psi)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (gap(0.01), gap(0.005));
    assert!(coarse < 1e-5, "{coarse}");
    assert!((coarse / fine - 4.0).abs() < 0.2, "{coarse} {fine}");

    let field = evolve_free(
        &psi0,
        &grid,
        &FreeParams {
            g,
            ..FreeParams::new(m, hbar, 0.01, 150)
        },
    )
    .unwrap();
    let last = field.last();
    let x = grid.coords();
    let there = equivalence_transform(&last.psi, &x, g, last.t, m, hbar, Direction::ToFree);
    let back = equivalence_transform(&there.psi, &there.coords, g, last.t, m, hbar, Direction::ToField);
    assert!(back.coords.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-12));
    assert!(back.psi.iter().zip(&last.psi).all(|(a, b)| (a - b).norm() < 1e-14));
}

#[test]
fn critical_gaussian_balances_only_near_its_core() {
    let s = PhysicalScales::dimensionless();
    let h = 0.01;
    let p = RadialProfile::radial_from_fn(h, 1200, |r| {
        (2.0 * std::f64::consts::PI).powf(-0.75) * (-r * r / 4.0).exp()
    })
    .unwrap();
    let b = force_balance_scan(&p, &s).unwrap();
    let w = b.physical_window;
    assert!(w.best_ratio <= 0.1 && w.lo <= w.best_r && w.best_r <= w.hi);
    assert!(w.lo < 0.2 && (0.5..1.0).contains(&w.hi), "{w:?}");
    assert!(b.weighted_physical > 0.1);
    assert!(b.weighted_literal > 1.0);
}

#[test]
fn geometry_mismatches_are_rejected() {
    let line = Grid::centered_line(10.0, 64).unwrap();
    let radial = Grid::radial(0.1, 64).unwrap();
    let psi = vec![Complex64::new(1.0, 0.0); 64];
    let s = PhysicalScales::dimensionless();
    assert!(evolve_sn(&psi, &line, &SnParams::new(s, 0.01, 1)).is_err());
    assert!(evolve_free(&psi, &radial, &FreeParams::new(1.0, 1.0, 0.01, 1)).is_err());
    assert!(Grid::radial(0.1, 4).is_err());
}
