use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64;

use super::sweep::{run_sweep, SweepMode, SweepSettings};
use super::table::{format_f64, Table};
use super::RunConfig;
use crate::dynamics::{
    bohmian_trajectories, evolve_free, evolve_sn, force_balance_scan, free_equation_residual, free_frame_on_grid,
    sample_packet_line, sample_packet_radial, Evolution, FreeParams, Grid, Kinetic, SnParams,
};
use crate::error::{Error, Result};
use crate::fields::{critical_width, gradient, quantum_potential_masked, solve_radial, RadialProfile};
use crate::packet::{Packet1d, Packet3d};
use crate::par::Execution;
use crate::stationary::{
    eq33_residual_field, solve_eq33_literal, solve_sn_ground_state, Eq33Mode, GridConfig, LiteralOptions,
    ShootingOptions, StationarySolution,
};
use crate::units::PhysicalScales;

/// Where tables go: files in a directory, or stdout for single-table runs.
#[derive(Debug, Clone)]
pub struct Output {
    dir: Option<PathBuf>,
    comment: String,
}

impl Output {
    pub fn new(cfg: &RunConfig) -> Self {
        Self {
            dir: cfg.out_dir(),
            comment: format!("bohmian-sn {} config={}", env!("CARGO_PKG_VERSION"), cfg.hash()),
        }
    }

    fn require_dir(&self, why: &str) -> Result<()> {
        match self.dir {
            Some(_) => Ok(()),
            None => Err(Error::Config(format!("{why} writes several files; pass --out DIR"))),
        }
    }

    pub fn emit(&self, name: &str, mut table: Table) -> Result<()> {
        table.comment = self.comment.clone();
        match &self.dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                let file = std::fs::File::create(dir.join(format!("{name}.csv")))?;
                table.write_to(std::io::BufWriter::new(file))
            }
            None => table.write_to(std::io::stdout().lock()),
        }
    }

    /// Single-table commands write to stdout without a directory.
    fn emit_optional(&self, name: &str, table: Table) -> Result<()> {
        if self.dir.is_some() {
            self.emit(name, table)
        } else {
            Ok(())
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_else(|| "NaN".into())
}

/// Width, centre quantum potential, quantum force one width out, and
/// trajectories of quantile seeds, at evenly spaced times.
pub fn run_packet(cfg: &RunConfig, out: &Output) -> Result<()> {
    let (hbar, _) = cfg.constants()?;
    let m = cfg.positive("mass", 1.0)?;
    let sigma0 = cfg.positive("sigma0", 1.0)?;
    let t_max = cfg.positive("t_max", 2.0)?;
    let steps = cfg.count("steps", 20)?;
    let n_seeds = cfg.count("seeds", 5)?;
    let p1 = Packet1d::at_rest(sigma0, m, hbar)?;
    let seeds = p1.quantile_seeds(n_seeds);
    let mut table = Table::new(&["t", "sigma", "x_seed", "x_t", "Q_center", "f_at_sigma"]);
    match cfg.get_or("dim", 1usize)? {
        1 => {
            for k in 0..=steps {
                let t = t_max * k as f64 / steps as f64;
                let sigma = p1.width(t)?;
                let q = p1.quantum_potential(&p1.center(t), t)?;
                let f = p1.quantum_force(&[p1.center(t)[0] + sigma], t)?[0];
                for &x0 in &seeds {
                    table.push_f64(&[t, sigma, x0, p1.trajectory(&[x0], t)?[0], q, f]);
                }
            }
        }
        3 => {
            let p3 = Packet3d::at_rest(sigma0, m, hbar)?;
            for k in 0..=steps {
                let t = t_max * k as f64 / steps as f64;
                let sigma = p3.width(t)?;
                let c = p3.center(t);
                let q = p3.quantum_potential(&c, t)?;
                let f = p3.quantum_force(&[c[0] + sigma, c[1], c[2]], t)?[0];
                for &x0 in &seeds {
                    table.push_f64(&[t, sigma, x0, p3.trajectory(&[x0, 0.0, 0.0], t)?[0], q, f]);
                }
            }
        }
        d => return Err(Error::Config(format!("`dim` must be 1 or 3, got {d}"))),
    }
    out.emit("packet", table)
}

pub fn run_critical(cfg: &RunConfig, out: &Output) -> Result<()> {
    let masses = match cfg.raw("mass_list") {
        Some(_) => cfg.list("mass_list")?,
        None => vec![cfg.positive("mass", 1.0)?],
    };
    let mut table = Table::new(&["m", "sigma_star", "E_at_min", "mean_Q_at_min"]);
    for m in masses {
        let r = critical_width(&cfg.scales_for(m)?)?;
        table.push_f64(&[m, r.sigma_star, r.e_at_min, r.mean_q_at_min]);
    }
    out.emit("critical", table)
}

fn stationary_table(sol: &StationarySolution, scales: &PhysicalScales, residual: &[f64]) -> Result<Table> {
    let p = &sol.profile;
    let q = quantum_potential_masked(p, scales, 1e-8);
    let mut table = Table::new(&["r", "sqrt_rho", "rho", "Q", "phi", "residual"]);
    for i in 0..p.len() {
        let a = p.amp()[i];
        table.push_f64(&[p.r()[i], a, a * a, q[i], sol.phi[i], residual[i]]);
    }
    Ok(table)
}

/// Physical mode solves in gravitational units and rescales; literal mode
/// integrates with the configured constants directly.
pub fn run_stationary(cfg: &RunConfig, out: &Output) -> Result<()> {
    let scales = cfg.scales()?;
    let mode: Eq33Mode = cfg.get_or("mode", Eq33Mode::Physical)?;
    let (sol, used, residual) = match mode {
        Eq33Mode::Physical => {
            let unit = PhysicalScales::dimensionless();
            let grid = GridConfig::new(cfg.positive("r_max", 30.0)?, cfg.count("nodes", 3000)?)?;
            let opts = ShootingOptions {
                tol: cfg.positive("tol", 1e-8)?,
                max_iterations: cfg.count("max_iterations", 1000)?,
                ..Default::default()
            };
            let s = solve_sn_ground_state(&unit, &grid, &opts)?;
            let e = s.eigenvalue.unwrap_or(f64::NAN);
            let q = quantum_potential_masked(&s.profile, &unit, 1e-8);
            let residual: Vec<f64> = q.iter().zip(&s.phi).map(|(q, p)| (q + p - e).abs()).collect();
            let l = scales.length_scale;
            let amp = s.profile.amp().iter().map(|a| a * l.powf(-1.5)).collect();
            let rescaled = StationarySolution {
                profile: RadialProfile::radial(s.profile.step() * l, amp)?,
                eigenvalue: Some(scales.from_dimensionless_energy(e)),
                phi: s.phi.iter().map(|p| scales.from_dimensionless_potential(*p)).collect(),
                ..s
            };
            (rescaled, scales, residual)
        }
        Eq33Mode::Literal => {
            let rho0 = cfg.positive("rho0", 1.0)?;
            let kappa = 8.0 * std::f64::consts::PI * scales.g * scales.m * scales.m / (scales.hbar * scales.hbar);
            let ell = (kappa * rho0).powf(-0.25);
            let grid = GridConfig::new(cfg.positive("r_max", 8.0 * ell)?, cfg.count("nodes", 1600)?)?;
            let opts = LiteralOptions {
                tol: cfg.positive("tol", LiteralOptions::default().tol)?,
                ..Default::default()
            };
            let s = solve_eq33_literal(&scales, rho0, &grid, &opts)?;
            let bulk = s.profile.amp().iter().take_while(|&&a| a > 0.0).count();
            let source = 4.0 * std::f64::consts::PI * scales.g * rho0;
            let mut residual = vec![f64::NAN; s.profile.len()];
            let inner = RadialProfile::radial(s.profile.step(), s.profile.amp()[..bulk].to_vec())?;
            for (slot, v) in residual
                .iter_mut()
                .zip(eq33_residual_field(&inner, &scales, Eq33Mode::Literal)?)
            {
                *slot = (v / source).abs();
            }
            (s, scales, residual)
        }
    };
    let table = stationary_table(&sol, &used, &residual)?;
    let mut summary = Table::new(&[
        "mode",
        "E",
        "half_width",
        "residual_hj",
        "residual_eq33",
        "solver",
        "iterations",
    ]);
    summary.push(vec![
        mode.to_string(),
        opt(sol.eigenvalue),
        opt(sol.half_width()),
        opt(sol.residual_hj),
        format_f64(sol.residual_eq33),
        sol.solver.name().into(),
        sol.iterations.to_string(),
    ]);
    eprintln!(
        "E = {}, half_width = {}, residual_hj = {}, residual_eq33 = {}",
        opt(sol.eigenvalue),
        opt(sol.half_width()),
        opt(sol.residual_hj),
        format_f64(sol.residual_eq33)
    );
    out.emit("stationary", table)?;
    out.emit_optional("stationary_summary", summary)
}

fn frames_table(ev: &Evolution, scales: &PhysicalScales, field_g: f64) -> Result<Table> {
    let mut table = Table::new(&["t", "r", "psi2", "Q", "phi", "f_q", "f_g"]);
    for f in &ev.frames {
        let x = f.coords();
        let profile = f.profile()?;
        let q = quantum_potential_masked(&profile, scales, 1e-6);
        let (phi, f_q, f_g): (Vec<f64>, Vec<f64>, Vec<f64>) = match f.grid {
            Grid::Line { h, .. } => {
                let f_q = gradient(&q, h).into_iter().map(|g| -g).collect();
                (
                    x.iter().map(|x| -field_g * x).collect(),
                    f_q,
                    vec![scales.m * field_g; x.len()],
                )
            }
            Grid::Radial { h, .. } => {
                let rho = f.density();
                let phi = solve_radial(&x, h, &rho, 4.0 * std::f64::consts::PI * scales.g * scales.m);
                let b = force_balance_scan(&profile, scales)?;
                (phi, b.f_q, b.f_g)
            }
        };
        let rho = f.density();
        for i in 0..x.len() {
            table.push_f64(&[f.t, x[i], rho[i], q[i], phi[i], f_q[i], f_g[i]]);
        }
    }
    Ok(table)
}

pub fn run_evolve(cfg: &RunConfig, out: &Output) -> Result<()> {
    let mode = cfg.raw("mode").unwrap_or("free");
    let scales = cfg.scales()?;
    let sigma0 = cfg.positive("sigma0", 1.0)?;
    let dt = cfg.positive("dt", 0.01)?;
    let steps = cfg.count("steps", 200)?;
    let store_every = cfg.count("store_every", 10)?;
    let n_seeds = cfg.get_or("seeds", 0usize)?;
    let rng_seed = cfg.get_or("rng_seed", 0u64)?;
    if n_seeds > 0 {
        out.require_dir("evolve with trajectories")?;
    }
    match mode {
        "free" => {
            let g = cfg.get_or("g", 0.0)?;
            let grid = Grid::centered_line(cfg.positive("r_max", 40.0)? * sigma0, cfg.count("nodes", 1024)?)?;
            let p = Packet1d::at_rest(sigma0, scales.m, scales.hbar)?;
            let psi0 = sample_packet_line(&p, &grid)?;
            let params = FreeParams {
                g,
                store_every,
                ..FreeParams::new(scales.m, scales.hbar, dt, steps)
            };
            let ev = evolve_free(&psi0, &grid, &params)?;
            let free_scales = scales.without_gravity();
            out.emit("frames", frames_table(&ev, &free_scales, g)?)?;
            if n_seeds > 0 {
                let ens = bohmian_trajectories(&ev, scales.m, scales.hbar, n_seeds, rng_seed, Execution::default())?;
                let mut table = Table::new(&["seed_id", "t", "x"]);
                for (i, path) in ens.paths.iter().enumerate() {
                    for (t, x) in ens.times.iter().zip(path).filter(|(_, x)| x.is_finite()) {
                        table.push(vec![i.to_string(), format_f64(*t), format_f64(*x)]);
                    }
                }
                if !ens.excluded.is_empty() {
                    eprintln!(
                        "{} of {} seeds reached a node and were excluded",
                        ens.excluded.len(),
                        ens.len()
                    );
                }
                out.emit("trajectories", table)?;
            }
            Ok(())
        }
        "sn" => {
            if n_seeds > 0 {
                return Err(Error::Config("trajectory ensembles need `mode = free`".into()));
            }
            let nodes = cfg.count("nodes", 1200)?;
            let grid = Grid::radial(cfg.positive("r_max", 12.0)? * sigma0 / nodes as f64, nodes)?;
            let p = Packet3d::at_rest(sigma0, scales.m, scales.hbar)?;
            let psi0 = sample_packet_radial(&p, &grid)?;
            let kinetic: Kinetic = cfg.get_or("kinetic", Kinetic::Spectral)?;
            let params = SnParams {
                store_every,
                kinetic,
                ..SnParams::new(scales, dt, steps)
            };
            let ev = evolve_sn(&psi0, &grid, &params)?;
            out.emit("frames", frames_table(&ev, &scales, 0.0)?)
        }
        other => Err(Error::Config(format!(
            "unknown evolve mode `{other}` (expected free or sn)"
        ))),
    }
}

pub fn run_sweep_command(cfg: &RunConfig, out: &Output) -> Result<()> {
    out.require_dir("sweep")?;
    let masses = cfg.list("mass_list")?;
    let mode: SweepMode = cfg.get_or("mode", SweepMode::LiteralFig2)?;
    let (hbar, g) = cfg.constants()?;
    let settings = SweepSettings {
        hbar,
        g,
        rho0: cfg.positive("rho0", 1.0)?,
        r_max: cfg.get("r_max")?,
        nodes: cfg.get("nodes")?,
        tol: cfg.get("tol")?,
    };
    let res = run_sweep(&masses, mode, &settings, Execution::default())?;
    let mut summary = Table::new(&[
        "m",
        "half_width",
        "central_density",
        "residual_eq33",
        "eigenvalue",
        "residual_hj",
    ]);
    for r in &res.rows {
        summary.push(vec![
            format_f64(r.mass),
            format_f64(r.half_width),
            format_f64(r.central_density),
            format_f64(r.residual_eq33),
            opt(r.eigenvalue),
            opt(r.residual_hj),
        ]);
    }
    out.emit("sweep_summary", summary)?;
    let mut fit = Table::new(&["mode", "slope", "intercept", "fit_residual", "masses"]);
    fit.push(vec![
        mode.name().into(),
        format_f64(res.slope),
        format_f64(res.intercept),
        format_f64(res.fit_residual),
        res.rows.len().to_string(),
    ]);
    out.emit("sweep_fit", fit)?;
    for (i, sol) in res.solutions.iter().enumerate() {
        let mut t = Table::new(&["r", "sqrt_rho", "rho"]);
        for (r, a) in sol.profile.r().iter().zip(sol.profile.amp()) {
            t.push_f64(&[*r, *a, a * a]);
        }
        out.emit(&format!("sweep_profile_{i}"), t)?;
    }
    let _ = writeln!(
        std::io::stderr(),
        "slope = {}, fit residual = {}",
        format_f64(res.slope),
        format_f64(res.fit_residual)
    );
    Ok(())
}

/// Evolves a packet in a uniform field, maps it to the free-fall frame at
/// the final time and reports the free-equation residual there.
pub fn run_equivalence(cfg: &RunConfig, out: &Output) -> Result<()> {
    let (hbar, _) = cfg.constants()?;
    let m = cfg.positive("mass", 1.0)?;
    let sigma0 = cfg.positive("sigma0", 1.0)?;
    let g = cfg.get_or("g", 1.0)?;
    let dt = cfg.positive("dt", 0.005)?;
    let steps = cfg.count("steps", 200)?;
    let grid = Grid::centered_line(cfg.positive("r_max", 30.0)? * sigma0, cfg.count("nodes", 1024)?)?;
    let p = Packet1d::at_rest(sigma0, m, hbar)?;
    let psi0 = sample_packet_line(&p, &grid)?;
    // One step past the reported time for the centred time difference.
    let ev = evolve_free(
        &psi0,
        &grid,
        &FreeParams {
            g,
            ..FreeParams::new(m, hbar, dt, steps + 1)
        },
    )?;
    let frame = |k: usize| -> Result<Vec<Complex64>> {
        let f = &ev.frames[k];
        free_frame_on_grid(&f.psi, &grid, g, f.t, m, hbar)
    };
    let (before, at, after) = (frame(steps - 1)?, frame(steps)?, frame(steps + 1)?);
    let residual = free_equation_residual(&before, &at, &after, grid.step(), dt, m, hbar);
    let mut table = Table::new(&["X", "re_Psi", "im_Psi", "abs_Psi", "residual"]);
    for (i, x) in grid.coords().iter().enumerate() {
        table.push_f64(&[*x, at[i].re, at[i].im, at[i].norm(), residual[i]]);
    }
    let worst = residual.iter().cloned().fold(0.0, f64::max);
    eprintln!(
        "t = {}, max residual = {}",
        format_f64(ev.frames[steps].t),
        format_f64(worst)
    );
    out.emit("equivalence", table)
}
