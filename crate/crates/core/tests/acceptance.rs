//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! with status 1 if any criterion fails.
//!
//! Pass a substring as the first argument to run a subset, e.g.
//! `cargo test -p bubblewave-core --test acceptance -- focusing`.

use std::f64::consts::PI;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, RngAlgorithm, TestRng, TestRunner};
use statrs::function::gamma::gamma;

use bubblewave::analysis::{analysis_window, fit_order};
use bubblewave::config::OdeLimits;
use bubblewave::fractional::caputo_derivative;
use bubblewave::io::{write_probe_csv, write_snapshots};
use bubblewave::ode::rk4_step;
use bubblewave::wave::norms::{h1, h2, l2};
use bubblewave::wave::{build_grid, nondegeneracy_min, Damping, Grid, WaveProblem, WaveStepper};
use bubblewave::{
    fft_spectrum, harmonic_metrics, run_coupled, run_wave, simulate_bubble, waveform_skewness, BubbleTrajectory,
    Error, ModelKind, NewmarkSpec, NonlinearityCoefficient, OdeSettings, PhysicalParams, PressureDrive,
    SideCondition, SimulationConfig, Termination, UniformSeries, WaveSpec, Window,
};

/// Nonlinearity coefficient of the desk-scale wave runs (1/Pa). The tabulated
/// 1.556e-9 gives 2kp ≈ 1e-5 at the desk excitation, far below anything a
/// waveform metric can resolve.
const DESK_K: f64 = 1e-5;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn main() {
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [(&str, fn() -> Verdict); 13] = [
        ("equilibrium fixed point", c01_equilibrium),
        ("adaptive step range", c02_step_range),
        ("coated amplitude trends", c03_coated_trends),
        ("expansion magnitude", c04_expansion),
        ("shell stabilization", c05_shell),
        ("harmonics", c06_harmonics),
        ("numerical orders", c07_orders),
        ("linear wave sanity", c08_linear_wave),
        ("damping comparison", c09_damping),
        ("focusing", c10_focusing),
        ("monitor soundness", c11_monitor),
        ("decoupling identity and coupled self-convergence", c12_coupling),
        ("empirical Lipschitz", c13_lipschitz),
    ];
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if let Some(f) = &filter {
            if !name.contains(f.as_str()) {
                continue;
            }
        }
        ran += 1;
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<48} {} ({:.1} s) {}",
            i + 1,
            name,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn sine_run(kind: ModelKind, amplitude: f64, frequency: f64, t_final: f64) -> BubbleTrajectory {
    let params = PhysicalParams::default();
    let settings = OdeSettings::new(t_final, 1.75, &OdeLimits::default());
    simulate_bubble(kind, &params, &PressureDrive::Sine { amplitude, frequency }, &settings, false).unwrap()
}

fn expansion(traj: &BubbleTrajectory) -> f64 {
    traj.max_radius() / PhysicalParams::default().r0
}

fn c01_equilibrium() -> Verdict {
    let start = Instant::now();
    let params = PhysicalParams::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for kind in [ModelKind::Rpnnp, ModelKind::RpRadiation, ModelKind::RpCoated] {
        let settings = OdeSettings::new(1.1e-4, 1.75, &OdeLimits::default());
        let traj = simulate_bubble(kind, &params, &PressureDrive::Zero, &settings, false).unwrap();
        let dev = traj
            .radii
            .iter()
            .map(|r| (r - params.r0).abs() / params.r0)
            .fold(0.0, f64::max);
        pass &= traj.termination == Termination::Completed && traj.steps >= 1_000_000 && dev <= 1e-9;
        parts.push(format!("{kind}: {} steps, max dev {dev:.1e}", traj.steps));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 10.0;
    verdict(pass, format!("{}; {secs:.1} s", parts.join("; ")))
}

fn c02_step_range() -> Verdict {
    let start = Instant::now();
    // five drive periods at 0.5 MHz
    let traj = sine_run(ModelKind::RpCoated, 1e6, 0.5e6, 10e-6);
    let (lo, hi) = traj.dt_range;
    let secs = start.elapsed().as_secs_f64();
    let pass = traj.termination == Termination::Completed && lo >= 1e-12 && hi <= 1e-9 && secs < 60.0;
    verdict(pass, format!("dt in [{lo:.3e}, {hi:.3e}] s over {} steps", traj.steps))
}

fn c03_coated_trends() -> Verdict {
    let amps = [1e6, 5e6, 10e6];
    // five periods at each frequency
    let at = |f: f64| -> Vec<f64> {
        amps.iter()
            .map(|&a| expansion(&sine_run(ModelKind::RpCoated, a, f, 5.0 / f)))
            .collect()
    };
    let fast = at(0.5e6);
    let slow = at(0.2e6);
    let monotone = fast.windows(2).all(|w| w[1] > w[0]);
    let lower_f_larger = slow.iter().zip(&fast).all(|(s, f)| s > f);
    verdict(
        monotone && lower_f_larger,
        format!("max R/R0 at 0.5 MHz {fast:.3?}, at 0.2 MHz {slow:.3?} for A = 1, 5, 10 MPa"),
    )
}

fn c04_expansion() -> Verdict {
    let traj = sine_run(ModelKind::RpCoated, 15e6, 0.5e6, 20e-6);
    let e = expansion(&traj);
    verdict(
        traj.termination == Termination::Completed && (4.0..=8.0).contains(&e),
        format!("max R/R0 = {e:.3} ({})", traj.termination),
    )
}

fn c05_shell() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for f in [0.1e6, 0.15e6] {
        let coated = expansion(&sine_run(ModelKind::RpCoated, 0.15e6, f, 50e-6));
        let bare = sine_run(ModelKind::RpRadiation, 0.15e6, f, 50e-6);
        let plain = expansion(&bare);
        pass &= coated < 2.0 && plain > 3.0;
        parts.push(format!(
            "f = {:.2} MHz: coated {coated:.3}, non-coated {plain:.3} ({})",
            f / 1e6,
            bare.termination
        ));
    }
    verdict(pass, parts.join("; "))
}

fn thd_at(frequency: f64) -> (f64, bool, bool) {
    let traj = sine_run(ModelKind::RpCoated, 15e6, frequency, 10.0 / frequency);
    let series = analysis_window(&traj, frequency, 10.0, 1 << 14).unwrap();
    let spec = fft_spectrum(&series, Window::Hann).unwrap();
    let m = harmonic_metrics(&spec, frequency, 1).unwrap();
    (
        m.thd,
        spec.has_local_max_near(2.0 * frequency, 1),
        spec.has_local_max_near(3.0 * frequency, 1),
    )
}

fn c06_harmonics() -> Verdict {
    let (thd_low, second, third) = thd_at(0.5e6);
    let (thd_high, _, _) = thd_at(5e6);
    verdict(
        second && third && thd_low > thd_high,
        format!("local max at 2f: {second}, 3f: {third}; THD 0.5 MHz {thd_low:.4} vs 5 MHz {thd_high:.4}"),
    )
}

fn dirichlet_grid(n: usize) -> Grid {
    build_grid(&WaveSpec {
        dim: 1,
        extent: [1.0, 0.0],
        nodes: [n, 0],
        sides: [SideCondition::Dirichlet; 4],
        excite: None,
        focus: None,
        ..WaveSpec::default()
    })
    .unwrap()
}

fn unit_problem(grid: Grid, k: f64, damping: Damping, newmark: NewmarkSpec, dt: f64) -> WaveProblem {
    WaveProblem {
        k: vec![k; grid.len()],
        grid,
        excitation: None,
        c: 1.0,
        damping,
        newmark,
        gamma_floor: 0.1,
        dt,
    }
}

/// Largest L² error against cos(πt) sin(πx) over one period (c = 1, L = 1,
/// dt = h). At the period end itself the phase error enters only squared.
fn standing_wave_error(n: usize, newmark: NewmarkSpec) -> f64 {
    let g = dirichlet_grid(n);
    let dt = g.h[0];
    let pr = unit_problem(g.clone(), 0.0, Damping::Strong { b: 0.0 }, newmark, dt);
    let p0: Vec<f64> = (0..g.len()).map(|i| (PI * g.coords(i)[0]).sin()).collect();
    let mut st = WaveStepper::new(pr, p0.clone(), vec![0.0; g.len()], None).unwrap();
    let steps = (2.0 / dt).round() as u64;
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        st.step(None).unwrap();
        let t = st.time();
        let err: Vec<f64> = p0
            .iter()
            .zip(&st.field().p)
            .map(|(e, p)| p - e * (PI * t).cos())
            .collect();
        worst = worst.max(l2(&g, &err));
    }
    worst
}

fn c07_orders() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();

    let start = Instant::now();
    let t_end: f64 = 6.4;
    let steps = [0.2, 0.1, 0.05, 0.025];
    let errors: Vec<f64> = steps
        .iter()
        .map(|&dt| {
            let (mut x, mut v) = (1.0, 0.0);
            let n = (t_end / dt).round() as usize;
            for i in 0..n {
                (x, v) = rk4_step(x, v, i as f64 * dt, dt, |_, x, _| -x);
            }
            (x - t_end.cos()).abs().max((v + t_end.sin()).abs())
        })
        .collect();
    let rk4 = fit_order(&steps, &errors).unwrap().order;
    pass &= rk4 >= 3.8 && start.elapsed().as_secs_f64() < 30.0;
    parts.push(format!("RK4 {rk4:.3}"));

    let start = Instant::now();
    let nodes = [51, 101, 201];
    let hs: Vec<f64> = nodes.iter().map(|&n| 1.0 / (n - 1) as f64).collect();
    let errs: Vec<f64> = nodes
        .iter()
        .map(|&n| standing_wave_error(n, NewmarkSpec::trapezoidal()))
        .collect();
    let newmark = fit_order(&hs, &errs).unwrap().order;
    pass &= newmark >= 1.8 && start.elapsed().as_secs_f64() < 30.0;
    let damped: Vec<f64> = nodes
        .iter()
        .map(|&n| standing_wave_error(n, NewmarkSpec::default()))
        .collect();
    let damped = fit_order(&hs, &damped).unwrap().order;
    parts.push(format!("Newmark (1/2, 1/4) {newmark:.3} [(0.7, 0.4): {damped:.3}]"));

    for alpha in [0.3, 0.5, 0.8] {
        let start = Instant::now();
        let exact = 2.0 / gamma(3.0 - alpha);
        let ns = [16usize, 32, 64, 128, 256];
        let dts: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
        let errs: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let dt = 1.0 / n as f64;
                let samples: Vec<f64> = (0..=n).map(|j| (j as f64 * dt).powi(2)).collect();
                (caputo_derivative(&samples, dt, alpha).unwrap() - exact).abs()
            })
            .collect();
        let order = fit_order(&dts, &errs).unwrap().order;
        pass &= order >= 2.0 - alpha - 0.1 && start.elapsed().as_secs_f64() < 30.0;
        parts.push(format!("L1 α={alpha}: {order:.3}"));
    }
    verdict(pass, parts.join("; "))
}

/// 1D config: excited Neumann end at x = 0, Dirichlet end at x = `len`.
fn desk_1d(len: f64, nodes: usize, t_final: f64, probes: &[f64]) -> SimulationConfig {
    let mut cfg = SimulationConfig::default();
    cfg.wave.dim = 1;
    cfg.wave.extent = [len, 0.0];
    cfg.wave.nodes = [nodes, 0];
    cfg.wave.sides = [
        SideCondition::Neumann,
        SideCondition::Dirichlet,
        SideCondition::Dirichlet,
        SideCondition::Dirichlet,
    ];
    cfg.wave.excite = Some([0.0, 0.0]);
    cfg.wave.focus = None;
    cfg.wave.t_final = t_final;
    cfg.probes = probes.iter().map(|&x| [x, 0.0]).collect();
    cfg
}

fn c08_linear_wave() -> Verdict {
    let err = standing_wave_error(401, NewmarkSpec::trapezoidal());
    let damped = standing_wave_error(401, NewmarkSpec::default());
    let mut worst: f64 = 0.0;
    for attenuation in [bubblewave::Attenuation::Strong, bubblewave::Attenuation::Fractional] {
        let mut cfg = desk_1d(0.3, 121, 1.5e-4, &[0.05, 0.1, 0.2]);
        cfg.params.k = NonlinearityCoefficient::Constant(0.0);
        cfg.params.b = 1e-3;
        cfg.attenuation = attenuation;
        let base = run_wave(&cfg).unwrap();
        for s in [0.5, 2.0, 3.7] {
            let mut scaled = cfg.clone();
            scaled.wave.a_p *= s;
            let out = run_wave(&scaled).unwrap();
            for (a, b) in base.probes.iter().zip(&out.probes) {
                let norm = a.peak_abs() * s;
                let dev = a
                    .pressures
                    .iter()
                    .zip(&b.pressures)
                    .map(|(x, y)| (y - s * x).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(dev / norm);
            }
        }
    }
    verdict(
        err < 1e-3 && worst <= 1e-10,
        format!(
            "standing wave L2 error {err:.3e} with (1/2, 1/4) [(0.7, 0.4): {damped:.3e}]; superposition max rel dev {worst:.2e}"
        ),
    )
}

fn c09_damping() -> Verdict {
    let mut cfg = desk_1d(0.6, 1201, 4e-4, &[0.3]);
    cfg.params.k = NonlinearityCoefficient::Constant(DESK_K);
    // with the tabulated b both damping terms are ~1e-9 of c² and the runs
    // agree to round-off; at 1e-4 the fractional term is visible
    cfg.params.b = 1e-4;
    let mut stats = Vec::new();
    for attenuation in [bubblewave::Attenuation::Strong, bubblewave::Attenuation::Fractional] {
        cfg.attenuation = attenuation;
        let out = run_wave(&cfg).unwrap();
        let tr = &out.probes[0];
        let series = UniformSeries::new(tr.t0, tr.dt, tr.pressures.clone()).unwrap();
        let s = waveform_skewness(&series, cfg.wave.f_p).unwrap();
        stats.push((tr.peak_abs(), s.normalized_slope));
    }
    let (strong, frac) = (stats[0], stats[1]);
    let lower = frac.0 < strong.0;
    let steeper = frac.1 > strong.1;
    verdict(
        lower && steeper,
        format!(
            "peak strong {:.2} Pa, fractional {:.2} Pa (lower: {lower}); normalized slope strong {:.4}, fractional {:.4} (higher: {steeper})",
            strong.0, frac.0, strong.1, frac.1
        ),
    )
}

fn focal_metrics(k: f64) -> (f64, f64) {
    let mut cfg = SimulationConfig::default();
    cfg.params.k = NonlinearityCoefficient::Constant(k);
    let out = run_wave(&cfg).unwrap();
    let (near, focal) = (&out.probes[0], &out.probes[1]);
    (focal.peak_abs() / near.peak_abs(), focal.peak() / focal.trough().abs())
}

fn c10_focusing() -> Verdict {
    let (gain, ratio) = focal_metrics(DESK_K);
    let (gain0, ratio0) = focal_metrics(0.0);
    verdict(
        gain > 1.2 && ratio > 1.05,
        format!(
            "k = {DESK_K:e}: gain {gain:.3}, focal max/|min| {ratio:.3}; linear baseline k = 0: gain {gain0:.3}, max/|min| {ratio0:.3}"
        ),
    )
}

/// Steps a config's wave problem until `steps` or the first error, checking
/// every accepted step. Returns the error, if any, and the accepted count.
fn step_checked(cfg: &SimulationConfig, steps: u64) -> (Option<Error>, u64, Option<String>) {
    let problem = WaveProblem::from_config(cfg).unwrap();
    let n = problem.grid.len();
    let floor = problem.gamma_floor;
    let mut st = WaveStepper::new(problem, vec![0.0; n], vec![0.0; n], None).unwrap();
    for i in 0..steps {
        if let Err(e) = st.step(None) {
            return (Some(e), i, None);
        }
        let field = st.field();
        if let Some(bad) = field.p.iter().chain(&field.p_t).chain(&field.p_tt).position(|v| !v.is_finite()) {
            return (None, i + 1, Some(format!("nonfinite value {bad} accepted at t = {:e}", st.time())));
        }
        let g = nondegeneracy_min(field);
        if g < floor {
            return (None, i + 1, Some(format!("accepted 1 + 2kp = {g} < {floor}")));
        }
    }
    (None, steps, None)
}

fn c11_monitor() -> Verdict {
    let mut cfg = desk_1d(0.3, 121, 2e-4, &[0.1]);
    cfg.params.k = NonlinearityCoefficient::Constant(1e-4);
    cfg.wave.a_p = 1e7;
    let steps = WaveProblem::from_config(&cfg).unwrap().steps_to(cfg.wave.t_final);
    let (err, accepted, violation) = step_checked(&cfg, steps);
    let large_ok = match (&err, &violation) {
        (Some(e @ Error::Degenerate { node, time, .. }), None) => {
            let msg = e.to_string();
            msg.contains(&format!("node {node}")) && msg.contains(&format!("{time:e}"))
        }
        _ => false,
    };
    let large = format!(
        "large-k run: {} after {accepted} steps",
        err.as_ref().map_or("no error".to_string(), |e| e.to_string())
    );

    let seed = 0x5eed_u64;
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let mut runner = TestRunner::new_with_rng(
        RunnerConfig {
            cases: 100,
            failure_persistence: None,
            ..RunnerConfig::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &bytes),
    );
    let strategy = (
        (21usize..81, 0.0f64..2e-4, 3.0f64..7.5, any::<bool>(), -9.0f64..-3.0),
        (0usize..3, 4.0f64..7.3, 5.0f64..6.7),
    );
    let counts = std::cell::Cell::new((0u32, 0u32));
    let fuzz = runner.run(&strategy, |((nodes, k, log_a, fractional, log_b), (model, log_amp, log_f))| {
        let mut cfg = desk_1d(0.1, nodes, 1e-4, &[0.05]);
        cfg.params.k = NonlinearityCoefficient::Constant(k);
        cfg.params.b = 10f64.powf(log_b);
        cfg.wave.a_p = 10f64.powf(log_a);
        if fractional {
            cfg.attenuation = bubblewave::Attenuation::Fractional;
        }
        let steps = WaveProblem::from_config(&cfg).unwrap().steps_to(cfg.wave.t_final);
        let (err, _, violation) = step_checked(&cfg, steps);
        prop_assert!(violation.is_none(), "{}", violation.unwrap());
        if let Some(e) = err {
            prop_assert!(
                matches!(e, Error::Degenerate { .. } | Error::CorrectorDiverged { .. }),
                "unexpected error {e}"
            );
            let (a, b) = counts.get();
            counts.set((a + 1, b));
        }

        let kind = [ModelKind::Rpnnp, ModelKind::RpRadiation, ModelKind::RpCoated][model];
        let f = 10f64.powf(log_f);
        let traj = sine_run(kind, 10f64.powf(log_amp), f, 3.0 / f);
        prop_assert!(
            traj.radii.iter().chain(&traj.velocities).all(|v| v.is_finite()),
            "nonfinite bubble state"
        );
        prop_assert!(traj.radii.iter().all(|&r| r > 0.0), "accepted R <= 0");
        if traj.termination != Termination::Completed {
            let (a, b) = counts.get();
            counts.set((a, b + 1));
        }
        Ok(())
    });
    let (wave_stops, bubble_stops) = counts.get();
    let fuzz_ok = fuzz.is_ok();
    let fuzz_msg = match fuzz {
        Ok(()) => format!(
            "fuzz 100 configs (seed {seed:#x}): no violation, {wave_stops} wave runs stopped by the monitor, {bubble_stops} bubble runs stopped early"
        ),
        Err(e) => format!("fuzz failure: {e}"),
    };
    verdict(large_ok && fuzz_ok, format!("{large}; {fuzz_msg}"))
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn write_field_csvs(dir: &Path, out: &bubblewave::WaveOutput) {
    fs::create_dir_all(dir).unwrap();
    for (i, tr) in out.probes.iter().enumerate() {
        write_probe_csv(&dir.join(format!("probe_{i}.csv")), tr).unwrap();
    }
    write_snapshots(dir, &out.grid, &out.snapshots).unwrap();
}

fn c12_coupling() -> Verdict {
    let start = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = desk_1d(0.1, 41, 6.4e-5, &[0.02, 0.05]);
    cfg.params.k = NonlinearityCoefficient::Constant(DESK_K);
    cfg.wave.snapshots = 4;
    cfg.xi = Some(0.0);
    let wave = run_wave(&cfg).unwrap();
    let coupled = run_coupled(&cfg).unwrap();
    write_field_csvs(&tmp.path().join("wave"), &wave);
    write_field_csvs(&tmp.path().join("coupled"), &coupled.wave);
    let a = dir_bytes(&tmp.path().join("wave"));
    let b = dir_bytes(&tmp.path().join("coupled"));
    let identical = !a.is_empty() && a == b;

    let xi = 1e21;
    cfg.xi = Some(xi);
    cfg.wave.snapshots = 0;
    cfg.newmark = NewmarkSpec::trapezoidal();
    let (diffs, order, effect) = self_convergence(&cfg);
    cfg.newmark = NewmarkSpec::default();
    let (damped_diffs, damped_order, _) = self_convergence(&cfg);
    let secs = start.elapsed().as_secs_f64();
    verdict(
        identical && order >= 1.0 && secs < 300.0,
        format!(
            "xi = 0 CSVs byte-identical: {identical} ({} files); xi = {xi:e}, Newmark (1/2, 1/4): successive differences {diffs:.3?} Pa, order {order:.3}, coupling shifts the probe by {effect:.3e} Pa [(0.7, 0.4): differences {damped_diffs:.3?} Pa, order {damped_order:.3}]; {secs:.1} s",
            a.len()
        ),
    )
}

/// Halves dt_wave three times from 8e-7 s. Returns the max differences of
/// the focal probe between successive levels, the fitted order, and the
/// largest deviation of the finest run from the uncoupled field.
fn self_convergence(cfg: &SimulationConfig) -> (Vec<f64>, f64, f64) {
    let dt0 = 8e-7;
    let runs: Vec<Vec<f64>> = (0..4)
        .map(|i| {
            let mut c = cfg.clone();
            c.wave.dt = Some(dt0 / f64::from(1 << i));
            let out = run_coupled(&c).unwrap();
            // probe samples at the coarse levels
            out.wave.probes[1].pressures.iter().step_by(1 << i).copied().collect()
        })
        .collect();
    let diffs: Vec<f64> = runs
        .windows(2)
        .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .collect();
    let steps: Vec<f64> = (0..3).map(|i| dt0 / f64::from(1 << i)).collect();
    let order = fit_order(&steps, &diffs).unwrap().order;
    let mut c = cfg.clone();
    c.xi = Some(0.0);
    c.wave.dt = Some(dt0 / 8.0);
    let plain = run_wave(&c).unwrap();
    let effect = plain.probes[1]
        .pressures
        .iter()
        .step_by(8)
        .zip(&runs[3])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    (diffs, order, effect)
}

/// Solution of the unit problem under forcing `f(x, t)`, kept at every step.
fn forced_history(damping: Damping, k: f64, f: &dyn Fn(f64, f64) -> f64) -> (Grid, f64, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let g = dirichlet_grid(101);
    let dt = g.h[0];
    let xs: Vec<f64> = (0..g.len()).map(|i| g.coords(i)[0]).collect();
    let eval = |t: f64| -> Vec<f64> { xs.iter().map(|&x| f(x, t)).collect() };
    let pr = unit_problem(g.clone(), k, damping, NewmarkSpec::default(), dt);
    let f0 = eval(0.0);
    let mut st = WaveStepper::new(pr, vec![0.0; g.len()], vec![0.0; g.len()], Some(&f0)).unwrap();
    let mut ps = vec![st.field().p.clone()];
    let mut fs = vec![f0];
    for i in 1..=200 {
        let fi = eval(i as f64 * dt);
        st.step(Some(&fi)).unwrap();
        ps.push(st.field().p.clone());
        fs.push(fi);
    }
    (g, dt, ps, fs)
}

fn c13_lipschitz() -> Verdict {
    let k = 0.5;
    let base = |x: f64, t: f64| 3.0 * (PI * x).sin() * (2.0 * PI * t).sin();
    let pairs: [(&str, fn(f64, f64) -> f64); 3] = [
        ("mode", |x, t| 0.3 * (2.0 * PI * x).sin() * t),
        ("bump", |x, t| 0.3 * (-50.0 * (x - 0.3f64).powi(2)).exp() * (PI * x).sin() * (3.0 * PI * t).cos()),
        ("ramp", |x, t| 0.3 * (3.0 * PI * x).sin() * (PI * t).sin() * t),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, damping, space) in [
        ("fractional C(H1)", Damping::Fractional { b: 0.05, tau: 1.0, alpha: 0.5 }, 1),
        ("strong C(H2)", Damping::Strong { b: 0.05 }, 2),
    ] {
        let (g, dt, p1, f1) = forced_history(damping, k, &base);
        let mut spreads = Vec::new();
        for (name, delta) in pairs {
            let ratios: Vec<f64> = [0.5, 1.0, 2.0]
                .iter()
                .map(|&s| {
                    let f = move |x: f64, t: f64| base(x, t) + s * delta(x, t);
                    let (_, _, p2, f2) = forced_history(damping, k, &f);
                    let sup = p1
                        .iter()
                        .zip(&p2)
                        .map(|(a, b)| {
                            let d: Vec<f64> = a.iter().zip(b).map(|(u, v)| u - v).collect();
                            if space == 1 { h1(&g, &d) } else { h2(&g, &d) }
                        })
                        .fold(0.0, f64::max);
                    let forcing = f1
                        .iter()
                        .zip(&f2)
                        .map(|(a, b)| {
                            let d: Vec<f64> = a.iter().zip(b).map(|(u, v)| u - v).collect();
                            dt * l2(&g, &d).powi(2)
                        })
                        .sum::<f64>()
                        .sqrt();
                    sup / forcing
                })
                .collect();
            let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let spread = max / min - 1.0;
            pass &= spread < 0.2;
            spreads.push(format!("{name} {spread:.2e}"));
        }
        parts.push(format!("{label} ratio variation: {}", spreads.join(", ")));
    }
    verdict(pass, parts.join("; "))
}
