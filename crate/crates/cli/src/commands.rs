//! Subcommand implementations.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ArgMatches;

use bubblewave::analysis::{analysis_window, fit_order, ConvergenceStudy};
use bubblewave::config::WaveSpec;
use bubblewave::coupling::{run_coupled, run_one_way};
use bubblewave::fractional::caputo_derivative;
use bubblewave::io::{write_probe_csv, write_snapshots, write_spectrum_csv};
use bubblewave::ode::{resample, rk4_step, simulate_from_config};
use bubblewave::wave::norms::l2;
use bubblewave::wave::{build_grid, Damping, WaveProblem, WaveStepper};
use bubblewave::{
    fft_spectrum, harmonic_metrics, run_wave, BubbleTrajectory, Error as CoreError, HarmonicMetrics, NewmarkSpec,
    SideCondition, SimulationConfig, Spectrum, Termination, UniformSeries, WaveOutput, Window,
};

use crate::args::resolve_config;
use crate::manifest::RunManifest;
use crate::svg::{emit_svg, Plot, Series};
use crate::{reproduce, CliError, CliResult};

/// Maps library I/O errors to an I/O failure on `path`.
pub(crate) fn at(path: &Path) -> impl Fn(CoreError) -> CliError + '_ {
    move |e| match e {
        CoreError::Io(io) => CliError::io(path, io),
        other => other.into(),
    }
}

/// Runs the selected subcommand and writes its manifest. The manifest is
/// written on numerical failures too, recording the failure as status.
pub fn run(m: &ArgMatches) -> CliResult<RunManifest> {
    let (name, sub) = m
        .subcommand()
        .ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let cfg = resolve_config(sub)?;
    let seed = sub.get_one::<u64>("seed").copied();
    let mut manifest = RunManifest::new(name, &cfg, seed);
    let start = Instant::now();
    let mut dir = cfg.out_dir.clone();
    if name == "reproduce" {
        if let Some(figure) = sub.get_one::<String>("figure") {
            dir = dir.join(figure);
        }
    }
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let outcome = match name {
        "bubble" => bubble(&cfg, &dir, &mut manifest),
        "wave" => run_wave(&cfg)
            .map_err(CliError::from)
            .and_then(|out| write_wave(&out, &dir, &mut manifest)),
        "oneway" => oneway(&cfg, &dir, &mut manifest),
        "coupled" => coupled(&cfg, &dir, &mut manifest),
        "spectrum" => spectrum(sub, &cfg, &dir, &mut manifest),
        "convergence" => {
            let study = sub.get_one::<String>("study").map_or("all", String::as_str);
            convergence(study, &dir, &mut manifest)
        }
        "reproduce" => {
            let figure = sub
                .get_one::<String>("figure")
                .ok_or_else(|| CliError::Usage("missing figure id".into()))?;
            manifest.subcommand = format!("reproduce {figure}");
            reproduce::run(figure, sub.get_flag("paper-scale"), &cfg, &dir, &mut manifest)
        }
        other => Err(CliError::Usage(format!("unknown subcommand `{other}`"))),
    };
    manifest.wall_clock = start.elapsed();
    if let Err(e) = &outcome {
        if matches!(e, CliError::Io { .. }) {
            return Err(outcome.unwrap_err());
        }
        manifest.status = e.to_string();
    }
    manifest.write(&dir)?;
    outcome.map(|_| manifest)
}

pub(crate) fn micro(t: &[f64]) -> Vec<f64> {
    t.iter().map(|v| v * 1e6).collect()
}

pub(crate) fn write_trajectory(traj: &BubbleTrajectory, path: &Path, m: &mut RunManifest) -> CliResult<()> {
    traj.write_csv(path).map_err(at(path))?;
    m.output(path);
    m.note_radius(traj.min_radius());
    Ok(())
}

pub(crate) fn radius_series(label: impl Into<String>, traj: &BubbleTrajectory, r0: f64) -> Series {
    Series::new(label, micro(&traj.times), traj.radii.iter().map(|r| r / r0).collect())
}

pub(crate) fn termination_check(traj: &BubbleTrajectory, what: &str) -> CliResult<()> {
    match traj.termination {
        Termination::Completed => Ok(()),
        other => Err(CliError::Numerical(format!(
            "{what} stopped early ({other}) at t = {:e} s",
            traj.times.last().copied().unwrap_or(0.0)
        ))),
    }
}

fn bubble(cfg: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let traj = simulate_from_config(cfg)?;
    write_trajectory(&traj, &dir.join("bubble.csv"), m)?;
    let svg = dir.join("bubble.svg");
    emit_svg(
        &[radius_series(cfg.model.name(), &traj, cfg.params.r0)],
        &Plot::new(format!("{} radius", cfg.model), "t (μs)", "R/R0"),
        &svg,
    )?;
    m.output(svg);
    m.result("termination", traj.termination);
    m.result("steps", traj.steps);
    m.result("max_radius_ratio", format!("{:.6}", traj.max_radius() / cfg.params.r0));
    m.result("dt_range", format!("{:e}..{:e}", traj.dt_range.0, traj.dt_range.1));
    termination_check(&traj, "bubble integration")
}

/// Probe CSVs, snapshots and a probe plot of a wave run.
pub(crate) fn write_wave(out: &WaveOutput, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let mut series = Vec::new();
    for (i, tr) in out.probes.iter().enumerate() {
        let path = dir.join(format!("probe_{i}.csv"));
        write_probe_csv(&path, tr).map_err(at(&path))?;
        m.output(path);
        let [x, y] = tr.location;
        let label = if out.grid.dim == 1 {
            format!("x = {x:.3} m")
        } else {
            format!("({x:.3}, {y:.3}) m")
        };
        m.result(format!("probe_{i}.peak_abs"), format!("{:.6e}", tr.peak_abs()));
        series.push(Series::new(
            label,
            tr.times().iter().map(|t| t * 1e3).collect(),
            tr.pressures.clone(),
        ));
    }
    if !out.snapshots.is_empty() {
        let snap_dir = dir.join("snapshots");
        let written = write_snapshots(&snap_dir, &out.grid, &out.snapshots).map_err(at(&snap_dir))?;
        m.outputs.extend(written);
    }
    if !series.is_empty() {
        let svg = dir.join("probes.svg");
        emit_svg(&series, &Plot::new("probe pressure", "t (ms)", "p (Pa)"), &svg)?;
        m.output(svg);
    }
    m.note_gamma(out.monitors.gamma_min);
    m.result("wave_steps", out.steps);
    m.result("max_corrector_iterations", out.monitors.max_corrector_iterations);
    Ok(())
}

fn oneway(cfg: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let out = run_one_way(cfg)?;
    write_wave(&out.wave, dir, m)?;
    let mut series = Vec::new();
    for (tr, traj) in out.wave.probes.iter().zip(&out.bubbles) {
        write_trajectory(traj, &dir.join(format!("bubble_{}.csv", tr.node)), m)?;
        m.result(
            format!("bubble_{}.max_radius_ratio", tr.node),
            format!("{:.6}", traj.max_radius() / cfg.params.r0),
        );
        series.push(radius_series(format!("node {}", tr.node), traj, cfg.params.r0));
    }
    let svg = dir.join("bubbles.svg");
    emit_svg(&series, &Plot::new(format!("{} radius at the probes", cfg.model), "t (μs)", "R/R0"), &svg)?;
    m.output(svg);
    for (tr, traj) in out.wave.probes.iter().zip(&out.bubbles) {
        termination_check(traj, &format!("bubble at node {}", tr.node))?;
    }
    Ok(())
}

fn coupled(cfg: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let out = run_coupled(cfg)?;
    write_wave(&out.wave, dir, m)?;
    for (&node, traj) in out.nodes.iter().zip(&out.bubbles) {
        write_trajectory(traj, &dir.join(format!("bubble_{node}.csv")), m)?;
    }
    // plot the coupled node closest to each probe
    let series: Vec<Series> = out
        .wave
        .probes
        .iter()
        .filter_map(|tr| {
            let p = tr.location;
            out.nodes
                .iter()
                .enumerate()
                .min_by(|a, b| {
                    let d = |n: usize| {
                        let q = out.wave.grid.coords(n);
                        (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)
                    };
                    d(*a.1).total_cmp(&d(*b.1))
                })
                .map(|(i, &node)| radius_series(format!("node {node}"), &out.bubbles[i], cfg.params.r0))
        })
        .collect();
    if !series.is_empty() {
        let svg = dir.join("bubbles.svg");
        emit_svg(&series, &Plot::new("coupled bubbles near the probes", "t (μs)", "R/R0"), &svg)?;
        m.output(svg);
    }
    m.result("coupled_nodes", out.nodes.len());
    m.result("micro_steps", out.micro_steps);
    m.result("xi", format!("{:e}", cfg.xi()));
    Ok(())
}

/// Reads column `col` of a CSV with a header row; the first column is time.
fn read_columns(path: &Path, col: usize) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let (mut t, mut v) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |k: usize| -> CliResult<f64> {
            fields
                .get(k)
                .ok_or_else(|| CliError::Usage(format!("{}:{}: no column {k}", path.display(), i + 1)))?
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{}:{}: not a number in column {k}", path.display(), i + 1)))
        };
        t.push(parse(0)?);
        v.push(parse(col)?);
    }
    Ok((t, v))
}

pub(crate) fn write_metrics(prefix: &str, h: &HarmonicMetrics, m: &mut RunManifest) {
    m.result(format!("{prefix}thd"), format!("{:.6e}", h.thd));
    m.result(format!("{prefix}fundamental"), format!("{:.6e}", h.fundamental));
    for (i, a) in h.harmonics.iter().enumerate() {
        m.result(format!("{prefix}harmonic_{}", i + 2), format!("{a:.6e}"));
    }
    m.result(format!("{prefix}subharmonic"), format!("{:.6e}", h.subharmonic));
}

/// Spectrum series in MHz up to six times the drive frequency.
pub(crate) fn spectrum_series(label: impl Into<String>, spec: &Spectrum, f_drive: f64) -> Series {
    let top = spec.bin_of(6.0 * f_drive).min(spec.magnitudes.len() - 1);
    Series::new(
        label,
        (0..=top).map(|k| spec.frequency(k) / 1e6).collect(),
        spec.magnitudes[..=top].to_vec(),
    )
}

fn spectrum(sub: &ArgMatches, cfg: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let f = cfg.drive.frequency;
    if f <= 0.0 || f.is_nan() {
        return Err(CliError::Usage("spectrum needs a drive frequency > 0 (--frequency)".into()));
    }
    let periods = *sub.get_one::<f64>("periods").unwrap_or(&10.0);
    let points = *sub.get_one::<usize>("points").unwrap_or(&16384);
    let window = match sub.get_one::<String>("window").map(String::as_str) {
        Some("none") => Window::None,
        _ => Window::Hann,
    };
    let series: UniformSeries = match sub.get_one::<PathBuf>("input") {
        Some(path) => {
            let col = *sub.get_one::<usize>("column").unwrap_or(&1);
            let (t, v) = read_columns(path, col)?;
            let t_end = *t.last().ok_or_else(|| CliError::Usage(format!("{}: no data rows", path.display())))?;
            let t_start = (t_end - periods / f).max(t[0]);
            resample(&t, &v, t_start, t_end, points)?
        }
        None => {
            let traj = simulate_from_config(cfg)?;
            termination_check(&traj, "bubble integration")?;
            write_trajectory(&traj, &dir.join("bubble.csv"), m)?;
            analysis_window(&traj, f, periods, points)?
        }
    };
    let spec = fft_spectrum(&series, window)?;
    let h = harmonic_metrics(&spec, f, 1)?;
    let csv = dir.join("spectrum.csv");
    write_spectrum_csv(&csv, &spec).map_err(at(&csv))?;
    m.output(csv);
    let svg = dir.join("spectrum.svg");
    emit_svg(
        &[spectrum_series("magnitude", &spec, f)],
        &Plot::new("spectrum", "f (MHz)", "magnitude").log_y(),
        &svg,
    )?;
    m.output(svg);
    write_metrics("", &h, m);
    Ok(())
}

/// Errors of RK4 on x'' = −x at t = 6.4 for the given steps.
pub fn rk4_study() -> CliResult<ConvergenceStudy> {
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
    Ok(fit_order(&steps, &errors)?)
}

/// Largest L² error of the standing wave cos(πt) sin(πx) over one period on
/// the unit interval, c = 1, dt = h.
pub fn newmark_study(newmark: NewmarkSpec) -> CliResult<ConvergenceStudy> {
    let nodes = [51usize, 101, 201];
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    for n in nodes {
        let grid = build_grid(&WaveSpec {
            dim: 1,
            extent: [1.0, 0.0],
            nodes: [n, 0],
            sides: [SideCondition::Dirichlet; 4],
            excite: None,
            focus: None,
            ..WaveSpec::default()
        })?;
        let dt = grid.h[0];
        let p0: Vec<f64> = (0..grid.len()).map(|i| (PI * grid.coords(i)[0]).sin()).collect();
        let problem = WaveProblem {
            k: vec![0.0; grid.len()],
            grid: grid.clone(),
            excitation: None,
            c: 1.0,
            damping: Damping::Strong { b: 0.0 },
            newmark,
            gamma_floor: 0.1,
            dt,
        };
        let mut st = WaveStepper::new(problem, p0.clone(), vec![0.0; grid.len()], None)?;
        let mut worst: f64 = 0.0;
        for _ in 0..(2.0 / dt).round() as u64 {
            st.step(None)?;
            let c = (PI * st.time()).cos();
            let err: Vec<f64> = p0.iter().zip(&st.field().p).map(|(e, p)| p - e * c).collect();
            worst = worst.max(l2(&grid, &err));
        }
        hs.push(dt);
        errors.push(worst);
    }
    Ok(fit_order(&hs, &errors)?)
}

/// L1 Caputo derivative of t² at t = 1 against 2/Γ(3 − α).
pub fn l1_study(alpha: f64) -> CliResult<ConvergenceStudy> {
    let exact = 2.0 / statrs::function::gamma::gamma(3.0 - alpha);
    let ns = [16usize, 32, 64, 128, 256];
    let mut steps = Vec::new();
    let mut errors = Vec::new();
    for n in ns {
        let dt = 1.0 / n as f64;
        let samples: Vec<f64> = (0..=n).map(|j| (j as f64 * dt).powi(2)).collect();
        steps.push(dt);
        errors.push((caputo_derivative(&samples, dt, alpha)? - exact).abs());
    }
    Ok(fit_order(&steps, &errors)?)
}

fn convergence(study: &str, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let mut studies: Vec<(String, ConvergenceStudy)> = Vec::new();
    if matches!(study, "rk4" | "all") {
        studies.push(("rk4".into(), rk4_study()?));
    }
    if matches!(study, "newmark" | "all") {
        studies.push(("newmark_trapezoidal".into(), newmark_study(NewmarkSpec::trapezoidal())?));
        studies.push(("newmark_0.7_0.4".into(), newmark_study(NewmarkSpec::default())?));
    }
    if matches!(study, "l1" | "all") {
        for alpha in [0.3, 0.5, 0.8] {
            studies.push((format!("l1_alpha_{alpha}"), l1_study(alpha)?));
        }
    }
    let csv = dir.join("convergence.csv");
    let mut text = String::from("study,step,error\n");
    for (name, s) in &studies {
        for (h, e) in s.steps.iter().zip(&s.errors) {
            text.push_str(&format!("{name},{h:.16e},{e:.16e}\n"));
        }
        m.result(format!("order.{name}"), format!("{:.4}", s.order));
        if !s.monotone {
            m.result(format!("warning.{name}"), "errors not monotone");
        }
    }
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    fs::write(&csv, text).map_err(|e| CliError::io(&csv, e))?;
    m.output(csv);
    let series: Vec<Series> = studies
        .iter()
        .map(|(name, s)| Series::new(name.clone(), s.steps.iter().map(|h| h.log10()).collect(), s.errors.clone()))
        .collect();
    let svg = dir.join("convergence.svg");
    emit_svg(&series, &Plot::new("observed convergence", "log10 step", "error").log_y(), &svg)?;
    m.output(svg);
    Ok(())
}
