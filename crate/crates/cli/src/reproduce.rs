//! Figure presets. Each preset runs its experiment, writes CSV and SVG
//! artifacts, and records the qualitative claim it checks together with
//! whether the claim holds (`claim`, `claim_holds` in the manifest).
//!
//! Desk scale shortens runs and uses the desk wave setup (k = 1e-5 1/Pa,
//! dt = 0.5·h/c). `--paper-scale` uses longer runs, the configured k, a
//! finer grid and the wave step 3e-6 s.

use std::path::Path;

use bubblewave::analysis::analysis_window;
use bubblewave::coupling::{bubbles_from_traces, run_one_way};
use bubblewave::io::write_spectrum_csv;
use bubblewave::ode::simulate_from_config;
use bubblewave::{
    fft_spectrum, harmonic_metrics, run_wave, waveform_skewness, Attenuation, BubbleTrajectory, ModelKind,
    NonlinearityCoefficient, SimulationConfig, UniformSeries, Window,
};

use crate::commands::{
    at, micro, radius_series, spectrum_series, termination_check, write_metrics, write_trajectory, write_wave,
};
use crate::manifest::RunManifest;
use crate::svg::{emit_svg, Plot, Series};
use crate::{CliError, CliResult};

/// Nonlinearity coefficient of the desk-scale wave presets (1/Pa).
pub const DESK_K: f64 = 1e-5;
/// Sound diffusivity of the desk damping comparison (m²/s); with the
/// default 6e-9 both damping laws are negligible against c².
pub const DESK_B_COMPARISON: f64 = 1e-4;

pub fn run(figure: &str, paper_scale: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    m.result("scale", if paper_scale { "full" } else { "desk" });
    match figure {
        "fig-overview" => overview(paper_scale, base, dir, m),
        "fig-high-frequency" => high_frequency(paper_scale, base, dir, m),
        "fig-model-comparison" => model_comparison(paper_scale, base, dir, m),
        "fig-noncoated" => noncoated(paper_scale, base, dir, m),
        "fig-wave-focusing" => wave_focusing(paper_scale, base, dir, m, true),
        "fig-wave-probes" => wave_focusing(paper_scale, base, dir, m, false),
        "fig-oneway-coated" => oneway_coated(paper_scale, base, dir, m),
        "fig-oneway-noncoated" => oneway_noncoated(paper_scale, base, dir, m),
        "fig-west-comp" => west_comp(paper_scale, base, dir, m),
        other => Err(CliError::Usage(format!("unknown figure `{other}`"))),
    }
}

fn claim(m: &mut RunManifest, text: &str, holds: bool) {
    m.result("claim", text);
    m.result("claim_holds", holds);
}

fn bubble_cfg(base: &SimulationConfig, model: ModelKind, amplitude: f64, frequency: f64, t_final: f64) -> SimulationConfig {
    let mut cfg = base.clone();
    cfg.model = model;
    cfg.drive.amplitude = amplitude;
    cfg.drive.frequency = frequency;
    cfg.drive.trace = None;
    cfg.t_final = t_final;
    cfg
}

fn tag(amplitude: f64, frequency: f64) -> String {
    format!("A{}MPa_f{}MHz", amplitude / 1e6, frequency / 1e6)
}

/// Runs and writes one sinusoidally driven bubble.
fn sine_bubble(cfg: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<BubbleTrajectory> {
    let traj = simulate_from_config(cfg)?;
    let name = format!("{}_{}.csv", cfg.model, tag(cfg.drive.amplitude, cfg.drive.frequency));
    write_trajectory(&traj, &dir.join(name), m)?;
    Ok(traj)
}

fn plot(series: &[Series], title: &str, path: &Path, m: &mut RunManifest) -> CliResult<()> {
    emit_svg(series, &Plot::new(title, "t (μs)", "R/R0"), path)?;
    m.output(path);
    Ok(())
}

fn overview(paper: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let periods = if paper { 10.0 } else { 5.0 };
    let amps = [1e6, 5e6, 10e6];
    let freqs = [0.2e6, 0.5e6];
    let mut peaks = [[0.0; 3]; 2];
    for (fi, &f) in freqs.iter().enumerate() {
        let mut series = Vec::new();
        for (ai, &a) in amps.iter().enumerate() {
            let cfg = bubble_cfg(base, ModelKind::RpCoated, a, f, periods / f);
            let traj = sine_bubble(&cfg, dir, m)?;
            termination_check(&traj, &format!("coated bubble at {}", tag(a, f)))?;
            peaks[fi][ai] = traj.max_radius() / cfg.params.r0;
            m.result(format!("max_radius_ratio.{}", tag(a, f)), format!("{:.4}", peaks[fi][ai]));
            series.push(radius_series(format!("A = {} MPa", a / 1e6), &traj, cfg.params.r0));
        }
        plot(&series, &format!("coated bubble, f = {} MHz", f / 1e6), &dir.join(format!("overview_f{}MHz.svg", f / 1e6)), m)?;
    }
    let grows = peaks.iter().all(|row| row.windows(2).all(|w| w[1] > w[0]));
    let low_f = (0..3).all(|i| peaks[0][i] > peaks[1][i]);
    claim(
        m,
        "max R increases with A at fixed f and is larger at 0.2 MHz than at 0.5 MHz",
        grows && low_f,
    );
    Ok(())
}

/// Spectrum of the last 10 periods; writes CSV and returns the series.
fn analysed_spectrum(
    traj: &BubbleTrajectory,
    f: f64,
    name: &str,
    dir: &Path,
    m: &mut RunManifest,
) -> CliResult<(f64, Series)> {
    let series = analysis_window(traj, f, 10.0, 1 << 14)?;
    let spec = fft_spectrum(&series, Window::Hann)?;
    let h = harmonic_metrics(&spec, f, 1)?;
    let csv = dir.join(format!("spectrum_{name}.csv"));
    write_spectrum_csv(&csv, &spec).map_err(at(&csv))?;
    m.output(csv);
    write_metrics(&format!("{name}."), &h, m);
    Ok((h.thd, spectrum_series(name, &spec, f)))
}

fn high_frequency(paper: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let periods = if paper { 20.0 } else { 10.0 };
    let mut thd = Vec::new();
    for f in [0.5e6, 1e6, 5e6] {
        let cfg = bubble_cfg(base, ModelKind::RpCoated, 15e6, f, periods / f);
        let traj = sine_bubble(&cfg, dir, m)?;
        termination_check(&traj, &format!("coated bubble at {}", tag(15e6, f)))?;
        let name = tag(15e6, f);
        let (t, spec) = analysed_spectrum(&traj, f, &name, dir, m)?;
        thd.push(t);
        plot(
            &[radius_series(&name, &traj, cfg.params.r0)],
            &format!("coated bubble, A = 15 MPa, f = {} MHz", f / 1e6),
            &dir.join(format!("radius_{name}.svg")),
            m,
        )?;
        let svg = dir.join(format!("spectrum_{name}.svg"));
        emit_svg(&[spec], &Plot::new(format!("spectrum, f = {} MHz", f / 1e6), "f (MHz)", "magnitude").log_y(), &svg)?;
        m.output(svg);
    }
    claim(m, "THD at 0.5 MHz exceeds THD at 5 MHz (A = 15 MPa)", thd[0] > thd[2]);
    Ok(())
}

fn model_comparison(paper: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let t_final = if paper { 100e-6 } else { 50e-6 };
    let mut holds = true;
    for (model, title) in [(ModelKind::RpCoated, "coated"), (ModelKind::RpRadiation, "non-coated")] {
        let mut series = Vec::new();
        for f in [0.1e6, 0.15e6] {
            let cfg = bubble_cfg(base, model, 0.15e6, f, t_final);
            let traj = sine_bubble(&cfg, dir, m)?;
            let ratio = traj.max_radius() / cfg.params.r0;
            m.result(format!("max_radius_ratio.{model}.{}", tag(0.15e6, f)), format!("{ratio:.4}"));
            holds &= if model == ModelKind::RpCoated { ratio < 2.0 } else { ratio > 3.0 };
            series.push(radius_series(format!("f = {} MHz", f / 1e6), &traj, cfg.params.r0));
        }
        plot(&series, &format!("{title} bubble, A = 0.15 MPa"), &dir.join(format!("{model}.svg")), m)?;
    }
    claim(m, "coated max R/R0 < 2 and non-coated max R/R0 > 3 at f = 0.1, 0.15 MHz", holds);
    Ok(())
}

fn noncoated(paper: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let periods = if paper { 20.0 } else { 10.0 };
    let f = 0.15e6;
    let mut thd = Vec::new();
    let mut radii = Vec::new();
    let mut spectra = Vec::new();
    for a in [0.05e6, 0.01e6, 0.15e6] {
        let cfg = bubble_cfg(base, ModelKind::RpRadiation, a, f, periods / f);
        let traj = sine_bubble(&cfg, dir, m)?;
        termination_check(&traj, &format!("non-coated bubble at {}", tag(a, f)))?;
        let (t, spec) = analysed_spectrum(&traj, f, &tag(a, f), dir, m)?;
        thd.push(t);
        spectra.push(spec);
        radii.push(radius_series(format!("A = {} MPa", a / 1e6), &traj, cfg.params.r0));
    }
    plot(&radii, "non-coated bubble, f = 0.15 MHz", &dir.join("radius.svg"), m)?;
    let svg = dir.join("spectra.svg");
    emit_svg(&spectra, &Plot::new("non-coated spectra", "f (MHz)", "magnitude").log_y(), &svg)?;
    m.output(svg);
    claim(m, "THD at A = 0.15 MPa exceeds THD at A = 0.05 MPa", thd[2] > thd[0]);
    Ok(())
}

/// Wave setup of the presets.
fn wave_cfg(paper: bool, base: &SimulationConfig) -> CliResult<SimulationConfig> {
    let mut cfg = base.clone();
    if cfg.probes.len() < 2 {
        return Err(CliError::Usage("wave presets need two probes (near source, focal)".into()));
    }
    if paper {
        cfg.wave.nodes = [2 * cfg.wave.nodes[0] - 1, 2 * cfg.wave.nodes[1] - 1];
        cfg.wave.dt = Some(3e-6);
        cfg.wave.t_final = 4e-4;
    } else {
        cfg.params.k = NonlinearityCoefficient::Constant(DESK_K);
    }
    Ok(cfg)
}

fn wave_focusing(paper: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest, snapshots: bool) -> CliResult<()> {
    let mut cfg = wave_cfg(paper, base)?;
    cfg.wave.snapshots = if snapshots { if paper { 16 } else { 8 } } else { 0 };
    let out = run_wave(&cfg)?;
    write_wave(&out, dir, m)?;
    let (near, focal) = (&out.probes[0], &out.probes[1]);
    let gain = focal.peak_abs() / near.peak_abs();
    m.result("focal_gain", format!("{gain:.4}"));
    let series = UniformSeries::new(focal.t0, focal.dt, focal.pressures.clone())?;
    let s = waveform_skewness(&series, cfg.wave.f_p)?;
    m.result("focal_peak_ratio", format!("{:.4}", s.peak_ratio));
    m.result("focal_normalized_slope", format!("{:.4}", s.normalized_slope));
    claim(m, "focal probe peak exceeds the near-source probe peak", gain > 1.0);
    Ok(())
}

fn oneway_coated(paper: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let mut cfg = wave_cfg(paper, base)?;
    cfg.model = ModelKind::RpCoated;
    let out = run_one_way(&cfg)?;
    write_wave(&out.wave, dir, m)?;
    let mut series = Vec::new();
    for (tr, traj) in out.wave.probes.iter().zip(&out.bubbles) {
        write_trajectory(traj, &dir.join(format!("bubble_{}.csv", tr.node)), m)?;
        series.push(radius_series(format!("node {}", tr.node), traj, cfg.params.r0));
        termination_check(traj, &format!("coated bubble at node {}", tr.node))?;
    }
    plot(&series, "coated bubbles with wave input", &dir.join("bubbles.svg"), m)?;
    let (near, focal) = (out.bubbles[0].max_radius(), out.bubbles[1].max_radius());
    m.result("max_radius_ratio.near", format!("{:.6}", near / cfg.params.r0));
    m.result("max_radius_ratio.focal", format!("{:.6}", focal / cfg.params.r0));
    claim(m, "focal-probe bubble reaches a larger max radius than the near-source bubble", focal > near);
    Ok(())
}

fn oneway_noncoated(paper: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let mut cfg = wave_cfg(paper, base)?;
    cfg.model = ModelKind::RpRadiation;
    let out = run_one_way(&cfg)?;
    write_wave(&out.wave, dir, m)?;
    let mut coated_cfg = cfg.clone();
    coated_cfg.model = ModelKind::RpCoated;
    let coated = bubbles_from_traces(&coated_cfg, &out.wave.probes)?;
    let mut holds = true;
    let mut series = Vec::new();
    for ((tr, bare), shell) in out.wave.probes.iter().zip(&out.bubbles).zip(&coated) {
        write_trajectory(bare, &dir.join(format!("bubble_{}.csv", tr.node)), m)?;
        write_trajectory(shell, &dir.join(format!("bubble_{}_coated.csv", tr.node)), m)?;
        termination_check(bare, &format!("non-coated bubble at node {}", tr.node))?;
        holds &= bare.max_radius() > shell.max_radius() && bare.max_speed() > shell.max_speed();
        m.result(
            format!("node_{}.max_radius_ratio", tr.node),
            format!("{:.6} vs coated {:.6}", bare.max_radius() / cfg.params.r0, shell.max_radius() / cfg.params.r0),
        );
        m.result(
            format!("node_{}.max_speed", tr.node),
            format!("{:.6e} vs coated {:.6e}", bare.max_speed(), shell.max_speed()),
        );
        series.push(radius_series(format!("node {}", tr.node), bare, cfg.params.r0));
    }
    plot(&series, "non-coated bubbles with wave input", &dir.join("bubbles.svg"), m)?;
    claim(
        m,
        "non-coated bubbles reach larger radii and steeper dR/dt than coated ones at every probe",
        holds,
    );
    Ok(())
}

fn west_comp(paper: bool, base: &SimulationConfig, dir: &Path, m: &mut RunManifest) -> CliResult<()> {
    let mut cfg = wave_cfg(paper, base)?;
    if !paper {
        cfg.params.b = DESK_B_COMPARISON;
    }
    let mut stats = Vec::new();
    let mut series = Vec::new();
    for attenuation in [Attenuation::Strong, Attenuation::Fractional] {
        cfg.attenuation = attenuation;
        let out = run_wave(&cfg)?;
        m.note_gamma(out.monitors.gamma_min);
        let tr = &out.probes[1];
        let path = dir.join(format!("probe_focal_{attenuation}.csv"));
        bubblewave::io::write_probe_csv(&path, tr).map_err(at(&path))?;
        m.output(path);
        let s = waveform_skewness(&UniformSeries::new(tr.t0, tr.dt, tr.pressures.clone())?, cfg.wave.f_p)?;
        m.result(format!("{attenuation}.peak_abs"), format!("{:.6e}", tr.peak_abs()));
        m.result(format!("{attenuation}.normalized_slope"), format!("{:.6}", s.normalized_slope));
        stats.push((tr.peak_abs(), s.normalized_slope));
        series.push(Series::new(attenuation.to_string(), micro(&tr.times()), tr.pressures.clone()));
    }
    let svg = dir.join("west_comp.svg");
    emit_svg(&series, &Plot::new("focal probe: strong vs fractional", "t (μs)", "p (Pa)"), &svg)?;
    m.output(svg);
    claim(
        m,
        "fractional damping gives a lower peak and a higher normalized slope than strong damping",
        stats[1].0 < stats[0].0 && stats[1].1 > stats[0].1,
    );
    Ok(())
}
