// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use anyhow::{bail, Context, Result};
use hyperctl_core::controllability::{is_universal, Tolerances};
use hyperctl_core::experiment::{
    dominant_frequency, tau_grid, Element, Experiment, ExperimentTrace, HahnGates, RamseyGates, READOUT_PAIR,
};
use hyperctl_core::io::{parse_config, parse_frequency_mhz, parse_matrix, parse_pulse, write_pulse, SystemConfig};
use hyperctl_core::linalg::unitarity_error;
use hyperctl_core::pulse::{
    gate_fidelity, grape_multistart, propagate, q_filter, targets, GrapeConfig, PulseSequence,
};
use hyperctl_core::spin_model::{
    build_secular_hamiltonian, eigensystem, quantization_axes, transition_table, EigenStructure, Manifold,
};
use hyperctl_core::{CMatrix, Error as CoreError, SpinSystem};

use crate::args::{BlochArgs, CheckArgs, Cli, Command, FilterArgs, OptimizeArgs, Sequence, SimulateArgs};
use crate::output::{read_input, Run};

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Valid input, negative answer (not universal, goal missed).
    Negative,
}

pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Info { config } => info(config),
        Command::Check(args) => check(args),
        Command::Optimize(args) => optimize(cli, args),
        Command::Simulate(args) => simulate(cli, args),
        Command::Filter(args) => filter(cli, args),
        Command::Bloch(args) => bloch(cli, args),
    }
}

fn frequency(flag: &str, value: &str) -> Result<f64> {
    parse_frequency_mhz(value).map_err(|e| anyhow::anyhow!("--{flag}: {e}"))
}

fn load(path: &Path, text: &str) -> Result<SystemConfig> {
    parse_config(text).with_context(|| format!("in {}", path.display()))
}

fn eigs_of(sys: &SpinSystem) -> EigenStructure {
    eigensystem(&build_secular_hamiltonian(sys), sys)
}

fn stem_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

fn info(path: &Path) -> Result<Status> {
    let cfg = load(path, &read_input(path)?)?;
    let sys = &cfg.system;
    let eigs = eigs_of(sys);
    println!(
        "system: {} ({} {}, {} levels)",
        cfg.name.as_deref().unwrap_or("unnamed"),
        sys.n_nuclei(),
        if sys.n_nuclei() == 1 { "nucleus" } else { "nuclei" },
        sys.dim()
    );
    println!("electron Zeeman: {} MHz", sys.electron_freq_mhz());
    for (k, n) in sys.nuclei().iter().enumerate() {
        let axes = quantization_axes(sys, k)?;
        println!(
            "nucleus {}: nu_n = {} MHz, A_zx = {} MHz, A_zy = {} MHz, A_zz = {} MHz, axis tilt {:.2} deg",
            k + 1,
            n.zeeman_freq_mhz,
            n.a_zx_mhz,
            n.a_zy_mhz,
            n.a_zz_mhz,
            axes.angle_rad.to_degrees()
        );
    }
    println!("levels:");
    for (i, (e, m)) in eigs.energies_mhz.iter().zip(&eigs.manifold).enumerate() {
        let ms = if *m == Manifold::Up { "+1/2" } else { "-1/2" };
        println!("  {:>2}  m_s = {ms}  E = {e:.4} MHz", i + 1);
    }
    if eigs.ambiguous {
        println!("  (degenerate levels: labeling is not unique)");
    }
    println!("transitions:");
    for t in transition_table(&eigs) {
        println!("  {:>2}-{:<2} {:>12.4} MHz  |S_x| = {:.4}", t.j, t.k, t.freq_mhz, t.sx_element);
    }
    if let Some(c) = cfg.control.carrier_freq_mhz {
        println!("carrier: {c} MHz");
    }
    if let Some(r) = cfg.control.max_rabi_mhz {
        println!("max Rabi: {r} MHz");
    }
    Ok(Status::Success)
}

fn check(args: &CheckArgs) -> Result<Status> {
    let cfg = load(&args.config, &read_input(&args.config)?)?;
    let tol = Tolerances { degeneracy_mhz: frequency("degeneracy-tol", &args.degeneracy_tol)?, edge_threshold: args.edge_threshold };
    let v = is_universal(&cfg.system, tol);
    let yes = |b: bool| if b { "yes" } else { "no" };
    println!("universal: {}", yes(v.universal));
    println!("connected: {} ({} component(s), {} edges)", yes(v.connected), v.graph.components().len(), v.graph.edges.len());
    println!("graph regular: {}", yes(v.graph_regular));
    print!("strongly regular: {}", yes(v.strongly_regular));
    if v.uncoupled_degeneracies > 0 {
        print!(" ({} coincident transition pair(s) outside the control graph)", v.uncoupled_degeneracies);
    }
    println!();
    for violation in &v.violations {
        println!("violation: {violation}");
    }
    for reason in v.reasons() {
        println!("reason: {reason}");
    }
    if let Some(dot) = &args.dot {
        crate::output::write_atomic(dot, v.graph.to_dot().as_bytes())?;
    }
    Ok(if v.universal { Status::Success } else { Status::Negative })
}

fn resolve_carrier(cfg: &SystemConfig, flag: Option<&str>, eigs: &EigenStructure) -> Result<f64> {
    if let Some(v) = flag {
        return frequency("carrier", v);
    }
    if let Some(c) = cfg.control.carrier_freq_mhz {
        return Ok(c);
    }
    let c = eigs.transition_mhz(READOUT_PAIR.0, READOUT_PAIR.1);
    log::info!("no carrier given; using the 1-4 transition at {c:.4} MHz");
    Ok(c)
}

fn load_target(run: &mut Run, args: &OptimizeArgs, eigs: &EigenStructure) -> Result<CMatrix> {
    if let Some(name) = &args.target {
        return Ok(targets::named_target(name, eigs)?);
    }
    let path = args.target_file.as_ref().expect("clap requires one of --target/--target-file");
    let m = parse_matrix(&run.input(path, false)?).with_context(|| format!("in {}", path.display()))?;
    if m.nrows() != eigs.dim() {
        bail!("target in {} is {}x{}, system has {} levels", path.display(), m.nrows(), m.nrows(), eigs.dim());
    }
    let err = unitarity_error(&m);
    if err > 1e-8 {
        bail!("target in {} is not unitary (|U^dag U - 1| = {err:.2e})", path.display());
    }
    Ok(eigs.from_eigenbasis(&m))
}

fn optimize(cli: &Cli, args: &OptimizeArgs) -> Result<Status> {
    let stem = match (&args.name, &args.target, &args.target_file) {
        (Some(n), _, _) => n.clone(),
        (None, Some(t), _) => t.clone(),
        (None, None, Some(p)) => stem_of(p),
        (None, None, None) => unreachable!("clap requires a target"),
    };
    let mut run = Run::new("optimize", &cli.out_dir, &stem);
    let cfg = load(&args.config, &run.input(&args.config, true)?)?;
    let sys = &cfg.system;
    let eigs = eigs_of(sys);
    let target = load_target(&mut run, args, &eigs)?;
    let carrier = resolve_carrier(&cfg, args.control.carrier.as_deref(), &eigs)?;
    let max_rabi = match (&args.control.max_rabi, cfg.control.max_rabi_mhz) {
        (Some(v), _) => frequency("max-rabi", v)?,
        (None, Some(r)) => r,
        (None, None) => bail!("no Rabi frequency: set `max_rabi` under [control] or pass --max-rabi"),
    };
    if args.slices == 0 || !(args.slice_ns > 0.0) {
        bail!("need at least one slice of positive length");
    }

    let mut grape = GrapeConfig::new(target);
    grape.max_iterations = args.max_iter;
    grape.fidelity_goal = args.goal;
    grape.seed = args.seed;
    grape.restarts = args.restarts;
    grape.rise_penalty = args.rise_penalty;
    let mut template = PulseSequence::uniform(carrier, max_rabi, args.slice_ns * 1e-3, &vec![0.0; args.slices])?;
    template.set_phase_enabled(args.phase);
    let report = grape_multistart(sys, &grape, &template)?;

    run.seed(args.seed);
    run.output(".pulse", write_pulse(&report.final_pulse));
    let mut csv = String::from("iteration,fidelity\n");
    for (i, f) in report.fidelity_trace.iter().enumerate() {
        csv.push_str(&format!("{i},{f:.12e}\n"));
    }
    run.output("_fidelity.csv", csv);
    let written = run.finish()?;

    println!(
        "fidelity {:.6} (goal {}), restart {}, {} iterations, {:.0} ns",
        report.fidelity,
        args.goal,
        report.restart,
        report.iterations_used,
        report.final_pulse.total_duration_us() * 1e3
    );
    println!("pulse: {}", written[0].display());
    Ok(if report.goal_reached { Status::Success } else { Status::Negative })
}

fn trace_csv(trace: &ExperimentTrace) -> String {
    let mut out = String::from("tau_ns,signal\n");
    for (t, s) in trace.tau_us.iter().zip(&trace.signal) {
        out.push_str(&format!("{:.3},{:.12e}\n", t * 1e3, s));
    }
    out
}

fn gnuplot_script(csv_name: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set title '{title}'\n\
         set xlabel 'tau (ns)'\n\
         set ylabel 'echo signal'\n\
         plot '{csv_name}' using 1:2 with linespoints\n"
    )
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<Status> {
    let kind = match args.kind {
        Sequence::Ramsey => "ramsey",
        Sequence::Hahn => "hahn",
    };
    let stem = args.name.clone().unwrap_or_else(|| kind.to_owned());
    let mut run = Run::new(&format!("simulate {kind}"), &cli.out_dir, &stem);
    let cfg = load(&args.config, &run.input(&args.config, true)?)?;
    if args.kind == Sequence::Ramsey && args.refocus.is_some() {
        bail!("--refocus only applies to hahn");
    }
    if !(args.tau_step_ns > 0.0) || args.tau_points == 0 {
        bail!("tau grid needs a positive step and at least one point");
    }
    let taus = tau_grid(args.tau_start_ns * 1e-3, args.tau_step_ns * 1e-3, args.tau_points);

    let trace = if args.ideal {
        let carrier = resolve_carrier(&cfg, args.carrier.as_deref(), &eigs_of(&cfg.system))?;
        let exp = Experiment::new(cfg.system, carrier);
        match args.kind {
            Sequence::Ramsey => exp.ramsey(&RamseyGates::ideal(), &taus)?,
            Sequence::Hahn => exp.hahn(&HahnGates::ideal(), &taus)?,
        }
    } else {
        let mut pulse = |p: &Path| -> Result<PulseSequence> {
            parse_pulse(&run.input(p, false)?).with_context(|| format!("in {}", p.display()))
        };
        let prepare = pulse(args.prepare.as_ref().expect("required without --ideal"))?;
        let unprepare = pulse(args.unprepare.as_ref().expect("required without --ideal"))?;
        let exp = Experiment::new(cfg.system, prepare.carrier_freq_mhz());
        match args.kind {
            Sequence::Ramsey => {
                exp.ramsey(&RamseyGates { prepare: Element::Pulse(prepare), unprepare: Element::Pulse(unprepare) }, &taus)?
            }
            Sequence::Hahn => {
                let path = args.refocus.as_ref().context("hahn needs --refocus unless --ideal is given")?;
                let refocus = pulse(path)?;
                let gates = HahnGates {
                    prepare: Element::Pulse(prepare),
                    refocus: Element::Pulse(refocus),
                    unprepare: Element::Pulse(unprepare),
                };
                exp.hahn(&gates, &taus)?
            }
        }
    };

    let csv_path = run.output(".csv", trace_csv(&trace));
    let csv_name = csv_path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    run.output(".gp", gnuplot_script(&csv_name, &trace.meta.description));
    run.finish()?;

    println!("{}: {} points, signal(tau_0) = {:.6}, peak-to-peak {:.3e}", trace.meta.description, trace.signal.len(), trace.signal[0], trace.peak_to_peak());
    if args.report_frequency {
        match dominant_frequency(&trace) {
            Ok(f) => println!("dominant frequency: {f:.4} MHz"),
            Err(CoreError::NoSpectralPeak) => println!("dominant frequency: none (no non-DC peak)"),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Status::Success)
}

fn filter(cli: &Cli, args: &FilterArgs) -> Result<Status> {
    let default_stem = format!("{}_q{}", stem_of(&args.pulse), args.q);
    let stem = args.name.clone().unwrap_or(default_stem);
    let mut run = Run::new("filter", &cli.out_dir, &stem);
    let pulse = parse_pulse(&run.input(&args.pulse, false)?).with_context(|| format!("in {}", args.pulse.display()))?;
    let center = match &args.center {
        Some(v) => frequency("center", v)?,
        None => pulse.carrier_freq_mhz(),
    };
    let out = q_filter(&pulse, args.q, center)?;
    println!("resonator half-width: {:.6e} MHz", out.half_width_mhz);
    if !pulse.is_empty() {
        let resolution = 1.0 / pulse.total_duration_us();
        if out.half_width_mhz < resolution {
            log::warn!(
                "resonator half-width {:.3e} MHz is below the pulse's frequency resolution {:.3} MHz; \
                 only the mean amplitude survives",
                out.half_width_mhz,
                resolution
            );
        }
    }
    println!("peak |amplitude| after filtering: {:.6}{}", out.peak_amplitude, if out.renormalized { " (renormalized to 1)" } else { "" });

    if let (Some(name), Some(config)) = (&args.target, &args.config) {
        let cfg = load(config, &run.input(config, true)?)?;
        let target = targets::named_target(name, &eigs_of(&cfg.system))?;
        let before = gate_fidelity(&propagate(&pulse, &cfg.system)?, &target);
        let after = gate_fidelity(&propagate(&out.pulse, &cfg.system)?, &target);
        println!("fidelity before: {before:.6}");
        println!("fidelity after:  {after:.6}");
    }
    let written = run.output(".pulse", write_pulse(&out.pulse));
    run.finish()?;
    println!("pulse: {}", written.display());
    Ok(Status::Success)
}

fn parse_pairs(spec: &str, dim: usize) -> Result<Vec<(usize, usize)>> {
    spec.split(',')
        .map(|p| {
            let (j, k) = p.trim().split_once('-').with_context(|| format!("pair `{p}` is not of the form j-k"))?;
            let (j, k): (usize, usize) = (j.trim().parse()?, k.trim().parse()?);
            if j == 0 || k == 0 || j > dim || k > dim || j == k {
                bail!("pair `{p}` is out of range for {dim} levels");
            }
            Ok((j, k))
        })
        .collect()
}

fn bloch(cli: &Cli, args: &BlochArgs) -> Result<Status> {
    let stem = args.name.clone().unwrap_or_else(|| format!("{}_bloch", stem_of(&args.pulse)));
    let mut run = Run::new("bloch", &cli.out_dir, &stem);
    let cfg = load(&args.config, &run.input(&args.config, true)?)?;
    let pulse = parse_pulse(&run.input(&args.pulse, false)?).with_context(|| format!("in {}", args.pulse.display()))?;
    let pairs = parse_pairs(&args.pairs, cfg.system.dim())?;
    let exp = Experiment::new(cfg.system, pulse.carrier_freq_mhz());
    let rows = exp.bloch_trajectory(&exp.thermal_state(), &pulse, &pairs)?;

    let mut csv = String::from("t_ns");
    for (j, k) in &pairs {
        csv.push_str(&format!(",x_{j}_{k},y_{j}_{k},z_{j}_{k}"));
    }
    csv.push('\n');
    for (t, vs) in &rows {
        csv.push_str(&format!("{:.3}", t * 1e3));
        for v in vs {
            csv.push_str(&format!(",{:.9e},{:.9e},{:.9e}", v[0], v[1], v[2]));
        }
        csv.push('\n');
    }
    let path = run.output(".csv", csv);
    run.finish()?;
    println!("{} steps, {} pair(s): {}", rows.len(), pairs.len(), path.display());
    Ok(Status::Success)
}
