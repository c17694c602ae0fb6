// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hyperctl", version, about = "Controllability checks, GRAPE pulses and echo simulations for electron-nuclear spin systems")]
pub struct Cli {
    /// Directory for written artifacts.
    #[arg(long, global = true, env = "HYPERCTL_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print levels, transitions and hyperfine geometry of a system.
    Info {
        config: PathBuf,
    },
    /// Decide universal controllability. Exit 0 if universal, 2 if not.
    Check(CheckArgs),
    /// Run GRAPE toward a target gate. Exit 0 iff the fidelity goal is met.
    Optimize(OptimizeArgs),
    /// Ramsey or Hahn-echo sweep over the free-evolution time.
    Simulate(SimulateArgs),
    /// Pass a pulse through the single-pole resonator model.
    Filter(FilterArgs),
    /// Two-level Bloch projections after every slice of a pulse.
    Bloch(BlochArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub config: PathBuf,
    /// Write the control graph in DOT format here.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Levels or transitions closer than this count as degenerate.
    #[arg(long, default_value = "1e-6 MHz")]
    pub degeneracy_tol: String,
    /// Edge cut-off relative to the largest |S_x| element.
    #[arg(long, default_value_t = 1e-8)]
    pub edge_threshold: f64,
}

#[derive(Debug, Args)]
pub struct ControlOverrides {
    /// Carrier frequency, e.g. `11.909 GHz`; defaults to the config's `[control]` value.
    #[arg(long)]
    pub carrier: Option<String>,
    /// Rabi frequency at amplitude 1, e.g. `7 MHz`.
    #[arg(long)]
    pub max_rabi: Option<String>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    pub config: PathBuf,
    /// Built-in target name.
    #[arg(long, conflicts_with = "target_file", required_unless_present = "target_file")]
    pub target: Option<String>,
    /// Target unitary in the labeled eigenbasis, one row per line as `re im` pairs.
    #[arg(long)]
    pub target_file: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub slices: usize,
    #[arg(long, default_value_t = 4.0)]
    pub slice_ns: f64,
    #[arg(long, default_value_t = 0.999)]
    pub goal: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Optimize the drive phase as well as the amplitude.
    #[arg(long)]
    pub phase: bool,
    /// Weight of the slice-to-slice amplitude smoothness penalty.
    #[arg(long, default_value_t = 0.0)]
    pub rise_penalty: f64,
    #[command(flatten)]
    pub control: ControlOverrides,
    /// Stem for output file names; defaults to the target name.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sequence {
    Ramsey,
    Hahn,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub kind: Sequence,
    pub config: PathBuf,
    /// Use exact gates instead of pulse files.
    #[arg(long, conflicts_with_all = ["prepare", "refocus", "unprepare"])]
    pub ideal: bool,
    /// Pulse file for the coherence-creating gate.
    #[arg(long, required_unless_present = "ideal")]
    pub prepare: Option<PathBuf>,
    /// Pulse file for the refocusing gate (Hahn only).
    #[arg(long)]
    pub refocus: Option<PathBuf>,
    /// Pulse file for the transfer back.
    #[arg(long, required_unless_present = "ideal")]
    pub unprepare: Option<PathBuf>,
    /// Carrier for `--ideal` runs; defaults to the config or the 1-4 transition.
    #[arg(long)]
    pub carrier: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub tau_start_ns: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tau_step_ns: f64,
    #[arg(long, default_value_t = 128)]
    pub tau_points: usize,
    /// Print the dominant frequency of the trace.
    #[arg(long)]
    pub report_frequency: bool,
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    pub pulse: PathBuf,
    /// Resonator quality factor.
    #[arg(long, default_value_t = 250.0)]
    pub q: f64,
    /// Resonator centre; defaults to the pulse carrier.
    #[arg(long)]
    pub center: Option<String>,
    /// Report fidelity before and after against this built-in target.
    #[arg(long, requires = "config")]
    pub target: Option<String>,
    /// System config used with `--target`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct BlochArgs {
    pub config: PathBuf,
    pub pulse: PathBuf,
    /// Level pairs as `j-k`, comma separated.
    #[arg(long, default_value = "1-2,3-4,1-4")]
    pub pairs: String,
    #[arg(long)]
    pub name: Option<String>,
}
