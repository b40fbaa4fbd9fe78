//! Command-line front end: `opinion-cusp <command> [flags]`.
//!
//! Exit status is 0 on success, 2 for invalid flags, inputs or configs and
//! 1 for runtime failures such as an unwritable output path.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::abm::{jitter_envelope_study, run_simulation, JitterStudy, SimulationConfig};
use crate::attention::{envelope_of_p, simulate_attention, uniform_schedule};
use crate::cusp::{compute_scale_factor, fold_boundary, sample_surface, GridSpec};
use crate::error::{Error, Result};
use crate::io::{
    csv_string, format_sig, jitter_json, round_sig, snapshot_rows, AttentionRow, CriticalValues,
    CsvRecord, EnvelopeRow, SimulationSummary,
};
use crate::params::{PsychParams, SocialParams, SECONDS_PER_HOUR};
use crate::plot;
use crate::polarization::{log_space, log_space_int, polarization_number, regime_map};

pub const THREADS_ENV: &str = "OPINION_CUSP_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "opinion-cusp",
    version,
    about = "Attention envelopes, cusp steady states, polarization numbers and agent-based runs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct PsychArgs {
    #[arg(long, default_value_t = 0.2)]
    pub k: f64,
    #[arg(long, default_value_t = 2.0)]
    pub a_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a_crit: f64,
}

impl PsychArgs {
    fn params(&self) -> Result<PsychParams> {
        PsychParams::new(self.k, self.a_max, self.a_crit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write an SVG plot here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Attention envelope (A_UP, A_LP) for one (tau, N) pair or over a P sweep.
    Envelope {
        #[command(flatten)]
        psych: PsychArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        tau_hours: Option<f64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 0.01)]
        p_min: f64,
        #[arg(long, default_value_t = 100.0)]
        p_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Write the attention time series (t_seconds,attention) for the
        /// given (tau, N), starting from --a0.
        #[arg(long)]
        trajectory_out: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        cycles: usize,
        #[arg(long, default_value_t = 1.0)]
        a0: f64,
    },
    /// Critical polarization numbers P1 and P2.
    Critical {
        #[command(flatten)]
        psych: PsychArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Steady states of the opinion cubic on an (A, I) grid.
    Surface {
        #[command(flatten)]
        psych: PsychArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 41)]
        grid_a: usize,
        #[arg(long, default_value_t = 81)]
        grid_i: usize,
        /// Also write the fold boundary (A,I_sn_scaled,E_P) here.
        #[arg(long)]
        fold_out: Option<PathBuf>,
    },
    /// Regime classification over log-spaced tau and N grids.
    RegimeMap {
        #[command(flatten)]
        psych: PsychArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 0.1)]
        tau_min_hours: f64,
        #[arg(long, default_value_t = 1000.0)]
        tau_max_hours: f64,
        #[arg(long, default_value_t = 41)]
        tau_points: usize,
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 1000)]
        n_max: u32,
        #[arg(long, default_value_t = 41)]
        n_points: usize,
    },
    /// Agent-based simulation from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the JSON run summary here.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Neutral band half-width used for the occupancy summary.
        #[arg(long, default_value_t = 0.1)]
        band: f64,
    },
    /// Attention envelope deviations under jittered arrival times.
    JitterStudy {
        #[command(flatten)]
        psych: PsychArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 6.0)]
        tau_hours: f64,
        #[arg(long, default_value_t = 100)]
        n: u32,
        #[arg(long, default_value_t = 0.1)]
        w: f64,
        #[arg(long, default_value_t = 500)]
        cycles: usize,
        #[arg(long, default_value_t = 20)]
        transient: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    2
                }
            };
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = thread_cap()
        .and_then(|cap| match cap {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))
                .and_then(|pool| pool.install(|| dispatch(&cli.command, &mut buf))),
            None => dispatch(&cli.command, &mut buf),
        })
        .and_then(|()| stdout.write_all(&buf).map_err(Error::from));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

pub fn main() -> ! {
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let code = run(std::env::args_os(), &mut stdout, &mut stderr);
    let _ = stdout.flush();
    std::process::exit(code)
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::invalid(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// JSON with every non-integer number rounded to the CSV precision.
fn rounded_json<T: Serialize>(value: &T) -> Result<String> {
    fn walk(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Number(n) if n.is_f64() => {
                if let Some(x) = n.as_f64() {
                    if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                        *n = r;
                    }
                }
            }
            serde_json::Value::Array(items) => items.iter_mut().for_each(walk),
            serde_json::Value::Object(map) => map.values_mut().for_each(walk),
            _ => {}
        }
    }
    let mut v = serde_json::to_value(value)?;
    walk(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn table<T: CsvRecord + Serialize>(rows: &[T], format: Format) -> Result<String> {
    match format {
        Format::Csv => csv_string(rows),
        Format::Json => rounded_json(&rows),
    }
}

fn dispatch(command: &Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Envelope {
            psych,
            output,
            tau_hours,
            n,
            p_min,
            p_max,
            points,
            trajectory_out,
            cycles,
            a0,
        } => {
            let params = psych.params()?;
            let social = match (tau_hours, n) {
                (Some(t), Some(n)) => Some(SocialParams::from_hours(*t, *n)?),
                (None, None) => None,
                _ => return Err(Error::invalid("--tau-hours and --n must be given together")),
            };
            if trajectory_out.is_some() && social.is_none() {
                return Err(Error::invalid("--trajectory-out needs --tau-hours and --n"));
            }
            let ps = match &social {
                Some(s) => vec![polarization_number(s).value()],
                None => log_space(*p_min, *p_max, *points)?,
            };
            let rows = ps
                .iter()
                .map(|&p| {
                    envelope_of_p(&params, p).map(|e| EnvelopeRow {
                        p,
                        a_upper: e.a_upper,
                        a_lower: e.a_lower,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut trajectory = None;
            if let (Some(path), Some(s)) = (trajectory_out, &social) {
                let horizon = *cycles as f64 * s.tau_seconds;
                let series = simulate_attention(
                    *a0,
                    &params,
                    s,
                    &uniform_schedule(s.tau_seconds, horizon),
                    horizon,
                )?;
                let pts = series.points();
                let rows: Vec<AttentionRow> = pts
                    .iter()
                    .map(|&(t_seconds, attention)| AttentionRow {
                        t_seconds,
                        attention,
                    })
                    .collect();
                std::fs::write(path, csv_string(&rows)?)?;
                trajectory = Some(pts);
            }
            write_output(
                output.out.as_deref(),
                &table(&rows, output.format.unwrap_or(Format::Csv))?,
                stdout,
            )?;
            if let Some(path) = &output.plot {
                let p = match &trajectory {
                    Some(pts) => plot::attention_plot(pts),
                    None => plot::envelope_plot(&rows, &params),
                };
                plot::emit_plot(&p, path)?;
            }
        }
        Command::Critical { psych, output } => {
            let params = psych.params()?;
            let values = CriticalValues::compute(&params);
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => rounded_json(&values)?,
                Format::Csv => format!(
                    "p1,p2,k,a_max,a_crit\n{},{},{},{},{}\n",
                    values.p1.map_or_else(|| "unbounded".to_owned(), format_sig),
                    format_sig(values.p2),
                    format_sig(values.k),
                    format_sig(values.a_max),
                    format_sig(values.a_crit)
                ),
            };
            write_output(output.out.as_deref(), &text, stdout)?;
            if let Some(path) = &output.plot {
                let rows = log_space(0.01, 100.0, 200)?
                    .into_iter()
                    .map(|p| {
                        envelope_of_p(&params, p).map(|e| EnvelopeRow {
                            p,
                            a_upper: e.a_upper,
                            a_lower: e.a_lower,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                plot::emit_plot(&plot::critical_plot(&rows, &params), path)?;
            }
        }
        Command::Surface {
            psych,
            output,
            grid_a,
            grid_i,
            fold_out,
        } => {
            let params = psych.params()?;
            let surface = sample_surface(
                &params,
                GridSpec {
                    n_a: *grid_a,
                    n_i: *grid_i,
                },
            )?;
            let format = output.format.unwrap_or(Format::Csv);
            write_output(
                output.out.as_deref(),
                &table(&surface.rows(), format)?,
                stdout,
            )?;
            let fold = fold_boundary(&params, compute_scale_factor(&params), *grid_a);
            if let Some(path) = fold_out {
                std::fs::write(path, table(&fold, format)?)?;
            }
            if let Some(path) = &output.plot {
                plot::emit_plot(&plot::extent_plot(&fold), path)?;
            }
        }
        Command::RegimeMap {
            psych,
            output,
            tau_min_hours,
            tau_max_hours,
            tau_points,
            n_min,
            n_max,
            n_points,
        } => {
            let params = psych.params()?;
            if *n_min < 2 || n_max < n_min {
                return Err(Error::invalid(format!(
                    "N range must satisfy 2 <= n-min <= n-max, got {n_min}..{n_max}"
                )));
            }
            let taus = log_space(*tau_min_hours, *tau_max_hours, *tau_points)?;
            let ns = log_space_int(*n_min, *n_max, *n_points)?;
            let cells = regime_map(&taus, &ns, &params)?;
            write_output(
                output.out.as_deref(),
                &table(&cells, output.format.unwrap_or(Format::Csv))?,
                stdout,
            )?;
            if let Some(path) = &output.plot {
                plot::emit_plot(&plot::regime_map_plot(&cells, &params), path)?;
            }
        }
        Command::Simulate {
            config,
            output,
            seed,
            summary,
            band,
        } => {
            let mut cfg = SimulationConfig::from_json_file(config)?;
            if let Some(seed) = seed {
                cfg.seed = *seed;
            }
            if !(*band > 0.0 && *band < 1.0) {
                return Err(Error::invalid(format!(
                    "--band must lie in (0, 1), got {band}"
                )));
            }
            let out = run_simulation(&cfg)?;
            let summary_value = SimulationSummary::new(&out, &cfg, *band)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => csv_string(&snapshot_rows(&out.snapshots))?,
                Format::Json => rounded_json(&summary_value)?,
            };
            write_output(output.out.as_deref(), &text, stdout)?;
            if let Some(path) = summary {
                std::fs::write(path, rounded_json(&summary_value)?)?;
            }
            if let Some(path) = &output.plot {
                plot::emit_plot(&plot::snapshot_plot(out.final_snapshot()), path)?;
            }
        }
        Command::JitterStudy {
            psych,
            output,
            tau_hours,
            n,
            w,
            cycles,
            transient,
            seed,
        } => {
            if output.plot.is_some() {
                return Err(Error::invalid("jitter-study has no plot output"));
            }
            let study = JitterStudy {
                params: psych.params()?,
                tau_seconds: tau_hours * SECONDS_PER_HOUR,
                n_agents: *n,
                w: *w,
                cycles: *cycles,
                transient_cycles: *transient,
                initial_attention: 1.0,
                seed: *seed,
            };
            let report = jitter_envelope_study(&study)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&jitter_json(&report))?;
                    s.push('\n');
                    s
                }
                Format::Csv => format!(
                    "w,max_upper_deviation,max_lower_deviation,rms_upper_deviation,rms_lower_deviation\n{},{},{},{},{}\n",
                    format_sig(*w),
                    format_sig(report.max_upper_deviation),
                    format_sig(report.max_lower_deviation),
                    format_sig(report.rms_upper_deviation),
                    format_sig(report.rms_lower_deviation)
                ),
            };
            write_output(output.out.as_deref(), &text, stdout)?;
        }
    }
    Ok(())
}
