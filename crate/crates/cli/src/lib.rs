//! Command-line front end: argument model and command execution.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussmeas::csv::{format_g9, CsvTable};
use gaussmeas::metrics::{printed_sequential_average_d2, printed_sequential_d2, MeterScheme};
use gaussmeas::montecarlo::{empirical_distances, TrialConfig};
use gaussmeas::schemes::SEQUENTIAL_OPTIMAL_DQ1;
use gaussmeas::sweep::{run_sweep, FigureId, SweepSpec};
use gaussmeas::{
    averaged_distances, canonical_interaction, critical_squeezing, distance_mean, distance_variance, make_state,
    optimal_widths, readout_distributions, AverageMethod, AverageSpec, Convention, CriticalSqueezing, EnsembleSpec,
    Interaction, MeterConfig, SchemeSpec, StateKind,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] gaussmeas::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gaussmeas",
    version,
    about = "Estimation of Gaussian states under joint quadrature measurements"
)]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments and symplectic eigenvalue of a squeezed coherent thermal state.
    State(StateArgs),
    /// Readout channels of a scheme.
    Scheme(SchemeCmd),
    /// Distance measures d1 and d2.
    Distance(DistanceCmd),
    /// Squeezing-averaged d1 and d2 (r uniform on [-1, 1]).
    Avg(AvgCmd),
    /// Reproduce a figure as CSV.
    Sweep(SweepCmd),
    /// Monte Carlo estimate of d1 and d2.
    Mc(McCmd),
    /// Symplectic matrix of a measurement interaction.
    Symplectic(SymplecticCmd),
    /// Critical squeezing where homodyne and heterodyne d2 coincide.
    Rc(RcCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    Homodyne,
    Heterodyne,
    Sequential,
    #[value(name = "arthurs_kelly")]
    ArthursKelly,
    #[value(name = "modified_ak")]
    ModifiedAk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InteractionName {
    Sequential,
    #[value(name = "sequential_p")]
    SequentialP,
    #[value(name = "arthurs_kelly")]
    ArthursKelly,
    #[value(name = "modified_ak")]
    ModifiedAk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Paper,
    Exact,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => Convention::PaperAsymptotic,
            ConventionArg::Exact => Convention::ExactSmallSample,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub nbar: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub q0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub p0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct MeterArgs {
    /// Position width of meter 1.
    #[arg(long, allow_hyphen_values = true)]
    pub dq1: Option<f64>,
    /// Position width of meter 2.
    #[arg(long, allow_hyphen_values = true)]
    pub dq2: Option<f64>,
    /// Meter-meter coupling of the modified Arthurs-Kelly scheme.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeCmd {
    #[arg(long)]
    pub scheme: SchemeName,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub meters: MeterArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DistanceCmd {
    #[arg(long)]
    pub scheme: SchemeName,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub meters: MeterArgs,
    #[arg(long = "N", default_value_t = 20)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "paper")]
    pub convention: ConventionArg,
    /// Use the printed sequential d2 expression.
    #[arg(long)]
    pub paper_verbatim: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AvgCmd {
    #[arg(long)]
    pub scheme: SchemeName,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub nbar: f64,
    #[command(flatten)]
    pub meters: MeterArgs,
    #[arg(long = "N", default_value_t = 20)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "paper")]
    pub convention: ConventionArg,
    #[arg(long)]
    pub paper_verbatim: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepCmd {
    #[arg(long, value_parser = parse_figure)]
    pub figure: FigureId,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Grid resolution.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum, default_value = "paper")]
    pub convention: ConventionArg,
    #[arg(long)]
    pub paper_verbatim: bool,
}

#[derive(Debug, Clone, Args)]
pub struct McCmd {
    #[arg(long)]
    pub scheme: SchemeName,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub meters: MeterArgs,
    #[arg(long = "N", default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SymplecticCmd {
    #[arg(long)]
    pub scheme: InteractionName,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RcCmd {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub nbar: f64,
}

fn parse_figure(s: &str) -> Result<FigureId, String> {
    s.parse().map_err(|e: gaussmeas::Error| e.to_string())
}

fn ensemble(state: &StateArgs, n: usize) -> Result<EnsembleSpec, CliError> {
    Ok(EnsembleSpec::squeezed(n, state.q0, state.p0, state.r, state.nbar)?)
}

/// Scheme with meter defaults: the optimal widths of each scheme unless given.
pub fn build_scheme(name: SchemeName, m: &MeterArgs) -> Result<SchemeSpec, CliError> {
    let no_meters = |what: &str| CliError::Usage(format!("--{what} does not apply to {}", scheme_label(name)));
    if name != SchemeName::ModifiedAk && m.kappa.is_some() {
        return Err(no_meters("kappa"));
    }
    match name {
        SchemeName::Homodyne | SchemeName::Heterodyne => {
            if m.dq1.is_some() {
                return Err(no_meters("dq1"));
            }
            if m.dq2.is_some() {
                return Err(no_meters("dq2"));
            }
            Ok(if name == SchemeName::Homodyne {
                SchemeSpec::Homodyne
            } else {
                SchemeSpec::Heterodyne
            })
        }
        SchemeName::Sequential => {
            if m.dq2.is_some() {
                return Err(no_meters("dq2"));
            }
            Ok(SchemeSpec::Sequential(MeterConfig::single(
                m.dq1.unwrap_or(SEQUENTIAL_OPTIMAL_DQ1),
            )?))
        }
        SchemeName::ArthursKelly => {
            let opt = optimal_widths(MeterScheme::ArthursKelly, None)?;
            Ok(SchemeSpec::ArthursKelly(MeterConfig::new(
                m.dq1.unwrap_or(opt.dq1()),
                m.dq2.unwrap_or(opt.dq2()),
            )?))
        }
        SchemeName::ModifiedAk => {
            let kappa = m.kappa.unwrap_or(0.0);
            let meters = match (m.dq1, m.dq2) {
                (Some(a), Some(b)) => MeterConfig::new(a, b)?,
                (a, b) => {
                    let opt = optimal_widths(MeterScheme::ModifiedAK, Some(kappa))?;
                    MeterConfig::new(a.unwrap_or(opt.dq1()), b.unwrap_or(opt.dq2()))?
                }
            };
            Ok(SchemeSpec::ModifiedAK { meters, kappa })
        }
    }
}

fn scheme_label(name: SchemeName) -> &'static str {
    match name {
        SchemeName::Homodyne => "homodyne",
        SchemeName::Heterodyne => "heterodyne",
        SchemeName::Sequential => "sequential",
        SchemeName::ArthursKelly => "arthurs_kelly",
        SchemeName::ModifiedAk => "modified_ak",
    }
}

fn table(header: &[&str], rows: Vec<Vec<f64>>) -> Result<String, CliError> {
    Ok(CsvTable::new(header.iter().map(|h| h.to_string()).collect(), rows)?.render())
}

fn verbatim_check(
    verbatim: bool,
    scheme: &SchemeSpec,
    convention: ConventionArg,
) -> Result<Option<MeterConfig>, CliError> {
    match (verbatim, scheme) {
        (false, _) => Ok(None),
        (true, SchemeSpec::Sequential(m)) if convention == ConventionArg::Paper => Ok(Some(*m)),
        (true, SchemeSpec::Sequential(_)) => Err(CliError::Usage(
            "--paper-verbatim uses the asymptotic convention only".into(),
        )),
        (true, _) => Err(CliError::Usage(
            "--paper-verbatim only changes the sequential scheme".into(),
        )),
    }
}

/// Execute a parsed command and return its output text.
pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::State(s) => {
            let state = make_state(StateKind::SqueezedCoherentThermal {
                q0: s.q0,
                p0: s.p0,
                r: s.r,
                nbar: s.nbar,
            })?;
            let c = state.cov();
            table(
                &["q_mean", "p_mean", "var_q", "var_p", "cov_qp", "symplectic_eigenvalue"],
                vec![vec![
                    state.mean().get(0),
                    state.mean().get(1),
                    c.get(0, 0),
                    c.get(1, 1),
                    c.get(0, 1),
                    c.symplectic_eigenvalues()[0],
                ]],
            )
        }
        Command::Scheme(cmd) => {
            let scheme = build_scheme(cmd.scheme, &cmd.meters)?;
            let s = &cmd.state;
            let state = make_state(StateKind::SqueezedCoherentThermal {
                q0: s.q0,
                p0: s.p0,
                r: s.r,
                nbar: s.nbar,
            })?;
            let rows = readout_distributions(&scheme, &state)?
                .channels
                .iter()
                .map(|c| {
                    vec![
                        c.quadrature.index() as f64,
                        c.group as f64,
                        c.law.mean,
                        c.law.variance,
                        c.added_noise,
                        if c.share == gaussmeas::schemes::EnsembleShare::Half {
                            0.5
                        } else {
                            1.0
                        },
                    ]
                })
                .collect();
            table(
                &[
                    "quadrature",
                    "group",
                    "mean",
                    "variance",
                    "added_noise",
                    "ensemble_fraction",
                ],
                rows,
            )
        }
        Command::Distance(cmd) => {
            let scheme = build_scheme(cmd.scheme, &cmd.meters)?;
            let verbatim = verbatim_check(cmd.paper_verbatim, &scheme, cmd.convention)?;
            let ens = ensemble(&cmd.state, cmd.n)?;
            let d1 = distance_mean(&scheme, &ens)?;
            let d2 = match verbatim {
                Some(m) => printed_sequential_d2(&ens, m)?,
                None => distance_variance(&scheme, &ens, cmd.convention.into())?,
            };
            table(&["d1", "d2"], vec![vec![d1, d2]])
        }
        Command::Avg(cmd) => {
            let scheme = build_scheme(cmd.scheme, &cmd.meters)?;
            let verbatim = verbatim_check(cmd.paper_verbatim, &scheme, cmd.convention)?;
            let avg = AverageSpec::new(cmd.nbar, cmd.n)?;
            let convention: Convention = cmd.convention.into();
            let method = match convention {
                Convention::PaperAsymptotic => AverageMethod::ClosedForm,
                Convention::ExactSmallSample => AverageMethod::Quadrature,
            };
            let (d1, mut d2) = averaged_distances(&scheme, &avg, method, convention)?;
            if let Some(m) = verbatim {
                d2 = printed_sequential_average_d2(m, avg.nbar, avg.n);
            }
            table(&["d1", "d2"], vec![vec![d1, d2]])
        }
        Command::Sweep(cmd) => {
            let spec = SweepSpec {
                figure: cmd.figure,
                n: cmd.n,
                nbar: cmd.nbar,
                r: cmd.r,
                points: cmd.points,
                paper_verbatim: cmd.paper_verbatim,
                convention: cmd.convention.into(),
            };
            if cmd.paper_verbatim && cmd.convention == ConventionArg::Exact {
                return Err(CliError::Usage(
                    "--paper-verbatim uses the asymptotic convention only".into(),
                ));
            }
            if matches!(cmd.points, Some(p) if p < 2) {
                return Err(CliError::Usage("--points must be at least 2".into()));
            }
            Ok(run_sweep(&spec)?.render())
        }
        Command::Mc(cmd) => {
            let scheme = build_scheme(cmd.scheme, &cmd.meters)?;
            let ens = ensemble(&cmd.state, cmd.n)?;
            if cmd.trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let rep = empirical_distances(&TrialConfig::new(scheme, ens.clone(), cmd.trials, cmd.seed)?)?;
            let d1 = distance_mean(&scheme, &ens)?;
            let d2 = distance_variance(&scheme, &ens, Convention::ExactSmallSample)?;
            table(
                &[
                    "d1_hat",
                    "se_d1",
                    "d1",
                    "d2_hat",
                    "se_d2",
                    "d2",
                    "trials",
                    "degenerate_trials",
                ],
                vec![vec![
                    rep.d1_hat,
                    rep.se_d1,
                    d1,
                    rep.d2_hat,
                    rep.se_d2,
                    d2,
                    rep.trials as f64,
                    rep.degenerate_trials as f64,
                ]],
            )
        }
        Command::Symplectic(cmd) => {
            if cmd.kappa.is_some() && cmd.scheme != InteractionName::ModifiedAk {
                return Err(CliError::Usage("--kappa only applies to modified_ak".into()));
            }
            let kind = match cmd.scheme {
                InteractionName::Sequential => Interaction::SequentialQ,
                InteractionName::SequentialP => Interaction::SequentialP,
                InteractionName::ArthursKelly => Interaction::ArthursKelly,
                InteractionName::ModifiedAk => Interaction::ModifiedArthursKelly {
                    kappa: cmd.kappa.unwrap_or(0.0),
                },
            };
            let (_, s) = canonical_interaction(kind)?;
            let names = ["q", "p", "Q1", "P1", "Q2", "P2"];
            let m = s.matrix();
            let rows = m.row_iter().map(|r| r.iter().copied().collect()).collect();
            table(&names[..m.ncols()], rows)
        }
        Command::Rc(cmd) => Ok(match critical_squeezing(cmd.nbar)? {
            CriticalSqueezing::Crossing(r) => format!("{}\n", format_g9(r)),
            CriticalSqueezing::NoCrossing => "none\n".to_owned(),
        }),
    }
}

/// Run a parsed invocation, writing to `--out` when given; returns the text for standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let text = execute(&cli.command)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
