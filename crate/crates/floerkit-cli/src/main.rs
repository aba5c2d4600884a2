use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use floerkit::cli::{
    self, AlgebraInput, CliError, FilteredCommand, FilteredOptions, PolytopeSource, RunConfig,
};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "floerkit", version, about = "Exact Novikov-field algebra from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Working precision Z as a rational, e.g. 4 or 9/2.
    #[arg(long, default_value = "4")]
    precision: String,
    /// Largest degree of an adjoined root field.
    #[arg(long, default_value_t = floerkit::potential::DEFAULT_FIELD_BUDGET)]
    field_budget: usize,
    /// Number of bulk candidates examined.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Half-width of the Tate truncation window.
    #[arg(long, default_value_t = 4)]
    window: usize,
    /// Bound on |Re c| and |Im c| for random bulk coefficients.
    #[arg(long, default_value_t = 3)]
    norm_bound: i64,
    /// Comma-separated primes for the mod-p table.
    #[arg(long, default_value = "5,7,11,13")]
    primes: String,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, CliError> {
        let primes = self
            .primes
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| CliError::parse(format!("not a prime: {t}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let cfg = RunConfig {
            precision: cli::parse_rat(&self.precision)?,
            field_budget: self.field_budget,
            trial_budget: self.trials,
            seed: self.seed,
            u_window: self.window,
            norm_bound: self.norm_bound,
            primes,
            output_path: self.output.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct PolytopeArg {
    /// Polytope file.
    #[arg(long)]
    polytope: Option<PathBuf>,
    /// Shipped preset, see `floerkit presets`.
    #[arg(long)]
    preset: Option<String>,
}

impl PolytopeArg {
    fn source(&self) -> PolytopeSource {
        match (&self.polytope, &self.preset) {
            (Some(p), _) => PolytopeSource::File(p.clone()),
            (None, Some(n)) => PolytopeSource::Preset(n.clone()),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Critical points of a bulk-deformed potential.
    Potential {
        #[command(subcommand)]
        action: PotentialAction,
    },
    /// Search for a convenient bulk deformation.
    Bulk {
        #[command(subcommand)]
        action: BulkAction,
    },
    /// Idempotent splitting of an algebra over a Novikov field.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// Barcodes, boundary depth, total bar length and spectral invariants.
    Filtered {
        #[command(subcommand)]
        action: FilteredAction,
    },
    /// The Z/p Tate construction on a complex.
    Tate {
        #[command(subcommand)]
        action: TateAction,
    },
    /// Search, critical points, splitting and the mod-p table in one report.
    Pipeline {
        #[command(flatten)]
        polytope: PolytopeArg,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in example suite.
    Selftest,
    /// List the shipped polytopes.
    Presets,
    /// Print the version record.
    Version,
}

#[derive(Subcommand)]
enum PotentialAction {
    Analyze {
        #[command(flatten)]
        polytope: PolytopeArg,
        /// Comma-separated Gaussian integers, one per facet.
        #[arg(long)]
        bulk: Option<String>,
        /// Interior point u for the fiber potential, e.g. 1/4,1/3.
        #[arg(long)]
        fiber: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum BulkAction {
    Search {
        #[command(flatten)]
        polytope: PolytopeArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum AlgebraAction {
    Split {
        /// Algebra file.
        #[arg(long, conflicts_with_all = ["from_potential", "from_preset"])]
        file: Option<PathBuf>,
        /// Use the inside critical points of the potential of this polytope file.
        #[arg(long, conflicts_with = "from_preset")]
        from_potential: Option<PathBuf>,
        /// Use the inside critical points of the potential of this preset.
        #[arg(long)]
        from_preset: Option<String>,
        /// Bulk coefficients for --from-potential or --from-preset.
        #[arg(long)]
        bulk: Option<String>,
        /// Splitting element as comma-separated series.
        #[arg(long)]
        element: Option<String>,
        /// Transfer the splitting to characteristic p.
        #[arg(long)]
        mod_p: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct ComplexArg {
    /// Complex file.
    #[arg(long)]
    complex: PathBuf,
}

#[derive(Subcommand)]
enum FilteredAction {
    Barcode {
        #[command(flatten)]
        complex: ComplexArg,
    },
    Depth {
        #[command(flatten)]
        complex: ComplexArg,
    },
    Tau {
        #[command(flatten)]
        complex: ComplexArg,
    },
    Rho {
        #[command(flatten)]
        complex: ComplexArg,
        /// Closed chain `label=series,...`; repeatable.  Without it every
        /// generator with zero differential is evaluated.
        #[arg(long)]
        chain: Vec<String>,
    },
    Bottleneck {
        #[command(flatten)]
        complex: ComplexArg,
        /// Second complex.
        #[arg(long)]
        other: PathBuf,
    },
}

#[derive(Subcommand)]
enum TateAction {
    Check {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[command(flatten)]
        common: Common,
    },
}

fn run_filtered(action: FilteredAction) -> Result<Value, CliError> {
    let (cmd, complex, opts) = match action {
        FilteredAction::Barcode { complex } => (FilteredCommand::Barcode, complex, FilteredOptions::default()),
        FilteredAction::Depth { complex } => (FilteredCommand::Depth, complex, FilteredOptions::default()),
        FilteredAction::Tau { complex } => (FilteredCommand::Tau, complex, FilteredOptions::default()),
        FilteredAction::Rho { complex, chain } => {
            (FilteredCommand::Rho, complex, FilteredOptions { chains: chain, other: None })
        }
        FilteredAction::Bottleneck { complex, other } => {
            (FilteredCommand::Bottleneck, complex, FilteredOptions { chains: Vec::new(), other: Some(other) })
        }
    };
    cli::filtered(cmd, &complex.complex, &opts)
}

/// Runs one command; returns the report, the config used for output, and
/// whether the command itself considers the run a success.
fn run(command: Command) -> (String, Result<(Value, RunConfig, bool), CliError>) {
    match command {
        Command::Potential { action: PotentialAction::Analyze { polytope, bulk, fiber, common } } => (
            "potential analyze".into(),
            (|| {
                let cfg = common.config()?;
                let p = cli::load_polytope(&polytope.source())?;
                Ok((cli::potential_analyze(&p, bulk.as_deref(), fiber.as_deref(), &cfg)?, cfg, true))
            })(),
        ),
        Command::Bulk { action: BulkAction::Search { polytope, common } } => (
            "bulk search".into(),
            (|| {
                let cfg = common.config()?;
                let p = cli::load_polytope(&polytope.source())?;
                Ok((cli::bulk_search(&p, &cfg)?, cfg, true))
            })(),
        ),
        Command::Algebra {
            action: AlgebraAction::Split { file, from_potential, from_preset, bulk, element, mod_p, common },
        } => (
            "algebra split".into(),
            (|| {
                let cfg = common.config()?;
                let input = match (file, from_potential, from_preset) {
                    (Some(f), _, _) => AlgebraInput::File(f),
                    (None, Some(p), _) => AlgebraInput::FromPotential { polytope: PolytopeSource::File(p), bulk },
                    (None, None, Some(n)) => AlgebraInput::FromPotential { polytope: PolytopeSource::Preset(n), bulk },
                    (None, None, None) => {
                        return Err(CliError::parse("give --file, --from-potential or --from-preset"))
                    }
                };
                Ok((cli::algebra_split(&input, element.as_deref(), mod_p, &cfg)?, cfg, true))
            })(),
        ),
        Command::Filtered { action } => {
            let name = match &action {
                FilteredAction::Barcode { .. } => "filtered barcode",
                FilteredAction::Depth { .. } => "filtered depth",
                FilteredAction::Tau { .. } => "filtered tau",
                FilteredAction::Rho { .. } => "filtered rho",
                FilteredAction::Bottleneck { .. } => "filtered bottleneck",
            };
            (name.into(), run_filtered(action).map(|v| (v, RunConfig::default(), true)))
        }
        Command::Tate { action: TateAction::Check { complex, p, common } } => (
            "tate check".into(),
            (|| {
                let cfg = common.config()?;
                Ok((cli::tate_check(&complex.complex, p, &cfg)?, cfg, true))
            })(),
        ),
        Command::Pipeline { polytope, common } => (
            "pipeline".into(),
            (|| {
                let cfg = common.config()?;
                let p = cli::load_polytope(&polytope.source())?;
                Ok((cli::pipeline(&p, &cfg)?, cfg, true))
            })(),
        ),
        Command::Selftest => {
            let (v, ok) = cli::selftest::selftest();
            ("selftest".into(), Ok((v, RunConfig::default(), ok)))
        }
        Command::Presets => ("presets".into(), Ok((cli::presets_report(), RunConfig::default(), true))),
        Command::Version => ("version".into(), Ok((cli::version_report(), RunConfig::default(), true))),
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (name, result) = run(args.command);
    match result.and_then(|(v, cfg, ok)| cli::emit(&v, &cfg).map(|text| (text, ok))) {
        Ok((text, ok)) => {
            if let Some(t) = text {
                print!("{t}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            print!("{}", cli::render(&e.to_json(&name)));
            eprintln!("floerkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
