//! Command-line front end: a line-oriented DSL, verification commands and
//! their reports.

pub mod build;
pub mod commands;
pub mod dsl;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{LocalizeArgs, PathArgs};
pub use dsl::{parse_spec, parse_str, DslError, SpecDocument};
pub use report::{Finding, InputError, Report, Status};

pub const DEFAULT_TRUNCATION: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "pathcat", version, about = "Verify 2-path-categories, Segal points, enrichment and localization")]
pub struct Cli {
    /// Truncation N: the longest chain considered.
    #[arg(long, global = true, env = "PATHCAT_MAX_LEN", default_value_t = DEFAULT_TRUNCATION)]
    pub max_len: usize,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a spec file and build every block.
    Validate { spec: PathBuf },
    /// Checks on the path 2-category of a category.
    Path {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        category: Option<String>,
        /// delta-iso | strict | embed | opposite | coproduct:D | fiber-product:D | free-lift
        #[arg(long)]
        check: String,
        #[arg(long)]
        transport: Option<String>,
    },
    /// Report colaxity cells outside W.
    SegalCheck {
        #[arg(long)]
        pathobject: PathBuf,
        #[arg(long)]
        name: Option<String>,
        /// iso | all | a base block name
        #[arg(long)]
        base: Option<String>,
    },
    /// Enriched category to path object and back.
    Roundtrip {
        #[arg(long)]
        enriched: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Read a point over the terminal shape as a homotopy monoid.
    Monoid {
        #[arg(long)]
        pathobject: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Simplicial sets against colax functors on the nerve of a coarse category.
    Simplicial {
        #[arg(long, default_value_t = 2)]
        points: usize,
    },
    /// Distributor and rigid bridge round trips.
    Bridge {
        #[arg(long)]
        distributor: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Validate a bimodule and its identity morphism.
    Bimodule {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Localize a category at an arrow class, or a base at its W.
    Localize {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        category: Option<String>,
        /// Arrow names, or `all`.
        #[arg(long, num_args = 1..)]
        arrows: Vec<String>,
        #[arg(long)]
        product: Option<String>,
        #[arg(long, num_args = 1..)]
        product_arrows: Vec<String>,
        #[arg(long)]
        base: Option<String>,
    },
    /// Reduce a Segal point to a strict one over the localized base.
    Reduce {
        #[arg(long)]
        pathobject: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Every derived construction a spec file supports.
    Report { spec: PathBuf },
}

/// Library operations exercised by each command.
pub const DISPATCH: &[(&str, &[&str])] = &[
    (
        "validate",
        &[
            "parse_spec",
            "validate_category",
            "coarse",
            "interval",
            "validate_functor",
            "suspend_monoidal",
            "validate_bicategory",
            "validate_base",
            "canonical_bases",
            "build_path_category",
            "check_path_object",
            "validate_colax",
            "metric_enrichment",
            "cocycle_check",
            "bridge_of_distributor",
            "thin_bridge",
            "validate_bimodule",
        ],
    ),
    (
        "path",
        &[
            "build_path_category",
            "delta_identification",
            "enumerate_hom",
            "hom_witness",
            "concat_chains",
            "embed_and_compress",
            "path_functor",
            "structural_isos",
            "validate_colax",
        ],
    ),
    ("segal-check", &["check_path_object", "canonical_bases", "validate_base"]),
    ("roundtrip", &["enriched_to_path", "strict_to_enriched", "metric_enrichment", "cocycle_check"]),
    ("monoid", &["homotopy_monoid_view"]),
    (
        "simplicial",
        &["simplicial_correspondence", "nerve_level", "coarse", "compose_delta", "ordinal_sum", "factorize_generators", "enumerate_hom"],
    ),
    ("bridge", &["bridge_of_distributor", "distributor_of_bridge", "thin_bridge", "elements"]),
    ("bimodule", &["validate_bimodule", "validate_transformation", "validate_modification", "validate_premorphism"]),
    (
        "localize",
        &[
            "check_fractions",
            "localize_fractions",
            "product_localization_check",
            "curry_adjunction",
            "secondary_localization",
        ],
    ),
    ("reduce", &["secondary_localization", "reduce_point"]),
    (
        "report",
        &["derive", "interior", "nerve_level", "coarse", "interval", "restrict", "foliation", "base_change", "validate_premorphism"],
    ),
];

/// The result of one invocation.
#[derive(Debug)]
pub enum Outcome {
    Report(Report),
    Input(InputError),
    /// `--help` or `--version` text.
    Text(String),
}

#[derive(Debug)]
pub struct Run {
    pub outcome: Outcome,
    pub json: bool,
}

impl Run {
    /// 0 pass, 1 verification failure, 2 input error.
    pub fn exit_code(&self) -> i32 {
        match &self.outcome {
            Outcome::Report(r) if r.passed() => 0,
            Outcome::Report(_) => 1,
            Outcome::Input(_) => 2,
            Outcome::Text(_) => 0,
        }
    }

    /// Text for stdout.
    pub fn stdout(&self) -> String {
        match &self.outcome {
            Outcome::Report(r) if self.json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
            Outcome::Report(r) => r.to_string(),
            Outcome::Text(t) => t.clone(),
            Outcome::Input(_) => String::new(),
        }
    }

    /// Text for stderr.
    pub fn stderr(&self) -> String {
        match &self.outcome {
            Outcome::Input(e) => format!("error: {e}\nFAIL {}\n", e.code()),
            _ => String::new(),
        }
    }

    pub fn report(&self) -> Option<&Report> {
        match &self.outcome {
            Outcome::Report(r) => Some(r),
            _ => None,
        }
    }
}

/// Parses arguments (program name first) and runs the command.
pub fn run_command<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let outcome = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Outcome::Text(e.to_string())
                }
                ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand => Outcome::Input(InputError::UnknownCommand(first_line(&e))),
                ErrorKind::MissingRequiredArgument => Outcome::Input(InputError::MissingArgument(first_line(&e))),
                _ => Outcome::Input(InputError::Invalid(first_line(&e))),
            };
            return Run { outcome, json: false };
        }
    };
    let json = cli.json;
    let start = Instant::now();
    let outcome = match execute(&cli.command, cli.max_len) {
        Ok(mut r) => {
            r.runtime_ms = start.elapsed().as_millis();
            Outcome::Report(r)
        }
        Err(e) => Outcome::Input(e),
    };
    Run { outcome, json }
}

fn first_line(e: &clap::Error) -> String {
    e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string()
}

pub fn execute(cmd: &Command, n: usize) -> commands::Outcome {
    if n == 0 {
        return Err(InputError::Invalid("--max-len must be positive".into()));
    }
    match cmd {
        Command::Validate { spec } => commands::validate(spec, n),
        Command::Path { spec, category, check, transport } => commands::path(
            PathArgs { spec: spec.as_deref(), category: category.as_deref(), check, transport: transport.as_deref() },
            n,
        ),
        Command::SegalCheck { pathobject, name, base } => {
            commands::segal_check(pathobject, name.as_deref(), base.as_deref(), n)
        }
        Command::Roundtrip { enriched, name } => commands::roundtrip(enriched, name.as_deref(), n),
        Command::Monoid { pathobject, name } => commands::monoid(pathobject, name.as_deref(), n),
        Command::Simplicial { points } => commands::simplicial(*points, n),
        Command::Bridge { distributor, name } => commands::bridge(distributor, name.as_deref(), n),
        Command::Bimodule { spec, name } => commands::bimodule(spec, name.as_deref(), n),
        Command::Localize { spec, category, arrows, product, product_arrows, base } => commands::localize_cmd(
            LocalizeArgs {
                spec: spec.as_deref(),
                category: category.as_deref(),
                arrows,
                product: product.as_deref(),
                product_arrows,
                base: base.as_deref(),
            },
            n,
        ),
        Command::Reduce { pathobject, name } => commands::reduce_cmd(pathobject, name.as_deref(), n),
        Command::Report { spec } => commands::report(spec, n),
    }
}
