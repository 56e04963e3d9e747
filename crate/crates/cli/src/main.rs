mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Method, RunConfig};
use crate::error::CliError;

/// Teacher-annotated text/molecule datasets and constrained generation.
#[derive(Debug, Parser)]
#[command(name = "molprompt", version)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (default: a fixed name in the data directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Data directory (default: $MOLPROMPT_DATA_DIR, else ./molprompt-data).
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Task id; repeat to allow several when building a dataset.
    #[arg(long = "task", global = true)]
    tasks: Vec<String>,
    /// Template style (T0, T1 or T2).
    #[arg(long, global = true)]
    style: Option<String>,
    /// Number of molecules to generate.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Generate through an external process: `--bridge "prog args"`, or a
    /// bare `--bridge` to wait for a response file.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "")]
    bridge: Option<String>,
    /// More log output; repeat for debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TeacherArgs {
    /// Functional-group lexicon (name<TAB>SMILES); default is the bundled one.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Trained classifier file; repeatable.
    #[arg(long = "classifier")]
    pub classifiers: Vec<PathBuf>,
    /// Score file (SMILES<TAB>target<TAB>score); repeatable.
    #[arg(long = "scores")]
    pub scores: Vec<PathBuf>,
    /// SA fragment table; default is the bundled one.
    #[arg(long)]
    pub fragments: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Uniqueness {
    Valid,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Read a SMILES[<TAB>IUPAC] library, canonicalize and deduplicate it.
    Ingest {
        /// Library file (default: the bundled sample library).
        #[arg(long)]
        library: Option<PathBuf>,
    },
    /// Write every teacher fact for each library molecule as JSON lines.
    Annotate {
        /// Library file (default: library.tsv in the data directory, else the bundled one).
        #[arg(long)]
        library: Option<PathBuf>,
        #[command(flatten)]
        teachers: TeacherArgs,
    },
    /// Build the text/molecule pair dataset.
    BuildDataset {
        /// Library file (default: library.tsv in the data directory, else the bundled one).
        #[arg(long)]
        library: Option<PathBuf>,
        #[command(flatten)]
        teachers: TeacherArgs,
    },
    /// Train the task-conditioned n-gram baseline.
    TrainNgram {
        /// Pair dataset (default: dataset.jsonl in the data directory).
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// N-gram order, 1 to 6 (default 4).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Train a fingerprint classifier on SMILES<TAB>0|1 lines.
    TrainClassifier {
        /// Target or ADMET flag name, e.g. DRD2 or BBB.
        #[arg(long)]
        name: Option<String>,
        /// SMILES<TAB>0|1 lines.
        #[arg(long)]
        labels: PathBuf,
    },
    /// Generate molecules for a task, prompt or constraint spec.
    Generate {
        /// N-gram model (default: model.ngram in the data directory).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Prompt text; its template picks the task.
        #[arg(long)]
        prompt: Option<String>,
        /// Constraint spec, e.g. FG:benzamide+QED.
        #[arg(long)]
        spec: Option<String>,
        /// Generator (default: ngram, or bridge with --bridge).
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Library searched by the retrieval method.
        #[arg(long)]
        library: Option<PathBuf>,
        #[command(flatten)]
        teachers: TeacherArgs,
    },
    /// Score generated molecules against a constraint spec.
    Evaluate {
        /// One SMILES per line; `#` lines are skipped.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Constraint spec, e.g. FG:benzamide+QED.
        #[arg(long)]
        spec: Option<String>,
        /// Training set for novelty: a dataset (.jsonl) or a library.
        #[arg(long)]
        training: Option<PathBuf>,
        /// Uniqueness denominator.
        #[arg(long, value_enum)]
        uniqueness: Option<Uniqueness>,
        #[command(flatten)]
        teachers: TeacherArgs,
    },
    /// Predictor F1 as generated positives are added to its training data.
    Augment {
        /// SMILES<TAB>0|1 lines for the predictor's task.
        #[arg(long)]
        labels: PathBuf,
        /// Generated positives, one SMILES per line.
        #[arg(long)]
        pseudo: PathBuf,
        /// Name recorded in the report.
        #[arg(long)]
        target: Option<String>,
        /// Repeated random splits (default 100).
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Print the canonical form and descriptors of one molecule.
    Describe {
        smiles: String,
        #[arg(long)]
        fragments: Option<PathBuf>,
    },
    /// Count SA fragment contributions over a SMILES corpus.
    BuildSaTable {
        /// One SMILES per line.
        #[arg(long)]
        corpus: PathBuf,
    },
}

fn merge_teachers(cfg: &mut RunConfig, t: &TeacherArgs) {
    if t.lexicon.is_some() {
        cfg.paths.lexicon = t.lexicon.clone();
    }
    if !t.classifiers.is_empty() {
        cfg.paths.models = t.classifiers.clone();
    }
    if !t.scores.is_empty() {
        cfg.paths.scores = t.scores.clone();
    }
    if t.fragments.is_some() {
        cfg.paths.fragments = t.fragments.clone();
    }
}

fn single_task(tasks: &[String]) -> Result<Option<String>, CliError> {
    match tasks {
        [] => Ok(None),
        [t] => Ok(Some(t.clone())),
        _ => Err(CliError::Usage("generate takes one --task".into())),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.data_dir.is_some() {
        cfg.data_dir = cli.data_dir.clone();
    }
    cfg.resolve_data_dir();
    if let Some(n) = cli.n {
        cfg.generate.n = n;
    }
    if let Some(style) = &cli.style {
        let style: molprompt::dataset::Style = style.parse().map_err(|e| CliError::Usage(format!("--style: {e}")))?;
        let w = molprompt::dataset::StyleWeights::only(style);
        cfg.styles = config::StyleParams {
            t0: w.t0,
            t1: w.t1,
            t2: w.t2,
        };
    }
    if let Some(b) = &cli.bridge {
        cfg.generate.method = Method::Bridge;
        cfg.bridge.command = b.split_whitespace().map(str::to_string).collect();
    }
    let out = cli.out.clone();
    match cli.command {
        Command::Ingest { library } => {
            if library.is_some() {
                cfg.paths.library = library;
            }
            commands::ingest(&cfg, out)
        }
        Command::Annotate { library, teachers } => {
            if library.is_some() {
                cfg.paths.library = library;
            }
            merge_teachers(&mut cfg, &teachers);
            commands::annotate(&cfg, out)
        }
        Command::BuildDataset { library, teachers } => {
            if library.is_some() {
                cfg.paths.library = library;
            }
            if !cli.tasks.is_empty() {
                cfg.tasks = cli.tasks.clone();
            }
            merge_teachers(&mut cfg, &teachers);
            commands::build_dataset(&cfg, out)
        }
        Command::TrainNgram { dataset, order } => {
            if let Some(o) = order {
                cfg.ngram.order = o;
            }
            commands::train_ngram(&cfg, dataset, out)
        }
        Command::TrainClassifier { name, labels } => {
            if name.is_some() {
                cfg.classifier.name = name;
            }
            commands::train_classifier(&cfg, &labels, out)
        }
        Command::Generate {
            model,
            prompt,
            spec,
            method,
            library,
            teachers,
        } => {
            if let Some(t) = single_task(&cli.tasks)? {
                cfg.generate.task = Some(t);
            }
            if prompt.is_some() {
                cfg.generate.prompt = prompt;
            }
            if spec.is_some() {
                cfg.generate.spec = spec;
            }
            if let Some(m) = method {
                if cli.bridge.is_some() && m != Method::Bridge {
                    return Err(CliError::Usage("--bridge conflicts with --method".into()));
                }
                cfg.generate.method = m;
            }
            if library.is_some() {
                cfg.paths.library = library;
            }
            merge_teachers(&mut cfg, &teachers);
            commands::generate(&cfg, model, out)
        }
        Command::Evaluate {
            samples,
            spec,
            training,
            uniqueness,
            teachers,
        } => {
            if spec.is_some() {
                cfg.evaluate.spec = spec;
            }
            if let Some(u) = uniqueness {
                cfg.evaluate.uniqueness = match u {
                    Uniqueness::Valid => molprompt::evaluation::UniquenessDenominator::Valid,
                    Uniqueness::All => molprompt::evaluation::UniquenessDenominator::All,
                };
            }
            merge_teachers(&mut cfg, &teachers);
            commands::evaluate(&cfg, samples, training, out)
        }
        Command::Augment {
            labels,
            pseudo,
            target,
            trials,
        } => {
            if let Some(t) = target {
                cfg.augment.target = t;
            }
            if let Some(t) = trials {
                cfg.augment.trials = t;
            }
            commands::augment(&cfg, &labels, &pseudo, out)
        }
        Command::Describe { smiles, fragments } => {
            if fragments.is_some() {
                cfg.paths.fragments = fragments;
            }
            commands::describe(&cfg, &smiles, out)
        }
        Command::BuildSaTable { corpus } => commands::build_sa_table(&cfg, &corpus, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
