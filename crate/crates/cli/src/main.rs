use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use persmod::barcode::Barcode;
use persmod::bottleneck::bottleneck;
use persmod::decomposition::decompose;
use persmod::experiment::{self, ExperimentConfig, Mode};
use persmod::field::PrimeField;
use persmod::filtration::{FilteredComplex, FiltrationError};
use persmod::format::{parse_complex, parse_map, InputError};
use persmod::homology::{extended_module, morphism_module, persistence_module, HomologyError};
use persmod::scalar::ExtendedRational;

mod diagram;

#[derive(Parser)]
#[command(name = "persmod", version, about = "Exact persistent homology, barcodes and interleaving distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Barcode of the sublevel filtration of a complex file.
    Barcode {
        complex: PathBuf,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, env = "PERSIST_FIELD", default_value_t = 2)]
        field: u64,
    },
    /// Barcode of the extended filtration of a complex file.
    Extended {
        complex: PathBuf,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, env = "PERSIST_FIELD", default_value_t = 2)]
        field: u64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        spacing: ExtendedRational,
    },
    /// Bottleneck distance between two barcode CSV files.
    ///
    /// Without `--degree` the distance is the maximum over all degrees.
    Bottleneck {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        /// Print an optimal matching after the distance.
        #[arg(long)]
        witness: bool,
    },
    /// Kernel, image and cokernel barcodes of the map `Y → X` on homology.
    Kic {
        /// Target complex `X`.
        x: PathBuf,
        /// Source complex `Y`.
        y: PathBuf,
        /// Vertex map `Y → X`.
        map: PathBuf,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, env = "PERSIST_FIELD", default_value_t = 2)]
        field: u64,
        /// Write kernel.csv, image.csv and cokernel.csv here instead of
        /// standard output.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Randomized check of the stability bounds.
    Stability {
        #[arg(long, value_enum, default_value_t = ModeArg::Ordinary)]
        mode: ModeArg,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, env = "PERSIST_FIELD", default_value_t = 2)]
        field: u64,
        /// Gap between the ascending and descending halves (extended mode).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        spacing: ExtendedRational,
        /// Write the per-trial records as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Persistence diagram of a barcode CSV file as SVG.
    Diagram {
        barcode: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Only draw bars of this degree.
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ordinary,
    Extended,
    Kic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ordinary => Mode::Ordinary,
            ModeArg::Extended => Mode::Extended,
            ModeArg::Kic => Mode::Kic,
        }
    }
}

/// Failures sorted by exit code.
enum Failure {
    /// Unreadable or malformed input: exit 1.
    Input(anyhow::Error),
    /// Well-formed input violating a mathematical precondition: exit 2.
    Precondition(anyhow::Error),
    /// The stability experiment found violations: exit 3.
    Violations(usize),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Input(e)
    }
}

fn is_precondition(e: &FiltrationError) -> bool {
    matches!(
        e,
        FiltrationError::NotMonotone { .. }
            | FiltrationError::Incompatible(_)
            | FiltrationError::NonPositiveSpacing(_)
            | FiltrationError::BoundTooSmall { .. }
    )
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match &e {
            InputError::Filtration(f) if is_precondition(f) => Self::Precondition(e.into()),
            _ => Self::Input(e.into()),
        }
    }
}

impl From<FiltrationError> for Failure {
    fn from(e: FiltrationError) -> Self {
        if is_precondition(&e) {
            Self::Precondition(e.into())
        } else {
            Self::Input(e.into())
        }
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Filtration(f) => f.into(),
            other => Self::Precondition(other.into()),
        }
    }
}

fn field(p: u64) -> Result<PrimeField, Failure> {
    PrimeField::new(p).map_err(|e| Failure::Input(anyhow!("--field {p}: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)
}

fn load_complex(path: &Path) -> Result<FilteredComplex, Failure> {
    let text = read(path)?;
    parse_complex(&text).map_err(|e| {
        let wrapped: Failure = e.into();
        match wrapped {
            Failure::Input(e) => Failure::Input(e.context(path.display().to_string())),
            Failure::Precondition(e) => Failure::Precondition(e.context(path.display().to_string())),
            other => other,
        }
    })
}

fn load_barcode(path: &Path) -> Result<Barcode, Failure> {
    let text = read(path)?;
    Barcode::from_csv_str(&text)
        .with_context(|| path.display().to_string())
        .map_err(Failure::Input)
}

fn write_out(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, contents)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Input),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .context("writing standard output")
                .map_err(Failure::Input)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Barcode { complex, degree, field: p } => {
            let fc = load_complex(&complex)?;
            let m = persistence_module(&fc, degree, field(p)?)?;
            write_out(None, &decompose(&m, degree).to_csv_string())
        }
        Command::Extended {
            complex,
            degree,
            field: p,
            spacing,
        } => {
            let fc = load_complex(&complex)?;
            let pf = fc.build_extended(spacing)?;
            let m = extended_module(&pf, degree, field(p)?)?;
            write_out(None, &decompose(&m, degree).to_csv_string())
        }
        Command::Bottleneck {
            a,
            b,
            degree,
            witness,
        } => {
            let (x, y) = (load_barcode(&a)?, load_barcode(&b)?);
            let degrees = match degree {
                Some(d) => vec![d],
                None => {
                    let mut ds = x.degrees();
                    ds.extend(y.degrees());
                    ds.sort_unstable();
                    ds.dedup();
                    ds
                }
            };
            let results: Vec<_> = degrees.iter().map(|&d| (d, bottleneck(&x, &y, d))).collect();
            let total = results
                .iter()
                .map(|(_, (v, _))| v.clone())
                .max()
                .unwrap_or_else(ExtendedRational::zero);
            let mut text = format!("{total}\n");
            if witness {
                for (d, (v, matching)) in &results {
                    text.push_str(&format!("# degree {d}: {v}\n{matching}"));
                }
            }
            write_out(None, &text)
        }
        Command::Kic {
            x,
            y,
            map,
            degree,
            field: p,
            out_dir,
        } => {
            let (fx, fy) = (load_complex(&x)?, load_complex(&y)?);
            let text = read(&map)?;
            let h = parse_map(&text, fy.complex(), fx.complex())
                .with_context(|| map.display().to_string())
                .map_err(Failure::Input)?;
            let alpha = morphism_module(&h, &fx, &fy, degree, field(p)?)?;
            let parts = [
                ("kernel", decompose(&alpha.kernel(), degree)),
                ("image", decompose(&alpha.image(), degree)),
                ("cokernel", decompose(&alpha.cokernel(), degree)),
            ];
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir)
                        .with_context(|| format!("creating {}", dir.display()))
                        .map_err(Failure::Input)?;
                    for (name, b) in &parts {
                        write_out(Some(&dir.join(format!("{name}.csv"))), &b.to_csv_string())?;
                    }
                    Ok(())
                }
                None => {
                    let text: String = parts
                        .iter()
                        .map(|(name, b)| format!("# {name}\n{}", b.to_csv_string()))
                        .collect();
                    write_out(None, &text)
                }
            }
        }
        Command::Stability {
            mode,
            trials,
            seed,
            vertices,
            dim,
            field: p,
            spacing,
            csv,
        } => {
            if trials == 0 {
                return Err(Failure::Input(anyhow!("--trials must be at least 1")));
            }
            if vertices == 0 {
                return Err(Failure::Input(anyhow!("--vertices must be at least 1")));
            }
            if !spacing.is_positive() || !spacing.is_finite() {
                return Err(FiltrationError::NonPositiveSpacing(spacing).into());
            }
            let config = ExperimentConfig {
                mode: mode.into(),
                trials,
                seed,
                max_vertices: vertices,
                max_dim: dim,
                field: field(p)?,
                spacing,
            };
            let report = experiment::run(&config);
            write_out(None, &report.summary())?;
            if let Some(path) = csv {
                write_out(Some(&path), &report.to_csv())?;
            }
            match report.violations() {
                0 => Ok(()),
                n => Err(Failure::Violations(n)),
            }
        }
        Command::Diagram { barcode, out, degree } => {
            let b = load_barcode(&barcode)?;
            let b = match degree {
                Some(d) => b.restrict(d),
                None => b,
            };
            write_out(out.as_deref(), &diagram::render(&b))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Precondition(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Violations(n)) => {
            eprintln!("stability bound violated in {n} trial(s)");
            ExitCode::from(3)
        }
    }
}
