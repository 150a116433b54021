//! `shearlet`: verification suites and numeric experiments with JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage errors, 3 on IO errors.

use clap::{Args, Parser, Subcommand};
use shearlet_core::coorbit::{CoefficientSequence, CoorbitConfig};
use shearlet_core::liealg::CanonicalForm;
use shearlet_core::report::Report;
use shearlet_core::scalar::{parse_q, Q};
use shearlet_core::suites::{self, input, AdmissibilityAtom, Backend, Which};
use shearlet_core::Error;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shearlet", version, about = "Shearlet group, sp(2,R) and coorbit verification suites")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Anisotropy exponent as "p/q" or a decimal.
    #[arg(long, global = true, default_value = "1/2")]
    gamma: String,
    /// Numeric backend of the algebraic suites.
    #[arg(long, global = true, default_value = "exact", value_parser = ["exact", "float"])]
    backend: String,
    /// Seed of every randomized check.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Report path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Group laws and isomorphisms.
    Groups {
        #[command(subcommand)]
        cmd: GroupsCmd,
    },
    /// Symplectic matrices.
    Sympl {
        #[command(subcommand)]
        cmd: SymplCmd,
    },
    /// The Lie algebra sp(2,R).
    Liealg {
        #[command(subcommand)]
        cmd: LiealgCmd,
    },
    /// Representations on the half-space.
    Repr {
        #[command(subcommand)]
        cmd: ReprCmd,
    },
    /// Coorbit experiments.
    Coorbit {
        #[command(subcommand)]
        cmd: CoorbitCmd,
    },
}

#[derive(Subcommand)]
enum GroupsCmd {
    /// Associativity, inverses, isomorphisms and the symplectic embeddings.
    Verify {
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
}

#[derive(Subcommand)]
enum SymplCmd {
    /// Residual of B^T J B - J for a matrix file {"matrix": [[...]]}.
    Check {
        input: PathBuf,
        /// Frobenius tolerance of the float backend.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum LiealgCmd {
    /// Structure constants, antisymmetry, Jacobi and root spaces.
    TableVerify,
    /// det M_Gamma against the closed form; all cases at random without --case.
    Mgamma {
        #[arg(long)]
        case: Option<u8>,
        /// Parameters then signs in declaration order, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(long, default_value = "2gamma")]
        which: String,
    },
    /// Quadruples realizing the generator relations, by canonical form.
    EmbedSearch,
    /// Reflection extensions of the generator quadruples.
    Obstruct,
    /// Normal form of a Hamiltonian matrix file, or a self-test without one.
    Classify { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum ReprCmd {
    /// Admissibility constant under refinement.
    Admissibility {
        #[arg(long, default_value = "box", value_parser = ["box", "bump"])]
        atom: String,
    },
    /// Shearlet transform checks; --csv writes the coefficients.
    Transform {
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Covariance identities and the intertwining residual.
    Equivalence {
        #[arg(long, default_value_t = 256)]
        cells: usize,
    },
    /// Square-integrability ratio for three pairs.
    SquareInt,
}

#[derive(Subcommand)]
enum CoorbitCmd {
    /// Frame reconstruction and coefficient transfer; --csv overrides the coefficient path.
    Run {
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Io(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::Parse(_) | Error::InvalidParameter(_) | Error::DimensionMismatch(_) | Error::KindMismatch(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn gamma(g: &Global) -> Result<Q, Failure> {
    Ok(parse_q(&g.gamma)?)
}

fn read_json(path: &Path) -> Result<serde_json::Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_csv(path: &Path, seq: &CoefficientSequence) -> Result<(), Failure> {
    let f = File::create(path).map_err(|e| io_err(path, e))?;
    seq.write_csv(BufWriter::new(f))?;
    Ok(())
}

fn canonical_form(case: u8, params: &[String]) -> Result<CanonicalForm, Failure> {
    let (np, ns) = match case {
        1 | 3 => (2, 0),
        2 => (1, 0),
        4 => (0, 1),
        5 => (2, 1),
        6 => (2, 2),
        7 => (1, 1),
        _ => return Err(Failure::Usage(format!("--case must be 1..7, got {case}"))),
    };
    if params.len() != np + ns {
        return Err(Failure::Usage(format!("D{case} takes {} values, got {}", np + ns, params.len())));
    }
    let p: Vec<Q> = params[..np].iter().map(|s| parse_q(s)).collect::<Result<_, _>>()?;
    let s: Vec<i32> = params[np..]
        .iter()
        .map(|s| s.trim().parse().map_err(|_| Failure::Usage(format!("sign {s:?} is not an integer"))))
        .collect::<Result<_, _>>()?;
    Ok(CanonicalForm::from_parts(case, &p, &s)?)
}

fn coorbit_config(g: &Global) -> Result<CoorbitConfig, Failure> {
    match &g.config {
        Some(path) => serde_json::from_value(read_json(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => Ok(CoorbitConfig::reference()),
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    let backend = Backend::parse(&g.backend)?;
    let report = match &cli.command {
        Command::Groups { cmd: GroupsCmd::Verify { d } } => suites::groups_verify(&gamma(g)?, *d, backend, g.seed)?,
        Command::Sympl { cmd: SymplCmd::Check { input: path, tol } } => {
            let doc = read_json(path)?;
            match backend {
                Backend::Exact => suites::sympl_check_exact(&input::matrix_exact(&doc)?)?,
                Backend::Float => suites::sympl_check_float(&input::matrix_float(&doc)?, *tol)?,
            }
        }
        Command::Liealg { cmd } => match cmd {
            LiealgCmd::TableVerify => suites::table_verify()?,
            LiealgCmd::Mgamma { case, params, which } => {
                let which = Which::parse(which)?;
                match case {
                    Some(c) => suites::mgamma_case(&canonical_form(*c, params)?, &gamma(g)?, which)?,
                    None => suites::mgamma_random(&gamma(g)?, g.seed)?,
                }
            }
            LiealgCmd::EmbedSearch => suites::embed_search(&gamma(g)?)?,
            LiealgCmd::Obstruct => suites::obstruct(&gamma(g)?)?,
            LiealgCmd::Classify { input: path } => match path {
                Some(p) => suites::classify_matrix(&input::matrix_float(&read_json(p)?)?)?,
                None => suites::classify_selftest(g.seed)?,
            },
        },
        Command::Repr { cmd } => match cmd {
            ReprCmd::Admissibility { atom } => suites::admissibility(AdmissibilityAtom::parse(atom)?)?,
            ReprCmd::Transform { csv } => {
                let (r, seq) = suites::transform(&gamma(g)?, g.seed)?;
                if let Some(p) = csv {
                    write_csv(p, &seq)?;
                }
                r
            }
            ReprCmd::Equivalence { cells } => suites::equivalence(&gamma(g)?, g.seed, *cells)?,
            ReprCmd::SquareInt => suites::square_int(&gamma(g)?)?,
        },
        Command::Coorbit { cmd: CoorbitCmd::Run { csv } } => {
            let config = coorbit_config(g)?;
            let (r, seq) = suites::coorbit_run(&config)?;
            let path = csv.clone().or_else(|| g.out.as_ref().map(|o| o.with_extension("csv")));
            if let Some(p) = path {
                write_csv(&p, &seq)?;
            }
            r
        }
    };
    Ok(report)
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), Failure> {
    let text = report.render();
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io_err(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli).and_then(|r| {
        emit(&r, cli.global.out.as_deref())?;
        Ok(r)
    });
    match result {
        Ok(r) if r.pass() => ExitCode::SUCCESS,
        Ok(r) => {
            eprintln!("FAIL: {}", r.failures().join(", "));
            ExitCode::from(1)
        }
        Err(Failure::Check(m)) => {
            eprintln!("FAIL: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("io error: {m}");
            ExitCode::from(3)
        }
    }
}
