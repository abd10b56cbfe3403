use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use unitcon::decomp::{angular_distance, nsv_signature, si_eigenvalues, ui_svd, unsv_signature};
use unitcon::experiments::{fit_experiment, signature_experiment, FitConfig, NoiseConfig, Norm};
use unitcon::inverse::{block_uc_inverse, linv, rinv, uinv, BlockSplit};
use unitcon::io::{format_matrix, format_row, read_matrix};
use unitcon::scaling::{dscale, ScalingOptions, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};
use unitcon::spectral::pinv;
use unitcon::{Error, Matrix};

/// Unit-consistent generalized inverses and unit-invariant decompositions.
///
/// Matrix files hold one row per line with comma-separated values.
#[derive(Parser, Debug)]
#[command(name = "unitcon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Tol {
    /// Relative rank tolerance (singular values <= tol * s_max count as zero)
    #[arg(long, value_parser = non_negative)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct SignatureOpts {
    /// Signature length
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Use ordinary singular values instead of unit-invariant ones
    #[arg(long)]
    nsv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moore-Penrose pseudoinverse
    Pinv {
        input: PathBuf,
        #[command(flatten)]
        tol: Tol,
    },
    /// Unit-consistent inverse (consistent under A -> D A E)
    Uinv {
        input: PathBuf,
        #[command(flatten)]
        tol: Tol,
    },
    /// Left unit-consistent inverse (consistent under A -> D A)
    Linv {
        input: PathBuf,
        #[command(flatten)]
        tol: Tol,
    },
    /// Right unit-consistent inverse (consistent under A -> A E)
    Rinv {
        input: PathBuf,
        #[command(flatten)]
        tol: Tol,
    },
    /// Joint diagonal scaling; prints the left factor, the scaled matrix and
    /// the right factor as three blank-line separated blocks
    Dscale {
        input: PathBuf,
        /// Stop when the mean log adjustment per sweep falls to this value
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_SWEEPS)]
        max_sweeps: usize,
    },
    /// Unit-invariant singular values (one row)
    Usvd { input: PathBuf },
    /// Full unit-invariant SVD: blocks d, U, s, V, e
    Uisvd { input: PathBuf },
    /// Eigenvalues of the jointly scaled matrix, one `re,im` row each
    Sieig { input: PathBuf },
    /// Singular-value signature (one row)
    Signature {
        input: PathBuf,
        #[command(flatten)]
        opts: SignatureOpts,
    },
    /// Angular distance between the signatures of two matrices
    Dist {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        opts: SignatureOpts,
    },
    /// Block inverse with a diagonal-unit leading block of size `split`
    Blockinv {
        input: PathBuf,
        #[arg(long)]
        split: usize,
        #[command(flatten)]
        tol: Tol,
    },
    /// Compare right-consistent and pseudoinverse linear fits of random
    /// polynomial maps
    ExperimentFit {
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        /// Comma-separated sample counts
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,500")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value = "l1", value_parser = parse_norm)]
        norm: Norm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Signature robustness under row/column gain noise on synthetic images
    ExperimentSignature {
        #[arg(long, default_value_t = 32)]
        rows: usize,
        #[arg(long, default_value_t = 32)]
        cols: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Largest ratio between two row (or column) gains
        #[arg(long, default_value_t = 2.0)]
        spread: f64,
        /// Skip 8-bit quantization of the corrupted images
        #[arg(long)]
        no_quantize: bool,
        #[arg(long, default_value_t = 3)]
        images: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn non_negative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number >= 0, got '{s}'")),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number > 0, got '{s}'")),
    }
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn load(path: &Path) -> Result<Matrix, Error> {
    read_matrix(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn signature_of(a: &Matrix, opts: &SignatureOpts) -> Result<unitcon::decomp::Signature, Error> {
    let k = opts.k as usize;
    if opts.nsv {
        nsv_signature(a, k)
    } else {
        unsv_signature(a, k)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> Result<String, Error> {
    Ok(match cmd {
        Command::Pinv { input, tol } => format_matrix(&pinv(&load(&input)?, tol.tol)?),
        Command::Uinv { input, tol } => format_matrix(&uinv(&load(&input)?, tol.tol)?),
        Command::Linv { input, tol } => format_matrix(&linv(&load(&input)?, tol.tol)?),
        Command::Rinv { input, tol } => format_matrix(&rinv(&load(&input)?, tol.tol)?),
        Command::Dscale {
            input,
            tol,
            max_sweeps,
        } => {
            let s =
                dscale(&load(&input)?, ScalingOptions { tol, max_sweeps })?.require_converged()?;
            format!(
                "{}\n\n{}\n{}\n",
                format_row(s.left.entries()),
                format_matrix(&s.scaled),
                format_row(s.right.entries())
            )
        }
        Command::Usvd { input } => {
            let d = ui_svd(&load(&input)?)?;
            format!("{}\n", format_row(&d.s))
        }
        Command::Uisvd { input } => {
            let d = ui_svd(&load(&input)?)?;
            format!(
                "{}\n\n{}\n{}\n\n{}\n{}\n",
                format_row(d.d.entries()),
                format_matrix(&d.u),
                format_row(&d.s),
                format_matrix(&d.v),
                format_row(d.e.entries())
            )
        }
        Command::Sieig { input } => {
            let e = si_eigenvalues(&load(&input)?)?;
            e.values
                .iter()
                .map(|z| format!("{}\n", format_row(&[z.re, z.im])))
                .collect()
        }
        Command::Signature { input, opts } => {
            format!(
                "{}\n",
                format_row(signature_of(&load(&input)?, &opts)?.values())
            )
        }
        Command::Dist {
            first,
            second,
            opts,
        } => {
            let p = signature_of(&load(&first)?, &opts)?;
            let q = signature_of(&load(&second)?, &opts)?;
            format!("{}\n", format_row(&[angular_distance(&p, &q)?]))
        }
        Command::Blockinv { input, split, tol } => format_matrix(&block_uc_inverse(
            &load(&input)?,
            BlockSplit { k: split },
            tol.tol,
        )?),
        Command::ExperimentFit {
            m,
            n,
            trials,
            norm,
            seed,
            out,
        } => {
            let cfg = FitConfig {
                m: m as usize,
                n_values: n,
                trials,
                norm,
                seed,
            };
            emit(&fit_experiment(&cfg)?.to_csv(), out.as_deref())?;
            String::new()
        }
        Command::ExperimentSignature {
            rows,
            cols,
            k,
            spread,
            no_quantize,
            images,
            trials,
            seed,
            out,
        } => {
            let cfg = NoiseConfig {
                rows,
                cols,
                k,
                scale_spread: spread,
                quantize: !no_quantize,
                images,
                trials,
                seed,
            };
            emit(&signature_experiment(&cfg)?.to_csv(), out.as_deref())?;
            String::new()
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
