use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

mod jobs;

use jobs::{Failure, JobSpec};

#[derive(Parser)]
#[command(name = "zhu", version, about = "Exact computations with twisted Zhu algebras of affine VOAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Jacobi,
    TwistedJacobi,
    WeakAssoc,
    Commutator,
    LieRelation,
    PowerField,
    Ideal,
    Associativity,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Cartan type and rank, e.g. `A2`
    #[arg(long)]
    algebra: String,
    /// Diagram automorphism: `id`, `flip`, `triality` or a permutation like `1,0`
    #[arg(long, default_value = "id")]
    mu: String,
    /// Nilpotent element of the fixed subalgebra, e.g. `f_theta` or `f_10 + f_01`
    #[arg(long, allow_hyphen_values = true)]
    e: Option<String>,
    #[arg(long, default_value = "1")]
    level: String,
    /// Highest weight in fundamental-weight coordinates, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Vec<i64>,
    /// Truncation depth (a rational for twisted modules)
    #[arg(long, allow_hyphen_values = true)]
    depth: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Structure constants, invariant form and automorphism data
    BuildAlgebra(Common),
    /// Eigenspace decomposition of g under the automorphism
    EigenDecomp(Common),
    /// Product of two states in the twisted Zhu algebra
    ZhuProduct {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Powers of i(x) in the Zhu algebra, x = e_theta by default
    ZhuPower {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Dimensions of the truncated Zhu algebra quotients
    ZhuDims(Common),
    /// Span of map_I on PBW monomials of degree <= k
    MapICheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Graded dimensions of an untwisted module
    GradedDims {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        simple: bool,
    },
    /// Graded dimensions of a twisted module
    TwistedGradedDims {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        simple: bool,
    },
    /// Admissibility certificates for all weights with coordinates <= k
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        k: i64,
    },
    /// Runs an identity check and exits 3 if it fails
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        identity: Identity,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        /// Power for `power-field` (default level + 1)
        #[arg(long)]
        k: Option<usize>,
        /// Half-width of the coefficient window
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
}

fn emit(spec: &JobSpec, body: &Output) -> Result<(), Failure> {
    let text = match body {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Validation(e.to_string()))?;
            s.push('\n');
            s
        }
        Output::Csv(s) => s.clone(),
    };
    match &spec.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Validation(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Validation(e.to_string())),
    }
}

pub enum Output {
    Json(Value),
    Csv(String),
}

fn dispatch(cmd: Command) -> Result<(JobSpec, Output, bool), Failure> {
    let (spec, out) = match cmd {
        Command::BuildAlgebra(c) => {
            let spec = JobSpec::new("build-algebra", c)?;
            let out = jobs::build_algebra(&spec)?;
            (spec, out)
        }
        Command::EigenDecomp(c) => {
            let spec = JobSpec::new("eigen-decomp", c)?;
            let out = jobs::eigen_decomp(&spec)?;
            (spec, out)
        }
        Command::ZhuProduct { common, u, v } => {
            let spec = JobSpec::new("zhu-product", common)?;
            let out = jobs::zhu_product(&spec, &u, &v)?;
            (spec, out)
        }
        Command::ZhuPower { common, k, x } => {
            let spec = JobSpec::new("zhu-power", common)?;
            let out = jobs::zhu_power(&spec, k, x.as_deref())?;
            (spec, out)
        }
        Command::ZhuDims(c) => {
            let spec = JobSpec::new("zhu-dims", c)?;
            let out = jobs::zhu_dims(&spec)?;
            (spec, out)
        }
        Command::MapICheck { common, k } => {
            let spec = JobSpec::new("map-i-check", common)?;
            let (out, ok) = jobs::map_i_check(&spec, k)?;
            return Ok((spec, out, ok));
        }
        Command::GradedDims { common, simple } => {
            let spec = JobSpec::new("graded-dims", common)?;
            let out = jobs::graded_dims(&spec, simple)?;
            (spec, out)
        }
        Command::TwistedGradedDims { common, simple } => {
            let spec = JobSpec::new("twisted-graded-dims", common)?;
            let out = jobs::twisted_graded_dims(&spec, simple)?;
            (spec, out)
        }
        Command::Classify { common, k } => {
            let spec = JobSpec::new("classify", common)?;
            let out = jobs::classify(&spec, k)?;
            (spec, out)
        }
        Command::Verify { common, identity, u, v, w, k, window } => {
            let spec = JobSpec::new("verify", common)?;
            let req = jobs::VerifyRequest {
                identity,
                u,
                v,
                w,
                power: k,
                window,
            };
            let (out, ok) = jobs::verify(&spec, &req)?;
            return Ok((spec, out, ok));
        }
    };
    Ok((spec, out, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = dispatch(cli.command).and_then(|(spec, out, ok)| {
        emit(&spec, &out)?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
