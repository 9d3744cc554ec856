use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tpsurf::BiDeg;
use tpsurf_cli::{
    cmd_analyze, cmd_betti, cmd_random, cmd_verify, render_analysis, AnalyzeOptions, CliError, Limits, RandomMode,
    SurfaceInput,
};

#[derive(Parser)]
#[command(name = "tpsurf", version, about = "Implicit equations of tensor product surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Input file (`-` for stdin).
    file: PathBuf,
    /// JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LimitArgs {
    /// Largest symbolic determinant to attempt.
    #[arg(long, default_value_t = Limits::default().max_det)]
    max_det: usize,
    /// Largest graded piece the syzygy search may enter.
    #[arg(long, default_value_t = Limits::default().max_strand)]
    max_strand: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_det: self.max_det,
            max_strand: self.max_strand,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Basepoints, linear syzygy, strand matrix and implicit equation.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Seed for randomized checks (overrides the file).
        #[arg(long)]
        seed: Option<u64>,
        /// Also list minimal first syzygies up to this bidegree.
        #[arg(long = "box", num_args = 2, value_names = ["M", "N"])]
        bx: Option<Vec<u32>>,
        /// Interpolated determinant without the full-strand cross-check.
        #[arg(long)]
        fast_det: bool,
        /// Continue past a basepoint witness.
        #[arg(long)]
        allow_basepoints: bool,
        /// Leave timings out of the report.
        #[arg(long)]
        no_timings: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Bidegrees of minimal first syzygies inside a box.
    Betti {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box", num_args = 2, value_names = ["M", "N"])]
        bx: Option<Vec<u32>>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Write a random input file.
    Random {
        a: u32,
        b: u32,
        /// `with-linear-syzygy` or `dense`.
        #[arg(long, default_value = "with-linear-syzygy")]
        mode: RandomMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that F vanishes on the parametrization.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Homogeneous polynomial in x0..x3.
        equation: String,
    },
}

fn read_input(path: &PathBuf) -> Result<SurfaceInput, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
    };
    SurfaceInput::parse(&text)
}

fn to_box(v: &Option<Vec<u32>>) -> Option<BiDeg> {
    v.as_ref().map(|v| BiDeg::new(v[0], v[1]))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Analyze {
            common,
            seed,
            bx,
            fast_det,
            allow_basepoints,
            no_timings,
            limits,
        } => {
            let input = read_input(&common.file)?;
            let opts = AnalyzeOptions {
                seed: seed.or(input.seed).unwrap_or(0),
                betti_box: to_box(&bx).or(input.betti_box),
                fast_det,
                allow_basepoints,
                limits: limits.limits(),
            };
            let report = cmd_analyze(&input, &opts);
            if common.json {
                println!("{}", report.to_json(!no_timings));
            } else {
                print!("{}", render_analysis(&report, !no_timings));
            }
            Ok(report.exit_code())
        }
        Cmd::Betti { common, bx, limits } => {
            let input = read_input(&common.file)?;
            let bx = to_box(&bx)
                .or(input.betti_box)
                .ok_or_else(|| CliError::Io("no box given (--box M N or a `box:` line)".into()))?;
            let r = cmd_betti(&input, bx, &limits.limits())?;
            if common.json {
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!("coefficient bidegrees: {:?}", r.generators);
                println!("shifts: {}", r.display);
            }
            Ok(0)
        }
        Cmd::Random { a, b, mode, seed } => {
            print!("{}", cmd_random(a, b, mode, seed)?.render());
            Ok(0)
        }
        Cmd::Verify { common, equation } => {
            let input = read_input(&common.file)?;
            let r = cmd_verify(&input, &equation)?;
            if common.json {
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!("F = {} (degree {})", r.equation, r.degree);
                println!("vanishes on the surface: {}", r.vanishes);
                println!("degree divides 2ab: {}", r.degree_divides);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
