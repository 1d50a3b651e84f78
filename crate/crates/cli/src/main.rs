use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gkz_cli::commands::{self, DEFAULT_GRADE, DEFAULT_RADIUS};
use gkz_cli::{CliError, Problem, RunReport};

#[derive(Parser, Debug)]
#[command(
    name = "gkz",
    version,
    about = "Series solutions of GKZ systems, verified exactly"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Directory for artifacts and report.txt.
    #[arg(long, global = true, default_value = "gkz-out")]
    out: PathBuf,
    /// Worker threads (0 lets rayon decide).
    #[arg(long, global = true, env = "GKZ_THREADS")]
    threads: Option<usize>,
    /// Cap on lattice points enumerated by any single box scan.
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Box radius R; overrides the problem file.
    #[arg(long, global = true)]
    radius: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a basis of the relation lattice.
    Lattice { file: PathBuf },
    /// Minimality verdict and support set of v.
    Support {
        file: PathBuf,
        /// Ignore up to two column indices, e.g. `--exclude 4` or `--exclude 0,2`.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<usize>,
    },
    /// Build F and the quasisolutions up to the given order, then verify.
    Solve {
        file: PathBuf,
        #[arg(long)]
        order: Option<u8>,
        /// Column indices for the quasisolutions (default: all).
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
    },
    /// Combine quasisolutions along l (and l') into a solution, then verify.
    Combine {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        l: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lp: Option<Vec<i64>>,
    },
    /// Lifted system, interior point check and minimality sweep.
    Ci { file: PathBuf },
    /// Mirror map for a column, with an integrality report.
    Mirror {
        file: PathBuf,
        /// `i,j`: set i (from 1) and point j (from 0).
        #[arg(long, value_delimiter = ',', num_args = 1)]
        index: Option<Vec<usize>>,
        #[arg(long)]
        grade: Option<i64>,
    },
}

fn load(file: &Path, g: &Global) -> Result<Problem, CliError> {
    let mut p = Problem::load(file)?;
    if let Some(cap) = g.max_terms {
        p.system = p.system.with_max_points(cap);
    }
    Ok(p)
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let g = &cli.global;
    let radius = |p: &Problem| g.radius.or(p.file.radius).unwrap_or(DEFAULT_RADIUS);
    match &cli.command {
        Command::Lattice { file } => commands::lattice(&load(file, g)?),
        Command::Support { file, exclude } => {
            let p = load(file, g)?;
            commands::support(&p, radius(&p), exclude)
        }
        Command::Solve {
            file,
            order,
            indices,
        } => {
            let p = load(file, g)?;
            let order = order.or(p.file.order).unwrap_or(0);
            commands::solve(&p, radius(&p), order, indices.as_deref())
        }
        Command::Combine { file, l, lp } => {
            let p = load(file, g)?;
            let l = match l {
                Some(l) => l.clone(),
                None => p
                    .file
                    .l()?
                    .ok_or_else(|| CliError::Input("combine needs `--l` or an `l` field".into()))?,
            };
            let lp = match lp {
                Some(lp) => Some(lp.clone()),
                None => p.file.lp()?,
            };
            commands::combine(&p, radius(&p), &l, lp.as_deref())
        }
        Command::Ci { file } => {
            let p = load(file, g)?;
            commands::ci(&p, radius(&p))
        }
        Command::Mirror { file, index, grade } => {
            let p = load(file, g)?;
            let index = match index.as_deref() {
                Some(&[i, j]) => (i, j),
                Some(_) => return Err(CliError::Input("`--index` takes `i,j`".into())),
                None => p.file.index.map(|[i, j]| (i, j)).ok_or_else(|| {
                    CliError::Input("mirror needs `--index` or an `index` field".into())
                })?,
            };
            let grade = grade.or(p.file.grade).unwrap_or(DEFAULT_GRADE);
            let start = g
                .radius
                .unwrap_or(gkz::ci::MirrorOptions::default().start_radius);
            commands::mirror(&p, index, grade, start, g.max_terms)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("gkz: {e}");
        }
    }
    let start = Instant::now();
    let outcome = run(&cli).and_then(|r| {
        r.write(&cli.global.out)?;
        Ok(r)
    });
    eprintln!("gkz: elapsed {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(r) => {
            print!("{}", r.render());
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "gkz: verification failed, see {}",
                    cli.global.out.join("report.txt").display()
                );
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("gkz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
