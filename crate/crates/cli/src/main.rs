use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use homgrow::{parse_field, suites, CmdOutput};

/// Homology growth of finite covers and van Kampen-style embedding
/// obstructions, with exact arithmetic throughout.
#[derive(Parser)]
#[command(name = "homgrow", version)]
struct Cli {
    /// Seed recorded in every report and used by randomized suites.
    #[arg(long, global = true, default_value_t = suites::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simplicial complex checks and transforms.
    Complex {
        #[command(subcommand)]
        op: ComplexOp,
    },
    /// Homology growth estimates, bounds and verifiers.
    Growth {
        #[command(subcommand)]
        op: GrowthOp,
    },
    /// Intersection-vector obstructions of immersed complexes.
    Vankampen {
        #[command(subcommand)]
        op: VankampenOp,
    },
    /// Replay the acceptance criteria suites.
    Verify {
        /// all | smalleigs | pinch | modpl2 | mv | appendixC
        suite: String,
        /// Override the trial count of randomized suites.
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ComplexOp {
    /// Flag and no-square checks.
    Check { file: PathBuf },
    /// Link of a simplex (emits a complex file).
    Link {
        file: PathBuf,
        /// Comma-separated vertex names.
        #[arg(long)]
        simplex: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full subcomplex on a vertex set.
    Full {
        file: PathBuf,
        #[arg(long)]
        vertices: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Barycentric subdivision.
    Bary {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Octahedralization, with the projection in comments.
    Octa {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GrowthOp {
    /// Closed-form center and error of the graph-product growth.
    Estimate {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Build the quotient cover and check the growth bound.
    VerifyBound {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "q")]
        field: String,
        /// Comma-separated divisors k_v; defaults to the full orders.
        #[arg(long)]
        divisors: Option<String>,
    },
    /// Observed bracket over connected covers up to a degree.
    Bracket {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "q")]
        field: String,
        /// Cover-spec file adding one explicit cover to the family.
        #[arg(long)]
        cover: Option<PathBuf>,
    },
    /// Per-cover Mayer-Vietoris inequalities along a vertex star.
    Mv {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "q")]
        field: String,
        /// Substring selecting the star vertex cell; defaults to the first.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Relative Betti number of the nerve of a subcomplex cover.
    Nerve {
        file: PathBuf,
        #[arg(long)]
        pieces: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Normalized Betti numbers of cyclic mapping-torus covers.
    Torus {
        file: PathBuf,
        #[arg(long, default_value = "1,2,4,8")]
        degrees: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "q")]
        field: String,
        /// Simplicial self-map as a:b,c:d pairs; identity if omitted.
        #[arg(long)]
        map: Option<String>,
    },
}

#[derive(Subcommand)]
enum VankampenOp {
    /// Mod-2 planarity obstruction of a graph.
    Obstruct {
        file: PathBuf,
        #[arg(long)]
        coords: Option<PathBuf>,
    },
    /// Solve the finger-move cancellation system.
    Solve {
        file: PathBuf,
        /// z | f2
        #[arg(long, default_value = "f2")]
        ring: String,
        #[arg(long)]
        coords: Option<PathBuf>,
    },
    /// Perturbed octahedral immersion and the embedding reduction.
    OctaReduce { file: PathBuf },
}

fn run(cli: Cli) -> anyhow::Result<CmdOutput> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Complex { op } => match op {
            ComplexOp::Check { file } => homgrow::complex_check(&file, seed),
            ComplexOp::Link { file, simplex, out } => {
                homgrow::complex_transform("link", &file, Some(&simplex), None, out.as_deref())
            }
            ComplexOp::Full {
                file,
                vertices,
                out,
            } => homgrow::complex_transform("full", &file, None, Some(&vertices), out.as_deref()),
            ComplexOp::Bary { file, out } => {
                homgrow::complex_transform("bary", &file, None, None, out.as_deref())
            }
            ComplexOp::Octa { file, out } => {
                homgrow::complex_transform("octa", &file, None, None, out.as_deref())
            }
        },
        Cmd::Growth { op } => match op {
            GrowthOp::Estimate { file, k, field } => {
                homgrow::growth_estimate(&file, k, parse_field(&field)?, seed)
            }
            GrowthOp::VerifyBound {
                file,
                k,
                field,
                divisors,
            } => homgrow::growth_verify_bound(
                &file,
                k,
                parse_field(&field)?,
                divisors.as_deref(),
                seed,
            ),
            GrowthOp::Bracket {
                file,
                max_degree,
                k,
                field,
                cover,
            } => homgrow::growth_bracket_cmd(
                &file,
                max_degree,
                k,
                parse_field(&field)?,
                cover.as_deref(),
                seed,
            ),
            GrowthOp::Mv {
                file,
                k,
                field,
                vertex,
            } => homgrow::growth_mv(&file, k, parse_field(&field)?, vertex.as_deref(), seed),
            GrowthOp::Nerve {
                file,
                pieces,
                k,
                field,
            } => homgrow::growth_nerve(&file, &pieces, k, parse_field(&field)?, seed),
            GrowthOp::Torus {
                file,
                degrees,
                k,
                field,
                map,
            } => homgrow::growth_torus(
                &file,
                &degrees,
                k,
                parse_field(&field)?,
                map.as_deref(),
                seed,
            ),
        },
        Cmd::Vankampen { op } => match op {
            VankampenOp::Obstruct { file, coords } => {
                homgrow::vankampen_obstruct(&file, coords.as_deref(), seed)
            }
            VankampenOp::Solve { file, ring, coords } => {
                homgrow::vankampen_solve_cmd(&file, &ring, coords.as_deref(), seed)
            }
            VankampenOp::OctaReduce { file } => homgrow::vankampen_octa_reduce(&file, seed),
        },
        Cmd::Verify { suite, trials } => homgrow::verify(&suite, seed, trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{}", output.text);
            if output.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
