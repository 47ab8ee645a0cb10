use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nashpoly_cli::{
    cmd_bound, cmd_census, cmd_enumerate, cmd_gen, cmd_lh, cmd_oracle, cmd_verify, GameSource, GenSpec, RunReport, Side,
};

#[derive(Parser)]
#[command(name = "nashpoly", version, about = "Equilibria of bimatrix games and stable-set bounds on simple polytopes")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for batch commands (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolytopeArg {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(Subcommand)]
enum Command {
    /// List all equilibria with their indices.
    Enumerate { game: PathBuf },
    /// Follow a Lemke-Howson path.
    Lh {
        game: PathBuf,
        /// Label to drop, in 1..=m+n.
        #[arg(long)]
        missing: usize,
        /// Ordinal of the starting equilibrium (0 is the artificial one).
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// Stable-set bound of a graph file, or of a game's polytope graph.
    Bound {
        input: PathBuf,
        /// Treat the input as a game and bound this polytope's graph.
        #[arg(long, value_enum)]
        polytope: Option<PolytopeArg>,
        /// Restrict to the facet with this label.
        #[arg(long)]
        facet: Option<usize>,
    },
    /// Census of combinatorial polytopes.
    Census {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Expected (V, b) table to diff against.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Run the checks for simple 4-polytopes with 9 facets.
        #[arg(long)]
        check_t49: bool,
    },
    /// Write a game file to standard output.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Support enumeration.
    Oracle {
        game: PathBuf,
        /// Try all support pairs and report degeneracy.
        #[arg(long)]
        strict: bool,
    },
    /// Run the full invariant suite.
    Verify {
        games: Vec<PathBuf>,
        /// Also verify `count` random games of this size, e.g. `5x5`.
        #[arg(long, value_parser = parse_size)]
        random: Option<(usize, usize)>,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// First seed of the random batch.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Coordination { n: usize },
    Random {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s.split_once('x').ok_or("expected MxN")?;
    let m = m.parse().map_err(|_| "bad M")?;
    let n = n.parse().map_err(|_| "bad N")?;
    if m == 0 || n == 0 {
        return Err("sizes must be positive".into());
    }
    Ok((m, n))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report: RunReport = match cli.command {
        Command::Enumerate { game } => cmd_enumerate(&game),
        Command::Lh { game, missing, start } => cmd_lh(&game, missing, start),
        Command::Bound { input, polytope, facet } => {
            let side = polytope.map(|p| match p {
                PolytopeArg::P => Side::P,
                PolytopeArg::Q => Side::Q,
            });
            cmd_bound(&input, side, facet)
        }
        Command::Census { files, golden, check_t49 } => cmd_census(&files, golden.as_deref(), check_t49, cli.jobs),
        Command::Gen { kind } => cmd_gen(match kind {
            GenKind::Coordination { n } => GenSpec::Coordination(n),
            GenKind::Random { m, n, seed } => GenSpec::Random { m, n, seed },
        }),
        Command::Oracle { game, strict } => cmd_oracle(&game, strict),
        Command::Verify { games, random, count, seed } => {
            let mut sources: Vec<GameSource> = games.into_iter().map(GameSource::File).collect();
            if let Some((m, n)) = random {
                sources.extend((seed..seed + count).map(|s| GameSource::Generated(GenSpec::Random { m, n, seed: s })));
            }
            if sources.is_empty() {
                eprintln!("error: no games to verify");
                return ExitCode::from(2);
            }
            cmd_verify(&sources, cli.jobs)
        }
    };
    if cli.json {
        println!("{}", report.to_json());
    } else if report.exit_code != 0 && report.results.get("error").is_some() {
        eprint!("{}", report.text);
    } else {
        print!("{}", report.text);
    }
    eprintln!("# {} in {} ms, inputs {}", report.command, report.elapsed_ms, &report.inputs_digest[..16]);
    ExitCode::from(report.exit_code as u8)
}
