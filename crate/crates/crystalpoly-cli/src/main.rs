use clap::{Args, Parser, Subcommand, ValueEnum};
use crystalpoly::bounds;
use crystalpoly::construct::Family;
use crystalpoly::enumerate;
use crystalpoly::io::{self, Format, Palette, Parsed, RenderSpec};
use crystalpoly::topology::{efficiency_of, summarize};
use crystalpoly::transform::witness;
use crystalpoly::{Error, Polyomino};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Largest census run without `--deep`.
const SHALLOW_MAX_N: usize = 14;

#[derive(Parser)]
#[command(name = "crystalpoly", version, about = "Polyominoes with the fewest tiles for a given number of holes")]
struct Cli {
    /// Worker threads for enumeration (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member or a witness with a given hole count
    Gen(GenArgs),
    /// Summarize a grid file and check whether it is crystallized
    Verify { file: PathBuf },
    /// Print g(h) as JSON
    Table {
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Count free polyominoes by tiles and holes
    Enum {
        #[arg(long)]
        max_n: usize,
        /// Allow sizes above 14 (n = 17 takes several minutes per core)
        #[arg(long)]
        deep: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Dismantle the governing threshold crystal down to h holes
    Dismantle {
        #[arg(long)]
        holes: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Render a grid file
    Render {
        file: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, requires = "k", conflicts_with = "holes")]
    family: Option<String>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    holes: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutFormat::Ascii)]
    format: OutFormat,
    #[arg(long, default_value_t = 16)]
    cell_size: u32,
    /// Draw the dual graph and hole graph (SVG only)
    #[arg(long)]
    overlay: bool,
    /// TOML file with tile, hole, background and annotation colours
    #[arg(long)]
    palette: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Ascii,
    Svg,
}

/// Failure classes and their exit codes.
enum Failure {
    /// Bad input or arguments: 2.
    Usage(String),
    /// A well-formed input failed verification: 1.
    Verification,
    /// An invariant of the library broke: 3.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalInconsistency(_) | Error::NoStepFound { .. } => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Gen(args) => gen(args),
        Command::Verify { file } => verify(&file),
        Command::Table { from, to } => {
            if from > to || from == 0 {
                return Err(Failure::Usage(format!("need 1 <= from <= to, got {from}..{to}")));
            }
            println!("{}", to_json(&bounds::table_rows(from, to)?)?);
            Ok(())
        }
        Command::Enum { max_n, deep, json } => census(max_n, deep, json.as_deref()),
        Command::Dismantle { holes, trace } => {
            if holes == 0 {
                return Err(Failure::Usage("--holes must be at least 1".into()));
            }
            let (p, t) = witness(holes)?;
            print!("{}", io::to_text(&p));
            if let Some(path) = trace {
                write(&path, &to_json(&t)?)?;
            }
            Ok(())
        }
        Command::Render { file, out } => {
            let p = read_polyomino(&file)?;
            print!("{}", io::render(&p, &render_spec(&out)?));
            Ok(())
        }
    }
}

fn gen(args: GenArgs) -> Outcome {
    let p = match (args.family, args.k, args.holes) {
        (Some(f), Some(k), None) => f.parse::<Family>()?.generate(k)?,
        (None, None, Some(h)) if h > 0 => witness(h)?.0,
        _ => return Err(Failure::Usage("give either --family with --k, or --holes >= 1".into())),
    };
    print!("{}", io::render(&p, &render_spec(&args.out)?));
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    h: usize,
    b: usize,
    p: usize,
    p_o: usize,
    p_h: usize,
    hole_areas: Vec<usize>,
    efficient: bool,
    reasons: Vec<String>,
    g: Option<u64>,
    crystallized: bool,
}

fn verify(file: &Path) -> Outcome {
    let p = read_polyomino(file)?;
    let s = summarize(&p);
    let eff = efficiency_of(&s)?;
    let g = (s.h > 0).then(|| bounds::g(s.h as u64)).transpose()?.map(|e| e.g);
    let crystallized = g == Some(s.n as u64);
    let report = VerifyReport {
        n: s.n,
        h: s.h,
        b: s.b,
        p: s.p,
        p_o: s.p_o,
        p_h: s.p_h,
        hole_areas: s.hole_areas.clone(),
        efficient: eff.efficient,
        reasons: eff.reasons.iter().map(|r| r.to_string()).collect(),
        g,
        crystallized,
    };
    println!("{}", to_json(&report)?);
    if crystallized {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn census(max_n: usize, deep: bool, json: Option<&Path>) -> Outcome {
    if max_n == 0 {
        return Err(Failure::Usage("--max-n must be at least 1".into()));
    }
    if max_n > SHALLOW_MAX_N && !deep {
        return Err(Failure::Usage(format!("--max-n above {SHALLOW_MAX_N} needs --deep")));
    }
    let t = enumerate::census(max_n)?;
    println!("{:>3} {:>3} {:>12}", "n", "h", "free");
    for ((n, h), c) in t.rows() {
        println!("{n:>3} {h:>3} {c:>12}");
    }
    for (h, n) in t.min_n_for_h().into_iter().filter(|&(h, _)| h > 0) {
        println!("g({h}) = {n}, {} crystallized", t.crystal_counts()[&h]);
    }
    if let Some(path) = json {
        write(path, &to_json(&t)?)?;
    }
    Ok(())
}

fn read_polyomino(file: &Path) -> Result<Polyomino, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    match io::parse_grid(&text)? {
        Parsed::Polyomino(p) => Ok(p),
        Parsed::Arrangement(_) => Err(Failure::Usage(format!("{}: undetermined spaces ('?') are not allowed here", file.display()))),
    }
}

fn render_spec(out: &OutputArgs) -> Result<RenderSpec, Failure> {
    let palette = match &out.palette {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            toml::from_str::<Palette>(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => Palette::default(),
    };
    let format = match out.format {
        OutFormat::Ascii => Format::Ascii,
        OutFormat::Svg => Format::Svg,
    };
    Ok(RenderSpec { format, cell_size: out.cell_size, palette, overlay: out.overlay })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}
