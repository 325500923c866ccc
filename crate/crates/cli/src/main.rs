use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use motivic::Field;
use motivic_cli::{parse, run_text, Config};

#[derive(Parser)]
#[command(name = "motivic", version, about = "Run motivic workbench scripts")]
struct Cli {
    /// Field used when the script declares none: `Q`, `F2`, `F 3` or a prime.
    #[arg(long, env = "MOTIVIC_FIELD", global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Chain horizon for measures.
    #[arg(long, env = "MOTIVIC_HORIZON", global = true)]
    horizon: Option<usize>,
    /// Stability window for measures.
    #[arg(long, env = "MOTIVIC_WINDOW", global = true)]
    window: Option<usize>,
    /// Fat points in the default check battery (1 to 4).
    #[arg(long, env = "MOTIVIC_BATTERY_SIZE", global = true)]
    battery_size: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, env = "MOTIVIC_SEED", global = true)]
    seed: Option<u64>,
    /// Search-node cap for point enumeration.
    #[arg(long, env = "MOTIVIC_MAX_CANDIDATES", global = true)]
    max_candidates: Option<u64>,
    /// Truncation for simplicial declarations without `@`.
    #[arg(long, env = "MOTIVIC_SKELETAL_LEVEL", global = true)]
    skeletal_level: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a script (`-` reads stdin) and print its report.
    Run { script: PathBuf },
    /// Print a script in canonical form.
    Fmt { script: PathBuf },
}

fn parse_field(s: &str) -> Result<Field, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "Q" {
        return Ok(Field::Rationals);
    }
    let digits = t.strip_prefix('F').unwrap_or(&t);
    let p: u32 = digits.parse().map_err(|_| format!("not a field: `{s}`"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

fn read(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let d = Config::default();
    let config = Config {
        field: cli.field.unwrap_or(d.field),
        horizon: cli.horizon.unwrap_or(d.horizon),
        window: cli.window.unwrap_or(d.window),
        battery_size: cli.battery_size.unwrap_or(d.battery_size),
        seed: cli.seed.unwrap_or(d.seed),
        max_candidates: cli.max_candidates.unwrap_or(d.max_candidates),
        skeletal_level: cli.skeletal_level.unwrap_or(d.skeletal_level),
    };
    let (Command::Run { script } | Command::Fmt { script }) = &cli.command;
    let text = match read(script) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("motivic: cannot read {}: {e}", script.display());
            return ExitCode::from(2);
        }
    };
    match cli.command {
        Command::Run { .. } => {
            let report = run_text(&text, &config);
            print!("{report}");
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Fmt { .. } => match parse(&text) {
            Ok(s) => {
                print!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("motivic: {e}");
                ExitCode::from(3)
            }
        },
    }
}
