//! Command line front end for the game engine.
//!
//! Exit codes: 0 on success, 1 on semantic failure (check errors, open
//! games, failing law suites), 2 on usage or I/O problems. The environment
//! variable `PREGAME_CAP` overrides every enumeration cap with one value.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pregame::core::{equilibria, Caps};
use pregame::dsl::{self, elaborate, render_dot, DslError};
use pregame::laws;

#[derive(Parser)]
#[command(
    name = "pregame",
    version,
    about = "Build games compositionally, enumerate equilibria, verify the algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and typecheck a file, printing each game's interface.
    Check { file: PathBuf },
    /// Enumerate the equilibria of a closed game declared in a file.
    Equilibria {
        file: PathBuf,
        /// Name of the game declaration to solve.
        #[arg(long)]
        game: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the randomized law suites and report pass counts.
    Laws {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Iterations per suite; must be at least 1.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        iters: u32,
    },
    /// Render a game as a Graphviz DOT diagram.
    Render {
        file: PathBuf,
        /// Name of the game declaration to draw.
        #[arg(long)]
        game: String,
        /// Output path for the DOT text.
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct EquilibriaReport<'a> {
    game: &'a str,
    profiles: Vec<Vec<String>>,
    count: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match caps_from_env() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match cli.command {
        Command::Check { file } => cmd_check(&file),
        Command::Equilibria { file, game, format } => cmd_equilibria(&file, &game, format, &caps),
        Command::Laws { seed, iters } => cmd_laws(seed, iters, &caps),
        Command::Render { file, game, out } => cmd_render(&file, &game, &out),
    }
}

fn caps_from_env() -> Result<Caps, String> {
    match std::env::var("PREGAME_CAP") {
        Ok(v) => v
            .parse::<u64>()
            .map(Caps::uniform)
            .map_err(|_| format!("PREGAME_CAP must be an unsigned integer, got `{v}`")),
        Err(_) => Ok(Caps::default()),
    }
}

fn read_source(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn report_dsl_error(path: &Path, err: &DslError) {
    eprintln!("{}:{}: error: {}", path.display(), err.span, err.message);
}

fn cmd_check(file: &Path) -> ExitCode {
    let source = match read_source(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match dsl::check(&source) {
        Ok(program) => {
            for (name, body) in &program.games {
                println!("{name} : {} → {}", body.domain, body.codomain);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            report_dsl_error(file, &err);
            ExitCode::from(1)
        }
    }
}

fn cmd_equilibria(file: &Path, game: &str, format: Format, caps: &Caps) -> ExitCode {
    let source = match read_source(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let program = match dsl::check(&source) {
        Ok(p) => p,
        Err(err) => {
            report_dsl_error(file, &err);
            return ExitCode::from(1);
        }
    };
    let built = match elaborate(&program, game, caps) {
        Ok(g) => g,
        Err(err) => {
            report_dsl_error(file, &err);
            return ExitCode::from(1);
        }
    };
    let found = match equilibria(&built, caps) {
        Ok(e) => e,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    };
    let profiles: Vec<Vec<String>> = found.iter().map(|s| built.profile_labels(s)).collect();
    match format {
        Format::Text => {
            for p in &profiles {
                println!("({})", p.join(", "));
            }
        }
        Format::Json => {
            let report = EquilibriaReport {
                game,
                count: profiles.len(),
                profiles,
            };
            println!(
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            );
        }
    }
    ExitCode::SUCCESS
}

fn cmd_laws(seed: u64, iters: u32, caps: &Caps) -> ExitCode {
    println!("laws: seed={seed} iters={iters}");
    let outcomes = laws::run_all(seed, iters, caps);
    let mut all_ok = true;
    for o in &outcomes {
        println!(
            "{:<14} : {}/{} passed",
            o.name,
            o.passed,
            o.passed + o.failed
        );
        if let Some(witness) = &o.counterexample {
            println!("  counterexample: {witness}");
        }
        all_ok &= o.all_passed();
    }
    if all_ok {
        println!("all suites passed");
        ExitCode::SUCCESS
    } else {
        println!("law failures found");
        ExitCode::from(1)
    }
}

fn cmd_render(file: &Path, game: &str, out: &Path) -> ExitCode {
    let source = match read_source(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let program = match dsl::check(&source) {
        Ok(p) => p,
        Err(err) => {
            report_dsl_error(file, &err);
            return ExitCode::from(1);
        }
    };
    let dot = match render_dot(&program, game) {
        Ok(d) => d,
        Err(err) => {
            report_dsl_error(file, &err);
            return ExitCode::from(1);
        }
    };
    if let Err(e) = fs::write(out, dot) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
