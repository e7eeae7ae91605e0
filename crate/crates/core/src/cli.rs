//! Command-line front end. `run` takes argv and writers so the binary and the
//! tests drive the same code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cactus::{self, build_topology, populate, verify_fiber};
use crate::detgame::{cactus_game, multiplexor_game, run_game, GameState};
use crate::exact::Rational;
use crate::propagation::{self, left_chain, render_tables, right_chain};

#[derive(Debug, Parser)]
#[command(name = "fibernet", version, about = "Exact verification of a 3-to-1 unrecoverable resistor network")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the unpopulated cactus as network JSON.
    Topology {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the star-only network populated at x.
    Populate {
        #[arg(long, value_parser = parse_positive)]
        x: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Show both propagation chains.
    Chains {
        /// Render the trace tables.
        #[arg(long)]
        table: bool,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4", value_parser = parse_positive)]
        xs: Vec<Rational>,
    },
    /// Print the conservation polynomial, its rational roots and Sturm count.
    Cubic,
    /// Populate, solve auxiliary edges and check the responses coincide.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4", value_parser = parse_positive)]
        xs: Vec<Rational>,
        #[arg(long, default_value = "1", value_parser = parse_positive)]
        slack: Rational,
        /// Write report.json, response.csv and one network file per x here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Play the orange-edge elimination game.
    Game {
        #[arg(long)]
        promote: bool,
        #[arg(long, value_enum, default_value_t = GameTarget::Both)]
        target: GameTarget,
    },
    /// Print the certified arity of the instance.
    Arity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameTarget {
    Multiplexor,
    Cactus,
    Both,
}

fn parse_positive(s: &str) -> Result<Rational, String> {
    let r: Rational = s.parse().map_err(|e| format!("{e}"))?;
    if !r.is_positive() {
        return Err(format!("{s} must be a positive rational"));
    }
    Ok(r)
}

type CliResult = Result<(), String>;

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Topology { out: path } => {
            let doc = build_topology().skeleton_json();
            emit(out, path.as_deref(), &pretty(&doc))
        }
        Command::Populate { x, out: path } => {
            let n = populate(&x).map_err(|e| format!("populate x = {x}: {e}"))?;
            emit(out, path.as_deref(), &(n.to_json_string() + "\n"))
        }
        Command::Chains { table, xs } => chains(out, table, &xs),
        Command::Cubic => cubic(out),
        Command::Verify {
            xs,
            slack,
            out_dir,
            format,
        } => verify(out, &xs, &slack, out_dir.as_deref(), format),
        Command::Game { promote, target } => game(out, promote, target),
        Command::Arity => {
            let k = cactus::arity();
            writeln!(out, "{k}").map_err(io)?;
            if k == 3 {
                Ok(())
            } else {
                Err(format!("expected arity 3, certified {k}"))
            }
        }
    }
}

fn io(e: std::io::Error) -> String {
    e.to_string()
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

fn chains(out: &mut dyn Write, table: bool, xs: &[Rational]) -> CliResult {
    if table {
        let text = render_tables(xs).map_err(|e| e.to_string())?;
        return out.write_all(text.as_bytes()).map_err(io);
    }
    for chain in [left_chain(), right_chain()] {
        writeln!(out, "{} loop:", chain.name).map_err(io)?;
        for (i, step) in chain.steps.iter().enumerate() {
            writeln!(out, "  step {i}: {step}").map_err(io)?;
        }
        writeln!(out, "  closed form: {}", chain.closed_form()).map_err(io)?;
    }
    Ok(())
}

fn cubic(out: &mut dyn Write) -> CliResult {
    let cert = propagation::certify(&left_chain(), &right_chain()).map_err(|e| e.to_string())?;
    let roots: Vec<String> = cert.rational_roots.iter().map(Rational::to_string).collect();
    writeln!(
        out,
        "{}; rational roots {{{}}}; real roots {}",
        cert.polynomial,
        roots.join(","),
        cert.real_root_count
    )
    .map_err(io)
}

fn verify(
    out: &mut dyn Write,
    xs: &[Rational],
    slack: &Rational,
    out_dir: Option<&Path>,
    format: Format,
) -> CliResult {
    let report = verify_fiber(xs, slack).map_err(|e| e.to_string())?;
    let json = pretty(&report.to_json());
    let csv = report.common_response.to_csv();
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        let write = |name: String, text: &str| {
            let p = dir.join(name);
            fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))
        };
        write("report.json".into(), &json)?;
        write("response.csv".into(), &csv)?;
        for (x, n) in report.parameters.iter().zip(&report.networks) {
            let tag = x.to_string().replace('/', "_");
            write(format!("network_x{tag}.json"), &(n.to_json_string() + "\n"))?;
        }
    }
    match format {
        Format::Json => out.write_all(json.as_bytes()).map_err(io),
        Format::Csv => out.write_all(csv.as_bytes()).map_err(io),
        Format::Text => {
            let xs: Vec<String> = report.parameters.iter().map(Rational::to_string).collect();
            writeln!(out, "parameters: {}", xs.join(", ")).map_err(io)?;
            for (x, sol) in report.parameters.iter().zip(&report.auxiliary_solution) {
                let edges: Vec<String> = sol.iter().map(|((a, b), c)| format!("{a}-{b}={c}")).collect();
                writeln!(out, "auxiliary at x = {x}: {}", edges.join(" ")).map_err(io)?;
            }
            writeln!(out, "responses exactly equal: yes ({0}x{0})", report.common_response.dim()).map_err(io)?;
            writeln!(out, "arity: {}", report.arity).map_err(io)
        }
    }
}

fn game(out: &mut dyn Write, promote: bool, target: GameTarget) -> CliResult {
    let mut games: Vec<(&str, GameState)> = Vec::new();
    if target != GameTarget::Cactus {
        games.push(("multiplexor", multiplexor_game()));
    }
    if target != GameTarget::Multiplexor {
        games.push(("cactus", cactus_game(&build_topology())));
    }
    let mut failed = Vec::new();
    for (name, start) in games {
        let end = run_game(&start, promote);
        let order: Vec<String> = end.removed.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        writeln!(out, "{name}: removal order {}", order.join(" ")).map_err(io)?;
        if end.all_orange_removed() {
            writeln!(out, "{name}: PASS all orange edges removed").map_err(io)?;
        } else {
            let left: Vec<String> = end.orange.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            writeln!(out, "{name}: FAIL all orange edges removed (remaining {})", left.join(" ")).map_err(io)?;
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(format!("orange edges remain in {}", failed.join(", ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fibernet").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cubic_line() {
        let (code, out, _) = run_capture(&["cubic"]);
        assert_eq!(code, 0);
        assert_eq!(out, "x^3 - 9x^2 + 26x - 24; rational roots {2,3,4}; real roots 3\n");
    }

    #[test]
    fn arity_prints_three() {
        assert_eq!(run_capture(&["arity"]), (0, "3\n".into(), String::new()));
    }

    #[test]
    fn populate_zero_is_rejected() {
        let (code, _, err) = run_capture(&["populate", "--x", "0"]);
        assert_ne!(code, 0);
        assert!(err.contains("positive"), "{err}");
    }

    #[test]
    fn populate_pole_reports_step() {
        let (code, _, err) = run_capture(&["populate", "--x", "5"]);
        assert_eq!(code, 1);
        assert!(err.contains("pole at step 5"), "{err}");
    }

    #[test]
    fn verify_off_fiber_fails() {
        let (code, _, err) = run_capture(&["verify", "--xs", "2,7/2"]);
        assert_eq!(code, 1);
        assert!(err.contains("infeasible fiber"), "{err}");
        assert!(err.contains("(13, 14)"), "{err}");
    }

    #[test]
    fn game_passes() {
        let (code, out, _) = run_capture(&["game"]);
        assert_eq!(code, 0);
        assert_eq!(out.matches("PASS all orange edges removed").count(), 2);
    }
}
