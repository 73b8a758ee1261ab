mod commands;
mod parse;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{CliError, CommandResult, Outcome, Status};
use riemann_aux::evaluate::Method;
use riemann_aux::zeros::Rectangle;
use riemann_aux::Complex64;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Riemann's auxiliary function R(s): evaluation, expansion, bounds, regions, audit, zero scans.
#[derive(Parser, Debug)]
#[command(name = "raux", version)]
struct Cli {
    /// Requested accuracy of evaluations.
    #[arg(long, global = true, default_value_t = 1e-12, value_parser = parse::positive)]
    tol: f64,
    /// Region parameter file (key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print a {status, payload, diagnostics} JSON document.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file; for `scan`, the prefix of PREFIX.jsonl and PREFIX.csv.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Oracle,
    Expansion,
    Auto,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Expansion => Method::Expansion,
            MethodArg::Auto => Method::Auto,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate R(s).
    Eval {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::complex)]
        s: Complex64,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Dump every term of the saddle-point expansion.
    Expand {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::complex)]
        s: Complex64,
        /// Summation index (default m = floor(eta1 + eta2)).
        #[arg(long)]
        k: Option<u64>,
    },
    /// Evaluate the remainder and U bounds.
    Bound {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::complex)]
        s: Complex64,
    },
    /// Classify a point, or a grid as CSV.
    Region {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::complex, conflicts_with = "grid", required_unless_present = "grid")]
        s: Option<Complex64>,
        /// Two axes: sigma=start:end:step t=start:end:step
        #[arg(long, num_args = 2, allow_hyphen_values = true, value_parser = parse::axis)]
        grid: Option<Vec<(String, parse::Axis)>>,
    },
    /// Recompute the published numeric constants.
    Audit {
        /// Glob over item names.
        #[arg(long)]
        filter: Option<String>,
        /// Rerun with doubled grids and tighter quadrature.
        #[arg(long)]
        doubled: bool,
    },
    /// Count and locate zeros in a rectangle.
    Scan {
        /// sigma_min,sigma_max,t_min,t_max
        #[arg(long, allow_hyphen_values = true, value_parser = parse::rectangle)]
        rect: Rectangle,
        #[arg(long, default_value_t = 0.5, value_parser = parse::positive)]
        step: f64,
    },
}

fn grid_axes(axes: &[(String, parse::Axis)]) -> Result<(parse::Axis, parse::Axis), CliError> {
    let find = |name: &str| {
        axes.iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
            .ok_or_else(|| CliError::Usage(format!("--grid needs a {name}=start:end:step axis")))
    };
    Ok((find("sigma")?, find("t")?))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Eval { s, method } => commands::eval(*s, (*method).into(), cli.tol),
        Command::Expand { s, k } => commands::expand(*s, *k, cli.tol),
        Command::Bound { s } => commands::bound(*s),
        Command::Region { s: Some(s), .. } => commands::region_point(*s, config),
        Command::Region { grid: Some(axes), .. } => {
            let (sigma, t) = grid_axes(axes)?;
            commands::region_grid(sigma, t, config)
        }
        Command::Region { .. } => Err(CliError::Usage("region needs --s or --grid".into())),
        Command::Audit { filter, doubled } => commands::audit(filter.as_deref(), *doubled),
        Command::Scan { rect, step } => commands::scan(*rect, *step, cli.tol, cli.out.as_deref()),
    }
}

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    let writes_file = cli.out.is_some() && !matches!(cli.command, Command::Scan { .. });
    match &cli.out {
        Some(path) if writes_file => std::fs::write(path, body),
        _ => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, code) = match run(&cli) {
        Ok(out) => {
            let code = if out.failed { 1 } else { 0 };
            let status = if out.failed { Status::Error } else { Status::Ok };
            let text = out.text;
            (
                CommandResult {
                    status,
                    payload: out.payload,
                    diagnostics: out.diagnostics,
                },
                (code, Some(text)),
            )
        }
        Err(e) => (
            CommandResult {
                status: Status::Error,
                payload: serde_json::Value::Null,
                diagnostics: vec![e.message().to_string()],
            },
            (e.exit_code(), None),
        ),
    };
    let (code, text) = code;
    let body = if cli.json {
        let mut s = serde_json::to_string_pretty(&result).expect("serializable result");
        s.push('\n');
        Some(s)
    } else {
        text
    };
    if let Some(body) = body {
        if let Err(e) = emit(&cli, &body) {
            eprintln!("raux: cannot write output: {e}");
            return ExitCode::from(1);
        }
    }
    if !cli.json {
        for d in &result.diagnostics {
            eprintln!("raux: {d}");
        }
    }
    ExitCode::from(code)
}
