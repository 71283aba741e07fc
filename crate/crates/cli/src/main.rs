use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand};
use neron_cli::{process, Diagnostic, Format, Kind, Overrides, Report};

#[derive(Parser)]
#[command(name = "neron", version, about = "Component groups of Néron models from combinatorial data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; defaults to the document's option, then text
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Treat warnings as errors
    #[arg(long, global = true)]
    strict: bool,
    /// Skip the invariants oracle and run the exact-sequence pipeline only
    #[arg(long, global = true)]
    no_oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobian of a curve, from its special fibre
    Jacobian {
        /// Input documents; `-` reads standard input
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Torus, from its character lattice
    Torus {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Semi-stable abelian variety, from uniformization data
    Semistable {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
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

fn handle(path: &PathBuf, kind: Kind, flags: &Overrides) -> (Report, Format) {
    match read(path) {
        Ok(text) => process(&text, kind, flags),
        Err(e) => {
            let mut report = Report::new(kind);
            report.errors.push(Diagnostic::new("IO", format!("{}: {e}", path.display())));
            (report, flags.format.unwrap_or_default())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Overrides { format: cli.format, strict: cli.strict, no_oracle: cli.no_oracle };
    let (kind, files) = match &cli.command {
        Command::Jacobian { files } => (Kind::Jacobian, files),
        Command::Torus { files } => (Kind::Torus, files),
        Command::Semistable { files } => (Kind::Semistable, files),
    };
    let results: Vec<(Report, Format)> = thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|p| s.spawn(|| handle(p, kind, &flags))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut code = 0;
    for (path, (report, format)) in files.iter().zip(&results) {
        if files.len() > 1 && *format == Format::Text {
            println!("== {}", path.display());
        }
        match format {
            Format::Json => println!("{}", report.to_json()),
            Format::Text => print!("{}", report.to_text()),
        }
        code = code.max(report.exit_code());
    }
    ExitCode::from(code)
}
