use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use bmv_cli::args::Cli;
use bmv_cli::error::Status;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("BMV_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    match bmv_cli::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let text = out.summary.as_deref().map(|s| format!("{s}\n"));
            let shown = match (&text, cli_has_out(&cli)) {
                (Some(s), true) => s.clone(),
                (Some(s), false) => {
                    let _ = writeln!(std::io::stderr(), "{}", s.trim_end());
                    out.report.clone()
                }
                (None, _) => out.report.clone(),
            };
            let _ = stdout.write_all(shown.as_bytes());
            if let Status::CheckFailed(why) = &out.status {
                eprintln!("check failed: {why}");
            }
            ExitCode::from(out.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn cli_has_out(cli: &Cli) -> bool {
    use bmv_cli::args::Command::*;
    match &cli.command {
        Coeffs(a) => a.out.is_some(),
        VerifyLemma1(a) => a.out.is_some(),
        ProbeCm(a) => a.out.is_some(),
        Search(a) => a.out.is_some(),
        OracleDiff(a) => a.out.is_some(),
        Gen(_) => false,
    }
}
