use std::io::Write;
use std::process::ExitCode;

use ilab::{parse_config, run, ParseError};

fn main() -> ExitCode {
    let (config, opts) = match parse_config(std::env::args_os()) {
        Ok(parsed) => parsed,
        Err(ParseError::Display(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(ParseError::Usage(text)) => {
            eprint!("{text}");
            if !text.ends_with('\n') {
                eprintln!();
            }
            return ExitCode::from(1);
        }
    };
    match run(&config, &opts) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.render(config.format).as_bytes());
            let _ = out.flush();
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("{}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
