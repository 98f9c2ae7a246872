use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = fermat_kit::cli::run(std::env::args_os());
    let text = match report.body.get("help").and_then(|h| h.as_str()) {
        Some(help) => help.to_string(),
        None => serde_json::to_string_pretty(&report.body).expect("reports serialize") + "\n",
    };
    // a closed pipe downstream is not an error of ours
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(report.code as u8)
}
