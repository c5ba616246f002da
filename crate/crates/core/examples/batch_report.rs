//! Drive the command line in-process and persist json-lines records.
//!
//! ```text
//! cargo run --example batch_report -- /tmp/records.jsonl
//! ```

use std::path::PathBuf;

use quadclass::report::{run_command, sidecar_path};

fn main() {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("quadclass-records.jsonl"));
    let out_str = out.to_string_lossy().into_owned();
    for cmd in [
        vec!["verify-family", "B", "--from", "1", "--to", "10"],
        vec!["verify-family", "A", "--from", "1", "--to", "3"],
        vec!["classnumber", "--radicand", "229"],
        vec!["torsion", "--curve", "E2"],
    ] {
        let mut argv = vec!["quadclass", "--no-timestamps", "--out", &out_str];
        argv.extend(cmd.iter().copied());
        let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
        let outcome = run_command(argv, &mut stdout, &mut stderr);
        println!("{:<40} exit {} ({} records)", cmd.join(" "), outcome.status.code(), outcome.records.len());
    }
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    println!("{}: {} records", out.display(), text.lines().count());
    println!("{}: kernel cache", sidecar_path(&out).display());
}
