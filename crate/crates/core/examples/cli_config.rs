//! Drives the three batch commands from JSON configs in a scratch directory, as the
//! `spectra` binary would.

use std::fs;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("spectra-cli-example");
    fs::create_dir_all(&dir)?;
    let configs = [
        ("expand", r#"{"fixture": "F2", "eps": 0.05}"#),
        (
            "kernel-study",
            r#"{"study": "opnorm", "kernel": {"kind": "brownian", "R": 32}, "n": 200, "trials": 20}"#,
        ),
        (
            "bounds",
            r#"{"kernel": {"kind": "brownian"}, "n": 10000, "j_set": [1]}"#,
        ),
    ];
    for (cmd, body) in configs {
        let cfg = dir.join(format!("{cmd}.json"));
        fs::write(&cfg, body)?;
        let out = dir.join(cmd);
        let code = spectra::cli::run([
            "spectra",
            cmd,
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        println!("{cmd}: exit {code}");
        for entry in fs::read_dir(&out)? {
            println!("  {}", entry?.path().display());
        }
    }
    Ok(())
}
