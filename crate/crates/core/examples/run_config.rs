//! Runs an experiment file the way the `minkowski-iter` binary does.
//!
//! ```text
//! cargo run --example run_config -- crates/core/configs/showcase_i2.json /tmp/out
//! ```

use std::path::PathBuf;

use minkowski_iter::experiment::{cmd_verify_all, ExperimentConfig};
use minkowski_iter::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let cfg = match args.next() {
        Some(p) => ExperimentConfig::load(&PathBuf::from(p))?,
        None => ExperimentConfig::default(),
    };
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    let outcome = cmd_verify_all(&cfg, &out)?;
    for c in &outcome.checks {
        println!("{} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
