//! Writes a synthetic study (posts, labels, lexicon, indicators and a run
//! config) for trying the CLI.
//!
//! `cargo run --example demo_study -- <dir> [seed]`

#[path = "../tests/common/mod.rs"]
mod common;

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = std::path::PathBuf::from(args.next().unwrap_or_else(|| "demo-study".into()));
    let seed = args.next().map(|s| s.parse().expect("integer seed")).unwrap_or(1);
    let config = common::write_study(&dir, seed, "");
    println!("{}", config.display());
}
