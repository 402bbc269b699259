//! Write an entropy surface to CSV from a key=value sweep description.
//!
//! `cargo run --release --example sweep_to_csv -- cat_surface.csv`

use std::fs::File;
use std::io::BufWriter;

use cvent::cli::{parse_sweep_config, run_sweep, write_csv};

const CONFIG: &str = "\
family = cat
axis1 = d:0.2:2.5:24
axis2 = a0_sq:0:1:21
tolerance_sigfigs = 5
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse_sweep_config(CONFIG)?;
    let rows = run_sweep(&spec)?;
    match std::env::args().nth(1) {
        Some(path) => {
            write_csv(&rows, BufWriter::new(File::create(&path)?))?;
            println!("{} rows written to {path}", rows.len());
        }
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}
