//! Swap two weakly entangled cat states and map where the outcome is more
//! entangled than the input, for sharp and blurred measurements.

use cvent::{purification_scan, ConvergeOptions};
use num_complex::Complex64;

fn main() -> cvent::Result<()> {
    let a0 = Complex64::new(0.3f64.sqrt(), 0.0);
    let grid: Vec<f64> = (0..21).map(|i| -2.0 + 0.2 * i as f64).collect();
    for mu in [0.0, 0.5] {
        let reports = purification_scan(a0, 1.0, mu, &grid, &grid, &ConvergeOptions::default())?;
        let purified = reports.iter().filter(|r| r.purified()).count();
        let best = reports
            .iter()
            .max_by(|x, y| x.e_swapped.total_cmp(&y.e_swapped))
            .expect("nonempty scan");
        println!(
            "mu = {mu}: initial E = {:.4}, purified cells {purified}/{}, best E = {:.6} at (a, b) = ({:.1}, {:.1})",
            reports[0].e_initial,
            reports.len(),
            best.e_swapped,
            best.outcome.a,
            best.outcome.b
        );
        // coarse map of the gain, rows over a and columns over b
        for row in reports.chunks(grid.len()).step_by(4) {
            let line: String = row
                .iter()
                .step_by(2)
                .map(|r| if r.gain > 0.0 { '+' } else { '.' })
                .collect();
            println!("    {line}");
        }
    }
    Ok(())
}
