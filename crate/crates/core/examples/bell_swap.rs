//! Entanglement swapping of partially correlated states. The swapped pair is
//! never more entangled than either input, and a finite measurement width
//! makes it worse.

use cvent::{bell_swap_report, swap_p, ConvergeOptions, SwapOutcome};

fn main() -> cvent::Result<()> {
    let opts = ConvergeOptions::default();
    println!(
        "{:>5} {:>5} {:>5} {:>10} {:>10} {:>10} {:>10}",
        "alpha", "beta", "mu", "E(alpha)", "E(beta)", "E(swap)", "P(swap)"
    );
    for (alpha, beta) in [(0.5, 0.5), (0.5, 1.5), (1.0, 1.0), (2.0, 0.7)] {
        for mu in [0.0, 0.5] {
            let r = bell_swap_report(
                alpha,
                beta,
                0.0,
                SwapOutcome::new(0.4, -0.3, mu)?,
                1.0,
                &opts,
            )?;
            let p = if mu == 0.0 {
                format!("{:.4}", swap_p(alpha, beta)?.value())
            } else {
                "-".into()
            };
            println!(
                "{alpha:>5} {beta:>5} {mu:>5} {:>10.6} {:>10.6} {:>10.6} {p:>10}",
                r.e_initial_alpha, r.e_initial_beta, r.e_swapped
            );
        }
    }
    Ok(())
}
