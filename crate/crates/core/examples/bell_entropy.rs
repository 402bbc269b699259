//! Entanglement of the partially correlated states over a coarse (alpha, beta)
//! grid, computed numerically and from the closed-form P-parameter.

use cvent::{
    converge, entanglement_from_p, make_bell, reduce_gaussian, ConvergeOptions, PParameter,
    Subsystem,
};

fn main() -> cvent::Result<()> {
    let opts = ConvergeOptions::default();
    println!(
        "{:>6} {:>6} {:>12} {:>12} {:>6}",
        "alpha", "beta", "numeric", "closed", "side"
    );
    for alpha in [0.25, 0.5, 1.0, 2.0] {
        for beta in [0.25, 0.5, 1.0, 2.0] {
            let state = make_bell(alpha, beta, 0.0, 0.0, 1.0)?;
            let result = converge(&reduce_gaussian(&state, Subsystem::First), &opts)?;
            let closed = entanglement_from_p(PParameter::new(2.0 * alpha * alpha * beta * beta)?);
            println!(
                "{alpha:>6} {beta:>6} {:>12.8} {closed:>12.8} {:>6}",
                result.entropy_bits,
                result.grid.side()
            );
        }
    }
    Ok(())
}
