//! Two-mode squeezed states: the discretised spectrum against the geometric
//! number-basis distribution and the closed-form entropy.

use cvent::spectra::shannon_bits;
use cvent::{
    converge, make_squeezed, number_basis_weights, reduce_gaussian, squeezed_entanglement,
    ConvergeOptions, SqueezingParameter, Subsystem,
};

fn main() -> cvent::Result<()> {
    let opts = ConvergeOptions {
        tol_sigfigs: 7,
        ..ConvergeOptions::default()
    };
    for r in [0.3, 0.5, 1.0, 1.5] {
        let sq = SqueezingParameter::new(r)?;
        let result = converge(
            &reduce_gaussian(&make_squeezed(r)?, Subsystem::First),
            &opts,
        )?;
        let weights = number_basis_weights(sq, 200);
        let probs = result.spectrum.probabilities();
        println!(
            "r = {r}: E numeric {:.10}  closed {:.10}  number basis {:.10}",
            result.entropy_bits,
            squeezed_entanglement(sq),
            shannon_bits(&weights)
        );
        for (n, (p, w)) in probs.iter().zip(&weights).take(4).enumerate() {
            println!("    n = {n}: eigenvalue {p:.3e}  weight {w:.3e}");
        }
    }
    Ok(())
}
