//! Power sums of the eigenvalues against traces of kernel powers computed by
//! quadrature, for a Gaussian and a cat kernel.

use cvent::{
    cat_amplitudes, converge, make_bell, make_cat, reduce_gaussian, reduce_mixture, trace_moment,
    ConvergeOptions, DensityKernel, Subsystem,
};

fn show(name: &str, kernel: &DensityKernel) -> cvent::Result<()> {
    let result = converge(kernel, &ConvergeOptions::default())?;
    println!(
        "{name}: analytic trace {:.10}",
        kernel.trace_analytic().unwrap_or(f64::NAN)
    );
    for power in 1..=3 {
        let sum = result.spectrum.moment(power);
        let quad = trace_moment(kernel, power, kernel.window(), 150)?;
        println!("    n = {power}: sum lambda^n {sum:.12}  Tr rho^n {quad:.12}");
    }
    Ok(())
}

fn main() -> cvent::Result<()> {
    show(
        "bell(0.8, 1.1)",
        &reduce_gaussian(&make_bell(0.8, 1.1, 0.5, 0.2, 1.0)?, Subsystem::First),
    )?;
    let (a0, a1) = cat_amplitudes(0.3)?;
    show(
        "cat(0.3, d = 1)",
        &reduce_mixture(&make_cat(a0, a1, 1.0)?, Subsystem::First)?,
    )?;
    Ok(())
}
