//! Build a partially correlated state by applying the Fourier and
//! controlled-NOT gates on a grid, and compare with the closed form.

use cvent::{apply_entangler_grid, make_bell, Direction, GridWavefunction};
use num_complex::Complex64;

fn main() -> cvent::Result<()> {
    let (alpha, beta, sigma) = (1.2, 0.9, 0.9);
    let (n, delta) = (150, 0.05);
    let product = move |x: f64, y: f64| {
        Complex64::new(
            (-(x / (alpha * sigma)).powi(2) - (y / (beta * sigma)).powi(2)).exp(),
            0.0,
        )
    };
    let input = GridWavefunction::sample(&product, n, delta)?;
    let entangled = apply_entangler_grid(&input, sigma, Direction::Forward)?;
    let closed = GridWavefunction::sample(&make_bell(alpha, beta, 0.0, 0.0, sigma)?, n, delta)?
        .scaled(Complex64::new(alpha, 0.0));
    println!("grid side {}, spacing {delta}", input.side());
    println!(
        "max |grid gates - closed form| = {:.3e}",
        entangled.max_abs_diff(&closed)
    );

    let undone = apply_entangler_grid(&entangled, sigma, Direction::Inverse)?;
    println!(
        "max |inverse(forward(psi)) - psi| = {:.3e}",
        undone.max_abs_diff(&input)
    );
    Ok(())
}
