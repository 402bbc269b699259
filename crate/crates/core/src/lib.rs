//! Entanglement of continuous-variable bipartite pure states.
//!
//! A two-particle wavefunction `psi(x, y)` is reduced to the density kernel
//! `rho(x, x') = int psi(x, y) psi*(x', y) dy` of one particle. The kernel is
//! discretised on a uniform grid, its eigenvalues are found, and the entropy of
//! entanglement `E = -sum p log2 p` of the normalised spectrum is reported once
//! grid refinement has settled.
//!
//! Three state families are built in: Gaussian two-mode states (including the
//! partially correlated `B_{alpha beta}` family and two-mode squeezed states),
//! superpositions of displaced Gaussians (cat states), and states sampled on a
//! grid. The [`swap`] module runs entanglement swapping between two copies of
//! a state and measures whether the outcome is more entangled than the input.
//!
//! ```
//! use cvent::{converge, make_bell, reduce_gaussian, ConvergeOptions, Subsystem};
//!
//! let state = make_bell(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
//! let kernel = reduce_gaussian(&state, Subsystem::First);
//! let result = converge(&kernel, &ConvergeOptions::default()).unwrap();
//! assert!(result.converged);
//! assert!((result.entropy_bits - 0.798248).abs() < 1e-5);
//! ```

pub mod analytic;
pub mod cli;
pub mod error;
pub mod reduction;
pub mod spectra;
pub mod states;
pub mod swap;
pub mod verify;

pub use analytic::{
    entanglement_from_p, number_basis_weights, p_from_coefficients, p_from_squeezing, p_parameter,
    squeezed_entanglement, squeezing_from_p, swap_p, swap_quadratic_factor, PParameter,
    SqueezingParameter,
};
pub use error::{Error, Result};
pub use reduction::{
    bell_canonical_kernel, canonical_kernel, reduce_gaussian, reduce_mixture, reduce_numeric,
    trace_analytic_bell, trace_moment, DensityKernel, KernelForm, KernelWindow,
};
pub use spectra::{
    converge, discretize, eig_hermitian, entropy, ConvergeOptions, DiscretizedKernel,
    EntanglementResult, GridSpec, Spectrum,
};
pub use states::{
    apply_cnot_grid, apply_entangler_grid, apply_fourier_grid, cat_amplitudes, make_bell, make_cat,
    make_squeezed, Direction, GaussianBipartiteState, GaussianMixtureState, GridWavefunction,
    MixtureTerm, Subsystem, Wavefunction,
};
pub use swap::{
    bell_swap_report, purification_scan, swap_bell, swap_cat, BellSwapReport, PurificationReport,
    SwapOutcome,
};
