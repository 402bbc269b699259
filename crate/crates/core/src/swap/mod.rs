//! Entanglement swapping as a purification protocol.
//!
//! Two copies of a state are prepared, the inner particles go through the
//! inverse entangler and are measured, and the outer pair is left in a new
//! state whose entanglement is compared with the original.

mod elimination;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::reduction::{reduce_gaussian, reduce_mixture};
use crate::spectra::{converge, ConvergeOptions};
use crate::states::{
    check_cat_amplitudes, make_bell, make_cat, GaussianBipartiteState, GaussianMixtureState,
    MixtureTerm, Subsystem,
};
use elimination::GaussianExponent;

/// Measured values on the two inner particles and the width `mu` of the
/// Gaussian measurement projections (`mu = 0` is an ideal position measurement).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapOutcome {
    pub a: f64,
    pub b: f64,
    pub mu: f64,
}

impl SwapOutcome {
    pub fn new(a: f64, b: f64, mu: f64) -> Result<Self> {
        require_finite("a", a)?;
        require_finite("b", b)?;
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::Domain {
                name: "mu",
                reason: format!("measurement width must be finite and non-negative, got {mu}"),
            });
        }
        Ok(Self { a, b, mu })
    }

    /// Ideal position measurement.
    pub fn sharp(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 0.0)
    }
}

/// `h(mu) = 2 / (2 + 2 mu^2 + mu^4)`; equals 1 for a sharp measurement.
pub fn resolution_factor(mu: f64) -> f64 {
    let m2 = mu * mu;
    2.0 / (2.0 + 2.0 * m2 + m2 * m2)
}

/// State of particles 1 and 3 after swapping `B_{alpha alpha}(0, c)` on (1, 2)
/// with `B_{beta beta}(0, c)` on (3, 4): inverse entangler on (2, 4), then
/// projections onto `a` and `b`.
///
/// A sharp measurement gives the closed form
/// `exp[(-g(a,b) x^2 - g(b,a) y^2 + 2xy + 2b(y - x) - 2ia(y alpha^2 + x beta^2)) / (sigma^2 (alpha^2 + beta^2))]`.
/// A finite `mu` projects onto Gaussians of width `mu sigma` instead and the
/// remaining integrals are done by Gaussian elimination.
pub fn swap_bell(
    alpha: f64,
    beta: f64,
    c: f64,
    outcome: SwapOutcome,
    sigma: f64,
) -> Result<GaussianBipartiteState> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    require_positive("sigma", sigma)?;
    require_finite("c", c)?;
    if outcome.mu > 0.0 {
        return swap_bell_finite(alpha, beta, c, outcome, sigma);
    }
    let (a2, b2) = (alpha * alpha, beta * beta);
    let norm = 1.0 / (sigma * sigma * (a2 + b2));
    let g = |p: f64, q: f64| p.powi(4) + p * p * q * q + 1.0;
    let SwapOutcome { a, b, .. } = outcome;
    GaussianBipartiteState::new(
        g(alpha, beta) * norm,
        g(beta, alpha) * norm,
        norm,
        Complex64::new(-2.0 * b, -2.0 * a * b2) * norm,
        Complex64::new(2.0 * b, -2.0 * a * a2) * norm,
        sigma,
    )
}

fn swap_bell_finite(
    alpha: f64,
    beta: f64,
    c: f64,
    outcome: SwapOutcome,
    sigma: f64,
) -> Result<GaussianBipartiteState> {
    const X1: usize = 0;
    const X3: usize = 1;
    const X2: usize = 2;
    const V: usize = 3;
    const U: usize = 4;
    let re = |v: f64| Complex64::new(v, 0.0);

    let left = make_bell(alpha, alpha, 0.0, c, sigma)?;
    let right = make_bell(beta, beta, 0.0, c, sigma)?;
    let mut form = GaussianExponent::new(5);

    // psi_12(x1, x2)
    form.add_product(X1, X1, re(-left.a_q));
    form.add_product(X2, X2, re(-left.b_q));
    form.add_product(X1, X2, re(2.0 * left.c_q));
    form.add_linear(X1, left.d_l);
    form.add_linear(X2, left.e_l);

    // psi_34(x3, x4) with x4 = x2 + v after the inverse CNOT
    form.add_product(X3, X3, re(-right.a_q));
    form.add_product(X2, X2, re(-right.b_q));
    form.add_product(V, V, re(-right.b_q));
    form.add_product(X2, V, re(-2.0 * right.b_q));
    form.add_product(X3, X2, re(2.0 * right.c_q));
    form.add_product(X3, V, re(2.0 * right.c_q));
    form.add_linear(X3, right.d_l);
    form.add_linear(X2, right.e_l);
    form.add_linear(V, right.e_l);

    // inverse Fourier on particle 2 into u
    let s2 = sigma * sigma;
    form.add_product(X2, U, Complex64::new(0.0, -2.0 / s2));

    // Gaussian projections of width mu sigma centred on a and b
    let w = 1.0 / (outcome.mu * outcome.mu * s2);
    form.add_product(U, U, re(-w));
    form.add_linear(U, re(2.0 * outcome.a * w));
    form.add_product(V, V, re(-w));
    form.add_linear(V, re(2.0 * outcome.b * w));

    let reduced = form.integrate_out(U)?.integrate_out(V)?.integrate_out(X2)?;
    debug_assert_eq!(reduced.dim(), 2);
    let (qa, qb, qc) = (
        reduced.quadratic(X1, X1),
        reduced.quadratic(X3, X3),
        reduced.quadratic(X1, X3),
    );
    let scale = qa.norm().max(qb.norm());
    if qa.im.abs().max(qb.im.abs()).max(qc.im.abs()) > 1e-12 * scale {
        return Err(Error::Domain {
            name: "swapped state",
            reason: "quadratic coefficients acquired an imaginary part".into(),
        });
    }
    GaussianBipartiteState::new(
        qa.re,
        qb.re,
        -qc.re,
        reduced.linear(X1),
        reduced.linear(X3),
        sigma,
    )
}

/// State of particles 1 and 4 after swapping two cat states `C(d)` on (1, 2)
/// and (3, 4): inverse entangler on (2, 3), then projections of width `mu` onto
/// `a` and `b`.
///
/// Term `(j, k)` has centres `((-1)^j d, -(-1)^k d)` and coefficient
/// `a_j a_k exp(d b h ((-1)^j + (1 + mu^2)(-1)^k) - 2 h d^2 delta_jk)
///  * exp(i a d h ((1 + mu^2)(-1)^j - (-1)^k))` with `h = h(mu)`.
pub fn swap_cat(
    a0: Complex64,
    a1: Complex64,
    d: f64,
    outcome: SwapOutcome,
) -> Result<GaussianMixtureState> {
    check_cat_amplitudes(a0, a1)?;
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::Domain {
            name: "d",
            reason: format!("separation must be finite and non-negative, got {d}"),
        });
    }
    let SwapOutcome { a, b, mu } = outcome;
    let h = resolution_factor(mu);
    let stretch = 1.0 + mu * mu;
    let amps = [a0, a1];
    let sign = [1.0, -1.0];
    let mut terms = Vec::with_capacity(4);
    for j in 0..2 {
        for k in 0..2 {
            let same = if j == k { 1.0 } else { 0.0 };
            let re = d * b * h * (sign[j] + stretch * sign[k]) - 2.0 * h * d * d * same;
            let im = a * d * h * (stretch * sign[j] - sign[k]);
            let coeff = amps[j] * amps[k] * Complex64::new(re, im).exp();
            terms.push(MixtureTerm::new(coeff, sign[j] * d, -sign[k] * d));
        }
    }
    GaussianMixtureState::new(terms)
}

/// Entropies before and after one swapping run.
#[derive(Debug, Clone, PartialEq)]
pub struct PurificationReport {
    pub outcome: SwapOutcome,
    pub e_initial: f64,
    pub e_swapped: f64,
    /// `e_swapped - e_initial`; positive means purification.
    pub gain: f64,
    pub converged: bool,
    pub trace_relative_error: Option<f64>,
}

impl PurificationReport {
    pub fn purified(&self) -> bool {
        self.gain > 0.0
    }
}

/// Swap a cat state with amplitude `a0` (and real `a1 = sqrt(1 - |a0|^2)`)
/// over every `(a, b)` on the grid, reporting row-major over `a` then `b`.
///
/// Cells are independent and run in parallel. A cell whose pipeline fails is
/// reported with `converged = false` and a NaN entropy instead of aborting.
pub fn purification_scan(
    a0: Complex64,
    d: f64,
    mu: f64,
    a_grid: &[f64],
    b_grid: &[f64],
    opts: &ConvergeOptions,
) -> Result<Vec<PurificationReport>> {
    if a_grid.is_empty() || b_grid.is_empty() {
        return Err(Error::Domain {
            name: "grid",
            reason: "measurement grids must be nonempty".into(),
        });
    }
    let a1 = Complex64::new((1.0 - a0.norm_sqr()).max(0.0).sqrt(), 0.0);
    let initial = converge(
        &reduce_mixture(&make_cat(a0, a1, d)?, Subsystem::First)?,
        opts,
    )?;
    let e_initial = initial.entropy_bits;

    let outcomes = a_grid
        .iter()
        .flat_map(|&a| b_grid.iter().map(move |&b| SwapOutcome::new(a, b, mu)))
        .collect::<Result<Vec<_>>>()?;

    Ok(outcomes
        .into_par_iter()
        .map(|outcome| {
            let swapped = swap_cat(a0, a1, d, outcome)
                .and_then(|s| reduce_mixture(&s, Subsystem::First))
                .and_then(|k| converge(&k, opts));
            match swapped {
                Ok(r) => PurificationReport {
                    outcome,
                    e_initial,
                    e_swapped: r.entropy_bits,
                    gain: r.entropy_bits - e_initial,
                    converged: r.converged,
                    trace_relative_error: r.spectrum.trace_relative_error,
                },
                Err(_) => PurificationReport {
                    outcome,
                    e_initial,
                    e_swapped: f64::NAN,
                    gain: f64::NAN,
                    converged: false,
                    trace_relative_error: None,
                },
            }
        })
        .collect())
}

/// Entropies of the two input pairs and of the swapped pair for the
/// partially correlated family.
#[derive(Debug, Clone, PartialEq)]
pub struct BellSwapReport {
    pub outcome: SwapOutcome,
    pub e_initial_alpha: f64,
    pub e_initial_beta: f64,
    pub e_swapped: f64,
    pub converged: bool,
}

pub fn bell_swap_report(
    alpha: f64,
    beta: f64,
    c: f64,
    outcome: SwapOutcome,
    sigma: f64,
    opts: &ConvergeOptions,
) -> Result<BellSwapReport> {
    let run = |s: &GaussianBipartiteState| converge(&reduce_gaussian(s, Subsystem::First), opts);
    let ia = run(&make_bell(alpha, alpha, 0.0, c, sigma)?)?;
    let ib = run(&make_bell(beta, beta, 0.0, c, sigma)?)?;
    let sw = run(&swap_bell(alpha, beta, c, outcome, sigma)?)?;
    Ok(BellSwapReport {
        outcome,
        e_initial_alpha: ia.entropy_bits,
        e_initial_beta: ib.entropy_bits,
        e_swapped: sw.entropy_bits,
        converged: ia.converged && ib.converged && sw.converged,
    })
}
