//! Closed-form entanglement of Gaussian states.
//!
//! Every state `exp(-a x^2 - b y^2 + 2 c x y + d x + e y)` has reduced kernels
//! that a shift, a rescaling and a phase bring to
//! `exp(-(1 + P)(x^2 + x'^2) + 2 x x')` with `P = 2(ab/c^2 - 1)`. The two-mode
//! squeezed state has `P = 2 cosech^2(2r)`, so its number-basis entropy gives
//! the entanglement of the whole class.

use crate::error::{require_positive, Error, Result};
use crate::states::GaussianBipartiteState;

/// Dimensionless invariant fixing the entanglement of a Gaussian state.
/// Zero is the EPR limit (infinite entanglement).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PParameter(f64);

impl PParameter {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::Domain {
                name: "P",
                reason: format!("expected a non-negative value, got {value}"),
            });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SqueezingParameter(f64);

impl SqueezingParameter {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain {
                name: "r",
                reason: format!("expected a non-negative value, got {r}"),
            });
        }
        Ok(Self(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `2(ab/c^2 - 1)` from raw quadratic coefficients.
pub fn p_from_coefficients(a: f64, b: f64, c: f64) -> Result<PParameter> {
    if c == 0.0 {
        return Err(Error::Separable);
    }
    PParameter::new(2.0 * (a * b / (c * c) - 1.0))
}

/// P-parameter of a Gaussian state. Linear terms do not enter.
pub fn p_parameter(state: &GaussianBipartiteState) -> Result<PParameter> {
    p_from_coefficients(state.a_q, state.b_q, state.c_q)
}

/// `r = arcsinh(sqrt(2/P)) / 2`, inverting `P = 2 cosech^2(2r)`.
pub fn squeezing_from_p(p: PParameter) -> SqueezingParameter {
    // asinh is evaluated in a cancellation-free form for large arguments
    SqueezingParameter((2.0 / p.value()).sqrt().asinh() / 2.0)
}

/// `P = 2 cosech^2(2r)`; infinite at `r = 0`.
pub fn p_from_squeezing(r: SqueezingParameter) -> PParameter {
    PParameter(2.0 / (2.0 * r.value()).sinh().powi(2))
}

/// `cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r`.
pub fn squeezed_entanglement(r: SqueezingParameter) -> f64 {
    let r = r.value();
    if r == 0.0 {
        return 0.0;
    }
    if r.is_infinite() {
        return f64::INFINITY;
    }
    // with c = cosh^2 r:  c log c - (c-1) log(c-1) = log c - (c-1) log(1 - 1/c)
    let c = r.cosh().powi(2);
    let s = r.sinh().powi(2);
    (c.ln() - s * (-1.0 / c).ln_1p()) / std::f64::consts::LN_2
}

/// Entanglement of any Gaussian state with invariant `p`. Diverges to
/// `f64::INFINITY` at `P = 0`.
pub fn entanglement_from_p(p: PParameter) -> f64 {
    if p.value() == 0.0 {
        return f64::INFINITY;
    }
    if p.value().is_infinite() {
        return 0.0;
    }
    squeezed_entanglement(squeezing_from_p(p))
}

/// `g(alpha, beta) = alpha^4 + alpha^2 beta^2 + 1`.
pub fn swap_quadratic_factor(alpha: f64, beta: f64) -> f64 {
    alpha.powi(4) + alpha * alpha * beta * beta + 1.0
}

/// P-parameter after swapping two partially correlated pairs of widths
/// `alpha` and `beta`: `2(g(alpha, beta) g(beta, alpha) - 1)`.
pub fn swap_p(alpha: f64, beta: f64) -> Result<PParameter> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    PParameter::new(
        2.0 * (swap_quadratic_factor(alpha, beta) * swap_quadratic_factor(beta, alpha) - 1.0),
    )
}

/// Schmidt weights `tanh^{2n} r / cosh^2 r` of the squeezed state in the
/// number basis, `n = 0..terms`.
pub fn number_basis_weights(r: SqueezingParameter, terms: usize) -> Vec<f64> {
    let q = r.value().tanh().powi(2);
    let w0 = 1.0 / r.value().cosh().powi(2);
    std::iter::successors(Some(w0), |w| Some(w * q))
        .take(terms)
        .collect()
}
