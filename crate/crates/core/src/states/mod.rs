//! Bipartite state families and the continuous gates that build them.
//!
//! States are stored unnormalised. Every downstream entropy normalises the
//! eigenvalue sum, so Gaussian normalisation constants are never carried.

mod grid;

pub use grid::{
    apply_cnot_grid, apply_entangler_grid, apply_fourier_grid, Direction, GridWavefunction,
    BOUNDARY_TOLERANCE,
};

use num_complex::Complex64;

use crate::error::{require_finite, require_positive, Error, Result};

/// Tolerance on `|a0|^2 + |a1|^2 = 1` for cat amplitudes.
pub const CAT_NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// One half of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    /// The `x` variable.
    First,
    /// The `y` variable.
    Second,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::First => Subsystem::Second,
            Subsystem::Second => Subsystem::First,
        }
    }
}

/// Anything that can be sampled as a two-variable wavefunction `psi(x, y)`.
pub trait Wavefunction: Send + Sync {
    fn amplitude(&self, x: f64, y: f64) -> Complex64;
}

impl<F> Wavefunction for F
where
    F: Fn(f64, f64) -> Complex64 + Send + Sync,
{
    fn amplitude(&self, x: f64, y: f64) -> Complex64 {
        self(x, y)
    }
}

/// `psi(x, y) = exp(-a x^2 - b y^2 + 2 c x y + d x + e y)`.
///
/// The quadratic coefficients are real; the linear ones may be complex. The
/// quadratic form must be negative definite (`a > 0`, `b > 0`, `a b > c^2`)
/// so that the state is square integrable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBipartiteState {
    pub a_q: f64,
    pub b_q: f64,
    pub c_q: f64,
    pub d_l: Complex64,
    pub e_l: Complex64,
    /// Scale length the coefficients were built with. Informational only.
    pub sigma: f64,
}

impl GaussianBipartiteState {
    pub fn new(
        a_q: f64,
        b_q: f64,
        c_q: f64,
        d_l: Complex64,
        e_l: Complex64,
        sigma: f64,
    ) -> Result<Self> {
        require_positive("a_q", a_q)?;
        require_positive("b_q", b_q)?;
        require_finite("c_q", c_q)?;
        require_positive("sigma", sigma)?;
        if !(d_l.is_finite() && e_l.is_finite()) {
            return Err(Error::NonFinite("linear coefficients"));
        }
        let det = a_q * b_q - c_q * c_q;
        if det <= 0.0 {
            return Err(Error::NotIntegrable(det));
        }
        Ok(Self {
            a_q,
            b_q,
            c_q,
            d_l,
            e_l,
            sigma,
        })
    }

    /// `a b - c^2`, strictly positive for every valid state.
    pub fn determinant(&self) -> f64 {
        self.a_q * self.b_q - self.c_q * self.c_q
    }

    pub fn is_separable(&self) -> bool {
        self.c_q == 0.0
    }

    /// Same state with additional linear terms in the exponent.
    pub fn with_linear_shift(&self, dd: Complex64, de: Complex64) -> Result<Self> {
        Self::new(
            self.a_q,
            self.b_q,
            self.c_q,
            self.d_l + dd,
            self.e_l + de,
            self.sigma,
        )
    }

    /// Exchange the roles of `x` and `y`.
    pub fn swap_parties(&self) -> Self {
        Self {
            a_q: self.b_q,
            b_q: self.a_q,
            d_l: self.e_l,
            e_l: self.d_l,
            ..*self
        }
    }
}

impl Wavefunction for GaussianBipartiteState {
    fn amplitude(&self, x: f64, y: f64) -> Complex64 {
        let quad = -self.a_q * x * x - self.b_q * y * y + 2.0 * self.c_q * x * y;
        (Complex64::new(quad, 0.0) + self.d_l * x + self.e_l * y).exp()
    }
}

/// Partially correlated state obtained by applying the entangler (CNOT after a
/// Fourier transform on the first party) to two Gaussian wavepackets of widths
/// `alpha * sigma` and `beta * sigma` centred at `x1` and `x2`.
///
/// The internal integral is eliminated with `z = x + y + x2`, which gives
/// `a = (alpha^2 + 1/beta^2)/sigma^2`, `b = c = 1/(beta sigma)^2` and linear
/// terms `d = (2 i x1 - 2 x2/beta^2)/sigma^2`, `e = 2 x2/(beta sigma)^2`.
pub fn make_bell(
    alpha: f64,
    beta: f64,
    x1: f64,
    x2: f64,
    sigma: f64,
) -> Result<GaussianBipartiteState> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    require_positive("sigma", sigma)?;
    require_finite("x1", x1)?;
    require_finite("x2", x2)?;
    let s2 = sigma * sigma;
    let b2 = beta * beta;
    let a_q = (alpha * alpha + 1.0 / b2) / s2;
    let bc = 1.0 / (b2 * s2);
    let d_l = Complex64::new(-2.0 * x2 / b2, 2.0 * x1) / s2;
    let e_l = Complex64::new(2.0 * x2 / b2, 0.0) / s2;
    GaussianBipartiteState::new(a_q, bc, bc, d_l, e_l, sigma)
}

/// Two-mode squeezed state `exp(-(e^{2r}(x+y)^2 + e^{-2r}(x-y)^2)/4)`.
pub fn make_squeezed(r: f64) -> Result<GaussianBipartiteState> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Domain {
            name: "r",
            reason: format!("squeezing must be finite and non-negative, got {r}"),
        });
    }
    let a = (2.0 * r).cosh() / 2.0;
    let c = -(2.0 * r).sinh() / 2.0;
    GaussianBipartiteState::new(a, a, c, Complex64::ZERO, Complex64::ZERO, 1.0)
}

/// One unit-width displaced product Gaussian `coeff * exp(-(x-cx)^2 - (y-cy)^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureTerm {
    pub coeff: Complex64,
    pub cx: f64,
    pub cy: f64,
}

impl MixtureTerm {
    pub fn new(coeff: Complex64, cx: f64, cy: f64) -> Self {
        Self { coeff, cx, cy }
    }
}

/// Superposition of unit-width displaced Gaussian product terms. Covers the
/// two-mode cat states and the four-term states left after swapping.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixtureState {
    terms: Vec<MixtureTerm>,
}

impl GaussianMixtureState {
    pub fn new(terms: Vec<MixtureTerm>) -> Result<Self> {
        if terms
            .iter()
            .any(|t| !(t.coeff.is_finite() && t.cx.is_finite() && t.cy.is_finite()))
        {
            return Err(Error::NonFinite("mixture terms"));
        }
        if !terms.iter().any(|t| t.coeff != Complex64::ZERO) {
            return Err(Error::Domain {
                name: "terms",
                reason: "at least one term must have a nonzero coefficient".into(),
            });
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[MixtureTerm] {
        &self.terms
    }

    /// Exchange the roles of `x` and `y`.
    pub fn swap_parties(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| MixtureTerm::new(t.coeff, t.cy, t.cx))
                .collect(),
        }
    }
}

impl Wavefunction for GaussianMixtureState {
    fn amplitude(&self, x: f64, y: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * (-(x - t.cx).powi(2) - (y - t.cy).powi(2)).exp())
            .sum()
    }
}

pub(crate) fn check_cat_amplitudes(a0: Complex64, a1: Complex64) -> Result<()> {
    let norm = a0.norm_sqr() + a1.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > CAT_NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization(norm));
    }
    Ok(())
}

/// Two-mode cat state `a0 G(x-d) G(y+d) + a1 G(x+d) G(y-d)` with unit widths.
pub fn make_cat(a0: Complex64, a1: Complex64, d: f64) -> Result<GaussianMixtureState> {
    check_cat_amplitudes(a0, a1)?;
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::Domain {
            name: "d",
            reason: format!("separation must be finite and non-negative, got {d}"),
        });
    }
    GaussianMixtureState::new(vec![
        MixtureTerm::new(a0, d, -d),
        MixtureTerm::new(a1, -d, d),
    ])
}

/// Cat amplitudes `(sqrt(p), sqrt(1 - p))` for a weight `p = |a0|^2` in `[0, 1]`.
pub fn cat_amplitudes(a0_sq: f64) -> Result<(Complex64, Complex64)> {
    if !(0.0..=1.0).contains(&a0_sq) {
        return Err(Error::Domain {
            name: "a0_sq",
            reason: format!("expected a weight in [0, 1], got {a0_sq}"),
        });
    }
    Ok((
        Complex64::new(a0_sq.sqrt(), 0.0),
        Complex64::new((1.0 - a0_sq).sqrt(), 0.0),
    ))
}
