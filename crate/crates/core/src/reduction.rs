//! Reduced density kernels `rho(x, x') = int psi(x, y) conj(psi(x', y)) dy`.
//!
//! Gaussian and Gaussian-mixture states reduce in closed form. A brute-force
//! rectangle-rule reduction of an arbitrary wavefunction serves as the oracle
//! for both.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use faer::Mat;
use num_complex::Complex64;

use crate::analytic::PParameter;
use crate::error::{require_positive, Error, Result};
use crate::states::{
    GaussianBipartiteState, GaussianMixtureState, Subsystem, Wavefunction, BOUNDARY_TOLERANCE,
};

/// Default window half-width in units of the kernel's standard deviation.
pub const DEFAULT_WINDOW_STDS: f64 = 10.0;

/// Integration window `[center - half_width, center + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelWindow {
    pub center: f64,
    pub half_width: f64,
    pub std_estimate: f64,
}

impl KernelWindow {
    /// Window spanning `DEFAULT_WINDOW_STDS` standard deviations either side.
    pub fn from_std(center: f64, std_estimate: f64) -> Self {
        Self {
            center,
            half_width: DEFAULT_WINDOW_STDS * std_estimate,
            std_estimate,
        }
    }

    pub fn with_half_width(self, half_width: f64) -> Self {
        Self { half_width, ..self }
    }

    /// Half-width expressed in standard deviations.
    pub fn stds(&self) -> f64 {
        self.half_width / self.std_estimate
    }
}

/// `scale * exp(-diag (x^2 + x'^2) + 2 cross x x' + linear x + conj(linear) x')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernel {
    pub scale: f64,
    pub diag: f64,
    pub cross: f64,
    pub linear: Complex64,
}

impl GaussianKernel {
    pub fn evaluate(&self, x: f64, xp: f64) -> Complex64 {
        let re = -self.diag * (x * x + xp * xp) + 2.0 * self.cross * x * xp;
        self.scale * (Complex64::new(re, 0.0) + self.linear * x + self.linear.conj() * xp).exp()
    }

    /// Coefficient of `-x^2` along the diagonal `rho(x, x)`.
    fn diagonal_width(&self) -> f64 {
        2.0 * (self.diag - self.cross)
    }

    fn trace(&self) -> f64 {
        let k = self.diagonal_width();
        self.scale * (PI / k).sqrt() * (self.linear.re * self.linear.re / k).exp()
    }

    fn window(&self) -> KernelWindow {
        let k = self.diagonal_width();
        KernelWindow::from_std(self.linear.re / k, 1.0 / (2.0 * k).sqrt())
    }
}

/// `sum_jk weights[j][k] exp(-(x - c_j)^2 - (x' - c_k)^2)` with a Hermitian weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureKernel {
    pub centers: Vec<f64>,
    /// Row-major `m x m`.
    pub weights: Vec<Complex64>,
}

impl MixtureKernel {
    pub fn rank_bound(&self) -> usize {
        self.centers.len()
    }

    pub fn weight(&self, j: usize, k: usize) -> Complex64 {
        self.weights[j * self.centers.len() + k]
    }

    pub(crate) fn basis(&self, x: f64) -> impl Iterator<Item = f64> + '_ {
        self.centers.iter().map(move |c| (-(x - c) * (x - c)).exp())
    }

    pub fn evaluate(&self, x: f64, xp: f64) -> Complex64 {
        let gx: Vec<f64> = self.basis(x).collect();
        let gxp: Vec<f64> = self.basis(xp).collect();
        let rows = self.weights.chunks(self.centers.len());
        rows.zip(&gx)
            .map(|(row, gj)| {
                row.iter()
                    .zip(&gxp)
                    .map(|(w, gk)| w * (gj * gk))
                    .sum::<Complex64>()
            })
            .sum()
    }

    fn trace(&self) -> f64 {
        let m = self.centers.len();
        let mut acc = Complex64::ZERO;
        for j in 0..m {
            for k in 0..m {
                let sep = self.centers[j] - self.centers[k];
                acc += self.weights[j * m + k] * ((PI / 2.0).sqrt() * (-sep * sep / 2.0).exp());
            }
        }
        acc.re
    }
}

/// Kernel computed by quadrature over the traced-out variable.
#[derive(Clone)]
pub struct NumericKernel {
    psi: Arc<dyn Wavefunction>,
    traced: Subsystem,
    nodes: Vec<f64>,
    step: f64,
}

impl NumericKernel {
    pub fn evaluate(&self, x: f64, xp: f64) -> Complex64 {
        let acc: Complex64 = self
            .nodes
            .iter()
            .map(|&y| match self.traced {
                Subsystem::Second => self.psi.amplitude(x, y) * self.psi.amplitude(xp, y).conj(),
                Subsystem::First => self.psi.amplitude(y, x) * self.psi.amplitude(y, xp).conj(),
            })
            .sum();
        acc * self.step
    }
}

impl fmt::Debug for NumericKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumericKernel")
            .field("traced", &self.traced)
            .field("nodes", &self.nodes.len())
            .field("step", &self.step)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum KernelForm {
    Gaussian(GaussianKernel),
    Mixture(MixtureKernel),
    Numeric(NumericKernel),
}

/// Hermitian two-point function `rho(x, x')` with the window it lives on and,
/// where a closed form exists, its trace.
#[derive(Debug, Clone)]
pub struct DensityKernel {
    form: KernelForm,
    trace_analytic: Option<f64>,
    window: KernelWindow,
}

impl DensityKernel {
    pub fn new(form: KernelForm, trace_analytic: Option<f64>, window: KernelWindow) -> Self {
        Self {
            form,
            trace_analytic,
            window,
        }
    }

    pub fn evaluate(&self, x: f64, xp: f64) -> Complex64 {
        match &self.form {
            KernelForm::Gaussian(g) => g.evaluate(x, xp),
            KernelForm::Mixture(m) => m.evaluate(x, xp),
            KernelForm::Numeric(n) => n.evaluate(x, xp),
        }
    }

    pub fn form(&self) -> &KernelForm {
        &self.form
    }

    pub fn gaussian(&self) -> Option<&GaussianKernel> {
        match &self.form {
            KernelForm::Gaussian(g) => Some(g),
            _ => None,
        }
    }

    pub fn trace_analytic(&self) -> Option<f64> {
        self.trace_analytic
    }

    pub fn window(&self) -> KernelWindow {
        self.window
    }

    pub fn with_window(self, window: KernelWindow) -> Self {
        Self { window, ..self }
    }

    /// Every kernel built here satisfies `rho(x', x) = conj(rho(x, x'))`.
    pub fn is_hermitian(&self) -> bool {
        true
    }

    /// True when every value of the kernel is real, so a real symmetric
    /// eigensolver suffices.
    pub fn is_real(&self) -> bool {
        match &self.form {
            KernelForm::Gaussian(g) => g.linear.im == 0.0,
            KernelForm::Mixture(m) => m.weights.iter().all(|w| w.im == 0.0),
            KernelForm::Numeric(_) => false,
        }
    }
}

/// Closed-form reduction of a Gaussian state, integrating out the other party
/// by completing the square.
pub fn reduce_gaussian(state: &GaussianBipartiteState, keep: Subsystem) -> DensityKernel {
    let s = match keep {
        Subsystem::First => *state,
        Subsystem::Second => state.swap_parties(),
    };
    let (a, b, c) = (s.a_q, s.b_q, s.c_q);
    let e_re = s.e_l.re;
    let kernel = GaussianKernel {
        scale: (PI / (2.0 * b)).sqrt() * (e_re * e_re / (2.0 * b)).exp(),
        diag: a - c * c / (2.0 * b),
        cross: c * c / (2.0 * b),
        linear: s.d_l + c * e_re / b,
    };
    DensityKernel::new(
        KernelForm::Gaussian(kernel),
        Some(kernel.trace()),
        kernel.window(),
    )
}

/// `exp(-(1 + P)(x^2 + x'^2) + 2 x x')`, the form every Gaussian kernel can be
/// brought to by a shift, a rescaling and a phase.
pub fn canonical_kernel(p: PParameter) -> DensityKernel {
    let kernel = GaussianKernel {
        scale: 1.0,
        diag: 1.0 + p.value(),
        cross: 1.0,
        linear: Complex64::ZERO,
    };
    DensityKernel::new(
        KernelForm::Gaussian(kernel),
        Some(kernel.trace()),
        kernel.window(),
    )
}

/// Canonical kernel of the partially correlated state, `P = 2 alpha^2 beta^2`.
pub fn bell_canonical_kernel(alpha: f64, beta: f64) -> Result<DensityKernel> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    Ok(canonical_kernel(PParameter::new(
        2.0 * alpha * alpha * beta * beta,
    )?))
}

/// Trace of the canonical partially correlated kernel, `sqrt(pi) / (2 alpha beta)`.
pub fn trace_analytic_bell(alpha: f64, beta: f64) -> Result<f64> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    Ok(PI.sqrt() / (2.0 * alpha * beta))
}

/// Closed-form reduction of a Gaussian mixture.
///
/// The overlap of the traced-out factors contributes
/// `sqrt(pi/2) exp(-(c_j - c_k)^2 / 2)` per pair. The kernel is then rescaled by
/// `exp(2 s^2) / sqrt(pi/2)`, with `s` half the spread of the traced-out centres,
/// so a two-term cat state carries exactly the `exp(2 d^2 delta_jk)` pair
/// weights and the trace `sqrt(pi/2) (e^{2d^2} + 2 Re(a0 conj(a1)) e^{-2d^2})`.
pub fn reduce_mixture(state: &GaussianMixtureState, keep: Subsystem) -> Result<DensityKernel> {
    let terms = match keep {
        Subsystem::First => state.terms().to_vec(),
        Subsystem::Second => state.swap_parties().terms().to_vec(),
    };
    let (lo, hi) = terms
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| {
            (lo.min(t.cy), hi.max(t.cy))
        });
    let spread = (hi - lo) / 2.0;
    let m = terms.len();
    let mut weights = vec![Complex64::ZERO; m * m];
    for (j, tj) in terms.iter().enumerate() {
        for (k, tk) in terms.iter().enumerate() {
            let sep = tj.cy - tk.cy;
            weights[j * m + k] =
                tj.coeff * tk.coeff.conj() * (-sep * sep / 2.0 + 2.0 * spread * spread).exp();
        }
    }
    let kernel = MixtureKernel {
        centers: terms.iter().map(|t| t.cx).collect(),
        weights,
    };
    let trace = kernel.trace();
    if !trace.is_finite() {
        return Err(Error::NonFinite("mixture kernel trace"));
    }
    let (xlo, xhi) = kernel
        .centers
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
            (lo.min(c), hi.max(c))
        });
    let window = KernelWindow::from_std((xlo + xhi) / 2.0, FRAC_1_SQRT_2 + (xhi - xlo) / 2.0);
    Ok(DensityKernel::new(
        KernelForm::Mixture(kernel),
        Some(trace),
        window,
    ))
}

/// Rectangle-rule nodes `center + k * step` for `k` in `-n..=n`.
pub(crate) fn nodes(center: f64, half_width: f64, n: usize) -> (Vec<f64>, f64) {
    if n == 0 {
        return (vec![center], 2.0 * half_width);
    }
    let step = half_width / n as f64;
    let nodes = (0..=2 * n)
        .map(|k| center + (k as f64 - n as f64) * step)
        .collect();
    (nodes, step)
}

/// Brute-force reduction: `rho(x, x') = sum_k step psi(x, y_k) conj(psi(x', y_k))`
/// with `2n + 1` rectangle-rule nodes across `window`.
///
/// The same window is used for the kept variable when checking that `psi` is
/// negligible at the edges.
pub fn reduce_numeric(
    psi: Arc<dyn Wavefunction>,
    keep: Subsystem,
    window: KernelWindow,
    n: usize,
) -> Result<DensityKernel> {
    require_positive("half_width", window.half_width)?;
    let (nodes, step) = nodes(window.center, window.half_width, n.max(1));

    let mut peak: f64 = 0.0;
    let mut edge: f64 = 0.0;
    let last = nodes.len() - 1;
    for (i, &u) in nodes.iter().enumerate() {
        for (j, &v) in nodes.iter().enumerate() {
            let a = psi.amplitude(u, v).norm();
            peak = peak.max(a);
            if i == 0 || j == 0 || i == last || j == last {
                edge = edge.max(a);
            }
        }
    }
    if peak > 0.0 && edge / peak > BOUNDARY_TOLERANCE {
        return Err(Error::BoundaryMass(edge / peak));
    }

    let kernel = NumericKernel {
        psi,
        traced: keep.other(),
        nodes,
        step,
    };
    Ok(DensityKernel::new(
        KernelForm::Numeric(kernel),
        None,
        window,
    ))
}

/// Rectangle-rule estimate of `Tr(rho^power)` on `2n + 1` nodes across `window`,
/// composing the kernel with itself by quadrature.
pub fn trace_moment(
    kernel: &DensityKernel,
    power: u32,
    window: KernelWindow,
    n: usize,
) -> Result<f64> {
    if power == 0 {
        return Err(Error::Domain {
            name: "power",
            reason: "moments start at 1".into(),
        });
    }
    let (nodes, step) = nodes(window.center, window.half_width, n);
    let side = nodes.len();
    let k = Mat::<Complex64>::from_fn(side, side, |p, q| {
        kernel.evaluate(nodes[p], nodes[q]) * step
    });
    let mut acc = k.clone();
    for _ in 1..power {
        acc = &acc * &k;
    }
    let tr: Complex64 = (0..side).map(|i| acc[(i, i)]).sum();
    if !tr.re.is_finite() {
        return Err(Error::NonFinite("trace moment"));
    }
    Ok(tr.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_bell, make_cat, MixtureTerm};
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bell_kernel_matches_closed_form() {
        // exp[-(alpha^2 + 1/(2 beta^2))(x^2 + x'^2) + x x'/beta^2 + 2 i x1 (x - x')], sigma = 1
        for (alpha, beta, x1) in [(1.0, 1.0, 0.0), (0.6, 1.7, 0.0), (1.2, 0.4, 2.5)] {
            let k = reduce_gaussian(
                &make_bell(alpha, beta, x1, 0.0, 1.0).unwrap(),
                Subsystem::First,
            );
            let g = k.gaussian().unwrap();
            let scale = g.scale;
            for (x, xp) in [(0.1, 0.2), (-0.5, 0.7), (1.0, -1.1)] {
                let e = Complex64::new(
                    -(alpha * alpha + 0.5 / (beta * beta)) * (x * x + xp * xp)
                        + x * xp / (beta * beta),
                    2.0 * x1 * (x - xp),
                );
                let want = e.exp() * scale;
                assert!((k.evaluate(x, xp) - want).norm() < 1e-13 * want.norm());
            }
        }
    }

    #[test]
    fn bell_second_party_kernel_matches_closed_form() {
        // exp[((1/(2(a^2 b^2 + 1)) - 1)(y^2 + y'^2) + y y'/(a^2 b^2 + 1)) / b^2]
        let (alpha, beta) = (0.9_f64, 1.3_f64);
        let k = reduce_gaussian(
            &make_bell(alpha, beta, 0.0, 0.0, 1.0).unwrap(),
            Subsystem::Second,
        );
        let g = k.gaussian().unwrap();
        let ab = alpha * alpha * beta * beta + 1.0;
        assert_relative_eq!(
            g.diag,
            (1.0 - 0.5 / ab) / (beta * beta),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            2.0 * g.cross,
            1.0 / (beta * beta * ab),
            max_relative = 1e-14
        );
    }

    #[test]
    fn product_state_kernel_is_rank_one() {
        let s = GaussianBipartiteState::new(0.8, 1.5, 0.0, Complex64::new(0.3, 1.0), c(0.2), 1.0)
            .unwrap();
        let k = reduce_gaussian(&s, Subsystem::First);
        let g = k.gaussian().unwrap();
        assert_eq!(g.cross, 0.0);
        // rho(x, x') rho(x', x) == rho(x, x) rho(x', x')
        let (x, xp) = (0.4, -0.9);
        let lhs = k.evaluate(x, xp) * k.evaluate(xp, x);
        let rhs = k.evaluate(x, x) * k.evaluate(xp, xp);
        assert!((lhs - rhs).norm() < 1e-13 * rhs.norm());
    }

    #[test]
    fn gaussian_kernel_is_hermitian() {
        let s = GaussianBipartiteState::new(
            1.3,
            0.9,
            -0.7,
            Complex64::new(0.4, -2.0),
            Complex64::new(-0.3, 0.8),
            1.0,
        )
        .unwrap();
        for keep in [Subsystem::First, Subsystem::Second] {
            let k = reduce_gaussian(&s, keep);
            for (x, xp) in [(0.1, 0.9), (-1.4, 0.3), (2.0, -2.2)] {
                let d = k.evaluate(xp, x) - k.evaluate(x, xp).conj();
                assert!(d.norm() <= 1e-12 * k.evaluate(x, xp).norm());
            }
        }
    }

    #[test]
    fn canonical_trace() {
        assert_relative_eq!(
            trace_analytic_bell(1.0, 1.0).unwrap(),
            0.886_226_925_452_758,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            trace_analytic_bell(0.5, 0.5).unwrap(),
            3.544_907_701_811_032,
            max_relative = 1e-14
        );
        assert_eq!(
            trace_analytic_bell(0.3, 1.7).unwrap(),
            trace_analytic_bell(1.7, 0.3).unwrap()
        );
        assert!(trace_analytic_bell(0.0, 1.0).is_err());
        let k = bell_canonical_kernel(0.7, 1.1).unwrap();
        assert_relative_eq!(
            k.trace_analytic().unwrap(),
            trace_analytic_bell(0.7, 1.1).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn shifted_gaussian_trace_matches_quadrature() {
        // real linear terms move the diagonal and scale the trace
        let state = GaussianBipartiteState::new(
            1.3,
            0.9,
            0.4,
            Complex64::new(-1.2, 0.7),
            Complex64::new(0.8, -2.0),
            1.0,
        )
        .unwrap();
        let k = reduce_gaussian(&state, Subsystem::First);
        let w = k.window();
        let (xs, step) = nodes(w.center, w.half_width, 2000);
        let quad: f64 = xs.iter().map(|&x| k.evaluate(x, x).re * step).sum();
        assert_relative_eq!(k.trace_analytic().unwrap(), quad, max_relative = 1e-12);
        let peak = xs
            .iter()
            .copied()
            .max_by(|a, b| k.evaluate(*a, *a).re.total_cmp(&k.evaluate(*b, *b).re))
            .unwrap();
        assert!((peak - w.center).abs() <= step);
    }

    #[test]
    fn cat_trace_matches_closed_form() {
        let h = c(0.5f64.sqrt());
        for d in [0.0, 0.5, 1.0, 2.0] {
            let k = reduce_mixture(&make_cat(h, h, d).unwrap(), Subsystem::First).unwrap();
            let want = (PI / 2.0).sqrt() * ((2.0 * d * d).exp() + (-2.0 * d * d).exp());
            assert_relative_eq!(k.trace_analytic().unwrap(), want, max_relative = 1e-14);
        }
        let k = reduce_mixture(&make_cat(c(1.0), c(0.0), 1.3).unwrap(), Subsystem::First).unwrap();
        assert_relative_eq!(
            k.trace_analytic().unwrap(),
            (PI / 2.0).sqrt() * (2.0 * 1.3 * 1.3_f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn cat_kernel_pair_weights() {
        let (a0, a1) = (
            Complex64::new(0.3, 0.4),
            Complex64::new(0.0, (0.75f64).sqrt()),
        );
        let d = 0.8;
        let k = reduce_mixture(&make_cat(a0, a1, d).unwrap(), Subsystem::First).unwrap();
        let sign = [1.0, -1.0];
        let amps = [a0, a1];
        for (x, xp) in [(0.2, -0.1), (1.0, 0.7)] {
            let mut want = Complex64::ZERO;
            for j in 0..2 {
                for l in 0..2 {
                    let delta = if j == l { 1.0 } else { 0.0 };
                    want += amps[j]
                        * amps[l].conj()
                        * (-(x - sign[j] * d).powi(2) - (xp - sign[l] * d).powi(2)
                            + 2.0 * d * d * delta)
                            .exp();
                }
            }
            assert!((k.evaluate(x, xp) - want).norm() < 1e-13 * want.norm());
        }
    }

    #[test]
    fn mixture_window_covers_centres() {
        let m = GaussianMixtureState::new(vec![
            MixtureTerm::new(c(1.0), 3.0, 0.0),
            MixtureTerm::new(c(1.0), 1.0, 0.5),
        ])
        .unwrap();
        let w = reduce_mixture(&m, Subsystem::First).unwrap().window();
        assert_eq!(w.center, 2.0);
        assert_relative_eq!(w.std_estimate, FRAC_1_SQRT_2 + 1.0);
        assert_relative_eq!(w.half_width, 10.0 * w.std_estimate);
    }

    #[test]
    fn numeric_product_kernel_factorises() {
        let f = |x: f64| Complex64::new(0.0, 0.7 * x).exp() * (-(x - 0.3).powi(2)).exp();
        let g = |y: f64| (-0.5 * y * y).exp();
        let psi: Arc<dyn Wavefunction> = Arc::new(move |x: f64, y: f64| f(x) * g(y));
        let k =
            reduce_numeric(psi, Subsystem::First, KernelWindow::from_std(0.0, 1.0), 200).unwrap();
        let norm_g = PI.sqrt(); // int exp(-y^2) dy
        for (x, xp) in [(0.0, 0.5), (1.2, -0.4)] {
            let want = f(x) * f(xp).conj() * norm_g;
            assert!((k.evaluate(x, xp) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn numeric_reduction_rejects_truncated_state() {
        let psi: Arc<dyn Wavefunction> =
            Arc::new(|x: f64, y: f64| c((-(x * x + y * y) / 50.0).exp()));
        assert!(matches!(
            reduce_numeric(psi, Subsystem::First, KernelWindow::from_std(0.0, 1.0), 50),
            Err(Error::BoundaryMass(_))
        ));
    }

    #[test]
    fn moment_of_rank_one_kernel() {
        // rho = f f^*, Tr(rho^n) = (int |f|^2)^n
        let k = reduce_mixture(&make_cat(c(1.0), c(0.0), 0.0).unwrap(), Subsystem::First).unwrap();
        let tr1 = k.trace_analytic().unwrap();
        for n in 1..=3 {
            let got = trace_moment(&k, n, k.window(), 200).unwrap();
            assert_relative_eq!(got, tr1.powi(n as i32), max_relative = 1e-12);
        }
    }
}
