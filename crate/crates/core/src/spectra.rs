//! Nystrom discretisation of density kernels, the Hermitian eigensolve and the
//! entropy of entanglement, with automatic grid refinement.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::traits::ComplexField;
use faer::{Mat, MatRef, Par, Side};
use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::reduction::{DensityKernel, KernelForm, KernelWindow, MixtureKernel};

/// Default cap on the matrix side `2n + 1`.
pub const DEFAULT_MAX_SIDE: usize = 4001;

/// Eigenvalues below `-NEGATIVE_EIGENVALUE_TOLERANCE * raw_sum` are an error;
/// anything between that and zero is discretisation noise and is clipped.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// `2n + 1` rectangle-rule nodes `center + k delta`, `k = -n..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub delta: f64,
    pub center: f64,
}

impl GridSpec {
    pub fn new(n: usize, delta: f64, center: f64) -> Result<Self> {
        require_positive("delta", delta)?;
        Ok(Self { n, delta, center })
    }

    /// Half-width `w = n delta`.
    pub fn w(&self) -> f64 {
        self.n as f64 * self.delta
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn node(&self, i: usize) -> f64 {
        self.center + (i as f64 - self.n as f64) * self.delta
    }
}

#[derive(Debug, Clone)]
pub enum KernelMatrix {
    Real(Mat<f64>),
    Complex(Mat<Complex64>),
}

/// `entries[p][q] = delta * rho(x_p, x_q)`.
#[derive(Debug, Clone)]
pub struct DiscretizedKernel {
    grid: GridSpec,
    entries: KernelMatrix,
}

impl DiscretizedKernel {
    /// Build directly from a Hermitian matrix, e.g. for testing the solver.
    pub fn from_matrix(grid: GridSpec, entries: Mat<Complex64>) -> Result<Self> {
        if entries.nrows() != grid.side() || entries.ncols() != grid.side() {
            return Err(Error::Domain {
                name: "entries",
                reason: format!(
                    "expected a {0}x{0} matrix, got {1}x{2}",
                    grid.side(),
                    entries.nrows(),
                    entries.ncols()
                ),
            });
        }
        Ok(Self {
            grid,
            entries: KernelMatrix::Complex(entries),
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn side(&self) -> usize {
        self.grid.side()
    }

    pub fn entries(&self) -> &KernelMatrix {
        &self.entries
    }

    pub fn entry(&self, p: usize, q: usize) -> Complex64 {
        match &self.entries {
            KernelMatrix::Real(m) => Complex64::new(m[(p, q)], 0.0),
            KernelMatrix::Complex(m) => m[(p, q)],
        }
    }

    /// Largest `|m_pq - conj(m_qp)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let side = self.side();
        let mut worst: f64 = 0.0;
        for p in 0..side {
            for q in 0..=p {
                worst = worst.max((self.entry(p, q) - self.entry(q, p).conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        (0..self.side()).map(|i| self.entry(i, i).re).sum()
    }
}

/// Nystrom matrix of `kernel` on `2n + 1` nodes of spacing `delta` centred on
/// the kernel's window. Only the lower triangle is evaluated; the upper one is
/// its conjugate mirror.
pub fn discretize(kernel: &DensityKernel, n: usize, delta: f64) -> Result<DiscretizedKernel> {
    discretize_on(
        kernel,
        GridSpec::new(n, delta, kernel.window().center)?,
        DEFAULT_MAX_SIDE,
    )
}

pub fn discretize_on(
    kernel: &DensityKernel,
    grid: GridSpec,
    max_side: usize,
) -> Result<DiscretizedKernel> {
    let side = grid.side();
    if side > max_side {
        return Err(Error::MatrixTooLarge {
            side,
            cap: max_side,
        });
    }
    let nodes: Vec<f64> = (0..side).map(|i| grid.node(i)).collect();
    let delta = grid.delta;

    let value: Box<dyn Fn(usize, usize) -> Complex64 + '_> = match kernel.form() {
        KernelForm::Mixture(m) => {
            // low-rank: precompute the Gaussian basis on the nodes
            let r = m.rank_bound();
            let basis: Vec<f64> = nodes.iter().flat_map(|&x| m.basis(x)).collect();
            Box::new(move |p, q| {
                let mut acc = Complex64::ZERO;
                for j in 0..r {
                    for k in 0..r {
                        acc += m.weight(j, k) * (basis[p * r + j] * basis[q * r + k]);
                    }
                }
                acc
            })
        }
        _ => Box::new(|p, q| kernel.evaluate(nodes[p], nodes[q])),
    };

    let entries = if kernel.is_real() {
        let mut mat = Mat::<f64>::zeros(side, side);
        for p in 0..side {
            for q in 0..=p {
                let v = delta * value(p, q).re;
                mat[(p, q)] = v;
                mat[(q, p)] = v;
            }
        }
        KernelMatrix::Real(mat)
    } else {
        let mut mat = Mat::<Complex64>::zeros(side, side);
        for p in 0..side {
            mat[(p, p)] = Complex64::new(delta * value(p, p).re, 0.0);
            for q in 0..p {
                let v = value(p, q) * delta;
                mat[(p, q)] = v;
                mat[(q, p)] = v.conj();
            }
        }
        KernelMatrix::Complex(mat)
    };

    let finite = match &entries {
        KernelMatrix::Real(m) => m.col_iter().all(|c| c.iter().all(|v| v.is_finite())),
        KernelMatrix::Complex(m) => m.col_iter().all(|c| c.iter().all(|v| v.is_finite())),
    };
    if !finite {
        return Err(Error::NonFinite("discretised kernel"));
    }
    Ok(DiscretizedKernel { grid, entries })
}

/// Eigenvalues of a kernel's discretisation, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub raw_sum: f64,
    pub trace_target: Option<f64>,
    pub trace_relative_error: Option<f64>,
}

impl Spectrum {
    pub fn with_trace_target(mut self, target: f64) -> Self {
        self.trace_target = Some(target);
        self.trace_relative_error = Some(((self.raw_sum - target) / target).abs());
        self
    }

    /// `sum_i lambda_i^power`.
    pub fn moment(&self, power: u32) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(power as i32)).sum()
    }

    /// Eigenvalues clipped at zero and divided by their sum.
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.eigenvalues.iter().map(|l| l.max(0.0)).sum();
        self.eigenvalues
            .iter()
            .map(|l| l.max(0.0) / total)
            .collect()
    }
}

fn self_adjoint_eigenvalues<T: ComplexField>(a: MatRef<'_, T>) -> Result<Diag<T>> {
    let n = a.nrows();
    let par = Par::Seq;
    let mut s = Diag::<T>::zeros(n);
    let mut mem = MemBuffer::new(self_adjoint_evd_scratch::<T>(
        n,
        ComputeEigenvectors::No,
        par,
        Default::default(),
    ));
    self_adjoint_evd(
        a,
        s.as_mut(),
        None,
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    Ok(s)
}

/// Hermitian eigensolve. Real kernels go through the real symmetric solver.
pub fn eig_hermitian(m: &DiscretizedKernel) -> Result<Spectrum> {
    let eigenvalues: Vec<f64> = match &m.entries {
        KernelMatrix::Real(a) => self_adjoint_eigenvalues(a.as_ref())?
            .column_vector()
            .iter()
            .copied()
            .collect(),
        KernelMatrix::Complex(a) => self_adjoint_eigenvalues(a.as_ref())?
            .column_vector()
            .iter()
            .map(|z| z.re)
            .collect(),
    };
    spectrum_from(eigenvalues)
}

/// Nonzero eigenvalues of a mixture kernel's discretisation on `grid`, without
/// forming the full matrix.
///
/// The matrix factors as `delta B W B^T` with `B` the Gaussian basis sampled on
/// the nodes. Its nonzero spectrum is that of the small Hermitian matrix
/// `delta S W S`, where `S` is the square root of the Gram matrix `B^T B`.
pub fn mixture_spectrum(m: &MixtureKernel, grid: GridSpec) -> Result<Spectrum> {
    let r = m.rank_bound();
    let side = grid.side();
    let basis: Vec<f64> = (0..side).flat_map(|i| m.basis(grid.node(i))).collect();
    let gram = Mat::<f64>::from_fn(r, r, |j, k| {
        (0..side).map(|i| basis[i * r + j] * basis[i * r + k]).sum()
    });
    let evd = gram
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let (u, s) = (evd.U(), evd.S().column_vector());
    let root = Mat::<f64>::from_fn(r, r, |j, k| {
        (0..r)
            .map(|l| u[(j, l)] * s[l].max(0.0).sqrt() * u[(k, l)])
            .sum()
    });
    let small = Mat::<Complex64>::from_fn(r, r, |j, k| {
        let mut acc = Complex64::ZERO;
        for a in 0..r {
            for b in 0..r {
                acc += m.weight(a, b) * (root[(j, a)] * root[(b, k)]);
            }
        }
        acc * grid.delta
    });
    let small =
        Mat::<Complex64>::from_fn(r, r, |j, k| (small[(j, k)] + small[(k, j)].conj()) * 0.5);
    if small.col_iter().any(|c| c.iter().any(|v| !v.is_finite())) {
        return Err(Error::NonFinite("mixture spectrum"));
    }
    let eigenvalues = self_adjoint_eigenvalues(small.as_ref())?
        .column_vector()
        .iter()
        .map(|z| z.re)
        .collect();
    spectrum_from(eigenvalues)
}

fn spectrum_from(mut eigenvalues: Vec<f64>) -> Result<Spectrum> {
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let raw_sum: f64 = eigenvalues.iter().sum();
    if let Some(&smallest) = eigenvalues.last() {
        if smallest < -NEGATIVE_EIGENVALUE_TOLERANCE * raw_sum.abs() {
            return Err(Error::NotPositive {
                eigenvalue: smallest,
                raw_sum,
            });
        }
    }
    Ok(Spectrum {
        eigenvalues,
        raw_sum,
        trace_target: None,
        trace_relative_error: None,
    })
}

/// `-sum p log2 p` over a probability vector; zero entries contribute zero.
pub fn shannon_bits(probabilities: &[f64]) -> f64 {
    let h: f64 = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Entropy of entanglement in bits from an unnormalised spectrum.
pub fn entropy(s: &Spectrum) -> Result<f64> {
    if s.raw_sum.is_nan() || s.raw_sum <= 0.0 {
        return Err(Error::NonPositiveSum(s.raw_sum));
    }
    Ok(shannon_bits(&s.probabilities()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementResult {
    pub entropy_bits: f64,
    pub spectrum: Spectrum,
    pub grid: GridSpec,
    pub converged: bool,
    /// Number of grid doublings performed after the first grid.
    pub refinements: usize,
}

/// Grid-refinement settings for [`converge`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergeOptions {
    /// Trace agreement and entropy stability both to `10^-tol_sigfigs`.
    pub tol_sigfigs: u32,
    /// Half-count of the first grid.
    pub n0: usize,
    pub max_side: usize,
    /// Overrides the kernel window's half-width, in its standard deviations.
    pub window_stds: Option<f64>,
    /// Overrides (or supplies) the trace the eigenvalues must sum to.
    pub trace_target: Option<f64>,
}

impl Default for ConvergeOptions {
    fn default() -> Self {
        Self {
            tol_sigfigs: 5,
            n0: 100,
            max_side: DEFAULT_MAX_SIDE,
            window_stds: None,
            trace_target: None,
        }
    }
}

impl ConvergeOptions {
    pub fn tolerance(&self) -> f64 {
        10f64.powi(-(self.tol_sigfigs as i32))
    }
}

/// Spectrum and entropy of `kernel` on a single grid. Mixture kernels take the
/// low-rank route of [`mixture_spectrum`], which drops the zero eigenvalues.
pub fn evaluate_on_grid(
    kernel: &DensityKernel,
    grid: GridSpec,
    max_side: usize,
) -> Result<(f64, Spectrum)> {
    let spectrum = match kernel.form() {
        KernelForm::Mixture(m) => {
            if grid.side() > max_side {
                return Err(Error::MatrixTooLarge {
                    side: grid.side(),
                    cap: max_side,
                });
            }
            mixture_spectrum(m, grid)?
        }
        _ => eig_hermitian(&discretize_on(kernel, grid, max_side)?)?,
    };
    let e = entropy(&spectrum)?;
    Ok((e, spectrum))
}

/// Refine the grid until the eigenvalue sum matches the trace and the entropy
/// has settled.
///
/// Starting from `n0` nodes either side across the kernel window, each step
/// doubles `n` and widens the window by `sqrt(2)`. A grid is accepted when it
/// and its predecessor both reproduce the trace to `10^-tol_sigfigs` relative
/// and their entropies differ by less than the same amount. Running into
/// `max_side` returns the last estimate with `converged = false`.
pub fn converge(kernel: &DensityKernel, opts: &ConvergeOptions) -> Result<EntanglementResult> {
    let target = opts
        .trace_target
        .or(kernel.trace_analytic())
        .ok_or(Error::MissingTraceTarget)?;
    let tol = opts.tolerance();
    let window: KernelWindow = kernel.window();
    let mut half_width = match opts.window_stds {
        Some(stds) => stds * window.std_estimate,
        None => window.half_width,
    };
    require_positive("window half-width", half_width)?;
    let mut n = opts.n0.max(1);

    let mut previous: Option<(f64, bool)> = None;
    let mut best: Option<EntanglementResult> = None;
    let mut refinements = 0;
    while 2 * n < opts.max_side {
        let grid = GridSpec::new(n, half_width / n as f64, window.center)?;
        let (e, spectrum) = evaluate_on_grid(kernel, grid, opts.max_side)?;
        let spectrum = spectrum.with_trace_target(target);
        let trace_ok = spectrum.trace_relative_error.is_some_and(|err| err <= tol);
        let converged = match previous {
            Some((e_prev, prev_ok)) => prev_ok && trace_ok && (e - e_prev).abs() < tol,
            None => false,
        };
        previous = Some((e, trace_ok));
        best = Some(EntanglementResult {
            entropy_bits: e,
            spectrum,
            grid,
            converged,
            refinements,
        });
        if converged {
            break;
        }
        n *= 2;
        half_width *= std::f64::consts::SQRT_2;
        refinements += 1;
    }
    best.ok_or(Error::MatrixTooLarge {
        side: 2 * opts.n0.max(1) + 1,
        cap: opts.max_side,
    })
}
