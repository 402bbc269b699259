//! The acceptance suite behind `cvent verify`.
//!
//! Each check is a pure function returning a [`CheckOutcome`]; detail strings
//! use fixed formatting so repeated runs print identical bytes.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{
    entanglement_from_p, squeezed_entanglement, swap_p, PParameter, SqueezingParameter,
};
use crate::cli::{evaluate, Family};
use crate::error::Result;
use crate::reduction::{
    bell_canonical_kernel, reduce_gaussian, reduce_mixture, trace_analytic_bell, trace_moment,
    DensityKernel,
};
use crate::spectra::{converge, evaluate_on_grid, ConvergeOptions, GridSpec};
use crate::states::{
    apply_entangler_grid, cat_amplitudes, make_bell, make_cat, make_squeezed, Direction,
    GridWavefunction, Subsystem,
};
use crate::swap::{purification_scan, swap_bell, SwapOutcome};

/// Benchmark entropy of the balanced cat state at unit separation.
pub const CAT_BENCHMARK: f64 = 0.881;
pub const CAT_BENCHMARK_TOLERANCE: f64 = 1e-3;
pub const SQUEEZED_RELATIVE_TOLERANCE: f64 = 1e-6;
pub const SQUEEZED_MAX_SIDE: usize = 801;
pub const SQUEEZED_TIME_LIMIT: Duration = Duration::from_secs(10);
pub const TRACE_RELATIVE_TOLERANCE: f64 = 1e-5;
pub const ANALYTIC_TOLERANCE: f64 = 1e-4;
pub const INVARIANCE_TOLERANCE: f64 = 1e-8;
pub const MOMENT_RELATIVE_TOLERANCE: f64 = 1e-5;
pub const GATE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{mark}  {:<36} {}", self.name, self.detail)
    }
}

/// Every acceptance check, in a fixed order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        check_squeezed_oracle(),
        check_trace_convergence(),
        check_analytic_equivalence(),
        check_invariance(),
        check_cat_benchmark_point(),
        check_cat_maximum(),
        check_cat_large_separation(),
        check_gaussian_no_purification(),
        check_cat_purification(),
        check_moment_identities(),
        check_gate_oracle(),
        check_surface_properties(),
    ]
}

pub fn format_table(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&o.to_string());
        s.push('\n');
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    s.push_str(&format!("{passed}/{} checks passed\n", outcomes.len()));
    s
}

fn default_opts() -> ConvergeOptions {
    ConvergeOptions::default()
}

fn bell_entropy(alpha: f64, beta: f64, x1: f64, sigma: f64) -> Result<(f64, bool)> {
    let k = reduce_gaussian(&make_bell(alpha, beta, x1, 0.0, sigma)?, Subsystem::First);
    let r = converge(&k, &default_opts())?;
    Ok((r.entropy_bits, r.converged))
}

fn cat_entropy(a0_sq: f64, d: f64) -> Result<(f64, bool)> {
    let (a0, a1) = cat_amplitudes(a0_sq)?;
    let r = converge(
        &reduce_mixture(&make_cat(a0, a1, d)?, Subsystem::First)?,
        &default_opts(),
    )?;
    Ok((r.entropy_bits, r.converged))
}

fn binary_entropy(p: f64) -> f64 {
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Squeezed states against the closed-form entropy for `r` in {0.3, 0.5, 1}.
pub fn check_squeezed_oracle() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let opts = ConvergeOptions {
            tol_sigfigs: 7,
            max_side: SQUEEZED_MAX_SIDE,
            ..ConvergeOptions::default()
        };
        let mut ok = true;
        let mut parts = Vec::new();
        for r in [0.3, 0.5, 1.0] {
            let start = Instant::now();
            let res = converge(
                &reduce_gaussian(&make_squeezed(r)?, Subsystem::First),
                &opts,
            )?;
            let elapsed = start.elapsed();
            let want = squeezed_entanglement(SqueezingParameter::new(r)?);
            let rel = (res.entropy_bits - want).abs() / want;
            ok &= res.converged
                && rel < SQUEEZED_RELATIVE_TOLERANCE
                && res.grid.side() <= SQUEEZED_MAX_SIDE
                && elapsed <= SQUEEZED_TIME_LIMIT;
            parts.push(format!("r={r}: rel={rel:.1e} side={}", res.grid.side()));
        }
        Ok((ok, parts.join("; ")))
    };
    CheckOutcome::from_result("squeezed-state oracle", run())
}

/// Eigenvalue sums of canonical Bell kernels on a 201-point grid spanning ten
/// standard deviations, against the closed-form trace.
pub fn check_trace_convergence() -> CheckOutcome {
    check_trace_convergence_with(trace_analytic_bell)
}

/// [`check_trace_convergence`] against an arbitrary trace formula.
pub fn check_trace_convergence_with(trace: impl Fn(f64, f64) -> Result<f64>) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for alpha in [0.5, 1.0, 2.0] {
            for beta in [0.5, 1.0, 2.0] {
                let k = bell_canonical_kernel(alpha, beta)?;
                let w = k.window();
                let grid = GridSpec::new(100, w.half_width / 100.0, w.center)?;
                let (_, spectrum) = evaluate_on_grid(&k, grid, 201)?;
                let want = trace(alpha, beta)?;
                worst = worst.max(((spectrum.raw_sum - want) / want).abs());
            }
        }
        Ok((
            worst < TRACE_RELATIVE_TOLERANCE,
            format!("max rel err {worst:.1e} over 9 (alpha, beta) at side 201"),
        ))
    };
    CheckOutcome::from_result("trace convergence", run())
}

/// Numerical entropy of 20 seeded random Bell states against the P formula.
pub fn check_analytic_equivalence() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut worst: f64 = 0.0;
        let mut all_converged = true;
        for _ in 0..20 {
            // uniform on (0.2, 2]
            let alpha = 2.0 - 1.8 * rng.random::<f64>();
            let beta = 2.0 - 1.8 * rng.random::<f64>();
            let (e, converged) = bell_entropy(alpha, beta, 0.0, 1.0)?;
            let want = entanglement_from_p(PParameter::new(2.0 * alpha * alpha * beta * beta)?);
            worst = worst.max((e - want).abs());
            all_converged &= converged;
        }
        Ok((
            all_converged && worst < ANALYTIC_TOLERANCE,
            format!("max |E - E(P)| = {worst:.1e} over 20 seeded points"),
        ))
    };
    CheckOutcome::from_result("analytic vs numeric", run())
}

/// Bell entropy independent of scale length and centre; swapped entropy
/// independent of the measurement outcome.
pub fn check_invariance() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let (alpha, beta) = (0.7, 1.3);
        let (reference, _) = bell_entropy(alpha, beta, 0.0, 1.0)?;
        let mut bell_spread: f64 = 0.0;
        for sigma in [0.5, 1.0, 2.0] {
            for x1 in [0.0, 1.0, 5.0] {
                let (e, converged) = bell_entropy(alpha, beta, x1, sigma)?;
                let gap = if converged {
                    (e - reference).abs()
                } else {
                    f64::INFINITY
                };
                bell_spread = bell_spread.max(gap);
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0xab);
        let mut outcomes = vec![(0.0, 0.0), (3.0, -2.0)];
        outcomes.extend((0..5).map(|_| (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))));
        let swapped = |a: f64, b: f64| -> Result<f64> {
            let s = swap_bell(0.8, 1.2, 0.3, SwapOutcome::sharp(a, b)?, 1.0)?;
            let r = converge(&reduce_gaussian(&s, Subsystem::First), &default_opts())?;
            Ok(if r.converged {
                r.entropy_bits
            } else {
                f64::NAN
            })
        };
        let swap_reference = swapped(0.0, 0.0)?;
        let mut swap_spread: f64 = 0.0;
        for (a, b) in outcomes {
            let gap = (swapped(a, b)? - swap_reference).abs();
            swap_spread = swap_spread.max(if gap.is_nan() { f64::INFINITY } else { gap });
        }
        Ok((
            bell_spread < INVARIANCE_TOLERANCE && swap_spread < INVARIANCE_TOLERANCE,
            format!("bell spread {bell_spread:.1e}; swapped spread {swap_spread:.1e}"),
        ))
    };
    CheckOutcome::from_result("invariance suite", run())
}

/// The balanced cat state at unit separation against the benchmark value.
pub fn check_cat_benchmark_point() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let (e, converged) = cat_entropy(0.5, 1.0)?;
        Ok((
            converged && (e - CAT_BENCHMARK).abs() <= CAT_BENCHMARK_TOLERANCE,
            format!("E = {e:.6} (benchmark {CAT_BENCHMARK} +/- {CAT_BENCHMARK_TOLERANCE})"),
        ))
    };
    CheckOutcome::from_result("cat benchmark: balanced point", run())
}

/// Along fixed-separation slices the cat entropy peaks at `|a0|^2 = 1/2`.
pub fn check_cat_maximum() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let weights: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let mut ok = true;
        for d in [0.5, 1.0, 2.0] {
            let mut best = (f64::NEG_INFINITY, 0.0);
            for &p in &weights {
                let (e, converged) = cat_entropy(p, d)?;
                ok &= converged;
                if e > best.0 {
                    best = (e, p);
                }
            }
            ok &= best.1 == 0.5;
        }
        Ok((ok, "argmax over |a0|^2 in 0.1..0.9 at d = 0.5, 1, 2".into()))
    };
    CheckOutcome::from_result("cat benchmark: maximum", run())
}

/// Well-separated cat states approach the binary entropy of the weights.
pub fn check_cat_large_separation() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let (e, converged) = cat_entropy(0.3, 4.0)?;
        let limit = binary_entropy(0.3);
        Ok((
            converged && (e - limit).abs() < 1e-3,
            format!("E(d=4) = {e:.6}, limit {limit:.6}"),
        ))
    };
    CheckOutcome::from_result("cat benchmark: large separation", run())
}

/// Swapping two partially correlated states never increases entanglement.
pub fn check_gaussian_no_purification() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let axis: Vec<f64> = (1..=20).map(|i| 0.2 + 0.09 * i as f64).collect();
        let e_of = |p: f64| -> Result<f64> { Ok(entanglement_from_p(PParameter::new(p)?)) };
        let mut bound_ok = true;
        let mut entropy_ok = true;
        for &alpha in &axis {
            for &beta in &axis {
                let ps = swap_p(alpha, beta)?.value();
                let (pa, pb) = (2.0 * alpha.powi(4), 2.0 * beta.powi(4));
                bound_ok &= ps >= pa.max(pb);
                entropy_ok &= e_of(ps)? <= e_of(pa)?.min(e_of(pb)?);
            }
        }
        // pipeline spot checks on a 4 x 4 subgrid
        let mut numeric_ok = true;
        for i in [4, 9, 14, 19] {
            for j in [4, 9, 14, 19] {
                let (alpha, beta) = (axis[i], axis[j]);
                let s = swap_bell(alpha, beta, 0.0, SwapOutcome::sharp(0.0, 0.0)?, 1.0)?;
                let e_swap = converge(&reduce_gaussian(&s, Subsystem::First), &default_opts())?;
                let (ea, _) = bell_entropy(alpha, alpha, 0.0, 1.0)?;
                let (eb, _) = bell_entropy(beta, beta, 0.0, 1.0)?;
                numeric_ok &= e_swap.converged && e_swap.entropy_bits <= ea.min(eb) + 1e-9;
            }
        }
        Ok((
            bound_ok && entropy_ok && numeric_ok,
            format!(
                "P bound {bound_ok}, entropy order {entropy_ok}, pipeline spot checks {numeric_ok}"
            ),
        ))
    };
    CheckOutcome::from_result("gaussian no-purification", run())
}

/// Swapping cat states purifies somewhere on the measurement plane, and less
/// so with a finite measurement resolution.
pub fn check_cat_purification() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let grid: Vec<f64> = (0..21).map(|i| -2.0 + 0.2 * i as f64).collect();
        let a0 = Complex64::new(0.3f64.sqrt(), 0.0);
        let count = |mu: f64| -> Result<usize> {
            let reports = purification_scan(a0, 1.0, mu, &grid, &grid, &default_opts())?;
            Ok(reports
                .iter()
                .filter(|r| r.e_swapped > CAT_BENCHMARK)
                .count())
        };
        let (sharp, blurred) = (count(0.0)?, count(0.5)?);
        Ok((
            sharp >= 1 && blurred < sharp,
            format!("cells above {CAT_BENCHMARK}: {sharp} at mu=0, {blurred} at mu=0.5 (of 441)"),
        ))
    };
    CheckOutcome::from_result("cat purification", run())
}

fn moment_defect(kernel: &DensityKernel) -> Result<f64> {
    let res = converge(kernel, &default_opts())?;
    let mut worst: f64 = 0.0;
    for power in 1..=3 {
        let quad = trace_moment(kernel, power, kernel.window(), 150)?;
        let sum = res.spectrum.moment(power);
        worst = worst.max(((sum - quad) / quad).abs());
    }
    Ok(worst)
}

/// Eigenvalue power sums against quadrature traces of kernel powers.
pub fn check_moment_identities() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let bell = reduce_gaussian(&make_bell(0.8, 1.1, 0.5, 0.2, 1.0)?, Subsystem::First);
        let (a0, a1) = cat_amplitudes(0.3)?;
        let cat = reduce_mixture(&make_cat(a0, a1, 1.0)?, Subsystem::First)?;
        let (db, dc) = (moment_defect(&bell)?, moment_defect(&cat)?);
        Ok((
            db < MOMENT_RELATIVE_TOLERANCE && dc < MOMENT_RELATIVE_TOLERANCE,
            format!("max rel defect n=1..3: bell {db:.1e}, cat {dc:.1e}"),
        ))
    };
    CheckOutcome::from_result("moment identities", run())
}

/// Grid-applied entangler on a Gaussian product against the closed form.
pub fn check_gate_oracle() -> CheckOutcome {
    check_gate_oracle_on(150, 0.05)
}

pub fn check_gate_oracle_on(n: usize, delta: f64) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for (alpha, beta, sigma) in [(1.0, 1.0, 1.0), (1.2, 0.9, 0.9), (0.9, 0.8, 1.0)] {
            let product = move |x: f64, y: f64| {
                Complex64::new(
                    (-(x * x) / (alpha * alpha * sigma * sigma)
                        - y * y / (beta * beta * sigma * sigma))
                        .exp(),
                    0.0,
                )
            };
            let input = GridWavefunction::sample(&product, n, delta)?;
            let out = apply_entangler_grid(&input, sigma, Direction::Forward)?;
            // the transform of exp(-x^2 / (alpha sigma)^2) carries a factor alpha
            let want =
                GridWavefunction::sample(&make_bell(alpha, beta, 0.0, 0.0, sigma)?, n, delta)?
                    .scaled(Complex64::new(alpha, 0.0));
            worst = worst.max(out.max_abs_diff(&want));
        }
        Ok((
            worst < GATE_TOLERANCE,
            format!("max-norm error {worst:.1e} on n={n}, delta={delta}"),
        ))
    };
    CheckOutcome::from_result("gate oracle", run())
}

/// Shape properties of the entropy surfaces: monotone decrease of Bell
/// entropy along the diagonal and the `|a0|^2 <-> 1 - |a0|^2` symmetry of cats.
pub fn check_surface_properties() -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let mut monotone = true;
        let mut previous = f64::INFINITY;
        for i in 1..=10 {
            let t = 0.2 * i as f64;
            let mut params = BTreeMap::new();
            params.insert("alpha".to_string(), t);
            params.insert("beta".to_string(), t);
            let e = evaluate(Family::Bell, &params, &default_opts())?.entropy_bits;
            monotone &= e < previous;
            previous = e;
        }
        let mut asymmetry: f64 = 0.0;
        for p in [0.1, 0.2, 0.3, 0.4] {
            asymmetry =
                asymmetry.max((cat_entropy(p, 1.0)?.0 - cat_entropy(1.0 - p, 1.0)?.0).abs());
        }
        Ok((
            monotone && asymmetry < INVARIANCE_TOLERANCE,
            format!("bell diagonal monotone {monotone}; cat weight asymmetry {asymmetry:.1e}"),
        ))
    };
    CheckOutcome::from_result("figure-surface properties", run())
}

/// Closed-form trace of the canonical kernel, used by the negative control.
pub fn canonical_trace(alpha: f64, beta: f64) -> f64 {
    PI.sqrt() / (2.0 * alpha * beta)
}
