//! Swapped states against direct numerical integration of the protocol:
//! `psi_out(x, z) = int du dv dy psi_12(x, y) psi_34(y + v, z) exp(-2 i y u / sigma^2)`
//! weighted by Gaussian projections of width `mu sigma` around `(a, b)` (a
//! point evaluation at `u = a`, `v = b` when `mu = 0`).

use cvent::{
    analytic::p_parameter, make_bell, make_cat, swap_bell, swap_cat, swap_p,
    GaussianBipartiteState, SwapOutcome, Wavefunction,
};
use num_complex::Complex64;

fn linspace(lo: f64, hi: f64, n: usize) -> (Vec<f64>, f64) {
    let h = (hi - lo) / (n - 1) as f64;
    ((0..n).map(|i| lo + h * i as f64).collect(), h)
}

/// Inner integral over the measured particle's partner coordinate.
fn inner<L: Fn(f64) -> Complex64, R: Fn(f64) -> Complex64>(
    left: L,
    right: R,
    u: f64,
    sigma: f64,
) -> Complex64 {
    let (ys, h) = linspace(-9.0, 9.0, 721);
    ys.iter()
        .map(|&y| {
            left(y) * right(y) * Complex64::new(0.0, -2.0 * y * u / (sigma * sigma)).exp() * h
        })
        .sum()
}

fn brute_force<W1: Wavefunction, W2: Wavefunction>(
    psi12: &W1,
    psi34: &W2,
    outer_second_first: bool,
    outcome: SwapOutcome,
    sigma: f64,
    x: f64,
    z: f64,
) -> Complex64 {
    // outer_second_first: particle 3 is outer (Bell protocol) or particle 4 is (cat protocol)
    let right = |y: f64, v: f64| {
        if outer_second_first {
            psi34.amplitude(z, y + v)
        } else {
            psi34.amplitude(y + v, z)
        }
    };
    if outcome.mu == 0.0 {
        return inner(
            |y| psi12.amplitude(x, y),
            |y| right(y, outcome.b),
            outcome.a,
            sigma,
        );
    }
    let width = outcome.mu * sigma;
    let (us, hu) = linspace(outcome.a - 6.0 * width, outcome.a + 6.0 * width, 41);
    let (vs, hv) = linspace(outcome.b - 6.0 * width, outcome.b + 6.0 * width, 41);
    let mut acc = Complex64::ZERO;
    for &u in &us {
        let wu = (-(u - outcome.a).powi(2) / (width * width)).exp();
        for &v in &vs {
            let wv = (-(v - outcome.b).powi(2) / (width * width)).exp();
            acc +=
                inner(|y| psi12.amplitude(x, y), |y| right(y, v), u, sigma) * (wu * wv * hu * hv);
        }
    }
    acc
}

/// Compare amplitude ratios against a reference point; overall constants drop out.
fn assert_same_state<W: Wavefunction>(
    closed: &W,
    numeric: impl Fn(f64, f64) -> Complex64,
    tol: f64,
) {
    let reference = (0.1, -0.2);
    let nref = numeric(reference.0, reference.1);
    let cref = closed.amplitude(reference.0, reference.1);
    for (x, z) in [(0.5, 0.3), (-0.4, 0.6), (0.9, -0.7), (-0.8, -0.5)] {
        let want = numeric(x, z) / nref;
        let got = closed.amplitude(x, z) / cref;
        assert!(
            (want - got).norm() < tol * want.norm().max(1e-3),
            "at ({x}, {z}): {got} vs {want}"
        );
    }
}

#[test]
fn sharp_bell_swap_matches_quadrature() {
    for (alpha, beta, c, sigma, a, b) in [
        (1.0, 1.0, 0.0, 1.0, 0.0, 0.0),
        (0.8, 1.3, 0.4, 1.2, 0.5, -0.7),
    ] {
        let psi12 = make_bell(alpha, alpha, 0.0, c, sigma).unwrap();
        let psi34 = make_bell(beta, beta, 0.0, c, sigma).unwrap();
        let outcome = SwapOutcome::sharp(a, b).unwrap();
        let closed = swap_bell(alpha, beta, c, outcome, sigma).unwrap();
        assert_same_state(
            &closed,
            |x, z| brute_force(&psi12, &psi34, true, outcome, sigma, x, z),
            1e-9,
        );
    }
}

#[test]
fn finite_width_bell_swap_matches_quadrature() {
    let (alpha, beta, c, sigma) = (0.9, 1.1, 0.2, 1.0);
    let psi12 = make_bell(alpha, alpha, 0.0, c, sigma).unwrap();
    let psi34 = make_bell(beta, beta, 0.0, c, sigma).unwrap();
    let outcome = SwapOutcome::new(0.3, -0.4, 0.6).unwrap();
    let closed = swap_bell(alpha, beta, c, outcome, sigma).unwrap();
    assert_same_state(
        &closed,
        |x, z| brute_force(&psi12, &psi34, true, outcome, sigma, x, z),
        1e-6,
    );
}

#[test]
fn cat_swap_matches_quadrature() {
    let (a0, a1) = (
        Complex64::new(0.3f64.sqrt(), 0.0),
        Complex64::new(0.7f64.sqrt(), 0.0),
    );
    let d = 0.8;
    let cat = make_cat(a0, a1, d).unwrap();
    for outcome in [
        SwapOutcome::sharp(0.0, 0.0).unwrap(),
        SwapOutcome::sharp(0.6, -0.3).unwrap(),
        SwapOutcome::new(0.4, 0.5, 0.5).unwrap(),
    ] {
        let closed = swap_cat(a0, a1, d, outcome).unwrap();
        let tol = if outcome.mu == 0.0 { 1e-9 } else { 1e-6 };
        assert_same_state(
            &closed,
            |x, z| brute_force(&cat, &cat, false, outcome, 1.0, x, z),
            tol,
        );
    }
}

#[test]
fn finite_resolution_never_beats_sharp_bell_swap() {
    // P of the swapped state grows with the measurement width
    for (alpha, beta) in [(0.5, 0.5), (0.7, 1.4), (1.5, 0.6), (2.0, 2.0)] {
        let sharp = swap_p(alpha, beta).unwrap().value();
        let mut previous = sharp;
        for mu in [0.1, 0.3, 0.6, 1.0, 2.0] {
            let s: GaussianBipartiteState = swap_bell(
                alpha,
                beta,
                0.0,
                SwapOutcome::new(0.2, 0.1, mu).unwrap(),
                1.0,
            )
            .unwrap();
            let p = p_parameter(&s).unwrap().value();
            assert!(
                p >= previous * (1.0 - 1e-12),
                "alpha={alpha} beta={beta} mu={mu}: {p} < {previous}"
            );
            previous = p;
        }
        assert!(previous > sharp);
    }
}

fn swapped_cat_entropy(a0_sq: f64, d: f64, outcome: SwapOutcome) -> f64 {
    let (a0, a1) = cvent::cat_amplitudes(a0_sq).unwrap();
    let k = cvent::reduce_mixture(
        &swap_cat(a0, a1, d, outcome).unwrap(),
        cvent::Subsystem::First,
    )
    .unwrap();
    let r = cvent::converge(&k, &cvent::ConvergeOptions::default()).unwrap();
    assert!(r.converged);
    r.entropy_bits
}

#[test]
fn swapped_cats_approach_one_bit() {
    let centre = SwapOutcome::sharp(0.0, 0.0).unwrap();
    let e: Vec<f64> = [2.0, 3.0, 4.0]
        .iter()
        .map(|&d| swapped_cat_entropy(0.3, d, centre))
        .collect();
    assert!(e.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    assert!(e.iter().all(|&v| v <= 1.0 + 1e-12));
    assert!(1.0 - e[2] < 1e-6);

    // at d = 2 the swap beats the input cat
    let (a0, a1) = cvent::cat_amplitudes(0.3).unwrap();
    let k =
        cvent::reduce_mixture(&make_cat(a0, a1, 2.0).unwrap(), cvent::Subsystem::First).unwrap();
    let initial = cvent::converge(&k, &cvent::ConvergeOptions::default())
        .unwrap()
        .entropy_bits;
    assert!(e[0] > initial);
}

#[test]
fn coincident_or_unentangled_inputs_give_product_states() {
    for outcome in [
        SwapOutcome::sharp(0.3, -0.2).unwrap(),
        SwapOutcome::new(0.3, -0.2, 0.7).unwrap(),
    ] {
        assert!(swapped_cat_entropy(0.3, 0.0, outcome).abs() < 1e-9);
        assert!(swapped_cat_entropy(1.0, 1.0, outcome).abs() < 1e-9);
    }
    let grid = [-1.0, 0.0, 1.0];
    for mu in [0.0, 0.5] {
        let reports = cvent::purification_scan(
            Complex64::new(1.0, 0.0),
            1.0,
            mu,
            &grid,
            &grid,
            &cvent::ConvergeOptions::default(),
        )
        .unwrap();
        assert_eq!(reports.len(), 9);
        assert!(reports.iter().all(|r| r.gain <= 1e-9));
    }
}

#[test]
fn scan_order_is_row_major() {
    let grid_a = [-1.0, 0.5];
    let grid_b = [0.0, 1.0, 2.0];
    let reports = cvent::purification_scan(
        Complex64::new(0.3f64.sqrt(), 0.0),
        1.0,
        0.0,
        &grid_a,
        &grid_b,
        &cvent::ConvergeOptions::default(),
    )
    .unwrap();
    let order: Vec<(f64, f64)> = reports.iter().map(|r| (r.outcome.a, r.outcome.b)).collect();
    assert_eq!(
        order,
        vec![
            (-1.0, 0.0),
            (-1.0, 1.0),
            (-1.0, 2.0),
            (0.5, 0.0),
            (0.5, 1.0),
            (0.5, 2.0)
        ]
    );
}
