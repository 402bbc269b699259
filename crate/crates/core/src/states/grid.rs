//! Grid-sampled wavefunctions and dense-quadrature gate application.
//!
//! These exist as an independent route to the closed-form states: the gates
//! are applied by brute-force rectangle-rule quadrature on a square lattice.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Subsystem, Wavefunction};
use crate::error::{require_positive, Error, Result};

/// Largest amplitude, relative to the peak, allowed where a gate would drop it.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// `psi` sampled at `(x_p, y_q) = (p delta, q delta)` for `p, q` in `-n..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    n: usize,
    delta: f64,
    // row-major, x index outer
    values: Vec<Complex64>,
}

impl GridWavefunction {
    pub fn zeros(n: usize, delta: f64) -> Result<Self> {
        require_positive("delta", delta)?;
        let side = 2 * n + 1;
        Ok(Self {
            n,
            delta,
            values: vec![Complex64::ZERO; side * side],
        })
    }

    pub fn sample<W: Wavefunction + ?Sized>(psi: &W, n: usize, delta: f64) -> Result<Self> {
        let mut grid = Self::zeros(n, delta)?;
        let side = grid.side();
        for p in 0..side {
            let x = grid.coordinate(p);
            for q in 0..side {
                grid.values[p * side + q] = psi.amplitude(x, grid.coordinate(q));
            }
        }
        Ok(grid)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    /// Coordinate of lattice index `i` (index `n` is the origin).
    pub fn coordinate(&self, i: usize) -> f64 {
        (i as f64 - self.n as f64) * self.delta
    }

    pub fn get(&self, p: usize, q: usize) -> Complex64 {
        self.values[p * self.side() + q]
    }

    fn set(&mut self, p: usize, q: usize, v: Complex64) {
        let side = self.side();
        self.values[p * side + q] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest amplitude on the outer ring of the lattice, relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let last = self.side() - 1;
        let mut edge: f64 = 0.0;
        for i in 0..self.side() {
            edge = edge
                .max(self.get(0, i).norm())
                .max(self.get(last, i).norm())
                .max(self.get(i, 0).norm())
                .max(self.get(i, last).norm());
        }
        edge / peak
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.side(), other.side(), "grid sizes differ");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Multiply every sample by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    fn ensure_negligible_boundary(&self) -> Result<()> {
        let ratio = self.boundary_ratio();
        if ratio > BOUNDARY_TOLERANCE {
            return Err(Error::BoundaryMass(ratio));
        }
        Ok(())
    }
}

impl Wavefunction for GridWavefunction {
    /// Bilinear interpolation between lattice points, zero outside the lattice.
    fn amplitude(&self, x: f64, y: f64) -> Complex64 {
        let last = (self.side() - 1) as f64;
        let u = x / self.delta + self.n as f64;
        let v = y / self.delta + self.n as f64;
        if !(0.0..=last).contains(&u) || !(0.0..=last).contains(&v) {
            return Complex64::ZERO;
        }
        let (p0, q0) = (u.floor() as usize, v.floor() as usize);
        let (p1, q1) = ((p0 + 1).min(self.side() - 1), (q0 + 1).min(self.side() - 1));
        let (fu, fv) = (u - p0 as f64, v - q0 as f64);
        self.get(p0, q0) * ((1.0 - fu) * (1.0 - fv))
            + self.get(p1, q0) * (fu * (1.0 - fv))
            + self.get(p0, q1) * ((1.0 - fu) * fv)
            + self.get(p1, q1) * (fu * fv)
    }
}

/// Continuous Fourier (Hadamard) gate `|x> -> (1/(sqrt(pi) sigma)) int e^{2ixy/sigma^2} |y> dy`
/// on one party, applied by dense rectangle-rule quadrature. The inverse flips
/// the sign of the phase.
pub fn apply_fourier_grid(
    w: &GridWavefunction,
    subsystem: Subsystem,
    sigma: f64,
    direction: Direction,
) -> Result<GridWavefunction> {
    require_positive("sigma", sigma)?;
    w.ensure_negligible_boundary()?;
    let side = w.side();
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    let prefactor = w.delta / (PI.sqrt() * sigma);
    let kernel: Vec<Complex64> = (0..side * side)
        .map(|idx| {
            let (k, p) = (idx / side, idx % side);
            let phase = sign * 2.0 * w.coordinate(k) * w.coordinate(p) / (sigma * sigma);
            Complex64::from_polar(prefactor, phase)
        })
        .collect();

    let mut out = GridWavefunction::zeros(w.n, w.delta)?;
    for k in 0..side {
        let row = &kernel[k * side..(k + 1) * side];
        for other in 0..side {
            let acc: Complex64 = match subsystem {
                Subsystem::First => (0..side).map(|p| row[p] * w.get(p, other)).sum(),
                Subsystem::Second => (0..side).map(|p| row[p] * w.get(other, p)).sum(),
            };
            match subsystem {
                Subsystem::First => out.set(k, other, acc),
                Subsystem::Second => out.set(other, k, acc),
            }
        }
    }
    Ok(out)
}

/// Controlled-NOT `|x>|y> -> |x>|y + x>` (forward) or `|x>|y - x>` (inverse),
/// party one controlling. Exact on the lattice: it is a pure index shear.
pub fn apply_cnot_grid(w: &GridWavefunction, direction: Direction) -> Result<GridWavefunction> {
    let side = w.side() as isize;
    let n = w.n as isize;
    let shift = |p: isize| -> isize {
        match direction {
            // output (x, y) reads input (x, y - x)
            Direction::Forward => -(p - n),
            Direction::Inverse => p - n,
        }
    };

    let peak = w.max_abs();
    let mut dropped: f64 = 0.0;
    for p in 0..side {
        // input index j lands on output index q = j - shift(p)
        for j in 0..side {
            let q = j - shift(p);
            if !(0..side).contains(&q) {
                dropped = dropped.max(w.get(p as usize, j as usize).norm());
            }
        }
    }
    if peak > 0.0 && dropped / peak > BOUNDARY_TOLERANCE {
        return Err(Error::BoundaryMass(dropped / peak));
    }

    let mut out = GridWavefunction::zeros(w.n, w.delta)?;
    for p in 0..side {
        for q in 0..side {
            let j = q + shift(p);
            if (0..side).contains(&j) {
                out.set(p as usize, q as usize, w.get(p as usize, j as usize));
            }
        }
    }
    Ok(out)
}

/// Entangler `C12 F1` (forward) or its inverse `F1^dagger C12^dagger`.
pub fn apply_entangler_grid(
    w: &GridWavefunction,
    sigma: f64,
    direction: Direction,
) -> Result<GridWavefunction> {
    match direction {
        Direction::Forward => {
            let f = apply_fourier_grid(w, Subsystem::First, sigma, Direction::Forward)?;
            apply_cnot_grid(&f, Direction::Forward)
        }
        Direction::Inverse => {
            let c = apply_cnot_grid(w, Direction::Inverse)?;
            apply_fourier_grid(&c, Subsystem::First, sigma, Direction::Inverse)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(width_x: f64, width_y: f64, x0: f64, y0: f64) -> impl Fn(f64, f64) -> Complex64 {
        move |x, y| {
            Complex64::new(
                (-(x - x0).powi(2) / (width_x * width_x) - (y - y0).powi(2) / (width_y * width_y))
                    .exp(),
                0.0,
            )
        }
    }

    #[test]
    fn fourier_round_trip() {
        let w = GridWavefunction::sample(&gaussian(1.0, 0.8, 0.5, -0.3), 100, 0.1).unwrap();
        for sub in [Subsystem::First, Subsystem::Second] {
            let f = apply_fourier_grid(&w, sub, 1.0, Direction::Forward).unwrap();
            let back = apply_fourier_grid(&f, sub, 1.0, Direction::Inverse).unwrap();
            assert!(back.max_abs_diff(&w) < 1e-8, "{:?}", back.max_abs_diff(&w));
        }
    }

    #[test]
    fn fourier_of_centred_gaussian() {
        // exp(-x^2/(alpha sigma)^2) -> alpha exp(-alpha^2 x^2/sigma^2)
        let (alpha, sigma) = (1.3, 1.1);
        let w =
            GridWavefunction::sample(&gaussian(alpha * sigma, 1.0, 0.0, 0.0), 120, 0.08).unwrap();
        let f = apply_fourier_grid(&w, Subsystem::First, sigma, Direction::Forward).unwrap();
        let want = GridWavefunction::sample(
            &move |x: f64, y: f64| {
                Complex64::new(
                    alpha * (-alpha * alpha * x * x / (sigma * sigma) - y * y).exp(),
                    0.0,
                )
            },
            120,
            0.08,
        )
        .unwrap();
        assert!(f.max_abs_diff(&want) < 1e-10);
    }

    #[test]
    fn fourier_twice_is_parity() {
        let w = GridWavefunction::sample(&gaussian(0.9, 1.0, 0.7, 0.0), 100, 0.1).unwrap();
        let ff = apply_fourier_grid(
            &apply_fourier_grid(&w, Subsystem::First, 1.0, Direction::Forward).unwrap(),
            Subsystem::First,
            1.0,
            Direction::Forward,
        )
        .unwrap();
        let flipped = GridWavefunction::sample(&gaussian(0.9, 1.0, -0.7, 0.0), 100, 0.1).unwrap();
        assert!(ff.max_abs_diff(&flipped) < 1e-8);
    }

    #[test]
    fn fourier_requires_negligible_boundary() {
        let w = GridWavefunction::sample(&gaussian(4.0, 1.0, 0.0, 0.0), 50, 0.1).unwrap();
        assert!(matches!(
            apply_fourier_grid(&w, Subsystem::First, 1.0, Direction::Forward),
            Err(Error::BoundaryMass(_))
        ));
    }

    #[test]
    fn cnot_moves_a_point_mass() {
        let mut w = GridWavefunction::zeros(20, 0.5).unwrap();
        // (x0, y0) = (1.5, -2.0)
        w.set(20 + 3, 20 - 4, Complex64::ONE);
        let c = apply_cnot_grid(&w, Direction::Forward).unwrap();
        // expect (x0, y0 + x0) = (1.5, -0.5)
        assert_eq!(c.get(23, 19), Complex64::ONE);
        assert_eq!(c.max_abs(), 1.0);
        let back = apply_cnot_grid(&c, Direction::Inverse).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn cnot_round_trip_is_exact() {
        let w = GridWavefunction::sample(&gaussian(1.0, 1.0, 0.2, 0.1), 100, 0.1).unwrap();
        let c = apply_cnot_grid(&w, Direction::Forward).unwrap();
        let back = apply_cnot_grid(&c, Direction::Inverse).unwrap();
        // only the amplitude sheared past the edge (below the boundary tolerance) is lost
        assert!(back.max_abs_diff(&w) <= BOUNDARY_TOLERANCE * w.max_abs());
        let inner = (60..141).flat_map(|p| (60..141).map(move |q| (p, q)));
        assert!(inner
            .into_iter()
            .all(|(p, q)| back.get(p, q) == w.get(p, q)));
    }

    #[test]
    fn cnot_rejects_shear_off_grid() {
        let w = GridWavefunction::sample(&gaussian(3.0, 3.0, 0.0, 0.0), 60, 0.2).unwrap();
        assert!(matches!(
            apply_cnot_grid(&w, Direction::Forward),
            Err(Error::BoundaryMass(_))
        ));
    }

    #[test]
    fn interpolation_is_exact_on_lattice() {
        let w = GridWavefunction::sample(&gaussian(1.0, 2.0, 0.0, 0.0), 10, 0.25).unwrap();
        assert_eq!(w.amplitude(0.5, -0.75), w.get(12, 7));
        assert_eq!(w.amplitude(100.0, 0.0), Complex64::ZERO);
    }
}
