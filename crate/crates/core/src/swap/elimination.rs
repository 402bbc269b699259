//! Gaussian integrals over a subset of variables of `exp(-v^T Q v + l^T v)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exponent `-sum_ij q_ij v_i v_j + sum_i l_i v_i` with complex symmetric `q`.
/// Constant factors are dropped throughout.
#[derive(Debug, Clone)]
pub(crate) struct GaussianExponent {
    dim: usize,
    q: Vec<Complex64>,
    l: Vec<Complex64>,
}

impl GaussianExponent {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            q: vec![Complex64::ZERO; dim * dim],
            l: vec![Complex64::ZERO; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Add `coef * v_i * v_j` to the exponent.
    pub fn add_product(&mut self, i: usize, j: usize, coef: Complex64) {
        if i == j {
            self.q[i * self.dim + i] -= coef;
        } else {
            self.q[i * self.dim + j] -= coef / 2.0;
            self.q[j * self.dim + i] -= coef / 2.0;
        }
    }

    /// Add `coef * v_i` to the exponent.
    pub fn add_linear(&mut self, i: usize, coef: Complex64) {
        self.l[i] += coef;
    }

    pub fn quadratic(&self, i: usize, j: usize) -> Complex64 {
        self.q[i * self.dim + j]
    }

    pub fn linear(&self, i: usize) -> Complex64 {
        self.l[i]
    }

    /// Integrate `v_k` over the real line:
    /// `int exp(-m z^2 + t z) dz ~ exp(t^2 / 4m)` with `t` linear in the rest.
    pub fn integrate_out(&self, k: usize) -> Result<Self> {
        let m = self.quadratic(k, k);
        if m.re.is_nan() || m.re <= 0.0 {
            return Err(Error::Domain {
                name: "gaussian integral",
                reason: format!("variable {k} has non-decaying weight {m}"),
            });
        }
        let keep: Vec<usize> = (0..self.dim).filter(|&i| i != k).collect();
        let mut out = Self::new(self.dim - 1);
        for (a, &i) in keep.iter().enumerate() {
            out.l[a] = self.l[i] - self.l[k] * self.quadratic(i, k) / m;
            for (b, &j) in keep.iter().enumerate() {
                out.q[a * out.dim + b] =
                    self.quadratic(i, j) - self.quadratic(i, k) * self.quadratic(j, k) / m;
            }
        }
        Ok(out)
    }
}
