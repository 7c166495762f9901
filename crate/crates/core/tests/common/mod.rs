// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Test-only oracles, independent of the library's propagation paths.

#![allow(dead_code)]

use num_complex::Complex64;

/// Ladder index for storage slot `i` on an `n`-state grid, `m` in `[-n/2, n/2)`.
pub fn ladder_index(i: usize, n: usize) -> i64 {
    let m = i as i64;
    if m < (n as i64) / 2 {
        m
    } else {
        m - n as i64
    }
}

/// Dense right-hand side `psi' = -(i/kbar) H psi` for the pulse Hamiltonian
/// `rho^2/2 - k cos(phi)` on the periodic `n`-point grid. `cos(phi)` couples
/// neighbouring rungs cyclically, exactly as multiplication on `phi_j = 2 pi j/n`.
pub struct DenseOracle {
    n: usize,
    generator: Vec<Complex64>,
    diag_kinetic: Vec<f64>,
    kbar: f64,
}

impl DenseOracle {
    pub fn new(n: usize, kbar: f64, beta: f64, kick_strength: f64) -> Self {
        let minus_i_over_kbar = Complex64::new(0.0, -1.0 / kbar);
        let mut generator = vec![Complex64::new(0.0, 0.0); n * n];
        let mut diag_kinetic = vec![0.0; n];
        for row in 0..n {
            let rho = (ladder_index(row, n) as f64 + beta) * kbar;
            diag_kinetic[row] = 0.5 * rho * rho;
            generator[row * n + row] += minus_i_over_kbar * diag_kinetic[row];
            for col in [(row + 1) % n, (row + n - 1) % n] {
                generator[row * n + col] += minus_i_over_kbar * (-0.5 * kick_strength);
            }
        }
        Self {
            n,
            generator,
            diag_kinetic,
            kbar,
        }
    }

    fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|r| {
                self.generator[r * self.n..(r + 1) * self.n]
                    .iter()
                    .zip(psi)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Classic fourth-order Runge-Kutta over `duration` with `steps` fixed steps.
    pub fn integrate(&self, psi: &[Complex64], duration: f64, steps: usize) -> Vec<Complex64> {
        let h = duration / steps as f64;
        let mut y = psi.to_vec();
        let axpy = |y: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
            y.iter().zip(k).map(|(a, b)| a + b * s).collect()
        };
        for _ in 0..steps {
            let k1 = self.apply(&y);
            let k2 = self.apply(&axpy(&y, &k1, h / 2.0));
            let k3 = self.apply(&axpy(&y, &k2, h / 2.0));
            let k4 = self.apply(&axpy(&y, &k3, h));
            for i in 0..self.n {
                y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
            }
        }
        y
    }

    /// Exact free evolution (the kinetic operator is diagonal here).
    pub fn free(&self, psi: &[Complex64], duration: f64) -> Vec<Complex64> {
        psi.iter()
            .zip(&self.diag_kinetic)
            .map(|(c, e)| c * Complex64::from_polar(1.0, -e * duration / self.kbar))
            .collect()
    }
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `J_n(x)` from the integral `(1/pi) int_0^pi cos(n t - x sin t) dt`, evaluated
/// with the trapezoid rule (spectrally accurate for this periodic integrand).
pub fn bessel_integral(n: i32, x: f64) -> f64 {
    let m = 4096;
    let h = std::f64::consts::PI / m as f64;
    let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
    let interior: f64 = (1..m).map(|i| f(i as f64 * h)).sum();
    (interior + 0.5 * (f(0.0) + f(std::f64::consts::PI))) * h / std::f64::consts::PI
}

/// Mean and standard error of a sample.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
