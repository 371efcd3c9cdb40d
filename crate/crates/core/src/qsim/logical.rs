//! Dense normalized amplitude vector over a small number of logical qubits.
//!
//! Qubit j corresponds to bit j of the basis index (qubit 0 is the least
//! significant bit).

use num_complex::Complex64;
use rand::Rng;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Debug)]
pub struct LogicalState {
    pub ell: usize,
    amps: Vec<Complex64>,
}

impl LogicalState {
    pub fn from_amplitudes(ell: usize, amps: Vec<Complex64>) -> LogicalState {
        assert_eq!(amps.len(), 1 << ell);
        let mut s = LogicalState { ell, amps };
        let norm = s.norm();
        assert!(
            (norm - 1.0).abs() < 1e-9,
            "amplitudes not normalized: norm = {norm}"
        );
        s.normalize();
        s
    }

    pub fn computational(ell: usize, basis: usize) -> LogicalState {
        let mut amps = vec![Complex64::ZERO; 1 << ell];
        amps[basis] = Complex64::ONE;
        LogicalState { ell, amps }
    }

    pub fn single(a0: Complex64, a1: Complex64) -> LogicalState {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        LogicalState {
            ell: 1,
            amps: vec![a0 / norm, a1 / norm],
        }
    }

    pub fn zero() -> LogicalState {
        Self::computational(1, 0)
    }

    pub fn one() -> LogicalState {
        Self::computational(1, 1)
    }

    pub fn plus() -> LogicalState {
        Self::single(Complex64::ONE, Complex64::ONE)
    }

    pub fn minus() -> LogicalState {
        Self::single(Complex64::ONE, -Complex64::ONE)
    }

    /// (|0> + i|1>)/sqrt(2).
    pub fn plus_i() -> LogicalState {
        Self::single(Complex64::ONE, Complex64::I)
    }

    /// (|00> + |11>)/sqrt(2).
    pub fn bell() -> LogicalState {
        let mut amps = vec![Complex64::ZERO; 4];
        amps[0] = Complex64::new(SQRT_HALF, 0.0);
        amps[3] = Complex64::new(SQRT_HALF, 0.0);
        LogicalState { ell: 2, amps }
    }

    /// (|0..0> + |1..1>)/sqrt(2).
    pub fn ghz(ell: usize) -> LogicalState {
        let mut amps = vec![Complex64::ZERO; 1 << ell];
        amps[0] = Complex64::new(SQRT_HALF, 0.0);
        amps[(1 << ell) - 1] = Complex64::new(SQRT_HALF, 0.0);
        LogicalState { ell, amps }
    }

    /// Product of ell copies of |+>.
    pub fn plus_product(ell: usize) -> LogicalState {
        let dim = 1usize << ell;
        let a = Complex64::new((1.0 / dim as f64).sqrt(), 0.0);
        LogicalState {
            ell,
            amps: vec![a; dim],
        }
    }

    /// Haar-ish random state (independent complex Gaussians, normalized).
    pub fn random<R: Rng + ?Sized>(ell: usize, rng: &mut R) -> LogicalState {
        let dim = 1usize << ell;
        let mut amps = Vec::with_capacity(dim);
        for _ in 0..dim {
            // Box-Muller pairs.
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u1.ln()).sqrt();
            amps.push(Complex64::new(r * u2.cos(), r * u2.sin()));
        }
        let mut s = LogicalState { ell, amps };
        s.normalize();
        s
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        assert!(n > 1e-12, "state collapsed to zero norm");
        for a in &mut self.amps {
            *a /= n;
        }
    }

    /// Probability that a standard-basis measurement of qubit j yields 1.
    pub fn prob_one(&self, j: usize) -> f64 {
        let bit = 1usize << j;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Probability that a Hadamard-basis measurement of qubit j yields `h`.
    pub fn had_prob(&self, j: usize, h: bool) -> f64 {
        let bit = 1usize << j;
        let sign = if h { -1.0 } else { 1.0 };
        let mut acc = 0.0;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let v = self.amps[i] + sign * self.amps[i | bit];
                acc += v.norm_sqr() / 2.0;
            }
        }
        acc
    }

    pub fn measure_std<R: Rng + ?Sized>(&mut self, j: usize, rng: &mut R) -> bool {
        let p1 = self.prob_one(j).clamp(0.0, 1.0);
        let outcome = rng.gen_bool(p1);
        self.project_std(j, outcome);
        outcome
    }

    pub fn project_std(&mut self, j: usize, outcome: bool) {
        let bit = 1usize << j;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & bit) != 0) != outcome {
                *a = Complex64::ZERO;
            }
        }
        self.normalize();
    }

    pub fn measure_had<R: Rng + ?Sized>(&mut self, j: usize, rng: &mut R) -> bool {
        let p1 = self.had_prob(j, true).clamp(0.0, 1.0);
        let outcome = rng.gen_bool(p1);
        self.project_had(j, outcome);
        outcome
    }

    pub fn project_had(&mut self, j: usize, outcome: bool) {
        let bit = 1usize << j;
        let sign = if outcome { -1.0 } else { 1.0 };
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let v = (self.amps[i] + sign * self.amps[i | bit]) / 2.0;
                self.amps[i] = v;
                self.amps[i | bit] = sign * v;
            }
        }
        self.normalize();
    }

    /// Pauli Z on qubit j.
    pub fn apply_z(&mut self, j: usize) {
        let bit = 1usize << j;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = -*a;
            }
        }
    }

    /// Exact probabilities of measuring every qubit in the given bases.
    pub fn basis_distribution(&self, basis: &[bool]) -> Vec<f64> {
        assert_eq!(basis.len(), self.ell);
        let mut v = self.amps.clone();
        for (j, &b) in basis.iter().enumerate() {
            if b {
                let bit = 1usize << j;
                for i in 0..v.len() {
                    if i & bit == 0 {
                        let a0 = v[i];
                        let a1 = v[i | bit];
                        v[i] = (a0 + a1) * SQRT_HALF;
                        v[i | bit] = (a0 - a1) * SQRT_HALF;
                    }
                }
            }
        }
        v.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Sample a full measurement in the given bases (collapses the state).
    pub fn sample_basis<R: Rng + ?Sized>(&mut self, basis: &[bool], rng: &mut R) -> Vec<bool> {
        basis
            .iter()
            .enumerate()
            .map(|(j, &b)| {
                if b {
                    self.measure_had(j, rng)
                } else {
                    self.measure_std(j, rng)
                }
            })
            .collect()
    }
}
