//! Two-level (spin) ⊗ discrete-momentum state and its diagnostics.
//!
//! Momentum classes are integers `n ∈ [-N, +N]` in units of the lattice
//! two-photon recoil; the quasimomentum `β ∈ [0, 1)` is stored separately
//! per trajectory and only changes through spontaneous-emission recoil.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default momentum-grid half-width; comfortable for ≤ 10 steps at k ≤ 2.
pub const DEFAULT_HALF_WIDTH: usize = 64;
/// Default edge-leakage threshold; far below Monte Carlo noise at 10³ trajectories.
pub const DEFAULT_EPS_TRUNC: f64 = 1e-8;

/// Internal (hyperfine) state label.
///
/// `One` is |F=1, m_F=0⟩ and `Two` is |F=2, m_F=0⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    One,
    Two,
}

/// Two-component complex amplitude array over discrete momentum classes.
///
/// Layout is `[spin-1 block | spin-2 block]`, each block of length `2N + 1`
/// indexed by `n + N`.
#[derive(Debug, Clone)]
pub struct SpinorState {
    amps: Vec<Complex64>,
    half_width: usize,
    /// Quasimomentum in [0, 1), units of the lattice recoil.
    pub beta: f64,
}

/// Spin-summed momentum probabilities for one walk step.
#[derive(Debug, Clone)]
pub struct MomentumDistribution {
    pub probabilities: Vec<f64>,
    pub half_width: usize,
    pub step_index: usize,
}

impl SpinorState {
    /// Zero state on a grid of half-width `n_half`.
    pub fn zero(n_half: usize, beta: f64) -> Result<Self> {
        if n_half < 2 {
            return Err(Error::InvalidGrid(n_half));
        }
        Ok(SpinorState {
            amps: vec![Complex64::new(0.0, 0.0); 2 * (2 * n_half + 1)],
            half_width: n_half,
            beta: beta.rem_euclid(1.0),
        })
    }

    /// Bragg-prepared ratchet state (|n=0⟩ + e^{iφ}|n=1⟩)/√2 in spin |1⟩.
    pub fn new_ratchet(n_half: usize, phi: f64, beta: f64) -> Result<Self> {
        let mut state = Self::zero(n_half, beta)?;
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        *state.amp_mut(Spin::One, 0) = amp;
        *state.amp_mut(Spin::Two, 1) = Complex64::new(0.0, 0.0);
        *state.amp_mut(Spin::One, 1) = amp * Complex64::from_polar(1.0, phi);
        Ok(state)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Number of momentum classes, `2N + 1`.
    pub fn n_classes(&self) -> usize {
        2 * self.half_width + 1
    }

    fn offset(&self, spin: Spin) -> usize {
        match spin {
            Spin::One => 0,
            Spin::Two => self.n_classes(),
        }
    }

    pub fn amp(&self, spin: Spin, n: i64) -> Complex64 {
        let i = (n + self.half_width as i64) as usize;
        self.amps[self.offset(spin) + i]
    }

    pub fn amp_mut(&mut self, spin: Spin, n: i64) -> &mut Complex64 {
        let i = (n + self.half_width as i64) as usize;
        let off = self.offset(spin);
        &mut self.amps[off + i]
    }

    /// Contiguous amplitude block for one spin component.
    pub fn spin_slice(&self, spin: Spin) -> &[Complex64] {
        let off = self.offset(spin);
        &self.amps[off..off + self.n_classes()]
    }

    pub fn spin_slice_mut(&mut self, spin: Spin) -> &mut [Complex64] {
        let off = self.offset(spin);
        let len = self.n_classes();
        &mut self.amps[off..off + len]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn renormalize(&mut self) {
        let n = self.norm_sq().sqrt();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// Population of one internal state, Σ_n |a_{s,n}|².
    pub fn population(&self, spin: Spin) -> f64 {
        self.spin_slice(spin).iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability stuck at the outermost momentum classes.
    pub fn edge_leakage(&self) -> f64 {
        let n = self.half_width as i64;
        [Spin::One, Spin::Two]
            .into_iter()
            .map(|s| self.amp(s, -n).norm_sqr() + self.amp(s, n).norm_sqr())
            .sum()
    }

    /// Fails with a grid-too-small error when edge leakage exceeds `eps_trunc`.
    pub fn check_leakage(&self, eps_trunc: f64, context: &str) -> Result<()> {
        let leakage = self.edge_leakage();
        if leakage >= eps_trunc {
            return Err(Error::GridTooSmall {
                leakage,
                limit: eps_trunc,
                context: if context.is_empty() {
                    String::new()
                } else {
                    format!(" ({context})")
                },
            });
        }
        Ok(())
    }

    /// Spin-summed momentum distribution P(n) = Σ_s |a_{s,n}|².
    pub fn momentum_distribution(&self, step_index: usize) -> MomentumDistribution {
        let nc = self.n_classes();
        let mut probabilities = vec![0.0; nc];
        for (i, p) in probabilities.iter_mut().enumerate() {
            *p = self.amps[i].norm_sqr() + self.amps[nc + i].norm_sqr();
        }
        MomentumDistribution {
            probabilities,
            half_width: self.half_width,
            step_index,
        }
    }

    /// Multiply the whole state by a scalar.
    pub fn scale(&mut self, z: Complex64) {
        for a in &mut self.amps {
            *a *= z;
        }
    }
}

impl MomentumDistribution {
    /// Momentum class for a probability index.
    pub fn n_at(&self, idx: usize) -> i64 {
        idx as i64 - self.half_width as i64
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Iterator over (n, P(n)) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n0 = -(self.half_width as i64);
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (n0 + i as i64, p))
    }
}

/// Wrap a quasimomentum into [0, 1).
pub fn wrap_beta(beta: f64) -> f64 {
    let b = beta.rem_euclid(1.0);
    if b >= 1.0 {
        0.0
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn ratchet_populations() {
        let s = SpinorState::new_ratchet(16, FRAC_PI_2, 0.0).unwrap();
        let d = s.momentum_distribution(0);
        assert!((d.probabilities[16] - 0.5).abs() < 1e-15);
        assert!((d.probabilities[17] - 0.5).abs() < 1e-15);
        assert!((s.population(Spin::Two)).abs() < 1e-15);
        assert!((s.population(Spin::One) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ratchet_norm_exact() {
        let s = SpinorState::new_ratchet(16, 0.0, 0.0).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn undersized_grid_rejected() {
        assert!(matches!(
            SpinorState::new_ratchet(1, 0.0, 0.0),
            Err(Error::InvalidGrid(1))
        ));
    }

    #[test]
    fn distribution_sums_to_one() {
        let s = SpinorState::new_ratchet(8, 1.0, 0.3).unwrap();
        assert!((s.momentum_distribution(0).total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn distribution_invariant_under_global_phase() {
        let mut s = SpinorState::new_ratchet(8, 0.7, 0.0).unwrap();
        let d0 = s.momentum_distribution(0);
        s.scale(Complex64::from_polar(1.0, 1.234));
        let d1 = s.momentum_distribution(0);
        for (a, b) in d0.probabilities.iter().zip(&d1.probabilities) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn leakage_check_triggers() {
        let mut s = SpinorState::zero(4, 0.0).unwrap();
        *s.amp_mut(Spin::One, 4) = Complex64::new(1.0, 0.0);
        assert!(s.check_leakage(1e-8, "test").is_err());
    }

    #[test]
    fn beta_wrapping() {
        assert!((wrap_beta(-0.25) - 0.75).abs() < 1e-15);
        assert!((wrap_beta(1.5) - 0.5).abs() < 1e-15);
        assert_eq!(wrap_beta(0.0), 0.0);
        let s = SpinorState::new_ratchet(4, PI, -0.1).unwrap();
        assert!(s.beta >= 0.0 && s.beta < 1.0);
    }
}
