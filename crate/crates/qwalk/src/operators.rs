//! Unitary building blocks of one walk step: the microwave coin rotation,
//! the spin-dependent kick, free evolution with quasimomentum, and their
//! composition.
//!
//! Momentum ↔ angle transforms follow ⟨θ|n⟩ = e^{inθ}/√(2π). The two spin
//! components see conjugate kick phases, e^{+ik cos θ} for |2⟩ and
//! e^{−ik cos θ} for |1⟩, so that with the default ratchet phase φ = π/2
//! the |2⟩ projection drifts toward positive momenta.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j_upto;
use crate::decoherence::{self, SEConfig, SEEvent};
use crate::error::Result;
use crate::spinor::{Spin, SpinorState, DEFAULT_EPS_TRUNC, DEFAULT_HALF_WIDTH};

/// Static parameters of the walk sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WalkConfig {
    /// Kick strength in two-photon units.
    pub k: f64,
    pub steps: usize,
    /// Scaled pulse period; 4π is the resonant Talbot condition.
    pub tau: f64,
    /// Kick-induced relative phase on spin |2⟩ per kick; applied only when
    /// `compensated` is false.
    pub phi_global: f64,
    pub compensated: bool,
    pub coin_alpha: f64,
    pub coin_chi_first: f64,
    pub coin_chi_rest: f64,
    /// Uniform angle-grid size for the kick transform; power of two ≥ 2N+1.
    pub angle_grid_size: usize,
    pub grid_half_width: usize,
    /// Bragg ratchet phase φ of the initial state.
    pub ratchet_phi: f64,
    pub eps_trunc: f64,
}

impl WalkConfig {
    pub fn new(k: f64, steps: usize) -> Self {
        WalkConfig {
            k,
            steps,
            tau: 4.0 * PI,
            phi_global: 2.0 * k + PI,
            compensated: true,
            coin_alpha: FRAC_PI_2,
            coin_chi_first: PI,
            coin_chi_rest: -FRAC_PI_2,
            angle_grid_size: 256,
            grid_half_width: DEFAULT_HALF_WIDTH,
            ratchet_phi: FRAC_PI_2,
            eps_trunc: DEFAULT_EPS_TRUNC,
        }
    }

    /// Coin phase χ for a 1-based step index.
    pub fn chi_for_step(&self, step_index: usize) -> f64 {
        if step_index == 1 {
            self.coin_chi_first
        } else {
            self.coin_chi_rest
        }
    }
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig::new(1.45, 5)
    }
}

/// Apply the coin rotation
/// M(α,χ) = [[cos(α/2), e^{iχ} sin(α/2)], [−e^{−iχ} sin(α/2), cos(α/2)]]
/// to every momentum class.
pub fn apply_coin(state: &mut SpinorState, alpha: f64, chi: f64) {
    let c = Complex64::new((alpha / 2.0).cos(), 0.0);
    let s = (alpha / 2.0).sin();
    let m01 = Complex64::from_polar(s, chi);
    let m10 = -Complex64::from_polar(s, -chi);
    apply_spin_matrix(state, [[c, m01], [m10, c]]);
}

/// Apply an arbitrary 2×2 spin matrix identically to every momentum class.
pub fn apply_spin_matrix(state: &mut SpinorState, m: [[Complex64; 2]; 2]) {
    let nc = state.n_classes();
    let n = state.half_width() as i64;
    for i in 0..nc {
        let ni = i as i64 - n;
        let a1 = state.amp(Spin::One, ni);
        let a2 = state.amp(Spin::Two, ni);
        *state.amp_mut(Spin::One, ni) = m[0][0] * a1 + m[0][1] * a2;
        *state.amp_mut(Spin::Two, ni) = m[1][0] * a1 + m[1][1] * a2;
    }
}

/// Matrix element of e^{−ik cos θ} between momentum classes separated by
/// `delta_n`: (−i)^{Δn} J_{Δn}(k).
pub fn kick_kernel(delta_n: i64, k: f64) -> Complex64 {
    let j = crate::bessel::bessel_j(delta_n, k);
    i_pow(-delta_n) * j
}

/// (±i)^p for integer p.
fn i_pow(p: i64) -> Complex64 {
    match p.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Reusable FFT plan for the angle-grid kick.
///
/// The plan is immutable and shareable across trajectory workers.
pub struct KickOperator {
    m: usize,
    cos_theta: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl KickOperator {
    pub fn new(angle_grid_size: usize, half_width: usize) -> Self {
        assert!(
            angle_grid_size > 2 * half_width,
            "angle grid {} too small for half-width {}",
            angle_grid_size,
            half_width
        );
        assert!(
            angle_grid_size.is_power_of_two(),
            "angle grid size must be a power of two"
        );
        let mut planner = FftPlanner::new();
        let cos_theta = (0..angle_grid_size)
            .map(|j| (2.0 * PI * j as f64 / angle_grid_size as f64).cos())
            .collect();
        KickOperator {
            m: angle_grid_size,
            cos_theta,
            fwd: planner.plan_fft_forward(angle_grid_size),
            inv: planner.plan_fft_inverse(angle_grid_size),
        }
    }

    /// Multiply one spin component by e^{i·sign·k cos θ} on the angle grid.
    fn kick_component(&self, amps: &mut [Complex64], sign: f64, k: f64) {
        let nc = amps.len();
        let half = nc / 2;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        // Scatter a_n to index n mod M (amps index i holds n = i - N).
        for (i, &a) in amps.iter().enumerate() {
            let n = i as i64 - half as i64;
            let j = n.rem_euclid(self.m as i64) as usize;
            buf[j] = a;
        }
        // ψ(θ_j) = Σ_n a_n e^{+i n θ_j}: unnormalized inverse transform.
        self.inv.process(&mut buf);
        for (b, &ct) in buf.iter_mut().zip(&self.cos_theta) {
            *b *= Complex64::from_polar(1.0, sign * k * ct);
        }
        self.fwd.process(&mut buf);
        let scale = 1.0 / self.m as f64;
        for (i, a) in amps.iter_mut().enumerate() {
            let n = i as i64 - half as i64;
            let j = n.rem_euclid(self.m as i64) as usize;
            *a = buf[j] * scale;
        }
    }

    /// Spin-dependent kick: |1⟩ ← e^{−ik cos θ}, |2⟩ ← e^{+ik cos θ}; when
    /// not compensated, |2⟩ additionally picks up e^{−i·phi_global}.
    pub fn apply(
        &self,
        state: &mut SpinorState,
        k: f64,
        phi_global: f64,
        compensated: bool,
        eps_trunc: f64,
    ) -> Result<()> {
        self.kick_component(state.spin_slice_mut(Spin::One), -1.0, k);
        self.kick_component(state.spin_slice_mut(Spin::Two), 1.0, k);
        if !compensated {
            let ph = Complex64::from_polar(1.0, -phi_global);
            for a in state.spin_slice_mut(Spin::Two) {
                *a *= ph;
            }
        }
        state.check_leakage(eps_trunc, "after kick")
    }
}

/// One-shot kick without a cached plan; convenience for tests and small runs.
pub fn apply_kick(
    state: &mut SpinorState,
    k: f64,
    phi_global: f64,
    compensated: bool,
    angle_grid_size: usize,
    eps_trunc: f64,
) -> Result<()> {
    let op = KickOperator::new(angle_grid_size, state.half_width());
    op.apply(state, k, phi_global, compensated, eps_trunc)
}

/// Direct Bessel-kernel convolution route of the kick; must agree with the
/// angle-grid transform to 1e-10. b_n = Σ_m (∓i)^{n−m} J_{n−m}(k) a_m.
pub fn apply_kick_convolution(
    state: &mut SpinorState,
    k: f64,
    phi_global: f64,
    compensated: bool,
    eps_trunc: f64,
) -> Result<()> {
    let nc = state.n_classes();
    let max_delta = nc - 1;
    let j = bessel_j_upto(max_delta, k.abs());
    let jn = |delta: i64| -> f64 {
        let d = delta.unsigned_abs() as usize;
        let mut v = j[d];
        if delta < 0 && d % 2 == 1 {
            v = -v;
        }
        if k < 0.0 && d % 2 == 1 {
            v = -v;
        }
        v
    };
    for (spin, sign) in [(Spin::One, -1), (Spin::Two, 1_i64)] {
        let src = state.spin_slice(spin).to_vec();
        let dst = state.spin_slice_mut(spin);
        for (n_idx, out) in dst.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m_idx, &a) in src.iter().enumerate() {
                let delta = n_idx as i64 - m_idx as i64;
                acc += i_pow(sign * delta) * jn(delta) * a;
            }
            *out = acc;
        }
    }
    if !compensated {
        let ph = Complex64::from_polar(1.0, -phi_global);
        for a in state.spin_slice_mut(Spin::Two) {
            *a *= ph;
        }
    }
    state.check_leakage(eps_trunc, "after kick (convolution)")
}

/// Free evolution between pulses: each momentum class acquires the phase
/// e^{−i τ (n+β)²/2}. Diagonal, so the momentum distribution is unchanged.
pub fn apply_free_evolution(state: &mut SpinorState, tau: f64) {
    let beta = state.beta;
    let n_half = state.half_width() as i64;
    for spin in [Spin::One, Spin::Two] {
        for (i, a) in state.spin_slice_mut(spin).iter_mut().enumerate() {
            let n = (i as i64 - n_half) as f64;
            let arg = -tau * (n + beta) * (n + beta) / 2.0;
            *a *= Complex64::from_polar(1.0, arg);
        }
    }
}

/// One full walk step for a 1-based `step_index`: coin (interrupted when an
/// SE plan is present), free evolution, kick.
pub fn walk_step<R: Rng + ?Sized>(
    state: &mut SpinorState,
    cfg: &WalkConfig,
    kick: &KickOperator,
    step_index: usize,
    se: Option<(&SEConfig, &[SEEvent])>,
    rng: &mut R,
) -> Result<()> {
    let chi = cfg.chi_for_step(step_index);
    match se {
        Some((se_cfg, events)) if !events.is_empty() => {
            decoherence::apply_interrupted_coin(state, events, cfg.coin_alpha, chi, se_cfg, rng);
        }
        _ => apply_coin(state, cfg.coin_alpha, chi),
    }
    apply_free_evolution(state, cfg.tau);
    kick.apply(
        state,
        cfg.k,
        cfg.phi_global,
        cfg.compensated,
        cfg.eps_trunc,
    )
}
