use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower edge of the stochastic write-current range, in µA.
pub const STOCHASTIC_FLOOR_UA: f64 = 300.0;
/// Above this write current switching is deterministic, in µA.
pub const DETERMINISTIC_UA: f64 = 650.0;

/// Anchor points of the switching-probability curve: (write current µA, P_sw).
pub const ANCHOR_HIGH: (f64, f64) = (420.0, 0.20);
pub const ANCHOR_LOW: (f64, f64) = (353.0, 0.01);

/// Logistic switching probability of the SOT device versus write current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StochasticModel {
    /// Current at which P_sw = 0.5, µA.
    pub midpoint_ua: f64,
    /// Logistic scale, µA.
    pub slope_ua: f64,
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

impl StochasticModel {
    /// Logistic curve through two (current, probability) anchors.
    pub fn fit(a: (f64, f64), b: (f64, f64)) -> Self {
        let slope_ua = (a.0 - b.0) / (logit(a.1) - logit(b.1));
        let midpoint_ua = a.0 - slope_ua * logit(a.1);
        StochasticModel { midpoint_ua, slope_ua }
    }

    /// Fit through 353 µA -> 1 % and 420 µA -> 20 %.
    pub fn calibrate() -> Self {
        let m = Self::fit(ANCHOR_LOW, ANCHOR_HIGH);
        debug_assert!(m.probability(DETERMINISTIC_UA) > 0.999);
        m
    }

    pub fn probability(&self, current_ua: f64) -> f64 {
        1.0 / (1.0 + (-(current_ua - self.midpoint_ua) / self.slope_ua).exp())
    }
}

impl Default for StochasticModel {
    fn default() -> Self {
        Self::calibrate()
    }
}

/// When the write current steps down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decrement {
    /// After every full sweep over the optimizable orders.
    #[default]
    PerSweep,
    /// After every single order update.
    PerOrderUpdate,
}

/// Linear write-current ramp from `start_ua` down to `stop_ua`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub start_ua: f64,
    pub stop_ua: f64,
    pub step_ua: f64,
    pub decrement: Decrement,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            start_ua: ANCHOR_HIGH.0,
            stop_ua: ANCHOR_LOW.0,
            step_ua: 0.05,
            decrement: Decrement::PerSweep,
        }
    }
}

impl AnnealSchedule {
    /// Number of steps (sweeps, or order updates) before the current reaches
    /// `stop_ua`.
    pub fn sweep_count(&self) -> usize {
        ((self.start_ua - self.stop_ua) / self.step_ua).round() as usize
    }

    /// Write current after `steps` decrements.
    pub fn current_at(&self, steps: usize) -> f64 {
        (self.start_ua - steps as f64 * self.step_ua).max(self.stop_ua)
    }

    /// Switching probability at each current of the ramp, from the initial
    /// current through the stop current (`sweep_count() + 1` entries). Entry `s`
    /// applies to step `s`; the last entry is where the solver stops.
    pub fn probabilities(&self, model: &StochasticModel) -> Vec<f64> {
        (0..=self.sweep_count())
            .map(|s| model.probability(self.current_at(s)))
            .collect()
    }
}

/// Raw Bernoulli draw: each index set independently with probability `p`.
pub fn stochastic_draw<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Vec<bool>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok((0..n).map(|_| rng.random_bool(p)).collect())
}

/// Stochastic binary vector with the empty-set rule: if no unit switched,
/// every column passes.
pub fn stochastic_mask<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Vec<bool>> {
    let mut mask = stochastic_draw(n, p, rng)?;
    if !mask.iter().any(|&b| b) {
        mask.fill(true);
    }
    Ok(mask)
}
