//! Behavioral model of one crossbar Ising macro.
//!
//! Each order update goes through the same stages as the hardware:
//!
//! 1. [`superpose`] the spin-storage columns of the two neighboring orders
//!    into one binary row vector;
//! 2. drive the weight partitions with it ([`mac_currents`]), giving one
//!    current per city, larger for cities closer to both neighbors;
//! 3. gate the currents with a [`stochastic_mask`];
//! 4. pick the winner ([`argmax_select`]) among the valid candidates
//!    ([`candidate_set`]);
//! 5. rewrite the column ([`update_spin`]).
//!
//! [`MacroState::anneal`] repeats this over all optimizable orders while the
//! write current ramps down.

mod spins;
mod stochastic;

pub use spins::{Mode, SpinStorage};
pub use stochastic::{
    stochastic_draw, stochastic_mask, AnnealSchedule, Decrement, StochasticModel, ANCHOR_HIGH, ANCHOR_LOW,
    DETERMINISTIC_UA, STOCHASTIC_FLOOR_UA,
};

use serde::{Deserialize, Serialize};

use crate::distance::WeightMatrix;
use crate::error::{Error, Result};
use crate::rng::MacroRng;

/// Uniform HRS leakage: every off-diagonal cell conducts an extra
/// `hrs_leak_fraction * (2^B - 1)` levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonIdeal {
    pub hrs_leak_fraction: f64,
}

/// Binary row vector with ones at the cities on `order - 1` and `order + 1`.
pub fn superpose(spins: &SpinStorage, order: usize) -> Result<Vec<bool>> {
    if order >= spins.n() {
        return Err(Error::OrderNotOptimizable {
            order,
            lo: 0,
            hi: spins.n() - 1,
        });
    }
    spins.check_order(order)?;
    let (prev, next) = spins.neighbors(order);
    let mut u = vec![false; spins.n()];
    u[prev] = true;
    u[next] = true;
    Ok(u)
}

/// Column currents `d_hat[x] = sum_k w[x][k] * u[k]` in conductance units.
pub fn mac_currents(weights: &WeightMatrix, u: &[bool], nonideal: Option<NonIdeal>) -> Result<Vec<f64>> {
    let n = weights.n();
    if u.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: u.len(),
        });
    }
    let out = match nonideal {
        None => (0..n)
            .map(|x| {
                let row = weights.row(x);
                let s: u32 = u.iter().zip(row).filter(|(&on, _)| on).map(|(_, &w)| w as u32).sum();
                s as f64
            })
            .collect(),
        Some(NonIdeal { hrs_leak_fraction }) => {
            let leak = hrs_leak_fraction * weights.bits().max_level() as f64;
            (0..n)
                .map(|x| {
                    let row = weights.row(x);
                    (0..n).filter(|&k| k != x && u[k]).map(|k| row[k] as f64 + leak).sum()
                })
                .collect()
        }
    };
    Ok(out)
}

/// Cities that may be written at `order`: the mask without the two neighbors
/// and the pinned cities. Falls back to all valid cities when that is empty.
pub fn candidate_set(spins: &SpinStorage, order: usize, mask: &[bool]) -> Result<Vec<usize>> {
    spins.check_order(order)?;
    if mask.len() != spins.n() {
        return Err(Error::SizeMismatch {
            expected: spins.n(),
            got: mask.len(),
        });
    }
    let (prev, next) = spins.neighbors(order);
    let valid = |c: usize| c != prev && c != next && !spins.is_pinned(c);
    let picked: Vec<usize> = (0..spins.n()).filter(|&c| mask[c] && valid(c)).collect();
    if !picked.is_empty() {
        return Ok(picked);
    }
    let all: Vec<usize> = (0..spins.n()).filter(|&c| valid(c)).collect();
    if all.is_empty() {
        Err(Error::EmptyCandidates)
    } else {
        Ok(all)
    }
}

/// Candidate with the largest current; ties go to the lowest index.
pub fn argmax_select(d_hat: &[f64], candidates: &[usize]) -> Result<usize> {
    let mut best: Option<usize> = None;
    for &c in candidates {
        if c >= d_hat.len() {
            return Err(Error::SizeMismatch {
                expected: d_hat.len(),
                got: c + 1,
            });
        }
        best = match best {
            Some(b) if d_hat[c] < d_hat[b] || (d_hat[c] == d_hat[b] && c > b) => Some(b),
            _ => Some(c),
        };
    }
    best.ok_or(Error::EmptyCandidates)
}

/// Writes `city` at `order`. If the city already sits elsewhere, the previous
/// occupant of `order` takes its place, so the storage stays one-hot in both
/// directions.
pub fn update_spin(spins: &mut SpinStorage, order: usize, city: usize) -> Result<()> {
    spins.check_order(order)?;
    if city >= spins.n() {
        return Err(Error::InvalidPlacement {
            order,
            city,
            reason: "no such city",
        });
    }
    let (prev, next) = spins.neighbors(order);
    if city == prev || city == next {
        return Err(Error::InvalidPlacement {
            order,
            city,
            reason: "city is a neighbor of the order",
        });
    }
    if spins.is_pinned(city) {
        return Err(Error::InvalidPlacement {
            order,
            city,
            reason: "city is pinned",
        });
    }
    let from = spins.order_of(city);
    if from != order {
        spins.swap_orders(order, from);
    }
    Ok(())
}

/// Progress of an anneal, reported after every sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub sweep: usize,
    /// Write current applied during the sweep (last one, when decrementing per update).
    pub current_ua: f64,
    pub probability: f64,
}

/// One Ising macro programmed with a sub-problem.
#[derive(Debug, Clone)]
pub struct MacroState {
    weights: WeightMatrix,
    spins: SpinStorage,
    schedule: AnnealSchedule,
    stoch: StochasticModel,
    rng: MacroRng,
    nonideal: Option<NonIdeal>,
    order_updates: u64,
    sweeps: u64,
}

impl MacroState {
    pub fn new(weights: WeightMatrix, spins: SpinStorage, rng: MacroRng) -> Result<Self> {
        if weights.n() != spins.n() {
            return Err(Error::SizeMismatch {
                expected: weights.n(),
                got: spins.n(),
            });
        }
        Ok(MacroState {
            weights,
            spins,
            schedule: AnnealSchedule::default(),
            stoch: StochasticModel::calibrate(),
            rng,
            nonideal: None,
            order_updates: 0,
            sweeps: 0,
        })
    }

    pub fn with_schedule(mut self, schedule: AnnealSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_stochastic_model(mut self, stoch: StochasticModel) -> Self {
        self.stoch = stoch;
        self
    }

    /// Enables the leakage model. A fraction of zero behaves exactly like the
    /// ideal crossbar.
    pub fn with_nonideal(mut self, nonideal: Option<NonIdeal>) -> Self {
        self.nonideal = nonideal;
        self
    }

    pub fn spins(&self) -> &SpinStorage {
        &self.spins
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn schedule(&self) -> &AnnealSchedule {
        &self.schedule
    }

    /// Order updates performed so far.
    pub fn order_updates(&self) -> u64 {
        self.order_updates
    }

    pub fn sweeps(&self) -> u64 {
        self.sweeps
    }

    /// One superpose, MAC, mask, argmax, write cycle at `order`. Returns the
    /// chosen city.
    pub fn update_order(&mut self, order: usize, p: f64) -> Result<usize> {
        let u = superpose(&self.spins, order)?;
        let d_hat = mac_currents(&self.weights, &u, self.nonideal)?;
        let mask = stochastic_mask(self.spins.n(), p, &mut self.rng)?;
        let cands = candidate_set(&self.spins, order, &mask)?;
        let city = argmax_select(&d_hat, &cands)?;
        update_spin(&mut self.spins, order, city)?;
        self.order_updates += 1;
        Ok(city)
    }

    /// Updates every optimizable order once, in ascending order.
    pub fn sweep(&mut self, p: f64) -> Result<()> {
        for order in self.spins.optimizable_orders() {
            self.update_order(order, p)?;
        }
        self.sweeps += 1;
        Ok(())
    }

    /// Runs the whole schedule and returns the stored order.
    pub fn anneal(&mut self) -> Result<Vec<usize>> {
        self.anneal_with(|_, _| {})
    }

    /// Like [`anneal`](Self::anneal), calling `observe` after every sweep.
    pub fn anneal_with<F>(&mut self, mut observe: F) -> Result<Vec<usize>>
    where
        F: FnMut(&SweepRecord, &SpinStorage),
    {
        let steps = self.schedule.sweep_count();
        match self.schedule.decrement {
            Decrement::PerSweep => {
                for s in 0..steps {
                    let current_ua = self.schedule.current_at(s);
                    let probability = self.stoch.probability(current_ua);
                    self.sweep(probability)?;
                    let rec = SweepRecord {
                        sweep: s,
                        current_ua,
                        probability,
                    };
                    observe(&rec, &self.spins);
                }
            }
            Decrement::PerOrderUpdate => {
                let orders = self.spins.optimizable_orders();
                let mut step = 0;
                let mut sweep = 0;
                while step < steps && !orders.is_empty() {
                    let mut last = (0.0, 0.0);
                    for order in orders.clone() {
                        if step == steps {
                            break;
                        }
                        let current_ua = self.schedule.current_at(step);
                        let probability = self.stoch.probability(current_ua);
                        self.update_order(order, probability)?;
                        last = (current_ua, probability);
                        step += 1;
                    }
                    self.sweeps += 1;
                    let rec = SweepRecord {
                        sweep,
                        current_ua: last.0,
                        probability: last.1,
                    };
                    observe(&rec, &self.spins);
                    sweep += 1;
                }
            }
        }
        Ok(self.spins.assign().to_vec())
    }
}
