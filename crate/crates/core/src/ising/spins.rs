use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsplib::check_permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Closed tour; order 0 stays on its initial city.
    Cycle,
    /// Open path with the first and last orders fixed.
    Path,
}

/// One-hot city-by-order assignment held in the spin-storage partition.
///
/// Stored as the order -> city map plus its inverse; the conceptual `N x N`
/// spin matrix has exactly one up-spin per row and per column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinStorage {
    assign: Vec<usize>,
    order_of: Vec<usize>,
    mode: Mode,
}

impl SpinStorage {
    pub fn new(initial: Vec<usize>, mode: Mode) -> Result<Self> {
        check_permutation(&initial)?;
        let min = match mode {
            Mode::Cycle => 3,
            Mode::Path => 2,
        };
        if initial.len() < min {
            return Err(Error::TooFewNodes {
                min,
                got: initial.len(),
            });
        }
        let mut order_of = vec![0; initial.len()];
        for (o, &c) in initial.iter().enumerate() {
            order_of[c] = o;
        }
        Ok(SpinStorage {
            assign: initial,
            order_of,
            mode,
        })
    }

    pub fn cycle(initial: Vec<usize>) -> Result<Self> {
        Self::new(initial, Mode::Cycle)
    }

    /// Path whose first and last entries of `initial` are the fixed endpoints.
    pub fn path(initial: Vec<usize>) -> Result<Self> {
        Self::new(initial, Mode::Path)
    }

    /// Path from `entry` to `exit` with the remaining cities in index order.
    pub fn path_between(n: usize, entry: usize, exit: usize) -> Result<Self> {
        if entry >= n || exit >= n || entry == exit {
            return Err(Error::InvalidEndpoints(format!(
                "entry {entry}, exit {exit} for {n} nodes"
            )));
        }
        let mut initial = Vec::with_capacity(n);
        initial.push(entry);
        initial.extend((0..n).filter(|&c| c != entry && c != exit));
        initial.push(exit);
        Self::path(initial)
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// City at each order.
    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn city_at(&self, order: usize) -> usize {
        self.assign[order]
    }

    pub fn order_of(&self, city: usize) -> usize {
        self.order_of[city]
    }

    pub fn fixed_first(&self) -> Option<usize> {
        (self.mode == Mode::Path).then(|| self.assign[0])
    }

    pub fn fixed_last(&self) -> Option<usize> {
        (self.mode == Mode::Path).then(|| self.assign[self.n() - 1])
    }

    /// Orders the macro may rewrite.
    pub fn optimizable_orders(&self) -> Range<usize> {
        match self.mode {
            Mode::Cycle => 1..self.n(),
            Mode::Path => 1..self.n() - 1,
        }
    }

    /// Whether `city` sits on a pinned order (order 0, or a path endpoint).
    pub fn is_pinned(&self, city: usize) -> bool {
        let o = self.order_of[city];
        o == 0 || (self.mode == Mode::Path && o == self.n() - 1)
    }

    pub(crate) fn check_order(&self, order: usize) -> Result<()> {
        let r = self.optimizable_orders();
        if r.contains(&order) {
            Ok(())
        } else {
            Err(Error::OrderNotOptimizable {
                order,
                lo: r.start,
                hi: r.end.saturating_sub(1),
            })
        }
    }

    /// Cities at `order - 1` and `order + 1` (wrapping in cycle mode).
    pub fn neighbors(&self, order: usize) -> (usize, usize) {
        let n = self.n();
        let prev = self.assign[(order + n - 1) % n];
        let next = self.assign[(order + 1) % n];
        (prev, next)
    }

    pub(crate) fn swap_orders(&mut self, a: usize, b: usize) {
        self.assign.swap(a, b);
        self.order_of[self.assign[a]] = a;
        self.order_of[self.assign[b]] = b;
    }

    pub fn into_assign(self) -> Vec<usize> {
        self.assign
    }
}
