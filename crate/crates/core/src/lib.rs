//! Hierarchical TSP solving on a behavioral model of a crossbar Ising macro.
//!
//! The solver clusters the cities bottom-up with Ward-linkage agglomerative
//! clustering until the topmost level fits on one macro, then solves top-down:
//! the top level as a cycle, every lower cluster as a path whose first and last
//! cities were fixed from the closest pairs between neighboring clusters.
//!
//! Each sub-problem runs on [`ising::MacroState`], which models the crossbar
//! macro at the behavioral level: distances are quantized into conductance
//! levels, the neighbors of the order being optimized are superposed, a MAC
//! produces one current per city, a stochastic mask filters the candidates,
//! the largest current wins and is written back into spin storage. Stochasticity
//! shrinks along the sigmoidal switching curve of the write current.
//!
//! Supporting modules:
//!
//! * [`tsplib`] reads TSPLIB instances and tours and writes tours.
//! * [`distance`] holds TSPLIB distance conventions and weight quantization.
//! * [`oracle`] has exact (Held-Karp, enumeration) and heuristic reference solvers.
//! * [`cost`] estimates macro latency and energy from a solve trace.

pub mod clustering;
pub mod cost;
pub mod distance;
mod error;
pub mod ising;
pub mod oracle;
pub mod orchestrator;
pub mod rng;
pub mod tsplib;

pub use crate::clustering::{agglomerative_ward, build_hierarchy, ClusterNode, Hierarchy};
pub use crate::cost::{estimate, CostReport, MacroCostTable};
pub use crate::distance::{
    build_distance_matrix, quantize_weights, tour_length, BitWidth, DistanceMatrix, WeightMatrix,
};
pub use crate::error::{Error, ParseError, ParseErrorKind, Result};
pub use crate::orchestrator::{solve_hierarchical, Solution, SolveConfig, SolveTrace};
pub use crate::tsplib::{parse_instance, parse_tour, write_tour, EdgeWeightType, Instance, Tour};

use serde::{Deserialize, Serialize};

/// A point in the plane, in the coordinate units of the instance.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Arithmetic mean of a non-empty set of points.
    pub fn mean<'a, I>(points: I) -> Option<Point>
    where
        I: IntoIterator<Item = &'a Point>,
    {
        let mut n = 0usize;
        let (mut sx, mut sy) = (0.0, 0.0);
        for p in points {
            sx += p.x;
            sy += p.y;
            n += 1;
        }
        (n > 0).then(|| Point::new(sx / n as f64, sy / n as f64))
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}
