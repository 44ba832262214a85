//! Integer distance matrices and their quantization into conductance levels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsplib::EdgeWeightType;
use crate::Point;

/// Distance between two points under a TSPLIB convention, before the
/// coincident-point fix-up.
pub fn tsplib_distance(convention: EdgeWeightType, a: &Point, b: &Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    match convention {
        EdgeWeightType::Euc2d => (dx * dx + dy * dy).sqrt().round(),
        EdgeWeightType::Ceil2d => (dx * dx + dy * dy).sqrt().ceil(),
        EdgeWeightType::Att => {
            let r = ((dx * dx + dy * dy) / 10.0).sqrt();
            let t = r.round();
            if t < r {
                t + 1.0
            } else {
                t
            }
        }
    }
}

/// Symmetric integer distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
    d_min: u32,
}

impl DistanceMatrix {
    /// Builds from a full row-major matrix. Off-diagonal zeros become 1.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::TooFewNodes { min: 2, got: n });
        }
        let mut d = vec![0u32; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if i != j && v != rows[j][i] {
                    return Err(Error::Config(format!("matrix not symmetric at ({i}, {j})")));
                }
                d[i * n + j] = if i == j { 0 } else { v.max(1) };
            }
        }
        Ok(Self::finish(n, d))
    }

    fn finish(n: usize, d: Vec<u32>) -> Self {
        let mut d_min = u32::MAX;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    d_min = d_min.min(d[i * n + j]);
                }
            }
        }
        DistanceMatrix { n, d, d_min }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    /// Smallest off-diagonal entry.
    pub fn d_min(&self) -> u32 {
        self.d_min
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.d[i * self.n..(i + 1) * self.n]
    }
}

/// Pairwise TSPLIB distances for `points`.
///
/// Coincident points get distance 1 so that the inverse-distance weights stay
/// defined.
pub fn build_distance_matrix(points: &[Point], convention: EdgeWeightType) -> Result<DistanceMatrix> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewNodes { min: 2, got: n });
    }
    if let Some(i) = points.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::NonFiniteCoordinate(i));
    }
    let mut d = vec![0u32; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = tsplib_distance(convention, &points[i], &points[j]);
            if v > u32::MAX as f64 {
                return Err(Error::DistanceOverflow(i, j));
            }
            let v = (v as u32).max(1);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    Ok(DistanceMatrix::finish(n, d))
}

/// Weight bit precision `B`; the crossbar supports 2, 3 or 4 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct BitWidth(u32);

impl BitWidth {
    pub const ALL: [BitWidth; 3] = [BitWidth(2), BitWidth(3), BitWidth(4)];

    pub fn new(bits: u32) -> Result<Self> {
        match bits {
            2..=4 => Ok(BitWidth(bits)),
            _ => Err(Error::UnsupportedBitWidth(bits)),
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Full-scale conductance level, `2^B - 1`.
    pub fn max_level(self) -> u16 {
        (1u16 << self.0) - 1
    }
}

impl TryFrom<u32> for BitWidth {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        BitWidth::new(v)
    }
}

impl From<BitWidth> for u32 {
    fn from(b: BitWidth) -> u32 {
        b.0
    }
}

impl Default for BitWidth {
    fn default() -> Self {
        BitWidth(4)
    }
}

impl std::fmt::Display for BitWidth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Conductance levels programmed into the weight partitions of the crossbar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightMatrix {
    n: usize,
    bits: BitWidth,
    w: Vec<u16>,
}

impl WeightMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> BitWidth {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.w[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.w[i * self.n..(i + 1) * self.n]
    }

    /// Crossbar cells needed to hold this problem: `N x N*(B+1)`.
    pub fn crossbar_shape(&self) -> (usize, usize) {
        (self.n, self.n * (self.bits.get() as usize + 1))
    }
}

/// Maps each distance to `round(d_min / d * (2^B - 1))`, clamped to
/// `[1, 2^B - 1]` off the diagonal. The closest pair gets full scale.
pub fn quantize_weights(dm: &DistanceMatrix, bits: BitWidth) -> WeightMatrix {
    let n = dm.n();
    let full = bits.max_level();
    let d_min = dm.d_min() as f64;
    let mut w = vec![0u16; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let level = (d_min / dm.get(i, j) as f64 * full as f64).round();
            w[i * n + j] = (level as u16).clamp(1, full);
        }
    }
    WeightMatrix { n, bits, w }
}

/// Sum of consecutive edges, plus the closing edge when `cyclic`.
pub fn tour_length(tour: &[usize], dm: &DistanceMatrix, cyclic: bool) -> Result<u64> {
    if tour.len() != dm.n() {
        return Err(Error::SizeMismatch {
            expected: dm.n(),
            got: tour.len(),
        });
    }
    crate::tsplib::check_permutation(tour)?;
    Ok(route_length(tour, |a, b| dm.get(a, b) as u64, cyclic))
}

/// Length of a tour computed straight from coordinates, with the same
/// conventions as [`build_distance_matrix`]. Avoids the `n^2` matrix on large
/// instances.
pub fn points_tour_length(points: &[Point], convention: EdgeWeightType, tour: &[usize], cyclic: bool) -> Result<u64> {
    if tour.len() != points.len() {
        return Err(Error::SizeMismatch {
            expected: points.len(),
            got: tour.len(),
        });
    }
    crate::tsplib::check_permutation(tour)?;
    Ok(route_length(
        tour,
        |a, b| (tsplib_distance(convention, &points[a], &points[b]) as u64).max(1),
        cyclic,
    ))
}

/// Length of a route under an arbitrary edge cost; no validation.
pub(crate) fn route_length(route: &[usize], mut cost: impl FnMut(usize, usize) -> u64, cyclic: bool) -> u64 {
    let mut total: u64 = route.windows(2).map(|w| cost(w[0], w[1])).sum();
    if cyclic && route.len() > 1 {
        total += cost(route[route.len() - 1], route[0]);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> DistanceMatrix {
        let pts = [Point::new(0.0, 0.0), Point::new(0.0, 3.0), Point::new(4.0, 0.0)];
        build_distance_matrix(&pts, EdgeWeightType::Euc2d).unwrap()
    }

    #[test]
    fn triangle_distances() {
        let dm = tri();
        assert_eq!(dm.row(0), &[0, 3, 4]);
        assert_eq!(dm.row(1), &[3, 0, 5]);
        assert_eq!(dm.row(2), &[4, 5, 0]);
        assert_eq!(dm.d_min(), 3);
    }

    #[test]
    fn ceil_rounds_up() {
        let pts = [Point::new(0.0, 0.0), Point::new(0.0, 1.2)];
        let dm = build_distance_matrix(&pts, EdgeWeightType::Ceil2d).unwrap();
        assert_eq!(dm.get(0, 1), 2);
        let dm = build_distance_matrix(&pts, EdgeWeightType::Euc2d).unwrap();
        assert_eq!(dm.get(0, 1), 1);
    }

    #[test]
    fn att_pseudo_euclidean() {
        // r = sqrt(100/10) = 3.162..., nint = 3 < r so 4
        let pts = [Point::new(0.0, 0.0), Point::new(10.0, 0.0)];
        let dm = build_distance_matrix(&pts, EdgeWeightType::Att).unwrap();
        assert_eq!(dm.get(0, 1), 4);
        // r = sqrt(1000/10) = 10 exactly
        let pts = [Point::new(0.0, 0.0), Point::new(30.0, 10.0)];
        let dm = build_distance_matrix(&pts, EdgeWeightType::Att).unwrap();
        assert_eq!(dm.get(0, 1), 10);
    }

    #[test]
    fn coincident_points_get_unit_distance() {
        let pts = [Point::new(1.0, 1.0), Point::new(1.0, 1.0), Point::new(5.0, 1.0)];
        let dm = build_distance_matrix(&pts, EdgeWeightType::Euc2d).unwrap();
        assert_eq!(dm.get(0, 1), 1);
        assert_eq!(dm.d_min(), 1);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(matches!(
            build_distance_matrix(&[Point::new(0.0, 0.0)], EdgeWeightType::Euc2d),
            Err(Error::TooFewNodes { .. })
        ));
        assert!(matches!(
            build_distance_matrix(
                &[Point::new(0.0, 0.0), Point::new(f64::NAN, 0.0)],
                EdgeWeightType::Euc2d
            ),
            Err(Error::NonFiniteCoordinate(1))
        ));
    }

    #[test]
    fn quantization_examples() {
        let w = quantize_weights(&tri(), BitWidth::new(4).unwrap());
        assert_eq!(w.row(0), &[0, 15, 11]);
        assert_eq!(w.row(1), &[15, 0, 9]);
        assert_eq!(w.row(2), &[11, 9, 0]);
        assert_eq!(w.crossbar_shape(), (3, 15));

        // d_min = 3, d = 300 at 2 bits: round(0.03) = 0, clamped to 1
        let rows = vec![vec![0, 3, 300], vec![3, 0, 300], vec![300, 300, 0]];
        let dm = DistanceMatrix::from_rows(&rows).unwrap();
        let w = quantize_weights(&dm, BitWidth::new(2).unwrap());
        assert_eq!(w.get(0, 1), 3);
        assert_eq!(w.get(0, 2), 1);
    }

    #[test]
    fn bit_width_range() {
        assert!(BitWidth::new(1).is_err());
        assert!(BitWidth::new(5).is_err());
        assert_eq!(BitWidth::new(3).unwrap().max_level(), 7);
    }

    #[test]
    fn lengths() {
        let dm = tri();
        assert_eq!(tour_length(&[0, 1, 2], &dm, true).unwrap(), 12);
        assert_eq!(tour_length(&[0, 1, 2], &dm, false).unwrap(), 8);
        assert!(matches!(
            tour_length(&[0, 1], &dm, true),
            Err(Error::SizeMismatch { .. })
        ));
    }
}
