//! Metric pairs `(X, d, A)`: a finite working point set, its metric, and the
//! distance-to-reservoir function `d_A`.
//!
//! Three geometries are supported:
//!
//! * **euclidean** — points in `ℝ^n` with the reservoir given by an explicit
//!   finite point set (so `d_A(x) = min_a |x − a|`);
//! * **halfplane** — birth/death pairs `(b, d)` with `b ≤ d` and the
//!   diagonal `{(t, t)}` as reservoir, under either the L∞ or the L2 norm
//!   (the persistence-diagram setting);
//! * **explicit** — a full distance matrix plus a reservoir-distance vector,
//!   validated against the metric-pair axioms on construction.
//!
//! Derived ground costs:
//!
//! ```text
//! d̄(x, y)   = min( d(x, y), d_A(x) + d_A(y) )             (= d_1)
//! d_p(x, y) = min( d(x, y), (d_A(x)^p + d_A(y)^p)^(1/p) )
//! ```
//!
//! Invariants:
//! * `d_A` is 1-Lipschitz: `|d_A(x) − d_A(y)| ≤ d(x, y)` — automatic for the
//!   built-in geometries, validated for explicit data (it is what makes `d̄`
//!   a pseudometric);
//! * all stored lengths are finite and non-negative;
//! * a pair is immutable after construction and shared behind `Arc`.
//!
//! The reservoir is never materialized as individual points: every cost into
//! `A` factors through `d_A`, and `d̄(x, a) = d_A(x)` for each `a ∈ A`, so a
//! single abstract reservoir endpoint is exact.
//!
//! In exact rational mode, constructions whose distances are irrational
//! (euclidean in dimension ≥ 2, halfplane under L2) are rejected up front;
//! see [`crate::scalar`].

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{check_exponent, max_s, min_s, Scalar};

/// Index of a point in a [`MetricPair`]'s working set.
///
/// Indices are dense and only meaningful relative to the pair that issued
/// them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Norm on the birth/death half-plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HalfplaneNorm {
    /// `max(|Δb|, |Δd|)`; diagonal distance `(d − b) / 2`. The usual choice
    /// for persistence diagrams, and the default.
    #[default]
    LInf,
    /// Euclidean norm; diagonal distance `(d − b) / √2`. Float-only.
    L2,
}

/// Point-count threshold up to which explicit matrices are validated
/// exhaustively (all `n³` triples); above it, validation samples triples.
const EXHAUSTIVE_VALIDATION_LIMIT: usize = 512;

/// Number of sampled triples when exhaustive validation is too expensive.
const SAMPLED_TRIPLES: usize = 10_000;

#[derive(Clone, Debug)]
enum Geometry<S> {
    Euclidean {
        coords: Vec<Vec<S>>,
        reservoir: Vec<Vec<S>>,
    },
    Halfplane {
        norm: HalfplaneNorm,
        points: Vec<(S, S)>,
    },
    Explicit {
        matrix: Vec<Vec<S>>,
    },
}

/// A finite metric pair `(X, d, A)`.
///
/// Immutable after construction; share it behind an `Arc` — measures and
/// couplings hold a reference and refuse to mix values from different pair
/// instances.
#[derive(Clone, Debug)]
pub struct MetricPair<S: Scalar> {
    geometry: Geometry<S>,
    /// `d_A(x)` for every point, precomputed at construction.
    d_a: Vec<S>,
}

impl<S: Scalar> MetricPair<S> {
    /// Points in `ℝ^dim` with an explicit finite reservoir point set.
    ///
    /// In exact rational mode only `dim == 1` is accepted (higher-dimensional
    /// euclidean distances are irrational in general).
    pub fn euclidean(dim: usize, points: &[Vec<S>], reservoir: &[Vec<S>]) -> Result<Self> {
        if S::EXACT && dim >= 2 {
            return Err(Error::ExactUnsupported {
                what: format!("euclidean geometry in dimension {dim} (distances are irrational)"),
            });
        }
        if reservoir.is_empty() {
            return Err(Error::MetricValidation {
                reason: "euclidean reservoir must contain at least one point".into(),
            });
        }
        for (what, set) in [("point", points), ("reservoir point", reservoir)] {
            for (i, coord) in set.iter().enumerate() {
                if coord.len() != dim {
                    return Err(Error::MetricValidation {
                        reason: format!(
                            "{what} {i} has {} coordinates, expected {dim}",
                            coord.len()
                        ),
                    });
                }
                for c in coord {
                    c.validate_finite(&format!("{what} {i} coordinate"))?;
                }
            }
        }
        let geometry = Geometry::Euclidean {
            coords: points.to_vec(),
            reservoir: reservoir.to_vec(),
        };
        let d_a = (0..points.len())
            .map(|i| geometry_d_a(&geometry, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(MetricPair { geometry, d_a })
    }

    /// Birth/death pairs on the half-plane `{b ≤ d}` with the diagonal as
    /// reservoir.
    ///
    /// The L2 norm is float-only: its diagonal distance `(d − b)/√2` is
    /// irrational.
    pub fn halfplane(norm: HalfplaneNorm, points: &[(S, S)]) -> Result<Self> {
        if S::EXACT && norm == HalfplaneNorm::L2 {
            return Err(Error::ExactUnsupported {
                what: "halfplane geometry under the L2 norm (diagonal distances are irrational)"
                    .into(),
            });
        }
        for (i, (b, d)) in points.iter().enumerate() {
            b.validate_finite(&format!("point {i} birth"))?;
            d.validate_finite(&format!("point {i} death"))?;
            if b > d {
                return Err(Error::MetricValidation {
                    reason: format!("point {i} has birth {b} greater than death {d}"),
                });
            }
        }
        let geometry = Geometry::Halfplane {
            norm,
            points: points.to_vec(),
        };
        let d_a = (0..points.len())
            .map(|i| geometry_d_a(&geometry, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(MetricPair { geometry, d_a })
    }

    /// An explicit distance matrix plus a reservoir-distance vector.
    ///
    /// Validates symmetry, zero diagonal, non-negativity, the triangle
    /// inequality, and 1-Lipschitzness of the reservoir distances (required
    /// for `d̄` to be a pseudometric). Validation is exhaustive up to 512
    /// points and falls back to 10 000 sampled triples beyond that, drawn
    /// from a deterministic generator seeded with 0; use
    /// [`MetricPair::explicit_with_seed`] to vary the sample.
    pub fn explicit(matrix: Vec<Vec<S>>, reservoir_distances: Vec<S>) -> Result<Self> {
        Self::explicit_with_seed(matrix, reservoir_distances, 0)
    }

    /// [`MetricPair::explicit`] with an explicit seed for sampled validation.
    pub fn explicit_with_seed(
        matrix: Vec<Vec<S>>,
        reservoir_distances: Vec<S>,
        seed: u64,
    ) -> Result<Self> {
        let n = matrix.len();
        if reservoir_distances.len() != n {
            return Err(Error::MetricValidation {
                reason: format!(
                    "reservoir-distance vector has length {}, matrix has {n} rows",
                    reservoir_distances.len()
                ),
            });
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MetricValidation {
                    reason: format!("row {i} has length {}, expected {n}", row.len()),
                });
            }
            for (j, v) in row.iter().enumerate() {
                v.validate_finite(&format!("distance ({i},{j})"))?;
                if *v < S::zero() {
                    return Err(Error::MetricValidation {
                        reason: format!("distance ({i},{j}) = {v} is negative"),
                    });
                }
            }
            if !matrix[i][i].is_zero() {
                return Err(Error::MetricValidation {
                    reason: format!("diagonal entry ({i},{i}) = {} is not zero", matrix[i][i]),
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::MetricValidation {
                        reason: format!(
                            "matrix is asymmetric at ({i},{j}): {} vs {}",
                            matrix[i][j], matrix[j][i]
                        ),
                    });
                }
            }
        }
        for (i, v) in reservoir_distances.iter().enumerate() {
            v.validate_finite(&format!("reservoir distance {i}"))?;
            if *v < S::zero() {
                return Err(Error::MetricValidation {
                    reason: format!("reservoir distance {i} = {v} is negative"),
                });
            }
        }

        let check_triple = |i: usize, j: usize, k: usize| -> Result<()> {
            let direct = &matrix[i][k];
            let detour = matrix[i][j].clone() + matrix[j][k].clone();
            if exceeds_with_slack(direct, &detour) {
                return Err(Error::MetricValidation {
                    reason: format!(
                        "triangle inequality fails: d({i},{k}) = {direct} > d({i},{j}) + d({j},{k}) = {detour}"
                    ),
                });
            }
            Ok(())
        };
        let check_lipschitz = |i: usize, j: usize| -> Result<()> {
            let gap = (reservoir_distances[i].clone() - reservoir_distances[j].clone()).abs();
            if exceeds_with_slack(&gap, &matrix[i][j]) {
                return Err(Error::MetricValidation {
                    reason: format!(
                        "reservoir distance is not 1-Lipschitz: |d_A({i}) − d_A({j})| = {gap} > d({i},{j}) = {}",
                        matrix[i][j]
                    ),
                });
            }
            Ok(())
        };

        if n <= EXHAUSTIVE_VALIDATION_LIMIT {
            for i in 0..n {
                for j in 0..n {
                    check_lipschitz(i, j)?;
                    for k in 0..n {
                        check_triple(i, j, k)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLED_TRIPLES {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                let k = rng.gen_range(0..n);
                check_triple(i, j, k)?;
                check_lipschitz(i, j)?;
            }
        }

        let geometry = Geometry::Explicit { matrix };
        Ok(MetricPair {
            geometry,
            d_a: reservoir_distances,
        })
    }

    /// Number of points in the working set.
    pub fn point_count(&self) -> usize {
        self.d_a.len()
    }

    /// Error unless `id` indexes a point of this pair.
    pub fn check_point(&self, id: PointId) -> Result<()> {
        if id.0 < self.point_count() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: id.0,
                len: self.point_count(),
            })
        }
    }

    /// The ambient metric `d(a, b)`.
    pub fn dist(&self, a: PointId, b: PointId) -> Result<S> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(match &self.geometry {
            Geometry::Euclidean { coords, .. } => point_distance(&coords[a.0], &coords[b.0]),
            Geometry::Halfplane { norm, points } => {
                let (b1, d1) = &points[a.0];
                let (b2, d2) = &points[b.0];
                let db = (b1.clone() - b2.clone()).abs();
                let dd = (d1.clone() - d2.clone()).abs();
                match norm {
                    HalfplaneNorm::LInf => max_s(db, dd),
                    HalfplaneNorm::L2 => (db.clone() * db + dd.clone() * dd)
                        .root_checked(2.0)
                        .expect("L2 halfplane is rejected in exact mode"),
                }
            }
            Geometry::Explicit { matrix } => matrix[a.0][b.0].clone(),
        })
    }

    /// Distance to the reservoir, `d_A(x) = d(x, A)`.
    pub fn dist_to_reservoir(&self, x: PointId) -> Result<S> {
        self.check_point(x)?;
        Ok(self.d_a[x.0].clone())
    }

    /// The relative ground cost `d̄(a, b) = min(d(a, b), d_A(a) + d_A(b))`.
    ///
    /// A pseudometric: it vanishes on pairs of reservoir-touching points,
    /// and the triangle inequality follows from `d_A` being 1-Lipschitz.
    pub fn dbar(&self, a: PointId, b: PointId) -> Result<S> {
        let direct = self.dist(a, b)?;
        let via = self.d_a[a.0].clone() + self.d_a[b.0].clone();
        Ok(min_s(direct, via))
    }

    /// The `p`-version `d_p(a, b) = min(d(a, b), (d_A(a)^p + d_A(b)^p)^{1/p})`.
    ///
    /// Equals [`MetricPair::dbar`] at `p = 1`. In exact mode the root can be
    /// irrational even when everything else is rational — use
    /// [`MetricPair::dp_cost_pow`] (the solver's integrand `d_p^p`) to stay
    /// inside the rationals.
    pub fn dp_cost(&self, p: f64, a: PointId, b: PointId) -> Result<S> {
        check_exponent(p)?;
        if p == 1.0 {
            return self.dbar(a, b);
        }
        self.dp_cost_pow(p, a, b)?.root_checked(p)
    }

    /// `d_p(a, b)^p = min(d(a, b)^p, d_A(a)^p + d_A(b)^p)` — the per-unit
    /// transport cost at exponent `p`, closed under rational arithmetic for
    /// integer `p`.
    ///
    /// (The two formulas agree because `t ↦ t^p` is monotone on `t ≥ 0`.)
    pub fn dp_cost_pow(&self, p: f64, a: PointId, b: PointId) -> Result<S> {
        check_exponent(p)?;
        let direct = self.dist(a, b)?.powf_checked(p)?;
        let via =
            self.d_a[a.0].powf_checked(p)? + self.d_a[b.0].powf_checked(p)?;
        Ok(min_s(direct, via))
    }

    /// `d_A(x)^p`, the per-unit cost of a reservoir leg at exponent `p`.
    pub fn reservoir_cost_pow(&self, p: f64, x: PointId) -> Result<S> {
        check_exponent(p)?;
        self.dist_to_reservoir(x)?.powf_checked(p)
    }
}

/// Euclidean distance between coordinate vectors; exact (no root) in
/// dimension one.
fn point_distance<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    if a.len() == 1 {
        return (a[0].clone() - b[0].clone()).abs();
    }
    let sq = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x.clone() - y.clone();
            d.clone() * d
        })
        .fold(S::zero(), |acc, t| acc + t);
    sq.root_checked(2.0)
        .expect("multi-dimensional euclidean geometry is rejected in exact mode")
}

/// `d_A` for one point of a built-in geometry.
fn geometry_d_a<S: Scalar>(geometry: &Geometry<S>, i: usize) -> Result<S> {
    Ok(match geometry {
        Geometry::Euclidean {
            coords, reservoir, ..
        } => reservoir
            .iter()
            .map(|a| point_distance(&coords[i], a))
            .reduce(min_s)
            .expect("reservoir checked non-empty at construction"),
        Geometry::Halfplane { norm, points } => {
            // Nearest diagonal point to (b, d) is the orthogonal (L2) or
            // Chebyshev (L∞) projection onto {(t, t)}, both at t = (b+d)/2:
            //   L∞:  (d − b) / 2        L2:  (d − b) / √2
            let (b, d) = &points[i];
            let gap = d.clone() - b.clone();
            match norm {
                HalfplaneNorm::LInf => gap / S::from_int(2),
                HalfplaneNorm::L2 => (gap.clone() * gap / S::from_int(2))
                    .root_checked(2.0)
                    .expect("L2 halfplane is rejected in exact mode"),
            }
        }
        Geometry::Explicit { .. } => unreachable!("explicit d_A is stored, not derived"),
    })
}

/// `lhs > rhs`, beyond rounding slack.
///
/// Exact comparison for rational scalars; floats get `1e-12` relative slack
/// so a matrix computed in double precision is not rejected for last-ulp
/// noise.
fn exceeds_with_slack<S: Scalar>(lhs: &S, rhs: &S) -> bool {
    if S::EXACT {
        lhs > rhs
    } else {
        let slack = 1e-12 * rhs.to_f64().abs().max(1.0);
        lhs.to_f64() > rhs.to_f64() + slack
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    /// The real line with reservoir `{0}`.
    fn line(points: &[f64]) -> MetricPair<f64> {
        let coords: Vec<Vec<f64>> = points.iter().map(|&x| vec![x]).collect();
        MetricPair::euclidean(1, &coords, &[vec![0.0]]).unwrap()
    }

    #[test]
    fn euclidean_line_distances() {
        let pair = line(&[1.0, 4.0, 2.0, -3.0]);
        assert_eq!(pair.dist(PointId(0), PointId(1)).unwrap(), 3.0);
        assert_eq!(pair.dist(PointId(0), PointId(0)).unwrap(), 0.0);
        assert_eq!(pair.dist_to_reservoir(PointId(2)).unwrap(), 2.0);
        assert_eq!(pair.dist_to_reservoir(PointId(3)).unwrap(), 3.0);
    }

    #[test]
    fn dbar_takes_the_cheaper_route() {
        // On (ℝ, {0}): d̄(1,4) = min(3, 1+4) = 3, d̄(2,−3) = min(5, 2+3) = 5.
        let pair = line(&[1.0, 4.0, 2.0, -3.0]);
        assert_eq!(pair.dbar(PointId(0), PointId(1)).unwrap(), 3.0);
        assert_eq!(pair.dbar(PointId(2), PointId(3)).unwrap(), 5.0);
        assert_eq!(pair.dbar(PointId(2), PointId(2)).unwrap(), 0.0);
        // Symmetry.
        assert_eq!(
            pair.dbar(PointId(0), PointId(1)).unwrap(),
            pair.dbar(PointId(1), PointId(0)).unwrap()
        );
    }

    #[test]
    fn dp_interpolates_direct_and_reservoir_routes() {
        // On (ℝ, {0}) with x = 3, y = −3: d = 6, d_A = 3 each side, so
        // d_2 = min(6, √18) = 3√2 and d_2² = 18.
        let pair = line(&[3.0, -3.0]);
        let d2 = pair.dp_cost(2.0, PointId(0), PointId(1)).unwrap();
        assert!((d2 - 18.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(pair.dp_cost_pow(2.0, PointId(0), PointId(1)).unwrap(), 18.0);
        // p = 1 reproduces d̄.
        let pair2 = line(&[1.0, 4.0, 2.0, -3.0, 0.5, 7.0]);
        for i in 0..6 {
            for j in 0..6 {
                let (a, b) = (PointId(i), PointId(j));
                assert_eq!(
                    pair2.dp_cost(1.0, a, b).unwrap(),
                    pair2.dbar(a, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn dp_rejects_bad_exponents() {
        let pair = line(&[1.0, 2.0]);
        assert!(matches!(
            pair.dp_cost(0.5, PointId(0), PointId(1)),
            Err(Error::InvalidExponent { .. })
        ));
        assert!(matches!(
            pair.dp_cost(f64::NAN, PointId(0), PointId(1)),
            Err(Error::InvalidExponent { .. })
        ));
    }

    #[test]
    fn index_out_of_range_is_reported() {
        let pair = line(&[1.0]);
        assert!(matches!(
            pair.dist(PointId(0), PointId(7)),
            Err(Error::IndexOutOfRange { index: 7, len: 1 })
        ));
        assert!(pair.dist_to_reservoir(PointId(1)).is_err());
    }

    /// Brute-force `d((b,d), diagonal)` by scanning diagonal points `(t, t)`
    /// on a fine grid — the independent oracle for the closed forms below.
    fn diagonal_distance_by_scan(b: f64, d: f64, norm: HalfplaneNorm) -> f64 {
        let mut best = f64::INFINITY;
        let mut t = b - 10.0;
        while t <= d + 10.0 {
            let dist = match norm {
                HalfplaneNorm::LInf => (b - t).abs().max((d - t).abs()),
                HalfplaneNorm::L2 => ((b - t).powi(2) + (d - t).powi(2)).sqrt(),
            };
            best = best.min(dist);
            t += 1e-4;
        }
        best
    }

    #[test]
    fn halfplane_diagonal_distance_matches_grid_scan() {
        for (b, d) in [(1.0, 5.0), (0.0, 2.0), (2.5, 2.5), (-1.0, 3.0)] {
            for norm in [HalfplaneNorm::LInf, HalfplaneNorm::L2] {
                let pair = MetricPair::halfplane(norm, &[(b, d)]).unwrap();
                let closed = pair.dist_to_reservoir(PointId(0)).unwrap();
                let scanned = diagonal_distance_by_scan(b, d, norm);
                assert!(
                    (closed - scanned).abs() < 1e-3,
                    "closed form {closed} vs scan {scanned} for ({b},{d}) {norm:?}"
                );
            }
        }
        // Frozen values for the point (1, 5): (5−1)/2 = 2 and 4/√2 = √8.
        let linf = MetricPair::halfplane(HalfplaneNorm::LInf, &[(1.0, 5.0)]).unwrap();
        assert_eq!(linf.dist_to_reservoir(PointId(0)).unwrap(), 2.0);
        let l2 = MetricPair::halfplane(HalfplaneNorm::L2, &[(1.0, 5.0)]).unwrap();
        assert_eq!(l2.dist_to_reservoir(PointId(0)).unwrap(), 8.0f64.sqrt());
    }

    #[test]
    fn halfplane_metric_and_validation() {
        let pair = MetricPair::halfplane(HalfplaneNorm::LInf, &[(1.0, 5.0), (2.0, 4.0)]).unwrap();
        // max(|1−2|, |5−4|) = 1.
        assert_eq!(pair.dist(PointId(0), PointId(1)).unwrap(), 1.0);
        // Births above deaths are rejected.
        assert!(MetricPair::halfplane(HalfplaneNorm::LInf, &[(3.0, 1.0)]).is_err());
    }

    #[test]
    fn explicit_matrix_read_back_and_validation() {
        let pair =
            MetricPair::explicit(vec![vec![0.0, 3.0], vec![3.0, 0.0]], vec![1.0, 2.0]).unwrap();
        assert_eq!(pair.dist(PointId(0), PointId(1)).unwrap(), 3.0);
        assert_eq!(pair.dist_to_reservoir(PointId(1)).unwrap(), 2.0);

        // Asymmetry.
        assert!(
            MetricPair::explicit(vec![vec![0.0, 3.0], vec![2.0, 0.0]], vec![0.0, 0.0]).is_err()
        );
        // Non-zero diagonal.
        assert!(
            MetricPair::explicit(vec![vec![1.0, 3.0], vec![3.0, 0.0]], vec![0.0, 0.0]).is_err()
        );
        // Triangle violation: d(0,2) = 3 > 1 + 1.
        assert!(MetricPair::explicit(
            vec![
                vec![0.0, 1.0, 3.0],
                vec![1.0, 0.0, 1.0],
                vec![3.0, 1.0, 0.0]
            ],
            vec![0.0, 0.0, 0.0]
        )
        .is_err());
        // d_A not 1-Lipschitz: |0 − 5| > d(0,1) = 1.
        assert!(
            MetricPair::explicit(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.0, 5.0]).is_err()
        );
        // Negative entries.
        assert!(
            MetricPair::explicit(vec![vec![0.0, -1.0], vec![-1.0, 0.0]], vec![0.0, 0.0]).is_err()
        );
    }

    #[test]
    fn exact_mode_accepts_rational_safe_geometries() {
        let r = |n: i64| Rational::from_int(n);
        let pair = MetricPair::<Rational>::euclidean(
            1,
            &[vec![r(2)], vec![r(-3)]],
            &[vec![r(0)]],
        )
        .unwrap();
        assert_eq!(pair.dist_to_reservoir(PointId(0)).unwrap(), r(2));
        assert_eq!(pair.dist(PointId(0), PointId(1)).unwrap(), r(5));
        assert_eq!(pair.dbar(PointId(0), PointId(1)).unwrap(), r(5));
        assert_eq!(
            pair.dp_cost_pow(2.0, PointId(0), PointId(1)).unwrap(),
            r(13)
        );

        let hp = MetricPair::<Rational>::halfplane(HalfplaneNorm::LInf, &[(r(1), r(5))]).unwrap();
        assert_eq!(hp.dist_to_reservoir(PointId(0)).unwrap(), r(2));
    }

    #[test]
    fn exact_mode_rejects_irrational_geometries() {
        let r = |n: i64| Rational::from_int(n);
        assert!(matches!(
            MetricPair::<Rational>::euclidean(2, &[vec![r(0), r(0)]], &[vec![r(1), r(1)]]),
            Err(Error::ExactUnsupported { .. })
        ));
        assert!(matches!(
            MetricPair::<Rational>::halfplane(HalfplaneNorm::L2, &[(r(1), r(5))]),
            Err(Error::ExactUnsupported { .. })
        ));
    }

    #[test]
    fn euclidean_plane_distances() {
        let pair = MetricPair::euclidean(
            2,
            &[vec![0.0, 0.0], vec![3.0, 4.0]],
            &[vec![10.0, 0.0]],
        )
        .unwrap();
        assert_eq!(pair.dist(PointId(0), PointId(1)).unwrap(), 5.0);
        assert_eq!(pair.dist_to_reservoir(PointId(0)).unwrap(), 10.0);
        // Nearest of several reservoir points wins.
        let pair2 = MetricPair::euclidean(
            2,
            &[vec![0.0, 0.0]],
            &[vec![10.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(pair2.dist_to_reservoir(PointId(0)).unwrap(), 1.0);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        assert!(MetricPair::<f64>::euclidean(2, &[vec![1.0]], &[vec![0.0, 0.0]]).is_err());
        assert!(MetricPair::<f64>::euclidean(1, &[vec![1.0]], &[]).is_err());
        assert!(MetricPair::<f64>::euclidean(1, &[vec![f64::NAN]], &[vec![0.0]]).is_err());
    }
}
