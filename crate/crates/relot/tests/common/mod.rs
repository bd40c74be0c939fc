//! Shared generators and assertions for the integration suites.
//!
//! Randomness always comes from a seeded ChaCha stream, so any failure
//! replays from the printed seed. Coordinates and weights are dyadic
//! rationals (denominator 16): every generated number is exactly
//! representable both as an `f64` and as an arbitrary-precision rational,
//! so the float and exact instantiations of one seed see the *same*
//! instance and exact properties transfer between them.

#![allow(dead_code)] // each test target uses its own subset

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relot::duality::PairCost;
use relot::measure::{DiscreteMeasure, SignedMeasure};
use relot::metric_pair::{HalfplaneNorm, MetricPair, PointId};
use relot::scalar::{min_s, Scalar};

/// Absolute tolerance for float distances whose inputs are dyadic: the
/// solves are sums and minima of ~dozens of exactly-representable terms,
/// so errors stay many orders of magnitude below this.
pub const ABS_TOL: f64 = 1e-9;

/// Relative tolerance for comparisons scaled by the magnitude of the
/// values involved (distances of order 1–100 here).
pub const REL_TOL: f64 = 1e-9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A dyadic rational in `(0, hi]` with denominator 16.
pub fn dyadic<S: Scalar>(rng: &mut ChaCha8Rng, hi: i64) -> S {
    let num = rng.gen_range(1..=hi * 16);
    S::from_int(num) / S::from_int(16)
}

/// A dyadic rational in `[−hi, hi] \ {0}`.
pub fn dyadic_signed<S: Scalar>(rng: &mut ChaCha8Rng, hi: i64) -> S {
    let v: S = dyadic(rng, hi);
    if rng.gen() {
        v
    } else {
        -v
    }
}

// ---------------------------------------------------------------------
// Geometries
// ---------------------------------------------------------------------

/// The real line with reservoir `{0}`: `n` distinct nonzero dyadic
/// coordinates. Rational-safe (1-d distances are plain differences).
pub fn line_geometry<S: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Arc<MetricPair<S>> {
    assert!(n <= 300, "coordinate pool has 320 slots");
    let mut nums: BTreeSet<i64> = BTreeSet::new();
    while nums.len() < n {
        let v = rng.gen_range(-160..=160i64);
        if v != 0 {
            nums.insert(v);
        }
    }
    let points: Vec<Vec<S>> = nums
        .iter()
        .map(|&k| vec![S::from_int(k) / S::from_int(16)])
        .collect();
    let reservoir = vec![vec![S::zero()]];
    Arc::new(MetricPair::euclidean(1, &points, &reservoir).expect("line geometry"))
}

/// Persistence diagrams: `n` dyadic birth/death pairs strictly above the
/// diagonal, under the L∞ norm. Rational-safe.
pub fn diagram_geometry<S: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Arc<MetricPair<S>> {
    let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
    while seen.len() < n {
        let b = rng.gen_range(0..=80i64);
        let gap = rng.gen_range(1..=80i64);
        seen.insert((b, b + gap));
    }
    let q = |k: i64| S::from_int(k) / S::from_int(16);
    let points: Vec<(S, S)> = seen.iter().map(|&(b, d)| (q(b), q(d))).collect();
    Arc::new(MetricPair::halfplane(HalfplaneNorm::LInf, &points).expect("diagram geometry"))
}

/// A random graph metric: `n` points plus one virtual reservoir node,
/// complete graph with dyadic positive edge weights, closed under
/// shortest paths. The closure guarantees the triangle inequality, and
/// the reservoir distance — itself a shortest-path distance — is
/// automatically 1-Lipschitz. Rational-safe.
pub fn graph_geometry<S: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Arc<MetricPair<S>> {
    let m = n + 1; // node n is the reservoir
    let mut dist: Vec<Vec<S>> = vec![vec![S::zero(); m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let w: S = dyadic(rng, 8);
            dist[i][j] = w.clone();
            dist[j][i] = w;
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                let via = dist[i][k].clone() + dist[k][j].clone();
                dist[i][j] = min_s(dist[i][j].clone(), via);
            }
        }
    }
    let reservoir: Vec<S> = (0..n).map(|i| dist[i][n].clone()).collect();
    let matrix: Vec<Vec<S>> = dist[..n].iter().map(|row| row[..n].to_vec()).collect();
    Arc::new(MetricPair::explicit(matrix, reservoir).expect("graph geometry"))
}

/// 2-d Euclidean points with a two-point reservoir. Float-only
/// (distances are irrational).
pub fn plane_geometry(rng: &mut ChaCha8Rng, n: usize) -> Arc<MetricPair<f64>> {
    let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
    while seen.len() < n {
        let x = rng.gen_range(-80..=80i64);
        let y = rng.gen_range(1..=80i64); // keep off the reservoir axis
        seen.insert((x, y));
    }
    let points: Vec<Vec<f64>> = seen
        .iter()
        .map(|&(x, y)| vec![x as f64 / 16.0, y as f64 / 16.0])
        .collect();
    let reservoir = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
    Arc::new(MetricPair::euclidean(2, &points, &reservoir).expect("plane geometry"))
}

/// Persistence diagrams under the Euclidean norm. Float-only.
pub fn diagram_l2_geometry(rng: &mut ChaCha8Rng, n: usize) -> Arc<MetricPair<f64>> {
    let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
    while seen.len() < n {
        let b = rng.gen_range(0..=80i64);
        let gap = rng.gen_range(1..=80i64);
        seen.insert((b, b + gap));
    }
    let points: Vec<(f64, f64)> = seen
        .iter()
        .map(|&(b, d)| (b as f64 / 16.0, d as f64 / 16.0))
        .collect();
    Arc::new(MetricPair::halfplane(HalfplaneNorm::L2, &points).expect("diagram L2 geometry"))
}

// ---------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------

/// Up to `max_atoms` distinct support points with dyadic weights in
/// `(0, 4]`.
pub fn random_measure<S: Scalar>(
    rng: &mut ChaCha8Rng,
    pair: &Arc<MetricPair<S>>,
    max_atoms: usize,
) -> DiscreteMeasure<S> {
    let k = rng.gen_range(0..=max_atoms.min(pair.point_count()));
    let raw: Vec<(PointId, S)> = pick_points(rng, pair, k)
        .into_iter()
        .map(|x| (x, dyadic(rng, 4)))
        .collect();
    DiscreteMeasure::new(pair, &raw).expect("random measure").0
}

/// Like [`random_measure`] but with every weight 1 (for the enumeration
/// oracle).
pub fn random_unit_measure<S: Scalar>(
    rng: &mut ChaCha8Rng,
    pair: &Arc<MetricPair<S>>,
    max_atoms: usize,
) -> DiscreteMeasure<S> {
    let k = rng.gen_range(0..=max_atoms.min(pair.point_count()));
    let raw: Vec<(PointId, S)> = pick_points(rng, pair, k)
        .into_iter()
        .map(|x| (x, S::one()))
        .collect();
    DiscreteMeasure::new(pair, &raw).expect("unit measure").0
}

/// A signed measure with up to `max_atoms` atoms of either sign.
pub fn random_signed<S: Scalar>(
    rng: &mut ChaCha8Rng,
    pair: &Arc<MetricPair<S>>,
    max_atoms: usize,
) -> SignedMeasure<S> {
    let k = rng.gen_range(0..=max_atoms.min(pair.point_count()));
    let raw: Vec<(PointId, S)> = pick_points(rng, pair, k)
        .into_iter()
        .map(|x| (x, dyadic_signed(rng, 4)))
        .collect();
    SignedMeasure::new(pair, &raw).expect("signed measure").0
}

/// `k` distinct point ids of the pair.
pub fn pick_points<S: Scalar>(
    rng: &mut ChaCha8Rng,
    pair: &Arc<MetricPair<S>>,
    k: usize,
) -> Vec<PointId> {
    let mut ids: Vec<usize> = (0..pair.point_count()).collect();
    ids.shuffle(rng);
    ids.truncate(k);
    ids.into_iter().map(PointId).collect()
}

/// A random cost function compatible with the pair, as used by the
/// two-potential dual: per-point reservoir costs capped below `d_A`, and
/// `h(x, y) = min(α·d̄(x, y), h_A(x) + h_A′(y))` on the product of the two
/// supports. Non-negative by construction; dyadic whenever the geometry
/// is.
pub fn random_pair_cost<S: Scalar>(
    rng: &mut ChaCha8Rng,
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
) -> PairCost<S> {
    let pair = mu.pair();
    let alpha: S = dyadic(rng, 2);
    let cap = |rng: &mut ChaCha8Rng, x: PointId| -> S {
        min_s(pair.dist_to_reservoir(x).unwrap(), dyadic(rng, 6))
    };
    let source: Vec<(PointId, S)> = mu.atoms().map(|(x, _)| (x, cap(rng, x))).collect();
    let sink: Vec<(PointId, S)> = nu.atoms().map(|(y, _)| (y, cap(rng, y))).collect();
    let mut direct = Vec::new();
    for (x, hx) in &source {
        for (y, hy) in &sink {
            let through = hx.clone() + hy.clone();
            let shipped = alpha.clone() * pair.dbar(*x, *y).unwrap();
            direct.push((*x, *y, min_s(shipped, through)));
        }
    }
    PairCost::new(&direct, &source, &sink).expect("random pair cost")
}

// ---------------------------------------------------------------------
// Assertions
// ---------------------------------------------------------------------

pub fn atoms_of<S: Scalar>(m: &DiscreteMeasure<S>) -> Vec<(PointId, S)> {
    m.atoms().map(|(x, w)| (x, w.clone())).collect()
}

/// Exact equality of two measures on the same pair (atom-by-atom).
pub fn assert_measure_eq<S: Scalar>(a: &DiscreteMeasure<S>, b: &DiscreteMeasure<S>, ctx: &str) {
    assert!(
        atoms_of(a) == atoms_of(b),
        "{ctx}: measures differ\n  left:  {:?}\n  right: {:?}",
        atoms_of(a),
        atoms_of(b),
    );
}

pub fn assert_close(a: f64, b: f64, tol: f64, ctx: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{ctx}: |{a} - {b}| = {} > {tol}",
        (a - b).abs()
    );
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)`.
pub fn assert_rel_close(a: f64, b: f64, tol: f64, ctx: &str) {
    let scale = 1.0_f64.max(a.abs()).max(b.abs());
    assert!(
        (a - b).abs() <= tol * scale,
        "{ctx}: |{a} - {b}| = {} > {tol} · {scale}",
        (a - b).abs()
    );
}
