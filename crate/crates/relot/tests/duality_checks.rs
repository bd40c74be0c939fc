//! Property tests for the dual side: strong duality on both certificate
//! routes, agreement between the dense-LP and network-potential routes,
//! feasibility of conjugated potentials, and the operator-norm identity
//! for the transport norm.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;
use proptest::prelude::*;
use rand::Rng;

use common::{
    diagram_geometry, dyadic, line_geometry, random_measure, random_pair_cost, random_signed, rng,
    ABS_TOL,
};
use relot::duality::{
    kr_conjugate, kr_dual_dense, kr_dual_network, mk_dual_dense, mk_dual_network, op_norm,
    PairCost,
};
use relot::metric_pair::{MetricPair, PointId};
use relot::scalar::{min_s, Rational, Scalar};
use relot::solver::{kr_norm, solve_w1, solve_wp};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Both single-potential routes certify the same value with a
    /// non-negative gap within the strong-duality tolerance; in rational
    /// mode the gaps are literally zero.
    #[test]
    fn single_potential_routes_agree(seed in any::<u64>(), n in 2usize..14) {
        let mut r = rng(seed);
        let pair: Arc<MetricPair<Rational>> = line_geometry(&mut r, n);
        let mu = random_measure(&mut r, &pair, 6);
        let nu = random_measure(&mut r, &pair, 6);

        let dense = kr_dual_dense(&mu, &nu).unwrap();
        let network = kr_dual_network(&mu, &nu).unwrap();
        prop_assert_eq!(dense.value(), network.value());
        prop_assert!(dense.gap().is_zero());
        prop_assert!(network.gap().is_zero());

        let mut rf = rng(seed);
        let pair: Arc<MetricPair<f64>> = line_geometry(&mut rf, n);
        let mu = random_measure(&mut rf, &pair, 6);
        let nu = random_measure(&mut rf, &pair, 6);
        let dense = kr_dual_dense(&mu, &nu).unwrap();
        let network = kr_dual_network(&mu, &nu).unwrap();
        common::assert_rel_close(*dense.value(), *network.value(), 1e-9, "route agreement");
        let primal = *solve_w1(&mu, &nu).unwrap().cost();
        prop_assert!(*dense.gap() <= 1e-7 * primal.max(1.0));
        prop_assert!(*network.gap() <= 1e-7 * primal.max(1.0));
    }

    /// The two-potential dual against the relative ground cost reproduces
    /// `W_1` on both routes, with zero gap in rational mode.
    #[test]
    fn ground_cost_dual_reproduces_w1(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let pair: Arc<MetricPair<Rational>> = diagram_geometry(&mut r, n);
        let mu = random_measure(&mut r, &pair, 5);
        let nu = random_measure(&mut r, &pair, 5);
        let w1 = solve_w1(&mu, &nu).unwrap().cost().clone();

        let h = PairCost::ground(&mu, &nu, 1.0).unwrap();
        let dense = mk_dual_dense(&h, &mu, &nu).unwrap();
        let network = mk_dual_network(&h, &mu, &nu).unwrap();
        prop_assert_eq!(dense.value(), &w1);
        prop_assert_eq!(network.value(), &w1);
        prop_assert!(dense.gap().is_zero());
        prop_assert!(network.gap().is_zero());
    }

    /// Strong duality for arbitrary non-negative cost matrices, not just
    /// ground costs: random reservoir-capped costs still certify.
    #[test]
    fn random_cost_matrices_certify(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let pair: Arc<MetricPair<Rational>> = line_geometry(&mut r, n);
        let mu = random_measure(&mut r, &pair, 6);
        let nu = random_measure(&mut r, &pair, 6);
        let h = random_pair_cost(&mut r, &mu, &nu);

        let dense = mk_dual_dense(&h, &mu, &nu).unwrap();
        let network = mk_dual_network(&h, &mu, &nu).unwrap();
        prop_assert_eq!(dense.value(), network.value());
        prop_assert!(dense.gap().is_zero());
        prop_assert!(network.gap().is_zero());
    }

    /// Conjugation builds a feasible potential out of *any* function
    /// dominated by `d_A`, and feasible potentials obey weak duality.
    #[test]
    fn conjugation_yields_feasible_potentials(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let pair: Arc<MetricPair<Rational>> = line_geometry(&mut r, n);
        let mu = random_measure(&mut r, &pair, 6);
        let nu = random_measure(&mut r, &pair, 6);

        // q ≤ d_A pointwise, arbitrary otherwise (here: random caps, with
        // a random sign flip to stress the lower bound too).
        let domain: Vec<PointId> = (0..n).map(PointId).collect();
        let q: BTreeMap<PointId, Rational> = domain
            .iter()
            .map(|&x| {
                let cap: Rational = dyadic(&mut r, 4);
                let v = min_s(pair.dist_to_reservoir(x).unwrap(), cap);
                (x, if r.gen() { v } else { -v })
            })
            .collect();

        let f = kr_conjugate(&pair, &domain, &q).unwrap();

        for &x in &domain {
            let da = pair.dist_to_reservoir(x).unwrap();
            let fx = f[&x].clone();
            prop_assert!(fx.clone() <= da.clone(), "conjugate exceeds d_A");
            prop_assert!(-da <= fx, "conjugate below −d_A");
            for &y in &domain {
                let gap = f[&x].clone() - f[&y].clone();
                prop_assert!(gap <= pair.dbar(x, y).unwrap(), "conjugate is not 1-Lipschitz");
            }
        }

        // Weak duality: the conjugate's objective never exceeds W₁.
        let objective = mu.integrate(&f).unwrap() - nu.integrate(&f).unwrap();
        let w1 = solve_w1(&mu, &nu).unwrap().cost().clone();
        prop_assert!(objective <= w1);
    }

    /// The transport norm equals the operator norm over reservoir-
    /// respecting 1-Lipschitz functions, on random signed measures.
    #[test]
    fn transport_norm_equals_operator_norm(seed in any::<u64>(), n in 2usize..14) {
        let mut r = rng(seed);
        let pair: Arc<MetricPair<Rational>> = line_geometry(&mut r, n);
        let sigma = random_signed(&mut r, &pair, 8);
        prop_assert_eq!(kr_norm(&sigma).unwrap(), op_norm(&sigma).unwrap());
    }

    /// Certificates carry over to `p = 2` through the ground cost: the
    /// two-potential dual against `d_2²` certifies the squared distance.
    #[test]
    fn squared_distance_certifies_through_the_ground_cost(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair: Arc<MetricPair<f64>> = line_geometry(&mut r, 10);
        let mu = random_measure(&mut r, &pair, 5);
        let nu = random_measure(&mut r, &pair, 5);

        let cost = *solve_wp(&mu, &nu, 2.0).unwrap().cost();
        let h = PairCost::ground(&mu, &nu, 2.0).unwrap();
        let certificate = mk_dual_dense(&h, &mu, &nu).unwrap();
        common::assert_rel_close(*certificate.value(), cost, 1e-9, "p = 2 dual value");
        prop_assert!(*certificate.gap() <= 1e-7 * cost.max(1.0));
        prop_assert!(*certificate.gap() >= -ABS_TOL);
    }
}

/// The headline non-monotonicity: a signed measure dominated atomwise by
/// another can still have a much larger transport norm. Norm and order
/// live on different axes.
#[test]
fn transport_norm_is_not_monotone_in_the_absolute_value_order() {
    let q = |k: i64| Rational::from_int(k);
    let coords: Vec<Rational> = [2, 3, 8, 9].iter().map(|&k| q(k)).collect();
    let pair = relot::solver::line_pair(&coords).unwrap();
    let (d2, d3, d8, d9) = (PointId(0), PointId(1), PointId(2), PointId(3));

    let sigma1 = relot::measure::SignedMeasure::new(&pair, &[(d2, q(1)), (d8, q(1))])
        .unwrap()
        .0;
    let sigma2 = relot::measure::SignedMeasure::new(
        &pair,
        &[(d2, q(1)), (d3, q(-1)), (d8, q(1)), (d9, q(-1))],
    )
    .unwrap()
    .0;

    assert!(sigma1.abs().le(&sigma2.abs()).unwrap(), "|σ₁| ≤ |σ₂|");
    let n1 = kr_norm(&sigma1).unwrap();
    let n2 = kr_norm(&sigma2).unwrap();
    assert_eq!(n1, q(10));
    assert_eq!(n2, q(2));
    assert!(n1 > n2, "the norm must invert the order here");
}
