//! Exact solvers for the relative transport distance `W_p`.
//!
//! The distance between two measures on a metric pair is the cheapest way
//! to turn one into the other when mass may also be created or destroyed at
//! the reservoir, paying the distance to the reservoir (raised to the
//! `p`-th power) per unit. The minimum runs over couplings with the two
//! measures as marginals of the direct part plus reservoir legs; the value
//! reported is the `p`-th root of the optimal cost.
//!
//! The production path is a network simplex on the reservoir-augmented
//! bipartite graph ([`network`]). Two deliberately independent oracles
//! cross-check it:
//!
//! * [`oracle_lp`] — the same transport problem as a dense-tableau LP,
//!   sharing no code with the network solver beyond scalar arithmetic;
//! * [`oracle_enumerate`] — brute-force enumeration of partial matchings
//!   for unit-weight measures, correct because a transportation polytope
//!   with integral marginals has an integral optimal vertex.
//!
//! Every solve re-verifies its own output before returning: the coupling's
//! marginals must reproduce the inputs and its recomputed cost must match
//! the simplex objective (exactly on rationals, to `1e-9` relative on
//! floats). A failure is reported as a solver error rather than silently
//! returned.

pub(crate) mod network;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::lp;
use crate::measure::{DiscreteMeasure, SignedMeasure};
use crate::metric_pair::{MetricPair, PointId};
use crate::scalar::{check_exponent, Scalar};

use network::{solve_network, NetworkProblem};

/// Largest product of support sizes [`oracle_lp`] accepts.
pub const ORACLE_LP_CAP: usize = 400;

/// Largest per-side support size [`oracle_enumerate`] accepts.
pub const ORACLE_ENUMERATE_CAP: usize = 8;

/// Diagnostics from a solver run.
#[derive(Clone, Debug)]
pub struct SolverStats {
    /// Simplex pivots performed.
    pub pivots: usize,
    /// Wall-clock time of the solve.
    pub wall_time: Duration,
}

/// The result of an exact transport solve: optimal cost, an optimal
/// coupling attaining it, and run diagnostics.
#[derive(Clone, Debug)]
pub struct OTResult<S: Scalar> {
    p: f64,
    cost: S,
    coupling: Coupling<S>,
    stats: SolverStats,
    /// Dual potential on the first measure's support (used by the duality
    /// module to build certificates without re-solving).
    pub(crate) potential_f: BTreeMap<PointId, S>,
    /// Dual potential on the second measure's support.
    pub(crate) potential_g: BTreeMap<PointId, S>,
}

impl<S: Scalar> OTResult<S> {
    /// The exponent the solve was run with.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// The optimal transport cost — the distance raised to the `p`-th
    /// power. This is the quantity the solver works with internally and is
    /// exact in rational mode.
    pub fn cost(&self) -> &S {
        &self.cost
    }

    /// The distance `W_p`: the `p`-th root of [`cost`](Self::cost).
    ///
    /// In rational mode the root must exist exactly; otherwise the call
    /// reports an inexact-root error and the caller can fall back to
    /// [`cost`](Self::cost) (or float arithmetic) instead.
    pub fn value(&self) -> Result<S> {
        self.cost.root_checked(self.p)
    }

    /// An optimal coupling attaining the cost.
    pub fn coupling(&self) -> &Coupling<S> {
        &self.coupling
    }

    /// Solve diagnostics.
    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    /// The dual potentials `(f, g)` from the final simplex basis, as maps
    /// on the supports of the two marginals.
    ///
    /// They are feasible for the `p`-th-power ground cost and their
    /// objective equals [`cost`](Self::cost) (complementary slackness from
    /// the optimal basis). For certificates that are re-verified by
    /// independent arithmetic, see [`crate::duality`].
    pub fn potentials(&self) -> (&BTreeMap<PointId, S>, &BTreeMap<PointId, S>) {
        (&self.potential_f, &self.potential_g)
    }
}

/// Computes `W_1` between two measures on the same pair.
pub fn solve_w1<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
) -> Result<OTResult<S>> {
    solve_wp(mu, nu, 1.0)
}

/// Computes `W_p` between two measures on the same pair, `p ≥ 1`.
///
/// In rational mode `p` must be an integer (the ground costs stay rational
/// only for integer exponents); [`OTResult::cost`] is then exact.
pub fn solve_wp<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    p: f64,
) -> Result<OTResult<S>> {
    mu.check_same_pair(nu)?;
    check_exponent(p)?;
    let started = Instant::now();
    let pair = mu.pair();

    let xs: Vec<PointId> = mu.atoms().map(|(x, _)| x).collect();
    let ys: Vec<PointId> = nu.atoms().map(|(y, _)| y).collect();

    let problem = NetworkProblem {
        supplies: mu.atoms().map(|(_, w)| w.clone()).collect(),
        demands: nu.atoms().map(|(_, w)| w.clone()).collect(),
        direct_cost: xs
            .iter()
            .map(|&x| {
                ys.iter()
                    .map(|&y| pair.dp_cost_pow(p, x, y))
                    .collect::<Result<Vec<S>>>()
            })
            .collect::<Result<Vec<_>>>()?,
        source_res_cost: xs
            .iter()
            .map(|&x| pair.reservoir_cost_pow(p, x))
            .collect::<Result<Vec<S>>>()?,
        sink_res_cost: ys
            .iter()
            .map(|&y| pair.reservoir_cost_pow(p, y))
            .collect::<Result<Vec<S>>>()?,
    };

    let solution = solve_network(&problem)?;

    let direct: Vec<(PointId, PointId, S)> = solution
        .direct_flow
        .iter()
        .map(|(i, j, f)| (xs[*i], ys[*j], f.clone()))
        .collect();
    let to_res: Vec<(PointId, S)> = solution
        .to_res_flow
        .iter()
        .map(|(i, f)| (xs[*i], f.clone()))
        .collect();
    let from_res: Vec<(PointId, S)> = solution
        .from_res_flow
        .iter()
        .map(|(j, f)| (ys[*j], f.clone()))
        .collect();
    let coupling = Coupling::new(pair, &direct, &to_res, &from_res)?;

    verify_solution(mu, nu, &coupling, &solution.cost, p)?;
    let cost = coupling.cost(p)?;

    let potential_f = xs
        .iter()
        .zip(solution.source_potential.iter())
        .map(|(&x, v)| (x, v.clone()))
        .collect();
    let potential_g = ys
        .iter()
        .zip(solution.sink_potential.iter())
        .map(|(&y, v)| (y, v.clone()))
        .collect();

    Ok(OTResult {
        p,
        cost,
        coupling,
        stats: SolverStats {
            pivots: solution.pivots,
            wall_time: started.elapsed(),
        },
        potential_f,
        potential_g,
    })
}

/// Post-solve certification: the returned coupling must actually transport
/// `μ` to `ν` and must actually cost what the simplex claims.
fn verify_solution<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    coupling: &Coupling<S>,
    claimed_cost: &S,
    p: f64,
) -> Result<()> {
    let (left, right) = coupling.marginals()?;
    let mass_tol = marginal_tolerance(mu, nu);
    if !measures_close(&left, mu, &mass_tol) || !measures_close(&right, nu, &mass_tol) {
        return Err(Error::SolverInconsistency {
            reason: "optimal coupling does not have the requested marginals".into(),
        });
    }
    let recomputed = coupling.cost(p)?;
    let diff = (recomputed - claimed_cost.clone()).abs();
    let cost_tol = if S::EXACT {
        S::zero()
    } else {
        let scale = f64::max(1.0, claimed_cost.to_f64().abs());
        S::from_f64(1e-9 * scale).expect("finite tolerance")
    };
    if diff > cost_tol {
        return Err(Error::SolverInconsistency {
            reason: "recomputed coupling cost disagrees with the simplex objective".into(),
        });
    }
    Ok(())
}

fn marginal_tolerance<S: Scalar>(mu: &DiscreteMeasure<S>, nu: &DiscreteMeasure<S>) -> S {
    if S::EXACT {
        S::zero()
    } else {
        let scale = f64::max(1.0, mu.total_mass().to_f64() + nu.total_mass().to_f64());
        S::from_f64(1e-9 * scale).expect("finite tolerance")
    }
}

/// Atomwise comparison of two measures on the same pair, up to `tol`.
fn measures_close<S: Scalar>(a: &DiscreteMeasure<S>, b: &DiscreteMeasure<S>, tol: &S) -> bool {
    let keys: std::collections::BTreeSet<PointId> = a
        .atoms()
        .map(|(x, _)| x)
        .chain(b.atoms().map(|(x, _)| x))
        .collect();
    keys.into_iter()
        .all(|x| (a.weight(x) - b.weight(x)).abs() <= *tol)
}

/// The transport norm of a signed measure: `W_1` between the positive and
/// negative parts of its minimal (Jordan) decomposition.
pub fn kr_norm<S: Scalar>(sigma: &SignedMeasure<S>) -> Result<S> {
    let (plus, minus) = sigma.jordan();
    // p = 1: the cost is the value; no root is taken, so this is exact in
    // rational mode.
    solve_w1(&plus, &minus)?.value()
}

/// Independent check: solves the transport problem as a dense-tableau LP.
///
/// Variables are the direct flows plus one reservoir slack per atom; the
/// constraints say each atom's mass is fully routed. Shares no logic with
/// the network simplex. Returns the distance (the `p`-th root of the LP
/// optimum); see [`oracle_lp_pow`] for the exact cost.
///
/// Fails with an instance-size error when the product of the support sizes
/// exceeds [`ORACLE_LP_CAP`] — the point of the oracle is transparent
/// verification on small instances, not performance.
pub fn oracle_lp<S: Scalar>(mu: &DiscreteMeasure<S>, nu: &DiscreteMeasure<S>, p: f64) -> Result<S> {
    oracle_lp_pow(mu, nu, p)?.root_checked(p)
}

/// [`oracle_lp`] without the final root: the optimal cost `W_p^p`, exact in
/// rational mode.
pub fn oracle_lp_pow<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    p: f64,
) -> Result<S> {
    mu.check_same_pair(nu)?;
    check_exponent(p)?;
    let pair = mu.pair();

    let xs: Vec<(PointId, S)> = mu.atoms().map(|(x, w)| (x, w.clone())).collect();
    let ys: Vec<(PointId, S)> = nu.atoms().map(|(y, w)| (y, w.clone())).collect();
    let (nm, nn) = (xs.len(), ys.len());
    if nm * nn > ORACLE_LP_CAP {
        return Err(Error::InstanceTooLarge {
            oracle: "oracle_lp".into(),
            size: nm * nn,
            cap: ORACLE_LP_CAP,
        });
    }

    // Columns: direct flows x_{ij} (lexicographic), then one
    // destroy-into-reservoir slack per source atom, then one
    // create-from-reservoir slack per sink atom.
    let cols = nm * nn + nm + nn;
    let mut c = vec![S::zero(); cols];
    for (i, (x, _)) in xs.iter().enumerate() {
        for (j, (y, _)) in ys.iter().enumerate() {
            c[i * nn + j] = pair.dp_cost_pow(p, *x, *y)?;
        }
    }
    for (i, (x, _)) in xs.iter().enumerate() {
        c[nm * nn + i] = pair.reservoir_cost_pow(p, *x)?;
    }
    for (j, (y, _)) in ys.iter().enumerate() {
        c[nm * nn + nm + j] = pair.reservoir_cost_pow(p, *y)?;
    }

    // Rows: Σ_j x_{ij} + t_i = μ_i, then Σ_i x_{ij} + s_j = ν_j.
    let mut a = vec![vec![S::zero(); cols]; nm + nn];
    let mut b = Vec::with_capacity(nm + nn);
    for (i, (_, w)) in xs.iter().enumerate() {
        for j in 0..nn {
            a[i][i * nn + j] = S::one();
        }
        a[i][nm * nn + i] = S::one();
        b.push(w.clone());
    }
    for (j, (_, w)) in ys.iter().enumerate() {
        for i in 0..nm {
            a[nm + j][i * nn + j] = S::one();
        }
        a[nm + j][nm * nn + nm + j] = S::one();
        b.push(w.clone());
    }

    // The reservoir slacks form an identity start basis: the all-reservoir
    // routing is feasible, so no phase-one is ever needed.
    let basis: Vec<usize> = (0..nm)
        .map(|i| nm * nn + i)
        .chain((0..nn).map(|j| nm * nn + nm + j))
        .collect();

    Ok(lp::solve_equality_form(&c, &a, &b, &basis)?.objective)
}

/// Independent check for unit-weight measures: enumerates every partial
/// matching of source atoms to sink atoms (unmatched atoms pay their
/// reservoir cost) and returns the cheapest distance found.
///
/// Correct because the transportation polytope with 0/1 marginals has 0/1
/// vertices, so some optimal coupling is a partial matching. Fails with an
/// instance-size error beyond [`ORACLE_ENUMERATE_CAP`] atoms per side, and
/// with a non-unit-weight error unless every weight is exactly one.
pub fn oracle_enumerate<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    p: f64,
) -> Result<S> {
    oracle_enumerate_pow(mu, nu, p)?.root_checked(p)
}

/// [`oracle_enumerate`] without the final root: the optimal cost `W_p^p`,
/// exact in rational mode.
pub fn oracle_enumerate_pow<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    p: f64,
) -> Result<S> {
    mu.check_same_pair(nu)?;
    check_exponent(p)?;
    let pair = mu.pair();

    for (_, w) in mu.atoms().chain(nu.atoms()) {
        if !(w.clone() - S::one()).is_zero() {
            return Err(Error::NonUnitWeights {
                value: w.to_string(),
            });
        }
    }
    let xs: Vec<PointId> = mu.atoms().map(|(x, _)| x).collect();
    let ys: Vec<PointId> = nu.atoms().map(|(y, _)| y).collect();
    let largest = xs.len().max(ys.len());
    if largest > ORACLE_ENUMERATE_CAP {
        return Err(Error::InstanceTooLarge {
            oracle: "oracle_enumerate".into(),
            size: largest,
            cap: ORACLE_ENUMERATE_CAP,
        });
    }

    let direct: Vec<Vec<S>> = xs
        .iter()
        .map(|&x| {
            ys.iter()
                .map(|&y| pair.dp_cost_pow(p, x, y))
                .collect::<Result<Vec<S>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let src_res: Vec<S> = xs
        .iter()
        .map(|&x| pair.reservoir_cost_pow(p, x))
        .collect::<Result<Vec<S>>>()?;
    let snk_res: Vec<S> = ys
        .iter()
        .map(|&y| pair.reservoir_cost_pow(p, y))
        .collect::<Result<Vec<S>>>()?;

    // Depth-first over the source atoms: each either matches an unused sink
    // or goes to the reservoir; leftover sinks then pay their own way.
    fn descend<S: Scalar>(
        i: usize,
        used: u32,
        acc: S,
        best: &mut Option<S>,
        direct: &[Vec<S>],
        src_res: &[S],
        snk_res: &[S],
    ) {
        if i == direct.len() {
            let mut total = acc;
            for (j, cost) in snk_res.iter().enumerate() {
                if used & (1 << j) == 0 {
                    total = total + cost.clone();
                }
            }
            let improves = match best {
                None => true,
                Some(b) => total < *b,
            };
            if improves {
                *best = Some(total);
            }
            return;
        }
        descend(
            i + 1,
            used,
            acc.clone() + src_res[i].clone(),
            best,
            direct,
            src_res,
            snk_res,
        );
        for j in 0..snk_res.len() {
            if used & (1 << j) == 0 {
                descend(
                    i + 1,
                    used | (1 << j),
                    acc.clone() + direct[i][j].clone(),
                    best,
                    direct,
                    src_res,
                    snk_res,
                );
            }
        }
    }

    let mut best: Option<S> = None;
    descend(
        0,
        0,
        S::zero(),
        &mut best,
        &direct,
        &src_res,
        &snk_res,
    );
    Ok(best.expect("enumeration always reaches at least the all-reservoir leaf"))
}

/// Convenience used in examples and tests: the distance between `μ` and the
/// zero measure, which equals the `p`-th root of the `p`-th reservoir
/// moment.
pub fn distance_to_zero<S: Scalar>(mu: &DiscreteMeasure<S>, p: f64) -> Result<S> {
    let zero = DiscreteMeasure::zero(mu.pair());
    solve_wp(mu, &zero, p)?.value()
}

/// Builds the line-with-reservoir pair used throughout the documentation
/// examples: points are 1-dimensional coordinates, the reservoir is the
/// origin, so the reservoir distance of a point is its absolute value.
pub fn line_pair<S: Scalar>(coords: &[S]) -> Result<Arc<MetricPair<S>>> {
    let points: Vec<Vec<S>> = coords.iter().map(|c| vec![c.clone()]).collect();
    Ok(Arc::new(MetricPair::euclidean(
        1,
        &points,
        &[vec![S::zero()]],
    )?))
}
