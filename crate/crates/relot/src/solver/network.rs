//! Network simplex on the reservoir-augmented bipartite transport network.
//!
//! Nodes: one per source atom (supply `μ_i`), one per sink atom (demand
//! `ν_j`), plus a single reservoir node that absorbs or emits the mass
//! imbalance. Arcs, *in index order*:
//!
//! 1. `source i → reservoir` at the source's reservoir cost,
//! 2. `reservoir → sink j` at the sink's reservoir cost,
//! 3. `source i → sink j` at the direct cost, lexicographic in `(i, j)`.
//!
//! The ordering matters: the entering-arc rule is "most negative reduced
//! cost, lowest index on ties", so ties break toward the reservoir —
//! deterministic optimal plans with a stated preference.
//!
//! The initial basis is the star tree of all reservoir arcs (the trivial
//! coupling), which is feasible and — because atom weights are strictly
//! positive — nondegenerate. Pivoting is textbook: walk the unique tree
//! cycle the entering arc closes, shift flow by the minimum backward-arc
//! flow, swap arcs, and recompute the spanning-tree structure and node
//! potentials from scratch (O(nodes) per pivot; instance sizes here are
//! tiny, so transparent beats clever). After a pivot budget the pricing
//! switches to Bland's smallest-index rule, which cannot cycle.
//!
//! On exact scalars every comparison uses zero tolerance and the result is
//! exact. On floats the pricing tolerance is `1e-12` scaled by the largest
//! cost.
//!
//! The final plan is normalized: any direct flow whose cost is matched (or
//! beaten, which only float noise can produce) by its two reservoir legs is
//! rerouted through the reservoir. This realizes the equivalence between
//! the ambient and relative ground costs — routing through the reservoir is
//! exactly how `d̄` improves on `d` — and keeps output deterministic when
//! multiple optimal plans exist.
//!
//! Node potentials come back as Monge–Kantorovich dual values: `f_i` on
//! sources and `g_j` on sinks with `f_i + g_j ≤ direct cost`,
//! `f_i ≤ source reservoir cost`, `g_j ≤ sink reservoir cost`, and
//! objective `Σ μ_i f_i + Σ ν_j g_j` equal to the optimal cost.

use crate::error::{Error, Result};
use crate::scalar::{cmp_s, Scalar};

/// Hard cap on simplex pivots; exceeding it is a solver failure.
const PIVOT_LIMIT: usize = 100_000;

/// A min-cost transport instance with a reservoir.
///
/// All costs must be non-negative and finite; supplies and demands strictly
/// positive (zero-weight atoms simply should not be passed in).
#[derive(Clone, Debug)]
pub(crate) struct NetworkProblem<S> {
    /// Supply at each source atom.
    pub supplies: Vec<S>,
    /// Demand at each sink atom.
    pub demands: Vec<S>,
    /// `direct_cost[i][j]`: cost of shipping source `i` directly to sink `j`.
    pub direct_cost: Vec<Vec<S>>,
    /// Cost of destroying one unit of source `i` into the reservoir.
    pub source_res_cost: Vec<S>,
    /// Cost of creating one unit at sink `j` out of the reservoir.
    pub sink_res_cost: Vec<S>,
}

/// An optimal transport plan plus its dual certificate data.
#[derive(Clone, Debug)]
pub(crate) struct NetworkSolution<S> {
    /// Optimal total cost, recomputed from the final flows.
    pub cost: S,
    /// Positive direct flows `(source, sink, amount)`.
    pub direct_flow: Vec<(usize, usize, S)>,
    /// Positive flows into the reservoir `(source, amount)`.
    pub to_res_flow: Vec<(usize, S)>,
    /// Positive flows out of the reservoir `(sink, amount)`.
    pub from_res_flow: Vec<(usize, S)>,
    /// Dual potential at each source (`f`).
    pub source_potential: Vec<S>,
    /// Dual potential at each sink (`g`).
    pub sink_potential: Vec<S>,
    /// Simplex pivots performed.
    pub pivots: usize,
}

struct Arc<S> {
    from: usize,
    to: usize,
    cost: S,
}

pub(crate) fn solve_network<S: Scalar>(problem: &NetworkProblem<S>) -> Result<NetworkSolution<S>> {
    let nm = problem.supplies.len();
    let nn = problem.demands.len();
    let root = nm + nn; // the reservoir node
    let node_count = nm + nn + 1;

    debug_assert_eq!(problem.direct_cost.len(), nm);
    debug_assert!(problem.direct_cost.iter().all(|r| r.len() == nn));
    debug_assert!(problem.supplies.iter().all(|w| *w > S::zero()));
    debug_assert!(problem.demands.iter().all(|w| *w > S::zero()));

    // Arc array in the documented order: to-reservoir, from-reservoir,
    // then direct arcs lexicographically.
    let mut arcs: Vec<Arc<S>> = Vec::with_capacity(nm + nn + nm * nn);
    for i in 0..nm {
        arcs.push(Arc {
            from: i,
            to: root,
            cost: problem.source_res_cost[i].clone(),
        });
    }
    for j in 0..nn {
        arcs.push(Arc {
            from: root,
            to: nm + j,
            cost: problem.sink_res_cost[j].clone(),
        });
    }
    for i in 0..nm {
        for j in 0..nn {
            arcs.push(Arc {
                from: i,
                to: nm + j,
                cost: problem.direct_cost[i][j].clone(),
            });
        }
    }

    // Start basis: the star tree of reservoir arcs = the trivial coupling.
    let mut flow: Vec<S> = vec![S::zero(); arcs.len()];
    let mut in_tree: Vec<bool> = vec![false; arcs.len()];
    for i in 0..nm {
        flow[i] = problem.supplies[i].clone();
        in_tree[i] = true;
    }
    for j in 0..nn {
        flow[nm + j] = problem.demands[j].clone();
        in_tree[nm + j] = true;
    }

    let enter_tol = if S::EXACT {
        S::zero()
    } else {
        let scale = arcs
            .iter()
            .map(|a| a.cost.to_f64().abs())
            .fold(1.0f64, f64::max);
        S::from_f64(1e-12 * scale).expect("finite tolerance")
    };

    // Spanning-tree bookkeeping, rebuilt after every pivot.
    let mut parent: Vec<usize> = vec![usize::MAX; node_count];
    let mut parent_arc: Vec<usize> = vec![usize::MAX; node_count];
    let mut depth: Vec<usize> = vec![0; node_count];
    let mut potential: Vec<S> = vec![S::zero(); node_count];

    let rebuild = |in_tree: &[bool],
                   parent: &mut Vec<usize>,
                   parent_arc: &mut Vec<usize>,
                   depth: &mut Vec<usize>,
                   potential: &mut Vec<S>|
     -> Result<()> {
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        for (id, arc) in arcs.iter().enumerate() {
            if in_tree[id] {
                adjacency[arc.from].push(id);
                adjacency[arc.to].push(id);
            }
        }
        parent.fill(usize::MAX);
        parent_arc.fill(usize::MAX);
        let mut seen = vec![false; node_count];
        let mut queue = std::collections::VecDeque::new();
        seen[root] = true;
        depth[root] = 0;
        potential[root] = S::zero();
        queue.push_back(root);
        let mut visited = 1usize;
        while let Some(u) = queue.pop_front() {
            for &id in &adjacency[u] {
                let arc = &arcs[id];
                let v = if arc.from == u { arc.to } else { arc.from };
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                visited += 1;
                parent[v] = u;
                parent_arc[v] = id;
                depth[v] = depth[u] + 1;
                // Tree arcs have zero reduced cost c − π[from] + π[to]:
                potential[v] = if arc.from == u {
                    // u → v: π[v] = π[u] − c
                    potential[u].clone() - arc.cost.clone()
                } else {
                    // v → u: π[v] = π[u] + c
                    potential[u].clone() + arc.cost.clone()
                };
                queue.push_back(v);
            }
        }
        if visited != node_count {
            return Err(Error::SolverInconsistency {
                reason: "basis arcs do not span the network".into(),
            });
        }
        Ok(())
    };

    rebuild(
        &in_tree,
        &mut parent,
        &mut parent_arc,
        &mut depth,
        &mut potential,
    )?;

    let reduced_cost = |arc: &Arc<S>, potential: &[S]| -> S {
        arc.cost.clone() - potential[arc.from].clone() + potential[arc.to].clone()
    };

    let bland_after = 5 * (node_count + arcs.len()) + 200;
    let neg_tol = -enter_tol;
    let mut pivots = 0usize;

    loop {
        // --- pricing: pick the entering arc ---
        let mut entering: Option<(usize, S)> = None;
        for (id, arc) in arcs.iter().enumerate() {
            if in_tree[id] {
                continue;
            }
            let rc = reduced_cost(arc, &potential);
            if rc < neg_tol {
                if pivots >= bland_after {
                    // Bland: first eligible index.
                    entering = Some((id, rc));
                    break;
                }
                // Dantzig: most negative wins; scanning in index order, a
                // strict improvement requirement keeps the lowest index on
                // ties.
                let replace = match &entering {
                    None => true,
                    Some((_, best)) => cmp_s(&rc, best) == std::cmp::Ordering::Less,
                };
                if replace {
                    entering = Some((id, rc));
                }
            }
        }
        let Some((enter_id, _)) = entering else {
            break; // optimal
        };

        // --- the cycle the entering arc closes with the tree ---
        // Walk both endpoints to their common ancestor. Arcs traversed
        // with the cycle's direction gain θ; arcs against it lose θ.
        let (eu, ev) = (arcs[enter_id].from, arcs[enter_id].to);
        let mut forward: Vec<usize> = vec![enter_id];
        let mut backward: Vec<usize> = Vec::new();
        let (mut a, mut b) = (eu, ev);
        // Cycle direction: … → eu —(enter)→ ev → … back to eu.
        // Climbing from ev toward the ancestor moves *with* the cycle, so a
        // tree arc pointing up (child → parent) is forward there. Climbing
        // from eu moves *against* it, flipping the classification.
        while depth[a] > depth[b] {
            let id = parent_arc[a];
            if arcs[id].from == a {
                backward.push(id);
            } else {
                forward.push(id);
            }
            a = parent[a];
        }
        while depth[b] > depth[a] {
            let id = parent_arc[b];
            if arcs[id].from == b {
                forward.push(id);
            } else {
                backward.push(id);
            }
            b = parent[b];
        }
        while a != b {
            let id_a = parent_arc[a];
            if arcs[id_a].from == a {
                backward.push(id_a);
            } else {
                forward.push(id_a);
            }
            a = parent[a];
            let id_b = parent_arc[b];
            if arcs[id_b].from == b {
                forward.push(id_b);
            } else {
                backward.push(id_b);
            }
            b = parent[b];
        }

        // θ = smallest backward flow; leaving arc = lowest index among the
        // minimizers (Bland-compatible, deterministic).
        let mut best: Option<(usize, S)> = None;
        for &id in &backward {
            let better = match &best {
                None => true,
                Some((prev_id, t)) => match cmp_s(&flow[id], t) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => id < *prev_id,
                    std::cmp::Ordering::Greater => false,
                },
            };
            if better {
                best = Some((id, flow[id].clone()));
            }
        }
        let Some((leave_id, theta)) = best else {
            // An all-forward cycle would mean an unbounded improvement,
            // impossible in a transportation polytope.
            return Err(Error::SolverInconsistency {
                reason: "entering arc closed a cycle with no backward arc".into(),
            });
        };

        if !theta.is_zero() {
            for &id in &forward {
                flow[id] = flow[id].clone() + theta.clone();
            }
            for &id in &backward {
                flow[id] = flow[id].clone() - theta.clone();
            }
        }
        in_tree[leave_id] = false;
        in_tree[enter_id] = true;
        debug_assert!(flow[leave_id].is_zero() || !S::EXACT);
        flow[leave_id] = S::zero();

        rebuild(
            &in_tree,
            &mut parent,
            &mut parent_arc,
            &mut depth,
            &mut potential,
        )?;

        pivots += 1;
        if pivots > PIVOT_LIMIT {
            return Err(Error::PivotLimit { limit: PIVOT_LIMIT });
        }
    }

    // --- extract flows, normalizing ties toward the reservoir ---
    let mut to_res: Vec<S> = flow[..nm].to_vec();
    let mut from_res: Vec<S> = flow[nm..nm + nn].to_vec();
    let mut direct: Vec<(usize, usize, S)> = Vec::new();
    for i in 0..nm {
        for j in 0..nn {
            let f = flow[nm + nn + i * nn + j].clone();
            if f.is_zero() {
                continue;
            }
            debug_assert!(f > S::zero(), "negative flow escaped the ratio test");
            let via_reservoir =
                problem.source_res_cost[i].clone() + problem.sink_res_cost[j].clone();
            if problem.direct_cost[i][j] >= via_reservoir {
                // The reservoir route ties (or float noise made it win):
                // reroute for determinism; the cost is unchanged.
                to_res[i] = to_res[i].clone() + f.clone();
                from_res[j] = from_res[j].clone() + f;
            } else {
                direct.push((i, j, f));
            }
        }
    }

    let mut cost = S::zero();
    for (i, j, f) in &direct {
        cost = cost + f.clone() * problem.direct_cost[*i][*j].clone();
    }
    let to_res_flow: Vec<(usize, S)> = to_res
        .into_iter()
        .enumerate()
        .filter(|(_, f)| !f.is_zero())
        .collect();
    for (i, f) in &to_res_flow {
        cost = cost + f.clone() * problem.source_res_cost[*i].clone();
    }
    let from_res_flow: Vec<(usize, S)> = from_res
        .into_iter()
        .enumerate()
        .filter(|(_, f)| !f.is_zero())
        .collect();
    for (j, f) in &from_res_flow {
        cost = cost + f.clone() * problem.sink_res_cost[*j].clone();
    }

    // Dual potentials: f on sources, g on sinks, with f(x) + g(y) ≤ cost
    // directly from reduced-cost optimality (π[root] = 0 throughout).
    let source_potential: Vec<S> = potential[..nm].to_vec();
    let sink_potential: Vec<S> = potential[nm..nm + nn].iter().map(|p| -p.clone()).collect();

    Ok(NetworkSolution {
        cost,
        direct_flow: direct,
        to_res_flow,
        from_res_flow,
        source_potential,
        sink_potential,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn f64_problem(
        supplies: Vec<f64>,
        demands: Vec<f64>,
        direct: Vec<Vec<f64>>,
        src_res: Vec<f64>,
        snk_res: Vec<f64>,
    ) -> NetworkProblem<f64> {
        NetworkProblem {
            supplies,
            demands,
            direct_cost: direct,
            source_res_cost: src_res,
            sink_res_cost: snk_res,
        }
    }

    /// Every unit must use the reservoir: sources only.
    #[test]
    fn sources_only_pay_their_reservoir_cost() {
        let sol = solve_network(&f64_problem(
            vec![1.0, 1.0],
            vec![],
            vec![vec![], vec![]],
            vec![2.0, 8.0],
            vec![],
        ))
        .unwrap();
        assert_eq!(sol.cost, 10.0);
        assert_eq!(sol.to_res_flow, vec![(0, 1.0), (1, 1.0)]);
        assert!(sol.direct_flow.is_empty());
        assert_eq!(sol.pivots, 0);
    }

    /// The worked two-by-two instance: shifting both atoms by one beats any
    /// reservoir use: cost 2.
    #[test]
    fn shifted_pair_matches_directly() {
        // Sources at 2 and 8, sinks at 3 and 9 on the line with reservoir
        // {0}: direct costs d̄(i,j), reservoir costs d_A.
        let sol = solve_network(&f64_problem(
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            vec![vec![1.0, 7.0], vec![5.0, 1.0]],
            vec![2.0, 8.0],
            vec![3.0, 9.0],
        ))
        .unwrap();
        assert_eq!(sol.cost, 2.0);
        assert_eq!(sol.direct_flow, vec![(0, 0, 1.0), (1, 1, 1.0)]);
        assert!(sol.to_res_flow.is_empty());
        assert!(sol.from_res_flow.is_empty());
    }

    /// δ₁ + δ₅ against δ₂: match 5→2 and drop 1 into the reservoir (cost 4),
    /// beating 1→2 plus dropping 5 (cost 6) and all-reservoir (cost 8).
    #[test]
    fn partial_matching_uses_reservoir_for_leftovers() {
        let sol = solve_network(&f64_problem(
            vec![1.0, 1.0],
            vec![1.0],
            vec![vec![1.0], vec![3.0]],
            vec![1.0, 5.0],
            vec![2.0],
        ))
        .unwrap();
        assert_eq!(sol.cost, 4.0);
        assert_eq!(sol.direct_flow, vec![(1, 0, 1.0)]);
        assert_eq!(sol.to_res_flow, vec![(0, 1.0)]);
        assert!(sol.from_res_flow.is_empty());
    }

    /// Ties between a direct arc and its reservoir route break toward the
    /// reservoir.
    #[test]
    fn ties_break_toward_the_reservoir() {
        // Direct cost 4 equals 1 + 3 via the reservoir.
        let sol = solve_network(&f64_problem(
            vec![1.0],
            vec![1.0],
            vec![vec![4.0]],
            vec![1.0],
            vec![3.0],
        ))
        .unwrap();
        assert_eq!(sol.cost, 4.0);
        assert!(sol.direct_flow.is_empty());
        assert_eq!(sol.to_res_flow, vec![(0, 1.0)]);
        assert_eq!(sol.from_res_flow, vec![(0, 1.0)]);
    }

    /// Unequal masses force reservoir balancing.
    #[test]
    fn mass_imbalance_is_absorbed_by_the_reservoir() {
        let sol = solve_network(&f64_problem(
            vec![2.0],
            vec![0.5],
            vec![vec![1.0]],
            vec![3.0],
            vec![2.0],
        ))
        .unwrap();
        // Ship 0.5 directly (cost 0.5), drop 1.5 (cost 4.5).
        assert_eq!(sol.cost, 5.0);
        assert_eq!(sol.direct_flow, vec![(0, 0, 0.5)]);
        assert_eq!(sol.to_res_flow, vec![(0, 1.5)]);
    }

    /// Dual potentials certify the optimum: feasible and tight.
    #[test]
    fn potentials_certify_optimality() {
        let problem = f64_problem(
            vec![1.0, 2.0, 0.5],
            vec![1.5, 1.0],
            vec![vec![1.0, 4.0], vec![2.5, 0.5], vec![3.0, 3.0]],
            vec![2.0, 3.0, 1.0],
            vec![2.5, 4.0],
        );
        let sol = solve_network(&problem).unwrap();
        let (f, g) = (&sol.source_potential, &sol.sink_potential);
        for i in 0..3 {
            assert!(f[i] <= problem.source_res_cost[i] + 1e-12);
            for j in 0..2 {
                assert!(f[i] + g[j] <= problem.direct_cost[i][j] + 1e-12);
            }
        }
        for j in 0..2 {
            assert!(g[j] <= problem.sink_res_cost[j] + 1e-12);
        }
        let dual: f64 = (0..3).map(|i| problem.supplies[i] * f[i]).sum::<f64>()
            + (0..2).map(|j| problem.demands[j] * g[j]).sum::<f64>();
        assert!((dual - sol.cost).abs() < 1e-12);
    }

    /// Exact rational instance with fractional optimum.
    #[test]
    fn exact_rational_flows() {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let sol = solve_network(&NetworkProblem {
            supplies: vec![r(1, 3), r(1, 2)],
            demands: vec![r(2, 3)],
            direct_cost: vec![vec![r(1, 7)], vec![r(5, 1)]],
            source_res_cost: vec![r(1, 1), r(1, 4)],
            sink_res_cost: vec![r(2, 1)],
        })
        .unwrap();
        // Source 0 ships its third at 1/7; source 1 is cheaper dropped
        // (1/4 < 5); the remaining third of the demand comes from the
        // reservoir at 2.
        assert_eq!(sol.direct_flow, vec![(0, 0, r(1, 3))]);
        assert_eq!(sol.to_res_flow, vec![(1, r(1, 2))]);
        assert_eq!(sol.from_res_flow, vec![(0, r(1, 3))]);
        assert_eq!(sol.cost, r(1, 21) + r(1, 8) + r(2, 3));
    }

    /// Empty instance solves to nothing.
    #[test]
    fn empty_instance() {
        let sol = solve_network(&f64_problem(vec![], vec![], vec![], vec![], vec![])).unwrap();
        assert_eq!(sol.cost, 0.0);
        assert!(sol.direct_flow.is_empty());
    }
}
