//! A dense tableau simplex for small equality-form linear programs.
//!
//! Solves `min c·x` subject to `A x = b`, `x ≥ 0`, given a starting basis
//! whose columns already form an identity inside `A` (slack or
//! reservoir-variable columns — every LP in this crate has one by
//! construction, so no phase-one is ever needed).
//!
//! This is deliberately the textbook algorithm: the three consumers
//! (the brute-force transportation oracle and the two dual LPs) exist to
//! *cross-check* the network simplex, so simplicity and independence beat
//! speed. Determinism and exactness rules:
//!
//! * entering variable: most negative reduced cost, lowest index on ties
//!   (switching to Bland's smallest-index rule after a pivot budget, which
//!   makes cycling impossible);
//! * leaving variable: standard ratio test, smallest basis index on ties;
//! * tolerances are zero for exact scalars and tiny data-scaled values for
//!   floats;
//! * the reported objective is recomputed as `c·x` from the final solution,
//!   not read off the drift-prone tableau corner.

use crate::error::{Error, Result};
use crate::scalar::{cmp_s, Scalar};

/// Hard cap on simplex pivots; exceeding it is a solver failure, not a loop.
const PIVOT_LIMIT: usize = 100_000;

/// A solved linear program.
#[derive(Clone, Debug)]
pub struct LpSolution<S> {
    /// Optimal objective value `c·x`.
    pub objective: S,
    /// Optimal point, indexed like the objective vector.
    pub x: Vec<S>,
}

/// Minimize `c·x` over `A x = b`, `x ≥ 0`, starting from `basis`.
///
/// Requirements (checked by debug assertions): `b ≥ 0`, `basis` has one
/// entry per row, and column `basis[i]` of `A` is the `i`-th unit vector.
pub fn solve_equality_form<S: Scalar>(
    c: &[S],
    a: &[Vec<S>],
    b: &[S],
    basis: &[usize],
) -> Result<LpSolution<S>> {
    let m = a.len();
    let n = c.len();
    debug_assert_eq!(b.len(), m);
    debug_assert_eq!(basis.len(), m);
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert!(b.iter().all(|v| *v >= S::zero()), "rhs must be non-negative");
    #[cfg(debug_assertions)]
    for (i, &col) in basis.iter().enumerate() {
        for (r, row) in a.iter().enumerate() {
            let expect = if r == i { S::one() } else { S::zero() };
            debug_assert!(
                row[col] == expect,
                "basis column {col} is not unit vector {i}"
            );
        }
    }

    // Tableau rows [A | b] and the reduced-cost row, kept canonical with
    // respect to the current basis by the pivot row operations.
    let mut rows: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.to_vec();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut basis = basis.to_vec();

    // Initial reduced costs: c_j − Σ_i c_basis[i]·A[i][j]. The starting
    // basis is an identity, so B⁻¹A = A here.
    let mut cost_row: Vec<S> = (0..n)
        .map(|j| {
            let mut rc = c[j].clone();
            for (i, row) in rows.iter().enumerate() {
                rc = rc - c[basis[i]].clone() * row[j].clone();
            }
            rc
        })
        .collect();

    // Float tolerances scale with the data; exact mode tolerates nothing.
    let enter_tol = if S::EXACT {
        S::zero()
    } else {
        let scale = c
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(1.0f64, f64::max);
        S::from_f64(1e-12 * scale).expect("finite tolerance")
    };
    let entry_tol = if S::EXACT {
        S::zero()
    } else {
        S::from_f64(1e-11).expect("finite tolerance")
    };

    // Dantzig pricing converges fastest; Bland pricing provably terminates.
    // Run the former, and fall back to the latter if the pivot count ever
    // suggests cycling or stalling.
    let bland_after = 5 * (m + n) + 200;

    let mut pivots = 0usize;
    loop {
        // --- entering column ---
        let mut entering: Option<usize> = None;
        if pivots < bland_after {
            let mut best: Option<&S> = None;
            for (j, rc) in cost_row.iter().enumerate() {
                if *rc < -enter_tol.clone() && best.is_none_or(|b| rc < b) {
                    best = Some(rc);
                    entering = Some(j);
                }
            }
        } else {
            entering = cost_row
                .iter()
                .position(|rc| *rc < -enter_tol.clone());
        }
        let Some(enter) = entering else {
            break; // optimal
        };

        // --- ratio test: leaving row ---
        let mut leave: Option<usize> = None;
        let mut best_ratio: Option<S> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[enter] > entry_tol {
                let ratio = row[n].clone() / row[enter].clone();
                let better = match &best_ratio {
                    None => true,
                    Some(r) => match cmp_s(&ratio, r) {
                        std::cmp::Ordering::Less => true,
                        // Tie: prefer the smallest leaving basis index
                        // (the Bland-compatible choice).
                        std::cmp::Ordering::Equal => {
                            basis[i] < basis[leave.expect("tie implies a previous row")]
                        }
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best_ratio = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(Error::LpUnbounded);
        };

        // --- pivot on (leave, enter) ---
        let pivot = rows[leave][enter].clone();
        for v in rows[leave].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        for i in 0..m {
            if i == leave {
                continue;
            }
            let factor = rows[i][enter].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..=n {
                let delta = factor.clone() * rows[leave][j].clone();
                rows[i][j] = rows[i][j].clone() - delta;
            }
        }
        let factor = cost_row[enter].clone();
        if !factor.is_zero() {
            for j in 0..n {
                let delta = factor.clone() * rows[leave][j].clone();
                cost_row[j] = cost_row[j].clone() - delta;
            }
        }
        basis[leave] = enter;

        pivots += 1;
        if pivots > PIVOT_LIMIT {
            return Err(Error::PivotLimit { limit: PIVOT_LIMIT });
        }
    }

    // Read the solution out of the basis; everything nonbasic is zero.
    let mut x = vec![S::zero(); n];
    for (i, &col) in basis.iter().enumerate() {
        let v = rows[i][n].clone();
        // The ratio test keeps the rhs non-negative up to float rounding.
        debug_assert!(
            v.to_f64() >= -1e-7,
            "negative basic value {v} escaped the ratio test"
        );
        x[col] = if v < S::zero() { S::zero() } else { v };
    }
    let objective = c
        .iter()
        .zip(&x)
        .fold(S::zero(), |acc, (ci, xi)| acc + ci.clone() * xi.clone());
    Ok(LpSolution { objective, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    /// `max x + y` over the unit box, as `min −x − y` with slacks.
    #[test]
    fn unit_box_corner() {
        let c = vec![-1.0, -1.0, 0.0, 0.0];
        let a = vec![vec![1.0, 0.0, 1.0, 0.0], vec![0.0, 1.0, 0.0, 1.0]];
        let b = vec![1.0, 1.0];
        let sol = solve_equality_form(&c, &a, &b, &[2, 3]).unwrap();
        assert_eq!(sol.objective, -2.0);
        assert_eq!(&sol.x[..2], &[1.0, 1.0]);
    }

    /// A 2×2 transportation problem with a known optimum: supplies (1,1),
    /// demands (1,1), costs [[0,2],[2,0]] → ship on the diagonal, cost 0.
    #[test]
    fn tiny_transportation() {
        // Variables x00 x01 x10 x11 t0 t1 s0 s1 (t,s = slack-style columns
        // that let mass vanish/appear at unit cost 5 — never optimal here).
        let c = vec![0.0, 2.0, 2.0, 0.0, 5.0, 5.0, 5.0, 5.0];
        let a = vec![
            vec![1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        ];
        let b = vec![1.0, 1.0, 1.0, 1.0];
        let sol = solve_equality_form(&c, &a, &b, &[4, 5, 6, 7]).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert_eq!(sol.x[0], 1.0);
        assert_eq!(sol.x[3], 1.0);
    }

    #[test]
    fn detects_unbounded_objective() {
        // min −x subject to x − y + s = 1: grow y and x together forever.
        let c = vec![-1.0, 0.0, 0.0];
        let a = vec![vec![1.0, -1.0, 1.0]];
        let b = vec![1.0];
        assert!(matches!(
            solve_equality_form(&c, &a, &b, &[2]),
            Err(Error::LpUnbounded)
        ));
    }

    #[test]
    fn exact_rational_solution() {
        // min −x − y  s.t.  3x + y ≤ 1, x + 4y ≤ 1 → vertex (3/11, 2/11).
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let c = vec![r(-1, 1), r(-1, 1), r(0, 1), r(0, 1)];
        let a = vec![
            vec![r(3, 1), r(1, 1), r(1, 1), r(0, 1)],
            vec![r(1, 1), r(4, 1), r(0, 1), r(1, 1)],
        ];
        let b = vec![r(1, 1), r(1, 1)];
        let sol = solve_equality_form(&c, &a, &b, &[2, 3]).unwrap();
        assert_eq!(sol.x[0], r(3, 11));
        assert_eq!(sol.x[1], r(2, 11));
        assert_eq!(sol.objective, r(-5, 11));
    }

    #[test]
    fn degenerate_rhs_still_terminates() {
        // A degenerate vertex (zero rhs) exercises the tie-breaking rules.
        let c = vec![-1.0, -1.0, 0.0, 0.0, 0.0];
        let a = vec![
            vec![1.0, 1.0, 1.0, 0.0, 0.0],
            vec![1.0, -1.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 1.0],
        ];
        let b = vec![1.0, 0.0, 1.0];
        let sol = solve_equality_form(&c, &a, &b, &[2, 3, 4]).unwrap();
        // Optimum fills the first constraint: x + y = 1, objective −1.
        assert_eq!(sol.objective, -1.0);
    }
}
