//! Relative optimal transport on metric pairs.
//!
//! A *metric pair* `(X, d, A)` is a metric space with a distinguished closed
//! subset `A`, the **reservoir**. Measures on the pair live in the quotient
//! cone where mass on `A` is free: transport plans may create mass out of the
//! reservoir or destroy mass into it, paying the distance-to-reservoir
//! `d_A(x) = d(x, A)` per unit (raised to the cost exponent `p`). The induced
//! ground cost between points is
//!
//! ```text
//! d_p(x, y) = min( d(x, y), (d_A(x)^p + d_A(y)^p)^(1/p) )
//! ```
//!
//! and the relative `p`-Wasserstein distance between two finitely supported
//! measures is the `p`-th root of the minimal coupling cost under `d_p^p`,
//! where couplings may route mass through the reservoir. The best-known
//! instance is matching persistence diagrams against the diagonal of the
//! birth/death half-plane.
//!
//! The crate provides, all exactly at desk scale:
//!
//! * [`metric_pair`] — finite metric pairs (euclidean point sets, the
//!   persistence half-plane, or explicit matrices) with the `d`, `d_A`,
//!   `d̄ = d_1`, and `d_p` oracles;
//! * [`measure`] — the cone algebra of discrete relative measures: sums,
//!   scaling, truncations by distance to the reservoir, moments, the lattice
//!   operations `∨`, `∧`, residual `\`, and Jordan decomposition of signed
//!   measures;
//! * [`coupling`] — transport plans with explicit reservoir flows, their
//!   marginals, costs, and the retraction that collapses an
//!   `ε`-neighborhood of the reservoir;
//! * [`solver`] — `W_1`/`W_p` by network simplex on a reservoir-augmented
//!   bipartite network, plus two independent brute-force oracles;
//! * [`duality`] — Kantorovich–Rubinstein and Monge–Kantorovich dual LPs
//!   with feasible potentials and duality-gap certificates;
//! * [`cli`] — the machinery behind the `relot` binary: JSON/CSV instance
//!   files and the `dist`, `coupling`, `dual`, `norm`, `lattice` commands.
//!
//! Everything is generic over the scalar type: [`scalar::Real`] (`f64`) for
//! everyday use and [`scalar::Rational`] (arbitrary-precision rationals) for
//! exact arithmetic, where every identity in the measure algebra and every
//! optimal cost is computed without rounding.
//!
//! # Examples
//!
//! Runnable walkthroughs live in `examples/` (one per capability):
//!
//! ```text
//! cargo run --example distances    # metric pairs, W1/Wp, optimal couplings
//! cargo run --example diagrams     # persistence-diagram workflow on the half-plane
//! cargo run --example lattice      # cone lattice algebra and Jordan decomposition
//! cargo run --example duality      # dual potentials and gap certificates
//! cargo run --example reservoir    # truncation, retraction, approximation bounds
//! cargo run --example exact        # exact rational arithmetic end to end
//! ```
//!
//! A minimal in-code example:
//!
//! ```
//! use std::sync::Arc;
//! use relot::metric_pair::{MetricPair, PointId};
//! use relot::measure::DiscreteMeasure;
//! use relot::solver::solve_w1;
//!
//! // The real line with reservoir {0}: points 2, 8, 3, 9.
//! let pair = Arc::new(MetricPair::euclidean(
//!     1,
//!     &[vec![2.0], vec![8.0], vec![3.0], vec![9.0]],
//!     &[vec![0.0]],
//! )?);
//! let (mu, _) = DiscreteMeasure::new(&pair, &[(PointId(0), 1.0), (PointId(1), 1.0)])?;
//! let (nu, _) = DiscreteMeasure::new(&pair, &[(PointId(2), 1.0), (PointId(3), 1.0)])?;
//! let result = solve_w1(&mu, &nu)?;
//! assert_eq!(result.value()?, 2.0);
//! # Ok::<(), relot::Error>(())
//! ```

pub mod cli;
pub mod coupling;
pub mod duality;
mod error;
mod lp;
pub mod measure;
pub mod metric_pair;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
