//! Metric pairs and transport distances: build a pair, compute `W_1` and
//! `W_2`, and inspect the optimal couplings — including the reservoir
//! flows that make the distance "relative".
//!
//! Run with `cargo run --example distances`.

use std::sync::Arc;

use relot::measure::DiscreteMeasure;
use relot::metric_pair::{MetricPair, PointId};
use relot::solver::{solve_w1, solve_wp};

fn main() -> relot::Result<()> {
    // The real line with the origin as reservoir. Four points of interest.
    let pair = Arc::new(MetricPair::euclidean(
        1,
        &[vec![2.0], vec![8.0], vec![3.0], vec![9.0], vec![1.0], vec![5.0]],
        &[vec![0.0]],
    )?);
    let p = |i: usize| PointId(i);

    println!("ground geometry: the line with reservoir {{0}}");
    for i in 0..6 {
        println!(
            "  point {i} at d_A = {}",
            pair.dist_to_reservoir(p(i))?
        );
    }

    // A balanced instance: shift two unit atoms by one.
    let (mu, _) = DiscreteMeasure::new(&pair, &[(p(0), 1.0), (p(1), 1.0)])?;
    let (nu, _) = DiscreteMeasure::new(&pair, &[(p(2), 1.0), (p(3), 1.0)])?;
    let result = solve_w1(&mu, &nu)?;
    println!("\nW1(δ2+δ8, δ3+δ9) = {}", result.value()?);
    println!("optimal plan:");
    for (x, y, w) in result.coupling().direct() {
        println!("  ship {w} from point {x} to point {y}");
    }

    // An unbalanced instance: the reservoir absorbs what has no partner.
    // Moving 5 → 2 costs 3; dropping the atom at 1 into the reservoir
    // costs 1; total 4 beats any direct matching.
    let (mu, _) = DiscreteMeasure::new(&pair, &[(p(4), 1.0), (p(5), 1.0)])?;
    let (nu, _) = DiscreteMeasure::new(&pair, &[(p(0), 1.0)])?;
    let result = solve_w1(&mu, &nu)?;
    println!("\nW1(δ1+δ5, δ2) = {}", result.value()?);
    for (x, y, w) in result.coupling().direct() {
        println!("  ship {w} from point {x} to point {y}");
    }
    for (x, w) in result.coupling().to_reservoir() {
        println!("  destroy {w} at the reservoir from point {x}");
    }
    for (y, w) in result.coupling().from_reservoir() {
        println!("  create {w} out of the reservoir for point {y}");
    }

    // Higher exponents change the routing trade-off: under p = 2 the
    // squared costs are compared, so long direct trips lose to the
    // reservoir earlier.
    let (mu, _) = DiscreteMeasure::new(&pair, &[(p(0), 1.0)])?;
    let (nu, _) = DiscreteMeasure::new(&pair, &[(p(3), 1.0)])?;
    for exponent in [1.0, 2.0] {
        let result = solve_wp(&mu, &nu, exponent)?;
        let route = if result.coupling().direct().count() > 0 {
            "direct"
        } else {
            "through the reservoir"
        };
        println!(
            "\nW{exponent}(δ2, δ9) = {:.6}  (cost {}, routed {route})",
            result.value()?,
            result.cost()
        );
    }

    // Solve diagnostics come with every result.
    let stats = solve_w1(&mu, &nu)?.stats().clone();
    println!(
        "\nlast solve: {} simplex pivots in {:?}",
        stats.pivots, stats.wall_time
    );
    Ok(())
}
