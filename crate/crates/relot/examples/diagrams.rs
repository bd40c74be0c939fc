//! Persistence diagrams as measures on the birth/death half-plane, with
//! the diagonal as reservoir: diagram distance, matching against the
//! empty diagram, and the effect of the half-plane norm.
//!
//! Run with `cargo run --example diagrams`.

use std::sync::Arc;

use relot::measure::DiscreteMeasure;
use relot::metric_pair::{HalfplaneNorm, MetricPair, PointId};
use relot::solver::{solve_w1, solve_wp};

fn main() -> relot::Result<()> {
    // Two diagrams over a shared feature pool: (birth, death) pairs above
    // the diagonal. Under L∞, a feature's distance to the diagonal is
    // half its persistence.
    let features = [
        (1.0, 5.0), // persistence 4, shared shape in both diagrams
        (2.0, 3.0), // a short-lived feature, cheap to drop
        (1.0, 4.0),
        (2.0, 6.0),
        (0.5, 7.0), // the long-lived signal
    ];
    let pair = Arc::new(MetricPair::halfplane(HalfplaneNorm::LInf, &features)?);
    let p = |i: usize| PointId(i);

    println!("features (birth, death) and their diagonal distances:");
    for (i, (b, d)) in features.iter().enumerate() {
        println!(
            "  {i}: ({b}, {d})  persistence {}  d_A = {}",
            d - b,
            pair.dist_to_reservoir(p(i))?
        );
    }

    let (diagram_a, _) = DiscreteMeasure::new(&pair, &[(p(0), 1.0), (p(1), 1.0), (p(4), 1.0)])?;
    let (diagram_b, _) = DiscreteMeasure::new(&pair, &[(p(2), 1.0), (p(3), 1.0), (p(4), 1.0)])?;

    let result = solve_w1(&diagram_a, &diagram_b)?;
    println!("\nW1 between the diagrams = {}", result.value()?);
    println!("matching:");
    for (x, y, w) in result.coupling().direct() {
        println!("  feature {x} ↔ feature {y}  (mass {w})");
    }
    for (x, w) in result.coupling().to_reservoir() {
        println!("  feature {x} → diagonal     (mass {w})");
    }
    for (y, w) in result.coupling().from_reservoir() {
        println!("  diagonal → feature {y}     (mass {w})");
    }

    // Distance to the empty diagram: every feature pays its own way to
    // the diagonal — the total-persistence norm (divided by two).
    let empty = DiscreteMeasure::zero(&pair);
    println!(
        "\nW1(diagram A, ∅) = {}  (sum of diagonal distances)",
        solve_w1(&diagram_a, &empty)?.value()?
    );
    println!(
        "W2(diagram A, ∅) = {:.6}  (2-moment root)",
        solve_wp(&diagram_a, &empty, 2.0)?.value()?
    );

    // The L2 half-plane re-prices the diagonal: (d − b)/√2 instead of
    // (d − b)/2, so drops get more expensive and matchings shift.
    let pair_l2 = Arc::new(MetricPair::halfplane(HalfplaneNorm::L2, &features)?);
    let (a2, _) = DiscreteMeasure::new(&pair_l2, &[(p(0), 1.0), (p(1), 1.0), (p(4), 1.0)])?;
    let (b2, _) = DiscreteMeasure::new(&pair_l2, &[(p(2), 1.0), (p(3), 1.0), (p(4), 1.0)])?;
    println!(
        "\nsame diagrams under the L2 norm: W1 = {:.6}",
        solve_w1(&a2, &b2)?.value()?
    );
    Ok(())
}
