//! Working with the reservoir: truncating measures by their distance to
//! it, retracting transport plans onto it, and the approximation bound
//! that makes truncation a controlled simplification.
//!
//! Run with `cargo run --example reservoir`.

use std::sync::Arc;

use relot::measure::DiscreteMeasure;
use relot::metric_pair::{MetricPair, PointId};
use relot::solver::{solve_w1, solve_wp};

fn main() -> relot::Result<()> {
    // Points at 0.5, 1, 2, 4, 8 — a geometric spread of reservoir
    // distances.
    let pair = Arc::new(MetricPair::euclidean(
        1,
        &[vec![0.5], vec![1.0], vec![2.0], vec![4.0], vec![8.0]],
        &[vec![0.0]],
    )?);
    let p = |i: usize| PointId(i);
    let (mu, _) = DiscreteMeasure::new(
        &pair,
        &[(p(0), 1.0), (p(1), 1.0), (p(2), 1.0), (p(3), 1.0), (p(4), 1.0)],
    )?;

    // Truncation splits a measure by distance to the reservoir: μ_ε keeps
    // the far part, μ^ε the near part, exactly additively.
    let eps = 1.5;
    let far = mu.truncate_lower(&eps)?;
    let near = mu.truncate_upper(&eps)?;
    println!("μ has {} atoms; at ε = {eps}:", mu.support_size());
    println!("  far part μ_ε  keeps {} atoms (d_A > ε)", far.support_size());
    println!("  near part μ^ε keeps {} atoms (d_A ≤ ε)", near.support_size());
    println!("  total mass {} = {} + {}", mu.total_mass(), far.total_mass(), near.total_mass());

    // Retraction acts on transport plans: legs that live within ε of the
    // reservoir are collapsed onto it. The retracted plan couples the
    // truncated marginals...
    let (nu, _) = DiscreteMeasure::new(&pair, &[(p(1), 1.0), (p(2), 2.0), (p(4), 1.0)])?;
    let plan = solve_w1(&mu, &nu)?.coupling().clone();
    let retracted = plan.retract(&eps)?;
    let (rm, rn) = retracted.marginals()?;
    println!("\nretracting the optimal plan at ε = {eps}:");
    println!("  retracted marginals have {} and {} atoms", rm.support_size(), rn.support_size());

    // ...and its cost exceeds the original by at most the reservoir cost
    // of what was dropped.
    let dropped_cost: f64 = [&mu, &nu]
        .iter()
        .map(|m| {
            m.truncate_upper(&eps)
                .unwrap()
                .atoms()
                .map(|(x, w)| w * pair.dist_to_reservoir(x).unwrap())
                .sum::<f64>()
        })
        .sum();
    println!(
        "  cost {} ≤ original {} + dropped reservoir cost {}",
        retracted.cost(1.0)?,
        plan.cost(1.0)?,
        dropped_cost
    );

    // The approximation bound: replacing μ by its far part moves it by at
    // most the moment of the near part.
    for exponent in [1.0, 2.0] {
        let distance = solve_wp(&mu, &far, exponent)?.value()?;
        let bound = near.moment(exponent)?.powf(1.0 / exponent);
        println!(
            "\nW{exponent}(μ, μ_ε) = {distance:.6} ≤ {bound:.6} = moment of the dropped part"
        );
    }

    // Measures never carry reservoir mass in the first place: atoms at
    // d_A = 0 are quotiented away on construction, reported as dropped.
    let with_reservoir_atom = Arc::new(MetricPair::euclidean(
        1,
        &[vec![0.0], vec![3.0]],
        &[vec![0.0]],
    )?);
    let (quotiented, dropped) =
        DiscreteMeasure::new(&with_reservoir_atom, &[(p(0), 5.0), (p(1), 1.0)])?;
    println!(
        "\nconstructing a measure with an atom on the reservoir: kept {} atom(s), dropped mass {dropped}",
        quotiented.support_size()
    );
    Ok(())
}
