//! The cone of relative measures is a distributive lattice: join, meet,
//! residual, the Jordan decomposition of signed measures — and the
//! classical warning that the transport norm is *not* a lattice norm.
//!
//! Run with `cargo run --example lattice`.

use relot::measure::{DiscreteMeasure, SignedMeasure};
use relot::metric_pair::PointId;
use relot::scalar::{Rational, Scalar};
use relot::solver::{kr_norm, line_pair};

fn q(k: i64) -> Rational {
    Rational::from_int(k)
}

fn show(label: &str, m: &DiscreteMeasure<Rational>) {
    let atoms: Vec<String> = m.atoms().map(|(x, w)| format!("{w}·δ{x}")).collect();
    println!("  {label} = {}", if atoms.is_empty() { "0".into() } else { atoms.join(" + ") });
}

fn main() -> relot::Result<()> {
    // Exact arithmetic throughout: points 1, 3, 5 on the line.
    let pair = line_pair(&[q(1), q(3), q(5)])?;
    let p = |i: usize| PointId(i);

    let (mu, _) = DiscreteMeasure::new(&pair, &[(p(0), q(2)), (p(1), q(1))])?;
    let (nu, _) = DiscreteMeasure::new(&pair, &[(p(0), q(1)), (p(2), q(4))])?;
    println!("inputs:");
    show("μ", &mu);
    show("ν", &nu);

    println!("\nlattice operations (atomwise max / min / clipped difference):");
    show("μ∨ν", &mu.sup(&nu)?);
    show("μ∧ν", &mu.inf(&nu)?);
    show("μ∖ν", &mu.residual(&nu)?);

    // The defining identities, exact to the last bit.
    let modular = mu.sup(&nu)?.add(&mu.inf(&nu)?)?;
    let total = mu.add(&nu)?;
    assert!(modular.le(&total)? && total.le(&modular)?);
    println!("\nμ∨ν + μ∧ν = μ+ν holds exactly");

    let residual_law = nu.add(&mu.residual(&nu)?)?;
    let join = mu.sup(&nu)?;
    assert!(residual_law.le(&join)? && join.le(&residual_law)?);
    println!("ν + μ∖ν = μ∨ν holds exactly");

    // Signed measures split uniquely into disjoint positive parts.
    let (sigma, _) = SignedMeasure::new(&pair, &[(p(0), q(3)), (p(1), q(-2)), (p(2), q(1))])?;
    let (plus, minus) = sigma.jordan();
    println!("\nJordan decomposition of 3δ0 − 2δ1 + 1δ2:");
    show("σ⁺", &plus);
    show("σ⁻", &minus);

    // The counterexample: a signed measure dominated atomwise by another
    // can still have a much larger norm. Mass that cancels against a
    // nearby opposite atom is cheap; isolated mass must travel to the
    // reservoir.
    let far = line_pair(&[q(2), q(3), q(8), q(9)])?;
    let (sigma1, _) = SignedMeasure::new(&far, &[(p(0), q(1)), (p(2), q(1))])?;
    let (sigma2, _) = SignedMeasure::new(
        &far,
        &[(p(0), q(1)), (p(1), q(-1)), (p(2), q(1)), (p(3), q(-1))],
    )?;
    assert!(sigma1.abs().le(&sigma2.abs())?);
    println!("\n|σ₁| ≤ |σ₂| atom by atom, yet:");
    println!("  ‖σ₁‖ = ‖δ2 + δ8‖           = {}", kr_norm(&sigma1)?);
    println!("  ‖σ₂‖ = ‖δ2 − δ3 + δ8 − δ9‖ = {}", kr_norm(&sigma2)?);
    println!("the transport norm is not monotone in the absolute-value order.");
    Ok(())
}
