//! Exact arithmetic end to end: decimal strings parse to true rationals,
//! optimal costs come out as exact fractions, duality gaps are literally
//! zero, and serialized values re-read bit-identically.
//!
//! Run with `cargo run --example exact`.

use relot::duality::kr_dual;
use relot::measure::DiscreteMeasure;
use relot::metric_pair::PointId;
use relot::scalar::{Rational, Scalar};
use relot::solver::{line_pair, solve_w1, solve_wp};

fn main() -> relot::Result<()> {
    // "0.1" is one tenth — not the nearest binary double.
    let tenth = Rational::parse_decimal("0.1")?;
    println!("parse_decimal(\"0.1\") = {tenth}   (exactly 1/10)");
    let third = Rational::parse_decimal("1/3")?;
    println!("parse_decimal(\"1/3\") = {third}   (ratios parse directly)");

    // A pair with awkward coordinates and fractional weights.
    let coords: Vec<Rational> = ["0.1", "0.7", "1/3", "2.5"]
        .iter()
        .map(|s| Rational::parse_decimal(s))
        .collect::<relot::Result<_>>()?;
    let pair = line_pair(&coords)?;
    let p = |i: usize| PointId(i);

    let (mu, _) = DiscreteMeasure::new(
        &pair,
        &[(p(0), Rational::parse_decimal("2/7")?), (p(1), Rational::parse_decimal("0.3")?)],
    )?;
    let (nu, _) = DiscreteMeasure::new(
        &pair,
        &[(p(2), Rational::parse_decimal("1/2")?), (p(3), Rational::parse_decimal("1/6")?)],
    )?;

    let result = solve_w1(&mu, &nu)?;
    println!("\nW1 = {}   (an exact fraction, no rounding anywhere)", result.cost());
    println!("optimal flows:");
    for (x, y, w) in result.coupling().direct() {
        println!("  {x} → {y}: {w}");
    }
    for (x, w) in result.coupling().to_reservoir() {
        println!("  {x} → reservoir: {w}");
    }
    for (y, w) in result.coupling().from_reservoir() {
        println!("  reservoir → {y}: {w}");
    }

    // The certificate's gap is not small — it is zero.
    let certificate = kr_dual(&mu, &nu)?;
    println!("\nduality gap = {}  (literally zero in exact mode)", certificate.gap());

    // p = 2 works on the cost scale: the squared distance is rational
    // even when the distance itself is not.
    let squared = solve_wp(&mu, &nu, 2.0)?;
    println!("\nW2² = {}", squared.cost());
    match squared.value() {
        Ok(v) => println!("W2 = {v} (the root happens to be rational)"),
        Err(relot::Error::InexactRoot { .. }) => println!(
            "W2 is irrational; work with the squared cost, or approximate: {:.6}",
            squared.cost().to_f64().sqrt()
        ),
        Err(e) => return Err(e),
    }

    // Serialization round-trips bit-exactly: a rational renders as a
    // quoted "num/den" token that parses back to the same value.
    let token = result.cost().json_token();
    let reread = Rational::parse_decimal(token.trim_matches('"'))?;
    println!("\njson token {token} re-reads to {reread}");
    assert_eq!(&reread, result.cost());

    // The float path answers the same question with the same digits up
    // front — the exact path is for when "close" is not good enough.
    let coords_f: Vec<f64> = [0.1, 0.7, 1.0 / 3.0, 2.5].to_vec();
    let pair_f = line_pair(&coords_f)?;
    let (mu_f, _) = DiscreteMeasure::new(&pair_f, &[(p(0), 2.0 / 7.0), (p(1), 0.3)])?;
    let (nu_f, _) = DiscreteMeasure::new(&pair_f, &[(p(2), 0.5), (p(3), 1.0 / 6.0)])?;
    println!(
        "\nfloat mode:    W1 ≈ {}\nrational mode: W1 = {} = {}",
        solve_w1(&mu_f, &nu_f)?.cost(),
        result.cost(),
        result.cost().to_f64()
    );
    Ok(())
}
