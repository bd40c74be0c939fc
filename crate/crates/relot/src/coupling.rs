//! Transport plans between relative measures, reservoir flows included.
//!
//! A [`Coupling`] moves the mass of one measure onto another three ways:
//!
//! * **direct** flows `x → y`, paying `d_p(x, y)^p` per unit;
//! * **to-reservoir** flows `x → A`, paying `d_A(x)^p` — mass destroyed;
//! * **from-reservoir** flows `A → y`, paying `d_A(y)^p` — mass created.
//!
//! Reservoir flows are stored per endpoint, never per `(x, a ∈ A)` pair:
//! `d̄(x, a) = d_A(x)` for every reservoir point, so which one the mass
//! touches is immaterial (the quotient semantics again).
//!
//! The named constructions: [`Coupling::trivial`] routes everything through
//! the reservoir (total cost = sum of both `p`-th moments — an upper bound
//! that certifies couplings always exist), [`Coupling::diagonal`] maps a
//! measure to itself at cost zero, and [`Coupling::trivial_extension`]
//! enlarges a plan's marginals without touching its existing flows.
//!
//! [`Coupling::retract`] is the pushforward under the `ε`-retraction, which
//! snaps every endpoint within `ε` of the reservoir onto it: direct flows
//! lose one or both endpoints to the reservoir, reservoir flows to near
//! points vanish, and the result couples the far truncations `(μ_ε, ν_ε)`
//! at an extra cost of at most `μ^ε(d_A) + ν^ε(d_A)` (tested, and used by
//! the approximation bounds).
//!
//! Invariants: weights are strictly positive and finite; marginals of every
//! constructor agree with the intended measures exactly in rational mode.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric_pair::{MetricPair, PointId};
use crate::scalar::{check_exponent, Scalar};

/// A transport plan with explicit reservoir legs.
///
/// Immutable; all operations return fresh values. Maps are ordered, so
/// iteration and serialization are deterministic.
#[derive(Clone, Debug)]
pub struct Coupling<S: Scalar> {
    pair: Arc<MetricPair<S>>,
    direct: BTreeMap<(PointId, PointId), S>,
    to_reservoir: BTreeMap<PointId, S>,
    from_reservoir: BTreeMap<PointId, S>,
}

/// Accumulate `w` at `key`.
fn bump<K: Ord, S: Scalar>(map: &mut BTreeMap<K, S>, key: K, w: S) {
    let v = match map.get(&key) {
        Some(v) => v.clone() + w,
        None => w,
    };
    map.insert(key, v);
}

impl<S: Scalar> Coupling<S> {
    /// Build a coupling from raw flow lists.
    ///
    /// Weights must be non-negative and finite; zero flows are dropped,
    /// duplicate keys are merged by summation.
    pub fn new(
        pair: &Arc<MetricPair<S>>,
        direct: &[(PointId, PointId, S)],
        to_reservoir: &[(PointId, S)],
        from_reservoir: &[(PointId, S)],
    ) -> Result<Self> {
        let mut cpl = Coupling {
            pair: pair.clone(),
            direct: BTreeMap::new(),
            to_reservoir: BTreeMap::new(),
            from_reservoir: BTreeMap::new(),
        };
        for (x, y, w) in direct {
            pair.check_point(*x)?;
            pair.check_point(*y)?;
            check_flow(w, || format!("direct flow {x}→{y}"))?;
            if !w.is_zero() {
                bump(&mut cpl.direct, (*x, *y), w.clone());
            }
        }
        for (x, w) in to_reservoir {
            pair.check_point(*x)?;
            check_flow(w, || format!("reservoir flow {x}→A"))?;
            if !w.is_zero() {
                bump(&mut cpl.to_reservoir, *x, w.clone());
            }
        }
        for (y, w) in from_reservoir {
            pair.check_point(*y)?;
            check_flow(w, || format!("reservoir flow A→{y}"))?;
            if !w.is_zero() {
                bump(&mut cpl.from_reservoir, *y, w.clone());
            }
        }
        Ok(cpl)
    }

    /// The empty coupling (of the zero measure with itself).
    pub fn empty(pair: &Arc<MetricPair<S>>) -> Self {
        Coupling {
            pair: pair.clone(),
            direct: BTreeMap::new(),
            to_reservoir: BTreeMap::new(),
            from_reservoir: BTreeMap::new(),
        }
    }

    /// The trivial coupling of `(μ, ν)`: all of `μ` destroyed into the
    /// reservoir, all of `ν` created out of it. The universal witness that
    /// `Π(μ, ν)` is never empty.
    pub fn trivial(mu: &DiscreteMeasure<S>, nu: &DiscreteMeasure<S>) -> Result<Self> {
        mu.check_same_pair(nu)?;
        Ok(Coupling {
            pair: mu.pair().clone(),
            direct: BTreeMap::new(),
            to_reservoir: mu.atoms().map(|(id, w)| (id, w.clone())).collect(),
            from_reservoir: nu.atoms().map(|(id, w)| (id, w.clone())).collect(),
        })
    }

    /// The diagonal coupling of `(μ, μ)`: every atom stays put; cost zero
    /// at every exponent.
    pub fn diagonal(mu: &DiscreteMeasure<S>) -> Self {
        Coupling {
            pair: mu.pair().clone(),
            direct: mu.atoms().map(|(id, w)| ((id, id), w.clone())).collect(),
            to_reservoir: BTreeMap::new(),
            from_reservoir: BTreeMap::new(),
        }
    }

    /// Superpose two couplings: a plan for `(μ₁+μ₂, ν₁+ν₂)` with additive
    /// cost.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.pair, &other.pair) {
            return Err(Error::PairMismatch);
        }
        let mut sum = self.clone();
        for (k, w) in &other.direct {
            bump(&mut sum.direct, *k, w.clone());
        }
        for (k, w) in &other.to_reservoir {
            bump(&mut sum.to_reservoir, *k, w.clone());
        }
        for (k, w) in &other.from_reservoir {
            bump(&mut sum.from_reservoir, *k, w.clone());
        }
        Ok(sum)
    }

    /// Extend this plan by the trivial coupling of `(μ₂, ν₂)`: the marginals
    /// grow to `(μ₁+μ₂, ν₁+ν₂)`, the cost grows by exactly
    /// `μ₂(d_A^p) + ν₂(d_A^p)`.
    pub fn trivial_extension(
        &self,
        mu2: &DiscreteMeasure<S>,
        nu2: &DiscreteMeasure<S>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(&self.pair, mu2.pair()) {
            return Err(Error::PairMismatch);
        }
        self.add(&Coupling::trivial(mu2, nu2)?)
    }

    /// The metric pair this coupling lives on.
    pub fn pair(&self) -> &Arc<MetricPair<S>> {
        &self.pair
    }

    /// Direct flows in `(from, to)` order.
    pub fn direct(&self) -> impl Iterator<Item = (PointId, PointId, &S)> {
        self.direct.iter().map(|((x, y), w)| (*x, *y, w))
    }

    /// Flows into the reservoir, in point order.
    pub fn to_reservoir(&self) -> impl Iterator<Item = (PointId, &S)> {
        self.to_reservoir.iter().map(|(x, w)| (*x, w))
    }

    /// Flows out of the reservoir, in point order.
    pub fn from_reservoir(&self) -> impl Iterator<Item = (PointId, &S)> {
        self.from_reservoir.iter().map(|(y, w)| (*y, w))
    }

    /// Whether the plan carries no flow at all.
    pub fn is_empty(&self) -> bool {
        self.direct.is_empty() && self.to_reservoir.is_empty() && self.from_reservoir.is_empty()
    }

    /// The two marginals, as quotient measures (reservoir legs land on `A`
    /// and vanish).
    pub fn marginals(&self) -> Result<(DiscreteMeasure<S>, DiscreteMeasure<S>)> {
        let mut first: Vec<(PointId, S)> = Vec::new();
        let mut second: Vec<(PointId, S)> = Vec::new();
        for ((x, y), w) in &self.direct {
            first.push((*x, w.clone()));
            second.push((*y, w.clone()));
        }
        for (x, w) in &self.to_reservoir {
            first.push((*x, w.clone()));
        }
        for (y, w) in &self.from_reservoir {
            second.push((*y, w.clone()));
        }
        let (mu, _) = DiscreteMeasure::new(&self.pair, &first)?;
        let (nu, _) = DiscreteMeasure::new(&self.pair, &second)?;
        Ok((mu, nu))
    }

    /// Total transport cost `π(d_p^p)`:
    /// `Σ direct·d_p(x,y)^p + Σ to_res·d_A(x)^p + Σ from_res·d_A(y)^p`.
    ///
    /// At `p = 1` this is `π(d̄)`. Note this is the *cost* (the `p`-th power
    /// of a distance contribution), so it stays rational for integer `p`.
    pub fn cost(&self, p: f64) -> Result<S> {
        check_exponent(p)?;
        let mut acc = S::zero();
        for ((x, y), w) in &self.direct {
            acc = acc + w.clone() * self.pair.dp_cost_pow(p, *x, *y)?;
        }
        for (x, w) in &self.to_reservoir {
            acc = acc + w.clone() * self.pair.reservoir_cost_pow(p, *x)?;
        }
        for (y, w) in &self.from_reservoir {
            acc = acc + w.clone() * self.pair.reservoir_cost_pow(p, *y)?;
        }
        Ok(acc)
    }

    /// The transposed plan: a coupling of `(ν, μ)` with identical cost.
    pub fn transpose(&self) -> Self {
        Coupling {
            pair: self.pair.clone(),
            direct: self
                .direct
                .iter()
                .map(|((x, y), w)| ((*y, *x), w.clone()))
                .collect(),
            to_reservoir: self.from_reservoir.clone(),
            from_reservoir: self.to_reservoir.clone(),
        }
    }

    /// Pushforward under the `ε`-retraction `r̂ ⊕ r̂`, where `r̂` maps points
    /// with `d_A ≤ ε` onto the reservoir and fixes the rest.
    ///
    /// Flow by flow: both endpoints far → kept direct; one endpoint near →
    /// becomes the matching reservoir leg; both near → lands on `A × A` and
    /// is quotiented away. Reservoir legs to near points vanish likewise.
    /// The result couples `(μ_ε, ν_ε)`.
    pub fn retract(&self, eps: &S) -> Result<Self> {
        match eps.partial_cmp(&S::zero()) {
            None => {
                return Err(Error::NonFiniteNumber {
                    what: "retraction radius".into(),
                })
            }
            Some(std::cmp::Ordering::Less) => {
                return Err(Error::NegativeThreshold {
                    what: "retraction radius".into(),
                    value: eps.to_string(),
                })
            }
            _ => {}
        }
        // r̂ as a partial map: `None` means "snapped onto the reservoir".
        let snap = |x: PointId| -> Result<Option<PointId>> {
            Ok(if self.pair.dist_to_reservoir(x)? > *eps {
                Some(x)
            } else {
                None
            })
        };
        let mut out = Coupling::empty(&self.pair);
        for ((x, y), w) in &self.direct {
            match (snap(*x)?, snap(*y)?) {
                (Some(x), Some(y)) => bump(&mut out.direct, (x, y), w.clone()),
                (Some(x), None) => bump(&mut out.to_reservoir, x, w.clone()),
                (None, Some(y)) => bump(&mut out.from_reservoir, y, w.clone()),
                (None, None) => {}
            }
        }
        for (x, w) in &self.to_reservoir {
            if snap(*x)?.is_some() {
                bump(&mut out.to_reservoir, *x, w.clone());
            }
        }
        for (y, w) in &self.from_reservoir {
            if snap(*y)?.is_some() {
                bump(&mut out.from_reservoir, *y, w.clone());
            }
        }
        Ok(out)
    }
}

fn check_flow<S: Scalar>(w: &S, what: impl Fn() -> String) -> Result<()> {
    w.validate_finite(&what())?;
    if *w < S::zero() {
        return Err(Error::NegativeWeight {
            what: what(),
            value: w.to_string(),
        });
    }
    Ok(())
}

impl<S: Scalar> PartialEq for Coupling<S> {
    /// Equal iff on the same pair instance with identical flow maps.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.pair, &other.pair)
            && self.direct == other.direct
            && self.to_reservoir == other.to_reservoir
            && self.from_reservoir == other.from_reservoir
    }
}
