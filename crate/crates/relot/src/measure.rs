//! Discrete relative measures: the cone algebra on a metric pair.
//!
//! A [`DiscreteMeasure`] is a finite weighted point set living in the
//! *quotient* by the reservoir: atoms sitting on the reservoir (`d_A = 0`)
//! carry no information and are dropped at construction, with the discarded
//! mass reported back to the caller. What remains is a commutative monoid
//! under [`DiscreteMeasure::add`], a cone under [`DiscreteMeasure::scale`],
//! and — the interesting part — a distributive lattice under atomwise
//! [`DiscreteMeasure::sup`] / [`DiscreteMeasure::inf`] with a residual
//! operation [`DiscreteMeasure::residual`] (`μ∖ν`, the smallest measure one
//! must add to `ν` to dominate `μ`).
//!
//! Key identities, all holding *exactly* in rational mode (and used as test
//! oracles):
//!
//! ```text
//! (μ∨ν) + λ = (μ+λ) ∨ (ν+λ)        μ∨ν + μ∧ν = μ + ν
//! (μ∧ν) + λ = (μ+λ) ∧ (ν+λ)        ν + μ∖ν   = μ∨ν
//! μ∧(ν∨λ) = (μ∧ν)∨(μ∧λ)            μ∧ν + μ∖ν = μ
//! ```
//!
//! The lattice order also justifies the sup's set-function semantics: on a
//! set `E`, `(μ∨ν)(E)` equals the supremum of `μ(E₁) + ν(E₂)` over all
//! partitions `E = E₁ ⊔ E₂` — the brute-force form the tests enumerate.
//!
//! [`SignedMeasure`] is the difference group: real-weighted atoms with a
//! [`SignedMeasure::jordan`] decomposition into a unique pair of disjoint
//! non-negative parts, which is what the Kantorovich–Rubinstein norm of the
//! [`crate::solver`] module consumes.
//!
//! Truncations slice a measure by distance to the reservoir — `μ_ε` (atoms
//! beyond `ε`), `μ^ε` (atoms within `ε`), and the band `μ_ε^δ` — and the
//! `p`-th moment `μ(d_A^p)` prices sending all of `μ` to the reservoir.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric_pair::{MetricPair, PointId};
use crate::scalar::{max_s, min_s, Scalar};

/// A finite non-negative measure on a metric pair, quotiented by the
/// reservoir.
///
/// Invariants: every atom has `d_A > 0` and strictly positive weight; atoms
/// are keyed by [`PointId`] in sorted order, so iteration is deterministic.
/// Values are immutable; operations return fresh measures.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure<S: Scalar> {
    pair: Arc<MetricPair<S>>,
    atoms: BTreeMap<PointId, S>,
}

/// A finite signed measure (difference of two [`DiscreteMeasure`]s) on a
/// metric pair.
///
/// Same quotient semantics; atom weights are non-zero but may have either
/// sign.
#[derive(Clone, Debug)]
pub struct SignedMeasure<S: Scalar> {
    pair: Arc<MetricPair<S>>,
    atoms: BTreeMap<PointId, S>,
}

/// Validate a truncation threshold: not NaN, not negative.
///
/// `+∞` is allowed in float mode (an unbounded band upper edge).
fn check_threshold<S: Scalar>(eps: &S, what: &str) -> Result<()> {
    match eps.partial_cmp(&S::zero()) {
        None => Err(Error::NonFiniteNumber { what: what.into() }),
        Some(Ordering::Less) => Err(Error::NegativeThreshold {
            what: what.into(),
            value: eps.to_string(),
        }),
        _ => Ok(()),
    }
}

/// Validate, merge, and sort raw atoms shared by both measure kinds.
///
/// Returns the merged map (zero weights removed, reservoir atoms dropped)
/// and the total weight that was dropped for sitting on the reservoir.
fn collect_atoms<S: Scalar>(
    pair: &Arc<MetricPair<S>>,
    raw: &[(PointId, S)],
    allow_negative: bool,
) -> Result<(BTreeMap<PointId, S>, S)> {
    let mut merged: BTreeMap<PointId, S> = BTreeMap::new();
    for (id, w) in raw {
        pair.check_point(*id)?;
        w.validate_finite(&format!("weight of atom at point {id}"))?;
        if !allow_negative && *w < S::zero() {
            return Err(Error::NegativeWeight {
                what: format!("atom at point {id}"),
                value: w.to_string(),
            });
        }
        match merged.entry(*id) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + w.clone();
                *e.get_mut() = sum;
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(w.clone());
            }
        }
    }
    let mut dropped = S::zero();
    let mut atoms = BTreeMap::new();
    for (id, w) in merged {
        if w.is_zero() {
            continue;
        }
        let on_reservoir = pair
            .dist_to_reservoir(id)
            .expect("id validated above")
            .is_zero();
        if on_reservoir {
            dropped = dropped + w;
        } else {
            atoms.insert(id, w);
        }
    }
    Ok((atoms, dropped))
}

impl<S: Scalar> DiscreteMeasure<S> {
    /// Build a measure from raw `(point, weight ≥ 0)` atoms.
    ///
    /// Duplicate points are merged by summation, zero weights are removed,
    /// and atoms on the reservoir (`d_A = 0`) are quotiented away — their
    /// total weight comes back as the second component.
    pub fn new(pair: &Arc<MetricPair<S>>, raw: &[(PointId, S)]) -> Result<(Self, S)> {
        let (atoms, dropped) = collect_atoms(pair, raw, false)?;
        Ok((
            DiscreteMeasure {
                pair: pair.clone(),
                atoms,
            },
            dropped,
        ))
    }

    /// The zero measure.
    pub fn zero(pair: &Arc<MetricPair<S>>) -> Self {
        DiscreteMeasure {
            pair: pair.clone(),
            atoms: BTreeMap::new(),
        }
    }

    /// Internal constructor for maps whose invariants already hold.
    pub(crate) fn from_atoms(pair: Arc<MetricPair<S>>, atoms: BTreeMap<PointId, S>) -> Self {
        debug_assert!(atoms.values().all(|w| *w > S::zero()));
        DiscreteMeasure { pair, atoms }
    }

    /// The metric pair this measure lives on.
    pub fn pair(&self) -> &Arc<MetricPair<S>> {
        &self.pair
    }

    /// Atoms in increasing point order.
    pub fn atoms(&self) -> impl Iterator<Item = (PointId, &S)> {
        self.atoms.iter().map(|(id, w)| (*id, w))
    }

    /// Number of atoms in the support.
    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    /// The weight at `x` (zero off the support).
    pub fn weight(&self, x: PointId) -> S {
        self.atoms.get(&x).cloned().unwrap_or_else(S::zero)
    }

    /// Whether this is the zero measure.
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Error unless `other` lives on the same pair instance.
    pub fn check_same_pair(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.pair, &other.pair) {
            Ok(())
        } else {
            Err(Error::PairMismatch)
        }
    }

    /// Total mass `μ(X)`.
    pub fn total_mass(&self) -> S {
        self.atoms
            .values()
            .fold(S::zero(), |acc, w| acc + w.clone())
    }

    /// The `p`-th moment about the reservoir, `μ(d_A^p) = Σ w·d_A(x)^p`,
    /// for `p ≥ 0`. At `p = 0` this is the total mass; at `p = 1` it prices
    /// sending every atom to the reservoir.
    pub fn moment(&self, p: f64) -> Result<S> {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidExponent {
                p,
                reason: "moment exponent must be finite and non-negative".into(),
            });
        }
        let mut acc = S::zero();
        for (id, w) in &self.atoms {
            let d_a = self.pair.dist_to_reservoir(*id)?;
            acc = acc + w.clone() * d_a.powf_checked(p)?;
        }
        Ok(acc)
    }

    /// Integrate a function given by its values on the support:
    /// `μ(f) = Σ w·f(x)`.
    pub fn integrate(&self, f: &BTreeMap<PointId, S>) -> Result<S> {
        let mut acc = S::zero();
        for (id, w) in &self.atoms {
            let v = f
                .get(id)
                .ok_or(Error::MissingFunctionValue { index: id.0 })?;
            acc = acc + w.clone() * v.clone();
        }
        Ok(acc)
    }

    /// Atomwise sum `μ + ν`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_pair(other)?;
        let mut atoms = self.atoms.clone();
        for (id, w) in &other.atoms {
            let sum = match atoms.get(id) {
                Some(v) => v.clone() + w.clone(),
                None => w.clone(),
            };
            atoms.insert(*id, sum);
        }
        Ok(DiscreteMeasure {
            pair: self.pair.clone(),
            atoms,
        })
    }

    /// Scale by `α ≥ 0`; `scale(0)` is the zero measure.
    pub fn scale(&self, alpha: &S) -> Result<Self> {
        alpha.validate_finite("scale factor")?;
        if *alpha < S::zero() {
            return Err(Error::NegativeWeight {
                what: "scale factor".into(),
                value: alpha.to_string(),
            });
        }
        if alpha.is_zero() {
            return Ok(DiscreteMeasure {
                pair: self.pair.clone(),
                atoms: BTreeMap::new(),
            });
        }
        let atoms = self
            .atoms
            .iter()
            .map(|(id, w)| (*id, w.clone() * alpha.clone()))
            .collect();
        Ok(DiscreteMeasure {
            pair: self.pair.clone(),
            atoms,
        })
    }

    /// The far truncation `μ_ε`: atoms with `d_A > ε`.
    pub fn truncate_lower(&self, eps: &S) -> Result<Self> {
        check_threshold(eps, "lower truncation")?;
        self.filter_by_reservoir_distance(|d_a| d_a > eps)
    }

    /// The near truncation `μ^ε`: atoms with `0 < d_A ≤ ε`.
    ///
    /// Complementary to [`DiscreteMeasure::truncate_lower`]:
    /// `μ_ε + μ^ε = μ` exactly.
    pub fn truncate_upper(&self, eps: &S) -> Result<Self> {
        check_threshold(eps, "upper truncation")?;
        self.filter_by_reservoir_distance(|d_a| d_a <= eps)
    }

    /// The band `μ_ε^δ`: atoms with `ε < d_A ≤ δ`.
    ///
    /// Bands tile: `μ_a^b + μ_b^c = μ_a^c` for `a ≤ b ≤ c`.
    pub fn band(&self, lo: &S, hi: &S) -> Result<Self> {
        check_threshold(lo, "band lower threshold")?;
        check_threshold(hi, "band upper threshold")?;
        if lo > hi {
            return Err(Error::InvalidBand {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        self.filter_by_reservoir_distance(|d_a| d_a > lo && d_a <= hi)
    }

    /// Pushforward under the `ε`-retraction, which collapses the closed
    /// `ε`-neighbourhood of the reservoir onto the reservoir. In the
    /// quotient this is exactly the far truncation `μ_ε`.
    pub fn retract(&self, eps: &S) -> Result<Self> {
        check_threshold(eps, "retraction radius")?;
        self.truncate_lower(eps)
    }

    fn filter_by_reservoir_distance(&self, keep: impl Fn(&S) -> bool) -> Result<Self> {
        let mut atoms = BTreeMap::new();
        for (id, w) in &self.atoms {
            if keep(&self.pair.dist_to_reservoir(*id)?) {
                atoms.insert(*id, w.clone());
            }
        }
        Ok(DiscreteMeasure {
            pair: self.pair.clone(),
            atoms,
        })
    }

    /// Lattice join `μ ∨ ν`: atomwise maximum of weights.
    ///
    /// As a set function, `(μ∨ν)(E) = sup { μ(E₁) + ν(E₂) : E = E₁ ⊔ E₂ }`.
    pub fn sup(&self, other: &Self) -> Result<Self> {
        self.check_same_pair(other)?;
        let mut atoms = self.atoms.clone();
        for (id, w) in &other.atoms {
            let v = match atoms.get(id) {
                Some(v) => max_s(v.clone(), w.clone()),
                None => w.clone(),
            };
            atoms.insert(*id, v);
        }
        Ok(DiscreteMeasure {
            pair: self.pair.clone(),
            atoms,
        })
    }

    /// Lattice meet `μ ∧ ν`: atomwise minimum of weights.
    pub fn inf(&self, other: &Self) -> Result<Self> {
        self.check_same_pair(other)?;
        let mut atoms = BTreeMap::new();
        for (id, w) in &self.atoms {
            if let Some(v) = other.atoms.get(id) {
                let m = min_s(w.clone(), v.clone());
                if !m.is_zero() {
                    atoms.insert(*id, m);
                }
            }
        }
        Ok(DiscreteMeasure {
            pair: self.pair.clone(),
            atoms,
        })
    }

    /// Residual `μ ∖ ν`: the unique measure with `ν + (μ∖ν) = μ ∨ ν`;
    /// atomwise `max(w_μ − w_ν, 0)`. Also satisfies `μ∧ν + (μ∖ν) = μ` and
    /// is monotone in `μ`.
    pub fn residual(&self, other: &Self) -> Result<Self> {
        self.check_same_pair(other)?;
        let mut atoms = BTreeMap::new();
        for (id, w) in &self.atoms {
            let excess = w.clone() - other.weight(*id);
            if excess > S::zero() {
                atoms.insert(*id, excess);
            }
        }
        Ok(DiscreteMeasure {
            pair: self.pair.clone(),
            atoms,
        })
    }

    /// The cone order: `μ ≤ ν` iff every atom weight of `μ` is dominated by
    /// the corresponding weight in `ν`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.check_same_pair(other)?;
        for (id, w) in &self.atoms {
            if *w > other.weight(*id) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<S: Scalar> PartialEq for DiscreteMeasure<S> {
    /// Equal iff built on the same pair instance with identical atoms.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.pair, &other.pair) && self.atoms == other.atoms
    }
}

impl<S: Scalar> SignedMeasure<S> {
    /// Build a signed measure from raw `(point, weight)` atoms.
    ///
    /// Duplicates are merged *before* anything else (so `2δ₁ − 3δ₁` is one
    /// atom of weight −1), zero results are removed, and reservoir atoms are
    /// quotiented away with their net signed weight reported back.
    pub fn new(pair: &Arc<MetricPair<S>>, raw: &[(PointId, S)]) -> Result<(Self, S)> {
        let (atoms, dropped) = collect_atoms(pair, raw, true)?;
        Ok((
            SignedMeasure {
                pair: pair.clone(),
                atoms,
            },
            dropped,
        ))
    }

    /// The difference `μ − ν` as a signed measure.
    pub fn difference(mu: &DiscreteMeasure<S>, nu: &DiscreteMeasure<S>) -> Result<Self> {
        mu.check_same_pair(nu)?;
        let raw: Vec<(PointId, S)> = mu
            .atoms()
            .map(|(id, w)| (id, w.clone()))
            .chain(nu.atoms().map(|(id, w)| (id, -w.clone())))
            .collect();
        Ok(Self::new(mu.pair(), &raw)?.0)
    }

    /// The metric pair this measure lives on.
    pub fn pair(&self) -> &Arc<MetricPair<S>> {
        &self.pair
    }

    /// Atoms in increasing point order (weights non-zero, either sign).
    pub fn atoms(&self) -> impl Iterator<Item = (PointId, &S)> {
        self.atoms.iter().map(|(id, w)| (*id, w))
    }

    /// Whether this is the zero measure.
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Jordan decomposition `σ = σ⁺ − σ⁻`.
    ///
    /// The two parts have disjoint supports (`σ⁺ ∧ σ⁻ = 0`), which makes the
    /// decomposition unique and minimal: any other split `σ = y − z` with
    /// `y, z ≥ 0` has `σ⁺ ≤ y` and `σ⁻ ≤ z`.
    pub fn jordan(&self) -> (DiscreteMeasure<S>, DiscreteMeasure<S>) {
        let mut pos = BTreeMap::new();
        let mut neg = BTreeMap::new();
        for (id, w) in &self.atoms {
            if *w > S::zero() {
                pos.insert(*id, w.clone());
            } else {
                neg.insert(*id, -w.clone());
            }
        }
        (
            DiscreteMeasure::from_atoms(self.pair.clone(), pos),
            DiscreteMeasure::from_atoms(self.pair.clone(), neg),
        )
    }

    /// Total variation `|σ| = σ⁺ + σ⁻`: atomwise absolute weights.
    pub fn abs(&self) -> DiscreteMeasure<S> {
        let atoms = self
            .atoms
            .iter()
            .map(|(id, w)| (*id, w.abs()))
            .collect();
        DiscreteMeasure::from_atoms(self.pair.clone(), atoms)
    }
}

impl<S: Scalar> PartialEq for SignedMeasure<S> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.pair, &other.pair) && self.atoms == other.atoms
    }
}
