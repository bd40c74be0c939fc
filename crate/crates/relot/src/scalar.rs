//! Scalar abstraction: everything is generic over the number type.
//!
//! Two instantiations are supported:
//!
//! * [`Real`] (`f64`) — the default; fast, and every operation is available.
//! * [`Rational`] (arbitrary-precision rationals) — exact arithmetic. All
//!   cone/lattice algebra and optimal *costs* (the `p`-th powers of
//!   distances) stay inside the rationals for integer `p`; only final roots
//!   can leave them, and those are surfaced as [`Error::InexactRoot`] instead
//!   of being silently approximated.
//!
//! Exact mode therefore restricts the inputs it accepts: cost exponents must
//! be integers, and geometries whose distances are irrational (euclidean in
//! dimension ≥ 2, the half-plane under the L2 metric) are rejected at
//! construction time.
//!
//! Invariants:
//! * scalars inside measures, pairs, and couplings are always finite — the
//!   constructors validate, so comparisons never see NaN;
//! * `Rational` operations never round; a result that would require rounding
//!   is an error, not an approximation.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The default floating-point scalar.
pub type Real = f64;

/// The exact arbitrary-precision rational scalar.
pub type Rational = num::BigRational;

/// Largest integer cost exponent accepted in exact mode.
///
/// Exact powers are computed by repeated multiplication; this cap keeps a
/// hostile `--p` from turning into an unbounded loop. Desk-scale use is
/// `p ∈ {1, 2, 3}`.
const MAX_EXACT_EXPONENT: f64 = 64.0;

/// Number type the whole crate is generic over.
///
/// The supertraits provide `+ - * / %`, negation, `abs`, and the `0`/`1`
/// constants for both `f64` and arbitrary-precision rationals; this trait
/// adds the conversions and the checked power/root operations whose
/// behaviour differs between approximate and exact arithmetic.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Signed + 'static {
    /// `true` when arithmetic in this type is exact (no rounding, ever).
    const EXACT: bool;

    /// Embed a small integer.
    fn from_int(n: i64) -> Self;

    /// Convert from `f64`. Exact for both instantiations — every finite
    /// float *is* a rational — and an error for NaN or infinities.
    fn from_f64(x: f64) -> Result<Self>;

    /// Nearest `f64` (lossy for rationals, identity for floats).
    fn to_f64(&self) -> f64;

    /// Parse a decimal literal (`"2"`, `"-0.125"`, `"1e-3"`) or a ratio
    /// (`"3/4"`). Decimal strings parse exactly: in rational mode `"0.1"`
    /// is one tenth, not the nearest binary float.
    fn parse_decimal(s: &str) -> Result<Self>;

    /// `self^p` for `self ≥ 0` and finite `p ≥ 0`.
    ///
    /// In exact mode `p` must be a (small) integer; anything else is
    /// [`Error::ExactUnsupported`].
    fn powf_checked(&self, p: f64) -> Result<Self>;

    /// The `p`-th root of `self ≥ 0` for `p ≥ 1`.
    ///
    /// In exact mode `p` must be an integer and the root must exist in the
    /// rationals; an irrational root is [`Error::InexactRoot`] — callers
    /// that can work with the `p`-th power directly should do so.
    fn root_checked(&self, p: f64) -> Result<Self>;

    /// Render as a JSON value token: a bare number for floats (shortest
    /// form that round-trips), a quoted `"num/den"` string for rationals.
    fn json_token(&self) -> String;

    /// Reject NaN and infinities; `what` names the offending field in the
    /// error. A no-op for exact types.
    fn validate_finite(&self, what: &str) -> Result<()>;
}

/// Validate a cost exponent: finite and at least one.
pub fn check_exponent(p: f64) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::InvalidExponent {
            p,
            reason: "must be finite".into(),
        });
    }
    if p < 1.0 {
        return Err(Error::InvalidExponent {
            p,
            reason: "must be at least 1".into(),
        });
    }
    Ok(())
}

/// `p` as an exact integer, if it is one (and small enough for exact mode).
fn exact_integer_exponent(p: f64) -> Option<u32> {
    if p.fract() == 0.0 && (0.0..=MAX_EXACT_EXPONENT).contains(&p) {
        Some(p as u32)
    } else {
        None
    }
}

/// Total comparison for validated scalars.
///
/// Panics on NaN — which the constructors make unreachable — rather than
/// letting an unordered value silently corrupt a sort or a pivot choice.
pub fn cmp_s<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b)
        .expect("non-finite scalar escaped input validation")
}

/// The smaller of two scalars.
pub fn min_s<S: Scalar>(a: S, b: S) -> S {
    if cmp_s(&a, &b) == Ordering::Greater {
        b
    } else {
        a
    }
}

/// The larger of two scalars.
pub fn max_s<S: Scalar>(a: S, b: S) -> S {
    if cmp_s(&a, &b) == Ordering::Less {
        b
    } else {
        a
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_f64(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::NonFiniteNumber {
                what: "scalar conversion".into(),
            })
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_decimal(s: &str) -> Result<Self> {
        let s = s.trim();
        let value = if let Some((n, d)) = s.split_once('/') {
            let numer: f64 = n.trim().parse().map_err(|_| Error::Parse {
                reason: format!("invalid number {s:?}"),
            })?;
            let denom: f64 = d.trim().parse().map_err(|_| Error::Parse {
                reason: format!("invalid number {s:?}"),
            })?;
            if denom == 0.0 {
                return Err(Error::Parse {
                    reason: format!("zero denominator in {s:?}"),
                });
            }
            numer / denom
        } else {
            s.parse().map_err(|_| Error::Parse {
                reason: format!("invalid number {s:?}"),
            })?
        };
        Self::from_f64(value)
    }

    fn powf_checked(&self, p: f64) -> Result<Self> {
        debug_assert!(*self >= 0.0, "powers only of non-negative scalars");
        if p == 1.0 {
            Ok(*self)
        } else {
            Ok(self.powf(p))
        }
    }

    fn root_checked(&self, p: f64) -> Result<Self> {
        debug_assert!(*self >= 0.0, "roots only of non-negative scalars");
        if p == 1.0 {
            Ok(*self)
        } else if p == 2.0 {
            Ok(self.sqrt())
        } else {
            Ok(self.powf(p.recip()))
        }
    }

    fn json_token(&self) -> String {
        serde_json::Number::from_f64(*self)
            .expect("non-finite scalar escaped input validation")
            .to_string()
    }

    fn validate_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFiniteNumber { what: what.into() })
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_f64(x: f64) -> Result<Self> {
        Rational::from_float(x).ok_or(Error::NonFiniteNumber {
            what: "scalar conversion".into(),
        })
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_decimal(s: &str) -> Result<Self> {
        parse_decimal_rational(s)
    }

    fn powf_checked(&self, p: f64) -> Result<Self> {
        debug_assert!(!self.is_negative(), "powers only of non-negative scalars");
        let k = exact_integer_exponent(p).ok_or_else(|| Error::ExactUnsupported {
            what: format!("cost exponent p = {p} (exact mode needs a small integer p)"),
        })?;
        Ok(num::pow(self.clone(), k as usize))
    }

    fn root_checked(&self, p: f64) -> Result<Self> {
        let k = exact_integer_exponent(p).ok_or_else(|| Error::ExactUnsupported {
            what: format!("root degree p = {p} (exact mode needs a small integer p)"),
        })?;
        if k == 1 {
            return Ok(self.clone());
        }
        let inexact = || Error::InexactRoot {
            degree: k,
            value: self.to_string(),
        };
        if self.is_negative() {
            return Err(inexact());
        }
        // `Ratio` keeps itself reduced, so numerator and denominator can be
        // rooted independently: a reduced fraction is a perfect k-th power
        // exactly when both parts are.
        let rn = self.numer().nth_root(k);
        let rd = self.denom().nth_root(k);
        if num::pow(rn.clone(), k as usize) == *self.numer()
            && num::pow(rd.clone(), k as usize) == *self.denom()
        {
            Ok(Rational::new(rn, rd))
        } else {
            Err(inexact())
        }
    }

    fn json_token(&self) -> String {
        // `Display` for ratios already omits a unit denominator.
        format!("\"{self}\"")
    }

    fn validate_finite(&self, _what: &str) -> Result<()> {
        Ok(())
    }
}

/// Exact parse of a decimal literal or `num/den` ratio into a rational.
fn parse_decimal_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        reason: format!("invalid number {s:?}"),
    };

    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.trim().parse().map_err(|_| bad())?;
        let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(Error::Parse {
                reason: format!("zero denominator in {s:?}"),
            });
        }
        return Ok(Rational::new(numer, denom));
    }

    let (mantissa_str, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa_str.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa_str.strip_prefix('+').unwrap_or(mantissa_str)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }

    let mantissa: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp10 - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(Error::Parse {
            reason: format!("exponent out of range in {s:?}"),
        });
    }
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(mantissa * num::pow(ten, scale as usize))
    } else {
        Rational::new(mantissa, num::pow(ten, (-scale) as usize))
    };
    Ok(if negative { -value } else { value })
}
