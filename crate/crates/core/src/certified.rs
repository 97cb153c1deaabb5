//! Interval arithmetic with directed rounding on arbitrary-precision floats.
//!
//! Every value is an enclosure `[lo, hi]` of the exact real it stands for;
//! operations round the lower endpoint down and the upper endpoint up, so a
//! sign read off an interval that excludes zero is certified. Exponents in
//! this crate are exact dyadic numbers (an `rug::Float` *is* its value), so
//! no rounding happens when one enters a computation.

use num_bigint::BigInt;
use rug::float::Round;
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, PowAssignRound, SubAssignRound};
use rug::{Float, Integer};

/// Sign of a real known only through an enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    /// The enclosure straddles zero at the working precision.
    Indeterminate,
}

/// An enclosure `lo <= value <= hi`.
#[derive(Clone, Debug)]
pub struct CertifiedReal {
    lo: Float,
    hi: Float,
}

impl CertifiedReal {
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi);
        CertifiedReal { lo, hi }
    }

    /// An exact dyadic point.
    pub fn point(v: Float) -> Self {
        CertifiedReal {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero(prec: u32) -> Self {
        CertifiedReal {
            lo: Float::with_val(prec, 0),
            hi: Float::with_val(prec, 0),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn sign(&self) -> Sign {
        if self.lo > 0 {
            Sign::Positive
        } else if self.hi < 0 {
            Sign::Negative
        } else {
            Sign::Indeterminate
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn width(&self) -> Float {
        let mut w = self.hi.clone();
        w.sub_assign_round(&self.lo, Round::Up);
        w
    }

    pub fn midpoint(&self) -> Float {
        let prec = self.precision();
        let mut m = Float::with_val(prec, &self.lo);
        m.add_assign_round(&self.hi, Round::Nearest);
        m.div_assign_round(2, Round::Nearest);
        m
    }

    pub fn add(&self, other: &CertifiedReal) -> CertifiedReal {
        let mut lo = self.lo.clone();
        lo.add_assign_round(&other.lo, Round::Down);
        let mut hi = self.hi.clone();
        hi.add_assign_round(&other.hi, Round::Up);
        CertifiedReal { lo, hi }
    }

    pub fn sub(&self, other: &CertifiedReal) -> CertifiedReal {
        let mut lo = self.lo.clone();
        lo.sub_assign_round(&other.hi, Round::Down);
        let mut hi = self.hi.clone();
        hi.sub_assign_round(&other.lo, Round::Up);
        CertifiedReal { lo, hi }
    }

    pub fn neg(&self) -> CertifiedReal {
        CertifiedReal {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    /// Scale by an exact integer.
    pub fn mul_i64(&self, c: i64) -> CertifiedReal {
        if c >= 0 {
            let mut lo = self.lo.clone();
            lo.mul_assign_round(c, Round::Down);
            let mut hi = self.hi.clone();
            hi.mul_assign_round(c, Round::Up);
            CertifiedReal { lo, hi }
        } else {
            let mut lo = self.hi.clone();
            lo.mul_assign_round(c, Round::Down);
            let mut hi = self.lo.clone();
            hi.mul_assign_round(c, Round::Up);
            CertifiedReal { lo, hi }
        }
    }

    /// Full interval product (all four endpoint combinations).
    pub fn mul(&self, other: &CertifiedReal) -> CertifiedReal {
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let mut d = a.clone();
                d.mul_assign_round(b, Round::Down);
                let mut u = a.clone();
                u.mul_assign_round(b, Round::Up);
                lo = Some(match lo {
                    None => d,
                    Some(x) => x.min(&d),
                });
                hi = Some(match hi {
                    None => u,
                    Some(x) => x.max(&u),
                });
            }
        }
        CertifiedReal {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Decimal rendering of both endpoints.
    pub fn to_decimal_strings(&self) -> (String, String) {
        let digits = (self.precision() as f64 * 0.301) as usize + 2;
        (
            self.lo.to_string_radix(10, Some(digits)),
            self.hi.to_string_radix(10, Some(digits)),
        )
    }
}

/// Converts a num-bigint integer into an rug integer, exactly.
pub fn to_rug_integer(x: &BigInt) -> Integer {
    let (sign, bytes) = x.to_bytes_be();
    let mut v = Integer::from_digits(&bytes, rug::integer::Order::Msf);
    if sign == num_bigint::Sign::Minus {
        v = -v;
    }
    v
}

/// Directed enclosure of an integer at the given precision.
pub fn int_interval(x: &BigInt, prec: u32) -> CertifiedReal {
    let v = to_rug_integer(x);
    let lo = Float::with_val_round(prec, &v, Round::Down).0;
    let hi = Float::with_val_round(prec, &v, Round::Up).0;
    CertifiedReal::new(lo, hi)
}

/// Directed enclosure of the rational `num / den` (`den > 0`).
pub fn rational_interval(num: &BigInt, den: &BigInt, prec: u32) -> CertifiedReal {
    let n = to_rug_integer(num);
    let d = to_rug_integer(den);
    let mut lo = Float::with_val_round(prec, &n, Round::Down).0;
    lo.div_assign_round(Float::with_val_round(prec, &d, Round::Up).0, Round::Down);
    let mut hi = Float::with_val_round(prec, &n, Round::Up).0;
    hi.div_assign_round(Float::with_val_round(prec, &d, Round::Down).0, Round::Up);
    CertifiedReal::new(lo, hi)
}

/// Enclosure of `x^(-α)` for a positive integer `x` and exact dyadic `α >= 0`.
///
/// For `x >= 1` the map is monotone decreasing in both the base and the
/// exponent, so the upper bound uses the rounded-down base and vice versa.
pub fn pow_neg_alpha(x: &BigInt, alpha: &Float, prec: u32) -> CertifiedReal {
    debug_assert!(*alpha >= 0);
    let v = to_rug_integer(x);
    let neg = -alpha.clone();
    let mut lo = Float::with_val_round(prec, &v, Round::Up).0;
    lo.pow_assign_round(&neg, Round::Down);
    let mut hi = Float::with_val_round(prec, &v, Round::Down).0;
    hi.pow_assign_round(&neg, Round::Up);
    CertifiedReal::new(lo, hi)
}

/// Enclosure of `x^(-α)` when the exponent itself is only known to lie in
/// `[alpha.lo, alpha.hi]` (all of it nonnegative).
pub fn pow_neg_alpha_interval(x: &BigInt, alpha: &CertifiedReal, prec: u32) -> CertifiedReal {
    debug_assert!(*alpha.lo() >= 0);
    let v = to_rug_integer(x);
    // x >= 1: larger α gives smaller x^(-α)
    let mut lo = Float::with_val_round(prec, &v, Round::Up).0;
    lo.pow_assign_round(&-alpha.hi().clone(), Round::Down);
    let mut hi = Float::with_val_round(prec, &v, Round::Down).0;
    hi.pow_assign_round(&-alpha.lo().clone(), Round::Up);
    CertifiedReal::new(lo, hi)
}

/// Enclosure of `ln x` for a positive integer.
pub fn ln_int(x: &BigInt, prec: u32) -> CertifiedReal {
    let v = to_rug_integer(x);
    let mut lo = Float::with_val_round(prec, &v, Round::Down).0;
    lo.ln_round(Round::Down);
    let mut hi = Float::with_val_round(prec, &v, Round::Up).0;
    hi.ln_round(Round::Up);
    CertifiedReal::new(lo, hi)
}

/// Enclosure of `ln (a/b)` for positive integers.
pub fn ln_ratio(a: &BigInt, b: &BigInt, prec: u32) -> CertifiedReal {
    ln_int(a, prec).sub(&ln_int(b, prec))
}
