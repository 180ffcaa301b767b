//! A rational number that stays in machine words until it can't.
//!
//! Coefficients in the operator algebra are overwhelmingly small fractions;
//! keeping them as reduced i64/i64 pairs avoids the allocation and gcd
//! traffic of arbitrary-precision rationals on every multiply. Values that
//! outgrow i64 promote transparently to `BigRational` and demote back the
//! moment they fit again, so each value has exactly one representation and
//! derived equality/hashing stay sound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rat {
    /// Reduced fraction, denominator > 0.
    S { n: i64, d: i64 },
    /// Out-of-range fallback, kept in canonical (reduced) form.
    B(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Build from a (possibly unreduced) i128 fraction. Inputs are products or
/// two-term sums of i64 values, so they always fit comfortably in i128.
fn make(n: i128, d: i128) -> Rat {
    debug_assert!(d != 0, "zero denominator");
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    if n == 0 {
        return Rat::S { n: 0, d: 1 };
    }
    let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
    let (n, d) = (n / g, d / g);
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(ns), Ok(ds)) => Rat::S { n: ns, d: ds },
        _ => Rat::B(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
    }
}

/// Demote a canonical `BigRational` when it fits machine words.
fn demote(r: BigRational) -> Rat {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        Rat::S { n, d }
    } else {
        Rat::B(Box::new(r))
    }
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::S { n: 0, d: 1 }
    }

    pub fn one() -> Rat {
        Rat::S { n: 1, d: 1 }
    }

    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        make(n as i128, d as i128)
    }

    pub fn from_int(n: i64) -> Rat {
        Rat::S { n, d: 1 }
    }

    pub fn from_big(r: BigRational) -> Rat {
        demote(r)
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::S { n, d } => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Rat::B(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::S { n: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::S { n: 1, d: 1 })
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::S { n, .. } => *n < 0,
            Rat::B(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::S { d, .. } => *d == 1,
            Rat::B(r) => r.is_integer(),
        }
    }

    pub fn add(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::S { n: a, d: b }, Rat::S { n: c, d: e }) => {
                if *a == 0 {
                    return other.clone();
                }
                if *c == 0 {
                    return self.clone();
                }
                make(
                    *a as i128 * *e as i128 + *c as i128 * *b as i128,
                    *b as i128 * *e as i128,
                )
            }
            _ => demote(self.to_big() + other.to_big()),
        }
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::S { n, d } => Rat::S { n: -n, d: *d },
            Rat::B(r) => Rat::B(Box::new(-(**r).clone())),
        }
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::S { n: a, d: b }, Rat::S { n: c, d: e }) => {
                if *a == 0 || *c == 0 {
                    return Rat::zero();
                }
                if *a == 1 && *b == 1 {
                    return other.clone();
                }
                if *c == 1 && *e == 1 {
                    return self.clone();
                }
                make(*a as i128 * *c as i128, *b as i128 * *e as i128)
            }
            _ => demote(self.to_big() * other.to_big()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Rat> {
        match self {
            Rat::S { n: 0, .. } => None,
            Rat::S { n, d } => Some(if *n < 0 {
                Rat::S { n: -d, d: -n }
            } else {
                Rat::S { n: *d, d: *n }
            }),
            Rat::B(r) => Some(demote(r.recip())),
        }
    }

    pub fn div(&self, other: &Rat) -> Option<Rat> {
        Some(self.mul(&other.inv()?))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (self, other) {
            (Rat::S { n: a, d: b }, Rat::S { n: c, d: e }) => {
                (*a as i128 * *e as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::S { n, d: 1 } => write!(f, "{n}"),
            Rat::S { n, d } => write!(f, "{n}/{d}"),
            Rat::B(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i128, d: i128) -> Rat {
        Rat::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn small_arithmetic_reduces() {
        let a = Rat::new(6, -4);
        assert_eq!(a, Rat::new(-3, 2));
        assert_eq!(a.add(&Rat::new(3, 2)), Rat::zero());
        assert_eq!(a.mul(&Rat::new(-2, 3)), Rat::one());
        assert_eq!(a.inv().unwrap(), Rat::new(-2, 3));
        assert!(Rat::zero().inv().is_none());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let huge = Rat::from_int(i64::MAX);
        let sq = huge.mul(&huge);
        assert!(matches!(sq, Rat::B(_)));
        // Dividing back down demotes to the small representation.
        let back = sq.div(&huge).unwrap();
        assert_eq!(back, huge);
        assert!(matches!(back, Rat::S { .. }));
        // Equality across the promotion boundary is canonical.
        assert_eq!(big(10, 4), Rat::new(5, 2));
    }

    #[test]
    fn ordering_matches_value_order() {
        let vals = [
            Rat::new(-3, 2),
            Rat::zero(),
            Rat::new(1, 3),
            Rat::new(1, 2),
            Rat::from_int(i64::MAX).mul(&Rat::from_int(4)),
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1], "{} < {}", w[0], w[1]);
        }
    }
}
