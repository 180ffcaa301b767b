//! Numeric values for spectra: exact rationals with a seamless fallback to
//! 60-significant-digit decimal floats when square roots force irrationality.
//!
//! The decimal type is deliberately minimal — add/sub/mul/div/sqrt/compare
//! and decimal rendering are all the spectrum pipeline needs — and shares
//! `BigInt` with the exact side so exact→approx promotion never goes through
//! binary floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Working precision in significant decimal digits.
pub const PRECISION: u32 = 60;

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u8).pow(k)
}

fn digit_count(n: &BigInt) -> u32 {
    // Number of decimal digits of |n| (0 for zero).
    if n.is_zero() {
        return 0;
    }
    n.abs().to_string().len() as u32
}

/// Decimal float `mant · 10^exp` with |mant| < 10^PRECISION after
/// normalization. Truncation error per operation is < 1 ulp at 60 digits,
/// astronomically below every tolerance used in this crate (1e−12/1e−13).
#[derive(Clone)]
pub struct Dec {
    mant: BigInt,
    exp: i64,
}

impl Dec {
    pub fn zero() -> Self {
        Dec {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dec {
            mant: BigInt::from(n),
            exp: 0,
        }
        .normalized()
    }

    pub fn from_rational(r: &BigRational) -> Self {
        if r.is_zero() {
            return Dec::zero();
        }
        let guard = PRECISION + 10;
        let mant = (r.numer() * pow10(guard)).div_floor(r.denom());
        Dec {
            mant,
            exp: -(guard as i64),
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let d = digit_count(&self.mant);
        if d > PRECISION {
            let excess = d - PRECISION;
            let scale = pow10(excess);
            let half = &scale / BigInt::from(2);
            // Round half away from zero, computed on the magnitude.
            let neg = self.mant.is_negative();
            let mag = (self.mant.abs() + half).div_floor(&scale);
            self.mant = if neg { -mag } else { mag };
            self.exp += excess as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> Dec {
        Dec {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dec {
        Dec {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dec) -> Dec {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        // Beyond this the smaller addend is below 1 ulp of the result.
        if shift > (2 * PRECISION + 20) as u64 {
            return hi.clone();
        }
        Dec {
            mant: &hi.mant * pow10(shift as u32) + &lo.mant,
            exp: lo.exp,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Dec) -> Dec {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dec) -> Dec {
        Dec {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .normalized()
    }

    /// Division; panics on a zero divisor (callers guard).
    pub fn div(&self, other: &Dec) -> Dec {
        assert!(!other.is_zero(), "decimal division by zero");
        if self.is_zero() {
            return Dec::zero();
        }
        let scale = PRECISION + 10 + digit_count(&other.mant);
        let num = &self.mant * pow10(scale);
        // Floor instead of round-to-nearest: the error lives in the ten
        // guard digits and vanishes on normalization.
        Dec {
            mant: num.div_floor(&other.mant),
            exp: self.exp - other.exp - scale as i64,
        }
        .normalized()
    }

    /// Square root (floor at working precision); `None` for negatives.
    pub fn sqrt(&self) -> Option<Dec> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Dec::zero());
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        if e.rem_euclid(2) != 0 {
            m *= 10;
            e -= 1;
        }
        let scaled = m * pow10(2 * PRECISION);
        let root = scaled.sqrt();
        Some(
            Dec {
                mant: root,
                exp: e / 2 - PRECISION as i64,
            }
            .normalized(),
        )
    }

    pub fn cmp_val(&self, other: &Dec) -> Ordering {
        let diff = self.sub(other);
        if diff.is_zero() {
            Ordering::Equal
        } else if diff.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        format!("{}e{}", self.mant, self.exp)
            .parse::<f64>()
            .unwrap_or(if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            })
    }

    /// Render with exactly `sig` significant digits, positional for moderate
    /// exponents, scientific otherwise. Deterministic.
    pub fn to_sig_string(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let mut digits = self.mant.abs().to_string();
        let mut exp10 = self.exp + digits.len() as i64 - 1;
        if digits.len() > sig {
            // Round (half away from zero) to `sig` digits.
            let keep: String = digits.chars().take(sig).collect();
            let next = digits.as_bytes()[sig] - b'0';
            let mut kept: Vec<u8> = keep.into_bytes();
            if next >= 5 {
                let mut i = kept.len();
                loop {
                    if i == 0 {
                        kept.insert(0, b'1');
                        exp10 += 1;
                        kept.truncate(sig);
                        break;
                    }
                    i -= 1;
                    if kept[i] == b'9' {
                        kept[i] = b'0';
                    } else {
                        kept[i] += 1;
                        break;
                    }
                }
            }
            digits = String::from_utf8(kept).expect("ascii digits");
        } else if digits.len() < sig {
            digits.push_str(&"0".repeat(sig - digits.len()));
        }
        let body = if exp10 >= 0 && (exp10 as usize) < sig {
            let point = exp10 as usize + 1;
            if point == digits.len() {
                digits
            } else {
                format!("{}.{}", &digits[..point], &digits[point..])
            }
        } else if exp10 < 0 && exp10 >= -4 {
            let zeros = "0".repeat((-exp10 - 1) as usize);
            format!("0.{}{}", zeros, digits)
        } else {
            format!(
                "{}.{}e{}",
                &digits[..1],
                &digits[1..],
                exp10
            )
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl fmt::Debug for Dec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sig_string(20))
    }
}

/// Exact rational when possible, 60-digit decimal otherwise.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Approx(Dec),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::from_int(0)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0);
        Scalar::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    /// Parse a plain decimal literal ("2", "-0.5", "1.25e-3") exactly.
    pub fn parse_decimal(s: &str) -> Option<Scalar> {
        let s = s.trim();
        let (mant_str, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
            None => (s, 0),
        };
        let (int_part, frac_part) = match mant_str.find('.') {
            Some(i) => (&mant_str[..i], &mant_str[i + 1..]),
            None => (mant_str, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let digits = format!(
            "{}{}",
            if int_part.is_empty() { "0" } else { int_part },
            frac_part
        );
        let mant: BigInt = digits.parse().ok()?;
        let shift = frac_part.len() as i64 - exp;
        let r = if shift >= 0 {
            BigRational::new(mant, pow10(shift.try_into().ok()?))
        } else {
            BigRational::from_integer(mant * pow10((-shift).try_into().ok()?))
        };
        Some(Scalar::Exact(r))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_dec(&self) -> Dec {
        match self {
            Scalar::Exact(r) => Dec::from_rational(r),
            Scalar::Approx(d) => d.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(d) => d.is_zero(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Approx(self.to_dec().add(&other.to_dec())),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(d) => Scalar::Approx(d.neg()),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(d) => Scalar::Approx(d.abs()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Approx(self.to_dec().mul(&other.to_dec())),
        }
    }

    pub fn powi(&self, k: u32) -> Scalar {
        let mut acc = Scalar::from_int(1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Panics on zero divisor (enumeration code checks first).
    pub fn div(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                assert!(!b.is_zero(), "scalar division by zero");
                Scalar::Exact(a / b)
            }
            _ => Scalar::Approx(self.to_dec().div(&other.to_dec())),
        }
    }

    /// Exact square root when the radicand is a perfect rational square,
    /// 60-digit decimal otherwise; `None` for negatives.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(r) => {
                if r.is_negative() {
                    return None;
                }
                let ns = r.numer().sqrt();
                let ds = r.denom().sqrt();
                if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
                    Some(Scalar::Exact(BigRational::new(ns, ds)))
                } else {
                    Some(Scalar::Approx(
                        Dec::from_rational(r).sqrt().expect("nonnegative"),
                    ))
                }
            }
            Scalar::Approx(d) => d.sqrt().map(Scalar::Approx),
        }
    }

    pub fn cmp_val(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.to_dec().cmp_val(&other.to_dec()),
        }
    }

    /// Strictly positive, with an absolute 1e−45 dead band in approximate
    /// mode (all shipped parameter grids are O(1)-normalized).
    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Approx(d) => {
                !d.is_negative() && d.cmp_val(&tiny()) == Ordering::Greater
            }
        }
    }

    pub fn is_negative_strict(&self) -> bool {
        self.neg().is_positive()
    }

    /// |a−b| / max(|a|, |b|, 1e−300) as f64.
    pub fn rel_diff(&self, other: &Scalar) -> f64 {
        let num = self.sub(other).abs().to_dec().to_f64();
        let den = self
            .abs()
            .to_dec()
            .to_f64()
            .max(other.abs().to_dec().to_f64())
            .max(1e-300);
        num / den
    }

    /// Equal exactly (both exact) or to within `rel` relative error.
    pub fn matches(&self, other: &Scalar, rel: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.rel_diff(other) <= rel,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_dec().to_f64()
    }

    pub fn to_sig_string(&self, sig: usize) -> String {
        self.to_dec().to_sig_string(sig)
    }

    /// "p/q" (or "p") when the value is exact.
    pub fn as_exact_str(&self) -> Option<String> {
        match self {
            Scalar::Exact(r) => Some(if r.denom() == &BigInt::from(1) {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }),
            Scalar::Approx(_) => None,
        }
    }
}

fn tiny() -> Dec {
    Dec {
        mant: BigInt::from(1),
        exp: -45,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_exact_str() {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "{}", self.to_sig_string(20)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &str) -> Dec {
        match Scalar::parse_decimal(s).unwrap() {
            Scalar::Exact(r) => Dec::from_rational(&r),
            _ => unreachable!(),
        }
    }

    #[test]
    fn sqrt_two_to_sixty_digits() {
        let r = dec("2").sqrt().unwrap();
        let sq = r.mul(&r);
        let err = sq.sub(&dec("2")).abs();
        assert!(err.cmp_val(&dec("1e-57")) == Ordering::Less, "err {err:?}");
    }

    #[test]
    fn exact_sqrt_of_perfect_square() {
        let s = Scalar::from_ratio(9, 4).sqrt().unwrap();
        assert!(s.is_exact());
        assert_eq!(s.as_exact_str().unwrap(), "3/2");
        let t = Scalar::from_int(2).sqrt().unwrap();
        assert!(!t.is_exact());
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(
            Scalar::parse_decimal("-0.5").unwrap().as_exact_str().unwrap(),
            "-1/2"
        );
        assert_eq!(
            Scalar::parse_decimal("1.25e2").unwrap().as_exact_str().unwrap(),
            "125"
        );
        assert!(Scalar::parse_decimal("abc").is_none());
    }

    #[test]
    fn sig_string_rendering() {
        assert_eq!(Scalar::from_int(2).to_sig_string(15), "2.00000000000000");
        assert_eq!(
            Scalar::from_ratio(-1, 2).to_sig_string(15),
            "-0.500000000000000"
        );
        let big = Scalar::parse_decimal("1.5e20").unwrap();
        assert_eq!(big.to_sig_string(15), "1.50000000000000e20");
        let small = Scalar::parse_decimal("-2.5e-7").unwrap();
        assert_eq!(small.to_sig_string(15), "-2.50000000000000e-7");
        assert_eq!(Scalar::zero().to_sig_string(15), "0");
        // Carry propagation: 0.9999999999999995 → 1.00000000000000
        let carry = Scalar::parse_decimal("0.99999999999999995").unwrap();
        assert_eq!(carry.to_sig_string(15), "1.00000000000000");
    }

    #[test]
    fn division_and_compare() {
        let a = dec("1").div(&dec("3"));
        let third = Scalar::from_ratio(1, 3).to_dec();
        assert!(a.sub(&third).abs().cmp_val(&dec("1e-58")) == Ordering::Less);
        assert_eq!(dec("-2").cmp_val(&dec("1e-30")), Ordering::Less);
    }

    #[test]
    fn relative_difference() {
        let a = Scalar::parse_decimal("1.0000000000001").unwrap();
        let b = Scalar::from_int(1);
        let d = a.rel_diff(&b);
        assert!(d > 9e-14 && d < 1.1e-13, "rel {d}");
    }
}
