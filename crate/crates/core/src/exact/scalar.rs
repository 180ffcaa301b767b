//! Gaussian rationals: complex numbers with rational real and imaginary parts.
//!
//! This is the coefficient field for every exact computation in the crate.
//! Operator coefficients stay in Q(i) because momenta carry a factor −iħ.
//! Components are [`Rat`] values, so the common case of small fractions
//! never touches heap-allocated integers.

use super::rat::Rat;
use num_rational::BigRational;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GScalar {
    re: Rat,
    im: Rat,
}

impl Default for GScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl GScalar {
    pub fn zero() -> Self {
        GScalar {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GScalar {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GScalar {
            re: Rat::from_int(n),
            im: Rat::zero(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        GScalar {
            re: Rat::new(n, d),
            im: Rat::zero(),
        }
    }

    pub fn from_real(re: BigRational) -> Self {
        GScalar {
            re: Rat::from_big(re),
            im: Rat::zero(),
        }
    }

    /// `n/d · i`
    pub fn imag_ratio(n: i64, d: i64) -> Self {
        GScalar {
            re: Rat::zero(),
            im: Rat::new(n, d),
        }
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im(&self) -> &Rat {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GScalar {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// Squared modulus `re² + im²` (a nonnegative rational).
    pub fn norm_sqr(&self) -> Rat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr().inv()?;
        Some(GScalar {
            re: self.re.mul(&n),
            im: self.im.neg().mul(&n),
        })
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        // Purely real/imaginary factors dominate in practice; each branch
        // below saves two to three rational multiplies over the full
        // complex product.
        match (
            self.re.is_zero(),
            self.im.is_zero(),
            other.re.is_zero(),
            other.im.is_zero(),
        ) {
            (true, true, _, _) | (_, _, true, true) => Self::zero(),
            (false, true, false, true) => GScalar {
                re: self.re.mul(&other.re),
                im: Rat::zero(),
            },
            (false, true, true, false) => GScalar {
                re: Rat::zero(),
                im: self.re.mul(&other.im),
            },
            (true, false, false, true) => GScalar {
                re: Rat::zero(),
                im: self.im.mul(&other.re),
            },
            (true, false, true, false) => GScalar {
                re: self.im.mul(&other.im).neg(),
                im: Rat::zero(),
            },
            (false, true, false, false) => GScalar {
                re: self.re.mul(&other.re),
                im: self.re.mul(&other.im),
            },
            (true, false, false, false) => GScalar {
                re: self.im.mul(&other.im).neg(),
                im: self.im.mul(&other.re),
            },
            (false, false, false, true) => GScalar {
                re: self.re.mul(&other.re),
                im: self.im.mul(&other.re),
            },
            (false, false, true, false) => GScalar {
                re: self.im.mul(&other.im).neg(),
                im: self.re.mul(&other.im),
            },
            (false, false, false, false) => GScalar {
                re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
                im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
            },
        }
    }
}

impl Add for GScalar {
    type Output = GScalar;
    fn add(self, rhs: GScalar) -> GScalar {
        GScalar {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }
}

impl AddAssign<&GScalar> for GScalar {
    fn add_assign(&mut self, rhs: &GScalar) {
        if !rhs.re.is_zero() {
            self.re = self.re.add(&rhs.re);
        }
        if !rhs.im.is_zero() {
            self.im = self.im.add(&rhs.im);
        }
    }
}

impl Sub for GScalar {
    type Output = GScalar;
    fn sub(self, rhs: GScalar) -> GScalar {
        GScalar {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }
}

impl Neg for GScalar {
    type Output = GScalar;
    fn neg(self) -> GScalar {
        GScalar {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl Mul for GScalar {
    type Output = GScalar;
    fn mul(self, rhs: GScalar) -> GScalar {
        self.mul_ref(&rhs)
    }
}

impl Mul<&GScalar> for &GScalar {
    type Output = GScalar;
    fn mul(self, rhs: &GScalar) -> GScalar {
        self.mul_ref(rhs)
    }
}

impl fmt::Display for GScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        let (sign, mag) = if self.im.is_negative() {
            ("-", self.im.neg())
        } else {
            ("+", self.im.clone())
        };
        write!(f, "({}{}{}i)", self.re, sign, mag)
    }
}

impl fmt::Debug for GScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
