//! Quadratic extension of the rational-function field by the radial
//! coordinate: elements `a + b·r` with the single rewrite rule `r² = s`,
//! `s = x1² + … + xd²` for the active spatial dimension `d`.
//!
//! For `d = 1` the element `r` is a zero divisor (`(r−x1)(r+x1) = 0`), so
//! inversion can legitimately fail there; that surfaces as
//! [`AlgebraError::ZeroDivisor`]. Model constructors require `d ≥ 2`.

use super::poly::{var, MultiPoly, NVARS};
use super::ratfn::RatFn;
use super::scalar::GScalar;
use crate::error::{AlgebraError, Result};
use std::fmt;

/// The defining polynomial `s = Σ_{i<dim} x_{i+1}²`.
pub fn radius_squared(dim: u8) -> MultiPoly {
    assert!((1..=6).contains(&dim), "spatial dimension must be 1..=6");
    let mut s = MultiPoly::zero();
    for i in 0..dim as usize {
        let xi = MultiPoly::var(var::x(i));
        s.add_assign(&xi.mul(&xi));
    }
    s
}

/// Element `a + b·r` of the extension for a fixed spatial dimension.
#[derive(Clone, PartialEq, Eq)]
pub struct RadExt {
    pub dim: u8,
    pub a: RatFn,
    pub b: RatFn,
}

impl RadExt {
    pub fn zero(dim: u8) -> Self {
        RadExt {
            dim,
            a: RatFn::zero(),
            b: RatFn::zero(),
        }
    }

    pub fn one(dim: u8) -> Self {
        Self::rational(dim, RatFn::one())
    }

    pub fn rational(dim: u8, a: RatFn) -> Self {
        RadExt {
            dim,
            a,
            b: RatFn::zero(),
        }
    }

    pub fn from_poly(dim: u8, p: MultiPoly) -> Self {
        Self::rational(dim, RatFn::from_poly(p))
    }

    pub fn constant(dim: u8, c: GScalar) -> Self {
        Self::rational(dim, RatFn::constant(c))
    }

    /// The radical generator `r` itself.
    pub fn radius(dim: u8) -> Self {
        RadExt {
            dim,
            a: RatFn::zero(),
            b: RatFn::one(),
        }
    }

    pub fn var(dim: u8, slot: usize) -> Self {
        Self::from_poly(dim, MultiPoly::var(slot))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_constant(&self) -> Option<GScalar> {
        if !self.b.is_zero() {
            return None;
        }
        self.a.as_constant()
    }

    pub fn term_count(&self) -> usize {
        self.a.term_count() + self.b.term_count()
    }

    fn check_dim(&self, other: &RadExt) {
        assert_eq!(self.dim, other.dim, "mixed spatial dimensions");
    }

    pub fn add(&self, other: &RadExt) -> RadExt {
        self.check_dim(other);
        RadExt {
            dim: self.dim,
            a: self.a.add(&other.a),
            b: self.b.add(&other.b),
        }
    }

    pub fn sub(&self, other: &RadExt) -> RadExt {
        self.check_dim(other);
        RadExt {
            dim: self.dim,
            a: self.a.sub(&other.a),
            b: self.b.sub(&other.b),
        }
    }

    pub fn neg(&self) -> RadExt {
        RadExt {
            dim: self.dim,
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }

    pub fn scale(&self, c: &GScalar) -> RadExt {
        RadExt {
            dim: self.dim,
            a: self.a.scale(c),
            b: self.b.scale(c),
        }
    }

    /// `(a₁ + b₁r)(a₂ + b₂r) = a₁a₂ + b₁b₂s + (a₁b₂ + b₁a₂) r`.
    pub fn mul(&self, other: &RadExt) -> RadExt {
        self.check_dim(other);
        let s = RatFn::from_poly(radius_squared(self.dim));
        RadExt {
            dim: self.dim,
            a: self
                .a
                .mul(&other.a)
                .add(&self.b.mul(&other.b).mul(&s)),
            b: self.a.mul(&other.b).add(&self.b.mul(&other.a)),
        }
    }

    /// Inverse via the conjugate: `1/(a+br) = (a−br)/(a²−b²s)`.
    pub fn inv(&self) -> Result<RadExt> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDivisor("inverse of zero".into()));
        }
        let s = RatFn::from_poly(radius_squared(self.dim));
        let norm = self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&s));
        let norm_inv = norm.inv().ok_or_else(|| {
            AlgebraError::ZeroDivisor(format!(
                "norm a\u{b2}-b\u{b2}s vanishes for dim {} (element is a zero divisor)",
                self.dim
            ))
        })?;
        Ok(RadExt {
            dim: self.dim,
            a: self.a.mul(&norm_inv),
            b: self.b.neg().mul(&norm_inv),
        })
    }

    /// Partial derivative. For a spatial slot, `d(b·r) = (db)·r + b·xᵢ/r`
    /// and `1/r = r/s`, so the chain-rule term adds `b·xᵢ/s` to the r-part.
    pub fn diff(&self, slot: usize) -> RadExt {
        let da = self.a.diff(slot);
        let mut db = self.b.diff(slot);
        if slot < self.dim as usize && !self.b.is_zero() {
            let xi = RatFn::from_poly(MultiPoly::var(slot));
            let s_inv = RatFn::from_poly(radius_squared(self.dim))
                .inv()
                .expect("s is nonzero");
            db = db.add(&self.b.mul(&xi).mul(&s_inv));
        }
        RadExt {
            dim: self.dim,
            a: da,
            b: db,
        }
    }

    /// Exact semantic equality componentwise.
    pub fn eq_semantic(&self, other: &RadExt) -> bool {
        self.dim == other.dim
            && self.a.eq_semantic(&other.a)
            && self.b.eq_semantic(&other.b)
    }

    /// Evaluate at a rational point with an explicitly supplied rational
    /// value for `r` (callers pick points on rational spheres).
    pub fn eval(
        &self,
        vals: &[num_rational::BigRational; NVARS],
        r_val: &num_rational::BigRational,
    ) -> Result<GScalar> {
        let eval_ratfn = |q: &RatFn| -> Result<GScalar> {
            let n = q.numerator().eval(vals);
            let mut d = GScalar::one();
            for (f, m) in q.denominator_factors() {
                let fv = f.eval(vals);
                for _ in 0..m {
                    d = d.mul_ref(&fv);
                }
            }
            let d_inv = d
                .inv()
                .ok_or_else(|| AlgebraError::ZeroDivisor("denominator vanishes at point".into()))?;
            Ok(n.mul_ref(&d_inv))
        };
        let a = eval_ratfn(&self.a)?;
        let b = eval_ratfn(&self.b)?;
        Ok(a + b.mul_ref(&GScalar::from_real(r_val.clone())))
    }
}

impl fmt::Display for RadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "[{}]*r", self.b);
        }
        write!(f, "{} + [{}]*r", self.a, self.b)
    }
}

impl fmt::Debug for RadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_squared_rewrites_to_s() {
        let r = RadExt::radius(3);
        let r2 = r.mul(&r);
        assert!(r2.is_rational());
        assert_eq!(r2.a.as_poly(), Some(&radius_squared(3)));
    }

    #[test]
    fn inverse_of_r() {
        // 1/r = r/s
        let r = RadExt::radius(3);
        let rinv = r.inv().unwrap();
        assert!(r.mul(&rinv).eq_semantic(&RadExt::one(3)));
        assert!(rinv.a.is_zero());
    }

    #[test]
    fn inverse_of_r_plus_x() {
        // 1/(r+x3) in d=3: conjugate trick gives (r-x3)/(s-x3^2).
        let dim = 3;
        let x3 = RadExt::var(dim, var::x(2));
        let q = RadExt::radius(dim).add(&x3);
        let qinv = q.inv().unwrap();
        assert!(q.mul(&qinv).eq_semantic(&RadExt::one(dim)));
    }

    #[test]
    fn one_dimensional_r_is_zero_divisor() {
        // d=1: r-x1 has vanishing norm.
        let q = RadExt::radius(1).sub(&RadExt::var(1, var::x(0)));
        assert!(matches!(q.inv(), Err(AlgebraError::ZeroDivisor(_))));
    }

    #[test]
    fn chain_rule_for_radius() {
        // d/dx1 (1/r) = -x1/r^3 = -x1*r/s^2
        let dim = 3;
        let rinv = RadExt::radius(dim).inv().unwrap();
        let d = rinv.diff(var::x(0));
        let s = RatFn::from_poly(radius_squared(dim));
        let s_inv = s.inv().unwrap();
        let expect_b = RatFn::from_poly(MultiPoly::var(var::x(0)))
            .neg()
            .mul(&s_inv)
            .mul(&s_inv);
        assert!(d.a.is_zero());
        assert!(d.b.eq_semantic(&expect_b));
    }
}
