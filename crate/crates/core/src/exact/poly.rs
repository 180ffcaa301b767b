//! Multivariate polynomials over the Gaussian rationals.
//!
//! Variables live in a fixed 11-slot alphabet: the coordinates `x1..x6`
//! (at most six spatial dimensions are ever instantiated), the deformation
//! parameter `hb`, the model couplings `c0, c1, c2`, and the oscillator
//! frequency `om`. A monomial packs its total degree and the 11 exponents
//! into a single `u128` so that the natural integer order on the packing
//! *is* graded lexicographic order — map iteration and leading-term access
//! come out canonical for free.

use super::scalar::GScalar;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Number of variable slots.
pub const NVARS: usize = 11;

/// Variable indices into the packed exponent vector.
pub mod var {
    /// Coordinate `x_{i+1}`, valid for `i` in `0..6`.
    pub const fn x(i: usize) -> usize {
        assert!(i < 6);
        i
    }
    pub const HBAR: usize = 6;
    pub const C0: usize = 7;
    pub const C1: usize = 8;
    pub const C2: usize = 9;
    pub const OMEGA: usize = 10;
}

pub const VAR_NAMES: [&str; NVARS] = [
    "x1", "x2", "x3", "x4", "x5", "x6", "hb", "c0", "c1", "c2", "om",
];

/// Any single exponent above this aborts: the packing stays carry-free
/// below 128 per byte, and no legitimate computation in this crate gets
/// anywhere near it.
pub const MAX_EXPONENT: u8 = 120;

/// Packed monomial. Byte layout from the most significant byte down:
/// `[total degree][x1][x2][x3][x4][x5][x6][hb][c0][c1][c2][om][0;4]`.
///
/// `Ord` on the underlying `u128` is graded-lex with `x1 > x2 > … > om`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

const fn shift_for(slot: usize) -> u32 {
    // deg occupies byte 15; variable slot k occupies byte 14-k.
    8 * (14 - slot as u32)
}

const DEG_SHIFT: u32 = 8 * 15;

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u8; NVARS]) -> Self {
        let mut packed: u128 = 0;
        let mut deg: u32 = 0;
        for (slot, &e) in exps.iter().enumerate() {
            assert!(e <= MAX_EXPONENT, "monomial exponent overflow");
            deg += e as u32;
            packed |= (e as u128) << shift_for(slot);
        }
        assert!(deg <= MAX_EXPONENT as u32, "monomial degree overflow");
        Monomial(packed | (deg as u128) << DEG_SHIFT)
    }

    /// The monomial `v^k`.
    pub fn var_pow(slot: usize, k: u8) -> Self {
        let mut exps = [0u8; NVARS];
        exps[slot] = k;
        Self::from_exponents(&exps)
    }

    pub fn exponent(&self, slot: usize) -> u8 {
        (self.0 >> shift_for(slot)) as u8
    }

    pub fn degree(&self) -> u8 {
        (self.0 >> DEG_SHIFT) as u8
    }

    pub fn exponents(&self) -> [u8; NVARS] {
        std::array::from_fn(|slot| self.exponent(slot))
    }

    /// Product of monomials = per-slot exponent sum. Panics past
    /// [`MAX_EXPONENT`]; resource caps at the operator layer keep honest
    /// computations far below it.
    pub fn mul(self, other: Monomial) -> Monomial {
        let sum = self.0 + other.0;
        let m = Monomial(sum);
        assert!(
            m.degree() <= MAX_EXPONENT,
            "monomial degree overflow: raise caps or reduce the problem"
        );
        m
    }

    /// Exact division: `self / other` if every exponent of `other` fits.
    pub fn checked_div(self, other: Monomial) -> Option<Monomial> {
        // All bytes of `other` must be <= the corresponding byte of `self`;
        // if so, plain subtraction is borrow-free and correct.
        for slot in 0..NVARS {
            if other.exponent(slot) > self.exponent(slot) {
                return None;
            }
        }
        Some(Monomial(self.0 - other.0))
    }

    /// Componentwise divisibility test.
    pub fn divides(self, other: Monomial) -> bool {
        other.checked_div(self).is_some()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for slot in 0..NVARS {
            let e = self.exponent(slot);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", VAR_NAMES[slot])?;
            } else {
                write!(f, "{}^{}", VAR_NAMES[slot], e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomial in canonical form: graded-lex-sorted map with no zero
/// coefficients. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, GScalar>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GScalar) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::ONE, c);
        }
        p
    }

    pub fn one() -> Self {
        Self::constant(GScalar::one())
    }

    pub fn var(slot: usize) -> Self {
        Self::from_term(Monomial::var_pow(slot, 1), GScalar::one())
    }

    pub fn var_pow(slot: usize, k: u8) -> Self {
        Self::from_term(Monomial::var_pow(slot, k), GScalar::one())
    }

    pub fn from_term(m: Monomial, c: GScalar) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GScalar)> {
        self.terms.iter()
    }

    /// Leading (graded-lex greatest) term; `None` for the zero polynomial.
    pub fn leading(&self) -> Option<(Monomial, &GScalar)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn degree(&self) -> u8 {
        self.leading().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    /// `true` iff the polynomial is a bare constant (including zero).
    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// The constant `c` if `self == c`, else `None`.
    pub fn as_constant(&self) -> Option<GScalar> {
        if self.is_zero() {
            return Some(GScalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::ONE) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add_term(&mut self, m: Monomial, c: &GScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &MultiPoly) {
        for (m, c) in &other.terms {
            self.add_term(*m, c);
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &(-c.clone()));
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &GScalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, t)| (*m, t.mul_ref(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(*mb), &ca.mul_ref(cb));
            }
        }
        out
    }

    /// Partial derivative with respect to variable slot.
    pub fn diff(&self, slot: usize) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(slot);
            if e == 0 {
                continue;
            }
            let dm = m
                .checked_div(Monomial::var_pow(slot, 1))
                .expect("exponent checked nonzero");
            out.add_term(dm, &c.mul_ref(&GScalar::from_int(e as i64)));
        }
        out
    }

    /// Exact polynomial division: `Some(q)` with `self == q * d`, or `None`
    /// if `d` does not divide exactly. Division by zero is `None`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (dm, dc) = d.leading()?;
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        // Cheap disqualifiers before committing to long division: in graded
        // lex order both the largest and smallest monomials of a product
        // factor through the corresponding monomials of the divisor.
        let (sm, _) = self.leading()?;
        if sm.checked_div(dm).is_none() {
            return None;
        }
        let s_low = *self.terms.keys().next().expect("nonzero");
        let d_low = *d.terms.keys().next().expect("nonzero");
        if s_low.checked_div(d_low).is_none() {
            return None;
        }
        let dc_inv = dc.inv().expect("leading coefficient nonzero");
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(dm)?;
            let qc = rc.mul_ref(&dc_inv);
            quot.add_term(qm, &qc);
            // rem -= (qc * qm) * d
            let neg_qc = -qc;
            for (m, c) in &d.terms {
                rem.add_term(qm.mul(*m), &neg_qc.mul_ref(c));
            }
        }
        Some(quot)
    }

    /// Divide through by the leading coefficient; returns `(monic, lead)`.
    /// Zero maps to `(zero, 1)`.
    pub fn monic(&self) -> (MultiPoly, GScalar) {
        match self.leading() {
            None => (MultiPoly::zero(), GScalar::one()),
            Some((_, lc)) => {
                let lc = lc.clone();
                let inv = lc.inv().expect("leading coefficient nonzero");
                (self.scale(&inv), lc)
            }
        }
    }

    /// Substitute rational values for every variable.
    pub fn eval(&self, vals: &[BigRational; NVARS]) -> GScalar {
        let mut acc = GScalar::zero();
        for (m, c) in &self.terms {
            let mut factor = BigRational::from_integer(1.into());
            for slot in 0..NVARS {
                for _ in 0..m.exponent(slot) {
                    factor *= &vals[slot];
                }
            }
            if factor.is_zero() {
                continue;
            }
            acc += &c.mul_ref(&GScalar::from_real(factor));
        }
        acc
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest terms first reads most naturally.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{c}")?;
            } else if *c == GScalar::one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
