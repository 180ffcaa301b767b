//! Rational functions `num / Π fᵢ^kᵢ` with the denominator kept as a
//! multiset of *monic* polynomial factors.
//!
//! The factored form is what makes equality decidable cheaply in practice:
//! denominators only ever arise from explicit inversions (`r`, `r ± xN`,
//! coordinate-block norms …), so keeping them as the original irreducible
//! factors — and reducing by exact trial division after every sum — keeps
//! expressions in a canonical form without a general multivariate gcd.

use super::poly::MultiPoly;
use super::scalar::GScalar;
use std::collections::BTreeMap;
use std::fmt;

/// Denominator factors need a total order to live in a `BTreeMap`; graded-lex
/// comparison of the term lists gives a deterministic one.
#[derive(Clone, PartialEq, Eq)]
pub struct FactorKey(pub MultiPoly);

impl Ord for FactorKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a: Vec<_> = self.0.terms().collect();
        let b: Vec<_> = other.0.terms().collect();
        // Compare term lists highest-first: (monomial, then coefficient by
        // component value) — arbitrary but total and canonical.
        let key = |(m, c): &(&super::poly::Monomial, &GScalar)| (**m, c.re().clone(), c.im().clone());
        a.iter()
            .rev()
            .map(key)
            .cmp(b.iter().rev().map(key))
            .then(a.len().cmp(&b.len()))
    }
}

impl PartialOrd for FactorKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A quotient of multivariate polynomials in reduced factored form.
///
/// Invariants: every factor is monic, non-constant, with multiplicity ≥ 1;
/// no factor divides the numerator; zero numerator ⇒ empty denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: MultiPoly,
    den: BTreeMap<FactorKey, u32>,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: MultiPoly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        RatFn {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn constant(c: GScalar) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&MultiPoly, u32)> {
        self.den.iter().map(|(k, &m)| (&k.0, m))
    }

    /// Denominator expanded to a single polynomial.
    pub fn denominator(&self) -> MultiPoly {
        let mut d = MultiPoly::one();
        for (f, mult) in self.denominator_factors() {
            for _ in 0..mult {
                d = d.mul(f);
            }
        }
        d
    }

    /// The polynomial `p` if `self` is polynomial, else `None`.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<GScalar> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    /// Total term count (numerator plus factors) — the size metric capped by
    /// the operator layer.
    pub fn term_count(&self) -> usize {
        self.num.num_terms()
            + self
                .den
                .keys()
                .map(|f| f.0.num_terms())
                .sum::<usize>()
    }

    /// Cancel denominator factors that divide the numerator exactly, and
    /// normalize zero.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<FactorKey> = self.den.keys().cloned().collect();
        for key in factors {
            while let Some(mult) = self.den.get(&key).copied() {
                match self.num.div_exact(&key.0) {
                    Some(q) => {
                        self.num = q;
                        if mult == 1 {
                            self.den.remove(&key);
                        } else {
                            self.den.insert(key.clone(), mult - 1);
                        }
                    }
                    None => break,
                }
                if !self.den.contains_key(&key) {
                    break;
                }
            }
        }
    }

    fn push_factor(&mut self, f: &MultiPoly, mult: u32) {
        debug_assert!(!f.is_constant(), "constant denominator factor");
        *self.den.entry(FactorKey(f.clone())).or_insert(0) += mult;
    }

    /// 1 / (monic factor)^mult, with `lead` the discarded leading coefficient.
    fn from_inverse_factor(f: MultiPoly, mult: u32) -> Self {
        debug_assert!(!f.is_constant());
        let (monic, lead) = f.monic();
        let lead_inv = lead.inv().expect("nonzero leading coefficient");
        let mut scale = GScalar::one();
        for _ in 0..mult {
            scale = scale.mul_ref(&lead_inv);
        }
        let mut out = RatFn::from_poly(MultiPoly::constant(scale));
        out.push_factor(&monic, mult);
        out
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Common denominator = factorwise max multiplicity.
        let mut den: BTreeMap<FactorKey, u32> = self.den.clone();
        for (k, &m) in &other.den {
            let e = den.entry(k.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |num: &MultiPoly, own: &BTreeMap<FactorKey, u32>| {
            let mut p = num.clone();
            for (k, &m) in &den {
                let have = own.get(k).copied().unwrap_or(0);
                for _ in have..m {
                    p = p.mul(&k.0);
                }
            }
            p
        };
        let num = lift(&self.num, &self.den).add(&lift(&other.num, &other.den));
        let mut out = RatFn { num, den };
        out.reduce();
        out
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &GScalar) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return RatFn::zero();
        }
        let mut out = RatFn {
            num: self.num.mul(&other.num),
            den: self.den.clone(),
        };
        for (k, &m) in &other.den {
            *out.den.entry(k.clone()).or_insert(0) += m;
        }
        out.reduce();
        out
    }

    /// Multiplicative inverse. Fails on zero. The numerator becomes a new
    /// denominator factor (made monic); existing factors move up.
    pub fn inv(&self) -> Option<RatFn> {
        if self.is_zero() {
            return None;
        }
        let mut out = RatFn::from_poly(self.denominator());
        if let Some(c) = self.num.as_constant() {
            // Purely scalar numerator: no new factor.
            out = out.scale(&c.inv().expect("nonzero"));
        } else {
            out = out.mul(&RatFn::from_inverse_factor(self.num.clone(), 1));
        }
        Some(out)
    }

    /// Partial derivative via the quotient rule, factor by factor:
    /// d(n/Πfᵏ) = (dn)/Πfᵏ − Σ k·n·(df)/ (f·Πfᵏ).
    pub fn diff(&self, slot: usize) -> RatFn {
        let mut out = RatFn {
            num: self.num.diff(slot),
            den: self.den.clone(),
        };
        out.reduce();
        for (k, &m) in &self.den {
            let df = k.0.diff(slot);
            if df.is_zero() {
                continue;
            }
            let mut term = RatFn {
                num: self
                    .num
                    .mul(&df)
                    .scale(&GScalar::from_int(-(m as i64))),
                den: self.den.clone(),
            };
            term.push_factor(&k.0, 1);
            term.reduce();
            out = out.add(&term);
        }
        out
    }

    /// Exact equality as rational functions (invariants make this structural).
    pub fn eq_semantic(&self, other: &RatFn) -> bool {
        // Cross-multiplied comparison, robust even if reduction ever missed
        // a common factor: n1·d2 == n2·d1.
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.denominator()) == other.num.mul(&self.denominator())
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / [", self.num)?;
        for (i, (p, m)) in self.denominator_factors().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if m == 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})^{m}")?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
