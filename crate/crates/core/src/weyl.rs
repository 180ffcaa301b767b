//! Linear differential operators with coefficients in the radical extension,
//! kept in normal order: every operator is a sum `Σ_α c_α(x, r) ∂^α` with
//! all derivatives moved to the right.
//!
//! Composition uses the generalized Leibniz rule
//! `∂^α ∘ g = Σ_{γ ≤ α} binom(α, γ) (∂^{α−γ} g) ∂^γ`,
//! which is the only rewrite needed to restore normal order. Products of
//! large operators are embarrassingly parallel over the left factor's terms.

use crate::error::{AlgebraError, Result};
use crate::exact::scalar::GScalar;
use crate::exact::RadExt;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

/// Maximum spatial derivative slots (matches the coordinate alphabet).
pub const NDERIV: usize = 6;

/// Packed multi-index `∂₁^{k₁}…∂₆^{k₆}`: byte layout from the top,
/// `[total][k1][k2][k3][k4][k5][k6][0]`, so `Ord` is graded-lex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Deriv(u64);

const fn dshift(slot: usize) -> u32 {
    8 * (6 - slot as u32)
}
const DTOT_SHIFT: u32 = 56;

impl Deriv {
    pub const NONE: Deriv = Deriv(0);

    pub fn from_orders(orders: &[u8; NDERIV]) -> Self {
        let mut packed: u64 = 0;
        let mut tot: u32 = 0;
        for (slot, &k) in orders.iter().enumerate() {
            assert!(k < 120, "derivative order overflow");
            tot += k as u32;
            packed |= (k as u64) << dshift(slot);
        }
        assert!(tot < 120, "derivative order overflow");
        Deriv(packed | (tot as u64) << DTOT_SHIFT)
    }

    /// Single `∂_i` (slot is 0-based).
    pub fn single(slot: usize) -> Self {
        let mut o = [0u8; NDERIV];
        o[slot] = 1;
        Self::from_orders(&o)
    }

    pub fn order(self, slot: usize) -> u8 {
        (self.0 >> dshift(slot)) as u8
    }

    pub fn total(self) -> u8 {
        (self.0 >> DTOT_SHIFT) as u8
    }

    pub fn orders(self) -> [u8; NDERIV] {
        std::array::from_fn(|slot| self.order(slot))
    }

    /// Concatenation of derivatives: exponents add.
    pub fn mul(self, other: Deriv) -> Deriv {
        let d = Deriv(self.0 + other.0);
        assert!(d.total() < 120, "derivative order overflow");
        d
    }

    pub fn checked_sub(self, other: Deriv) -> Option<Deriv> {
        for slot in 0..NDERIV {
            if other.order(slot) > self.order(slot) {
                return None;
            }
        }
        Some(Deriv(self.0 - other.0))
    }

    /// All multi-indices `γ ≤ self` (componentwise), in a deterministic order.
    pub fn sub_indices(self) -> Vec<Deriv> {
        let mut out = vec![Deriv::NONE];
        for slot in 0..NDERIV {
            let k = self.order(slot);
            if k == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for base in &out {
                for j in 0..=k {
                    let mut o = base.orders();
                    o[slot] = j;
                    next.push(Deriv::from_orders(&o));
                }
            }
            out = next;
        }
        out
    }

    /// Product of componentwise binomial coefficients `Π binom(selfᵢ, lowerᵢ)`.
    pub fn binom(self, lower: Deriv) -> u64 {
        let mut b: u64 = 1;
        for slot in 0..NDERIV {
            b *= num_integer::binomial(self.order(slot) as u64, lower.order(slot) as u64);
        }
        b
    }
}

impl fmt::Display for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for slot in 0..NDERIV {
            let k = self.order(slot);
            if k == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "d{}", slot + 1)?;
            } else {
                write!(f, "d{}^{}", slot + 1, k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Resource guards for operator arithmetic. Exceeding either aborts the
/// computation with [`AlgebraError::CapExceeded`] instead of thrashing.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Maximum number of normal-ordered terms in one operator.
    pub max_op_terms: usize,
    /// Maximum polynomial terms in a single coefficient (numerator plus
    /// denominator factors).
    pub max_coeff_terms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_op_terms: 200_000,
            max_coeff_terms: 500_000,
        }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Caps {
            max_op_terms: usize::MAX,
            max_coeff_terms: usize::MAX,
        }
    }
}

/// A differential operator in normal order. The map never stores a
/// structurally zero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    pub dim: u8,
    terms: BTreeMap<Deriv, RadExt>,
}

impl DiffOp {
    pub fn zero(dim: u8) -> Self {
        DiffOp {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: u8) -> Self {
        Self::from_coeff(RadExt::one(dim))
    }

    /// Multiplication operator by a function.
    pub fn from_coeff(c: RadExt) -> Self {
        let mut op = Self::zero(c.dim);
        op.add_term(Deriv::NONE, c);
        op
    }

    pub fn constant(dim: u8, c: GScalar) -> Self {
        Self::from_coeff(RadExt::constant(dim, c))
    }

    /// Bare partial derivative `∂_i` (0-based slot).
    pub fn partial(dim: u8, slot: usize) -> Self {
        assert!(slot < dim as usize, "derivative outside spatial dimension");
        let mut op = Self::zero(dim);
        op.add_term(Deriv::single(slot), RadExt::one(dim));
        op
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Summed coefficient sizes — the quantity guarded by `max_coeff_terms`.
    pub fn coeff_term_count(&self) -> usize {
        self.terms.values().map(RadExt::term_count).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Deriv, &RadExt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: Deriv) -> Option<&RadExt> {
        self.terms.get(&d)
    }

    /// Highest total derivative order present.
    pub fn order(&self) -> u8 {
        self.terms.keys().map(|d| d.total()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, d: Deriv, c: RadExt) {
        assert_eq!(c.dim, self.dim, "mixed spatial dimensions");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        assert_eq!(self.dim, other.dim, "mixed spatial dimensions");
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(*d, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            dim: self.dim,
            terms: self.terms.iter().map(|(d, c)| (*d, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &GScalar) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero(self.dim);
        }
        DiffOp {
            dim: self.dim,
            terms: self.terms.iter().map(|(d, k)| (*d, k.scale(c))).collect(),
        }
    }

    pub fn scale_coeff(&self, c: &RadExt) -> DiffOp {
        let mut out = DiffOp::zero(self.dim);
        for (d, k) in &self.terms {
            out.add_term(*d, c.mul(k));
        }
        out
    }

    /// Normal-ordered product `self ∘ other`.
    pub fn compose(&self, other: &DiffOp, caps: &Caps) -> Result<DiffOp> {
        assert_eq!(self.dim, other.dim, "mixed spatial dimensions");
        if self.is_zero() || other.is_zero() {
            return Ok(DiffOp::zero(self.dim));
        }

        // Componentwise envelope of left derivative orders bounds every
        // ∂^{α−γ} g we will ever need of the right coefficients.
        let mut env = [0u8; NDERIV];
        for d in self.terms.keys() {
            for (slot, e) in env.iter_mut().enumerate() {
                *e = (*e).max(d.order(slot));
            }
        }
        let env = Deriv::from_orders(&env);

        // Precompute the derivative lattice of each right coefficient, in
        // parallel: derivs[δ] = ∂^δ g for all δ ≤ env, built by walking the
        // lattice so each entry is one first-order diff away from a parent.
        let right: Vec<(Deriv, BTreeMap<Deriv, RadExt>)> = other
            .terms
            .par_iter()
            .map(|(beta, g)| {
                let mut cache: BTreeMap<Deriv, RadExt> = BTreeMap::new();
                cache.insert(Deriv::NONE, g.clone());
                for delta in env.sub_indices() {
                    if cache.contains_key(&delta) {
                        continue;
                    }
                    let slot = (0..NDERIV)
                        .find(|&s| delta.order(s) > 0)
                        .expect("nonzero index has a nonzero slot");
                    let parent = delta
                        .checked_sub(Deriv::single(slot))
                        .expect("slot order is nonzero");
                    let val = cache
                        .get(&parent)
                        .expect("lattice enumeration visits parents first")
                        .diff(slot);
                    cache.insert(delta, val);
                }
                (*beta, cache)
            })
            .collect();

        let lefts: Vec<(Deriv, &RadExt)> =
            self.terms.iter().map(|(d, c)| (*d, c)).collect();

        let merge = |mut a: BTreeMap<Deriv, RadExt>,
                     b: BTreeMap<Deriv, RadExt>|
         -> Result<BTreeMap<Deriv, RadExt>> {
            for (d, c) in b {
                match a.entry(d) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get().add(&c);
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                }
            }
            if a.len() > caps.max_op_terms {
                return Err(AlgebraError::CapExceeded {
                    what: "operator terms",
                    got: a.len(),
                    cap: caps.max_op_terms,
                });
            }
            Ok(a)
        };

        let terms = lefts
            .par_iter()
            .try_fold(BTreeMap::new, |acc, (alpha, f)| {
                let mut local: BTreeMap<Deriv, RadExt> = BTreeMap::new();
                for (beta, cache) in &right {
                    for gamma in alpha.sub_indices() {
                        let delta = alpha
                            .checked_sub(gamma)
                            .expect("gamma ranges over sub-indices");
                        let dg = cache.get(&delta).expect("cache covers envelope");
                        if dg.is_zero() {
                            continue;
                        }
                        let mut c = f.mul(dg);
                        let b = alpha.binom(gamma);
                        if b != 1 {
                            c = c.scale(&GScalar::from_int(b as i64));
                        }
                        if c.is_zero() {
                            continue;
                        }
                        if c.term_count() > caps.max_coeff_terms {
                            return Err(AlgebraError::CapExceeded {
                                what: "coefficient terms",
                                got: c.term_count(),
                                cap: caps.max_coeff_terms,
                            });
                        }
                        let key = gamma.mul(*beta);
                        match local.entry(key) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(c);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                let sum = e.get().add(&c);
                                if sum.is_zero() {
                                    e.remove();
                                } else {
                                    *e.get_mut() = sum;
                                }
                            }
                        }
                    }
                }
                merge(acc, local)
            })
            .try_reduce(BTreeMap::new, merge)?;

        Ok(DiffOp {
            dim: self.dim,
            terms,
        })
    }

    /// Commutator `[self, other]`.
    pub fn comm(&self, other: &DiffOp, caps: &Caps) -> Result<DiffOp> {
        Ok(self.compose(other, caps)?.sub(&other.compose(self, caps)?))
    }

    /// Anticommutator `{self, other}`.
    pub fn acomm(&self, other: &DiffOp, caps: &Caps) -> Result<DiffOp> {
        Ok(self.compose(other, caps)?.add(&other.compose(self, caps)?))
    }

    pub fn pow(&self, k: u32, caps: &Caps) -> Result<DiffOp> {
        let mut out = DiffOp::identity(self.dim);
        for _ in 0..k {
            out = out.compose(self, caps)?;
        }
        Ok(out)
    }

    /// Apply the operator to a function of `(x, r)`.
    pub fn apply(&self, g: &RadExt) -> RadExt {
        let mut out = RadExt::zero(self.dim);
        for (alpha, f) in &self.terms {
            let mut dg = g.clone();
            for slot in 0..NDERIV {
                for _ in 0..alpha.order(slot) {
                    dg = dg.diff(slot);
                }
            }
            out = out.add(&f.mul(&dg));
        }
        out
    }

    /// Semantic equality: identical derivative support with coefficients
    /// equal as rational functions.
    pub fn eq_semantic(&self, other: &DiffOp) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let keys: std::collections::BTreeSet<_> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        keys.into_iter().all(|d| {
            match (self.terms.get(&d), other.terms.get(&d)) {
                (None, None) => true,
                (Some(a), None) | (None, Some(a)) => a.is_zero(),
                (Some(a), Some(b)) => a.eq_semantic(b),
            }
        })
    }

    /// Residual size summary used in reports: `(terms, coeff_terms)`.
    pub fn size(&self) -> (usize, usize) {
        (self.num_terms(), self.coeff_term_count())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "  +  ")?;
            }
            if d.total() == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·{d}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp[{} terms]", self.terms.len())
    }
}
