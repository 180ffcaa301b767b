//! Polynomials in the central elements of the cubic algebra.
//!
//! Both families close with structure "constants" that are really
//! polynomials in H together with the rotational invariants (J² for the
//! Coulomb family, the two block Casimirs J₂/K₂ for the oscillator), with
//! coefficients in the parameter symbols ħ, c₀, c₁, c₂, ω. `CentralExpr`
//! is that polynomial ring: exponent vector over (H, J, K) with `MultiPoly`
//! coefficients, convertible to a concrete differential operator on demand.
//!
//! Slot J means J² for the Coulomb family and J₂ for the oscillator; slot K
//! is only populated for the oscillator.

use crate::error::Result;
use crate::exact::{var, GScalar, MultiPoly, RadExt};
use crate::models::{Model, ModelOps, ModelParams};
use crate::weyl::DiffOp;
use std::collections::BTreeMap;
use std::fmt;

/// Exponents of (H, J, K).
pub type CentralKey = [u8; 3];

#[derive(Clone, Debug, Default)]
pub struct CentralExpr {
    terms: BTreeMap<CentralKey, MultiPoly>,
}

impl CentralExpr {
    pub fn zero() -> Self {
        CentralExpr::default()
    }

    pub fn constant(p: MultiPoly) -> Self {
        Self::term([0, 0, 0], p)
    }

    pub fn term(key: CentralKey, p: MultiPoly) -> Self {
        let mut e = CentralExpr::default();
        e.add_term(key, p);
        e
    }

    pub fn h() -> Self {
        Self::term([1, 0, 0], MultiPoly::one())
    }

    pub fn j() -> Self {
        Self::term([0, 1, 0], MultiPoly::one())
    }

    pub fn k() -> Self {
        Self::term([0, 0, 1], MultiPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CentralKey, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: CentralKey, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(MultiPoly::zero);
        *entry = entry.add(&p);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &CentralExpr) -> CentralExpr {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(*k, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &CentralExpr) -> CentralExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CentralExpr {
        self.scale(&GScalar::from_int(-1))
    }

    pub fn scale(&self, c: &GScalar) -> CentralExpr {
        if c.is_zero() {
            return CentralExpr::zero();
        }
        let mut out = CentralExpr::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, p.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, q: &MultiPoly) -> CentralExpr {
        let mut out = CentralExpr::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, p.mul(q));
        }
        out
    }

    pub fn mul(&self, other: &CentralExpr) -> CentralExpr {
        let mut out = CentralExpr::zero();
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                let key = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
                out.add_term(key, pa.mul(pb));
            }
        }
        out
    }

    /// Substitute the concrete operators for the central symbols:
    /// Σ coeff · H^a ∘ J^b ∘ K^c. The symbols commute pairwise, so the
    /// composition order is a convention, not a choice.
    pub fn to_operator(&self, ops: &ModelOps) -> Result<DiffOp> {
        let dim = ops.params.n_dim as u8;
        let caps = ops.caps();
        let mut symbol: [Option<DiffOp>; 3] = [None, None, None];
        let mut out = DiffOp::zero(dim);
        for (key, coeff) in &self.terms {
            let mut term = DiffOp::from_coeff(RadExt::from_poly(dim, coeff.clone()));
            for (slot, &p) in key.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if symbol[slot].is_none() {
                    symbol[slot] = Some(match slot {
                        0 => ops.hamiltonian()?,
                        1 => ops.central_j()?,
                        _ => ops.central_k()?,
                    });
                }
                let op = symbol[slot].as_ref().expect("just filled");
                for _ in 0..p {
                    term = term.compose(op, caps)?;
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

impl fmt::Display for CentralExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["H", "J", "K"];
        let mut first = true;
        for (key, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            for (slot, &p) in key.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "·{}", names[slot])?,
                    _ => write!(f, "·{}^{}", names[slot], p)?,
                }
            }
        }
        Ok(())
    }
}

/// Structure data of the cubic bracket relations
///   [A,C] = α A² + γ{A,B} + δA + εB + ζ,
///   [B,C] = aB² − γB² ... (see `qalg`)
/// for one configuration. Rows that are identically zero in both families
/// are kept so perturbation tests can flip any of them.
pub struct Q3Coefficients {
    pub alpha: CentralExpr,
    pub gamma: CentralExpr,
    pub delta: CentralExpr,
    pub epsilon: CentralExpr,
    pub zeta: CentralExpr,
    pub a_coef: CentralExpr,
    pub d: CentralExpr,
    pub z: CentralExpr,
}

fn hbar(k: u8) -> MultiPoly {
    MultiPoly::var_pow(var::HBAR, k)
}

fn omega(k: u8) -> MultiPoly {
    MultiPoly::var_pow(var::OMEGA, k)
}

fn cs(slot: usize) -> MultiPoly {
    MultiPoly::var(slot)
}

fn int(n: i64) -> GScalar {
    GScalar::from_int(n)
}

/// The closure coefficients for a configuration.
pub fn q3_coefficients(params: &ModelParams) -> Q3Coefficients {
    let nn = params.n_dim as i64;
    match params.model {
        Model::KeplerCoulomb => {
            let gamma = CentralExpr::constant(hbar(2).scale(&int(2)));
            let epsilon =
                CentralExpr::constant(hbar(4).scale(&int((nn - 1) * (nn - 3))));
            // ζ = −4(c₁−c₂)ħ²c₀
            let zeta = CentralExpr::constant(
                cs(var::C1)
                    .sub(&cs(var::C2))
                    .mul(&hbar(2))
                    .mul(&cs(var::C0))
                    .scale(&int(-4)),
            );
            // d = 8ħ²H
            let d = CentralExpr::term([1, 0, 0], hbar(2).scale(&int(8)));
            // z = −4ħ²J²H + (N−1)²ħ⁴H − 8ħ²(c₁+c₂)H + 2ħ²c₀²
            let mut z = CentralExpr::term([1, 1, 0], hbar(2).scale(&int(-4)));
            z.add_term(
                [1, 0, 0],
                hbar(4)
                    .scale(&int((nn - 1) * (nn - 1)))
                    .sub(&cs(var::C1).add(&cs(var::C2)).mul(&hbar(2)).scale(&int(8))),
            );
            z.add_term(
                [0, 0, 0],
                MultiPoly::var_pow(var::C0, 2).mul(&hbar(2)).scale(&int(2)),
            );
            Q3Coefficients {
                alpha: CentralExpr::zero(),
                gamma,
                delta: CentralExpr::zero(),
                epsilon,
                zeta,
                a_coef: CentralExpr::zero(),
                d,
                z,
            }
        }
        Model::SingularOscillator => {
            let n = params.split as i64;
            let gamma = CentralExpr::constant(hbar(2).scale(&int(2)));
            // ε = ¼ħ⁴N(N−4)
            let epsilon = CentralExpr::constant(
                hbar(4).scale(&GScalar::from_ratio(nn * (nn - 4), 4)),
            );
            // ζ = −ħ²J₂H + ħ²K₂H − ¼ħ²(8c₁ − 8c₂ − (N−4)(N−2n)ħ²)H
            let mut zeta = CentralExpr::term([1, 1, 0], hbar(2).scale(&int(-1)));
            zeta.add_term([1, 0, 1], hbar(2));
            zeta.add_term(
                [1, 0, 0],
                cs(var::C1)
                    .sub(&cs(var::C2))
                    .mul(&hbar(2))
                    .scale(&int(-2))
                    .add(
                        &hbar(4)
                            .scale(&GScalar::from_ratio((nn - 4) * (nn - 2 * n), 4)),
                    ),
            );
            // d = −16ħ²ω²
            let d = CentralExpr::constant(hbar(2).mul(&omega(2)).scale(&int(-16)));
            // z = 2ħ²H² + 4ħ²ω²J₂ + 4ħ²ω²K₂ + 8ħ²ω²(c₁+c₂−¼ħ²n(N−n))
            let mut z = CentralExpr::term([2, 0, 0], hbar(2).scale(&int(2)));
            let h2o2 = hbar(2).mul(&omega(2));
            z.add_term([0, 1, 0], h2o2.scale(&int(4)));
            z.add_term([0, 0, 1], h2o2.scale(&int(4)));
            z.add_term(
                [0, 0, 0],
                cs(var::C1)
                    .add(&cs(var::C2))
                    .mul(&h2o2)
                    .scale(&int(8))
                    .sub(&hbar(4).mul(&omega(2)).scale(&int(2 * n * (nn - n)))),
            );
            Q3Coefficients {
                alpha: CentralExpr::zero(),
                gamma,
                delta: CentralExpr::zero(),
                epsilon,
                zeta,
                a_coef: CentralExpr::zero(),
                d,
                z,
            }
        }
    }
}

/// The Casimir rewritten purely in central elements — the collapse target
/// for the generator-form Casimir.
pub fn casimir_central_form(params: &ModelParams) -> CentralExpr {
    let nn = params.n_dim as i64;
    match params.model {
        Model::KeplerCoulomb => {
            // Kc = 2(N−3)(N−1)ħ⁴HJ² − 8ħ²(c₁−c₂)²H
            //      + 4(N−3)(N−1)(c₁+c₂)ħ⁴H − (N−3)(N−1)²ħ⁶H
            //      + 4ħ²c₀²J² + 8ħ²(c₁+c₂)c₀² − 2(N−3)ħ⁴c₀²
            let c0sq = MultiPoly::var_pow(var::C0, 2);
            let cdiff = cs(var::C1).sub(&cs(var::C2));
            let csum = cs(var::C1).add(&cs(var::C2));
            let mut k = CentralExpr::term(
                [1, 1, 0],
                hbar(4).scale(&int(2 * (nn - 3) * (nn - 1))),
            );
            k.add_term(
                [1, 0, 0],
                cdiff
                    .mul(&cdiff)
                    .mul(&hbar(2))
                    .scale(&int(-8))
                    .add(&csum.mul(&hbar(4)).scale(&int(4 * (nn - 3) * (nn - 1))))
                    .sub(&hbar(6).scale(&int((nn - 3) * (nn - 1) * (nn - 1)))),
            );
            k.add_term([0, 1, 0], c0sq.mul(&hbar(2)).scale(&int(4)));
            k.add_term(
                [0, 0, 0],
                csum.mul(&c0sq)
                    .mul(&hbar(2))
                    .scale(&int(8))
                    .sub(&c0sq.mul(&hbar(4)).scale(&int(2 * (nn - 3)))),
            );
            k
        }
        Model::SingularOscillator => {
            let n = params.split as i64;
            let cdiff = cs(var::C1).sub(&cs(var::C2));
            let h2o2 = hbar(2).mul(&omega(2));
            // Kc = 2ħ²J₂H² + 2ħ²K₂H²
            //      + ¼ħ²[16c₁+16c₂ − (4(N−4) − (N−2n)²)ħ²]H²
            //      + ħ²ω²J₂² + ħ²ω²K₂² − 2ħ²ω²J₂K₂
            //      + 4ħ²ω²{c₁−c₂−¼(N−4)(N−n)ħ²}J₂
            //      − 4ħ²ω²{c₁−c₂+¼n(N−4)ħ²}K₂
            //      + 4ħ²ω²[(c₁−c₂)² − ½(N−n)(N−4)ħ²c₁ − ½n(N−4)ħ²c₂
            //               + ¼n(N−n)(N−4)ħ⁴]
            let mut k = CentralExpr::term([2, 1, 0], hbar(2).scale(&int(2)));
            k.add_term([2, 0, 1], hbar(2).scale(&int(2)));
            k.add_term(
                [2, 0, 0],
                cs(var::C1)
                    .add(&cs(var::C2))
                    .mul(&hbar(2))
                    .scale(&int(4))
                    .sub(&hbar(4).scale(&GScalar::from_ratio(
                        4 * (nn - 4) - (nn - 2 * n) * (nn - 2 * n),
                        4,
                    ))),
            );
            k.add_term([0, 2, 0], h2o2.clone());
            k.add_term([0, 0, 2], h2o2.clone());
            k.add_term([0, 1, 1], h2o2.scale(&int(-2)));
            k.add_term(
                [0, 1, 0],
                cdiff
                    .sub(&hbar(2).scale(&GScalar::from_ratio((nn - 4) * (nn - n), 4)))
                    .mul(&h2o2)
                    .scale(&int(4)),
            );
            k.add_term(
                [0, 0, 1],
                cdiff
                    .add(&hbar(2).scale(&GScalar::from_ratio(n * (nn - 4), 4)))
                    .mul(&h2o2)
                    .scale(&int(-4)),
            );
            k.add_term(
                [0, 0, 0],
                cdiff
                    .mul(&cdiff)
                    .sub(&cs(var::C1)
                        .mul(&hbar(2))
                        .scale(&GScalar::from_ratio((nn - n) * (nn - 4), 2)))
                    .sub(&cs(var::C2)
                        .mul(&hbar(2))
                        .scale(&GScalar::from_ratio(n * (nn - 4), 2)))
                    .add(&hbar(4).scale(&GScalar::from_ratio(n * (nn - n) * (nn - 4), 4)))
                    .mul(&h2o2)
                    .scale(&int(4)),
            );
            k
        }
    }
}
