//! The two model families and their symmetry operators.
//!
//! Everything here is built exactly, over the symbolic parameters ħ, c₀,
//! c₁, c₂, ω, so that commutator identities checked downstream hold as
//! polynomial identities — for every admissible parameter value at once.
//!
//! Conventions: pᵢ = −iħ∂ᵢ, Lᵢⱼ = xᵢpⱼ − xⱼpᵢ, r = √(x₁²+⋯+x_N²).

use crate::error::{AlgebraError, Result};
use crate::exact::{var, GScalar, MultiPoly, RadExt, RatFn};
use crate::weyl::{Caps, DiffOp};
use serde::{Deserialize, Serialize};

/// Which family a configuration belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Coulomb potential plus two angular barriers c₁/(r(r+x_N)) and
    /// c₂/(r(r−x_N)).
    KeplerCoulomb,
    /// Isotropic oscillator plus block barriers c₁/s₁ and c₂/s₂ where the
    /// coordinates split as (x₁..x_n | x_{n+1}..x_N).
    SingularOscillator,
}

/// A validated model configuration: family, ambient dimension, and (for the
/// oscillator) the block split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelParams {
    pub model: Model,
    pub n_dim: usize,
    /// Size n of the first block; only meaningful for the oscillator.
    pub split: usize,
}

impl ModelParams {
    pub fn kepler_coulomb(n_dim: usize) -> Result<Self> {
        if !(3..=6).contains(&n_dim) {
            return Err(AlgebraError::InvalidInput(format!(
                "Coulomb model needs dimension between 3 and 6, got {n_dim}"
            )));
        }
        Ok(ModelParams {
            model: Model::KeplerCoulomb,
            n_dim,
            split: 0,
        })
    }

    pub fn singular_oscillator(n_dim: usize, split: usize) -> Result<Self> {
        if !(2..=6).contains(&n_dim) {
            return Err(AlgebraError::InvalidInput(format!(
                "oscillator model needs dimension between 2 and 6, got {n_dim}"
            )));
        }
        if split == 0 || split >= n_dim {
            return Err(AlgebraError::InvalidInput(format!(
                "block split must satisfy 1 <= n <= {}, got {split}",
                n_dim - 1
            )));
        }
        Ok(ModelParams {
            model: Model::SingularOscillator,
            n_dim,
            split,
        })
    }
}

fn hbar_c() -> MultiPoly {
    MultiPoly::var_pow(var::HBAR, 1)
}

fn sym(dim: usize, v: usize) -> RadExt {
    RadExt::from_poly(dim as u8, MultiPoly::var(v))
}

/// pⱼ = −iħ∂ⱼ (0-based coordinate index).
pub fn momentum(j: usize, dim: usize) -> DiffOp {
    assert!(j < dim);
    DiffOp::partial(dim as u8, j).scale_coeff(&RadExt::from_poly(
        dim as u8,
        hbar_c().scale(&GScalar::imag_ratio(-1, 1)),
    ))
}

/// Angular momentum Lᵢⱼ = xᵢpⱼ − xⱼpᵢ for i < j (0-based).
pub fn angular_momentum(i: usize, j: usize, dim: usize) -> DiffOp {
    assert!(i < j && j < dim);
    let xi = RadExt::var(dim as u8, i);
    let xj = RadExt::var(dim as u8, j);
    momentum(j, dim)
        .scale_coeff(&xi)
        .sub(&momentum(i, dim).scale_coeff(&xj))
}

/// ½ Σ pᵢ² = −ħ²/2 Δ.
pub fn half_p_squared(dim: usize) -> DiffOp {
    let mut op = DiffOp::zero(dim as u8);
    let half = GScalar::from_ratio(1, 2);
    for j in 0..dim {
        let pj = momentum(j, dim);
        let pj2 = pj
            .compose(&pj, &Caps::unlimited())
            .expect("second-order term stays tiny");
        op = op.add(&pj2.scale(&half));
    }
    op
}

/// 1/(r(r + sign·x_N)) as an exact coefficient, sign ∈ {+1, −1}.
fn chi(dim: usize, sign: i64) -> RadExt {
    let xn = RadExt::var(dim as u8, dim - 1);
    let denom = RadExt::radius(dim as u8)
        .mul(&RadExt::radius(dim as u8).add(&xn.scale(&GScalar::from_int(sign))));
    denom.inv().expect("r(r±x_N) is not a zero divisor for N >= 2")
}

/// Builders for one validated configuration. Operators are rebuilt on each
/// call; callers cache what they reuse.
pub struct ModelOps {
    pub params: ModelParams,
    caps: Caps,
}

impl ModelOps {
    pub fn new(params: ModelParams) -> Self {
        ModelOps {
            params,
            caps: Caps::default(),
        }
    }

    pub fn with_caps(params: ModelParams, caps: Caps) -> Self {
        ModelOps { params, caps }
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    fn dim(&self) -> usize {
        self.params.n_dim
    }

    /// L with arbitrary index order: L(j,i) = −L(i,j).
    pub fn l_signed(&self, i: usize, j: usize) -> DiffOp {
        if i < j {
            angular_momentum(i, j, self.dim())
        } else {
            angular_momentum(j, i, self.dim()).neg()
        }
    }

    pub fn hamiltonian(&self) -> Result<DiffOp> {
        let dim = self.dim();
        match self.params.model {
            Model::KeplerCoulomb => {
                // H = ½p² − c₀/r + c₁/(r(r+x_N)) + c₂/(r(r−x_N))
                let mut h = half_p_squared(dim);
                let c0_over_r = RadExt::radius(dim as u8)
                    .inv()
                    .expect("1/r exists for N >= 2")
                    .mul(&sym(dim, var::C0));
                h = h.sub(&DiffOp::from_coeff(c0_over_r));
                h = h.add(&DiffOp::from_coeff(chi(dim, 1).mul(&sym(dim, var::C1))));
                h = h.add(&DiffOp::from_coeff(chi(dim, -1).mul(&sym(dim, var::C2))));
                Ok(h)
            }
            Model::SingularOscillator => {
                // H = ½p² + ½ω²r² + c₁/s₁ + c₂/s₂
                let mut h = half_p_squared(dim);
                let om2 = MultiPoly::var_pow(var::OMEGA, 2).scale(&GScalar::from_ratio(1, 2));
                let r2 = self.block_r2(0, dim);
                h = h.add(&DiffOp::from_coeff(RadExt::from_poly(
                    dim as u8,
                    om2.mul(&r2),
                )));
                h = h.add(&DiffOp::from_coeff(self.phi(1)));
                h = h.add(&DiffOp::from_coeff(self.phi(2)));
                Ok(h)
            }
        }
    }

    /// Σ xᵢ² over coordinate slots lo..hi as a polynomial.
    fn block_r2(&self, lo: usize, hi: usize) -> MultiPoly {
        let mut s = MultiPoly::zero();
        for k in lo..hi {
            s = s.add(&MultiPoly::var_pow(var::x(k), 2));
        }
        s
    }

    /// cᵢ/sᵢ for block index 1 or 2 (oscillator only).
    fn phi(&self, which: usize) -> RadExt {
        let dim = self.dim();
        let n = self.params.split;
        let (lo, hi, cvar) = match which {
            1 => (0, n, var::C1),
            2 => (n, dim, var::C2),
            _ => unreachable!(),
        };
        let s = RatFn::from_poly(self.block_r2(lo, hi));
        let inv = RadExt::rational(
            dim as u8,
            s.inv().expect("block radius squared is nonzero"),
        );
        inv.mul(&sym(dim, cvar))
    }

    /// First integral A.
    pub fn integral_a(&self) -> Result<DiffOp> {
        let dim = self.dim();
        match self.params.model {
            Model::KeplerCoulomb => {
                // A = Σ_{i<j} Lᵢⱼ² + 2r²(c₁χ₁ + c₂χ₂)
                let a = self.sum_l2(0, dim)?;
                let r2 = RadExt::from_poly(dim as u8, self.block_r2(0, dim));
                let barrier = chi(dim, 1)
                    .mul(&sym(dim, var::C1))
                    .add(&chi(dim, -1).mul(&sym(dim, var::C2)))
                    .mul(&r2)
                    .scale(&GScalar::from_int(2));
                Ok(a.add(&DiffOp::from_coeff(barrier)))
            }
            Model::SingularOscillator => {
                // A = −(ħ²/4)·{Σᵢⱼ xᵢ²∂ⱼ² − Σᵢⱼ xᵢxⱼ∂ᵢ∂ⱼ − (N−1)Σᵢ xᵢ∂ᵢ}
                //     + ½(c₁φ₁ + c₂φ₂)(s₁ + s₂)
                let mut t = DiffOp::zero(dim as u8);
                for i in 0..dim {
                    for j in 0..dim {
                        let xi2 = RadExt::from_poly(dim as u8, MultiPoly::var_pow(var::x(i), 2));
                        let djj = DiffOp::partial(dim as u8, j)
                            .compose(&DiffOp::partial(dim as u8, j), &self.caps)?;
                        t = t.add(&djj.scale_coeff(&xi2));
                        let xij = RadExt::from_poly(
                            dim as u8,
                            MultiPoly::var_pow(var::x(i), 1).mul(&MultiPoly::var_pow(var::x(j), 1)),
                        );
                        let dij = DiffOp::partial(dim as u8, i)
                            .compose(&DiffOp::partial(dim as u8, j), &self.caps)?;
                        t = t.sub(&dij.scale_coeff(&xij));
                    }
                    let xi = RadExt::var(dim as u8, i);
                    t = t.sub(
                        &DiffOp::partial(dim as u8, i)
                            .scale_coeff(&xi)
                            .scale(&GScalar::from_int(dim as i64 - 1)),
                    );
                }
                let mut a = t.scale_coeff(&RadExt::from_poly(
                    dim as u8,
                    MultiPoly::var_pow(var::HBAR, 2).scale(&GScalar::from_ratio(-1, 4)),
                ));
                // φᵢ already carries cᵢ; s₁ + s₂ = r².
                let r2 = RadExt::from_poly(dim as u8, self.block_r2(0, dim));
                let barrier = self
                    .phi(1)
                    .add(&self.phi(2))
                    .mul(&r2)
                    .scale(&GScalar::from_ratio(1, 2));
                a = a.add(&DiffOp::from_coeff(barrier));
                Ok(a)
            }
        }
    }

    /// Component j of the barrier-free Runge–Lenz vector (Coulomb only):
    /// Mⱼ = ½ Σ_{i≠j} (Lⱼᵢ∘pᵢ + pᵢ∘Lⱼᵢ) − c₀xⱼ/r.
    pub fn runge_lenz(&self, j: usize) -> Result<DiffOp> {
        let dim = self.dim();
        if j >= dim {
            return Err(AlgebraError::InvalidInput(format!(
                "vector component {j} out of range for dimension {dim}"
            )));
        }
        let mut m = DiffOp::zero(dim as u8);
        for i in 0..dim {
            if i == j {
                continue;
            }
            let lji = self.l_signed(j, i);
            let pi = momentum(i, dim);
            m = m.add(&lji.compose(&pi, &self.caps)?);
            m = m.add(&pi.compose(&lji, &self.caps)?);
        }
        m = m.scale(&GScalar::from_ratio(1, 2));
        let xj_over_r = RadExt::var(dim as u8, j)
            .mul(&RadExt::radius(dim as u8).inv().expect("1/r exists"))
            .mul(&sym(dim, var::C0));
        Ok(m.sub(&DiffOp::from_coeff(xj_over_r)))
    }

    /// Second integral B.
    pub fn integral_b(&self) -> Result<DiffOp> {
        let dim = self.dim();
        match self.params.model {
            Model::KeplerCoulomb => {
                // B = −M_N + c₁(r−x_N)χ₁ − c₂(r+x_N)χ₂
                let m_n = self.runge_lenz(dim - 1)?;
                let r = RadExt::radius(dim as u8);
                let xn = RadExt::var(dim as u8, dim - 1);
                let t1 = r.sub(&xn).mul(&chi(dim, 1)).mul(&sym(dim, var::C1));
                let t2 = r.add(&xn).mul(&chi(dim, -1)).mul(&sym(dim, var::C2));
                Ok(m_n.neg().add(&DiffOp::from_coeff(t1.sub(&t2))))
            }
            Model::SingularOscillator => {
                // B = ½(Σ_{i<=n} pᵢ² − Σ_{i>n} pᵢ²) + ½ω²(s₁−s₂) + c₁φ₁ − c₂φ₂
                let n = self.params.split;
                let mut b = DiffOp::zero(dim as u8);
                let half = GScalar::from_ratio(1, 2);
                for i in 0..dim {
                    let pi = momentum(i, dim);
                    let pi2 = pi.compose(&pi, &self.caps)?;
                    let signed = if i < n { pi2 } else { pi2.neg() };
                    b = b.add(&signed.scale(&half));
                }
                let om2 = MultiPoly::var_pow(var::OMEGA, 2).scale(&GScalar::from_ratio(1, 2));
                let s_diff = self.block_r2(0, n).sub(&self.block_r2(n, dim));
                b = b.add(&DiffOp::from_coeff(RadExt::from_poly(
                    dim as u8,
                    om2.mul(&s_diff),
                )));
                b = b.add(&DiffOp::from_coeff(self.phi(1).sub(&self.phi(2))));
                Ok(b)
            }
        }
    }

    /// The central rotational invariant paired with A: Coulomb
    /// J² = Σ_{i<j<=N−1} Lᵢⱼ²; oscillator J₂ = first block Casimir.
    pub fn central_j(&self) -> Result<DiffOp> {
        match self.params.model {
            Model::KeplerCoulomb => self.sum_l2(0, self.dim() - 1),
            Model::SingularOscillator => self.block_casimir(1),
        }
    }

    /// Oscillator second block Casimir K₂ (errors for the Coulomb family).
    pub fn central_k(&self) -> Result<DiffOp> {
        match self.params.model {
            Model::KeplerCoulomb => Err(AlgebraError::InvalidInput(
                "second block Casimir only exists for the oscillator family".into(),
            )),
            Model::SingularOscillator => self.block_casimir(2),
        }
    }

    /// Σ_{lo<=i<j<hi} Lᵢⱼ².
    fn sum_l2(&self, lo: usize, hi: usize) -> Result<DiffOp> {
        let dim = self.dim();
        let mut s = DiffOp::zero(dim as u8);
        for i in lo..hi {
            for j in (i + 1)..hi {
                let l = angular_momentum(i, j, dim);
                s = s.add(&l.compose(&l, &self.caps)?);
            }
        }
        Ok(s)
    }

    /// Block Casimir: the bare angular sum Σ_{i<j in block} Lᵢⱼ² (a
    /// one-dimensional block has none and gives the zero operator).
    fn block_casimir(&self, which: usize) -> Result<DiffOp> {
        let dim = self.dim();
        let n = self.params.split;
        let (lo, hi) = match which {
            1 => (0, n),
            2 => (n, dim),
            _ => unreachable!(),
        };
        self.sum_l2(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::Caps;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn chi_times_denominator_is_one() {
        let dim = 3usize;
        let c1 = chi(dim, 1);
        let denom = RadExt::radius(3)
            .mul(&RadExt::radius(3).add(&RadExt::var(3, 2)));
        assert!(c1.mul(&denom).eq_semantic(&RadExt::one(3)));
    }

    #[test]
    fn coulomb_minus_barriers_is_hydrogen() {
        let p = ModelParams::kepler_coulomb(3).unwrap();
        let ops = ModelOps::new(p);
        let h = ops.hamiltonian().unwrap();
        let mut expected = half_p_squared(3);
        let c0_over_r = RadExt::radius(3)
            .inv()
            .unwrap()
            .mul(&sym(3, var::C0));
        expected = expected.sub(&DiffOp::from_coeff(c0_over_r));
        let barrier = DiffOp::from_coeff(
            chi(3, 1)
                .mul(&sym(3, var::C1))
                .add(&chi(3, -1).mul(&sym(3, var::C2))),
        );
        assert!(h.sub(&barrier).eq_semantic(&expected));
    }

    #[test]
    fn central_j_is_l12_squared_in_three_dimensions() {
        let p = ModelParams::kepler_coulomb(3).unwrap();
        let ops = ModelOps::new(p);
        let j2 = ops.central_j().unwrap();
        let l = angular_momentum(0, 1, 3);
        let l2 = l.compose(&l, &caps()).unwrap();
        assert!(j2.eq_semantic(&l2));
    }

    #[test]
    fn one_dimensional_block_casimir_vanishes() {
        let p = ModelParams::singular_oscillator(3, 1).unwrap();
        let ops = ModelOps::new(p);
        let j2 = ops.central_j().unwrap();
        assert!(j2.is_zero(), "one-dimensional block has no rotations");
        // The complementary two-dimensional block has exactly one.
        let k2 = ops.central_k().unwrap();
        let l = angular_momentum(1, 2, 3);
        assert!(k2.eq_semantic(&l.compose(&l, &caps()).unwrap()));
    }

    #[test]
    fn runge_lenz_commutes_with_hydrogen() {
        // [½p² − c₀/r, M₃] = 0 exactly; the hydrogen Hamiltonian is built by
        // hand so the barrier symbols never enter.
        let dim = 3usize;
        let p = ModelParams::kepler_coulomb(dim).unwrap();
        let ops = ModelOps::new(p);
        let mut h = half_p_squared(dim);
        let c0_over_r = RadExt::radius(dim as u8)
            .inv()
            .unwrap()
            .mul(&sym(dim, var::C0));
        h = h.sub(&DiffOp::from_coeff(c0_over_r));
        let m3 = ops.runge_lenz(dim - 1).unwrap();
        let comm = h.comm(&m3, &caps()).unwrap();
        assert!(comm.is_zero(), "nonzero [H, M]: {comm}");
    }

    #[test]
    fn runge_lenz_component_out_of_range() {
        let p = ModelParams::kepler_coulomb(3).unwrap();
        let ops = ModelOps::new(p);
        assert!(matches!(
            ops.runge_lenz(3),
            Err(AlgebraError::InvalidInput(_))
        ));
    }

    #[test]
    fn invalid_dimensions_rejected() {
        assert!(ModelParams::kepler_coulomb(2).is_err());
        assert!(ModelParams::kepler_coulomb(7).is_err());
        assert!(ModelParams::singular_oscillator(1, 1).is_err());
        assert!(ModelParams::singular_oscillator(4, 0).is_err());
        assert!(ModelParams::singular_oscillator(4, 4).is_err());
        assert!(ModelParams::singular_oscillator(4, 2).is_ok());
    }

    #[test]
    fn momentum_applied_to_monomial() {
        // p₁ x₁² = −2iħx₁.
        let p1 = momentum(0, 3);
        let g = RadExt::from_poly(3, MultiPoly::var_pow(var::x(0), 2));
        let out = p1.apply(&g);
        let expected = RadExt::from_poly(
            3,
            MultiPoly::var_pow(var::x(0), 1)
                .mul(&hbar_c())
                .scale(&GScalar::imag_ratio(-2, 1)),
        );
        assert!(out.eq_semantic(&expected));
    }
}
