//! The cubic-algebra verification suite.
//!
//! Every check reduces a claimed operator identity to a residual operator
//! and reports whether it is exactly the zero element of the Weyl algebra.
//! Nothing is numerical here: a pass means the identity holds for all
//! parameter values and all points simultaneously.

use crate::central::{casimir_central_form, q3_coefficients, CentralExpr, Q3Coefficients};
use crate::error::Result;
use crate::exact::{var, GScalar, MultiPoly, RadExt};
use crate::models::{Model, ModelOps};
use crate::weyl::DiffOp;

/// Outcome of one identity check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Term count of the residual operator (0 on pass).
    pub residual_terms: usize,
    /// First offending terms, abbreviated; empty on pass.
    pub detail: String,
}

impl CheckResult {
    pub fn from_residual(name: &str, residual: &DiffOp) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            passed: residual.is_zero(),
            residual_terms: residual.num_terms(),
            detail: short_detail(residual),
        }
    }

    fn pass(name: &str) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            passed: true,
            residual_terms: 0,
            detail: String::new(),
        }
    }
}

fn short_detail(r: &DiffOp) -> String {
    if r.is_zero() {
        return String::new();
    }
    let mut parts = Vec::new();
    for (d, c) in r.terms().take(2) {
        let cs: String = format!("{c}").chars().take(90).collect();
        parts.push(format!("d^{:?} · {}", d.orders(), cs));
    }
    format!("first offending terms: {}", parts.join(" ; "))
}

/// iħ as an operator coefficient.
fn i_hbar(dim: u8) -> RadExt {
    RadExt::from_poly(
        dim,
        MultiPoly::var(var::HBAR).scale(&GScalar::imag_ratio(1, 1)),
    )
}

/// [H, A] = [H, B] = 0.
pub fn verify_integrals(ops: &ModelOps) -> Result<Vec<CheckResult>> {
    let caps = ops.caps();
    let h = ops.hamiltonian()?;
    let a = ops.integral_a()?;
    let b = ops.integral_b()?;
    Ok(vec![
        CheckResult::from_residual("integral-of-motion-A", &h.comm(&a, caps)?),
        CheckResult::from_residual("integral-of-motion-B", &h.comm(&b, caps)?),
    ])
}

/// The rotation generators whose brackets and cross-commutators the
/// configuration must respect: the full ambient set, and the subsets that
/// must commute with A and B (all pairs inside the first N−1 coordinates
/// for the Coulomb family; the two coordinate blocks for the oscillator).
fn rotation_pairs(ops: &ModelOps) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let dim = ops.params.n_dim;
    let all: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| ((i + 1)..dim).map(move |j| (i, j)))
        .collect();
    let residual: Vec<(usize, usize)> = match ops.params.model {
        Model::KeplerCoulomb => (0..dim - 1)
            .flat_map(|i| ((i + 1)..(dim - 1)).map(move |j| (i, j)))
            .collect(),
        Model::SingularOscillator => {
            let n = ops.params.split;
            let mut v: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .collect();
            v.extend((n..dim).flat_map(|i| ((i + 1)..dim).map(move |j| (i, j))));
            v
        }
    };
    (all, residual)
}

/// [L_ij, L_kl] = iħ(δ_ik L_jl + δ_jl L_ik − δ_il L_jk − δ_jk L_il) for all
/// index quadruples (which covers the block generators as subsets).
pub fn verify_lie_sector(ops: &ModelOps) -> Result<CheckResult> {
    let dim = ops.params.n_dim;
    let caps = ops.caps();
    let (all, _) = rotation_pairs(ops);
    let l_or_zero = |i: usize, j: usize| -> DiffOp {
        if i == j {
            DiffOp::zero(dim as u8)
        } else {
            ops.l_signed(i, j)
        }
    };
    let mut total_residual = 0usize;
    let mut first_fail = String::new();
    for &(i, j) in &all {
        for &(k, l) in &all {
            let lhs = ops.l_signed(i, j).comm(&ops.l_signed(k, l), caps)?;
            let mut rhs = DiffOp::zero(dim as u8);
            if i == k {
                rhs = rhs.add(&l_or_zero(j, l));
            }
            if j == l {
                rhs = rhs.add(&l_or_zero(i, k));
            }
            if i == l {
                rhs = rhs.sub(&l_or_zero(j, k));
            }
            if j == k {
                rhs = rhs.sub(&l_or_zero(i, l));
            }
            let residual = lhs.sub(&rhs.scale_coeff(&i_hbar(dim as u8)));
            if !residual.is_zero() {
                total_residual += residual.num_terms();
                if first_fail.is_empty() {
                    first_fail = format!(
                        "bracket (L{}{}, L{}{}): {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1,
                        short_detail(&residual)
                    );
                }
            }
        }
    }
    Ok(CheckResult {
        name: "lie-sector".into(),
        passed: total_residual == 0,
        residual_terms: total_residual,
        detail: first_fail,
    })
}

/// Cross-commutators between the integrals and the residual rotation
/// algebra vanish: the symmetry algebra splits as a direct sum.
pub fn verify_direct_sum(ops: &ModelOps) -> Result<CheckResult> {
    let caps = ops.caps();
    let (_, residual_pairs) = rotation_pairs(ops);
    let a = ops.integral_a()?;
    let b = ops.integral_b()?;
    let mut total = 0usize;
    let mut first_fail = String::new();
    for &(i, j) in &residual_pairs {
        let l = ops.l_signed(i, j);
        for (tag, op) in [("A", &a), ("B", &b)] {
            let residual = op.comm(&l, caps)?;
            if !residual.is_zero() {
                total += residual.num_terms();
                if first_fail.is_empty() {
                    first_fail = format!(
                        "[{}, L{}{}]: {}",
                        tag,
                        i + 1,
                        j + 1,
                        short_detail(&residual)
                    );
                }
            }
        }
    }
    if residual_pairs.is_empty() {
        return Ok(CheckResult::pass("direct-sum"));
    }
    Ok(CheckResult {
        name: "direct-sum".into(),
        passed: total == 0,
        residual_terms: total,
        detail: first_fail,
    })
}

/// The two cubic closure residuals and the intermediate C = [A, B].
pub struct Q3Report {
    /// Term count of C, for scale reporting.
    pub c_terms: usize,
    pub r1: CheckResult,
    pub r2: CheckResult,
}

impl Q3Report {
    pub fn passed(&self) -> bool {
        self.r1.passed && self.r2.passed
    }
}

/// Closure against the configuration's own coefficient table.
pub fn verify_q3(ops: &ModelOps) -> Result<Q3Report> {
    verify_q3_with(ops, &q3_coefficients(&ops.params))
}

/// Closure against externally supplied coefficients (used to show a wrong
/// table row is actually detected).
pub fn verify_q3_with(ops: &ModelOps, q: &Q3Coefficients) -> Result<Q3Report> {
    let caps = ops.caps();
    let a = ops.integral_a()?;
    let b = ops.integral_b()?;
    let c = a.comm(&b, caps)?;

    // R₁ = [A,C] − (α∘A² + γ∘{A,B} + δ∘A + ε∘B + ζ)
    let ac = a.comm(&c, caps)?;
    let mut rhs1 = q.zeta.to_operator(ops)?;
    if !q.alpha.is_zero() {
        rhs1 = rhs1.add(&q.alpha.to_operator(ops)?.compose(&a.pow(2, caps)?, caps)?);
    }
    rhs1 = rhs1.add(
        &q.gamma
            .to_operator(ops)?
            .compose(&a.acomm(&b, caps)?, caps)?,
    );
    if !q.delta.is_zero() {
        rhs1 = rhs1.add(&q.delta.to_operator(ops)?.compose(&a, caps)?);
    }
    rhs1 = rhs1.add(&q.epsilon.to_operator(ops)?.compose(&b, caps)?);
    let r1 = ac.sub(&rhs1);

    // R₂ = [B,C] − (a∘B²... general form: aA² − α{A,B} − γB² + dA − δB + z)
    let bc = b.comm(&c, caps)?;
    let mut rhs2 = q.z.to_operator(ops)?;
    if !q.a_coef.is_zero() {
        rhs2 = rhs2.add(&q.a_coef.to_operator(ops)?.compose(&a.pow(2, caps)?, caps)?);
    }
    if !q.alpha.is_zero() {
        rhs2 = rhs2.sub(
            &q.alpha
                .to_operator(ops)?
                .compose(&a.acomm(&b, caps)?, caps)?,
        );
    }
    rhs2 = rhs2.sub(&q.gamma.to_operator(ops)?.compose(&b.pow(2, caps)?, caps)?);
    rhs2 = rhs2.add(&q.d.to_operator(ops)?.compose(&a, caps)?);
    if !q.delta.is_zero() {
        rhs2 = rhs2.sub(&q.delta.to_operator(ops)?.compose(&b, caps)?);
    }
    let r2 = bc.sub(&rhs2);

    Ok(Q3Report {
        c_terms: c.num_terms(),
        r1: CheckResult::from_residual("cubic-closure-AC", &r1),
        r2: CheckResult::from_residual("cubic-closure-BC", &r2),
    })
}

/// Casimir assembled from the generators:
/// K = C² − α{A²,B} − γ{A,B²} + (αγ−δ){A,B} + (γ²−ε)B² + (γδ−2ζ)B
///     + (d + aγ/3 + α²)A² + (aε/3 + αδ + 2z)A.
pub fn casimir_generator_form(ops: &ModelOps, q: &Q3Coefficients) -> Result<DiffOp> {
    let caps = ops.caps();
    let a = ops.integral_a()?;
    let b = ops.integral_b()?;
    let c = a.comm(&b, caps)?;

    let a2 = a.pow(2, caps)?;
    let b2 = b.pow(2, caps)?;
    let ab_anti = a.acomm(&b, caps)?;
    let ab2_anti = a.compose(&b2, caps)?.add(&b2.compose(&a, caps)?);

    let two = GScalar::from_int(2);
    let third = GScalar::from_ratio(1, 3);

    let coeff_ab = q.alpha.mul(&q.gamma).sub(&q.delta);
    let coeff_b2 = q.gamma.mul(&q.gamma).sub(&q.epsilon);
    let coeff_b = q.gamma.mul(&q.delta).sub(&q.zeta.scale(&two));
    let coeff_a2 = q
        .d
        .add(&q.a_coef.mul(&q.gamma).scale(&third))
        .add(&q.alpha.mul(&q.alpha));
    let coeff_a = q
        .a_coef
        .mul(&q.epsilon)
        .scale(&third)
        .add(&q.alpha.mul(&q.delta))
        .add(&q.z.scale(&two));

    let mut k = c.pow(2, caps)?;
    if !q.alpha.is_zero() {
        let a2b_anti = a2.compose(&b, caps)?.add(&b.compose(&a2, caps)?);
        k = k.sub(&q.alpha.to_operator(ops)?.compose(&a2b_anti, caps)?);
    }
    k = k.sub(&q.gamma.to_operator(ops)?.compose(&ab2_anti, caps)?);
    if !coeff_ab.is_zero() {
        k = k.add(&coeff_ab.to_operator(ops)?.compose(&ab_anti, caps)?);
    }
    k = k.add(&coeff_b2.to_operator(ops)?.compose(&b2, caps)?);
    k = k.add(&coeff_b.to_operator(ops)?.compose(&b, caps)?);
    k = k.add(&coeff_a2.to_operator(ops)?.compose(&a2, caps)?);
    k = k.add(&coeff_a.to_operator(ops)?.compose(&a, caps)?);
    Ok(k)
}

/// Generator-form Casimir minus its central form collapses to zero.
pub fn verify_casimir(ops: &ModelOps) -> Result<CheckResult> {
    let q = q3_coefficients(&ops.params);
    let kg = casimir_generator_form(ops, &q)?;
    let kc = casimir_central_form(&ops.params).to_operator(ops)?;
    Ok(CheckResult::from_residual("casimir-collapse", &kg.sub(&kc)))
}

/// [K, A] = [K, B] = 0 using the (equivalent, already-collapsed) central
/// form of K, which keeps the commutators tractable.
pub fn verify_casimir_commutes(ops: &ModelOps) -> Result<Vec<CheckResult>> {
    let caps = ops.caps();
    let k = casimir_central_form(&ops.params).to_operator(ops)?;
    let a = ops.integral_a()?;
    let b = ops.integral_b()?;
    Ok(vec![
        CheckResult::from_residual("casimir-commutes-A", &k.comm(&a, caps)?),
        CheckResult::from_residual("casimir-commutes-B", &k.comm(&b, caps)?),
    ])
}

/// A deliberately wrong ε row — off by replacing (N−3) with (N−2) — used to
/// demonstrate the closure check has teeth.
pub fn perturbed_epsilon(ops: &ModelOps) -> CentralExpr {
    let nn = ops.params.n_dim as i64;
    CentralExpr::constant(
        MultiPoly::var_pow(var::HBAR, 4).scale(&GScalar::from_int((nn - 1) * (nn - 2))),
    )
}

/// Everything the symbolic `verify` command runs, in report order.
pub fn verify_all(ops: &ModelOps, with_casimir: bool) -> Result<Vec<CheckResult>> {
    let mut out = verify_integrals(ops)?;
    let q3 = verify_q3(ops)?;
    out.push(q3.r1);
    out.push(q3.r2);
    out.push(verify_lie_sector(ops)?);
    out.push(verify_direct_sum(ops)?);
    if with_casimir {
        out.push(verify_casimir(ops)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelParams;

    fn kc3() -> ModelOps {
        ModelOps::new(ModelParams::kepler_coulomb(3).unwrap())
    }

    fn dso21() -> ModelOps {
        ModelOps::new(ModelParams::singular_oscillator(3, 1).unwrap())
    }

    #[test]
    fn integrals_commute_with_hamiltonian() {
        for r in verify_integrals(&kc3()).unwrap() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        for r in verify_integrals(&dso21()).unwrap() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn lie_sector_and_direct_sum() {
        let r = verify_lie_sector(&kc3()).unwrap();
        assert!(r.passed, "{}", r.detail);
        let r = verify_direct_sum(&kc3()).unwrap();
        assert!(r.passed, "{}", r.detail);
        let r = verify_lie_sector(&dso21()).unwrap();
        assert!(r.passed, "{}", r.detail);
        let r = verify_direct_sum(&dso21()).unwrap();
        assert!(r.passed, "{}", r.detail);
    }

    #[test]
    fn cubic_closure_smallest_coulomb() {
        let rep = verify_q3(&kc3()).unwrap();
        assert!(rep.c_terms > 0);
        assert!(rep.r1.passed, "{}", rep.r1.detail);
        assert!(rep.r2.passed, "{}", rep.r2.detail);
    }

    #[test]
    fn cubic_closure_smallest_oscillator() {
        let rep = verify_q3(&dso21()).unwrap();
        assert!(rep.r1.passed, "{}", rep.r1.detail);
        assert!(rep.r2.passed, "{}", rep.r2.detail);
    }

    #[test]
    fn wrong_epsilon_is_detected() {
        let ops = kc3();
        let mut q = crate::central::q3_coefficients(&ops.params);
        q.epsilon = perturbed_epsilon(&ops);
        let rep = verify_q3_with(&ops, &q).unwrap();
        assert!(!rep.r1.passed, "perturbed coefficients must not close");
        assert!(rep.r1.residual_terms > 0);
        assert!(rep.r1.detail.contains("first offending terms"));
    }

    #[test]
    fn casimir_collapse_smallest_coulomb() {
        let r = verify_casimir(&kc3()).unwrap();
        assert!(r.passed, "residual terms {}: {}", r.residual_terms, r.detail);
    }

    #[test]
    fn casimir_commutes_smallest_coulomb() {
        for r in verify_casimir_commutes(&kc3()).unwrap() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
