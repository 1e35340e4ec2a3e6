//! σ-PPT tests, the separability polytope and extremal separable fidelities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projectors::BinaryVector;
use crate::tensor::{Operator, SubsystemSet};

use super::descriptor::{ProductStateSpec, StateDescriptor, FIDELITY_NEG_TOL};
use super::transfer::transform_fidelities;

/// Slack allowed on polytope inequalities before a constraint counts as failed.
pub const POLYTOPE_TOL: f64 = 1e-12;
/// Idempotency tolerance for projector inputs.
pub const PROJECTOR_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Satisfied,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailedConstraint {
    pub constraint: String,
    pub value: f64,
    pub bound: f64,
}

/// Result of a criterion. `outcome` is `Violated` exactly when `failures`
/// is nonempty. `min_margin` is the smallest slack over every evaluated
/// constraint (negative when something failed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub criterion: String,
    pub outcome: Outcome,
    pub failures: Vec<FailedConstraint>,
    pub min_margin: f64,
    /// Set for criteria that are necessary but not known to be sufficient.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub necessary_only: bool,
    /// The `(1…1)`-PPT sub-verdict reported by `ppt-all`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bisep: Option<Box<SeparabilityVerdict>>,
}

impl SeparabilityVerdict {
    fn new(criterion: impl Into<String>, failures: Vec<FailedConstraint>, min_margin: f64) -> Self {
        let outcome = if failures.is_empty() { Outcome::Satisfied } else { Outcome::Violated };
        SeparabilityVerdict {
            criterion: criterion.into(),
            outcome,
            failures,
            min_margin,
            necessary_only: false,
            bisep: None,
        }
    }

    pub fn is_satisfied(&self) -> bool {
        self.outcome == Outcome::Satisfied
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// Whether `τ_μ ρ ≥ 0`: every fidelity of the transposed state must be
/// at least `-1e-12`.
pub fn is_sigma_ppt(desc: &StateDescriptor, mu: &BinaryVector) -> Result<SeparabilityVerdict> {
    let t = transform_fidelities(desc, mu)?;
    let mut failures = Vec::new();
    for (i, &v) in t.values.iter().enumerate() {
        if v < -FIDELITY_NEG_TOL {
            failures.push(FailedConstraint {
                constraint: format!("mu={mu},alpha={}", BinaryVector::from_index(mu.len(), i)),
                value: v,
                bound: 0.0,
            });
        }
    }
    Ok(SeparabilityVerdict::new(format!("ppt:{mu}"), failures, t.min_entry()))
}

/// Upper bound `2^{-|α|} (2/d)^{|σα|}` on the fidelities of separable states.
pub fn fidelity_bound(d: usize, sigma: &BinaryVector, alpha: &BinaryVector) -> f64 {
    let sa = sigma.product(alpha).expect("equal lengths").weight();
    0.5f64.powi(alpha.weight() as i32) * (2.0 / d as f64).powi(sa as i32)
}

/// Bound and ordering inequalities satisfied by every multi-separable
/// σ-invariant state:
///
/// * `f_α ≤ 2^{-|α|} (2/d)^{|σα|}` for every α;
/// * `f_α ≤ f_β` whenever α covers β bitwise (`α ≠ β`).
///
/// These are necessary conditions only; the verdict is flagged accordingly.
pub fn separability_polytope_check(desc: &StateDescriptor) -> SeparabilityVerdict {
    let k = desc.pairs();
    let sigma = desc.sigma();
    let mut failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    for alpha in BinaryVector::all(k) {
        let f = desc.fidelity(&alpha);
        let bound = fidelity_bound(desc.d(), sigma, &alpha);
        min_margin = min_margin.min(bound - f);
        if f > bound + POLYTOPE_TOL {
            failures.push(FailedConstraint { constraint: format!("bound:alpha={alpha}"), value: f, bound });
        }
    }
    for alpha in BinaryVector::all(k) {
        for beta in BinaryVector::all(k) {
            if alpha == beta || !alpha.covers(&beta) {
                continue;
            }
            let (fa, fb) = (desc.fidelity(&alpha), desc.fidelity(&beta));
            min_margin = min_margin.min(fb - fa);
            if fa > fb + POLYTOPE_TOL {
                failures.push(FailedConstraint {
                    constraint: format!("order:alpha={alpha}>beta={beta}"),
                    value: fa,
                    bound: fb,
                });
            }
        }
    }
    let mut v = SeparabilityVerdict::new("polytope", failures, min_margin);
    v.necessary_only = true;
    v
}

/// `A ⊗ B` bi-separability test: `(1…1)`-PPT.
pub fn bisep_check(desc: &StateDescriptor) -> SeparabilityVerdict {
    let mut v = is_sigma_ppt(desc, &BinaryVector::ones(desc.pairs())).expect("matching lengths");
    v.criterion = "bisep".into();
    v
}

/// ν-PPT for every binary vector ν; carries the `(1…1)` sub-verdict as `bisep`.
pub fn separability_ppt_all(desc: &StateDescriptor) -> SeparabilityVerdict {
    let mut failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    for mu in BinaryVector::all(desc.pairs()) {
        let v = is_sigma_ppt(desc, &mu).expect("matching lengths");
        min_margin = min_margin.min(v.min_margin);
        failures.extend(v.failures);
    }
    let mut verdict = SeparabilityVerdict::new("ppt-all", failures, min_margin);
    verdict.bisep = Some(Box::new(bisep_check(desc)));
    verdict
}

/// Fidelities of `D_σ τ_σ(P_ψ1 ⊗ … ⊗ P_φK)` in terms of the overlaps
/// `a_i = |⟨ψ_i|φ_i⟩|²`:
/// `f_α = 2^{-(K−|σ|)} ∏_i u_i` with `u_i = 1 + (−1)^{α_i} a_i` when
/// `σ_i = 0` and `u_i = 1 − [α_i + (−1)^{α_i} a_i/d]` when `σ_i = 1`.
pub fn extremal_fidelities(sigma: &BinaryVector, spec: &ProductStateSpec, d: usize) -> Result<Vec<f64>> {
    if spec.pairs() != sigma.len() {
        return Err(Error::LengthMismatch { expected: sigma.len(), got: spec.pairs() });
    }
    let k = sigma.len();
    let a = spec.overlaps();
    let b = spec.scaled_overlaps(d);
    let prefactor = 0.5f64.powi((k - sigma.weight()) as i32);
    Ok(BinaryVector::all(k)
        .map(|alpha| {
            let u: f64 = (0..k)
                .map(|i| {
                    let al = alpha.bits()[i];
                    let sign = if al == 0 { 1.0 } else { -1.0 };
                    if sigma.bits()[i] == 0 {
                        1.0 + sign * a[i]
                    } else {
                        1.0 - (al as f64 + sign * b[i])
                    }
                })
                .product();
            prefactor * u
        })
        .collect())
}

fn check_projector(p: &Operator, d: usize, name: &str) -> Result<()> {
    if p.local_dim() != d || p.num_subsystems() != 2 {
        return Err(Error::DimensionMismatch(format!("{name} must act on C^{d} ⊗ C^{d}")));
    }
    if !p.is_hermitian(PROJECTOR_TOL) {
        return Err(Error::NotProjector(format!("{name} is not Hermitian")));
    }
    let defect = p.matmul(p)?.max_abs_diff(p)?;
    if defect > PROJECTOR_TOL {
        return Err(Error::NotProjector(format!("{name}² differs from {name} by {defect:e}")));
    }
    if p.trace().re < 0.5 {
        return Err(Error::NotProjector(format!("{name} is zero")));
    }
    Ok(())
}

/// Werner fidelities `q_α` (K = 2, σ = 00) of `D(ρ_A ⊗ ρ_B)` where
/// `ρ_X = P_X / Tr P_X` lives on subsystems (1, 2) for A and (3, 4) for B.
///
/// With `s₂ = Tr(Tr₁ρ_A · Tr₁ρ_B)`, `s₁ = Tr(Tr₂ρ_A · Tr₂ρ_B)` and
/// `s₁₂ = Tr(ρ_A ρ_B)`: `4 q_{α₁α₂} = 1 + (−1)^{α₂} s₂ + (−1)^{α₁} s₁ + (−1)^{α₁+α₂} s₁₂`.
pub fn appendix_fidelities(pa: &Operator, pb: &Operator, d: usize) -> Result<Vec<f64>> {
    check_projector(pa, d, "P_A")?;
    check_projector(pb, d, "P_B")?;
    let ra = pa.scale(1.0 / pa.trace().re);
    let rb = pb.scale(1.0 / pb.trace().re);
    let first = SubsystemSet::new([1])?;
    let second = SubsystemSet::new([2])?;
    let s2 = ra.partial_trace(&first)?.trace_product(&rb.partial_trace(&first)?)?.re;
    let s1 = ra.partial_trace(&second)?.trace_product(&rb.partial_trace(&second)?)?.re;
    let s12 = ra.trace_product(&rb)?.re;
    Ok(vec![
        0.25 * (1.0 + s2 + s1 + s12),
        0.25 * (1.0 - s2 + s1 - s12),
        0.25 * (1.0 + s2 - s1 - s12),
        0.25 * (1.0 - s2 - s1 + s12),
    ])
}
