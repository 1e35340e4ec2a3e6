//! Fidelity extraction, synthesis and twirling.
//!
//! The σ-twirl `D_σ = τ_σ ∘ D ∘ τ_σ` is the orthogonal projection onto the
//! span of the `Π^α_(σ)`, so `D_σ ρ = Σ_α Tr(ρ Π^α) Π̃^α` and the exact twirl
//! reduces to reading off the fidelities.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::projectors::{check_scale, multi_pi, trace_formula, BinaryVector};
use crate::tensor::{haar_unitary, Operator, Rng};

use super::descriptor::{SignedFidelities, StateDescriptor};

/// Unit-trace tolerance for input states.
pub const TRACE_TOL: f64 = 1e-10;

/// Samples summed sequentially inside one parallel work unit. Fixed so the
/// floating-point summation order never depends on the thread count.
const MC_CHUNK: usize = 64;

fn check_shape(rho: &Operator, sigma: &BinaryVector) -> Result<()> {
    let k = sigma.len();
    if rho.num_subsystems() != 2 * k {
        return Err(Error::DimensionMismatch(format!(
            "operator has {} subsystems, sigma of length {k} needs {}",
            rho.num_subsystems(),
            2 * k
        )));
    }
    check_scale(rho.local_dim(), k)
}

/// Raw overlaps `Re Tr(A Π^α_(σ))` for any operator `A` on `2K` subsystems.
pub fn overlaps(a: &Operator, sigma: &BinaryVector) -> Result<Vec<f64>> {
    check_shape(a, sigma)?;
    BinaryVector::all(sigma.len())
        .map(|alpha| {
            let p = multi_pi(a.local_dim(), sigma, &alpha)?;
            Ok(a.trace_product(&p)?.re)
        })
        .collect()
}

/// `f_α = Tr(ρ Π^α_(σ))` for a unit-trace state `ρ`.
pub fn fidelities_of(rho: &Operator, sigma: &BinaryVector) -> Result<StateDescriptor> {
    check_shape(rho, sigma)?;
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::InvalidArgument(format!("state has trace {tr}, expected 1")));
    }
    StateDescriptor::new(rho.local_dim(), sigma.clone(), overlaps(rho, sigma)?)
}

/// Fidelities of the projection `D_σ ρ` onto σ-invariant operators.
pub fn exact_twirl(rho: &Operator, sigma: &BinaryVector) -> Result<StateDescriptor> {
    fidelities_of(rho, sigma)
}

fn synthesize_values(d: usize, sigma: &BinaryVector, values: &[f64]) -> Result<Operator> {
    check_scale(d, sigma.len())?;
    let mut out = Operator::zeros(d, 2 * sigma.len())?;
    for (i, &f) in values.iter().enumerate() {
        if f == 0.0 {
            continue;
        }
        let alpha = BinaryVector::from_index(sigma.len(), i);
        let p = multi_pi(d, sigma, &alpha)?;
        out.add_scaled_assign(f / trace_formula(d, sigma, &alpha), &p)?;
    }
    Ok(out)
}

/// `Σ_α f_α Π̃^α_(σ)` as a dense operator.
pub fn synthesize(desc: &StateDescriptor) -> Result<Operator> {
    synthesize_values(desc.d(), desc.sigma(), desc.fidelities())
}

impl SignedFidelities {
    /// Dense `Σ_α f_α Π̃^α_(σ)`; Hermitian with unit trace but possibly indefinite.
    pub fn synthesize(&self) -> Result<Operator> {
        synthesize_values(self.d, &self.sigma, &self.values)
    }
}

/// Local unitary for one twirl sample: `U_i` on Alice `i`, and `U_i` or
/// `conj(U_i)` on Bob `i` according to `σ_i`.
fn sample_factors(d: usize, sigma: &BinaryVector, rng: &mut Rng) -> Vec<Operator> {
    let us: Vec<Operator> = sigma.bits().iter().map(|_| haar_unitary(d, rng)).collect();
    let bobs: Vec<Operator> = us
        .iter()
        .zip(sigma.bits())
        .map(|(u, &s)| if s == 0 { u.clone() } else { u.conj() })
        .collect();
    us.into_iter().chain(bobs).collect()
}

/// Monte-Carlo estimate `(1/N) Σ_s V_s ρ V_s†` of `D_σ ρ`.
///
/// Sample `s` draws its `K` unitaries from counters
/// `rng.counter() + s·K .. + (s+1)·K`; on return `rng` has advanced by `N·K`.
/// The result does not depend on the number of worker threads.
pub fn mc_twirl(rho: &Operator, sigma: &BinaryVector, samples: usize, rng: &mut Rng) -> Result<Operator> {
    check_shape(rho, sigma)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("mc_twirl needs at least one sample".into()));
    }
    let k = sigma.len() as u64;
    let d = rho.local_dim();
    let base = *rng;
    let chunks: Vec<(usize, usize)> = (0..samples)
        .step_by(MC_CHUNK)
        .map(|start| (start, (start + MC_CHUNK).min(samples)))
        .collect();
    let partials: Vec<Operator> = chunks
        .par_iter()
        .map(|&(start, end)| {
            let mut acc = Operator::zeros(d, rho.num_subsystems())?;
            for s in start..end {
                let mut local = base.at(s as u64 * k);
                let factors = sample_factors(d, sigma, &mut local);
                acc.add_scaled_assign(1.0, &rho.conjugate_local(&factors)?)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = Operator::zeros(d, rho.num_subsystems())?;
    for p in &partials {
        total.add_scaled_assign(1.0, p)?;
    }
    rng.advance(samples as u64 * k);
    Ok(total.scale(1.0 / samples as f64))
}
