use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projectors::{trace_formula, BinaryVector};
use crate::tensor::{random_simplex_point, random_unit_interval, Rng};

/// Entries above `-FIDELITY_NEG_TOL` count as nonnegative.
pub const FIDELITY_NEG_TOL: f64 = 1e-12;
/// Allowed deviation of `Σ_α f_α` from 1.
pub const FIDELITY_SUM_TOL: f64 = 1e-10;
/// Largest pair count a descriptor may carry (dense routines are further limited).
pub const MAX_DESCRIPTOR_PAIRS: usize = 16;

const DESCRIPTOR_VERSION: u32 = 1;

/// A σ-invariant state `Σ_α f_α Π^α_(σ) / Tr Π^α_(σ)`.
///
/// `fidelities[i]` belongs to the α with integer encoding `i` (α₁ most
/// significant).
#[derive(Clone, Debug, PartialEq)]
pub struct StateDescriptor {
    d: usize,
    sigma: BinaryVector,
    fidelities: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DescriptorJson {
    version: u32,
    d: usize,
    #[serde(rename = "K")]
    k: usize,
    sigma: Vec<u8>,
    fidelities: Vec<f64>,
}

pub(crate) fn check_dims(d: usize, k: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    if k > MAX_DESCRIPTOR_PAIRS {
        return Err(Error::ScaleExceeded(format!("K = {k} > {MAX_DESCRIPTOR_PAIRS}")));
    }
    Ok(())
}

impl StateDescriptor {
    pub fn new(d: usize, sigma: BinaryVector, fidelities: Vec<f64>) -> Result<Self> {
        check_dims(d, sigma.len())?;
        let expected = 1usize << sigma.len();
        if fidelities.len() != expected {
            return Err(Error::InvalidFidelities(format!(
                "expected {expected} fidelities for K = {}, got {}",
                sigma.len(),
                fidelities.len()
            )));
        }
        if let Some((i, f)) = fidelities.iter().enumerate().find(|(_, f)| !f.is_finite()) {
            return Err(Error::InvalidFidelities(format!("fidelity {i} is {f}")));
        }
        if let Some((i, f)) = fidelities.iter().enumerate().find(|(_, &f)| f < -FIDELITY_NEG_TOL) {
            return Err(Error::InvalidFidelities(format!(
                "fidelity for alpha = {} is negative ({f})",
                BinaryVector::from_index(sigma.len(), i)
            )));
        }
        let total: f64 = fidelities.iter().sum();
        if (total - 1.0).abs() > FIDELITY_SUM_TOL {
            return Err(Error::InvalidFidelities(format!(
                "fidelities must sum to 1 (sum = {total})"
            )));
        }
        Ok(StateDescriptor { d, sigma, fidelities })
    }

    /// The normalized projector `Π̃^α_(σ)`.
    pub fn vertex(d: usize, sigma: BinaryVector, alpha: &BinaryVector) -> Result<Self> {
        if alpha.len() != sigma.len() {
            return Err(Error::LengthMismatch { expected: sigma.len(), got: alpha.len() });
        }
        let mut f = vec![0.0; 1 << sigma.len()];
        f[alpha.index()] = 1.0;
        Self::new(d, sigma, f)
    }

    /// `I / d^{2K}` expressed in family σ.
    pub fn maximally_mixed(d: usize, sigma: BinaryVector) -> Result<Self> {
        check_dims(d, sigma.len())?;
        let total = (d as f64).powi(2 * sigma.len() as i32);
        let f = BinaryVector::all(sigma.len())
            .map(|alpha| trace_formula(d, &sigma, &alpha) / total)
            .collect();
        Self::new(d, sigma, f)
    }

    /// Uniformly distributed point of the simplex (one counter of `rng`).
    pub fn random(d: usize, sigma: BinaryVector, rng: &mut Rng) -> Result<Self> {
        let f = random_simplex_point(1 << sigma.len(), rng);
        Self::new(d, sigma, f)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of Alice–Bob pairs `K`.
    pub fn pairs(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &BinaryVector {
        &self.sigma
    }

    pub fn fidelities(&self) -> &[f64] {
        &self.fidelities
    }

    pub fn fidelity(&self, alpha: &BinaryVector) -> f64 {
        self.fidelities[alpha.index()]
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(DescriptorJson {
            version: DESCRIPTOR_VERSION,
            d: self.d,
            k: self.pairs(),
            sigma: self.sigma.bits().to_vec(),
            fidelities: self.fidelities.clone(),
        })
        .expect("plain data")
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        let j: DescriptorJson = serde_json::from_value(value)?;
        if j.version != DESCRIPTOR_VERSION {
            return Err(Error::Format(format!("unsupported descriptor version {}", j.version)));
        }
        if j.sigma.len() != j.k {
            return Err(Error::Format(format!(
                "K = {} but sigma has {} bits",
                j.k,
                j.sigma.len()
            )));
        }
        Self::new(j.d, BinaryVector::new(j.sigma)?, j.fidelities)
    }
}

/// Fidelity vector that need not lie in the simplex, e.g. the image of a
/// state under a partial transposition. Entries still sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedFidelities {
    pub d: usize,
    pub sigma: BinaryVector,
    pub values: Vec<f64>,
}

impl SignedFidelities {
    /// Fails unless the vector is a valid simplex point.
    pub fn into_descriptor(self) -> Result<StateDescriptor> {
        StateDescriptor::new(self.d, self.sigma, self.values)
    }

    pub fn min_entry(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl From<&StateDescriptor> for SignedFidelities {
    fn from(desc: &StateDescriptor) -> Self {
        SignedFidelities { d: desc.d, sigma: desc.sigma.clone(), values: desc.fidelities.clone() }
    }
}

/// Overlaps `a_i = |⟨ψ_i|φ_i⟩|²` of an extremal product state
/// `P_ψ1 ⊗ … ⊗ P_ψK ⊗ P_φ1 ⊗ … ⊗ P_φK`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductStateSpec {
    a: Vec<f64>,
}

impl ProductStateSpec {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("product state needs at least one pair".into()));
        }
        if let Some(x) = a.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidArgument(format!("overlap {x} outside [0, 1]")));
        }
        Ok(ProductStateSpec { a })
    }

    /// Independent uniform overlaps (one counter of `rng`).
    pub fn random(k: usize, rng: &mut Rng) -> Self {
        ProductStateSpec { a: random_unit_interval(k, rng) }
    }

    pub fn pairs(&self) -> usize {
        self.a.len()
    }

    pub fn overlaps(&self) -> &[f64] {
        &self.a
    }

    /// `b_i = a_i / d`.
    pub fn scaled_overlaps(&self, d: usize) -> Vec<f64> {
        self.a.iter().map(|a| a / d as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BinaryVector {
        s.parse().unwrap()
    }

    #[test]
    fn validation() {
        assert!(StateDescriptor::new(2, bv("0"), vec![0.6, 0.6]).is_err());
        assert!(StateDescriptor::new(2, bv("0"), vec![1.1, -0.1]).is_err());
        assert!(StateDescriptor::new(2, bv("00"), vec![0.5, 0.5]).is_err());
        assert!(StateDescriptor::new(1, bv("0"), vec![0.5, 0.5]).is_err());
        assert!(StateDescriptor::new(2, bv("0"), vec![f64::NAN, 1.0]).is_err());
        assert!(StateDescriptor::new(2, bv("0"), vec![1.0 + 1e-13, -1e-13]).is_ok());
        let err = StateDescriptor::new(2, bv("0"), vec![0.6, 0.6]).unwrap_err();
        assert!(err.to_string().contains("fidelities must sum to 1"));
    }

    #[test]
    fn maximally_mixed_sums_to_one() {
        for s in ["0", "1", "01", "11", "101"] {
            let m = StateDescriptor::maximally_mixed(3, bv(s)).unwrap();
            assert!((m.fidelities().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
        let m = StateDescriptor::maximally_mixed(2, bv("00")).unwrap();
        assert_eq!(m.fidelities(), &[9.0 / 16.0, 3.0 / 16.0, 3.0 / 16.0, 1.0 / 16.0]);
    }

    #[test]
    fn json_shape() {
        let desc = StateDescriptor::new(2, bv("00"), vec![0.4, 0.3, 0.3, 0.0]).unwrap();
        let v = desc.to_json_value();
        assert_eq!(v["version"], 1);
        assert_eq!(v["K"], 2);
        assert_eq!(v["sigma"], serde_json::json!([0, 0]));
        assert_eq!(StateDescriptor::from_json_value(v).unwrap(), desc);
        let bad = serde_json::json!({"version": 1, "d": 2, "K": 2, "sigma": [0], "fidelities": [1.0, 0.0]});
        assert!(StateDescriptor::from_json_value(bad).is_err());
        let bad = serde_json::json!({"version": 2, "d": 2, "K": 1, "sigma": [0], "fidelities": [1.0, 0.0]});
        assert!(StateDescriptor::from_json_value(bad).is_err());
    }

    #[test]
    fn product_spec_validation() {
        assert!(ProductStateSpec::new(vec![0.5, 1.2]).is_err());
        let s = ProductStateSpec::new(vec![1.0, 0.5]).unwrap();
        assert_eq!(s.scaled_overlaps(2), vec![0.5, 0.25]);
    }
}
