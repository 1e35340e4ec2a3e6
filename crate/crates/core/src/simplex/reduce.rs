//! Reductions over Alice–Bob pairs.

use crate::error::{Error, Result};
use crate::projectors::BinaryVector;
use crate::tensor::Operator;

use super::descriptor::StateDescriptor;

/// Trace out pair `i` (subsystems `i` and `K + i`, 1-based). The result is
/// σ_(i)-invariant with `f'_{α₁…α_{K−1}} = Σ_β f_{α₁…α_{i−1} β α_i…α_{K−1}}`.
pub fn reduce_pair(desc: &StateDescriptor, i: usize) -> Result<StateDescriptor> {
    let k = desc.pairs();
    if k < 2 {
        return Err(Error::InvalidArgument("cannot reduce a single-pair state".into()));
    }
    if i == 0 || i > k {
        return Err(Error::InvalidArgument(format!("pair {i} out of range 1..={k}")));
    }
    let sigma = desc.sigma().without(i)?;
    let mut f = vec![0.0; 1 << (k - 1)];
    for alpha in BinaryVector::all(k) {
        let reduced = alpha.without(i)?;
        f[reduced.index()] += desc.fidelity(&alpha);
    }
    StateDescriptor::new(desc.d(), sigma, f)
}

/// Outcome of tracing out a mixed pair `A_i ⊗ B_j` (`i ≠ j`).
///
/// The state factorizes into the invariant state of the `K − 2` untouched
/// pairs and the maximally mixed state `I/d²` on the orphaned `B_i ⊗ A_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedReduction {
    /// `None` when no complete pair survives (`K = 2`).
    pub pairs: Option<StateDescriptor>,
    pub d: usize,
}

impl MixedReduction {
    /// Normalized `I/d²` left on the two unpaired subsystems.
    pub fn orphan_state(&self) -> Operator {
        let d2 = (self.d * self.d) as f64;
        Operator::identity(self.d, 2).expect("d >= 2").scale(1.0 / d2)
    }
}

pub fn reduce_mixed_pair(desc: &StateDescriptor, i: usize, j: usize) -> Result<MixedReduction> {
    let k = desc.pairs();
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "mixed pair needs distinct indices, got A_{i} ⊗ B_{j}"
        )));
    }
    for x in [i, j] {
        if x == 0 || x > k {
            return Err(Error::InvalidArgument(format!("pair {x} out of range 1..={k}")));
        }
    }
    let pairs = if k == 2 {
        None
    } else {
        let first = reduce_pair(desc, i.max(j))?;
        Some(reduce_pair(&first, i.min(j))?)
    };
    Ok(MixedReduction { pairs, d: desc.d() })
}
