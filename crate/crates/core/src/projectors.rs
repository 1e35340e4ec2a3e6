//! Invariant projector families.
//!
//! For a single Alice–Bob pair on `C^d ⊗ C^d`:
//!
//! * `F = Σ |ij⟩⟨ji|` is the flip, `P⁺ = (1/d) Σ |ii⟩⟨jj|`;
//! * `Q⁰ = (I + F)/2`, `Q¹ = (I − F)/2` span the `U ⊗ U` commutant;
//! * `P¹ = P⁺`, `P⁰ = I − P⁺` span the `U ⊗ conj(U)` commutant.
//!
//! For `K` pairs, `Π^α_(σ) = ⊗_i Π^{α_i}_(σ_i)` where the `i`-th factor acts on
//! subsystems `(i, K + i)` and `Π_(0) = Q`, `Π_(1) = P`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::Operator;
use crate::{MAX_LOCAL_DIM, MAX_PAIRS};

/// Length-`K` vector over `{0, 1}`.
///
/// Bit `α₁` is the most significant bit of the integer encoding, so
/// `(α₁, α₂) = (1, 0)` has index 2. Bitstrings print as `α₁α₂…α_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryVector(Vec<u8>);

impl BinaryVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("binary vector of length 0".into()));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidArgument(format!("bit value {b} not in {{0, 1}}")));
        }
        Ok(BinaryVector(bits))
    }

    pub fn zeros(k: usize) -> Self {
        assert!(k >= 1);
        BinaryVector(vec![0; k])
    }

    pub fn ones(k: usize) -> Self {
        assert!(k >= 1);
        BinaryVector(vec![1; k])
    }

    /// Inverse of [`BinaryVector::index`].
    pub fn from_index(k: usize, index: usize) -> Self {
        assert!(k >= 1 && index < (1usize << k), "index {index} out of range for K = {k}");
        BinaryVector((0..k).map(|i| ((index >> (k - 1 - i)) & 1) as u8).collect())
    }

    /// All `2^K` vectors in index order.
    pub fn all(k: usize) -> impl Iterator<Item = BinaryVector> {
        (0..1usize << k).map(move |i| BinaryVector::from_index(k, i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    /// `|α|`.
    pub fn weight(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    fn check_len(&self, other: &BinaryVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    /// Addition mod 2.
    pub fn xor(&self, other: &BinaryVector) -> Result<BinaryVector> {
        self.check_len(other)?;
        Ok(BinaryVector(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    /// Componentwise product `σα = (σ₁α₁, …, σ_Kα_K)`.
    pub fn product(&self, other: &BinaryVector) -> Result<BinaryVector> {
        self.check_len(other)?;
        Ok(BinaryVector(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect()))
    }

    /// `true` when every set bit of `other` is also set in `self`.
    pub fn covers(&self, other: &BinaryVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// The vector with the bit for pair `i` (1-based) removed.
    pub fn without(&self, i: usize) -> Result<BinaryVector> {
        if i == 0 || i > self.len() {
            return Err(Error::InvalidArgument(format!("pair {i} out of range 1..={}", self.len())));
        }
        let mut bits = self.0.clone();
        bits.remove(i - 1);
        BinaryVector::new(bits)
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!("'{other}' in bitstring '{s}'"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BinaryVector::new(bits)
    }
}

/// Alice–Bob pair `i`: Alice on subsystem `i`, Bob on subsystem `K + i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairLabel {
    pub index: usize,
    pub pairs: usize,
}

impl PairLabel {
    pub fn new(index: usize, pairs: usize) -> Result<Self> {
        if index == 0 || index > pairs {
            return Err(Error::InvalidArgument(format!("pair {index} out of range 1..={pairs}")));
        }
        Ok(PairLabel { index, pairs })
    }

    pub fn alice_slot(&self) -> usize {
        self.index
    }

    pub fn bob_slot(&self) -> usize {
        self.index + self.pairs
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Swap operator on `C^d ⊗ C^d`.
pub fn flip(d: usize) -> Operator {
    Operator::from_fn(d, 2, |r, c| {
        let (i, j) = (r / d, r % d);
        if c == j * d + i { real(1.0) } else { real(0.0) }
    })
    .expect("d >= 2")
}

/// Projector onto `d^{-1/2} Σ |ii⟩`.
pub fn pplus(d: usize) -> Operator {
    Operator::from_fn(d, 2, |r, c| {
        if r % (d + 1) == 0 && c % (d + 1) == 0 { real(1.0 / d as f64) } else { real(0.0) }
    })
    .expect("d >= 2")
}

/// `Q⁰` (symmetric subspace) or `Q¹` (antisymmetric subspace).
pub fn q_proj(d: usize, alpha: u8) -> Operator {
    assert!(alpha <= 1, "alpha must be a bit");
    let sign = if alpha == 0 { 0.5 } else { -0.5 };
    let id = Operator::identity(d, 2).expect("d >= 2");
    let mut out = id.scale(0.5);
    out.add_scaled_assign(sign, &flip(d)).expect("same shape");
    out
}

/// `P¹ = P⁺` or `P⁰ = I − P⁺`.
pub fn p_proj(d: usize, alpha: u8) -> Operator {
    assert!(alpha <= 1, "alpha must be a bit");
    if alpha == 1 {
        pplus(d)
    } else {
        Operator::identity(d, 2).expect("d >= 2").sub(&pplus(d)).expect("same shape")
    }
}

/// `Q^α` when `σ = 0`, `P^α` when `σ = 1`.
pub fn pi_proj(d: usize, sigma: u8, alpha: u8) -> Operator {
    match sigma {
        0 => q_proj(d, alpha),
        1 => p_proj(d, alpha),
        _ => panic!("sigma must be a bit"),
    }
}

/// Closed-form trace of a single-pair projector.
fn pair_trace(d: usize, sigma: u8, alpha: u8) -> f64 {
    let d = d as f64;
    match (sigma, alpha) {
        (0, 0) => 0.5 * d * (d + 1.0),
        (0, _) => 0.5 * d * (d - 1.0),
        (_, 0) => d * d - 1.0,
        _ => 1.0,
    }
}

/// `Tr Π^α_(σ) = ∏_i t_i` with `t = d(d ± 1)/2` for `Q^{0/1}`, `d² − 1` for
/// `P⁰` and `1` for `P¹`.
pub fn trace_formula(d: usize, sigma: &BinaryVector, alpha: &BinaryVector) -> f64 {
    assert_eq!(sigma.len(), alpha.len(), "sigma and alpha lengths differ");
    sigma.bits().iter().zip(alpha.bits()).map(|(&s, &a)| pair_trace(d, s, a)).product()
}

pub(crate) fn check_scale(d: usize, k: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    if d > MAX_LOCAL_DIM || k > MAX_PAIRS {
        return Err(Error::ScaleExceeded(format!(
            "d = {d}, K = {k} (supported: d <= {MAX_LOCAL_DIM}, K <= {MAX_PAIRS})"
        )));
    }
    Ok(())
}

/// Places pair operators on `(C^d)^{⊗2K}`, factor `i` on subsystems `(i, K+i)`.
fn embed_pairs(d: usize, factors: &[Operator]) -> Operator {
    let k = factors.len();
    let n = 2 * k;
    let digit = |idx: usize, slot: usize| (idx / d.pow((n - slot) as u32)) % d;
    Operator::from_fn(d, n, |r, c| {
        let mut acc = real(1.0);
        for (i, f) in factors.iter().enumerate() {
            let (a, b) = (i + 1, k + i + 1);
            let fr = digit(r, a) * d + digit(r, b);
            let fc = digit(c, a) * d + digit(c, b);
            acc *= f.get(fr, fc);
            if acc == real(0.0) {
                break;
            }
        }
        acc
    })
    .expect("scale checked")
}

type CacheKey = (usize, BinaryVector, BinaryVector);
type Cell = Arc<OnceLock<Arc<Operator>>>;

fn cache() -> &'static Mutex<HashMap<CacheKey, Cell>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Cell>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Π^α_(σ)` on `(C^d)^{⊗2K}`; cached per `(d, σ, α)` for the process lifetime.
pub fn multi_pi(d: usize, sigma: &BinaryVector, alpha: &BinaryVector) -> Result<Arc<Operator>> {
    if sigma.len() != alpha.len() {
        return Err(Error::LengthMismatch { expected: sigma.len(), got: alpha.len() });
    }
    check_scale(d, sigma.len())?;
    let cell = {
        let mut map = cache().lock().unwrap_or_else(|e| e.into_inner());
        map.entry((d, sigma.clone(), alpha.clone())).or_default().clone()
    };
    Ok(cell
        .get_or_init(|| {
            let factors: Vec<Operator> = sigma
                .bits()
                .iter()
                .zip(alpha.bits())
                .map(|(&s, &a)| pi_proj(d, s, a))
                .collect();
            Arc::new(embed_pairs(d, &factors))
        })
        .clone())
}

/// All `2^K` projectors of family `σ`, in index order of `α`.
pub fn family(d: usize, sigma: &BinaryVector) -> Result<Vec<Arc<Operator>>> {
    BinaryVector::all(sigma.len()).map(|alpha| multi_pi(d, sigma, &alpha)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::SubsystemSet;

    fn bv(s: &str) -> BinaryVector {
        s.parse().unwrap()
    }

    #[test]
    fn binary_vector_encoding() {
        assert_eq!(bv("10").index(), 2);
        assert_eq!(bv("011").index(), 3);
        assert_eq!(BinaryVector::from_index(3, 6), bv("110"));
        assert_eq!(bv("1101").weight(), 3);
        assert_eq!(bv("01").xor(&bv("11")).unwrap(), bv("10"));
        assert_eq!(bv("01").product(&bv("11")).unwrap(), bv("01"));
        assert!(bv("11").covers(&bv("01")));
        assert!(!bv("10").covers(&bv("01")));
        assert_eq!(bv("101").without(2).unwrap(), bv("11"));
        assert!(bv("01").xor(&bv("1")).is_err());
        assert!("".parse::<BinaryVector>().is_err());
        assert!("012".parse::<BinaryVector>().is_err());
        assert_eq!(bv("0110").to_string(), "0110");
        let all: Vec<usize> = BinaryVector::all(2).map(|v| v.index()).collect();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn pair_label_slots() {
        let p = PairLabel::new(2, 3).unwrap();
        assert_eq!((p.alice_slot(), p.bob_slot()), (2, 5));
        assert!(PairLabel::new(4, 3).is_err());
    }

    #[test]
    fn flip_swaps_basis_products() {
        let f = flip(2);
        // F|01> = |10>: column 1 has its one at row 2
        assert_eq!(f.get(2, 1), real(1.0));
        assert_eq!(f.get(1, 1), real(0.0));
        for d in 2..=4 {
            let f = flip(d);
            assert_eq!(f.matmul(&f).unwrap(), Operator::identity(d, 2).unwrap());
        }
        assert_eq!(flip(3).trace(), real(3.0));
    }

    #[test]
    fn pplus_is_rank_one_projector() {
        let p = pplus(2);
        assert!(p.matmul(&p).unwrap().max_abs_diff(&p).unwrap() <= 1e-12);
        for d in 2..=4 {
            assert!((pplus(d).trace() - real(1.0)).norm() < 1e-14);
            let pt = flip(d).partial_transpose(&SubsystemSet::new([2]).unwrap()).unwrap();
            assert_eq!(pt, pplus(d).scale(d as f64));
        }
    }

    #[test]
    fn q_projectors() {
        assert_eq!(q_proj(2, 0).trace(), real(3.0));
        assert_eq!(q_proj(2, 1).trace(), real(1.0));
        for d in 2..=4 {
            let zero = q_proj(d, 0).matmul(&q_proj(d, 1)).unwrap();
            assert!(zero.frobenius_norm() < 1e-15);
            let sum = q_proj(d, 0).add(&q_proj(d, 1)).unwrap();
            assert_eq!(sum, Operator::identity(d, 2).unwrap());
        }
        let eig = q_proj(3, 1).eigen().unwrap();
        assert!(eig.values.iter().all(|l| l.abs() < 1e-12 || (l - 1.0).abs() < 1e-12));
        let rank = eig.values.iter().filter(|l| (*l - 1.0).abs() < 1e-12).count();
        assert_eq!(rank, 3);
    }

    #[test]
    fn p_projectors() {
        assert_eq!(p_proj(2, 1), pplus(2));
        assert!((p_proj(3, 0).trace() - real(8.0)).norm() < 1e-14);
        for d in 2..=4 {
            assert!(p_proj(d, 0).matmul(&p_proj(d, 1)).unwrap().frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn pi_dispatch() {
        for d in 2..=3 {
            for a in 0..=1 {
                assert_eq!(pi_proj(d, 0, a), q_proj(d, a));
                assert_eq!(pi_proj(d, 1, a), p_proj(d, a));
            }
        }
        assert!((pi_proj(2, 1, 1).trace() - real(1.0)).norm() < 1e-15);
    }

    #[test]
    fn single_pair_needs_no_embedding() {
        for a in 0..=1u8 {
            let m = multi_pi(3, &bv("0"), &BinaryVector::new(vec![a]).unwrap()).unwrap();
            assert_eq!(*m, q_proj(3, a));
        }
    }

    #[test]
    fn embedding_pairs_first_with_third() {
        // F_{1|3} ⊗ I_{2|4} sends |a b c e> to |c b a e>
        let d = 2;
        let f13 = embed_pairs(d, &[flip(d), Operator::identity(d, 2).unwrap()]);
        let idx = |a: usize, b: usize, c: usize, e: usize| ((a * d + b) * d + c) * d + e;
        assert_eq!(f13.get(idx(1, 0, 0, 1), idx(0, 0, 1, 1)), real(1.0));
        assert_eq!(f13.get(idx(0, 1, 0, 1), idx(0, 1, 0, 1)), real(1.0));
        assert_eq!(f13.get(idx(1, 0, 0, 1), idx(1, 0, 0, 1)), real(0.0));
    }

    #[test]
    fn completeness_and_trace_examples() {
        let total: f64 = family(2, &bv("00")).unwrap().iter().map(|p| p.trace().re).sum();
        assert!((total - 16.0).abs() < 1e-12);
        let q11 = multi_pi(2, &bv("00"), &bv("11")).unwrap();
        assert!((q11.trace().re - 1.0).abs() < 1e-12);
        assert_eq!(trace_formula(2, &bv("00"), &bv("00")), 9.0);
        assert_eq!(trace_formula(3, &bv("11"), &bv("10")), 8.0);
        for d in 2..=4 {
            assert_eq!(trace_formula(d, &bv("11"), &bv("11")), 1.0);
        }
    }

    #[test]
    fn scale_limits() {
        assert!(matches!(multi_pi(5, &bv("0"), &bv("0")), Err(Error::ScaleExceeded(_))));
        assert!(matches!(multi_pi(2, &bv("0000"), &bv("0000")), Err(Error::ScaleExceeded(_))));
        assert!(matches!(multi_pi(2, &bv("00"), &bv("0")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn cache_returns_shared_instance() {
        let a = multi_pi(2, &bv("01"), &bv("10")).unwrap();
        let b = multi_pi(2, &bv("01"), &bv("10")).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
