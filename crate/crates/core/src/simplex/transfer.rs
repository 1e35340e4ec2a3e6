//! Fidelity transfer matrices.
//!
//! A partial transposition `τ_μ` maps the ν-family onto the (μ ⊕ ν)-family:
//! `τ_μ Π̃^α_(ν) = Σ_β Z^{αβ}_(μ|ν) Π̃^β_(μ⊕ν)`, so fidelities transform as
//! `f' = fᵀ Z_(μ|ν)`. Per pair the factor is `I` (μ_i = 0), `X` (μ_i = 1,
//! ν_i = 0) or `Y = X⁻¹` (μ_i = 1, ν_i = 1).

use crate::error::{Error, Result};
use crate::projectors::BinaryVector;

use super::descriptor::{check_dims, SignedFidelities, StateDescriptor};

/// Dense real `2^K × 2^K` matrix, row-major, with the `(μ, ν, d)` it was built for.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    size: usize,
    data: Vec<f64>,
    pub d: usize,
    pub mu: BinaryVector,
    pub nu: BinaryVector,
}

impl TransferMatrix {
    fn from_rows(d: usize, mu: BinaryVector, nu: BinaryVector, rows: &[[f64; 2]; 2]) -> Self {
        TransferMatrix {
            size: 2,
            data: rows.iter().flatten().copied().collect(),
            d,
            mu,
            nu,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.size + c]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.size).map(|r| r.iter().sum()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.size).all(|r| (0..self.size).all(|c| self.get(r, c) == if r == c { 1.0 } else { 0.0 }))
    }

    /// Plain matrix product; the provenance of the result is `(μ ⊕ μ', ν)`
    /// as for a composition of transpositions.
    pub fn matmul(&self, other: &TransferMatrix) -> Result<TransferMatrix> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch(format!(
                "transfer matrices of size {} and {}",
                self.size, other.size
            )));
        }
        let n = self.size;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(TransferMatrix {
            size: n,
            data,
            d: self.d,
            mu: self.mu.xor(&other.mu)?,
            nu: self.nu.clone(),
        })
    }

    fn kron(&self, other: &TransferMatrix) -> TransferMatrix {
        let (a, b) = (self.size, other.size);
        let n = a * b;
        let mut data = vec![0.0; n * n];
        for ra in 0..a {
            for ca in 0..a {
                let x = self.get(ra, ca);
                for rb in 0..b {
                    for cb in 0..b {
                        data[(ra * b + rb) * n + ca * b + cb] = x * other.get(rb, cb);
                    }
                }
            }
        }
        let cat = |x: &BinaryVector, y: &BinaryVector| {
            BinaryVector::new([x.bits(), y.bits()].concat()).expect("bits")
        };
        TransferMatrix {
            size: n,
            data,
            d: self.d,
            mu: cat(&self.mu, &other.mu),
            nu: cat(&self.nu, &other.nu),
        }
    }

    /// `fᵀ Z`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.size, "fidelity vector length");
        let n = self.size;
        let mut out = vec![0.0; n];
        for (a, &fa) in f.iter().enumerate() {
            if fa == 0.0 {
                continue;
            }
            for (b, o) in out.iter_mut().enumerate() {
                *o += fa * self.data[a * n + b];
            }
        }
        out
    }
}

/// `X = (1/d) [[d−1, 1], [d+1, −1]]`, the transfer `Q̃ → P̃` under one
/// transposition.
pub fn x_matrix(d: usize) -> TransferMatrix {
    assert!(d >= 2);
    let d = d as f64;
    TransferMatrix::from_rows(
        d as usize,
        BinaryVector::ones(1),
        BinaryVector::zeros(1),
        &[[(d - 1.0) / d, 1.0 / d], [(d + 1.0) / d, -1.0 / d]],
    )
}

/// `Y = (1/2) [[1, 1], [1+d, 1−d]]`, the transfer `P̃ → Q̃`.
pub fn y_matrix(d: usize) -> TransferMatrix {
    assert!(d >= 2);
    let d = d as f64;
    TransferMatrix::from_rows(
        d as usize,
        BinaryVector::ones(1),
        BinaryVector::ones(1),
        &[[0.5, 0.5], [(1.0 + d) / 2.0, (1.0 - d) / 2.0]],
    )
}

fn pair_factor(mu: u8, nu: u8, d: usize) -> TransferMatrix {
    match (mu, nu) {
        (0, _) => TransferMatrix::from_rows(
            d,
            BinaryVector::zeros(1),
            BinaryVector::new(vec![nu]).expect("bit"),
            &[[1.0, 0.0], [0.0, 1.0]],
        ),
        (_, 0) => x_matrix(d),
        _ => y_matrix(d),
    }
}

/// `Z_(μ|ν) = ⊗_i Z_(μ_i|ν_i)`, pair 1 outermost.
pub fn z_matrix(mu: &BinaryVector, nu: &BinaryVector, d: usize) -> Result<TransferMatrix> {
    if mu.len() != nu.len() {
        return Err(Error::LengthMismatch { expected: nu.len(), got: mu.len() });
    }
    check_dims(d, mu.len())?;
    let mut factors = mu.bits().iter().zip(nu.bits()).map(|(&m, &n)| pair_factor(m, n, d));
    let first = factors.next().expect("K >= 1");
    Ok(factors.fold(first, |acc, f| acc.kron(&f)))
}

/// Fidelities of `τ_μ ρ` in family `σ ⊕ μ`; negative entries mean `τ_μ ρ` is
/// not positive.
pub fn transform_fidelities(desc: &StateDescriptor, mu: &BinaryVector) -> Result<SignedFidelities> {
    SignedFidelities::from(desc).transform(mu)
}

impl SignedFidelities {
    pub fn transform(&self, mu: &BinaryVector) -> Result<SignedFidelities> {
        let z = z_matrix(mu, &self.sigma, self.d)?;
        Ok(SignedFidelities {
            d: self.d,
            sigma: self.sigma.xor(mu)?,
            values: z.apply(&self.values),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BinaryVector {
        s.parse().unwrap()
    }

    fn max_diff(a: &TransferMatrix, b: &[f64]) -> f64 {
        a.data.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn x_and_y_at_qubit_dimension() {
        // (1/2)[[1, 1], [3, -1]] for both
        let expected = [0.5, 0.5, 1.5, -0.5];
        assert!(max_diff(&x_matrix(2), &expected) < 1e-15);
        assert!(max_diff(&y_matrix(2), &expected) < 1e-15);
        let sq = x_matrix(2).matmul(&x_matrix(2)).unwrap();
        assert!(max_diff(&sq, &[1.0, 0.0, 0.0, 1.0]) < 1e-15);
    }

    #[test]
    fn x_and_y_are_inverse_with_unit_row_sums() {
        for d in 2..=6 {
            let (x, y) = (x_matrix(d), y_matrix(d));
            for p in [x.matmul(&y).unwrap(), y.matmul(&x).unwrap()] {
                assert!(max_diff(&p, &[1.0, 0.0, 0.0, 1.0]) <= 1e-12);
            }
            for s in x.row_sums().into_iter().chain(y.row_sums()) {
                assert!((s - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn z_table_entries() {
        for nu in BinaryVector::all(2) {
            assert!(z_matrix(&bv("00"), &nu, 3).unwrap().is_identity());
        }
        let xx = x_matrix(2).kron(&x_matrix(2));
        assert_eq!(z_matrix(&bv("11"), &bv("00"), 2).unwrap().data, xx.data);
        // row (01): I ⊗ Y under ν = (11)
        let iy = pair_factor(0, 1, 3).kron(&y_matrix(3));
        assert_eq!(z_matrix(&bv("01"), &bv("11"), 3).unwrap().data, iy.data);
        // row (10), column (01): X ⊗ I
        let xi = x_matrix(3).kron(&pair_factor(0, 1, 3));
        assert_eq!(z_matrix(&bv("10"), &bv("01"), 3).unwrap().data, xi.data);
        assert!(z_matrix(&bv("1"), &bv("00"), 2).is_err());
    }

    // τ_μ' ∘ τ_μ = τ_{μ⊕μ'}
    #[test]
    fn composition_law() {
        for d in 2..=3 {
            for k in 1..=2 {
                for mu in BinaryVector::all(k) {
                    for mu2 in BinaryVector::all(k) {
                        for nu in BinaryVector::all(k) {
                            let lhs = z_matrix(&mu, &nu, d)
                                .unwrap()
                                .matmul(&z_matrix(&mu2, &mu.xor(&nu).unwrap(), d).unwrap())
                                .unwrap();
                            let rhs = z_matrix(&mu.xor(&mu2).unwrap(), &nu, d).unwrap();
                            assert!(max_diff(&lhs, &rhs.data) < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn werner_pair_threshold() {
        let d = 3;
        for q1 in [0.0, 0.2, 0.5, 0.7, 1.0] {
            let desc = StateDescriptor::new(d, bv("0"), vec![1.0 - q1, q1]).unwrap();
            let t = transform_fidelities(&desc, &bv("1")).unwrap();
            assert_eq!(t.sigma, bv("1"));
            assert!((t.values[1] - (1.0 - 2.0 * q1) / d as f64).abs() < 1e-15);
            assert!((t.values.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_transform() {
        let desc = StateDescriptor::new(2, bv("01"), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let t = transform_fidelities(&desc, &bv("00")).unwrap();
        assert_eq!(t.values, desc.fidelities());
        assert_eq!(&t.sigma, desc.sigma());
    }
}
