//! Hermitian eigen-decomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Jacobi rotation to the resulting
//! 2 × 2 block. Sweeps stop when the off-diagonal Frobenius mass falls below
//! `EPS · ‖A‖_F`.

use num_complex::Complex64;

use super::Operator;
use crate::error::{Error, Result};

/// Tolerance on `max |A − A†|` accepted as Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;

const EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 60;

/// Eigenvalues in ascending order with unit eigenvectors stored as columns
/// of a row-major `n × n` array.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    vectors: Vec<Complex64>,
    n: usize,
}

impl HermitianEigen {
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self.vectors[i * self.n + j]).collect()
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

/// `‖A v − λ v‖₂`.
pub fn residual(a: &Operator, lambda: f64, v: &[Complex64]) -> f64 {
    let n = a.side();
    let e = a.entries();
    (0..n)
        .map(|i| {
            let av: Complex64 = (0..n).map(|j| e[i * n + j] * v[j]).sum();
            (av - v[i] * lambda).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

pub fn hermitian_eigen(op: &Operator) -> Result<HermitianEigen> {
    let defect = op.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = op.side();
    // symmetrize so the rotations act on an exactly Hermitian matrix
    let mut a: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        for c in 0..n {
            a[r * n + c] = (op.get(r, c) + op.get(c, r).conj()) * 0.5;
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = EPS * scale.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[r * n + c].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_j] = v[i * n + old_j];
        }
    }
    Ok(HermitianEigen { values, vectors, n })
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / r; // e^{iφ}
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = phase.conj() * (-s);
    let gqq = phase.conj() * c;

    // A ← A G
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * gpp + akq * gqp;
        a[k * n + q] = akp * gpq + akq * gqq;
    }
    // A ← G† A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = gpp.conj() * apk + gqp.conj() * aqk;
        a[q * n + k] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
    // V ← V G
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * gpp + vkq * gqp;
        v[k * n + q] = vkp * gpq + vkq * gqq;
    }
}

impl Operator {
    /// Full spectrum of a Hermitian operator.
    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eigen(self)
    }

    /// Smallest eigenvalue together with its certifying unit eigenvector.
    pub fn min_eigenpair(&self) -> Result<(f64, Vec<Complex64>)> {
        let eig = hermitian_eigen(self)?;
        Ok((eig.values[0], eig.vector(0)))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.min_eigenpair().map(|(l, _)| l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::SubsystemSet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pplus2() -> Operator {
        Operator::from_fn(2, 2, |r, col| {
            if r % 3 == 0 && col % 3 == 0 { c(0.5, 0.0) } else { c(0.0, 0.0) }
        })
        .unwrap()
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = Operator::new(2, 1, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let eig = y.eigen().unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        for j in 0..2 {
            assert!(residual(&y, eig.values[j], &eig.vector(j)) < 1e-13);
        }
    }

    #[test]
    fn transposed_maximally_entangled_pair() {
        let pt = pplus2().partial_transpose(&SubsystemSet::new([2]).unwrap()).unwrap();
        let (l, v) = pt.min_eigenpair().unwrap();
        assert!((l + 0.5).abs() < 1e-14);
        assert!(residual(&pt, l, &v) < 1e-12);
    }

    #[test]
    fn scalar_matrix() {
        let a = Operator::identity(2, 2).unwrap().scale(0.25);
        assert!((a.min_eigenvalue().unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = Operator::new(2, 1, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(a.min_eigenvalue(), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn random_hermitian_residuals() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [1usize, 2, 3] {
            let g = Operator::from_fn(3, n, |_, _| c(next(), next())).unwrap();
            let h = g.add(&g.adjoint()).unwrap();
            let eig = h.eigen().unwrap();
            let norm = h.frobenius_norm();
            let tr: f64 = eig.values.iter().sum();
            assert!((tr - h.trace().re).abs() < 1e-10 * norm);
            for j in 0..eig.dim() {
                assert!(residual(&h, eig.values[j], &eig.vector(j)) <= 1e-9 * norm);
            }
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
