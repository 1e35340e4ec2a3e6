//! Counter-based randomness and Haar-distributed unitaries.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::Operator;

/// Reproducible random source identified by `(seed, counter)`.
///
/// Every draw consumes one counter value and reads from the ChaCha20 stream
/// selected by that counter, so a given `(seed, counter)` always yields the
/// same sample. Parallel users partition the counter range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rng {
    seed: u64,
    counter: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { seed, counter: 0 }
    }

    pub fn with_counter(seed: u64, counter: u64) -> Self {
        Rng { seed, counter }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// The generator `offset` counters ahead, without advancing `self`.
    pub fn at(&self, offset: u64) -> Rng {
        Rng { seed: self.seed, counter: self.counter.wrapping_add(offset) }
    }

    pub fn advance(&mut self, by: u64) {
        self.counter = self.counter.wrapping_add(by);
    }

    /// Stream for the current counter; the counter moves on by one.
    pub fn next_stream(&mut self) -> ChaCha20Rng {
        let mut s = ChaCha20Rng::seed_from_u64(self.seed);
        s.set_stream(self.counter);
        self.counter = self.counter.wrapping_add(1);
        s
    }
}

fn standard_complex_gaussian(stream: &mut ChaCha20Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(stream);
    let im: f64 = StandardNormal.sample(stream);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random `d × d` unitary (one counter of `rng`).
///
/// Householder QR of a complex Ginibre matrix, followed by multiplying each
/// column of `Q` by the phase of the matching diagonal entry of `R`.
pub fn haar_unitary(d: usize, rng: &mut Rng) -> Operator {
    assert!(d >= 2, "haar_unitary needs d >= 2");
    let mut stream = rng.next_stream();
    let mut a: Vec<Complex64> = (0..d * d).map(|_| standard_complex_gaussian(&mut stream)).collect();
    let mut q = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        q[i * d + i] = Complex64::new(1.0, 0.0);
    }
    let mut r_diag = vec![Complex64::new(0.0, 0.0); d];

    for k in 0..d {
        let norm = (k..d).map(|i| a[i * d + k].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a[k * d + k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        r_diag[k] = alpha;
        let mut v: Vec<Complex64> = (k..d).map(|i| a[i * d + k]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        // A ← (I − 2 v v†) A on rows k..d
        for col in 0..d {
            let dot: Complex64 = (k..d).map(|i| v[i - k].conj() * a[i * d + col]).sum();
            for i in k..d {
                a[i * d + col] -= v[i - k] * dot * 2.0;
            }
        }
        // Q ← Q (I − 2 v v†) on columns k..d
        for row in 0..d {
            let dot: Complex64 = (k..d).map(|j| q[row * d + j] * v[j - k]).sum();
            for j in k..d {
                q[row * d + j] -= dot * v[j - k].conj() * 2.0;
            }
        }
    }
    for (j, r) in r_diag.iter().enumerate() {
        let ph = if r.norm() > 0.0 { r / r.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..d {
            q[row * d + j] *= ph;
        }
    }
    Operator::new(d, 1, q).expect("d x d unitary")
}

/// Haar-random unit vector in `C^dim` (one counter of `rng`).
pub fn random_unit_vector(dim: usize, rng: &mut Rng) -> Vec<Complex64> {
    let mut stream = rng.next_stream();
    let mut v: Vec<Complex64> = (0..dim).map(|_| standard_complex_gaussian(&mut stream)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Full-rank random density matrix `G G† / Tr(G G†)` (one counter of `rng`).
pub fn random_density_matrix(d: usize, n: usize, rng: &mut Rng) -> Operator {
    let mut stream = rng.next_stream();
    let g = Operator::from_fn(d, n, |_, _| standard_complex_gaussian(&mut stream)).expect("scale");
    let rho = g.matmul(&g.adjoint()).expect("same shape");
    let tr = rho.trace().re;
    rho.scale(1.0 / tr)
}

/// Uniform point of the probability simplex with `len` vertices (one counter).
pub fn random_simplex_point(len: usize, rng: &mut Rng) -> Vec<f64> {
    let mut stream = rng.next_stream();
    let mut w: Vec<f64> = (0..len).map(|_| Exp1.sample(&mut stream)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Uniform reals in `[0, 1)`, `len` of them (one counter).
pub fn random_unit_interval(len: usize, rng: &mut Rng) -> Vec<f64> {
    use rand::Rng as _;
    let mut stream = rng.next_stream();
    (0..len).map(|_| stream.random::<f64>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_unitary() {
        let mut rng = Rng::new(11);
        for d in 2..=4 {
            for _ in 0..50 {
                let u = haar_unitary(d, &mut rng);
                let uu = u.adjoint().matmul(&u).unwrap();
                assert!(uu.max_abs_diff(&Operator::identity(d, 1).unwrap()).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn same_seed_and_counter_is_bitwise_identical() {
        let a = haar_unitary(3, &mut Rng::with_counter(5, 17));
        let b = haar_unitary(3, &mut Rng::with_counter(5, 17));
        assert_eq!(a.entries(), b.entries());
        let c = haar_unitary(3, &mut Rng::with_counter(5, 18));
        assert_ne!(a.entries(), c.entries());
        let mut rng = Rng::new(5);
        rng.advance(17);
        assert_eq!(haar_unitary(3, &mut rng).entries(), a.entries());
        assert_eq!(rng.counter(), 18);
    }

    // Schur orthogonality: ∫ U|0><0|U† dU = I/d.
    #[test]
    fn twirled_pure_state_is_maximally_mixed() {
        let mut rng = Rng::new(2024);
        let mut acc = Operator::zeros(2, 1).unwrap();
        let mut ket0 = Operator::zeros(2, 1).unwrap();
        ket0.set(0, 0, Complex64::new(1.0, 0.0));
        let n = 10_000;
        for _ in 0..n {
            let u = haar_unitary(2, &mut rng);
            let r = u.matmul(&ket0).unwrap().matmul(&u.adjoint()).unwrap();
            acc.add_scaled_assign(1.0 / n as f64, &r).unwrap();
        }
        let half = Operator::identity(2, 1).unwrap().scale(0.5);
        assert!(acc.max_abs_diff(&half).unwrap() <= 0.03);
    }

    // ∫ |Tr U|² dU = 1.
    #[test]
    fn second_moment_of_trace() {
        let mut rng = Rng::new(99);
        let n = 10_000;
        let mean: f64 = (0..n).map(|_| haar_unitary(3, &mut rng).trace().norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() <= 0.05, "mean |Tr U|^2 = {mean}");
    }

    // Without the phase correction the diagonal of Q is biased; the corrected
    // first-moment E[U_00] vanishes.
    #[test]
    fn first_moment_of_entries_vanishes() {
        let mut rng = Rng::new(3);
        let n = 20_000;
        let mean: Complex64 = (0..n).map(|_| haar_unitary(2, &mut rng).get(0, 0)).sum::<Complex64>() / n as f64;
        assert!(mean.norm() < 0.02, "E[U_00] = {mean}");
    }

    #[test]
    fn helpers_are_normalized() {
        let mut rng = Rng::new(1);
        let v = random_unit_vector(5, &mut rng);
        assert!((v.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-14);
        let rho = random_density_matrix(2, 2, &mut rng);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        assert!(rho.min_eigenvalue().unwrap() > 0.0);
        let p = random_simplex_point(4, &mut rng);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(p.iter().all(|&x| x >= 0.0));
    }
}
