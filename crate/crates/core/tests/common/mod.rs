//! Dense reference constructions used as oracles by the integration tests.
//! Everything here is built from explicit index arithmetic on the pair-major
//! ordering `(A1, B1, A2, B2, …)` and then permuted, so it shares no code with
//! the library's digit routines.
#![allow(dead_code)]

use invariant_states::{BinaryVector, Operator};
use num_complex::Complex64;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = index % d;
        index /= d;
    }
    out
}

fn undigits(ds: &[usize], d: usize) -> usize {
    ds.iter().fold(0, |acc, &x| acc * d + x)
}

pub fn kron(a: &Operator, b: &Operator) -> Operator {
    let d = a.local_dim();
    let sb = b.side();
    Operator::from_fn(d, a.num_subsystems() + b.num_subsystems(), |r, col| {
        a.get(r / sb, col / sb) * b.get(r % sb, col % sb)
    })
    .unwrap()
}

/// Reorder tensor factors: new factor `j` is old factor `perm[j]`.
pub fn permute(op: &Operator, perm: &[usize]) -> Operator {
    let (d, n) = (op.local_dim(), op.num_subsystems());
    Operator::from_fn(d, n, |r, col| {
        let (rn, cn) = (digits(r, d, n), digits(col, d, n));
        let mut ro = vec![0; n];
        let mut co = vec![0; n];
        for j in 0..n {
            ro[perm[j]] = rn[j];
            co[perm[j]] = cn[j];
        }
        op.get(undigits(&ro, d), undigits(&co, d))
    })
    .unwrap()
}

/// Transpose the listed 0-based factors.
pub fn partial_transpose(op: &Operator, slots: &[usize]) -> Operator {
    let (d, n) = (op.local_dim(), op.num_subsystems());
    Operator::from_fn(d, n, |r, col| {
        let (mut rd, mut cd) = (digits(r, d, n), digits(col, d, n));
        for &s in slots {
            std::mem::swap(&mut rd[s], &mut cd[s]);
        }
        op.get(undigits(&rd, d), undigits(&cd, d))
    })
    .unwrap()
}

/// Trace out the listed 0-based factors.
pub fn partial_trace(op: &Operator, slots: &[usize]) -> Operator {
    let (d, n) = (op.local_dim(), op.num_subsystems());
    let keep: Vec<usize> = (0..n).filter(|s| !slots.contains(s)).collect();
    let traced = slots.len();
    Operator::from_fn(d, keep.len(), |r, col| {
        let (rk, ck) = (digits(r, d, keep.len()), digits(col, d, keep.len()));
        let mut sum = c(0.0);
        for t in 0..d.pow(traced as u32) {
            let td = digits(t, d, traced);
            let mut rf = vec![0; n];
            let mut cf = vec![0; n];
            for (j, &s) in keep.iter().enumerate() {
                rf[s] = rk[j];
                cf[s] = ck[j];
            }
            for (j, &s) in slots.iter().enumerate() {
                rf[s] = td[j];
                cf[s] = td[j];
            }
            sum += op.get(undigits(&rf, d), undigits(&cf, d));
        }
        sum
    })
    .unwrap()
}

pub fn trace_product(a: &Operator, b: &Operator) -> f64 {
    let s = a.side();
    let mut t = c(0.0);
    for i in 0..s {
        for j in 0..s {
            t += a.get(i, j) * b.get(j, i);
        }
    }
    t.re
}

pub fn swap(d: usize) -> Operator {
    Operator::from_fn(d, 2, |r, col| {
        let (i, j) = (r / d, r % d);
        c(if col == j * d + i { 1.0 } else { 0.0 })
    })
    .unwrap()
}

pub fn max_entangled(d: usize) -> Operator {
    Operator::from_fn(d, 2, |r, col| c(if r % (d + 1) == 0 && col % (d + 1) == 0 { 1.0 / d as f64 } else { 0.0 }))
        .unwrap()
}

fn lin(a: f64, x: &Operator, b: f64, y: &Operator) -> Operator {
    Operator::from_fn(x.local_dim(), x.num_subsystems(), |r, col| x.get(r, col) * a + y.get(r, col) * b).unwrap()
}

/// Single-pair projector: `(I ± F)/2` for σ = 0, `P⁺` / `I − P⁺` for σ = 1.
pub fn pair_projector(d: usize, sigma: u8, alpha: u8) -> Operator {
    let id = Operator::identity(d, 2).unwrap();
    match (sigma, alpha) {
        (0, 0) => lin(0.5, &id, 0.5, &swap(d)),
        (0, _) => lin(0.5, &id, -0.5, &swap(d)),
        (_, 1) => max_entangled(d),
        _ => lin(1.0, &id, -1.0, &max_entangled(d)),
    }
}

/// Move pair-major `(A1, B1, …, AK, BK)` to `(A1, …, AK, B1, …, BK)`.
pub fn to_alice_bob_order(op: &Operator) -> Operator {
    let k = op.num_subsystems() / 2;
    let perm: Vec<usize> = (0..2 * k).map(|j| if j < k { 2 * j } else { 2 * (j - k) + 1 }).collect();
    permute(op, &perm)
}

pub fn pi(d: usize, sigma: &BinaryVector, alpha: &BinaryVector) -> Operator {
    let mut factors = sigma.bits().iter().zip(alpha.bits()).map(|(&s, &a)| pair_projector(d, s, a));
    let first = factors.next().unwrap();
    to_alice_bob_order(&factors.fold(first, |acc, f| kron(&acc, &f)))
}

pub fn fidelities(rho: &Operator, sigma: &BinaryVector) -> Vec<f64> {
    BinaryVector::all(sigma.len()).map(|a| trace_product(rho, &pi(rho.local_dim(), sigma, &a))).collect()
}

pub fn synthesize(d: usize, sigma: &BinaryVector, f: &[f64]) -> Operator {
    let k = sigma.len();
    let mut out = Operator::zeros(d, 2 * k).unwrap();
    for alpha in BinaryVector::all(k) {
        let p = pi(d, sigma, &alpha);
        let tr = p.trace().re;
        out = lin(1.0, &out, f[alpha.index()] / tr, &p);
    }
    out
}

/// 0-based Bob slots `K + i` for every `μ_i = 1`.
pub fn bob_slots(mu: &BinaryVector) -> Vec<usize> {
    let k = mu.len();
    (0..k).filter(|&i| mu.bits()[i] == 1).map(|i| k + i).collect()
}

/// Pure product state on 2K qudits with `|⟨ψ_i|φ_i⟩|² = a_i`:
/// `ψ_i = |0⟩`, `φ_i = √a_i |0⟩ + √(1−a_i) e^{iθ_i} |1⟩`.
pub fn product_state(d: usize, a: &[f64], phases: &[f64]) -> Operator {
    let ket = |v: Vec<Complex64>| Operator::from_fn(d, 1, |r, col| v[r] * v[col].conj()).unwrap();
    let mut alices = Vec::new();
    let mut bobs = Vec::new();
    for (&ai, &th) in a.iter().zip(phases) {
        let mut psi = vec![c(0.0); d];
        psi[0] = c(1.0);
        let mut phi = vec![c(0.0); d];
        phi[0] = c(ai.sqrt());
        phi[1] = Complex64::from_polar((1.0 - ai).max(0.0).sqrt(), th);
        alices.push(ket(psi));
        bobs.push(ket(phi));
    }
    let mut all = alices.into_iter().chain(bobs);
    let first = all.next().unwrap();
    all.fold(first, |acc, f| kron(&acc, &f))
}

pub fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_entry_diff(a: &Operator, b: &Operator) -> f64 {
    a.entries().iter().zip(b.entries()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
