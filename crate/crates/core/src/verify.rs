//! Self-check suite: exact identities, dense-oracle comparisons and the
//! Monte-Carlo convergence test. Reports contain no timings, so two runs with
//! the same seed render byte-identical text.

use std::fmt;

use num_complex::Complex64;

use crate::error::Result;
use crate::projectors::{flip, multi_pi, pplus, trace_formula, BinaryVector};
use crate::simplex::{
    appendix_fidelities, bisep_check, extremal_fidelities, fidelities_of, is_sigma_ppt, mc_twirl, overlaps,
    reduce_mixed_pair, reduce_pair, separability_polytope_check, separability_ppt_all, synthesize,
    transform_fidelities, x_matrix, y_matrix, ProductStateSpec, StateDescriptor,
};
use crate::tensor::{haar_unitary, Operator, Rng, SubsystemSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Deterministic identities and the small documented examples.
    Quick,
    /// Adds the randomized dense-oracle sweeps and the Monte-Carlo twirl.
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

type Outcome = Result<(bool, String)>;
type Check = Box<dyn Fn(u64) -> Outcome>;

pub fn run(level: Level, seed: u64) -> Report {
    let mut checks: Vec<(&'static str, Check)> = vec![
        ("transfer-inverse", Box::new(|_| transfer_inverse())),
        ("flip-partial-transpose", Box::new(|_| flip_partial_transpose())),
        ("trace-formulas", Box::new(|_| trace_formulas())),
        ("single-pair-thresholds", Box::new(|_| single_pair_thresholds())),
        ("criterion-disagreement", Box::new(|_| criterion_disagreement())),
        ("bisep-not-multisep", Box::new(|_| bisep_not_multisep())),
    ];
    if level == Level::Full {
        checks.push(("transfer-vs-dense", Box::new(transfer_vs_dense)));
        checks.push(("extremal-fidelities", Box::new(extremal_vs_dense)));
        checks.push(("ppt-tables-vs-spectrum", Box::new(ppt_tables_vs_spectrum)));
        checks.push(("reductions", Box::new(reductions)));
        checks.push(("mc-twirl", Box::new(mc_convergence)));
    }
    let checks = checks
        .into_iter()
        .map(|(name, check)| match check(seed) {
            Ok((passed, detail)) => CheckResult { name, passed, detail },
            Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
        })
        .collect();
    Report { checks }
}

fn bits(s: &str) -> BinaryVector {
    s.parse().expect("literal bitstring")
}

/// Bob slots `K + i` for every `i` with `μ_i = 1`.
fn bob_slots(mu: &BinaryVector) -> Result<SubsystemSet> {
    let k = mu.len();
    SubsystemSet::new(mu.bits().iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| k + i + 1))
}

fn transpose_bobs(rho: &Operator, mu: &BinaryVector) -> Result<Operator> {
    let set = bob_slots(mu)?;
    if set.is_empty() {
        Ok(rho.clone())
    } else {
        rho.partial_transpose(&set)
    }
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn transfer_inverse() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=6 {
        let p = x_matrix(d).matmul(&y_matrix(d))?;
        for r in 0..2 {
            for c in 0..2 {
                let e = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((p.get(r, c) - e).abs());
            }
        }
    }
    Ok((worst <= 1e-12, format!("max |XY - I| = {worst:.2e} for d = 2..6")))
}

fn flip_partial_transpose() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=5 {
        let pt = flip(d).partial_transpose(&SubsystemSet::new([2])?)?;
        worst = worst.max(pt.max_abs_diff(&pplus(d).scale(d as f64))?);
    }
    Ok((worst <= 1e-15, format!("max |F^T2 - d P+| = {worst:.2e} for d = 2..5")))
}

fn trace_formulas() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in 2..=3 {
        for k in 1..=2 {
            for sigma in BinaryVector::all(k) {
                for alpha in BinaryVector::all(k) {
                    let dense = multi_pi(d, &sigma, &alpha)?.trace().re;
                    worst = worst.max((dense - trace_formula(d, &sigma, &alpha)).abs());
                    count += 1;
                }
            }
        }
    }
    Ok((worst <= 1e-9, format!("{count} projectors, max deviation {worst:.2e}")))
}

fn single_pair_thresholds() -> Outcome {
    let mut wrong = Vec::new();
    let mut probes = 0;
    for d in 2..=4 {
        let dd = d as f64;
        // Werner: separable iff q₁ ≤ 1/2; isotropic: iff p₁ ≤ 1/d.
        for (sigma, threshold) in [("0", 0.5), ("1", 1.0 / dd)] {
            for (offset, expect) in [(-1e-6, true), (0.0, true), (1e-6, false)] {
                let x = threshold + offset;
                let desc = StateDescriptor::new(d, bits(sigma), vec![1.0 - x, x])?;
                let got = is_sigma_ppt(&desc, &bits("1"))?.is_satisfied();
                probes += 1;
                if got != expect {
                    wrong.push(format!("d={d} sigma={sigma} x={x}"));
                }
            }
        }
    }
    let detail = if wrong.is_empty() {
        format!("{probes} boundary probes classified correctly")
    } else {
        format!("misclassified: {}", wrong.join(", "))
    };
    Ok((wrong.is_empty(), detail))
}

fn criterion_disagreement() -> Outcome {
    let desc = StateDescriptor::new(2, bits("00"), vec![0.4, 0.3, 0.3, 0.0])?;
    let polytope = separability_polytope_check(&desc).is_satisfied();
    let ppt11 = is_sigma_ppt(&desc, &bits("11"))?;
    let passed = polytope && !ppt11.is_satisfied();
    Ok((
        passed,
        format!(
            "q = (0.4, 0.3, 0.3, 0): polytope {}, (11)-PPT {} (min margin {:.4})",
            if polytope { "satisfied" } else { "violated" },
            if ppt11.is_satisfied() { "satisfied" } else { "violated" },
            ppt11.min_margin
        ),
    ))
}

fn bisep_not_multisep() -> Outcome {
    let q = appendix_fidelities(&pplus(2), &pplus(2), 2)?;
    let expected = [0.75, 0.0, 0.0, 0.25];
    // D^(2) of P⁺_{A1A2} ⊗ P⁺_{B1B2}; subsystem order (A1, A2, B1, B2).
    let rho = pplus(2).tensor(&pplus(2))?;
    let dense = fidelities_of(&rho, &bits("00"))?;
    let formula_err = max_abs(&q, &expected);
    let oracle_err = max_abs(dense.fidelities(), &expected);
    let desc = StateDescriptor::new(2, bits("00"), q)?;
    let bisep = bisep_check(&desc).is_satisfied();
    let all = separability_ppt_all(&desc);
    let q11_gt_q01 = all.failures.iter().any(|f| f.constraint == "mu=10,alpha=11");
    let passed = formula_err <= 1e-10 && oracle_err <= 1e-10 && bisep && !all.is_satisfied() && q11_gt_q01;
    Ok((
        passed,
        format!(
            "q = (3/4, 0, 0, 1/4) to {formula_err:.1e} (dense {oracle_err:.1e}); bisep {}, ppt-all {}",
            if bisep { "satisfied" } else { "violated" },
            if all.is_satisfied() { "satisfied" } else { "violated" }
        ),
    ))
}

fn transfer_vs_dense(seed: u64) -> Outcome {
    let mut rng = Rng::new(seed);
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in 2..=3 {
        for k in 1..=2 {
            for sigma in BinaryVector::all(k) {
                for mu in BinaryVector::all(k) {
                    for _ in 0..50 {
                        let desc = StateDescriptor::random(d, sigma.clone(), &mut rng)?;
                        let t = transform_fidelities(&desc, &mu)?;
                        let dense = overlaps(&transpose_bobs(&synthesize(&desc)?, &mu)?, &t.sigma)?;
                        worst = worst.max(max_abs(&t.values, &dense));
                        count += 1;
                    }
                }
            }
        }
    }
    Ok((worst <= 1e-10, format!("{count} descriptors, max deviation {worst:.2e}")))
}

/// `τ_σ` of `⊗_i |ψ_i⟩⟨ψ_i| ⊗ ⊗_i |φ_i⟩⟨φ_i|` with `|⟨ψ_i|φ_i⟩|² = a_i`,
/// each pair rotated by its own random unitary.
fn dense_product_state(d: usize, sigma: &BinaryVector, spec: &ProductStateSpec, rng: &mut Rng) -> Result<Operator> {
    let k = spec.pairs();
    let mut alices = Vec::with_capacity(k);
    let mut bobs = Vec::with_capacity(k);
    for &a in spec.overlaps() {
        let u = haar_unitary(d, rng);
        let column = |j: usize| (0..d).map(|r| u.get(r, j)).collect::<Vec<_>>();
        let (c0, c1) = (column(0), column(1));
        let (cos, sin) = (a.sqrt(), (1.0 - a).max(0.0).sqrt());
        let phi: Vec<Complex64> = c0.iter().zip(&c1).map(|(x, y)| x * cos + y * sin).collect();
        alices.push(Operator::projector_onto(d, 1, &c0)?);
        bobs.push(Operator::projector_onto(d, 1, &phi)?);
    }
    let mut factors = alices.into_iter().chain(bobs);
    let first = factors.next().expect("K >= 1");
    let rho = factors.try_fold(first, |acc, f| acc.tensor(&f))?;
    transpose_bobs(&rho, sigma)
}

fn extremal_vs_dense(seed: u64) -> Outcome {
    let mut rng = Rng::new(seed);
    let mut worst = 0.0f64;
    let mut rejected = 0;
    let mut count = 0;
    for d in 2..=3 {
        for sigma in BinaryVector::all(2) {
            for _ in 0..200 {
                let spec = ProductStateSpec::random(2, &mut rng);
                let f = extremal_fidelities(&sigma, &spec, d)?;
                let rho = dense_product_state(d, &sigma, &spec, &mut rng)?;
                worst = worst.max(max_abs(&f, fidelities_of(&rho, &sigma)?.fidelities()));
                let desc = StateDescriptor::new(d, sigma.clone(), f)?;
                if !separability_polytope_check(&desc).is_satisfied() || !separability_ppt_all(&desc).is_satisfied() {
                    rejected += 1;
                }
                count += 1;
            }
        }
    }
    Ok((
        worst <= 1e-10 && rejected == 0,
        format!("{count} product states, max deviation {worst:.2e}, {rejected} rejected by a necessary criterion"),
    ))
}

fn ppt_tables_vs_spectrum(seed: u64) -> Outcome {
    let mut rng = Rng::new(seed);
    let sigma = bits("00");
    let mut disagreements = 0;
    let mut count = 0;
    for d in 2..=3 {
        for _ in 0..1000 {
            let desc = StateDescriptor::random(d, sigma.clone(), &mut rng)?;
            let rho = synthesize(&desc)?;
            for mu in ["01", "10", "11"].map(bits) {
                let via_z = transform_fidelities(&desc, &mu)?.min_entry() >= -1e-12;
                let via_verdict = is_sigma_ppt(&desc, &mu)?.is_satisfied();
                let via_spectrum = transpose_bobs(&rho, &mu)?.min_eigenvalue()? >= -1e-10;
                if via_z != via_spectrum || via_verdict != via_spectrum {
                    disagreements += 1;
                }
                count += 1;
            }
        }
    }
    Ok((disagreements == 0, format!("{count} verdicts, {disagreements} disagreements with the spectrum")))
}

fn reductions(seed: u64) -> Outcome {
    let mut rng = Rng::new(seed);
    let d = 2;
    let mut worst = 0.0f64;
    let mut worst_orphan = 0.0f64;
    let orphan = Operator::identity(d, 2)?.scale(1.0 / (d * d) as f64);
    for sigma in BinaryVector::all(2) {
        for _ in 0..50 {
            let desc = StateDescriptor::random(d, sigma.clone(), &mut rng)?;
            let rho = synthesize(&desc)?;
            for i in 1..=2 {
                let reduced = reduce_pair(&desc, i)?;
                let dense = rho.partial_trace(&SubsystemSet::new([i, 2 + i])?)?;
                let oracle = fidelities_of(&dense, reduced.sigma())?;
                worst = worst.max(max_abs(reduced.fidelities(), oracle.fidelities()));
            }
            // A_1 ⊗ B_2 and A_2 ⊗ B_1
            for (i, j) in [(1, 2), (2, 1)] {
                let m = reduce_mixed_pair(&desc, i, j)?;
                let dense = rho.partial_trace(&SubsystemSet::new([i, 2 + j])?)?;
                worst_orphan = worst_orphan.max(dense.max_abs_diff(&orphan)?);
                worst_orphan = worst_orphan.max(m.orphan_state().max_abs_diff(&orphan)?);
            }
        }
    }
    Ok((
        worst <= 1e-10 && worst_orphan <= 1e-10,
        format!("pair marginals to {worst:.2e}, mixed pairs to I/d^2 within {worst_orphan:.2e}"),
    ))
}

fn mc_convergence(seed: u64) -> Outcome {
    let sigma = bits("0");
    let mut rho = Operator::zeros(2, 2)?;
    rho.set(1, 1, Complex64::new(1.0, 0.0)); // |01><01|
    let exact = synthesize(&fidelities_of(&rho, &sigma)?)?;
    let single = mc_twirl(&rho, &sigma, 5000, &mut Rng::new(seed))?.frobenius_distance(&exact)?;
    let mean_error = |n: usize| -> Result<f64> {
        let mut total = 0.0;
        for s in 0..10 {
            let mut rng = Rng::new(seed.wrapping_add(1000 + s));
            total += mc_twirl(&rho, &sigma, n, &mut rng)?.frobenius_distance(&exact)?;
        }
        Ok(total / 10.0)
    };
    let (e1000, e4000) = (mean_error(1000)?, mean_error(4000)?);
    let ratio = e1000 / e4000;
    Ok((
        single <= 0.05 && ratio >= 1.7,
        format!("N=5000 distance {single:.4}; mean error N=1000 {e1000:.4}, N=4000 {e4000:.4}, ratio {ratio:.2}"),
    ))
}
