use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Sorted set of 1-based subsystem labels.
///
/// Label `k` refers to the `k`-th tensor factor `H_k`; factor 1 is the most
/// significant digit of a basis index. Range checks against a concrete
/// operator happen when the set is used.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemSet(Vec<usize>);

impl SubsystemSet {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateSubsystem(w[0]));
            }
        }
        if let Some(&0) = v.first() {
            return Err(Error::InvalidArgument(
                "subsystem labels are 1-based".into(),
            ));
        }
        Ok(SubsystemSet(v))
    }

    pub fn empty() -> Self {
        SubsystemSet(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&k) if k > n => Err(Error::SubsystemOutOfRange { index: k, n }),
            _ => Ok(()),
        }
    }
}

/// Dense square operator on `(C^d)^{⊗n}`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Operator {
    local_dim: usize,
    num_subsystems: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("local_dim", &self.local_dim)
            .field("num_subsystems", &self.num_subsystems)
            .finish_non_exhaustive()
    }
}

fn side_of(d: usize, n: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("operator needs at least one subsystem".into()));
    }
    u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .filter(|&s| s.checked_mul(s).is_some())
        .ok_or_else(|| Error::ScaleExceeded(format!("d = {d}, n = {n}")))
}

impl Operator {
    pub fn new(local_dim: usize, num_subsystems: usize, entries: Vec<Complex64>) -> Result<Self> {
        let side = side_of(local_dim, num_subsystems)?;
        if entries.len() != side * side {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {side} x {side} operator",
                entries.len()
            )));
        }
        Ok(Operator { local_dim, num_subsystems, entries })
    }

    pub fn zeros(local_dim: usize, num_subsystems: usize) -> Result<Self> {
        let side = side_of(local_dim, num_subsystems)?;
        Ok(Operator { local_dim, num_subsystems, entries: vec![ZERO; side * side] })
    }

    pub fn identity(local_dim: usize, num_subsystems: usize) -> Result<Self> {
        let mut op = Self::zeros(local_dim, num_subsystems)?;
        let side = op.side();
        for i in 0..side {
            op.entries[i * side + i] = ONE;
        }
        Ok(op)
    }

    pub fn from_fn<F>(local_dim: usize, num_subsystems: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let side = side_of(local_dim, num_subsystems)?;
        let mut entries = Vec::with_capacity(side * side);
        for r in 0..side {
            for c in 0..side {
                entries.push(f(r, c));
            }
        }
        Ok(Operator { local_dim, num_subsystems, entries })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector `ψ`.
    pub fn projector_onto(local_dim: usize, num_subsystems: usize, psi: &[Complex64]) -> Result<Self> {
        let side = side_of(local_dim, num_subsystems)?;
        if psi.len() != side {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for side {side}",
                psi.len()
            )));
        }
        Self::from_fn(local_dim, num_subsystems, |r, c| psi[r] * psi[c].conj())
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn num_subsystems(&self) -> usize {
        self.num_subsystems
    }

    /// Matrix side `d^n`.
    pub fn side(&self) -> usize {
        // entries.len() is a perfect square by construction
        (self.entries.len() as f64).sqrt().round() as usize
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.side() + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        let side = self.side();
        self.entries[r * side + c] = v;
    }

    fn same_shape(&self, other: &Operator) -> Result<()> {
        if self.local_dim != other.local_dim || self.num_subsystems != other.num_subsystems {
            return Err(Error::DimensionMismatch(format!(
                "(d = {}, n = {}) vs (d = {}, n = {})",
                self.local_dim, self.num_subsystems, other.local_dim, other.num_subsystems
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        let side = self.side();
        (0..side).map(|i| self.entries[i * side + i]).sum()
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Operator) -> Result<Complex64> {
        self.same_shape(other)?;
        let side = self.side();
        let mut acc = ZERO;
        for r in 0..side {
            for c in 0..side {
                acc += self.entries[r * side + c] * other.entries[c * side + r];
            }
        }
        Ok(acc)
    }

    pub fn adjoint(&self) -> Operator {
        let side = self.side();
        let mut out = self.clone();
        for r in 0..side {
            for c in 0..side {
                out.entries[c * side + r] = self.entries[r * side + c].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Operator {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn transpose(&self) -> Operator {
        let side = self.side();
        let mut out = self.clone();
        for r in 0..side {
            for c in 0..side {
                out.entries[c * side + r] = self.entries[r * side + c];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Operator {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.entries.iter_mut().zip(&other.entries).for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.entries.iter_mut().zip(&other.entries).for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    /// `self += s · other`.
    pub fn add_scaled_assign(&mut self, s: f64, other: &Operator) -> Result<()> {
        self.same_shape(other)?;
        self.entries.iter_mut().zip(&other.entries).for_each(|(a, b)| *a += b * s);
        Ok(())
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        self.same_shape(other)?;
        let side = self.side();
        let mut out = vec![ZERO; side * side];
        for i in 0..side {
            let row = &mut out[i * side..(i + 1) * side];
            for k in 0..side {
                let a = self.entries[i * side + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.entries[k * side..(k + 1) * side];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Operator { entries: out, ..*self })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖a − b‖_F`.
    pub fn frobenius_distance(&self, other: &Operator) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest entry of `|A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let side = self.side();
        let mut worst: f64 = 0.0;
        for r in 0..side {
            for c in r..side {
                let d = (self.entries[r * side + c] - self.entries[c * side + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Kronecker product with `self`'s subsystems leading.
    pub fn tensor(&self, other: &Operator) -> Result<Operator> {
        if self.local_dim != other.local_dim {
            return Err(Error::DimensionMismatch(format!(
                "local dimensions {} and {}",
                self.local_dim, other.local_dim
            )));
        }
        let (sa, sb) = (self.side(), other.side());
        let n = self.num_subsystems + other.num_subsystems;
        side_of(self.local_dim, n)?;
        let side = sa * sb;
        let mut entries = vec![ZERO; side * side];
        for ra in 0..sa {
            for ca in 0..sa {
                let a = self.entries[ra * sa + ca];
                if a == ZERO {
                    continue;
                }
                for rb in 0..sb {
                    let row = (ra * sb + rb) * side + ca * sb;
                    for cb in 0..sb {
                        entries[row + cb] = a * other.entries[rb * sb + cb];
                    }
                }
            }
        }
        Ok(Operator { local_dim: self.local_dim, num_subsystems: n, entries })
    }

    /// Stride of subsystem `k` (1-based) in a basis index.
    #[inline]
    fn stride(&self, k: usize) -> usize {
        self.local_dim.pow((self.num_subsystems - k) as u32)
    }

    /// Transpose of the listed tensor factors in the computational basis.
    pub fn partial_transpose(&self, set: &SubsystemSet) -> Result<Operator> {
        set.check_range(self.num_subsystems)?;
        let d = self.local_dim;
        let side = self.side();
        let strides: Vec<usize> = set.indices().iter().map(|&k| self.stride(k)).collect();
        let mut out = vec![ZERO; side * side];
        for r in 0..side {
            for c in 0..side {
                let (mut r2, mut c2) = (r, c);
                for &s in &strides {
                    let dr = (r / s) % d;
                    let dc = (c / s) % d;
                    r2 = r2 - dr * s + dc * s;
                    c2 = c2 - dc * s + dr * s;
                }
                out[r2 * side + c2] = self.entries[r * side + c];
            }
        }
        Ok(Operator { entries: out, ..*self })
    }

    /// Trace over the listed subsystems; the remaining factors keep their
    /// relative order.
    pub fn partial_trace(&self, set: &SubsystemSet) -> Result<Operator> {
        if set.is_empty() {
            return Err(Error::InvalidArgument("partial trace over an empty set".into()));
        }
        set.check_range(self.num_subsystems)?;
        let n = self.num_subsystems;
        if set.len() == n {
            return Err(Error::InvalidArgument(
                "partial trace over every subsystem; use trace()".into(),
            ));
        }
        let d = self.local_dim;
        let side = self.side();
        let kept: Vec<usize> = (1..=n).filter(|k| !set.contains(*k)).collect();
        let offsets = |labels: &[usize]| -> Vec<usize> {
            let count = d.pow(labels.len() as u32);
            (0..count)
                .map(|mut idx| {
                    let mut off = 0;
                    for &k in labels.iter().rev() {
                        off += (idx % d) * self.stride(k);
                        idx /= d;
                    }
                    off
                })
                .collect()
        };
        let keep_off = offsets(&kept);
        let trace_off = offsets(set.indices());
        let m = keep_off.len();
        let mut out = vec![ZERO; m * m];
        for (i, &ri) in keep_off.iter().enumerate() {
            for (j, &cj) in keep_off.iter().enumerate() {
                out[i * m + j] = trace_off
                    .iter()
                    .map(|&t| self.entries[(ri + t) * side + cj + t])
                    .sum();
            }
        }
        Ok(Operator { local_dim: d, num_subsystems: kept.len(), entries: out })
    }

    /// `U_k` acting on subsystem `k` from the left: `(I ⊗ … ⊗ U ⊗ … ⊗ I) A`.
    pub(crate) fn apply_local_left(&self, k: usize, u: &[Complex64]) -> Operator {
        let d = self.local_dim;
        let side = self.side();
        let s = self.stride(k);
        let mut out = vec![ZERO; side * side];
        for r in 0..side {
            let dr = (r / s) % d;
            let base = r - dr * s;
            let orow = &mut out[r * side..(r + 1) * side];
            for j in 0..d {
                let coef = u[dr * d + j];
                if coef == ZERO {
                    continue;
                }
                let src = &self.entries[(base + j * s) * side..(base + j * s + 1) * side];
                for (o, a) in orow.iter_mut().zip(src) {
                    *o += coef * a;
                }
            }
        }
        Operator { entries: out, ..*self }
    }

    /// `A (I ⊗ … ⊗ U† ⊗ … ⊗ I)` with `U†` on subsystem `k`.
    pub(crate) fn apply_local_right_adjoint(&self, k: usize, u: &[Complex64]) -> Operator {
        let d = self.local_dim;
        let side = self.side();
        let s = self.stride(k);
        let mut out = vec![ZERO; side * side];
        for r in 0..side {
            let row = &self.entries[r * side..(r + 1) * side];
            let orow = &mut out[r * side..(r + 1) * side];
            for (c, o) in orow.iter_mut().enumerate() {
                let dc = (c / s) % d;
                let base = c - dc * s;
                let mut acc = ZERO;
                for j in 0..d {
                    acc += row[base + j * s] * u[dc * d + j].conj();
                }
                *o = acc;
            }
        }
        Operator { entries: out, ..*self }
    }

    /// `V A V†` for `V = ⊗_k U_k`, one `d × d` factor per subsystem.
    pub fn conjugate_local(&self, factors: &[Operator]) -> Result<Operator> {
        if factors.len() != self.num_subsystems {
            return Err(Error::LengthMismatch {
                expected: self.num_subsystems,
                got: factors.len(),
            });
        }
        let mut out = self.clone();
        for (i, u) in factors.iter().enumerate() {
            if u.local_dim != self.local_dim || u.num_subsystems != 1 {
                return Err(Error::DimensionMismatch(
                    "local factors must be single-subsystem operators of the same d".into(),
                ));
            }
            out = out.apply_local_left(i + 1, &u.entries);
            out = out.apply_local_right_adjoint(i + 1, &u.entries);
        }
        Ok(out)
    }
}
