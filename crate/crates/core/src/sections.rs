//! Holomorphic sections of `O(l) ⊠ O(lr)` as bihomogeneous polynomials in
//! `(Z, W)`, with the `L²(X)` inner product, sl₂ ladder operators and
//! isotypic orthonormal bases.
//!
//! Monomials are `z₀^a z₁^{l−a} w₀^b w₁^{m−b}` with `m = lr` (and `m = 0` on
//! ℙ¹). The group acts by `(g·s)(x) = s(g⁻¹x)`, so along `exp(tβ)` the monomial
//! above has weight `(l − 2a) + (m − 2b)`: the top weight is carried by
//! `z₁^l w₁^m`, i.e. `a = b = 0`.
//!
//! Large levels are handled in the orthonormal basis
//! `e_ab = monomial / ‖monomial‖`, grouped in weight blocks `s = a + b`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{BundlePoint, ModelSpace};
use crate::su2_rep::{clebsch_multiplicity, IrrepLabel};

/// Largest dense ladder matrix dimension (monomial count) accepted by
/// [`ladder_matrices`].
pub const LADDER_BUDGET: usize = 1500;

const NULL_TOL: f64 = 1e-9;

/// Blocks wider than this get their null vector by inverse iteration on the
/// tridiagonal `FE` instead of a dense SVD.
const SVD_WIDTH: usize = 96;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(1 << 14);
        t.push(0.0);
        for n in 1..(1usize << 14) {
            let prev = t[n - 1];
            t.push(prev + (n as f64).ln());
        }
        t
    })
}

pub fn ln_factorial(n: usize) -> f64 {
    let t = ln_factorial_table();
    if n < t.len() {
        t[n]
    } else {
        t[t.len() - 1] + ((t.len())..=n).map(|j| (j as f64).ln()).sum::<f64>()
    }
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// The section space `H⁰(M, A^{⊗l})` of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SectionSpace {
    pub model: ModelSpace,
    pub l: usize,
}

impl SectionSpace {
    pub fn new(model: ModelSpace, l: usize) -> Self {
        Self { model, l }
    }

    /// Degree in `W`.
    pub fn m(&self) -> usize {
        self.l * self.model.twist() as usize
    }

    pub fn dim(&self) -> usize {
        (self.l + 1) * (self.m() + 1)
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        a * (self.m() + 1) + b
    }

    pub fn monomials(&self) -> impl Iterator<Item = MonomialIndex> + '_ {
        let m = self.m();
        (0..=self.l).flat_map(move |a| (0..=m).map(move |b| MonomialIndex { l: self.l, a, b }))
    }

    /// Range of `a` in weight block `s`.
    pub fn block_range(&self, s: usize) -> std::ops::RangeInclusive<usize> {
        let lo = s.saturating_sub(self.m());
        let hi = s.min(self.l);
        lo..=hi
    }

    pub fn block_count(&self) -> usize {
        self.l + self.m() + 1
    }

    /// `H`-weight of block `s`.
    pub fn block_weight(&self, s: usize) -> i64 {
        (self.l + self.m()) as i64 - 2 * s as i64
    }

    /// `√((l+1)(m+1)/vol)`, the factor turning `√binom·monomial` into `e_ab`.
    fn ortho_scale(&self) -> f64 {
        ((self.l + 1) as f64 * (self.m() + 1) as f64 / self.model.volume()).sqrt()
    }
}

/// Exponents `(l, a, b)` of `z₀^a z₁^{l−a} w₀^b w₁^{lr−b}`; `b = 0` on ℙ¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIndex {
    pub l: usize,
    pub a: usize,
    pub b: usize,
}

impl MonomialIndex {
    pub fn new(model: ModelSpace, l: usize, a: usize, b: usize) -> Result<Self> {
        let m = l * model.twist() as usize;
        if a > l || b > m {
            return Err(Error::Degenerate("monomial exponent out of range"));
        }
        Ok(Self { l, a, b })
    }

    /// `H`-weight for the action `s ↦ s∘g⁻¹`.
    pub fn weight(&self, model: ModelSpace) -> i64 {
        let m = (self.l * model.twist() as usize) as i64;
        (self.l as i64 - 2 * self.a as i64) + (m - 2 * self.b as i64)
    }
}

/// `ln ‖monomial‖²`.
pub fn ln_monomial_norm2(model: ModelSpace, idx: MonomialIndex) -> f64 {
    let m = idx.l * model.twist() as usize;
    model.volume().ln() + ln_factorial(idx.a) + ln_factorial(idx.l - idx.a)
        - ln_factorial(idx.l + 1)
        + ln_factorial(idx.b)
        + ln_factorial(m - idx.b)
        - ln_factorial(m + 1)
}

/// `‖z₀^a z₁^{l−a} w₀^b w₁^{m−b}‖²_{L²(X)} = vol·a!(l−a)!/(l+1)!·b!(m−b)!/(m+1)!`.
pub fn monomial_norm2(model: ModelSpace, idx: MonomialIndex) -> f64 {
    ln_monomial_norm2(model, idx).exp()
}

/// A section in monomial coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionVector {
    pub space: SectionSpace,
    pub coeffs: Vec<Complex64>,
}

impl SectionVector {
    pub fn zero(space: SectionSpace) -> Self {
        Self {
            space,
            coeffs: vec![Complex64::new(0.0, 0.0); space.dim()],
        }
    }

    pub fn monomial(space: SectionSpace, a: usize, b: usize) -> Self {
        let mut s = Self::zero(space);
        s.coeffs[space.index(a, b)] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn evaluate(&self, x: &BundlePoint) -> Result<Complex64> {
        if x.model() != self.space.model {
            return Err(Error::ModelMismatch {
                expected: match self.space.model {
                    ModelSpace::P1 => "P1",
                    ModelSpace::P1xP1 { .. } => "P1xP1",
                },
            });
        }
        let (l, m) = (self.space.l, self.space.m());
        let (z, w) = (x.z(), x.w());
        let zp: Vec<Complex64> = (0..=l)
            .map(|a| z[0].powu(a as u32) * z[1].powu((l - a) as u32))
            .collect();
        let wp: Vec<Complex64> = (0..=m)
            .map(|b| w[0].powu(b as u32) * w[1].powu((m - b) as u32))
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, za) in zp.iter().enumerate() {
            for (b, wb) in wp.iter().enumerate() {
                acc += self.coeffs[self.space.index(a, b)] * za * wb;
            }
        }
        Ok(acc)
    }

    /// `L²(X)` inner product `⟨self, other⟩`, linear in the first slot.
    pub fn inner(&self, other: &SectionVector) -> Complex64 {
        assert_eq!(self.space, other.space);
        self.space
            .monomials()
            .map(|idx| {
                let i = self.space.index(idx.a, idx.b);
                self.coeffs[i] * other.coeffs[i].conj() * monomial_norm2(self.space.model, idx)
            })
            .sum()
    }
}

/// Values `e_ab(x)` of the orthonormal monomial basis at one point.
#[derive(Debug, Clone)]
pub struct OrthoValues {
    scale: f64,
    za: Vec<Complex64>,
    wb: Vec<Complex64>,
}

/// `√binom(n, j)·u^j v^{n−j}` for `j = 0..=n`, computed in logs.
fn binomial_powers(n: usize, u: Complex64, v: Complex64) -> Vec<Complex64> {
    let (lu, lv) = (u.norm().ln(), v.norm().ln());
    let (pu, pv) = (u.arg(), v.arg());
    (0..=n)
        .map(|j| {
            let k = n - j;
            let mut lm = 0.5 * ln_binomial(n, j);
            let mut ph = 0.0;
            if j > 0 {
                lm += j as f64 * lu;
                ph += j as f64 * pu;
            }
            if k > 0 {
                lm += k as f64 * lv;
                ph += k as f64 * pv;
            }
            Complex64::from_polar(lm.exp(), ph)
        })
        .collect()
}

impl OrthoValues {
    pub fn new(space: SectionSpace, x: &BundlePoint) -> Self {
        let (z, w) = (x.z(), x.w());
        Self {
            scale: space.ortho_scale(),
            za: binomial_powers(space.l, z[0], z[1]),
            wb: binomial_powers(space.m(), w[0], w[1]),
        }
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.za[a] * self.wb[b] * self.scale
    }

    /// `√binom(l, a)·z₀^a z₁^{l−a}`.
    pub fn z_factors(&self) -> &[Complex64] {
        &self.za
    }

    /// `√binom(m, b)·w₀^b w₁^{m−b}`.
    pub fn w_factors(&self) -> &[Complex64] {
        &self.wb
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Real vector supported on the weight block `s`, in orthonormal coordinates,
/// indexed by `a` over [`SectionSpace::block_range`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    pub s: usize,
    pub coeffs: Vec<f64>,
}

impl BlockVector {
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &BlockVector) -> f64 {
        if self.s != other.s {
            return 0.0;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn evaluate(&self, space: SectionSpace, vals: &OrthoValues) -> Complex64 {
        let lo = *space.block_range(self.s).start();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let a = lo + i;
                vals.get(a, self.s - a) * *c
            })
            .sum()
    }

    pub fn to_section(&self, space: SectionSpace) -> SectionVector {
        let mut out = SectionVector::zero(space);
        let lo = *space.block_range(self.s).start();
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = MonomialIndex {
                l: space.l,
                a: lo + i,
                b: self.s - lo - i,
            };
            let n = (-0.5 * ln_monomial_norm2(space.model, idx)).exp();
            out.coeffs[space.index(idx.a, idx.b)] = Complex64::new(c * n, 0.0);
        }
        out
    }
}

/// `E` on block `s` in orthonormal coordinates (maps into block `s − 1`).
pub fn raise(space: SectionSpace, v: &BlockVector) -> Option<BlockVector> {
    if v.s == 0 {
        return None;
    }
    let (l, m) = (space.l, space.m());
    let src = space.block_range(v.s);
    let dst = space.block_range(v.s - 1);
    let mut out = vec![0.0; dst.end() - dst.start() + 1];
    for (i, c) in v.coeffs.iter().enumerate() {
        let a = src.start() + i;
        let b = v.s - a;
        if a > 0 {
            out[a - 1 - dst.start()] += c * ((a * (l - a + 1)) as f64).sqrt();
        }
        if b > 0 {
            out[a - dst.start()] += c * ((b * (m - b + 1)) as f64).sqrt();
        }
    }
    Some(BlockVector {
        s: v.s - 1,
        coeffs: out,
    })
}

/// `F` on block `s` in orthonormal coordinates (maps into block `s + 1`).
pub fn lower(space: SectionSpace, v: &BlockVector) -> Option<BlockVector> {
    if v.s + 1 >= space.block_count() {
        return None;
    }
    let (l, m) = (space.l, space.m());
    let src = space.block_range(v.s);
    let dst = space.block_range(v.s + 1);
    let mut out = vec![0.0; dst.end() - dst.start() + 1];
    for (i, c) in v.coeffs.iter().enumerate() {
        let a = src.start() + i;
        let b = v.s - a;
        if a < l {
            out[a + 1 - dst.start()] += c * (((l - a) * (a + 1)) as f64).sqrt();
        }
        if b < m {
            out[a - dst.start()] += c * (((m - b) * (b + 1)) as f64).sqrt();
        }
    }
    Some(BlockVector {
        s: v.s + 1,
        coeffs: out,
    })
}

/// Dense `E, F, H` on the monomial basis, with integer entries.
pub fn ladder_matrices(space: SectionSpace) -> Result<(DMatrix<i64>, DMatrix<i64>, DMatrix<i64>)> {
    let n = space.dim();
    if n > LADDER_BUDGET {
        return Err(Error::LadderBudget {
            level: space.l,
            budget: LADDER_BUDGET,
        });
    }
    let (l, m) = (space.l, space.m());
    let mut e = DMatrix::<i64>::zeros(n, n);
    let mut f = DMatrix::<i64>::zeros(n, n);
    for idx in space.monomials() {
        let (a, b) = (idx.a, idx.b);
        let col = space.index(a, b);
        // E = z₁∂_{z₀} + w₁∂_{w₀}, F = z₀∂_{z₁} + w₀∂_{w₁}
        if a > 0 {
            e[(space.index(a - 1, b), col)] += a as i64;
        }
        if b > 0 {
            e[(space.index(a, b - 1), col)] += b as i64;
        }
        if a < l {
            f[(space.index(a + 1, b), col)] += (l - a) as i64;
        }
        if b < m {
            f[(space.index(a, b + 1), col)] += (m - b) as i64;
        }
    }
    let h = &e * &f - &f * &e;
    Ok((e, f, h))
}

/// Block `s` holding the highest weight `ν − 1`, if any.
pub fn highest_weight_block(space: SectionSpace, nu: IrrepLabel) -> Option<usize> {
    let top = space.l + space.m() + 1;
    let nu = nu.get() as usize;
    if nu > top || !(top - nu).is_multiple_of(2) {
        return None;
    }
    Some((top - nu) / 2)
}

/// Orthonormal basis of `ker E` on the weight-`(ν−1)` block.
pub fn highest_weight_vectors(space: SectionSpace, nu: IrrepLabel) -> Vec<BlockVector> {
    let Some(s) = highest_weight_block(space, nu) else {
        return vec![];
    };
    let range = space.block_range(s);
    let width = range.end() - range.start() + 1;
    if s == 0 {
        return vec![BlockVector {
            s,
            coeffs: vec![1.0],
        }];
    }
    if width > SVD_WIDTH {
        if multiplicity(space, nu) == 0 {
            return vec![];
        }
        // deterministic start with no special symmetry
        let start = BlockVector {
            s,
            coeffs: (0..width)
                .map(|i| 1.0 + 0.1 * ((i as f64) * 0.7).sin())
                .collect(),
        };
        let mut v = refine(space, &start, 0.0);
        v = refine(space, &v, 0.0);
        return vec![v];
    }
    let rows = space.block_range(s - 1).end() - space.block_range(s - 1).start() + 1;
    let mut mat = DMatrix::<f64>::zeros(rows.max(width), width);
    for i in 0..width {
        let mut unit = vec![0.0; width];
        unit[i] = 1.0;
        let col = raise(space, &BlockVector { s, coeffs: unit }).expect("s > 0");
        for (r, c) in col.coeffs.iter().enumerate() {
            mat[(r, i)] = *c;
        }
    }
    let svd = mat.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max().max(1.0);
    (0..width)
        .filter(|&i| svd.singular_values[i] <= NULL_TOL * smax)
        .map(|i| BlockVector {
            s,
            coeffs: vt.row(i).iter().copied().collect(),
        })
        .collect()
}

/// [`highest_weight_vectors`] in monomial coordinates.
pub fn highest_weight_space(space: SectionSpace, nu: IrrepLabel) -> Vec<SectionVector> {
    highest_weight_vectors(space, nu)
        .iter()
        .map(|v| v.to_section(space))
        .collect()
}

/// Orthonormal basis of the `V_ν`-isotypic part of a section space.
#[derive(Debug, Clone)]
pub struct IsotypicBasis {
    pub nu: IrrepLabel,
    pub space: SectionSpace,
    pub vectors: Vec<BlockVector>,
}

impl IsotypicBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn sections(&self) -> Vec<SectionVector> {
        self.vectors
            .iter()
            .map(|v| v.to_section(self.space))
            .collect()
    }

    /// `Σ_v v(x)·conj(v(y))`.
    pub fn kernel(&self, x: &BundlePoint, y: &BundlePoint) -> Complex64 {
        if self.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let vx = OrthoValues::new(self.space, x);
        if x == y {
            return self
                .vectors
                .iter()
                .map(|v| v.evaluate(self.space, &vx).norm_sqr())
                .sum::<f64>()
                .into();
        }
        let vy = OrthoValues::new(self.space, y);
        self.vectors
            .iter()
            .map(|v| v.evaluate(self.space, &vx) * v.evaluate(self.space, &vy).conj())
            .sum()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                err = err.max((u.dot(v) - want).abs());
            }
        }
        err
    }
}

/// Diagonal and superdiagonal of `FE = E_sᵀE_s` on block `s` (orthonormal coordinates).
fn fe_block(space: SectionSpace, s: usize) -> (Vec<f64>, Vec<f64>) {
    let (l, m) = (space.l as f64, space.m() as f64);
    let range = space.block_range(s);
    let alpha = |a: usize| (a as f64 * (l - a as f64 + 1.0)).sqrt();
    let beta = |b: usize| (b as f64 * (m - b as f64 + 1.0)).sqrt();
    let diag: Vec<f64> = range
        .clone()
        .map(|a| alpha(a).powi(2) + beta(s - a).powi(2))
        .collect();
    let sup: Vec<f64> = range
        .clone()
        .skip(1)
        .map(|a1| beta(s - a1 + 1) * alpha(a1))
        .collect();
    (diag, sup)
}

/// Solves `(T − σ)x = rhs` for symmetric tridiagonal `T` by elimination with
/// partial pivoting; exactly singular pivots are nudged.
fn shifted_tridiagonal_solve(diag: &[f64], sup: &[f64], sigma: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let tiny = f64::EPSILON * diag.iter().fold(1.0f64, |acc, d| acc.max(d.abs()));
    // rows of U: (u0, u1, u2) at columns (i, i+1, i+2)
    let mut u = vec![[0.0f64; 3]; n];
    let mut y = rhs.to_vec();
    let sub = sup;
    let mut cur = [diag[0] - sigma, sup.first().copied().unwrap_or(0.0), 0.0];
    for i in 0..n {
        if i + 1 < n {
            let next = [
                sub[i],
                diag[i + 1] - sigma,
                sup.get(i + 1).copied().unwrap_or(0.0),
            ];
            let (mut piv, mut other) = (cur, next);
            if next[0].abs() > cur[0].abs() {
                std::mem::swap(&mut piv, &mut other);
                y.swap(i, i + 1);
            }
            if piv[0] == 0.0 {
                piv[0] = tiny;
            }
            let f = other[0] / piv[0];
            y[i + 1] -= f * y[i];
            u[i] = piv;
            cur = [other[1] - f * piv[1], other[2] - f * piv[2], 0.0];
        } else {
            if cur[0] == 0.0 {
                cur[0] = tiny;
            }
            u[i] = cur;
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = y[i];
        if i + 1 < n {
            acc -= u[i][1] * x[i + 1];
        }
        if i + 2 < n {
            acc -= u[i][2] * x[i + 2];
        }
        x[i] = acc / u[i][0];
    }
    x
}

/// Projects a block vector onto the `FE = target` eigenline by inverse iteration.
fn refine(space: SectionSpace, v: &BlockVector, target: f64) -> BlockVector {
    let (diag, sup) = fe_block(space, v.s);
    let scale = diag.iter().fold(1.0f64, |acc, d| acc.max(d.abs()));
    let sigma = target + 1e-13 * scale;
    let mut x = v.coeffs.clone();
    for _ in 0..2 {
        x = shifted_tridiagonal_solve(&diag, &sup, sigma, &x);
        let n = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        x.iter_mut().for_each(|c| *c /= n);
    }
    BlockVector { s: v.s, coeffs: x }
}

/// Chains `F^j v/‖F^j v‖`, `j = 0..ν−1`, over the highest weight vectors.
///
/// `F^j v` lies on the `FE = j(ν−j)` eigenline of its block, and that line is
/// simple because the decomposition is multiplicity free; each step is cleaned
/// by inverse iteration so rounding leaking into larger irreps is not amplified.
pub fn isotypic_basis(space: SectionSpace, nu: IrrepLabel) -> IsotypicBasis {
    let n = nu.get() as usize;
    let mut vectors = vec![];
    for hw in highest_weight_vectors(space, nu) {
        let mut v = hw;
        for j in 0..n {
            let norm = v.norm();
            let mut unit = BlockVector {
                s: v.s,
                coeffs: v.coeffs.iter().map(|c| c / norm).collect(),
            };
            if j > 0 {
                let refined = refine(space, &unit, (j * (n - j)) as f64);
                // keep the orientation of the chain
                let sign = refined.dot(&unit).signum();
                unit.coeffs = refined.coeffs.iter().map(|c| c * sign).collect();
            }
            if j + 1 < n {
                v = lower(space, &unit).expect("chain stays inside the space");
            }
            vectors.push(unit);
        }
    }
    IsotypicBasis { nu, space, vectors }
}

/// `clebsch_multiplicity(l+1, m+1, ν)`.
pub fn multiplicity(space: SectionSpace, nu: IrrepLabel) -> u32 {
    let a = IrrepLabel::new(space.l as u32 + 1).expect("positive");
    let b = IrrepLabel::new(space.m() as u32 + 1).expect("positive");
    clebsch_multiplicity(a, b, nu)
}

/// Least-squares coordinates of `f` values on points in the orthonormal basis;
/// used to realize the group action as a matrix.
pub fn ortho_design_matrix(space: SectionSpace, points: &[BundlePoint]) -> DMatrix<Complex64> {
    let mut out = DMatrix::<Complex64>::zeros(points.len(), space.dim());
    for (i, p) in points.iter().enumerate() {
        let vals = OrthoValues::new(space, p);
        for idx in space.monomials() {
            out[(i, space.index(idx.a, idx.b))] = vals.get(idx.a, idx.b);
        }
    }
    out
}

/// Coefficients of a block vector in the full orthonormal coordinate vector.
pub fn block_to_dense(space: SectionSpace, v: &BlockVector) -> DVector<f64> {
    let mut out = DVector::<f64>::zeros(space.dim());
    let lo = *space.block_range(v.s).start();
    for (i, c) in v.coeffs.iter().enumerate() {
        out[space.index(lo + i, v.s - lo - i)] = *c;
    }
    out
}
