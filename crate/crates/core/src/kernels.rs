//! Exact level kernels and the equivariant projector kernel `Π_{kν}`.
//!
//! `Π_{kν}` is assembled from isotypic orthonormal bases; the character
//! quadrature `kν·∫ χ̄_{kν}(g) Π(g⁻¹x, y) dg` is kept as an independent oracle.

use std::num::NonZeroUsize;
use std::sync::Arc;

use lru::LruCache;
use num_complex::Complex64;
use parking_lot::Mutex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{act, BundlePoint, ModelSpace};
use crate::sections::{isotypic_basis, multiplicity, IsotypicBasis, OrthoValues, SectionSpace};
use crate::su2_rep::{character_group, HaarQuadrature, IrrepLabel};

/// Default number of cached isotypic bases.
pub const DEFAULT_CACHE_SIZE: usize = 512;

fn check_models(x: &BundlePoint, y: &BundlePoint) -> Result<ModelSpace> {
    if x.model() != y.model() {
        return Err(Error::ModelMismatch {
            expected: match x.model() {
                ModelSpace::P1 => "P1",
                ModelSpace::P1xP1 { .. } => "P1xP1",
            },
        });
    }
    Ok(x.model())
}

/// Level-`l` Szegő kernel `Σ e_ab(x)·conj(e_ab(y))` over the orthonormal monomials.
pub fn level_kernel(l: usize, x: &BundlePoint, y: &BundlePoint) -> Result<Complex64> {
    let model = check_models(x, y)?;
    Ok(level_kernel_unchecked(SectionSpace::new(model, l), x, y))
}

fn level_kernel_unchecked(space: SectionSpace, x: &BundlePoint, y: &BundlePoint) -> Complex64 {
    let vx = OrthoValues::new(space, x);
    let vy = OrthoValues::new(space, y);
    // the double sum over (a, b) factorizes
    let dot = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        u.iter().zip(v).map(|(p, q)| p * q.conj()).sum()
    };
    dot(vx.z_factors(), vy.z_factors())
        * dot(vx.w_factors(), vy.w_factors())
        * (vx.scale() * vy.scale())
}

/// Levels `l` with `V_{kν} ⊂ H⁰(M, A^{⊗l})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRange {
    pub k: u32,
    pub nu: u32,
    pub model: ModelSpace,
    /// Levels in the inequality window, with the parity test result.
    pub window: Vec<(usize, bool)>,
}

impl LevelRange {
    pub fn levels(&self) -> Vec<usize> {
        self.window
            .iter()
            .filter(|(_, ok)| *ok)
            .map(|(l, _)| *l)
            .collect()
    }

    pub fn count(&self) -> usize {
        self.window.iter().filter(|(_, ok)| *ok).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }
}

/// `(kν−1)/(r+1) ≤ l ≤ (kν−1)/(r−1)` and `kν ≡ l(r+1)+1 (mod 2)`; on ℙ¹ only `l = kν−1`.
pub fn admissible_levels(k: u32, nu: IrrepLabel, model: ModelSpace) -> LevelRange {
    let kn = k as u64 * nu.get() as u64;
    let window = match model {
        ModelSpace::P1 => {
            if kn == 0 {
                vec![]
            } else {
                vec![((kn - 1) as usize, true)]
            }
        }
        ModelSpace::P1xP1 { r } => {
            if kn == 0 {
                vec![]
            } else {
                let r = r as u64;
                let lo = (kn - 1).div_ceil(r + 1);
                let hi = (kn - 1) / (r - 1);
                (lo..=hi)
                    .map(|l| (l as usize, (kn + l * (r + 1) + 1).is_multiple_of(2)))
                    .collect()
            }
        }
    };
    LevelRange {
        k,
        nu: nu.get(),
        model,
        window,
    }
}

/// `kν·Σ_l mult(V_{kν}, H⁰(A^{⊗l}))`.
pub fn dimension(k: u32, nu: IrrepLabel, model: ModelSpace) -> u64 {
    let kn = k * nu.get();
    let Ok(label) = IrrepLabel::new(kn) else {
        return 0;
    };
    admissible_levels(k, nu, model)
        .levels()
        .into_iter()
        .map(|l| multiplicity(SectionSpace::new(model, l), label) as u64)
        .sum::<u64>()
        * kn as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    Isotypic,
    CharacterQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub k: u32,
    pub nu: u32,
    pub method: KernelMethod,
}

type BasisKey = (ModelSpace, usize, u32);

/// Evaluates `Π_{kν}` with a bounded LRU store of isotypic bases.
pub struct KernelEngine {
    cache: Mutex<LruCache<BasisKey, Arc<IsotypicBasis>>>,
}

impl Default for KernelEngine {
    fn default() -> Self {
        Self::new(DEFAULT_CACHE_SIZE)
    }
}

impl KernelEngine {
    pub fn new(capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity.max(1)).expect("nonzero");
        Self {
            cache: Mutex::new(LruCache::new(cap)),
        }
    }

    pub fn basis(&self, model: ModelSpace, l: usize, nu: IrrepLabel) -> Arc<IsotypicBasis> {
        let key = (model, l, nu.get());
        if let Some(b) = self.cache.lock().get(&key) {
            return Arc::clone(b);
        }
        let built = Arc::new(isotypic_basis(SectionSpace::new(model, l), nu));
        self.cache.lock().put(key, Arc::clone(&built));
        built
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().len()
    }

    /// `Π_{kν}(x, y)` from isotypic bases (level kernel on ℙ¹).
    pub fn equivariant_kernel(
        &self,
        k: u32,
        nu: IrrepLabel,
        x: &BundlePoint,
        y: &BundlePoint,
    ) -> Result<KernelValue> {
        let model = check_models(x, y)?;
        let range = admissible_levels(k, nu, model);
        let out = |value| KernelValue {
            value,
            k,
            nu: nu.get(),
            method: KernelMethod::Isotypic,
        };
        if range.is_empty() {
            return Ok(out(Complex64::new(0.0, 0.0)));
        }
        let label = IrrepLabel::new(k * nu.get())?;
        let value = match model {
            ModelSpace::P1 => {
                level_kernel_unchecked(SectionSpace::new(model, range.levels()[0]), x, y)
            }
            ModelSpace::P1xP1 { .. } => range
                .levels()
                .par_iter()
                .map(|&l| self.basis(model, l, label).kernel(x, y))
                .reduce(|| Complex64::new(0.0, 0.0), |a, b| a + b),
        };
        Ok(out(value))
    }

    /// `Π_{kν}(x, y)` for many `k`, in parallel, returned in input order.
    pub fn sweep(
        &self,
        ks: &[u32],
        nu: IrrepLabel,
        x: &BundlePoint,
        y: &BundlePoint,
    ) -> Result<Vec<KernelValue>> {
        ks.par_iter()
            .map(|&k| self.equivariant_kernel(k, nu, x, y))
            .collect()
    }
}

/// Quadrature degree needed by [`equivariant_kernel_quadrature`].
pub fn required_quadrature_degree(k: u32, nu: IrrepLabel, model: ModelSpace) -> usize {
    let kn = (k * nu.get()) as usize;
    admissible_levels(k, nu, model)
        .levels()
        .into_iter()
        .map(|l| {
            let total = l + SectionSpace::new(model, l).m() + kn - 1;
            total.div_ceil(2) + 1
        })
        .max()
        .unwrap_or(1)
}

/// `kν·Σ_nodes w·χ̄_{kν}(g)·Σ_l Π_l(g⁻¹x, y)`.
pub fn equivariant_kernel_quadrature(
    k: u32,
    nu: IrrepLabel,
    x: &BundlePoint,
    y: &BundlePoint,
    q: &HaarQuadrature,
) -> Result<KernelValue> {
    let model = check_models(x, y)?;
    let need = required_quadrature_degree(k, nu, model);
    if q.degree() < need {
        return Err(Error::InsufficientQuadrature {
            have: q.degree(),
            need,
        });
    }
    let kn = k * nu.get();
    let label = IrrepLabel::new(kn)?;
    let spaces: Vec<SectionSpace> = admissible_levels(k, nu, model)
        .levels()
        .into_iter()
        .map(|l| SectionSpace::new(model, l))
        .collect();
    let value: Complex64 = q
        .nodes()
        .par_iter()
        .zip(q.weights().par_iter())
        .map(|(g, w)| {
            let gx = act(&g.inverse(), x);
            let inner: Complex64 = spaces
                .iter()
                .map(|s| level_kernel_unchecked(*s, &gx, y))
                .sum();
            inner * (w * character_group(label, g))
        })
        .reduce(|| Complex64::new(0.0, 0.0), |a, b| a + b);
    Ok(KernelValue {
        value: value * kn as f64,
        k,
        nu: nu.get(),
        method: KernelMethod::CharacterQuadrature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{herm, hlc_chart, TangentVector};
    use crate::su2_rep::{haar_quadrature, GroupElement, Spinor};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn prod(r: u32) -> ModelSpace {
        ModelSpace::product(r).unwrap()
    }

    fn nu(n: u32) -> IrrepLabel {
        IrrepLabel::new(n).unwrap()
    }

    #[test]
    fn level_kernel_diagonal_and_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for model in [ModelSpace::P1, prod(2), prod(3)] {
            for l in [0usize, 1, 4, 30, 200] {
                let space = SectionSpace::new(model, l);
                let x = BundlePoint::random(model, &mut rng);
                let d = level_kernel(l, &x, &x).unwrap();
                assert_abs_diff_eq!(
                    d.re * model.volume(),
                    space.dim() as f64,
                    epsilon = 1e-9 * space.dim() as f64
                );
                let y = BundlePoint::random(model, &mut rng);
                let v = level_kernel(l, &x, &y).unwrap();
                assert!(v.norm_sqr() <= d.re * level_kernel(l, &y, &y).unwrap().re * (1.0 + 1e-12));
                let want = space.dim() as f64 / model.volume();
                let closed = |y: &BundlePoint| {
                    herm(x.z(), y.z()).powu(l as u32)
                        * herm(x.w(), y.w()).powu(space.m() as u32)
                        * want
                };
                // off-diagonal sums cancel; the error is bounded by ε·Π_l(x,x)
                assert!((v - closed(&y)).norm() <= 1e-12 * want);
                // relative agreement near the diagonal
                let v2 = TangentVector(vec![Complex64::new(0.3, 0.1); model.dim()]);
                let near = hlc_chart(&x, &v2, (l as u32 + 1) * 4).unwrap();
                let c = level_kernel(l, &x, &near).unwrap() / closed(&near);
                assert!((c - 1.0).norm() <= 1e-10, "l={l} ratio {c}");
            }
        }
        let p = BundlePoint::random(ModelSpace::P1, &mut rng);
        assert_abs_diff_eq!(
            level_kernel(3, &p, &p).unwrap().re,
            4.0 / PI,
            epsilon = 1e-13
        );
        let q = BundlePoint::random(prod(2), &mut rng);
        assert!(level_kernel(1, &p, &q).is_err());
    }

    #[test]
    fn level_kernel_at_coordinate_points() {
        let e0 = Spinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let e1 = Spinor::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let x = BundlePoint::product(2, e0, e1).unwrap();
        let y = BundlePoint::product(2, e0, e1 * Complex64::new(0.0, 1.0)).unwrap();
        let v = level_kernel(3, &x, &y).unwrap();
        let want = 4.0 * 7.0 / (2.0 * PI * PI) * Complex64::new(0.0, -1.0).powu(6);
        assert_abs_diff_eq!((v - want).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn admissible_levels_examples() {
        for r in [3u32, 5] {
            for kn in (2..=60).step_by(2) {
                assert!(admissible_levels(kn, nu(1), prod(r)).is_empty());
                assert_eq!(dimension(kn, nu(1), prod(r)), 0);
            }
        }
        let r3 = admissible_levels(1001, nu(1), prod(3));
        let ratio = r3.count() as f64 / (2.0 * 1001.0 / 8.0);
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
        let r2 = admissible_levels(1000, nu(1), prod(2));
        let ratio = r2.count() as f64 / (1000.0 / 3.0);
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
        for r in 2..6u32 {
            for kn in 1..40u32 {
                let range = admissible_levels(kn, nu(1), prod(r));
                for &(l, ok) in &range.window {
                    assert!((kn - 1) as usize <= l * (r as usize + 1));
                    assert!(l * (r as usize - 1) <= (kn - 1) as usize);
                    assert_eq!(ok, multiplicity(SectionSpace::new(prod(r), l), nu(kn)) == 1);
                }
                // exhaustive: no other level carries V_{kν}
                for l in 0..60usize {
                    if multiplicity(SectionSpace::new(prod(r), l), nu(kn)) == 1 {
                        assert!(range.levels().contains(&l));
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_examples() {
        for k in 1..50 {
            assert_eq!(dimension(k, nu(1), ModelSpace::P1), k as u64);
            assert_eq!(dimension(k, nu(3), ModelSpace::P1), 3 * k as u64);
        }
        let engine = KernelEngine::default();
        for r in [2u32, 3] {
            for kn in 1..25u32 {
                let counted: usize = admissible_levels(kn, nu(1), prod(r))
                    .levels()
                    .into_iter()
                    .map(|l| engine.basis(prod(r), l, nu(kn)).len())
                    .sum();
                assert_eq!(counted as u64, dimension(kn, nu(1), prod(r)));
            }
        }
        let d = dimension(201, nu(1), prod(3)) as f64 / (201.0f64 * 201.0);
        assert!((d / 0.25 - 1.0).abs() < 0.05);
    }

    #[test]
    fn p1_kernel_is_level_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let engine = KernelEngine::default();
        for k in [1u32, 7, 300] {
            let x = BundlePoint::random(ModelSpace::P1, &mut rng);
            let v = engine.equivariant_kernel(k, nu(1), &x, &x).unwrap();
            assert_abs_diff_eq!(v.value.re * PI / k as f64, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn equivariant_kernel_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let engine = KernelEngine::default();
        for (r, kn) in [(2u32, 7u32), (3, 9), (4, 10)] {
            let model = prod(r);
            let x = BundlePoint::random(model, &mut rng);
            let y = BundlePoint::random(model, &mut rng);
            let xy = engine.equivariant_kernel(kn, nu(1), &x, &y).unwrap().value;
            let yx = engine.equivariant_kernel(kn, nu(1), &y, &x).unwrap().value;
            assert_abs_diff_eq!((xy - yx.conj()).norm(), 0.0, epsilon = 1e-12);
            let g = GroupElement::random(&mut rng);
            let moved = engine
                .equivariant_kernel(kn, nu(1), &act(&g, &x), &act(&g, &y))
                .unwrap()
                .value;
            assert_abs_diff_eq!((xy - moved).norm(), 0.0, epsilon = 1e-9);
        }
        let x = BundlePoint::random(prod(3), &mut rng);
        let y = BundlePoint::random(prod(3), &mut rng);
        assert_eq!(
            engine.equivariant_kernel(8, nu(1), &x, &y).unwrap().value,
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn kernel_gram_matrices_are_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let engine = KernelEngine::default();
        let model = prod(2);
        let pts: Vec<BundlePoint> = (0..12)
            .map(|_| BundlePoint::random(model, &mut rng))
            .collect();
        let n = pts.len();
        let gram = DMatrix::from_fn(n, n, |i, j| {
            engine
                .equivariant_kernel(8, nu(1), &pts[i], &pts[j])
                .unwrap()
                .value
        });
        let eig = gram.clone().symmetric_eigenvalues();
        let tr = gram.trace().re;
        assert!(eig.min() >= -1e-9 * tr);
    }

    #[test]
    fn dual_method_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let engine = KernelEngine::default();
        let model = prod(2);
        for kn in [3u32, 6] {
            let q = haar_quadrature(required_quadrature_degree(kn, nu(1), model)).unwrap();
            for _ in 0..3 {
                let x = BundlePoint::random(model, &mut rng);
                let y = BundlePoint::random(model, &mut rng);
                let a = engine.equivariant_kernel(kn, nu(1), &x, &y).unwrap().value;
                let b = equivariant_kernel_quadrature(kn, nu(1), &x, &y, &q)
                    .unwrap()
                    .value;
                assert!((a - b).norm() <= 1e-8 * a.norm().max(1e-300), "{a} vs {b}");
            }
        }
        let q = haar_quadrature(2).unwrap();
        let x = BundlePoint::random(model, &mut rng);
        assert!(matches!(
            equivariant_kernel_quadrature(6, nu(1), &x, &x, &q),
            Err(Error::InsufficientQuadrature { .. })
        ));
        // P1, k = ν = 1: level-0 kernel
        let p = BundlePoint::random(ModelSpace::P1, &mut rng);
        let q = haar_quadrature(2).unwrap();
        let v = equivariant_kernel_quadrature(1, nu(1), &p, &p, &q)
            .unwrap()
            .value;
        assert_abs_diff_eq!(v.re, 1.0 / PI, epsilon = 1e-12);
    }

    #[test]
    fn vanishing_case_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let model = prod(3);
        let q = haar_quadrature(8).unwrap();
        let x = BundlePoint::random(model, &mut rng);
        let y = BundlePoint::random(model, &mut rng);
        let v = equivariant_kernel_quadrature(4, nu(1), &x, &y, &q)
            .unwrap()
            .value;
        assert!(v.norm() <= 1e-10);
    }

    #[test]
    fn cache_is_bounded() {
        let engine = KernelEngine::new(3);
        for l in 0..10 {
            engine.basis(prod(2), l, nu(1));
        }
        assert_eq!(engine.cached(), 3);
    }

    #[test]
    fn sweep_preserves_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let engine = KernelEngine::default();
        let x = BundlePoint::random(prod(2), &mut rng);
        let ks: Vec<u32> = (1..20).collect();
        let vals = engine.sweep(&ks, nu(1), &x, &x).unwrap();
        for (k, v) in ks.iter().zip(&vals) {
            assert_eq!(v.k, *k);
            let direct = engine.equivariant_kernel(*k, nu(1), &x, &x).unwrap();
            assert_abs_diff_eq!((direct.value - v.value).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
