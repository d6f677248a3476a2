//! Leading-order predictions for `Π_{kν}` on and near the diagonal, the
//! dimension-limit integral, and small fitting helpers used by the harness.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::geometry::{
    c_and_b_matrices, lambda_of, moment, psi2, stabilizer, BundlePoint, FiberNorm, ModelSpace,
    StabilizerInfo, TangentVector, CHART_RADIUS,
};
use crate::su2_rep::{f_ell, IrrepLabel};

/// Area of the unit 3-sphere.
pub const V3: f64 = 2.0 * PI * PI;

/// `D_{G/T} = 2π/V₃`.
pub fn d_g_t() -> f64 {
    2.0 * PI / V3
}

/// Reading of the non-central bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bracket {
    /// `4π·D_{G/T}·Σ_j Re(i sin ϑ_j e^{−ikνϑ_j}/√det B)`.
    #[default]
    Theorem,
    /// The derivation's own normalization: `8π·D_{G/T}` per `±ϑ_j` pair with
    /// `B' = C/2 + 4i·sin(2ϑ_j)·λ·I`.
    Sec4,
}

impl Bracket {
    pub fn label(self) -> &'static str {
        match self {
            Bracket::Theorem => "thm",
            Bracket::Sec4 => "sec4",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticPrediction {
    pub k: u32,
    pub nu: u32,
    /// `(ϑ, contribution)` per central stabilizer element.
    pub central: Vec<(f64, f64)>,
    /// `(ϑ_j, contribution)` per non-central pair representative.
    pub noncentral: Vec<(f64, f64)>,
}

impl AsymptoticPrediction {
    pub fn central_total(&self) -> f64 {
        self.central.iter().map(|(_, v)| v).sum()
    }

    pub fn noncentral_total(&self) -> f64 {
        self.noncentral.iter().map(|(_, v)| v).sum()
    }

    pub fn total(&self) -> f64 {
        self.central_total() + self.noncentral_total()
    }
}

fn growth(k: u32, nu: IrrepLabel, lambda: f64, d: usize) -> f64 {
    (nu.get() as f64 * k as f64 / (2.0 * PI * lambda)).powi(d as i32)
}

fn ell(k: u32, nu: IrrepLabel) -> i64 {
    1 - k as i64 * nu.get() as i64
}

/// `(1/2λ)·(νk/2πλ)^d·Σ_{g∈Z_x} f_{1−kν}(g)`.
pub fn leading_diag_central(k: u32, nu: IrrepLabel, x: &BundlePoint) -> Result<f64> {
    Ok(central_terms(k, nu, x, &stabilizer(x))?
        .iter()
        .map(|(_, v)| v)
        .sum())
}

fn central_terms(
    k: u32,
    nu: IrrepLabel,
    x: &BundlePoint,
    stab: &StabilizerInfo,
) -> Result<Vec<(f64, f64)>> {
    let lambda = lambda_of(&moment(x))?;
    let pre = growth(k, nu, lambda, x.model().dim()) / (2.0 * lambda);
    Ok(stab
        .central_angles()
        .into_iter()
        .map(|t| (t, pre * f_ell(ell(k, nu), t).re))
        .collect())
}

fn noncentral_terms(
    k: u32,
    nu: IrrepLabel,
    x: &BundlePoint,
    stab: &StabilizerInfo,
    fiber: FiberNorm,
    bracket: Bracket,
) -> Result<Vec<(f64, f64)>> {
    let lambda = lambda_of(&moment(x))?;
    let d = x.model().dim();
    let kn = k as f64 * nu.get() as f64;
    let mut out = vec![];
    for j in stab.noncentral_representatives() {
        let theta = stab.angles[j];
        let (c, b) = c_and_b_matrices(x, j, fiber)?;
        let (front, det) = match bracket {
            Bracket::Theorem => (4.0, b.determinant()),
            Bracket::Sec4 => {
                let shift = Complex64::new(0.0, 4.0 * (2.0 * theta).sin() * lambda);
                let half =
                    c.map(|v| Complex64::new(0.5 * v, 0.0)) + nalgebra::Matrix2::identity() * shift;
                (8.0, half.determinant())
            }
        };
        // det B does not depend on k, so the principal branch is continuous along sweeps
        let phase = Complex64::new(0.0, theta.sin()) * Complex64::from_polar(1.0, -kn * theta);
        let term = (phase / det.sqrt()).re;
        out.push((
            theta,
            front * PI * d_g_t() * growth(k, nu, lambda, d) * term,
        ));
    }
    Ok(out)
}

/// Non-central stabilizer contribution; 0 when `G_x ⊂ Z(G)`.
pub fn leading_diag_noncentral(
    k: u32,
    nu: IrrepLabel,
    x: &BundlePoint,
    fiber: FiberNorm,
    bracket: Bracket,
) -> Result<f64> {
    let stab = stabilizer(x);
    Ok(noncentral_terms(k, nu, x, &stab, fiber, bracket)?
        .iter()
        .map(|(_, v)| v)
        .sum())
}

/// Both diagonal terms with their breakdown.
pub fn leading_diag(
    k: u32,
    nu: IrrepLabel,
    x: &BundlePoint,
    fiber: FiberNorm,
    bracket: Bracket,
) -> Result<AsymptoticPrediction> {
    let stab = stabilizer(x);
    Ok(AsymptoticPrediction {
        k,
        nu: nu.get(),
        central: central_terms(k, nu, x, &stab)?,
        noncentral: noncentral_terms(k, nu, x, &stab, fiber, bracket)?,
    })
}

/// `(1/2λ)·(νk/2πλ)^d·Σ_{g∈G_x} f_{1−kν}(g)·e^{u₀ψ₂(v₁^{(g)}, v₂)}` for `G_x ⊂ {±I}`.
///
/// `±I` act trivially on `M`, so `v₁^{(g)} = v₁`.
pub fn leading_near_diag(
    k: u32,
    nu: IrrepLabel,
    x: &BundlePoint,
    v1: &TangentVector,
    v2: &TangentVector,
) -> Result<Complex64> {
    let d = x.model().dim();
    for v in [v1, v2] {
        if v.dim() != d {
            return Err(Error::TangentDimension {
                got: v.dim(),
                want: d,
            });
        }
        let rad = v.norm() / (k as f64).sqrt();
        if rad > CHART_RADIUS {
            return Err(Error::ChartRadius(rad));
        }
    }
    let stab = stabilizer(x);
    if stab.angles.iter().any(|&t| !StabilizerInfo::is_central(t)) {
        return Err(Error::NonCentralStabilizer);
    }
    let lambda = lambda_of(&moment(x))?;
    let u0 = nu.get() as f64 / (2.0 * lambda);
    let pre = growth(k, nu, lambda, d) / (2.0 * lambda);
    let gauss = (psi2(v1, v2) * u0).exp();
    let sum: Complex64 = stab
        .central_angles()
        .into_iter()
        .map(|t| f_ell(ell(k, nu), t))
        .sum();
    Ok(sum * gauss * pre)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

fn inverse_cube_2lambda(n1: [f64; 3], n2: [f64; 3], r: f64) -> f64 {
    // 2λ = |n₁ + r·n₂| for unit vectors in S²
    let s: f64 = (0..3).map(|i| (n1[i] + r * n2[i]).powi(2)).sum();
    s.powf(-1.5)
}

fn sphere_point(u: f64, phi: f64) -> [f64; 3] {
    let s = (1.0 - u * u).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), u]
}

/// `∫_M (2λ(m))^{−(d+1)} dV_M` by Monte Carlo over `S² × S²`.
///
/// Refuses odd `r` (the action is not generically free there) unless `force`.
pub fn dimension_limit_integral(
    model: ModelSpace,
    samples: usize,
    seed: u64,
    force: bool,
) -> Result<IntegralEstimate> {
    let ModelSpace::P1xP1 { r } = model else {
        return Err(Error::ModelMismatch { expected: "P1xP1" });
    };
    if r % 2 == 1 && !force {
        return Err(Error::NotGenericallyFree(r));
    }
    let rf = r as f64;
    const BATCH: usize = 1 << 14;
    let batches = samples.div_ceil(BATCH);
    let sums: Vec<(f64, f64, usize)> = (0..batches)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let n = BATCH.min(samples - i * BATCH);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let u1 = rand::Rng::random_range(&mut rng, -1.0..1.0);
                let p1 = rand::Rng::random_range(&mut rng, 0.0..2.0 * PI);
                let u2 = rand::Rng::random_range(&mut rng, -1.0..1.0);
                let p2 = rand::Rng::random_range(&mut rng, 0.0..2.0 * PI);
                let f = inverse_cube_2lambda(sphere_point(u1, p1), sphere_point(u2, p2), rf);
                s += f;
                s2 += f * f;
            }
            (s, s2, n)
        })
        .collect();
    let (s, s2, n) = sums
        .into_iter()
        .fold((0.0, 0.0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let mean = s / n as f64;
    let var = (s2 / n as f64 - mean * mean).max(0.0);
    let vol = model.volume();
    Ok(IntegralEstimate {
        value: vol * mean,
        std_error: vol * (var / n as f64).sqrt(),
        samples: n,
    })
}

/// Same integral by a product Gauss–Legendre × trapezoid rule on `S² × S²`.
pub fn dimension_limit_integral_gauss(model: ModelSpace, n: usize) -> Result<f64> {
    let ModelSpace::P1xP1 { r } = model else {
        return Err(Error::ModelMismatch { expected: "P1xP1" });
    };
    let rule = GaussLegendre::new(n.max(2)).map_err(|_| Error::InvalidDegree)?;
    let pts: Vec<(f64, f64)> = rule
        .nodes()
        .zip(rule.weights())
        .map(|(x, w)| (*x, *w))
        .collect();
    let nphi = 2 * n;
    let dphi = 2.0 * PI / nphi as f64;
    let rf = r as f64;
    // the integrand depends on the relative angle only, so one φ may be fixed
    let total: f64 = pts
        .par_iter()
        .map(|&(u1, w1)| {
            let n1 = sphere_point(u1, 0.0);
            let mut acc = 0.0;
            for &(u2, w2) in &pts {
                for j in 0..nphi {
                    let n2 = sphere_point(u2, j as f64 * dphi);
                    acc += w1 * w2 * dphi * inverse_cube_2lambda(n1, n2, rf);
                }
            }
            acc
        })
        .sum();
    // normalize by the area 2 · 2π of the (u₂, φ₂) chart times 2 for u₁
    Ok(model.volume() * total / (2.0 * 4.0 * PI))
}

/// Samples below this floor are treated as zero in [`decay_fit`].
pub const DECAY_FLOOR: f64 = 1e-300;

fn least_squares(design: DMatrix<f64>, y: DVector<f64>) -> Result<DVector<f64>> {
    design
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|_| Error::Degenerate("least-squares solve failed"))
}

/// Least-squares slope of `log|Π|` against `log k`; `−∞` when every sample is at the floor.
pub fn decay_fit(ks: &[f64], samples: &[f64]) -> Result<f64> {
    if ks.len() != samples.len() || ks.len() < 5 {
        return Err(Error::Degenerate(
            "decay fit needs at least five (k, sample) pairs",
        ));
    }
    let kept: Vec<(f64, f64)> = ks
        .iter()
        .zip(samples)
        .filter(|(_, s)| s.abs() > DECAY_FLOOR)
        .map(|(k, s)| (k.ln(), s.abs().ln()))
        .collect();
    if kept.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    if kept.len() < 2 {
        return Err(Error::Degenerate(
            "decay fit has fewer than two samples above the floor",
        ));
    }
    let n = kept.len();
    let design = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { kept[i].0 });
    let y = DVector::from_fn(n, |i, _| kept[i].1);
    Ok(least_squares(design, y)?[1])
}

/// Coefficients `c₀, c₁, …` of `y ≈ Σ_j c_j k^{−j}` (`order + 1` terms).
pub fn richardson_fit(ks: &[f64], ys: &[f64], order: usize) -> Result<Vec<f64>> {
    if ks.len() != ys.len() || ks.len() <= order {
        return Err(Error::Degenerate(
            "Richardson fit needs more samples than terms",
        ));
    }
    let n = ks.len();
    let design = DMatrix::from_fn(n, order + 1, |i, j| ks[i].powi(-(j as i32)));
    let y = DVector::from_column_slice(ys);
    Ok(least_squares(design, y)?.iter().copied().collect())
}

/// Period of the strongest nonzero discrete-Fourier mode of a real sequence.
pub fn dominant_period(series: &[f64]) -> Option<f64> {
    let n = series.len();
    if n < 4 {
        return None;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = series
        .iter()
        .map(|v| Complex64::new(v - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let best = (1..=n / 2).max_by(|&a, &b| buf[a].norm_sqr().total_cmp(&buf[b].norm_sqr()))?;
    Some(n as f64 / best as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{act, hlc_chart, transverse_directions};
    use crate::kernels::KernelEngine;
    use crate::su2_rep::{GroupElement, Spinor};
    use approx::assert_abs_diff_eq;

    fn nu(n: u32) -> IrrepLabel {
        IrrepLabel::new(n).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e0() -> Spinor {
        Spinor::new(c(1.0, 0.0), c(0.0, 0.0))
    }

    fn e1() -> Spinor {
        Spinor::new(c(0.0, 0.0), c(1.0, 0.0))
    }

    fn generic(r: u32, seed: u64) -> BundlePoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        BundlePoint::random(ModelSpace::product(r).unwrap(), &mut rng)
    }

    #[test]
    fn d_g_t_is_inverse_pi() {
        assert_abs_diff_eq!(d_g_t(), 1.0 / PI, epsilon = 1e-16);
    }

    #[test]
    fn central_examples() {
        let p = BundlePoint::p1(e0());
        for k in 1..=300 {
            let v = leading_diag_central(k, nu(1), &p).unwrap();
            assert_abs_diff_eq!(v * PI / k as f64, 1.0, epsilon = 1e-14);
        }
        let x = generic(3, 2);
        assert_eq!(leading_diag_central(4, nu(1), &x).unwrap(), 0.0);
        let lambda = lambda_of(&moment(&x)).unwrap();
        let want = 2.0 / (2.0 * lambda) * (5.0 / (2.0 * PI * lambda)).powi(2);
        assert_abs_diff_eq!(
            leading_diag_central(5, nu(1), &x).unwrap(),
            want,
            epsilon = 1e-12
        );
    }

    #[test]
    fn central_is_orbit_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for r in 2..6 {
            let x = generic(r, r as u64);
            let g = GroupElement::random(&mut rng);
            let a = leading_diag_central(7, nu(3), &x).unwrap();
            let b = leading_diag_central(7, nu(3), &act(&g, &x)).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn noncentral_examples() {
        let x = generic(3, 5);
        for bracket in [Bracket::Theorem, Bracket::Sec4] {
            assert_eq!(
                leading_diag_noncentral(5, nu(1), &x, FiberNorm::Unit, bracket).unwrap(),
                0.0
            );
        }
        let perp = BundlePoint::product(4, e1(), e0()).unwrap();
        for bracket in [Bracket::Theorem, Bracket::Sec4] {
            let vals: Vec<f64> = (10..=30)
                .map(|k| {
                    leading_diag_noncentral(k, nu(1), &perp, FiberNorm::Unit, bracket).unwrap()
                        / (k * k) as f64
                })
                .collect();
            for i in 3..vals.len() {
                assert_abs_diff_eq!(vals[i], vals[i - 3], epsilon = 1e-12);
            }
            assert!(vals.iter().any(|v| v.abs() > 1e-6));
            // the fiber-norm convention does not enter C
            let a = leading_diag_noncentral(11, nu(1), &perp, FiberNorm::Unit, bracket).unwrap();
            let b =
                leading_diag_noncentral(11, nu(1), &perp, FiberNorm::InvTwoPi, bracket).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn breakdown_sums_to_total() {
        let perp = BundlePoint::product(4, e1(), e0()).unwrap();
        let p = leading_diag(13, nu(1), &perp, FiberNorm::Unit, Bracket::Sec4).unwrap();
        assert_eq!(p.central.len(), 1);
        assert_eq!(p.noncentral.len(), 1);
        assert_abs_diff_eq!(p.total(), p.central_total() + p.noncentral_total());
        assert_abs_diff_eq!(
            p.central_total(),
            leading_diag_central(13, nu(1), &perp).unwrap()
        );
    }

    #[test]
    fn near_diag_examples() {
        let p = BundlePoint::p1(e0());
        let z = TangentVector::zero(1);
        for k in [1u32, 10, 77] {
            let v = leading_near_diag(k, nu(1), &p, &z, &z).unwrap();
            assert_abs_diff_eq!(
                v.re,
                leading_diag_central(k, nu(1), &p).unwrap(),
                epsilon = 1e-12
            );
        }
        let v1 = TangentVector(vec![c(0.4, -0.3)]);
        let v2 = TangentVector(vec![c(-0.1, 0.2)]);
        let got = leading_near_diag(50, nu(1), &p, &v1, &v2).unwrap();
        let want = psi2(&v1, &v2).exp() * (50.0 / PI);
        assert_abs_diff_eq!((got - want).norm(), 0.0, epsilon = 1e-12);
        let x = generic(3, 9);
        let lambda = lambda_of(&moment(&x)).unwrap();
        let u0 = 3.0 / (2.0 * lambda);
        let v = TangentVector(vec![c(0.5, 0.1), c(-0.2, 0.3)]);
        let z2 = TangentVector::zero(2);
        let ratio = leading_near_diag(9, nu(3), &x, &v, &z2).unwrap().norm()
            / leading_near_diag(9, nu(3), &x, &z2, &z2).unwrap().re;
        assert_abs_diff_eq!(ratio, (-u0 * v.norm().powi(2) / 2.0).exp(), epsilon = 1e-12);
        let perp = BundlePoint::product(4, e1(), e0()).unwrap();
        assert_eq!(
            leading_near_diag(9, nu(1), &perp, &z2, &z2),
            Err(Error::NonCentralStabilizer)
        );
        let big = TangentVector(vec![c(5.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            leading_near_diag(4, nu(1), &x, &big, &z2),
            Err(Error::ChartRadius(_))
        ));
    }

    #[test]
    fn p1_near_diag_matches_exact_kernel() {
        let engine = KernelEngine::default();
        let p = generic_p1();
        let k = 400;
        let v1 = TangentVector(vec![c(0.7, 0.2)]);
        let v2 = TangentVector(vec![c(-0.3, 0.5)]);
        let x1 = hlc_chart(&p, &v1, k).unwrap();
        let x2 = hlc_chart(&p, &v2, k).unwrap();
        let exact = engine.equivariant_kernel(k, nu(1), &x1, &x2).unwrap().value;
        let lead = leading_near_diag(k, nu(1), &p, &v1, &v2).unwrap();
        assert!((exact / lead - 1.0).norm() < 0.02, "{exact} vs {lead}");
    }

    fn generic_p1() -> BundlePoint {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        BundlePoint::random(ModelSpace::P1, &mut rng)
    }

    #[test]
    fn product_near_diag_rate_matches_u0() {
        let engine = KernelEngine::default();
        let x = generic(2, 12);
        let dir = transverse_directions(&x).remove(0);
        let k = 60;
        let d0 = engine
            .equivariant_kernel(k, nu(2), &x, &x)
            .unwrap()
            .value
            .re;
        let lambda = lambda_of(&moment(&x)).unwrap();
        let u0 = 2.0 / (2.0 * lambda);
        let t = 1.0;
        // ±v cancels the first-order drift of Π(y, y) across orbits
        let mut rate = 0.0;
        for sign in [1.0, -1.0] {
            let y = hlc_chart(&x, &dir.scale(sign * t), k).unwrap();
            let off = engine
                .equivariant_kernel(k, nu(2), &y, &x)
                .unwrap()
                .value
                .norm();
            rate += -(off / d0).ln() / (t * t);
        }
        assert!((rate / u0 - 1.0).abs() < 0.03, "rate {rate} vs {u0}");
    }

    #[test]
    fn integral_examples() {
        let model = ModelSpace::product(2).unwrap();
        let mc = dimension_limit_integral(model, 400_000, 1, false).unwrap();
        let gauss = dimension_limit_integral_gauss(model, 24).unwrap();
        let closed = PI * PI / 3.0;
        assert!(
            (mc.value - gauss).abs() <= 3.0 * mc.std_error,
            "{mc:?} vs {gauss}"
        );
        assert_abs_diff_eq!(gauss, closed, epsilon = 1e-6);
        assert!(matches!(
            dimension_limit_integral(ModelSpace::product(3).unwrap(), 10, 1, false),
            Err(Error::NotGenericallyFree(3))
        ));
        assert!(dimension_limit_integral(ModelSpace::product(3).unwrap(), 10, 1, true).is_ok());
    }

    #[test]
    fn integrand_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for r in 2..6u32 {
            let model = ModelSpace::product(r).unwrap();
            for _ in 0..200 {
                let x = BundlePoint::random(model, &mut rng);
                let f = (2.0 * lambda_of(&moment(&x)).unwrap()).powi(-3);
                let rf = r as f64;
                assert!(
                    f >= (rf + 1.0).powi(-3) * (1.0 - 1e-12)
                        && f <= (rf - 1.0).powi(-3) * (1.0 + 1e-12)
                );
            }
        }
    }

    #[test]
    fn decay_fit_examples() {
        let ks: Vec<f64> = (10..=50).step_by(5).map(|k| k as f64).collect();
        let pow: Vec<f64> = ks.iter().map(|k| 7.0 * k.powi(-3)).collect();
        assert_abs_diff_eq!(decay_fit(&ks, &pow).unwrap(), -3.0, epsilon = 0.01);
        let zeros = vec![0.0; ks.len()];
        assert_eq!(decay_fit(&ks, &zeros).unwrap(), f64::NEG_INFINITY);
        assert!(decay_fit(&ks[..3], &pow[..3]).is_err());
        // exponential decay: the fitted slope keeps falling as the window moves out
        let slopes: Vec<f64> = (0..4)
            .map(|s| {
                let w: Vec<f64> = (0..6).map(|i| (10 + 10 * s + 4 * i) as f64).collect();
                let y: Vec<f64> = w.iter().map(|k| (-0.3 * k).exp()).collect();
                decay_fit(&w, &y).unwrap()
            })
            .collect();
        assert!(slopes.windows(2).all(|p| p[1] < p[0]));
    }

    #[test]
    fn richardson_and_period_helpers() {
        let ks: Vec<f64> = (10..40).map(|k| k as f64).collect();
        let ys: Vec<f64> = ks.iter().map(|k| 1.0 + 2.0 / k - 3.0 / (k * k)).collect();
        let c = richardson_fit(&ks, &ys, 2).unwrap();
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c[1], 2.0, epsilon = 1e-7);
        let series: Vec<f64> = (0..60)
            .map(|t| (2.0 * PI * t as f64 / 3.0).cos() + 0.1)
            .collect();
        assert_abs_diff_eq!(dominant_period(&series).unwrap(), 3.0, epsilon = 1e-9);
    }
}
