//! Cross-module checks: kernel trace against exact dimension counts, and the
//! reproducing property against an independent quadrature.

use std::f64::consts::PI;

use eqszego::geometry::{BundlePoint, ModelSpace};
use eqszego::kernels::{dimension, KernelEngine};
use eqszego::su2_rep::IrrepLabel;
use gauss_quad::GaussLegendre;
use nalgebra::Vector2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Product rule on S² with `n` Gauss–Legendre nodes in `cos θ`, `2n` in `φ`,
/// scaled to area π; exact for polynomials of degree `< 2n` in the embedding.
fn sphere_rule(n: usize) -> Vec<(Vector2<Complex64>, f64)> {
    let gl = GaussLegendre::new(n).unwrap();
    let mut out = vec![];
    for (u, w) in gl.nodes().zip(gl.weights()) {
        let (c, s) = (((1.0 + u) / 2.0).sqrt(), ((1.0 - u) / 2.0).sqrt());
        for j in 0..2 * n {
            let phi = 2.0 * PI * j as f64 / (2 * n) as f64;
            let z = Vector2::new(Complex64::new(c, 0.0), Complex64::from_polar(s, phi));
            // dA = du dφ on the unit sphere (area 4π), rescaled to π
            out.push((z, w * (2.0 * PI / (2 * n) as f64) / 4.0));
        }
    }
    out
}

fn trace(model: ModelSpace, k: u32, nu: u32, n: usize) -> f64 {
    let engine = KernelEngine::default();
    let nu = IrrepLabel::new(nu).unwrap();
    let rule = sphere_rule(n);
    match model {
        ModelSpace::P1 => rule
            .iter()
            .map(|(z, w)| {
                let x = BundlePoint::new(model, *z, *z);
                w * engine.equivariant_kernel(k, nu, &x, &x).unwrap().value.re
            })
            .sum(),
        ModelSpace::P1xP1 { r } => {
            let mut total = 0.0;
            for (z, wz) in &rule {
                for (w, ww) in &rule {
                    let x = BundlePoint::new(model, *z, *w);
                    total += wz
                        * ww
                        * r as f64
                        * engine.equivariant_kernel(k, nu, &x, &x).unwrap().value.re;
                }
            }
            total
        }
    }
}

#[test]
fn kernel_trace_is_dimension() {
    for (model, k, nu, n) in [
        (ModelSpace::P1, 7, 1, 8),
        (ModelSpace::P1, 2, 5, 12),
        (ModelSpace::P1xP1 { r: 2 }, 3, 1, 12),
        (ModelSpace::P1xP1 { r: 3 }, 3, 1, 16),
        (ModelSpace::P1xP1 { r: 2 }, 1, 4, 16),
    ] {
        let want = dimension(k, IrrepLabel::new(nu).unwrap(), model) as f64;
        let got = trace(model, k, nu, n);
        assert!(want > 0.0);
        assert!(
            (got - want).abs() < 1e-9 * want,
            "{model:?} k={k} nu={nu}: {got} vs {want}"
        );
    }
}

#[test]
fn reproducing_property() {
    // ∫ Π(x, z) Π(z, y) dV(z) = Π(x, y)
    let model = ModelSpace::P1xP1 { r: 2 };
    let nu = IrrepLabel::new(1).unwrap();
    let engine = KernelEngine::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = BundlePoint::random(model, &mut rng);
    let y = BundlePoint::random(model, &mut rng);
    let rule = sphere_rule(12);
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, wa) in &rule {
        for (b, wb) in &rule {
            let z = BundlePoint::new(model, *a, *b);
            let k1 = engine.equivariant_kernel(3, nu, &x, &z).unwrap().value;
            let k2 = engine.equivariant_kernel(3, nu, &z, &y).unwrap().value;
            acc += k1 * k2 * (wa * wb * 2.0);
        }
    }
    let want = engine.equivariant_kernel(3, nu, &x, &y).unwrap().value;
    assert!(
        (acc - want).norm() < 1e-9 * want.norm().max(1.0),
        "{acc} vs {want}"
    );
}

#[test]
fn sweep_matches_pointwise_calls() {
    let model = ModelSpace::P1xP1 { r: 3 };
    let nu = IrrepLabel::new(1).unwrap();
    let engine = KernelEngine::new(8);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = BundlePoint::random(model, &mut rng);
    let y = BundlePoint::random(model, &mut rng);
    let ks: Vec<u32> = (1..=15).collect();
    let swept = engine.sweep(&ks, nu, &x, &y).unwrap();
    let fresh = KernelEngine::new(0);
    for (k, v) in ks.iter().zip(&swept) {
        assert_eq!(v.k, *k);
        let w = fresh.equivariant_kernel(*k, nu, &x, &y).unwrap();
        assert!((v.value - w.value).norm() <= 1e-12 * w.value.norm().max(1e-300));
    }
    assert!(engine.cached() <= 8);
}
