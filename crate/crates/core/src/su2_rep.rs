//! SU(2) representation theory: group elements, characters, Clebsch–Gordan
//! multiplicities and a product quadrature for the Haar measure.
//!
//! Group elements are unit pairs `(α, β)` standing for the matrix
//!
//! ```text
//! ⎡α  −β̄⎤
//! ⎣β   ᾱ⎦
//! ```
//!
//! so that the first column identifies SU(2) with S³ ⊂ ℂ². The standard torus
//! is `t_θ = diag(e^{iθ}, e^{−iθ}) = exp(θβ)` with `β = diag(i, −i)`.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type Spinor = Vector2<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Element of SU(2) as a unit pair `(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    alpha: Complex64,
    beta: Complex64,
}

impl GroupElement {
    /// Builds an element from `(α, β)`, renormalizing onto S³.
    ///
    /// Panics if both entries vanish.
    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        assert!(n > 0.0, "group element needs a nonzero (alpha, beta)");
        Self {
            alpha: alpha / n,
            beta: beta / n,
        }
    }

    pub fn identity() -> Self {
        Self {
            alpha: ONE,
            beta: ZERO,
        }
    }

    pub fn minus_identity() -> Self {
        Self {
            alpha: -ONE,
            beta: ZERO,
        }
    }

    /// `diag(e^{iθ}, e^{−iθ})`.
    pub fn torus(theta: f64) -> Self {
        Self {
            alpha: Complex64::from_polar(1.0, theta),
            beta: ZERO,
        }
    }

    /// The Weyl representative `[[0, −1], [1, 0]]`.
    pub fn weyl_flip() -> Self {
        Self {
            alpha: ZERO,
            beta: ONE,
        }
    }

    /// Haar-random element (uniform point of S³).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut g = || rng.sample::<f64, _>(StandardNormal);
        Self::new(Complex64::new(g(), g()), Complex64::new(g(), g()))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.alpha, -self.beta.conj(), self.beta, self.alpha.conj())
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        // first column of g·h
        let a = self.alpha * other.alpha - self.beta.conj() * other.beta;
        let b = self.beta * other.alpha + self.alpha.conj() * other.beta;
        GroupElement::new(a, b)
    }

    pub fn inverse(&self) -> GroupElement {
        Self {
            alpha: self.alpha.conj(),
            beta: -self.beta,
        }
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        Spinor::new(
            self.alpha * v[0] - self.beta.conj() * v[1],
            self.beta * v[0] + self.alpha.conj() * v[1],
        )
    }

    /// Exponential of a Lie algebra element.
    pub fn exp(xi: &LieAlgebraElement) -> GroupElement {
        // ξ = [[ic, b], [−b̄, −ic]] squares to −ρ²·I
        let m = xi.matrix();
        let c = m[(0, 0)].im;
        let b = m[(0, 1)];
        let rho = (c * c + b.norm_sqr()).sqrt();
        let sinc = if rho < 1e-8 {
            1.0 - rho * rho / 6.0
        } else {
            rho.sin() / rho
        };
        GroupElement::new(Complex64::new(rho.cos(), c * sinc), m[(1, 0)] * sinc)
    }

    /// Rotation angle `ϑ ∈ [0, π]` of the conjugacy class, `cos ϑ = tr(g)/2`.
    pub fn class_angle(&self) -> f64 {
        self.alpha.re.clamp(-1.0, 1.0).acos()
    }

    pub fn distance(&self, other: &GroupElement) -> f64 {
        ((self.alpha - other.alpha).norm_sqr() + (self.beta - other.beta).norm_sqr()).sqrt()
    }
}

/// Irreducible representation `V_ν = Sym^{ν−1}(ℂ²)`, `dim V_ν = ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrrepLabel(u32);

impl IrrepLabel {
    pub fn new(nu: u32) -> Result<Self> {
        if nu == 0 {
            return Err(Error::InvalidIrrep(nu));
        }
        Ok(Self(nu))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn dim(self) -> usize {
        self.0 as usize
    }
}

/// Traceless skew-Hermitian 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieAlgebraElement(Matrix2<Complex64>);

/// Values of the moment map live in 𝔤 (identified with its dual by the pairing).
pub type MomentValue = LieAlgebraElement;

impl LieAlgebraElement {
    /// Wraps a matrix, checking it lies in 𝔰𝔲(2) to 1e-12.
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let herm = m + m.adjoint();
        let scale = m.norm().max(1.0);
        if herm.norm() > 1e-12 * scale || (m[(0, 0)] + m[(1, 1)]).norm() > 1e-12 * scale {
            return Err(Error::Degenerate("matrix is not traceless skew-Hermitian"));
        }
        Ok(Self(m))
    }

    /// Coordinates `ξ = [[ic, b], [−b̄, −ic]]`.
    pub fn from_parts(c: f64, b: Complex64) -> Self {
        Self(Matrix2::new(
            Complex64::new(0.0, c),
            b,
            -b.conj(),
            Complex64::new(0.0, -c),
        ))
    }

    pub fn zero() -> Self {
        Self(Matrix2::zeros())
    }

    /// Generator of the standard torus, `diag(i, −i)`.
    pub fn beta() -> Self {
        Self::from_parts(1.0, ZERO)
    }

    /// `A(z) = i·[[0, z], [z̄, 0]]`.
    pub fn a_of(z: Complex64) -> Self {
        Self(Matrix2::new(ZERO, I * z, I * z.conj(), ZERO))
    }

    /// Real basis `{iσ₃, iσ₁, iσ₂}`-type: `β`, `A(1)`, `A(i)`.
    pub fn basis() -> [Self; 3] {
        [Self::beta(), Self::a_of(ONE), Self::a_of(I)]
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        self.0
    }

    /// `⟨ξ, η⟩ = −tr(ξη)`; with this normalization `⟨i·diag(λ, −λ), β⟩ = 2λ`.
    pub fn pairing(&self, other: &Self) -> f64 {
        -(self.0 * other.0).trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0 + other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0 - other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// `χ_ν(t_θ) = sin(νθ)/sin(θ)`, with the finite cosine sum near `sin θ = 0`.
pub fn character_torus(nu: IrrepLabel, theta: f64) -> f64 {
    let n = nu.get() as f64;
    let s = theta.sin();
    if s.abs() < 1e-6 {
        (0..nu.get())
            .map(|j| ((n - 1.0 - 2.0 * j as f64) * theta).cos())
            .sum()
    } else {
        (n * theta).sin() / s
    }
}

pub fn character_group(nu: IrrepLabel, g: &GroupElement) -> f64 {
    character_torus(nu, g.class_angle())
}

/// `f_ℓ(exp(θβ)) = e^{iℓθ}`.
pub fn f_ell(ell: i64, theta: f64) -> Complex64 {
    if theta == PI {
        // exact on the center
        return if ell.rem_euclid(2) == 0 { ONE } else { -ONE };
    }
    Complex64::from_polar(1.0, ell as f64 * theta)
}

/// Multiplicity of `V_ν` in `V_a ⊗ V_b` (0 or 1).
pub fn clebsch_multiplicity(a: IrrepLabel, b: IrrepLabel, nu: IrrepLabel) -> u32 {
    let (a, b) = if a.get() <= b.get() {
        (a.get(), b.get())
    } else {
        (b.get(), a.get())
    };
    let (a, b, nu) = (i64::from(a), i64::from(b), i64::from(nu.get()));
    let in_range = b - a < nu && nu < a + b;
    u32::from(in_range && (a + b - 1 - nu) % 2 == 0)
}

/// Default node budget for [`haar_quadrature`].
pub const DEFAULT_NODE_BUDGET: usize = 4_000_000;

/// Product quadrature on SU(2) with Haar measure of total mass 1.
///
/// Nodes are `α = √u·e^{iφ₁}, β = √(1−u)·e^{iφ₂}` with Gauss–Legendre nodes in
/// `u = cos²θ` (the Haar density `sin 2θ dθ` becomes `du`) and uniform grids of
/// `2·degree` points in each angle. Exact for products of matrix coefficients
/// of total polynomial degree `≤ 2·(degree − 1)`.
#[derive(Debug, Clone)]
pub struct HaarQuadrature {
    nodes: Vec<GroupElement>,
    weights: Vec<f64>,
    degree: usize,
}

impl HaarQuadrature {
    pub fn nodes(&self) -> &[GroupElement] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest label `a` for which matrix coefficients of `V_a` and products
    /// of two characters `χ_a χ_b` are integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F>(&self, mut f: F) -> f64
    where
        F: FnMut(&GroupElement) -> f64,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(g, w)| w * f(g))
            .sum()
    }

    pub fn integrate_complex<F>(&self, mut f: F) -> Complex64
    where
        F: FnMut(&GroupElement) -> Complex64,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(g, w)| f(g) * *w)
            .sum()
    }

    /// Largest deviation of `∫χ_aχ_b` from `δ_ab` over `a, b ≤ degree`.
    pub fn orthogonality_error(&self) -> f64 {
        let d = self.degree;
        let mut gram = vec![0.0; d * d];
        let mut chars = vec![0.0; d];
        for (g, w) in self.nodes.iter().zip(&self.weights) {
            let theta = g.class_angle();
            for (a, c) in chars.iter_mut().enumerate() {
                *c = character_torus(IrrepLabel(a as u32 + 1), theta);
            }
            for a in 0..d {
                for b in a..d {
                    gram[a * d + b] += w * chars[a] * chars[b];
                }
            }
        }
        let mut err: f64 = 0.0;
        for a in 0..d {
            for b in a..d {
                let want = if a == b { 1.0 } else { 0.0 };
                err = err.max((gram[a * d + b] - want).abs());
            }
        }
        err
    }
}

pub fn haar_quadrature(max_degree: usize) -> Result<HaarQuadrature> {
    haar_quadrature_with_budget(max_degree, DEFAULT_NODE_BUDGET)
}

pub fn haar_quadrature_with_budget(max_degree: usize, budget: usize) -> Result<HaarQuadrature> {
    if max_degree == 0 {
        return Err(Error::InvalidDegree);
    }
    let n_u = max_degree.max(2);
    let n_phi = 2 * max_degree;
    let count = n_u * n_phi * n_phi;
    if count > budget {
        return Err(Error::NodeBudgetExceeded {
            degree: max_degree,
            nodes: count,
            budget,
        });
    }
    let rule = GaussLegendre::new(n_u).map_err(|_| Error::InvalidDegree)?;
    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    let dphi = 2.0 * PI / n_phi as f64;
    let circle = 1.0 / (n_phi * n_phi) as f64;
    for (x, w) in rule.nodes().zip(rule.weights()) {
        // map [-1, 1] to [0, 1]
        let u = 0.5 * (x + 1.0);
        let wu = 0.5 * w;
        let (ca, cb) = (u.sqrt(), (1.0 - u).max(0.0).sqrt());
        for i in 0..n_phi {
            let a = Complex64::from_polar(ca, i as f64 * dphi);
            for j in 0..n_phi {
                let b = Complex64::from_polar(cb, (j as f64 + 0.5) * dphi);
                nodes.push(GroupElement::new(a, b));
                weights.push(wu * circle);
            }
        }
    }
    let q = HaarQuadrature {
        nodes,
        weights,
        degree: max_degree,
    };
    let err = q.orthogonality_error();
    if err > 1e-10 {
        return Err(Error::QuadratureSelfTest(err));
    }
    Ok(q)
}

/// `Ad_g ξ = g ξ g⁻¹`.
pub fn adjoint(g: &GroupElement, xi: &LieAlgebraElement) -> LieAlgebraElement {
    let m = g.matrix();
    LieAlgebraElement(m * xi.matrix() * m.adjoint())
}
