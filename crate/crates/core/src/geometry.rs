//! Model Kähler geometry on ℙ¹ and ℙ¹×ℙ¹.
//!
//! A point of the circle bundle `X_r` is stored as a pair of unit spinors
//! `(Z, W)` standing for `Z ⊗ W^{⊗r}`; the pairs `(λ₁Z, λ₂W)` with
//! `λ₁λ₂^r = 1` give the same point. For ℙ¹ the bundle is S³ and `W` is unused.
//!
//! Metric conventions: `ω_FS` has total area π, so the induced metric is the
//! Euclidean one at the origin of the affine chart `ζ = z₁/z₀`. The product
//! carries `ω_FS ⊞ r·ω_FS`, and `vol(X_r) = vol(M) = rπ²`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::su2_rep::{
    adjoint, GroupElement, HaarQuadrature, LieAlgebraElement, MomentValue, Spinor,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest admissible `‖v‖/√k` for [`hlc_chart`].
pub const CHART_RADIUS: f64 = 0.5;

/// Scale of the adapted chart; the Euclidean metric at the chart origin is
/// the Fubini–Study metric of area π.
pub const CHART_SCALE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelSpace {
    P1,
    P1xP1 { r: u32 },
}

impl ModelSpace {
    pub fn product(r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidTwist(r));
        }
        Ok(ModelSpace::P1xP1 { r })
    }

    /// Complex dimension of the base.
    pub fn dim(&self) -> usize {
        match self {
            ModelSpace::P1 => 1,
            ModelSpace::P1xP1 { .. } => 2,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            ModelSpace::P1 => PI,
            ModelSpace::P1xP1 { r } => *r as f64 * PI * PI,
        }
    }

    /// Degree in `W` of a level-one section (0 on ℙ¹).
    pub fn twist(&self) -> u32 {
        match self {
            ModelSpace::P1 => 0,
            ModelSpace::P1xP1 { r } => *r,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ModelSpace::P1 => "p1".to_string(),
            ModelSpace::P1xP1 { r } => format!("p1xp1(r={r})"),
        }
    }
}

fn normalize(v: Spinor) -> Spinor {
    let n = v.norm();
    assert!(n > 0.0, "spinor must be nonzero");
    v / Complex64::new(n, 0.0)
}

/// Hermitian product `Σ uᵢ·conj(vᵢ)`, linear in the first slot.
pub fn herm(u: &Spinor, v: &Spinor) -> Complex64 {
    u[0] * v[0].conj() + u[1] * v[1].conj()
}

/// The unit spinor `(−z̄₁, z̄₀)` orthogonal to `z`.
pub fn perp(z: &Spinor) -> Spinor {
    Spinor::new(-z[1].conj(), z[0].conj())
}

fn random_spinor<R: Rng + ?Sized>(rng: &mut R) -> Spinor {
    let mut g = || rng.sample::<f64, _>(StandardNormal);
    normalize(Spinor::new(
        Complex64::new(g(), g()),
        Complex64::new(g(), g()),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundlePoint {
    model: ModelSpace,
    z: Spinor,
    w: Spinor,
}

impl BundlePoint {
    pub fn p1(z: Spinor) -> Self {
        Self {
            model: ModelSpace::P1,
            z: normalize(z),
            w: Spinor::new(ONE, ZERO),
        }
    }

    pub fn product(r: u32, z: Spinor, w: Spinor) -> Result<Self> {
        Ok(Self {
            model: ModelSpace::product(r)?,
            z: normalize(z),
            w: normalize(w),
        })
    }

    pub fn new(model: ModelSpace, z: Spinor, w: Spinor) -> Self {
        match model {
            ModelSpace::P1 => Self::p1(z),
            ModelSpace::P1xP1 { .. } => Self {
                model,
                z: normalize(z),
                w: normalize(w),
            },
        }
    }

    pub fn random<R: Rng + ?Sized>(model: ModelSpace, rng: &mut R) -> Self {
        let z = random_spinor(rng);
        let w = random_spinor(rng);
        Self::new(model, z, w)
    }

    pub fn model(&self) -> ModelSpace {
        self.model
    }

    pub fn z(&self) -> &Spinor {
        &self.z
    }

    pub fn w(&self) -> &Spinor {
        &self.w
    }

    /// Coordinates of `Z ⊗ W^{⊗r}` in an orthonormal basis of `ℂ² ⊗ Sym^r ℂ²`.
    pub fn tensor(&self) -> Vec<Complex64> {
        let r = self.model.twist() as usize;
        let mut wpow = Vec::with_capacity(r + 1);
        for b in 0..=r {
            let c = binomial(r, b).sqrt();
            wpow.push(self.w[0].powu(b as u32) * self.w[1].powu((r - b) as u32) * c);
        }
        let mut out = Vec::with_capacity(2 * (r + 1));
        for zi in self.z.iter() {
            out.extend(wpow.iter().map(|q| zi * q));
        }
        out
    }

    /// Chordal distance between tensor representatives.
    pub fn chordal_distance(&self, other: &BundlePoint) -> f64 {
        self.tensor()
            .iter()
            .zip(other.tensor())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn same_point(&self, other: &BundlePoint, tol: f64) -> bool {
        self.model == other.model && self.chordal_distance(other) <= tol
    }

    /// Structure circle action `e^{iφ}·x` (degree-one sections pick up `e^{iφ}`).
    pub fn rotate_fiber(&self, phi: f64) -> BundlePoint {
        let mut out = *self;
        out.z *= Complex64::from_polar(1.0, phi);
        out
    }

    fn require_product(&self) -> Result<u32> {
        match self.model {
            ModelSpace::P1xP1 { r } => Ok(r),
            ModelSpace::P1 => Err(Error::ModelMismatch { expected: "P1xP1" }),
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    crate::sections::ln_binomial(n, k).exp()
}

/// `Ψ(Z) = i(ZZ^† − ½|Z|²)/|Z|²`.
pub fn moment_p1(z: &Spinor) -> MomentValue {
    let n2 = z.norm_squared();
    let a = 0.5 * (z[0].norm_sqr() - z[1].norm_sqr()) / n2;
    let b = z[0] * z[1].conj() / n2;
    // i·[[a, b], [b̄, −a]]
    LieAlgebraElement::from_parts(a, I * b)
}

/// `Φ_r = Ψ(Z) + r·Ψ(W)`.
pub fn moment_product(x: &BundlePoint) -> Result<MomentValue> {
    let r = x.require_product()?;
    Ok(moment_p1(&x.z).add(&moment_p1(&x.w).scale(r as f64)))
}

/// Moment map of either model.
pub fn moment(x: &BundlePoint) -> MomentValue {
    match x.model {
        ModelSpace::P1 => moment_p1(&x.z),
        ModelSpace::P1xP1 { r } => moment_p1(&x.z).add(&moment_p1(&x.w).scale(r as f64)),
    }
}

/// `(a, b)` with `−iφ = [[a, b], [b̄, −a]]`.
fn hermitian_parts(phi: &MomentValue) -> (f64, Complex64) {
    let m = phi.matrix();
    (m[(0, 0)].im, -I * m[(0, 1)])
}

/// Positive eigenvalue of `−iΦ`.
pub fn lambda_of(phi: &MomentValue) -> Result<f64> {
    let (a, b) = hermitian_parts(phi);
    let lambda = (a * a + b.norm_sqr()).sqrt();
    if lambda < 1e-14 {
        return Err(Error::ZeroMoment);
    }
    Ok(lambda)
}

/// Representative `h` of the coset with `Φ = i·h·diag(λ, −λ)·h⁻¹`, normalized
/// so that `α ≥ 0` (and `β > 0` when `α = 0`).
pub fn h_coset(phi: &MomentValue) -> Result<GroupElement> {
    let lambda = lambda_of(phi)?;
    let (a, b) = hermitian_parts(phi);
    // first column of h is the λ-eigenvector of [[a, b], [b̄, −a]]
    let (alpha, beta) = if a >= 0.0 {
        (Complex64::new(lambda + a, 0.0), b.conj())
    } else {
        let nb = b.norm();
        if nb == 0.0 {
            (ZERO, ONE)
        } else {
            (Complex64::new(nb, 0.0), (lambda - a) * b.conj() / nb)
        }
    };
    Ok(GroupElement::new(alpha, beta))
}

pub fn u0(nu: u32, phi: &MomentValue) -> Result<f64> {
    Ok(nu as f64 / (2.0 * lambda_of(phi)?))
}

/// Tangent vector of the base in the unitary frame of the adapted chart.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector(pub Vec<Complex64>);

impl TangentVector {
    pub fn zero(d: usize) -> Self {
        Self(vec![ZERO; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    /// `⟨u, v⟩ = Σ conj(uᵢ)·vᵢ`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `ψ₂(v₁, v₂) = −i·ω(v₁, v₂) − ½‖v₁ − v₂‖²` with `ω(u, v) = Im⟨u, v⟩`.
pub fn psi2(v1: &TangentVector, v2: &TangentVector) -> Complex64 {
    let omega = v1.inner(v2).im;
    let diff: f64 =
        v1.0.iter()
            .zip(&v2.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
    Complex64::new(-0.5 * diff, -omega)
}

pub fn act(g: &GroupElement, x: &BundlePoint) -> BundlePoint {
    let mut out = *x;
    out.z = g.apply(&x.z);
    if let ModelSpace::P1xP1 { .. } = x.model {
        out.w = g.apply(&x.w);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilizerKind {
    /// `{I}`.
    Trivial,
    /// `{±I}`.
    CenterOnly,
    /// Cyclic of the given order, with non-central elements.
    Cyclic(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerInfo {
    pub kind: StabilizerKind,
    /// `ϑ_j ∈ (−π, π]` with `g_j = h_m·t_{ϑ_j}·h_m⁻¹`; the identity is angle 0.
    pub angles: Vec<f64>,
    pub central_part: Vec<GroupElement>,
    pub h: GroupElement,
}

impl StabilizerInfo {
    pub fn elements(&self) -> Vec<GroupElement> {
        let hinv = self.h.inverse();
        self.angles
            .iter()
            .map(|&t| self.h.mul(&GroupElement::torus(t)).mul(&hinv))
            .collect()
    }

    pub fn is_central(angle: f64) -> bool {
        angle.sin().abs() < 1e-9
    }

    /// One representative `ϑ_j > 0` per pair `{g_j, g_j⁻¹}` of non-central elements.
    pub fn noncentral_representatives(&self) -> Vec<usize> {
        (0..self.angles.len())
            .filter(|&i| !Self::is_central(self.angles[i]) && self.angles[i] > 0.0)
            .collect()
    }

    pub fn central_angles(&self) -> Vec<f64> {
        self.angles
            .iter()
            .copied()
            .filter(|&t| Self::is_central(t))
            .collect()
    }

    pub fn order(&self) -> usize {
        self.angles.len()
    }
}

fn cyclic_angles(n: u32) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            if t > PI + 1e-12 {
                t - 2.0 * PI
            } else {
                t
            }
        })
        .collect()
}

/// Tolerance for classifying `|⟨Z, W⟩| ∈ {0, 1}`.
const STAB_TOL: f64 = 1e-9;

pub fn stabilizer(x: &BundlePoint) -> StabilizerInfo {
    let phi = moment(x);
    let h = h_coset(&phi).expect("moment map is nowhere vanishing on the model spaces");
    let angles = match x.model {
        ModelSpace::P1 => vec![0.0],
        ModelSpace::P1xP1 { r } => {
            let c = herm(&x.z, &x.w).norm();
            if c > 1.0 - STAB_TOL {
                cyclic_angles(r + 1)
            } else if c < STAB_TOL {
                cyclic_angles(r - 1)
            } else if r % 2 == 1 {
                vec![0.0, PI]
            } else {
                vec![0.0]
            }
        }
    };
    let central_part: Vec<GroupElement> = angles
        .iter()
        .filter(|&&t| StabilizerInfo::is_central(t))
        .map(|&t| {
            if t.cos() > 0.0 {
                GroupElement::identity()
            } else {
                GroupElement::minus_identity()
            }
        })
        .collect();
    let kind = if angles.len() == central_part.len() {
        if central_part.len() == 2 {
            StabilizerKind::CenterOnly
        } else {
            StabilizerKind::Trivial
        }
    } else {
        StabilizerKind::Cyclic(angles.len())
    };
    StabilizerInfo {
        kind,
        angles,
        central_part,
        h,
    }
}

/// The point `x + v/√k` in the adapted chart at `x`:
/// `Z' ∝ Z + (v₀/√k)·Z^⊥`, `W' ∝ W + (v₁/√(rk))·W^⊥`.
pub fn hlc_chart(x: &BundlePoint, v: &TangentVector, k: u32) -> Result<BundlePoint> {
    let d = x.model.dim();
    if v.dim() != d {
        return Err(Error::TangentDimension {
            got: v.dim(),
            want: d,
        });
    }
    let sk = (k as f64).sqrt();
    let rad = v.norm() / sk;
    if rad > CHART_RADIUS {
        return Err(Error::ChartRadius(rad));
    }
    let mut out = *x;
    out.z = normalize(x.z + perp(&x.z) * (v.0[0] * CHART_SCALE / sk));
    if let ModelSpace::P1xP1 { r } = x.model {
        let s = CHART_SCALE / (sk * (r as f64).sqrt());
        out.w = normalize(x.w + perp(&x.w) * (v.0[1] * s));
    }
    Ok(out)
}

/// Fundamental vector field `ξ_M(m_x)` in the chart frame at `x`.
pub fn orbit_tangent(x: &BundlePoint, xi: &LieAlgebraElement) -> TangentVector {
    let m = xi.matrix();
    let dz = m * x.z;
    let mut out = vec![herm(&dz, &perp(&x.z))];
    if let ModelSpace::P1xP1 { r } = x.model {
        let dw = m * x.w;
        out.push(herm(&dw, &perp(&x.w)) * (r as f64).sqrt());
    }
    TangentVector(out)
}

/// Length of the structure-circle generator `∂_θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FiberNorm {
    /// `‖∂_θ‖ = 1`.
    #[default]
    Unit,
    /// `‖∂_θ‖ = 1/(2π)`.
    InvTwoPi,
}

impl FiberNorm {
    /// `‖∂_θ‖²`.
    pub fn c_theta(self) -> f64 {
        match self {
            FiberNorm::Unit => 1.0,
            FiberNorm::InvTwoPi => 1.0 / (4.0 * PI * PI),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FiberNorm::Unit => "1",
            FiberNorm::InvTwoPi => "inv2pi",
        }
    }
}

/// `‖ξ_X(x)‖² = ‖ξ_M(m_x)‖² + c_θ·⟨Φ(m_x), ξ⟩²`.
pub fn xi_norm2(x: &BundlePoint, xi: &LieAlgebraElement, fiber: FiberNorm) -> f64 {
    let tangent = orbit_tangent(x, xi).norm().powi(2);
    let vertical = moment(x).pairing(xi);
    tangent + fiber.c_theta() * vertical * vertical
}

/// `η_j(z) = (Ad_{t_j⁻¹} − id)(A(z))`.
pub fn eta(theta: f64, z: Complex64) -> LieAlgebraElement {
    let a = LieAlgebraElement::a_of(z);
    adjoint(&GroupElement::torus(-theta), &a).sub(&a)
}

/// `C(x; j)` (with `‖Ad_{h}(η_j(z))_X(x)‖² = ½·ZᵗCZ`) and
/// `B(x; j) = C + 4i·sin(2ϑ_j)·λ·I₂`, for the stabilizer element with index `j`.
pub fn c_and_b_matrices(
    x: &BundlePoint,
    j: usize,
    fiber: FiberNorm,
) -> Result<(Matrix2<f64>, Matrix2<Complex64>)> {
    let stab = stabilizer(x);
    if j >= stab.angles.len() {
        return Err(Error::StabilizerIndex {
            index: j,
            len: stab.angles.len(),
        });
    }
    let theta = stab.angles[j];
    if StabilizerInfo::is_central(theta) {
        return Err(Error::CentralElement(j));
    }
    let q = |z: Complex64| xi_norm2(x, &adjoint(&stab.h, &eta(theta, z)), fiber);
    let q1 = q(ONE);
    let qi = q(I);
    let q1i = q(ONE + I);
    let c11 = 2.0 * q1;
    let c22 = 2.0 * qi;
    let c12 = q1i - q1 - qi;
    let c = Matrix2::new(c11, c12, c12, c22);
    let lambda = lambda_of(&moment(x))?;
    let shift = Complex64::new(0.0, 4.0 * (2.0 * theta).sin() * lambda);
    let b = c.map(|v| Complex64::new(v, 0.0)) + Matrix2::identity() * shift;
    Ok((c, b))
}

/// Real orthonormal basis (as tangent vectors) of the complement of the
/// orbit directions `span{ξ_M(m_x)}` in `T_{m_x}M ≅ ℝ^{2d}`.
pub fn transverse_directions(x: &BundlePoint) -> Vec<TangentVector> {
    let d = x.model.dim();
    let n = 2 * d;
    let mut span = DMatrix::<f64>::zeros(n, 3);
    for (col, xi) in LieAlgebraElement::basis().iter().enumerate() {
        let t = orbit_tangent(x, xi);
        for (i, c) in t.0.iter().enumerate() {
            span[(2 * i, col)] = c.re;
            span[(2 * i + 1, col)] = c.im;
        }
    }
    // left singular vectors with vanishing singular value span the complement
    let mut padded = DMatrix::<f64>::zeros(n, n.max(3));
    padded.view_mut((0, 0), (n, 3)).copy_from(&span);
    let svd = padded.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    (0..n)
        .filter(|&i| svd.singular_values[i] <= 1e-8 * smax.max(1.0))
        .map(|i| {
            TangentVector(
                (0..d)
                    .map(|c| Complex64::new(u[(2 * c, i)], u[(2 * c + 1, i)]))
                    .collect(),
            )
        })
        .collect()
}

/// Upper bound for `dist(x, G·y)` in the chordal metric on tensor
/// representatives: best grid node, then pattern-search refinement.
pub fn dist_to_orbit(x: &BundlePoint, y: &BundlePoint, grid: &HaarQuadrature) -> f64 {
    let tx = x.tensor();
    let dist = |g: &GroupElement| -> f64 {
        tx.iter()
            .zip(act(g, y).tensor())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let mut best = GroupElement::identity();
    let mut best_d = dist(&best);
    for g in grid.nodes() {
        let dg = dist(g);
        if dg < best_d {
            best_d = dg;
            best = *g;
        }
    }
    let basis = LieAlgebraElement::basis();
    let mut step = PI / grid.degree() as f64;
    while step > 1e-10 {
        let mut improved = false;
        for xi in &basis {
            for s in [step, -step] {
                let cand = GroupElement::exp(&xi.scale(s)).mul(&best);
                let dc = dist(&cand);
                if dc < best_d {
                    best_d = dc;
                    best = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best_d
}
