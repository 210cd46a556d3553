//! Dirac matrices in the standard representation, the four plane-wave spinors
//! of a boosted frame, and the scalar reduction of the Dirac equation.
//!
//! With the spin structure fixed to one of the spinors, the remaining scalar
//! amplitude obeys `i hbar D_tau psi = +/- m c^2 psi`, i.e. the transfer
//! equation for a constant four-velocity with Lagrangian `-/+ m c^2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::PhysicalConstants;

pub type Spinor = [Complex64; 4];
pub type Matrix4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

pub fn identity() -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_add(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn adjoint(a: &Matrix4) -> Matrix4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn mat_vec(a: &Matrix4, v: &Spinor) -> Spinor {
    let mut out = [ZERO; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &Matrix4, b: &Matrix4) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `beta` and `alpha_1..3` in the Dirac representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrices {
    pub beta: Matrix4,
    pub alpha: [Matrix4; 3],
}

impl Default for DiracMatrices {
    fn default() -> Self {
        Self::standard()
    }
}

impl DiracMatrices {
    pub fn standard() -> Self {
        let beta = [
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ONE, ZERO, ZERO],
            [ZERO, ZERO, -ONE, ZERO],
            [ZERO, ZERO, ZERO, -ONE],
        ];
        let alpha1 = [
            [ZERO, ZERO, ZERO, ONE],
            [ZERO, ZERO, ONE, ZERO],
            [ZERO, ONE, ZERO, ZERO],
            [ONE, ZERO, ZERO, ZERO],
        ];
        let alpha2 = [
            [ZERO, ZERO, ZERO, -I],
            [ZERO, ZERO, I, ZERO],
            [ZERO, -I, ZERO, ZERO],
            [I, ZERO, ZERO, ZERO],
        ];
        let alpha3 = [
            [ZERO, ZERO, ONE, ZERO],
            [ZERO, ZERO, ZERO, -ONE],
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, -ONE, ZERO, ZERO],
        ];
        Self { beta, alpha: [alpha1, alpha2, alpha3] }
    }

    /// Largest deviation from the Clifford relations: Hermiticity, unit
    /// squares, and pairwise anticommutation.
    pub fn algebra_residual(&self) -> f64 {
        let id = identity();
        let zero = [[ZERO; 4]; 4];
        let all = [self.beta, self.alpha[0], self.alpha[1], self.alpha[2]];
        let mut worst: f64 = 0.0;
        for (i, a) in all.iter().enumerate() {
            worst = worst.max(max_abs_diff(a, &adjoint(a)));
            worst = worst.max(max_abs_diff(&mat_mul(a, a), &id));
            for b in &all[i + 1..] {
                let anti = mat_add(&mat_mul(a, b), &mat_mul(b, a));
                worst = worst.max(max_abs_diff(&anti, &zero));
            }
        }
        worst
    }

    /// `c alpha . p + beta m c^2`.
    pub fn hamiltonian(&self, momentum: [f64; 3], mass: f64, k: &PhysicalConstants) -> Matrix4 {
        let c = k.c();
        let mut h = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                h[i][j] = self.beta[i][j] * (mass * c * c)
                    + (0..3).map(|a| self.alpha[a][i][j] * (c * momentum[a])).sum::<Complex64>();
            }
        }
        h
    }
}

/// The four spinors of a frame moving with velocity `v`, plus its kinematics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorSet {
    pub u1: Spinor,
    pub u2: Spinor,
    pub v1: Spinor,
    pub v2: Spinor,
    /// `sqrt((E + m c^2) / (2 m c^2))`.
    pub norm: f64,
    pub energy: f64,
    pub momentum: [f64; 3],
    pub gamma: f64,
    pub mass: f64,
    pub velocity: [f64; 3],
}

impl SpinorSet {
    pub fn get(&self, which: SpinorKind) -> &Spinor {
        match which {
            SpinorKind::U1 => &self.u1,
            SpinorKind::U2 => &self.u2,
            SpinorKind::V1 => &self.v1,
            SpinorKind::V2 => &self.v2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpinorKind {
    U1,
    U2,
    V1,
    V2,
}

impl SpinorKind {
    pub const ALL: [SpinorKind; 4] = [SpinorKind::U1, SpinorKind::U2, SpinorKind::V1, SpinorKind::V2];

    pub fn is_positive_energy(self) -> bool {
        matches!(self, SpinorKind::U1 | SpinorKind::U2)
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinorKind::U1 => "u1",
            SpinorKind::U2 => "u2",
            SpinorKind::V1 => "v1",
            SpinorKind::V2 => "v2",
        }
    }
}

pub fn build_spinors(v: [f64; 3], mass: f64, k: &PhysicalConstants) -> Result<SpinorSet> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::validation(format!("mass must be positive, got {mass}")));
    }
    let speed = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let gamma = k.lorentz_factor(speed)?;
    let c = k.c();
    let rest = mass * c * c;
    let energy = rest * gamma;
    let momentum = v.map(|vi| mass * gamma * vi);
    let norm = ((energy + rest) / (2.0 * rest)).sqrt();

    let scale = c / (energy + rest);
    let pz = re(momentum[2] * scale);
    let p_plus = Complex64::new(momentum[0], momentum[1]) * scale;
    let p_minus = Complex64::new(momentum[0], -momentum[1]) * scale;
    let n = re(norm);

    Ok(SpinorSet {
        u1: [n, ZERO, n * pz, n * p_plus],
        u2: [ZERO, n, n * p_minus, -n * pz],
        v1: [n * pz, n * p_plus, n, ZERO],
        v2: [n * p_minus, -n * pz, ZERO, n],
        norm,
        energy,
        momentum,
        gamma,
        mass,
        velocity: v,
    })
}

/// `left^H M right`; `None` stands for the identity.
pub fn bilinear(left: &Spinor, m: Option<&Matrix4>, right: &Spinor) -> Complex64 {
    let mr = match m {
        Some(m) => mat_vec(m, right),
        None => *right,
    };
    left.iter().zip(&mr).map(|(l, r)| l.conj() * r).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResidual {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub relations: Vec<RelationResidual>,
    pub max_residual: f64,
}

/// Evaluates the 24 bilinear relations of a spinor set: 4 norms equal to
/// `gamma`, 4 `beta` bilinears equal to `+/-1`, 12 `alpha_j` bilinears equal to
/// `v_j gamma / c`, and 4 anticommutator checks (`{alpha_j, beta}` for each j
/// and `{alpha_1, alpha_2}`). Residuals are absolute and include any
/// imaginary part of the bilinear.
pub fn verify_relation_table(s: &SpinorSet, k: &PhysicalConstants) -> RelationReport {
    let d = DiracMatrices::standard();
    let mut relations = Vec::with_capacity(24);
    let mut push = |name: String, value: Complex64, expected: f64| {
        let residual = (value - re(expected)).norm();
        relations.push(RelationResidual { name, value: value.re, expected, residual });
    };

    for kind in SpinorKind::ALL {
        let sp = s.get(kind);
        push(format!("{0}^H {0}", kind.name()), bilinear(sp, None, sp), s.gamma);
    }
    for kind in SpinorKind::ALL {
        let sp = s.get(kind);
        let sign = if kind.is_positive_energy() { 1.0 } else { -1.0 };
        push(format!("{0}^H beta {0}", kind.name()), bilinear(sp, Some(&d.beta), sp), sign);
    }
    for (j, alpha) in d.alpha.iter().enumerate() {
        let expected = s.velocity[j] * s.gamma / k.c();
        for kind in SpinorKind::ALL {
            let sp = s.get(kind);
            push(format!("{0}^H alpha{1} {0}", kind.name(), j + 1), bilinear(sp, Some(alpha), sp), expected);
        }
    }
    let zero = [[ZERO; 4]; 4];
    for (j, alpha) in d.alpha.iter().enumerate() {
        let anti = mat_add(&mat_mul(alpha, &d.beta), &mat_mul(&d.beta, alpha));
        push(format!("{{alpha{}, beta}}", j + 1), re(max_abs_diff(&anti, &zero)), 0.0);
    }
    let anti = mat_add(&mat_mul(&d.alpha[0], &d.alpha[1]), &mat_mul(&d.alpha[1], &d.alpha[0]));
    push("{alpha1, alpha2}".into(), re(max_abs_diff(&anti, &zero)), 0.0);

    let max_residual = relations.iter().map(|r| r.residual).fold(0.0, f64::max);
    RelationReport { relations, max_residual }
}

/// Residual of the full Dirac equation `i hbar d_t psi = (-i hbar c alpha . grad + beta m c^2) psi`
/// for the plane wave built from one spinor, evaluated at `(t, x)`.
/// Positive-energy spinors carry `exp(i(p.x - E t)/hbar)`, negative-energy
/// ones `exp(-i(p.x - E t)/hbar)`. Derivatives of the exponential are taken
/// analytically; returns the largest component modulus.
pub fn plane_wave_residual(
    s: &SpinorSet,
    which: SpinorKind,
    t: f64,
    x: [f64; 3],
    k: &PhysicalConstants,
) -> f64 {
    let hbar = k.hbar();
    let sign = if which.is_positive_energy() { 1.0 } else { -1.0 };
    let p = s.momentum;
    let arg = sign * ((0..3).map(|j| p[j] * x[j]).sum::<f64>() - s.energy * t) / hbar;
    let phase = Complex64::from_polar(1.0, arg);
    let spinor = s.get(which);
    let psi = spinor.map(|c| c * phase);

    // d_t psi = -i sign E / hbar psi ; d_j psi = i sign p_j / hbar psi
    let lhs = psi.map(|c| I * hbar * (-I * sign * s.energy / hbar) * c);
    let d = DiracMatrices::standard();
    let mut rhs = mat_vec(&d.beta, &psi).map(|c| c * (s.mass * k.c() * k.c()));
    for j in 0..3 {
        let grad = psi.map(|c| I * sign * p[j] / hbar * c);
        let term = mat_vec(&d.alpha[j], &grad);
        for a in 0..4 {
            rhs[a] += -I * hbar * k.c() * term[a];
        }
    }
    lhs.iter().zip(&rhs).map(|(l, r)| (l - r).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionBranch {
    UPlus,
    UMinus,
    VPlus,
    VMinus,
}

impl ReductionBranch {
    /// Sign of the scalar generator: `i hbar D_tau psi = sign * m c^2 psi`.
    pub fn energy_sign(self) -> f64 {
        match self {
            ReductionBranch::UPlus | ReductionBranch::UMinus => 1.0,
            ReductionBranch::VPlus | ReductionBranch::VMinus => -1.0,
        }
    }

    /// Spinor fixing the spin structure of this branch.
    pub fn spinor(self) -> SpinorKind {
        match self {
            ReductionBranch::UPlus => SpinorKind::U1,
            ReductionBranch::UMinus => SpinorKind::U2,
            ReductionBranch::VPlus => SpinorKind::V1,
            ReductionBranch::VMinus => SpinorKind::V2,
        }
    }
}

/// `psi(tau) / psi(0) = exp(-/+ i m c^2 tau / hbar)`.
pub fn scalar_reduction_factor(
    branch: ReductionBranch,
    mass: f64,
    tau: f64,
    k: &PhysicalConstants,
) -> Result<Complex64> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::validation(format!("mass must be positive, got {mass}")));
    }
    let omega = mass * k.c() * k.c() / k.hbar();
    Ok(Complex64::from_polar(1.0, -branch.energy_sign() * omega * tau))
}
