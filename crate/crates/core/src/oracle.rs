//! Reference computations done with explicit 2×2 complex matrices.
//!
//! Nothing here goes through the Bloch-vector formulas used by the library;
//! these routines exist so tests can cross-check one route against the other.

use num_complex::Complex64;

use crate::bloch::BlochVector;

pub type Ket = [Complex64; 2];
pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity() -> Matrix2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn pauli_x() -> Matrix2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn pauli_y() -> Matrix2 {
    [[ZERO, -I], [I, ZERO]]
}

pub fn pauli_z() -> Matrix2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

pub fn matmul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn adjoint(a: &Matrix2) -> Matrix2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn add(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn scale(s: f64, a: &Matrix2) -> Matrix2 {
    let mut out = *a;
    for z in out.iter_mut().flatten() {
        *z *= s;
    }
    out
}

pub fn apply(a: &Matrix2, ket: Ket) -> Ket {
    [a[0][0] * ket[0] + a[0][1] * ket[1], a[1][0] * ket[0] + a[1][1] * ket[1]]
}

/// `exp(iφσz/2)·exp(iθσx/2)`, written out entry by entry.
pub fn rotation(theta: f64, phi: f64) -> Matrix2 {
    let (s, c) = (0.5 * theta).sin_cos();
    let x_rot = [[Complex64::new(c, 0.0), Complex64::new(0.0, s)], [Complex64::new(0.0, s), Complex64::new(c, 0.0)]];
    let z_rot = [[Complex64::from_polar(1.0, 0.5 * phi), ZERO], [ZERO, Complex64::from_polar(1.0, -0.5 * phi)]];
    matmul(&z_rot, &x_rot)
}

/// `U(θ,φ)|g⟩` with `|g⟩ = (1, 0)ᵀ`.
pub fn rotate_ground(theta: f64, phi: f64) -> Ket {
    apply(&rotation(theta, phi), [ONE, ZERO])
}

pub fn bloch_of_ket(ket: Ket) -> BlochVector {
    let [a, b] = ket;
    let overlap = a.conj() * b;
    BlochVector::new(2.0 * overlap.re, 2.0 * overlap.im, a.norm_sqr() - b.norm_sqr())
}

pub fn projector(ket: Ket) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = ket[i] * ket[j].conj();
        }
    }
    out
}

/// Generator ensemble: `U(θ,φ)|g⟩` with weight `r`, `U(π−θ,φ+π)|g⟩` with `1−r`.
pub fn ensemble_density(r: f64, theta: f64, phi: f64) -> Matrix2 {
    let first = projector(rotate_ground(theta, phi));
    let second = projector(rotate_ground(std::f64::consts::PI - theta, phi + std::f64::consts::PI));
    add(&scale(r, &first), &scale(1.0 - r, &second))
}

/// `(I + xσx + yσy + zσz)/2`
pub fn density_from_paulis(v: BlochVector) -> Matrix2 {
    let sum = add(
        &add(&identity(), &scale(v.x, &pauli_x())),
        &add(&scale(v.y, &pauli_y()), &scale(v.z, &pauli_z())),
    );
    scale(0.5, &sum)
}

/// Bloch vector read off as `(tr ρσx, tr ρσy, tr ρσz)`.
pub fn bloch_by_expectation(rho: &Matrix2) -> BlochVector {
    BlochVector::new(
        trace_of_product(rho, &pauli_x()),
        trace_of_product(rho, &pauli_y()),
        trace_of_product(rho, &pauli_z()),
    )
}

/// Real part of `tr(a·b)`.
pub fn trace_of_product(a: &Matrix2, b: &Matrix2) -> f64 {
    let m = matmul(a, b);
    (m[0][0] + m[1][1]).re
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &Matrix2) -> (f64, f64) {
    let mean = 0.5 * (a[0][0].re + a[1][1].re);
    let half_gap = 0.5 * (a[0][0].re - a[1][1].re);
    let radius = (half_gap * half_gap + a[0][1].norm_sqr()).sqrt();
    (mean - radius, mean + radius)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(a: &Matrix2) -> [(f64, Ket); 2] {
    let (lo, hi) = hermitian_eigenvalues(a);
    let b = a[0][1];
    if b.norm() < 1e-300 {
        let e0 = [ONE, ZERO];
        let e1 = [ZERO, ONE];
        return if a[0][0].re <= a[1][1].re { [(lo, e0), (hi, e1)] } else { [(lo, e1), (hi, e0)] };
    }
    let vec_for = |lambda: f64| {
        let v = [b, Complex64::new(lambda, 0.0) - a[0][0]];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    };
    [(lo, vec_for(lo)), (hi, vec_for(hi))]
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(a: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (lambda, ket) in hermitian_eigen(a) {
        out = add(&out, &scale(lambda.max(0.0).sqrt(), &projector(ket)));
    }
    out
}

/// `tr√(√a·b·√a)` by eigendecomposition.
pub fn fidelity_by_sqrt(a: &Matrix2, b: &Matrix2) -> f64 {
    let root = psd_sqrt(a);
    let inner = matmul(&matmul(&root, b), &root);
    let (lo, hi) = hermitian_eigenvalues(&inner);
    lo.max(0.0).sqrt() + hi.max(0.0).sqrt()
}

/// `½ Σ |λ_i(a − b)|`
pub fn trace_distance_by_eigen(a: &Matrix2, b: &Matrix2) -> f64 {
    let diff = add(a, &scale(-1.0, b));
    let (lo, hi) = hermitian_eigenvalues(&diff);
    0.5 * (lo.abs() + hi.abs())
}

pub fn kraus_map(rho: &Matrix2, kraus: &[Matrix2]) -> Matrix2 {
    kraus
        .iter()
        .fold([[ZERO; 2]; 2], |acc, k| add(&acc, &matmul(&matmul(k, rho), &adjoint(k))))
}

/// Depolarizing channel `(1−ε)ρ + ε·I/2` in its four-Pauli Kraus form.
pub fn depolarizing_kraus(eps: f64) -> Vec<Matrix2> {
    vec![
        scale((1.0 - 0.75 * eps).sqrt(), &identity()),
        scale((0.25 * eps).sqrt(), &pauli_x()),
        scale((0.25 * eps).sqrt(), &pauli_y()),
        scale((0.25 * eps).sqrt(), &pauli_z()),
    ]
}

/// Amplitude damping toward `|g⟩` (matrix index 0).
pub fn amplitude_damping_kraus(gamma: f64) -> Vec<Matrix2> {
    let k0 = [[ONE, ZERO], [ZERO, Complex64::new((1.0 - gamma).sqrt(), 0.0)]];
    let k1 = [[ZERO, Complex64::new(gamma.sqrt(), 0.0)], [ZERO, ZERO]];
    vec![k0, k1]
}

/// Symbolic objective `d = ½ m(β,γ)·(v_ρ(r,θ,φ) − v_σ)` and its derivatives.
///
/// Parameters are indexed r, θ, φ, β, γ (0..5).
#[derive(Debug, Clone, Copy)]
pub struct AnalyticObjective {
    pub params: [f64; 5],
    pub sigma: BlochVector,
}

fn direction(polar: f64, azimuth: f64) -> [f64; 3] {
    [polar.sin() * azimuth.sin(), polar.sin() * azimuth.cos(), polar.cos()]
}

fn d_polar(polar: f64, azimuth: f64) -> [f64; 3] {
    [polar.cos() * azimuth.sin(), polar.cos() * azimuth.cos(), -polar.sin()]
}

fn d_azimuth(polar: f64, azimuth: f64) -> [f64; 3] {
    [polar.sin() * azimuth.cos(), -polar.sin() * azimuth.sin(), 0.0]
}

fn d2_azimuth(polar: f64, azimuth: f64) -> [f64; 3] {
    [-polar.sin() * azimuth.sin(), -polar.sin() * azimuth.cos(), 0.0]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn neg(a: [f64; 3]) -> [f64; 3] {
    [-a[0], -a[1], -a[2]]
}

impl AnalyticObjective {
    fn parts(&self) -> (f64, [f64; 3], [f64; 3], [f64; 3]) {
        let [r, theta, phi, beta, gamma] = self.params;
        let n = direction(theta, phi);
        let m = direction(beta, gamma);
        let weight = 2.0 * r - 1.0;
        let diff = [weight * n[0] - self.sigma.x, weight * n[1] - self.sigma.y, weight * n[2] - self.sigma.z];
        (weight, n, m, diff)
    }

    pub fn value(&self) -> f64 {
        let (_, _, m, diff) = self.parts();
        0.5 * dot(m, diff)
    }

    pub fn first(&self, index: usize) -> f64 {
        let [_, theta, phi, beta, gamma] = self.params;
        let (weight, n, m, diff) = self.parts();
        match index {
            0 => dot(m, n),
            1 => 0.5 * weight * dot(m, d_polar(theta, phi)),
            2 => 0.5 * weight * dot(m, d_azimuth(theta, phi)),
            3 => 0.5 * dot(d_polar(beta, gamma), diff),
            4 => 0.5 * dot(d_azimuth(beta, gamma), diff),
            _ => panic!("parameter index {index} out of range"),
        }
    }

    pub fn second(&self, index: usize) -> f64 {
        let [_, theta, phi, beta, gamma] = self.params;
        let (weight, _, m, diff) = self.parts();
        match index {
            0 => 0.0,
            1 => 0.5 * weight * dot(m, neg(direction(theta, phi))),
            2 => 0.5 * weight * dot(m, d2_azimuth(theta, phi)),
            3 => 0.5 * dot(neg(direction(beta, gamma)), diff),
            4 => 0.5 * dot(d2_azimuth(beta, gamma), diff),
            _ => panic!("parameter index {index} out of range"),
        }
    }

    pub fn with(&self, index: usize, value: f64) -> Self {
        let mut next = *self;
        next.params[index] = value;
        next
    }
}
