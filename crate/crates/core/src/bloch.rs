//! Qubit state and measurement algebra.
//!
//! A qubit state is carried in two equivalent forms: its Bloch vector `v`
//! and its density matrix `(I + v·σ)/2`. The ground state `|g⟩` is the
//! `+z` pole. Both players' strategies map onto Bloch vectors:
//!
//! * the generator prepares `U(θ,φ)|g⟩` with probability `r` and the
//!   antipodal `U(π−θ,φ+π)|g⟩` otherwise, giving `v = (2r−1)·n(θ,φ)`;
//! * the discriminator projects onto `U(β,γ)|g⟩`, whose axis is `n(β,γ)`;
//!
//! where `U(θ,φ) = exp(iφσz/2)·exp(iθσx/2)` and
//! `n(θ,φ) = (sinθ·sinφ, sinθ·cosφ, cosθ)`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_unit_interval, Error, Result};

/// Slack allowed on the Bloch ball radius and on density matrix invariants.
pub const STATE_TOL: f64 = 1e-12;

/// Slack allowed on the norm of a measurement axis.
pub const AXIS_TOL: f64 = 1e-9;

/// Bloch vector of a qubit state. Physical states satisfy `|v| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };
    /// `|g⟩`
    pub const GROUND: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };
    /// `|e⟩`
    pub const EXCITED: BlochVector = BlochVector { x: 0.0, y: 0.0, z: -1.0 };

    /// Builds a vector without checking that it lies in the Bloch ball.
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    /// Builds a vector that must describe a physical state.
    pub fn physical(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = BlochVector { x, y, z };
        v.check_physical()?;
        Ok(v)
    }

    pub fn check_physical(&self) -> Result<()> {
        check_finite("x", self.x)?;
        check_finite("y", self.y)?;
        check_finite("z", self.z)?;
        let norm = self.norm();
        if norm > 1.0 + STATE_TOL {
            return Err(Error::OutsideBlochBall(norm));
        }
        Ok(())
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_pure(&self) -> bool {
        (self.norm() - 1.0).abs() <= STATE_TOL
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<BlochVector> for f64 {
    type Output = BlochVector;
    fn mul(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self * rhs.x, self * rhs.y, self * rhs.z)
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector::new(-self.x, -self.y, -self.z)
    }
}

/// A 2×2 density matrix, stored row-major.
///
/// Always Hermitian with unit trace: the off-diagonal pair is derived from
/// one another on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensityMatrix", into = "RawDensityMatrix")]
pub struct DensityMatrix {
    entries: [[Complex64; 2]; 2],
}

#[derive(Serialize, Deserialize)]
struct RawDensityMatrix {
    entries: [[Complex64; 2]; 2],
}

impl TryFrom<RawDensityMatrix> for DensityMatrix {
    type Error = Error;
    fn try_from(raw: RawDensityMatrix) -> Result<Self> {
        DensityMatrix::from_entries(raw.entries)
    }
}

impl From<DensityMatrix> for RawDensityMatrix {
    fn from(rho: DensityMatrix) -> Self {
        RawDensityMatrix { entries: rho.entries }
    }
}

impl DensityMatrix {
    pub fn from_bloch(v: BlochVector) -> Result<Self> {
        v.check_physical()?;
        let lower = Complex64::new(0.5 * v.x, 0.5 * v.y);
        Ok(DensityMatrix {
            entries: [
                [Complex64::new(0.5 * (1.0 + v.z), 0.0), lower.conj()],
                [lower, Complex64::new(0.5 * (1.0 - v.z), 0.0)],
            ],
        })
    }

    /// Validates an arbitrary 2×2 matrix as a density matrix.
    pub fn from_entries(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = entries;
        if entries.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        if (b - c.conj()).norm() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        if a.im.abs() > STATE_TOL || d.im.abs() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix("complex diagonal".into()));
        }
        let trace = a.re + d.re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
        }
        let v = BlochVector::new(2.0 * c.re, 2.0 * c.im, a.re - d.re);
        // Eigenvalues are (1 ± |v|)/2.
        let min_eig = 0.5 * (1.0 - v.norm());
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_eig}")));
        }
        Self::from_bloch(v)
    }

    pub fn ground() -> Self {
        Self::from_bloch(BlochVector::GROUND).expect("pole is physical")
    }

    pub fn excited() -> Self {
        Self::from_bloch(BlochVector::EXCITED).expect("pole is physical")
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch(BlochVector::ORIGIN).expect("origin is physical")
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn to_bloch(&self) -> BlochVector {
        let lower = self.entries[1][0];
        BlochVector::new(
            2.0 * lower.re,
            2.0 * lower.im,
            self.entries[0][0].re - self.entries[1][1].re,
        )
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    pub fn determinant(&self) -> f64 {
        let [[a, b], [c, d]] = self.entries;
        (a * d - b * c).re
    }

    /// `tr(self · other)`
    pub fn trace_product(&self, other: &DensityMatrix) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += self.entries[i][j] * other.entries[j][i];
            }
        }
        acc.re
    }
}

/// Generator strategy: branch probability `r` and the angles of the first branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl GeneratorParams {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        let params = GeneratorParams { r, theta, phi };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("r", self.r)?;
        check_unit_interval("r", self.r)?;
        check_finite("theta", self.theta)?;
        check_finite("phi", self.phi)
    }
}

/// Discriminator strategy: pre-rotation angles of the projective measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementParams {
    pub beta: f64,
    pub gamma: f64,
}

impl MeasurementParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        let params = MeasurementParams { beta, gamma };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("beta", self.beta)?;
        check_finite("gamma", self.gamma)
    }
}

/// Bloch direction of `U(θ,φ)|g⟩`.
pub fn rotated_ground(theta: f64, phi: f64) -> BlochVector {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    BlochVector::new(st * sp, st * cp, ct)
}

/// Bloch vector of the generator's ensemble state.
pub fn state_bloch(params: &GeneratorParams) -> Result<BlochVector> {
    params.validate()?;
    Ok((2.0 * params.r - 1.0) * rotated_ground(params.theta, params.phi))
}

/// Density matrix of the generator's ensemble state.
pub fn generated_state(params: &GeneratorParams) -> Result<DensityMatrix> {
    DensityMatrix::from_bloch(state_bloch(params)?)
}

/// Unit Bloch axis of the projector onto `U(β,γ)|g⟩`.
pub fn measurement_axis(params: &MeasurementParams) -> BlochVector {
    rotated_ground(params.beta, params.gamma)
}

/// Probability of the projector with unit axis `m` clicking on state `v`.
pub fn outcome_probability(m: &BlochVector, v: &BlochVector) -> Result<f64> {
    let norm = m.norm();
    if (norm - 1.0).abs() > AXIS_TOL {
        return Err(Error::NotUnitAxis(norm));
    }
    Ok((0.5 * (1.0 + m.dot(v))).clamp(0.0, 1.0))
}

const SQRT_CLAMP: f64 = 1e-10;

fn clamped_sqrt(value: f64, what: &str) -> Result<f64> {
    if value < -SQRT_CLAMP {
        return Err(Error::InvalidDensityMatrix(format!(
            "negative {what} {value} in fidelity"
        )));
    }
    Ok(value.max(0.0).sqrt())
}

/// Uhlmann fidelity `tr√(√a·b·√a)` via the qubit closed form
/// `√(tr(ab) + 2√(det a · det b))`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let det_term = clamped_sqrt(a.determinant() * b.determinant(), "determinant product")?;
    let f = clamped_sqrt(a.trace_product(b) + 2.0 * det_term, "squared fidelity")?;
    Ok(f.min(1.0))
}

/// Normalised trace distance `½‖a − b‖₁`, i.e. half the Bloch distance.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    0.5 * (a.to_bloch() - b.to_bloch()).norm()
}

/// Axis maximising `p(m, ρ) − p(m, σ)`; parallel to `v_ρ − v_σ`.
///
/// Coincident states make every axis optimal; `+z` is returned then.
pub fn optimal_axis(rho: &BlochVector, sigma: &BlochVector) -> BlochVector {
    let diff = *rho - *sigma;
    let norm = diff.norm();
    if norm == 0.0 {
        BlochVector::GROUND
    } else {
        (1.0 / norm) * diff
    }
}

/// How the true state is synthesised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrueStateMode {
    /// `|g⟩⟨g|`
    PureGround,
    /// Bloch vector uniform in the unit ball.
    BlochBall,
    /// Normalised `GG†` with complex Gaussian `G`. For a qubit this is the
    /// same measure as `BlochBall`, reached by a different route.
    HilbertSchmidt,
    Fixed(BlochVector),
}

pub fn random_true_state<R: Rng + ?Sized>(mode: &TrueStateMode, rng: &mut R) -> Result<DensityMatrix> {
    match mode {
        TrueStateMode::PureGround => Ok(DensityMatrix::ground()),
        TrueStateMode::Fixed(v) => DensityMatrix::from_bloch(*v),
        TrueStateMode::BlochBall => loop {
            let v = BlochVector::new(
                rng.random_range(-1.0..=1.0),
                rng.random_range(-1.0..=1.0),
                rng.random_range(-1.0..=1.0),
            );
            if v.norm_sq() <= 1.0 {
                return DensityMatrix::from_bloch(v);
            }
        },
        TrueStateMode::HilbertSchmidt => {
            let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
            for z in g.iter_mut().flatten() {
                *z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
            // W = G·G†
            let w = |i: usize, j: usize| g[i][0] * g[j][0].conj() + g[i][1] * g[j][1].conj();
            let trace = w(0, 0).re + w(1, 1).re;
            let v = BlochVector::new(
                2.0 * w(1, 0).re / trace,
                2.0 * w(1, 0).im / trace,
                (w(0, 0).re - w(1, 1).re) / trace,
            );
            // Rounding can push |v| a hair past 1 for near-rank-one draws.
            let norm = v.norm();
            let v = if norm > 1.0 { (1.0 / norm) * v } else { v };
            DensityMatrix::from_bloch(v)
        }
    }
}

/// Draws the players' opening strategies: `r ~ U[0,1]`, polar angles
/// `~ U[0,π]`, azimuths `~ U[0,2π)`, in the order r, θ, φ, β, γ.
pub fn random_initial_params<R: Rng + ?Sized>(rng: &mut R) -> (GeneratorParams, MeasurementParams) {
    let r = rng.random_range(0.0..=1.0);
    let theta = rng.random_range(0.0..=PI);
    let phi = rng.random_range(0.0..2.0 * PI);
    let beta = rng.random_range(0.0..=PI);
    let gamma = rng.random_range(0.0..2.0 * PI);
    (GeneratorParams { r, theta, phi }, MeasurementParams { beta, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn assert_vec_close(a: BlochVector, b: BlochVector, tol: f64) {
        assert!((a - b).norm() <= tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn state_bloch_examples() {
        let v = state_bloch(&GeneratorParams::new(1.0, 0.0, 0.0).unwrap()).unwrap();
        assert_vec_close(v, BlochVector::GROUND, 1e-15);

        let v = state_bloch(&GeneratorParams::new(0.5, 1.234, 2.345).unwrap()).unwrap();
        assert_vec_close(v, BlochVector::ORIGIN, 1e-15);

        let params = GeneratorParams::new(1.0, FRAC_PI_2, FRAC_PI_2).unwrap();
        let expected = oracle::bloch_of_ket(oracle::rotate_ground(FRAC_PI_2, FRAC_PI_2));
        assert_vec_close(expected, BlochVector::new(1.0, 0.0, 0.0), 1e-12);
        assert_vec_close(state_bloch(&params).unwrap(), expected, 1e-12);
    }

    #[test]
    fn state_bloch_rejects_bad_r() {
        let bad = GeneratorParams { r: 1.2, theta: 0.0, phi: 0.0 };
        assert!(matches!(state_bloch(&bad), Err(Error::OutOfUnitInterval { name: "r", .. })));
        assert!(GeneratorParams::new(-0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn measurement_axis_examples() {
        assert_vec_close(measurement_axis(&MeasurementParams::new(0.0, 2.7).unwrap()), BlochVector::GROUND, 1e-15);
        assert_vec_close(measurement_axis(&MeasurementParams::new(PI, 0.0).unwrap()), BlochVector::EXCITED, 1e-15);
        let expected = oracle::bloch_of_ket(oracle::rotate_ground(FRAC_PI_2, 0.0));
        assert_vec_close(expected, BlochVector::new(0.0, 1.0, 0.0), 1e-12);
        assert_vec_close(measurement_axis(&MeasurementParams::new(FRAC_PI_2, 0.0).unwrap()), expected, 1e-12);
    }

    #[test]
    fn outcome_probability_examples() {
        let m = BlochVector::GROUND;
        assert_eq!(outcome_probability(&m, &BlochVector::GROUND).unwrap(), 1.0);
        assert_eq!(outcome_probability(&m, &BlochVector::ORIGIN).unwrap(), 0.5);
        assert_eq!(outcome_probability(&m, &BlochVector::EXCITED).unwrap(), 0.0);
        assert!(matches!(
            outcome_probability(&BlochVector::new(0.0, 0.0, 0.5), &BlochVector::ORIGIN),
            Err(Error::NotUnitAxis(_))
        ));
    }

    #[test]
    fn fidelity_examples() {
        let g = DensityMatrix::ground();
        let e = DensityMatrix::excited();
        let mixed = DensityMatrix::maximally_mixed();
        let some = DensityMatrix::from_bloch(BlochVector::new(0.3, -0.2, 0.5)).unwrap();
        assert!(close(fidelity(&some, &some).unwrap(), 1.0, 1e-12));
        assert!(close(fidelity(&g, &e).unwrap(), 0.0, 1e-12));
        let oracle_f = oracle::fidelity_by_sqrt(&g.entries(), &mixed.entries());
        assert!(close(oracle_f, 1.0 / SQRT_2, 1e-10));
        assert!(close(fidelity(&g, &mixed).unwrap(), oracle_f, 1e-12));
    }

    #[test]
    fn trace_distance_examples() {
        let g = DensityMatrix::ground();
        let e = DensityMatrix::excited();
        let mixed = DensityMatrix::maximally_mixed();
        assert_eq!(trace_distance(&g, &g), 0.0);
        assert!(close(trace_distance(&g, &e), 1.0, 1e-15));
        let oracle_t = oracle::trace_distance_by_eigen(&g.entries(), &mixed.entries());
        assert!(close(oracle_t, 0.5, 1e-12));
        assert!(close(trace_distance(&g, &mixed), oracle_t, 1e-12));
    }

    #[test]
    fn density_matrix_validation() {
        let ok = DensityMatrix::from_bloch(BlochVector::new(0.1, 0.2, 0.3)).unwrap();
        assert_eq!(DensityMatrix::from_entries(ok.entries()).unwrap(), ok);
        assert!(DensityMatrix::from_bloch(BlochVector::new(1.0, 1.0, 0.0)).is_err());
        let mut bad = ok.entries();
        bad[0][1] = Complex64::new(0.3, 0.0);
        assert!(DensityMatrix::from_entries(bad).is_err());
        let mut bad = ok.entries();
        bad[0][0] += Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::from_entries(bad).is_err());
        let neg = [
            [Complex64::new(1.2, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(-0.2, 0.0)],
        ];
        assert!(DensityMatrix::from_entries(neg).is_err());
    }

    #[test]
    fn density_matrix_serde_round_trip() {
        let rho = DensityMatrix::from_bloch(BlochVector::new(0.1, -0.7, 0.3)).unwrap();
        let text = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(rho, back);
    }

    #[test]
    fn optimal_axis_degenerate_is_plus_z() {
        let v = BlochVector::new(0.1, 0.2, 0.3);
        assert_eq!(optimal_axis(&v, &v), BlochVector::GROUND);
    }

    #[test]
    fn true_state_modes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_true_state(&TrueStateMode::PureGround, &mut rng).unwrap();
        assert_eq!(g.to_bloch(), BlochVector::GROUND);

        let target = BlochVector::new(0.2, -0.1, 0.4);
        let fixed = random_true_state(&TrueStateMode::Fixed(target), &mut rng).unwrap();
        assert_vec_close(fixed.to_bloch(), target, 1e-15);

        let outside = TrueStateMode::Fixed(BlochVector::new(0.0, 0.8, 0.8));
        assert!(random_true_state(&outside, &mut rng).is_err());
    }

    #[test]
    fn ball_sampling_radial_moment() {
        // For a uniform ball, |v|³ is uniform on [0,1].
        for mode in [TrueStateMode::BlochBall, TrueStateMode::HilbertSchmidt] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let n = 100_000;
            let mean: f64 = (0..n)
                .map(|_| random_true_state(&mode, &mut rng).unwrap().to_bloch().norm().powi(3))
                .sum::<f64>()
                / n as f64;
            assert!(close(mean, 0.5, 0.01), "{mode:?}: mean |v|^3 = {mean}");
        }
    }

    #[test]
    fn initial_params_deterministic_and_in_range() {
        let a = random_initial_params(&mut ChaCha8Rng::seed_from_u64(42));
        let b = random_initial_params(&mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 10_000;
        let mut r_sum = 0.0;
        for _ in 0..n {
            let (g, m) = random_initial_params(&mut rng);
            g.validate().unwrap();
            m.validate().unwrap();
            assert!((0.0..=PI).contains(&g.theta) && (0.0..=PI).contains(&m.beta));
            assert!((0.0..2.0 * PI).contains(&g.phi) && (0.0..2.0 * PI).contains(&m.gamma));
            r_sum += g.r;
        }
        assert!(close(r_sum / n as f64, 0.5, 0.02));
    }

    fn generator() -> impl Strategy<Value = GeneratorParams> {
        (0.0..=1.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(r, theta, phi)| GeneratorParams { r, theta, phi })
    }

    fn ball_vector() -> impl Strategy<Value = BlochVector> {
        (0.0..=1.0f64, 0.0..PI, 0.0..2.0 * PI).prop_map(|(len, t, p)| len * rotated_ground(t, p))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn antipodal_branches(theta in -10.0..10.0f64, phi in -10.0..10.0f64) {
            let a = state_bloch(&GeneratorParams { r: 1.0, theta, phi }).unwrap();
            let b = state_bloch(&GeneratorParams { r: 1.0, theta: PI - theta, phi: phi + PI }).unwrap();
            prop_assert!((a + b).norm() <= 1e-12);
        }

        #[test]
        fn mixture_is_linear_in_r(p in generator()) {
            let one = state_bloch(&GeneratorParams { r: 1.0, ..p }).unwrap();
            let zero = state_bloch(&GeneratorParams { r: 0.0, ..p }).unwrap();
            let mix = p.r * one + (1.0 - p.r) * zero;
            prop_assert!((state_bloch(&p).unwrap() - mix).norm() <= 1e-12);
        }

        #[test]
        fn ensemble_matches_matrix_oracle(p in generator()) {
            let ensemble = oracle::ensemble_density(p.r, p.theta, p.phi);
            let direct = generated_state(&p).unwrap().entries();
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!((ensemble[i][j] - direct[i][j]).norm() <= 1e-12);
                }
            }
        }

        #[test]
        fn probability_matches_matrix_trace(
            p in generator(),
            beta in -10.0..10.0f64,
            gamma in -10.0..10.0f64,
        ) {
            let m = measurement_axis(&MeasurementParams { beta, gamma });
            let v = state_bloch(&p).unwrap();
            let bloch_p = outcome_probability(&m, &v).unwrap();
            let projector = oracle::projector(oracle::rotate_ground(beta, gamma));
            let rho = oracle::ensemble_density(p.r, p.theta, p.phi);
            prop_assert!((bloch_p - oracle::trace_of_product(&projector, &rho)).abs() <= 1e-12);
        }

        #[test]
        fn bloch_round_trip(v in ball_vector()) {
            let rho = DensityMatrix::from_bloch(v).unwrap();
            prop_assert!((rho.to_bloch() - v).norm() <= 1e-12);
            prop_assert!((rho.trace() - 1.0).abs() <= 1e-12);
            let (lo, _) = oracle::hermitian_eigenvalues(&rho.entries());
            prop_assert!(lo >= -1e-12);
        }

        #[test]
        fn fidelity_symmetry_and_sandwich(a in ball_vector(), b in ball_vector()) {
            let ra = DensityMatrix::from_bloch(a).unwrap();
            let rb = DensityMatrix::from_bloch(b).unwrap();
            let fab = fidelity(&ra, &rb).unwrap();
            let fba = fidelity(&rb, &ra).unwrap();
            prop_assert!((fab - fba).abs() <= 1e-12);
            let t = trace_distance(&ra, &rb);
            prop_assert!(1.0 - fab <= t + 1e-9);
            prop_assert!(t <= (1.0 - fab * fab).max(0.0).sqrt() + 1e-9);
            prop_assert!((0.0..=1.0).contains(&fab));
        }

        #[test]
        fn unit_fidelity_iff_zero_distance(a in ball_vector()) {
            let ra = DensityMatrix::from_bloch(a).unwrap();
            prop_assert!((fidelity(&ra, &ra).unwrap() - 1.0).abs() <= 1e-9);
            prop_assert!(trace_distance(&ra, &ra) <= 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn optimal_axis_attains_trace_distance(a in ball_vector(), b in ball_vector()) {
            let m = optimal_axis(&a, &b);
            let d = outcome_probability(&m, &a).unwrap() - outcome_probability(&m, &b).unwrap();
            let t = trace_distance(&DensityMatrix::from_bloch(a).unwrap(), &DensityMatrix::from_bloch(b).unwrap());
            prop_assert!((d - t).abs() <= 1e-9);
        }
    }
}
