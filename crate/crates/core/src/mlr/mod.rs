//! Continuous-variable CHSH tests with macroscopically separated outcomes:
//! pair coherent state construction, sign-binned quadrature correlators in
//! the ideal homodyne limit, the amplified number-difference measurement,
//! three-region binning, and the modified inequality that tolerates a finite
//! middle region.

mod amplified;
mod homodyne;
mod regions;

pub use amplified::{
    amplified_bell_report, amplified_joint_distribution, amplified_joint_distribution_cached,
    PovmCache, SitePovm,
};
pub use homodyne::{
    chsh_e, ideal_bell_report, joint_quadrature_pdf, marginal_quadrature_density, optimize_chsh,
    sign_correlator, sign_correlator_from_distribution, GridSpec, KCoefficients,
};
pub use regions::{modified_chsh, region_probabilities, ModifiedChsh, Region, RegionTable};

use crate::error::{Error, Result};
use crate::math::ln_factorial_table;
use ndarray::Array2;

/// Tail-mass bound enforced by [`pair_coherent`].
pub const SCHMIDT_TAIL_TOL: f64 = 1e-10;

/// A two-mode state of Schmidt-diagonal form Σ_n c_n |n,n⟩ with real
/// nonnegative coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDiagonalState {
    coefficients: Vec<f64>,
    r0: Option<f64>,
    tail_mass: f64,
}

impl SchmidtDiagonalState {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn cutoff(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Source parameter when constructed as a pair coherent state.
    pub fn r0(&self) -> Option<f64> {
        self.r0
    }

    /// Probability mass discarded by the truncation.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Vacuum-only state |0,0⟩ at the given cutoff.
    pub fn vacuum(cutoff: usize) -> Self {
        let mut c = vec![0.0; cutoff + 1];
        c[0] = 1.0;
        SchmidtDiagonalState {
            coefficients: c,
            r0: None,
            tail_mass: 0.0,
        }
    }

    /// Wraps explicit Schmidt coefficients (validated nonnegative, unit norm).
    pub fn from_coefficients(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("coefficient list must not be empty"));
        }
        if coefficients.iter().any(|&c| c < 0.0) {
            return Err(Error::invalid("Schmidt coefficients must be nonnegative"));
        }
        let n2: f64 = coefficients.iter().map(|c| c * c).sum();
        if (n2 - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!(
                "Schmidt coefficients are not normalized: squared norm {n2}"
            )));
        }
        Ok(SchmidtDiagonalState {
            coefficients,
            r0: None,
            tail_mass: 0.0,
        })
    }
}

/// The pair coherent state: Schmidt coefficients c_n ∝ r0^{2n}/n!.
///
/// The normalization sum Σ_n r0^{4n}/(n!)² is the series of the modified
/// Bessel function I_0(2r0²); it is accumulated directly (in log space) well
/// past the cutoff so the reported tail mass is exact to rounding. A cutoff
/// leaving more than [`SCHMIDT_TAIL_TOL`] outside is rejected as
/// non-converged.
pub fn pair_coherent(r0: f64, cutoff: usize) -> Result<SchmidtDiagonalState> {
    if !(r0 > 0.0) {
        return Err(Error::invalid(format!("r0 must be positive, got {r0}")));
    }
    // Extend the series until terms vanish relative to the running sum.
    let ext = cutoff + 64 + (4.0 * r0 * r0) as usize;
    let lnf = ln_factorial_table(ext);
    let ln_r = r0.ln();
    let ln_term = |n: usize| 2.0 * (2.0 * n as f64 * ln_r - lnf[n]);
    // Peak of the summand, for stable scaling.
    let ln_peak = (0..=ext).map(ln_term).fold(f64::NEG_INFINITY, f64::max);
    let mut partial = 0.0; // up to cutoff
    let mut full = 0.0;
    for n in 0..=ext {
        let t = (ln_term(n) - ln_peak).exp();
        full += t;
        if n <= cutoff {
            partial += t;
        }
    }
    let tail = ((full - partial) / full).max(0.0);
    if tail > SCHMIDT_TAIL_TOL {
        return Err(Error::non_convergence(
            format!("pair coherent state at r0 = {r0} needs a larger cutoff than {cutoff}"),
            tail,
        ));
    }
    let scale = 1.0 / (full * ln_peak.exp()).sqrt();
    let coefficients = (0..=cutoff)
        .map(|n| (2.0 * n as f64 * ln_r - lnf[n]).exp() * scale)
        .collect();
    Ok(SchmidtDiagonalState {
        coefficients,
        r0: Some(r0),
        tail_mass: tail,
    })
}

/// Which of the two separated systems a setting belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    A,
    B,
}

/// A quadrature measurement setting at one site.
///
/// `angle` is the quadrature angle θ of x̂_θ. The amplified apparatus
/// realizes this measurement with its polarisation rotation at θ/2 and
/// internal phase π/2; its raw number-difference outcome J estimates
/// x̂_θ scaled by the gain α/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub site: Site,
    pub angle: f64,
}

impl MeasurementSetting {
    /// Normalizes the quadrature angle into [0, 2π).
    pub fn new(site: Site, angle: f64) -> Self {
        MeasurementSetting {
            site,
            angle: normalize_angle(angle),
        }
    }

    /// Rotation angle of the measurement apparatus (half the quadrature
    /// angle).
    pub fn apparatus_angle(&self) -> f64 {
        self.angle / 2.0
    }

    /// Scale factor between the number-difference outcome J and the
    /// quadrature x̂_θ it amplifies.
    pub fn amplified_gain(alpha: f64) -> f64 {
        alpha / std::f64::consts::SQRT_2
    }
}

pub(crate) fn normalize_angle(angle: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let mut a = angle % tau;
    if a < 0.0 {
        a += tau;
    }
    a
}

/// Three-region outcome binning with middle half-width δ: outcomes ≥ +δ fall
/// in region 2 ("alive"), outcomes ≤ −δ in region 1 ("dead"), and the open
/// interval between them in region 0. At δ = 0 an outcome of exactly zero
/// goes to region 2, matching the sign binning x ≥ 0 → +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBinning {
    pub delta: f64,
}

impl RegionBinning {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(Error::invalid(format!(
                "region half-width must be nonnegative, got {delta}"
            )));
        }
        Ok(RegionBinning { delta })
    }

    pub fn classify(&self, outcome: f64) -> Region {
        if outcome >= self.delta {
            Region::Upper
        } else if outcome <= -self.delta {
            Region::Lower
        } else {
            Region::Middle
        }
    }
}

/// Outcome axis type of a joint distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisKind {
    /// Quadrature grid; masses are density × cell area.
    Continuous { step: f64 },
    /// Number-difference outcomes (half-integer steps in J).
    Discrete,
}

/// A joint probability table over paired measurement outcomes.
///
/// `mass[[i, j]]` is the probability of outcome (x_values[i], y_values[j]);
/// continuous grids store cell masses so that binning and moments read the
/// same way in both cases.
#[derive(Debug, Clone)]
pub struct JointOutcomeDistribution {
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    pub mass: Array2<f64>,
    pub kind: AxisKind,
    pub settings: (MeasurementSetting, MeasurementSetting),
    /// Coherent amplification amplitude; 0 means the ideal homodyne limit.
    pub alpha: f64,
}

impl JointOutcomeDistribution {
    pub fn total_mass(&self) -> f64 {
        self.mass.sum()
    }

    /// Marginal law at site A.
    pub fn marginal_x(&self) -> Vec<f64> {
        self.mass.rows().into_iter().map(|r| r.sum()).collect()
    }

    /// Marginal law at site B.
    pub fn marginal_y(&self) -> Vec<f64> {
        self.mass.columns().into_iter().map(|c| c.sum()).collect()
    }
}

/// The four CHSH quadrature angles (θ, θ′ at A; φ, φ′ at B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshAngles {
    pub theta: f64,
    pub theta_p: f64,
    pub phi: f64,
    pub phi_p: f64,
}

impl ChshAngles {
    pub fn new(theta: f64, theta_p: f64, phi: f64, phi_p: f64) -> Self {
        ChshAngles {
            theta: normalize_angle(theta),
            theta_p: normalize_angle(theta_p),
            phi: normalize_angle(phi),
            phi_p: normalize_angle(phi_p),
        }
    }

    /// Setting pairs in the fixed correlator order (θφ, θφ′, θ′φ, θ′φ′).
    pub fn pairs(&self) -> [(f64, f64); 4] {
        [
            (self.theta, self.phi),
            (self.theta, self.phi_p),
            (self.theta_p, self.phi),
            (self.theta_p, self.phi_p),
        ]
    }

    /// Angle sums θ_A + θ_B per pair; the ideal correlator depends on the
    /// settings only through these.
    pub fn pair_sums(&self) -> [f64; 4] {
        self.pairs().map(|(a, b)| a + b)
    }
}

/// Truncation and resolution metadata attached to a [`BellReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceMeta {
    pub signal_cutoff: usize,
    pub ancilla_cutoff: Option<usize>,
    pub state_tail_mass: f64,
    /// Max |Σ_j E_j − 1| over sites and settings (0 in the homodyne limit).
    pub completeness_deficit: f64,
    pub converged: bool,
}

/// Correlators, CHSH combinations and region probabilities for one set of
/// four settings.
#[derive(Debug, Clone)]
pub struct BellReport {
    pub angles: ChshAngles,
    pub alpha: f64,
    pub delta: f64,
    /// Sign-binned correlators K per pair (θφ, θφ′, θ′φ, θ′φ′).
    pub k: [f64; 4],
    pub k_lower: [f64; 4],
    pub k_upper: [f64; 4],
    /// K_{θφ} − K_{θφ′} + K_{θ′φ} + K_{θ′φ′}.
    pub e: f64,
    /// Same combination on the δ-binned bounds (lower, upper, lower, lower).
    pub e_delta: f64,
    pub regions: [RegionTable; 4],
    pub convergence: ConvergenceMeta,
}

impl BellReport {
    /// Eq.-form invariants; used by tests and debug builds.
    pub fn check_invariants(&self) -> Result<()> {
        for i in 0..4 {
            if self.k[i].abs() > 1.0 + 1e-9 {
                return Err(Error::invalid(format!("|K[{i}]| = {} > 1", self.k[i].abs())));
            }
            if self.k_lower[i] > self.k_upper[i] + 1e-12 {
                return Err(Error::invalid(format!(
                    "K bounds inverted for pair {i}: {} > {}",
                    self.k_lower[i], self.k_upper[i]
                )));
            }
        }
        Ok(())
    }

    pub fn violated(&self) -> bool {
        self.e > 2.0
    }

    pub fn violated_delta(&self) -> bool {
        self.e_delta > 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pair_coherent_ratio_forced_by_closed_form() {
        let s = pair_coherent(1.1, 30).unwrap();
        let c = s.coefficients();
        for n in 0..12 {
            assert_abs_diff_eq!(
                c[n + 1] / c[n],
                1.21 / (n as f64 + 1.0),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn pair_coherent_matches_angle_average_oracle() {
        // Independent oracle: the same state arises as the uniform phase
        // average of |r0 e^{iζ}⟩|r0 e^{−iζ}⟩; its diagonal amplitudes are
        // the ζ-average of products of coherent amplitudes.
        use crate::fock::FockVector;
        use num_complex::Complex64;
        let r0 = 1.1;
        let cutoff = 12;
        let steps = 512;
        let mut diag = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        for k in 0..steps {
            let zeta = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
            let a = Complex64::from_polar(r0, zeta);
            let (ca, _) = FockVector::coherent(a, 4 * cutoff);
            let (cb, _) = FockVector::coherent(a.conj(), 4 * cutoff);
            for n in 0..=cutoff {
                diag[n] += ca.amplitudes()[n] * cb.amplitudes()[n];
            }
        }
        let norm: f64 = diag.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let s = pair_coherent(r0, 30).unwrap();
        for n in 0..=cutoff {
            assert_abs_diff_eq!(diag[n].norm() / norm, s.coefficients()[n], epsilon = 1e-6);
            assert_abs_diff_eq!(diag[n].im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pair_coherent_normalization_and_tail() {
        let s = pair_coherent(1.1, 30).unwrap();
        let n2: f64 = s.coefficients().iter().map(|c| c * c).sum();
        assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-12);
        assert!(s.tail_mass() < 1e-12);
    }

    #[test]
    fn pair_coherent_vacuum_limit() {
        let s = pair_coherent(1e-6, 8).unwrap();
        assert_abs_diff_eq!(s.coefficients()[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn pair_coherent_rejects_thin_cutoff() {
        match pair_coherent(1.1, 4).unwrap_err() {
            Error::NonConvergence { residual, .. } => assert!(residual > SCHMIDT_TAIL_TOL),
            other => panic!("expected non-convergence, got {other}"),
        }
        assert!(pair_coherent(0.0, 10).is_err());
        assert!(pair_coherent(-1.0, 10).is_err());
    }

    #[test]
    fn binning_boundary_assignment() {
        let b = RegionBinning::new(0.5).unwrap();
        assert_eq!(b.classify(0.5), Region::Upper);
        assert_eq!(b.classify(-0.5), Region::Lower);
        assert_eq!(b.classify(0.49), Region::Middle);
        assert_eq!(b.classify(-0.49), Region::Middle);
        // δ = 0: zero goes with the positive bin.
        let z = RegionBinning::new(0.0).unwrap();
        assert_eq!(z.classify(0.0), Region::Upper);
        assert_eq!(z.classify(-1e-12), Region::Lower);
        assert!(RegionBinning::new(-0.1).is_err());
    }

    #[test]
    fn measurement_setting_normalizes_and_scales() {
        let m = MeasurementSetting::new(Site::A, -1.0);
        assert!(m.angle >= 0.0 && m.angle < 2.0 * std::f64::consts::PI);
        assert_abs_diff_eq!(m.apparatus_angle(), m.angle / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            MeasurementSetting::amplified_gain(2.0),
            std::f64::consts::SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn chsh_angle_pair_order() {
        let a = ChshAngles::new(0.1, 0.2, 0.3, 0.4);
        let p = a.pairs();
        assert_eq!(p[0], (a.theta, a.phi));
        assert_eq!(p[1], (a.theta, a.phi_p));
        assert_eq!(p[2], (a.theta_p, a.phi));
        assert_eq!(p[3], (a.theta_p, a.phi_p));
    }
}
