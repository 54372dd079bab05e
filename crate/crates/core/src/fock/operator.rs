//! Single-mode operators on the truncated number basis and expectation
//! values of their tensor products.
//!
//! Conventions (one basis serves every consumer):
//!
//! - x̂ = (â† + â)/√2, p̂ = i(â† − â)/√2, so [x̂, p̂] = i below the truncation
//!   edge and Δx̂ Δp̂ ≥ 1/2.
//! - P̂ = (â − â†)/i is kept as the derived operator √2·p̂.
//! - x̂_θ = x̂ cosθ + p̂ sinθ.

use super::{decompose_index, FockVector};
use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;

/// A labelled single-mode operator matrix of dimension cutoff+1.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    cutoff: usize,
    label: String,
    matrix: Array2<Complex64>,
}

impl ModeOperator {
    fn from_matrix(cutoff: usize, label: impl Into<String>, matrix: Array2<Complex64>) -> Self {
        debug_assert_eq!(matrix.nrows(), cutoff + 1);
        debug_assert_eq!(matrix.ncols(), cutoff + 1);
        ModeOperator {
            cutoff,
            label: label.into(),
            matrix,
        }
    }

    pub fn identity(cutoff: usize) -> Self {
        let d = cutoff + 1;
        let mut m = Array2::zeros((d, d));
        for i in 0..d {
            m[[i, i]] = Complex64::new(1.0, 0.0);
        }
        ModeOperator::from_matrix(cutoff, "1", m)
    }

    /// â with ⟨n−1|â|n⟩ = √n.
    pub fn annihilation(cutoff: usize) -> Self {
        let d = cutoff + 1;
        let mut m = Array2::zeros((d, d));
        for n in 1..d {
            m[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        ModeOperator::from_matrix(cutoff, "a", m)
    }

    /// â†.
    pub fn creation(cutoff: usize) -> Self {
        let mut op = ModeOperator::annihilation(cutoff).dagger();
        op.label = "a†".into();
        op
    }

    /// n̂ = â†â.
    pub fn number(cutoff: usize) -> Self {
        let d = cutoff + 1;
        let mut m = Array2::zeros((d, d));
        for n in 0..d {
            m[[n, n]] = Complex64::new(n as f64, 0.0);
        }
        ModeOperator::from_matrix(cutoff, "n", m)
    }

    /// x̂ = (â† + â)/√2.
    pub fn position(cutoff: usize) -> Self {
        let d = cutoff + 1;
        let mut m = Array2::zeros((d, d));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for n in 1..d {
            let v = Complex64::new((n as f64).sqrt() * s, 0.0);
            m[[n - 1, n]] = v;
            m[[n, n - 1]] = v;
        }
        ModeOperator::from_matrix(cutoff, "x", m)
    }

    /// p̂ = i(â† − â)/√2.
    pub fn momentum(cutoff: usize) -> Self {
        let d = cutoff + 1;
        let mut m = Array2::zeros((d, d));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for n in 1..d {
            let v = (n as f64).sqrt() * s;
            m[[n, n - 1]] = Complex64::new(0.0, v);
            m[[n - 1, n]] = Complex64::new(0.0, -v);
        }
        ModeOperator::from_matrix(cutoff, "p", m)
    }

    /// P̂ = (â − â†)/i = √2·p̂.
    pub fn quadrature_big_p(cutoff: usize) -> Self {
        let mut op = ModeOperator::momentum(cutoff);
        op.matrix.mapv_inplace(|v| v * std::f64::consts::SQRT_2);
        op.label = "P".into();
        op
    }

    /// x̂_θ = x̂ cosθ + p̂ sinθ.
    pub fn rotated_quadrature(cutoff: usize, theta: f64) -> Self {
        let x = ModeOperator::position(cutoff);
        let p = ModeOperator::momentum(cutoff);
        let m = &x.matrix * Complex64::new(theta.cos(), 0.0)
            + &p.matrix * Complex64::new(theta.sin(), 0.0);
        ModeOperator::from_matrix(cutoff, format!("x_θ({theta:.4})"), m)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let d = self.cutoff + 1;
        let mut m = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                m[[i, j]] = self.matrix[[j, i]].conj();
            }
        }
        ModeOperator::from_matrix(self.cutoff, format!("({})†", self.label), m)
    }

    /// Matrix product self·other.
    pub fn compose(&self, other: &ModeOperator) -> Result<Self> {
        if self.cutoff != other.cutoff {
            return Err(Error::invalid(format!(
                "operator cutoffs differ: {} vs {}",
                self.cutoff, other.cutoff
            )));
        }
        Ok(ModeOperator::from_matrix(
            self.cutoff,
            format!("{}·{}", self.label, other.label),
            self.matrix.dot(&other.matrix),
        ))
    }

    /// Matrix power self^k (k = 0 gives the identity).
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = ModeOperator::identity(self.cutoff);
        for _ in 0..k {
            acc = ModeOperator::from_matrix(self.cutoff, "", acc.matrix.dot(&self.matrix));
        }
        acc.label = format!("{}^{k}", self.label);
        acc
    }

    /// [self, other] = self·other − other·self.
    pub fn commutator(&self, other: &ModeOperator) -> Result<Self> {
        if self.cutoff != other.cutoff {
            return Err(Error::invalid(format!(
                "operator cutoffs differ: {} vs {}",
                self.cutoff, other.cutoff
            )));
        }
        let m = self.matrix.dot(&other.matrix) - other.matrix.dot(&self.matrix);
        Ok(ModeOperator::from_matrix(
            self.cutoff,
            format!("[{},{}]", self.label, other.label),
            m,
        ))
    }

    /// Max |M − M†| entry.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.cutoff + 1;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.matrix[[i, j]] - self.matrix[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Applies the operator along one mode of a state, returning raw
    /// (generally unnormalized) amplitudes.
    pub fn apply_to_mode(&self, state: &FockVector, mode: usize) -> Result<Vec<Complex64>> {
        if self.cutoff != state.cutoff() {
            return Err(Error::invalid(format!(
                "operator cutoff {} does not match state cutoff {}",
                self.cutoff,
                state.cutoff()
            )));
        }
        if mode >= state.modes() {
            return Err(Error::invalid(format!(
                "mode index {mode} out of range for {}-mode state",
                state.modes()
            )));
        }
        Ok(apply_matrix_to_mode(
            state.amplitudes(),
            state.cutoff(),
            state.modes(),
            mode,
            &self.matrix,
        ))
    }
}

fn apply_matrix_to_mode(
    amps: &[Complex64],
    cutoff: usize,
    modes: usize,
    mode: usize,
    matrix: &Array2<Complex64>,
) -> Vec<Complex64> {
    let d = cutoff + 1;
    let stride = d.pow(mode as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    // Iterate over all indices with digit `mode` equal to zero, then walk the
    // strided fibre of length d through that position.
    let block = stride * d;
    let mut base = 0;
    while base < amps.len() {
        for off in 0..stride {
            let start = base + off;
            for row in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for col in 0..d {
                    let a = amps[start + col * stride];
                    if a.re != 0.0 || a.im != 0.0 {
                        acc += matrix[[row, col]] * a;
                    }
                }
                out[start + row * stride] = acc;
            }
        }
        base += block;
    }
    out
}

/// ⟨ψ| O_0 ⊗ O_1 ⊗ ... |ψ⟩ with one operator per mode.
///
/// For Hermitian products the imaginary part is a rounding residual
/// (< 1e-12 in practice); it is returned rather than discarded.
pub fn expectation(state: &FockVector, ops: &[&ModeOperator]) -> Result<Complex64> {
    if ops.len() != state.modes() {
        return Err(Error::invalid(format!(
            "expectation needs one operator per mode: got {} for a {}-mode state",
            ops.len(),
            state.modes()
        )));
    }
    let mut current = state.amplitudes().to_vec();
    for (mode, op) in ops.iter().enumerate() {
        if op.cutoff() != state.cutoff() {
            return Err(Error::invalid(format!(
                "operator cutoff {} does not match state cutoff {}",
                op.cutoff(),
                state.cutoff()
            )));
        }
        current = apply_matrix_to_mode(&current, state.cutoff(), state.modes(), mode, op.matrix());
    }
    Ok(state
        .amplitudes()
        .iter()
        .zip(&current)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermitian_operators_are_hermitian() {
        for cutoff in [3, 8, 20] {
            assert_eq!(ModeOperator::number(cutoff).hermiticity_defect(), 0.0);
            assert!(ModeOperator::position(cutoff).hermiticity_defect() < 1e-12);
            assert!(ModeOperator::momentum(cutoff).hermiticity_defect() < 1e-12);
            assert!(ModeOperator::quadrature_big_p(cutoff).hermiticity_defect() < 1e-12);
            assert!(ModeOperator::rotated_quadrature(cutoff, 0.7).hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let a = ModeOperator::annihilation(6);
        let adag = ModeOperator::creation(6);
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(a.matrix()[[i, j]], adag.matrix()[[j, i]].conj());
            }
        }
    }

    #[test]
    fn xp_commutator_is_i_below_truncation_edge() {
        let cutoff = 12;
        let x = ModeOperator::position(cutoff);
        let p = ModeOperator::momentum(cutoff);
        let c = x.commutator(&p).unwrap();
        for i in 0..cutoff {
            for j in 0..cutoff {
                let want = if i == j {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert_abs_diff_eq!(c.matrix()[[i, j]].re, want.re, epsilon = 1e-12);
                assert_abs_diff_eq!(c.matrix()[[i, j]].im, want.im, epsilon = 1e-12);
            }
        }
        // The top level carries the truncation artifact -cutoff·i on x·p - p·x.
        assert!((c.matrix()[[cutoff, cutoff]] - Complex64::new(0.0, 1.0)).norm() > 1.0);
    }

    #[test]
    fn big_p_is_sqrt2_times_momentum() {
        let p = ModeOperator::momentum(9);
        let bp = ModeOperator::quadrature_big_p(9);
        for i in 0..10 {
            for j in 0..10 {
                let want = p.matrix()[[i, j] ] * std::f64::consts::SQRT_2;
                assert_abs_diff_eq!(bp.matrix()[[i, j]].re, want.re, epsilon = 1e-14);
                assert_abs_diff_eq!(bp.matrix()[[i, j]].im, want.im, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn rotated_quadrature_matches_number_phase_rotation() {
        // e^{iθn̂} x̂ e^{-iθn̂} must reproduce x̂cosθ + p̂sinθ.
        let cutoff = 10;
        let theta = 0.83;
        let d = cutoff + 1;
        let x = ModeOperator::position(cutoff);
        let mut rot = Array2::<Complex64>::zeros((d, d));
        for n in 0..d {
            rot[[n, n]] = Complex64::from_polar(1.0, theta * n as f64);
        }
        let mut rot_dag = Array2::<Complex64>::zeros((d, d));
        for n in 0..d {
            rot_dag[[n, n]] = Complex64::from_polar(1.0, -theta * n as f64);
        }
        let lhs = rot.dot(x.matrix()).dot(&rot_dag);
        let rhs = ModeOperator::rotated_quadrature(cutoff, theta);
        for i in 0..d {
            for j in 0..d {
                assert_abs_diff_eq!(lhs[[i, j]].re, rhs.matrix()[[i, j]].re, epsilon = 1e-12);
                assert_abs_diff_eq!(lhs[[i, j]].im, rhs.matrix()[[i, j]].im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn expectation_vacuum_number_is_zero() {
        let v = FockVector::vacuum(5, 1);
        let n = ModeOperator::number(5);
        let e = expectation(&v, &[&n]).unwrap();
        assert_eq!(e, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn expectation_coherent_number_is_poisson_mean() {
        let (s, tail) = FockVector::coherent(Complex64::new(2.0, 0.0), 40);
        assert!(tail < 1e-8);
        let n = ModeOperator::number(40);
        let e = expectation(&s, &[&n]).unwrap();
        // Direct-summation oracle over the Poisson weights.
        let dist = s.number_distribution().unwrap();
        let oracle: f64 = dist.iter().map(|(n, p)| n * p).sum();
        assert_abs_diff_eq!(e.re, oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(e.re, 4.0, epsilon = 1e-6);
        assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn expectation_two_level_position() {
        // ⟨x̂⟩ on (|0⟩+|1⟩)/√2 is 1/√2: ⟨a+a†⟩/√2 with only ⟨0|a|1⟩ = 1 terms.
        let s = FockVector::number_superposition(1, 0.0, 4).unwrap();
        let x = ModeOperator::position(4);
        let e = expectation(&s, &[&x]).unwrap();
        assert_abs_diff_eq!(e.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn expectation_rejects_dimension_mismatch() {
        let s = FockVector::vacuum(5, 1);
        let n = ModeOperator::number(6);
        assert!(expectation(&s, &[&n]).is_err());
        let n5 = ModeOperator::number(5);
        assert!(expectation(&s, &[&n5, &n5]).is_err());
    }

    #[test]
    fn expectation_acts_per_mode() {
        // ⟨n̂_a⟩ and ⟨n̂_b⟩ on |2,1⟩.
        let s = FockVector::basis(3, &[2, 1]).unwrap();
        let n = ModeOperator::number(3);
        let id = ModeOperator::identity(3);
        let na = expectation(&s, &[&n, &id]).unwrap();
        let nb = expectation(&s, &[&id, &n]).unwrap();
        assert_abs_diff_eq!(na.re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(nb.re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn truncation_stability_of_reported_scalars() {
        // Doubling the cutoff past convergence moves ⟨n̂⟩ by < 1e-6.
        let (s1, _) = FockVector::coherent(Complex64::new(1.5, 0.5), 30);
        let (s2, _) = FockVector::coherent(Complex64::new(1.5, 0.5), 60);
        let e1 = expectation(&s1, &[&ModeOperator::number(30)]).unwrap();
        let e2 = expectation(&s2, &[&ModeOperator::number(60)]).unwrap();
        assert!((e1.re - e2.re).abs() < 1e-6);
    }
}
