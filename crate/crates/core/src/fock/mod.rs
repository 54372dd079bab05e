//! Truncated bosonic Hilbert-space algebra: number-basis states, mode
//! operators, beam splitters, oscillator eigenfunctions and the half-line
//! overlap integrals consumed by the sign-binned correlators.
//!
//! States live on a per-mode number cutoff (inclusive). Multi-mode basis
//! indices use the little-endian digit expansion of per-mode occupations:
//! index = Σ_k n_k (cutoff+1)^k, so mode 0 is the least significant digit.

mod hermite;
mod operator;
mod splitter;

pub use hermite::{HalfLineOverlaps, HermiteBasisCache};
pub use operator::{expectation, ModeOperator};
pub use splitter::beam_splitter_5050;
pub(crate) use splitter::{apply_raising_combination, apply_two_mode_map};

use crate::error::{Error, Result};
use crate::math::ln_factorial_table;
use num_complex::Complex64;

/// Norm tolerance enforced on every constructed state.
pub const NORM_TOL: f64 = 1e-9;

/// Complex amplitude vector over a truncated single- or multi-mode number
/// basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    cutoff: usize,
    modes: usize,
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    /// Wraps an amplitude array, checking length and unit norm.
    pub fn new(cutoff: usize, modes: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::invalid("mode count must be >= 1"));
        }
        let dim = (cutoff + 1).pow(modes as u32);
        if amplitudes.len() != dim {
            return Err(Error::invalid(format!(
                "amplitude array length {} != (cutoff+1)^modes = {}",
                amplitudes.len(),
                dim
            )));
        }
        let v = FockVector {
            cutoff,
            modes,
            amplitudes,
        };
        let n2 = v.squared_norm();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "state is not normalized: squared norm {n2}"
            )));
        }
        Ok(v)
    }

    /// Internal constructor for amplitudes already known to be normalized.
    pub(crate) fn from_normalized(cutoff: usize, modes: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), (cutoff + 1).pow(modes as u32));
        FockVector {
            cutoff,
            modes,
            amplitudes,
        }
    }

    /// |0...0⟩.
    pub fn vacuum(cutoff: usize, modes: usize) -> Self {
        let dim = (cutoff + 1).pow(modes as u32);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(1.0, 0.0);
        FockVector::from_normalized(cutoff, modes, amps)
    }

    /// Number-basis state |n_0, n_1, ...⟩.
    pub fn basis(cutoff: usize, occupations: &[usize]) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::invalid("mode count must be >= 1"));
        }
        for (k, &n) in occupations.iter().enumerate() {
            if n > cutoff {
                return Err(Error::invalid(format!(
                    "occupation {n} of mode {k} exceeds cutoff {cutoff}"
                )));
            }
        }
        let modes = occupations.len();
        let dim = (cutoff + 1).pow(modes as u32);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let idx = flat_index(cutoff, occupations);
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(FockVector::from_normalized(cutoff, modes, amps))
    }

    /// (e^{iφ}|0⟩ + |N⟩)/√2, the single-mode two-level superposition.
    pub fn number_superposition(n: usize, phase: f64, cutoff: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("superposition level N must be >= 1"));
        }
        if cutoff < n {
            return Err(Error::invalid(format!(
                "cutoff {cutoff} is below superposition level N = {n}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        amps[0] = Complex64::from_polar(s, phase);
        amps[n] = Complex64::new(s, 0.0);
        Ok(FockVector::from_normalized(cutoff, 1, amps))
    }

    /// (|N,0⟩ + |0,N⟩)/√2, the two-mode NOON superposition.
    pub fn noon(n: usize, cutoff: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("NOON level N must be >= 1"));
        }
        if cutoff < n {
            return Err(Error::invalid(format!(
                "cutoff {cutoff} is below NOON level N = {n}"
            )));
        }
        let dim = (cutoff + 1) * (cutoff + 1);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        amps[flat_index(cutoff, &[n, 0])] = Complex64::new(s, 0.0);
        amps[flat_index(cutoff, &[0, n])] = Complex64::new(s, 0.0);
        Ok(FockVector::from_normalized(cutoff, 2, amps))
    }

    /// Truncated coherent state |α⟩ with amplitudes ∝ α^n/√(n!), renormalized
    /// after truncation. Returns the state and the pre-renormalization tail
    /// mass Σ_{n>cutoff} e^{-|α|²}|α|^{2n}/n!; the caller decides whether the
    /// tail is acceptable.
    pub fn coherent(alpha: Complex64, cutoff: usize) -> (Self, f64) {
        let (raw, tail) = coherent_amplitudes(alpha, cutoff);
        let n2: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
        let scale = 1.0 / n2.sqrt();
        let amps = raw.iter().map(|a| a * scale).collect();
        (FockVector::from_normalized(cutoff, 1, amps), tail)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Per-mode dimension cutoff+1.
    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn squared_norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Amplitude ⟨n_0, n_1, ...|ψ⟩.
    pub fn amplitude(&self, occupations: &[usize]) -> Complex64 {
        assert_eq!(occupations.len(), self.modes);
        self.amplitudes[flat_index(self.cutoff, occupations)]
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        if self.cutoff != other.cutoff || self.modes != other.modes {
            return Err(Error::invalid(format!(
                "dimension mismatch: ({}, {} modes) vs ({}, {} modes)",
                self.cutoff, self.modes, other.cutoff, other.modes
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Same state re-indexed at a larger cutoff.
    pub fn embed(&self, new_cutoff: usize) -> Result<Self> {
        if new_cutoff < self.cutoff {
            return Err(Error::invalid(format!(
                "embed target cutoff {new_cutoff} is below current cutoff {}",
                self.cutoff
            )));
        }
        if new_cutoff == self.cutoff {
            return Ok(self.clone());
        }
        let dim = (new_cutoff + 1).pow(self.modes as u32);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let mut occ = vec![0usize; self.modes];
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            decompose_index(self.cutoff, self.modes, i, &mut occ);
            amps[flat_index(new_cutoff, &occ)] = *a;
        }
        Ok(FockVector::from_normalized(new_cutoff, self.modes, amps))
    }

    /// Single-mode photon-number distribution [(n, p_n)].
    pub fn number_distribution(&self) -> Result<Vec<(f64, f64)>> {
        if self.modes != 1 {
            return Err(Error::invalid(format!(
                "number_distribution expects a single-mode state, got {} modes",
                self.modes
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| (n as f64, a.norm_sqr()))
            .collect())
    }

    /// Largest occupied number level (max over modes), or 0 for vacuum.
    pub fn max_support(&self) -> usize {
        let mut occ = vec![0usize; self.modes];
        let mut top = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() > 0.0 {
                decompose_index(self.cutoff, self.modes, i, &mut occ);
                top = top.max(*occ.iter().max().unwrap());
            }
        }
        top
    }

    /// Probability mass on basis states where any mode exceeds `level`.
    pub fn mass_above(&self, level: usize) -> f64 {
        let mut occ = vec![0usize; self.modes];
        let mut mass = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            decompose_index(self.cutoff, self.modes, i, &mut occ);
            if occ.iter().any(|&n| n > level) {
                mass += p;
            }
        }
        mass
    }
}

/// Little-endian flat index of a per-mode occupation list.
pub fn flat_index(cutoff: usize, occupations: &[usize]) -> usize {
    let base = cutoff + 1;
    let mut idx = 0;
    for &n in occupations.iter().rev() {
        idx = idx * base + n;
    }
    idx
}

/// Inverse of [`flat_index`].
pub fn decompose_index(cutoff: usize, modes: usize, index: usize, out: &mut [usize]) {
    let base = cutoff + 1;
    let mut rest = index;
    for k in 0..modes {
        out[k] = rest % base;
        rest /= base;
    }
}

/// Raw truncated coherent amplitudes e^{-|α|²/2} α^n/√(n!) (not renormalized)
/// plus the exact Poisson tail mass beyond the cutoff.
pub(crate) fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> (Vec<Complex64>, f64) {
    let r = alpha.norm();
    if r == 0.0 {
        let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        amps[0] = Complex64::new(1.0, 0.0);
        return (amps, 0.0);
    }
    let lnf = ln_factorial_table(cutoff);
    let phase = alpha.arg();
    let lam = r * r;
    let mut amps = Vec::with_capacity(cutoff + 1);
    for n in 0..=cutoff {
        let ln_mag = -0.5 * lam + n as f64 * r.ln() - 0.5 * lnf[n];
        amps.push(Complex64::from_polar(ln_mag.exp(), phase * n as f64));
    }
    // Poisson tail via the pmf recurrence; clamp tiny negatives from rounding.
    let mut pmf = (-lam).exp();
    let mut cdf = pmf;
    for n in 1..=cutoff {
        pmf *= lam / n as f64;
        cdf += pmf;
    }
    let tail = (1.0 - cdf).max(0.0);
    (amps, tail)
}
