//! Quantum-mixture signature evaluators: the binned variance-product
//! inequality, the NOON coherence moment, binned conditional statistics, and
//! classical-mixture negative controls.
//!
//! The central inequality compares, for a single mode,
//!
//!   (Σ_i (Δn̂)_i²) · (ΔP̂^N)²  ≥  |⟨Ĉ⟩|²/4,   Ĉ = [n̂, P̂^N],
//!
//! where i runs over the two bins of a binary number measurement. Every
//! probabilistic mixture of per-bin quantum states satisfies it; the
//! two-level superpositions violate it because their within-bin variances
//! vanish while ⟨Ĉ⟩ stays finite.

use crate::error::{Error, Result};
use crate::fock::{expectation, FockVector, ModeOperator};
use crate::math::ln_factorial_table;
use num_complex::Complex64;

/// Two-bin partition of a real outcome axis: outcomes < boundary fall in
/// bin 1 ("dead"), outcomes ≥ boundary in bin 2 ("alive").
#[derive(Debug, Clone, PartialEq)]
pub struct BinRule {
    pub observable: String,
    pub boundary: f64,
}

impl BinRule {
    pub fn new(observable: impl Into<String>, boundary: f64) -> Self {
        BinRule {
            observable: observable.into(),
            boundary,
        }
    }

    /// True for bin 2 ("alive").
    pub fn is_alive(&self, outcome: f64) -> bool {
        outcome >= self.boundary
    }
}

/// Weight, conditional mean and conditional variance of one bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinStats {
    pub weight: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Per-bin conditional statistics; empty bins are absent rather than zero so
/// they cannot silently strengthen the inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedStats {
    pub dead: Option<BinStats>,
    pub alive: Option<BinStats>,
}

impl BinnedStats {
    /// Σ over present bins of the conditional variance (unweighted).
    pub fn variance_sum(&self) -> f64 {
        self.dead.map_or(0.0, |b| b.variance) + self.alive.map_or(0.0, |b| b.variance)
    }

    /// Σ over present bins of weight × conditional variance.
    pub fn weighted_variance_sum(&self) -> f64 {
        self.dead.map_or(0.0, |b| b.weight * b.variance)
            + self.alive.map_or(0.0, |b| b.weight * b.variance)
    }
}

/// Bin weights and conditional moments of a discrete outcome distribution.
pub fn binned_conditional_stats(
    distribution: &[(f64, f64)],
    rule: &BinRule,
) -> Result<BinnedStats> {
    let total: f64 = distribution.iter().map(|(_, p)| p).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "distribution is not normalized: deficit {:.3e}",
            1.0 - total
        )));
    }
    if let Some((x, p)) = distribution.iter().find(|(_, p)| *p < -1e-12) {
        return Err(Error::invalid(format!(
            "negative probability {p:.3e} at outcome {x}"
        )));
    }
    let mut acc = [(0.0f64, 0.0f64, 0.0f64); 2]; // (weight, Σxp, Σx²p)
    for &(x, p) in distribution {
        let bin = usize::from(rule.is_alive(x));
        acc[bin].0 += p;
        acc[bin].1 += x * p;
        acc[bin].2 += x * x * p;
    }
    let stats = |(w, sx, sxx): (f64, f64, f64)| {
        if w <= 0.0 {
            None
        } else {
            let mean = sx / w;
            Some(BinStats {
                weight: w,
                mean,
                variance: (sxx / w - mean * mean).max(0.0),
            })
        }
    };
    Ok(BinnedStats {
        dead: stats(acc[0]),
        alive: stats(acc[1]),
    })
}

/// A classical probabilistic mixture Σ_i P_i |ψ_i⟩⟨ψ_i| of pure components.
#[derive(Debug, Clone)]
pub struct MixtureSpec {
    components: Vec<(f64, FockVector)>,
}

impl MixtureSpec {
    pub fn new(components: Vec<(f64, FockVector)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("mixture needs at least one component"));
        }
        let modes = components[0].1.modes();
        if components.iter().any(|(_, s)| s.modes() != modes) {
            return Err(Error::invalid("mixture components differ in mode count"));
        }
        if let Some((w, _)) = components.iter().find(|(w, _)| *w < 0.0) {
            return Err(Error::invalid(format!("negative mixture weight {w}")));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(MixtureSpec { components })
    }

    pub fn components(&self) -> &[(f64, FockVector)] {
        &self.components
    }

    pub fn modes(&self) -> usize {
        self.components[0].1.modes()
    }

    pub fn max_cutoff(&self) -> usize {
        self.components.iter().map(|(_, s)| s.cutoff()).max().unwrap()
    }
}

/// Σ_i P_i ⟨O⟩_i over mixture components; used to build negative controls.
pub fn mixture_expectation(spec: &MixtureSpec, ops: &[&ModeOperator]) -> Result<Complex64> {
    if ops.len() != spec.modes() {
        return Err(Error::invalid(format!(
            "expectation needs one operator per mode: got {} for a {}-mode mixture",
            ops.len(),
            spec.modes()
        )));
    }
    let cutoff = ops[0].cutoff();
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, state) in &spec.components {
        let embedded = state.embed(cutoff)?;
        acc += expectation(&embedded, ops)? * *w;
    }
    Ok(acc)
}

/// Everything the variance-product test reports for one state or mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeIReport {
    /// Σ_i (Δn̂)_i² over present bins.
    pub within_bin_variance_sum: f64,
    /// Σ_i P_i (Δn̂)_i², the weighted variant from the concavity route.
    pub weighted_variant: f64,
    /// (ΔP̂^N)² on the full state.
    pub var_pn: f64,
    /// ⟨Ĉ⟩ with Ĉ = [n̂, P̂^N] (anti-Hermitian, so essentially imaginary).
    pub commutator_mean: Complex64,
    /// within_bin_variance_sum × var_pn.
    pub lhs: f64,
    /// |⟨Ĉ⟩|²/4.
    pub rhs: f64,
    pub violated: bool,
}

impl TypeIReport {
    /// weighted_variant × var_pn, the weighted-sum analogue of `lhs`.
    pub fn lhs_weighted(&self) -> f64 {
        self.weighted_variant * self.var_pn
    }
}

const TYPE_ONE_TAIL_TOL: f64 = 1e-10;

/// Variance-product test for a pure single-mode state.
///
/// `headroom` is the number of extra levels appended above the state's
/// cutoff for the operator workspace; P̂ couples |n⟩→|n±1⟩, so `2*power` is
/// enough for P̂^N and its square to act faithfully. Too little headroom is
/// detected by probability mass reaching the workspace ceiling and reported
/// as non-convergence carrying that mass.
pub fn type_one_statistic(
    state: &FockVector,
    rule: &BinRule,
    power: usize,
    headroom: usize,
) -> Result<TypeIReport> {
    let spec = MixtureSpec::new(vec![(1.0, state.clone())])?;
    type_one_statistic_mixture(&spec, rule, power, headroom)
}

/// Variance-product test for a classical mixture; such inputs must satisfy
/// the inequality whenever each component is confined to one bin.
pub fn type_one_statistic_mixture(
    spec: &MixtureSpec,
    rule: &BinRule,
    power: usize,
    headroom: usize,
) -> Result<TypeIReport> {
    if spec.modes() != 1 {
        return Err(Error::invalid(format!(
            "variance-product test expects single-mode states, got {} modes",
            spec.modes()
        )));
    }
    if power == 0 {
        return Err(Error::invalid("quadrature power must be >= 1"));
    }
    let work_cutoff = spec.max_cutoff() + headroom;
    let big_p = ModeOperator::quadrature_big_p(work_cutoff);
    let pn = big_p.pow(power);
    let number = ModeOperator::number(work_cutoff);
    let commutator = number.commutator(&pn)?;

    // Mixed number distribution over the original outcome axis.
    let mut dist = vec![0.0f64; spec.max_cutoff() + 1];
    let mut mean_pn = Complex64::new(0.0, 0.0);
    let mut mean_pn2 = Complex64::new(0.0, 0.0);
    let mut mean_c = Complex64::new(0.0, 0.0);
    for (w, state) in spec.components() {
        for (n, a) in state.amplitudes().iter().enumerate() {
            dist[n] += w * a.norm_sqr();
        }
        let embedded = state.embed(work_cutoff)?;
        let phi = pn.apply_to_mode(&embedded, 0)?;
        // Mass at the workspace ceiling means the power was truncated.
        let phi_norm2: f64 = phi.iter().map(|a| a.norm_sqr()).sum();
        let top_mass: f64 = phi[work_cutoff.saturating_sub(power.saturating_sub(1))..]
            .iter()
            .map(|a| a.norm_sqr())
            .sum();
        if phi_norm2 > 0.0 && top_mass / phi_norm2 > TYPE_ONE_TAIL_TOL {
            return Err(Error::non_convergence(
                format!(
                    "quadrature power {power} reaches the workspace ceiling at cutoff {work_cutoff}; \
                     increase headroom"
                ),
                top_mass / phi_norm2,
            ));
        }
        let amp = embedded.amplitudes();
        let dot = |v: &[Complex64]| -> Complex64 {
            amp.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
        };
        mean_pn += dot(&phi) * *w;
        mean_pn2 += Complex64::new(phi_norm2, 0.0) * *w;
        mean_c += dot(&commutator.apply_to_mode(&embedded, 0)?) * *w;
    }

    let outcome_dist: Vec<(f64, f64)> = dist
        .iter()
        .enumerate()
        .map(|(n, p)| (n as f64, *p))
        .collect();
    let binned = binned_conditional_stats(&outcome_dist, rule)?;

    let var_pn = (mean_pn2.re - mean_pn.norm_sqr()).max(0.0);
    let within = binned.variance_sum();
    let weighted = binned.weighted_variance_sum();
    let lhs = within * var_pn;
    let rhs = mean_c.norm_sqr() / 4.0;
    Ok(TypeIReport {
        within_bin_variance_sum: within,
        weighted_variant: weighted,
        var_pn,
        commutator_mean: mean_c,
        lhs,
        rhs,
        violated: lhs < rhs - 1e-12,
    })
}

/// ⟨â†^N b̂^N⟩ by sparse ladder application on a two-mode state.
///
/// The double sum is exact on the truncated state; a state intended as a
/// truncation of something larger is flagged as non-converged when it
/// carries mass within N of the cutoff, since the moment of the untruncated
/// state would then differ.
pub fn noon_moment(state: &FockVector, n: usize) -> Result<Complex64> {
    if state.modes() != 2 {
        return Err(Error::invalid(format!(
            "coherence moment expects a 2-mode state, got {} modes",
            state.modes()
        )));
    }
    if n == 0 {
        return Err(Error::invalid("moment order must be >= 1"));
    }
    let cutoff = state.cutoff();
    if cutoff < n {
        return Err(Error::non_convergence(
            format!("cutoff {cutoff} below moment order {n}"),
            1.0,
        ));
    }
    let edge_mass = state.mass_above(cutoff - n);
    if edge_mass > 1e-10 {
        return Err(Error::non_convergence(
            format!("state carries mass within {n} levels of cutoff {cutoff}"),
            edge_mass,
        ));
    }
    Ok(noon_moment_unchecked(state, n))
}

fn noon_moment_unchecked(state: &FockVector, n: usize) -> Complex64 {
    let cutoff = state.cutoff();
    let d = cutoff + 1;
    let lnf = ln_factorial_table(cutoff);
    let amps = state.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    // ⟨ψ| â†^N b̂^N |ψ⟩ = Σ ψ*(na, nb) · f(na, nb) · ψ(na−N, nb+N)
    // with f = √(na!/(na−N)!) · √((nb+N)!/nb!).
    for na in n..d {
        for nb in 0..d.saturating_sub(n) {
            let bra = amps[na + nb * d];
            let ket = amps[(na - n) + (nb + n) * d];
            if bra.norm_sqr() == 0.0 || ket.norm_sqr() == 0.0 {
                continue;
            }
            let ln_f = 0.5 * (lnf[na] - lnf[na - n]) + 0.5 * (lnf[nb + n] - lnf[nb]);
            acc += bra.conj() * ket * ln_f.exp();
        }
    }
    acc
}

/// Mixture version of [`noon_moment`]; the incoherent counterpart of a NOON
/// state gives exactly zero.
pub fn noon_moment_mixture(spec: &MixtureSpec, n: usize) -> Result<Complex64> {
    if spec.modes() != 2 {
        return Err(Error::invalid(format!(
            "coherence moment expects 2-mode states, got {} modes",
            spec.modes()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, state) in spec.components() {
        acc += noon_moment(state, n)? * *w;
    }
    Ok(acc)
}
