//! Exact multi-qubit GHZ simulation, Svetlichny operator expectations, and a
//! deterministic-strategy solver certifying the hybrid local-hidden-variable
//! bound 2^{N−1}.
//!
//! Basis convention: basis index bit k encodes site k's σ_Z eigenvalue, with
//! bit value 0 ↔ ↑. Dense storage caps N at 14; above that the closed forms
//! are reported with an explicit method flag.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Largest site count for dense amplitude storage.
pub const MAX_DENSE_SITES: usize = 14;

type Mat2 = [[Complex64; 2]; 2];

/// Complex amplitude array over N spin-1/2 sites.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitRegisterState {
    n_sites: usize,
    amplitudes: Vec<Complex64>,
}

impl QubitRegisterState {
    pub fn new(n_sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_DENSE_SITES {
            return Err(Error::invalid(format!(
                "site count {n_sites} outside dense range 1..={MAX_DENSE_SITES}"
            )));
        }
        if amplitudes.len() != 1 << n_sites {
            return Err(Error::invalid(format!(
                "amplitude array length {} != 2^{n_sites}",
                amplitudes.len()
            )));
        }
        let n2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "state is not normalized: squared norm {n2}"
            )));
        }
        Ok(QubitRegisterState {
            n_sites,
            amplitudes,
        })
    }

    /// |↑⟩^{⊗N}.
    pub fn all_up(n_sites: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_sites];
        amps[0] = Complex64::new(1.0, 0.0);
        QubitRegisterState::new(n_sites, amps)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &[Complex64]) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// (|↑⟩^{⊗N} − |↓⟩^{⊗N})/√2.
pub fn make_ghz(n: usize) -> Result<QubitRegisterState> {
    if !(2..=MAX_DENSE_SITES).contains(&n) {
        return Err(Error::invalid(format!(
            "GHZ site count {n} outside supported range 2..={MAX_DENSE_SITES}"
        )));
    }
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    amps[0] = Complex64::new(s, 0.0);
    amps[dim - 1] = Complex64::new(-s, 0.0);
    QubitRegisterState::new(n, amps)
}

/// A measurement direction in the equatorial plane at one site:
/// σ_θ = σ_X cosθ + σ_Y sinθ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteSetting {
    pub site: usize,
    pub angle: f64,
}

impl SiteSetting {
    /// Normalizes the angle into [0, 2π).
    pub fn new(site: usize, angle: f64) -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        let mut a = angle % tau;
        if a < 0.0 {
            a += tau;
        }
        SiteSetting { site, angle: a }
    }
}

/// σ_θ in the {↑, ↓} basis.
pub fn sigma_theta(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [
        [Complex64::new(0.0, 0.0), Complex64::new(c, -s)],
        [Complex64::new(c, s), Complex64::new(0.0, 0.0)],
    ]
}

/// Applies a (not necessarily unitary) single-site 2×2 operator to raw
/// amplitudes in place of site `site`.
fn apply_single_site(amps: &mut [Complex64], site: usize, m: &Mat2) {
    let mask = 1usize << site;
    for idx in 0..amps.len() {
        if idx & mask == 0 {
            let partner = idx | mask;
            let a0 = amps[idx];
            let a1 = amps[partner];
            amps[idx] = m[0][0] * a0 + m[0][1] * a1;
            amps[partner] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// ⟨∏_j σ_{θ_j}⟩ over an explicit list of site settings (each site at most
/// once); Hermitian product, so the result is reported as its real part.
pub fn correlator(state: &QubitRegisterState, settings: &[SiteSetting]) -> Result<f64> {
    let mut seen = vec![false; state.n_sites()];
    let mut work = state.amplitudes().to_vec();
    for s in settings {
        if s.site >= state.n_sites() {
            return Err(Error::invalid(format!(
                "site {} out of range for {} sites",
                s.site,
                state.n_sites()
            )));
        }
        if seen[s.site] {
            return Err(Error::invalid(format!("site {} listed twice", s.site)));
        }
        seen[s.site] = true;
        apply_single_site(&mut work, s.site, &sigma_theta(s.angle));
    }
    Ok(state.inner(&work).re)
}

/// ⟨Π_N⟩ for the Svetlichny operator Π_N = [∏_{j<N−1} (σ_X + iσ_Y)^{(j)}] ·
/// (σ_{π/4} + iσ_{3π/4})^{(N−1)}.
pub fn svetlichny_expectation(state: &QubitRegisterState) -> Result<Complex64> {
    let n = state.n_sites();
    if n < 2 {
        return Err(Error::invalid("Svetlichny operator needs at least 2 sites"));
    }
    let i = Complex64::new(0.0, 1.0);
    let mut plain: Mat2 = sigma_theta(0.0);
    let sy = sigma_theta(std::f64::consts::FRAC_PI_2);
    for r in 0..2 {
        for c in 0..2 {
            plain[r][c] += i * sy[r][c];
        }
    }
    let mut last: Mat2 = sigma_theta(std::f64::consts::FRAC_PI_4);
    let s3 = sigma_theta(3.0 * std::f64::consts::FRAC_PI_4);
    for r in 0..2 {
        for c in 0..2 {
            last[r][c] += i * s3[r][c];
        }
    }

    let mut work = state.amplitudes().to_vec();
    for site in 0..n - 1 {
        apply_single_site(&mut work, site, &plain);
    }
    apply_single_site(&mut work, n - 1, &last);
    Ok(state.inner(&work))
}

/// The Svetlichny statistic |⟨ReΠ_N⟩| + |⟨ImΠ_N⟩|.
///
/// Both quadratures of ⟨Π_N⟩ obey the hidden-variable bound with either
/// sign, so the statistic compares against the same hybrid bound 2^{N−1}
/// while being insensitive to the relative phase between the state's two
/// branches. The GHZ state reaches 2^{N−1/2}.
pub fn svetlichny_value(state: &QubitRegisterState) -> Result<f64> {
    let z = svetlichny_expectation(state)?;
    Ok(z.re.abs() + z.im.abs())
}

/// Evaluation route recorded in a [`SvetlichnyReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    /// Dense state-vector computation.
    Dense,
    /// Closed forms 2^{N−1/2} and 2^{N−1}, used above the dense-storage cap.
    ClosedForm,
}

/// Quantum value, hybrid bound, and verdict for one (N, k) instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SvetlichnyReport {
    pub n: usize,
    pub bipartition_k: usize,
    pub quantum_value: f64,
    pub hybrid_bound: f64,
    pub violated: bool,
    pub method: EvalMethod,
}

/// Maximum of ⟨ReΠ_N⟩ + ⟨ImΠ_N⟩ over deterministic hybrid strategies that
/// factor across the C|S bipartition (first N−k sites | last k sites).
///
/// Within each side the only constraints are the algebraic box bounds
/// |ReΠ_M|, |ImΠ_M| ≤ 2^{M−1}; across the cut the product rule applies. The
/// objective Re_C·Re_S − Im_C·Im_S + Re_C·Im_S + Im_C·Re_S is bilinear, so
/// mixtures cannot beat box vertices and enumeration of the 16 sign choices
/// is exact. The result is 2^{N−1} for every k.
pub fn hybrid_bound(n: usize, k: usize) -> Result<f64> {
    Ok(hybrid_bound_vertices(n, k)?
        .into_iter()
        .fold(f64::NEG_INFINITY, |acc, (v, _)| acc.max(v)))
}

/// All 16 vertex evaluations (objective value, [Re_C, Im_C, Re_S, Im_S]).
pub(crate) fn hybrid_bound_vertices(n: usize, k: usize) -> Result<Vec<(f64, [f64; 4])>> {
    if n < 2 {
        return Err(Error::invalid("bipartition needs at least 2 sites"));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::invalid(format!(
            "bipartition k = {k} outside 1..={} for N = {n}",
            n - 1
        )));
    }
    let bc = (2.0f64).powi((n - k) as i32 - 1);
    let bs = (2.0f64).powi(k as i32 - 1);
    let mut out = Vec::with_capacity(16);
    for signs in 0..16u32 {
        let sgn = |b: u32| if signs >> b & 1 == 0 { 1.0 } else { -1.0 };
        let (rc, ic, rs, is) = (sgn(0) * bc, sgn(1) * bc, sgn(2) * bs, sgn(3) * bs);
        let value = rc * rs - ic * is + rc * is + ic * rs;
        out.push((value, [rc, ic, rs, is]));
    }
    Ok(out)
}

/// Conditional correlation P(collective σ_Z of C = N−k | collective σ_Z of
/// S = k) for an arbitrary state, with C the first N−k sites.
pub fn conditional_collective_correlation(state: &QubitRegisterState, k: usize) -> Result<f64> {
    let n = state.n_sites();
    if k < 1 || k >= n {
        return Err(Error::invalid(format!(
            "bipartition k = {k} outside 1..={} for N = {n}",
            n - 1
        )));
    }
    let c_sites = n - k;
    let c_mask = (1usize << c_sites) - 1;
    let mut p_joint = 0.0;
    let mut p_cond = 0.0;
    for (idx, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        // bit value 0 ↔ ↑ contributes +1 to the collective spin
        let c_down = (idx & c_mask).count_ones() as usize;
        let s_down = (idx >> c_sites).count_ones() as usize;
        let s_total = k as isize - 2 * s_down as isize;
        if s_total == k as isize {
            p_cond += p;
            let c_total = c_sites as isize - 2 * c_down as isize;
            if c_total == c_sites as isize {
                p_joint += p;
            }
        }
    }
    if p_cond == 0.0 {
        return Err(Error::invalid(
            "conditioning event (collective spin of S at its maximum) has zero probability",
        ));
    }
    Ok(p_joint / p_cond)
}

/// The GHZ perfect-correlation check: must equal 1 exactly.
pub fn bipartition_inference_check(n: usize, k: usize) -> Result<f64> {
    let ghz = make_ghz(n)?;
    conditional_collective_correlation(&ghz, k)
}

/// Dense evaluation up to [`MAX_DENSE_SITES`], closed forms above.
pub fn svetlichny_report(n: usize, k: usize) -> Result<SvetlichnyReport> {
    if n < 2 {
        return Err(Error::invalid("Svetlichny test needs at least 2 sites"));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::invalid(format!(
            "bipartition k = {k} outside 1..={} for N = {n}",
            n - 1
        )));
    }
    let (quantum_value, hybrid, method) = if n <= MAX_DENSE_SITES {
        let state = make_ghz(n)?;
        (svetlichny_value(&state)?, hybrid_bound(n, k)?, EvalMethod::Dense)
    } else {
        (
            (2.0f64).powf(n as f64 - 0.5),
            (2.0f64).powi(n as i32 - 1),
            EvalMethod::ClosedForm,
        )
    };
    Ok(SvetlichnyReport {
        n,
        bipartition_k: k,
        quantum_value,
        hybrid_bound: hybrid,
        violated: quantum_value > hybrid + 1e-9,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ghz_structure() {
        let g = make_ghz(3).unwrap();
        let nz: Vec<_> = g
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .collect();
        assert_eq!(nz.len(), 2);
        assert_eq!(nz[0].0, 0);
        assert_eq!(nz[1].0, 7);
        assert_abs_diff_eq!((nz[0].1 + nz[1].1).norm(), 0.0, epsilon = 1e-15);
        assert!(make_ghz(1).is_err());
        assert!(make_ghz(15).is_err());
    }

    #[test]
    fn ghz_two_sites_matches_bell_form() {
        let g = make_ghz(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(g.amplitudes()[0].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(g.amplitudes()[3].re, -s, epsilon = 1e-15);
    }

    #[test]
    fn svetlichny_value_matches_closed_form() {
        for n in 2..=10 {
            let v = svetlichny_value(&make_ghz(n).unwrap()).unwrap();
            assert_abs_diff_eq!(v, (2.0f64).powf(n as f64 - 0.5), epsilon = 1e-9);
        }
    }

    #[test]
    fn svetlichny_two_and_three_site_instances() {
        let v2 = svetlichny_value(&make_ghz(2).unwrap()).unwrap();
        assert_abs_diff_eq!(v2, 2.828427, epsilon = 1e-6);
        let v3 = svetlichny_value(&make_ghz(3).unwrap()).unwrap();
        assert_abs_diff_eq!(v3, 5.656854, epsilon = 1e-6);
    }

    #[test]
    fn svetlichny_vanishes_on_product_state() {
        for n in 2..=6 {
            let up = QubitRegisterState::all_up(n).unwrap();
            assert_abs_diff_eq!(svetlichny_value(&up).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn svetlichny_invariant_under_global_phase() {
        let g = make_ghz(5).unwrap();
        let ph = Complex64::from_polar(1.0, 1.2345);
        let rotated = QubitRegisterState::new(
            5,
            g.amplitudes().iter().map(|a| a * ph).collect(),
        )
        .unwrap();
        assert_abs_diff_eq!(
            svetlichny_value(&g).unwrap(),
            svetlichny_value(&rotated).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn hybrid_bound_closed_form_for_all_bipartitions() {
        for n in 2..=10 {
            for k in 1..n {
                let b = hybrid_bound(n, k).unwrap();
                assert_abs_diff_eq!(b, (2.0f64).powi(n as i32 - 1), epsilon = 1e-12);
            }
        }
        assert!(hybrid_bound(4, 0).is_err());
        assert!(hybrid_bound(4, 4).is_err());
    }

    #[test]
    fn hybrid_bound_vertex_enumeration_instance() {
        // N=5, k=2: 16-vertex maximum equals 2^{N−1} = 16.
        let verts = hybrid_bound_vertices(5, 2).unwrap();
        assert_eq!(verts.len(), 16);
        let best = verts.iter().cloned().fold(f64::NEG_INFINITY, |a, (v, _)| a.max(v));
        assert_abs_diff_eq!(best, 16.0, epsilon = 1e-12);
    }

    #[test]
    fn per_side_sum_constraint_inactive_at_optimum() {
        // Every box vertex already satisfies the extra algebraic constraint
        // ReΠ_M + ImΠ_M ≤ 2^M (the extreme corners with equality), so adding
        // it to the solver cannot lower the bound.
        for (n, k) in [(4, 1), (5, 2), (8, 3)] {
            let verts = hybrid_bound_vertices(n, k).unwrap();
            let best = verts.iter().cloned().fold(f64::NEG_INFINITY, |a, (v, _)| a.max(v));
            let mut feasible_best = f64::NEG_INFINITY;
            for (value, v) in &verts {
                assert!(v[0] + v[1] <= (2.0f64).powi((n - k) as i32) + 1e-12);
                assert!(v[2] + v[3] <= (2.0f64).powi(k as i32) + 1e-12);
                feasible_best = feasible_best.max(*value);
            }
            assert_abs_diff_eq!(best, feasible_best, epsilon = 1e-12);
        }
    }

    #[test]
    fn violation_ratio_is_sqrt_two() {
        for n in 2..=10 {
            let r = svetlichny_report(n, 1).unwrap();
            assert!(r.violated);
            assert_abs_diff_eq!(
                r.quantum_value / r.hybrid_bound,
                std::f64::consts::SQRT_2,
                epsilon = 1e-9
            );
            assert_eq!(r.method, EvalMethod::Dense);
        }
    }

    #[test]
    fn closed_form_above_dense_cap() {
        let r = svetlichny_report(20, 7).unwrap();
        assert_eq!(r.method, EvalMethod::ClosedForm);
        assert_abs_diff_eq!(r.quantum_value, (2.0f64).powf(19.5), epsilon = 1e-3);
        assert_abs_diff_eq!(r.hybrid_bound, (2.0f64).powi(19), epsilon = 1e-6);
        assert!(r.violated);
    }

    #[test]
    fn inference_check_is_exact_for_ghz() {
        assert_eq!(bipartition_inference_check(4, 1).unwrap(), 1.0);
        assert_eq!(bipartition_inference_check(3, 2).unwrap(), 1.0);
        for n in 2..=8 {
            for k in 1..n {
                assert_eq!(bipartition_inference_check(n, k).unwrap(), 1.0);
            }
        }
        assert!(bipartition_inference_check(4, 0).is_err());
    }

    #[test]
    fn inference_check_on_deterministic_product_state() {
        // |↑⟩^{⊗N}: the conditional is 1 but the unconditional S-distribution
        // is a single outcome.
        let up = QubitRegisterState::all_up(4).unwrap();
        assert_eq!(conditional_collective_correlation(&up, 2).unwrap(), 1.0);
    }

    #[test]
    fn correlator_of_rotated_paulis_on_ghz() {
        // ⟨σ_θ1 σ_θ2⟩ on the two-site GHZ (|↑↑⟩−|↓↓⟩)/√2 is −cos(θ1+θ2).
        let g = make_ghz(2).unwrap();
        for (t1, t2) in [(0.0, 0.0), (0.3, 0.9), (1.1, 5.0)] {
            let got = correlator(
                &g,
                &[SiteSetting::new(0, t1), SiteSetting::new(1, t2)],
            )
            .unwrap();
            assert_abs_diff_eq!(got, -(t1 + t2).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn site_setting_normalizes_angle() {
        let s = SiteSetting::new(0, -1.0);
        assert!(s.angle >= 0.0 && s.angle < 2.0 * std::f64::consts::PI);
        assert_abs_diff_eq!(s.angle, 2.0 * std::f64::consts::PI - 1.0, epsilon = 1e-12);
    }
}
