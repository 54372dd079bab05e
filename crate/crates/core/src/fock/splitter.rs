//! Passive two-mode transformations on truncated Fock states.
//!
//! A 2×2 unitary mode map (ĉ_1; ĉ_2) = M (â_1; â_2) lifts to the two-mode
//! Fock space through â_i† = Σ_k M_{ki} ĉ_k†: a basis state
//! |n,m⟩_a = â_1†ⁿ â_2†ᵐ |0⟩ / √(n! m!) becomes the same polynomial in the
//! output-mode creation operators acting on the shared vacuum. The
//! transformation conserves total photon number, so an output per-mode
//! cutoff of n+m is lossless.

use super::FockVector;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// out += scale · (c_0† coefficient `k0` + c_1† coefficient `k1`) applied to
/// `src`, on a dense (d × d) two-mode grid stored row-major as
/// grid[j0 * d + j1].
fn raise(src: &[Complex64], d: usize, k0: Complex64, k1: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    let roots: Vec<f64> = (0..d).map(|j| (j as f64).sqrt()).collect();
    if k0.norm_sqr() > 0.0 {
        for j0 in 1..d {
            let f = k0 * roots[j0];
            let (dst, srcrow) = (j0 * d, (j0 - 1) * d);
            for j1 in 0..d {
                out[dst + j1] += f * src[srcrow + j1];
            }
        }
    }
    if k1.norm_sqr() > 0.0 {
        for j0 in 0..d {
            let row = j0 * d;
            for j1 in 1..d {
                out[row + j1] += k1 * roots[j1] * src[row + j1 - 1];
            }
        }
    }
    out
}

/// Applies the linear combination α ĉ_0† + β ĉ_1† once; shared by the beam
/// splitter and the amplified-measurement builder.
pub(crate) fn apply_raising_combination(
    grid: &[Complex64],
    d: usize,
    coeff_c0: Complex64,
    coeff_c1: Complex64,
) -> Vec<Complex64> {
    raise(grid, d, coeff_c0, coeff_c1)
}

/// Transforms a two-mode state through the mode map `m` (rows = output
/// modes, columns = input modes), returning amplitudes over the output
/// Fock basis at per-mode cutoff `out_cutoff`.
///
/// `out_cutoff` must be at least twice the input cutoff for the map to be
/// lossless on every input basis state.
pub(crate) fn apply_two_mode_map(
    input: &FockVector,
    m: &[[Complex64; 2]; 2],
    out_cutoff: usize,
) -> Result<FockVector> {
    if input.modes() != 2 {
        return Err(Error::invalid(format!(
            "two-mode map expects a 2-mode state, got {} modes",
            input.modes()
        )));
    }
    let c_in = input.cutoff();
    let d_in = c_in + 1;
    let d = out_cutoff + 1;

    // Column i of m gives the output-creation coefficients of â_i†.
    let a1 = (m[0][0], m[1][0]);
    let a2 = (m[0][1], m[1][1]);

    // v[n] = Σ_m ψ(n,m) (Â_2†)^m |0⟩ / √(m!), accumulated in one sweep of
    // raising applications.
    let mut v: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); d * d]; d_in];
    let mut w = vec![Complex64::new(0.0, 0.0); d * d];
    w[0] = Complex64::new(1.0, 0.0);
    for mm in 0..d_in {
        if mm > 0 {
            w = raise(&w, d, a2.0, a2.1);
            let s = 1.0 / (mm as f64).sqrt();
            for x in w.iter_mut() {
                *x *= s;
            }
        }
        for n in 0..d_in {
            let amp = input.amplitudes()[n + mm * d_in];
            if amp.norm_sqr() > 0.0 {
                for (dst, src) in v[n].iter_mut().zip(&w) {
                    *dst += amp * src;
                }
            }
        }
    }

    // Horner accumulation over Â_1† powers: acc = v[c]; acc = Â_1† acc/√(n+1) + v[n].
    let mut acc = v.pop().unwrap();
    for n in (0..d_in - 1).rev() {
        let mut raised = raise(&acc, d, a1.0, a1.1);
        let s = 1.0 / ((n + 1) as f64).sqrt();
        for (x, vn) in raised.iter_mut().zip(&v[n]) {
            *x = *x * s + vn;
        }
        acc = raised;
    }

    // Output grid index [j0 * d + j1] -> little-endian flat index j0 + j1*d.
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for j0 in 0..d {
        for j1 in 0..d {
            amps[j0 + j1 * d] = acc[j0 * d + j1];
        }
    }
    Ok(FockVector::from_normalized(out_cutoff, 2, amps))
}

/// 50/50 beam splitter sending the input modes (â_1, â_2) to
/// ĉ_+ = (â_1 + â_2)/√2 and ĉ_− = (−â_1 + â_2)/√2.
///
/// The output keeps every total-photon sector, so its per-mode cutoff is
/// twice the input cutoff; norm and the total photon number distribution are
/// preserved exactly.
pub fn beam_splitter_5050(input: &FockVector) -> Result<FockVector> {
    if input.modes() != 2 {
        return Err(Error::invalid(format!(
            "beam splitter expects a 2-mode state, got {} modes",
            input.modes()
        )));
    }
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let m = [[s, s], [-s, s]];
    apply_two_mode_map(input, &m, 2 * input.cutoff())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn total_number_distribution(s: &FockVector) -> Vec<f64> {
        let d = s.dim();
        let mut dist = vec![0.0; 2 * d];
        for (i, a) in s.amplitudes().iter().enumerate() {
            let (n0, n1) = (i % d, i / d);
            dist[n0 + n1] += a.norm_sqr();
        }
        dist
    }

    #[test]
    fn vacuum_is_invariant() {
        let v = FockVector::vacuum(3, 2);
        let out = beam_splitter_5050(&v).unwrap();
        assert_abs_diff_eq!(out.amplitude(&[0, 0]).re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(out.squared_norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn single_photon_splits_with_operator_algebra_sign() {
        // â_1† = (ĉ_+† − ĉ_−†)/√2, so |1,0⟩ → (|1,0⟩ − |0,1⟩)/√2.
        let s = FockVector::basis(2, &[1, 0]).unwrap();
        let out = beam_splitter_5050(&s).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(out.amplitude(&[1, 0]).re, r, epsilon = 1e-14);
        assert_abs_diff_eq!(out.amplitude(&[0, 1]).re, -r, epsilon = 1e-14);
        // â_2† = (ĉ_+† + ĉ_−†)/√2.
        let s = FockVector::basis(2, &[0, 1]).unwrap();
        let out = beam_splitter_5050(&s).unwrap();
        assert_abs_diff_eq!(out.amplitude(&[1, 0]).re, r, epsilon = 1e-14);
        assert_abs_diff_eq!(out.amplitude(&[0, 1]).re, r, epsilon = 1e-14);
    }

    #[test]
    fn hong_ou_mandel_pair() {
        // |1,1⟩ → (|2,0⟩ − |0,2⟩)/√2: a_1†a_2† = (c_+†² − c_−†²)/2.
        let s = FockVector::basis(2, &[1, 1]).unwrap();
        let out = beam_splitter_5050(&s).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(out.amplitude(&[2, 0]).re, r, epsilon = 1e-14);
        assert_abs_diff_eq!(out.amplitude(&[0, 2]).re, -r, epsilon = 1e-14);
        assert_abs_diff_eq!(out.amplitude(&[1, 1]).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_wrong_mode_count() {
        let s = FockVector::vacuum(3, 1);
        assert!(beam_splitter_5050(&s).is_err());
    }

    #[test]
    fn norm_and_total_number_preserved() {
        // A fully filled normalized random-ish state.
        let d = 4usize;
        let mut amps = Vec::with_capacity(d * d);
        for i in 0..d * d {
            let ph = 0.37 * i as f64;
            amps.push(Complex64::from_polar(1.0 + (i % 3) as f64, ph));
        }
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        for a in amps.iter_mut() {
            *a /= Complex64::new(n2.sqrt(), 0.0);
        }
        let s = FockVector::new(d - 1, 2, amps).unwrap();
        let out = beam_splitter_5050(&s).unwrap();
        assert_abs_diff_eq!(out.squared_norm(), 1.0, epsilon = 1e-10);

        let din = total_number_distribution(&s);
        let dout = total_number_distribution(&out);
        for (t, p) in din.iter().enumerate() {
            assert_abs_diff_eq!(dout[t], p, epsilon = 1e-12);
        }
    }

    #[test]
    fn coherent_inputs_transform_as_coherent_outputs() {
        // |β⟩|γ⟩ → |(β+γ)/√2⟩ |(−β+γ)/√2⟩ up to truncation.
        let beta = Complex64::new(0.8, 0.3);
        let gamma = Complex64::new(-0.4, 0.6);
        let cutoff = 14;
        let (cb, _) = FockVector::coherent(beta, cutoff);
        let (cg, _) = FockVector::coherent(gamma, cutoff);
        let mut amps = vec![Complex64::new(0.0, 0.0); (cutoff + 1) * (cutoff + 1)];
        for n in 0..=cutoff {
            for m in 0..=cutoff {
                amps[n + m * (cutoff + 1)] = cb.amplitudes()[n] * cg.amplitudes()[m];
            }
        }
        let joint = FockVector::new(cutoff, 2, amps).unwrap();
        let out = beam_splitter_5050(&joint).unwrap();

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (tb, _) = FockVector::coherent((beta + gamma) * s, 2 * cutoff);
        let (tg, _) = FockVector::coherent((-beta + gamma) * s, 2 * cutoff);
        let d = 2 * cutoff + 1;
        let mut target = vec![Complex64::new(0.0, 0.0); d * d];
        for n in 0..d {
            for m in 0..d {
                target[n + m * d] = tb.amplitudes()[n] * tg.amplitudes()[m];
            }
        }
        let target = FockVector::from_normalized(2 * cutoff, 2, target);
        let fid = out.fidelity(&target).unwrap();
        assert!(fid > 1.0 - 1e-6, "fidelity {fid}");
    }
}
