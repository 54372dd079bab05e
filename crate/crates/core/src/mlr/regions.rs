//! Three-region joint probability tables and the modified CHSH combination
//! built from correlator bounds.
//!
//! For a middle region of half-width δ the correlator K is no longer
//! directly measurable, but P_1 ≤ P_− ≤ P_1 + P_0 (and likewise for P_+)
//! sandwich it:
//!
//!   K_lower = P_{2,2} + P_{1,1} − P_{10,20} − P_{20,10}
//!   K_upper = P_{20,20} + P_{10,10} − P_{1,2} − P_{2,1}
//!
//! where P_{20,10} is the joint probability of regions {2,0} at one site and
//! {1,0} at the other. The modified combination keeps the CHSH sign pattern
//! and takes the bound that weakens each term:
//!
//!   E_δ = K_{θφ}^lower − K_{θφ′}^upper + K_{θ′φ}^lower + K_{θ′φ′}^lower ≤ 2.

use super::{JointOutcomeDistribution, RegionBinning};
use crate::error::{Error, Result};

/// Outcome region: Lower is the paper-style region 1 ("dead", outcome ≤ −δ),
/// Middle is region 0, Upper is region 2 ("alive", outcome ≥ +δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Lower,
    Middle,
    Upper,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::Lower, Region::Middle, Region::Upper];

    pub fn index(self) -> usize {
        match self {
            Region::Lower => 0,
            Region::Middle => 1,
            Region::Upper => 2,
        }
    }
}

/// Nine-cell joint region table for one setting pair, tagged with the δ it
/// was binned at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionTable {
    pub delta: f64,
    /// cells[a][b] indexed by [`Region::index`] (A rows, B columns).
    pub cells: [[f64; 3]; 3],
}

impl RegionTable {
    pub fn cell(&self, a: Region, b: Region) -> f64 {
        self.cells[a.index()][b.index()]
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().flatten().sum()
    }

    /// Joint probability of A in `a_set` and B in `b_set`.
    pub fn union(&self, a_set: &[Region], b_set: &[Region]) -> f64 {
        let mut acc = 0.0;
        for &a in a_set {
            for &b in b_set {
                acc += self.cell(a, b);
            }
        }
        acc
    }

    /// Marginal region probability at site A.
    pub fn marginal_a(&self, r: Region) -> f64 {
        self.cells[r.index()].iter().sum()
    }

    /// Marginal region probability at site B.
    pub fn marginal_b(&self, r: Region) -> f64 {
        self.cells.iter().map(|row| row[r.index()]).sum()
    }

    /// Largest middle-region marginal across both sites.
    pub fn p0_max(&self) -> f64 {
        self.marginal_a(Region::Middle).max(self.marginal_b(Region::Middle))
    }

    /// K_lower = P_{2,2} + P_{1,1} − P_{10,20} − P_{20,10}.
    pub fn k_lower(&self) -> f64 {
        use Region::*;
        self.cell(Upper, Upper) + self.cell(Lower, Lower)
            - self.union(&[Lower, Middle], &[Upper, Middle])
            - self.union(&[Upper, Middle], &[Lower, Middle])
    }

    /// K_upper = P_{20,20} + P_{10,10} − P_{1,2} − P_{2,1}.
    pub fn k_upper(&self) -> f64 {
        use Region::*;
        self.union(&[Upper, Middle], &[Upper, Middle])
            + self.union(&[Lower, Middle], &[Lower, Middle])
            - self.cell(Lower, Upper)
            - self.cell(Upper, Lower)
    }
}

/// Bins a joint outcome distribution into the nine-cell region table plus
/// the union quantities derived from it.
pub fn region_probabilities(
    dist: &JointOutcomeDistribution,
    binning: &RegionBinning,
) -> RegionTable {
    let mut cells = [[0.0f64; 3]; 3];
    for (i, &x) in dist.x_values.iter().enumerate() {
        let ra = binning.classify(x).index();
        for (j, &y) in dist.y_values.iter().enumerate() {
            let rb = binning.classify(y).index();
            cells[ra][rb] += dist.mass[[i, j]];
        }
    }
    RegionTable {
        delta: binning.delta,
        cells,
    }
}

/// The modified CHSH outcome computed from four region tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedChsh {
    pub delta: f64,
    pub k_lower: [f64; 4],
    pub k_upper: [f64; 4],
    /// K^lower − K^upper + K^lower + K^lower over the pair order
    /// (θφ, θφ′, θ′φ, θ′φ′).
    pub e_delta: f64,
    pub violated: bool,
}

/// Combines four setting-pair tables (θφ, θφ′, θ′φ, θ′φ′ order) binned at a
/// common δ.
pub fn modified_chsh(tables: &[RegionTable; 4], binning: &RegionBinning) -> Result<ModifiedChsh> {
    for (i, t) in tables.iter().enumerate() {
        if (t.delta - binning.delta).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "table {i} was binned at delta = {}, expected {}",
                t.delta, binning.delta
            )));
        }
    }
    let k_lower = [0, 1, 2, 3].map(|i| tables[i].k_lower());
    let k_upper = [0, 1, 2, 3].map(|i| tables[i].k_upper());
    let e_delta = k_lower[0] - k_upper[1] + k_lower[2] + k_lower[3];
    Ok(ModifiedChsh {
        delta: binning.delta,
        k_lower,
        k_upper,
        e_delta,
        violated: e_delta > 2.0,
    })
}
