//! Photon-number-resolving detection with quantum efficiency η < 1: the
//! binomial-loss POVM, the second-order mixed output state it heralds,
//! and the resulting fidelity and detected probability.

use crate::error::{Error, Result};
use crate::hybrid::{
    build_hybrid, hybrid_overlap, success_probability, HybridState, ProbabilityMode,
};
use crate::numerics::{ln_binomial, SeriesConfig};
use crate::states::{
    mean_photons_sub, BeamSplitterSpec, DVQubit, ReducedSqueezing, SqueezingSpec,
};

/// Below this quantum efficiency the second-order mixture truncation degrades
/// noticeably; results are still produced but flagged.
pub const LOW_ETA_THRESHOLD: f64 = 0.3;

/// Photon-number-resolving detector with quantum efficiency η ∈ (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec {
    pub eta: f64,
}

impl DetectorSpec {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantum efficiency eta = {eta} outside (0, 1]"
            )));
        }
        Ok(Self { eta })
    }
}

/// Diagonal POVM element for reporting k photons: Π_k(n) = η^k C(n,k) (1-η)^{n-k}
/// for n ≥ k, zero below. Σ_k Π_k(n) = 1 exactly at every Fock level.
pub fn povm_element(k: u32, det: &DetectorSpec, truncation: usize) -> Vec<f64> {
    let eta = det.eta;
    let mut diag = vec![0.0; truncation + 1];
    for (n, d) in diag.iter_mut().enumerate().skip(k as usize) {
        *d = if eta == 1.0 {
            if n == k as usize {
                1.0
            } else {
                0.0
            }
        } else {
            (ln_binomial(n as u64, k as u64)
                + k as f64 * eta.ln()
                + (n - k as usize) as f64 * (1.0 - eta).ln())
            .exp()
        };
    }
    diag
}

/// The mixture a lossy k-photon click heralds, truncated at second order in
/// (1-η): the intended state plus leaked contributions from the true
/// outcomes k+1 and k+2.
#[derive(Debug, Clone)]
pub struct MixedHybridState {
    pub k: u32,
    /// (state, weight) for the true photon numbers k, k+1, k+2; weights sum
    /// to one.
    pub components: Vec<(HybridState, f64)>,
    /// Normalization g_k: 1 plus the two leakage coefficients.
    pub g: f64,
    pub flagged_low_eta: bool,
}

/// The j = 1, 2 leakage coefficients of the second-order mixture:
/// u1 = (1-η) B ⟨n_k⟩ N'_{k+1}/N'_k,
/// u2 = ((1-η)^2/2) B^2 ⟨n_k⟩⟨n_{k+1}⟩ N'_{k+2}/N'_k.
fn leakage_coefficients(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    norms: [f64; 3],
    k: u32,
    det: &DetectorSpec,
    cfg: &SeriesConfig,
) -> Result<(f64, f64)> {
    let reduced = ReducedSqueezing::from_specs(sq, bs);
    let n_k = mean_photons_sub(reduced, k, cfg)?;
    let n_k1 = mean_photons_sub(reduced, k + 1, cfg)?;
    let loss = 1.0 - det.eta;
    let u1 = loss * bs.b * n_k * norms[1] / norms[0];
    let u2 = 0.5 * loss * loss * bs.b * bs.b * n_k * n_k1 * norms[2] / norms[0];
    Ok((u1, u2))
}

/// Mixed state heralded by an inefficient k-photon click, to second order in
/// the detector loss.
pub fn mixed_output(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    qubit: &DVQubit,
    k: u32,
    det: &DetectorSpec,
    cfg: &SeriesConfig,
) -> Result<MixedHybridState> {
    let states = [
        build_hybrid(sq, bs, qubit, k, cfg)?,
        build_hybrid(sq, bs, qubit, k + 1, cfg)?,
        build_hybrid(sq, bs, qubit, k + 2, cfg)?,
    ];
    let norms = [states[0].norm, states[1].norm, states[2].norm];
    let (u1, u2) = leakage_coefficients(sq, bs, norms, k, det, cfg)?;
    let g = 1.0 + u1 + u2;
    let weights = [1.0 / g, u1 / g, u2 / g];
    let components = states.into_iter().zip(weights).collect();
    Ok(MixedHybridState {
        k,
        components,
        g,
        flagged_low_eta: det.eta < LOW_ETA_THRESHOLD,
    })
}

/// Overlap of the heralded mixture with the intended state:
/// Fid_k = (1 + u2 |⟨Δ_{k+2}|Δ_k⟩|^2) / g_k. The Δ_{k+1} term drops out
/// because neighbouring outcomes pair opposite parities.
pub fn fidelity(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    qubit: &DVQubit,
    k: u32,
    det: &DetectorSpec,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let target = build_hybrid(sq, bs, qubit, k, cfg)?;
    let leaked1 = build_hybrid(sq, bs, qubit, k + 1, cfg)?;
    let leaked2 = build_hybrid(sq, bs, qubit, k + 2, cfg)?;
    let norms = [target.norm, leaked1.norm, leaked2.norm];
    let (u1, u2) = leakage_coefficients(sq, bs, norms, k, det, cfg)?;
    let g = 1.0 + u1 + u2;
    let overlap = hybrid_overlap(&leaked2, &target)?;
    Ok((1.0 + u2 * overlap * overlap) / g)
}

/// Detected k-click probability: η^k g_k P_k with P_k the ideal-detector
/// gate probability.
pub fn detected_probability(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    qubit: &DVQubit,
    k: u32,
    det: &DetectorSpec,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let states = [
        build_hybrid(sq, bs, qubit, k, cfg)?,
        build_hybrid(sq, bs, qubit, k + 1, cfg)?,
        build_hybrid(sq, bs, qubit, k + 2, cfg)?,
    ];
    let norms = [states[0].norm, states[1].norm, states[2].norm];
    let (u1, u2) = leakage_coefficients(sq, bs, norms, k, det, cfg)?;
    let g = 1.0 + u1 + u2;
    let p = success_probability(sq, bs, k, ProbabilityMode::UnbalancedGateEq10, cfg)?;
    Ok(det.eta.powi(k as i32) * g * p)
}
