//! Controlled-Z analysis of the heralded hybrid states: the single-qubit
//! rotation absorbing the amplitude distortion, unit-distortion level lines in
//! the (S, B) plane, success-probability optimization over the beam-splitter
//! parameter, and multi-outcome gate scenarios.

use crate::error::{Error, Result};
use crate::hybrid::{distortion_b, success_probability, HybridState, ProbabilityMode};
use crate::numerics::SeriesConfig;
use crate::states::{
    BeamSplitterSpec, DVQubit, DvForm, ReducedSqueezing, SqueezingSpec,
};

/// Parameters of the y-axis rotation R_y(Θ) that maps |+⟩ to the distorted
/// qubit superposition: t_k = (b+1)/sqrt(2N), r_k = (b-1)/sqrt(2N) with
/// N = 1 + b^2, satisfying t_k^2 + r_k^2 = 1 identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationParams {
    pub theta: f64,
    pub t_k: f64,
    pub r_k: f64,
}

pub fn rotation_params(b: f64) -> RotationParams {
    let norm = (2.0 * (1.0 + b * b)).sqrt();
    let t_k = (b + 1.0) / norm;
    let r_k = (b - 1.0) / norm;
    RotationParams {
        theta: 2.0 * r_k.atan2(t_k),
        t_k,
        r_k,
    }
}

type Vec4 = [f64; 4];

/// Pauli Z on the CV qubit. The computational basis {|0_CV⟩, |1_CV⟩} is the
/// Hadamard pair of the parity basis, so in our (|+,0⟩,|+,1⟩,|−,0⟩,|−,1⟩)
/// ordering Z swaps |+CV⟩ ↔ |−CV⟩.
fn apply_z1(v: Vec4) -> Vec4 {
    [v[2], v[3], v[0], v[1]]
}

/// CZ = diag(1,1,1,−1) in the computational basis of both qubits; expressed
/// in the parity basis of the CV qubit it exchanges |+,1⟩ ↔ |−,1⟩.
fn apply_cz(v: Vec4) -> Vec4 {
    [v[0], v[3], v[2], v[1]]
}

/// R_y(Θ) (or its transpose) on the photonic qubit.
fn apply_r2(v: Vec4, rot: &RotationParams, transpose: bool) -> Vec4 {
    let (t, r) = (rot.t_k, rot.r_k);
    let (m00, m01, m10, m11) = if transpose {
        (t, r, -r, t)
    } else {
        (t, -r, r, t)
    };
    [
        m00 * v[0] + m01 * v[1],
        m10 * v[0] + m11 * v[1],
        m00 * v[2] + m01 * v[3],
        m10 * v[2] + m11 * v[3],
    ]
}

/// Verifies the gate decomposition of a hybrid state: starting from
/// |+CV⟩|+⟩, applies Z₁ to the power k+1 (ξ layout) or k (ζ layout), the
/// rotation R_y(Θ_k) — transposed in the ξ case — and CZ, and returns the
/// Euclidean distance to the state's own four-vector. The decomposition is an
/// algebraic identity, so the residual is rounding-level for every valid
/// state.
pub fn cz_decomposition_residual(h: &HybridState) -> f64 {
    let rot = rotation_params(h.b);
    residual_with_rotation(h, &rot)
}

fn residual_with_rotation(h: &HybridState, rot: &RotationParams) -> f64 {
    let half = 0.5_f64.sqrt();
    let mut v: Vec4 = [half, half, 0.0, 0.0]; // |+CV⟩ ⊗ |+⟩
    let (z_power, transpose) = match h.layout {
        DvForm::Xi => (h.k + 1, true),
        DvForm::Zeta => (h.k, false),
    };
    if z_power % 2 == 1 {
        v = apply_z1(v);
    }
    v = apply_r2(v, rot, transpose);
    v = apply_cz(v);
    let target = h.four_vector();
    v.iter()
        .zip(target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Deliberately perturbs the rotation angle only; used to show the residual
/// is a sensitive detector of a mismatched decomposition.
pub fn cz_decomposition_residual_perturbed(h: &HybridState, db: f64) -> f64 {
    let rot = rotation_params(h.b + db);
    residual_with_rotation(h, &rot)
}

/// The set of beam-splitter parameters where b'_k(S, B) = 1 at fixed
/// squeezing, found by a sign-change scan on a logarithmic grid followed by
/// bisection. An empty list is a valid outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelLine {
    pub k: u32,
    pub s_db: f64,
    pub roots: Vec<f64>,
}

/// Grid density for the level-line scan; the lines pack densely at small B,
/// which a coarse grid would miss.
pub const LEVEL_SCAN_POINTS: usize = 2000;

fn distortion_at(
    sq: &SqueezingSpec,
    bs_param: f64,
    k: u32,
    qubit: &DVQubit,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let y1 = sq.y / (1.0 + bs_param);
    Ok(qubit.ratio() * distortion_b(y1, bs_param, k, cfg)?)
}

pub fn find_level_lines(
    s_db: f64,
    k: u32,
    b_range: (f64, f64),
    qubit: &DVQubit,
    cfg: &SeriesConfig,
) -> Result<LevelLine> {
    let (lo, hi) = check_range(b_range)?;
    let sq = SqueezingSpec::from_db(s_db)?;
    let mut roots = Vec::new();
    let ln_lo = lo.ln();
    let step = (hi.ln() - ln_lo) / LEVEL_SCAN_POINTS as f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=LEVEL_SCAN_POINTS {
        let b = (ln_lo + step * i as f64).exp();
        let h = distortion_at(&sq, b, k, qubit, cfg)? - 1.0;
        if h == 0.0 {
            roots.push(b);
            prev = None;
            continue;
        }
        if let Some((pb, ph)) = prev {
            if ph.signum() != h.signum() {
                roots.push(bisect_root(&sq, k, qubit, (pb, ph), (b, h), cfg)?);
            }
        }
        prev = Some((b, h));
    }
    Ok(LevelLine { k, s_db, roots })
}

fn bisect_root(
    sq: &SqueezingSpec,
    k: u32,
    qubit: &DVQubit,
    mut lo: (f64, f64),
    mut hi: (f64, f64),
    cfg: &SeriesConfig,
) -> Result<f64> {
    for _ in 0..200 {
        let mid = (lo.0 * hi.0).sqrt();
        let h = distortion_at(sq, mid, k, qubit, cfg)? - 1.0;
        if h.abs() < 1e-10 || (hi.0 - lo.0) < 1e-15 * mid {
            return Ok(mid);
        }
        if h.signum() == lo.1.signum() {
            lo = (mid, h);
        } else {
            hi = (mid, h);
        }
    }
    Ok((lo.0 * hi.0).sqrt())
}

fn check_range(range: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = range;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter(format!(
            "invalid B range [{lo}, {hi}]"
        )));
    }
    Ok((lo, hi))
}

/// Outcome of a success-probability maximization over the beam-splitter
/// parameter at fixed squeezing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOutcome {
    pub b_opt: f64,
    pub p_max: f64,
    /// Distortion factor at the optimum.
    pub distortion: f64,
    /// True when the maximum sits on a range boundary, i.e. the objective is
    /// still improving at the edge of the search box.
    pub at_boundary: bool,
}

/// Grid for the optimizer's coarse scan.
pub const OPT_SCAN_POINTS: usize = 800;

/// Maximizes the heralding probability over B on a logarithmic grid, refined
/// by golden-section search. Ties between equal local maxima resolve to the
/// smaller B (the scan keeps the first).
pub fn optimize_b(
    s_db: f64,
    k: u32,
    mode: ProbabilityMode,
    b_range: (f64, f64),
    cfg: &SeriesConfig,
) -> Result<OptimizeOutcome> {
    let (lo, hi) = check_range(b_range)?;
    let sq = SqueezingSpec::from_db(s_db)?;
    let p_of = |b: f64| -> Result<f64> {
        let bs = BeamSplitterSpec::from_param_b(b)?;
        success_probability(&sq, &bs, k, mode, cfg)
    };
    let ln_lo = lo.ln();
    let step = (hi.ln() - ln_lo) / OPT_SCAN_POINTS as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut values = Vec::with_capacity(OPT_SCAN_POINTS + 1);
    for i in 0..=OPT_SCAN_POINTS {
        let p = p_of((ln_lo + step * i as f64).exp())?;
        if p > best.1 {
            best = (i, p);
        }
        values.push(p);
    }
    let at_boundary = best.0 == 0 || best.0 == OPT_SCAN_POINTS;
    let (mut a, mut b) = if at_boundary {
        let i = best.0;
        (
            ln_lo + step * i.saturating_sub(1) as f64,
            ln_lo + step * (i + 1).min(OPT_SCAN_POINTS) as f64,
        )
    } else {
        (
            ln_lo + step * (best.0 - 1) as f64,
            ln_lo + step * (best.0 + 1) as f64,
        )
    };
    // golden-section refinement on ln B
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = p_of(x1.exp())?;
    let mut f2 = p_of(x2.exp())?;
    for _ in 0..120 {
        if (b - a).abs() < 1e-7 {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = p_of(x1.exp())?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = p_of(x2.exp())?;
        }
    }
    let (ln_opt, mut p_opt) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    let mut b_opt = ln_opt.exp();
    // a boundary maximum stays on the boundary
    if at_boundary {
        let edge = if best.0 == 0 { lo } else { hi };
        let p_edge = values[best.0];
        if p_edge >= p_opt {
            b_opt = edge;
            p_opt = p_edge;
        }
    }
    let y1 = sq.y / (1.0 + b_opt);
    Ok(OptimizeOutcome {
        b_opt,
        p_max: p_opt,
        distortion: distortion_b(y1, b_opt, k, cfg)?,
        at_boundary,
    })
}

/// A multi-outcome gate estimate at fixed (S, B): per-outcome distortions and
/// Eq.-10-style probabilities, their sum P_CZ, and the qubit that would
/// realize b' = 1 at the mean distortion.
#[derive(Debug, Clone)]
pub struct GateScenario {
    pub s_db: f64,
    pub bs_param: f64,
    pub outcomes: Vec<u32>,
    pub distortions: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// Mean of the per-outcome distortion factors.
    pub common_b: f64,
    /// Largest pairwise disagreement among the distortions.
    pub b_spread: f64,
    pub qubit: DVQubit,
    pub p_cz: f64,
}

/// Default tolerance on the spread of the per-outcome distortion factors.
pub const SCENARIO_B_TOLERANCE: f64 = 1e-3;

pub fn gate_scenario(
    s_db: f64,
    bs_param: f64,
    outcomes: &[u32],
    b_tolerance: f64,
    cfg: &SeriesConfig,
) -> Result<GateScenario> {
    if outcomes.is_empty() {
        return Err(Error::InvalidParameter("empty outcome set".into()));
    }
    let sq = SqueezingSpec::from_db(s_db)?;
    let bs = BeamSplitterSpec::from_param_b(bs_param)?;
    let reduced = ReducedSqueezing::from_specs(&sq, &bs);
    let mut distortions = Vec::with_capacity(outcomes.len());
    let mut probabilities = Vec::with_capacity(outcomes.len());
    for &k in outcomes {
        distortions.push(distortion_b(reduced.y1, bs_param, k, cfg)?);
        probabilities.push(success_probability(
            &sq,
            &bs,
            k,
            ProbabilityMode::UnbalancedGateEq10,
            cfg,
        )?);
    }
    let min = distortions.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = distortions.iter().cloned().fold(0.0_f64, f64::max);
    let spread = max - min;
    if spread > b_tolerance {
        return Err(Error::InconsistentDistortion {
            values: outcomes.iter().cloned().zip(distortions).collect(),
            spread,
            tolerance: b_tolerance,
        });
    }
    let common_b = distortions.iter().sum::<f64>() / distortions.len() as f64;
    let p_cz = probabilities.iter().sum();
    Ok(GateScenario {
        s_db,
        bs_param,
        outcomes: outcomes.to_vec(),
        distortions,
        probabilities,
        common_b,
        b_spread: spread,
        qubit: DVQubit::for_unit_distortion(common_b, DvForm::Xi)?,
        p_cz,
    })
}
