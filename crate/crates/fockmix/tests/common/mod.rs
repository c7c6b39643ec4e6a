//! Shared helpers for the integration and acceptance suites: a deterministic
//! parameter sweep and the oracle-vs-analytic comparison used by several
//! tests.

use fockmix::hybrid::{build_hybrid, distortion_b, heralding_probability};
use fockmix::gates::cz_decomposition_residual;
use fockmix::oracle::{joint_evolve_project, pt_negativity, DensityMatrix4};
use fockmix::states::{cv_state_add_subtract_auto, cv_state_subtract_auto};
use fockmix::{
    BeamSplitterSpec, DVQubit, DvForm, ReducedSqueezing, SeriesConfig, SqueezingSpec,
};

#[derive(Debug, Clone, Copy)]
pub struct SweepTuple {
    pub s_db: f64,
    pub bs_param: f64,
    pub k: u32,
    pub ratio: f64,
    pub form: DvForm,
}

/// Deterministic sweep over S ∈ [1, 12] dB, B ∈ [0.05, 200] (log-spaced),
/// k ∈ 0..6, a1/a0 ∈ {1, 2, 1/2} and both DV layouts.
pub fn sweep_tuples(n: usize) -> Vec<SweepTuple> {
    let ratios = [1.0, 2.0, 0.5];
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            SweepTuple {
                s_db: 1.0 + 11.0 * f,
                bs_param: 0.05 * (200.0_f64 / 0.05).powf(f),
                k: (i % 6) as u32,
                ratio: ratios[i % 3],
                form: if i % 2 == 0 { DvForm::Xi } else { DvForm::Zeta },
            }
        })
        .collect()
}

pub fn canonicalized(mut v: Vec<f64>) -> Vec<f64> {
    let mut best = (0usize, 0.0f64);
    for (i, a) in v.iter().enumerate() {
        if a.abs() > best.1 {
            best = (i, a.abs());
        }
    }
    if v[best.0] < 0.0 {
        for a in &mut v {
            *a = -*a;
        }
    }
    v
}

pub fn normalized(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter().map(|a| a / n).collect()
}

/// Everything the oracle and the analytic path should agree on for one
/// parameter tuple.
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceReport {
    /// |P_oracle − P_analytic|.
    pub probability_diff: f64,
    /// max-abs deviation of the photon-subtracted branch amplitudes.
    pub subtract_branch_diff: f64,
    /// max-abs deviation of the photon-added branch amplitudes.
    pub added_branch_diff: f64,
    /// relative deviation of the distortion factor b'.
    pub distortion_rel_diff: f64,
    /// |pt_negativity − 2b/(1+b^2)|.
    pub negativity_diff: f64,
    /// CZ decomposition residual of the analytic hybrid state.
    pub cz_residual: f64,
}

pub fn compare_oracle(tuple: &SweepTuple, cfg: &SeriesConfig, window: usize) -> EquivalenceReport {
    let sq = SqueezingSpec::from_db(tuple.s_db).unwrap();
    let bs = BeamSplitterSpec::from_param_b(tuple.bs_param).unwrap();
    let qubit = DVQubit::from_amplitude_ratio(tuple.ratio, tuple.form).unwrap();
    let k = tuple.k;

    let (projected, p_oracle) = joint_evolve_project(&sq, &bs, &qubit, k).unwrap();
    let p_analytic = heralding_probability(&sq, &bs, &qubit, k, cfg).unwrap();

    // branch split: the photon-subtracted branch rides with |1⟩ for the ξ
    // layout and |0⟩ for ζ
    let (v_sub, v_add) = match tuple.form {
        DvForm::Xi => (projected.project_mode2(1), projected.project_mode2(0)),
        DvForm::Zeta => (projected.project_mode2(0), projected.project_mode2(1)),
    };
    let norm_sub = v_sub.iter().map(|a| a * a).sum::<f64>().sqrt();
    let norm_add = v_add.iter().map(|a| a * a).sum::<f64>().sqrt();

    let reduced = ReducedSqueezing::from_specs(&sq, &bs);
    let sub_analytic = cv_state_subtract_auto(reduced, k, cfg).unwrap();
    let add_analytic = cv_state_add_subtract_auto(reduced, bs.b, k, cfg).unwrap();

    let sub_oracle = canonicalized(normalized(&v_sub));
    let add_oracle = canonicalized(normalized(&v_add));
    let sub_ref = canonicalized(sub_analytic.amplitudes().to_vec());
    let add_ref = canonicalized(add_analytic.amplitudes().to_vec());

    let max_abs_diff = |a: &[f64], b: &[f64]| -> f64 {
        let upto = window.min(a.len()).min(b.len());
        (0..upto)
            .map(|i| (a[i] - b[i]).abs())
            .fold(0.0f64, f64::max)
    };
    let subtract_branch_diff = max_abs_diff(&sub_oracle, &sub_ref);
    let added_branch_diff = max_abs_diff(&add_oracle, &add_ref);

    // distortion: norm ratio of the branches
    let b_oracle = norm_add / norm_sub;
    let b_raw = distortion_b(reduced.y1, bs.b, k, cfg).unwrap();
    let b_analytic = qubit.ratio() * b_raw;
    let distortion_rel_diff = (b_oracle - b_analytic).abs() / b_analytic;

    let hybrid = build_hybrid(&sq, &bs, &qubit, k, cfg).unwrap();
    let rho = DensityMatrix4::from_hybrid(&hybrid);
    let negativity_diff =
        (pt_negativity(&rho).unwrap() - 2.0 * hybrid.b / hybrid.norm).abs();
    let cz_residual = cz_decomposition_residual(&hybrid);

    EquivalenceReport {
        probability_diff: (p_oracle - p_analytic).abs(),
        subtract_branch_diff,
        added_branch_diff,
        distortion_rel_diff,
        negativity_diff,
        cz_residual,
    }
}
