//! Brute-force validation oracle: the exact beam-splitter unitary on
//! truncated two-mode Fock spaces, joint evolution with the delocalized
//! photon, outcome projection, and partial-transpose negativity on the
//! four-dimensional hybrid space.
//!
//! Everything here is deliberately direct — binomial sums per Fock pair, a
//! cyclic Jacobi eigensolver for 4×4 symmetric matrices — so that it can
//! serve as an independent check on the analytic machinery rather than share
//! code paths with it.

use crate::detector::DetectorSpec;
use crate::error::{Error, Result};
use crate::hybrid::HybridState;
use crate::numerics::{ln_binomial, log_factorial, CompensatedSum};
use crate::states::{
    required_truncation_smsv, smsv_state, BeamSplitterSpec, DVQubit, DvForm, SqueezingSpec,
};

/// Real-amplitude state of two Fock modes, amplitudes indexed by
/// (n1, n2) with n1 ≤ n1_max, n2 ≤ n2_max. Projected states may be
/// subnormalized; the norm is tracked explicitly by callers.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    amps: Vec<f64>,
    pub n1_max: usize,
    pub n2_max: usize,
}

impl TwoModeState {
    pub fn zero(n1_max: usize, n2_max: usize) -> Self {
        Self {
            amps: vec![0.0; (n1_max + 1) * (n2_max + 1)],
            n1_max,
            n2_max,
        }
    }

    /// |mode1⟩ ⊗ |mode2⟩ from single-mode amplitude vectors.
    pub fn from_product(mode1: &[f64], mode2: &[f64]) -> Self {
        let mut s = Self::zero(mode1.len() - 1, mode2.len() - 1);
        for (n1, a) in mode1.iter().enumerate() {
            for (n2, b) in mode2.iter().enumerate() {
                s.set(n1, n2, a * b);
            }
        }
        s
    }

    pub fn get(&self, n1: usize, n2: usize) -> f64 {
        self.amps[n1 * (self.n2_max + 1) + n2]
    }

    pub fn set(&mut self, n1: usize, n2: usize, v: f64) {
        self.amps[n1 * (self.n2_max + 1) + n2] = v;
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for a in &self.amps {
            acc.add(a * a);
        }
        acc.value()
    }

    /// Largest total photon number carried by any nonzero amplitude.
    pub fn max_total_photons(&self) -> usize {
        let mut max = 0;
        for n1 in 0..=self.n1_max {
            for n2 in 0..=self.n2_max {
                if self.get(n1, n2) != 0.0 {
                    max = max.max(n1 + n2);
                }
            }
        }
        max
    }

    /// Amplitudes of mode 1 conditioned on mode 2 holding exactly `n2`.
    pub fn project_mode2(&self, n2: usize) -> Vec<f64> {
        (0..=self.n1_max).map(|n1| self.get(n1, n2)).collect()
    }
}

/// ⟨m1 m2| BS |n1 n2⟩ for the beam splitter taking a1† → t a1† − r a2†,
/// a2† → r a1† + t a2†. Zero unless m1 + m2 = n1 + n2.
fn bs_element(m1: usize, m2: usize, n1: usize, n2: usize, t: f64, r: f64) -> f64 {
    if m1 + m2 != n1 + n2 {
        return 0.0;
    }
    let ln_t = t.abs().ln();
    let ln_r = r.abs().ln();
    let lead = 0.5
        * (log_factorial(m1 as u64) + log_factorial(m2 as u64)
            - log_factorial(n1 as u64)
            - log_factorial(n2 as u64));
    let lo = m1.saturating_sub(n2);
    let hi = n1.min(m1);
    let mut acc = CompensatedSum::default();
    for i in lo..=hi {
        let j = m1 - i;
        let lt = lead
            + ln_binomial(n1 as u64, i as u64)
            + ln_binomial(n2 as u64, j as u64)
            + ((i + n2 - j) as f64) * ln_t
            + ((n1 - i + j) as f64) * ln_r;
        let mut sign = if (n1 - i) % 2 == 0 { 1.0 } else { -1.0 };
        if t < 0.0 && (i + n2 - j) % 2 == 1 {
            sign = -sign;
        }
        if r < 0.0 && (n1 - i + j) % 2 == 1 {
            sign = -sign;
        }
        acc.add(sign * lt.exp());
    }
    acc.value()
}

fn bs_apply_tr(state: &TwoModeState, t: f64, r: f64) -> Result<TwoModeState> {
    let cap = state.n1_max.min(state.n2_max);
    let support = state.max_total_photons();
    if support > cap {
        return Err(Error::TruncationOverflow {
            support,
            capacity: cap,
        });
    }
    let mut out = TwoModeState::zero(state.n1_max, state.n2_max);
    for n1 in 0..=state.n1_max {
        for n2 in 0..=state.n2_max {
            let a = state.get(n1, n2);
            if a == 0.0 {
                continue;
            }
            let total = n1 + n2;
            for m1 in 0..=total.min(state.n1_max) {
                let m2 = total - m1;
                if m2 > state.n2_max {
                    continue;
                }
                let c = bs_element(m1, m2, n1, n2, t, r);
                if c != 0.0 {
                    let cur = out.get(m1, m2);
                    out.set(m1, m2, cur + a * c);
                }
            }
        }
    }
    Ok(out)
}

/// Applies the exact two-mode beam-splitter unitary. Errors if the input
/// support reaches the truncation boundary, where photons would spill out of
/// the retained space.
pub fn bs_apply(state: &TwoModeState, bs: &BeamSplitterSpec) -> Result<TwoModeState> {
    bs_apply_tr(state, bs.t, bs.r)
}

/// Applies the inverse beam splitter (reflection sign flipped).
pub fn bs_apply_inverse(state: &TwoModeState, bs: &BeamSplitterSpec) -> Result<TwoModeState> {
    bs_apply_tr(state, bs.t, -bs.r)
}

/// Result of evolving |SMSV⟩ ⊗ qubit through the beam splitter and measuring
/// k photons in the measuring port: the unnormalized state of the kept mode
/// and the two-level qubit mode, plus the outcome probability.
pub fn joint_evolve_project(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    qubit: &DVQubit,
    k: u32,
) -> Result<(TwoModeState, f64)> {
    let trunc = required_truncation_smsv(sq)?;
    joint_evolve_project_with_truncation(sq, bs, qubit, k, trunc)
}

/// As [`joint_evolve_project`] with an explicit input truncation for the
/// squeezed mode.
pub fn joint_evolve_project_with_truncation(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    qubit: &DVQubit,
    k: u32,
    truncation: usize,
) -> Result<(TwoModeState, f64)> {
    let k = k as usize;
    let smsv = smsv_state(sq, truncation)?;
    let dim = truncation + 2; // one spare level for the added photon
    if k > dim {
        return Err(Error::InvalidParameter(format!(
            "outcome k = {k} beyond retained space {dim}"
        )));
    }

    // mode 2 in |0⟩ and |1⟩ respectively
    let mut in0 = TwoModeState::zero(dim, dim);
    let mut in1 = TwoModeState::zero(dim, dim);
    for (n, a) in smsv.amplitudes().iter().enumerate() {
        in0.set(n, 0, *a);
        in1.set(n, 1, *a);
    }
    let ev0 = bs_apply(&in0, bs)?;
    let ev1 = bs_apply(&in1, bs)?;
    let u = ev0.project_mode2(k);
    let w = ev1.project_mode2(k);

    // Photonic mode 3 rides along untouched; which qubit level pairs with
    // which evolution depends on the DV form (delocalized photon vs
    // vacuum/correlated-pair superposition).
    let mut projected = TwoModeState::zero(dim, 1);
    for n1 in 0..=dim {
        match qubit.form {
            DvForm::Xi => {
                projected.set(n1, 1, qubit.a0 * u[n1]);
                projected.set(n1, 0, qubit.a1 * w[n1]);
            }
            DvForm::Zeta => {
                projected.set(n1, 0, qubit.a0 * u[n1]);
                projected.set(n1, 1, qubit.a1 * w[n1]);
            }
        }
    }
    let probability = projected.norm_sqr();
    Ok((projected, probability))
}

/// 4×4 real symmetric density matrix in the basis
/// (|+CV⟩|0⟩, |+CV⟩|1⟩, |−CV⟩|0⟩, |−CV⟩|1⟩).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4(pub [[f64; 4]; 4]);

impl DensityMatrix4 {
    pub fn from_pure(v: [f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = v[i] * v[j];
            }
        }
        Self(m)
    }

    pub fn from_hybrid(h: &HybridState) -> Self {
        Self::from_pure(h.four_vector())
    }

    /// Weighted mixture Σ w_i |v_i⟩⟨v_i|.
    pub fn from_mixture(components: &[([f64; 4], f64)]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (v, w) in components {
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] += w * v[i] * v[j];
                }
            }
        }
        Self(m)
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }
}

/// Eigenvalues of a 4×4 real symmetric matrix by cyclic Jacobi rotations.
fn sym_eigenvalues_4(m: &[[f64; 4]; 4]) -> [f64; 4] {
    let mut a = *m;
    for _ in 0..64 {
        let mut off = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..4 {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..4 {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    [a[0][0], a[1][1], a[2][2], a[3][3]]
}

/// Negativity ‖ρ^{T_B}‖₁ − 1 = 2 Σ |negative eigenvalues of ρ^{T_B}|, the
/// partial transpose taken over the photonic qubit.
pub fn pt_negativity(rho: &DensityMatrix4) -> Result<f64> {
    let m = &rho.0;
    for i in 0..4 {
        for j in 0..4 {
            if (m[i][j] - m[j][i]).abs() > 1e-10 {
                return Err(Error::InvalidParameter(
                    "density matrix is not symmetric".into(),
                ));
            }
        }
    }
    if (rho.trace() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "density matrix trace {} != 1",
            rho.trace()
        )));
    }
    let eig = sym_eigenvalues_4(m);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -1e-10 {
        return Err(Error::NonPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    // partial transpose over the second (photonic) index:
    // pt[(a,i),(b,j)] = rho[(a,j),(b,i)] with basis index 2a + i
    let mut pt = [[0.0; 4]; 4];
    for a in 0..2 {
        for i in 0..2 {
            for b in 0..2 {
                for j in 0..2 {
                    pt[2 * a + i][2 * b + j] = m[2 * a + j][2 * b + i];
                }
            }
        }
    }
    let eig = sym_eigenvalues_4(&pt);
    Ok(2.0 * eig.iter().map(|&l| (-l).max(0.0)).sum::<f64>())
}

/// POVM-grouped mixture weights from the full evolved joint state: the
/// relative weights of the true photon numbers k, k+1, k+2 under the
/// binomial-loss element Π_k, plus the neglected j ≥ 3 mass relative to the
/// leading term.
#[derive(Debug, Clone, Copy)]
pub struct PovmOracleOutcome {
    pub weights: [f64; 3],
    /// Σ_{j≥3} Π_k(k+j) P_{k+j} / (Π_k(k) P_k): the mass excluded by the
    /// second-order mixture, relative to its j = 0 term.
    pub residual_rel: f64,
}

pub fn povm_oracle(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    qubit: &DVQubit,
    k: u32,
    det: &DetectorSpec,
    extra_outcomes: u32,
) -> Result<PovmOracleOutcome> {
    let eta = det.eta;
    let mut unweighted = Vec::new();
    for j in 0..=(2 + extra_outcomes) as u64 {
        let (_, p) = joint_evolve_project(sq, bs, qubit, k + j as u32)?;
        let n = k as u64 + j;
        let povm = if eta == 1.0 {
            if j == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (ln_binomial(n, k as u64) + k as f64 * eta.ln() + j as f64 * (1.0 - eta).ln()).exp()
        };
        unweighted.push(povm * p);
    }
    let lead = unweighted[0];
    let total3: f64 = unweighted[..3].iter().sum();
    let residual: f64 = unweighted[3..].iter().sum();
    Ok(PovmOracleOutcome {
        weights: [
            unweighted[0] / total3,
            unweighted[1] / total3,
            unweighted[2] / total3,
        ],
        residual_rel: residual / lead,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bs_vacuum_is_invariant() {
        let mut st = TwoModeState::zero(6, 6);
        st.set(0, 0, 1.0);
        let bs = BeamSplitterSpec::from_param_b(0.7).unwrap();
        let out = bs_apply(&st, &bs).unwrap();
        assert!((out.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bs_single_photon_splits_as_t_r() {
        // a1† → t a1† − r a2†, so |1,0> → t|1,0> − r|0,1>
        let mut st = TwoModeState::zero(6, 6);
        st.set(1, 0, 1.0);
        let bs = BeamSplitterSpec::from_transmittance(0.6).unwrap();
        let out = bs_apply(&st, &bs).unwrap();
        assert!((out.get(1, 0) - 0.6).abs() < 1e-14);
        assert!((out.get(0, 1) + 0.8).abs() < 1e-14);
        // a2† → r a1† + t a2†, so |0,1> → r|1,0> + t|0,1>
        let mut st = TwoModeState::zero(6, 6);
        st.set(0, 1, 1.0);
        let out = bs_apply(&st, &bs).unwrap();
        assert!((out.get(1, 0) - 0.8).abs() < 1e-14);
        assert!((out.get(0, 1) - 0.6).abs() < 1e-14);
    }

    #[test]
    fn bs_hong_ou_mandel_dip() {
        // Balanced splitter sends |1,1> to (|2,0> - |0,2>)/sqrt 2 with no
        // coincidence term.
        let mut st = TwoModeState::zero(6, 6);
        st.set(1, 1, 1.0);
        let bs = BeamSplitterSpec::from_param_b(1.0).unwrap();
        let out = bs_apply(&st, &bs).unwrap();
        assert!(out.get(1, 1).abs() < 1e-14);
        assert!((out.get(2, 0).abs() - 0.5_f64.sqrt()).abs() < 1e-14);
        assert!((out.get(0, 2).abs() - 0.5_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bs_is_unitary_and_invertible() {
        // pseudo-random two-mode state fitting well inside the truncation
        let mut st = TwoModeState::zero(24, 24);
        let mut x = 0.37_f64;
        for n1 in 0..=10 {
            for n2 in 0..=10 {
                x = (x * 997.13).fract();
                st.set(n1, n2, x - 0.5);
            }
        }
        let n0 = st.norm_sqr();
        let bs = BeamSplitterSpec::from_param_b(2.3).unwrap();
        let fwd = bs_apply(&st, &bs).unwrap();
        assert!(((fwd.norm_sqr() - n0) / n0).abs() < 1e-12);
        let back = bs_apply_inverse(&fwd, &bs).unwrap();
        let mut max_diff = 0.0_f64;
        for n1 in 0..=24 {
            for n2 in 0..=24 {
                max_diff = max_diff.max((back.get(n1, n2) - st.get(n1, n2)).abs());
            }
        }
        assert!(max_diff < 1e-12, "round trip diff {max_diff}");
    }

    #[test]
    fn bs_overflow_detected() {
        let mut st = TwoModeState::zero(4, 4);
        st.set(4, 2, 1.0);
        let bs = BeamSplitterSpec::from_param_b(1.0).unwrap();
        assert!(matches!(
            bs_apply(&st, &bs),
            Err(Error::TruncationOverflow { .. })
        ));
    }

    #[test]
    fn projection_probabilities_sum_to_one() {
        let sq = SqueezingSpec::from_db(8.0).unwrap();
        let bs = BeamSplitterSpec::from_param_b(1.7).unwrap();
        let q = DVQubit::balanced(DvForm::Xi);
        let mut total = 0.0;
        for k in 0..=60 {
            let (_, p) = joint_evolve_project(&sq, &bs, &q, k).unwrap();
            total += p;
        }
        assert!((total - 1.0).abs() < 1e-9, "sum = {total}");
    }

    #[test]
    fn pt_negativity_on_known_states() {
        // separable product state: no entanglement
        let rho = DensityMatrix4::from_pure([1.0, 0.0, 0.0, 0.0]);
        assert!(pt_negativity(&rho).unwrap() < 1e-12);
        // maximally entangled pair of the hybrid form (b = 1)
        let s = 0.5_f64.sqrt();
        let rho = DensityMatrix4::from_pure([0.0, s, s, 0.0]);
        assert!((pt_negativity(&rho).unwrap() - 1.0).abs() < 1e-12);
        // Schmidt-split pure state: negativity 2 b/(1+b^2)
        for &b in &[0.3, 0.8, 2.0_f64] {
            let n = (1.0 + b * b).sqrt();
            let rho = DensityMatrix4::from_pure([0.0, 1.0 / n, b / n, 0.0]);
            let expect = 2.0 * b / (1.0 + b * b);
            assert!((pt_negativity(&rho).unwrap() - expect).abs() < 1e-12);
        }
        // classically correlated mixture stays PPT
        let rho = DensityMatrix4::from_mixture(&[
            ([1.0, 0.0, 0.0, 0.0], 0.5),
            ([0.0, 0.0, 0.0, 1.0], 0.5),
        ]);
        assert!(pt_negativity(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn pt_negativity_rejects_bad_inputs() {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 2.0;
        assert!(pt_negativity(&DensityMatrix4(m)).is_err());
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 1.5;
        m[1][1] = -0.5;
        assert!(matches!(
            pt_negativity(&DensityMatrix4(m)),
            Err(Error::NonPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn jacobi_matches_characteristic_values() {
        let m = [
            [2.0, 1.0, 0.0, 0.0],
            [1.0, 2.0, 0.0, 0.0],
            [0.0, 0.0, 3.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        let mut eig = sym_eigenvalues_4(&m);
        eig.sort_by(f64::total_cmp);
        let expect = [-1.0, 1.0, 3.0, 3.0];
        for (a, b) in eig.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
