//! Heralded hybrid entangled states: the two CV branches of opposite parity
//! paired with the photonic qubit, the amplitude-distortion factor b_k, the
//! entanglement negativity 2b/(1+b^2), and the heralding probabilities for
//! balanced and unbalanced photonic inputs.

use crate::error::{Error, Result};
use crate::numerics::{g1_norm, log_factorial, z_derivative, SeriesConfig};
use crate::states::{
    cv_state_add_subtract_auto, cv_state_subtract_auto, BeamSplitterSpec, DVQubit, DvForm,
    FockVector, Parity, ReducedSqueezing, SqueezingSpec,
};

/// Which success-probability multiplier to use: (1+b^2)/2 for the balanced
/// photonic input, or 2b^2/(1+b^2) for the unbalanced input tuned to realize
/// the gate (b' = 1) without a preliminary single-qubit rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbabilityMode {
    BalancedEq7,
    UnbalancedGateEq10,
}

/// Amplitude of the k-photon outcome when vacuum feeds the measuring port:
/// c_k^{(0)} = (-1)^k (y1 B)^{k/2} / sqrt(k!).
pub fn amplitude_c0(y1: f64, bs_param: f64, k: u32) -> f64 {
    let x = y1 * bs_param;
    if k == 0 {
        return 1.0;
    }
    if x == 0.0 {
        return 0.0;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * (0.5 * k as f64 * x.ln() - 0.5 * log_factorial(k as u64)).exp()
}

/// Amplitude of the k-photon outcome when the single photon feeds the port:
/// c_k^{(1)} = (1/sqrt(1+B)) · { sqrt(B) for k = 0;
///                               (-1)^{k+1} (y1 B)^{(k-1)/2} k / sqrt(k!) }.
pub fn amplitude_c1(y1: f64, bs_param: f64, k: u32) -> f64 {
    let pref = (1.0 + bs_param).sqrt().recip();
    if k == 0 {
        return pref * bs_param.sqrt();
    }
    let x = y1 * bs_param;
    let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
    if x == 0.0 {
        return if k == 1 { sign * pref } else { 0.0 };
    }
    sign * pref
        * (0.5 * (k - 1) as f64 * x.ln() + (k as f64).ln() - 0.5 * log_factorial(k as u64)).exp()
}

/// Amplitude-distortion factor b_k(y1, B) > 0, the norm ratio of the
/// photon-added to the photon-subtracted branch of the heralded state:
/// b_k = |c_k^{(1)}/c_k^{(0)}| sqrt(G_k^{(1)}/Z^{(k)}).
pub fn distortion_b(y1: f64, bs_param: f64, k: u32, cfg: &SeriesConfig) -> Result<f64> {
    if y1 == 0.0 {
        // zero-squeezing limit: |k - B| / sqrt(B(1+B)) for even k (k = 0
        // included); odd-k branches lose their Z^{(k)} reference entirely
        if k % 2 == 1 {
            return Err(Error::InvalidParameter(
                "distortion factor diverges for odd k at zero squeezing".into(),
            ));
        }
        return Ok((k as f64 - bs_param).abs() / (bs_param * (1.0 + bs_param)).sqrt());
    }
    let g = g1_norm(y1, bs_param, k, cfg)?;
    let zk = z_derivative(y1, k, cfg)?;
    let b = if k == 0 {
        (bs_param / (1.0 + bs_param)).sqrt() * (g / zk).sqrt()
    } else {
        k as f64 / ((1.0 + bs_param) * y1 * bs_param).sqrt() * (g / zk).sqrt()
    };
    Ok(b)
}

/// Distortion of the unbalanced input: b' = (a1/a0) b.
pub fn distortion_b_unbalanced(b: f64, qubit: &DVQubit) -> Result<f64> {
    if qubit.a0 == 0.0 {
        return Err(Error::DegenerateQubit);
    }
    Ok(qubit.ratio() * b)
}

fn eq7_base(sq: &SqueezingSpec, bs: &BeamSplitterSpec, k: u32, cfg: &SeriesConfig) -> Result<f64> {
    let y1 = ReducedSqueezing::from_specs(sq, bs).y1;
    let zk = z_derivative(y1, k, cfg)?;
    let c0 = amplitude_c0(y1, bs.b, k);
    Ok(sq.sech() * c0 * c0 * zk)
}

/// Probability of heralding the k-photon outcome.
///
/// Balanced mode multiplies the common factor sech(s) c0^2 Z^{(k)} by
/// N_k/2 = (1+b^2)/2; unbalanced-gate mode by 2b^2/(1+b^2), the value of
/// a0^2 N'_k when the qubit realizes b' = 1.
pub fn success_probability(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    k: u32,
    mode: ProbabilityMode,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let y1 = ReducedSqueezing::from_specs(sq, bs).y1;
    let b = distortion_b(y1, bs.b, k, cfg)?;
    let factor = match mode {
        ProbabilityMode::BalancedEq7 => (1.0 + b * b) / 2.0,
        ProbabilityMode::UnbalancedGateEq10 => 2.0 * b * b / (1.0 + b * b),
    };
    Ok(eq7_base(sq, bs, k, cfg)? * factor)
}

/// Heralding probability for an arbitrary photonic qubit:
/// P_k = a0^2 c0^2 Z^{(k)} (1 + b'^2) / cosh s, which reduces to the balanced
/// formula at a0 = a1 and to the gate formula at b' = 1.
pub fn heralding_probability(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    qubit: &DVQubit,
    k: u32,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let y1 = ReducedSqueezing::from_specs(sq, bs).y1;
    let b = distortion_b(y1, bs.b, k, cfg)?;
    let bp = distortion_b_unbalanced(b, qubit)?;
    Ok(eq7_base(sq, bs, k, cfg)? * qubit.a0 * qubit.a0 * (1.0 + bp * bp))
}

/// Two-branch CV ⊗ photon entangled state heralded by a k-photon click.
///
/// The even- and odd-parity CV branches are exactly orthogonal; `b` is the
/// (positive) weight of the photon-added branch after the qubit rescaling,
/// and both branches carry the canonical phase (largest amplitude ≥ 0).
#[derive(Debug, Clone)]
pub struct HybridState {
    pub k: u32,
    /// Distortion factor b'_k > 0.
    pub b: f64,
    /// Normalization N = 1 + b^2.
    pub norm: f64,
    pub cv_even_branch: FockVector,
    pub cv_odd_branch: FockVector,
    pub layout: DvForm,
}

impl HybridState {
    /// Entanglement negativity 2b/(1+b^2); 1 exactly when b = 1.
    pub fn negativity(&self) -> f64 {
        2.0 * self.b / self.norm
    }

    /// Whether the photon-added branch (the one weighted by b) is the
    /// even-parity one. True for odd k.
    pub fn added_branch_is_even(&self) -> bool {
        self.k % 2 == 1
    }

    /// Branch paired with photonic |0⟩ and its weight (b or 1), then the
    /// |1⟩ branch with its weight, per the ξ (Eq.-4-style) or ζ (Eq.-5-style)
    /// layout.
    pub fn branches(&self) -> [(&FockVector, f64); 2] {
        let (added, sub) = if self.added_branch_is_even() {
            (&self.cv_even_branch, &self.cv_odd_branch)
        } else {
            (&self.cv_odd_branch, &self.cv_even_branch)
        };
        match self.layout {
            DvForm::Xi => [(added, self.b), (sub, 1.0)],
            DvForm::Zeta => [(sub, 1.0), (added, self.b)],
        }
    }

    /// Coordinates in the orthonormal basis
    /// (|+CV⟩|0⟩, |+CV⟩|1⟩, |−CV⟩|0⟩, |−CV⟩|1⟩), with |+CV⟩ the even-parity
    /// branch and |−CV⟩ the odd one.
    pub fn four_vector(&self) -> [f64; 4] {
        let sqrt_n = self.norm.sqrt();
        let added_even = self.added_branch_is_even();
        // basis index = 2·(branch is odd) + photon number
        let (added_photon, sub_photon) = match self.layout {
            DvForm::Xi => (0, 1),
            DvForm::Zeta => (1, 0),
        };
        let mut v = [0.0; 4];
        v[if added_even { 0 } else { 2 } + added_photon] = self.b / sqrt_n;
        v[if added_even { 2 } else { 0 } + sub_photon] = 1.0 / sqrt_n;
        v
    }
}

/// Assembles the heralded hybrid state for the given squeezing, beam splitter,
/// photonic qubit and outcome k.
pub fn build_hybrid(
    sq: &SqueezingSpec,
    bs: &BeamSplitterSpec,
    qubit: &DVQubit,
    k: u32,
    cfg: &SeriesConfig,
) -> Result<HybridState> {
    let reduced = ReducedSqueezing::from_specs(sq, bs);
    let b_raw = distortion_b(reduced.y1, bs.b, k, cfg)?;
    let b = distortion_b_unbalanced(b_raw, qubit)?;
    let sub = cv_state_subtract_auto(reduced, k, cfg)?.canonicalized();
    let added = cv_state_add_subtract_auto(reduced, bs.b, k, cfg)?.canonicalized();
    let (even, odd) = if sub.parity() == Parity::Even {
        (sub, added)
    } else {
        (added, sub)
    };
    Ok(HybridState {
        k,
        b,
        norm: 1.0 + b * b,
        cv_even_branch: even,
        cv_odd_branch: odd,
        layout: qubit.form,
    })
}

/// Closed-form negativity of a hybrid state.
pub fn negativity(h: &HybridState) -> f64 {
    h.negativity()
}

/// Inner product ⟨h1|h2⟩ of two hybrid states sharing squeezing, beam
/// splitter and qubit: branch-wise Fock overlaps weighted by the branch
/// weights and 1/sqrt(N1 N2). Vanishes whenever |k1 - k2| is odd.
pub fn hybrid_overlap(h1: &HybridState, h2: &HybridState) -> Result<f64> {
    if h1.layout != h2.layout {
        return Err(Error::InvalidParameter(
            "hybrid overlap requires a common DV layout".into(),
        ));
    }
    let [(a0, w0a), (a1, w1a)] = h1.branches();
    let [(b0, w0b), (b1, w1b)] = h2.branches();
    let ov = w0a * w0b * a0.overlap(b0) + w1a * w1b * a1.overlap(b1);
    Ok(ov / (h1.norm * h2.norm).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn amplitude_c0_examples() {
        assert_eq!(amplitude_c0(0.3, 2.0, 0), 1.0);
        let x: f64 = 0.3 * 2.0;
        assert!((amplitude_c0(0.3, 2.0, 1) + x.sqrt()).abs() < 1e-15);
        assert!((amplitude_c0(0.3, 2.0, 2) - x / 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn amplitude_c1_examples() {
        let b = 3.0_f64;
        assert!((amplitude_c1(0.2, b, 0) - (b / (1.0 + b)).sqrt()).abs() < 1e-15);
        assert!((amplitude_c1(0.2, b, 1) - 1.0 / (1.0 + b).sqrt()).abs() < 1e-15);
        let x: f64 = 0.2 * b;
        let expect = -(x.sqrt() * 2.0 / 2.0_f64.sqrt()) / (1.0 + b).sqrt();
        assert!((amplitude_c1(0.2, b, 2) - expect).abs() < 1e-15);
    }

    #[test]
    fn distortion_matches_a19_ratio() {
        // b_k must equal |c1/c0| sqrt(G/Z) computed from the raw pieces.
        for &(y1, bp, k) in &[(0.2, 0.7, 1_u32), (0.3, 2.0, 2), (0.1, 99.0, 3), (0.4, 0.15, 4)] {
            let b = distortion_b(y1, bp, k, &cfg()).unwrap();
            let ratio = (amplitude_c1(y1, bp, k) / amplitude_c0(y1, bp, k)).abs();
            let g = g1_norm(y1, bp, k, &cfg()).unwrap();
            let z = z_derivative(y1, k, &cfg()).unwrap();
            let expect = ratio * (g / z).sqrt();
            assert!((b - expect).abs() / expect < 1e-13, "k={k}");
        }
    }

    #[test]
    fn distortion_zero_squeezing_limits() {
        // k = 0: sqrt(B/(1+B)); this is Table 2's 0.995 at B = 99
        let b = distortion_b(0.0, 99.0, 0, &cfg()).unwrap();
        assert!((b - (99.0_f64 / 100.0).sqrt()).abs() < 1e-12);
        // even k: |k - B| / sqrt(B(1+B)); root of b = 1 at B = k^2/(2k+1)
        let root = 4.0 / 5.0;
        let b = distortion_b(0.0, root, 2, &cfg()).unwrap();
        assert!((b - 1.0).abs() < 1e-12);
        assert!(distortion_b(0.0, 1.0, 1, &cfg()).is_err());
        // continuity: the y1 -> 0 limit matches small-y1 evaluation
        let b_small = distortion_b(1e-8, 0.8, 2, &cfg()).unwrap();
        let b_limit = distortion_b(0.0, 0.8, 2, &cfg()).unwrap();
        assert!((b_small - b_limit).abs() < 1e-6);
    }

    #[test]
    fn distortion_strictly_positive() {
        for k in 0..7 {
            for &y1 in &[0.05, 0.2, 0.4] {
                for &bp in &[0.05, 0.5, 2.0, 50.0] {
                    let b = distortion_b(y1, bp, k, &cfg()).unwrap();
                    assert!(b > 0.0, "k={k} y1={y1} B={bp}");
                }
            }
        }
    }

    #[test]
    fn distortion_unbalanced_examples() {
        let q = DVQubit::balanced(DvForm::Xi);
        assert!((distortion_b_unbalanced(0.7, &q).unwrap() - 0.7).abs() < 1e-15);
        let q = DVQubit::from_amplitude_ratio(2.0, DvForm::Xi).unwrap();
        assert!((distortion_b_unbalanced(0.5, &q).unwrap() - 1.0).abs() < 1e-13);
        // inverse solve: the unit-distortion qubit indeed yields b' = 1
        for &b in &[0.3, 1.0, 2.5] {
            let q = DVQubit::for_unit_distortion(b, DvForm::Xi).unwrap();
            assert!((distortion_b_unbalanced(b, &q).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn table1_distortions_near_unity() {
        let cfg = cfg();
        let bs = 8380.3;
        let sq = SqueezingSpec::from_db(9.99995).unwrap();
        let y1 = sq.y / (1.0 + bs);
        for k in [2_u32, 4, 6] {
            let b = distortion_b(y1, bs, k, &cfg).unwrap();
            assert!((b - 1.0).abs() < 1e-3, "k={k}: b={b}");
        }
    }

    #[test]
    fn success_probability_reproduces_reported_operating_points() {
        let cfg = cfg();
        // balanced outcome probability at the high-reflectivity point
        let sq = SqueezingSpec::from_db(9.99995).unwrap();
        let bs = BeamSplitterSpec::from_param_b(8380.3).unwrap();
        let p2 = success_probability(&sq, &bs, 2, ProbabilityMode::BalancedEq7, &cfg).unwrap();
        assert!((p2 - 0.19244).abs() / 0.19244 < 1e-3);
        // unbalanced-gate probabilities
        let sq = SqueezingSpec::from_db(24.535).unwrap();
        let bs = BeamSplitterSpec::from_param_b(0.01).unwrap();
        let p1 = success_probability(&sq, &bs, 1, ProbabilityMode::UnbalancedGateEq10, &cfg).unwrap();
        assert!((p1 - 0.2616).abs() / 0.2616 < 1e-3);
        let sq = SqueezingSpec::from_db(0.0002).unwrap();
        let bs = BeamSplitterSpec::from_param_b(99.0).unwrap();
        let p0 = success_probability(&sq, &bs, 0, ProbabilityMode::UnbalancedGateEq10, &cfg).unwrap();
        assert!((p0 - 0.995).abs() < 1e-4);
    }

    #[test]
    fn heralding_probability_reduces_to_modes() {
        let cfg = cfg();
        let sq = SqueezingSpec::from_db(7.3).unwrap();
        let bs = BeamSplitterSpec::from_param_b(1.4).unwrap();
        for k in 0..5 {
            let balanced = DVQubit::balanced(DvForm::Xi);
            let via_mode =
                success_probability(&sq, &bs, k, ProbabilityMode::BalancedEq7, &cfg).unwrap();
            let via_general = heralding_probability(&sq, &bs, &balanced, k, &cfg).unwrap();
            assert!((via_mode - via_general).abs() < 1e-14, "balanced k={k}");

            let y1 = ReducedSqueezing::from_specs(&sq, &bs).y1;
            let b = distortion_b(y1, bs.b, k, &cfg).unwrap();
            let gate_qubit = DVQubit::for_unit_distortion(b, DvForm::Xi).unwrap();
            let via_mode =
                success_probability(&sq, &bs, k, ProbabilityMode::UnbalancedGateEq10, &cfg)
                    .unwrap();
            let via_general = heralding_probability(&sq, &bs, &gate_qubit, k, &cfg).unwrap();
            assert!(
                (via_mode - via_general).abs() / via_mode < 1e-12,
                "gate k={k}"
            );
        }
    }

    #[test]
    fn build_hybrid_structure() {
        let cfg = cfg();
        let sq = SqueezingSpec::from_db(8.0).unwrap();
        let bs = BeamSplitterSpec::from_param_b(0.56).unwrap();
        let q = DVQubit::balanced(DvForm::Xi);
        for k in 0..5 {
            let h = build_hybrid(&sq, &bs, &q, k, &cfg).unwrap();
            assert_eq!(h.cv_even_branch.parity(), Parity::Even);
            assert_eq!(h.cv_odd_branch.parity(), Parity::Odd);
            assert!((h.norm - (1.0 + h.b * h.b)).abs() < 1e-15);
            assert_eq!(h.cv_even_branch.overlap(&h.cv_odd_branch), 0.0);
            // Eq.-4 pairing for the xi layout and even k: b on the odd branch
            // next to photon |0⟩, even branch next to |1⟩
            let [(br0, w0), (br1, w1)] = h.branches();
            if k % 2 == 0 {
                assert_eq!(br0.parity(), Parity::Odd);
                assert_eq!(br1.parity(), Parity::Even);
                assert_eq!(w0, h.b);
                assert_eq!(w1, 1.0);
            } else {
                assert_eq!(br0.parity(), Parity::Even);
                assert_eq!(br1.parity(), Parity::Odd);
            }
            let v = h.four_vector();
            let n2: f64 = v.iter().map(|x| x * x).sum();
            assert!((n2 - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zeta_layout_swaps_branch_roles() {
        let cfg = cfg();
        let sq = SqueezingSpec::from_db(8.0).unwrap();
        let bs = BeamSplitterSpec::from_param_b(0.56).unwrap();
        let q = DVQubit::balanced(DvForm::Zeta);
        let h = build_hybrid(&sq, &bs, &q, 2, &cfg).unwrap();
        let [(br0, w0), (br1, w1)] = h.branches();
        assert_eq!(br0.parity(), Parity::Even);
        assert_eq!(w0, 1.0);
        assert_eq!(br1.parity(), Parity::Odd);
        assert_eq!(w1, h.b);
    }

    #[test]
    fn negativity_examples() {
        let cfg = cfg();
        let sq = SqueezingSpec::from_db(8.0).unwrap();
        let bs = BeamSplitterSpec::from_param_b(0.5).unwrap();
        let q = DVQubit::balanced(DvForm::Xi);
        let mut h = build_hybrid(&sq, &bs, &q, 2, &cfg).unwrap();
        h.b = 1.0;
        h.norm = 2.0;
        assert!((negativity(&h) - 1.0).abs() < 1e-15);
        h.b = 2.0;
        h.norm = 5.0;
        assert!((negativity(&h) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn overlap_is_one_for_identical_and_zero_for_odd_gap() {
        let cfg = cfg();
        let sq = SqueezingSpec::from_db(8.0).unwrap();
        let bs = BeamSplitterSpec::from_param_b(0.56).unwrap();
        let q = DVQubit::balanced(DvForm::Xi);
        let h2 = build_hybrid(&sq, &bs, &q, 2, &cfg).unwrap();
        let h3 = build_hybrid(&sq, &bs, &q, 3, &cfg).unwrap();
        let h4 = build_hybrid(&sq, &bs, &q, 4, &cfg).unwrap();
        assert!((hybrid_overlap(&h2, &h2).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(hybrid_overlap(&h2, &h3).unwrap(), 0.0);
        let ov = hybrid_overlap(&h2, &h4).unwrap();
        assert!(ov.abs() > 0.0 && ov.abs() < 1.0);
    }
}
