//! Input squeezed-vacuum and delocalized-photon states, and the
//! measurement-induced CV states of definite parity, with photon statistics
//! and quadrature diagnostics.
//!
//! Conventions recorded here once: the squeezing parameter is y = tanh(s)/2,
//! decibels are S = 20 s log10(e), the beam-splitter parameter is
//! B = (1 - t^2)/t^2, and the reduced squeezing after mixing is
//! y1 = y t^2 = y/(1+B). Quadratures are X = (a + a†)/2 and P = (a - a†)/2i,
//! so the vacuum variance is 1/4 in both.

use crate::error::{Error, Result};
use crate::numerics::{self, g1_norm, log_factorial, z_derivative, SeriesConfig};

/// Squared-amplitude mass allowed beyond the retained Fock window.
pub const STATE_TAIL_LIMIT: f64 = 1e-12;
/// Hard cap for automatically chosen truncations.
pub const MAX_AUTO_TRUNCATION: usize = 512;

/// Input squeezing in its three equivalent parameterizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingSpec {
    /// Squeezing amplitude s ≥ 0.
    pub s: f64,
    /// Squeezing in decibels, S = -10 log10(exp(-2s)).
    pub s_db: f64,
    /// Squeezing parameter y = tanh(s)/2 ∈ [0, 1/2).
    pub y: f64,
}

impl SqueezingSpec {
    pub fn from_amplitude(s: f64) -> Result<Self> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "squeezing amplitude s = {s} must be finite and >= 0"
            )));
        }
        Ok(Self {
            s,
            s_db: 20.0 * s / std::f64::consts::LN_10,
            y: s.tanh() / 2.0,
        })
    }

    pub fn from_db(s_db: f64) -> Result<Self> {
        if !(s_db >= 0.0) || !s_db.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "squeezing S = {s_db} dB must be finite and >= 0"
            )));
        }
        Self::from_amplitude(s_db * std::f64::consts::LN_10 / 20.0)
    }

    pub fn from_y(y: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&y) {
            return Err(Error::InvalidParameter(format!(
                "squeezing parameter y = {y} outside [0, 1/2)"
            )));
        }
        Self::from_amplitude((2.0 * y).atanh())
    }

    /// Mean photon number of the squeezed vacuum, sinh^2 s.
    pub fn mean_photons(&self) -> f64 {
        self.s.sinh().powi(2)
    }

    /// 1/cosh s, the probability prefactor of every heralded outcome.
    pub fn sech(&self) -> f64 {
        1.0 / self.s.cosh()
    }

    /// ln cosh s, computed without overflow for large s.
    pub fn ln_cosh(&self) -> f64 {
        self.s + (-2.0 * self.s).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// Beam splitter with real transmittance t and reflectance r, t^2 + r^2 = 1,
/// and derived parameter B = (1 - t^2)/t^2 = r^2/t^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSpec {
    pub t: f64,
    pub r: f64,
    pub b: f64,
}

impl BeamSplitterSpec {
    pub fn from_param_b(b: f64) -> Result<Self> {
        numerics::check_bs_param(b)?;
        let t = (1.0 + b).sqrt().recip();
        Ok(Self {
            t,
            r: (b / (1.0 + b)).sqrt(),
            b,
        })
    }

    pub fn from_transmittance(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "transmittance t = {t} outside (0, 1)"
            )));
        }
        let r2 = 1.0 - t * t;
        Ok(Self {
            t,
            r: r2.sqrt(),
            b: r2 / (t * t),
        })
    }
}

/// Squeezing parameter seen by the transmitted mode: y1 = y/(1+B) ≤ y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSqueezing {
    pub y1: f64,
}

impl ReducedSqueezing {
    pub fn new(y1: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&y1) {
            return Err(Error::InvalidParameter(format!(
                "reduced squeezing y1 = {y1} outside [0, 1/2)"
            )));
        }
        Ok(Self { y1 })
    }

    pub fn from_specs(sq: &SqueezingSpec, bs: &BeamSplitterSpec) -> Self {
        Self {
            y1: sq.y / (1.0 + bs.b),
        }
    }
}

/// Photon-number parity of a Fock-space state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Indefinite,
}

/// Both quadrature variances; the squeezed direction is whichever is smaller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureVariances {
    /// Var X with X = (a + a†)/2.
    pub x: f64,
    /// Var P with P = (a - a†)/2i.
    pub p: f64,
}

/// A truncated single-mode state with real amplitudes indexed by photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<f64>,
    parity: Parity,
}

impl FockVector {
    pub(crate) fn new_unchecked(amplitudes: Vec<f64>, parity: Parity) -> Self {
        Self { amplitudes, parity }
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> f64 {
        self.amplitudes.get(n).copied().unwrap_or(0.0)
    }

    /// Largest retained Fock index.
    pub fn truncation(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = numerics::CompensatedSum::default();
        for a in &self.amplitudes {
            acc.add(a * a);
        }
        acc.value()
    }

    /// ⟨self|other⟩ over the common Fock window.
    pub fn overlap(&self, other: &FockVector) -> f64 {
        let mut acc = numerics::CompensatedSum::default();
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            acc.add(a * b);
        }
        acc.value()
    }

    /// Fixes the global sign so the largest-magnitude amplitude is nonnegative.
    pub fn canonicalized(mut self) -> Self {
        let mut best = (0usize, 0.0f64);
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.abs() > best.1 {
                best = (i, a.abs());
            }
        }
        if self.amplitudes[best.0] < 0.0 {
            for a in &mut self.amplitudes {
                *a = -*a;
            }
        }
        self
    }

    pub fn photon_distribution(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        let mut acc = numerics::CompensatedSum::default();
        for (n, a) in self.amplitudes.iter().enumerate() {
            acc.add(n as f64 * a * a);
        }
        acc.value()
    }

    /// Variances of X = (a + a†)/2 and P = (a - a†)/2i. For definite-parity
    /// states ⟨X⟩ = ⟨P⟩ = 0, so these are the raw second moments.
    pub fn quadrature_variances(&self) -> QuadratureVariances {
        let n = self.mean_photon_number();
        let mut acc = numerics::CompensatedSum::default();
        for i in 0..self.amplitudes.len().saturating_sub(2) {
            acc.add(
                self.amplitudes[i]
                    * self.amplitudes[i + 2]
                    * (((i + 1) * (i + 2)) as f64).sqrt(),
            );
        }
        let a2 = acc.value();
        QuadratureVariances {
            x: (2.0 * a2 + 1.0 + 2.0 * n) / 4.0,
            p: (-2.0 * a2 + 1.0 + 2.0 * n) / 4.0,
        }
    }
}

/// Photon-number probabilities p_n = |amplitude_n|^2.
pub fn photon_distribution(state: &FockVector) -> Vec<f64> {
    state.photon_distribution()
}

/// Variance of the X = (a + a†)/2 quadrature.
pub fn quadrature_variance(state: &FockVector) -> f64 {
    state.quadrature_variances().x
}

fn check_normalized(state: FockVector) -> Result<FockVector> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::TruncationTooSmall {
            requested: state.truncation(),
            tail: (norm - 1.0).abs(),
            limit: 1e-10,
        });
    }
    Ok(state)
}

fn tail_error(requested: usize, tail: f64) -> Error {
    Error::TruncationTooSmall {
        requested,
        tail,
        limit: STATE_TAIL_LIMIT,
    }
}

/// Single-mode squeezed vacuum, amplitudes y^n sqrt((2n)!)/n! / sqrt(cosh s)
/// on even Fock levels.
pub fn smsv_state(sq: &SqueezingSpec, truncation: usize) -> Result<FockVector> {
    let y = sq.y;
    if y == 0.0 {
        let mut amps = vec![0.0; truncation + 1];
        amps[0] = 1.0;
        return Ok(FockVector::new_unchecked(amps, Parity::Even));
    }
    let tail = smsv_tail(sq, truncation);
    if tail > STATE_TAIL_LIMIT {
        return Err(tail_error(truncation, tail));
    }
    let ln_y = y.ln();
    let half_ln_cosh = 0.5 * sq.ln_cosh();
    let mut amps = vec![0.0; truncation + 1];
    for n in 0..=(truncation / 2) as u64 {
        let la = 0.5 * log_factorial(2 * n) - log_factorial(n) + n as f64 * ln_y - half_ln_cosh;
        amps[2 * n as usize] = la.exp();
    }
    check_normalized(FockVector::new_unchecked(amps, Parity::Even))
}

/// Relative squared-amplitude mass of the squeezed vacuum beyond `truncation`.
fn smsv_tail(sq: &SqueezingSpec, truncation: usize) -> f64 {
    let y = sq.y;
    if y == 0.0 {
        return 0.0;
    }
    let p = (truncation / 2) as u64;
    // squared amplitudes q_n = C(2n,n) y^{2n} / cosh s; ratio ≤ 4y^2 for all n
    let rbar = 4.0 * y * y;
    let lq = log_factorial(2 * p) - 2.0 * log_factorial(p) + 2.0 * p as f64 * y.ln()
        - sq.ln_cosh();
    lq.exp() * rbar / (1.0 - rbar)
}

/// Smallest truncation with a certified squeezed-vacuum tail below 1e-12,
/// capped at 512.
pub fn required_truncation_smsv(sq: &SqueezingSpec) -> Result<usize> {
    for n in 0..=(MAX_AUTO_TRUNCATION / 2) {
        if smsv_tail(sq, 2 * n) <= STATE_TAIL_LIMIT {
            return Ok(2 * n);
        }
    }
    Err(tail_error(MAX_AUTO_TRUNCATION, smsv_tail(sq, MAX_AUTO_TRUNCATION)))
}

pub fn smsv_state_auto(sq: &SqueezingSpec) -> Result<FockVector> {
    smsv_state(sq, required_truncation_smsv(sq)?)
}

/// The k-photon-subtracted CV state of definite parity, normalized by
/// sqrt(Z^{(k)}(y1)). Even k populates even Fock levels, odd k odd ones.
pub fn cv_state_subtract(
    reduced: ReducedSqueezing,
    k: u32,
    truncation: usize,
    cfg: &SeriesConfig,
) -> Result<FockVector> {
    let y1 = reduced.y1;
    if y1 == 0.0 {
        return Ok(basis_state(
            if k % 2 == 0 { 0 } else { 1 },
            truncation,
        )?);
    }
    let zk = z_derivative(y1, k, cfg)?;
    let tail = subtract_tail(y1, k, truncation) / zk;
    if tail > STATE_TAIL_LIMIT {
        return Err(tail_error(truncation, tail));
    }
    let ln_y = y1.ln();
    let half_ln_z = 0.5 * zk.ln();
    let mut amps = vec![0.0; truncation + 1];
    if k % 2 == 0 {
        let m = (k / 2) as u64;
        for n in 0..=(truncation / 2) as u64 {
            let la = n as f64 * ln_y - 0.5 * log_factorial(2 * n)
                + log_factorial(2 * (n + m))
                - log_factorial(n + m)
                - half_ln_z;
            amps[2 * n as usize] = la.exp();
        }
        check_normalized(FockVector::new_unchecked(amps, Parity::Even))
    } else {
        let m = ((k - 1) / 2) as u64;
        if truncation < 1 {
            return Err(tail_error(truncation, 1.0));
        }
        for n in 0..=((truncation - 1) / 2) as u64 {
            let la = (n as f64 + 0.5) * ln_y - 0.5 * log_factorial(2 * n + 1)
                + log_factorial(2 * (n + m + 1))
                - log_factorial(n + m + 1)
                - half_ln_z;
            amps[2 * n as usize + 1] = la.exp();
        }
        check_normalized(FockVector::new_unchecked(amps, Parity::Odd))
    }
}

/// Unnormalized squared-amplitude tail of the k-subtracted family beyond
/// `truncation` (relative to Z^{(k)} after division by the caller).
fn subtract_tail(y1: f64, k: u32, truncation: usize) -> f64 {
    if y1 == 0.0 {
        return 0.0;
    }
    let ln_y = y1.ln();
    if k % 2 == 0 {
        let m = (k / 2) as u64;
        let p = (truncation / 2) as u64;
        let lq = 2.0 * p as f64 * ln_y - log_factorial(2 * p)
            + 2.0 * (log_factorial(2 * (p + m)) - log_factorial(p + m));
        // ratio of consecutive squared amplitudes: 4 y1^2 (2n+2m+1)^2/((2n+1)(2n+2)),
        // decreasing toward 4 y1^2 for m >= 1; exactly bounded by 4 y1^2 for m = 0
        let rbar = if m == 0 {
            4.0 * y1 * y1
        } else {
            4.0 * y1 * y1 * ((2 * p + 2 * m + 1).pow(2)) as f64
                / (((2 * p + 1) * (2 * p + 2)) as f64)
        };
        geometric_tail(lq.exp(), rbar)
    } else {
        let m = ((k - 1) / 2) as u64;
        let p = (truncation.saturating_sub(1) / 2) as u64;
        let lq = (2 * p + 1) as f64 * ln_y - log_factorial(2 * p + 1)
            + 2.0 * (log_factorial(2 * (p + m + 1)) - log_factorial(p + m + 1));
        let rbar = 4.0 * y1 * y1 * ((2 * p + 2 * m + 3).pow(2)) as f64
            / (((2 * p + 2) * (2 * p + 3)) as f64);
        geometric_tail(lq.exp(), rbar)
    }
}

fn geometric_tail(term: f64, rbar: f64) -> f64 {
    if rbar >= 1.0 {
        f64::INFINITY
    } else {
        term * rbar / (1.0 - rbar)
    }
}

/// The photon-added, k-photon-subtracted CV state, normalized by
/// sqrt(G_k^{(1)}(y1, B)). Parity is opposite to the k-subtracted state:
/// odd Fock support for even k, even support for odd k. The sign changes of
/// the (1 - (2n+c) B / k) factors are preserved.
pub fn cv_state_add_subtract(
    reduced: ReducedSqueezing,
    bs_param: f64,
    k: u32,
    truncation: usize,
    cfg: &SeriesConfig,
) -> Result<FockVector> {
    numerics::check_bs_param(bs_param)?;
    let y1 = reduced.y1;
    if y1 == 0.0 {
        return Ok(basis_state(
            if k % 2 == 0 { 1 } else { 0 },
            truncation,
        )?);
    }
    let g = g1_norm(y1, bs_param, k, cfg)?;
    let tail = add_subtract_tail(y1, bs_param, k, truncation) / g;
    if tail > STATE_TAIL_LIMIT {
        return Err(tail_error(truncation, tail));
    }
    let ln_y = y1.ln();
    let half_ln_g = 0.5 * g.ln();
    let mut amps = vec![0.0; truncation + 1];
    if k == 0 {
        if truncation < 1 {
            return Err(tail_error(truncation, 1.0));
        }
        for n in 0..=((truncation - 1) / 2) as u64 {
            let la = n as f64 * ln_y - 0.5 * log_factorial(2 * n + 1) + log_factorial(2 * n)
                - log_factorial(n)
                - half_ln_g;
            amps[2 * n as usize + 1] = la.exp() * (2 * n + 1) as f64;
        }
        check_normalized(FockVector::new_unchecked(amps, Parity::Odd))
    } else if k % 2 == 0 {
        let m = (k / 2) as u64;
        if truncation < 1 {
            return Err(tail_error(truncation, 1.0));
        }
        for n in 0..=((truncation - 1) / 2) as u64 {
            let mag = ((n as f64 + 0.5) * ln_y - 0.5 * log_factorial(2 * n + 1)
                + log_factorial(2 * (n + m))
                - log_factorial(n + m)
                - half_ln_g)
                .exp();
            let factor = 1.0 - (2 * n + 1) as f64 * bs_param / k as f64;
            amps[2 * n as usize + 1] = mag * factor;
        }
        check_normalized(FockVector::new_unchecked(amps, Parity::Odd))
    } else {
        let m = ((k - 1) / 2) as u64;
        for n in 0..=(truncation / 2) as u64 {
            let mag = (n as f64 * ln_y - 0.5 * log_factorial(2 * n)
                + log_factorial(2 * (n + m))
                - log_factorial(n + m)
                - half_ln_g)
                .exp();
            let factor = 1.0 - (2 * n) as f64 * bs_param / k as f64;
            amps[2 * n as usize] = mag * factor;
        }
        check_normalized(FockVector::new_unchecked(amps, Parity::Even))
    }
}

/// Unnormalized squared-amplitude tail of the photon-added family. The
/// distortion factors are bounded by (1 - cβ)^2 ≤ 2 + 2 c^2 β^2, which splits
/// the tail into two series with monotone certified ratio bounds.
fn add_subtract_tail(y1: f64, bs_param: f64, k: u32, truncation: usize) -> f64 {
    if y1 == 0.0 {
        return 0.0;
    }
    let ln_y = y1.ln();
    if k == 0 {
        let p = (truncation.saturating_sub(1) / 2) as u64;
        let lq = 2.0 * p as f64 * ln_y + log_factorial(2 * p) - 2.0 * log_factorial(p);
        let rbar = 4.0 * y1 * y1 * ((2 * p + 3) as f64) / ((2 * p + 2) as f64);
        return geometric_tail(lq.exp() * ((2 * p + 1) as f64), rbar);
    }
    let beta = bs_param / k as f64;
    if k % 2 == 0 {
        let m = (k / 2) as u64;
        let p = (truncation.saturating_sub(1) / 2) as u64;
        let lbase = (2 * p + 1) as f64 * ln_y - log_factorial(2 * p + 1)
            + 2.0 * (log_factorial(2 * (p + m)) - log_factorial(p + m));
        let base = lbase.exp();
        let r1 = 4.0 * y1 * y1 * ((2 * p + 2 * m + 1).pow(2)) as f64
            / (((2 * p + 2) * (2 * p + 3)) as f64);
        let r2 = r1 * (((2 * p + 3) as f64) / ((2 * p + 1) as f64)).powi(2);
        2.0 * geometric_tail(base, r1)
            + 2.0 * beta * beta * geometric_tail(base * ((2 * p + 1).pow(2)) as f64, r2)
    } else {
        let m = ((k - 1) / 2) as u64;
        let p = (truncation / 2) as u64;
        let lbase = 2.0 * p as f64 * ln_y - log_factorial(2 * p)
            + 2.0 * (log_factorial(2 * (p + m)) - log_factorial(p + m));
        let base = lbase.exp();
        let r1 = if m == 0 {
            4.0 * y1 * y1
        } else {
            4.0 * y1 * y1 * ((2 * p + 2 * m + 1).pow(2)) as f64
                / (((2 * p + 1) * (2 * p + 2)) as f64)
        };
        let r2 = if p == 0 {
            // weight (2n)^2 vanishes at n = 0; bound from n = 1 on
            r1 * 4.0
        } else {
            r1 * (((2 * p + 2) as f64) / ((2 * p) as f64)).powi(2)
        };
        2.0 * geometric_tail(base, r1)
            + 2.0 * beta * beta * geometric_tail(base * ((2 * p).pow(2).max(1)) as f64, r2)
    }
}

/// Smallest truncation certifying the requested family's tail below 1e-12.
pub fn required_truncation_cv(
    reduced: ReducedSqueezing,
    bs_param: Option<f64>,
    k: u32,
    cfg: &SeriesConfig,
) -> Result<usize> {
    let y1 = reduced.y1;
    if y1 == 0.0 {
        return Ok(2);
    }
    let total = match bs_param {
        Some(b) => g1_norm(y1, b, k, cfg)?,
        None => z_derivative(y1, k, cfg)?,
    };
    for t in (0..=MAX_AUTO_TRUNCATION).step_by(2) {
        let tail = match bs_param {
            Some(b) => add_subtract_tail(y1, b, k, t),
            None => subtract_tail(y1, k, t),
        } / total;
        if tail <= STATE_TAIL_LIMIT {
            // keep one spare level so both parities fit
            return Ok(t + 1);
        }
    }
    Err(tail_error(MAX_AUTO_TRUNCATION, f64::NAN))
}

pub fn cv_state_subtract_auto(
    reduced: ReducedSqueezing,
    k: u32,
    cfg: &SeriesConfig,
) -> Result<FockVector> {
    let t = required_truncation_cv(reduced, None, k, cfg)?;
    cv_state_subtract(reduced, k, t, cfg)
}

pub fn cv_state_add_subtract_auto(
    reduced: ReducedSqueezing,
    bs_param: f64,
    k: u32,
    cfg: &SeriesConfig,
) -> Result<FockVector> {
    let t = required_truncation_cv(reduced, Some(bs_param), k, cfg)?;
    cv_state_add_subtract(reduced, bs_param, k, t, cfg)
}

fn basis_state(n: usize, truncation: usize) -> Result<FockVector> {
    if truncation < n {
        return Err(Error::TruncationTooSmall {
            requested: truncation,
            tail: 1.0,
            limit: STATE_TAIL_LIMIT,
        });
    }
    let mut amps = vec![0.0; truncation + 1];
    amps[n] = 1.0;
    Ok(FockVector::new_unchecked(
        amps,
        if n % 2 == 0 { Parity::Even } else { Parity::Odd },
    ))
}

/// Mean photon number of the k-subtracted state: y1 Z^{(k+1)}/Z^{(k)}.
pub fn mean_photons_sub(reduced: ReducedSqueezing, k: u32, cfg: &SeriesConfig) -> Result<f64> {
    let y1 = reduced.y1;
    if y1 == 0.0 {
        // vacuum limit for even k, a bare photon for odd k
        return Ok(if k % 2 == 0 { 0.0 } else { 1.0 });
    }
    Ok(y1 * z_derivative(y1, k + 1, cfg)? / z_derivative(y1, k, cfg)?)
}

/// Mean photon number of the photon-added k-subtracted state,
/// (y1 d/dy1) G_k / G_k, shifted by one for k = 0 where the squared
/// amplitudes carry y1^{2n} at Fock level 2n+1.
pub fn mean_photons_add_subtract(
    reduced: ReducedSqueezing,
    bs_param: f64,
    k: u32,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let y1 = reduced.y1;
    if k == 0 {
        let z = z_derivative(y1, 0, cfg)?;
        return Ok(1.0 + 12.0 * y1 * y1 * z * z);
    }
    if y1 == 0.0 {
        return Ok(if k % 2 == 0 { 1.0 } else { 0.0 });
    }
    Ok(y1 * numerics::g1_norm_dy(y1, bs_param, k, cfg)? / g1_norm(y1, bs_param, k, cfg)?)
}

/// Which DV layout the photonic qubit uses: a delocalized photon (ξ) or a
/// vacuum/correlated-pair superposition (ζ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DvForm {
    Xi,
    Zeta,
}

/// Real-amplitude photonic qubit, a0^2 + a1^2 = 1 with a0, a1 > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DVQubit {
    pub a0: f64,
    pub a1: f64,
    pub form: DvForm,
}

impl DVQubit {
    pub fn new(a0: f64, a1: f64, form: DvForm) -> Result<Self> {
        if !(a0 > 0.0) {
            return Err(Error::DegenerateQubit);
        }
        if !(a1 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "a1 = {a1} must be positive"
            )));
        }
        if (a0 * a0 + a1 * a1 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "qubit amplitudes not normalized: a0^2 + a1^2 = {}",
                a0 * a0 + a1 * a1
            )));
        }
        Ok(Self { a0, a1, form })
    }

    pub fn balanced(form: DvForm) -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        Self { a0: a, a1: a, form }
    }

    pub fn from_amplitude_ratio(a1_over_a0: f64, form: DvForm) -> Result<Self> {
        if !(a1_over_a0 > 0.0) || !a1_over_a0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "a1/a0 = {a1_over_a0} must be positive and finite"
            )));
        }
        let a0 = (1.0 + a1_over_a0 * a1_over_a0).sqrt().recip();
        Self::new(a0, a1_over_a0 * a0, form)
    }

    /// The qubit that turns a raw distortion b into b' = 1:
    /// a0 = b/sqrt(1+b^2), a1 = 1/sqrt(1+b^2).
    pub fn for_unit_distortion(b: f64, form: DvForm) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "distortion b = {b} must be positive and finite"
            )));
        }
        let n = (1.0 + b * b).sqrt();
        Self::new(b / n, 1.0 / n, form)
    }

    pub fn ratio(&self) -> f64 {
        self.a1 / self.a0
    }
}
