//! Channel capacities under beamforming plus artificial noise.
//!
//! All capacities are in bits per slot with unit receiver noise. Eavesdropper
//! channels are first projected onto the basis (`EveProjection`,
//! `CollusionProjection`); the projections depend only on the channel, so the
//! controller reuses them across the whole power/ratio grid.

use crate::channel::{BeamformingBasis, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::scalar::Scalar;

use super::TransmitParams;

/// `log2(1 + ε P ‖h‖²)`.
pub fn cap_legit<T: Scalar>(h_gain: T, tp: &TransmitParams<T>) -> Result<T> {
    if !(h_gain >= T::zero()) || !h_gain.is_finite() {
        return Err(Error::InvalidInput(format!("channel gain must be finite and nonnegative, got {h_gain}")));
    }
    Ok((tp.sigma_u2() * h_gain).ln_1p() / T::LN_2())
}

/// What one eavesdropper sees of the basis: `|g z1|²` and `g Z2 Z2ᴴ gᴴ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveProjection<T> {
    pub signal: T,
    pub leakage: T,
}

impl<T: Scalar> EveProjection<T> {
    pub fn new(g: &ComplexVector<T>, basis: &BeamformingBasis<T>) -> Result<Self> {
        let signal = g.dot(basis.z1())?.norm_sqr();
        let leakage = g.mul_mat(basis.z2())?.norm_sqr();
        Ok(Self { signal, leakage })
    }

    pub fn capacity(&self, tp: &TransmitParams<T>) -> T {
        let sinr = self.signal * tp.sigma_u2() / (self.leakage * tp.sigma_v2() + T::one());
        sinr.ln_1p() / T::LN_2()
    }

    /// `|g z1|² (N_A - 1) / (g Z2 Z2ᴴ gᴴ)`, the ratio whose law drives the
    /// non-colluding outage.
    pub fn ratio_statistic(&self, n_antennas: usize) -> Result<T> {
        if !(self.leakage > T::zero()) {
            return Err(Error::NumericalDegeneracy("eavesdropper channel has no null-space component".into()));
        }
        Ok(self.signal * T::of_usize(n_antennas - 1) / self.leakage)
    }
}

/// Colluding eavesdroppers' view: `ḡ1 = G z1` and `Ḡ2 Ḡ2ᴴ` with `Ḡ2 = G Z2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollusionProjection<T> {
    pub signal: ComplexVector<T>,
    pub noise_gram: ComplexMatrix<T>,
}

impl<T: Scalar> CollusionProjection<T> {
    pub fn new(g: &ComplexMatrix<T>, basis: &BeamformingBasis<T>) -> Result<Self> {
        let n_antennas = basis.n_antennas();
        if g.cols() != n_antennas {
            return Err(Error::InvalidDimension(format!(
                "eavesdropper matrix has {} columns, basis has {n_antennas} antennas",
                g.cols()
            )));
        }
        if g.rows() >= n_antennas {
            return Err(Error::UnsupportedRegime { n_antennas, n_eves: g.rows() });
        }
        let signal = g.mul_vec(basis.z1())?;
        let noise_gram = g.mul(basis.z2())?.gram();
        Ok(Self { signal, noise_gram })
    }

    /// `σ_v² Ḡ2Ḡ2ᴴ + I`.
    fn interference(&self, tp: &TransmitParams<T>) -> Result<ComplexMatrix<T>> {
        self.noise_gram.scale(tp.sigma_v2()).add_diagonal(T::one())
    }

    /// Rank-one form `log2(1 + σ_u² ḡ1ᴴ (σ_v² Ḡ2Ḡ2ᴴ + I)⁻¹ ḡ1)`.
    pub fn capacity(&self, tp: &TransmitParams<T>) -> Result<T> {
        if tp.sigma_u2() == T::zero() {
            return Ok(T::zero());
        }
        let q = Cholesky::factor(&self.interference(tp)?)?.quadratic_form(&self.signal)?;
        Ok((tp.sigma_u2() * q).ln_1p() / T::LN_2())
    }

    /// Ratio of log-determinants, with and without the data term.
    pub fn capacity_log_det(&self, tp: &TransmitParams<T>) -> Result<T> {
        let without = self.interference(tp)?;
        let with = without.add_outer(&self.signal, tp.sigma_u2())?;
        let num = Cholesky::factor(&with)?.ln_det();
        let den = Cholesky::factor(&without)?.ln_det();
        Ok((num - den) / T::LN_2())
    }

    /// `ḡ1ᴴ (Ḡ2Ḡ2ᴴ)⁻¹ ḡ1`.
    pub fn quadratic_statistic(&self) -> Result<T> {
        Cholesky::factor(&self.noise_gram)
            .map_err(|_| Error::NumericalDegeneracy("projected eavesdropper Gram matrix is singular".into()))?
            .quadratic_form(&self.signal)
    }
}

fn check_open_fraction<T: Scalar>(eps: T) -> Result<()> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::InvalidInput(format!("upper-bound capacity needs 0 < epsilon < 1, got {eps}")));
    }
    Ok(())
}

/// Noise-free non-colluding capacity as a function of the ratio statistic.
pub fn noncolluding_upper_from_statistic<T: Scalar>(ratio: T, eps: T) -> T {
    (ratio * eps / (T::one() - eps)).ln_1p() / T::LN_2()
}

/// Noise-free colluding capacity as a function of the quadratic statistic.
pub fn colluding_upper_from_statistic<T: Scalar>(q: T, eps: T, n_antennas: usize) -> T {
    (T::of_usize(n_antennas - 1) * eps / (T::one() - eps) * q).ln_1p() / T::LN_2()
}

fn check_antennas<T: Scalar>(g_len: usize, basis: &BeamformingBasis<T>, tp: Option<&TransmitParams<T>>) -> Result<()> {
    let n = basis.n_antennas();
    if g_len != n || tp.is_some_and(|tp| tp.n_antennas() != n) {
        return Err(Error::InvalidDimension(format!("antenna count mismatch with basis of {n}")));
    }
    Ok(())
}

/// Capacity of eavesdropper `j` with artificial noise in the null space.
pub fn cap_eve_noncolluding<T: Scalar>(
    g: &ComplexVector<T>,
    basis: &BeamformingBasis<T>,
    tp: &TransmitParams<T>,
) -> Result<T> {
    check_antennas(g.len(), basis, Some(tp))?;
    Ok(EveProjection::new(g, basis)?.capacity(tp))
}

/// Capacity of all eavesdroppers decoding jointly.
pub fn cap_eves_colluding<T: Scalar>(
    g: &ComplexMatrix<T>,
    basis: &BeamformingBasis<T>,
    tp: &TransmitParams<T>,
) -> Result<T> {
    check_antennas(g.cols(), basis, Some(tp))?;
    CollusionProjection::new(g, basis)?.capacity(tp)
}

/// Same quantity as [`cap_eves_colluding`] through two determinants.
pub fn cap_eves_colluding_log_det<T: Scalar>(
    g: &ComplexMatrix<T>,
    basis: &BeamformingBasis<T>,
    tp: &TransmitParams<T>,
) -> Result<T> {
    check_antennas(g.cols(), basis, Some(tp))?;
    CollusionProjection::new(g, basis)?.capacity_log_det(tp)
}

/// Non-colluding capacity with receiver noise dropped; depends only on `ε`.
pub fn cap_eve_upper_noncolluding<T: Scalar>(g: &ComplexVector<T>, basis: &BeamformingBasis<T>, eps: T) -> Result<T> {
    check_open_fraction(eps)?;
    check_antennas(g.len(), basis, None)?;
    let ratio = EveProjection::new(g, basis)?.ratio_statistic(basis.n_antennas())?;
    Ok(noncolluding_upper_from_statistic(ratio, eps))
}

/// Colluding capacity with receiver noise dropped.
pub fn cap_eves_upper_colluding<T: Scalar>(g: &ComplexMatrix<T>, basis: &BeamformingBasis<T>, eps: T) -> Result<T> {
    check_open_fraction(eps)?;
    check_antennas(g.cols(), basis, None)?;
    let q = CollusionProjection::new(g, basis)?.quadratic_statistic()?;
    Ok(colluding_upper_from_statistic(q, eps, basis.n_antennas()))
}
