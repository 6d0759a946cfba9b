//! Secrecy rates of a served user under the four eavesdropping regimes.
//!
//! With instantaneous eavesdropper CSI the rate cost is the realized
//! eavesdropper capacity and secrecy is perfect. With only statistical CSI
//! the rate cost is chosen from the outage law of the noise-free eavesdropper
//! capacity so the secrecy outage stays at or below `η`.

mod capacity;
mod outage;
mod validation;

pub use capacity::{
    cap_eve_noncolluding, cap_eve_upper_noncolluding, cap_eves_colluding, cap_eves_colluding_log_det,
    cap_eves_upper_colluding, cap_legit, colluding_upper_from_statistic, noncolluding_upper_from_statistic,
    CollusionProjection, EveProjection,
};
pub use outage::{
    bisect_decreasing, colluding_outage_ccdf, colluding_threshold, invert_re_colluding, invert_re_noncolluding,
    invert_re_noncolluding_bisection, noncolluding_outage_cdf, noncolluding_threshold,
    noncolluding_threshold_bisection,
};
pub use validation::{
    sample_upper_statistics, validate_outage, validate_outage_with, OutageValidationRow, MIN_VALIDATION_SAMPLES, PASS_SIGMAS,
};

use std::fmt;

use crate::channel::{beamforming_basis, ChannelRealization, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Total power `P` split as data `σ_u² = εP` and per-dimension noise
/// `σ_v² = (1-ε)P / (N_A-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmitParams<T> {
    power: T,
    data_fraction: T,
    n_antennas: usize,
}

impl<T: Scalar> TransmitParams<T> {
    pub fn new(power: T, data_fraction: T, n_antennas: usize) -> Result<Self> {
        if !(power >= T::zero()) || !power.is_finite() {
            return Err(Error::InvalidInput(format!("power must be finite and nonnegative, got {power}")));
        }
        if !(data_fraction >= T::zero() && data_fraction <= T::one()) {
            return Err(Error::InvalidInput(format!("data fraction must lie in [0, 1], got {data_fraction}")));
        }
        if n_antennas < 2 {
            return Err(Error::InvalidInput(format!("n_antennas must be at least 2, got {n_antennas}")));
        }
        Ok(Self { power, data_fraction, n_antennas })
    }

    pub fn power(&self) -> T {
        self.power
    }

    pub fn data_fraction(&self) -> T {
        self.data_fraction
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn sigma_u2(&self) -> T {
        self.data_fraction * self.power
    }

    pub fn sigma_v2(&self) -> T {
        (T::one() - self.data_fraction) * self.power / T::of_usize(self.n_antennas - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Csi {
    Instantaneous,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Collusion {
    NonColluding,
    Colluding,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyRegime<T> {
    pub csi: Csi,
    pub collusion: Collusion,
    /// Outage level; zero under instantaneous CSI.
    pub eta: T,
}

impl<T: Scalar> SecrecyRegime<T> {
    pub fn instantaneous(collusion: Collusion) -> Self {
        Self { csi: Csi::Instantaneous, collusion, eta: T::zero() }
    }

    pub fn partial(collusion: Collusion, eta: T) -> Result<Self> {
        let regime = Self { csi: Csi::Partial, collusion, eta };
        regime.validate()?;
        Ok(regime)
    }

    pub fn validate(&self) -> Result<()> {
        match self.csi {
            Csi::Instantaneous if self.eta != T::zero() => Err(Error::InvalidInput(format!(
                "instantaneous CSI gives perfect secrecy; eta must be 0, got {}",
                self.eta
            ))),
            Csi::Partial if !(self.eta > T::zero() && self.eta < T::one()) => Err(Error::InvalidInput(format!(
                "partial CSI needs eta in (0, 1), got {}",
                self.eta
            ))),
            _ => Ok(()),
        }
    }
}

/// Rate cost `R_e`. `Unbounded` stands for the +∞ cost of sending without
/// artificial noise under partial CSI; it forces a zero secrecy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateCost<T> {
    Finite(T),
    Unbounded,
}

impl<T: Scalar> RateCost<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            RateCost::Finite(v) => Some(v),
            RateCost::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, RateCost::Unbounded)
    }

    /// True when a realized eavesdropper capacity exceeds this cost.
    pub fn exceeded_by(&self, capacity: T) -> bool {
        match *self {
            RateCost::Finite(v) => capacity > v,
            RateCost::Unbounded => false,
        }
    }
}

impl<T: Scalar> fmt::Display for RateCost<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateCost::Finite(v) => write!(f, "{v}"),
            RateCost::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyRateResult<T> {
    /// Codeword rate.
    pub r_b: T,
    pub r_e: RateCost<T>,
    /// Confidential rate `[r_b - r_e]⁺`.
    pub r_s: T,
}

impl<T: Scalar> SecrecyRateResult<T> {
    pub fn new(r_b: T, r_e: RateCost<T>) -> Self {
        let r_s = match r_e {
            RateCost::Finite(e) => (r_b - e).max(T::zero()),
            RateCost::Unbounded => T::zero(),
        };
        Self { r_b, r_e, r_s }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), RateCost::Finite(T::zero()))
    }
}

/// Everything about one user's slot that the rate computation needs:
/// `‖h‖²` and the eavesdroppers projected on that user's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct UserLink<T> {
    gain: T,
    n_antennas: usize,
    eves: Vec<EveProjection<T>>,
    collusion: Option<CollusionProjection<T>>,
}

impl<T: Scalar> UserLink<T> {
    pub fn new(h: &ComplexVector<T>, eves: &[ComplexVector<T>], collusion: Collusion) -> Result<Self> {
        let basis = beamforming_basis(h)?;
        let projections = eves.iter().map(|g| EveProjection::new(g, &basis)).collect::<Result<Vec<_>>>()?;
        let joint = match collusion {
            Collusion::Colluding => Some(CollusionProjection::new(&ComplexMatrix::from_rows(eves)?, &basis)?),
            Collusion::NonColluding => None,
        };
        Ok(Self { gain: basis.source_gain(), n_antennas: h.len(), eves: projections, collusion: joint })
    }

    /// Links for every user of a realization.
    pub fn for_realization(realization: &ChannelRealization<T>, collusion: Collusion) -> Result<Vec<Self>> {
        realization
            .legit()
            .iter()
            .map(|h| Self::new(h, realization.eves(), collusion))
            .collect()
    }

    pub fn gain(&self) -> T {
        self.gain
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    /// Actual eavesdropping capacity (with receiver noise): the strongest
    /// single eavesdropper, or the joint capacity when colluding.
    pub fn eavesdropper_capacity(&self, tp: &TransmitParams<T>) -> Result<T> {
        match &self.collusion {
            Some(joint) => joint.capacity(tp),
            None => Ok(self.eves.iter().map(|e| e.capacity(tp)).fold(T::zero(), T::max)),
        }
    }
}

/// Computes secrecy rates for a fixed regime. Under partial CSI the rate
/// costs for a ratio grid are computed once up front.
#[derive(Debug, Clone)]
pub struct SecrecyEvaluator<T> {
    regime: SecrecyRegime<T>,
    n_antennas: usize,
    n_eves: usize,
    cost_table: Vec<(T, RateCost<T>)>,
}

impl<T: Scalar> SecrecyEvaluator<T> {
    pub fn new(regime: SecrecyRegime<T>, n_antennas: usize, n_eves: usize) -> Result<Self> {
        regime.validate()?;
        if n_antennas < 2 || n_eves == 0 {
            return Err(Error::InvalidInput(format!("invalid population: n_antennas={n_antennas}, n_eves={n_eves}")));
        }
        if regime.collusion == Collusion::Colluding && n_antennas <= n_eves {
            return Err(Error::UnsupportedRegime { n_antennas, n_eves });
        }
        Ok(Self { regime, n_antennas, n_eves, cost_table: Vec::new() })
    }

    /// Precomputes rate costs for every ratio in `grid`.
    pub fn with_ratio_grid(mut self, grid: &[T]) -> Result<Self> {
        if self.regime.csi == Csi::Partial {
            self.cost_table = grid.iter().map(|&e| Ok((e, self.compute_cost(e)?))).collect::<Result<_>>()?;
        }
        Ok(self)
    }

    pub fn regime(&self) -> &SecrecyRegime<T> {
        &self.regime
    }

    fn compute_cost(&self, eps: T) -> Result<RateCost<T>> {
        match self.regime.collusion {
            Collusion::NonColluding => invert_re_noncolluding(eps, self.regime.eta, self.n_antennas, self.n_eves),
            Collusion::Colluding => invert_re_colluding(eps, self.regime.eta, self.n_antennas, self.n_eves),
        }
    }

    /// Statistical rate cost for ratio `eps`. Partial CSI only.
    pub fn rate_cost(&self, eps: T) -> Result<RateCost<T>> {
        if self.regime.csi != Csi::Partial {
            return Err(Error::Misuse("statistical rate cost requested under instantaneous CSI".into()));
        }
        match self.cost_table.iter().find(|(e, _)| *e == eps) {
            Some(&(_, cost)) => Ok(cost),
            None => self.compute_cost(eps),
        }
    }

    pub fn secrecy_rate(&self, link: &UserLink<T>, tp: &TransmitParams<T>) -> Result<SecrecyRateResult<T>> {
        if link.n_antennas != self.n_antennas || tp.n_antennas() != self.n_antennas {
            return Err(Error::InvalidDimension(format!("evaluator configured for {} antennas", self.n_antennas)));
        }
        if link.eves.len() != self.n_eves {
            return Err(Error::InvalidDimension(format!("evaluator configured for {} eavesdroppers", self.n_eves)));
        }
        let r_b = cap_legit(link.gain, tp)?;
        let r_e = match self.regime.csi {
            Csi::Instantaneous => RateCost::Finite(link.eavesdropper_capacity(tp)?),
            Csi::Partial => self.rate_cost(tp.data_fraction())?,
        };
        Ok(SecrecyRateResult::new(r_b, r_e))
    }
}

/// Secrecy rate of `user` in `realization` under `regime`.
pub fn secrecy_rate<T: Scalar>(
    realization: &ChannelRealization<T>,
    user: usize,
    tp: &TransmitParams<T>,
    regime: &SecrecyRegime<T>,
) -> Result<SecrecyRateResult<T>> {
    let h = realization
        .legit()
        .get(user)
        .ok_or_else(|| Error::InvalidInput(format!("user index {user} out of range")))?;
    let evaluator = SecrecyEvaluator::new(*regime, realization.n_antennas(), realization.n_eves())?;
    let link = UserLink::new(h, realization.eves(), regime.collusion)?;
    evaluator.secrecy_rate(&link, tp)
}
