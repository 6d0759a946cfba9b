//! Drift-plus-penalty controller: admission control, joint user / power /
//! ratio selection, queue updates and the closed-form performance bounds.

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::secrecy::{SecrecyEvaluator, SecrecyRateResult, SecrecyRegime, TransmitParams, UserLink};

/// Data backlogs `U_i` (bits) and the virtual power queue `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct QueueState<T> {
    pub data: Vec<T>,
    pub power_virtual: T,
}

impl<T: Scalar> QueueState<T> {
    pub fn empty(n_users: usize) -> Self {
        Self { data: vec![T::zero(); n_users], power_virtual: T::zero() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: T| v >= T::zero() && v.is_finite();
        if !self.data.iter().copied().all(ok) || !ok(self.power_virtual) {
            return Err(Error::InvalidInput("queue backlogs must be finite and nonnegative".into()));
        }
        Ok(())
    }
}

/// Tradeoff parameter `V` and per-user utility weights `θ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlWeights<T> {
    v: T,
    theta: Vec<T>,
}

impl<T: Scalar> ControlWeights<T> {
    pub fn new(v: T, theta: Vec<T>) -> Result<Self> {
        if !(v > T::zero()) || !v.is_finite() {
            return Err(Error::InvalidInput(format!("V must be positive, got {v}")));
        }
        if theta.is_empty() || !theta.iter().all(|&t| t > T::zero() && t.is_finite()) {
            return Err(Error::InvalidInput("theta must be a non-empty list of positive weights".into()));
        }
        Ok(Self { v, theta })
    }

    pub fn v(&self) -> T {
        self.v
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    /// `V θ_i`, the backlog above which user `i` stops admitting.
    pub fn admission_threshold(&self, user: usize) -> T {
        self.v * self.theta[user]
    }

    /// `V θ_i + A_max`.
    pub fn queue_bound(&self, user: usize, a_max: T) -> T {
        self.admission_threshold(user) + a_max
    }
}

/// Minimizes `Σ (U_i - Vθ_i) R_i` over `0 ≤ R_i ≤ A_i`. A zero coefficient
/// admits everything.
pub fn admit<T: Scalar>(arrivals: &[T], queues: &QueueState<T>, weights: &ControlWeights<T>) -> Result<Vec<T>> {
    if arrivals.len() != queues.data.len() || arrivals.len() != weights.theta.len() {
        return Err(Error::InvalidDimension(format!(
            "{} arrivals, {} queues, {} weights",
            arrivals.len(),
            queues.data.len(),
            weights.theta.len()
        )));
    }
    arrivals
        .iter()
        .zip(&queues.data)
        .enumerate()
        .map(|(i, (&a, &u))| {
            if !(a >= T::zero()) {
                return Err(Error::InvalidInput(format!("arrival for user {i} is negative")));
            }
            Ok(if u <= weights.admission_threshold(i) { a } else { T::zero() })
        })
        .collect()
}

/// Discrete action sets: total powers `Π` and data fractions `Λ`, both kept
/// sorted ascending so enumeration order is the tie-break order.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionGrid<T> {
    powers: Vec<T>,
    ratios: Vec<T>,
}

impl<T: Scalar> ActionGrid<T> {
    pub fn new(mut powers: Vec<T>, mut ratios: Vec<T>) -> Result<Self> {
        if powers.is_empty() || ratios.is_empty() {
            return Err(Error::config("power and ratio grids must be non-empty"));
        }
        if !powers.iter().all(|&p| p >= T::zero() && p.is_finite()) {
            return Err(Error::config("power grid entries must be finite and nonnegative"));
        }
        if !ratios.iter().all(|&e| e >= T::zero() && e <= T::one()) {
            return Err(Error::config("ratio grid entries must lie in [0, 1]"));
        }
        let by_value = |a: &T, b: &T| a.partial_cmp(b).expect("finite grid values");
        powers.sort_by(by_value);
        powers.dedup();
        ratios.sort_by(by_value);
        ratios.dedup();
        Ok(Self { powers, ratios })
    }

    pub fn powers(&self) -> &[T] {
        &self.powers
    }

    pub fn ratios(&self) -> &[T] {
        &self.ratios
    }

    pub fn p_max(&self) -> T {
        *self.powers.last().expect("non-empty grid")
    }
}

/// Outcome of the power-allocation step.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation<T> {
    /// Candidate user; only actually served when [`Allocation::served_user`] is `Some`.
    pub user: usize,
    pub power: T,
    pub data_fraction: T,
    pub rate: SecrecyRateResult<T>,
    /// `U_user · r_s - X · P`.
    pub objective: T,
    /// Largest `r_s / P` over all enumerated actions with `P > 0`.
    pub peak_rate_per_watt: T,
}

impl<T: Scalar> Allocation<T> {
    pub fn served_rate(&self) -> T {
        self.rate.r_s
    }

    /// The user that receives data this slot, if any.
    pub fn served_user(&self) -> Option<usize> {
        (self.rate.r_s > T::zero()).then_some(self.user)
    }
}

/// Full per-slot decision: admissions plus allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotDecision<T> {
    pub admissions: Vec<T>,
    pub allocation: Allocation<T>,
}

/// Maximizes `U_i r_s(i, P, ε) - X P` by exhaustive search over users and
/// the grid. Ties go to the lowest user index, then lowest `P`, then lowest `ε`.
pub fn allocate<T: Scalar>(
    links: &[UserLink<T>],
    queues: &QueueState<T>,
    grid: &ActionGrid<T>,
    evaluator: &SecrecyEvaluator<T>,
) -> Result<Allocation<T>> {
    if links.is_empty() || links.len() != queues.data.len() {
        return Err(Error::InvalidDimension(format!("{} links for {} queues", links.len(), queues.data.len())));
    }
    let mut best: Option<Allocation<T>> = None;
    let mut peak = T::zero();
    for (user, link) in links.iter().enumerate() {
        let backlog = queues.data[user];
        for &power in grid.powers() {
            for &eps in grid.ratios() {
                let tp = TransmitParams::new(power, eps, link.n_antennas())?;
                let rate = evaluator.secrecy_rate(link, &tp)?;
                if power > T::zero() {
                    peak = peak.max(rate.r_s / power);
                }
                let objective = backlog * rate.r_s - queues.power_virtual * power;
                if best.as_ref().is_none_or(|b| objective > b.objective) {
                    best = Some(Allocation {
                        user,
                        power,
                        data_fraction: eps,
                        rate,
                        objective,
                        peak_rate_per_watt: T::zero(),
                    });
                }
            }
        }
    }
    let mut best = best.expect("non-empty enumeration");
    best.peak_rate_per_watt = peak;
    Ok(best)
}

/// [`allocate`] straight from a channel realization.
pub fn allocate_for_realization<T: Scalar>(
    realization: &ChannelRealization<T>,
    queues: &QueueState<T>,
    grid: &ActionGrid<T>,
    regime: &SecrecyRegime<T>,
) -> Result<Allocation<T>> {
    let evaluator =
        SecrecyEvaluator::new(*regime, realization.n_antennas(), realization.n_eves())?.with_ratio_grid(grid.ratios())?;
    let links = UserLink::for_realization(realization, regime.collusion)?;
    allocate(&links, queues, grid, &evaluator)
}

/// `max(U - r_s I, 0) + R`.
pub fn update_data_queue<T: Scalar>(backlog: T, served_rate: T, served: bool, admitted: T) -> T {
    let drained = if served { (backlog - served_rate).max(T::zero()) } else { backlog };
    drained + admitted
}

/// `max(X - P_av, 0) + P`.
pub fn update_power_queue<T: Scalar>(backlog: T, power: T, p_av: T) -> T {
    (backlog - p_av).max(T::zero()) + power
}

/// Inputs to the performance bounds besides the run-dependent `Rs_max`, `γ`.
#[derive(Debug, Clone, Copy)]
pub struct BoundParams<'a, T> {
    pub a_max: T,
    pub p_max: T,
    pub p_av: T,
    pub weights: &'a ControlWeights<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceBounds<T> {
    /// `(K A_max² + Rs_max²) / 2`.
    pub b: T,
    /// `(P_max² + P_av²) / 2`.
    pub c: T,
    /// `V θ_i + A_max` per user.
    pub u_max: Vec<T>,
    /// `γ V θ_max + γ A_max + P_max`.
    pub x_max: T,
    pub gamma: T,
    /// `(B + C) / V`.
    pub optimality_gap: T,
}

pub fn compute_bounds<T: Scalar>(params: &BoundParams<'_, T>, rs_max: T, gamma: T) -> Result<PerformanceBounds<T>> {
    let w = params.weights;
    for (name, v) in [("a_max", params.a_max), ("p_max", params.p_max), ("p_av", params.p_av), ("rs_max", rs_max), ("gamma", gamma)] {
        if !(v >= T::zero()) || !v.is_finite() {
            return Err(Error::InvalidInput(format!("{name} must be finite and nonnegative, got {v}")));
        }
    }
    let half = T::lit(0.5);
    let k = T::of_usize(w.theta.len());
    let b = (k * params.a_max * params.a_max + rs_max * rs_max) * half;
    let c = (params.p_max * params.p_max + params.p_av * params.p_av) * half;
    let u_max = (0..w.theta.len()).map(|i| w.queue_bound(i, params.a_max)).collect();
    let theta_max = w.theta.iter().copied().fold(T::zero(), T::max);
    let x_max = gamma * w.v * theta_max + gamma * params.a_max + params.p_max;
    Ok(PerformanceBounds { b, c, u_max, x_max, gamma, optimality_gap: (b + c) / w.v })
}

/// Largest `V` meeting every delay target `D_i`: `min_i (D_i - A_max) / θ_i`.
pub fn choose_v<T: Scalar>(delay_targets: &[T], theta: &[T], a_max: T) -> Result<T> {
    if delay_targets.is_empty() || delay_targets.len() != theta.len() {
        return Err(Error::InvalidDimension(format!(
            "{} delay targets for {} weights",
            delay_targets.len(),
            theta.len()
        )));
    }
    let mut v = T::infinity();
    for (user, (&d, &t)) in delay_targets.iter().zip(theta).enumerate() {
        if !(t > T::zero()) {
            return Err(Error::InvalidInput(format!("theta for user {user} must be positive")));
        }
        if !(d > a_max) {
            return Err(Error::InfeasibleDelay { user, target: d.to_f64_lossy(), a_max: a_max.to_f64_lossy() });
        }
        v = v.min((d - a_max) / t);
    }
    Ok(v)
}
