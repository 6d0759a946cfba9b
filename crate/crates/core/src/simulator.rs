//! Slotted simulation: draw channels and arrivals, admit, allocate, audit the
//! secrecy outage of the transmitted slot, update queues.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::channel::{sample_realization, stream_rng, ChannelDims, ChannelRealization, ChannelStreams, Stream};
use crate::config::ScenarioConfig;
use crate::control::{
    admit, allocate, compute_bounds, update_data_queue, update_power_queue, ActionGrid, Allocation, BoundParams,
    ControlWeights, PerformanceBounds, QueueState, SlotDecision,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::secrecy::{RateCost, SecrecyEvaluator, SecrecyRegime, TransmitParams, UserLink};

/// Per-user arrivals, each `Binomial(A_max, λ / A_max)`.
pub fn sample_arrivals<T: Scalar, R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Result<Vec<T>> {
    if config.a_max == 0 || !(config.arrival_mean > 0.0 && config.arrival_mean <= config.a_max as f64) {
        return Err(Error::config(format!(
            "arrival_mean must lie in (0, a_max = {}], got {}",
            config.a_max, config.arrival_mean
        )));
    }
    let law = Binomial::new(config.a_max as u64, config.arrival_mean / config.a_max as f64)
        .map_err(|e| Error::config(format!("arrival law: {e}")))?;
    Ok((0..config.n_users).map(|_| T::of_usize(law.sample(rng) as usize)).collect())
}

/// Whether the transmitted slot leaked: realized eavesdropper capacity
/// strictly above the chosen rate cost. Only meaningful for slots that
/// carried data.
pub fn audit_outage_on_link<T: Scalar>(allocation: &Allocation<T>, link: &UserLink<T>) -> Result<bool> {
    if allocation.served_user().is_none() {
        return Err(Error::Misuse("outage audit on a slot that carried no data".into()));
    }
    let tp = TransmitParams::new(allocation.power, allocation.data_fraction, link.n_antennas())?;
    Ok(allocation.rate.r_e.exceeded_by(link.eavesdropper_capacity(&tp)?))
}

pub fn audit_outage<T: Scalar>(
    allocation: &Allocation<T>,
    realization: &ChannelRealization<T>,
    regime: &SecrecyRegime<T>,
) -> Result<bool> {
    let h = realization
        .legit()
        .get(allocation.user)
        .ok_or_else(|| Error::InvalidInput(format!("user index {} out of range", allocation.user)))?;
    let link = UserLink::new(h, realization.eves(), regime.collusion)?;
    audit_outage_on_link(allocation, &link)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub trace: bool,
}

/// One slot as observed after the queue update.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotTraceRecord<T> {
    pub slot: u64,
    pub arrivals: Vec<T>,
    pub admissions: Vec<T>,
    pub served_user: Option<usize>,
    pub power: T,
    pub data_fraction: T,
    pub r_b: T,
    pub r_e: RateCost<T>,
    pub r_s: T,
    /// Realized eavesdropping capacity of the chosen action.
    pub eavesdropper_capacity: T,
    /// `None` on slots without a transmission.
    pub outage: Option<bool>,
    pub queues: Vec<T>,
    pub power_virtual: T,
}

/// Everything a slot produced; used by callers that audit the controller.
#[derive(Debug, Clone)]
pub struct SlotReport<T> {
    pub realization: ChannelRealization<T>,
    pub queues_before: QueueState<T>,
    pub decision: SlotDecision<T>,
    pub record: SlotTraceRecord<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics<T> {
    pub n_slots: u64,
    /// Time-average admitted bits per slot, per user.
    pub admission_rate: Vec<T>,
    /// Mean of `admission_rate` over users.
    pub avg_admission_rate: T,
    /// `Σ θ_i r_i`.
    pub weighted_admission_rate: T,
    /// Time-average backlog per user over slots `0..T`.
    pub avg_queue_length: Vec<T>,
    pub mean_queue_length: T,
    pub avg_power: T,
    pub power_sum: T,
    pub final_queues: QueueState<T>,
    pub transmit_slots: u64,
    pub outage_slots: u64,
    /// `outage_slots / transmit_slots`, zero when nothing was sent.
    pub empirical_outage: T,
    pub max_queue: T,
    pub max_virtual_queue: T,
    pub slots_served: Vec<u64>,
    /// Largest served secrecy rate.
    pub rs_max: T,
    /// Largest `r_s / P` over every action considered.
    pub gamma: T,
    pub bounds: PerformanceBounds<T>,
    /// True when the virtual queue exceeded the reported `X_max` diagnostic.
    pub x_max_exceeded: bool,
}

impl<T: Scalar> RunMetrics<T> {
    /// `(1/T) Σ P(t) ≤ P_av + X(T)/T`, checked as `Σ P ≤ T P_av + X(T)`.
    pub fn power_identity_holds(&self, p_av: T) -> bool {
        self.power_sum <= T::lit(self.n_slots as f64) * p_av + self.final_queues.power_virtual
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput<T> {
    pub metrics: RunMetrics<T>,
    pub trace: Option<Vec<SlotTraceRecord<T>>>,
}

/// Owns one run's streams, controller state and accumulators.
#[derive(Debug, Clone)]
pub struct Simulation<T> {
    config: ScenarioConfig,
    dims: ChannelDims,
    grid: ActionGrid<T>,
    weights: ControlWeights<T>,
    evaluator: SecrecyEvaluator<T>,
    a_max: T,
    p_av: T,
    queue_bounds: Vec<T>,
    streams: ChannelStreams,
    arrivals_rng: ChaCha8Rng,
    queues: QueueState<T>,
    slot: u64,
    admitted_sum: Vec<T>,
    queue_sum: Vec<T>,
    power_sum: T,
    transmit_slots: u64,
    outage_slots: u64,
    max_queue: T,
    max_virtual_queue: T,
    slots_served: Vec<u64>,
    rs_max: T,
    gamma: T,
}

impl<T: Scalar> Simulation<T> {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let regime = config.regime::<T>()?;
        let grid = config.grid::<T>()?;
        let weights = config.weights::<T>()?;
        let evaluator =
            SecrecyEvaluator::new(regime, config.n_antennas, config.n_eves)?.with_ratio_grid(grid.ratios())?;
        let a_max = T::of_usize(config.a_max as usize);
        let k = config.n_users;
        Ok(Self {
            dims: config.dims(),
            queue_bounds: (0..k).map(|i| weights.queue_bound(i, a_max)).collect(),
            grid,
            weights,
            evaluator,
            a_max,
            p_av: T::lit(config.p_av),
            streams: ChannelStreams::from_seed(config.seed),
            arrivals_rng: stream_rng(config.seed, Stream::Arrivals),
            queues: QueueState::empty(k),
            slot: 0,
            admitted_sum: vec![T::zero(); k],
            queue_sum: vec![T::zero(); k],
            power_sum: T::zero(),
            transmit_slots: 0,
            outage_slots: 0,
            max_queue: T::zero(),
            max_virtual_queue: T::zero(),
            slots_served: vec![0; k],
            rs_max: T::zero(),
            gamma: T::zero(),
            config: config.clone(),
        })
    }

    pub fn queues(&self) -> &QueueState<T> {
        &self.queues
    }

    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn grid(&self) -> &ActionGrid<T> {
        &self.grid
    }

    pub fn evaluator(&self) -> &SecrecyEvaluator<T> {
        &self.evaluator
    }

    /// Advances one slot.
    pub fn step(&mut self) -> Result<SlotReport<T>> {
        let realization: ChannelRealization<T> = sample_realization(&self.dims, &mut self.streams)?;
        let arrivals: Vec<T> = sample_arrivals(&self.config, &mut self.arrivals_rng)?;
        let links = UserLink::for_realization(&realization, self.evaluator.regime().collusion)?;

        let queues_before = self.queues.clone();
        let admissions = admit(&arrivals, &self.queues, &self.weights)?;
        let allocation = allocate(&links, &self.queues, &self.grid, &self.evaluator)?;

        let link = &links[allocation.user];
        let tp = TransmitParams::new(allocation.power, allocation.data_fraction, link.n_antennas())?;
        let eavesdropper_capacity = link.eavesdropper_capacity(&tp)?;
        let served = allocation.served_user();
        let outage = match served {
            Some(_) => Some(audit_outage_on_link(&allocation, link)?),
            None => None,
        };

        for (i, u) in self.queues.data.iter_mut().enumerate() {
            self.queue_sum[i] += *u;
            *u = update_data_queue(*u, allocation.served_rate(), served == Some(i), admissions[i]);
            self.admitted_sum[i] += admissions[i];
            if !(*u <= self.queue_bounds[i]) {
                return Err(Error::InvariantViolation {
                    slot: self.slot,
                    detail: format!("queue {i} = {} exceeds V*theta + A_max = {}", *u, self.queue_bounds[i]),
                });
            }
            self.max_queue = self.max_queue.max(*u);
        }
        self.queues.power_virtual = update_power_queue(self.queues.power_virtual, allocation.power, self.p_av);
        self.max_virtual_queue = self.max_virtual_queue.max(self.queues.power_virtual);
        self.power_sum += allocation.power;
        self.gamma = self.gamma.max(allocation.peak_rate_per_watt);
        if let Some(i) = served {
            self.transmit_slots += 1;
            self.slots_served[i] += 1;
            self.rs_max = self.rs_max.max(allocation.served_rate());
            if outage == Some(true) {
                self.outage_slots += 1;
            }
        }

        let record = SlotTraceRecord {
            slot: self.slot,
            arrivals,
            admissions: admissions.clone(),
            served_user: served,
            power: allocation.power,
            data_fraction: allocation.data_fraction,
            r_b: allocation.rate.r_b,
            r_e: allocation.rate.r_e,
            r_s: allocation.rate.r_s,
            eavesdropper_capacity,
            outage,
            queues: self.queues.data.clone(),
            power_virtual: self.queues.power_virtual,
        };
        self.slot += 1;
        Ok(SlotReport { realization, queues_before, decision: SlotDecision { admissions, allocation }, record })
    }

    /// Time averages over the slots run so far.
    pub fn metrics(&self) -> Result<RunMetrics<T>> {
        let t = T::lit(self.slot.max(1) as f64);
        let k = T::of_usize(self.config.n_users);
        let admission_rate: Vec<T> = self.admitted_sum.iter().map(|&s| s / t).collect();
        let avg_queue_length: Vec<T> = self.queue_sum.iter().map(|&s| s / t).collect();
        let weighted = admission_rate.iter().zip(self.weights.theta()).map(|(&r, &w)| r * w).sum();
        let params =
            BoundParams { a_max: self.a_max, p_max: self.grid.p_max(), p_av: self.p_av, weights: &self.weights };
        let bounds = compute_bounds(&params, self.rs_max, self.gamma)?;
        let empirical_outage = if self.transmit_slots == 0 {
            T::zero()
        } else {
            T::lit(self.outage_slots as f64) / T::lit(self.transmit_slots as f64)
        };
        Ok(RunMetrics {
            n_slots: self.slot,
            avg_admission_rate: admission_rate.iter().copied().sum::<T>() / k,
            weighted_admission_rate: weighted,
            mean_queue_length: avg_queue_length.iter().copied().sum::<T>() / k,
            admission_rate,
            avg_queue_length,
            avg_power: self.power_sum / t,
            power_sum: self.power_sum,
            final_queues: self.queues.clone(),
            transmit_slots: self.transmit_slots,
            outage_slots: self.outage_slots,
            empirical_outage,
            max_queue: self.max_queue,
            max_virtual_queue: self.max_virtual_queue,
            slots_served: self.slots_served.clone(),
            rs_max: self.rs_max,
            gamma: self.gamma,
            x_max_exceeded: self.max_virtual_queue > bounds.x_max,
            bounds,
        })
    }
}

/// Runs `config.n_slots` slots from empty queues.
pub fn run<T: Scalar>(config: &ScenarioConfig, options: RunOptions) -> Result<RunOutput<T>> {
    let mut sim = Simulation::<T>::new(config)?;
    let mut trace = options.trace.then(|| Vec::with_capacity(config.n_slots.min(1 << 20) as usize));
    for _ in 0..config.n_slots {
        let report = sim.step()?;
        if let Some(t) = trace.as_mut() {
            t.push(report.record);
        }
    }
    Ok(RunOutput { metrics: sim.metrics()?, trace })
}
