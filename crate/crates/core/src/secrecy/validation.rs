//! Monte-Carlo check of the closed-form outage inversions.

use crate::channel::{beamforming_basis, sample_complex_gaussian_vector, stream_rng, ComplexMatrix, Stream};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::capacity::{colluding_upper_from_statistic, noncolluding_upper_from_statistic};
use super::{invert_re_colluding, invert_re_noncolluding, Collusion, CollusionProjection, EveProjection, RateCost};

pub const MIN_VALIDATION_SAMPLES: usize = 10_000;

/// Standard errors a row may deviate from the target before it fails.
pub const PASS_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct OutageValidationRow<T> {
    pub epsilon: T,
    pub r_e: RateCost<T>,
    pub target_eta: T,
    pub estimated_eta: T,
    /// Binomial standard error `sqrt(η(1-η)/n)` at the target level.
    pub std_error: T,
    pub n_samples: usize,
    pub outages: usize,
    pub pass: bool,
}

/// Draws `samples` fresh (h, eavesdroppers) slots and returns the statistic
/// the noise-free eavesdropper capacity is monotone in: the largest ratio
/// statistic over eavesdroppers, or the joint quadratic statistic.
pub fn sample_upper_statistics<T: Scalar>(
    n_antennas: usize,
    n_eves: usize,
    collusion: Collusion,
    samples: usize,
    seed: u64,
) -> Result<Vec<T>> {
    if collusion == Collusion::Colluding && n_antennas <= n_eves {
        return Err(Error::UnsupportedRegime { n_antennas, n_eves });
    }
    if n_eves == 0 {
        return Err(Error::InvalidInput("n_eves must be positive".into()));
    }
    let mut rng = stream_rng(seed, Stream::Validation);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let h = sample_complex_gaussian_vector::<T, _>(n_antennas, &mut rng)?;
        let basis = beamforming_basis(&h)?;
        let eves = (0..n_eves)
            .map(|_| sample_complex_gaussian_vector::<T, _>(n_antennas, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let stat = match collusion {
            Collusion::NonColluding => eves
                .iter()
                .map(|g| EveProjection::new(g, &basis)?.ratio_statistic(n_antennas))
                .try_fold(T::zero(), |acc, f| f.map(|f| acc.max(f)))?,
            Collusion::Colluding => {
                CollusionProjection::new(&ComplexMatrix::from_rows(&eves)?, &basis)?.quadratic_statistic()?
            }
        };
        out.push(stat);
    }
    Ok(out)
}

/// Compares the designed outage level against pre-drawn statistics for
/// every interior ratio of `ratio_grid`.
pub fn validate_outage_with<T: Scalar>(
    statistics: &[T],
    n_antennas: usize,
    n_eves: usize,
    eta: T,
    collusion: Collusion,
    ratio_grid: &[T],
) -> Result<Vec<OutageValidationRow<T>>> {
    if statistics.is_empty() {
        return Err(Error::InvalidInput("no Monte-Carlo samples".into()));
    }
    let n = statistics.len();
    let std_error = (eta * (T::one() - eta) / T::of_usize(n)).sqrt();
    let mut rows = Vec::new();
    for &eps in ratio_grid.iter().filter(|&&e| e > T::zero() && e < T::one()) {
        let r_e = match collusion {
            Collusion::NonColluding => invert_re_noncolluding(eps, eta, n_antennas, n_eves)?,
            Collusion::Colluding => invert_re_colluding(eps, eta, n_antennas, n_eves)?,
        };
        let outages = statistics
            .iter()
            .filter(|&&s| {
                let cap = match collusion {
                    Collusion::NonColluding => noncolluding_upper_from_statistic(s, eps),
                    Collusion::Colluding => colluding_upper_from_statistic(s, eps, n_antennas),
                };
                r_e.exceeded_by(cap)
            })
            .count();
        let estimated_eta = T::of_usize(outages) / T::of_usize(n);
        let pass = (estimated_eta - eta).abs() <= T::lit(PASS_SIGMAS) * std_error;
        rows.push(OutageValidationRow {
            epsilon: eps,
            r_e,
            target_eta: eta,
            estimated_eta,
            std_error,
            n_samples: n,
            outages,
            pass,
        });
    }
    Ok(rows)
}

/// Draws `samples` slots and validates every interior ratio of `ratio_grid`.
pub fn validate_outage<T: Scalar>(
    n_antennas: usize,
    n_eves: usize,
    eta: T,
    collusion: Collusion,
    ratio_grid: &[T],
    samples: usize,
    seed: u64,
) -> Result<Vec<OutageValidationRow<T>>> {
    if samples < MIN_VALIDATION_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "at least {MIN_VALIDATION_SAMPLES} samples required, got {samples}"
        )));
    }
    if !(eta > T::zero() && eta < T::one()) {
        return Err(Error::InvalidInput(format!("outage level must lie in (0, 1), got {eta}")));
    }
    let stats = sample_upper_statistics(n_antennas, n_eves, collusion, samples, seed)?;
    validate_outage_with(&stats, n_antennas, n_eves, eta, collusion, ratio_grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (0..=20).map(|k| k as f64 / 20.0).collect()
    }

    #[test]
    fn endpoints_excluded() {
        let rows = validate_outage(6, 3, 0.1, Collusion::NonColluding, &grid(), 10_000, 1).unwrap();
        assert_eq!(rows.len(), 19);
        assert!(rows.iter().all(|r| r.epsilon > 0.0 && r.epsilon < 1.0 && r.r_e.finite().is_some()));
    }

    #[test]
    fn too_few_samples_rejected() {
        assert!(validate_outage(6, 3, 0.1, Collusion::Colluding, &grid(), 9_999, 1).is_err());
        assert!(validate_outage(6, 3, 0.0, Collusion::Colluding, &grid(), 10_000, 1).is_err());
        assert!(validate_outage(3, 3, 0.1, Collusion::Colluding, &grid(), 10_000, 1).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        let a = validate_outage(6, 3, 0.3, Collusion::Colluding, &grid(), 10_000, 42).unwrap();
        let b = validate_outage(6, 3, 0.3, Collusion::Colluding, &grid(), 10_000, 42).unwrap();
        assert_eq!(a, b);
    }
}
