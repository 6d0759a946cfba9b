//! Outage distributions of the noise-free eavesdropper capacities and the
//! rate cost `R_e` that pins the secrecy outage to a target level `η`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::RateCost;

const BISECTION_REL_TOL: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;
const BRACKET_MAX_DOUBLINGS: usize = 2048;

fn check_x<T: Scalar>(x: T) -> Result<()> {
    if !(x >= T::zero()) {
        return Err(Error::InvalidInput(format!("outage argument must be nonnegative, got {x}")));
    }
    Ok(())
}

fn check_colluding_dims(n_antennas: usize, n_eves: usize) -> Result<()> {
    if n_eves == 0 {
        return Err(Error::InvalidInput("n_eves must be positive".into()));
    }
    if n_antennas <= n_eves {
        return Err(Error::UnsupportedRegime { n_antennas, n_eves });
    }
    Ok(())
}

fn check_fraction_level<T: Scalar>(eps: T, eta: T) -> Result<()> {
    if !(eps >= T::zero() && eps <= T::one()) {
        return Err(Error::InvalidInput(format!("data fraction must lie in [0, 1], got {eps}")));
    }
    if !(eta > T::zero() && eta < T::one()) {
        return Err(Error::InvalidInput(format!("outage level must lie in (0, 1), got {eta}")));
    }
    Ok(())
}

/// `P(F ≤ x) = 1 - (N_A-1)^(N_A-1) (x + N_A - 1)^(1-N_A)` for the
/// non-colluding ratio statistic `F`.
pub fn noncolluding_outage_cdf<T: Scalar>(x: T, n_antennas: usize) -> Result<T> {
    check_x(x)?;
    if n_antennas < 2 {
        return Err(Error::InvalidInput(format!("n_antennas must be at least 2, got {n_antennas}")));
    }
    let m = T::of_usize(n_antennas - 1);
    Ok(T::one() - (m / (x + m)).powi(n_antennas as i32 - 1))
}

/// `P(Q > x) = Σ_{k<N_E} C(N_A-1, k) x^k / (1+x)^(N_A-1)` for the colluding
/// quadratic statistic `Q`.
///
/// Evaluated as a binomial tail in `p = x/(1+x)` so large `x` cannot overflow.
pub fn colluding_outage_ccdf<T: Scalar>(x: T, n_antennas: usize, n_eves: usize) -> Result<T> {
    check_x(x)?;
    check_colluding_dims(n_antennas, n_eves)?;
    if x.is_infinite() {
        return Ok(T::zero());
    }
    let n = n_antennas - 1;
    let q = (T::one() + x).recip();
    let p = x * q;
    let mut binom = T::one();
    let mut total = T::zero();
    for k in 0..n_eves {
        if k > 0 {
            binom = binom * T::of_usize(n + 1 - k) / T::of_usize(k);
        }
        total += binom * p.powi(k as i32) * q.powi((n - k) as i32);
    }
    Ok(total.min(T::one()))
}

/// Root of a continuous nonincreasing `f` with `f(0) > target`: bracket
/// `[0, 1]`, doubled until `f(hi) < target`, then bisected.
pub fn bisect_decreasing<T: Scalar>(f: impl Fn(T) -> Result<T>, target: T) -> Result<T> {
    let mut lo = T::zero();
    let mut hi = T::one();
    let mut doublings = 0;
    while f(hi)? >= target {
        lo = hi;
        hi = hi + hi;
        doublings += 1;
        if doublings > BRACKET_MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::NumericalDegeneracy(format!("no sign change found while bracketing level {target}")));
        }
    }
    let tol = T::lit(BISECTION_REL_TOL);
    let half = T::lit(0.5);
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= tol * hi {
            break;
        }
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) * half)
}

/// Threshold `x*` on the ratio statistic with `1 - CDF(x*)^N_E = η`, in
/// closed form: `x* = (N_A-1) (q^(-1/(N_A-1)) - 1)`, `q = 1 - (1-η)^(1/N_E)`.
pub fn noncolluding_threshold<T: Scalar>(eta: T, n_antennas: usize, n_eves: usize) -> Result<T> {
    if n_antennas < 2 || n_eves == 0 {
        return Err(Error::InvalidInput(format!("invalid population: n_antennas={n_antennas}, n_eves={n_eves}")));
    }
    let m = T::of_usize(n_antennas - 1);
    let q = -((-eta).ln_1p() / T::of_usize(n_eves)).exp_m1();
    Ok(m * (q.powf(-m.recip()) - T::one()))
}

/// Same threshold found numerically. Kept as a cross-check on the algebra.
pub fn noncolluding_threshold_bisection<T: Scalar>(eta: T, n_antennas: usize, n_eves: usize) -> Result<T> {
    let outage = |x: T| Ok(T::one() - noncolluding_outage_cdf(x, n_antennas)?.powi(n_eves as i32));
    bisect_decreasing(outage, eta)
}

/// Threshold `x*` on the quadratic statistic with `P(Q > x*) = η`.
pub fn colluding_threshold<T: Scalar>(eta: T, n_antennas: usize, n_eves: usize) -> Result<T> {
    check_colluding_dims(n_antennas, n_eves)?;
    bisect_decreasing(|x| colluding_outage_ccdf(x, n_antennas, n_eves), eta)
}

fn cost_from_threshold<T: Scalar>(eps: T, threshold: impl FnOnce() -> Result<T>, gain: T) -> Result<RateCost<T>> {
    if eps == T::zero() {
        return Ok(RateCost::Finite(T::zero()));
    }
    if eps == T::one() {
        return Ok(RateCost::Unbounded);
    }
    let x = threshold()?;
    Ok(RateCost::Finite((x * gain * eps / (T::one() - eps)).ln_1p() / T::LN_2()))
}

/// Rate cost for non-colluding eavesdroppers at outage level `η`.
///
/// `ε = 0` costs nothing; `ε = 1` leaves no artificial noise and the cost is
/// unbounded.
pub fn invert_re_noncolluding<T: Scalar>(eps: T, eta: T, n_antennas: usize, n_eves: usize) -> Result<RateCost<T>> {
    check_fraction_level(eps, eta)?;
    cost_from_threshold(eps, || noncolluding_threshold(eta, n_antennas, n_eves), T::one())
}

/// [`invert_re_noncolluding`] through the bisection threshold.
pub fn invert_re_noncolluding_bisection<T: Scalar>(
    eps: T,
    eta: T,
    n_antennas: usize,
    n_eves: usize,
) -> Result<RateCost<T>> {
    check_fraction_level(eps, eta)?;
    cost_from_threshold(eps, || noncolluding_threshold_bisection(eta, n_antennas, n_eves), T::one())
}

/// Rate cost for colluding eavesdroppers at outage level `η`.
pub fn invert_re_colluding<T: Scalar>(eps: T, eta: T, n_antennas: usize, n_eves: usize) -> Result<RateCost<T>> {
    check_fraction_level(eps, eta)?;
    check_colluding_dims(n_antennas, n_eves)?;
    cost_from_threshold(eps, || colluding_threshold(eta, n_antennas, n_eves), T::of_usize(n_antennas - 1))
}
