//! Reference implementations written directly from the model equations with
//! nalgebra, sharing no code with the library beyond the channel containers.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use secsched::linalg::ComplexVector;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn column(v: &ComplexVector<f64>) -> CVec {
    CVec::from_column_slice(v.as_slice())
}

/// Row-stack of the given vectors.
pub fn stack(rows: &[ComplexVector<f64>]) -> CMat {
    CMat::from_fn(rows.len(), rows[0].len(), |r, c| rows[r].as_slice()[c])
}

/// `h* / ‖h‖` as a column.
pub fn beam(h: &ComplexVector<f64>) -> CVec {
    let h = column(h);
    let n = h.norm();
    h.map(|x| x.conj() / n)
}

/// `I - z1 z1ᴴ`.
pub fn null_projector(h: &ComplexVector<f64>) -> CMat {
    let z1 = beam(h);
    CMat::identity(z1.len(), z1.len()) - &z1 * z1.adjoint()
}

pub fn cap_legit(h: &ComplexVector<f64>, p: f64, eps: f64) -> f64 {
    (1.0 + eps * p * column(h).norm_squared()).log2()
}

pub fn sigmas(p: f64, eps: f64, n_antennas: usize) -> (f64, f64) {
    (eps * p, (1.0 - eps) * p / (n_antennas - 1) as f64)
}

/// Single eavesdropper, with the leakage term evaluated through the explicit
/// projector `g (I - z1 z1ᴴ) gᴴ`.
pub fn cap_eve(g: &ComplexVector<f64>, h: &ComplexVector<f64>, p: f64, eps: f64) -> f64 {
    let n = h.len();
    let (su, sv) = sigmas(p, eps, n);
    let gr = column(g).transpose();
    let signal = (&gr * beam(h))[(0, 0)].norm_sqr();
    let leak = (&gr * null_projector(h) * gr.adjoint())[(0, 0)].re;
    (1.0 + signal * su / (leak * sv + 1.0)).log2()
}

/// Colluding eavesdroppers as a ratio of determinants,
/// `det(σ_u² ḡ1ḡ1ᴴ + σ_v² G P Gᴴ + I) / det(σ_v² G P Gᴴ + I)` with `P` the
/// null-space projector.
pub fn cap_eves_log_det(eves: &[ComplexVector<f64>], h: &ComplexVector<f64>, p: f64, eps: f64) -> f64 {
    let n = h.len();
    let (su, sv) = sigmas(p, eps, n);
    let g = stack(eves);
    let k = g.nrows();
    let g1 = &g * beam(h);
    let noise = (&g * null_projector(h) * g.adjoint()) * Complex64::from(sv) + CMat::identity(k, k);
    let total = &noise + &g1 * g1.adjoint() * Complex64::from(su);
    (total.determinant().re / noise.determinant().re).log2()
}

pub fn noncolluding_cdf(x: f64, n_antennas: usize) -> f64 {
    let m = (n_antennas - 1) as f64;
    1.0 - (m / (x + m)).powf(m)
}

pub fn colluding_ccdf(x: f64, n_antennas: usize, n_eves: usize) -> f64 {
    let m = n_antennas - 1;
    let mut total = 0.0;
    let mut binom = 1.0;
    for k in 0..n_eves {
        if k > 0 {
            binom *= (m - k + 1) as f64 / k as f64;
        }
        total += binom * x.powi(k as i32) / (1.0 + x).powi(m as i32);
    }
    total
}

/// Root of a decreasing `f` on `[0, ∞)` at level `target`, plain bisection.
pub fn solve_decreasing(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) > target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Outage threshold on the statistic: `P(stat > x) = eta`.
pub fn threshold(colluding: bool, eta: f64, n_antennas: usize, n_eves: usize) -> f64 {
    if colluding {
        solve_decreasing(|x| colluding_ccdf(x, n_antennas, n_eves), eta)
    } else {
        solve_decreasing(|x| 1.0 - noncolluding_cdf(x, n_antennas).powi(n_eves as i32), eta)
    }
}

/// Rate cost for `0 < eps < 1`.
pub fn rate_cost(colluding: bool, eps: f64, eta: f64, n_antennas: usize, n_eves: usize) -> f64 {
    let x = threshold(colluding, eta, n_antennas, n_eves);
    let snr = eps / (1.0 - eps);
    if colluding {
        (1.0 + x * (n_antennas - 1) as f64 * snr).log2()
    } else {
        (1.0 + x * snr).log2()
    }
}

/// Secrecy rate of one action; `None` for the rate cost means "cannot transmit".
pub fn secrecy_rate(
    h: &ComplexVector<f64>,
    eves: &[ComplexVector<f64>],
    p: f64,
    eps: f64,
    partial_eta: Option<f64>,
    colluding: bool,
) -> f64 {
    let r_b = cap_legit(h, p, eps);
    let r_e = match partial_eta {
        None if colluding => cap_eves_log_det(eves, h, p, eps),
        None => eves.iter().map(|g| cap_eve(g, h, p, eps)).fold(0.0, f64::max),
        Some(_) if eps == 0.0 => 0.0,
        Some(_) if eps == 1.0 => return 0.0,
        Some(eta) => rate_cost(colluding, eps, eta, h.len(), eves.len()),
    };
    (r_b - r_e).max(0.0)
}

/// Best score of `U_i r_s - X P` over the full action set.
#[allow(clippy::too_many_arguments)]
pub fn best_score(
    legit: &[ComplexVector<f64>],
    eves: &[ComplexVector<f64>],
    backlogs: &[f64],
    x: f64,
    powers: &[f64],
    ratios: &[f64],
    partial_eta: Option<f64>,
    colluding: bool,
) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for (h, &u) in legit.iter().zip(backlogs) {
        for &p in powers {
            for &e in ratios {
                best = best.max(u * secrecy_rate(h, eves, p, e, partial_eta, colluding) - x * p);
            }
        }
    }
    best
}

/// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance(mut sample: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
