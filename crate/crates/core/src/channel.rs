//! Rayleigh block-fading channel draws and the beamforming / artificial-noise
//! basis built from each legitimate channel.
//!
//! Channels are row vectors `1 × n_antennas` with i.i.d. `CN(0, 1)` entries and
//! unit-variance receiver noise. Every draw comes from an explicit RNG stream;
//! legitimate and eavesdropper channels use separate streams so changing the
//! number of eavesdroppers leaves the legitimate draws untouched.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
pub use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::scalar::Scalar;

/// Named substreams derived from a single run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Legitimate = 1,
    Eavesdropper = 2,
    Arrivals = 3,
    Validation = 4,
}

/// Deterministic generator for one named substream of `seed`.
pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// The two channel substreams a simulation owns.
#[derive(Debug, Clone)]
pub struct ChannelStreams {
    pub legitimate: ChaCha8Rng,
    pub eavesdropper: ChaCha8Rng,
}

impl ChannelStreams {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            legitimate: stream_rng(seed, Stream::Legitimate),
            eavesdropper: stream_rng(seed, Stream::Eavesdropper),
        }
    }
}

/// Array and population sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelDims {
    pub n_antennas: usize,
    pub n_users: usize,
    pub n_eves: usize,
}

impl ChannelDims {
    pub fn validate(&self) -> Result<()> {
        if self.n_antennas < 2 {
            return Err(Error::InvalidDimension(format!(
                "n_antennas must be at least 2, got {}",
                self.n_antennas
            )));
        }
        if self.n_users == 0 || self.n_eves == 0 {
            return Err(Error::InvalidDimension("n_users and n_eves must be positive".into()));
        }
        Ok(())
    }
}

/// Draws an `n`-vector of i.i.d. `CN(0, 1)` entries.
///
/// Box–Muller on a pair of uniforms per entry: modulus `sqrt(-ln u1)` and a
/// uniform phase, so real and imaginary parts are each `N(0, 1/2)`.
pub fn sample_complex_gaussian_vector<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexVector<T>> {
    if n == 0 {
        return Err(Error::InvalidDimension("sample length must be positive".into()));
    }
    let data = (0..n)
        .map(|_| {
            let u1 = 1.0 - rng.random::<f64>();
            let u2 = rng.random::<f64>();
            let r = (-u1.ln()).sqrt();
            let phi = std::f64::consts::TAU * u2;
            Complex::new(T::lit(r * phi.cos()), T::lit(r * phi.sin()))
        })
        .collect();
    ComplexVector::new(data)
}

/// One slot's channels: legitimate `h_i`, eavesdropper `g_j`, unit noise.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    legit: Vec<ComplexVector<T>>,
    eves: Vec<ComplexVector<T>>,
    noise_variance: T,
}

impl<T: Scalar> ChannelRealization<T> {
    pub fn new(legit: Vec<ComplexVector<T>>, eves: Vec<ComplexVector<T>>) -> Result<Self> {
        let n = legit
            .first()
            .map(|h| h.len())
            .ok_or_else(|| Error::InvalidDimension("at least one legitimate channel required".into()))?;
        if eves.is_empty() {
            return Err(Error::InvalidDimension("at least one eavesdropper channel required".into()));
        }
        if let Some(bad) = legit.iter().chain(&eves).find(|v| v.len() != n) {
            return Err(Error::InvalidDimension(format!("channel length {} differs from {n}", bad.len())));
        }
        Ok(Self { legit, eves, noise_variance: T::one() })
    }

    pub fn legit(&self) -> &[ComplexVector<T>] {
        &self.legit
    }

    pub fn eves(&self) -> &[ComplexVector<T>] {
        &self.eves
    }

    pub fn noise_variance(&self) -> T {
        self.noise_variance
    }

    pub fn n_antennas(&self) -> usize {
        self.legit[0].len()
    }

    pub fn n_users(&self) -> usize {
        self.legit.len()
    }

    pub fn n_eves(&self) -> usize {
        self.eves.len()
    }

    /// `G`, the eavesdropper channels stacked as rows (`n_eves × n_antennas`).
    pub fn eve_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_rows(&self.eves).expect("eavesdropper rows validated at construction")
    }
}

/// Draws a fresh, independent realization for one slot.
pub fn sample_realization<T: Scalar>(dims: &ChannelDims, streams: &mut ChannelStreams) -> Result<ChannelRealization<T>> {
    dims.validate()?;
    let legit = (0..dims.n_users)
        .map(|_| sample_complex_gaussian_vector(dims.n_antennas, &mut streams.legitimate))
        .collect::<Result<Vec<_>>>()?;
    let eves = (0..dims.n_eves)
        .map(|_| sample_complex_gaussian_vector(dims.n_antennas, &mut streams.eavesdropper))
        .collect::<Result<Vec<_>>>()?;
    ChannelRealization::new(legit, eves)
}

/// `Z = [z1 Z2]`: `z1 = h*/‖h‖` carries data, the columns of `Z2` span the null
/// space of `h` and carry artificial noise.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingBasis<T> {
    z1: ComplexVector<T>,
    z2: ComplexMatrix<T>,
    source_gain: T,
}

impl<T: Scalar> BeamformingBasis<T> {
    pub fn z1(&self) -> &ComplexVector<T> {
        &self.z1
    }

    pub fn z2(&self) -> &ComplexMatrix<T> {
        &self.z2
    }

    /// `‖h‖²`.
    pub fn source_gain(&self) -> T {
        self.source_gain
    }

    pub fn n_antennas(&self) -> usize {
        self.z1.len()
    }

    /// The full `n_antennas × n_antennas` matrix `[z1 Z2]`.
    pub fn full(&self) -> ComplexMatrix<T> {
        let n = self.n_antennas();
        let mut m = ComplexMatrix::zeros(n, n).expect("n_antennas >= 2");
        for r in 0..n {
            m[(r, 0)] = self.z1[r];
            for c in 0..n - 1 {
                m[(r, c + 1)] = self.z2[(r, c)];
            }
        }
        m
    }

    /// Same `z1`, different null-space basis. `z2` must be `n × (n-1)`.
    pub fn with_null_space(&self, z2: ComplexMatrix<T>) -> Result<Self> {
        let n = self.n_antennas();
        if z2.rows() != n || z2.cols() != n - 1 {
            return Err(Error::InvalidDimension(format!(
                "null-space basis must be {n}x{}, got {}x{}",
                n - 1,
                z2.rows(),
                z2.cols()
            )));
        }
        Ok(Self { z1: self.z1.clone(), z2, source_gain: self.source_gain })
    }
}

/// Builds the basis for `h` with one Householder reflection.
///
/// The reflector `H = I - 2 v vᴴ / (vᴴ v)` with `v = z1 + φ e1`
/// (`φ = z1[0] / |z1[0]|`, or 1 when that entry vanishes) maps `e1` onto a
/// unit-modulus multiple of `z1`, so its remaining columns are orthonormal
/// and orthogonal to `z1`.
pub fn beamforming_basis<T: Scalar>(h: &ComplexVector<T>) -> Result<BeamformingBasis<T>> {
    let n = h.len();
    if n < 2 {
        return Err(Error::InvalidDimension("beamforming needs at least 2 antennas".into()));
    }
    let gain = h.norm_sqr();
    if !(gain > T::zero()) || !gain.is_finite() {
        return Err(Error::DegenerateChannel);
    }
    let z1 = h.conj().scale(gain.sqrt().recip());

    let lead = z1[0];
    let lead_abs = lead.norm();
    let phase = if lead_abs > T::zero() { lead / lead_abs } else { Complex::new(T::one(), T::zero()) };
    let mut v: Vec<Complex<T>> = z1.as_slice().to_vec();
    v[0] += phase;
    let vv: T = v.iter().map(|z| z.norm_sqr()).sum();
    let two_over = T::lit(2.0) / vv;

    let mut z2 = ComplexMatrix::zeros(n, n - 1)?;
    for c in 1..n {
        let vc = v[c].conj();
        for r in 0..n {
            let mut e = -(v[r] * vc) * two_over;
            if r == c {
                e += T::one();
            }
            z2[(r, c - 1)] = e;
        }
    }
    Ok(BeamformingBasis { z1, z2, source_gain: gain })
}
