//! Reproducible random streams and exact samplers.
//!
//! Every sampler is a pure function of the [`RngStream`] state: replaying a
//! stream from the same `(seed, stream_id)` (or from a serialized snapshot)
//! replays its outputs exactly.
//!
//! Streams are backed by ChaCha8 with the 64-bit ChaCha stream selector used
//! as the substream index, so `2^64` independent substreams exist for every
//! seed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{check_unit_closed, check_unit_left_open, Error, Result};

const STATE_MAGIC: &[u8; 4] = b"PDRS";
const STATE_VERSION: u8 = 1;
const STATE_LEN: usize = 4 + 1 + 8 + 8 + 16;

/// Above this mean (`x * min(c, 1 - c)`) the binomial sampler switches from
/// inversion to BTPE.
const INVERSION_MEAN_LIMIT: f64 = 10.0;
/// At or below this count the binomial sampler sums Bernoulli trials.
const BERNOULLI_COUNT_LIMIT: u64 = 3;

/// A single-owner random stream identified by `(seed, stream_id)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Serializes the stream position.
    ///
    /// Layout (version 1, little endian): `b"PDRS"`, version byte, seed,
    /// stream id, 128-bit word position.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(STATE_LEN);
        out.extend_from_slice(STATE_MAGIC);
        out.push(STATE_VERSION);
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&self.stream_id.to_le_bytes());
        out.extend_from_slice(&self.rng.get_word_pos().to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() != STATE_LEN {
            return Err(Error::StreamState(format!(
                "expected {STATE_LEN} bytes, got {}",
                bytes.len()
            )));
        }
        if &bytes[..4] != STATE_MAGIC {
            return Err(Error::StreamState("bad magic".into()));
        }
        if bytes[4] != STATE_VERSION {
            return Err(Error::StreamState(format!("unsupported version {}", bytes[4])));
        }
        let seed = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
        let stream_id = u64::from_le_bytes(bytes[13..21].try_into().unwrap());
        let word_pos = u128::from_le_bytes(bytes[21..37].try_into().unwrap());
        let mut stream = RngStream::new(seed, stream_id);
        stream.rng.set_word_pos(word_pos);
        Ok(stream)
    }

    /// Uniform draw on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Mixes a label into a seed so that distinct experiments sharing one
/// user-facing seed draw from unrelated stream families.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, then one splitmix64 round.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Draws `Binomial(x, c)`.
pub fn sample_binomial(rng: &mut RngStream, x: u64, c: f64) -> Result<u64> {
    check_unit_closed("c", c)?;
    Ok(binomial(rng, x, c))
}

pub(crate) fn binomial(rng: &mut RngStream, x: u64, c: f64) -> u64 {
    if x == 0 || c == 0.0 {
        return 0;
    }
    if c == 1.0 {
        return x;
    }
    if x <= BERNOULLI_COUNT_LIMIT {
        return (0..x).filter(|_| rng.uniform() < c).count() as u64;
    }
    let (p, flipped) = if c > 0.5 { (1.0 - c, true) } else { (c, false) };
    let k = if (x as f64) * p < INVERSION_MEAN_LIMIT {
        binomial_inversion(rng, x, p)
    } else {
        // BTPE; exact for any mean, used where inversion would walk too far.
        rand_distr::Binomial::new(x, p)
            .expect("p validated above")
            .sample(rng)
    };
    if flipped {
        x - k
    } else {
        k
    }
}

/// Sequential search through the pmf, `P(k+1)/P(k) = (x-k)/(k+1) * p/q`.
fn binomial_inversion(rng: &mut RngStream, x: u64, p: f64) -> u64 {
    let q = 1.0 - p;
    let ratio = p / q;
    let f0 = ((x as f64) * (-p).ln_1p()).exp();
    loop {
        let mut u = rng.uniform();
        let mut f = f0;
        let mut k = 0u64;
        loop {
            if u <= f {
                return k;
            }
            u -= f;
            k += 1;
            if k > x {
                // Rounding left residual mass past the support; redraw.
                break;
            }
            f *= ratio * ((x - k + 1) as f64) / (k as f64);
        }
    }
}

/// Draws a geometric time on `{1, 2, ...}` with `P(t) = (1-c)^(t-1) c`.
pub fn sample_geometric(rng: &mut RngStream, c: f64) -> Result<u64> {
    check_unit_left_open("c", c)?;
    Ok(geometric_from_log_stay(rng, (-c).ln_1p()))
}

/// Geometric time whose per-trial failure probability is `exp(log_stay)`.
#[inline]
pub(crate) fn geometric_from_log_stay(rng: &mut RngStream, log_stay: f64) -> u64 {
    if log_stay == f64::NEG_INFINITY {
        return 1;
    }
    let t = (rng.uniform().ln() / log_stay).ceil();
    // `as` saturates for astronomically small success probabilities.
    (t as u64).max(1)
}

/// Draws the maximum of `n` i.i.d. geometric(`c`) times by inverting
/// `P(T <= t) = (1 - (1-c)^t)^n` in a single step.
pub fn sample_max_geometric(rng: &mut RngStream, n: u64, c: f64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("max of geometrics needs n >= 1".into()));
    }
    check_unit_left_open("c", c)?;
    if c == 1.0 {
        return Ok(1);
    }
    let log_stay = (-c).ln_1p();
    // 1 - U^(1/n), kept away from cancellation for huge n.
    let tail = -(rng.uniform().ln() / n as f64).exp_m1();
    let t = (tail.ln() / log_stay).ceil();
    Ok((t as u64).max(1))
}

/// Draws an exponential time with the given rate.
pub fn sample_exponential(rng: &mut RngStream, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::Domain(format!(
            "exponential rate must be positive and finite, got {rate}"
        )));
    }
    Ok(exponential_unit(rng) / rate)
}

#[inline]
pub(crate) fn exponential_unit(rng: &mut RngStream) -> f64 {
    Exp1.sample(rng)
}
