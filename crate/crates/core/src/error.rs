use thiserror::Error;

/// Errors raised by the samplers, regimes, closed forms and oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A probability argument fell outside its admissible range.
    #[error("{name} = {value} is outside {range}")]
    Probability {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A non-probability argument violated its precondition.
    #[error("{0}")]
    Domain(String),

    /// `(k, n)` is not a valid (current state, initial state) pair.
    #[error("state pair out of range: k = {k}, n = {n} (need 1 <= k <= n)")]
    StateRange { k: u64, n: u64 },

    #[error("mortality table has no entry for k = {k}, n = {n}")]
    TableMiss { k: u64, n: u64 },

    /// A brute-force oracle was asked for more than it is built to enumerate.
    #[error("oracle cap exceeded: {0}")]
    CapExceeded(String),

    #[error("malformed stream state: {0}")]
    StreamState(String),

    #[error("statistic requires at least one sample")]
    EmptySample,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_unit_closed(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Probability {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

pub(crate) fn check_unit_open(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Probability {
            name,
            value,
            range: "(0, 1)",
        })
    }
}

pub(crate) fn check_unit_left_open(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::Probability {
            name,
            value,
            range: "(0, 1]",
        })
    }
}
