//! Simulation of `D_{t+1} = D_t - Binomial(D_t, c)`.
//!
//! Two simulation routes are provided. [`step`], [`simulate_trajectory`] and
//! [`extinction_time_sample`] advance one time unit at a time with a binomial
//! draw. [`first_passage_sample`] and [`observe_single_drop_path`] instead
//! jump straight to the next departure: while the chain sits at `k` with
//! death probability `c` the holding time is geometric with success
//! `1 - (1-c)^k`, and the number of deaths on the departing step is
//! `1 + Binomial(k - i, c)` where `i` (the first individual to die) is a
//! geometric index truncated to `1..=k`. Both routes are exact; the jump
//! route keeps the scaling experiments tractable when `c` is of order
//! `1e-9`.

use serde::Serialize;

use crate::error::{check_unit_closed, check_unit_open, Error, Result};
use crate::regime::MortalityRegime;
use crate::sampling::{binomial, geometric_from_log_stay, RngStream};

/// Counts above `2^53` are rejected so every state is exact as an `f64`.
pub const MAX_POPULATION: u64 = 1 << 53;

/// Target upper bound on the censoring probability used by [`default_t_max`].
pub const CENSORING_TARGET: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Extinction {
    /// First time the state is 0.
    Absorbed { time: u64 },
    /// Still alive after `t_max` steps.
    Censored { t_max: u64 },
}

impl Extinction {
    pub fn time(self) -> Option<u64> {
        match self {
            Extinction::Absorbed { time } => Some(time),
            Extinction::Censored { .. } => None,
        }
    }
}

/// A realized, nonincreasing path `states[t] = D_t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub initial_n: u64,
    pub states: Vec<u64>,
    pub extinction: Extinction,
}

impl Trajectory {
    /// Checks the path invariants: starts at `n`, nonincreasing, stops at the
    /// first 0 and the extinction marker agrees with the path.
    pub fn is_consistent(&self) -> bool {
        if self.states.first() != Some(&self.initial_n) {
            return false;
        }
        if self.states.windows(2).any(|w| w[1] > w[0]) {
            return false;
        }
        let first_zero = self.states.iter().position(|&s| s == 0);
        match self.extinction {
            Extinction::Absorbed { time } => {
                first_zero == Some(time as usize) && self.states.len() == time as usize + 1
            }
            Extinction::Censored { t_max } => first_zero.is_none() && self.states.len() == t_max as usize + 1,
        }
    }
}

/// Result of watching a process started at `k` until it first leaves `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FirstPassageOutcome {
    /// Left `k` for exactly `k - 1` at time `j >= 1`.
    Finite { j: u64 },
    /// Left `k` for a state below `k - 1`, so `T_k` is infinite.
    JumpedOver,
    /// Still at `k` after `t_max` steps.
    Censored { t_max: u64 },
}

impl FirstPassageOutcome {
    pub fn is_finite(self) -> bool {
        matches!(self, FirstPassageOutcome::Finite { .. })
    }
}

fn check_population(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("initial population must be at least 1".into()));
    }
    if n > MAX_POPULATION {
        return Err(Error::Domain(format!("population {n} exceeds 2^53")));
    }
    Ok(())
}

/// One transition: `x - Binomial(x, c)`.
pub fn step(x: u64, c: f64, rng: &mut RngStream) -> Result<u64> {
    check_unit_closed("c", c)?;
    Ok(x - binomial(rng, x, c))
}

/// Smallest `t_max` with `(1 - c)^(k * t_max) < CENSORING_TARGET`, i.e. the
/// chance of holding at state `k` for `t_max` consecutive steps is below the
/// target.
pub fn default_t_max(c_min: f64, k_min: u64) -> Result<u64> {
    check_unit_open("c_min", c_min)?;
    if k_min == 0 {
        return Err(Error::Domain("k_min must be at least 1".into()));
    }
    let per_step = k_min as f64 * (-c_min).ln_1p();
    Ok((CENSORING_TARGET.ln() / per_step).floor() as u64 + 1)
}

/// Simulates from `n` until absorption or `t_max` steps, calling
/// `observe(t, k, c)` with the current state and the mortality in force
/// before every transition.
pub fn simulate_observed<F>(
    n: u64,
    regime: &MortalityRegime,
    rng: &mut RngStream,
    t_max: u64,
    mut observe: F,
) -> Result<Trajectory>
where
    F: FnMut(u64, u64, f64),
{
    check_population(n)?;
    let mut states = vec![n];
    let mut k = n;
    let mut t = 0u64;
    while k > 0 && t < t_max {
        let c = regime.mortality(k, n)?;
        observe(t, k, c);
        k -= binomial(rng, k, c);
        t += 1;
        states.push(k);
    }
    let extinction = if k == 0 {
        Extinction::Absorbed { time: t }
    } else {
        Extinction::Censored { t_max }
    };
    Ok(Trajectory {
        initial_n: n,
        states,
        extinction,
    })
}

/// Simulates from `n`; the mortality is re-evaluated at the current state
/// before every step.
pub fn simulate_trajectory(
    n: u64,
    regime: &MortalityRegime,
    rng: &mut RngStream,
    t_max: u64,
) -> Result<Trajectory> {
    simulate_observed(n, regime, rng, t_max, |_, _, _| {})
}

/// Extinction time `tau_n` without storing the path.
pub fn extinction_time_sample(
    n: u64,
    regime: &MortalityRegime,
    rng: &mut RngStream,
    t_max: u64,
) -> Result<Extinction> {
    check_population(n)?;
    let mut k = n;
    let mut t = 0u64;
    if regime.is_state_free() {
        let c = regime.mortality(n, n)?;
        while k > 0 && t < t_max {
            k -= binomial(rng, k, c);
            t += 1;
        }
    } else {
        while k > 0 && t < t_max {
            let c = regime.mortality(k, n)?;
            k -= binomial(rng, k, c);
            t += 1;
        }
    }
    Ok(if k == 0 {
        Extinction::Absorbed { time: t }
    } else {
        Extinction::Censored { t_max }
    })
}

/// Number of deaths on the step at which a population of `k` first loses
/// anyone, i.e. `Binomial(k, c)` conditioned to be positive.
pub(crate) fn departure_deaths(k: u64, c: f64, rng: &mut RngStream) -> u64 {
    if c >= 1.0 {
        return k;
    }
    let log_stay = (-c).ln_1p();
    // P(first death among individuals 1..=k is individual i), truncated to k.
    let leave = -(k as f64 * log_stay).exp_m1();
    let u = rng.uniform();
    let i = ((-u * leave).ln_1p() / log_stay).ceil();
    let i = (i as u64).clamp(1, k);
    1 + binomial(rng, k - i, c)
}

/// Holding time at `k`: geometric with success `1 - (1-c)^k`.
pub(crate) fn holding_time(k: u64, c: f64, rng: &mut RngStream) -> u64 {
    geometric_from_log_stay(rng, k as f64 * (-c).ln_1p())
}

/// Watches whether the path from `n` to 0 uses only drops of exactly one.
///
/// Holding times do not affect the event, so only departures are drawn;
/// the run stops at the first drop of two or more.
pub fn observe_single_drop_path(n: u64, regime: &MortalityRegime, rng: &mut RngStream) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    check_population(n)?;
    for k in (2..=n).rev() {
        let c = regime.mortality(k, n)?;
        if departure_deaths(k, c, rng) != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First passage from `k` to `k - 1` for a process started at `k`, with the
/// mortality fixed at `mortality(regime, k, n)` while it sits at `k`.
pub fn first_passage_sample(
    k: u64,
    regime: &MortalityRegime,
    rng: &mut RngStream,
    t_max: u64,
    n: u64,
) -> Result<FirstPassageOutcome> {
    check_population(n)?;
    let c = regime.mortality(k, n)?;
    Ok(passage_with_mortality(k, c, rng, t_max))
}

#[inline]
pub(crate) fn passage_with_mortality(k: u64, c: f64, rng: &mut RngStream, t_max: u64) -> FirstPassageOutcome {
    let j = holding_time(k, c, rng);
    if j > t_max {
        return FirstPassageOutcome::Censored { t_max };
    }
    if departure_deaths(k, c, rng) == 1 {
        FirstPassageOutcome::Finite { j }
    } else {
        FirstPassageOutcome::JumpedOver
    }
}

/// Passage outcomes read off a single trajectory from `n`: for each
/// `k = n, ..., 1`, the time from the first arrival at `k` until the drop to
/// `k - 1`. States skipped by a larger drop (or left by one) are
/// `JumpedOver`.
pub fn embedded_passage_times(traj: &Trajectory) -> Vec<(u64, FirstPassageOutcome)> {
    let states = &traj.states;
    let mut out = Vec::with_capacity(traj.initial_n as usize);
    let mut t = 0usize;
    for k in (1..=traj.initial_n).rev() {
        while t < states.len() && states[t] > k {
            t += 1;
        }
        if t >= states.len() || states[t] != k {
            out.push((k, FirstPassageOutcome::JumpedOver));
            continue;
        }
        let arrival = t;
        while t < states.len() && states[t] == k {
            t += 1;
        }
        let outcome = if t == states.len() {
            match traj.extinction {
                Extinction::Censored { t_max } => FirstPassageOutcome::Censored { t_max },
                Extinction::Absorbed { .. } => unreachable!("absorbed paths end at 0"),
            }
        } else if states[t] == k - 1 {
            FirstPassageOutcome::Finite {
                j: (t - arrival) as u64,
            }
        } else {
            FirstPassageOutcome::JumpedOver
        };
        out.push((k, outcome));
    }
    out
}

/// Law of the landing state `j` in `0..k` given that the chain leaves `k`:
/// `C(k, k-j) c^(k-j) (1-c)^j / (1 - (1-c)^k)`.
pub fn drop_distribution(k: u64, c: f64) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::Domain("drop distribution needs k >= 1".into()));
    }
    check_unit_open("c", c)?;
    let log_c = c.ln();
    let log_q = (-c).ln_1p();
    let log_leave = (-(k as f64 * log_q).exp_m1()).ln();
    // ln C(k, d), built up as d grows.
    let mut log_binom = 0.0;
    let mut by_deaths = Vec::with_capacity(k as usize);
    for d in 1..=k {
        log_binom += ((k - d + 1) as f64).ln() - (d as f64).ln();
        let log_p = log_binom + d as f64 * log_c + (k - d) as f64 * log_q - log_leave;
        by_deaths.push(log_p.exp());
    }
    // Index by landing state j = k - d.
    by_deaths.reverse();
    Ok(by_deaths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(c: f64) -> MortalityRegime {
        MortalityRegime::constant(c).unwrap()
    }

    #[test]
    fn step_extremes() {
        let mut rng = RngStream::new(0, 0);
        assert_eq!(step(4, 0.0, &mut rng).unwrap(), 4);
        assert_eq!(step(4, 1.0, &mut rng).unwrap(), 0);
        assert!(step(4, 1.1, &mut rng).is_err());
    }

    #[test]
    fn certain_death_trajectory() {
        let regime = MortalityRegime::table([((1, 1), 1.0)]).unwrap();
        let mut rng = RngStream::new(0, 0);
        let traj = simulate_trajectory(1, &regime, &mut rng, 10).unwrap();
        assert_eq!(traj.states, vec![1, 0]);
        assert_eq!(traj.extinction, Extinction::Absorbed { time: 1 });
        assert!(traj.is_consistent());
    }

    #[test]
    fn censored_trajectory_is_consistent() {
        let mut rng = RngStream::new(0, 0);
        let traj = simulate_trajectory(50, &constant(1e-6), &mut rng, 5).unwrap();
        assert_eq!(traj.extinction, Extinction::Censored { t_max: 5 });
        assert_eq!(traj.states.len(), 6);
        assert!(traj.is_consistent());
    }

    #[test]
    fn zero_population_rejected() {
        let mut rng = RngStream::new(0, 0);
        assert!(simulate_trajectory(0, &constant(0.5), &mut rng, 10).is_err());
        assert!(extinction_time_sample(MAX_POPULATION + 1, &constant(0.5), &mut rng, 10).is_err());
    }

    #[test]
    fn mortality_follows_current_state() {
        let regime = MortalityRegime::joint_power(1.0, 4.0).unwrap();
        let mut rng = RngStream::new(5, 0);
        for _ in 0..50 {
            let mut seen = Vec::new();
            let traj = simulate_observed(3, &regime, &mut rng, 1_000_000_000, |t, k, c| {
                seen.push((t, k, c));
            })
            .unwrap();
            assert!(traj.is_consistent());
            for &(t, k, c) in &seen {
                assert_eq!(traj.states[t as usize], k);
                assert!((c - (k as f64) / 81.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rarely_censored_at_large_horizon() {
        let mut rng = RngStream::new(1, 0);
        let regime = constant(0.5);
        for _ in 0..10_000 {
            let traj = simulate_trajectory(5, &regime, &mut rng, 10_000).unwrap();
            assert!(traj.is_consistent());
            assert!(matches!(traj.extinction, Extinction::Absorbed { .. }));
        }
    }

    #[test]
    fn single_drop_trivial_sizes() {
        let mut rng = RngStream::new(0, 0);
        assert!(observe_single_drop_path(0, &constant(0.3), &mut rng).unwrap());
        for _ in 0..100 {
            assert!(observe_single_drop_path(1, &constant(0.3), &mut rng).unwrap());
        }
    }

    #[test]
    fn state_one_never_jumps_over() {
        let mut rng = RngStream::new(2, 0);
        for c in [0.01, 0.5, 0.99] {
            for _ in 0..1000 {
                let out = first_passage_sample(1, &constant(c), &mut rng, u64::MAX, 1).unwrap();
                assert!(out.is_finite());
            }
        }
    }

    #[test]
    fn departure_counts_stay_in_range() {
        let mut rng = RngStream::new(8, 0);
        for &(k, c) in &[(1u64, 0.3), (5, 1e-9), (20, 0.7), (3, 1.0)] {
            for _ in 0..1000 {
                let d = departure_deaths(k, c, &mut rng);
                assert!((1..=k).contains(&d));
            }
        }
    }

    #[test]
    fn passage_censoring() {
        let mut rng = RngStream::new(3, 0);
        let out = first_passage_sample(2, &constant(1e-9), &mut rng, 3, 5).unwrap();
        assert_eq!(out, FirstPassageOutcome::Censored { t_max: 3 });
    }

    #[test]
    fn drop_distribution_small_cases() {
        assert_eq!(drop_distribution(1, 0.4).unwrap().len(), 1);
        assert!((drop_distribution(1, 0.4).unwrap()[0] - 1.0).abs() < 1e-15);
        let d = drop_distribution(2, 0.5).unwrap();
        assert!((d[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((d[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!(drop_distribution(0, 0.5).is_err());
        assert!(drop_distribution(3, 1.0).is_err());
    }

    #[test]
    fn drop_distribution_normalized() {
        for k in [1u64, 2, 3, 7, 30, 200] {
            for c in [1e-6, 0.01, 0.3, 0.5, 0.9, 0.999] {
                let s: f64 = drop_distribution(k, c).unwrap().iter().sum();
                assert!((s - 1.0).abs() < 1e-12, "k={k} c={c} sum={s}");
            }
        }
    }

    #[test]
    fn default_horizon_meets_target() {
        for &(c, k) in &[(0.5, 1u64), (1e-4, 3), (2e-9, 2)] {
            let t = default_t_max(c, k).unwrap();
            let log_censor = t as f64 * k as f64 * (-c).ln_1p();
            assert!(log_censor < CENSORING_TARGET.ln());
            assert!((t - 1) as f64 * k as f64 * (-c).ln_1p() >= CENSORING_TARGET.ln());
        }
    }

    #[test]
    fn embedded_times_from_known_path() {
        let traj = Trajectory {
            initial_n: 4,
            states: vec![4, 4, 3, 1, 1, 1, 0],
            extinction: Extinction::Absorbed { time: 6 },
        };
        let got = embedded_passage_times(&traj);
        assert_eq!(
            got,
            vec![
                (4, FirstPassageOutcome::Finite { j: 2 }),
                (3, FirstPassageOutcome::JumpedOver),
                (2, FirstPassageOutcome::JumpedOver),
                (1, FirstPassageOutcome::Finite { j: 3 }),
            ]
        );
    }
}
