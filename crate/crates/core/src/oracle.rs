//! Brute-force ground truth for small instances.
//!
//! Nothing here calls into [`crate::analytics`]: the state law is obtained by
//! pushing probability mass through the binomial transition kernel, path
//! probabilities come from the conditional jump law, and passage-time
//! quantities are summed term by term from binomial point masses.

use serde::Serialize;

use crate::error::{check_unit_open, Error, Result};
use crate::process::drop_distribution;
use crate::regime::MortalityRegime;

pub const MAX_ORACLE_STATE: u64 = 30;
pub const MAX_ORACLE_TIME: u64 = 200;

/// Exact law of `D_t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateDistribution {
    pub t: u64,
    /// `mass[x] = P(D_t = x)` for `x = 0..=n`.
    pub mass: Vec<f64>,
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Default, Debug)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

fn pascal(rows: usize) -> Vec<Vec<f64>> {
    let mut tri: Vec<Vec<f64>> = Vec::with_capacity(rows + 1);
    for x in 0..=rows {
        let mut row = vec![1.0; x + 1];
        for b in 1..x {
            row[b] = tri[x - 1][b - 1] + tri[x - 1][b];
        }
        tri.push(row);
    }
    tri
}

fn check_caps(n: u64, t: u64) -> Result<()> {
    if n > MAX_ORACLE_STATE {
        return Err(Error::CapExceeded(format!("n = {n} > {MAX_ORACLE_STATE}")));
    }
    if t > MAX_ORACLE_TIME {
        return Err(Error::CapExceeded(format!("t = {t} > {MAX_ORACLE_TIME}")));
    }
    Ok(())
}

/// Laws of `D_0, ..., D_t` started from `n`.
pub fn exact_state_history(n: u64, regime: &MortalityRegime, t: u64) -> Result<Vec<StateDistribution>> {
    check_caps(n, t)?;
    if n == 0 {
        return Err(Error::Domain("initial population must be at least 1".into()));
    }
    let size = n as usize + 1;
    let binom = pascal(size);
    // kernel[x][b] = P(x -> x - b)
    let mut kernel: Vec<Vec<f64>> = vec![Vec::new(); size];
    for x in 1..size {
        let c = regime.mortality(x as u64, n)?;
        kernel[x] = (0..=x)
            .map(|b| binom[x][b] * c.powi(b as i32) * (1.0 - c).powi((x - b) as i32))
            .collect();
    }
    let mut mass = vec![0.0; size];
    mass[n as usize] = 1.0;
    let mut history = vec![StateDistribution {
        t: 0,
        mass: mass.clone(),
    }];
    for step in 1..=t {
        let mut next = vec![CompensatedSum::default(); size];
        next[0].add(mass[0]);
        for x in 1..size {
            if mass[x] == 0.0 {
                continue;
            }
            for (b, &p) in kernel[x].iter().enumerate() {
                next[x - b].add(mass[x] * p);
            }
        }
        mass = next.into_iter().map(CompensatedSum::value).collect();
        history.push(StateDistribution {
            t: step,
            mass: mass.clone(),
        });
    }
    Ok(history)
}

/// Law of `D_t` started from `n` (caps: `n <= 30`, `t <= 200`).
pub fn exact_state_distribution(n: u64, regime: &MortalityRegime, t: u64) -> Result<StateDistribution> {
    Ok(exact_state_history(n, regime, t)?
        .pop()
        .expect("history holds t = 0"))
}

/// Writes `(t, state, mass)` rows.
pub fn write_state_history_csv<W: std::io::Write>(history: &[StateDistribution], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "state", "mass"])?;
    for dist in history {
        for (state, m) in dist.mass.iter().enumerate() {
            w.write_record(&[dist.t.to_string(), state.to_string(), format!("{m:e}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Single-drop path probability chained from the conditional jump law.
pub fn exact_single_drop_path_prob(n: u64, regime: &MortalityRegime) -> Result<f64> {
    check_caps(n, 0)?;
    let mut p = 1.0;
    for k in 1..=n {
        let c = regime.mortality(k, n)?;
        let law = drop_distribution(k, c)?;
        p *= law[k as usize - 1];
    }
    Ok(p)
}

/// Defective law of the passage time from `k` to `k - 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PassageLaw {
    /// `pmf[j - 1] = P(T_k = j)` for `j = 1..=j_max`.
    pub pmf: Vec<f64>,
    /// Exact remaining mass `sum_{j > j_max} P(T_k = j)`.
    pub truncation_tail: f64,
}

impl PassageLaw {
    pub fn total_mass(&self) -> f64 {
        let mut s = CompensatedSum::default();
        for &p in &self.pmf {
            s.add(p);
        }
        s.value()
    }
}

/// One-step probabilities at state `k`: nobody dies, exactly one dies.
fn stay_and_single(k: u64, c: f64) -> (f64, f64) {
    let q = 1.0 - c;
    let stay = q.powi(k as i32);
    let single = k as f64 * c * q.powi(k as i32 - 1);
    (stay, single)
}

/// Passage-time pmf by direct evaluation of "stay `j-1` times, then lose
/// exactly one", plus the geometric remainder beyond `j_max`.
pub fn exact_passage_law(k: u64, c: f64, j_max: u64) -> Result<PassageLaw> {
    if k == 0 {
        return Err(Error::Domain("state k must be at least 1".into()));
    }
    check_caps(k, 0)?;
    check_unit_open("c", c)?;
    let (stay, single) = stay_and_single(k, c);
    let mut pmf = Vec::with_capacity(j_max as usize);
    let mut hold = 1.0;
    for _ in 0..j_max {
        pmf.push(hold * single);
        hold *= stay;
    }
    Ok(PassageLaw {
        pmf,
        truncation_tail: single * hold / (1.0 - stay),
    })
}

/// `sum_j exp(s j) P(T_k = j)`, summed until the geometric tail bound drops
/// below `tol`.
pub fn mgf_by_summation(k: u64, c: f64, s: f64, tol: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("state k must be at least 1".into()));
    }
    check_unit_open("c", c)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let (stay, single) = stay_and_single(k, c);
    let log_stay = stay.ln();
    let ratio = (s + log_stay).exp();
    if !(ratio < 1.0) {
        return Err(Error::Domain(format!(
            "series diverges: exp(s) (1-c)^k = {ratio} >= 1"
        )));
    }
    let mut sum = CompensatedSum::default();
    let mut j = 1u64;
    loop {
        let term = single * (s * j as f64 + (j - 1) as f64 * log_stay).exp();
        sum.add(term);
        // Remaining terms form a geometric series with ratio < 1.
        let tail = term * ratio / (1.0 - ratio);
        if tail < tol * 1e-3 {
            break;
        }
        j += 1;
    }
    Ok(sum.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(c: f64) -> MortalityRegime {
        MortalityRegime::constant(c).unwrap()
    }

    #[test]
    fn point_mass_at_time_zero() {
        let d = exact_state_distribution(7, &constant(0.3), 0).unwrap();
        assert_eq!(d.t, 0);
        assert_eq!(d.mass, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn one_binomial_step() {
        let d = exact_state_distribution(2, &constant(0.5), 1).unwrap();
        assert_eq!(d.mass, vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn caps_enforced() {
        assert!(matches!(
            exact_state_distribution(31, &constant(0.3), 1),
            Err(Error::CapExceeded(_))
        ));
        assert!(matches!(
            exact_state_distribution(3, &constant(0.3), 201),
            Err(Error::CapExceeded(_))
        ));
        assert!(exact_single_drop_path_prob(31, &constant(0.3)).is_err());
        assert!(exact_passage_law(31, 0.3, 10).is_err());
    }

    #[test]
    fn mass_conserved_and_absorbing() {
        let regimes = [
            constant(0.05),
            constant(0.9),
            MortalityRegime::joint_power(1.0, 2.0).unwrap(),
            MortalityRegime::state_power(0.5, 1.0).unwrap(),
        ];
        for regime in &regimes {
            let hist = exact_state_history(30, regime, 200).unwrap();
            let mut absorbed = 0.0;
            for d in &hist {
                let total: f64 = d.mass.iter().sum();
                assert!((total - 1.0).abs() < 1e-12);
                assert!(d.mass.iter().all(|&m| m >= 0.0));
                assert!(d.mass[0] >= absorbed);
                absorbed = d.mass[0];
            }
        }
    }

    #[test]
    fn mass_only_moves_down() {
        let hist = exact_state_history(12, &constant(0.2), 40).unwrap();
        for w in hist.windows(2) {
            // P(D_{t+1} >= x) <= P(D_t >= x) for every x.
            let (mut a, mut b) = (0.0, 0.0);
            for x in (0..w[0].mass.len()).rev() {
                a += w[0].mass[x];
                b += w[1].mass[x];
                assert!(b <= a + 1e-13);
            }
        }
    }

    #[test]
    fn single_drop_path_small() {
        assert_eq!(exact_single_drop_path_prob(1, &constant(0.3)).unwrap(), 1.0);
        let p = exact_single_drop_path_prob(2, &constant(0.5)).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(exact_single_drop_path_prob(0, &constant(0.5)).unwrap(), 1.0);
    }

    #[test]
    fn passage_law_single_individual_is_geometric() {
        let law = exact_passage_law(1, 0.5, 30).unwrap();
        for (i, &p) in law.pmf.iter().enumerate() {
            assert_eq!(p, 0.5f64.powi(i as i32 + 1));
        }
    }

    #[test]
    fn passage_law_ratio_is_constant() {
        let law = exact_passage_law(4, 0.2, 50).unwrap();
        let q4 = 0.8f64.powi(4);
        for w in law.pmf.windows(2) {
            assert!((w[1] / w[0] - q4).abs() < 1e-14);
        }
    }

    #[test]
    fn mgf_domain() {
        let boundary = -2.0 * 0.5f64.ln();
        assert!(mgf_by_summation(2, 0.5, boundary, 1e-12).is_err());
        assert!(mgf_by_summation(2, 0.5, 0.1, 0.0).is_err());
    }

    #[test]
    fn mgf_at_zero_is_total_mass() {
        let law = exact_passage_law(3, 0.3, 200).unwrap();
        let g = mgf_by_summation(3, 0.3, 0.0, 1e-14).unwrap();
        assert!((g - (law.total_mass() + law.truncation_tail)).abs() < 1e-13);
    }
}
