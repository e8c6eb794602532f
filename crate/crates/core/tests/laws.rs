//! Sampled laws against independently computed distributions.

use puredeath::analytics::{extinction_cdf, passage_pmf, single_drop_prob};
use puredeath::oracle::{exact_passage_law, exact_state_distribution};
use puredeath::parallel::MonteCarlo;
use puredeath::process::{
    drop_distribution, embedded_passage_times, simulate_trajectory, FirstPassageOutcome,
};
use puredeath::regime::MortalityRegime;
use puredeath::sampling::{sample_binomial, sample_geometric, sample_max_geometric};
use puredeath::stats::{
    chi_square_gof, ks_critical_value, ks_statistic_lattice, ks_two_sample, ks_two_sample_critical,
    SampleSummary,
};
use statrs::distribution::{Binomial, Discrete};

const LEVEL: f64 = 1e-3;

fn counts(values: &[u64], cells: usize) -> Vec<u64> {
    let mut out = vec![0u64; cells];
    for &v in values {
        out[v as usize] += 1;
    }
    out
}

#[test]
fn binomial_sampler_matches_pmf() {
    let mc = MonteCarlo::new(11, 4);
    for &x in &[1u64, 2, 10, 50] {
        for &c in &[0.01, 0.3, 0.5, 0.9] {
            let draws = mc
                .labelled(&format!("{x}/{c}"))
                .try_collect(100_000, |rng| sample_binomial(rng, x, c))
                .unwrap();
            let law = Binomial::new(c, x).unwrap();
            let probs: Vec<f64> = (0..=x).map(|b| law.pmf(b)).collect();
            let test = chi_square_gof(&counts(&draws, x as usize + 1), &probs, LEVEL).unwrap();
            assert!(test.passes(), "x={x} c={c}: {test:?}");
        }
    }
}

#[test]
fn max_geometric_matches_max_of_geometrics() {
    let mc = MonteCarlo::new(12, 4);
    for &(n, c) in &[(1u64, 0.3), (7, 0.2), (40, 0.05)] {
        let direct = mc
            .labelled("direct")
            .try_collect(20_000, |rng| Ok(sample_max_geometric(rng, n, c)? as f64))
            .unwrap();
        let brute = mc
            .labelled("brute")
            .try_collect(20_000, |rng| {
                let mut m = 0;
                for _ in 0..n {
                    m = m.max(sample_geometric(rng, c)?);
                }
                Ok(m as f64)
            })
            .unwrap();
        let a = SampleSummary::from_values(direct).unwrap();
        let b = SampleSummary::from_values(brute).unwrap();
        let d = ks_two_sample(&a, &b);
        assert!(
            d <= ks_two_sample_critical(a.count, b.count, LEVEL).unwrap(),
            "n={n}: {d}"
        );
    }
}

#[test]
fn extinction_times_follow_closed_form() {
    let (n, c) = (25u64, 0.15);
    let regime = MortalityRegime::constant(c).unwrap();
    let times = MonteCarlo::new(13, 4)
        .try_collect(50_000, |rng| {
            Ok(simulate_trajectory(n, &regime, rng, 10_000)?
                .extinction
                .time()
                .unwrap())
        })
        .unwrap();
    let summary = SampleSummary::from_counts(times).unwrap();
    let d = ks_statistic_lattice(&summary, |t| {
        if t <= 0 {
            0.0
        } else {
            extinction_cdf(n, c, t as u64).unwrap()
        }
    });
    assert!(d <= ks_critical_value(summary.count, LEVEL).unwrap(), "{d}");
}

#[test]
fn state_law_matches_oracle() {
    let n = 12u64;
    let t = 4u64;
    let regime = MortalityRegime::state_power(0.4, 0.5).unwrap();
    let oracle = exact_state_distribution(n, &regime, t).unwrap();
    let states = MonteCarlo::new(14, 4)
        .try_collect(100_000, |rng| {
            let traj = simulate_trajectory(n, &regime, rng, t)?;
            Ok(traj.states.get(t as usize).copied().unwrap_or(0))
        })
        .unwrap();
    let test = chi_square_gof(&counts(&states, n as usize + 1), &oracle.mass, LEVEL).unwrap();
    assert!(test.passes(), "{test:?}");
}

#[test]
fn holding_time_is_memoryless() {
    // Time spent at the start state k, conditioned on exceeding `a`, is
    // `a` plus a fresh geometric holding time.
    let (k, c, a) = (4u64, 0.2, 3usize);
    let regime = MortalityRegime::constant(c).unwrap();
    let holds = MonteCarlo::new(15, 4)
        .try_collect(200_000, |rng| {
            let traj = simulate_trajectory(k, &regime, rng, 10_000)?;
            Ok(traj.states.iter().take_while(|&&s| s == k).count() as u64)
        })
        .unwrap();
    let residual: Vec<u64> = holds
        .iter()
        .filter(|&&h| h > a as u64)
        .map(|&h| h - a as u64)
        .collect();
    let leave = 1.0 - (1.0 - c).powi(k as i32);
    let cells = 25;
    let probs: Vec<f64> = (0..cells)
        .map(|j| {
            if j == 0 {
                0.0
            } else {
                leave * (1.0 - leave).powi(j as i32 - 1)
            }
        })
        .collect();
    let observed = counts(
        &residual
            .iter()
            .map(|&r| r.min(cells as u64 - 1))
            .collect::<Vec<_>>(),
        cells,
    );
    let test = chi_square_gof(&observed, &probs, LEVEL).unwrap();
    assert!(test.passes(), "{test:?}");
}

#[test]
fn landing_state_follows_jump_law() {
    let (k, c) = (6u64, 0.3);
    let regime = MortalityRegime::constant(c).unwrap();
    let landings = MonteCarlo::new(16, 4)
        .try_collect(100_000, |rng| {
            let traj = simulate_trajectory(k, &regime, rng, 10_000)?;
            Ok(*traj.states.iter().find(|&&s| s < k).unwrap())
        })
        .unwrap();
    let law = drop_distribution(k, c).unwrap();
    let test = chi_square_gof(&counts(&landings, k as usize), &law, LEVEL).unwrap();
    assert!(test.passes(), "{test:?}");
    assert!((law[k as usize - 1] - single_drop_prob(k, c).unwrap()).abs() < 1e-15);
}

#[test]
fn embedded_passages_follow_defective_pmf() {
    // The chain restarts at its first arrival in k, so passages read off
    // full trajectories follow the fresh-start law given a visit.
    let (n, c, k) = (8u64, 0.1, 5u64);
    let regime = MortalityRegime::constant(c).unwrap();
    let outcomes = MonteCarlo::new(17, 4)
        .try_collect(100_000, |rng| {
            let traj = simulate_trajectory(n, &regime, rng, 10_000)?;
            if !traj.states.contains(&k) {
                return Ok(None);
            }
            Ok(embedded_passage_times(&traj)
                .into_iter()
                .find(|(level, _)| *level == k)
                .map(|p| p.1))
        })
        .unwrap();
    // Cells: j = 1..cells-1, j >= cells, jumped over.
    let cells = 12usize;
    let mut observed = vec![0u64; cells + 1];
    for o in outcomes.into_iter().flatten() {
        match o {
            FirstPassageOutcome::Finite { j } => observed[(j as usize).min(cells)] += 1,
            FirstPassageOutcome::JumpedOver => observed[0] += 1,
            FirstPassageOutcome::Censored { .. } => panic!("censored at t_max = 10000"),
        }
    }
    let law = exact_passage_law(k, c, cells as u64 - 1).unwrap();
    let mut probs = vec![1.0 - single_drop_prob(k, c).unwrap()];
    for j in 1..cells as u64 {
        let p = passage_pmf(k, c, j).unwrap();
        assert!((p - law.pmf[j as usize - 1]).abs() < 1e-15);
        probs.push(p);
    }
    probs.push(law.truncation_tail);
    let test = chi_square_gof(&observed, &probs, LEVEL).unwrap();
    assert!(test.passes(), "{test:?}");
}
