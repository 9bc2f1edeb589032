use adscale_core::policy::{check_distribution, AaeClassic, Aaeas, Thompson, Ucb};
use adscale_core::simulator::sample_arm;
use adscale_core::{
    build_policy, episode_seed, normalize_instance, run_episode, Policy, PolicyKind, PolicyParams, QualitySchedule,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_announcement_is_a_distribution(
        k in 1usize..6,
        seed in any::<u64>(),
        binary in any::<bool>(),
        kind in prop::sample::select(PolicyKind::ALL.to_vec()),
    ) {
        let mut policy = build_policy(kind, k, 400, &PolicyParams::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let binary = binary || kind == PolicyKind::Thompson;
        for _ in 0..400 {
            let arm = {
                let d = policy.announce(&mut rng).unwrap();
                let dist = d.distribution();
                prop_assert_eq!(dist.len(), k);
                prop_assert!(check_distribution(dist).is_ok(), "{kind}: {dist:?}");
                sample_arm(dist, rng.random())
            };
            let reward = if binary { f64::from(rng.random_bool(0.6)) } else { rng.random::<f64>() };
            policy.observe(arm, reward).unwrap();
        }
    }
}

const PERM: [usize; 4] = [2, 0, 3, 1];

fn reward_table(seed: u64, rounds: usize, binary: bool) -> Vec<[f64; 4]> {
    let means = [0.1, 0.9, 0.5, 0.45];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rounds)
        .map(|_| {
            let mut row = [0.0; 4];
            for (r, m) in row.iter_mut().zip(means) {
                *r = if binary {
                    f64::from(rng.random::<f64>() < m)
                } else {
                    (m + 0.5 * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0)
                };
            }
            row
        })
        .collect()
}

/// Plays `original` on `table` and `permuted` on the relabelled table, feeding
/// the relabelled arm of every original choice. Returns the number of rounds
/// whose announcements were compared.
fn replay_permuted(original: &mut dyn Policy, permuted: &mut dyn Policy, table: &[[f64; 4]], skip: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut rng_p = ChaCha8Rng::seed_from_u64(8);
    let mut compared = 0;
    for (t, row) in table.iter().enumerate() {
        let arm = {
            let d = original.announce(&mut rng).unwrap().distribution().to_vec();
            let dp = permuted.announce(&mut rng_p).unwrap().distribution().to_vec();
            if t >= skip {
                for a in 0..4 {
                    assert_eq!(d[a], dp[PERM[a]], "round {t}: {d:?} vs {dp:?}");
                }
                compared += 1;
            }
            sample_arm(&d, rng.random())
        };
        original.observe(arm, row[arm]).unwrap();
        permuted.observe(PERM[arm], row[arm]).unwrap();
    }
    compared
}

#[test]
fn aaeas_relabels_with_the_arms() {
    let table = reward_table(1, 5_000, false);
    let mut a = Aaeas::new(4, 5_000, Some(0.5)).unwrap();
    let mut b = Aaeas::new(4, 5_000, Some(0.5)).unwrap();
    replay_permuted(&mut a, &mut b, &table, 0);
    for (arm, &to) in PERM.iter().enumerate() {
        assert_eq!(a.eliminated_at()[arm], b.eliminated_at()[to]);
    }
    assert!(a.eliminated_at().iter().any(Option::is_some), "table too easy to be informative");
}

#[test]
fn aae_relabels_with_the_arms() {
    let table = reward_table(2, 5_000, false);
    let mut a = AaeClassic::new(4, 5_000, None).unwrap();
    let mut b = AaeClassic::new(4, 5_000, None).unwrap();
    replay_permuted(&mut a, &mut b, &table, 0);
    for (arm, &to) in PERM.iter().enumerate() {
        assert_eq!(a.eliminated_at()[arm], b.eliminated_at()[to]);
    }
    assert!(a.eliminated_at().iter().any(Option::is_some), "table too easy to be informative");
}

#[test]
fn ucb_relabels_with_the_arms_once_bootstrapped() {
    // Continuous rewards rule out index ties; the first pass over unpulled
    // arms follows index order by design and is not compared.
    let table = reward_table(3, 2_000, false);
    let mut a = Ucb::new(4);
    let mut b = Ucb::new(4);
    let compared = replay_permuted(&mut a, &mut b, &table, 4);
    assert_eq!(compared, 1_996);
    for (arm, &to) in PERM.iter().enumerate() {
        assert_eq!(a.counts()[arm], b.counts()[to]);
    }
}

#[test]
fn thompson_posteriors_relabel_with_the_arms() {
    let table = reward_table(4, 2_000, true);
    let mut a = Thompson::new(4);
    let mut b = Thompson::new(4);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for row in &table {
        let arm = a.announce(&mut rng).unwrap().point_mass_arm().unwrap();
        a.observe(arm, row[arm]).unwrap();
        b.observe(PERM[arm], row[arm]).unwrap();
        for (x, &to) in PERM.iter().enumerate() {
            assert_eq!(a.posterior(x), b.posterior(to));
        }
    }
}

#[test]
fn aaeas_keeps_the_optimal_arm() {
    let instance = normalize_instance(&[0.5, 0.8]).unwrap();
    let schedule = QualitySchedule::constant(1.0).unwrap();
    let horizon = 10_000;
    let mut lost = 0;
    for run in 0..200 {
        let mut policy = Aaeas::new(2, horizon, None).unwrap();
        run_episode(&instance, &schedule, &mut policy, episode_seed(2024, "aaeas", run), horizon, horizon).unwrap();
        if !policy.is_active(instance.optimal_arm()) {
            lost += 1;
        }
    }
    assert!(lost <= 2, "optimal arm eliminated in {lost} of 200 runs");
}
