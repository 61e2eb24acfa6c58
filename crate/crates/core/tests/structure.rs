mod support;

use asaf_core::matrix::*;
use asaf_core::{AsyncModel, DelayProfile, Network, NetworkConfig};
use proptest::prelude::*;
use support::{offset_net, prop_net, Lcg};

fn gamma_string(i: usize) -> String {
    format!("g{i}*h{i}")
}

fn sum_string(a: usize, b: usize) -> String {
    let (lo, hi) = (a.min(b), a.max(b));
    format!("g{lo}*h{lo}+g{hi}*h{hi}")
}

fn diag_strings(h: &SymbolicMatrix) -> Vec<String> {
    (0..h.rows()).map(|k| h.entry_string(k, k)).collect()
}

/// Random propagation profile with `theta <= max_theta`.
fn random_prop(rng: &mut Lcg, n: usize, max_theta: u64) -> (Vec<i64>, Vec<i64>) {
    let mut nu = Vec::new();
    let mut pi = Vec::new();
    for _ in 0..n {
        let tau = rng.below(max_theta + 1);
        let v = rng.below(tau + 1);
        nu.push(v as i64);
        pi.push((tau - v) as i64);
    }
    (nu, pi)
}

fn theta_of(nu: &[i64], pi: &[i64]) -> i64 {
    nu.iter().zip(pi).map(|(a, b)| a + b).max().unwrap()
}

/// Expected `(gamma_a + gamma_b)` diagonal census of the offset model:
/// consecutive packets `p, p + 1` within the frame overlap by `(tau_p - tau_{p+1})^+`.
fn offset_sum_census(n: usize, m: usize, tau: &[i64]) -> std::collections::BTreeMap<String, usize> {
    let mut want = std::collections::BTreeMap::new();
    for p in 0..m.saturating_sub(1) {
        let (a, b) = (p % n + 1, (p + 1) % n + 1);
        let overlap = (tau[a - 1] - tau[b - 1]).max(0) as usize;
        if overlap > 0 && a != b {
            *want.entry(sum_string(a, b)).or_insert(0) += overlap;
        }
    }
    want
}

#[test]
fn guard_instances_are_triangular_with_full_diagonal() {
    let mut rng = Lcg(11);
    for _ in 0..1000 {
        let n = 1 + rng.below(4) as usize;
        let k = 1 + rng.below(2) as usize;
        let t = 1 + rng.below(8) as usize;
        let (nu, pi) = random_prop(&mut rng, n, 3);
        let theta = theta_of(&nu, &pi) as usize;
        let isolated = rng.below(2) == 0;
        let h = build_guard(&prop_net(n, n * k, t, theta, nu, pi, isolated)).unwrap();
        assert!(h.is_square() && h.is_lower_triangular());
        let diag = diag_strings(&h);
        for i in 1..=n {
            assert_eq!(diag.iter().filter(|d| **d == gamma_string(i)).count(), k * t);
        }
    }
}

#[test]
fn offset_instances_are_triangular_with_census() {
    let mut rng = Lcg(12);
    for _ in 0..1000 {
        let n = 1 + rng.below(4) as usize;
        let k = 1 + rng.below(2) as usize;
        let theta = rng.below(4);
        let t = (theta as usize + 1) + rng.below(8 - theta) as usize;
        let tau: Vec<i64> = (0..n).map(|_| rng.below(theta + 1) as i64).collect();
        let theta = *tau.iter().max().unwrap() as usize;
        let m = n * k;
        let h = build_offset(&offset_net(m, t, tau.clone(), false)).unwrap();
        assert!(h.is_square() && h.is_lower_triangular());
        let diag = diag_strings(&h);
        for i in 1..=n {
            let clean = diag.iter().filter(|d| **d == gamma_string(i)).count();
            assert!(clean >= k * (t - theta), "relay {i} has {clean} clean, tau {tau:?} T {t}");
        }
        let mut got = std::collections::BTreeMap::new();
        for d in diag.iter().filter(|d| d.contains('+')) {
            *got.entry(d.clone()).or_insert(0usize) += 1;
        }
        assert_eq!(got, offset_sum_census(n, m, &tau), "tau {tau:?} T {t} M {m}");
        assert!(diag.iter().all(|d| d == "0" || !d.contains('c')));
    }
}

#[test]
fn offset_listed_census() {
    // tau = (2, 1): relay 1 overlaps relay 2 by one symbol per cycle, relay 2
    // (wrapping to relay 1 of the next cycle) by none.
    let h = build_offset(&offset_net(2, 4, vec![2, 1], false)).unwrap();
    let diag = diag_strings(&h);
    assert_eq!(diag.iter().filter(|d| **d == sum_string(1, 2)).count(), 1);
    let h = build_offset(&offset_net(4, 4, vec![2, 1], false)).unwrap();
    assert_eq!(diag_strings(&h).iter().filter(|d| d.contains('+')).count(), 2);
}

#[test]
fn offset_dl_band_structure() {
    let h = build_offset_dl(&offset_net(3, 4, vec![1, 0, 1], true)).unwrap();
    assert!(h.is_lower_triangular());
    assert!(diag_strings(&h).iter().all(|d| d == "g0"));
    assert_eq!(first_subdiagonal(&h), Some(4));
    let band = extract_subdiag(&h);
    let sums = band.nonzeros().filter(|(_, _, e)| e.terms().len() == 2).count();
    assert_eq!(sums, 1);
    assert_eq!(extract_strict_lower(&h).nnz(), band.nnz());

    let one = build_offset_dl(&offset_net(3, 4, vec![0], true)).unwrap();
    let band = extract_subdiag(&one);
    assert_eq!(band.nnz(), 12);
    assert!(band.nonzeros().all(|(r, c, e)| r == c + 4 && e.to_string() == gamma_string(1)));
}

#[test]
fn guard_dl_band_counts() {
    let mut rng = Lcg(13);
    for _ in 0..1000 {
        let n = 1 + rng.below(4) as usize;
        let k = 1 + rng.below(2) as usize;
        let (nu, pi) = random_prop(&mut rng, n, 3);
        let tau0 = rng.below(4) as i64;
        let dp = DelayProfile::prop_with_direct(nu, pi, tau0);
        let theta = dp.theta() as usize;
        let t = theta + 1 + rng.below(8 - theta as u64) as usize;
        let cfg = NetworkConfig::new(n, n * k, t, AsyncModel::PropagationDelay)
            .with_direct_link()
            .with_guard(theta);
        let h = build_guard_dl(&Network::new(cfg, dp).unwrap()).unwrap();
        assert_eq!(h.rows(), (n * k + 1) * t);
        assert!(h.is_square() && h.is_lower_triangular());
        assert!(diag_strings(&h).iter().all(|d| d == "g0"));
        let lower = extract_strict_lower(&h);
        for i in 1..=n {
            let count = lower.nonzeros().filter(|(_, _, e)| e.to_string() == gamma_string(i)).count();
            assert!(count >= k * (t - theta), "relay {i}: {count}");
        }
        assert!(lower.nonzeros().all(|(_, _, e)| e.terms().len() == 1 && e.terms()[0].factors().len() == 2));
    }
}

#[test]
fn guard_dl_bidiagonal_without_delays() {
    let cfg = NetworkConfig::new(1, 3, 4, AsyncModel::PropagationDelay).with_direct_link();
    let h = build_guard_dl(&Network::new(cfg, DelayProfile::prop_with_direct(vec![0], vec![0], 0)).unwrap()).unwrap();
    assert_eq!(first_subdiagonal(&h), Some(4));
    let band = extract_subdiag(&h);
    assert_eq!(band.nnz(), 12);
    assert!(band.nonzeros().all(|(_, _, e)| e.to_string() == gamma_string(1)));
    assert_eq!(extract_diag(&h).nnz(), 16);
}

#[test]
fn drop_plans_are_triangular_on_random_profiles() {
    let mut rng = Lcg(14);
    let mut built = 0;
    for _ in 0..1000 {
        let k = 1 + rng.below(3) as usize;
        let t = 1 + rng.below(8) as usize;
        let (nu, pi) = random_prop(&mut rng, 2, 3);
        let theta = theta_of(&nu, &pi) as usize;
        let x = rng.below(theta as u64 + 1) as usize;
        let net = prop_net(2, 2 * k, t, x, nu, pi, rng.below(2) == 0);
        let h = build_prop_naive(&net).unwrap();
        match compute_drop_plan(&net) {
            Ok(plan) => {
                let d = apply_drop(&h, &plan).unwrap_or_else(|e| panic!("{e} on {net:?} plan {plan:?}\n{}", h.render()));
                assert!(d.is_lower_triangular());
                built += 1;
            }
            Err(DropError::EmptyPlan(_)) => assert!(t as i64 - 2 * theta as i64 + 2 * x as i64 <= 0),
            Err(e) => panic!("{e}"),
        }
    }
    assert!(built > 500);
}

#[test]
fn drop_count_bound() {
    let mut rng = Lcg(15);
    for _ in 0..1000 {
        let n = 1 + rng.below(3) as usize;
        let k = 1 + rng.below(2) as usize;
        let (nu, pi) = random_prop(&mut rng, n, 3);
        let theta = theta_of(&nu, &pi);
        let t = (2 * theta + 1) as usize + rng.below(6) as usize;
        let net = prop_net(n, n * k, t, 0, nu.clone(), pi.clone(), rng.below(2) == 0);
        let plan = compute_drop_plan(&net).unwrap();
        let spread = (0..n)
            .map(|j| (pi[j] - pi[(j + 1) % n]).max(0))
            .max()
            .unwrap();
        let tau: Vec<i64> = (0..n).map(|j| nu[j] + pi[j]).collect();
        let tau_spread = (0..n).map(|j| (tau[j] - tau[(j + 1) % n]).max(0)).max().unwrap();
        for (s, &clean) in plan.clean_per_slot(t, n * k).iter().enumerate() {
            let dropped = (t - clean) as i64;
            assert!(dropped <= 2 * theta, "slot {s}: {dropped} > 2 theta, nu {nu:?} pi {pi:?} T {t}");
            if nu.iter().all(|&v| v == 0) {
                assert!(dropped <= 2 * spread, "slot {s}: {dropped}, pi {pi:?} T {t}");
            }
            assert!(dropped <= 2 * tau_spread.max(spread), "slot {s}: {dropped}, nu {nu:?} pi {pi:?}");
        }
    }
}

#[test]
fn clean_count_grows_with_guard() {
    let mut rng = Lcg(16);
    let mut profiles = 0;
    while profiles < 50 {
        let n = 1 + rng.below(3) as usize;
        let (nu, pi) = random_prop(&mut rng, n, 3);
        let theta = theta_of(&nu, &pi);
        if theta == 0 {
            continue;
        }
        profiles += 1;
        let t = 1 + rng.below(8) as usize;
        for x in 0..=theta as usize {
            let net = prop_net(n, 2 * n, t, x, nu.clone(), pi.clone(), false);
            let floor = (t as i64 - 2 * theta + 2 * x as i64).min(t as i64);
            match compute_drop_plan(&net) {
                Ok(plan) => {
                    for clean in plan.clean_per_slot(t, 2 * n) {
                        assert!(clean as i64 >= floor, "x {x}: {clean} < {floor}, nu {nu:?} pi {pi:?} T {t}");
                        if x as i64 == theta {
                            assert_eq!(clean, t);
                        }
                    }
                }
                Err(DropError::EmptyPlan(_)) => assert!(floor <= 0),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn guard_depends_on_total_delay_only_for_isolated_relays() {
    let mut rng = Lcg(17);
    for _ in 0..300 {
        let n = 1 + rng.below(3) as usize;
        let t = 1 + rng.below(6) as usize;
        let (nu_a, pi_a) = random_prop(&mut rng, n, 3);
        let tau: Vec<i64> = nu_a.iter().zip(&pi_a).map(|(a, b)| a + b).collect();
        let nu_b: Vec<i64> = tau.iter().map(|&d| rng.below(d as u64 + 1) as i64).collect();
        let pi_b: Vec<i64> = tau.iter().zip(&nu_b).map(|(d, v)| d - v).collect();
        let theta = *tau.iter().max().unwrap() as usize;
        let build = |nu: &[i64], pi: &[i64], iso: bool| {
            build_guard(&prop_net(n, 2 * n, t, theta, nu.to_vec(), pi.to_vec(), iso)).unwrap()
        };
        let a = build(&nu_a, &pi_a, true);
        let b = build(&nu_b, &pi_b, true);
        assert_eq!(a.render(), b.render());
        let a = build(&nu_a, &pi_a, false);
        let b = build(&nu_b, &pi_b, false);
        assert_eq!(diag_strings(&a), diag_strings(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symbolic_entries_are_canonical(n in 1usize..=3, k in 1usize..=2, t in 1usize..=6, seed in any::<u64>()) {
        let mut rng = Lcg(seed);
        let (nu, pi) = random_prop(&mut rng, n, 2);
        let net = prop_net(n, n * k, t, 0, nu, pi, false);
        let h = build_prop_naive(&net).unwrap();
        for (_, _, e) in h.nonzeros() {
            prop_assert!(!e.is_zero());
            prop_assert!(!e.has_duplicates());
            prop_assert!(e.terms().windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert_eq!(h.cols(), h.meta().input_labels.len());
        prop_assert_eq!(h.rows(), h.meta().output_labels.len());
    }

    #[test]
    fn identity_plan_round_trips(n in 1usize..=3, k in 1usize..=2, t in 1usize..=5) {
        let net = Network::new(
            NetworkConfig::new(n, n * k, t, AsyncModel::Synchronous),
            DelayProfile::zero(n),
        ).unwrap();
        let h = build_sync(&net).unwrap();
        prop_assert_eq!(apply_drop(&h, &DropPlan::identity(h.rows())).unwrap(), h);
    }

    #[test]
    fn shift_truncate_matches_definition(v in prop::collection::vec(0i32..100, 0..8), delta in -10i64..10, window in 1usize..10) {
        let out = shift_truncate(&v, delta, window);
        prop_assert_eq!(out.len(), window);
        for (j, &o) in out.iter().enumerate() {
            let src = j as i64 - delta;
            let want = if src >= 0 && (src as usize) < v.len() { v[src as usize] } else { 0 };
            prop_assert_eq!(o, want);
        }
    }
}
