mod support;

use asaf_core::matrix::*;
use asaf_core::{AsyncModel, DelayProfile, Network, NetworkConfig};

const SYNC_3X3X3: &str = "\
g1*h1 0 0 0 0 0 0 0 0
0 g1*h1 0 0 0 0 0 0 0
0 0 g1*h1 0 0 0 0 0 0
g1*h2*c12 0 0 g2*h2 0 0 0 0 0
0 g1*h2*c12 0 0 g2*h2 0 0 0 0
0 0 g1*h2*c12 0 0 g2*h2 0 0 0
g1*h3*c12*c23 0 0 g2*h3*c23 0 0 g3*h3 0 0
0 g1*h3*c12*c23 0 0 g2*h3*c23 0 0 g3*h3 0
0 0 g1*h3*c12*c23 0 0 g2*h3*c23 0 0 g3*h3
";

const NAIVE_PI_210: &str = "\
g1*h1 0 0 0 0 0 0 0 0
0 g1*h1 0 0 0 0 0 0 0
g1*h2*c12 0 g1*h1 g2*h2 0 0 0 0 0
0 g1*h2*c12 0 0 g2*h2 0 0 0 0
g1*h3*c12*c23 0 g1*h2*c12 g2*h3*c23 0 g2*h2 g3*h3 0 0
0 g1*h3*c12*c23 0 0 g2*h3*c23 0 0 g3*h3 0
0 0 g1*h3*c12*c23 0 0 g2*h3*c23 0 0 g3*h3
";

const DROPPED_PI_210: &str = "\
g1*h1 0 0 0
0 g1*h1 0 0
0 g1*h2*c12 g2*h2 0
0 g1*h3*c12*c23 g2*h3*c23 g3*h3
";

fn sync_net() -> Network {
    Network::new(NetworkConfig::new(3, 3, 3, AsyncModel::Synchronous), DelayProfile::zero(3)).unwrap()
}

fn naive_net() -> Network {
    support::prop_net(3, 3, 3, 0, vec![0, 0, 0], vec![2, 1, 0], false)
}

#[test]
fn synchronous_example_matrix() {
    assert_eq!(build_sync(&sync_net()).unwrap().render(), SYNC_3X3X3);
}

#[test]
fn delayed_example_matrix() {
    let h = build_prop_naive(&naive_net()).unwrap();
    assert_eq!(h.render(), NAIVE_PI_210);
    assert_eq!((h.rows(), h.cols()), (7, 9));
    assert_eq!(h.meta().output_labels, (5..12).collect::<Vec<i64>>());
}

#[test]
fn delayed_example_drop_plan() {
    let net = naive_net();
    let plan = compute_drop_plan(&net).unwrap();
    assert_eq!(plan.keep_outputs, vec![0, 1, 3, 5]);
    assert_eq!(plan.keep_inputs, vec![0, 1, 4, 7]);
    let dropped = apply_drop(&build_prop_naive(&net).unwrap(), &plan).unwrap();
    assert_eq!(dropped.render(), DROPPED_PI_210);
    assert!(dropped.is_lower_triangular());
}

#[test]
fn zero_delay_naive_equals_sync() {
    let naive = support::prop_net(3, 3, 3, 0, vec![0; 3], vec![0; 3], false);
    assert_eq!(
        build_prop_naive(&naive).unwrap().render(),
        build_sync(&sync_net()).unwrap().render()
    );
    let guard = support::prop_net(3, 3, 3, 0, vec![0; 3], vec![0; 3], false);
    assert_eq!(
        build_guard(&guard).unwrap().render(),
        build_sync(&sync_net()).unwrap().render()
    );
}

#[test]
fn offset_example_diagonal() {
    let h = build_offset(&support::offset_net(3, 3, vec![1, 0, 1], false)).unwrap();
    let diag: Vec<String> = (0..9).map(|k| h.entry_string(k, k)).collect();
    assert_eq!(
        diag,
        ["0", "g1*h1", "g1*h1", "g1*h1+g2*h2", "g2*h2", "g2*h2", "0", "g3*h3", "g3*h3"]
    );
    assert!(h.is_lower_triangular());
}

#[test]
fn offset_zero_offsets_is_clean() {
    let h = build_offset(&support::offset_net(6, 3, vec![0, 0, 0], false)).unwrap();
    let diag: Vec<String> = (0..18).map(|k| h.entry_string(k, k)).collect();
    let want: Vec<String> = (0..18).map(|k| format!("g{i}*h{i}", i = (k / 3) % 3 + 1)).collect();
    assert_eq!(diag, want);
}

#[test]
fn guard_diagonal_for_small_profiles() {
    let mut rng = support::Lcg(7);
    for _ in 0..200 {
        let nu: Vec<i64> = (0..3).map(|_| rng.below(2) as i64).collect();
        let pi: Vec<i64> = nu.iter().map(|&v| rng.below(3 - v as u64) as i64).collect();
        let theta = nu.iter().zip(&pi).map(|(a, b)| a + b).max().unwrap() as usize;
        let h = build_guard(&support::prop_net(3, 3, 3, theta, nu, pi, false)).unwrap();
        assert_eq!((h.rows(), h.cols()), (9, 9));
        assert!(h.is_lower_triangular());
        let diag: Vec<String> = (0..9).map(|k| h.entry_string(k, k)).collect();
        let want: Vec<String> = (0..9).map(|k| format!("g{i}*h{i}", i = k / 3 + 1)).collect();
        assert_eq!(diag, want);
    }
}

#[test]
fn guard_listed_instance() {
    let h = build_guard(&support::prop_net(2, 4, 5, 2, vec![1, 0], vec![0, 2], false)).unwrap();
    assert_eq!((h.rows(), h.cols()), (20, 20));
    assert!(h.is_lower_triangular());
}

#[test]
fn sync_subdiagonal_band() {
    let h = build_sync(&sync_net()).unwrap();
    assert_eq!(first_subdiagonal(&h), Some(3));
    let band = extract_subdiag(&h);
    let strings: Vec<String> = band.nonzeros().map(|(_, _, e)| e.to_string()).collect();
    assert_eq!(strings.iter().filter(|s| *s == "g1*h2*c12").count(), 3);
    assert_eq!(strings.iter().filter(|s| *s == "g2*h3*c23").count(), 3);
    assert_eq!(strings.len(), 6);
    let d = extract_diag(&h);
    assert_eq!(d.nnz(), 9);
    assert_eq!(extract_diag(&d), d);
    assert_eq!(extract_subdiag(&d).nnz(), 0);
}

#[test]
fn evaluation_matches_hand_expansion() {
    use asaf_core::sample_fades;
    let net = sync_net();
    let h = build_sync(&net).unwrap();
    let f = sample_fades(net.cfg(), 3, 11);
    let v = evaluate(&h, &f).unwrap();
    let c = &f.gamma_inter;
    let cases = [
        ((0, 0), f.g[0] * f.h[0]),
        ((4, 4), f.g[1] * f.h[1]),
        ((3, 0), f.g[0] * f.h[1] * c[(0, 1)]),
        ((7, 4), f.g[1] * f.h[2] * c[(1, 2)]),
        ((8, 2), f.g[0] * f.h[2] * c[(0, 1)] * c[(1, 2)]),
    ];
    for ((r, col), want) in cases {
        assert!((v[(r, col)] - want).norm() < 1e-14, "({r},{col})");
    }
    assert_eq!(v[(0, 1)].norm(), 0.0);
}
