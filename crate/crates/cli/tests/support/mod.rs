#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn asaf<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_asaf")).args(args).output().expect("spawn asaf")
}

pub fn asaf_env<I, S>(args: I, workers: usize) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_asaf"))
        .args(args)
        .env("ASAF_WORKERS", workers.to_string())
        .output()
        .expect("spawn asaf")
}

pub fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "asaf failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

/// `Pr{|h|^2 |g|^2 < t}` for independent unit exponentials, by trapezoidal
/// quadrature of `1 - E_u[exp(-t/u)]` on a log grid.
pub fn product_cdf(t: f64) -> f64 {
    let (lo, hi, steps) = (-40.0f64, 6.0f64, 200_000);
    let du = (hi - lo) / steps as f64;
    let f = |u: f64| {
        let x = u.exp();
        (-x - t / x).exp() * x
    };
    let mut acc = 0.5 * (f(lo) + f(hi));
    for k in 1..steps {
        acc += f(lo + k as f64 * du);
    }
    1.0 - acc * du
}

/// |estimate - want| within three binomial standard errors of the oracle.
pub fn within_three_sigma(p_out: f64, trials: u64, want: f64) -> bool {
    let se = (want * (1.0 - want) / trials as f64).sqrt();
    (p_out - want).abs() <= 3.0 * se
}

/// Small deterministic generator for random instances.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}
