use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mi::mutual_info_sweep;
use super::InfoError;
use crate::fading::sample_fades;
use crate::matrix::{build, CompiledMatrix, SymbolicMatrix};
use crate::model::{Network, NetworkConfig, Protocol};

/// Per-channel-use target rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateTarget {
    /// Multiplexing gain `r`: the rate scales as `r * log2(1 + rho)`.
    Multiplexing(f64),
    /// Fixed rate in bits per channel use.
    Bits(f64),
}

impl RateTarget {
    pub fn value(self) -> f64 {
        match self {
            RateTarget::Multiplexing(v) | RateTarget::Bits(v) => v,
        }
    }

    /// Rate in bits per channel use at linear SNR `rho`.
    pub fn per_use_bits(self, rho: f64) -> f64 {
        match self {
            RateTarget::Multiplexing(r) => r * (1.0 + rho).log2(),
            RateTarget::Bits(b) => b,
        }
    }
}

/// Frame length in channel uses over which the frame mutual information is
/// compared with the per-use rate.
pub fn r_prime_factor(protocol: Protocol, cfg: &NetworkConfig, theta: i64) -> usize {
    let (m, t, x, th) = (cfg.n_slots, cfg.slot_len, cfg.guard_len, theta.max(0) as usize);
    match protocol {
        Protocol::Sync => (m + 1) * t,
        Protocol::PropNaive => (m + 1) * t + th + m * x,
        Protocol::Guard => m * (t + th) + t,
        Protocol::GuardDl => (m + 1) * (t + th),
        Protocol::Offset | Protocol::OffsetDl => (m + 1) * t + th,
        Protocol::Direct => t,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePolicy {
    pub protocol: Protocol,
    pub target: RateTarget,
    pub r_prime_factor: usize,
}

impl RatePolicy {
    pub fn new(protocol: Protocol, net: &Network, target: RateTarget) -> Result<Self, InfoError> {
        if !(target.value() >= 0.0) {
            return Err(InfoError::NegativeRate(target.value()));
        }
        Ok(RatePolicy {
            protocol,
            target,
            r_prime_factor: r_prime_factor(protocol, net.cfg(), net.theta()),
        })
    }

    pub fn multiplexing(protocol: Protocol, net: &Network, r: f64) -> Result<Self, InfoError> {
        Self::new(protocol, net, RateTarget::Multiplexing(r))
    }

    pub fn r(&self) -> f64 {
        self.target.value()
    }

    /// Frame-total multiplexing gain (or frame-total bits for a fixed rate).
    pub fn r_prime(&self) -> f64 {
        self.r_prime_factor as f64 * self.target.value()
    }

    /// Frame mutual information below which the frame is in outage.
    pub fn threshold_bits(&self, rho: f64) -> f64 {
        self.r_prime_factor as f64 * self.target.per_use_bits(rho)
    }
}

/// Monte Carlo outage estimate at one SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutagePoint {
    pub rho_db: f64,
    pub trials: u64,
    pub outages: u64,
    pub p_out: f64,
    pub std_err: f64,
}

impl OutagePoint {
    pub fn from_counts(rho_db: f64, trials: u64, outages: u64) -> Self {
        let p = outages as f64 / trials as f64;
        OutagePoint {
            rho_db,
            trials,
            outages,
            p_out: p,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageCurve {
    pub policy: RatePolicy,
    pub points: Vec<OutagePoint>,
    pub network: Network,
    pub seed: u64,
}

const BATCH: u64 = 1024;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Outage estimator for a fixed (possibly transformed) symbolic matrix.
///
/// Trial `k` always uses the fade stream `(seed, k)`, and counts are summed as
/// integers, so results do not depend on the thread count.
pub struct OutageEstimator<'a> {
    network: &'a Network,
    policy: RatePolicy,
    compiled: CompiledMatrix,
}

impl<'a> OutageEstimator<'a> {
    pub fn new(network: &'a Network, matrix: &SymbolicMatrix, policy: RatePolicy) -> Self {
        OutageEstimator {
            network,
            policy,
            compiled: CompiledMatrix::new(matrix),
        }
    }

    /// Outage counts at every SNR in `rho_dbs`, sharing one fade draw per trial
    /// across the SNR grid.
    pub fn counts(&self, rho_dbs: &[f64], trials: u64, seed: u64) -> Result<Vec<u64>, InfoError> {
        if trials == 0 {
            return Err(InfoError::NoTrials);
        }
        let rhos: Vec<f64> = rho_dbs.iter().map(|&d| db_to_linear(d)).collect();
        let thresholds: Vec<f64> = rhos.iter().map(|&r| self.policy.threshold_bits(r)).collect();
        let cfg = self.network.cfg();
        let zero = || vec![0u64; rhos.len()];
        let batches = trials.div_ceil(BATCH);
        (0..batches)
            .into_par_iter()
            .try_fold(zero, |mut acc, b| {
                for k in b * BATCH..((b + 1) * BATCH).min(trials) {
                    let fades = sample_fades(cfg, seed, k);
                    let h = self.compiled.evaluate(&fades)?;
                    let mi = mutual_info_sweep(&h, &rhos)?;
                    for (slot, (bits, &thr)) in acc.iter_mut().zip(mi.iter().zip(&thresholds)) {
                        if *bits < thr {
                            *slot += 1;
                        }
                    }
                }
                Ok::<_, InfoError>(acc)
            })
            .try_reduce(zero, |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            })
    }

    pub fn point(&self, rho_db: f64, trials: u64, seed: u64) -> Result<OutagePoint, InfoError> {
        let outages = self.counts(&[rho_db], trials, seed)?[0];
        Ok(OutagePoint::from_counts(rho_db, trials, outages))
    }

    pub fn curve(&self, rho_dbs: &[f64], trials: u64, seed: u64) -> Result<OutageCurve, InfoError> {
        let mut sorted = rho_dbs.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        let counts = self.counts(&sorted, trials, seed)?;
        Ok(OutageCurve {
            policy: self.policy,
            points: sorted
                .iter()
                .zip(counts)
                .map(|(&db, k)| OutagePoint::from_counts(db, trials, k))
                .collect(),
            network: self.network.clone(),
            seed,
        })
    }
}

/// Outage probability of `policy.protocol` on `net` at `rho_db`.
pub fn outage_prob(
    net: &Network,
    policy: RatePolicy,
    rho_db: f64,
    trials: u64,
    seed: u64,
) -> Result<OutagePoint, InfoError> {
    let h = build(policy.protocol, net)?;
    OutageEstimator::new(net, &h, policy).point(rho_db, trials, seed)
}

/// Outage curve over an SNR grid for the full channel matrix.
pub fn outage_curve(
    net: &Network,
    policy: RatePolicy,
    rho_dbs: &[f64],
    trials: u64,
    seed: u64,
) -> Result<OutageCurve, InfoError> {
    let h = build(policy.protocol, net)?;
    OutageEstimator::new(net, &h, policy).curve(rho_dbs, trials, seed)
}
