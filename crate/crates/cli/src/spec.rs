use std::path::{Path, PathBuf};

use asaf_core::{AsyncModel, DelayProfile, Network, NetworkConfig, Protocol};
use serde::{Deserialize, Serialize};

use crate::args::NetArgs;
use crate::error::CliError;

/// Everything an outage sweep needs, as read from `--spec` or assembled from flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub cfg: NetworkConfig,
    pub dp: DelayProfile,
    pub protocol: Protocol,
    pub r_values: Vec<f64>,
    pub rho_db_values: Vec<f64>,
    pub trials_per_point: u64,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// `r_values` are fixed rates in bits rather than multiplexing gains.
    #[serde(default)]
    pub rate_bits: bool,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.r_values.is_empty() || self.rho_db_values.is_empty() {
            return Err(CliError::usage("sweep lists must not be empty"));
        }
        if self.trials_per_point == 0 {
            return Err(CliError::usage("trials_per_point must be at least 1"));
        }
        Ok(())
    }
}

/// Parses `a:b:step` (inclusive) or a comma-separated list of reals.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |what: &str| CliError::usage(format!("bad sweep `{s}`: {what}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(bad("need a <= b and step > 0"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| round9(a + k as f64 * step)).collect())
        }
        [_] => s.split(',').map(num).collect(),
        _ => Err(bad("expected a:b:step or a list")),
    }
}

/// Parses a `lo:hi` window.
pub fn parse_window(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::usage(format!("bad window `{s}`, expected lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn round9(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

/// Resolved network, protocol and the `theta` the bounds should use.
pub struct Resolved {
    pub protocol: Protocol,
    pub network: Network,
    pub theta: i64,
}

fn required(v: Option<usize>, flag: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::usage(format!("missing --{flag}")))
}

/// Builds the validated network described by the flags.
///
/// `free_theta` lets `--theta` stand in for a delay profile (closed-form bounds
/// only depend on theta); otherwise `--theta` is only a consistency check.
pub fn resolve_network(a: &NetArgs, free_theta: bool) -> Result<Resolved, CliError> {
    let protocol = a.protocol.ok_or_else(|| CliError::usage("missing --protocol"))?;
    let n = required(a.relays, "relays")?;
    let m = required(a.slots, "slots")?;
    let t = required(a.slot_len, "slot-len")?;
    let model = if protocol == Protocol::Direct {
        AsyncModel::Synchronous
    } else {
        protocol.model()
    };
    let direct = a.direct_link || protocol.has_direct_link();
    let given_delays = a.nu.is_some() || a.pi.is_some() || a.tau.is_some() || a.tau0.is_some();

    let dp = match model {
        AsyncModel::SlotOffset => {
            if a.nu.is_some() || a.pi.is_some() || a.tau0.is_some() {
                return Err(CliError::usage("--nu/--pi/--tau0 need a propagation-delay protocol"));
            }
            DelayProfile::offset(a.tau.clone().unwrap_or_else(|| vec![0; n]))
        }
        _ => {
            if a.tau.is_some() {
                return Err(CliError::usage("--tau needs a slot-offset protocol"));
            }
            let nu = a.nu.clone().unwrap_or_else(|| vec![0; n]);
            let pi = a.pi.clone().unwrap_or_else(|| vec![0; n]);
            match a.tau0 {
                Some(t0) => DelayProfile::prop_with_direct(nu, pi, t0),
                None => DelayProfile::prop(nu, pi),
            }
        }
    };

    let theta = match a.theta {
        Some(th) if !given_delays && (free_theta || th == 0) => th,
        Some(th) if !given_delays => {
            return Err(CliError::usage(format!("--theta {th} given without a delay profile")));
        }
        Some(th) if th != dp.theta() => {
            return Err(CliError::usage(format!(
                "--theta {th} does not match the profile (theta = {})",
                dp.theta()
            )));
        }
        _ => dp.theta(),
    };
    if theta < 0 {
        return Err(CliError::usage("--theta must be non-negative"));
    }

    let guard = match a.guard {
        Some(x) => x,
        None if matches!(protocol, Protocol::Guard | Protocol::GuardDl) => theta as usize,
        None => 0,
    };
    let mut cfg = NetworkConfig::new(n, m, t, model).with_guard(guard).isolated(a.isolated);
    if direct {
        cfg = cfg.with_direct_link();
    }
    let network = Network::new(cfg, dp)?;
    Ok(Resolved {
        protocol,
        network,
        theta,
    })
}

fn spec_net_args(spec: &ExperimentSpec) -> NetArgs {
    let cfg = &spec.cfg;
    let mut a = NetArgs {
        relays: Some(cfg.n_relays),
        slots: Some(cfg.n_slots),
        slot_len: Some(cfg.slot_len),
        guard: Some(cfg.guard_len),
        direct_link: cfg.direct_link,
        isolated: cfg.relay_isolated,
        protocol: Some(spec.protocol),
        ..NetArgs::default()
    };
    match &spec.dp {
        DelayProfile::Prop { nu, pi, tau0 } => {
            a.nu = Some(nu.clone());
            a.pi = Some(pi.clone());
            a.tau0 = *tau0;
        }
        DelayProfile::Offset { tau } => a.tau = Some(tau.clone()),
    }
    a
}

/// Loads `--spec` (when given) and lays the explicit flags over it.
///
/// Any delay flag replaces the whole delay profile of the spec.
pub fn merge_spec(flags: &NetArgs) -> Result<(NetArgs, Option<ExperimentSpec>), CliError> {
    let Some(path) = &flags.spec else {
        return Ok((flags.clone(), None));
    };
    let spec = ExperimentSpec::load(path)?;
    let mut a = spec_net_args(&spec);
    if flags.nu.is_some() || flags.pi.is_some() || flags.tau.is_some() || flags.tau0.is_some() {
        a.nu = flags.nu.clone();
        a.pi = flags.pi.clone();
        a.tau = flags.tau.clone();
        a.tau0 = flags.tau0;
    }
    a.relays = flags.relays.or(a.relays);
    a.slots = flags.slots.or(a.slots);
    a.slot_len = flags.slot_len.or(a.slot_len);
    a.guard = flags.guard.or(a.guard);
    a.protocol = flags.protocol.or(a.protocol);
    a.theta = flags.theta;
    a.direct_link |= flags.direct_link;
    a.isolated |= flags.isolated;
    Ok((a, Some(spec)))
}
