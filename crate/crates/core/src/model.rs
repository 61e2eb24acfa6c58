//! Network configuration, delay profiles and protocol tags.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which timing model the network operates under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsyncModel {
    Synchronous,
    PropagationDelay,
    SlotOffset,
}

/// Static description of the relay network and the slot structure.
///
/// `n_slots` counts the `M` relaying slots of a frame; the frame also has one
/// initialization slot, so `M + 1` slots in total.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub n_relays: usize,
    pub n_slots: usize,
    pub slot_len: usize,
    #[serde(default)]
    pub guard_len: usize,
    #[serde(default)]
    pub direct_link: bool,
    #[serde(default)]
    pub relay_isolated: bool,
    pub model: AsyncModel,
}

impl NetworkConfig {
    pub fn new(n_relays: usize, n_slots: usize, slot_len: usize, model: AsyncModel) -> Self {
        NetworkConfig {
            n_relays,
            n_slots,
            slot_len,
            guard_len: 0,
            direct_link: false,
            relay_isolated: false,
            model,
        }
    }

    pub fn with_guard(mut self, guard_len: usize) -> Self {
        self.guard_len = guard_len;
        self
    }

    /// Enables the source-destination link. Relays are marked isolated as well,
    /// since the direct-link protocols are only defined under isolation.
    pub fn with_direct_link(mut self) -> Self {
        self.direct_link = true;
        self.relay_isolated = true;
        self
    }

    pub fn isolated(mut self, isolated: bool) -> Self {
        self.relay_isolated = isolated;
        self
    }

    /// Number of relaying cycles `K = M / N`.
    pub fn cycles(&self) -> usize {
        if self.n_relays == 0 {
            0
        } else {
            self.n_slots / self.n_relays
        }
    }

    /// 1-based index of the relay that listens in slot `packet` and forwards in
    /// slot `packet + 1`.
    pub fn relay_for_packet(&self, packet: usize) -> usize {
        packet % self.n_relays + 1
    }
}

/// Per-path delays, in whole channel uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DelayProfile {
    /// Source-to-relay delays `nu`, relay-to-destination delays `pi` and the
    /// optional direct-link delay `tau0`.
    Prop {
        nu: Vec<i64>,
        pi: Vec<i64>,
        #[serde(default)]
        tau0: Option<i64>,
    },
    /// Per-relay listening-epoch offsets.
    Offset { tau: Vec<i64> },
}

impl DelayProfile {
    /// All-zero propagation profile for `n` relays.
    pub fn zero(n: usize) -> Self {
        DelayProfile::Prop {
            nu: vec![0; n],
            pi: vec![0; n],
            tau0: None,
        }
    }

    pub fn prop(nu: Vec<i64>, pi: Vec<i64>) -> Self {
        DelayProfile::Prop { nu, pi, tau0: None }
    }

    pub fn prop_with_direct(nu: Vec<i64>, pi: Vec<i64>, tau0: i64) -> Self {
        DelayProfile::Prop {
            nu,
            pi,
            tau0: Some(tau0),
        }
    }

    pub fn offset(tau: Vec<i64>) -> Self {
        DelayProfile::Offset { tau }
    }

    /// End-to-end delay of every relay path (`nu_i + pi_i`, or the offset).
    pub fn path_delays(&self) -> Vec<i64> {
        match self {
            DelayProfile::Prop { nu, pi, .. } => nu.iter().zip(pi).map(|(a, b)| a + b).collect(),
            DelayProfile::Offset { tau } => tau.clone(),
        }
    }

    /// Maximum end-to-end delay, including the direct link when present.
    pub fn theta(&self) -> i64 {
        let relay_max = self.path_delays().into_iter().max().unwrap_or(0);
        match self {
            DelayProfile::Prop { tau0: Some(t0), .. } => relay_max.max(*t0),
            _ => relay_max,
        }
    }

    pub fn tau0(&self) -> i64 {
        match self {
            DelayProfile::Prop { tau0, .. } => tau0.unwrap_or(0),
            DelayProfile::Offset { .. } => 0,
        }
    }

    /// Source-to-relay delay of relay `i` (1-based); zero under the offset model.
    pub fn nu(&self, i: usize) -> i64 {
        match self {
            DelayProfile::Prop { nu, .. } => nu[i - 1],
            DelayProfile::Offset { .. } => 0,
        }
    }

    /// Relay-to-destination delay of relay `i` (1-based); zero under the offset model.
    pub fn pi(&self, i: usize) -> i64 {
        match self {
            DelayProfile::Prop { pi, .. } => pi[i - 1],
            DelayProfile::Offset { .. } => 0,
        }
    }

    /// Listening offset of relay `i` (1-based); zero under the propagation model.
    pub fn offset_of(&self, i: usize) -> i64 {
        match self {
            DelayProfile::Offset { tau } => tau[i - 1],
            DelayProfile::Prop { .. } => 0,
        }
    }

    fn is_all_zero(&self) -> bool {
        match self {
            DelayProfile::Prop { nu, pi, tau0 } => {
                nu.iter().chain(pi).all(|&d| d == 0) && tau0.unwrap_or(0) == 0
            }
            DelayProfile::Offset { tau } => tau.iter().all(|&d| d == 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("model mismatch: {0}")]
    MismatchedModel(String),
    #[error("{slots} slots is not a positive multiple of {relays} relays")]
    NonMultipleSlots { slots: usize, relays: usize },
    #[error("a direct link requires isolated relays")]
    IsolationRequired,
    #[error("negative delay {value} in {field}[{index}]")]
    NegativeDelay {
        field: &'static str,
        index: usize,
        value: i64,
    },
    #[error("{field} has {got} entries, expected {expected}")]
    ProfileLength {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{0} must be positive")]
    ZeroDimension(&'static str),
}

impl ConfigError {
    /// Short machine-readable code used on the command line.
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::MismatchedModel(_) => "mismatched-model",
            ConfigError::NonMultipleSlots { .. } => "non-multiple-slots",
            ConfigError::IsolationRequired => "isolation-required",
            ConfigError::NegativeDelay { .. } => "negative-delay",
            ConfigError::ProfileLength { .. } => "profile-length",
            ConfigError::ZeroDimension(_) => "zero-dimension",
        }
    }
}

fn check_list(field: &'static str, values: &[i64], expected: usize) -> Result<(), ConfigError> {
    if values.len() != expected {
        return Err(ConfigError::ProfileLength {
            field,
            expected,
            got: values.len(),
        });
    }
    match values.iter().position(|&v| v < 0) {
        Some(index) => Err(ConfigError::NegativeDelay {
            field,
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// Checks the configuration invariants and the profile/model pairing.
///
/// `n_relays == 0` is accepted only as the degenerate point-to-point link
/// (direct link present, empty delay lists).
pub fn validate_config(
    cfg: NetworkConfig,
    dp: DelayProfile,
) -> Result<(NetworkConfig, DelayProfile), ConfigError> {
    if cfg.slot_len == 0 {
        return Err(ConfigError::ZeroDimension("slot_len"));
    }
    if cfg.n_slots == 0 {
        return Err(ConfigError::ZeroDimension("n_slots"));
    }
    if cfg.n_relays == 0 && !cfg.direct_link {
        return Err(ConfigError::ZeroDimension("n_relays"));
    }
    if cfg.n_relays > 0 && cfg.n_slots % cfg.n_relays != 0 {
        return Err(ConfigError::NonMultipleSlots {
            slots: cfg.n_slots,
            relays: cfg.n_relays,
        });
    }
    if cfg.direct_link && !cfg.relay_isolated {
        return Err(ConfigError::IsolationRequired);
    }

    let n = cfg.n_relays;
    match &dp {
        DelayProfile::Prop { nu, pi, tau0 } => {
            check_list("nu", nu, n)?;
            check_list("pi", pi, n)?;
            if let Some(t0) = tau0 {
                if !cfg.direct_link {
                    return Err(ConfigError::MismatchedModel(
                        "tau0 given without a direct link".into(),
                    ));
                }
                check_list("tau0", &[*t0], 1)?;
            }
        }
        DelayProfile::Offset { tau } => check_list("tau", tau, n)?,
    }

    match (cfg.model, &dp) {
        (AsyncModel::Synchronous, _) if !dp.is_all_zero() => Err(ConfigError::MismatchedModel(
            "synchronous model with nonzero delays".into(),
        )),
        (AsyncModel::Synchronous, _) => Ok((cfg, dp)),
        (AsyncModel::PropagationDelay, DelayProfile::Prop { .. }) => Ok((cfg, dp)),
        (AsyncModel::SlotOffset, DelayProfile::Offset { .. }) => Ok((cfg, dp)),
        (model, _) => Err(ConfigError::MismatchedModel(format!(
            "{model:?} model paired with the wrong delay profile variant"
        ))),
    }
}

/// A validated `(NetworkConfig, DelayProfile)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Network {
    cfg: NetworkConfig,
    dp: DelayProfile,
}

impl Network {
    pub fn new(cfg: NetworkConfig, dp: DelayProfile) -> Result<Self, ConfigError> {
        let (cfg, dp) = validate_config(cfg, dp)?;
        Ok(Network { cfg, dp })
    }

    pub fn cfg(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn dp(&self) -> &DelayProfile {
        &self.dp
    }

    pub fn theta(&self) -> i64 {
        self.dp.theta()
    }

    pub fn into_parts(self) -> (NetworkConfig, DelayProfile) {
        (self.cfg, self.dp)
    }
}

/// The protocol variant whose channel matrix is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// Synchronous naive SAF.
    Sync,
    /// Naive SAF under propagation delays (collisions at the destination).
    PropNaive,
    /// SAF with a guard time of `theta`, no direct link.
    Guard,
    /// SAF with a guard time of `theta` and a direct link.
    GuardDl,
    /// Naive SAF under slot offsets, no direct link.
    Offset,
    /// Slot-offset SAF with a direct link.
    OffsetDl,
    /// Degenerate point-to-point Rayleigh link `H = g0 I`.
    Direct,
}

impl Protocol {
    pub const ALL: [Protocol; 7] = [
        Protocol::Sync,
        Protocol::PropNaive,
        Protocol::Guard,
        Protocol::GuardDl,
        Protocol::Offset,
        Protocol::OffsetDl,
        Protocol::Direct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Sync => "sync",
            Protocol::PropNaive => "prop-naive",
            Protocol::Guard => "guard",
            Protocol::GuardDl => "guard-dl",
            Protocol::Offset => "offset",
            Protocol::OffsetDl => "offset-dl",
            Protocol::Direct => "direct",
        }
    }

    pub fn has_direct_link(self) -> bool {
        matches!(self, Protocol::GuardDl | Protocol::OffsetDl | Protocol::Direct)
    }

    /// Timing model the protocol runs under.
    pub fn model(self) -> AsyncModel {
        match self {
            Protocol::Sync | Protocol::Direct => AsyncModel::Synchronous,
            Protocol::PropNaive | Protocol::Guard | Protocol::GuardDl => AsyncModel::PropagationDelay,
            Protocol::Offset | Protocol::OffsetDl => AsyncModel::SlotOffset,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Protocol::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown protocol `{s}`"))
    }
}
