//! Protocol schedules and the matrix builders built on the trace engine.
//!
//! Timing conventions (all times in channel uses, slot period `P = T + x`):
//!
//! * the source emits block `s` at `s*P .. s*P + T`, then stays silent for the
//!   guard interval;
//! * under the propagation model the relay handling packet `p` listens at
//!   `p*P + nu` and replays the buffer at `(p + 1)*P + nu`, keeping its slot
//!   alignment; the destination hears it `pi` uses later;
//! * under the offset model a relay with offset `tau` listens at `p*T + tau` and
//!   transmits right after, at `(p + 1)*T + tau`, with no propagation delays.

use thiserror::Error;

use super::symbolic::{MatrixMeta, SymbolicMatrix};
use super::trace::{Contribution, PacketSlot, Schedule, Trace};
use crate::model::{AsyncModel, Network, Protocol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
}

fn mismatch(protocol: Protocol, why: &str) -> BuildError {
    BuildError::ModelMismatch(format!("{protocol}: {why}"))
}

fn require(cond: bool, protocol: Protocol, why: &str) -> Result<(), BuildError> {
    if cond {
        Ok(())
    } else {
        Err(mismatch(protocol, why))
    }
}

fn check(protocol: Protocol, net: &Network) -> Result<(), BuildError> {
    let cfg = net.cfg();
    let theta = net.theta();
    if protocol != Protocol::Direct {
        require(cfg.n_relays > 0, protocol, "needs at least one relay")?;
    }
    match protocol {
        Protocol::Sync => {
            require(cfg.model == AsyncModel::Synchronous, protocol, "needs the synchronous model")?;
            require(!cfg.direct_link, protocol, "defined without a direct link")
        }
        Protocol::PropNaive => {
            require(cfg.model == AsyncModel::PropagationDelay, protocol, "needs the propagation-delay model")?;
            require(!cfg.direct_link, protocol, "defined without a direct link")
        }
        Protocol::Guard | Protocol::GuardDl => {
            require(cfg.model == AsyncModel::PropagationDelay, protocol, "needs the propagation-delay model")?;
            require(
                cfg.direct_link == (protocol == Protocol::GuardDl),
                protocol,
                "direct-link flag does not match the protocol",
            )?;
            require(cfg.guard_len as i64 == theta, protocol, "guard length must equal theta")
        }
        Protocol::Offset | Protocol::OffsetDl => {
            require(cfg.model == AsyncModel::SlotOffset, protocol, "needs the slot-offset model")?;
            require(
                cfg.direct_link == (protocol == Protocol::OffsetDl),
                protocol,
                "direct-link flag does not match the protocol",
            )
        }
        Protocol::Direct => require(cfg.direct_link, protocol, "needs a direct link"),
    }
}

struct Plan {
    schedule: Schedule,
    n_inputs: usize,
    rows: Vec<i64>,
}

fn relay_delays(net: &Network) -> (Vec<i64>, Vec<i64>) {
    let n = net.cfg().n_relays;
    let dp = net.dp();
    ((1..=n).map(|i| dp.nu(i)).collect(), (1..=n).map(|i| dp.pi(i)).collect())
}

/// Slot-aligned propagation-delay schedule with period `T + guard`.
fn prop_schedule(net: &Network, guard: usize, source_slots: usize, direct: bool) -> Schedule {
    let cfg = net.cfg();
    let t_len = cfg.slot_len as i64;
    let period = t_len + guard as i64;
    let (nu, pi) = relay_delays(net);
    let emit_times = (0..source_slots as i64)
        .flat_map(|s| (0..t_len).map(move |j| s * period + j))
        .collect();
    let packets = (0..cfg.n_slots)
        .map(|p| {
            let relay = cfg.relay_for_packet(p);
            let nu_r = nu[relay - 1];
            PacketSlot {
                relay,
                listen_start: p as i64 * period + nu_r,
                tx_start: (p as i64 + 1) * period + nu_r,
            }
        })
        .collect();
    Schedule {
        slot_len: cfg.slot_len,
        emit_times,
        packets,
        nu,
        pi,
        direct_delay: direct.then(|| net.dp().tau0()),
        isolated: cfg.relay_isolated,
    }
}

fn offset_schedule(net: &Network, source_slots: usize, direct: bool) -> Schedule {
    let cfg = net.cfg();
    let n = cfg.n_relays;
    let t_len = cfg.slot_len as i64;
    let packets = (0..cfg.n_slots)
        .map(|p| {
            let relay = cfg.relay_for_packet(p);
            let tau = net.dp().offset_of(relay);
            PacketSlot {
                relay,
                listen_start: p as i64 * t_len + tau,
                tx_start: (p as i64 + 1) * t_len + tau,
            }
        })
        .collect();
    Schedule {
        slot_len: cfg.slot_len,
        emit_times: (0..(source_slots * cfg.slot_len) as i64).collect(),
        packets,
        nu: vec![0; n],
        pi: vec![0; n],
        direct_delay: direct.then_some(0),
        isolated: cfg.relay_isolated,
    }
}

fn plan(protocol: Protocol, net: &Network) -> Plan {
    let cfg = net.cfg();
    let (m, t_len) = (cfg.n_slots, cfg.slot_len as i64);
    let arrivals = |s: &Schedule| -> Vec<i64> {
        s.packets
            .iter()
            .map(|slot| slot.tx_start + s.pi[slot.relay - 1])
            .collect()
    };
    match protocol {
        Protocol::Sync | Protocol::PropNaive => {
            let guard = if protocol == Protocol::Sync { 0 } else { cfg.guard_len };
            let schedule = prop_schedule(net, guard, m, false);
            let starts = arrivals(&schedule);
            let first = *starts.iter().min().expect("at least one packet");
            let last = starts.iter().max().expect("at least one packet") + t_len;
            Plan {
                schedule,
                n_inputs: m * cfg.slot_len,
                rows: (first..last).collect(),
            }
        }
        Protocol::Guard => {
            let schedule = prop_schedule(net, cfg.guard_len, m, false);
            let rows = arrivals(&schedule)
                .into_iter()
                .flat_map(|a| a..a + t_len)
                .collect();
            Plan {
                schedule,
                n_inputs: m * cfg.slot_len,
                rows,
            }
        }
        Protocol::GuardDl => {
            let schedule = prop_schedule(net, cfg.guard_len, m + 1, true);
            let period = t_len + cfg.guard_len as i64;
            let tau0 = net.dp().tau0();
            let rows = (0..=m as i64)
                .flat_map(|s| (0..t_len).map(move |j| s * period + tau0 + j))
                .collect();
            Plan {
                schedule,
                n_inputs: (m + 1) * cfg.slot_len,
                rows,
            }
        }
        Protocol::Offset => Plan {
            schedule: offset_schedule(net, m, false),
            n_inputs: m * cfg.slot_len,
            rows: (t_len..t_len + (m as i64) * t_len).collect(),
        },
        Protocol::OffsetDl => Plan {
            schedule: offset_schedule(net, m + 1, true),
            n_inputs: (m + 1) * cfg.slot_len,
            rows: (0..(m as i64 + 1) * t_len).collect(),
        },
        Protocol::Direct => Plan {
            schedule: Schedule {
                slot_len: cfg.slot_len,
                emit_times: (0..t_len).collect(),
                packets: Vec::new(),
                nu: Vec::new(),
                pi: Vec::new(),
                direct_delay: Some(0),
                isolated: true,
            },
            n_inputs: cfg.slot_len,
            rows: (0..t_len).collect(),
        },
    }
}

/// Builds the matrix and keeps, per row, the relay samples that formed it.
pub(crate) fn build_traced(
    protocol: Protocol,
    net: &Network,
) -> Result<(SymbolicMatrix, Vec<Vec<Contribution>>), BuildError> {
    check(protocol, net)?;
    let plan = plan(protocol, net);
    let trace = Trace::run(&plan.schedule);
    let mut entries = Vec::new();
    let mut contributions = Vec::with_capacity(plan.rows.len());
    for (r, &t) in plan.rows.iter().enumerate() {
        let (signal, from) = trace.destination(t);
        entries.extend(signal.into_iter().map(|(c, e)| ((r, c), e)));
        contributions.push(from);
    }
    let meta = MatrixMeta {
        protocol,
        network: net.clone(),
        input_labels: (0..plan.n_inputs).collect(),
        output_labels: plan.rows,
    };
    Ok((SymbolicMatrix::new(entries, meta), contributions))
}

/// Builds the channel matrix of `protocol` on `net`.
pub fn build(protocol: Protocol, net: &Network) -> Result<SymbolicMatrix, BuildError> {
    build_traced(protocol, net).map(|(m, _)| m)
}

/// Synchronous SAF: `MT x MT`, lower triangular.
pub fn build_sync(net: &Network) -> Result<SymbolicMatrix, BuildError> {
    build(Protocol::Sync, net)
}

/// Naive SAF with propagation delays. Rows cover every destination sample from
/// the first to the last relay arrival, so colliding packets share rows.
pub fn build_prop_naive(net: &Network) -> Result<SymbolicMatrix, BuildError> {
    build(Protocol::PropNaive, net)
}

/// Guard-time SAF without direct link; requires `guard_len == theta`.
pub fn build_guard(net: &Network) -> Result<SymbolicMatrix, BuildError> {
    build(Protocol::Guard, net)
}

/// Guard-time SAF with direct link: `(M+1)T` square, `g0` on the diagonal.
pub fn build_guard_dl(net: &Network) -> Result<SymbolicMatrix, BuildError> {
    build(Protocol::GuardDl, net)
}

/// Slot-offset SAF without direct link.
pub fn build_offset(net: &Network) -> Result<SymbolicMatrix, BuildError> {
    build(Protocol::Offset, net)
}

/// Slot-offset SAF with direct link.
pub fn build_offset_dl(net: &Network) -> Result<SymbolicMatrix, BuildError> {
    build(Protocol::OffsetDl, net)
}
