//! Symbol-granularity trace of a slotted relay schedule.
//!
//! A signal at a given instant is a linear form over the source symbols: a map
//! from column (source symbol index) to the symbolic coefficient multiplying
//! it. Relay buffers are vectors of such forms; the destination sample at time
//! `t` is the sum of every relay transmission (and the direct path) that lands
//! on `t`.

use std::collections::{BTreeMap, HashMap};

use super::symbolic::{FadeSymbol, Monomial, SymbolicEntry};

/// Linear form over source symbols.
pub type Signal = BTreeMap<usize, SymbolicEntry>;

/// Shift-and-truncate on a window of `window` samples.
///
/// `out[j] = v[j - delta]` when that index exists, zero otherwise: a positive
/// `delta` shifts right and drops the tail, a negative one shifts left and
/// drops the head.
pub fn shift_truncate<T: Clone + Default>(v: &[T], delta: i64, window: usize) -> Vec<T> {
    (0..window as i64)
        .map(|j| {
            let src = j - delta;
            if src >= 0 && (src as usize) < v.len() {
                v[src as usize].clone()
            } else {
                T::default()
            }
        })
        .collect()
}

pub(crate) fn scale(signal: &Signal, sym: FadeSymbol) -> Signal {
    signal.iter().map(|(&c, e)| (c, e.times(sym))).collect()
}

pub(crate) fn accumulate(into: &mut Signal, other: &Signal) {
    for (&c, e) in other {
        into.entry(c).or_default().add_assign(e);
    }
}

/// One relay packet: relay `relay` listens for `T` uses from `listen_start`
/// and replays the buffer from `tx_start`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PacketSlot {
    pub relay: usize,
    pub listen_start: i64,
    pub tx_start: i64,
}

/// Everything the trace needs to know about a protocol run.
#[derive(Debug, Clone)]
pub(crate) struct Schedule {
    pub slot_len: usize,
    /// Emission time of every source symbol, indexed by column.
    pub emit_times: Vec<i64>,
    pub packets: Vec<PacketSlot>,
    /// Source-to-relay and relay-to-destination delays, by relay (1-based).
    pub nu: Vec<i64>,
    pub pi: Vec<i64>,
    /// Delay of the direct path, when one exists.
    pub direct_delay: Option<i64>,
    pub isolated: bool,
}

/// Which relay packet sample fed a destination sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Contribution {
    pub packet: usize,
    pub index: usize,
}

pub(crate) struct Trace<'a> {
    schedule: &'a Schedule,
    emitted_at: HashMap<i64, usize>,
    pub buffers: Vec<Vec<Signal>>,
}

impl<'a> Trace<'a> {
    pub fn run(schedule: &'a Schedule) -> Self {
        let emitted_at: HashMap<i64, usize> = schedule
            .emit_times
            .iter()
            .enumerate()
            .map(|(col, &t)| (t, col))
            .collect();
        let t_len = schedule.slot_len;
        let n_packets = schedule.packets.len();
        let mut buffers: Vec<Vec<Signal>> = vec![Vec::new(); n_packets];
        let n_relays = schedule.nu.len();

        // A packet can only hear transmissions that started before its own
        // listening window ended, so listening order is a valid build order.
        let mut order: Vec<usize> = (0..n_packets).collect();
        order.sort_by_key(|&p| (schedule.packets[p].listen_start, p));
        let mut done: Vec<usize> = Vec::with_capacity(n_packets);

        for &p in &order {
            let slot = schedule.packets[p];
            let relay = slot.relay;
            let nu = schedule.nu[relay - 1];
            let mut buf: Vec<Signal> = (0..t_len as i64)
                .map(|j| {
                    let mut s = Signal::new();
                    if let Some(&col) = emitted_at.get(&(slot.listen_start + j - nu)) {
                        s.insert(col, SymbolicEntry::monomial(Monomial::one().times(FadeSymbol::G(relay))));
                    }
                    s
                })
                .collect();

            // Adjacent-relay interference: relay i hears only relay i-1 (cyclically).
            if !schedule.isolated && n_relays > 1 {
                let pred = if relay == 1 { n_relays } else { relay - 1 };
                for &q in &done {
                    let other = schedule.packets[q];
                    if other.relay != pred {
                        continue;
                    }
                    let delta = other.tx_start - slot.listen_start;
                    let heard = shift_truncate(&buffers[q], delta, t_len);
                    let link = FadeSymbol::GammaInter(pred, relay);
                    for (dst, src) in buf.iter_mut().zip(&heard) {
                        accumulate(dst, &scale(src, link));
                    }
                }
            }
            buffers[p] = buf;
            done.push(p);
        }

        Trace {
            schedule,
            emitted_at,
            buffers,
        }
    }

    /// Arrival window `[start, start + T)` of packet `p` at the destination.
    pub fn arrival_start(&self, p: usize) -> i64 {
        let slot = self.schedule.packets[p];
        slot.tx_start + self.schedule.pi[slot.relay - 1]
    }

    /// Destination sample at time `t`, with the relay samples that formed it.
    pub fn destination(&self, t: i64) -> (Signal, Vec<Contribution>) {
        let t_len = self.schedule.slot_len as i64;
        let mut out = Signal::new();
        let mut from = Vec::new();
        for (p, slot) in self.schedule.packets.iter().enumerate() {
            let idx = t - self.arrival_start(p);
            if idx < 0 || idx >= t_len {
                continue;
            }
            let sample = &self.buffers[p][idx as usize];
            if sample.is_empty() {
                continue;
            }
            accumulate(&mut out, &scale(sample, FadeSymbol::H(slot.relay)));
            from.push(Contribution {
                packet: p,
                index: idx as usize,
            });
        }
        if let Some(d0) = self.schedule.direct_delay {
            if let Some(&col) = self.emitted_at.get(&(t - d0)) {
                let direct = SymbolicEntry::monomial(Monomial::one().times(FadeSymbol::G0));
                out.entry(col).or_default().add_assign(&direct);
            }
        }
        (out, from)
    }
}
