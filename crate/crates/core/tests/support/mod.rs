//! Brute-force time-stepped protocol simulation used as an oracle for the
//! matrix builders. It shares no code with the trace engine: every node keeps
//! its full received waveform as a polynomial per time step.

#![allow(dead_code)]

use std::collections::BTreeMap;

use asaf_core::matrix::SymbolicMatrix;
use asaf_core::{AsyncModel, DelayProfile, Network, NetworkConfig, Protocol};

/// `(row, col, sorted factor names) -> multiplicity`.
pub type Pattern = BTreeMap<(usize, usize, Vec<String>), u32>;

/// Per-time polynomial: `(col, sorted factor names) -> multiplicity`.
type Poly = BTreeMap<(usize, Vec<String>), u32>;

fn times(p: &Poly, factor: &str) -> Poly {
    p.iter()
        .map(|((c, f), &k)| {
            let mut f = f.clone();
            f.push(factor.to_string());
            f.sort();
            ((*c, f), k)
        })
        .collect()
}

fn add(into: &mut Poly, p: &Poly) {
    for (key, k) in p {
        *into.entry(key.clone()).or_insert(0) += k;
    }
}

struct Packet {
    relay: usize,
    listen: i64,
    tx: i64,
}

pub struct Oracle {
    pub rows: Vec<i64>,
    pub n_inputs: usize,
    pub pattern: Pattern,
}

pub fn simulate(protocol: Protocol, net: &Network) -> Oracle {
    let cfg = net.cfg();
    let dp = net.dp();
    let n = cfg.n_relays;
    let m = cfg.n_slots as i64;
    let t_len = cfg.slot_len as i64;
    let offset_model = cfg.model == AsyncModel::SlotOffset;

    let guard = match protocol {
        Protocol::Sync | Protocol::Offset | Protocol::OffsetDl | Protocol::Direct => 0,
        _ => cfg.guard_len as i64,
    };
    let period = t_len + guard;
    let source_slots = match protocol {
        Protocol::GuardDl | Protocol::OffsetDl => m + 1,
        Protocol::Direct => 1,
        _ => m,
    };
    let direct = match protocol {
        Protocol::GuardDl => Some(dp.tau0()),
        Protocol::OffsetDl | Protocol::Direct => Some(0),
        _ => None,
    };
    let nu = |r: usize| if offset_model { 0 } else { dp.nu(r) };
    let pi = |r: usize| if offset_model { 0 } else { dp.pi(r) };

    let packets: Vec<Packet> = if protocol == Protocol::Direct {
        Vec::new()
    } else {
        (0..m)
            .map(|p| {
                let relay = (p as usize % n) + 1;
                let shift = if offset_model { dp.offset_of(relay) } else { nu(relay) };
                Packet {
                    relay,
                    listen: p * period + shift,
                    tx: (p + 1) * period + shift,
                }
            })
            .collect()
    };

    let source = |t: i64| -> Option<usize> {
        if t < 0 {
            return None;
        }
        let (s, j) = (t / period, t % period);
        (s < source_slots && j < t_len).then(|| (s * t_len + j) as usize)
    };

    let horizon = packets
        .iter()
        .map(|p| p.tx + t_len + pi(p.relay))
        .chain([source_slots * period + dp.tau0() + t_len])
        .max()
        .unwrap()
        + 1;

    // rec[r][t]: waveform heard by relay r at time t.
    let mut rec: Vec<Vec<Poly>> = vec![vec![Poly::new(); horizon as usize]; n + 1];
    let transmitted = |rec: &Vec<Vec<Poly>>, r: usize, t: i64| -> Poly {
        for p in packets.iter().filter(|p| p.relay == r) {
            if t >= p.tx && t < p.tx + t_len {
                return rec[r][(p.listen + t - p.tx) as usize].clone();
            }
        }
        Poly::new()
    };
    for t in 0..horizon {
        for r in 1..=n {
            let mut heard = Poly::new();
            if let Some(c) = source(t - nu(r)) {
                heard.insert((c, vec![format!("g{r}")]), 1);
            }
            if n > 1 && !cfg.relay_isolated {
                let pred = if r == 1 { n } else { r - 1 };
                add(&mut heard, &times(&transmitted(&rec, pred, t), &format!("c{pred}{r}")));
            }
            rec[r][t as usize] = heard;
        }
    }

    let destination = |t: i64| -> Poly {
        let mut y = Poly::new();
        for r in 1..=n {
            add(&mut y, &times(&transmitted(&rec, r, t - pi(r)), &format!("h{r}")));
        }
        if let Some(d0) = direct {
            if let Some(c) = source(t - d0) {
                *y.entry((c, vec!["g0".to_string()])).or_insert(0) += 1;
            }
        }
        y
    };

    let arrivals: Vec<i64> = packets.iter().map(|p| p.tx + pi(p.relay)).collect();
    let rows: Vec<i64> = match protocol {
        Protocol::Sync | Protocol::PropNaive => {
            let first = *arrivals.iter().min().unwrap();
            let last = *arrivals.iter().max().unwrap() + t_len;
            (first..last).collect()
        }
        Protocol::Guard => arrivals.iter().flat_map(|&a| a..a + t_len).collect(),
        Protocol::GuardDl => (0..=m)
            .flat_map(|s| (0..t_len).map(move |j| s * period + dp.tau0() + j))
            .collect(),
        Protocol::Offset => (t_len..t_len + m * t_len).collect(),
        Protocol::OffsetDl => (0..(m + 1) * t_len).collect(),
        Protocol::Direct => (0..t_len).collect(),
    };

    let mut pattern = Pattern::new();
    for (row, &t) in rows.iter().enumerate() {
        for ((c, f), k) in destination(t) {
            pattern.insert((row, c, f), k);
        }
    }
    Oracle {
        rows,
        n_inputs: (source_slots * t_len) as usize,
        pattern,
    }
}

/// The builder output in the oracle's order-insensitive form.
pub fn pattern_of(m: &SymbolicMatrix) -> Pattern {
    let mut out = Pattern::new();
    for (r, c, e) in m.nonzeros() {
        for mono in e.terms() {
            let mut f: Vec<String> = mono.factors().iter().map(|s| s.to_string()).collect();
            f.sort();
            *out.entry((r, c, f)).or_insert(0) += 1;
        }
    }
    out
}

/// Small deterministic generator for random instances in loop-style suites.
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

pub fn prop_net(n: usize, m: usize, t: usize, x: usize, nu: Vec<i64>, pi: Vec<i64>, isolated: bool) -> Network {
    Network::new(
        NetworkConfig::new(n, m, t, AsyncModel::PropagationDelay)
            .with_guard(x)
            .isolated(isolated),
        DelayProfile::prop(nu, pi),
    )
    .unwrap()
}

pub fn offset_net(m: usize, t: usize, tau: Vec<i64>, direct: bool) -> Network {
    let n = tau.len();
    let mut cfg = NetworkConfig::new(n, m, t, AsyncModel::SlotOffset);
    if direct {
        cfg = cfg.with_direct_link();
    }
    Network::new(cfg, DelayProfile::offset(tau)).unwrap()
}
