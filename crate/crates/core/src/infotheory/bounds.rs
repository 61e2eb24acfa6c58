//! Closed-form DMT lower bounds of the SAF variants.
//!
//! Every additive term is clamped at zero independently before summation.

use serde::Serialize;

use super::InfoError;
use crate::model::{NetworkConfig, Protocol};

fn term(weight: f64, factor: f64, r: f64) -> f64 {
    (weight * (1.0 - factor * r)).max(0.0)
}

fn regime(ok: bool, what: impl FnOnce() -> String) -> Result<(), InfoError> {
    if ok {
        Ok(())
    } else {
        Err(InfoError::InvalidRegime(what()))
    }
}

/// Cut-set ceiling: `N (1 - r)`, or `(N + 1)(1 - r)` with a direct link.
pub fn transmit_diversity(n_relays: usize, direct_link: bool, r: f64) -> f64 {
    let branches = n_relays + usize::from(direct_link);
    term(branches as f64, 1.0, r)
}

/// Transmit-diversity ceiling matching `protocol`.
pub fn transmit_bound(protocol: Protocol, cfg: &NetworkConfig, r: f64) -> f64 {
    match protocol {
        Protocol::Direct => term(1.0, 1.0, r),
        p => transmit_diversity(cfg.n_relays, p.has_direct_link(), r),
    }
}

/// Large-`M` guard-time bound for a guard of `x` uses:
/// `N (1 - (T + x) / c r)` with `c = min(T, T - 2 theta + 2x)` clean symbols.
pub fn guard_bound_asymptotic(n_relays: usize, slot_len: usize, theta: i64, guard: usize, r: f64) -> Result<f64, InfoError> {
    let (t, th, x) = (slot_len as f64, theta as f64, guard as f64);
    let clean = t.min(t - 2.0 * th + 2.0 * x);
    regime(clean > 0.0, || format!("T - 2*theta + 2*x = {clean} is not positive"))?;
    Ok(term(n_relays as f64, (t + x) / clean, r))
}

/// Evaluates the DMT lower bound of `protocol` at multiplexing gain `r`.
pub fn bound_eval(protocol: Protocol, cfg: &NetworkConfig, theta: i64, r: f64) -> Result<f64, InfoError> {
    if !(r >= 0.0) {
        return Err(InfoError::NegativeRate(r));
    }
    let n = cfg.n_relays as f64;
    let (m, t, th) = (cfg.n_slots as f64, cfg.slot_len as f64, theta as f64);
    if protocol != Protocol::Direct {
        regime(cfg.n_relays > 0 && cfg.n_slots > 0, || "needs relays and slots".into())?;
    }
    let v = match protocol {
        Protocol::Sync => term(n, (m + 1.0) / m, r),
        Protocol::PropNaive => {
            regime(t > 2.0 * th, || format!("T = {t} must exceed 2*theta = {}", 2.0 * th))?;
            term(n, ((m + 1.0) * t + th) / (m * (t - 2.0 * th)), r)
        }
        Protocol::Guard => term(n, (m * (t + th) + t) / (m * t), r),
        Protocol::GuardDl => {
            regime(t > th, || format!("T = {t} must exceed theta = {th}"))?;
            let frame = (m + 1.0) * (t + th);
            term(1.0, frame / ((m + 1.0) * t), r) + term(n, frame / (m * (t - th)), r)
        }
        Protocol::Offset => {
            regime(t > th, || format!("T = {t} must exceed theta = {th}"))?;
            term(n, ((m + 1.0) * t + th) / (m * (t - th)), r)
        }
        Protocol::OffsetDl => {
            regime(t > th, || format!("T = {t} must exceed theta = {th}"))?;
            let frame = (m + 1.0) * t + th;
            term(1.0, frame / ((m + 1.0) * t), r) + term(n, frame / (m * (t - th)), r)
        }
        Protocol::Direct => term(1.0, 1.0, r),
    };
    Ok(v)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SanityReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl SanityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

const SLACK: f64 = 1e-12;

/// Grid checks of the bound family for `cfg` and `theta`:
/// the guard bound at `x = theta` dominates every other integer `x` in
/// `[0, 2 theta]`, each bound stays under its transmit-diversity ceiling, and
/// each bound is non-increasing in `r`.
pub fn bound_sanity(cfg: &NetworkConfig, theta: i64, r_max: f64, r_step: f64) -> SanityReport {
    let mut report = SanityReport::default();
    let steps = (r_max / r_step).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| k as f64 * r_step).collect();
    let th = theta.max(0) as usize;

    for &r in &grid {
        if let Ok(best) = guard_bound_asymptotic(cfg.n_relays, cfg.slot_len, theta, th, r) {
            for x in 0..=2 * th {
                if let Ok(other) = guard_bound_asymptotic(cfg.n_relays, cfg.slot_len, theta, x, r) {
                    report.checks += 1;
                    if other > best + SLACK {
                        report
                            .violations
                            .push(format!("guard x={x} beats x=theta at r={r}: {other} > {best}"));
                    }
                }
            }
        }
    }

    for protocol in Protocol::ALL {
        let mut prev: Option<f64> = None;
        for &r in &grid {
            let Ok(d) = bound_eval(protocol, cfg, theta, r) else {
                break;
            };
            let ceiling = transmit_bound(protocol, cfg, r);
            report.checks += 2;
            if d > ceiling + SLACK {
                report
                    .violations
                    .push(format!("{protocol} exceeds transmit diversity at r={r}: {d} > {ceiling}"));
            }
            if let Some(p) = prev {
                if d > p + SLACK {
                    report.violations.push(format!("{protocol} increases at r={r}: {d} > {p}"));
                }
            }
            prev = Some(d);
        }
    }
    report
}
