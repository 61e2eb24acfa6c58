use serde::Serialize;

use super::outage::OutagePoint;
use super::InfoError;

/// Minimum number of observed outages for a point to enter the fit.
pub const MIN_OUTAGES: u64 = 10;

/// Least-squares fit of `log10 p_out` against `log10 rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    /// Negated slope: the diversity estimate.
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the fit in decades.
    pub residual: f64,
    pub points_used: usize,
}

/// Estimates the diversity order from the points whose SNR lies in
/// `[window.0, window.1]` dB.
///
/// Fails with `InsufficientData` when any point in the window saw no outage at
/// all, or when fewer than three points have at least [`MIN_OUTAGES`] outages.
pub fn dmt_slope(points: &[OutagePoint], window: (f64, f64)) -> Result<SlopeFit, InfoError> {
    let (lo, hi) = if window.0 <= window.1 { window } else { (window.1, window.0) };
    let inside: Vec<&OutagePoint> = points.iter().filter(|p| p.rho_db >= lo && p.rho_db <= hi).collect();
    if let Some(p) = inside.iter().find(|p| p.outages == 0 || p.p_out <= 0.0) {
        return Err(InfoError::InsufficientData(format!("no outages observed at {} dB", p.rho_db)));
    }
    let xy: Vec<(f64, f64)> = inside
        .iter()
        .filter(|p| p.outages >= MIN_OUTAGES)
        .map(|p| (p.rho_db / 10.0, p.p_out.log10()))
        .collect();
    if xy.len() < 3 {
        return Err(InfoError::InsufficientData(format!(
            "{} points with at least {MIN_OUTAGES} outages in [{lo}, {hi}] dB, need 3",
            xy.len()
        )));
    }

    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(InfoError::InsufficientData("all points share one SNR".into()));
    }
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let rss: f64 = xy.iter().map(|p| (p.1 - intercept - beta * p.0).powi(2)).sum();
    Ok(SlopeFit {
        slope: -beta,
        intercept,
        residual: (rss / n).sqrt(),
        points_used: xy.len(),
    })
}
