//! Python bindings: build channel matrices, run outage sweeps, evaluate bounds.

use asaf_core::infotheory::{self, InfoError, OutageEstimator, OutagePoint, RatePolicy, RateTarget};
use asaf_core::matrix::{self, apply_drop, build, compute_drop_plan, evaluate};
use asaf_core::{sample_fades, AsyncModel, DelayProfile, NetworkConfig, Protocol};
use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_err(code: &str, e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(format!("{code}: {e}"))
}

fn info_err(e: InfoError) -> PyErr {
    value_err(e.code(), e)
}

fn parse_protocol(name: &str) -> PyResult<Protocol> {
    name.parse::<Protocol>().map_err(|e| value_err("usage", e))
}

/// A validated relay network together with the protocol it runs.
#[pyclass(frozen, module = "asaf")]
struct Network {
    protocol: Protocol,
    inner: asaf_core::Network,
}

#[pymethods]
impl Network {
    #[new]
    #[pyo3(signature = (protocol, relays, slots, slot_len, guard=None, nu=None, pi=None, tau=None, tau0=None, direct_link=false, isolated=false))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        protocol: &str,
        relays: usize,
        slots: usize,
        slot_len: usize,
        guard: Option<usize>,
        nu: Option<Vec<i64>>,
        pi: Option<Vec<i64>>,
        tau: Option<Vec<i64>>,
        tau0: Option<i64>,
        direct_link: bool,
        isolated: bool,
    ) -> PyResult<Self> {
        let protocol = parse_protocol(protocol)?;
        let model = match protocol {
            Protocol::Direct => AsyncModel::Synchronous,
            p => p.model(),
        };
        let dp = match model {
            AsyncModel::SlotOffset => DelayProfile::offset(tau.unwrap_or_else(|| vec![0; relays])),
            _ => {
                let nu = nu.unwrap_or_else(|| vec![0; relays]);
                let pi = pi.unwrap_or_else(|| vec![0; relays]);
                match tau0 {
                    Some(t0) => DelayProfile::prop_with_direct(nu, pi, t0),
                    None => DelayProfile::prop(nu, pi),
                }
            }
        };
        let guard = guard.unwrap_or(match protocol {
            Protocol::Guard | Protocol::GuardDl => dp.theta().max(0) as usize,
            _ => 0,
        });
        let mut cfg = NetworkConfig::new(relays, slots, slot_len, model).with_guard(guard).isolated(isolated);
        if direct_link || protocol.has_direct_link() {
            cfg = cfg.with_direct_link();
        }
        let inner = asaf_core::Network::new(cfg, dp).map_err(|e| value_err(e.code(), e))?;
        Ok(Network { protocol, inner })
    }

    #[getter]
    fn protocol(&self) -> &'static str {
        self.protocol.name()
    }

    #[getter]
    fn theta(&self) -> i64 {
        self.inner.theta()
    }

    /// Symbolic channel matrix in the text dump grammar.
    #[pyo3(signature = (drop=false))]
    fn matrix(&self, drop: bool) -> PyResult<String> {
        Ok(self.symbolic(drop)?.render())
    }

    /// Channel matrix for fade draw `(seed, trial)` as nested lists of complex numbers.
    #[pyo3(signature = (seed, trial=0, drop=false))]
    fn numeric(&self, seed: u64, trial: u64, drop: bool) -> PyResult<Vec<Vec<Complex64>>> {
        let m = self.symbolic(drop)?;
        let h = evaluate(&m, &sample_fades(self.inner.cfg(), seed, trial)).map_err(|e| value_err("unresolved-symbol", e))?;
        Ok((0..h.nrows()).map(|i| (0..h.ncols()).map(|j| h[(i, j)]).collect()).collect())
    }

    /// `(keep_outputs, keep_inputs)` of the collision drop plan.
    fn drop_plan(&self) -> PyResult<(Vec<usize>, Vec<usize>)> {
        let plan = compute_drop_plan(&self.inner).map_err(drop_err)?;
        Ok((plan.keep_outputs, plan.keep_inputs))
    }

    /// Monte Carlo outage sweep: one `(rho_db, trials, outages, p_out, std_err)` tuple per SNR.
    #[pyo3(signature = (rho_db, r, trials, seed=0, rate_bits=false, diagonal_only=false))]
    fn outage(
        &self,
        py: Python<'_>,
        rho_db: Vec<f64>,
        r: f64,
        trials: u64,
        seed: u64,
        rate_bits: bool,
        diagonal_only: bool,
    ) -> PyResult<Vec<(f64, u64, u64, f64, f64)>> {
        let target = if rate_bits { RateTarget::Bits(r) } else { RateTarget::Multiplexing(r) };
        let policy = RatePolicy::new(self.protocol, &self.inner, target).map_err(info_err)?;
        let mut h = self.symbolic(false)?;
        if diagonal_only {
            h = matrix::extract_diag(&h);
        }
        let curve = py
            .detach(|| OutageEstimator::new(&self.inner, &h, policy).curve(&rho_db, trials, seed))
            .map_err(info_err)?;
        Ok(curve
            .points
            .iter()
            .map(|p| (p.rho_db, p.trials, p.outages, p.p_out, p.std_err))
            .collect())
    }

    /// Closed-form DMT lower bound at multiplexing gain `r`.
    fn bound(&self, r: f64) -> PyResult<f64> {
        infotheory::bound_eval(self.protocol, self.inner.cfg(), self.inner.theta(), r).map_err(info_err)
    }

    /// Transmit-diversity ceiling at `r`.
    fn transmit_bound(&self, r: f64) -> f64 {
        infotheory::transmit_bound(self.protocol, self.inner.cfg(), r)
    }

    fn __repr__(&self) -> String {
        let c = self.inner.cfg();
        format!(
            "Network(protocol='{}', relays={}, slots={}, slot_len={}, guard={}, theta={})",
            self.protocol,
            c.n_relays,
            c.n_slots,
            c.slot_len,
            c.guard_len,
            self.inner.theta()
        )
    }
}

fn drop_err(e: matrix::DropError) -> PyErr {
    let code = match &e {
        matrix::DropError::EmptyPlan(_) => "empty-plan",
        matrix::DropError::Build(_) => "model-mismatch",
        _ => "bad-plan",
    };
    value_err(code, e)
}

impl Network {
    fn symbolic(&self, drop: bool) -> PyResult<matrix::SymbolicMatrix> {
        let m = build(self.protocol, &self.inner).map_err(|e| value_err("model-mismatch", e))?;
        if !drop {
            return Ok(m);
        }
        let plan = compute_drop_plan(&self.inner).map_err(drop_err)?;
        apply_drop(&m, &plan).map_err(drop_err)
    }
}

/// Gaussian mutual information `log2 det(I + rho H H^*)` in bits.
#[pyfunction]
fn mutual_info(h: Vec<Vec<Complex64>>, rho: f64) -> PyResult<f64> {
    let rows = h.len();
    let cols = h.first().map_or(0, Vec::len);
    if h.iter().any(|row| row.len() != cols) {
        return Err(value_err("usage", "ragged matrix"));
    }
    let m = DMatrix::from_fn(rows, cols, |i, j| h[i][j]);
    infotheory::mutual_info(&m, rho).map_err(info_err)
}

/// Fits the diversity slope to `(rho_db, trials, outages)` points within `[lo, hi]` dB.
/// Returns `(slope, intercept, residual)`.
#[pyfunction]
#[pyo3(signature = (points, lo=f64::NEG_INFINITY, hi=f64::INFINITY))]
fn dmt_slope(points: Vec<(f64, u64, u64)>, lo: f64, hi: f64) -> PyResult<(f64, f64, f64)> {
    let pts: Vec<OutagePoint> = points
        .into_iter()
        .map(|(db, trials, outages)| OutagePoint::from_counts(db, trials, outages))
        .collect();
    let fit = infotheory::dmt_slope(&pts, (lo, hi)).map_err(info_err)?;
    Ok((fit.slope, fit.intercept, fit.residual))
}

#[pymodule]
fn asaf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Network>()?;
    m.add_function(wrap_pyfunction!(mutual_info, m)?)?;
    m.add_function(wrap_pyfunction!(dmt_slope, m)?)?;
    Ok(())
}
