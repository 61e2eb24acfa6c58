use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use asaf_core::infotheory::{bound_eval, dmt_slope, transmit_bound, OutageEstimator, RatePolicy, RateTarget};
use asaf_core::matrix::{apply_drop, build, compute_drop_plan, evaluate, SymbolicMatrix};
use asaf_core::{sample_fades, Protocol};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{BoundArgs, Command, DmtArgs, MatrixArgs, OutageArgs, PlotArgs};
use crate::csvio::{self, BoundRow, OutageRow, RowWriter, Table, OUTAGE_HEADER};
use crate::error::CliError;
use crate::spec::{merge_spec, parse_sweep, parse_window, resolve_network, ExperimentSpec};
use crate::svg::{Chart, Series};

pub fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Matrix(a) => cmd_matrix(&a),
        Command::Outage(a) => cmd_outage(&a).map(|_| ()),
        Command::Bound(a) => cmd_bound(&a),
        Command::Plot(a) => cmd_plot(&a),
        Command::Dmt(a) => cmd_dmt(&a),
    }
}

fn emit(out: Option<&Path>, file: &str, text: &str) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(file), text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `a+bi` with nine significant digits per part.
fn complex_token(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.8e}{sign}{:.8e}i", z.re, z.im.abs())
}

fn cmd_matrix(a: &MatrixArgs) -> Result<(), CliError> {
    let (net_args, _) = merge_spec(&a.net)?;
    let resolved = resolve_network(&net_args, false)?;
    let net = &resolved.network;
    let mut m: SymbolicMatrix = build(resolved.protocol, net)?;
    if a.drop {
        if resolved.protocol != Protocol::PropNaive && resolved.protocol != Protocol::Sync {
            return Err(CliError::usage("--drop applies to the sync and prop-naive protocols"));
        }
        let plan = compute_drop_plan(net)?;
        m = apply_drop(&m, &plan)?;
    }
    let text = if a.numeric {
        let fades = sample_fades(net.cfg(), a.seed, a.trial);
        let h = evaluate(&m, &fades)?;
        let mut s = String::new();
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols())
                .map(|j| match m.get(i, j) {
                    Some(_) => complex_token(h[(i, j)]),
                    None => "0".to_string(),
                })
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    } else {
        m.render()
    };
    emit(a.out.as_deref(), "matrix.txt", &text)
}

#[derive(Debug, Serialize)]
struct FileDigest {
    name: String,
    bytes: u64,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    spec: &'a ExperimentSpec,
    started_unix: u64,
    finished_unix: u64,
    files: Vec<FileDigest>,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn digest(path: &Path) -> Result<FileDigest, CliError> {
    let bytes = fs::read(path)?;
    Ok(FileDigest {
        name: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        bytes: bytes.len() as u64,
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

/// Builds the experiment from `--spec` and flags; flags win.
fn outage_spec(a: &OutageArgs) -> Result<(ExperimentSpec, crate::spec::Resolved), CliError> {
    let (net_args, base) = merge_spec(&a.net)?;
    let resolved = resolve_network(&net_args, false)?;
    let missing = |flag: &str| CliError::usage(format!("missing --{flag}"));
    let r_values = match (&a.r, &base) {
        (Some(s), _) => parse_sweep(s)?,
        (None, Some(b)) => b.r_values.clone(),
        (None, None) => return Err(missing("r")),
    };
    let rho_db_values = match (&a.rho_db, &base) {
        (Some(s), _) => parse_sweep(s)?,
        (None, Some(b)) => b.rho_db_values.clone(),
        (None, None) => return Err(missing("rho-db")),
    };
    let spec = ExperimentSpec {
        cfg: resolved.network.cfg().clone(),
        dp: resolved.network.dp().clone(),
        protocol: resolved.protocol,
        r_values,
        rho_db_values,
        trials_per_point: a.trials.or(base.as_ref().map(|b| b.trials_per_point)).ok_or_else(|| missing("trials"))?,
        seed: a.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
        output_dir: a
            .out
            .clone()
            .or(base.as_ref().map(|b| b.output_dir.clone()))
            .ok_or_else(|| missing("out"))?,
        rate_bits: a.rate_bits || base.as_ref().is_some_and(|b| b.rate_bits),
    };
    spec.check()?;
    Ok((spec, resolved))
}

fn r_file_name(r: f64) -> String {
    format!("outage_r{r}.csv")
}

/// Runs the sweep and returns the paths of the emitted CSVs (combined file first).
pub fn cmd_outage(a: &OutageArgs) -> Result<Vec<PathBuf>, CliError> {
    let started = unix_now();
    let (spec, resolved) = outage_spec(a)?;
    let net = &resolved.network;
    let dir = &spec.output_dir;
    fs::create_dir_all(dir)?;
    let manifest_path = dir.join("manifest.json");
    if manifest_path.exists() {
        fs::remove_file(&manifest_path)?;
    }

    let mut rhos = spec.rho_db_values.clone();
    rhos.sort_by(f64::total_cmp);
    rhos.dedup();
    let h = build(spec.protocol, net)?;

    let combined_path = dir.join("outage.csv");
    let mut combined = RowWriter::create(&combined_path, &OUTAGE_HEADER)?;
    let mut paths = vec![combined_path];
    for &r in &spec.r_values {
        let target = if spec.rate_bits {
            RateTarget::Bits(r)
        } else {
            RateTarget::Multiplexing(r)
        };
        let policy = RatePolicy::new(spec.protocol, net, target)?;
        let path = dir.join(r_file_name(r));
        let mut per_r = RowWriter::create(&path, &OUTAGE_HEADER)?;
        let counts = OutageEstimator::new(net, &h, policy).counts(&rhos, spec.trials_per_point, spec.seed)?;
        for (&rho_db, outages) in rhos.iter().zip(counts) {
            let p = asaf_core::infotheory::OutagePoint::from_counts(rho_db, spec.trials_per_point, outages);
            let row = OutageRow {
                protocol: spec.protocol.name().to_string(),
                n: spec.cfg.n_relays,
                m: spec.cfg.n_slots,
                t: spec.cfg.slot_len,
                theta: resolved.theta,
                x: spec.cfg.guard_len,
                r,
                r_prime: policy.r_prime(),
                rho_db,
                trials: p.trials,
                outages: p.outages,
                p_out: p.p_out,
                std_err: p.std_err,
            };
            per_r.write(row.record())?;
            combined.write(row.record())?;
        }
        paths.push(path);
    }
    drop(combined);

    let files = paths.iter().map(|p| digest(p)).collect::<Result<Vec<_>, _>>()?;
    let manifest = RunManifest {
        tool: "asaf",
        version: env!("CARGO_PKG_VERSION"),
        spec: &spec,
        started_unix: started,
        finished_unix: unix_now(),
        files,
    };
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(paths)
}

fn cmd_bound(a: &BoundArgs) -> Result<(), CliError> {
    let (net_args, _) = merge_spec(&a.net)?;
    let resolved = resolve_network(&net_args, true)?;
    let cfg = resolved.network.cfg();
    let rows = parse_sweep(&a.r)?
        .into_iter()
        .map(|r| {
            Ok(BoundRow {
                r,
                d_bound: bound_eval(resolved.protocol, cfg, resolved.theta, r)?,
                d_transmit: transmit_bound(resolved.protocol, cfg, r),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            csvio::write_bound(fs::File::create(dir.join("bound.csv"))?, &rows)
        }
        None => csvio::write_bound(std::io::stdout().lock(), &rows),
    }
}

fn file_label(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn cmd_plot(a: &PlotArgs) -> Result<(), CliError> {
    let mut outage = Vec::new();
    let mut bound = Vec::new();
    for path in &a.inputs {
        match csvio::read_table(path)? {
            Table::Outage(rows) => {
                for ((protocol, r), pts) in csvio::curves(&rows) {
                    outage.push(Series {
                        label: format!("{protocol} r={r}"),
                        points: pts
                            .iter()
                            .filter(|p| p.p_out > 0.0)
                            .map(|p| (p.rho_db, p.p_out.log10()))
                            .collect(),
                    });
                }
            }
            Table::Bound(rows) => bound.push(Series {
                label: file_label(path),
                points: rows.iter().map(|b| (b.r, b.d_bound)).collect(),
            }),
        }
    }
    let chart = match (outage.is_empty(), bound.is_empty()) {
        (false, true) => Chart {
            x_label: "SNR (dB)".into(),
            y_label: "log10 outage probability".into(),
            series: outage,
        },
        (true, false) => Chart {
            x_label: "multiplexing gain r".into(),
            y_label: "diversity d(r)".into(),
            series: bound,
        },
        _ => return Err(CliError::Schema("cannot mix outage and bound CSVs in one chart".into())),
    };
    if let Some(parent) = a.output.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&a.output, chart.render())?;
    Ok(())
}

fn cmd_dmt(a: &DmtArgs) -> Result<(), CliError> {
    let window = match &a.window {
        Some(w) => parse_window(w)?,
        None => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let rows = csvio::read_outage(&a.input)?;
    let mut report = String::new();
    for ((protocol, r), pts) in csvio::curves(&rows) {
        let points: Vec<_> = pts.iter().map(|p| p.point()).collect();
        let fit = dmt_slope(&points, window)?;
        report.push_str(&format!(
            "protocol={protocol} r={r} slope={:.2} intercept={:.4} residual={:.4} points={}\n",
            fit.slope, fit.intercept, fit.residual, fit.points_used
        ));
    }
    print!("{report}");
    Ok(())
}
