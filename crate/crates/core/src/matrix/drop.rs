//! Dropping collided and corrupted samples from the naive propagation-delay
//! SAF matrix so that what remains is lower triangular.
//!
//! A destination sample is a *candidate* when exactly one relay packet lands on
//! it. Each candidate owns the source symbol the relay heard directly, and it is
//! kept only if every column it depends on is owned by another kept sample.
//! Removing a sample releases its column, which can invalidate samples that
//! inherited it through relay chaining (corruption), so the rule is iterated to
//! a fixpoint. The kept rows then depend only on kept columns, which is what
//! makes dropping a valid mutual-information lower bound. Pairs are finally
//! put in dependency order; with large delay spreads packets can reach the
//! destination out of order, and rows caught in a dependency cycle are dropped
//! too.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::build::{build_traced, BuildError};
use super::symbolic::{MatrixMeta, Monomial, SymbolicMatrix};
use crate::model::{AsyncModel, Network, Protocol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DropError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("no clean symbols survive: {0}")]
    EmptyPlan(String),
    #[error("plan keeps {outputs} outputs but {inputs} inputs")]
    Unbalanced { outputs: usize, inputs: usize },
    #[error("plan index {index} outside the matrix ({bound})")]
    OutOfRange { index: usize, bound: usize },
    #[error("dropped matrix is not lower triangular with nonzero diagonal at ({row},{col})")]
    NotTriangular { row: usize, col: usize },
}

/// Rows (destination samples) and columns (source symbols) to retain, as
/// positions in the matrix the plan was computed for. Pairs are matched by
/// position: `keep_outputs[k]` carries `keep_inputs[k]` on its diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DropPlan {
    pub keep_outputs: Vec<usize>,
    pub keep_inputs: Vec<usize>,
}

impl DropPlan {
    pub fn identity(n: usize) -> Self {
        DropPlan {
            keep_outputs: (0..n).collect(),
            keep_inputs: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.keep_outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keep_outputs.is_empty()
    }

    /// Number of retained symbols of each source slot.
    pub fn clean_per_slot(&self, slot_len: usize, n_slots: usize) -> Vec<usize> {
        let mut counts = vec![0; n_slots];
        for &c in &self.keep_inputs {
            counts[c / slot_len] += 1;
        }
        counts
    }
}

/// Computes the drop plan of the naive (optionally guarded) propagation-delay
/// protocol on `net`.
pub fn compute_drop_plan(net: &Network) -> Result<DropPlan, DropError> {
    let cfg = net.cfg();
    if cfg.model != AsyncModel::PropagationDelay {
        return Err(BuildError::ModelMismatch("drop plans need the propagation-delay model".into()).into());
    }
    let (matrix, contributions) = build_traced(Protocol::PropNaive, net)?;

    // candidate row -> owned column
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (row, from) in contributions.iter().enumerate() {
        if let [only] = from.as_slice() {
            let relay = cfg.relay_for_packet(only.packet);
            let col = only.packet * cfg.slot_len + only.index;
            let direct = matrix.get(row, col).is_some_and(|e| e.contains(&Monomial::gamma(relay)));
            if direct {
                owner.insert(row, col);
            }
        }
    }

    let supports: BTreeMap<usize, Vec<usize>> = owner.keys().map(|&r| (r, matrix.row_support(r))).collect();
    let pairs = loop {
        loop {
            let owned: BTreeSet<usize> = owner.values().copied().collect();
            let before = owner.len();
            owner.retain(|r, _| supports[r].iter().all(|c| owned.contains(c)));
            if owner.len() == before {
                break;
            }
        }
        let (ordered, stuck) = triangular_order(&owner, &supports);
        if stuck.is_empty() {
            break ordered;
        }
        for r in stuck {
            owner.remove(&r);
        }
    };

    if pairs.is_empty() {
        let (t, theta, x) = (cfg.slot_len as i64, net.theta(), cfg.guard_len as i64);
        return Err(DropError::EmptyPlan(format!(
            "every destination sample is collided or corrupted (T - 2*theta + 2*x = {})",
            t - 2 * theta + 2 * x
        )));
    }
    Ok(DropPlan {
        keep_outputs: pairs.iter().map(|p| p.0).collect(),
        keep_inputs: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Orders the `(row, col)` pairs so that every row only depends on columns of
/// earlier pairs, preferring the smallest column. Rows caught in a dependency
/// cycle are returned separately.
fn triangular_order(
    owner: &BTreeMap<usize, usize>,
    supports: &BTreeMap<usize, Vec<usize>>,
) -> (Vec<(usize, usize)>, Vec<usize>) {
    let row_of: BTreeMap<usize, usize> = owner.iter().map(|(&r, &c)| (c, r)).collect();
    let mut waiting: BTreeMap<usize, usize> = BTreeMap::new();
    let mut dependents: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&r, &own) in owner {
        let deps: Vec<usize> = supports[&r].iter().filter(|&&c| c != own).map(|c| row_of[c]).collect();
        waiting.insert(r, deps.len());
        for d in deps {
            dependents.entry(d).or_default().push(r);
        }
    }
    let mut ready: BTreeSet<(usize, usize)> = waiting
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(&r, _)| (owner[&r], r))
        .collect();
    let mut ordered = Vec::with_capacity(owner.len());
    while let Some((c, r)) = ready.pop_first() {
        ordered.push((r, c));
        for &d in dependents.get(&r).into_iter().flatten() {
            let n = waiting.get_mut(&d).expect("dependent is a kept row");
            *n -= 1;
            if *n == 0 {
                ready.insert((owner[&d], d));
            }
        }
    }
    let placed: BTreeSet<usize> = ordered.iter().map(|p| p.0).collect();
    let stuck = owner.keys().filter(|r| !placed.contains(r)).copied().collect();
    (ordered, stuck)
}

/// Restricts `m` to the rows and columns named by `plan` and checks that the
/// result is lower triangular with a nonzero diagonal.
pub fn apply_drop(m: &SymbolicMatrix, plan: &DropPlan) -> Result<SymbolicMatrix, DropError> {
    let sub = submatrix(m, &plan.keep_outputs, &plan.keep_inputs)?;
    if plan.keep_outputs.len() != plan.keep_inputs.len() {
        return Err(DropError::Unbalanced {
            outputs: plan.keep_outputs.len(),
            inputs: plan.keep_inputs.len(),
        });
    }
    if let Some((row, col, _)) = sub.nonzeros().find(|&(r, c, _)| c > r) {
        return Err(DropError::NotTriangular { row, col });
    }
    if let Some(k) = (0..sub.rows()).find(|&k| sub.get(k, k).is_none()) {
        return Err(DropError::NotTriangular { row: k, col: k });
    }
    Ok(sub)
}

/// Arbitrary row/column selection, without structural checks.
pub fn submatrix(m: &SymbolicMatrix, rows: &[usize], cols: &[usize]) -> Result<SymbolicMatrix, DropError> {
    if let Some(&index) = rows.iter().find(|&&r| r >= m.rows()) {
        return Err(DropError::OutOfRange { index, bound: m.rows() });
    }
    if let Some(&index) = cols.iter().find(|&&c| c >= m.cols()) {
        return Err(DropError::OutOfRange { index, bound: m.cols() });
    }
    let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut entries = Vec::new();
    for (new_r, &r) in rows.iter().enumerate() {
        for c in m.row_support(r) {
            if let Some(&new_c) = col_pos.get(&c) {
                entries.push(((new_r, new_c), m.get(r, c).cloned().unwrap_or_default()));
            }
        }
    }
    let meta = m.meta();
    let meta = MatrixMeta {
        protocol: meta.protocol,
        network: meta.network.clone(),
        input_labels: cols.iter().map(|&c| meta.input_labels[c]).collect(),
        output_labels: rows.iter().map(|&r| meta.output_labels[r]).collect(),
    };
    Ok(SymbolicMatrix::new(entries, meta))
}
