//! Formal sums of fade monomials and the sparse symbolic channel matrix.

use std::collections::BTreeMap;
use std::fmt;

use crate::model::{Network, Protocol};

/// A single fade coefficient. Relay indices are 1-based.
///
/// The derived ordering (`g0`, then `g*`, `h*`, `c**`) is the canonical
/// factor order used when rendering monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FadeSymbol {
    G0,
    G(usize),
    H(usize),
    GammaInter(usize, usize),
}

impl fmt::Display for FadeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadeSymbol::G0 => write!(f, "g0"),
            FadeSymbol::G(i) => write!(f, "g{i}"),
            FadeSymbol::H(i) => write!(f, "h{i}"),
            FadeSymbol::GammaInter(i, j) => write!(f, "c{i}{j}"),
        }
    }
}

/// Product of fade symbols, stored as a sorted multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<FadeSymbol>);

impl Monomial {
    pub fn new(mut factors: Vec<FadeSymbol>) -> Self {
        factors.sort_unstable();
        Monomial(factors)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn factors(&self) -> &[FadeSymbol] {
        &self.0
    }

    pub fn times(&self, sym: FadeSymbol) -> Monomial {
        let pos = self.0.partition_point(|s| *s <= sym);
        let mut factors = self.0.clone();
        factors.insert(pos, sym);
        Monomial(factors)
    }

    /// `h_i g_i` for relay `i`.
    pub fn gamma(i: usize) -> Monomial {
        Monomial(vec![FadeSymbol::G(i), FadeSymbol::H(i)])
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Formal sum of monomials with unit coefficients. Empty means zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolicEntry {
    terms: Vec<Monomial>,
}

impl SymbolicEntry {
    pub fn zero() -> Self {
        SymbolicEntry { terms: Vec::new() }
    }

    pub fn from_terms(mut terms: Vec<Monomial>) -> Self {
        terms.sort();
        SymbolicEntry { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        SymbolicEntry { terms: vec![m] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search(m).is_ok()
    }

    pub fn has_duplicates(&self) -> bool {
        self.terms.windows(2).any(|w| w[0] == w[1])
    }

    pub fn times(&self, sym: FadeSymbol) -> SymbolicEntry {
        SymbolicEntry {
            terms: self.terms.iter().map(|m| m.times(sym)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &SymbolicEntry) {
        self.terms.extend(other.terms.iter().cloned());
        self.terms.sort();
    }
}

impl fmt::Display for SymbolicEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Provenance of a symbolic matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixMeta {
    pub protocol: Protocol,
    pub network: Network,
    /// Source symbol index of every column.
    pub input_labels: Vec<usize>,
    /// Destination sample time of every row.
    pub output_labels: Vec<i64>,
}

/// Sparse channel matrix whose entries are [`SymbolicEntry`] values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), SymbolicEntry>,
    meta: MatrixMeta,
}

impl SymbolicMatrix {
    /// Builds a matrix; zero entries are discarded.
    pub fn new(
        entries: impl IntoIterator<Item = ((usize, usize), SymbolicEntry)>,
        meta: MatrixMeta,
    ) -> Self {
        let rows = meta.output_labels.len();
        let cols = meta.input_labels.len();
        let entries = entries
            .into_iter()
            .filter(|(_, e)| !e.is_zero())
            .inspect(|((r, c), _)| assert!(*r < rows && *c < cols, "entry ({r},{c}) out of range"))
            .collect();
        SymbolicMatrix {
            rows,
            cols,
            entries,
            meta,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn meta(&self) -> &MatrixMeta {
        &self.meta
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&SymbolicEntry> {
        self.entries.get(&(row, col))
    }

    pub fn entry_string(&self, row: usize, col: usize) -> String {
        self.get(row, col).map_or_else(|| "0".to_string(), |e| e.to_string())
    }

    /// Nonzero entries in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &SymbolicEntry)> {
        self.entries.iter().map(|(&(r, c), e)| (r, c, e))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Columns holding a nonzero entry in `row`.
    pub fn row_support(&self, row: usize) -> Vec<usize> {
        self.entries
            .range((row, 0)..(row + 1, 0))
            .map(|(&(_, c), _)| c)
            .collect()
    }

    /// `true` when every entry above the main diagonal is zero.
    pub fn is_lower_triangular(&self) -> bool {
        self.entries.keys().all(|&(r, c)| c <= r)
    }

    /// Main diagonal, zero entries included.
    pub fn diagonal(&self) -> Vec<SymbolicEntry> {
        (0..self.rows.min(self.cols))
            .map(|k| self.get(k, k).cloned().unwrap_or_default())
            .collect()
    }

    /// Copy of `self` keeping only the entries for which `keep` holds.
    pub fn filtered(&self, mut keep: impl FnMut(usize, usize, &SymbolicEntry) -> bool) -> SymbolicMatrix {
        SymbolicMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .filter(|(&(r, c), e)| keep(r, c, e))
                .map(|(k, e)| (*k, e.clone()))
                .collect(),
            meta: self.meta.clone(),
        }
    }

    /// Text dump: one row per line, entries separated by a single space.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.entry_string(r, c)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}
