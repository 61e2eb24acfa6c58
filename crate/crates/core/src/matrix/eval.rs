//! Numeric substitution of fade draws and band extraction.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use super::symbolic::{FadeSymbol, SymbolicMatrix};
use crate::fading::FadeDraw;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("symbol {0} has no value in a draw with {1} relays")]
    UnresolvedSymbol(String, usize),
}

fn resolve(sym: FadeSymbol, fades: &FadeDraw) -> Result<Complex64, EvalError> {
    let n = fades.n_relays();
    let unresolved = || EvalError::UnresolvedSymbol(sym.to_string(), n);
    match sym {
        FadeSymbol::G0 => Ok(fades.g0),
        FadeSymbol::G(i) => fades.g.get(i.wrapping_sub(1)).copied().ok_or_else(unresolved),
        FadeSymbol::H(i) => fades.h.get(i.wrapping_sub(1)).copied().ok_or_else(unresolved),
        FadeSymbol::GammaInter(i, j) => {
            if i == 0 || j == 0 || i > n || j > n {
                Err(unresolved())
            } else {
                Ok(fades.gamma_inter[(i - 1, j - 1)])
            }
        }
    }
}

/// Substitutes `fades` into every monomial and sums each entry.
pub fn evaluate(m: &SymbolicMatrix, fades: &FadeDraw) -> Result<DMatrix<Complex64>, EvalError> {
    CompiledMatrix::new(m).evaluate(fades)
}

/// Flattened form of a symbolic matrix for repeated evaluation in Monte Carlo
/// loops.
#[derive(Debug, Clone)]
pub struct CompiledMatrix {
    rows: usize,
    cols: usize,
    // (row, col, monomials as symbol lists)
    entries: Vec<(usize, usize, Vec<Vec<FadeSymbol>>)>,
}

impl CompiledMatrix {
    pub fn new(m: &SymbolicMatrix) -> Self {
        let entries = m
            .nonzeros()
            .map(|(r, c, e)| (r, c, e.terms().iter().map(|t| t.factors().to_vec()).collect()))
            .collect();
        CompiledMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn evaluate(&self, fades: &FadeDraw) -> Result<DMatrix<Complex64>, EvalError> {
        let mut out = DMatrix::from_element(self.rows, self.cols, Complex64::new(0.0, 0.0));
        for (r, c, terms) in &self.entries {
            let mut sum = Complex64::new(0.0, 0.0);
            for term in terms {
                let mut prod = Complex64::new(1.0, 0.0);
                for &sym in term {
                    prod *= resolve(sym, fades)?;
                }
                sum += prod;
            }
            out[(*r, *c)] = sum;
        }
        Ok(out)
    }
}

/// Keeps only the main diagonal.
pub fn extract_diag(m: &SymbolicMatrix) -> SymbolicMatrix {
    m.filtered(|r, c, _| r == c)
}

/// Keeps only the subdiagonal at `offset` (entries `(r, r - offset)`).
pub fn extract_band(m: &SymbolicMatrix, offset: usize) -> SymbolicMatrix {
    m.filtered(|r, c, _| r >= c && r - c == offset)
}

/// Nonzero subdiagonal closest to the main diagonal, or `None` when the matrix
/// has nothing below it.
pub fn first_subdiagonal(m: &SymbolicMatrix) -> Option<usize> {
    m.nonzeros().filter(|&(r, c, _)| r > c).map(|(r, c, _)| r - c).min()
}

/// Keeps only the first nonzero subdiagonal; zero matrix if there is none.
pub fn extract_subdiag(m: &SymbolicMatrix) -> SymbolicMatrix {
    match first_subdiagonal(m) {
        Some(offset) => extract_band(m, offset),
        None => m.filtered(|_, _, _| false),
    }
}

/// Keeps every entry strictly below the main diagonal.
pub fn extract_strict_lower(m: &SymbolicMatrix) -> SymbolicMatrix {
    m.filtered(|r, c, _| r > c)
}
