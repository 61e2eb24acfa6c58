use nalgebra::DMatrix;
use num_complex::Complex64;

use super::InfoError;

/// `log2 det(I + rho H H^H)` in bits.
///
/// The Gram matrix is formed on the smaller side of `H` and factored by an
/// in-place Cholesky decomposition; the determinant is accumulated as a sum of
/// logarithms of the pivots so large `rho` cannot overflow it.
pub fn mutual_info(h: &DMatrix<Complex64>, rho: f64) -> Result<f64, InfoError> {
    check_snr(rho)?;
    log_det_bits(&gram(h), rho)
}

/// [`mutual_info`] at several SNRs, sharing the Gram matrix.
pub fn mutual_info_sweep(h: &DMatrix<Complex64>, rhos: &[f64]) -> Result<Vec<f64>, InfoError> {
    for &rho in rhos {
        check_snr(rho)?;
    }
    let g = gram(h);
    rhos.iter().map(|&rho| log_det_bits(&g, rho)).collect()
}

fn check_snr(rho: f64) -> Result<(), InfoError> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(InfoError::InvalidSnr(rho))
    }
}

/// `H H^H` or `H^H H`, whichever is smaller, skipping zero entries (channel
/// matrices are sparse and lower triangular).
fn gram(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let wide = h.nrows() <= h.ncols();
    let (n, len) = if wide { (h.nrows(), h.ncols()) } else { (h.ncols(), h.nrows()) };
    // vectors u_i with G_ij = sum_k u_i[k] conj(u_j[k])
    let vectors: Vec<Vec<(usize, Complex64)>> = (0..n)
        .map(|i| {
            (0..len)
                .filter_map(|k| {
                    let v = if wide { h[(i, k)] } else { h[(k, i)].conj() };
                    (v != zero).then_some((k, v))
                })
                .collect()
        })
        .collect();
    let mut g = DMatrix::from_element(n, n, zero);
    let mut dense = vec![zero; len];
    for i in 0..n {
        for &(k, v) in &vectors[i] {
            dense[k] = v;
        }
        for j in 0..=i {
            let s: Complex64 = vectors[j].iter().map(|&(k, v)| dense[k] * v.conj()).sum();
            g[(i, j)] = s;
            g[(j, i)] = s.conj();
        }
        for &(k, _) in &vectors[i] {
            dense[k] = zero;
        }
    }
    g
}

fn log_det_bits(gram: &DMatrix<Complex64>, rho: f64) -> Result<f64, InfoError> {
    let n = gram.nrows();
    // row-major lower triangle of I + rho G, factored in place
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..=i {
            a[i * n + k] = gram[(i, k)] * rho;
        }
        a[i * n + i] += 1.0;
    }

    let mut log_det = 0.0;
    for j in 0..n {
        let (head, tail) = a.split_at_mut((j + 1) * n);
        let row_j = &mut head[j * n..];
        let d = row_j[j].re - row_j[..j].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if !(d > 0.0) || !d.is_finite() {
            return Err(InfoError::NonFinite);
        }
        log_det += d.ln();
        let pivot = d.sqrt();
        row_j[j] = Complex64::new(pivot, 0.0);
        let inv = 1.0 / pivot;
        let row_j = &head[j * n..j * n + j];
        for row_i in tail.chunks_exact_mut(n) {
            let dot: Complex64 = row_i[..j].iter().zip(row_j).map(|(x, y)| x * y.conj()).sum();
            row_i[j] = (row_i[j] - dot) * inv;
        }
    }
    let bits = log_det / std::f64::consts::LN_2;
    if !bits.is_finite() {
        return Err(InfoError::NonFinite);
    }
    Ok(bits.max(0.0))
}
