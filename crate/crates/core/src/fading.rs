//! Rayleigh fade sampling.
//!
//! Every trial gets its own ChaCha stream selected by `trial_index`, so a Monte
//! Carlo run produces the same draws regardless of how trials are scheduled
//! across threads.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::model::NetworkConfig;

/// One realization of every fade coefficient in the network.
#[derive(Debug, Clone, PartialEq)]
pub struct FadeDraw {
    pub g0: Complex64,
    /// Source to relay `i` at index `i - 1`.
    pub g: Vec<Complex64>,
    /// Relay `i` to destination at index `i - 1`.
    pub h: Vec<Complex64>,
    /// Relay `i` to relay `j` at `(i - 1, j - 1)`; all zero for isolated relays.
    pub gamma_inter: DMatrix<Complex64>,
}

impl FadeDraw {
    /// A draw with every coefficient set to `value` (diagonal of `gamma_inter`
    /// stays zero).
    pub fn constant(n_relays: usize, value: Complex64) -> Self {
        let gamma_inter = DMatrix::from_fn(n_relays, n_relays, |i, j| {
            if i == j {
                Complex64::new(0.0, 0.0)
            } else {
                value
            }
        });
        FadeDraw {
            g0: value,
            g: vec![value; n_relays],
            h: vec![value; n_relays],
            gamma_inter,
        }
    }

    pub fn n_relays(&self) -> usize {
        self.g.len()
    }

    /// Product fade `h_i g_i` of relay `i` (1-based).
    pub fn gamma(&self, i: usize) -> Complex64 {
        self.h[i - 1] * self.g[i - 1]
    }
}

fn cn01(rng: &mut ChaCha8Rng) -> Complex64 {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// Draws all fades for trial `trial_index` of the run keyed by `seed`.
///
/// Coefficients are CN(0, 1): independent real and imaginary parts of variance
/// 1/2. The draw order is fixed (`g0`, `g`, `h`, then `gamma_inter` row-major)
/// and `gamma_inter` is always consumed from the stream, so toggling relay
/// isolation leaves the other coefficients unchanged.
pub fn sample_fades(cfg: &NetworkConfig, seed: u64, trial_index: u64) -> FadeDraw {
    let n = cfg.n_relays;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);

    let g0 = cn01(&mut rng);
    let g: Vec<Complex64> = (0..n).map(|_| cn01(&mut rng)).collect();
    let h: Vec<Complex64> = (0..n).map(|_| cn01(&mut rng)).collect();
    let mut gamma_inter = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let c = cn01(&mut rng);
            if !cfg.relay_isolated {
                gamma_inter[(i, j)] = c;
            }
        }
    }
    FadeDraw {
        g0,
        g,
        h,
        gamma_inter,
    }
}
