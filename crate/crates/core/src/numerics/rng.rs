//! Reproducible random streams and a chunked Monte Carlo driver.
//!
//! Streams are ChaCha8 keyed by the seed, with the 64-bit stream id selecting
//! an independent keystream. Monte Carlo work is split into fixed-size chunks;
//! chunk `c` starts at word offset `c << 40` of its stream, so every chunk can
//! be generated on any thread without affecting the others. Chunk results are
//! combined by pairwise summation in chunk order, which makes estimates
//! bitwise identical for any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sum::{pairwise, pairwise_f64};
use crate::C64;

/// Samples per chunk.
pub const CHUNK: usize = 4096;

/// A deterministic random stream.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The stream positioned at the start of chunk `chunk`.
pub fn chunk_rng(seed: u64, stream: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = seeded_rng(seed, stream);
    rng.set_word_pos((chunk as u128) << 40);
    rng
}

/// Monte Carlo configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub stream: u64,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64, stream: u64) -> Self {
        Self {
            samples,
            seed,
            stream,
        }
    }

    /// Same seed and sample count on a different stream.
    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: C64,
    pub stderr: f64,
}

impl McEstimate {
    /// Standard error of the difference of two independent estimates.
    pub fn combined_stderr(&self, other: &McEstimate) -> f64 {
        self.stderr.hypot(other.stderr)
    }
}

fn chunk_sizes(samples: usize) -> Vec<usize> {
    let full = samples / CHUNK;
    let mut v = vec![CHUNK; full];
    if samples % CHUNK != 0 {
        v.push(samples % CHUNK);
    }
    v
}

/// Estimates `E[h]` for each of `dim` components of `draw`, which fills its
/// output slice from one random draw.
pub fn mc_means<F>(cfg: McConfig, dim: usize, draw: F) -> Vec<McEstimate>
where
    F: Fn(&mut ChaCha8Rng, &mut [C64]) + Sync,
{
    let sizes = chunk_sizes(cfg.samples);
    let parts: Vec<(Vec<C64>, Vec<f64>, Vec<Option<C64>>)> = sizes
        .par_iter()
        .enumerate()
        .map(|(c, &n)| {
            let mut rng = chunk_rng(cfg.seed, cfg.stream, c as u64);
            let mut buf = vec![C64::new(0.0, 0.0); dim];
            let mut vals: Vec<Vec<C64>> = vec![Vec::with_capacity(n); dim];
            for _ in 0..n {
                draw(&mut rng, &mut buf);
                for (v, b) in vals.iter_mut().zip(&buf) {
                    v.push(*b);
                }
            }
            let sums: Vec<C64> = vals.iter().map(|v| pairwise(v)).collect();
            let sq: Vec<f64> = vals
                .iter()
                .map(|v| pairwise_f64(&v.iter().map(|x| x.norm_sqr()).collect::<Vec<_>>()))
                .collect();
            let constant: Vec<Option<C64>> = vals
                .iter()
                .map(|v| v.iter().all(|x| *x == v[0]).then(|| v[0]))
                .collect();
            (sums, sq, constant)
        })
        .collect();
    let n = cfg.samples as f64;
    (0..dim)
        .map(|d| {
            // a constant integrand is reported exactly, with zero error
            if let Some(Some(c)) = parts.first().map(|p| p.2[d]) {
                if parts.iter().all(|p| p.2[d] == Some(c)) {
                    return McEstimate {
                        estimate: c,
                        stderr: 0.0,
                    };
                }
            }
            let s = pairwise(&parts.iter().map(|p| p.0[d]).collect::<Vec<_>>());
            let q = pairwise_f64(&parts.iter().map(|p| p.1[d]).collect::<Vec<_>>());
            let mean = s / n;
            let var = if cfg.samples > 1 {
                ((q - n * mean.norm_sqr()) / (n - 1.0)).max(0.0)
            } else {
                0.0
            };
            McEstimate {
                estimate: mean,
                stderr: (var / n).sqrt(),
            }
        })
        .collect()
}

/// Draws `count` values in parallel, returned in deterministic order.
pub fn mc_collect<T, F>(cfg: McConfig, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let sizes = chunk_sizes(cfg.samples);
    let parts: Vec<Vec<T>> = sizes
        .par_iter()
        .enumerate()
        .map(|(c, &n)| {
            let mut rng = chunk_rng(cfg.seed, cfg.stream, c as u64);
            (0..n).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_stream_same_draws() {
        let mut a = seeded_rng(11, 3);
        let mut b = seeded_rng(11, 3);
        for _ in 0..1000 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }

    #[test]
    fn chunking_is_thread_count_invariant() {
        let cfg = McConfig::new(20_000, 5, 1);
        let f = |r: &mut ChaCha8Rng, out: &mut [C64]| {
            out[0] = C64::new(r.random::<f64>(), 0.0);
        };
        let a = mc_means(cfg, 1, f);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| mc_means(cfg, 1, f));
        assert_eq!(a[0].estimate, b[0].estimate);
        assert_eq!(a[0].stderr, b[0].stderr);
    }
}
