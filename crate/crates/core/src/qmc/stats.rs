use std::cmp::Ordering;

use crate::scalar::Real;

/// Number of blocks used for error bars.
pub const BLOCKS: usize = 32;

/// Block-averaged standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdErr<T> {
    pub abs_magnetization: T,
    pub energy_per_site: T,
    pub binder_cumulant: T,
}

/// Summary of one or more Metropolis chains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStats<T> {
    pub samples: usize,
    pub mean_abs_magnetization: T,
    pub mean_energy_per_site: T,
    /// `1 − ⟨m⁴⟩ / (3⟨m²⟩²)`.
    pub binder_cumulant: T,
    pub stderr: StdErr<T>,
    pub acceptance_rate: T,
    chains: Vec<RawSummary<T>>,
}

/// Per-chain sums and block means.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RawSummary<T> {
    samples: usize,
    sum_abs_m: T,
    sum_m2: T,
    sum_m4: T,
    sum_e: T,
    accepted: u64,
    proposed: u64,
    blocks: Vec<[T; 4]>,
}

impl<T: Real> RawSummary<T> {
    fn key(&self) -> Vec<f64> {
        let mut k = vec![
            self.samples as f64,
            self.sum_abs_m.as_f64(),
            self.sum_m2.as_f64(),
            self.sum_m4.as_f64(),
            self.sum_e.as_f64(),
            self.accepted as f64,
            self.proposed as f64,
        ];
        k.extend(
            self.blocks
                .iter()
                .flat_map(|b| b.iter().map(|x| x.as_f64())),
        );
        k
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.iter()
            .zip(&b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| a.len().cmp(&b.len()))
    }
}

/// Time series collected by one chain.
pub(crate) struct RawChain<T> {
    m: Vec<T>,
    e: Vec<T>,
    pub(crate) accepted: u64,
    pub(crate) proposed: u64,
}

impl<T: Real> RawChain<T> {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            m: Vec::with_capacity(n),
            e: Vec::with_capacity(n),
            accepted: 0,
            proposed: 0,
        }
    }

    pub(crate) fn push(&mut self, m: T, e: T) {
        self.m.push(m);
        self.e.push(e);
    }

    pub(crate) fn finish(self) -> RawSummary<T> {
        let n = self.m.len();
        let nb = BLOCKS.min(n);
        let mut blocks = Vec::with_capacity(nb);
        for k in 0..nb {
            let (lo, hi) = (k * n / nb, (k + 1) * n / nb);
            let len = T::from_count(hi - lo);
            let mut acc = [T::zero(); 4];
            for i in lo..hi {
                let m = self.m[i];
                let m2 = m * m;
                acc[0] += m.abs();
                acc[1] += self.e[i];
                acc[2] += m2;
                acc[3] += m2 * m2;
            }
            blocks.push(acc.map(|x| x / len));
        }
        let m2: Vec<T> = self.m.iter().map(|m| *m * *m).collect();
        RawSummary {
            samples: n,
            sum_abs_m: self.m.iter().map(|m| m.abs()).sum(),
            sum_m2: m2.iter().copied().sum(),
            sum_m4: m2.iter().map(|x| *x * *x).sum(),
            sum_e: self.e.iter().copied().sum(),
            accepted: self.accepted,
            proposed: self.proposed,
            blocks,
        }
    }
}

fn binder<T: Real>(m2: T, m4: T) -> T {
    if m2 > T::zero() {
        T::one() - m4 / (T::lit(3.0) * m2 * m2)
    } else {
        T::zero()
    }
}

fn stderr_of<T: Real>(values: &[T]) -> T {
    let nb = values.len();
    if nb < 2 {
        return T::zero();
    }
    let n = T::from_count(nb);
    let mean = values.iter().copied().sum::<T>() / n;
    let var = values.iter().map(|v| (*v - mean) * (*v - mean)).sum::<T>() / (n - T::one());
    (var / n).sqrt()
}

impl<T: Real> ChainStats<T> {
    pub(crate) fn from_raw(mut chains: Vec<RawSummary<T>>) -> Self {
        chains.sort_by(|a, b| a.canonical_cmp(b));
        let samples: usize = chains.iter().map(|c| c.samples).sum();
        let n = T::from_count(samples.max(1));
        let sum = |f: fn(&RawSummary<T>) -> T| chains.iter().map(f).sum::<T>() / n;
        let mean_abs_magnetization = sum(|c| c.sum_abs_m);
        let mean_energy_per_site = sum(|c| c.sum_e);
        let m2 = sum(|c| c.sum_m2);
        let m4 = sum(|c| c.sum_m4);
        let blocks: Vec<[T; 4]> = chains
            .iter()
            .flat_map(|c| c.blocks.iter().copied())
            .collect();
        let column = |k: usize| blocks.iter().map(|b| b[k]).collect::<Vec<T>>();
        let block_binder: Vec<T> = blocks.iter().map(|b| binder(b[2], b[3])).collect();
        let accepted: u64 = chains.iter().map(|c| c.accepted).sum();
        let proposed: u64 = chains.iter().map(|c| c.proposed).sum();
        Self {
            samples,
            mean_abs_magnetization,
            mean_energy_per_site,
            binder_cumulant: binder(m2, m4),
            stderr: StdErr {
                abs_magnetization: stderr_of(&column(0)),
                energy_per_site: stderr_of(&column(1)),
                binder_cumulant: stderr_of(&block_binder),
            },
            acceptance_rate: if proposed == 0 {
                T::zero()
            } else {
                T::lit(accepted as f64 / proposed as f64)
            },
            chains,
        }
    }

    /// Pools independent chains. The result does not depend on order or grouping.
    pub fn merge(&self, other: &Self) -> Self {
        Self::merge_all([self, other])
    }

    pub fn merge_all<'a>(stats: impl IntoIterator<Item = &'a Self>) -> Self {
        Self::from_raw(
            stats
                .into_iter()
                .flat_map(|s| s.chains.iter().cloned())
                .collect(),
        )
    }

    /// `⟨m²⟩` over all samples.
    pub fn mean_magnetization_sq(&self) -> T {
        let n = T::from_count(self.samples.max(1));
        self.chains.iter().map(|c| c.sum_m2).sum::<T>() / n
    }

    /// Number of independent chains pooled into these statistics.
    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }
}
