//! Spin-1/2 chains: bit-encoded configurations, the transverse-field Ising
//! Hamiltonian applied matrix-free, its dense form, and spin observables.
//!
//! Bit `i` of a basis index is site `i`; a set bit is spin up (σ_z = +1).
//! Flipping site `i` is `index ^ (1 << i)`, and the Ising energy of a
//! configuration is a popcount over `index ^ (index >> 1)`.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, LinearOperator};
use crate::rng::random_amplitudes;
use crate::scalar::{self, re, Real, C};

/// Largest chain the matrix-free code accepts (2^30 amplitudes).
pub const MAX_SITES: usize = 30;

/// Largest chain [`dense_tfim`] will materialize.
pub const DENSE_MAX_SITES: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

/// A computational basis state of `n_sites` spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinConfiguration {
    bits: u64,
    n_sites: usize,
}

impl SpinConfiguration {
    pub fn new(bits: u64, n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites > 63 {
            return Err(Error::InvalidParameter {
                name: "n_sites",
                reason: format!("must be in 1..=63, got {n_sites}"),
            });
        }
        if bits >> n_sites != 0 {
            return Err(Error::InvalidParameter {
                name: "bits",
                reason: format!("{bits:#b} has bits above site {}", n_sites - 1),
            });
        }
        Ok(Self { bits, n_sites })
    }

    pub fn all_up(n_sites: usize) -> Result<Self> {
        Self::new(low_mask(n_sites), n_sites)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn n_sites(self) -> usize {
        self.n_sites
    }

    /// σ_z eigenvalue at `site`: +1 for up, −1 for down.
    #[inline]
    pub fn spin(self, site: usize) -> i32 {
        if (self.bits >> site) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn flipped(self, site: usize) -> Self {
        Self {
            bits: self.bits ^ (1 << site),
            n_sites: self.n_sites,
        }
    }

    /// `Σ_i σ_z^(i)`.
    pub fn total_sz(self) -> i32 {
        2 * self.bits.count_ones() as i32 - self.n_sites as i32
    }
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `H = g Σ_i σ_x^(i) − Σ_⟨ij⟩ σ_z^(i) σ_z^(j)` on a chain.
///
/// Open chains have the `N − 1` nearest-neighbour bonds; periodic chains add
/// the bond `(N − 1, 0)`. For `N = 2` periodic that bond repeats `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfimHamiltonian<T> {
    n_sites: usize,
    g: T,
    boundary: Boundary,
}

impl<T: Real> TfimHamiltonian<T> {
    pub fn new(n_sites: usize, g: T, boundary: Boundary) -> Result<Self> {
        if !(2..=MAX_SITES).contains(&n_sites) {
            return Err(Error::InvalidParameter {
                name: "n_sites",
                reason: format!("must be in 2..={MAX_SITES}, got {n_sites}"),
            });
        }
        if !g.is_finite() {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: "must be finite".into(),
            });
        }
        Ok(Self {
            n_sites,
            g,
            boundary,
        })
    }

    /// Open chain.
    pub fn open(n_sites: usize, g: T) -> Result<Self> {
        Self::new(n_sites, g, Boundary::Open)
    }

    #[inline]
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    #[inline]
    pub fn g(&self) -> T {
        self.g
    }

    #[inline]
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn bond_count(&self) -> usize {
        match self.boundary {
            Boundary::Open => self.n_sites - 1,
            Boundary::Periodic => self.n_sites,
        }
    }

    /// Nearest-neighbour pairs, in site order.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut b: Vec<_> = (0..self.n_sites - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            b.push((self.n_sites - 1, 0));
        }
        b
    }

    /// Classical energy `−Σ s_i s_j` of basis state `index`.
    #[inline]
    pub fn diagonal(&self, index: usize) -> T {
        let s = index as u64;
        let n = self.n_sites;
        let mut broken = ((s ^ (s >> 1)) & low_mask(n - 1)).count_ones() as usize;
        if self.boundary == Boundary::Periodic {
            broken += (((s >> (n - 1)) ^ s) & 1) as usize;
        }
        T::from_count(2 * broken) - T::from_count(self.bond_count())
    }

    /// Upper bound on the spectral radius, `N|g| + #bonds`.
    pub fn norm_bound(&self) -> T {
        T::from_count(self.n_sites) * self.g.abs() + T::from_count(self.bond_count())
    }

    fn apply_kernel<K: Tally>(&self, x: &[C<T>], y: &mut [C<T>], tally: &mut K) {
        let g = self.g;
        let n = self.n_sites;
        for (s, ys) in y.iter_mut().enumerate() {
            let mut acc = x[s] * self.diagonal(s);
            let mut flips = re(T::zero());
            for i in 0..n {
                flips += x[s ^ (1 << i)];
            }
            acc += flips * g;
            tally.tick(n + 1);
            *ys = acc;
        }
    }

    /// `H·v` together with the number of amplitude reads performed.
    ///
    /// Each basis state reads its own amplitude and its `N` single-flip
    /// neighbours, so the count is `(N + 1)·2^N`.
    pub fn apply_counted(&self, v: &StateVector<T>) -> Result<(StateVector<T>, usize)> {
        self.check(v)?;
        let mut out = vec![re(T::zero()); self.dim()];
        let mut count = 0usize;
        self.apply_kernel(&v.amplitudes, &mut out, &mut count);
        Ok((StateVector::from_parts(self.n_sites, out), count))
    }

    fn check(&self, v: &StateVector<T>) -> Result<()> {
        if v.n_sites != self.n_sites {
            return Err(Error::DimensionMismatch {
                expected: self.n_sites,
                actual: v.n_sites,
            });
        }
        Ok(())
    }
}

trait Tally {
    fn tick(&mut self, n: usize);
}

impl Tally for () {
    #[inline(always)]
    fn tick(&mut self, _: usize) {}
}

impl Tally for usize {
    #[inline(always)]
    fn tick(&mut self, n: usize) {
        *self += n;
    }
}

impl<T: Real> LinearOperator<T> for TfimHamiltonian<T> {
    fn dim(&self) -> usize {
        1 << self.n_sites
    }

    fn apply(&self, input: &[C<T>], output: &mut [C<T>]) {
        self.apply_kernel(input, output, &mut ());
    }
}

/// Amplitudes over the `2^N` spin configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<C<T>>,
    n_sites: usize,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes without normalizing them.
    pub fn new(n_sites: usize, amplitudes: Vec<C<T>>) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::InvalidParameter {
                name: "n_sites",
                reason: format!("must be in 1..={MAX_SITES}, got {n_sites}"),
            });
        }
        if amplitudes.len() != 1 << n_sites {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_sites,
                actual: amplitudes.len(),
            });
        }
        Ok(Self {
            amplitudes,
            n_sites,
        })
    }

    /// Infers `n_sites` from a power-of-two length.
    pub fn from_amplitudes(amplitudes: Vec<C<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("length {len} is not a power of two ≥ 2"),
            });
        }
        Self::new(len.trailing_zeros() as usize, amplitudes)
    }

    pub(crate) fn from_parts(n_sites: usize, amplitudes: Vec<C<T>>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_sites);
        Self {
            amplitudes,
            n_sites,
        }
    }

    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        let mut amps = vec![re(T::zero()); 1usize.checked_shl(n_sites as u32).unwrap_or(0)];
        if index >= amps.len() {
            return Err(Error::InvalidParameter {
                name: "index",
                reason: format!("{index} out of range for {n_sites} sites"),
            });
        }
        amps[index] = re(T::one());
        Self::new(n_sites, amps)
    }

    pub fn from_configuration(cfg: SpinConfiguration) -> Result<Self> {
        Self::basis(cfg.n_sites(), cfg.bits() as usize)
    }

    /// Normalized pseudo-random state determined by `seed`.
    pub fn random(n_sites: usize, seed: u64) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::InvalidParameter {
                name: "n_sites",
                reason: format!("must be in 1..={MAX_SITES}, got {n_sites}"),
            });
        }
        let mut v = Self::from_parts(n_sites, random_amplitudes(1 << n_sites, seed));
        v.normalize()?;
        Ok(v)
    }

    #[inline]
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        scalar::norm(&self.amplitudes)
    }

    pub fn norm_sqr(&self) -> T {
        scalar::norm_sqr(&self.amplitudes)
    }

    /// Rescales to unit norm.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == T::zero() || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        scalar::scale(T::one() / n, &mut self.amplitudes);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C<T> {
        scalar::inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// `‖self − other‖₂`.
    pub fn distance(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let n2 = self.norm_sqr();
        if (n2 - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::NotNormalized {
                norm_sqr: n2.as_f64(),
            });
        }
        Ok(())
    }
}

/// `H·v` without normalization.
pub fn apply_tfim<T: Real>(h: &TfimHamiltonian<T>, v: &StateVector<T>) -> Result<StateVector<T>> {
    h.check(v)?;
    let mut out = vec![re(T::zero()); h.dim()];
    h.apply(&v.amplitudes, &mut out);
    Ok(StateVector::from_parts(h.n_sites, out))
}

/// The full `2^N × 2^N` matrix of `h`, for oracles and thermal averages.
pub fn dense_tfim<T: Real>(h: &TfimHamiltonian<T>) -> Result<ComplexMatrix<T>> {
    if h.n_sites > DENSE_MAX_SITES {
        return Err(Error::SizeGuard {
            what: "n_sites",
            value: h.n_sites,
            limit: DENSE_MAX_SITES,
        });
    }
    let dim = h.dim();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for s in 0..dim {
        m[(s, s)] = re(h.diagonal(s));
        for i in 0..h.n_sites {
            m[(s ^ (1 << i), s)] += re(h.g);
        }
    }
    Ok(m)
}

/// Global spin-flip symmetry sector, `P = Π_i σ_x^(i)` with eigenvalue ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

/// `(1 ± P)/2 · v`; commutes with the TFIM for either boundary.
pub fn project_parity<T: Real>(v: &StateVector<T>, parity: Parity) -> StateVector<T> {
    let mask = (1usize << v.n_sites) - 1;
    let half = T::lit(0.5);
    let amps = (0..v.dim())
        .map(|s| {
            let partner = v.amplitudes[s ^ mask];
            let mixed = match parity {
                Parity::Even => v.amplitudes[s] + partner,
                Parity::Odd => v.amplitudes[s] - partner,
            };
            mixed * half
        })
        .collect();
    StateVector::from_parts(v.n_sites, amps)
}

/// Observable whose expectation value [`expectation`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservableSpec {
    /// `⟨(Σ_i σ_z^(i) / N)²⟩`.
    MagnetizationZSq,
    /// `⟨Σ_i σ_z^(i)⟩ / N`.
    MagnetizationZ,
    /// `⟨Σ_i σ_x^(i)⟩ / N`.
    TransverseMagnetization,
    /// `⟨σ_z^(i) σ_z^(j)⟩`.
    ZzCorrelation(usize, usize),
    /// `⟨H⟩`; needs the Hamiltonian.
    Energy,
}

/// `⟨v|O|v⟩` for a normalized state.
pub fn expectation<T: Real>(
    spec: ObservableSpec,
    v: &StateVector<T>,
    h: Option<&TfimHamiltonian<T>>,
) -> Result<T> {
    v.check_normalized()?;
    let n = v.n_sites;
    let amps = &v.amplitudes;
    let inv_n = T::one() / T::from_count(n);
    let value = match spec {
        ObservableSpec::MagnetizationZ => amps
            .iter()
            .enumerate()
            .map(|(s, a)| a.norm_sqr() * total_sz::<T>(s, n) * inv_n)
            .sum(),
        ObservableSpec::MagnetizationZSq => amps
            .iter()
            .enumerate()
            .map(|(s, a)| {
                let m = total_sz::<T>(s, n) * inv_n;
                a.norm_sqr() * m * m
            })
            .sum(),
        ObservableSpec::TransverseMagnetization => {
            let mut acc = T::zero();
            for (s, a) in amps.iter().enumerate() {
                for i in 0..n {
                    acc += (a.conj() * amps[s ^ (1 << i)]).re;
                }
            }
            acc * inv_n
        }
        ObservableSpec::ZzCorrelation(i, j) => {
            for site in [i, j] {
                if site >= n {
                    return Err(Error::InvalidParameter {
                        name: "site",
                        reason: format!("{site} out of range for {n} sites"),
                    });
                }
            }
            amps.iter()
                .enumerate()
                .map(|(s, a)| {
                    let same = ((s >> i) & 1) == ((s >> j) & 1);
                    if same {
                        a.norm_sqr()
                    } else {
                        -a.norm_sqr()
                    }
                })
                .sum()
        }
        ObservableSpec::Energy => {
            let h = h.ok_or(Error::InvalidParameter {
                name: "h",
                reason: "energy expectation needs a Hamiltonian".into(),
            })?;
            let hv = apply_tfim(h, v)?;
            v.inner(&hv).re
        }
    };
    Ok(value)
}

/// `sqrt(⟨(Σσ_z/N)²⟩)`, the finite-size order parameter.
///
/// The exact ground state of a finite chain is spin-flip symmetric, so
/// `⟨σ_z⟩ = 0`; the root of the squared magnetization stays informative.
pub fn spontaneous_magnetization<T: Real>(v: &StateVector<T>) -> Result<T> {
    Ok(expectation(ObservableSpec::MagnetizationZSq, v, None)?.sqrt())
}

#[inline]
fn total_sz<T: Real>(s: usize, n: usize) -> T {
    T::lit((2 * (s as u64).count_ones() as i64 - n as i64) as f64)
}
