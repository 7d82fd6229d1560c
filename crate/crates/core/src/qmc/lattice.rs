use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::scalar::Real;
use crate::spin::Boundary;

use super::mapping::MappingParameters;
use super::stats::{ChainStats, RawChain};

/// Classical Ising spins on an `n_x × n_y` grid.
///
/// Site `(x, y)` lives at index `y·n_x + x`. The `y` direction is always
/// periodic; every site carries one bond to its `+x` and one to its `+y`
/// neighbour when those exist, so on a periodic side of length 2 each pair
/// is coupled twice.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalLattice2D<T> {
    n_x: usize,
    n_y: usize,
    spins: Vec<i8>,
    coupling_x: T,
    coupling_y: T,
    boundary_x: Boundary,
}

impl<T: Real> ClassicalLattice2D<T> {
    /// All spins up.
    pub fn new(
        n_x: usize,
        n_y: usize,
        coupling_x: T,
        coupling_y: T,
        boundary_x: Boundary,
    ) -> Result<Self> {
        if n_x == 0 || n_y == 0 {
            return Err(Error::InvalidParameter {
                name: "lattice",
                reason: format!("empty lattice {n_x}x{n_y}"),
            });
        }
        if !coupling_x.is_finite() || !coupling_y.is_finite() {
            return Err(Error::InvalidParameter {
                name: "coupling",
                reason: "couplings must be finite".into(),
            });
        }
        Ok(Self {
            n_x,
            n_y,
            spins: vec![1; n_x * n_y],
            coupling_x,
            coupling_y,
            boundary_x,
        })
    }

    /// Square lattice with unit couplings, periodic in both directions.
    pub fn isotropic(n: usize) -> Result<Self> {
        Self::new(n, n, T::one(), T::one(), Boundary::Periodic)
    }

    /// Lattice for the mapped chain: unit coupling along `x`, `γ/β_cl` along `y`.
    pub fn from_mapping(
        n_x: usize,
        p: &MappingParameters<T>,
        boundary_x: Boundary,
    ) -> Result<Self> {
        Self::new(n_x, p.n_y, T::one(), p.coupling_y(), boundary_x)
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn n_sites(&self) -> usize {
        self.spins.len()
    }

    pub fn coupling_x(&self) -> T {
        self.coupling_x
    }

    pub fn coupling_y(&self) -> T {
        self.coupling_y
    }

    pub fn boundary_x(&self) -> Boundary {
        self.boundary_x
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn spin(&self, x: usize, y: usize) -> i8 {
        self.spins[y * self.n_x + x]
    }

    /// Replaces the configuration; entries must be ±1.
    pub fn set_spins(&mut self, spins: &[i8]) -> Result<()> {
        if spins.len() != self.spins.len() {
            return Err(Error::DimensionMismatch {
                expected: self.spins.len(),
                actual: spins.len(),
            });
        }
        if let Some(bad) = spins.iter().find(|s| s.abs() != 1) {
            return Err(Error::InvalidParameter {
                name: "spins",
                reason: format!("entry {bad} is not ±1"),
            });
        }
        self.spins.copy_from_slice(spins);
        Ok(())
    }

    /// Sets the configuration from the bits of `code`, bit `i` up meaning `+1`.
    pub fn set_from_bits(&mut self, code: u64) {
        for (i, s) in self.spins.iter_mut().enumerate() {
            *s = if (code >> i) & 1 == 1 { 1 } else { -1 };
        }
    }

    fn periodic_x(&self) -> bool {
        self.boundary_x == Boundary::Periodic
    }

    /// Sum of `s_i s_j` over `x` bonds and over `y` bonds.
    fn bond_sums(&self) -> (i64, i64) {
        let (nx, ny) = (self.n_x, self.n_y);
        let mut sx = 0i64;
        let mut sy = 0i64;
        for y in 0..ny {
            let up = ((y + 1) % ny) * nx;
            for x in 0..nx {
                let s = self.spins[y * nx + x] as i64;
                if x + 1 < nx {
                    sx += s * self.spins[y * nx + x + 1] as i64;
                } else if self.periodic_x() {
                    sx += s * self.spins[y * nx] as i64;
                }
                sy += s * self.spins[up + x] as i64;
            }
        }
        (sx, sy)
    }

    /// `H_cl = −Σ J_x s s' − Σ J_y s s'`.
    pub fn energy(&self) -> T {
        let (sx, sy) = self.bond_sums();
        -(self.coupling_x * T::lit(sx as f64) + self.coupling_y * T::lit(sy as f64))
    }

    pub fn magnetization(&self) -> T {
        let total: i64 = self.spins.iter().map(|&s| s as i64).sum();
        T::lit(total as f64) / T::from_count(self.n_sites())
    }

    /// `s_i` times its neighbour sums along `x` and along `y`.
    fn local_fields(&self, site: usize) -> (i32, i32) {
        let (nx, ny) = (self.n_x, self.n_y);
        let (x, y) = (site % nx, site / nx);
        let s = self.spins[site] as i32;
        let mut hx = 0i32;
        if x + 1 < nx {
            hx += self.spins[site + 1] as i32;
        } else if self.periodic_x() {
            hx += self.spins[y * nx] as i32;
        }
        if x > 0 {
            hx += self.spins[site - 1] as i32;
        } else if self.periodic_x() {
            hx += self.spins[y * nx + nx - 1] as i32;
        }
        let hy = self.spins[((y + 1) % ny) * nx + x] as i32
            + self.spins[((y + ny - 1) % ny) * nx + x] as i32;
        (s * hx, s * hy)
    }

    /// Energy change from flipping `site`.
    pub fn delta_energy(&self, site: usize) -> T {
        let (a, b) = self.local_fields(site);
        T::lit(2.0) * (self.coupling_x * T::lit(a as f64) + self.coupling_y * T::lit(b as f64))
    }
}

/// Metropolis acceptance `min(1, e^{−β ΔE})`.
pub fn acceptance_probability<T: Real>(beta_cl: T, delta_e: T) -> T {
    let x = -beta_cl * delta_e;
    if x >= T::zero() {
        T::one()
    } else {
        x.exp()
    }
}

/// Single-spin-flip Metropolis chain.
///
/// Runs `thermalization` discarded sweeps then `sweeps` measured sweeps,
/// one measurement per sweep. The lattice keeps the final configuration.
pub fn metropolis_run<T: Real>(
    lattice: &mut ClassicalLattice2D<T>,
    beta_cl: T,
    sweeps: usize,
    thermalization: usize,
    seed: u64,
) -> Result<ChainStats<T>> {
    if sweeps == 0 {
        return Err(Error::InvalidParameter {
            name: "sweeps",
            reason: "must be at least 1".into(),
        });
    }
    if !(beta_cl >= T::zero()) || !beta_cl.is_finite() {
        return Err(Error::InvalidParameter {
            name: "beta_cl",
            reason: format!("must be finite and non-negative, got {beta_cl}"),
        });
    }
    let n = lattice.n_sites();
    // Neighbour sums along each axis take values in −2..=2.
    let mut table = [[T::one(); 5]; 5];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, p) in row.iter_mut().enumerate() {
            let de = T::lit(2.0)
                * (lattice.coupling_x * T::lit(a as f64 - 2.0)
                    + lattice.coupling_y * T::lit(b as f64 - 2.0));
            *p = acceptance_probability(beta_cl, de);
        }
    }
    let mut rng = seeded(seed);
    let mut total_m: i64 = lattice.spins.iter().map(|&s| s as i64).sum();
    let (mut sx, mut sy) = lattice.bond_sums();
    let inv_n = T::one() / T::from_count(n);
    let mut raw = RawChain::with_capacity(sweeps);
    let mut accepted: u64 = 0;
    for sweep in 0..thermalization + sweeps {
        let measuring = sweep >= thermalization;
        for _ in 0..n {
            let site = rng.random_range(0..n);
            let (a, b) = lattice.local_fields(site);
            let p = table[(a + 2) as usize][(b + 2) as usize];
            let accept = p >= T::one() || T::lit(rng.random::<f64>()) < p;
            if accept {
                let s = lattice.spins[site];
                lattice.spins[site] = -s;
                total_m -= 2 * s as i64;
                sx -= 2 * a as i64;
                sy -= 2 * b as i64;
                if measuring {
                    accepted += 1;
                }
            }
        }
        if measuring {
            let m = T::lit(total_m as f64) * inv_n;
            let e = -(lattice.coupling_x * T::lit(sx as f64)
                + lattice.coupling_y * T::lit(sy as f64))
                * inv_n;
            raw.push(m, e);
        }
    }
    raw.accepted = accepted;
    raw.proposed = (sweeps * n) as u64;
    Ok(ChainStats::from_raw(vec![raw.finish()]))
}

/// Default discarded sweeps for a run of `total` sweeps.
pub fn default_thermalization(total: usize) -> usize {
    total / 5
}
