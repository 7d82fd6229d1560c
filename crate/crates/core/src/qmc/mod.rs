//! Path-integral Monte Carlo for the chain through its classical 2D image.

mod lattice;
mod mapping;
mod sign;
mod stats;

pub use lattice::{
    acceptance_probability, default_thermalization, metropolis_run, ClassicalLattice2D,
};
pub use mapping::{critical_line_residual, map_parameters, MappingParameters};
pub use sign::{sign_reweight, SignedSample};
pub use stats::{ChainStats, StdErr, BLOCKS};

use crate::error::Result;
use crate::scalar::Real;
use crate::spin::Boundary;

/// Boundary along the chain used by [`tfim_qmc_magnetization`].
pub const TFIM_QMC_BOUNDARY: Boundary = Boundary::Periodic;

/// Classical order parameter of the mapped chain.
///
/// `sweeps` counts all sweeps; the first fifth thermalizes.
pub fn tfim_qmc_magnetization<T: Real>(
    n_x: usize,
    g: T,
    beta: T,
    n_y: usize,
    sweeps: usize,
    seed: u64,
) -> Result<ChainStats<T>> {
    tfim_qmc_magnetization_with(n_x, g, beta, n_y, sweeps, seed, TFIM_QMC_BOUNDARY)
}

/// [`tfim_qmc_magnetization`] with an explicit boundary along the chain.
pub fn tfim_qmc_magnetization_with<T: Real>(
    n_x: usize,
    g: T,
    beta: T,
    n_y: usize,
    sweeps: usize,
    seed: u64,
    boundary_x: Boundary,
) -> Result<ChainStats<T>> {
    let p = map_parameters(beta, g, n_y)?;
    let mut lattice = ClassicalLattice2D::from_mapping(n_x, &p, boundary_x)?;
    let therm = default_thermalization(sweeps);
    metropolis_run(
        &mut lattice,
        p.beta_cl,
        sweeps.saturating_sub(therm).max(1),
        therm,
        seed,
    )
}
