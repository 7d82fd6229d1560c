//! Eigensolvers: dense oracles, tridiagonal QL, power iteration and Lanczos.

mod dense;
mod ground;
mod krylov;
mod thermal;
mod tridiagonal;

pub use dense::{dense_eigh, dense_eigvalsh, unitary_evolution, HermitianEigen, DENSE_MAX_DIM};
pub use ground::{
    ground_state_vector, tfim_ground_state, tfim_ground_state_power, tfim_power_shift,
};
pub use krylov::{
    lanczos, lanczos_from, lanczos_tridiagonalize, power_method, power_method_from, random_start,
    EigenResult, KrylovBasis, LanczosCoefficients, SolverConfig,
};
pub use thermal::{thermal_expectation, THERMAL_MAX_SITES};
pub use tridiagonal::{
    tridiagonal_eigen, tridiagonal_eigenvalues, TridiagonalEigen, TridiagonalMatrix,
};
