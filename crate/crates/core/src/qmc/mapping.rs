use crate::error::{Error, Result};
use crate::scalar::Real;

/// Coefficients of the Trotter mapping of the chain onto a classical 2D lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingParameters<T> {
    pub beta: T,
    pub n_y: usize,
    pub g: T,
    /// `β g / N_y`.
    pub a: T,
    /// `−½ ln tanh a`.
    pub gamma: T,
    /// `sqrt(sinh a cosh a)`.
    pub lambda_factor: T,
    /// `β / N_y`.
    pub beta_cl: T,
}

impl<T: Real> MappingParameters<T> {
    /// Boltzmann-exponent coupling along the Trotter direction.
    pub fn k_y(&self) -> T {
        self.gamma
    }

    /// Boltzmann-exponent coupling along the chain.
    pub fn k_x(&self) -> T {
        self.beta_cl
    }

    /// Trotter-direction coupling in units where the chain coupling is 1.
    pub fn coupling_y(&self) -> T {
        self.gamma / self.beta_cl
    }

    /// `N·N_y·ln Λ`, the logarithm of the partition-function prefactor.
    pub fn log_prefactor(&self, n_x: usize) -> T {
        T::from_count(n_x * self.n_y) * self.lambda_factor.ln()
    }
}

pub fn map_parameters<T: Real>(beta: T, g: T, n_y: usize) -> Result<MappingParameters<T>> {
    if !(beta > T::zero()) || !beta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must be positive, got {beta}"),
        });
    }
    if !(g > T::zero()) || !g.is_finite() {
        return Err(Error::InvalidParameter {
            name: "g",
            reason: format!("must be positive, got {g}"),
        });
    }
    if n_y < 2 {
        return Err(Error::InvalidParameter {
            name: "n_y",
            reason: format!("needs at least 2 Trotter slices, got {n_y}"),
        });
    }
    let ny = T::from_count(n_y);
    let a = beta * g / ny;
    // −½ ln tanh a = atanh(e^{−2a}), without cancellation for large a.
    let gamma = (-T::lit(2.0) * a).exp().atanh();
    let lambda_factor = (a.sinh() * a.cosh()).sqrt();
    if !(gamma > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "g",
            reason: format!("a = {a} leaves no resolvable Trotter coupling"),
        });
    }
    Ok(MappingParameters {
        beta,
        n_y,
        g,
        a,
        gamma,
        lambda_factor,
        beta_cl: beta / ny,
    })
}

/// `sinh(2β_cl)·sinh(2β_cl·r) − 1`; vanishes on the critical line.
pub fn critical_line_residual<T: Real>(beta_cl: T, coupling_ratio: T) -> T {
    let two = T::lit(2.0);
    (two * beta_cl).sinh() * (two * beta_cl * coupling_ratio).sinh() - T::one()
}
