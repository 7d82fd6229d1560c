use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spin::{dense_tfim, expectation, ObservableSpec, StateVector, TfimHamiltonian};

use super::dense::dense_eigh;

/// Largest chain [`thermal_expectation`] diagonalizes.
pub const THERMAL_MAX_SITES: usize = 12;

/// `Tr{O e^{−βH}} / Tr{e^{−βH}}` from the full spectrum.
pub fn thermal_expectation<T: Real>(
    h: &TfimHamiltonian<T>,
    spec: ObservableSpec,
    beta: T,
) -> Result<T> {
    if h.n_sites() > THERMAL_MAX_SITES {
        return Err(Error::SizeGuard {
            what: "thermal_expectation sites",
            value: h.n_sites(),
            limit: THERMAL_MAX_SITES,
        });
    }
    if !(beta >= T::zero()) || !beta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must be finite and non-negative, got {beta}"),
        });
    }
    let eig = dense_eigh(&dense_tfim(h)?)?;
    let e_min = eig.values[0];
    let mut z = T::zero();
    let mut acc = T::zero();
    for (k, &e) in eig.values.iter().enumerate() {
        let w = (-beta * (e - e_min)).exp();
        if w == T::zero() {
            continue;
        }
        let o = match spec {
            ObservableSpec::Energy => e,
            _ => {
                let mut v = StateVector::new(h.n_sites(), eig.vector(k))?;
                v.normalize()?;
                expectation(spec, &v, Some(h))?
            }
        };
        z += w;
        acc += w * o;
    }
    Ok(acc / z)
}
