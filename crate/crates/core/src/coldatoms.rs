//! Closed-form calculators: helium variational charge, Bose-Hubbard mean
//! field, and tight-binding parameters of a deep optical lattice.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this depth (in recoil energies) the band formulas are not asymptotic.
pub const DEEP_LATTICE_DEPTH: f64 = 5.0;

/// Tolerance in `ε` of the numerical Bose-Hubbard minimizer.
pub const EPSILON_TOLERANCE: f64 = 1e-8;

const SCAN_POINTS: usize = 200;

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

fn positive<T: Real>(name: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("must be positive and finite, got {x}"),
        ))
    }
}

fn non_negative<T: Real>(name: &'static str, x: T) -> Result<()> {
    if x >= T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("must be non-negative and finite, got {x}"),
        ))
    }
}

/// Product ansatz for helium with screened charge `z_eff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeliumVariational<T> {
    z_eff: T,
}

impl<T: Real> HeliumVariational<T> {
    pub fn new(z_eff: T) -> Result<Self> {
        positive("z_eff", z_eff)?;
        Ok(Self { z_eff })
    }

    pub fn z_eff(&self) -> T {
        self.z_eff
    }

    /// `⟨H⟩ = Z̃² − 4Z̃ + (5/8)Z̃` in hartree.
    pub fn energy(&self) -> T {
        let z = self.z_eff;
        z * z - T::lit(4.0) * z + T::lit(5.0 / 8.0) * z
    }
}

pub fn helium_energy<T: Real>(z: T) -> Result<T> {
    Ok(HeliumVariational::new(z)?.energy())
}

/// Stationary point `(27/16, −729/256)`.
pub fn helium_minimize<T: Real>() -> (T, T) {
    let z = T::lit(27.0) / T::lit(16.0);
    (z, -(z * z))
}

/// Gutzwiller-type ansatz `√(1−ε)|n*⟩ + √ε|n*±1⟩`, energies in units of `U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoseHubbardMF<T> {
    pub n_star: u32,
    pub zj_over_u: T,
    pub epsilon: T,
    pub mu_over_u: T,
}

impl<T: Real> BoseHubbardMF<T> {
    pub fn new(n_star: u32, zj_over_u: T, epsilon: T, mu_over_u: T) -> Result<Self> {
        let m = Self {
            n_star,
            zj_over_u,
            epsilon,
            mu_over_u,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_star == 0 {
            return Err(invalid("n_star", "must be at least 1".into()));
        }
        non_negative("zJ_over_U", self.zj_over_u)?;
        if !(self.epsilon >= T::zero() && self.epsilon <= T::lit(0.5)) {
            return Err(invalid(
                "epsilon",
                format!("must lie in [0, 1/2], got {}", self.epsilon),
            ));
        }
        if !self.mu_over_u.is_finite() {
            return Err(invalid("mu_over_U", "must be finite".into()));
        }
        Ok(())
    }

    pub fn with_epsilon(self, epsilon: T) -> Result<Self> {
        Self::new(self.n_star, self.zj_over_u, epsilon, self.mu_over_u)
    }
}

/// `(√n* + √(n*+1))²`.
fn hopping_factor<T: Real>(n_star: u32) -> T {
    let n = T::lit(f64::from(n_star));
    let s = n.sqrt() + (n + T::one()).sqrt();
    s * s
}

fn bh_energy_unchecked<T: Real>(m: &BoseHubbardMF<T>) -> T {
    let n = T::lit(f64::from(m.n_star));
    let eps = m.epsilon;
    let half = T::lit(0.5);
    -m.zj_over_u * eps * (T::one() - T::lit(2.0) * eps) * hopping_factor::<T>(m.n_star)
        + half * (T::lit(2.0) * eps + n * (n - T::one()))
        - m.mu_over_u * n
}

/// `⟨H⟩/(NU) = −(zJ/U)ε(1−2ε)(√n*+√(n*+1))² + ½[2ε + n*(n*−1)] − (μ/U)n*`.
pub fn bh_energy_per_site<T: Real>(m: &BoseHubbardMF<T>) -> Result<T> {
    m.validate()?;
    Ok(bh_energy_unchecked(m))
}

/// `U_c/zJ = (√n* + √(n*+1))²`.
pub fn bh_critical_point<T: Real>(n_star: u32) -> Result<T> {
    if n_star == 0 {
        return Err(invalid("n_star", "must be at least 1".into()));
    }
    Ok(hopping_factor(n_star))
}

/// Minimizing `ε` from the stationarity condition; zero in the Mott phase.
pub fn bh_optimal_epsilon<T: Real>(n_star: u32, zj_over_u: T) -> Result<T> {
    let k = bh_critical_point::<T>(n_star)?;
    non_negative("zJ_over_U", zj_over_u)?;
    let x = zj_over_u * k;
    Ok(if x > T::one() {
        (T::one() - T::one() / x) / T::lit(4.0)
    } else {
        T::zero()
    })
}

/// Minimizes the energy over `ε ∈ [0, ½]` by a grid scan refined with golden-section search.
///
/// Returns the model at the minimizing `ε` and its energy.
pub fn bh_minimize_numeric<T: Real>(m: &BoseHubbardMF<T>) -> Result<(BoseHubbardMF<T>, T)> {
    m.validate()?;
    let energy = |eps: T| bh_energy_unchecked(&BoseHubbardMF { epsilon: eps, ..*m });
    let hi = T::lit(0.5);
    let step = hi / T::from_count(SCAN_POINTS);
    let best = (0..=SCAN_POINTS)
        .map(|k| (k, energy(T::from_count(k) * step)))
        .fold(
            (0, T::infinity()),
            |acc, (k, e)| if e < acc.1 { (k, e) } else { acc },
        );
    let mut a = T::from_count(best.0.saturating_sub(1)) * step;
    let mut b = (T::from_count(best.0 + 1) * step).min(hi);
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (energy(c), energy(d));
    while b - a > T::tol(EPSILON_TOLERANCE) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = energy(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = energy(d);
        }
    }
    let mut eps = (a + b) / T::lit(2.0);
    // The boundary minimum at ε = 0 is kept when the interior search cannot beat it.
    for edge in [T::zero(), hi] {
        if energy(edge) <= energy(eps) {
            eps = edge;
        }
    }
    let out = m.with_epsilon(eps)?;
    Ok((out, energy(eps)))
}

/// Mott-lobe branches `(n−1 + 2n·zJ/U, n − 2(n−1)·zJ/U)` in units of `U`.
pub fn mott_lobes<T: Real>(n: u32, zj_over_u: T) -> Result<(T, T)> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1".into()));
    }
    non_negative("zJ_over_U", zj_over_u)?;
    let nf = T::lit(f64::from(n));
    let two = T::lit(2.0);
    Ok((
        nf - T::one() + two * nf * zj_over_u,
        nf - two * (nf - T::one()) * zj_over_u,
    ))
}

/// `true` when the lobe has closed, i.e. the lower branch reaches the upper one.
pub fn mott_lobe_closed<T: Real>(n: u32, zj_over_u: T) -> Result<bool> {
    let (lo, hi) = mott_lobes(n, zj_over_u)?;
    Ok(lo >= hi)
}

/// Optical lattice depth and units. Lengths share the unit of `1/k_l`; ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams<T> {
    pub v0_over_er: T,
    pub recoil_er: T,
    pub k_l: T,
    pub a_s: T,
}

impl<T: Real> LatticeParams<T> {
    /// Depth `v0_over_er` in units where `E_r = k_L = 1`.
    pub fn reduced(v0_over_er: T, a_s: T) -> Self {
        Self {
            v0_over_er,
            recoil_er: T::one(),
            k_l: T::one(),
            a_s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("v0_over_er", self.v0_over_er)?;
        positive("recoil_er", self.recoil_er)?;
        positive("k_l", self.k_l)?;
        if !self.a_s.is_finite() {
            return Err(invalid("a_s", "must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandParameters<T> {
    /// Width of the lowest Bloch band.
    pub w: T,
    /// Hopping `J = W/4`.
    pub j_hop: T,
    /// Harmonic-oscillator length of a site, `1/(k_L (V₀/E_r)^{1/4})`.
    pub a_osc: T,
    /// On-site interaction `√(8/π) k_L a_s E_r (V₀/E_r)^{3/4}`.
    pub u_onsite: T,
    /// Depth at least [`DEEP_LATTICE_DEPTH`], where the asymptotic forms apply.
    pub deep_lattice: bool,
}

pub fn band_parameters<T: Real>(p: &LatticeParams<T>) -> Result<BandParameters<T>> {
    p.validate()?;
    let v = p.v0_over_er;
    let v34 = v.powf(T::lit(0.75));
    let w = T::lit(16.0) / T::PI().sqrt() * v34 * (-T::lit(4.0) * v.sqrt()).exp() * p.recoil_er;
    Ok(BandParameters {
        w,
        j_hop: w / T::lit(4.0),
        a_osc: T::one() / (p.k_l * v.powf(T::lit(0.25))),
        u_onsite: (T::lit(8.0) / T::PI()).sqrt() * p.k_l * p.a_s * p.recoil_er * v34,
        deep_lattice: v >= T::lit(DEEP_LATTICE_DEPTH),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helium_values() {
        let (z, e) = helium_minimize::<f64>();
        assert_eq!(z, 1.6875);
        assert!((e + 729.0 / 256.0).abs() < 1e-15);
        assert!((helium_energy(z).unwrap() - e).abs() < 1e-15);
        assert_eq!(helium_energy(2.0).unwrap(), -2.75);
        assert!(helium_energy(0.0f64).is_err());
    }

    #[test]
    fn bose_hubbard_hand_value() {
        let m = BoseHubbardMF::new(1, 0.1, 0.1, 0.5).unwrap();
        let expected = -0.1 * 0.1 * 0.8 * (3.0 + 2.0 * 2f64.sqrt()) + 0.1 - 0.5;
        assert!((bh_energy_per_site(&m).unwrap() - expected).abs() < 1e-15);
        assert!((expected + 0.44663).abs() < 1e-5);
        let mott = BoseHubbardMF::new(3, 0.4f64, 0.0, 1.7).unwrap();
        assert!((bh_energy_per_site(&mott).unwrap() - (3.0 - 1.7 * 3.0)).abs() < 1e-15);
        assert!(BoseHubbardMF::new(1, 0.1, 0.6, 0.5).is_err());
        assert!(BoseHubbardMF::new(0, 0.1, 0.1, 0.5).is_err());
    }

    #[test]
    fn numeric_minimizer_matches_stationary_point() {
        for &(n, x) in &[(1u32, 0.3f64), (2, 0.2), (1, 0.05), (4, 0.5)] {
            let m = BoseHubbardMF::new(n, x, 0.0, n as f64 - 0.5).unwrap();
            let (best, e) = bh_minimize_numeric(&m).unwrap();
            let eps = bh_optimal_epsilon(n, x).unwrap();
            assert!(
                (best.epsilon - eps).abs() < 1e-7,
                "{n} {x}: {} vs {eps}",
                best.epsilon
            );
            if eps > 0.0 {
                assert!(e < bh_energy_per_site(&m).unwrap());
            }
        }
    }

    #[test]
    fn critical_point_and_lobes() {
        assert!((bh_critical_point::<f64>(1).unwrap() - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-14);
        let (lo, hi) = mott_lobes(1, 0.2f64).unwrap();
        assert!((lo - 0.4).abs() < 1e-15 && hi == 1.0);
        let (lo, hi) = mott_lobes(2, 0.25f64).unwrap();
        assert_eq!((lo, hi), (2.0, 1.5));
        assert!(mott_lobe_closed(2, 0.25f64).unwrap());
        for n in 1..=10u32 {
            assert_eq!(mott_lobes(n, 0.0f64).unwrap(), ((n - 1) as f64, n as f64));
        }
    }

    #[test]
    fn band_structure() {
        let b = band_parameters(&LatticeParams::reduced(10.0f64, 0.01)).unwrap();
        assert_eq!(b.j_hop, b.w / 4.0);
        assert!(b.deep_lattice);
        assert!((b.a_osc - 10f64.powf(-0.25)).abs() < 1e-15);
        assert!(
            !band_parameters(&LatticeParams::reduced(2.0f64, 0.0))
                .unwrap()
                .deep_lattice
        );
        assert!(band_parameters(&LatticeParams::reduced(0.0f64, 0.0)).is_err());
    }
}
