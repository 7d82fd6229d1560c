use crate::error::{Error, Result};
use crate::scalar::Real;

/// Observable value drawn with a possibly negative weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedSample<T> {
    pub value: T,
    pub weight: T,
}

impl<T: Real> SignedSample<T> {
    pub fn new(value: T, weight: T) -> Result<Self> {
        if weight == T::zero() || !weight.is_finite() {
            return Err(Error::InvalidParameter {
                name: "weight",
                reason: format!("must be finite and nonzero, got {weight}"),
            });
        }
        Ok(Self { value, weight })
    }
}

/// `⟨A s⟩ / ⟨s⟩` under `|p|` sampling, with the mean sign `⟨s⟩`.
pub fn sign_reweight<T: Real>(samples: &[SignedSample<T>]) -> Result<(T, T)> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "need at least one sample".into(),
        });
    }
    let signed: T = samples.iter().map(|s| s.weight).sum();
    let total: T = samples.iter().map(|s| s.weight.abs()).sum();
    if signed.abs() <= T::epsilon() * total {
        return Err(Error::SignProblem);
    }
    let numerator: T = samples.iter().map(|s| s.value * s.weight).sum();
    Ok((numerator / signed, signed / total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(value: f64, weight: f64) -> SignedSample<f64> {
        SignedSample::new(value, weight).unwrap()
    }

    #[test]
    fn positive_weights_give_weighted_mean() {
        let xs = [s(1.0, 0.2), s(3.0, 0.5), s(-2.0, 0.3)];
        let (est, sign) = sign_reweight(&xs).unwrap();
        let plain = (1.0 * 0.2 + 3.0 * 0.5 - 2.0 * 0.3) / 1.0;
        assert!((est - plain).abs() < 1e-15);
        assert_eq!(sign, 1.0);
    }

    #[test]
    fn two_term_example() {
        let (est, sign) = sign_reweight(&[s(2.0, 0.5), s(0.0, -0.25)]).unwrap();
        assert!((est - 4.0).abs() < 1e-15);
        assert!((sign - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cancelling_weights_signal_sign_problem() {
        assert!(matches!(
            sign_reweight(&[s(1.0, 0.5), s(7.0, -0.5)]),
            Err(Error::SignProblem)
        ));
        assert!(sign_reweight::<f64>(&[]).is_err());
        assert!(SignedSample::new(1.0, 0.0).is_err());
    }
}
