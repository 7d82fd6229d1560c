use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{c, re, Real, C};
use crate::spin::StateVector;

/// Largest register the simulator allocates.
pub const MAX_QUBITS: usize = 24;

/// Allowed deviation of `‖ψ‖²` from one for a register.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Elementary gate. Rotations follow `R_z(φ) = diag(e^{iφ}, e^{−iφ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate<T> {
    Rz(usize, T),
    /// `U_H R_z(φ) U_H`.
    Rx(usize, T),
    /// `R_z(−π/4) R_x(φ) R_z(π/4)`.
    Ry(usize, T),
    H(usize),
    /// `R_z(π/8)`.
    T(usize),
    /// `R_z(−π/8)`.
    Tdg(usize),
    /// Control first.
    Cnot(usize, usize),
    /// Two controls, then the target.
    Toffoli(usize, usize, usize),
}

impl<T: Real> Gate<T> {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rz(q, _)
            | Gate::Rx(q, _)
            | Gate::Ry(q, _)
            | Gate::H(q)
            | Gate::T(q)
            | Gate::Tdg(q) => vec![q],
            Gate::Cnot(a, b) => vec![a, b],
            Gate::Toffoli(a, b, t) => vec![a, b, t],
        }
    }

    pub fn phase(&self) -> Option<T> {
        match *self {
            Gate::Rz(_, p) | Gate::Rx(_, p) | Gate::Ry(_, p) => Some(p),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rz(..) => "RZ",
            Gate::Rx(..) => "RX",
            Gate::Ry(..) => "RY",
            Gate::H(_) => "H",
            Gate::T(_) => "T",
            Gate::Tdg(_) => "TDG",
            Gate::Cnot(..) => "CNOT",
            Gate::Toffoli(..) => "TOFFOLI",
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if qs[..i].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        if let Some(p) = self.phase() {
            if !p.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "phase",
                    reason: format!("must be finite, got {p}"),
                });
            }
        }
        Ok(())
    }

    /// 2×2 matrix of a single-qubit gate in the basis (|0⟩, |1⟩).
    pub fn single_qubit_matrix(&self) -> Option<[[C<T>; 2]; 2]> {
        let rz = |p: T| {
            [
                [c(p.cos(), p.sin()), re(T::zero())],
                [re(T::zero()), c(p.cos(), -p.sin())],
            ]
        };
        let pi8 = T::PI() / T::lit(8.0);
        Some(match *self {
            Gate::Rz(_, p) => rz(p),
            Gate::Rx(_, p) => {
                let (cs, sn) = (p.cos(), p.sin());
                [[re(cs), c(T::zero(), sn)], [c(T::zero(), sn), re(cs)]]
            }
            Gate::Ry(_, p) => {
                let (cs, sn) = (p.cos(), p.sin());
                [[re(cs), re(sn)], [re(-sn), re(cs)]]
            }
            Gate::H(_) => {
                let h = T::FRAC_1_SQRT_2();
                [[re(h), re(h)], [re(h), re(-h)]]
            }
            Gate::T(_) => rz(pi8),
            Gate::Tdg(_) => rz(-pi8),
            Gate::Cnot(..) | Gate::Toffoli(..) => return None,
        })
    }

    /// Dense matrix on the gate's own qubits, first listed qubit least significant.
    pub fn local_matrix(&self) -> ComplexMatrix<T> {
        if let Some(m) = self.single_qubit_matrix() {
            return ComplexMatrix::from_fn(2, 2, |i, j| m[i][j]);
        }
        let n = 1 << self.qubits().len();
        let mut reg = ComplexMatrix::zeros(n, n);
        let local = match *self {
            Gate::Cnot(..) => Gate::Cnot(0, 1),
            Gate::Toffoli(..) => Gate::Toffoli(0, 1, 2),
            _ => unreachable!("single-qubit gates handled above"),
        };
        for j in 0..n {
            let mut amps = vec![re(T::zero()); n];
            amps[j] = re(T::one());
            apply_in_place(&mut amps, &local);
            reg.set_column(j, &amps);
        }
        reg
    }
}

/// Applies `gate` to raw amplitudes, qubit `q` being bit `q` of the index.
pub(crate) fn apply_in_place<T: Real>(amps: &mut [C<T>], gate: &Gate<T>) {
    match *gate {
        Gate::Cnot(ctrl, tgt) => {
            let (cm, tm) = (1usize << ctrl, 1usize << tgt);
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::Toffoli(c1, c2, tgt) => {
            let cm = (1usize << c1) | (1usize << c2);
            let tm = 1usize << tgt;
            for i in 0..amps.len() {
                if i & cm == cm && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        _ => {
            let m = gate.single_qubit_matrix().expect("single-qubit gate");
            let q = gate.qubits()[0];
            let stride = 1usize << q;
            let mut base = 0;
            while base < amps.len() {
                for i in base..base + stride {
                    let (a0, a1) = (amps[i], amps[i + stride]);
                    amps[i] = m[0][0] * a0 + m[0][1] * a1;
                    amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
                }
                base += 2 * stride;
            }
        }
    }
}

/// Normalized state of `n` qubits; qubit 0 is the least significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitRegister<T> {
    state: StateVector<T>,
}

impl<T: Real> QubitRegister<T> {
    /// `|0…0⟩`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::SizeGuard {
                what: "qubits",
                value: n_qubits,
                limit: MAX_QUBITS,
            });
        }
        Ok(Self {
            state: StateVector::basis(n_qubits, index)?,
        })
    }

    /// Basis state from a label such as `"10"`, qubit 0 written first.
    pub fn from_label(label: &str) -> Result<Self> {
        let mut index = 0;
        for (q, ch) in label.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => index |= 1 << q,
                other => {
                    return Err(Error::InvalidParameter {
                        name: "label",
                        reason: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Self::basis(label.len(), index)
    }

    pub fn from_state(state: StateVector<T>) -> Result<Self> {
        if state.n_sites() > MAX_QUBITS {
            return Err(Error::SizeGuard {
                what: "qubits",
                value: state.n_sites(),
                limit: MAX_QUBITS,
            });
        }
        let n2 = state.norm_sqr();
        if (n2 - T::one()).abs() > T::tol(NORM_TOLERANCE) {
            return Err(Error::NotNormalized {
                norm_sqr: n2.as_f64(),
            });
        }
        Ok(Self { state })
    }

    pub fn n_qubits(&self) -> usize {
        self.state.n_sites()
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn into_state(self) -> StateVector<T> {
        self.state
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        self.state.amplitudes()
    }

    /// Probability that qubit `q` reads 1.
    pub fn population_one(&self, q: usize) -> Result<T> {
        if q >= self.n_qubits() {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits(),
            });
        }
        Ok(self
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> q) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    pub fn apply_mut(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits())?;
        apply_in_place(self.state.amplitudes_mut(), gate);
        Ok(())
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        self.state.amplitudes_mut()
    }
}

/// Register after `gate`; the input is left untouched.
pub fn apply_gate<T: Real>(reg: &QubitRegister<T>, gate: &Gate<T>) -> Result<QubitRegister<T>> {
    let mut out = reg.clone();
    out.apply_mut(gate)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_on_zero() {
        let r = apply_gate(&QubitRegister::<f64>::new(1).unwrap(), &Gate::H(0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.amplitudes()[0] - re(h)).norm() < 1e-15);
        assert!((r.amplitudes()[1] - re(h)).norm() < 1e-15);
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let r = QubitRegister::<f64>::from_label("10").unwrap();
        let out = apply_gate(&r, &Gate::Cnot(0, 1)).unwrap();
        assert_eq!(out, QubitRegister::from_label("11").unwrap());
        let idle = QubitRegister::<f64>::from_label("01").unwrap();
        assert_eq!(apply_gate(&idle, &Gate::Cnot(0, 1)).unwrap(), idle);
    }

    #[test]
    fn inverse_rotations_cancel() {
        let psi = StateVector::<f64>::random(3, 2)
            .unwrap()
            .normalized()
            .unwrap();
        let r = QubitRegister::from_state(psi.clone()).unwrap();
        let phi = std::f64::consts::FRAC_PI_4;
        let out = apply_gate(
            &apply_gate(&r, &Gate::Rz(1, phi)).unwrap(),
            &Gate::Rz(1, -phi),
        )
        .unwrap();
        assert!(out.state().distance(&psi) < 1e-14);
    }

    #[test]
    fn invalid_indices() {
        let mut r = QubitRegister::<f64>::new(2).unwrap();
        assert!(matches!(
            r.apply_mut(&Gate::H(2)),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            r.apply_mut(&Gate::Cnot(1, 1)),
            Err(Error::RepeatedQubit(1))
        ));
        assert!(QubitRegister::<f64>::from_label("12").is_err());
    }

    #[test]
    fn rotations_are_unitary() {
        for g in [
            Gate::Rz(0, 0.3f64),
            Gate::Rx(0, 1.1),
            Gate::Ry(0, -0.7),
            Gate::H(0),
            Gate::T(0),
            Gate::Tdg(0),
        ] {
            let m = g.local_matrix();
            let d = (&(&m.adjoint() * &m) - &ComplexMatrix::identity(2)).max_abs();
            assert!(d < 1e-15);
        }
    }

    #[test]
    fn population_of_plus_state() {
        let r = apply_gate(&QubitRegister::<f64>::new(2).unwrap(), &Gate::H(1)).unwrap();
        assert!((r.population_one(1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(r.population_one(0).unwrap(), 0.0);
    }
}
