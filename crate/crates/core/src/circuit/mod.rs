//! Statevector simulation of gate circuits.
//!
//! Qubit 0 is the least significant bit of a basis index. Rotations use
//! `R_z(φ) = exp(+iφσ_z)` with `σ_z|0⟩ = |0⟩`.

mod gate;
mod text;
mod trotter;

pub use gate::{apply_gate, Gate, QubitRegister, MAX_QUBITS, NORM_TOLERANCE};
pub use text::{parse_circuit, write_circuit};
pub use trotter::{rk4_evolve, trotter_evolve, Pauli, PauliString, Rk4Report, TrotterPlan};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{re, Real};

/// Largest register for which a full unitary is built.
pub const UNITARY_MAX_QUBITS: usize = 10;

/// Populations above this in the gadget control's `|1⟩` are rejected.
pub const CONTROL_READY_TOLERANCE: f64 = 1e-10;

/// Ordered gate list on a fixed register width.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::SizeGuard {
                what: "qubits",
                value: n_qubits,
                limit: MAX_QUBITS,
            });
        }
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate<T>>) -> Result<Self> {
        let mut c = Self::new(n_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate<T>) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend(&mut self, other: &Circuit<T>) -> Result<&mut Self> {
        for g in &other.gates {
            self.push(*g)?;
        }
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

fn check_width<T: Real>(reg: &QubitRegister<T>, c: &Circuit<T>) -> Result<()> {
    if reg.n_qubits() != c.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits(),
            actual: reg.n_qubits(),
        });
    }
    Ok(())
}

/// Applies the gates of `c` in order.
pub fn run_circuit<T: Real>(reg: &QubitRegister<T>, c: &Circuit<T>) -> Result<QubitRegister<T>> {
    check_width(reg, c)?;
    let mut out = reg.clone();
    for g in c.gates() {
        out.apply_mut(g)?;
    }
    Ok(out)
}

/// Full `2^n × 2^n` unitary of `c`.
pub fn circuit_unitary<T: Real>(c: &Circuit<T>) -> Result<ComplexMatrix<T>> {
    let n = c.n_qubits();
    if n > UNITARY_MAX_QUBITS {
        return Err(Error::SizeGuard {
            what: "qubits",
            value: n,
            limit: UNITARY_MAX_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for j in 0..dim {
        let col = run_circuit(&QubitRegister::basis(n, j)?, c)?;
        u.set_column(j, col.amplitudes());
    }
    Ok(u)
}

/// `min_θ ‖U − e^{iθ}V‖_F`.
pub fn unitary_distance_up_to_phase<T: Real>(
    u: &ComplexMatrix<T>,
    v: &ComplexMatrix<T>,
) -> Result<T> {
    if !u.is_square() || !v.is_square() {
        return Err(Error::InvalidParameter {
            name: "matrix",
            reason: "both operands must be square".into(),
        });
    }
    if u.rows() != v.rows() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            actual: v.rows(),
        });
    }
    let overlap = u
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .fold(re(T::zero()), |acc, (a, b)| acc + a.conj() * b);
    let phase = if overlap.norm() > T::zero() {
        overlap.conj() / overlap.norm()
    } else {
        re(T::one())
    };
    Ok(u.as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(a, b)| (a - phase * b).norm_sqr())
        .sum::<T>()
        .sqrt())
}

/// Toffoli on qubits 0 and 1 controlling qubit 2, from H, CNOT, T and T†.
pub fn toffoli_circuit<T: Real>() -> Circuit<T> {
    use Gate::*;
    // Our T is the textbook T† up to a global phase, so the two are swapped.
    let gates = [
        H(2),
        Cnot(1, 2),
        T(2),
        Cnot(0, 2),
        Tdg(2),
        Cnot(1, 2),
        T(2),
        Cnot(0, 2),
        Tdg(1),
        Tdg(2),
        H(2),
        Cnot(0, 1),
        Tdg(0),
        T(1),
        Cnot(0, 1),
    ];
    Circuit::from_gates(3, gates).expect("valid three-qubit gates")
}

/// Width needed to hold `control` and `targets`.
fn gadget_width(control: usize, targets: &[usize; 4]) -> usize {
    targets.iter().copied().fold(control, usize::max) + 1
}

fn check_gadget(control: usize, targets: &[usize; 4]) -> Result<()> {
    let all = [control, targets[0], targets[1], targets[2], targets[3]];
    for (i, q) in all.iter().enumerate() {
        if all[..i].contains(q) {
            return Err(Error::RepeatedQubit(*q));
        }
    }
    Ok(())
}

/// `G = H_c (Π_i CNOT_{c,i}) H_c`, mapping the `σ_x⊗⁴` parity of the targets onto the control.
pub fn four_body_g<T: Real>(control: usize, targets: [usize; 4]) -> Result<Circuit<T>> {
    check_gadget(control, &targets)?;
    let mut c = Circuit::new(gadget_width(control, &targets))?;
    c.push(Gate::H(control))?;
    for t in targets {
        c.push(Gate::Cnot(control, t))?;
    }
    c.push(Gate::H(control))?;
    Ok(c)
}

/// Applies `exp(−i E₀ t σ_x⊗⁴)` to `targets` through the ancilla `control`.
pub fn simulate_four_body_on<T: Real>(
    e0: T,
    t: T,
    reg: &QubitRegister<T>,
    control: usize,
    targets: [usize; 4],
) -> Result<QubitRegister<T>> {
    check_gadget(control, &targets)?;
    let width = gadget_width(control, &targets);
    if width > reg.n_qubits() {
        return Err(Error::QubitOutOfRange {
            index: width - 1,
            n_qubits: reg.n_qubits(),
        });
    }
    let population = reg.population_one(control)?;
    if population > T::lit(CONTROL_READY_TOLERANCE) {
        return Err(Error::ControlNotReady {
            population: population.as_f64(),
        });
    }
    if !(e0 * t).is_finite() {
        return Err(Error::InvalidParameter {
            name: "phase",
            reason: "E0·t must be finite".into(),
        });
    }
    let g = four_body_g::<T>(control, targets)?;
    let mut out = reg.clone();
    for gate in g.gates() {
        out.apply_mut(gate)?;
    }
    out.apply_mut(&Gate::Rz(control, -(e0 * t)))?;
    for gate in g.gates() {
        out.apply_mut(gate)?;
    }
    Ok(out)
}

/// Five-qubit gadget with control 0 and targets 1 to 4.
pub fn simulate_four_body<T: Real>(
    e0: T,
    t: T,
    reg: &QubitRegister<T>,
) -> Result<QubitRegister<T>> {
    if reg.n_qubits() != 5 {
        return Err(Error::DimensionMismatch {
            expected: 5,
            actual: reg.n_qubits(),
        });
    }
    simulate_four_body_on(e0, t, reg, 0, [1, 2, 3, 4])
}
