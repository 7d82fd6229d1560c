use super::{Circuit, Gate, QubitRegister, CONTROL_READY_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, LinearOperator};
use crate::scalar::{axpy, c, re, Real, C};
use crate::spin::TfimHamiltonian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Matrix in the basis (|0⟩, |1⟩) with `σ_z|0⟩ = |0⟩`.
    fn matrix<T: Real>(self) -> [[C<T>; 2]; 2] {
        let (o, l) = (re(T::zero()), re(T::one()));
        match self {
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, c(T::zero(), -T::one())], [c(T::zero(), T::one()), o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// Tensor product of Paulis on distinct qubits, identity elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    factors: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn new(factors: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut factors: Vec<_> = factors.into_iter().collect();
        if factors.is_empty() {
            return Err(Error::InvalidParameter {
                name: "pauli string",
                reason: "needs at least one factor".into(),
            });
        }
        factors.sort();
        if let Some(w) = factors.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::RepeatedQubit(w[0].0));
        }
        Ok(Self { factors })
    }

    pub fn single(q: usize, p: Pauli) -> Self {
        Self {
            factors: vec![(q, p)],
        }
    }

    pub fn zz(a: usize, b: usize) -> Result<Self> {
        Self::new([(a, Pauli::Z), (b, Pauli::Z)])
    }

    pub fn xxxx(targets: [usize; 4]) -> Result<Self> {
        Self::new(targets.map(|q| (q, Pauli::X)))
    }

    /// Factors sorted by qubit.
    pub fn factors(&self) -> &[(usize, Pauli)] {
        &self.factors
    }

    pub fn max_qubit(&self) -> usize {
        self.factors.last().map_or(0, |f| f.0)
    }

    /// Dense matrix on `n_qubits`.
    pub fn matrix<T: Real>(&self, n_qubits: usize) -> Result<ComplexMatrix<T>> {
        if self.max_qubit() >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: self.max_qubit(),
                n_qubits,
            });
        }
        let dim = 1usize << n_qubits;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut row = col;
            let mut amp = re(T::one());
            for &(q, p) in &self.factors {
                let bit = (col >> q) & 1;
                let pm = p.matrix::<T>();
                let out_bit = if p == Pauli::Z { bit } else { 1 - bit };
                amp *= pm[out_bit][bit];
                row = (row & !(1 << q)) | (out_bit << q);
            }
            m[(row, col)] = amp;
        }
        Ok(m)
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(q, p)| format!("{p:?}{q}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// First-order product formula for `H = Σ_k c_k P_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterPlan<T> {
    pub n_qubits: usize,
    pub terms: Vec<(PauliString, T)>,
    pub total_time: T,
    pub steps: usize,
    /// Ancilla used by `σ_x⊗⁴` terms; must start in `|0⟩`.
    pub ancilla: Option<usize>,
}

impl<T: Real> TrotterPlan<T> {
    pub fn new(
        n_qubits: usize,
        terms: Vec<(PauliString, T)>,
        total_time: T,
        steps: usize,
    ) -> Result<Self> {
        let plan = Self {
            n_qubits,
            terms,
            total_time,
            steps,
            ancilla: None,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_ancilla(mut self, ancilla: usize) -> Result<Self> {
        self.ancilla = Some(ancilla);
        self.validate()?;
        Ok(self)
    }

    /// `H = −Σ σ_z σ_z + g Σ σ_x`, bonds first.
    pub fn tfim(h: &TfimHamiltonian<T>, total_time: T, steps: usize) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, j) in h.bonds() {
            terms.push((PauliString::zz(i, j)?, -T::one()));
        }
        for q in 0..h.n_sites() {
            terms.push((PauliString::single(q, Pauli::X), h.g()));
        }
        Self::new(h.n_sites(), terms, total_time, steps)
    }

    pub fn tau(&self) -> T {
        self.total_time / T::from_count(self.steps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidParameter {
                name: "steps",
                reason: "must be at least 1".into(),
            });
        }
        if !self.total_time.is_finite() {
            return Err(Error::InvalidParameter {
                name: "total_time",
                reason: "must be finite".into(),
            });
        }
        if let Some(a) = self.ancilla {
            if a >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: a,
                    n_qubits: self.n_qubits,
                });
            }
        }
        for (p, coef) in &self.terms {
            if p.max_qubit() >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: p.max_qubit(),
                    n_qubits: self.n_qubits,
                });
            }
            if !coef.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "coefficient",
                    reason: format!("term {p} has non-finite coefficient"),
                });
            }
        }
        Ok(())
    }

    /// `Σ c_k P_k` as a dense matrix.
    pub fn dense_hamiltonian(&self) -> Result<ComplexMatrix<T>> {
        let dim = 1usize << self.n_qubits;
        let mut h = ComplexMatrix::zeros(dim, dim);
        for (p, coef) in &self.terms {
            h = &h + &p.matrix::<T>(self.n_qubits)?.scaled(re(*coef));
        }
        Ok(h)
    }

    /// Gates for `exp(−i c P τ)`.
    fn term_gates(&self, p: &PauliString, coef: T, tau: T) -> Result<Vec<Gate<T>>> {
        let angle = -(coef * tau);
        let f = p.factors();
        let gates = match f {
            [(q, Pauli::X)] => vec![Gate::Rx(*q, angle)],
            [(q, Pauli::Y)] => vec![Gate::Ry(*q, angle)],
            [(q, Pauli::Z)] => vec![Gate::Rz(*q, angle)],
            [(a, Pauli::Z), (b, Pauli::Z)] => {
                vec![Gate::Cnot(*a, *b), Gate::Rz(*b, angle), Gate::Cnot(*a, *b)]
            }
            [(_, Pauli::X), (_, Pauli::X), (_, Pauli::X), (_, Pauli::X)] => {
                let ancilla = self
                    .ancilla
                    .ok_or_else(|| Error::Unexponentiable(format!("{p} needs an ancilla")))?;
                let targets = [f[0].0, f[1].0, f[2].0, f[3].0];
                let g = super::four_body_g::<T>(ancilla, targets)?;
                let mut out = g.gates().to_vec();
                out.push(Gate::Rz(ancilla, angle));
                out.extend_from_slice(g.gates());
                out
            }
            _ => return Err(Error::Unexponentiable(p.to_string())),
        };
        Ok(gates)
    }

    /// One Trotter slice of length `tau`, terms in plan order.
    pub fn slice_circuit(&self, tau: T) -> Result<Circuit<T>> {
        self.validate()?;
        let mut c = Circuit::new(self.n_qubits)?;
        for (p, coef) in &self.terms {
            for g in self.term_gates(p, *coef, tau)? {
                c.push(g)?;
            }
        }
        Ok(c)
    }
}

/// Runs `plan.steps` slices of `τ = total_time / steps`.
pub fn trotter_evolve<T: Real>(
    plan: &TrotterPlan<T>,
    reg: &QubitRegister<T>,
) -> Result<QubitRegister<T>> {
    let slice = plan.slice_circuit(plan.tau())?;
    if reg.n_qubits() != plan.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: plan.n_qubits,
            actual: reg.n_qubits(),
        });
    }
    if let Some(a) = plan.ancilla {
        let population = reg.population_one(a)?;
        if population > T::lit(CONTROL_READY_TOLERANCE) {
            return Err(Error::ControlNotReady {
                population: population.as_f64(),
            });
        }
    }
    let mut out = reg.clone();
    for _ in 0..plan.steps {
        for g in slice.gates() {
            out.apply_mut(g)?;
        }
    }
    Ok(out)
}

/// Outcome of [`rk4_evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Report<T> {
    pub steps: usize,
    /// `Σ |‖ψ‖ − 1|` removed by the per-step renormalization.
    pub norm_drift: T,
}

fn step_count<T: Real>(t: T, tau: T) -> usize {
    let ratio = t / tau;
    let slack = T::lit(1e-9) * ratio.max(T::one());
    (ratio - slack)
        .ceil()
        .max(T::zero())
        .to_usize()
        .expect("finite step count")
}

/// Integrates `dψ/dt = −iHψ` with classic RK4, the last step shortened to land on `t`.
pub fn rk4_evolve<T: Real, O: LinearOperator<T>>(
    h: &O,
    t: T,
    tau: T,
    reg: &QubitRegister<T>,
) -> Result<(QubitRegister<T>, Rk4Report<T>)> {
    if !(tau > T::zero()) || !tau.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tau",
            reason: format!("must be positive and finite, got {tau}"),
        });
    }
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("must be non-negative and finite, got {t}"),
        });
    }
    let dim = reg.amplitudes().len();
    if h.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: dim,
        });
    }
    let steps = step_count(t, tau);
    let mut out = reg.clone();
    let zero = re(T::zero());
    let minus_i = c(T::zero(), -T::one());
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![zero; dim],
        vec![zero; dim],
        vec![zero; dim],
        vec![zero; dim],
    );
    let mut tmp = vec![zero; dim];
    let mut drift = T::zero();
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let generator = |x: &[C<T>], y: &mut [C<T>]| {
        h.apply(x, y);
        y.iter_mut().for_each(|v| *v *= minus_i);
    };
    for s in 0..steps {
        let dt = if s + 1 == steps {
            t - T::from_count(s) * tau
        } else {
            tau
        };
        let psi = out.amplitudes_mut();
        generator(psi, &mut k1);
        tmp.copy_from_slice(psi);
        axpy(re(half * dt), &k1, &mut tmp);
        generator(&tmp, &mut k2);
        tmp.copy_from_slice(psi);
        axpy(re(half * dt), &k2, &mut tmp);
        generator(&tmp, &mut k3);
        tmp.copy_from_slice(psi);
        axpy(re(dt), &k3, &mut tmp);
        generator(&tmp, &mut k4);
        for i in 0..dim {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * T::lit(2.0) + k4[i]) * (dt * sixth);
        }
        let norm = crate::scalar::norm(psi);
        drift += (norm - T::one()).abs();
        crate::scalar::scale(T::one() / norm, psi);
    }
    Ok((
        out,
        Rk4Report {
            steps,
            norm_drift: drift,
        },
    ))
}
