use manybody::circuit::{
    circuit_unitary, parse_circuit, rk4_evolve, run_circuit, simulate_four_body_on, trotter_evolve,
    write_circuit, Circuit, Gate, PauliString, QubitRegister, TrotterPlan,
};
use manybody::eigensolve::unitary_evolution;
use manybody::spin::dense_tfim;
use manybody::{StateVector, TfimHamiltonian, C};
use proptest::prelude::*;

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate<f64>> {
    let q = 0..n;
    let phi = -4.0f64..4.0;
    prop_oneof![
        (q.clone(), phi.clone()).prop_map(|(q, p)| Gate::Rz(q, p)),
        (q.clone(), phi.clone()).prop_map(|(q, p)| Gate::Rx(q, p)),
        (q.clone(), phi).prop_map(|(q, p)| Gate::Ry(q, p)),
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::T),
        q.clone().prop_map(Gate::Tdg),
        (q.clone(), q.clone())
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Gate::Cnot(a, b)),
        (q.clone(), q.clone(), q)
            .prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c)
            .prop_map(|(a, b, c)| Gate::Toffoli(a, b, c)),
    ]
}

fn circuit_strategy() -> impl Strategy<Value = Circuit<f64>> {
    (3usize..6).prop_flat_map(|n| {
        prop::collection::vec(gate_strategy(n), 0..30)
            .prop_map(move |g| Circuit::from_gates(n, g).unwrap())
    })
}

fn random_register(n: usize, seed: u64) -> QubitRegister<f64> {
    QubitRegister::from_state(StateVector::random(n, seed).unwrap()).unwrap()
}

#[test]
fn trotter_converges_to_exact_evolution() {
    let h = TfimHamiltonian::open(4, 0.7).unwrap();
    let u = unitary_evolution(&dense_tfim(&h).unwrap(), 1.0).unwrap();
    let reg = random_register(4, 2);
    let exact = u.mul_vec(reg.amplitudes());
    let err = |steps| {
        let out = trotter_evolve(&TrotterPlan::tfim(&h, 1.0, steps).unwrap(), &reg).unwrap();
        out.amplitudes()
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let (coarse, fine) = (err(20), err(40));
    assert!(
        fine < coarse && (coarse / fine - 2.0).abs() < 0.2,
        "{coarse} {fine}"
    );
    let (out, report) = rk4_evolve(&h, 1.0, 0.001, &reg).unwrap();
    let rk: f64 = out
        .amplitudes()
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(rk < 1e-9 && report.steps == 1000, "{rk} {}", report.steps);
}

#[test]
fn four_body_gadget_on_any_wiring() {
    let reg = {
        let mut amps = vec![C::new(0.0, 0.0); 64];
        let t = StateVector::<f64>::random(5, 8).unwrap();
        for (k, a) in t.amplitudes().iter().enumerate() {
            // Control on qubit 3 stays |0⟩; the other five carry the state.
            let low = k & 0b111;
            let high = k >> 3;
            amps[low | (high << 4)] = *a;
        }
        QubitRegister::from_state(StateVector::from_amplitudes(amps).unwrap()).unwrap()
    };
    let targets = [5, 0, 4, 2];
    let out = simulate_four_body_on(0.6, 1.3, &reg, 3, targets).unwrap();
    let p = PauliString::xxxx(targets).unwrap().matrix(6).unwrap();
    let theta: f64 = 0.6 * 1.3;
    let px = p.mul_vec(reg.amplitudes());
    for (i, a) in out.amplitudes().iter().enumerate() {
        let want = reg.amplitudes()[i] * theta.cos() - px[i] * C::new(0.0, theta.sin());
        assert!((a - want).norm() < 1e-10);
    }
    assert!(out.population_one(3).unwrap() < 1e-12);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_circuit::<f64>("# qubits 2\nH 0\nRZ 1\n").unwrap_err();
    assert!(err.to_string().contains('3'), "{err}");
    assert!(parse_circuit::<f64>("CNOT 0 0\n").is_err());
    assert!(parse_circuit::<f64>("# qubits 2\nH 5\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circuits_preserve_norm(c in circuit_strategy(), seed in any::<u64>()) {
        let out = run_circuit(&random_register(c.n_qubits(), seed), &c).unwrap();
        let norm: f64 = out.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn text_format_round_trips(c in circuit_strategy()) {
        let back = parse_circuit::<f64>(&write_circuit(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn unitary_matches_state_simulation(c in circuit_strategy(), seed in any::<u64>()) {
        let reg = random_register(c.n_qubits(), seed);
        let via_matrix = circuit_unitary(&c).unwrap().mul_vec(reg.amplitudes());
        let out = run_circuit(&reg, &c).unwrap();
        for (a, b) in out.amplitudes().iter().zip(&via_matrix) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_circuit_undoes(c in circuit_strategy(), seed in any::<u64>()) {
        let inverse: Vec<Gate<f64>> = c.gates().iter().rev().map(|g| match *g {
            Gate::Rz(q, p) => Gate::Rz(q, -p),
            Gate::Rx(q, p) => Gate::Rx(q, -p),
            Gate::Ry(q, p) => Gate::Ry(q, -p),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            other => other,
        }).collect();
        let reg = random_register(c.n_qubits(), seed);
        let back = run_circuit(&run_circuit(&reg, &c).unwrap(), &Circuit::from_gates(c.n_qubits(), inverse).unwrap()).unwrap();
        for (a, b) in back.amplitudes().iter().zip(reg.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }
}
