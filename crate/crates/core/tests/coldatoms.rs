use manybody::coldatoms::{
    band_parameters, bh_critical_point, bh_energy_per_site, bh_minimize_numeric,
    bh_optimal_epsilon, helium_energy, helium_minimize, mott_lobe_closed, mott_lobes,
    BoseHubbardMF, LatticeParams,
};
use proptest::prelude::*;

#[test]
fn helium_minimum() {
    let (z, e) = helium_minimize::<f64>();
    assert_eq!(z, 27.0 / 16.0);
    assert_eq!(e, -729.0 / 256.0);
    assert!(helium_energy(2.0f64).unwrap() > e);
    assert!(helium_energy(f64::NAN).is_err());
}

#[test]
fn mott_transition_at_critical_point() {
    for n in 1..5u32 {
        let uc: f64 = bh_critical_point(n).unwrap();
        assert_eq!(bh_optimal_epsilon(n, 0.999 / uc).unwrap(), 0.0);
        assert!(bh_optimal_epsilon(n, 1.001 / uc).unwrap() > 0.0);
    }
    assert!(bh_critical_point::<f64>(0).is_err());
}

#[test]
fn first_lobe_closes() {
    assert!(!mott_lobe_closed(1, 0.4f64).unwrap());
    assert!(mott_lobe_closed(1, 0.6f64).unwrap());
    assert_eq!(mott_lobes(2, 0.0f64).unwrap(), (1.0, 2.0));
}

#[test]
fn band_parameters_deep_and_shallow() {
    let deep = band_parameters(&LatticeParams::reduced(20.0f64, 0.01)).unwrap();
    let shallow = band_parameters(&LatticeParams::reduced(2.0f64, 0.01)).unwrap();
    assert!(deep.deep_lattice && !shallow.deep_lattice);
    assert!(deep.w < shallow.w);
    assert!(deep.u_onsite > shallow.u_onsite);
    assert!(deep.a_osc < shallow.a_osc);
    assert!(band_parameters(&LatticeParams::reduced(-1.0f64, 0.01)).is_err());
}

proptest! {
    #[test]
    fn numeric_minimum_matches_stationarity(n in 1u32..6, x in 0.0f64..0.5, mu in 0.0f64..3.0) {
        let m = BoseHubbardMF::new(n, x, 0.0, mu).unwrap();
        let (best, e) = bh_minimize_numeric(&m).unwrap();
        let eps = bh_optimal_epsilon(n, x).unwrap();
        prop_assert!((best.epsilon - eps).abs() < 1e-6);
        let at_eps = bh_energy_per_site(&m.with_epsilon(eps).unwrap()).unwrap();
        prop_assert!(e <= at_eps + 1e-12);
    }

    #[test]
    fn lobe_edges_move_toward_each_other(n in 1u32..8, x in 0.0f64..0.3) {
        let (lo0, hi0) = mott_lobes(n, 0.0f64).unwrap();
        let (lo, hi) = mott_lobes(n, x).unwrap();
        prop_assert!(lo >= lo0 && hi <= hi0);
    }
}
