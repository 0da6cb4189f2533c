use proptest::prelude::*;

use qcorr::fuzz::{find_property, property_names};
use qcorr::io::{state_from_json, state_to_json};
use qcorr::measures::{cmi, mutual_information, von_neumann_entropy, CmiFormula};
use qcorr::random::random_state;
use qcorr::tensor::{tensor_product, trace_distance_half};
use qcorr::{State, SubsystemLayout};

fn layout(dims: &[usize]) -> SubsystemLayout {
    let labels = ["A", "B", "C", "D"];
    SubsystemLayout::new(labels.iter().copied().zip(dims.iter().copied())).unwrap()
}

fn state(dims: &[usize], rank: usize, seed: u64) -> State {
    let l = layout(dims);
    let r = rank.clamp(1, l.total_dim());
    random_state(&l, r, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn registry_properties_hold_on_arbitrary_seeds(seed in any::<u64>()) {
        for name in property_names() {
            let p = find_property(name).unwrap();
            let s = p.run(seed).unwrap_or_else(|e| panic!("{name} seed {seed}: {e}"));
            prop_assert!(s.margin >= 0.0, "{} seed {} dims {:?} margin {:e}", name, seed, s.dims, s.margin);
        }
    }

    #[test]
    fn entropy_lies_between_zero_and_ln_dim(d in 1usize..7, rank in 1usize..7, seed in any::<u64>()) {
        let s = state(&[d], rank, seed);
        let h = von_neumann_entropy(&s).unwrap();
        prop_assert!(h >= -1e-12 && h <= (d as f64).ln() + 1e-12);
    }

    #[test]
    fn mutual_information_is_symmetric_and_bounded(da in 1usize..4, db in 1usize..4, rank in 1usize..10, seed in any::<u64>()) {
        let s = state(&[da, db], rank, seed);
        let ab = mutual_information(&s, &[&["A"][..], &["B"]]).unwrap().value;
        let ba = mutual_information(&s, &[&["B"][..], &["A"]]).unwrap().value;
        prop_assert!((ab - ba).abs() <= 1e-10);
        prop_assert!(ab >= -1e-10 && ab <= 2.0 * (da.min(db) as f64).ln() + 1e-10);
    }

    #[test]
    fn cmi_is_invariant_under_subsystem_reordering(rank in 1usize..9, seed in any::<u64>()) {
        let s = state(&[2, 2, 2], rank, seed);
        let r = s.reordered(&["C", "A", "B"]).unwrap();
        let x = cmi(&s, &["A"], &["C"], &["B"], CmiFormula::Direct).unwrap().value;
        let y = cmi(&r, &["A"], &["C"], &["B"], CmiFormula::Direct).unwrap().value;
        let z = cmi(&s, &["C"], &["A"], &["B"], CmiFormula::Direct).unwrap().value;
        prop_assert!((x - y).abs() <= 1e-10 && (x - z).abs() <= 1e-10);
    }

    #[test]
    fn product_states_carry_no_mutual_information(da in 1usize..4, db in 1usize..4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_state(&SubsystemLayout::new([("A", da)]).unwrap(), da, s1).unwrap();
        let b = random_state(&SubsystemLayout::new([("B", db)]).unwrap(), 1, s2).unwrap();
        let ab: State = tensor_product(&a, &b).unwrap();
        prop_assert!(mutual_information(&ab, &[&["A"][..], &["B"]]).unwrap().value.abs() <= 1e-10);
    }

    #[test]
    fn trace_distance_is_a_metric(d in 2usize..5, seeds in any::<(u64, u64, u64)>()) {
        let (x, y, z) = (state(&[d], d, seeds.0), state(&[d], 1, seeds.1), state(&[d], 2, seeds.2));
        let dxy = trace_distance_half(&x, &y).unwrap();
        let dyx = trace_distance_half(&y, &x).unwrap();
        let dxz = trace_distance_half(&x, &z).unwrap();
        let dzy = trace_distance_half(&z, &y).unwrap();
        prop_assert!((dxy - dyx).abs() <= 1e-12);
        prop_assert!(dxy <= dxz + dzy + 1e-12 && dxy <= 1.0 + 1e-12);
    }

    #[test]
    fn state_json_round_trip_is_lossless(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        let s = state(&[da, db], da * db, seed);
        let back = state_from_json(&state_to_json(&s).unwrap()).unwrap();
        prop_assert_eq!(back.matrix(), s.matrix());
        prop_assert_eq!(back.layout(), s.layout());
    }
}
