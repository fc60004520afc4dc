use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use railcount::atam::{check_layer_computes, iterate_layers, state_to_bits, GlueCurve, Side};
use railcount::counterlab::{random_local_circuit, SectionShape};
use railcount::exemplars::{build_ibc, build_zigzig, IbcSpec};
use railcount::permfn::{inversion_count, recompose};
use railcount::railway::lift_gate;
use railcount::{io, FiniteFunction, Parity};

fn function(max_m: usize) -> impl Strategy<Value = FiniteFunction> {
    (1..=max_m).prop_flat_map(|m| {
        prop::collection::vec(0..m as u32, m).prop_map(|t| FiniteFunction::new(t).unwrap())
    })
}

fn pair(max_m: usize) -> impl Strategy<Value = (FiniteFunction, FiniteFunction)> {
    (1..=max_m).prop_flat_map(|m| {
        let f = prop::collection::vec(0..m as u32, m);
        (f.clone(), f).prop_map(|(a, b)| (FiniteFunction::new(a).unwrap(), FiniteFunction::new(b).unwrap()))
    })
}

fn permutation(max_m: usize) -> impl Strategy<Value = FiniteFunction> {
    (1..=max_m).prop_flat_map(|m| {
        Just((0..m as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|t| FiniteFunction::new(t).unwrap())
    })
}

fn perm_pair(max_m: usize) -> impl Strategy<Value = (FiniteFunction, FiniteFunction)> {
    (1..=max_m).prop_flat_map(|m| {
        let p = Just((0..m as u32).collect::<Vec<_>>()).prop_shuffle();
        (p.clone(), p).prop_map(|(a, b)| (FiniteFunction::new(a).unwrap(), FiniteFunction::new(b).unwrap()))
    })
}

/// A monotone staircase of east and north unit steps between lattice
/// corners, which sit at odd doubled coordinates.
fn curve() -> impl Strategy<Value = GlueCurve> {
    prop::collection::vec(any::<bool>(), 1..12).prop_map(|steps| {
        let (mut x, mut y) = (1i32, 1i32);
        let mut mids = Vec::new();
        for north in steps {
            let (dx, dy) = if north { (0, 1) } else { (1, 0) };
            mids.push((x + dx, y + dy));
            x += 2 * dx;
            y += 2 * dy;
        }
        GlueCurve::new(mids).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ramification_is_lost_image(f in function(40)) {
        prop_assert_eq!(f.ramification_degree(), f.m() - f.image_size());
        let collisions: usize = f.antecedent_counts().iter().map(|&c| (c as usize).saturating_sub(1)).sum();
        prop_assert_eq!(f.ramification_degree(), collisions);
        prop_assert_eq!(f.classify().is_bijection(), f.ramification_degree() == 0);
    }

    #[test]
    fn ramification_of_a_composite((f, g) in pair(30)) {
        let h = f.compose(&g).unwrap();
        prop_assert!(h.ramification_degree() >= f.ramification_degree().max(g.ramification_degree()));
        prop_assert!(h.ramification_degree() <= f.ramification_degree() + g.ramification_degree());
    }

    #[test]
    fn parity_is_multiplicative((f, g) in perm_pair(30)) {
        let h = f.compose(&g).unwrap();
        prop_assert_eq!(h.parity().unwrap(), f.parity().unwrap().compose(g.parity().unwrap()));
    }

    #[test]
    fn swaps_recompose(f in permutation(40)) {
        let swaps = f.swap_decomposition().unwrap();
        prop_assert_eq!(swaps.len() as u64, inversion_count(f.table()));
        prop_assert_eq!(recompose(f.m(), &swaps).unwrap(), f.clone());
        let p = Parity::from_count(swaps.len() as u64);
        prop_assert_eq!(f.parity().unwrap(), p);
        prop_assert_eq!(f.swap_parity().unwrap(), p);
    }

    #[test]
    fn side_moves_with_the_curve(c in curve(), v in (-6i32..6, -6i32..6), p in (-8i32..8, -8i32..8)) {
        let moved = c.translate(v);
        prop_assert_eq!(moved.side((p.0 + v.0, p.1 + v.1)), c.side(p));
        // Far enough east every tile is right of the cut.
        prop_assert_eq!(c.side((100, p.1)), Side::Right);
    }

    #[test]
    fn function_text_round_trips(f in function(20)) {
        let text = io::emit_function(&f);
        let back = io::parse_function(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(io::emit_function(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_matches_its_gates(seed in any::<u64>(), n in 2usize..6, sections in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SectionShape::Random { max_width: n - 1 };
        let c = random_local_circuit(&mut rng, n, sections, &shape).unwrap();
        let mut f = FiniteFunction::identity(1 << n).unwrap();
        for g in c.gates() {
            f = lift_gate(g, n).unwrap().compose(&f).unwrap();
        }
        prop_assert_eq!(&c.function(), &f);
        for x in 0..1u32 << n {
            prop_assert_eq!(c.eval(x).unwrap() as usize, f.apply(x as usize));
        }
        // A local circuit never cycles through every state.
        prop_assert!(c.counter_value().counter_value < 1 << n);
        prop_assert!(c.verify_atomic_restrictions().unwrap().pass);

        let text = io::emit_circuit(&c);
        let back = io::parse_circuit(&text).unwrap();
        prop_assert_eq!(io::emit_circuit(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_ibc_layers_compute(seed in any::<u64>(), n in prop::sample::select(vec![4usize, 6])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = IbcSpec::random(&mut rng, n, 1).unwrap();
        let sys = build_ibc(&spec).unwrap();
        let report = check_layer_computes(&sys).unwrap();
        prop_assert!(report.valid);
        let c = railcount::exemplars::ibc_circuit(&spec).unwrap();
        prop_assert_eq!(&report.f, &c.function());
        prop_assert!(c.counter_value().counter_value < 1 << n);

        let text = io::emit_system(&sys);
        let back = io::parse_system(&text).unwrap();
        prop_assert_eq!(io::emit_system(&back), text);
    }
}

#[test]
fn zigzig_columns_count_up() {
    for n in 2..=4 {
        let sys = build_zigzig(n).unwrap();
        let m = 1u32 << n;
        for x in 0..m {
            let reads = iterate_layers(&sys, x, m as usize + 1, None).unwrap();
            for (j, read) in reads.iter().enumerate() {
                assert_eq!(read, &state_to_bits((x + j as u32) % m, n), "n={n} x={x} j={j}");
            }
        }
    }
}
