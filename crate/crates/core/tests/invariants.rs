use coupling_lab::crossed::{cp_multiply, cp_trace, CrossedProduct};
use coupling_lab::heisenberg::{commutator_turns, cross_lattice_commutator, h_multiply, HeisenbergElement, LatticeIndex};
use coupling_lab::operators::{mvn_coupling, side_algebra, Witness};
use coupling_lab::rational::{frac, parse_rational, q, Q};
use coupling_lab::symmetric::{
    character_value, coupling_formula, in_x0r, in_xprime0r, mc_coupling, pseudogroupoid_check, BernoulliSpec,
    SeqWindow,
};
use coupling_lab::systems::{
    check_axioms, dyn_coupling, parse_system_description, product_model, PairedSystem, Side, SystemDescription,
};
use num::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_q() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn element() -> impl Strategy<Value = HeisenbergElement> {
    (small_q(), small_q(), small_q()).prop_map(|(a, b, t)| HeisenbergElement::new(a, b, t))
}

/// Descending positive weights summing to at most one, with the remainder as tail mass.
fn spec() -> impl Strategy<Value = BernoulliSpec> {
    prop::collection::vec(1i64..=6, 1..=4).prop_flat_map(|mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let total: i64 = parts.iter().sum();
        (Just(parts), 0i64..=total).prop_map(move |(parts, tail)| {
            let denom = total + tail;
            let weights = parts.iter().map(|&p| q(p, denom)).collect();
            BernoulliSpec::with_tail(weights, q(tail, denom)).expect("weights sum to one")
        })
    })
}

fn product(max: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=max, 1..=max)
}

fn model(m: usize, n: usize) -> PairedSystem {
    product_model(m, n).expect("product model")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heisenberg_is_associative(x in element(), y in element(), z in element()) {
        prop_assert_eq!(h_multiply(&h_multiply(&x, &y), &z), h_multiply(&x, &h_multiply(&y, &z)));
    }

    #[test]
    fn commutator_is_antisymmetric_and_bilinear(x in element(), y in element(), z in element()) {
        prop_assert!(frac(&(commutator_turns(&x, &y) + commutator_turns(&y, &x))).is_zero());
        let xz = h_multiply(&x, &z);
        let lhs = commutator_turns(&xz, &y);
        prop_assert_eq!(lhs, frac(&(commutator_turns(&x, &y) + commutator_turns(&z, &y))));
    }

    #[test]
    fn cross_lattices_commute(
        l1 in 1i64..=400, l2 in 1i64..=400,
        a in (-50i64..=50, -50i64..=50, -50i64..=50),
        b in (-50i64..=50, -50i64..=50, -50i64..=50),
    ) {
        let (l1, l2) = (Q::from_integer(l1.into()), Q::from_integer(l2.into()));
        let t = cross_lattice_commutator(LatticeIndex::new(a.0, a.1, a.2), LatticeIndex::new(b.0, b.1, b.2), &l1, &l2);
        prop_assert!(t.is_zero());
    }

    #[test]
    fn rationals_round_trip(x in small_q()) {
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn coupling_formula_is_power_of_collision(s in spec(), r in 0u32..6) {
        let collision: Q = s.weights().iter().map(|a| a * a).sum();
        prop_assert_eq!(coupling_formula(&s, r), collision.pow(r as i32));
        prop_assert!(coupling_formula(&s, r + 1) <= coupling_formula(&s, r));
    }

    #[test]
    fn characters_are_multiplicative(
        s in spec(),
        a in prop::collection::vec(1usize..=5, 0..4),
        b in prop::collection::vec(1usize..=5, 0..4),
    ) {
        let joined: Vec<usize> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(character_value(&joined, &s), character_value(&a, &s) * character_value(&b, &s));
        prop_assert!(character_value(&joined, &s) <= Q::one());
    }

    #[test]
    fn shifted_symmetric_windows_lie_in_x0r(r in 0usize..4, raw in prop::collection::vec(0usize..3, 8)) {
        let pos = raw[..2 * r.max(1)].to_vec();
        let w = SeqWindow::shifted_symmetric(r, pos).unwrap();
        prop_assert!(in_x0r(&w));
        if r == 0 {
            prop_assert!(in_xprime0r(&w));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn double_commutant_of_side_algebra((m, n) in product(4)) {
        let sys = model(m, n);
        for side in [Side::G, Side::H] {
            let a = side_algebra(&sys, side).unwrap();
            let double = a.commutant().unwrap().commutant().unwrap();
            prop_assert!(double.same_span(&a));
        }
    }

    #[test]
    fn coupling_reciprocity((m, n) in product(4), seed in any::<u64>()) {
        let sys = model(m, n);
        let a_g = side_algebra(&sys, Side::G).unwrap();
        let a_h = side_algebra(&sys, Side::H).unwrap();
        let cg = mvn_coupling(&a_g, &Witness::auto(seed)).unwrap();
        let ch = mvn_coupling(&a_h, &Witness::auto(seed)).unwrap();
        prop_assert!((cg.lambda * ch.lambda - 1.0).abs() <= 1e-8);
        prop_assert_eq!(&cg.lambda_rational * &ch.lambda_rational, Q::one());
        prop_assert!(cg.spread <= 1e-8);
    }

    #[test]
    fn dynamical_coupling_is_scale_and_relabel_invariant((m, n) in product(5), k in 1i64..=9) {
        let sys = model(m, n);
        let base = dyn_coupling(&sys).unwrap();
        prop_assert_eq!(&base.lambda_gh, &q(m as i64, n as i64));
        prop_assert_eq!(&base.lambda_gh * &base.lambda_hg, Q::one());
        let scaled = dyn_coupling(&sys.scaled(&q(k, 7)).unwrap()).unwrap();
        prop_assert_eq!(&scaled.lambda_gh, &base.lambda_gh);
        let reversed = sys.reversed();
        prop_assert!(check_axioms(&reversed).all());
        prop_assert_eq!(dyn_coupling(&reversed).unwrap().lambda_gh, base.lambda_gh);
    }

    #[test]
    fn system_descriptions_round_trip((m, n) in product(5)) {
        let sys = model(m, n);
        let text = SystemDescription::from_system(&sys).to_toml();
        let back = parse_system_description(&text).unwrap();
        prop_assert_eq!(back.labels(), sys.labels());
        prop_assert_eq!(dyn_coupling(&back).unwrap(), dyn_coupling(&sys).unwrap());
    }

    #[test]
    fn crossed_product_trace_is_tracial_and_positive((m, n) in product(4), seed in any::<u64>()) {
        let sys = model(m, n);
        for side in [Side::G, Side::H] {
            let cp = CrossedProduct::new(&sys, side).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = cp.random_element(&mut rng, 4);
            let b = cp.random_element(&mut rng, 4);
            let ab = cp_trace(&cp, &cp_multiply(&cp, &a, &b).unwrap()).unwrap();
            let ba = cp_trace(&cp, &cp_multiply(&cp, &b, &a).unwrap()).unwrap();
            prop_assert!((ab - ba).norm() <= 1e-12);
            let aa = cp_trace(&cp, &cp_multiply(&cp, &cp.adjoint(&a).unwrap(), &a).unwrap()).unwrap();
            prop_assert!(aa.re >= -1e-12 && aa.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn pseudogroupoid_axioms_hold(s in spec(), seed in any::<u64>()) {
        prop_assume!(s.alphabet_size() <= 3);
        let rep = pseudogroupoid_check(0, 2, &s, 50, seed).unwrap();
        prop_assert!(rep.all_pass(), "{:?}", rep);
    }

    #[test]
    fn monte_carlo_is_reproducible(s in spec(), r in 0u32..3, seed in any::<u64>()) {
        let a = mc_coupling(&s, r, 2_000, seed).unwrap();
        let b = mc_coupling(&s, r, 2_000, seed).unwrap();
        prop_assert_eq!(a.mc_mean, b.mc_mean);
        prop_assert_eq!(a.exact, coupling_formula(&s, r));
    }
}
