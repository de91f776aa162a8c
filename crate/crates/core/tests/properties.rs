//! Randomized invariants over the public API.

use std::collections::BTreeMap;

use ellcoh::cohomology::kunneth_oracle_divisor;
use ellcoh::formal_group::{fgl, fgl_log, n_series};
use ellcoh::number::{q, Frac};
use ellcoh::oracle::{closure, kernel_intersection, n_index_brute};
use ellcoh::torsion::{exact_order_count, intersection_number};
use ellcoh::{
    cohomology_triple, decompose_character, n_index, normalize_direction, solve_character_eq,
    splitting_pair, subgroup_from_generators, BiSeries, Character, Curve, Direction,
    FiniteSubgroup, KLocal, Representation, Sign, UniSeries, Window, XDivisor,
};
use proptest::prelude::*;

fn curve() -> impl Strategy<Value = Curve> {
    prop::array::uniform5(-2i64..=2).prop_filter_map("singular", |a| Curve::from_ints(a).ok())
}

fn direction() -> impl Strategy<Value = Direction> {
    (-4i64..=4, -4i64..=4)
        .prop_filter("zero", |(a, b)| (*a, *b) != (0, 0))
        .prop_map(|(a, b)| Direction::new(a, b).unwrap())
}

fn subgroup() -> impl Strategy<Value = FiniteSubgroup> {
    prop::collection::vec((0i64..6, 0i64..6, 1i64..=6), 0..3).prop_map(|gens| {
        let gens: Vec<(Frac, Frac)> = gens
            .into_iter()
            .map(|(x, y, d)| (Frac::new(x, d), Frac::new(y, d)))
            .collect();
        subgroup_from_generators(&gens)
    })
}

fn effective_divisor() -> impl Strategy<Value = XDivisor> {
    prop::collection::vec((direction(), 1u64..=3, 0i64..=3), 0..4)
        .prop_map(|terms| XDivisor::new(terms.into_iter().map(|(d, j, c)| ((d, j), c))))
}

fn divisor() -> impl Strategy<Value = XDivisor> {
    prop::collection::vec((direction(), 1u64..=3, -3i64..=3), 0..4)
        .prop_map(|terms| XDivisor::new(terms.into_iter().map(|(d, j, c)| ((d, j), c))))
}

fn uni(prec: usize) -> impl Strategy<Value = UniSeries> {
    prop::collection::vec(-5i64..=5, prec).prop_map(move |c| UniSeries::from_ints(&c, prec))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn group_law_is_commutative_with_unit(c in curve()) {
        let f = fgl(&c, 7);
        prop_assert_eq!(f.swap(0, 1), f.clone());
        prop_assert_eq!(f.at_zero(1), BiSeries::var(0, 7));
    }

    #[test]
    fn log_turns_multiplication_into_scaling(c in curve(), n in -4i64..=4) {
        let f = fgl(&c, 8);
        let log = fgl_log(&f);
        let lhs = log.compose(&n_series(&f, n));
        prop_assert_eq!(lhs, log.scale(&q(n)));
    }

    #[test]
    fn series_inverse(a in uni(8)) {
        prop_assume!(a.coeff(0) != q(0));
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&inv), UniSeries::one(8));
    }

    #[test]
    fn series_product_is_associative(a in uni(6), b in uni(6), c in uni(6)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn normalization_is_idempotent(a in -20i64..=20, b in -20i64..=20) {
        prop_assume!((a, b) != (0, 0));
        let d = normalize_direction(a, b).unwrap();
        prop_assert_eq!(normalize_direction(d.lambda(), d.mu()).unwrap(), d);
        let (e, n) = decompose_character(Character::new(a, b)).unwrap();
        prop_assert_eq!((n * e.lambda(), n * e.mu()), (a, b));
        prop_assert_eq!(d.det(&d.complement()).abs(), 1);
    }

    #[test]
    fn n_index_matches_enumeration(f in subgroup(), d in direction()) {
        prop_assert_eq!(n_index(&f, &d), n_index_brute(&f, &d));
    }

    #[test]
    fn splitting_pair_recovers_the_subgroup(f in subgroup()) {
        prop_assume!(f.order() <= 36);
        let p = splitting_pair(&f, 50).unwrap();
        prop_assert_ne!(p.split_a.0, p.split_b.0);
        prop_assert!(p.split_a.1 <= p.split_b.1);
        let elems: Vec<_> = kernel_intersection(&p).into_iter().collect();
        let mut expected = f.elements();
        expected.sort();
        prop_assert_eq!(elems, expected);
        for d in Direction::grid(3) {
            let (r, s) = solve_character_eq(&p, &d).unwrap();
            let nd = p.n_index(&d);
            let (ua, ub) = (p.split_a.0.character(p.split_a.1), p.split_b.0.character(p.split_b.1));
            prop_assert_eq!(nd * d.lambda(), r * ua.a + s * ub.a);
            prop_assert_eq!(nd * d.mu(), r * ua.b + s * ub.b);
        }
    }

    #[test]
    fn subgroup_text_round_trips(f in subgroup()) {
        let g: FiniteSubgroup = f.to_string().parse().unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(closure(&f.generators()).len() as u64, f.order());
    }

    #[test]
    fn representation_text_round_trips(summands in prop::collection::vec(((-3i64..=3, -3i64..=3), 1u32..4), 0..4)) {
        let summands: Vec<_> = summands
            .into_iter()
            .filter(|((a, b), _)| (*a, *b) != (0, 0))
            .map(|((a, b), m)| (Character::new(a, b), m))
            .collect();
        let v = Representation::new(summands).unwrap();
        let w: Representation = v.to_string().parse().unwrap();
        prop_assert_eq!(w, v);
    }

    #[test]
    fn divisor_text_round_trips(d in divisor()) {
        let e: XDivisor = d.to_string().parse().unwrap();
        prop_assert_eq!(e, d);
    }

    #[test]
    fn intersection_is_symmetric_and_bilinear(a in divisor(), b in divisor(), c in divisor(), k in -3i64..=3) {
        prop_assert_eq!(intersection_number(&a, &b), intersection_number(&b, &a));
        prop_assert_eq!(
            intersection_number(&a.add(&b.scale(k)), &c),
            intersection_number(&a, &c) + k * intersection_number(&b, &c)
        );
    }

    #[test]
    fn effective_self_intersection(d in effective_divisor()) {
        let s = d.self_intersection();
        prop_assert!(s >= 0);
        prop_assert_eq!(s == 0, d.directions().len() <= 1);
    }

    #[test]
    fn riemann_roch_and_serre(d in effective_divisor()) {
        let plus = cohomology_triple(&d, Sign::Plus).unwrap();
        let minus = cohomology_triple(&d, Sign::Minus).unwrap();
        prop_assert_eq!(2 * plus.euler_characteristic(), d.self_intersection());
        prop_assert_eq!(minus, plus.reversed());
    }

    #[test]
    fn axis_divisors_agree_with_kunneth(a in prop::collection::btree_map(1u64..=3, 0i64..=3, 0..3),
                                        b in prop::collection::btree_map(1u64..=3, 0i64..=3, 0..3),
                                        minus in any::<bool>()) {
        let x = Direction::new(1, 0).unwrap();
        let y = Direction::new(0, 1).unwrap();
        let d = XDivisor::new(
            a.iter().map(|(j, c)| ((x, *j), *c)).chain(b.iter().map(|(j, c)| ((y, *j), *c))),
        );
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        prop_assert_eq!(cohomology_triple(&d, sign).unwrap(), kunneth_oracle_divisor(&d, sign).unwrap());
    }

    #[test]
    fn divisor_sum_of_jordan_totients(n in 1u64..=200) {
        let s: u64 = (1..=n).filter(|j| n % j == 0).map(exact_order_count).sum();
        prop_assert_eq!(s, n * n);
    }
}

fn window() -> &'static Window {
    use std::sync::OnceLock;
    static W: OnceLock<Window> = OnceLock::new();
    W.get_or_init(|| {
        let c = Curve::from_ints([0, 0, 0, -1, 1]).unwrap();
        let dirs = [
            Direction::new(1, 1).unwrap(),
            Direction::new(-1, 1).unwrap(),
            Direction::new(1, 0).unwrap(),
        ];
        Window::new(c, &dirs, 2, 8).unwrap()
    })
}

fn numerator(prec: usize) -> impl Strategy<Value = BiSeries> {
    prop::collection::btree_map((0u32..4, 0u32..4), -4i64..=4, 0..6).prop_map(move |m| {
        BiSeries::from_terms(m.into_iter().map(|((a, b), c)| ([a, b], q(c))), prec)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cousin_composite_vanishes(num in numerator(8), e in prop::array::uniform3(0u32..=2)) {
        let w = window();
        let exps: BTreeMap<Direction, u32> = w.directions().into_iter().zip(e).collect();
        let f = KLocal::new(num, exps);
        let classes = w.d0(&f).unwrap();
        prop_assert!(w.d1(&classes).unwrap().is_zero());
    }

    #[test]
    fn euler_action_is_nilpotent_and_linear(p in 1u32..=2, qq in -4i64..=2, c in -3i64..=3, i in 0usize..3) {
        let w = window();
        let d = w.directions()[i];
        let x = w.h1_monomial(&d, p, qq, q(c), 3).unwrap();
        let y = w.h1_monomial(&d, 2, -1, q(1), 3).unwrap();
        let sum = w.act_c(&d, &x.add(&y).unwrap()).unwrap();
        prop_assert_eq!(sum, w.act_c(&d, &x).unwrap().add(&w.act_c(&d, &y).unwrap()).unwrap());
        let twice = w.act_c(&d, &w.act_c(&d, &w.act_c(&d, &x).unwrap()).unwrap()).unwrap();
        prop_assert!(twice.is_zero());
    }
}
