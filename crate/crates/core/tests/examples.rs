//! Worked examples through the public API, end to end.

use ellcoh::formal_group::fgl_log;
use ellcoh::number::{q, Frac};
use ellcoh::{
    cohomology_triple, divisor_of_rep, solve_character_eq, splitting_pair, theory_value, BiSeries,
    Curve, Direction, FiniteSubgroup, FormalGroup, Sign, UniSeries, Window, XDivisor,
};

fn dir(a: i64, b: i64) -> Direction {
    Direction::new(a, b).unwrap()
}

#[test]
fn logarithm_is_normalized() {
    for c in ["0,0,0,1,0", "0,0,0,0,1", "1,2,0,-1,1"] {
        let g = FormalGroup::new(c.parse().unwrap(), 8).unwrap();
        assert_eq!(g.log().coeff(0), q(0));
        assert_eq!(g.log().coeff(1), q(1), "{c}");
    }
    let additive = BiSeries::var(0, 6).add(&BiSeries::var(1, 6));
    assert_eq!(fgl_log(&additive), UniSeries::var(6));
}

#[test]
fn hatted_coordinates_are_linear() {
    let g = FormalGroup::new(Curve::from_ints([0, 0, 0, -1, 1]).unwrap(), 8).unwrap();
    let lhs = g.coord_that(&dir(1, 2), 3);
    let rhs = g
        .coord_that(&dir(1, 0), 1)
        .scale(&q(3))
        .add(&g.coord_that(&dir(0, 1), 1).scale(&q(6)));
    assert_eq!(lhs, rhs);
}

#[test]
fn fundamental_relation_for_a_cyclic_subgroup() {
    let f: FiniteSubgroup = "1/3,1/3".parse().unwrap();
    let p = splitting_pair(&f, 50).unwrap();
    assert_eq!(p.split_a, (dir(-1, 1), 1));
    assert_eq!(p.split_b, (dir(1, 0), 3));
    assert_eq!(solve_character_eq(&p, &dir(0, 1)).unwrap(), (3, 1));
    let g = FormalGroup::new(Curve::from_ints([0, 0, 0, -1, 1]).unwrap(), 8).unwrap();
    assert!(g.check_fundrel(&p, &dir(0, 1)).unwrap());
}

#[test]
fn klein_four_group() {
    let a: FiniteSubgroup = "1/2,0;0,1/2".parse().unwrap();
    let b: FiniteSubgroup = "1/2,0;1/2,1/2".parse().unwrap();
    assert_eq!(a, b);
    assert_eq!(a.order(), 4);
    assert!(a.contains((Frac::new(1, 2), Frac::new(1, 2))));
    let p = splitting_pair(&a, 50).unwrap();
    assert_eq!((p.split_a, p.split_b), ((dir(1, 0), 2), (dir(0, 1), 2)));
}

#[test]
fn sphere_values() {
    let cases = [
        ("(1,0):1,(0,1):1", Sign::Plus, (1, 0)),
        ("(1,0):1", Sign::Plus, (1, 1)),
        ("(1,0):1,(0,1):1", Sign::Minus, (1, 0)),
        ("", Sign::Plus, (2, 2)),
    ];
    for (rep, sign, (even, odd)) in cases {
        let v = theory_value(&rep.parse().unwrap(), sign).unwrap();
        assert_eq!((v.even, v.odd), (even, odd), "{rep} {sign}");
    }
}

#[test]
fn divisor_of_a_doubled_character() {
    let d = divisor_of_rep(&"(2,0):1".parse().unwrap()).unwrap();
    assert_eq!(d, XDivisor::new([((dir(1, 0), 1), 1), ((dir(1, 0), 2), 1)]));
    assert_eq!(d.direction_degree(&dir(1, 0)), 4);
    let t = cohomology_triple(&d, Sign::Minus).unwrap();
    assert_eq!((t.h0, t.h1, t.h2), (0, 4, 4));
}

#[test]
fn intersections_of_standard_components() {
    let d1 = XDivisor::single(dir(1, 0), 1);
    let d2 = XDivisor::single(dir(0, 1), 1);
    assert_eq!(d1.add(&d2).self_intersection(), 2);
    assert_eq!(d1.scale(2).add(&d2.scale(3)).self_intersection(), 12);
    assert_eq!(
        ellcoh::torsion::intersection_number(
            &XDivisor::single(dir(1, 1), 1),
            &XDivisor::single(dir(-1, 1), 1)
        ),
        4
    );
}

#[test]
fn cousin_windows() {
    let c = Curve::from_ints([0, 0, 0, -1, 1]).unwrap();
    let w = Window::new(c.clone(), &[dir(1, 0), dir(0, 1)], 2, 8).unwrap();
    assert!(w.exactness_report().unwrap().all_pass());
    let w = Window::new(c.clone(), &[dir(1, 1), dir(-1, 1), dir(1, 0)], 2, 10).unwrap();
    let r = w.exactness_report().unwrap();
    assert!(r.all_pass());
    assert_eq!(r.ranks.rank_d0, r.ranks.dim_ker_d1);
    assert!(Window::new(c, &[dir(1, 0), dir(1, 0)], 2, 8).is_err());
}
