//! Brute-force enumerations used as independent checks.
//!
//! Everything here is deliberately naive: counts come from walking finite
//! grids of torsion points, never from the closed formulas they validate.

use std::collections::{BTreeMap, BTreeSet};

use crate::lattice::{Direction, FiniteSubgroup, FiniteSubgroupProfile};
use crate::number::{frac_mod1, gcd, lcm, Frac};
use crate::torsion::all_points;

/// Number of points of exact order `n` in `(Z/n)^2`, by enumeration.
pub fn exact_order_count_brute(n: i64) -> u64 {
    let mut count = 0;
    for x in 0..n {
        for y in 0..n {
            if gcd(gcd(x, y), n) == 1 {
                count += 1;
            }
        }
    }
    count
}

/// `#(D_{d,j} ∩ D_{e,l})` for all `j, l <= max_jl`, counted over `E[M]^2`.
///
/// Every intersection point is killed by `|det(d,e)|·lcm(j,l)`, so
/// `M = |det|·lcm(1..=max_jl)` sees all of them.
pub fn intersection_counts(d: &Direction, e: &Direction, max_jl: i64) -> BTreeMap<(i64, i64), u64> {
    let det = d.det(e).abs();
    assert!(det != 0, "parallel directions never meet transversally");
    let l = (1..=max_jl).fold(1, lcm);
    let m = det * l;
    let mut counts: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    for p in all_points(m) {
        let a = p.project_order(d.lambda(), d.mu());
        let b = p.project_order(e.lambda(), e.mu());
        if a <= max_jl && b <= max_jl {
            *counts.entry((a, b)).or_insert(0) += 1;
        }
    }
    counts
}

/// Elements of `H_A^{n_A} ∩ H_B^{n_B}` by scanning the `|det|`-torsion grid.
pub fn kernel_intersection(profile: &FiniteSubgroupProfile) -> BTreeSet<(Frac, Frac)> {
    let (a, na) = profile.split_a;
    let (b, nb) = profile.split_b;
    let u = a.character(na);
    let v = b.character(nb);
    let det = (u.a * v.b - u.b * v.a).abs();
    let mut out = BTreeSet::new();
    for x in 0..det {
        for y in 0..det {
            let g = (Frac::new(x, det), Frac::new(y, det));
            if u.pairing(g) == Frac::from(0) && v.pairing(g) == Frac::from(0) {
                out.insert(g);
            }
        }
    }
    out
}

/// Closure of the generators under addition.
pub fn closure(gens: &[(Frac, Frac)]) -> BTreeSet<(Frac, Frac)> {
    let zero = (Frac::from(0), Frac::from(0));
    let mut seen = BTreeSet::from([zero]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = (frac_mod1(x.0 + g.0), frac_mod1(x.1 + g.1));
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Smallest `n` with `n·z_d` trivial on every element of `F`.
pub fn n_index_brute(f: &FiniteSubgroup, d: &Direction) -> i64 {
    let els = f.elements();
    (1..)
        .find(|n| {
            els.iter()
                .all(|g| (d.pairing(*g) * *n).fract() == Frac::from(0))
        })
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::exact_order_count;

    #[test]
    fn enumeration_matches_jordan() {
        for n in 1..=24 {
            assert_eq!(exact_order_count_brute(n), exact_order_count(n as u64));
        }
    }

    #[test]
    fn antidiagonal_meets_diagonal_in_four_points() {
        let d = Direction::new(1, 1).unwrap();
        let e = Direction::new(-1, 1).unwrap();
        assert_eq!(intersection_counts(&d, &e, 1)[&(1, 1)], 4);
    }
}
