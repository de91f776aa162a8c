//! Divisors of representations and the values of the theory on
//! representation spheres.
//!
//! A representation `V = ⊕ (z_d^n)^{m}` determines the divisor
//! `D_V = Σ v_{d,j} D_{d,j}` on `E×E`. The value on `S^V` is read from the
//! sheaf cohomology of `O(-D_V)`, and the value on `S^{-V}` from `O(D_V)`;
//! the theory is 2-periodic so only even and odd totals are kept.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{decompose_character, parse_character_list, Character, Direction};
use crate::torsion::{exact_order_count, XDivisor};

/// A complex representation of the torus without trivial summands.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Representation {
    summands: BTreeMap<Character, u32>,
}

impl Representation {
    pub fn new(summands: impl IntoIterator<Item = (Character, u32)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (c, m) in summands {
            if c.is_zero() {
                return Err(Error::ZeroVector(format!(
                    "{c}: trivial summands are excluded (V^G must vanish)"
                )));
            }
            if m > 0 {
                *map.entry(c).or_insert(0) += m;
            }
        }
        Ok(Representation { summands: map })
    }

    pub fn summands(&self) -> &BTreeMap<Character, u32> {
        &self.summands
    }

    pub fn dim(&self) -> u32 {
        self.summands.values().sum()
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Representation::new(parse_character_list(s)?)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(c, m)| format!("{c}:{m}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Which sphere, or which twist of the structure sheaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::parse(
                0,
                format!("sign must be + or -, found {other:?}"),
            )),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Sign::Plus { "+" } else { "-" })
    }
}

/// Dimensions `(h0, h1, h2)` of the cohomology of a line bundle on `E×E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CohomologyTriple {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
}

impl CohomologyTriple {
    pub fn new(h0: u64, h1: u64, h2: u64) -> Self {
        CohomologyTriple { h0, h1, h2 }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }

    pub fn reversed(&self) -> Self {
        CohomologyTriple::new(self.h2, self.h1, self.h0)
    }
}

impl Serialize for CohomologyTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.h0, self.h1, self.h2].serialize(s)
    }
}

/// Even and odd dimensions of the value on a sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TheoryValue {
    pub even: u64,
    pub odd: u64,
}

/// `D_V`, computed both coefficientwise and summandwise; the two must agree.
pub fn divisor_of_rep(v: &Representation) -> Result<XDivisor> {
    let mut parts: Vec<(Direction, i64, u32)> = Vec::new();
    for (c, m) in v.summands() {
        let (d, n) = decompose_character(*c)?;
        parts.push((d, n.abs(), *m));
    }

    // v_{d,j} = Σ over summands z_d^n with j | n
    let mut keys: BTreeSet<(Direction, u64)> = BTreeSet::new();
    for (d, n, _) in &parts {
        for j in 1..=*n {
            keys.insert((*d, j as u64));
        }
    }
    let by_coefficient = XDivisor::new(keys.iter().map(|(d, j)| {
        let v: i64 = parts
            .iter()
            .filter(|(e, n, _)| e == d && n % *j as i64 == 0)
            .map(|(_, _, m)| *m as i64)
            .sum();
        ((*d, *j), v)
    }));

    // each summand pulls back 𝔛(H_d^n) = ⊔_{j|n} D_{d,j}
    let mut by_summand = XDivisor::default();
    for (d, n, m) in &parts {
        let piece = XDivisor::new(
            (1..=*n)
                .filter(|j| n % j == 0)
                .map(|j| ((*d, j as u64), *m as i64)),
        );
        by_summand = by_summand.add(&piece);
    }

    assert_eq!(by_coefficient, by_summand, "divisor formulas disagree");
    Ok(by_coefficient)
}

/// Cohomology of `O(sign·D)` for an effective divisor `D` built from the `D_{d,j}`.
pub fn cohomology_triple(d: &XDivisor, sign: Sign) -> Result<CohomologyTriple> {
    if d.terms().values().any(|v| *v < 0) {
        return Err(Error::MixedSign);
    }
    let dirs = d.directions();
    let plus = match dirs.len() {
        0 => CohomologyTriple::new(1, 2, 1),
        1 => {
            let deg = d.direction_degree(&dirs[0]) as u64;
            CohomologyTriple::new(deg, deg, 0)
        }
        _ => {
            let half = d.self_intersection() / 2;
            CohomologyTriple::new(half as u64, 0, 0)
        }
    };
    Ok(match sign {
        Sign::Plus => plus,
        Sign::Minus => plus.reversed(),
    })
}

/// `(h0, h1)` of a degree-`k` line bundle on the curve.
fn curve_cohomology(k: i64) -> (u64, u64) {
    match k {
        k if k > 0 => (k as u64, 0),
        0 => (1, 1),
        k => (0, (-k) as u64),
    }
}

/// Künneth computation for divisors pulled back from the two factors.
///
/// `a` holds the coefficients of `D_{(1,0),j}`, `b` those of `D_{(0,1),l}`.
pub fn kunneth_oracle(
    a: &BTreeMap<u64, i64>,
    b: &BTreeMap<u64, i64>,
    sign: Sign,
) -> CohomologyTriple {
    let deg = |m: &BTreeMap<u64, i64>| -> i64 {
        m.iter()
            .map(|(j, v)| v * exact_order_count(*j) as i64)
            .sum::<i64>()
            * sign.as_i64()
    };
    let (p0, p1) = curve_cohomology(deg(a));
    let (q0, q1) = curve_cohomology(deg(b));
    CohomologyTriple::new(p0 * q0, p0 * q1 + p1 * q0, p1 * q1)
}

/// [`kunneth_oracle`] on an [`XDivisor`] supported on the two axes.
pub fn kunneth_oracle_divisor(d: &XDivisor, sign: Sign) -> Result<CohomologyTriple> {
    let x = Direction::new(1, 0)?;
    let y = Direction::new(0, 1)?;
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    for ((dir, j), v) in d.terms() {
        if *dir == x {
            a.insert(*j, *v);
        } else if *dir == y {
            b.insert(*j, *v);
        } else {
            return Err(Error::UnsupportedDirection(dir.to_string()));
        }
    }
    Ok(kunneth_oracle(&a, &b, sign))
}

/// Value on `S^V` (`Sign::Plus`) or `S^{-V}` (`Sign::Minus`).
pub fn theory_value(v: &Representation, sign: Sign) -> Result<TheoryValue> {
    let d = divisor_of_rep(v)?;
    Ok(assemble(&cohomology_triple(&d, sign.flip())?))
}

/// Collapse of the 2-periodic spectral sequence: even = `h0 + h2`, odd = `h1`.
pub fn assemble(t: &CohomologyTriple) -> TheoryValue {
    TheoryValue {
        even: t.h0 + t.h2,
        odd: t.h1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(s: &str) -> Representation {
        s.parse().unwrap()
    }

    fn dir(a: i64, b: i64) -> Direction {
        Direction::new(a, b).unwrap()
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(
            divisor_of_rep(&rep("(1,0):1")).unwrap(),
            XDivisor::single(dir(1, 0), 1)
        );
        let d = divisor_of_rep(&rep("(2,0):1")).unwrap();
        assert_eq!(
            d,
            XDivisor::single(dir(1, 0), 1).add(&XDivisor::single(dir(1, 0), 2))
        );
        assert_eq!(d.direction_degree(&dir(1, 0)), 4);
        let d = divisor_of_rep(&rep("(1,0):1,(0,1):1")).unwrap();
        assert_eq!(
            d,
            XDivisor::single(dir(1, 0), 1).add(&XDivisor::single(dir(0, 1), 1))
        );
        assert!(rep("").summands().is_empty());
        assert!("(0,0):1".parse::<Representation>().is_err());
    }

    #[test]
    fn negative_exponents_use_the_absolute_value() {
        let d = divisor_of_rep(&rep("(0,-2):1")).unwrap();
        assert_eq!(d.coefficient(&dir(0, 1), 2), 1);
        assert_eq!(d.coefficient(&dir(0, 1), 1), 1);
    }

    #[test]
    fn triple_examples() {
        let zero = XDivisor::default();
        assert_eq!(
            cohomology_triple(&zero, Sign::Plus).unwrap(),
            CohomologyTriple::new(1, 2, 1)
        );
        let d12 = XDivisor::single(dir(1, 0), 1).add(&XDivisor::single(dir(0, 1), 1));
        assert_eq!(
            cohomology_triple(&d12, Sign::Minus).unwrap(),
            CohomologyTriple::new(0, 0, 1)
        );
        let d1 = XDivisor::single(dir(1, 0), 1);
        assert_eq!(
            cohomology_triple(&d1, Sign::Minus).unwrap(),
            CohomologyTriple::new(0, 1, 1)
        );
        assert_eq!(
            cohomology_triple(&d1.scale(-1), Sign::Plus),
            Err(Error::MixedSign)
        );
    }

    #[test]
    fn kunneth_examples() {
        let one = BTreeMap::from([(1, 1)]);
        let empty = BTreeMap::new();
        assert_eq!(
            kunneth_oracle(&one, &one, Sign::Plus),
            CohomologyTriple::new(1, 0, 0)
        );
        let two = BTreeMap::from([(1, 2)]);
        let three = BTreeMap::from([(1, 3)]);
        assert_eq!(
            kunneth_oracle(&two, &three, Sign::Plus),
            CohomologyTriple::new(6, 0, 0)
        );
        assert_eq!(
            kunneth_oracle(&one, &empty, Sign::Minus),
            CohomologyTriple::new(0, 1, 1)
        );
        let diag = XDivisor::single(dir(1, 1), 1);
        assert!(matches!(
            kunneth_oracle_divisor(&diag, Sign::Plus),
            Err(Error::UnsupportedDirection(_))
        ));
    }

    #[test]
    fn value_examples() {
        let v = rep("(1,0):1,(0,1):1");
        assert_eq!(
            theory_value(&v, Sign::Plus).unwrap(),
            TheoryValue { even: 1, odd: 0 }
        );
        assert_eq!(
            theory_value(&v, Sign::Minus).unwrap(),
            TheoryValue { even: 1, odd: 0 }
        );
        assert_eq!(
            theory_value(&rep("(1,0):1"), Sign::Plus).unwrap(),
            TheoryValue { even: 1, odd: 1 }
        );
        assert_eq!(
            theory_value(&rep(""), Sign::Plus).unwrap(),
            TheoryValue { even: 2, odd: 2 }
        );
    }
}
