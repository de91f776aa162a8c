//! Exact scalar types and their textual forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used by every series and matrix.
pub type Q = BigRational;

/// Small exact fraction used for torsion coordinates in `(Q/Z)^2`.
pub type Frac = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Reduce a fraction into `[0, 1)`.
pub fn frac_mod1(x: Frac) -> Frac {
    let f = x - x.floor();
    if f < Frac::zero() {
        f + Frac::one()
    } else {
        f
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        a.lcm(&b)
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Parse an integer or `p/q` rational.
pub fn parse_q(s: &str, offset: usize) -> Result<Q> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(offset, "expected a rational number"));
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::parse(offset, format!("invalid numerator {n:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::parse(offset, format!("invalid denominator {d:?}")))?;
    if d.is_zero() {
        return Err(Error::parse(offset, "zero denominator"));
    }
    Ok(Q::new(n, d))
}

/// Parse an integer or `p/q` fraction with machine-size parts.
pub fn parse_frac(s: &str, offset: usize) -> Result<Frac> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i64 = n
        .parse()
        .map_err(|_| Error::parse(offset, format!("invalid numerator {n:?}")))?;
    let d: i64 = d
        .parse()
        .map_err(|_| Error::parse(offset, format!("invalid denominator {d:?}")))?;
    if d == 0 {
        return Err(Error::parse(offset, "zero denominator"));
    }
    Ok(Frac::new(n, d))
}

/// Serialize a rational as a reduced `"p/q"` (or `"p"`) string.
pub fn q_to_string(x: &Q) -> String {
    x.to_string()
}

pub fn frac_to_string(x: &Frac) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for a in -12..=12i64 {
            for b in -12..=12i64 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(q_to_string(&parse_q("6/4", 0).unwrap()), "3/2");
        assert_eq!(q_to_string(&parse_q(" -3 ", 0).unwrap()), "-3");
        assert!(parse_q("1/0", 0).is_err());
        assert!(parse_q("x", 0).is_err());
        assert_eq!(frac_mod1(Frac::new(-1, 3)), Frac::new(2, 3));
        assert_eq!(frac_mod1(Frac::new(7, 3)), Frac::new(1, 3));
    }
}
