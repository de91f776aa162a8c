use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::MvSeries;
use crate::error::{Error, Result};
use crate::number::{q, Q};

/// A univariate power series `Σ_{i<N} c_i t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: Vec<Q>,
}

impl UniSeries {
    /// Build from coefficients; the precision is `prec` and the list is
    /// truncated or zero-padded to match.
    pub fn new(mut coeffs: Vec<Q>, prec: usize) -> Self {
        coeffs.resize(prec, Q::zero());
        UniSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], prec: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect(), prec)
    }

    pub fn zero(prec: usize) -> Self {
        Self::new(Vec::new(), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(q(1), prec)
    }

    pub fn constant(c: Q, prec: usize) -> Self {
        Self::new(vec![c], prec)
    }

    /// The series `t`.
    pub fn var(prec: usize) -> Self {
        Self::new(vec![q(0), q(1)], prec)
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `t^i`; zero beyond the stored range.
    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        Self::new(
            self.coeffs[..prec.min(self.prec())].to_vec(),
            prec.min(self.prec()),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        UniSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        UniSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        UniSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniSeries { coeffs: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.prec()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let n = self.prec().saturating_sub(1);
        UniSeries {
            coeffs: (0..n)
                .map(|i| &self.coeffs[i + 1] * q(i as i64 + 1))
                .collect(),
        }
    }

    /// Termwise antiderivative with zero constant term (precision grows by one).
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![Q::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / q(i as i64 + 1));
        }
        UniSeries { coeffs }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotInvertible("zero constant term".into()));
        }
        let n = self.prec();
        let inv0 = c0.recip();
        let mut out: Vec<Q> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for i in 1..n {
            let mut acc = Q::zero();
            for j in 1..=i {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[i - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(UniSeries { coeffs: out })
    }

    /// `self(inner)`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &UniSeries) -> Self {
        debug_assert!(inner.coeff(0).is_zero());
        let n = self.prec().min(inner.prec());
        let inner = inner.truncate(n);
        let mut out = Self::zero(n);
        for c in self.coeffs.iter().take(n).rev() {
            out = out.mul(&inner);
            out.coeffs[0] += c;
        }
        out
    }

    /// `self(inner)` for a multivariate `inner` with zero constant term.
    pub fn compose_mv<const V: usize>(&self, inner: &MvSeries<V>) -> MvSeries<V> {
        debug_assert!(inner.constant_term().is_zero());
        let n = self.prec().min(inner.prec());
        let mut out = MvSeries::zero(n);
        for c in self.coeffs.iter().take(n).rev() {
            out = out.mul(inner);
            out = out.add(&MvSeries::constant(c.clone(), n));
        }
        out
    }

    /// Compositional inverse `g` with `self(g(t)) = t`.
    ///
    /// Requires `c_0 = 0` and `c_1 != 0`.
    pub fn reversion(&self) -> Result<Self> {
        let c1 = self.coeff(1);
        if !self.coeff(0).is_zero() || c1.is_zero() {
            return Err(Error::NotInvertible(
                "reversion needs zero constant and nonzero linear term".into(),
            ));
        }
        let n = self.prec();
        let t = Self::var(n);
        let mut g = t.scale(&c1.recip());
        // each pass fixes one more coefficient
        for _ in 2..n {
            let err = self.compose(&g).sub(&t);
            g = g.sub(&err.scale(&c1.recip()));
        }
        Ok(g)
    }

    /// Laurent inverse of a series with a simple zero at `t = 0`.
    pub fn laurent_inverse(&self) -> Result<LaurentTail> {
        if !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return Err(Error::NotInvertible(
                "laurent inverse needs a simple zero at the origin".into(),
            ));
        }
        let n = self.prec();
        // s = t·h with h a unit known to precision n-1
        let h = UniSeries {
            coeffs: self.coeffs[1..].to_vec(),
        };
        let hinv = h.inverse()?;
        let mut principal = BTreeMap::new();
        principal.insert(-1, hinv.coeff(0));
        let regular = UniSeries {
            coeffs: hinv.coeffs[1..].to_vec(),
        };
        debug_assert_eq!(regular.prec(), n - 2);
        Ok(LaurentTail { principal, regular })
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| monomial(c, &[(var, i as i64)]))
            .collect();
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", parts.join(" + "))?;
        }
        write!(f, " + O({var}^{})", self.prec())
    }
}

pub(crate) fn monomial(c: &Q, vars: &[(&str, i64)]) -> String {
    let mut s = c.to_string();
    for (name, e) in vars {
        match *e {
            0 => {}
            1 => s.push_str(&format!("*{name}")),
            e => s.push_str(&format!("*{name}^{e}")),
        }
    }
    s
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "t")
    }
}

/// A Laurent series with finitely many negative powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentTail {
    /// Coefficients of `t^e` with `e < 0`.
    pub principal: BTreeMap<i64, Q>,
    /// The part with nonnegative exponents.
    pub regular: UniSeries,
}

impl LaurentTail {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Q)>, prec: usize) -> Self {
        let mut principal = BTreeMap::new();
        let mut reg = vec![Q::zero(); prec];
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            if e < 0 {
                *principal.entry(e).or_insert_with(Q::zero) += c;
            } else if (e as usize) < prec {
                reg[e as usize] += c;
            }
        }
        principal.retain(|_, c: &mut Q| !c.is_zero());
        LaurentTail {
            principal,
            regular: UniSeries::new(reg, prec),
        }
    }

    pub fn coefficient(&self, e: i64) -> Q {
        if e < 0 {
            self.principal.get(&e).cloned().unwrap_or_else(Q::zero)
        } else {
            self.regular.coeff(e as usize)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.principal.is_empty() && self.regular.is_zero()
    }

    /// Pole order (0 when there is no principal part).
    pub fn pole_order(&self) -> u32 {
        self.principal
            .keys()
            .next()
            .map(|e| (-e) as u32)
            .unwrap_or(0)
    }

    /// Product with a power series, exact below the combined precision.
    pub fn mul_series(&self, s: &UniSeries) -> LaurentTail {
        let pole = self.pole_order() as usize;
        let prec = self.regular.prec().min(s.prec().saturating_sub(pole));
        let mut terms: Vec<(i64, Q)> = Vec::new();
        let all = self.principal.iter().map(|(e, c)| (*e, c.clone())).chain(
            self.regular
                .coeffs()
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, c)| (i as i64, c)),
        );
        for (e, c) in all {
            if c.is_zero() {
                continue;
            }
            for (j, b) in s.coeffs().iter().enumerate() {
                let ex = e + j as i64;
                if ex >= prec as i64 {
                    break;
                }
                if !b.is_zero() {
                    terms.push((ex, &c * b));
                }
            }
        }
        LaurentTail::from_terms(terms, prec)
    }
}

impl fmt::Display for LaurentTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .principal
            .iter()
            .map(|(e, c)| monomial(c, &[("t", *e)]))
            .collect();
        parts.extend(
            self.regular
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| monomial(c, &[("t", i as i64)])),
        );
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", parts.join(" + "))?;
        }
        write!(f, " + O(t^{})", self.regular.prec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::qr;

    #[test]
    fn inverse_of_one_minus_t() {
        let s = UniSeries::from_ints(&[1, -1], 6);
        let inv = s.inverse().unwrap();
        assert_eq!(inv, UniSeries::from_ints(&[1, 1, 1, 1, 1, 1], 6));
        assert!(UniSeries::var(4).inverse().is_err());
    }

    #[test]
    fn laurent_inverse_examples() {
        let t = UniSeries::var(8);
        let inv = t.laurent_inverse().unwrap();
        assert_eq!(inv.coefficient(-1), q(1));
        assert!(inv.regular.is_zero());

        let s = UniSeries::from_ints(&[0, 1, 1], 8);
        let inv = s.laurent_inverse().unwrap();
        for (e, c) in [(-1, 1), (0, -1), (1, 1), (2, -1), (3, 1)] {
            assert_eq!(inv.coefficient(e), q(c), "t^{e}");
        }
        let prod = inv.mul_series(&s);
        assert_eq!(
            prod,
            LaurentTail::from_terms([(0, q(1))], prod.regular.prec())
        );

        let two_t = UniSeries::from_ints(&[0, 2], 5);
        let inv = two_t.laurent_inverse().unwrap();
        assert_eq!(inv.coefficient(-1), qr(1, 2));
        assert_eq!(inv.pole_order(), 1);

        assert!(UniSeries::from_ints(&[0, 0, 1], 5)
            .laurent_inverse()
            .is_err());
    }

    #[test]
    fn reversion_of_log_one_plus_t() {
        // log(1+t) reverts to e^t - 1
        let n = 8;
        let log: Vec<Q> = (0..n as i64)
            .map(|i| {
                if i == 0 {
                    q(0)
                } else {
                    qr(if i % 2 == 1 { 1 } else { -1 }, i)
                }
            })
            .collect();
        let f = UniSeries::new(log, n);
        let g = f.reversion().unwrap();
        let mut fact = 1i64;
        for i in 1..n {
            fact *= i as i64;
            assert_eq!(g.coeff(i), qr(1, fact));
        }
        assert_eq!(f.compose(&g), UniSeries::var(n));
    }

    #[test]
    fn integrate_then_differentiate() {
        let s = UniSeries::from_ints(&[3, 0, 5, -2], 4);
        assert_eq!(s.integrate().derivative(), s);
    }

    #[test]
    fn display_format() {
        let s = UniSeries::new(vec![q(0), q(1), qr(-1, 2)], 3);
        assert_eq!(s.to_string(), "1*t + -1/2*t^2 + O(t^3)");
    }
}
