//! Truncated Laurent series in a chart `(u, v)`, expanded in `Q((v))((u))`.
//!
//! Two truncations are tracked: a total-degree bound `prec` (terms
//! `u^i v^j` with `i + j >= prec` are unknown) and a `u`-power cap `ucap`
//! (terms with `i >= ucap` are dropped because nothing downstream reads
//! them). Negative exponents of both variables are allowed.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::number::{q, Q};
use crate::series::{BiSeries, UniSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSeries {
    terms: BTreeMap<(i64, i64), Q>,
    prec: i64,
    ucap: i64,
}

impl ChartSeries {
    pub fn zero(prec: i64, ucap: i64) -> Self {
        ChartSeries {
            terms: BTreeMap::new(),
            prec,
            ucap,
        }
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = ((i64, i64), Q)>,
        prec: i64,
        ucap: i64,
    ) -> Self {
        let mut map: BTreeMap<(i64, i64), Q> = BTreeMap::new();
        for ((i, j), c) in terms {
            if i + j < prec && i < ucap && !c.is_zero() {
                *map.entry((i, j)).or_insert_with(Q::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        ChartSeries {
            terms: map,
            prec,
            ucap,
        }
    }

    /// `c·u^i v^j`, known exactly (unbounded precision up to the caps given).
    pub fn monomial(i: i64, j: i64, c: Q, prec: i64, ucap: i64) -> Self {
        Self::from_terms([((i, j), c)], prec, ucap)
    }

    /// A regular series in `(u, v) = (t1, t2)` of the chart.
    pub fn from_bi(s: &BiSeries, ucap: i64) -> Self {
        Self::from_terms(
            s.terms()
                .iter()
                .map(|(e, c)| ((e[0] as i64, e[1] as i64), c.clone())),
            s.prec() as i64,
            ucap,
        )
    }

    /// A series in `u` alone.
    pub fn from_u(s: &UniSeries, ucap: i64) -> Self {
        Self::from_terms(
            s.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| ((i as i64, 0), c.clone())),
            s.prec() as i64,
            ucap,
        )
    }

    /// A series in `v` alone.
    pub fn from_v(s: &UniSeries, ucap: i64) -> Self {
        Self::from_terms(
            s.coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| ((0, j as i64), c.clone())),
            s.prec() as i64,
            ucap,
        )
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), Q> {
        &self.terms
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn ucap(&self) -> i64 {
        self.ucap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: i64, j: i64) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    /// Lowest total degree; `None` for zero.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    /// Lowest `u`-exponent; `None` for zero.
    pub fn u_order(&self) -> Option<i64> {
        self.terms.keys().map(|(i, _)| *i).min()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
            self.prec.min(other.prec),
            self.ucap.min(other.ucap),
        )
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(e, c)| (*e, c * k)),
            self.prec,
            self.ucap,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    /// Restrict the `u`-cap.
    pub fn with_ucap(&self, ucap: i64) -> Self {
        Self::from_terms(self.terms.clone(), self.prec, ucap.min(self.ucap))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::from_terms(self.terms.clone(), prec.min(self.prec), self.ucap)
    }

    pub fn mul(&self, other: &Self) -> Self {
        // an unknown term of one factor meets the lowest term of the other
        let ord_a = self.order();
        let ord_b = other.order();
        let prec = match (ord_a, ord_b) {
            (Some(a), Some(b)) => (self.prec + b).min(other.prec + a),
            (None, Some(b)) => self.prec + b,
            (Some(a), None) => other.prec + a,
            (None, None) => self.prec.min(other.prec),
        };
        let ua = self.u_order();
        let ub = other.u_order();
        let ucap = match (ua, ub) {
            (Some(a), Some(b)) => (self.ucap + b).min(other.ucap + a),
            (None, Some(b)) => self.ucap + b,
            (Some(a), None) => other.ucap + a,
            (None, None) => self.ucap.min(other.ucap),
        };
        let mut acc: BTreeMap<(i64, i64), Q> = BTreeMap::new();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                let (i, j) = (i1 + i2, j1 + j2);
                if i + j < prec && i < ucap {
                    *acc.entry((i, j)).or_insert_with(Q::zero) += c1 * c2;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        ChartSeries {
            terms: acc,
            prec,
            ucap,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::monomial(0, 0, q(1), i64::MAX / 4, i64::MAX / 4);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Inverse in `Q((v))((u))`.
    ///
    /// The leading monomial is the lowest-degree term with the smallest
    /// `u`-power; it must also carry the smallest `u`-power overall so that
    /// the geometric series in the remaining terms terminates.
    pub fn inverse(&self) -> Result<Self> {
        let ord = self
            .order()
            .ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let (&(i0, j0), c0) = self
            .terms
            .iter()
            .filter(|((i, j), _)| i + j == ord)
            .min_by_key(|((i, _), _)| *i)
            .unwrap();
        if self.u_order() != Some(i0) {
            return Err(Error::NotInvertible(
                "leading monomial does not carry the lowest u-power".into(),
            ));
        }
        let inv_c0 = c0.recip();
        // self = c0 u^i0 v^j0 (1 + eps)
        let eps = ChartSeries::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| **e != (i0, j0))
                .map(|((i, j), c)| ((i - i0, j - j0), c * &inv_c0)),
            self.prec - ord,
            self.ucap - i0,
        );
        let minus_eps = eps.scale(&q(-1));
        let mut sum = ChartSeries::monomial(0, 0, q(1), eps.prec, eps.ucap);
        let mut power = sum.clone();
        // every factor raises the degree or the u-power, so this terminates
        let bound = (eps.prec.max(0) + eps.ucap.max(0) + 2) as usize;
        for _ in 0..bound {
            power = power.mul(&minus_eps);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        let lead_inv = ChartSeries::monomial(-i0, -j0, inv_c0, i64::MAX / 4, i64::MAX / 4);
        let out = sum.mul(&lead_inv);
        Ok(ChartSeries::from_terms(
            out.terms,
            self.prec - 2 * ord,
            self.ucap - 2 * i0,
        ))
    }

    /// `∂/∂u`.
    pub fn partial_u(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|((i, j), c)| ((i - 1, *j), c * q(*i))),
            self.prec - 1,
            self.ucap - 1,
        )
    }

    /// `∂/∂v`.
    pub fn partial_v(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|((i, j), c)| ((*i, j - 1), c * q(*j))),
            self.prec - 1,
            self.ucap,
        )
    }

    /// `s(self)` for a series `self` of positive order, by Horner's rule.
    pub fn compose_into(&self, s: &UniSeries) -> Self {
        debug_assert!(self.order().is_none_or(|o| o > 0));
        let big = i64::MAX / 4;
        let mut out = ChartSeries::zero(big, big);
        for c in s.coeffs().iter().rev() {
            out = out
                .mul(self)
                .add(&ChartSeries::monomial(0, 0, c.clone(), big, big));
        }
        out.truncate((s.prec() as i64).min(self.prec))
            .with_ucap(self.ucap)
    }

    /// Terms with negative `u`-exponent.
    pub fn principal(&self) -> Self {
        ChartSeries {
            terms: self
                .terms
                .iter()
                .filter(|((i, _), _)| *i < 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec: self.prec,
            ucap: self.ucap.min(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_linear_form() {
        // 1/(v + u) = Σ (-1)^n u^n v^{-n-1}
        let s = ChartSeries::from_terms([((0, 1), q(1)), ((1, 0), q(1))], 8, 4);
        let inv = s.inverse().unwrap();
        for n in 0..4 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(inv.coeff(n, -n - 1), q(sign));
        }
        let one = inv.mul(&s);
        assert_eq!(
            one,
            ChartSeries::monomial(0, 0, q(1), one.prec(), one.ucap())
        );
    }

    #[test]
    fn inverse_of_unit_is_power_series() {
        let s = ChartSeries::from_terms([((0, 0), q(2)), ((1, 1), q(1))], 6, 3);
        let inv = s.inverse().unwrap();
        let prod = inv.mul(&s);
        assert_eq!(prod.coeff(0, 0), q(1));
        assert!(prod.terms().len() == 1);
    }

    #[test]
    fn bad_leading_term_is_rejected() {
        let s = ChartSeries::from_terms([((1, 0), q(1)), ((0, 2), q(1))], 6, 3);
        assert!(s.inverse().is_err());
    }
}
