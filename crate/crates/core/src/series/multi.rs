use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use super::uni::{monomial, UniSeries};
use crate::number::{q, Q};

/// A power series in `V` variables truncated at total degree `prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvSeries<const V: usize> {
    terms: BTreeMap<[u32; V], Q>,
    prec: usize,
}

/// Series in `t1, t2`.
pub type BiSeries = MvSeries<2>;
/// Series in `t1, t2, t3`.
pub type TriSeries = MvSeries<3>;

fn degree<const V: usize>(e: &[u32; V]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl<const V: usize> MvSeries<V> {
    pub fn zero(prec: usize) -> Self {
        MvSeries {
            terms: BTreeMap::new(),
            prec,
        }
    }

    pub fn constant(c: Q, prec: usize) -> Self {
        Self::from_terms([([0; V], c)], prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(q(1), prec)
    }

    /// The variable `t_{i+1}`.
    pub fn var(i: usize, prec: usize) -> Self {
        let mut e = [0; V];
        e[i] = 1;
        Self::from_terms([(e, q(1))], prec)
    }

    pub fn monomial(e: [u32; V], c: Q, prec: usize) -> Self {
        Self::from_terms([(e, c)], prec)
    }

    /// Sum the given terms, dropping zeros and anything of degree `>= prec`.
    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; V], Q)>, prec: usize) -> Self {
        let mut map: BTreeMap<[u32; V], Q> = BTreeMap::new();
        for (e, c) in terms {
            if degree(&e) < prec && !c.is_zero() {
                *map.entry(e).or_insert_with(Q::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        MvSeries { terms: map, prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn terms(&self) -> &BTreeMap<[u32; V], Q> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32; V]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&[0; V])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree carrying a nonzero term.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(degree).min()
    }

    /// Homogeneous part of the given degree.
    pub fn homogeneous(&self, deg: usize) -> Self {
        MvSeries {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) == deg)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec: self.prec,
        }
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let prec = prec.min(self.prec);
        MvSeries {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) < prec)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
            prec,
        )
    }

    pub fn neg(&self) -> Self {
        MvSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(self.prec);
        }
        MvSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
            prec: self.prec,
        }
    }

    fn by_degree(&self) -> Vec<(usize, &[u32; V], &Q)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (degree(e), e, c)).collect();
        v.sort_by_key(|x| x.0);
        v
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let a = self.by_degree();
        let b = other.by_degree();
        let mut acc: HashMap<[u32; V], Q> = HashMap::new();
        for (da, ea, ca) in &a {
            if *da >= prec {
                break;
            }
            for (db, eb, cb) in &b {
                if da + db >= prec {
                    break;
                }
                let mut e = **ea;
                for i in 0..V {
                    e[i] += eb[i];
                }
                let prod = *ca * *cb;
                match acc.get_mut(&e) {
                    Some(x) => *x += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let mut terms: BTreeMap<[u32; V], Q> = acc.into_iter().collect();
        terms.retain(|_, c| !c.is_zero());
        MvSeries { terms, prec }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.prec), |acc, _| acc.mul(self))
    }

    /// All powers `self^0 ..= self^max`.
    pub fn powers(&self, max: usize) -> Vec<Self> {
        let mut out = vec![Self::one(self.prec)];
        for i in 0..max {
            let next = out[i].mul(self);
            out.push(next);
        }
        out
    }

    /// Multiplicative inverse via the geometric series; needs a nonzero
    /// constant term.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        let inv0 = c0.recip();
        // self = c0 (1 + e) with e of order >= 1
        let e = self.scale(&inv0).sub(&Self::one(self.prec));
        let mut out = Self::one(self.prec);
        let mut power = Self::one(self.prec);
        let minus_e = e.neg();
        for _ in 1..self.prec {
            power = power.mul(&minus_e);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Some(out.scale(&inv0))
    }

    /// Partial derivative in variable `i` (precision drops by one).
    pub fn partial(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut e2 = *e;
            e2[i] -= 1;
            (e2, c * q(e[i] as i64))
        });
        Self::from_terms(terms, self.prec.saturating_sub(1))
    }

    /// Set variable `i` to zero.
    pub fn at_zero(&self, i: usize) -> Self {
        MvSeries {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec: self.prec,
        }
    }

    /// Swap two variables.
    pub fn swap(&self, i: usize, j: usize) -> Self {
        MvSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2.swap(i, j);
                    (e2, c.clone())
                })
                .collect(),
            prec: self.prec,
        }
    }

    /// The terms in graded-lexicographic order.
    pub fn graded_terms(&self) -> Vec<([u32; V], Q)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| degree(a).cmp(&degree(b)).then_with(|| b.cmp(a)));
        v
    }
}

impl MvSeries<1> {
    pub fn from_uni(s: &UniSeries) -> Self {
        s.embed::<1>(0)
    }

    pub fn to_uni(&self) -> UniSeries {
        let mut c = vec![Q::zero(); self.prec];
        for (e, x) in &self.terms {
            c[e[0] as usize] = x.clone();
        }
        UniSeries::new(c, self.prec)
    }
}

impl UniSeries {
    /// The series as a function of variable `var` among `W`.
    pub fn embed<const W: usize>(&self, var: usize) -> MvSeries<W> {
        MvSeries::from_terms(
            self.coeffs().iter().enumerate().map(|(i, c)| {
                let mut e = [0u32; W];
                e[var] = i as u32;
                (e, c.clone())
            }),
            self.prec(),
        )
    }
}

impl BiSeries {
    /// `self(x, y)` for series `x, y` without constant term.
    ///
    /// Horner in the first variable; the inner sums only use powers of `y`.
    pub fn compose<const W: usize>(&self, x: &MvSeries<W>, y: &MvSeries<W>) -> MvSeries<W> {
        debug_assert!(x.constant_term().is_zero() && y.constant_term().is_zero());
        let prec = self.prec.min(x.prec).min(y.prec);
        let max_i = self.terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|e| e[1] as usize).max().unwrap_or(0);
        let ypow = y.truncate(prec).powers(max_j);
        let mut rows: Vec<MvSeries<W>> = vec![MvSeries::zero(prec); max_i + 1];
        let mut buckets: Vec<Vec<(&[u32; 2], &Q)>> = vec![Vec::new(); max_i + 1];
        for (e, c) in &self.terms {
            buckets[e[0] as usize].push((e, c));
        }
        for (i, bucket) in buckets.iter().enumerate() {
            let mut acc: HashMap<[u32; W], Q> = HashMap::new();
            for (e, c) in bucket {
                for (m, v) in &ypow[e[1] as usize].terms {
                    *acc.entry(*m).or_insert_with(Q::zero) += *c * v;
                }
            }
            rows[i] = MvSeries::from_terms(acc, prec);
        }
        let x = x.truncate(prec);
        let mut out = MvSeries::zero(prec);
        for row in rows.iter().rev() {
            out = out.mul(&x).add(row);
        }
        out
    }
}

impl<const V: usize> fmt::Display for MvSeries<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=V).map(|i| format!("t{i}")).collect();
        let parts: Vec<String> = self
            .graded_terms()
            .iter()
            .map(|(e, c)| {
                let vars: Vec<(&str, i64)> = names
                    .iter()
                    .zip(e.iter())
                    .map(|(n, &x)| (n.as_str(), x as i64))
                    .collect();
                monomial(c, &vars)
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", parts.join(" + "))?;
        }
        write!(f, " + O(deg {})", self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize, n: usize) -> BiSeries {
        BiSeries::var(i, n)
    }

    #[test]
    fn product_truncates_by_total_degree() {
        let s = t(0, 4).add(&t(1, 4));
        let sq = s.pow(3);
        assert_eq!(sq.coeff(&[2, 1]), q(3));
        assert!(s.pow(4).is_zero());
    }

    #[test]
    fn compose_swaps_variables() {
        let s = BiSeries::from_terms([([2, 1], q(5)), ([0, 1], q(1))], 6);
        let c = s.compose(&t(1, 6), &t(0, 6));
        assert_eq!(c, s.swap(0, 1));
    }

    #[test]
    fn compose_matches_direct_expansion() {
        // (x + y)^2 at x = t1 + t2, y = t1 t2
        let n = 6;
        let s = BiSeries::from_terms([([2, 0], q(1)), ([1, 1], q(2)), ([0, 2], q(1))], n);
        let x = t(0, n).add(&t(1, n));
        let y = t(0, n).mul(&t(1, n));
        let expect = x.add(&y).pow(2);
        assert_eq!(s.compose(&x, &y), expect);
    }

    #[test]
    fn partial_derivative() {
        let s = BiSeries::from_terms([([3, 2], q(2))], 8);
        assert_eq!(s.partial(0), BiSeries::from_terms([([2, 2], q(6))], 7));
    }

    #[test]
    fn display_is_graded_lex() {
        let s = BiSeries::from_terms([([0, 1], q(1)), ([1, 0], q(1)), ([1, 1], q(-2))], 3);
        assert_eq!(s.to_string(), "1*t1 + 1*t2 + -2*t1*t2 + O(deg 3)");
    }
}
