//! A truncated local model of the Cousin complex at the origin stalk.
//!
//! A [`Window`] fixes a curve, a list of pairwise non-parallel directions
//! `d` with multiplicities `j_d`, a pole cap `k` and a working precision
//! `N`. Inside it:
//!
//! * [`KLocal`] is a function `g / Π t_d^{e_d}` with `e_d ≤ k`;
//! * [`H1Class`] is a principal part along `D_d`, expanded in the chart
//!   `(u, v) = (t_{d,j_d}, t_{c(d),1})` as an element of
//!   `Q((v))((u)) / Q((v))[[u]]`;
//! * [`H2Class`] lives in the Koszul basis `t1^{-a} t2^{-b}`.
//!
//! `d1` converts the doubly-singular part of a chart class to the Koszul
//! basis with the residue pairing. Orientation is carried by the Jacobian
//! `∂(t1,t2)/∂(u,v)` of each chart, so no extra alternating sign is used:
//! with this convention `d1 ∘ d0 = 0` is residue reciprocity.

mod chart;
mod laurent;
mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::Serialize;

pub use laurent::ChartSeries;
pub use report::{Check, ExactnessReport, Ranks, WindowSummary};

use crate::error::{Error, Result};
use crate::formal_group::{Curve, FormalGroup};
use crate::lattice::{solve_character_eq, Direction, FiniteSubgroupProfile};
use crate::number::{q, q_to_string, Q};
use crate::series::{BiSeries, LaurentTail, UniSeries};
use chart::Chart;

const BIG: i64 = i64::MAX / 4;

/// A finite window of the origin stalk.
pub struct Window {
    curve: Curve,
    dirs: Vec<(Direction, u64)>,
    comps: Vec<Direction>,
    k: u32,
    n: usize,
    inner: usize,
    log: UniSeries,
    exp: UniSeries,
    charts: Vec<OnceLock<Chart>>,
    global: Vec<OnceLock<BiSeries>>,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Window")
            .field("curve", &self.curve)
            .field("dirs", &self.dirs)
            .field("k", &self.k)
            .field("n", &self.n)
            .finish()
    }
}

impl Window {
    /// A window with every multiplicity `j_d = 1`.
    pub fn new(curve: Curve, dirs: &[Direction], k: u32, n: usize) -> Result<Self> {
        let with: Vec<(Direction, u64)> = dirs.iter().map(|d| (*d, 1)).collect();
        Self::with_indices(curve, &with, k, n)
    }

    /// A window with explicit multiplicities, `u = t_{d,j_d}` in chart `d`.
    pub fn with_indices(curve: Curve, dirs: &[(Direction, u64)], k: u32, n: usize) -> Result<Self> {
        if dirs.len() < 2 {
            return Err(Error::Invalid(
                "a window needs at least two directions".into(),
            ));
        }
        for (i, (d, j)) in dirs.iter().enumerate() {
            if *j == 0 {
                return Err(Error::Invalid(format!("multiplicity of {d} must be >= 1")));
            }
            for (e, _) in &dirs[..i] {
                if d.det(e) == 0 {
                    return Err(Error::ParallelDirections(e.to_string(), d.to_string()));
                }
            }
        }
        if k == 0 {
            return Err(Error::Invalid("pole cap must be >= 1".into()));
        }
        let km = k as usize * dirs.len();
        let need = (2 * k as usize + 2).max(km + 1);
        if n < need {
            return Err(Error::precision(
                n as i64,
                format!(
                    "a window with pole cap {k} and {} directions needs N >= {need}",
                    dirs.len()
                ),
            ));
        }
        // headroom for the inverted Euler classes used by phi1
        let inner = n + km + 2;
        let fg = FormalGroup::new(curve.clone(), inner)?;
        Ok(Window {
            comps: dirs.iter().map(|(d, _)| d.complement()).collect(),
            dirs: dirs.to_vec(),
            k,
            n,
            inner,
            log: fg.log().clone(),
            exp: fg.exp().clone(),
            charts: dirs.iter().map(|_| OnceLock::new()).collect(),
            global: dirs.iter().map(|_| OnceLock::new()).collect(),
            curve,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn directions(&self) -> Vec<Direction> {
        self.dirs.iter().map(|(d, _)| *d).collect()
    }

    pub fn indices(&self) -> &[(Direction, u64)] {
        &self.dirs
    }

    pub fn pole_cap(&self) -> u32 {
        self.k
    }

    pub fn prec(&self) -> usize {
        self.n
    }

    /// Precision of the internal series, `N + k·m + 2`.
    pub fn inner_prec(&self) -> usize {
        self.inner
    }

    pub fn complement(&self, d: &Direction) -> Result<Direction> {
        Ok(self.comps[self.index(d)?])
    }

    pub fn multiplicity(&self, d: &Direction) -> Result<u64> {
        Ok(self.dirs[self.index(d)?].1)
    }

    fn index(&self, d: &Direction) -> Result<usize> {
        self.dirs
            .iter()
            .position(|(e, _)| e == d)
            .ok_or_else(|| Error::UnknownDirection(d.to_string()))
    }

    fn chart(&self, i: usize) -> &Chart {
        self.charts[i].get_or_init(|| {
            let (d, j) = self.dirs[i];
            Chart::new(d, j, self.comps[i], &self.log, &self.exp, self.k as i64 + 1)
        })
    }

    /// `j·(λ f(t1) + μ f(t2))`.
    fn hat_global(&self, d: &Direction, j: u64) -> BiSeries {
        let f1 = self.log.embed::<2>(0);
        let f2 = self.log.embed::<2>(1);
        f1.scale(&q(j as i64 * d.lambda()))
            .add(&f2.scale(&q(j as i64 * d.mu())))
    }

    /// `t_{d,j_d}` as a series in `(t1, t2)`.
    pub fn coordinate(&self, d: &Direction) -> Result<&BiSeries> {
        let i = self.index(d)?;
        Ok(self.global[i].get_or_init(|| {
            let (d, j) = self.dirs[i];
            self.exp.compose_mv(&self.hat_global(&d, j))
        }))
    }

    fn check_exps(&self, exps: &BTreeMap<Direction, u32>) -> Result<()> {
        for (d, e) in exps {
            self.index(d)?;
            if *e > self.k {
                return Err(Error::PoleCap {
                    order: *e,
                    cap: self.k,
                });
            }
        }
        Ok(())
    }

    /// `1 / t_d^e`.
    pub fn pole(&self, d: &Direction, e: u32) -> Result<KLocal> {
        self.index(d)?;
        Ok(KLocal::new(
            BiSeries::one(self.n),
            BTreeMap::from([(*d, e)]),
        ))
    }

    /// Whether two local functions agree, by cross-multiplying denominators.
    pub fn klocal_eq(&self, a: &KLocal, b: &KLocal) -> Result<bool> {
        let mut lhs = a.numerator.clone();
        let mut rhs = b.numerator.clone();
        for (d, e) in &b.exps {
            lhs = lhs.mul(&self.coordinate(d)?.pow(*e));
        }
        for (d, e) in &a.exps {
            rhs = rhs.mul(&self.coordinate(d)?.pow(*e));
        }
        let prec = lhs.prec().min(rhs.prec());
        Ok(lhs.sub(&rhs).truncate(prec).is_zero())
    }

    /// The class of `f` in `𝒦 / O_{D_d}`.
    pub fn principal_part(&self, f: &KLocal, d: &Direction) -> Result<H1Class> {
        self.check_exps(&f.exps)?;
        let i = self.index(d)?;
        let e_d = f.exps.get(d).copied().unwrap_or(0);
        let weight: u32 = f.exps.values().sum();
        if e_d == 0 {
            let prec = f.numerator.prec().min(self.inner) as i64 - weight as i64;
            return Ok(H1Class::zero(*d, prec));
        }
        let ch = self.chart(i);
        let mut s =
            ch.compose(&f.numerator)
                .mul(&ChartSeries::monomial(-(e_d as i64), 0, q(1), BIG, BIG));
        for (j, (e, l)) in self.dirs.iter().enumerate() {
            let pow = f.exps.get(e).copied().unwrap_or(0);
            if j != i && pow > 0 {
                s = s.mul(&ch.inv_t_pow(e, *l, pow));
            }
        }
        Ok(H1Class::from_chart(*d, &s))
    }

    /// Principal parts along every window direction, in window order.
    pub fn d0(&self, f: &KLocal) -> Result<Vec<H1Class>> {
        self.dirs
            .iter()
            .map(|(d, _)| self.principal_part(f, d))
            .collect()
    }

    /// Koszul expansion of `u^{-p} v^{-q} · g(u, v)` in chart `d`.
    pub fn h2_reduce(&self, d: &Direction, p: u32, q_: u32, g: &BiSeries) -> Result<H2Class> {
        if p > self.k || q_ > self.k {
            return Err(Error::PoleCap {
                order: p.max(q_),
                cap: self.k,
            });
        }
        let s = ChartSeries::from_bi(g, BIG).mul(&ChartSeries::monomial(
            -(p as i64),
            -(q_ as i64),
            q(1),
            BIG,
            BIG,
        ));
        self.d1(&[H1Class::from_chart(*d, &s)])
    }

    /// Sum of the residue transforms of the classes' doubly-singular parts.
    pub fn d1(&self, classes: &[H1Class]) -> Result<H2Class> {
        let mut out = H2Class::zero();
        for x in classes {
            let ch = self.chart(self.index(&x.dir)?);
            if x.prec < -1 {
                return Err(Error::precision(
                    x.prec,
                    "class is not determined down to its doubly-singular part",
                ));
            }
            for (&(i, j), c) in &x.terms {
                if j >= 0 {
                    continue;
                }
                let (p, qq) = ((-i) as u32, (-j) as u32);
                if p > self.k {
                    return Err(Error::PoleCap {
                        order: p,
                        cap: self.k,
                    });
                }
                let total = p + qq;
                for a in 1..total {
                    for b in 1..=total - a {
                        let r = ch
                            .residue_coefficient(a, b, p as i64 - 1, qq as i64 - 1)
                            .ok_or_else(|| {
                                Error::precision(
                                    ch.prec(),
                                    format!("residue of u^-{p} v^-{qq} needs a deeper chart"),
                                )
                            })?;
                        if !r.is_zero() {
                            out.add_term(a, b, c * r);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplication by `t̂_{d,j_d} = f(u)` on a class along `D_d`.
    pub fn act_c(&self, d: &Direction, x: &H1Class) -> Result<H1Class> {
        if x.dir != *d {
            return Err(Error::Invalid(format!(
                "act_c along {d} applied to a class along {}",
                x.dir
            )));
        }
        let ch = self.chart(self.index(d)?);
        Ok(H1Class::from_chart(*d, &x.to_chart(0).mul(ch.f_u())))
    }

    /// Multiplication by `t̂_{e,n} = n·(λ f(t1) + μ f(t2))` on `H²`.
    pub fn act_x(&self, e: &Direction, n: u64, y: &H2Class) -> H2Class {
        let hat = self.hat_global(e, n);
        let mut out = H2Class::zero();
        for (&(a, b), c) in &y.terms {
            debug_assert!(((a + b) as usize) < hat.prec() + 2);
            for (m, h) in hat.terms() {
                if m[0] < a && m[1] < b {
                    out.add_term(a - m[0], b - m[1], c * h);
                }
            }
        }
        out
    }

    /// `d1(c_d·x) = r·x_A·d1(x) + s·x_B·d1(x)` on every sample.
    ///
    /// The window must use `j_d = n_d`; `A` and `B` act through the
    /// Koszul basis and need no chart of their own.
    pub fn check_equivariance(
        &self,
        profile: &FiniteSubgroupProfile,
        d: &Direction,
        samples: &[H1Class],
    ) -> Result<bool> {
        let nd = profile.n_index(d) as u64;
        if self.multiplicity(d)? != nd {
            return Err(Error::Invalid(format!(
                "window multiplicity of {d} must equal n_d = {nd}"
            )));
        }
        let (r, s) = solve_character_eq(profile, d)?;
        let (a, na) = profile.split_a;
        let (b, nb) = profile.split_b;
        self.check_equivariance_with(d, (a, na as u64), (b, nb as u64), (r, s), samples)
    }

    /// The same identity with caller-supplied `(r, s)`.
    pub fn check_equivariance_with(
        &self,
        d: &Direction,
        a: (Direction, u64),
        b: (Direction, u64),
        (r, s): (i64, i64),
        samples: &[H1Class],
    ) -> Result<bool> {
        for x in samples {
            let lhs = self.d1(&[self.act_c(d, x)?])?;
            let y = self.d1(std::slice::from_ref(x))?;
            let rhs = self
                .act_x(&a.0, a.1, &y)
                .scale(&q(r))
                .add(&self.act_x(&b.0, b.1, &y).scale(&q(s)));
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Principal parts of `Π t̂_s^{-e_s} · f`.
    ///
    /// `t̂_s^{-1} = t_s^{-1}·h(t_s)` with `h(t) = t/f(t)` a unit, so the
    /// inverted Euler classes only raise the pole exponents of `f`.
    pub fn phi0(&self, exps: &BTreeMap<Direction, u32>, f: &KLocal) -> Result<Vec<H1Class>> {
        self.check_exps(exps)?;
        let h = self.h_series()?;
        let mut num = f.numerator.clone();
        let mut all = f.exps.clone();
        for (d, e) in exps {
            if *e == 0 {
                continue;
            }
            num = num.mul(&h.compose_mv(self.coordinate(d)?).pow(*e));
            *all.entry(*d).or_insert(0) += e;
        }
        self.d0(&KLocal::new(num, all))
    }

    /// `h(t) = t / f(t)`.
    fn h_series(&self) -> Result<UniSeries> {
        let shifted = UniSeries::new(self.log.coeffs()[1..].to_vec(), self.log.prec() - 1);
        shifted.inverse()
    }

    /// `d1` after multiplying component `d` by `Π_{s≠d} t̂_s^{-e_s}`.
    pub fn phi1(&self, exps: &BTreeMap<Direction, u32>, classes: &[H1Class]) -> Result<H2Class> {
        self.check_exps(exps)?;
        let mut twisted = Vec::with_capacity(classes.len());
        for x in classes {
            let i = self.index(&x.dir)?;
            let ch = self.chart(i);
            let mut s = x.to_chart(0);
            for (j, (e, l)) in self.dirs.iter().enumerate() {
                let pow = exps.get(e).copied().unwrap_or(0);
                if j != i && pow > 0 {
                    s = s.mul(&ch.inv_that_pow(e, *l, pow));
                }
            }
            twisted.push(H1Class::from_chart(x.dir, &s));
        }
        self.d1(&twisted)
    }

    /// The chart class `u^{-p} v^{q}` along `d`, exact below `prec`.
    pub fn h1_monomial(&self, d: &Direction, p: u32, qq: i64, c: Q, prec: i64) -> Result<H1Class> {
        self.index(d)?;
        Ok(H1Class::new(*d, [((-(p as i64), qq), c)], prec))
    }

    /// `t_{e,l}` in chart `d`; exposed for cross-checks.
    pub fn chart_coordinate(&self, d: &Direction, e: &Direction, l: u64) -> Result<ChartSeries> {
        Ok(self.chart(self.index(d)?).t(e, l))
    }

    /// A `(t1, t2)`-series rewritten in chart `d`.
    pub fn to_chart(&self, d: &Direction, s: &BiSeries) -> Result<ChartSeries> {
        Ok(self.chart(self.index(d)?).compose(s))
    }
}

/// `numerator / Π t_d^{e_d}` for window directions `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLocal {
    numerator: BiSeries,
    exps: BTreeMap<Direction, u32>,
}

impl KLocal {
    pub fn new(numerator: BiSeries, exps: BTreeMap<Direction, u32>) -> Self {
        let exps = exps.into_iter().filter(|(_, e)| *e > 0).collect();
        KLocal { numerator, exps }
    }

    pub fn regular(numerator: BiSeries) -> Self {
        KLocal::new(numerator, BTreeMap::new())
    }

    pub fn numerator(&self) -> &BiSeries {
        &self.numerator
    }

    pub fn exps(&self) -> &BTreeMap<Direction, u32> {
        &self.exps
    }

    /// Total pole weight `Σ e_d`.
    pub fn weight(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn add(&self, other: &KLocal) -> Option<KLocal> {
        (self.exps == other.exps).then(|| KLocal {
            numerator: self.numerator.add(&other.numerator),
            exps: self.exps.clone(),
        })
    }
}

/// A principal part along `D_d` in the chart `(u, v)`.
///
/// Only terms `u^i v^j` with `i < 0` are kept; the class is known for total
/// degree `i + j < prec`.
#[derive(Clone, Debug)]
pub struct H1Class {
    dir: Direction,
    terms: BTreeMap<(i64, i64), Q>,
    prec: i64,
}

impl H1Class {
    pub fn new(
        dir: Direction,
        terms: impl IntoIterator<Item = ((i64, i64), Q)>,
        prec: i64,
    ) -> Self {
        let mut map: BTreeMap<(i64, i64), Q> = BTreeMap::new();
        for ((i, j), c) in terms {
            if i < 0 && i + j < prec {
                *map.entry((i, j)).or_insert_with(Q::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        H1Class {
            dir,
            terms: map,
            prec,
        }
    }

    pub fn zero(dir: Direction, prec: i64) -> Self {
        H1Class::new(dir, [], prec)
    }

    fn from_chart(dir: Direction, s: &ChartSeries) -> Self {
        H1Class::new(
            dir,
            s.terms().iter().map(|(e, c)| (*e, c.clone())),
            s.prec(),
        )
    }

    fn to_chart(&self, ucap: i64) -> ChartSeries {
        ChartSeries::from_terms(
            self.terms.iter().map(|(e, c)| (*e, c.clone())),
            self.prec,
            ucap,
        )
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), Q> {
        &self.terms
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest pole order in `u`.
    pub fn pole_order(&self) -> u32 {
        self.terms
            .keys()
            .map(|(i, _)| (-i) as u32)
            .max()
            .unwrap_or(0)
    }

    /// The coefficient of `u^{-p}` as a Laurent series in `v`.
    pub fn coefficient(&self, p: u32) -> LaurentTail {
        let i = -(p as i64);
        LaurentTail::from_terms(
            self.terms
                .range((i, i64::MIN)..=(i, i64::MAX))
                .map(|((_, j), c)| (*j, c.clone())),
            (self.prec - i).max(0) as usize,
        )
    }

    pub fn truncate(&self, prec: i64) -> Self {
        H1Class::new(self.dir, self.terms.clone(), prec.min(self.prec))
    }

    pub fn add(&self, other: &H1Class) -> Result<Self> {
        if self.dir != other.dir {
            return Err(Error::Invalid(
                "adding classes along different divisors".into(),
            ));
        }
        Ok(H1Class::new(
            self.dir,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
            self.prec.min(other.prec),
        ))
    }

    pub fn scale(&self, k: &Q) -> Self {
        H1Class::new(
            self.dir,
            self.terms.iter().map(|(e, c)| (*e, c * k)),
            self.prec,
        )
    }
}

/// Equal along the same divisor, at the common precision.
impl PartialEq for H1Class {
    fn eq(&self, other: &Self) -> bool {
        let prec = self.prec.min(other.prec);
        self.dir == other.dir && self.truncate(prec).terms == other.truncate(prec).terms
    }
}

impl fmt::Display for H1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.dir)?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (n, ((i, j), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*u^{i}*v^{j}", q_to_string(c))?;
        }
        write!(f, " + O(deg {})", self.prec)
    }
}

/// An element of `H²` in the Koszul basis `t1^{-a} t2^{-b}`, `a, b ≥ 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct H2Class {
    terms: BTreeMap<(u32, u32), Q>,
}

impl H2Class {
    pub fn zero() -> Self {
        H2Class::default()
    }

    pub fn basis(a: u32, b: u32) -> Self {
        let mut out = H2Class::zero();
        out.add_term(a, b, Q::one());
        out
    }

    fn add_term(&mut self, a: u32, b: u32, c: Q) {
        assert!(a >= 1 && b >= 1, "Koszul indices start at 1");
        let slot = self.terms.entry((a, b)).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Q> {
        &self.terms
    }

    pub fn coeff(&self, a: u32, b: u32) -> Q {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &H2Class) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Self {
        let mut out = H2Class::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(a, b, c * k);
        }
        out
    }
}

impl fmt::Display for H2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("{}*t1^-{a}*t2^-{b}", q_to_string(c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for H2Class {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|((a, b), c)| (format!("{a},{b}"), q_to_string(c)))
            .collect();
        map.serialize(s)
    }
}
