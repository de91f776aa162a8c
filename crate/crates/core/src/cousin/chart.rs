//! Coordinate charts `(u, v) = (t_{d,j}, t_{c(d),1})` at the origin.
//!
//! Every coordinate is a group-like function, so in logarithmic terms
//! `f(t_{e,l}) = l·(λ_e f(t1) + μ_e f(t2))`. Inverting the 2×2 matrix of the
//! chart therefore expresses `t1`, `t2` and every other `t_{e,l}` as
//! `exp(α f(u) + β f(v))`, without any bivariate series reversion.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::laurent::ChartSeries;
use crate::lattice::Direction;
use crate::number::{q, Q};
use crate::series::{BiSeries, UniSeries};

/// Powers of inverted coordinates, keyed by `(direction, multiplicity, exponent)`.
type InverseCache = Mutex<HashMap<(Direction, u64, u32), Arc<ChartSeries>>>;

pub(crate) struct Chart {
    pub dir: Direction,
    pub comp: Direction,
    /// Inverse of `[[jλ, jμ], [λ_c, μ_c]]`.
    minv: [[Q; 2]; 2],
    prec: i64,
    ucap: i64,
    exp: UniSeries,
    fu: ChartSeries,
    fv: ChartSeries,
    jac: ChartSeries,
    xpow: Mutex<Vec<Arc<ChartSeries>>>,
    ypow: Mutex<Vec<Arc<ChartSeries>>>,
    g: Mutex<HashMap<(u32, u32), Arc<ChartSeries>>>,
    inv_t: InverseCache,
    inv_that: InverseCache,
}

impl Chart {
    pub fn new(
        dir: Direction,
        j: u64,
        comp: Direction,
        log: &UniSeries,
        exp: &UniSeries,
        ucap: i64,
    ) -> Self {
        let j = j as i64;
        let det = q(j * dir.det(&comp));
        let minv = [
            [q(comp.mu()) / &det, q(-j * dir.mu()) / &det],
            [q(-comp.lambda()) / &det, q(j * dir.lambda()) / &det],
        ];
        let prec = log.prec().min(exp.prec()) as i64;
        let fu = ChartSeries::from_u(log, ucap);
        let fv = ChartSeries::from_v(log, ucap);
        let mut chart = Chart {
            dir,
            comp,
            minv,
            prec,
            ucap,
            exp: exp.clone(),
            fu,
            fv,
            jac: ChartSeries::zero(prec, ucap),
            xpow: Mutex::new(Vec::new()),
            ypow: Mutex::new(Vec::new()),
            g: Mutex::new(HashMap::new()),
            inv_t: Mutex::new(HashMap::new()),
            inv_that: Mutex::new(HashMap::new()),
        };
        let x = chart
            .lin(&chart.minv[0][0], &chart.minv[0][1])
            .compose_into(exp);
        let y = chart
            .lin(&chart.minv[1][0], &chart.minv[1][1])
            .compose_into(exp);
        chart.jac = x
            .partial_u()
            .mul(&y.partial_v())
            .sub(&x.partial_v().mul(&y.partial_u()));
        let one = Arc::new(ChartSeries::monomial(0, 0, q(1), prec, ucap));
        *chart.xpow.get_mut().unwrap() = vec![one.clone(), Arc::new(x)];
        *chart.ypow.get_mut().unwrap() = vec![one, Arc::new(y)];
        chart
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// `f(u)`.
    pub fn f_u(&self) -> &ChartSeries {
        &self.fu
    }

    /// `d(t1,t2)/d(u,v)`.
    #[cfg(test)]
    pub fn jacobian(&self) -> &ChartSeries {
        &self.jac
    }

    fn lin(&self, a: &Q, b: &Q) -> ChartSeries {
        self.fu.scale(a).add(&self.fv.scale(b))
    }

    /// `(α, β)` with `f(t_{e,l}) = α f(u) + β f(v)`.
    pub fn log_coefficients(&self, e: &Direction, l: u64) -> (Q, Q) {
        let (lam, mu) = (q(l as i64 * e.lambda()), q(l as i64 * e.mu()));
        (
            &lam * &self.minv[0][0] + &mu * &self.minv[1][0],
            &lam * &self.minv[0][1] + &mu * &self.minv[1][1],
        )
    }

    /// `t̂_{e,l}` in chart coordinates.
    pub fn that(&self, e: &Direction, l: u64) -> ChartSeries {
        let (a, b) = self.log_coefficients(e, l);
        self.lin(&a, &b)
    }

    /// `t_{e,l}` in chart coordinates.
    pub fn t(&self, e: &Direction, l: u64) -> ChartSeries {
        self.that(e, l).compose_into(&self.exp)
    }

    fn extend(cache: &Mutex<Vec<Arc<ChartSeries>>>, n: usize) -> Arc<ChartSeries> {
        let mut v = cache.lock().unwrap();
        while v.len() <= n {
            let next = v[v.len() - 1].mul(&v[1]);
            v.push(Arc::new(next));
        }
        v[n].clone()
    }

    pub fn pow_x(&self, n: usize) -> Arc<ChartSeries> {
        Self::extend(&self.xpow, n)
    }

    pub fn pow_y(&self, n: usize) -> Arc<ChartSeries> {
        Self::extend(&self.ypow, n)
    }

    /// A series in `(t1, t2)` rewritten in chart coordinates.
    pub fn compose(&self, s: &BiSeries) -> ChartSeries {
        let mut rows: HashMap<u32, Vec<(u32, &Q)>> = HashMap::new();
        for (e, c) in s.terms() {
            rows.entry(e[0]).or_default().push((e[1], c));
        }
        let mut out = ChartSeries::zero(s.prec() as i64, self.ucap);
        for (a, row) in rows {
            let mut inner = ChartSeries::zero(self.prec, self.ucap);
            for (b, c) in row {
                inner = inner.add(&self.pow_y(b as usize).scale(c));
            }
            out = out.add(&self.pow_x(a as usize).mul(&inner));
        }
        out
    }

    /// `G_ab = t1^{a-1} t2^{b-1} · Jac`, the residue kernel for the Koszul
    /// basis element `t1^{-a} t2^{-b}`.
    pub fn g(&self, a: u32, b: u32) -> Arc<ChartSeries> {
        if let Some(s) = self.g.lock().unwrap().get(&(a, b)) {
            return s.clone();
        }
        let s = Arc::new(
            self.pow_x(a as usize - 1)
                .mul(&self.pow_y(b as usize - 1))
                .mul(&self.jac),
        );
        self.g.lock().unwrap().insert((a, b), s.clone());
        s
    }

    fn cached_inverse_pow(
        cache: &InverseCache,
        key: (Direction, u64, u32),
        base: impl FnOnce() -> ChartSeries,
    ) -> Arc<ChartSeries> {
        if let Some(s) = cache.lock().unwrap().get(&key) {
            return s.clone();
        }
        let inv = base()
            .inverse()
            .expect("coordinates of non-parallel directions are invertible in the chart");
        let s = Arc::new(inv.pow(key.2));
        cache.lock().unwrap().insert(key, s.clone());
        s
    }

    /// `t_{e,l}^{-n}` expanded in `Q((v))((u))`.
    pub fn inv_t_pow(&self, e: &Direction, l: u64, n: u32) -> Arc<ChartSeries> {
        Self::cached_inverse_pow(&self.inv_t, (*e, l, n), || self.t(e, l))
    }

    /// `t̂_{e,l}^{-n}` expanded in `Q((v))((u))`.
    pub fn inv_that_pow(&self, e: &Direction, l: u64, n: u32) -> Arc<ChartSeries> {
        Self::cached_inverse_pow(&self.inv_that, (*e, l, n), || self.that(e, l))
    }

    /// Coefficient of `u^i v^j` in `G_ab`, or `None` when it lies beyond the
    /// chart's truncation.
    pub fn residue_coefficient(&self, a: u32, b: u32, i: i64, j: i64) -> Option<Q> {
        let g = self.g(a, b);
        if i + j >= g.prec() || i >= g.ucap() {
            return None;
        }
        Some(g.coeff(i, j))
    }
}

impl std::fmt::Debug for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Chart")
            .field("dir", &self.dir)
            .field("comp", &self.comp)
            .field("prec", &self.prec)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::formal_group::{Curve, FormalGroup};

    fn setup(prec: usize) -> FormalGroup {
        FormalGroup::new(Curve::from_ints([1, 2, 0, -1, 1]).unwrap(), prec).unwrap()
    }

    #[test]
    fn chart_coordinates_are_the_chart_variables() {
        let fg = setup(8);
        let d = Direction::new(1, 1).unwrap();
        let ch = Chart::new(d, 2, d.complement(), fg.log(), fg.exp(), 3);
        let u = ch.compose(&fg.coord_t(&d, 2));
        assert_eq!(u.terms().len(), 1);
        assert_eq!(u.coeff(1, 0), q(1));
        let v = ch.compose(&fg.coord_t(&d.complement(), 1));
        assert_eq!(v.terms().len(), 1);
        assert_eq!(v.coeff(0, 1), q(1));
    }

    #[test]
    fn other_coordinates_agree_with_the_group_law() {
        let fg = setup(8);
        let d = Direction::new(-1, 1).unwrap();
        let ch = Chart::new(d, 1, d.complement(), fg.log(), fg.exp(), 3);
        for (e, l) in [
            (Direction::new(1, 0).unwrap(), 2),
            (Direction::new(2, 1).unwrap(), 1),
        ] {
            let direct = ch.t(&e, l);
            let composed = ch.compose(&fg.coord_t(&e, l));
            assert_eq!(direct.sub(&composed).terms().len(), 0, "{e}");
        }
    }

    #[test]
    fn jacobian_is_a_unit() {
        let fg = setup(6);
        let d = Direction::new(1, 0).unwrap();
        let ch = Chart::new(d, 1, d.complement(), fg.log(), fg.exp(), 3);
        assert_eq!(ch.jacobian().coeff(0, 0), q(1));
        assert!(!ch.jacobian().coeff(0, 0).is_zero());
    }
}
