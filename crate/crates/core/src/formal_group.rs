//! The formal group law of a Weierstrass curve and the coordinates built
//! from it.
//!
//! The expansion follows the usual route through the parameter `z = -x/y`
//! and `w = -1/y`: solve for `w(z)`, add two points along the chord, and
//! read off the parameter of the sum.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{solve_character_eq, Direction, FiniteSubgroupProfile};
use crate::number::{parse_q, q, Q};
use crate::series::{BiSeries, MvSeries, UniSeries};

/// Default truncation degree.
pub const DEFAULT_PREC: usize = 10;

/// A long Weierstrass curve `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub a1: Q,
    pub a2: Q,
    pub a3: Q,
    pub a4: Q,
    pub a6: Q,
    disc: Q,
}

impl Curve {
    pub fn new(a1: Q, a2: Q, a3: Q, a4: Q, a6: Q) -> Result<Self> {
        let disc = discriminant(&a1, &a2, &a3, &a4, &a6);
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(Curve {
            a1,
            a2,
            a3,
            a4,
            a6,
            disc,
        })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self> {
        Curve::new(q(a[0]), q(a[1]), q(a[2]), q(a[3]), q(a[4]))
    }

    pub fn discriminant(&self) -> &Q {
        &self.disc
    }
}

fn discriminant(a1: &Q, a2: &Q, a3: &Q, a4: &Q, a6: &Q) -> Q {
    let b2 = a1 * a1 + q(4) * a2;
    let b4 = q(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + q(4) * a6;
    let b8 = a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6 + q(9) * &b2 * &b4 * &b6
}

impl FromStr for Curve {
    type Err = Error;

    /// `"a1,a2,a3,a4,a6"`, each entry an integer or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let mut vals = Vec::new();
        let mut offset = 0;
        for part in s.split(',') {
            vals.push(parse_q(part, offset)?);
            offset += part.len() + 1;
        }
        if vals.len() != 5 {
            return Err(Error::parse(
                0,
                format!(
                    "expected 5 coefficients a1,a2,a3,a4,a6, found {}",
                    vals.len()
                ),
            ));
        }
        let mut it = vals.into_iter();
        let mut next = || it.next().unwrap();
        Curve::new(next(), next(), next(), next(), next())
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

/// `w(z)` to precision `prec`, from `w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3`.
pub fn w_series(c: &Curve, prec: usize) -> UniSeries {
    let z = UniSeries::var(prec);
    let z2 = z.mul(&z);
    let z3 = z2.mul(&z);
    let mut w = z3.clone();
    // each pass fixes at least one more coefficient
    for _ in 0..prec {
        let w2 = w.mul(&w);
        let w3 = w2.mul(&w);
        let next = z3
            .add(&z.mul(&w).scale(&c.a1))
            .add(&z2.mul(&w).scale(&c.a2))
            .add(&w2.scale(&c.a3))
            .add(&z.mul(&w2).scale(&c.a4))
            .add(&w3.scale(&c.a6));
        if next == w {
            break;
        }
        w = next;
    }
    w
}

/// The formal group law `F(t1, t2)` of `c`, truncated at total degree `prec`.
pub fn fgl(c: &Curve, prec: usize) -> BiSeries {
    assert!(prec >= 2, "precision must be at least 2");
    let n = prec;
    let w = w_series(c, n + 1);
    let z1 = BiSeries::var(0, n);
    let z2 = BiSeries::var(1, n);
    // λ = Σ_k w_k (z2^k - z1^k)/(z2 - z1)
    let mut lambda_terms = Vec::new();
    for (k, wk) in w.coeffs().iter().enumerate() {
        if wk.is_zero() || k == 0 {
            continue;
        }
        for i in 0..k {
            lambda_terms.push(([i as u32, (k - 1 - i) as u32], wk.clone()));
        }
    }
    let lambda = BiSeries::from_terms(lambda_terms, n);
    let w1 = w.embed::<2>(0).truncate(n);
    let nu = w1.sub(&lambda.mul(&z1));
    let l2 = lambda.mul(&lambda);
    let l3 = l2.mul(&lambda);
    // sum of the three roots of the cubic cut out by the chord w = λz + ν
    let num = lambda
        .scale(&c.a1)
        .add(&l2.scale(&c.a3))
        .add(&nu.scale(&c.a2))
        .add(&lambda.mul(&nu).scale(&(q(2) * &c.a4)))
        .add(&l2.mul(&nu).scale(&(q(3) * &c.a6)));
    let den = BiSeries::one(n)
        .add(&lambda.scale(&c.a2))
        .add(&l2.scale(&c.a4))
        .add(&l3.scale(&c.a6));
    let z3 = z1
        .neg()
        .sub(&z2)
        .sub(&num.mul(&den.inverse().expect("unit denominator")));
    let w3 = lambda.mul(&z3).add(&nu);
    // inverse point: i(z) = z / (-1 + a1 z + a3 w)
    let iden = BiSeries::constant(q(-1), n)
        .add(&z3.scale(&c.a1))
        .add(&w3.scale(&c.a3));
    z3.mul(&iden.inverse().expect("unit denominator"))
}

/// Logarithm `f` of a formal group law: `f' = 1/(∂F/∂t2)(t, 0)`, `f(0) = 0`.
pub fn fgl_log(f: &BiSeries) -> UniSeries {
    let d2 = f.partial(1).at_zero(1);
    let uni = MvSeries::<1>::from_terms(
        d2.terms().iter().map(|(e, c)| ([e[0]], c.clone())),
        d2.prec(),
    )
    .to_uni();
    uni.inverse().expect("FGL has unit linear term").integrate()
}

/// `[n](t)` by repeated addition; negative `n` uses the formal inverse.
pub fn n_series(f: &BiSeries, n: i64) -> UniSeries {
    let prec = f.prec();
    let t = MvSeries::<1>::var(0, prec);
    let mut acc = MvSeries::<1>::zero(prec);
    for _ in 0..n.unsigned_abs() {
        acc = f.compose(&acc, &t);
    }
    let acc = acc.to_uni();
    if n < 0 {
        acc.compose(&formal_inverse(f))
    } else {
        acc
    }
}

/// `ι(t)` with `F(t, ι(t)) = 0`, from the fixed point `ι = -t - H(t, ι)`.
pub fn formal_inverse(f: &BiSeries) -> UniSeries {
    let prec = f.prec();
    let t = MvSeries::<1>::var(0, prec);
    let h = f.sub(&BiSeries::var(0, prec)).sub(&BiSeries::var(1, prec));
    let mut iota = t.neg();
    for _ in 0..prec {
        let next = t.neg().sub(&h.compose(&t, &iota));
        if next == iota {
            break;
        }
        iota = next;
    }
    iota.to_uni()
}

/// A curve together with its formal group data at a fixed precision.
///
/// Coordinates `t_{d,j}` are computed on demand and cached.
pub struct FormalGroup {
    curve: Curve,
    prec: usize,
    fgl: BiSeries,
    log: UniSeries,
    exp: UniSeries,
    coords: Mutex<HashMap<(Direction, u64), Arc<BiSeries>>>,
    nseries: Mutex<HashMap<i64, Arc<UniSeries>>>,
}

impl fmt::Debug for FormalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormalGroup")
            .field("curve", &self.curve)
            .field("prec", &self.prec)
            .finish()
    }
}

impl FormalGroup {
    pub fn new(curve: Curve, prec: usize) -> Result<Self> {
        if prec < 2 {
            return Err(Error::precision(prec as i64, "formal group needs N >= 2"));
        }
        let fgl = fgl(&curve, prec);
        let log = fgl_log(&fgl);
        let exp = log.reversion()?;
        Ok(FormalGroup {
            curve,
            prec,
            fgl,
            log,
            exp,
            coords: Mutex::new(HashMap::new()),
            nseries: Mutex::new(HashMap::new()),
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn fgl(&self) -> &BiSeries {
        &self.fgl
    }

    pub fn log(&self) -> &UniSeries {
        &self.log
    }

    pub fn exp(&self) -> &UniSeries {
        &self.exp
    }

    pub fn n_series(&self, n: i64) -> Arc<UniSeries> {
        if let Some(s) = self.nseries.lock().unwrap().get(&n) {
            return s.clone();
        }
        let s = Arc::new(n_series(&self.fgl, n));
        self.nseries.lock().unwrap().insert(n, s.clone());
        s
    }

    /// `t_{d,j} = F([jλ](t1), [jμ](t2))`.
    pub fn coord_t(&self, d: &Direction, j: u64) -> Arc<BiSeries> {
        if let Some(s) = self.coords.lock().unwrap().get(&(*d, j)) {
            return s.clone();
        }
        let jj = j as i64;
        let x = self.n_series(jj * d.lambda()).embed::<2>(0);
        let y = self.n_series(jj * d.mu()).embed::<2>(1);
        let s = Arc::new(self.fgl.compose(&x, &y));
        self.coords.lock().unwrap().insert((*d, j), s.clone());
        s
    }

    /// `t̂_{d,j} = f(t_{d,j})`.
    pub fn coord_that(&self, d: &Direction, j: u64) -> BiSeries {
        self.log.compose_mv(&self.coord_t(d, j))
    }

    /// `t̂_{d,n_d} - r·t̂_{A,n_A} - s·t̂_{B,n_B}` computed with the given logarithm.
    pub fn fundrel_residual(
        &self,
        profile: &FiniteSubgroupProfile,
        d: &Direction,
        log: &UniSeries,
    ) -> Result<BiSeries> {
        let (r, s) = solve_character_eq(profile, d)?;
        let nd = profile.n_index(d) as u64;
        let (a, na) = profile.split_a;
        let (b, nb) = profile.split_b;
        let lhs = log.compose_mv(&self.coord_t(d, nd));
        let ra = log.compose_mv(&self.coord_t(&a, na as u64)).scale(&q(r));
        let sb = log.compose_mv(&self.coord_t(&b, nb as u64)).scale(&q(s));
        Ok(lhs.sub(&ra).sub(&sb))
    }

    /// Whether `t̂_{d,n_d} = r·t̂_{A,n_A} + s·t̂_{B,n_B}` holds exactly.
    pub fn check_fundrel(&self, profile: &FiniteSubgroupProfile, d: &Direction) -> Result<bool> {
        Ok(self.fundrel_residual(profile, d, &self.log)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{splitting_pair, subgroup_from_generators, FiniteSubgroup};
    use crate::number::{qr, Frac};

    fn curve(s: &str) -> Curve {
        s.parse().unwrap()
    }

    #[test]
    fn curve_validation() {
        assert_eq!(*curve("0,0,0,0,1").discriminant(), q(-432));
        assert_eq!("0,0,0,-3,2".parse::<Curve>(), Err(Error::SingularCurve));
        assert_eq!("1,0,0,0,0".parse::<Curve>(), Err(Error::SingularCurve));
        assert!("0,0,0,1".parse::<Curve>().unwrap_err().is_parse());
        assert!("0,0,x,1,0".parse::<Curve>().unwrap_err().is_parse());
        assert_eq!(curve("0,0,1,-1,0").discriminant(), &q(37));
    }

    #[test]
    fn low_order_terms() {
        // F = t1 + t2 - a1 t1 t2 - a2 (t1^2 t2 + t1 t2^2) + ...
        let c = curve("2,3,5,7,11");
        let f = fgl(&c, 4);
        assert_eq!(f.coeff(&[1, 0]), q(1));
        assert_eq!(f.coeff(&[1, 1]), q(-2));
        assert_eq!(f.coeff(&[2, 1]), q(-3));
        assert_eq!(f.coeff(&[1, 2]), q(-3));
        assert_eq!(f.coeff(&[2, 0]), q(0));
    }

    #[test]
    fn degree_one_truncation_is_additive() {
        let f = fgl(&curve("1,-1,1,0,3"), 2);
        let add = BiSeries::var(0, 2).add(&BiSeries::var(1, 2));
        assert_eq!(f, add);
    }

    #[test]
    fn unit_axiom_short_form() {
        for c in ["0,0,0,1,0", "0,0,0,-1,1", "0,0,0,2,-3"] {
            let f = fgl(&curve(c), 9);
            assert_eq!(f.at_zero(1), BiSeries::var(0, 9));
        }
    }

    #[test]
    fn log_of_additive_law() {
        let add = BiSeries::var(0, 6).add(&BiSeries::var(1, 6));
        assert_eq!(fgl_log(&add), UniSeries::var(6));
    }

    #[test]
    fn log_has_unit_linear_term() {
        let g = FormalGroup::new(curve("0,0,1,-1,0"), 8).unwrap();
        assert_eq!(g.log().coeff(1), q(1));
        assert_eq!(g.log().coeff(0), q(0));
    }

    #[test]
    fn n_series_small_cases() {
        let g = FormalGroup::new(curve("0,0,0,1,0"), 7).unwrap();
        assert!(g.n_series(0).is_zero());
        assert_eq!(*g.n_series(1), UniSeries::var(7));
        let inv = g.n_series(-1);
        let t = MvSeries::<1>::var(0, 7);
        let sum = g.fgl().compose(&t, &MvSeries::from_uni(&inv));
        assert!(sum.is_zero());
    }

    #[test]
    fn coordinate_examples() {
        let g = FormalGroup::new(curve("0,0,1,-1,0"), 7).unwrap();
        let d10 = Direction::new(1, 0).unwrap();
        let d01 = Direction::new(0, 1).unwrap();
        let d11 = Direction::new(1, 1).unwrap();
        assert_eq!(*g.coord_t(&d10, 1), BiSeries::var(0, 7));
        assert_eq!(*g.coord_t(&d01, 2), g.n_series(2).embed::<2>(1));
        assert_eq!(*g.coord_t(&d11, 1), *g.fgl());
        let f1 = g.log().embed::<2>(0);
        let f2 = g.log().embed::<2>(1);
        assert_eq!(g.coord_that(&d10, 1), f1);
        assert_eq!(g.coord_that(&d11, 1), f1.add(&f2));
        let d12 = Direction::new(1, 2).unwrap();
        assert_eq!(g.coord_that(&d12, 3), f1.scale(&q(3)).add(&f2.scale(&q(6))));
    }

    #[test]
    fn fundrel_examples() {
        let g = FormalGroup::new(curve("0,0,1,-1,0"), 8).unwrap();
        let triv = splitting_pair(&FiniteSubgroup::trivial(), 50).unwrap();
        assert!(g
            .check_fundrel(&triv, &Direction::new(1, 1).unwrap())
            .unwrap());
        let c3 = subgroup_from_generators(&[(Frac::new(1, 3), Frac::new(1, 3))]);
        let p = splitting_pair(&c3, 50).unwrap();
        let d01 = Direction::new(0, 1).unwrap();
        assert!(g.check_fundrel(&p, &d01).unwrap());
        let mut bad = g.log().coeffs().to_vec();
        bad[2] += qr(1, 7);
        let bad = UniSeries::new(bad, g.prec());
        assert!(!g.fundrel_residual(&p, &d01, &bad).unwrap().is_zero());
    }
}
