//! Torsion-point model of the surface `χ = E×E`.
//!
//! Torsion of the curve is modelled as `(Q/Z)^2`, so a torsion point of the
//! surface is a pair `Q = (q1, q2)` of such elements. A character `c = (a,b)`
//! acts by `c·Q = a·q1 + b·q2`; `𝔛(H)` is the set of points killed by every
//! character vanishing on `H`. Only the group structure of torsion enters,
//! so no Weierstrass coordinates are ever computed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    n_index, subgroup_from_generators, CodimOneSubgroup, Direction, FiniteSubgroup,
};
use crate::number::{frac_mod1, gcd, lcm, parse_frac, Frac};

/// A torsion point of the curve, as an element of `(Q/Z)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint(pub Frac, pub Frac);

impl TorsionPoint {
    pub fn new(x: Frac, y: Frac) -> Self {
        TorsionPoint(frac_mod1(x), frac_mod1(y))
    }

    pub fn origin() -> Self {
        TorsionPoint(Frac::zero(), Frac::zero())
    }

    pub fn is_origin(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }

    pub fn add(&self, o: &TorsionPoint) -> Self {
        TorsionPoint::new(self.0 + o.0, self.1 + o.1)
    }

    pub fn mul(&self, n: i64) -> Self {
        TorsionPoint::new(self.0 * n, self.1 * n)
    }

    /// Order in the group: the lcm of the reduced denominators.
    pub fn order(&self) -> u64 {
        point_order(self)
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0, self.1)
    }
}

impl FromStr for TorsionPoint {
    type Err = Error;

    /// `"p/q,r/s"`.
    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| Error::parse(0, "torsion point needs two coordinates"))?;
        Ok(TorsionPoint::new(
            parse_frac(x, 0)?,
            parse_frac(y, x.len() + 1)?,
        ))
    }
}

impl Serialize for TorsionPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

pub fn point_order(p: &TorsionPoint) -> u64 {
    let a = frac_mod1(p.0);
    let b = frac_mod1(p.1);
    lcm(*a.denom(), *b.denom()) as u64
}

/// Jordan totient `J(n) = n^2 Π_{p|n} (1 - p^-2)`: the number of points of
/// exact order `n` in `(Q/Z)^2`.
pub fn exact_order_count(n: u64) -> u64 {
    let mut m = n;
    let mut out = n * n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out = out / (p * p) * (p * p - 1);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out = out / (m * m) * (m * m - 1);
    }
    out
}

/// A torsion point of `E×E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceTorsionPoint(pub TorsionPoint, pub TorsionPoint);

impl SurfaceTorsionPoint {
    pub fn origin() -> Self {
        SurfaceTorsionPoint(TorsionPoint::origin(), TorsionPoint::origin())
    }

    /// `a·q1 + b·q2` for the character `(a, b)`.
    pub fn pair(&self, a: i64, b: i64) -> TorsionPoint {
        self.0.mul(a).add(&self.1.mul(b))
    }

    /// The image `z_d(Q) = λ·q1 + μ·q2` on the curve.
    pub fn project(&self, d: &Direction) -> TorsionPoint {
        self.pair(d.lambda(), d.mu())
    }

    pub fn order(&self) -> u64 {
        lcm(self.0.order() as i64, self.1.order() as i64) as u64
    }
}

impl fmt::Display for SurfaceTorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.0, self.1)
    }
}

impl Serialize for SurfaceTorsionPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

/// Whether `Q ∈ 𝔛(H_d^j)`, i.e. `j·(λ q1 + μ q2) = 0`.
pub fn xvar_contains(q: &SurfaceTorsionPoint, h: &CodimOneSubgroup) -> bool {
    q.project(&h.dir).mul(h.components as i64).is_origin()
}

/// Whether `Q` lies on `D_{d,j}`: the projection has exact order `j`.
pub fn on_divisor(q: &SurfaceTorsionPoint, d: &Direction, j: u64) -> bool {
    q.project(d).order() == j
}

/// The points of `𝔛(F)`: the two coordinate slices `(q1x, q2x)`, `(q1y, q2y)`
/// both lie in `F`.
pub fn xvar_points(f: &FiniteSubgroup) -> Vec<SurfaceTorsionPoint> {
    let els = f.elements();
    let mut out = Vec::with_capacity(els.len() * els.len());
    for gx in &els {
        for gy in &els {
            out.push(from_slices(*gx, *gy));
        }
    }
    out
}

fn from_slices(gx: (Frac, Frac), gy: (Frac, Frac)) -> SurfaceTorsionPoint {
    SurfaceTorsionPoint(TorsionPoint::new(gx.0, gy.0), TorsionPoint::new(gx.1, gy.1))
}

/// Largest subgroup order accepted by [`bvar_points`].
pub const BVAR_BUDGET: u64 = 64;

/// `bvar(F)`: points of `𝔛(F)` lying on no `𝔛(F')` for a proper `F' < F`.
///
/// A point lies in `𝔛(F')` exactly when its two slices lie in `F'`, so the
/// survivors are the points whose slices generate all of `F`.
pub fn bvar_points(f: &FiniteSubgroup) -> Result<Vec<SurfaceTorsionPoint>> {
    if f.order() > BVAR_BUDGET {
        return Err(Error::Budget(BVAR_BUDGET));
    }
    let els = f.elements();
    let mut out = Vec::new();
    for gx in &els {
        for gy in &els {
            if subgroup_from_generators(&[*gx, *gy]) == *f {
                out.push(from_slices(*gx, *gy));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Integer model of a torsion point of `E×E` of order dividing `m`:
/// `Q = (x1, y1, x2, y2) / m`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct IntPoint {
    pub m: i64,
    pub c: [i64; 4],
}

impl IntPoint {
    /// Exact order of `λ q1 + μ q2`.
    pub fn project_order(&self, lambda: i64, mu: i64) -> i64 {
        let x = (lambda * self.c[0] + mu * self.c[2]).rem_euclid(self.m);
        let y = (lambda * self.c[1] + mu * self.c[3]).rem_euclid(self.m);
        self.m / gcd(gcd(x, y), self.m)
    }

    pub fn to_point(self) -> SurfaceTorsionPoint {
        let f = |v: i64| Frac::new(v, self.m);
        SurfaceTorsionPoint(
            TorsionPoint::new(f(self.c[0]), f(self.c[1])),
            TorsionPoint::new(f(self.c[2]), f(self.c[3])),
        )
    }
}

/// Every point of `E[m]^2`, in lexicographic order.
pub(crate) fn all_points(m: i64) -> impl Iterator<Item = IntPoint> {
    let n = m.pow(4);
    (0..n).map(move |k| IntPoint {
        m,
        c: [k / (m * m * m), (k / (m * m)) % m, (k / m) % m, k % m],
    })
}

/// Points of exact order `m` in `E×E`.
pub(crate) fn points_of_exact_order(m: i64) -> impl Iterator<Item = IntPoint> {
    all_points(m).filter(move |p| p.c.iter().fold(m, |g, &x| gcd(g, x)) == 1)
}

/// Directions for which the fibre condition `Q ∈ ∩ D_{d,n_d}` pins down `bvar(F)`.
///
/// Two directions spanning the annihilator force `Q ∈ 𝔛(F)`; any strictly
/// larger kernel contains a vector with coordinates below the exponent of `F`,
/// which the small directions detect.
pub fn sufficient_directions(f: &FiniteSubgroup, a: &Direction, b: &Direction) -> Vec<Direction> {
    let e = f.exponent();
    let mut dirs = vec![*a, *b];
    for l in -(e - 1)..=(e - 1) {
        for m in 0..=(e - 1) {
            if (l, m) == (0, 0) {
                continue;
            }
            if let Ok(d) = Direction::new(l, m) {
                dirs.push(d);
            }
        }
    }
    dirs.push(Direction::raw(1, 0));
    dirs.push(Direction::raw(0, 1));
    dirs.sort();
    dirs.dedup();
    dirs
}

/// Check the fibre description of `bvar(F)` with the true `n_d` values.
pub fn check_lemma_fin(f: &FiniteSubgroup, dirs: &[Direction], order_bound: i64) -> Result<bool> {
    let ns: Vec<(Direction, u64)> = dirs.iter().map(|d| (*d, n_index(f, d) as u64)).collect();
    check_lemma_fin_with(f, &ns, order_bound)
}

/// Check with an explicit `d ↦ n` table:
///
/// * every point of `bvar(F)` projects along each `d` to a point of exact
///   order `n` (so it lies on `D_{d,n}` and on no other `D_{d,m}`);
/// * among torsion points of order at most `order_bound`, the common fibre
///   `∩_d D_{d,n}` is exactly `bvar(F)`.
pub fn check_lemma_fin_with(
    f: &FiniteSubgroup,
    ns: &[(Direction, u64)],
    order_bound: i64,
) -> Result<bool> {
    let bvar = bvar_points(f)?;
    for q in &bvar {
        for (d, n) in ns {
            if q.project(d).order() != *n {
                return Ok(false);
            }
        }
    }
    let mut inside = Vec::new();
    for m in 1..=order_bound {
        for p in points_of_exact_order(m) {
            if ns
                .iter()
                .all(|(d, n)| p.project_order(d.lambda(), d.mu()) == *n as i64)
            {
                inside.push(p.to_point());
            }
        }
    }
    inside.sort();
    let expected: Vec<_> = bvar
        .into_iter()
        .filter(|q| q.order() as i64 <= order_bound)
        .collect();
    Ok(inside == expected)
}

/// A divisor `Σ n_P (P)` on the curve supported on torsion points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EllipticDivisor {
    pub terms: BTreeMap<TorsionPoint, i64>,
}

impl EllipticDivisor {
    pub fn new(terms: impl IntoIterator<Item = (TorsionPoint, i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (p, n) in terms {
            *map.entry(p).or_insert(0) += n;
        }
        map.retain(|_, n| *n != 0);
        EllipticDivisor { terms: map }
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    /// `Σ n_P · P` in the group.
    pub fn sum(&self) -> TorsionPoint {
        self.terms
            .iter()
            .fold(TorsionPoint::origin(), |acc, (p, n)| acc.add(&p.mul(*n)))
    }
}

/// Abel's criterion: `D` is principal iff `deg D = 0` and `Σ n_P P = 0`.
pub fn abel_check(d: &EllipticDivisor) -> bool {
    d.degree() == 0 && d.sum().is_origin()
}

/// A formal combination `Σ v_{d,j} D_{d,j}` of the divisors on `E×E`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct XDivisor {
    terms: BTreeMap<(Direction, u64), i64>,
}

impl XDivisor {
    pub fn new(terms: impl IntoIterator<Item = ((Direction, u64), i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in terms {
            assert!(k.1 >= 1, "component index must be positive");
            *map.entry(k).or_insert(0) += v;
        }
        map.retain(|_, v| *v != 0);
        XDivisor { terms: map }
    }

    pub fn single(d: Direction, j: u64) -> Self {
        XDivisor::new([((d, j), 1)])
    }

    pub fn terms(&self) -> &BTreeMap<(Direction, u64), i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &Direction, j: u64) -> i64 {
        self.terms.get(&(*d, j)).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &XDivisor) -> XDivisor {
        XDivisor::new(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(k, v)| (*k, *v)),
        )
    }

    pub fn scale(&self, k: i64) -> XDivisor {
        XDivisor::new(self.terms.iter().map(|(key, v)| (*key, v * k)))
    }

    /// Distinct directions in the support, in search order.
    pub fn directions(&self) -> Vec<Direction> {
        let mut v: Vec<Direction> = self.terms.keys().map(|(d, _)| *d).collect();
        v.dedup();
        v
    }

    /// Degree of the pushforward along `π_d`: `Σ_j v_{d,j} J(j)`.
    pub fn direction_degree(&self, d: &Direction) -> i64 {
        self.terms
            .iter()
            .filter(|((e, _), _)| e == d)
            .map(|((_, j), v)| v * exact_order_count(*j) as i64)
            .sum()
    }

    pub fn self_intersection(&self) -> i64 {
        intersection_number(self, self)
    }
}

impl fmt::Display for XDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self
            .terms
            .iter()
            .map(|((d, j), v)| format!("dir={d} j={j} coeff={v}"))
            .collect();
        write!(f, "{}", lines.join("\n"))
    }
}

impl FromStr for XDivisor {
    type Err = Error;

    /// One term per line: `dir=(λ,μ) j=k coeff=v`. Blank lines are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut offset = 0;
        for line in s.lines() {
            let trimmed = line.trim();
            if !trimmed.is_empty() {
                terms.push(parse_divisor_line(trimmed, offset)?);
            }
            offset += line.len() + 1;
        }
        Ok(XDivisor::new(terms))
    }
}

fn parse_divisor_line(line: &str, offset: usize) -> Result<((Direction, u64), i64)> {
    let mut dir = None;
    let mut j = None;
    let mut coeff = None;
    let mut pos = offset;
    for field in line.split_whitespace() {
        let (key, val) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(pos, format!("expected key=value, found {field:?}")))?;
        let vpos = pos + key.len() + 1;
        match key {
            "dir" => {
                let inner = val
                    .strip_prefix('(')
                    .and_then(|v| v.strip_suffix(')'))
                    .ok_or_else(|| Error::parse(vpos, "direction must look like (λ,μ)"))?;
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::parse(vpos, "direction needs two integers"))?;
                let a: i64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(vpos, "bad integer"))?;
                let b: i64 = b
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(vpos, "bad integer"))?;
                dir = Some(Direction::new(a, b)?);
            }
            "j" => {
                let v: u64 = val
                    .parse()
                    .map_err(|_| Error::parse(vpos, "bad component index"))?;
                if v == 0 {
                    return Err(Error::parse(vpos, "component index must be positive"));
                }
                j = Some(v);
            }
            "coeff" => {
                coeff = Some(
                    val.parse()
                        .map_err(|_| Error::parse(vpos, "bad coefficient"))?,
                );
            }
            other => return Err(Error::parse(pos, format!("unknown key {other:?}"))),
        }
        pos += field.len() + 1;
    }
    match (dir, j, coeff) {
        (Some(d), Some(j), Some(c)) => Ok(((d, j), c)),
        _ => Err(Error::parse(offset, "line needs dir=, j= and coeff=")),
    }
}

/// Intersection pairing: `D_{d,j}·D_{d',l} = J(j) J(l) det(d,d')^2`, and `0`
/// for parallel components, extended bilinearly.
pub fn intersection_number(d1: &XDivisor, d2: &XDivisor) -> i64 {
    let mut total = 0i64;
    for ((a, j), v) in &d1.terms {
        for ((b, l), w) in &d2.terms {
            if a == b {
                continue;
            }
            let det = a.det(b);
            total +=
                v * w * exact_order_count(*j) as i64 * exact_order_count(*l) as i64 * det * det;
        }
    }
    total
}
