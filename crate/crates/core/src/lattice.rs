//! Character-lattice combinatorics for closed subgroups of the 2-torus.
//!
//! Characters of `T^2` are integer vectors `(a, b)` (the monomial
//! `z1^a z2^b`). A primitive, normalized vector is a [`Direction`]; it
//! names a connected codimension-one subgroup `H_d = ker z_d`, and
//! `H_d^j = ker z_d^j` is the subgroup with `j` components.
//!
//! A finite subgroup `F` is stored through the lattice `F + Z^2 ⊂ Q^2` in
//! Hermite normal form, which is canonical. Its annihilator (the characters
//! vanishing on `F`) is the dual lattice.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::number::{ext_gcd, frac_mod1, gcd, lcm, parse_frac, q, Frac, Q};

/// Default bound on `|λ|+|μ|` explored by [`splitting_pair`].
pub const DEFAULT_SPLIT_BUDGET: i64 = 50;

/// An integer character `z1^a z2^b` of the 2-torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Character {
    pub a: i64,
    pub b: i64,
}

impl Character {
    pub fn new(a: i64, b: i64) -> Self {
        Character { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Value of the character on a torsion element, in `Q/Z`.
    pub fn pairing(&self, g: (Frac, Frac)) -> Frac {
        frac_mod1(g.0 * self.a + g.1 * self.b)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A primitive integer vector `(λ, μ)` with `μ >= 0`, and `λ = 1` when `μ = 0`.
///
/// The derived ordering is the search order used throughout the crate:
/// increasing `|λ|+|μ|`, then `μ`, then `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Direction {
    lambda: i64,
    mu: i64,
}

impl Direction {
    /// The normalized primitive vector parallel to `(a, b)`.
    pub fn new(a: i64, b: i64) -> Result<Self> {
        normalize_direction(a, b)
    }

    pub(crate) const fn raw(lambda: i64, mu: i64) -> Self {
        Direction { lambda, mu }
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn mu(&self) -> i64 {
        self.mu
    }

    pub fn weight(&self) -> i64 {
        self.lambda.abs() + self.mu.abs()
    }

    /// `det` of the 2x2 matrix with rows `self`, `other`.
    pub fn det(&self, other: &Direction) -> i64 {
        self.lambda * other.mu - self.mu * other.lambda
    }

    pub fn character(&self, n: i64) -> Character {
        Character::new(n * self.lambda, n * self.mu)
    }

    /// `λ x + μ y` in `Q/Z`.
    pub fn pairing(&self, g: (Frac, Frac)) -> Frac {
        self.character(1).pairing(g)
    }

    /// A direction `c` with `det(self, c) = ±1`, obtained from the extended
    /// Euclid identity. Prefers `(0,1)` or `(1,0)` when they qualify.
    pub fn complement(&self) -> Direction {
        for cand in [Direction::raw(0, 1), Direction::raw(1, 0)] {
            if self.det(&cand).abs() == 1 {
                return cand;
            }
        }
        // λ x + μ y = 1  =>  det((λ,μ), (-y, x)) = 1
        let (_, x, y) = ext_gcd(self.lambda, self.mu);
        normalize_direction(-y, x).expect("unimodular complement is nonzero")
    }

    /// All normalized directions with `|λ|+|μ| <= max_weight`, in search order.
    pub fn grid(max_weight: i64) -> Vec<Direction> {
        let mut out = Vec::new();
        for w in 1..=max_weight {
            for mu in 0..=w {
                let rest = w - mu;
                let lambdas: Vec<i64> = if rest == 0 {
                    vec![0]
                } else if mu == 0 {
                    vec![rest]
                } else {
                    vec![-rest, rest]
                };
                for lambda in lambdas {
                    if mu == 0 && lambda != 1 {
                        continue;
                    }
                    if gcd(lambda.abs(), mu) == 1 {
                        out.push(Direction { lambda, mu });
                    }
                }
            }
        }
        out
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Direction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.weight(), self.mu, self.lambda).cmp(&(other.weight(), other.mu, other.lambda))
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lambda, self.mu)
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lambda, self.mu].serialize(s)
    }
}

/// The closed subgroup `H_d^j = ker z_d^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CodimOneSubgroup {
    pub dir: Direction,
    pub components: u64,
}

impl CodimOneSubgroup {
    pub fn new(dir: Direction, components: u64) -> Result<Self> {
        if components == 0 {
            return Err(Error::Invalid("component count must be >= 1".into()));
        }
        Ok(CodimOneSubgroup { dir, components })
    }
}

pub fn normalize_direction(a: i64, b: i64) -> Result<Direction> {
    if a == 0 && b == 0 {
        return Err(Error::ZeroVector(format!("({a},{b})")));
    }
    let g = gcd(a.abs(), b.abs());
    let (mut l, mut m) = (a / g, b / g);
    if m < 0 {
        l = -l;
        m = -m;
    }
    if m == 0 {
        l = 1;
    }
    Ok(Direction { lambda: l, mu: m })
}

/// Write `c = n · d` with `d` normalized; the sign is carried by `n`.
pub fn decompose_character(c: Character) -> Result<(Direction, i64)> {
    let d = normalize_direction(c.a, c.b)?;
    let n = if d.lambda != 0 {
        c.a / d.lambda
    } else {
        c.b / d.mu
    };
    Ok((d, n))
}

/// Row-style Hermite normal form `[[g, h], [0, c]]` (`g, c > 0`, `0 <= h < c`)
/// of the full-rank lattice spanned by `vecs` in `Z^2`.
fn hnf2(vecs: &[(i64, i64)]) -> (i64, i64, i64) {
    let mut det = 0i64;
    for (i, u) in vecs.iter().enumerate() {
        for v in &vecs[i + 1..] {
            det = gcd(det, u.0 * v.1 - u.1 * v.0);
        }
    }
    assert!(det != 0, "lattice must have full rank");
    let mut cur = (0i64, 0i64);
    for v in vecs {
        let (_, s, t) = ext_gcd(cur.0, v.0);
        cur = (s * cur.0 + t * v.0, s * cur.1 + t * v.1);
    }
    if cur.0 < 0 {
        cur = (-cur.0, -cur.1);
    }
    let g = cur.0;
    let c = det / g;
    (g, cur.1.rem_euclid(c), c)
}

/// A finite subgroup of `(Q/Z)^2`, stored in canonical form.
///
/// The lattice `Λ = F + Z^2` has a unique basis `(a, b), (0, c)` with
/// `a, c > 0` and `0 <= b < c`; `|F| = 1/(a c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSubgroup {
    a: Frac,
    b: Frac,
    c: Frac,
    order: u64,
}

impl FiniteSubgroup {
    pub fn trivial() -> Self {
        FiniteSubgroup {
            a: Frac::one(),
            b: Frac::zero(),
            c: Frac::one(),
            order: 1,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical generators: the nonzero rows of the normal form, mod 1.
    pub fn generators(&self) -> Vec<(Frac, Frac)> {
        let mut out = Vec::new();
        let r1 = (frac_mod1(self.a), frac_mod1(self.b));
        let r2 = (Frac::zero(), frac_mod1(self.c));
        for r in [r1, r2] {
            if !(r.0.is_zero() && r.1.is_zero()) {
                out.push(r);
            }
        }
        out
    }

    pub fn contains(&self, g: (Frac, Frac)) -> bool {
        let alpha = g.0 / self.a;
        if !alpha.is_integer() {
            return false;
        }
        ((g.1 - alpha * self.b) / self.c).is_integer()
    }

    /// All elements, as reduced fractions in `[0,1)^2`.
    pub fn elements(&self) -> Vec<(Frac, Frac)> {
        let gens = self.generators();
        let zero = (Frac::zero(), Frac::zero());
        let mut seen: HashSet<(Frac, Frac)> = HashSet::from([zero]);
        let mut out = vec![zero];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &gens {
                let y = (frac_mod1(x.0 + g.0), frac_mod1(x.1 + g.1));
                if seen.insert(y) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort();
        out
    }

    /// Integer basis of the annihilator lattice `{c ∈ Z^2 : c·F = 0}`.
    pub fn annihilator(&self) -> [(i64, i64); 2] {
        let w1 = (Frac::one() / self.a, Frac::zero());
        let w2 = (-self.b / (self.a * self.c), Frac::one() / self.c);
        let to_int = |x: Frac| {
            debug_assert!(x.is_integer());
            x.to_integer()
        };
        [(to_int(w1.0), to_int(w1.1)), (to_int(w2.0), to_int(w2.1))]
    }

    /// Exponent of the group (the lcm of element orders).
    pub fn exponent(&self) -> i64 {
        self.generators()
            .iter()
            .fold(1, |e, g| lcm(e, lcm(*g.0.denom(), *g.1.denom())))
    }

    /// All finite subgroups of a given order, one per sublattice of `Z^2`
    /// of that index (there are `σ(n)` of them).
    pub fn all_of_order(n: u64) -> Vec<FiniteSubgroup> {
        let n = n as i64;
        let mut out = Vec::new();
        for s in 1..=n {
            if n % s != 0 {
                continue;
            }
            let p = n / s;
            for t in 0..s {
                // annihilator rows (p, t), (0, s); F is spanned by the columns of the inverse
                let g1 = (Frac::new(1, p), Frac::zero());
                let g2 = (Frac::new(-t, p * s), Frac::new(1, s));
                out.push(FiniteSubgroup::from_generators(&[g1, g2]));
            }
        }
        out.sort_by_key(|x| (x.a, x.b, x.c));
        out.dedup();
        out
    }
}

impl fmt::Display for FiniteSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators()
            .iter()
            .map(|(x, y)| format!("{x},{y}"))
            .collect();
        write!(f, "{}", gens.join(";"))
    }
}

impl FromStr for FiniteSubgroup {
    type Err = Error;

    /// Semicolon-separated generators, each `p/q,r/s`. The empty string is
    /// the trivial subgroup.
    fn from_str(s: &str) -> Result<Self> {
        let mut gens = Vec::new();
        let mut offset = 0;
        for part in s.split(';') {
            let trimmed = part.trim();
            if !trimmed.is_empty() {
                let (x, y) = trimmed
                    .split_once(',')
                    .ok_or_else(|| Error::parse(offset, "generator needs two coordinates"))?;
                let gx = parse_frac(x, offset)?;
                let gy = parse_frac(y, offset + x.len() + 1)?;
                gens.push((gx, gy));
            }
            offset += part.len() + 1;
        }
        Ok(subgroup_from_generators(&gens))
    }
}

impl FiniteSubgroup {
    pub fn from_generators(gens: &[(Frac, Frac)]) -> FiniteSubgroup {
        subgroup_from_generators(gens)
    }
}

/// Canonical form of the subgroup generated by `gens` in `(Q/Z)^2`.
pub fn subgroup_from_generators(gens: &[(Frac, Frac)]) -> FiniteSubgroup {
    let den = gens
        .iter()
        .fold(1i64, |d, g| lcm(d, lcm(*g.0.denom(), *g.1.denom())));
    let mut vecs = vec![(den, 0), (0, den)];
    for g in gens {
        let x = *g.0.numer() * (den / *g.0.denom());
        let y = *g.1.numer() * (den / *g.1.denom());
        vecs.push((x, y));
    }
    let (g, h, c) = hnf2(&vecs);
    let order = (den * den / (g * c)) as u64;
    FiniteSubgroup {
        a: Frac::new(g, den),
        b: Frac::new(h, den),
        c: Frac::new(c, den),
        order,
    }
}

/// Least `n >= 1` with `z_d^n` trivial on `F`: the order of `z_d(F)` in `Q/Z`.
pub fn n_index(f: &FiniteSubgroup, d: &Direction) -> i64 {
    f.generators()
        .iter()
        .fold(1, |n, g| lcm(n, *d.pairing(*g).denom()))
}

/// A finite subgroup with the derived data used by the Euler-class rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubgroupProfile {
    pub subgroup: FiniteSubgroup,
    pub split_a: (Direction, i64),
    pub split_b: (Direction, i64),
}

impl FiniteSubgroupProfile {
    pub fn n_index(&self, d: &Direction) -> i64 {
        n_index(&self.subgroup, d)
    }

    /// The table `d ↦ n_d` over a direction list.
    pub fn n_table(&self, dirs: &[Direction]) -> BTreeMap<Direction, i64> {
        dirs.iter().map(|d| (*d, self.n_index(d))).collect()
    }
}

/// Choose directions `A != B` with `F = H_A^{n_A} ∩ H_B^{n_B}`.
///
/// Directions are scanned in search order; the first pair whose scaled
/// characters span the annihilator (kernel order `|det|` equal to `|F|`) is
/// taken. `A` is the member with smaller `n`, ties going to the earlier one.
pub fn splitting_pair(f: &FiniteSubgroup, budget: i64) -> Result<FiniteSubgroupProfile> {
    let dirs = Direction::grid(budget);
    let ns: Vec<i64> = dirs.iter().map(|d| n_index(f, d)).collect();
    let order = f.order() as i64;
    for j in 1..dirs.len() {
        for i in 0..j {
            let (u, v) = (dirs[i].character(ns[i]), dirs[j].character(ns[j]));
            let det = (u.a * v.b - u.b * v.a).abs();
            if det == order {
                let (first, second) = if ns[j] < ns[i] { (j, i) } else { (i, j) };
                return Ok(FiniteSubgroupProfile {
                    subgroup: f.clone(),
                    split_a: (dirs[first], ns[first]),
                    split_b: (dirs[second], ns[second]),
                });
            }
        }
    }
    Err(Error::Budget(budget as u64))
}

/// Integers `(r, s)` with `n_d·d = r·(n_A·A) + s·(n_B·B)`.
pub fn solve_character_eq(profile: &FiniteSubgroupProfile, d: &Direction) -> Result<(i64, i64)> {
    let nd = profile.n_index(d);
    let target = d.character(nd);
    let u = profile.split_a.0.character(profile.split_a.1);
    let v = profile.split_b.0.character(profile.split_b.1);
    let det = u.a * v.b - u.b * v.a;
    if det == 0 {
        return Err(Error::NoIntegralSolution(
            "degenerate splitting pair".into(),
        ));
    }
    let r_num = target.a * v.b - target.b * v.a;
    let s_num = u.a * target.b - u.b * target.a;
    if r_num % det != 0 || s_num % det != 0 {
        return Err(Error::NoIntegralSolution(format!(
            "{target} is not in the span of {u} and {v}"
        )));
    }
    Ok((r_num / det, s_num / det))
}

/// A polynomial over `Q` in the two generators `x_A`, `x_B` of the
/// component ring at a finite subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EulerPolynomial {
    terms: BTreeMap<(u32, u32), Q>,
}

impl EulerPolynomial {
    pub fn one() -> Self {
        EulerPolynomial {
            terms: BTreeMap::from([((0, 0), q(1))]),
        }
    }

    pub fn zero() -> Self {
        EulerPolynomial::default()
    }

    /// `r·x_A + s·x_B` scaled by `k`.
    pub fn linear(r: i64, s: i64) -> Self {
        let mut terms = BTreeMap::new();
        if r != 0 {
            terms.insert((1, 0), q(r));
        }
        if s != 0 {
            terms.insert((0, 1), q(s));
        }
        EulerPolynomial { terms }
    }

    pub fn x_a() -> Self {
        Self::linear(1, 0)
    }

    pub fn x_b() -> Self {
        Self::linear(0, 1)
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        EulerPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(Q::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        EulerPolynomial { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<(u32, u32), Q> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                *terms
                    .entry((e1.0 + e2.0, e1.1 + e2.1))
                    .or_insert_with(Q::zero) += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        EulerPolynomial { terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Substitute a univariate polynomial `p(c)` at `c = self`.
    pub fn substitute_into(&self, poly: &[Q]) -> Self {
        let mut out = Self::zero();
        for c in poly.iter().rev() {
            out = out.mul(self).add(&Self::one().scale(c));
        }
        out
    }
}

impl fmt::Display for EulerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|(i, j)| (i + j, std::cmp::Reverse(*i)));
        let parts: Vec<String> = keys
            .iter()
            .map(|k| {
                let c = &self.terms[k];
                let mut s = c.to_string();
                if k.0 > 0 {
                    s.push_str(&format!("*xA^{}", k.0));
                }
                if k.1 > 0 {
                    s.push_str(&format!("*xB^{}", k.1));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Component at `F` of the Euler class of `V = ⊕ χ^m`.
///
/// A summand `z_d^n` contributes `1` when it is nontrivial on `F` and
/// `(n/n_d)·(r·x_A + s·x_B)` otherwise.
pub fn euler_class_component(
    rep: &[(Character, u32)],
    profile: &FiniteSubgroupProfile,
) -> Result<EulerPolynomial> {
    let mut out = EulerPolynomial::one();
    for (chi, mult) in rep {
        let (d, n) = decompose_character(*chi)?;
        let nd = profile.n_index(&d);
        if n % nd != 0 {
            continue;
        }
        let (r, s) = solve_character_eq(profile, &d)?;
        let factor = EulerPolynomial::linear(r, s).scale(&q(n / nd));
        out = out.mul(&factor.pow(*mult));
    }
    Ok(out)
}

/// Image of an element of `∏_j Q[c_{d,j}]` in the component ring at `F`:
/// project to `j = n_d(F)`, then send `c_{d,n_d}` to `x_d = r·x_A + s·x_B`.
///
/// `element` maps a component index `j` to the coefficient list of a
/// polynomial in `c_{d,j}` (constant term first).
pub fn inflation_component(
    profile: &FiniteSubgroupProfile,
    d: &Direction,
    element: &BTreeMap<i64, Vec<Q>>,
) -> Result<EulerPolynomial> {
    let nd = profile.n_index(d);
    let Some(poly) = element.get(&nd) else {
        return Ok(EulerPolynomial::zero());
    };
    let (r, s) = solve_character_eq(profile, d)?;
    Ok(EulerPolynomial::linear(r, s).substitute_into(poly))
}

/// Parse the character-list format `(a,b):m,(c,d):k`. A missing `:m`
/// means multiplicity one.
pub fn parse_character_list(s: &str) -> Result<Vec<(Character, u32)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == bytes.len() {
        return Ok(out);
    }
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() || bytes[i] != b'(' {
            return Err(Error::parse(i, "expected '('"));
        }
        let close = s[i..]
            .find(')')
            .map(|k| i + k)
            .ok_or_else(|| Error::parse(i, "unclosed '('"))?;
        let inner = &s[i + 1..close];
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| Error::parse(i + 1, "character needs two integers"))?;
        let a: i64 = x
            .trim()
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("invalid integer {:?}", x.trim())))?;
        let b: i64 = y.trim().parse().map_err(|_| {
            Error::parse(i + 2 + x.len(), format!("invalid integer {:?}", y.trim()))
        })?;
        i = close + 1;
        skip_ws(&mut i);
        let mut mult = 1u32;
        if i < bytes.len() && bytes[i] == b':' {
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            mult = s[start..i]
                .parse()
                .map_err(|_| Error::parse(start, "expected a multiplicity"))?;
            if mult == 0 {
                return Err(Error::parse(start, "multiplicity must be positive"));
            }
        }
        out.push((Character::new(a, b), mult));
        skip_ws(&mut i);
        if i == bytes.len() {
            break;
        }
        if bytes[i] != b',' {
            return Err(Error::parse(i, "expected ','"));
        }
        i += 1;
    }
    Ok(out)
}

/// Parse a direction list `(λ,μ),(λ',μ')`; a bare `λ,μ` is one direction.
/// Entries are normalized, so `(-2,0)` reads as `(1,0)`.
pub fn parse_direction_list(s: &str) -> Result<Vec<Direction>> {
    if let Some(pos) = s.find(':') {
        return Err(Error::parse(pos, "directions take no multiplicity"));
    }
    let wrapped;
    let text = if s.contains('(') {
        s
    } else {
        wrapped = format!("({s})");
        &wrapped
    };
    let shift = if text.len() == s.len() { 0 } else { 1 };
    let chars = parse_character_list(text).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::parse(pos.saturating_sub(shift), msg),
        other => other,
    })?;
    if chars.is_empty() {
        return Err(Error::parse(0, "expected at least one direction"));
    }
    chars
        .into_iter()
        .map(|(c, _)| normalize_direction(c.a, c.b))
        .collect()
}
