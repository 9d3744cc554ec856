//! Sparse exact polynomials: bihomogeneous forms in `s,t;u,v` and
//! homogeneous forms in `x0..x3`.
//!
//! A [`BiPoly`] of bidegree `(m,n)` stores the coefficient of
//! `s^(m-i) t^i u^(n-j) v^j` under the key `(i,j)`. Keys are kept in a
//! `BTreeMap`, so iteration order is the canonical monomial order used for
//! every coefficient vector and matrix row in the crate: `i` major ascending,
//! `j` minor ascending.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpoly::IPoly;

/// Exact rational scalar.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub(crate) fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Q>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Bidegree `(m,n)`: degree `m` in `s,t` and `n` in `u,v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiDeg {
    pub m: u32,
    pub n: u32,
}

impl BiDeg {
    pub const fn new(m: u32, n: u32) -> Self {
        BiDeg { m, n }
    }

    /// Dimension of the graded piece `R_(m,n)`.
    pub fn dim(self) -> usize {
        (self.m as usize + 1) * (self.n as usize + 1)
    }

    pub fn checked_sub(self, rhs: BiDeg) -> Result<BiDeg> {
        if self.m < rhs.m || self.n < rhs.n {
            return Err(Error::NegativeDegree { lhs: self, rhs });
        }
        Ok(BiDeg::new(self.m - rhs.m, self.n - rhs.n))
    }

    /// Componentwise `self <= other`.
    pub fn fits_in(self, other: BiDeg) -> bool {
        self.m <= other.m && self.n <= other.n
    }

    pub fn swap(self) -> BiDeg {
        BiDeg::new(self.n, self.m)
    }

    pub fn total(self) -> u32 {
        self.m + self.n
    }

    pub fn scale(self, k: u32) -> BiDeg {
        BiDeg::new(self.m * k, self.n * k)
    }

    /// Position of monomial `(i,j)` in the canonical order.
    pub fn index(self, i: u32, j: u32) -> usize {
        i as usize * (self.n as usize + 1) + j as usize
    }

    /// Monomial keys of `R_(m,n)` in canonical order.
    pub fn monomials(self) -> impl Iterator<Item = (u32, u32)> {
        let n = self.n;
        (0..=self.m).flat_map(move |i| (0..=n).map(move |j| (i, j)))
    }
}

impl Add for BiDeg {
    type Output = BiDeg;
    fn add(self, rhs: BiDeg) -> BiDeg {
        BiDeg::new(self.m + rhs.m, self.n + rhs.n)
    }
}

impl fmt::Display for BiDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// Bihomogeneous polynomial in `s,t;u,v` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    deg: BiDeg,
    coeffs: BTreeMap<(u32, u32), Q>,
}

impl BiPoly {
    pub fn zero(deg: BiDeg) -> Self {
        BiPoly {
            deg,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(BiDeg::new(0, 0), 0, 0, c)
    }

    /// `c * s^(m-i) t^i u^(n-j) v^j`.
    pub fn monomial(deg: BiDeg, i: u32, j: u32, c: Q) -> Self {
        assert!(i <= deg.m && j <= deg.n, "monomial index out of range");
        let mut p = Self::zero(deg);
        if !c.is_zero() {
            p.coeffs.insert((i, j), c);
        }
        p
    }

    pub fn s() -> Self {
        Self::monomial(BiDeg::new(1, 0), 0, 0, Q::one())
    }
    pub fn t() -> Self {
        Self::monomial(BiDeg::new(1, 0), 1, 0, Q::one())
    }
    pub fn u() -> Self {
        Self::monomial(BiDeg::new(0, 1), 0, 0, Q::one())
    }
    pub fn v() -> Self {
        Self::monomial(BiDeg::new(0, 1), 0, 1, Q::one())
    }

    pub fn from_terms(deg: BiDeg, terms: impl IntoIterator<Item = ((u32, u32), Q)>) -> Result<Self> {
        let mut p = Self::zero(deg);
        for ((i, j), c) in terms {
            if i > deg.m || j > deg.n {
                return Err(Error::DegreeMismatch {
                    expected: deg.to_string(),
                    found: format!("monomial index ({i},{j})"),
                });
            }
            p.add_term((i, j), c);
        }
        Ok(p)
    }

    /// Builds a form from exponent tuples `[e_s, e_t, e_u, e_v]`.
    ///
    /// All terms must share one bidegree. With no terms the result is the
    /// zero form of bidegree `deg` (or `(0,0)` when `deg` is `None`).
    pub fn from_exponents(terms: &[([u32; 4], Q)], deg: Option<BiDeg>) -> Result<Self> {
        let mut found = deg;
        for (e, _) in terms.iter().filter(|(_, c)| !c.is_zero()) {
            let d = BiDeg::new(e[0] + e[1], e[2] + e[3]);
            match found {
                None => found = Some(d),
                Some(f) if f != d => {
                    return Err(Error::DegreeMismatch {
                        expected: f.to_string(),
                        found: d.to_string(),
                    })
                }
                _ => {}
            }
        }
        let deg = found.unwrap_or(BiDeg::new(0, 0));
        Self::from_terms(deg, terms.iter().map(|(e, c)| ((e[1], e[3]), c.clone())))
    }

    fn add_term(&mut self, key: (u32, u32), c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn deg(&self) -> BiDeg {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Q {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.coeffs.iter()
    }

    /// Exponents `[e_s, e_t, e_u, e_v]` of the monomial with key `(i,j)`.
    pub fn exponents(deg: BiDeg, i: u32, j: u32) -> [u32; 4] {
        [deg.m - i, i, deg.n - j, j]
    }

    pub fn try_add(&self, rhs: &BiPoly) -> Result<BiPoly> {
        self.check_same_deg(rhs)?;
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &BiPoly) -> Result<BiPoly> {
        self.try_add(&-rhs)
    }

    fn check_same_deg(&self, rhs: &BiPoly) -> Result<()> {
        if self.deg != rhs.deg {
            return Err(Error::DegreeMismatch {
                expected: self.deg.to_string(),
                found: rhs.deg.to_string(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Q) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero(self.deg);
        }
        BiPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by the monomial with key `(i,j)` in bidegree `mdeg`.
    pub fn mul_monomial(&self, mdeg: BiDeg, i: u32, j: u32) -> BiPoly {
        BiPoly {
            deg: self.deg + mdeg,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(a, b), c)| ((a + i, b + j), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> BiPoly {
        let mut out = BiPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact quotient `q` with `q * d = self`.
    pub fn exact_div(&self, d: &BiPoly) -> Result<BiPoly> {
        if d.is_zero() {
            return Err(Error::ZeroInput);
        }
        let qdeg = self.deg.checked_sub(d.deg).map_err(|_| Error::NotDivisible)?;
        let (&(li, lj), lc) = d.coeffs.last_key_value().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = BiPoly::zero(qdeg);
        // Lex division on the dehomogenized bivariate form; the leading key
        // strictly decreases every step.
        while let Some((&(i, j), c)) = rem.coeffs.last_key_value() {
            if i < li || j < lj || i - li > qdeg.m || j - lj > qdeg.n {
                return Err(Error::NotDivisible);
            }
            let qk = (i - li, j - lj);
            let qc = c / lc;
            for (&(a, b), dc) in &d.coeffs {
                rem.add_term((a + qk.0, b + qk.1), -(&qc * dc));
            }
            quot.add_term(qk, qc);
        }
        Ok(quot)
    }

    /// Dense coefficient vector in canonical order.
    pub fn coeff_vector(&self, mu: BiDeg) -> Result<Vec<Q>> {
        if self.deg != mu {
            return Err(Error::DegreeMismatch {
                expected: mu.to_string(),
                found: self.deg.to_string(),
            });
        }
        let mut out = vec![Q::zero(); mu.dim()];
        for (&(i, j), c) in &self.coeffs {
            out[mu.index(i, j)] = c.clone();
        }
        Ok(out)
    }

    pub fn from_coeff_vector(mu: BiDeg, v: &[Q]) -> BiPoly {
        assert_eq!(v.len(), mu.dim(), "coefficient vector length");
        let mut p = BiPoly::zero(mu);
        for ((i, j), c) in mu.monomials().zip(v) {
            p.add_term((i, j), c.clone());
        }
        p
    }

    /// Exchanges the roles of `(s,t)` and `(u,v)`.
    pub fn swap_factors(&self) -> BiPoly {
        BiPoly {
            deg: self.deg.swap(),
            coeffs: self.coeffs.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// Evaluates at `(s,t,u,v)`.
    pub fn eval(&self, pt: &[Q; 4]) -> Q {
        let mut acc = Q::zero();
        for (&(i, j), c) in &self.coeffs {
            let e = Self::exponents(self.deg, i, j);
            let mut term = c.clone();
            for (x, k) in pt.iter().zip(e) {
                term *= num_traits::pow(x.clone(), k as usize);
            }
            acc += term;
        }
        acc
    }

    /// Integer primitive representative with a positive first coefficient,
    /// together with the factor `c` such that `self = c * result`.
    pub fn primitive(&self) -> (BiPoly, Q) {
        if self.is_zero() {
            return (self.clone(), Q::one());
        }
        let den = lcm_of_denominators(self.coeffs.values());
        let ints: Vec<BigInt> = self
            .coeffs
            .values()
            .map(|c| (c * Q::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints[0].is_negative() {
            g = -g;
        }
        let factor = Q::new(g.clone(), den);
        let out = BiPoly {
            deg: self.deg,
            coeffs: self
                .coeffs
                .keys()
                .zip(ints)
                .map(|(k, c)| (*k, Q::from_integer(c / &g)))
                .collect(),
        };
        (out, factor)
    }

    /// Random dense form of bidegree `mu`: every coefficient is a nonzero
    /// integer in `[-50, 50]`. Deterministic per seed.
    pub fn random_form(mu: BiDeg, seed: u64) -> BiPoly {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_form_with(mu, &mut rng)
    }

    pub fn random_form_with<R: Rng + ?Sized>(mu: BiDeg, rng: &mut R) -> BiPoly {
        BiPoly::from_terms(
            mu,
            mu.monomials().map(|k| {
                let c = rng.gen_range(1..=50);
                (k, q_int(if rng.gen_bool(0.5) { -c } else { c }))
            }),
        )
        .expect("indices in range")
    }

    /// Renders with integer coefficients after dividing out the primitive factor.
    pub fn to_string_normalized(&self) -> String {
        self.primitive().0.to_string()
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.try_add(rhs).expect("bidegree mismatch in addition")
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.try_sub(rhs).expect("bidegree mismatch in subtraction")
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero(self.deg + rhs.deg);
        for (&(a, b), c) in &self.coeffs {
            for (&(i, j), d) in &rhs.coeffs {
                out.add_term((a + i, b + j), c * d);
            }
        }
        out
    }
}

/// Writes `c*mono` terms joined by ` + ` / ` - `.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Q, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if mono.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            f.write_str(&mono)?;
        } else {
            write!(f, "{abs}*{mono}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

pub(crate) fn monomial_string(names: &[&str], exps: &[u32]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["s", "t", "u", "v"];
        write_terms(
            f,
            self.coeffs.iter().map(|(&(i, j), c)| {
                (c, monomial_string(&NAMES, &BiPoly::exponents(self.deg, i, j)))
            }),
        )
    }
}

/// Homogeneous polynomial in `x0..x3` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XPoly {
    deg: u32,
    coeffs: BTreeMap<[u32; 4], Q>,
}

impl XPoly {
    pub fn zero(deg: u32) -> Self {
        XPoly {
            deg,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero(0);
        p.add_term([0; 4], c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        let mut p = Self::zero(1);
        p.add_term(e, Q::one());
        p
    }

    /// `c0*x0 + c1*x1 + c2*x2 + c3*x3`.
    pub fn linear(c: &[Q; 4]) -> Self {
        let mut p = Self::zero(1);
        for (i, ci) in c.iter().enumerate() {
            let mut e = [0; 4];
            e[i] = 1;
            p.add_term(e, ci.clone());
        }
        p
    }

    /// Builds a form from exponent tuples; all terms must share one degree.
    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; 4], Q)>, deg: Option<u32>) -> Result<Self> {
        let mut p: Option<XPoly> = deg.map(XPoly::zero);
        for (e, c) in terms.into_iter().filter(|(_, c)| !c.is_zero()) {
            let d: u32 = e.iter().sum();
            let poly = p.get_or_insert_with(|| XPoly::zero(d));
            if poly.deg != d {
                return Err(Error::DegreeMismatch {
                    expected: poly.deg.to_string(),
                    found: d.to_string(),
                });
            }
            poly.add_term(e, c);
        }
        Ok(p.unwrap_or_else(|| XPoly::zero(0)))
    }

    pub(crate) fn from_map_unchecked(deg: u32, coeffs: BTreeMap<[u32; 4], Q>) -> Self {
        XPoly { deg, coeffs }
    }

    fn add_term(&mut self, e: [u32; 4], c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, e: &[u32; 4]) -> Q {
        self.coeffs.get(e).cloned().unwrap_or_else(Q::zero)
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32; 4], &Q)> {
        self.coeffs.iter()
    }

    /// Leading term for lex order with `x0 > x1 > x2 > x3`.
    pub fn lex_leading(&self) -> Option<(&[u32; 4], &Q)> {
        self.coeffs.last_key_value()
    }

    /// Variables that occur with positive exponent.
    pub fn occurring_vars(&self) -> Vec<usize> {
        (0..4)
            .filter(|&i| self.coeffs.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn try_add(&self, rhs: &XPoly) -> Result<XPoly> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.deg != rhs.deg {
            return Err(Error::DegreeMismatch {
                expected: self.deg.to_string(),
                found: rhs.deg.to_string(),
            });
        }
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> XPoly {
        if c.is_zero() {
            return XPoly::zero(self.deg);
        }
        XPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> XPoly {
        let mut out = XPoly::constant(Q::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Value at a rational point, accumulated over the integers:
    /// with `pt = n/d` and `self = P/s`, the value is `P(n) / (s d^deg)`.
    pub fn eval(&self, pt: &[Q; 4]) -> Q {
        if self.is_zero() {
            return Q::zero();
        }
        let d = lcm_of_denominators(pt.iter());
        let dq = Q::from_integer(d.clone());
        let nums: Vec<BigInt> = pt.iter().map(|x| (x * &dq).to_integer()).collect();
        let powers: Vec<Vec<BigInt>> = nums
            .iter()
            .map(|x| {
                let mut v = vec![BigInt::one()];
                for k in 1..=self.deg as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let (ip, scale) = crate::mpoly::IPoly::from_xpoly(self);
        let mut acc = BigInt::zero();
        for (e, c) in &ip.terms {
            let mut term = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    term *= &powers[v][k as usize];
                }
            }
            acc += term;
        }
        Q::new(acc, scale * num_traits::pow(d, self.deg as usize))
    }

    pub fn derivative(&self, var: usize) -> XPoly {
        let mut out = XPoly::zero(self.deg.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[var] > 0 {
                let mut f = *e;
                f[var] -= 1;
                out.add_term(f, c * q_int(e[var] as i64));
            }
        }
        out
    }

    /// Integer primitive representative whose lex-leading coefficient
    /// (`x0 > x1 > x2 > x3`) is positive.
    pub fn normalize(&self) -> XPoly {
        if self.is_zero() {
            return self.clone();
        }
        let (ip, _) = IPoly::from_xpoly(self);
        ip.primitive().to_xpoly(self.deg)
    }

    /// Exact quotient over the rationals.
    pub fn exact_div(&self, d: &XPoly) -> Result<XPoly> {
        if d.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.is_zero() {
            return Ok(XPoly::zero(self.deg.saturating_sub(d.deg)));
        }
        if d.deg > self.deg {
            return Err(Error::NotDivisible);
        }
        let (a, sa) = IPoly::from_xpoly(self);
        let (b, sb) = IPoly::from_xpoly(d);
        let cb = b.content();
        let bp = b.div_integer(&cb);
        let q = a.div_exact(&bp).ok_or(Error::NotDivisible)?;
        // self = a/sa, d = cb*bp/sb  =>  self/d = q*sb/(sa*cb)
        let factor = Q::new(sb, sa * cb);
        Ok(q.to_xpoly(self.deg - d.deg).scale(&factor))
    }

    /// Product of the distinct irreducible factors, normalized.
    pub fn squarefree_part(&self) -> Result<XPoly> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let (ip, _) = IPoly::from_xpoly(self);
        let sq = crate::mpoly::squarefree(&ip);
        let deg = sq.total_degree().unwrap_or(0);
        Ok(sq.to_xpoly(deg))
    }

    /// Composition `self(q0, q1, q2, q3)` with forms of a common bidegree.
    pub fn substitute(&self, q: &[BiPoly; 4]) -> BiPoly {
        let base = q[0].deg();
        for p in q.iter() {
            assert_eq!(p.deg(), base, "substitute needs forms of a common bidegree");
        }
        crate::mpoly::substitute_forms(self, q)
    }

    /// Composition with linear forms `ell_j`, i.e. `self(ell_0, .., ell_3)`.
    pub fn compose_linear(&self, ell: &[XPoly; 4]) -> XPoly {
        crate::mpoly::compose_linear(self, ell)
    }

    /// Minimum over all monomials of the combined exponent in two variables.
    pub fn order_along(&self, vars: (usize, usize)) -> Result<u32> {
        self.coeffs
            .keys()
            .map(|e| e[vars.0] + e[vars.1])
            .min()
            .ok_or(Error::ZeroInput)
    }

    pub fn to_string_normalized(&self) -> String {
        self.normalize().to_string()
    }
}

impl<'a> Add<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        self.try_add(rhs).expect("degree mismatch in addition")
    }
}

impl<'a> Sub<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        self.try_add(&-rhs).expect("degree mismatch in subtraction")
    }
}

impl Neg for &XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        XPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn mul(self, rhs: &XPoly) -> XPoly {
        let mut out = XPoly::zero(self.deg + rhs.deg);
        for (a, c) in &self.coeffs {
            for (b, d) in &rhs.coeffs {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]], c * d);
            }
        }
        out
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["x0", "x1", "x2", "x3"];
        write_terms(
            f,
            self.coeffs
                .iter()
                .rev()
                .map(|(e, c)| (c, monomial_string(&NAMES, e))),
        )
    }
}

impl Serialize for XPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    fn xp(s: &str) -> XPoly {
        s.parse().unwrap()
    }

    #[test]
    fn bideg_arithmetic() {
        let a = BiDeg::new(2, 3);
        assert_eq!(a.dim(), 12);
        assert_eq!(a + BiDeg::new(1, 1), BiDeg::new(3, 4));
        assert_eq!(a.checked_sub(BiDeg::new(2, 1)).unwrap(), BiDeg::new(0, 2));
        assert!(matches!(
            a.checked_sub(BiDeg::new(3, 0)),
            Err(Error::NegativeDegree { .. })
        ));
    }

    #[test]
    fn mul_examples() {
        let p = bp("t^2*u + s^2*v");
        assert_eq!(&BiPoly::u() * &p, bp("t^2*u^2 + s^2*u*v"));
        let q = bp("s*u + t*v");
        assert_eq!(&q * &q, bp("s^2*u^2 + 2*s*t*u*v + t^2*v^2"));
        let z = BiPoly::zero(BiDeg::new(1, 3));
        let prod = &q * &z;
        assert!(prod.is_zero());
        assert_eq!(prod.deg(), BiDeg::new(2, 4));
    }

    #[test]
    fn exact_div_examples() {
        let f = bp("t^2*u^2 + s^2*u*v");
        assert_eq!(f.exact_div(&BiPoly::u()).unwrap(), bp("t^2*u + s^2*v"));
        assert_eq!(f.exact_div(&f).unwrap(), BiPoly::one());
        assert_eq!(
            bp("s^2*u + t^2*v").exact_div(&BiPoly::u()),
            Err(Error::NotDivisible)
        );
        assert_eq!(f.exact_div(&BiPoly::zero(BiDeg::new(0, 1))), Err(Error::ZeroInput));
    }

    #[test]
    fn coeff_vector_examples() {
        let f = bp("t^2*u + s^2*v");
        let v: Vec<i64> = f
            .coeff_vector(BiDeg::new(2, 1))
            .unwrap()
            .iter()
            .map(|c| c.to_integer().try_into().unwrap())
            .collect();
        assert_eq!(v, vec![0, 1, 0, 0, 1, 0]);
        let z = BiPoly::zero(BiDeg::new(1, 1)).coeff_vector(BiDeg::new(1, 1)).unwrap();
        assert!(z.iter().all(|c| c.is_zero()) && z.len() == 4);
        let first = bp("s^3*u^2").coeff_vector(BiDeg::new(3, 2)).unwrap();
        assert!(first[0].is_one() && first[1..].iter().all(|c| c.is_zero()));
        assert!(matches!(f.coeff_vector(BiDeg::new(1, 2)), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn substitute_examples() {
        let p: [BiPoly; 4] = [
            bp("t^2*u^2 + s^2*u*v"),
            bp("t^2*u*v + s^2*v^2"),
            bp("t^2*v^2"),
            bp("s^2*u^2"),
        ];
        assert_eq!(xp("x0").substitute(&p), p[0]);
        let f = xp("x0^3*x2 + x1^3*x3 - x0^2*x1^2");
        let r = f.substitute(&p);
        assert!(r.is_zero());
        assert_eq!(r.deg(), BiDeg::new(8, 8));
        let segre = [bp("s*u"), bp("s*v"), bp("t*u"), bp("t*v")];
        assert!(xp("x0*x3 - x1*x2").substitute(&segre).is_zero());
    }

    #[test]
    fn squarefree_examples() {
        let f = xp("x0^3*x2 + x1^3*x3 - x0^2*x1^2");
        assert_eq!(f.pow(2).squarefree_part().unwrap(), f);
        assert_eq!(xp("x0^5").squarefree_part().unwrap(), xp("x0"));
        let g = &(&xp("x0 + x1") * &xp("x0 + x1")) * &xp("x2 - x3");
        assert_eq!(g.squarefree_part().unwrap(), xp("x0*x2 - x0*x3 + x1*x2 - x1*x3"));
        assert_eq!(XPoly::zero(3).squarefree_part(), Err(Error::ZeroInput));
    }

    #[test]
    fn random_form_contract() {
        let mu = BiDeg::new(2, 2);
        assert_eq!(BiPoly::random_form(mu, 17), BiPoly::random_form(mu, 17));
        assert!(!BiPoly::random_form(BiDeg::new(0, 0), 3).is_zero());
        let dense = (0..1000u64)
            .filter(|&s| BiPoly::random_form(mu, s).num_terms() == 9)
            .count();
        assert!(dense >= 900, "dense fraction {dense}/1000");
    }

    #[test]
    fn normalize_and_display() {
        let f = xp("-2*x1^3*x3 + 2*x0^2*x1^2 - 2*x0^3*x2");
        assert_eq!(f.normalize().to_string(), "x0^3*x2 - x0^2*x1^2 + x1^3*x3");
        assert_eq!(bp("2/3*s*u - t*v").to_string(), "2/3*s*u - t*v");
        assert_eq!(bp("2/3*s*u - t*v").to_string_normalized(), "2*s*u - 3*t*v");
        assert_eq!(XPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn derivative_and_eval() {
        let f = xp("x0^2*x1 + 3*x2*x3^2");
        assert_eq!(f.derivative(0), xp("2*x0*x1"));
        assert_eq!(f.derivative(3), xp("6*x2*x3"));
        let pt = [q_int(1), q_int(2), q_int(3), q_int(-1)];
        assert_eq!(f.eval(&pt), q_int(2 + 9));
    }
}
