//! Integer polynomials in four variables (not necessarily homogeneous):
//! exact division, recursive gcd and squarefree parts, plus fast
//! composition routines behind [`XPoly::substitute`] and
//! [`XPoly::compose_linear`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bipoly::{lcm_of_denominators, BiDeg, BiPoly, XPoly, Q};
use crate::modp::{self, Zp, P61};

pub(crate) type Exp = [u32; 4];

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct IPoly {
    pub terms: BTreeMap<Exp, BigInt>,
}

fn add_exp(a: &Exp, b: &Exp) -> Exp {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

impl IPoly {
    pub fn zero() -> Self {
        IPoly::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = IPoly::zero();
        p.add_term([0; 4], c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0; 4])
    }

    pub fn add_term(&mut self, e: Exp, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Integer polynomial `s * x` together with the scale `s > 0`.
    pub fn from_xpoly(x: &XPoly) -> (IPoly, BigInt) {
        let den = lcm_of_denominators(x.terms().map(|(_, c)| c));
        let dq = Q::from_integer(den.clone());
        let terms = x
            .terms()
            .map(|(e, c)| (*e, (c * &dq).to_integer()))
            .collect();
        (IPoly { terms }, den)
    }

    pub fn to_xpoly(&self, deg: u32) -> XPoly {
        XPoly::from_map_unchecked(
            deg,
            self.terms
                .iter()
                .map(|(e, c)| {
                    debug_assert_eq!(e.iter().sum::<u32>(), deg);
                    (*e, Q::from_integer(c.clone()))
                })
                .collect(),
        )
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn sub(&self, rhs: &IPoly) -> IPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }

    pub fn mul(&self, rhs: &IPoly) -> IPoly {
        let mut out = IPoly::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(add_exp(a, b), c * d);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IPoly {
        if c.is_zero() {
            return IPoly::zero();
        }
        IPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn div_integer(&self, c: &BigInt) -> IPoly {
        IPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v / c)).collect(),
        }
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the integer content and makes the lex-leading
    /// coefficient positive.
    pub fn primitive(&self) -> IPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.terms.last_key_value().unwrap().1.is_negative() {
            g = -g;
        }
        self.div_integer(&g)
    }

    pub fn deg_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Coefficient of `x_var^k`, as a polynomial free of `x_var`.
    pub fn coeff_in(&self, var: usize, k: u32) -> IPoly {
        let mut out = IPoly::zero();
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut f = *e;
                f[var] = 0;
                out.terms.insert(f, c.clone());
            }
        }
        out
    }

    pub fn mul_var_pow(&self, var: usize, k: u32) -> IPoly {
        IPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = *e;
                    f[var] += k;
                    (f, c.clone())
                })
                .collect(),
        }
    }

    pub fn vars(&self) -> Vec<usize> {
        (0..4)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn derivative(&self, var: usize) -> IPoly {
        let mut out = IPoly::zero();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut f = *e;
                f[var] -= 1;
                out.add_term(f, c * BigInt::from(e[var]));
            }
        }
        out
    }

    /// Exact quotient over the integers, `None` if it does not exist.
    pub fn div_exact(&self, d: &IPoly) -> Option<IPoly> {
        let (ld, lc) = d.terms.last_key_value()?;
        let mut rem = self.clone();
        let mut quot = IPoly::zero();
        while let Some((e, c)) = rem.terms.last_key_value() {
            if (0..4).any(|i| e[i] < ld[i]) {
                return None;
            }
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            let qe = [e[0] - ld[0], e[1] - ld[1], e[2] - ld[2], e[3] - ld[3]];
            for (de, dc) in &d.terms {
                rem.add_term(add_exp(&qe, de), -(&qc * dc));
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    fn eval_mod(&self, f: Zp, pt: &[u64; 4]) -> u64 {
        let mut acc = 0;
        for (e, c) in &self.terms {
            let mut t = f.from_int(c);
            for i in 0..4 {
                if e[i] > 0 {
                    t = f.mul(t, f.pow(pt[i], e[i] as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Univariate image in `x_var` after evaluating the other variables.
    fn univariate_image(&self, f: Zp, var: usize, pt: &[u64; 4]) -> modp::UPoly {
        let mut out = vec![0u64; self.deg_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let mut t = f.from_int(c);
            for i in 0..4 {
                if i != var && e[i] > 0 {
                    t = f.mul(t, f.pow(pt[i], e[i] as u64));
                }
            }
            let k = e[var] as usize;
            out[k] = f.add(out[k], t);
        }
        modp::trim(&mut out);
        out
    }
}

/// Content with respect to `var`: gcd of the coefficients of its powers.
fn content_in(a: &IPoly, var: usize) -> IPoly {
    let mut g = IPoly::zero();
    for k in (0..=a.deg_in(var)).rev() {
        let c = a.coeff_in(var, k);
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return IPoly::constant(BigInt::one());
        }
    }
    g
}

/// Upper bound on `deg_var gcd(a, b)` from images modulo a large prime.
fn modular_degree_bound(a: &IPoly, b: &IPoly, var: usize) -> u32 {
    let f = Zp::new(P61);
    let la = a.coeff_in(var, a.deg_in(var));
    let lb = b.coeff_in(var, b.deg_in(var));
    // Seed from the inputs so results stay reproducible.
    let mut rng = ChaCha8Rng::seed_from_u64(a.terms.len() as u64 * 7919 + b.terms.len() as u64);
    let mut best = a.deg_in(var).min(b.deg_in(var));
    for _ in 0..3 {
        let pt: [u64; 4] = std::array::from_fn(|_| rng.gen_range(1..f.p));
        if la.eval_mod(f, &pt) == 0 || lb.eval_mod(f, &pt) == 0 {
            continue;
        }
        let g = modp::pgcd(f, &a.univariate_image(f, var, &pt), &b.univariate_image(f, var, &pt));
        best = best.min(modp::deg(&g).unwrap_or(0) as u32);
        if best == 0 {
            break;
        }
    }
    best
}

fn pseudo_rem(a: &IPoly, b: &IPoly, var: usize) -> IPoly {
    let db = b.deg_in(var);
    let lc = b.coeff_in(var, db);
    let mut r = a.clone();
    while !r.is_zero() && r.deg_in(var) >= db {
        let dr = r.deg_in(var);
        let lr = r.coeff_in(var, dr);
        r = r.mul(&lc).sub(&lr.mul(b).mul_var_pow(var, dr - db));
    }
    r
}

fn primitive_in(a: &IPoly, var: usize) -> IPoly {
    let c = content_in(a, var);
    a.div_exact(&c).expect("content divides").primitive()
}

/// Gcd of two polynomials primitive in `var` (both of positive degree).
fn primitive_gcd(a: &IPoly, b: &IPoly, var: usize) -> IPoly {
    let (mut a, mut b) = if a.deg_in(var) >= b.deg_in(var) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let bound = modular_degree_bound(&a, &b, var);
    if bound == 0 {
        return IPoly::constant(BigInt::one());
    }
    if bound == b.deg_in(var) {
        if let Some(_) = a.div_exact(&b) {
            return b.primitive();
        }
    }
    loop {
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            return b.primitive();
        }
        if r.deg_in(var) == 0 {
            return IPoly::constant(BigInt::one());
        }
        a = b;
        b = primitive_in(&r, var);
    }
}

/// Greatest common divisor over Q, returned integer primitive with a
/// positive lex-leading coefficient.
pub(crate) fn gcd(a: &IPoly, b: &IPoly) -> IPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return IPoly::constant(BigInt::one());
    }
    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one argument cannot occur in the gcd.
    if let Some(&x) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&content_in(a, x), b);
    }
    if let Some(&x) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &content_in(b, x));
    }
    let x = *va
        .iter()
        .min_by_key(|&&v| (a.deg_in(v).min(b.deg_in(v)), v))
        .expect("nonconstant");
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_gcd(&pa, &pb, x);
    c.mul(&g).primitive()
}

/// Squarefree part `g / gcd(g, dg/dx_i ...)`, primitive and lex-positive.
pub(crate) fn squarefree(g: &IPoly) -> IPoly {
    let g = g.primitive();
    let mut acc = g.clone();
    for var in g.vars() {
        acc = gcd(&acc, &g.derivative(var));
        if acc.is_constant() {
            return g;
        }
    }
    g.div_exact(&acc).expect("gcd divides").primitive()
}

/// Dense integer bihomogeneous form used by Horner evaluation.
#[derive(Clone)]
struct DenseBi {
    deg: BiDeg,
    c: Vec<BigInt>,
}

impl DenseBi {
    fn zero(deg: BiDeg) -> Self {
        DenseBi {
            deg,
            c: vec![BigInt::zero(); deg.dim()],
        }
    }

    fn mul_sparse(&self, p: &[((u32, u32), BigInt)], pdeg: BiDeg) -> DenseBi {
        let mut out = DenseBi::zero(self.deg + pdeg);
        for (i, j) in self.deg.monomials() {
            let a = &self.c[self.deg.index(i, j)];
            if a.is_zero() {
                continue;
            }
            for ((k, l), b) in p {
                out.c[out.deg.index(i + k, j + l)] += a * b;
            }
        }
        out
    }

    fn add_assign(&mut self, rhs: &DenseBi) {
        debug_assert_eq!(self.deg, rhs.deg);
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
    }
}

/// `F(q0..q3)` for forms `q_i` of a common bidegree, via nested Horner
/// schemes over integer-scaled data.
pub(crate) fn substitute_forms(f: &XPoly, q: &[BiPoly; 4]) -> BiPoly {
    let base = q[0].deg();
    let out_deg = base.scale(f.deg());
    if f.is_zero() {
        return BiPoly::zero(out_deg);
    }
    let (fi, fden) = IPoly::from_xpoly(f);
    // Common scale L so that L*q_i is integral: F(Lq) = L^D F(q).
    let l = lcm_of_denominators(q.iter().flat_map(|p| p.terms().map(|(_, c)| c)));
    let lq = Q::from_integer(l.clone());
    let qs: Vec<Vec<((u32, u32), BigInt)>> = q
        .iter()
        .map(|p| p.terms().map(|(k, c)| (*k, (c * &lq).to_integer())).collect())
        .collect();
    let terms: Vec<(Exp, BigInt)> = fi.terms.into_iter().collect();
    let acc = horner(&terms, 0, &qs, base);
    let denom = fden * num_traits::pow(l, f.deg() as usize);
    BiPoly::from_terms(
        out_deg,
        out_deg
            .monomials()
            .zip(acc.c)
            .map(|(k, c)| (k, Q::new(c, denom.clone()))),
    )
    .expect("indices in range")
}

/// Evaluates the homogeneous terms (all of one total degree in vars >= `var`)
/// at the forms.
fn horner(terms: &[(Exp, BigInt)], var: usize, qs: &[Vec<((u32, u32), BigInt)>], base: BiDeg) -> DenseBi {
    let d: u32 = terms[0].0[var..].iter().sum();
    if var == 3 {
        let mut out = DenseBi::zero(BiDeg::new(0, 0));
        out.c[0] = terms.iter().map(|(_, c)| c.clone()).sum();
        for _ in 0..d {
            out = out.mul_sparse(&qs[3], base);
        }
        return out;
    }
    // Group by exponent of `var`, highest first.
    let mut groups: BTreeMap<u32, Vec<(Exp, BigInt)>> = BTreeMap::new();
    for (e, c) in terms {
        groups.entry(e[var]).or_default().push((*e, c.clone()));
    }
    let top = *groups.keys().next_back().unwrap();
    let mut acc: Option<DenseBi> = None;
    for k in (0..=top).rev() {
        if let Some(a) = acc.take() {
            acc = Some(a.mul_sparse(&qs[var], base));
        }
        if let Some(g) = groups.get(&k) {
            let inner = horner(g, var + 1, qs, base);
            match acc.as_mut() {
                Some(a) => a.add_assign(&inner),
                None => acc = Some(inner),
            }
        }
    }
    // Degree bookkeeping: the accumulator started at exponent `top` of var,
    // so the result has bidegree d * base.
    let out = acc.unwrap();
    debug_assert_eq!(out.deg, base.scale(d));
    out
}

/// `F(ell_0, .., ell_3)` for linear forms `ell_j`.
pub(crate) fn compose_linear(f: &XPoly, ell: &[XPoly; 4]) -> XPoly {
    if f.is_zero() {
        return f.clone();
    }
    // Monomial substitutions (scaled permutations) map term by term.
    let mono: Option<Vec<(usize, Q)>> = ell
        .iter()
        .map(|l| {
            if l.num_terms() == 1 {
                let (e, c) = l.terms().next().unwrap();
                let idx = e.iter().position(|&k| k == 1)?;
                Some((idx, c.clone()))
            } else {
                None
            }
        })
        .collect();
    if let Some(m) = mono {
        let mut terms = Vec::with_capacity(f.num_terms());
        for (e, c) in f.terms() {
            let mut ne = [0u32; 4];
            let mut nc = c.clone();
            for j in 0..4 {
                if e[j] > 0 {
                    ne[m[j].0] += e[j];
                    nc *= num_traits::pow(m[j].1.clone(), e[j] as usize);
                }
            }
            terms.push((ne, nc));
        }
        return XPoly::from_terms(terms, Some(f.deg())).expect("homogeneous");
    }
    let terms: Vec<(Exp, Q)> = f.terms().map(|(e, c)| (*e, c.clone())).collect();
    compose_rec(&terms, 0, ell)
}

fn compose_rec(terms: &[(Exp, Q)], var: usize, ell: &[XPoly; 4]) -> XPoly {
    let d: u32 = terms[0].0[var..].iter().sum();
    if var == 3 {
        let c: Q = terms.iter().map(|(_, c)| c.clone()).sum();
        return ell[3].pow(d).scale(&c);
    }
    let mut groups: BTreeMap<u32, Vec<(Exp, Q)>> = BTreeMap::new();
    for (e, c) in terms {
        groups.entry(e[var]).or_default().push((*e, c.clone()));
    }
    let top = *groups.keys().next_back().unwrap();
    let mut acc: Option<XPoly> = None;
    for k in (0..=top).rev() {
        if let Some(a) = acc.take() {
            acc = Some(&a * &ell[var]);
        }
        if let Some(g) = groups.get(&k) {
            let inner = compose_rec(g, var + 1, ell);
            acc = Some(match acc {
                Some(a) => &a + &inner,
                None => inner,
            });
        }
    }
    acc.unwrap()
}
