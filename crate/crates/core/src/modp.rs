//! Prime-field arithmetic, univariate polynomials over `F_p`, their
//! factorization, and arithmetic in extensions `F_p[t]/(f)`.
//!
//! Used for probabilistic degree bounds, the basepoint witness search and
//! multi-modular determinant reconstruction. Nothing here is exact over Q.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::bipoly::Q;

/// Mersenne prime `2^61 - 1`.
pub const P61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zp {
    pub p: u64,
}

impl Zp {
    pub const fn new(p: u64) -> Self {
        Zp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    pub fn from_int(self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("reduced residue fits")
    }

    pub fn from_i64(self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Image of a rational, `None` when the denominator vanishes mod p.
    pub fn from_q(self, q: &Q) -> Option<u64> {
        let d = self.from_int(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_int(q.numer()), self.inv(d)))
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn lift(self, a: u64) -> BigInt {
        if a > self.p / 2 {
            BigInt::from(a) - BigInt::from(self.p)
        } else {
            BigInt::from(a)
        }
    }
}

/// Montgomery arithmetic modulo an odd `p < 2^62`, for hot loops.
/// Values stay in Montgomery form `a * 2^64 mod p` between `enter` and `leave`.
#[derive(Debug, Clone, Copy)]
pub struct Mont {
    pub p: u64,
    /// `-p^(-1) mod 2^64`
    pinv_neg: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Mont {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < 1 << 62, "Montgomery modulus must be odd and below 2^62");
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Mont {
            p,
            pinv_neg: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn reduce(self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv_neg);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn enter(self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn leave(self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    pub fn one(self) -> u64 {
        self.enter(1)
    }

    pub fn inv(self, a: u64) -> u64 {
        let mut e = self.p - 2;
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let f = Zp::new(n);
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `k` largest primes below `2^62`, in descending order.
pub fn big_primes(k: usize) -> Vec<u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut out = Vec::with_capacity(256);
        let mut n = (1u64 << 62) - 1;
        while out.len() < 256 {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    });
    assert!(k <= cache.len(), "too many primes requested");
    cache[..k].to_vec()
}

/// Dense univariate polynomial over `F_p`, lowest degree first, no trailing zeros.
pub type UPoly = Vec<u64>;

pub fn trim(a: &mut UPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn deg(a: &UPoly) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn padd(f: Zp, a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn psub(f: Zp, a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn pmul(f: Zp, a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

pub fn pscale(f: Zp, a: &UPoly, c: u64) -> UPoly {
    let mut out: UPoly = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn pdivrem(f: Zp, a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = deg(b).expect("division by zero polynomial");
    let inv = f.inv(b[db]);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(r[k + db], inv);
        q[k] = c;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, bi));
            }
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn prem(f: Zp, a: &UPoly, b: &UPoly) -> UPoly {
    pdivrem(f, a, b).1
}

pub fn monic(f: Zp, a: &UPoly) -> UPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => pscale(f, a, f.inv(lc)),
    }
}

/// Monic gcd.
pub fn pgcd(f: Zp, a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = prem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn peval(f: Zp, a: &UPoly, x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn pderiv(f: Zp, a: &UPoly) -> UPoly {
    let mut out: UPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, i as u64 % f.p))
        .collect();
    trim(&mut out);
    out
}

/// `base^e mod m`.
pub fn ppowmod(f: Zp, base: &UPoly, mut e: u128, m: &UPoly) -> UPoly {
    let mut result: UPoly = prem(f, &vec![1], m);
    let mut b = prem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = prem(f, &pmul(f, &result, &b), m);
        }
        b = prem(f, &pmul(f, &b, &b), m);
        e >>= 1;
    }
    result
}

/// Irreducible monic factors (without multiplicity) of a nonzero polynomial.
pub fn irreducible_factors<R: Rng + ?Sized>(f: Zp, a: &UPoly, rng: &mut R) -> Vec<UPoly> {
    let a = monic(f, a);
    if deg(&a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    // Remove repeated factors; p exceeds every degree seen here.
    let g = pgcd(f, &a, &pderiv(f, &a));
    let mut rest = if deg(&g).unwrap_or(0) > 0 {
        monic(f, &pdivrem(f, &a, &g).0)
    } else {
        a
    };
    let mut out = Vec::new();
    let x: UPoly = vec![0, 1];
    let mut frob = x.clone();
    let mut d = 1usize;
    while deg(&rest).unwrap_or(0) >= 2 * d {
        frob = ppowmod(f, &frob, f.p as u128, &rest);
        let gd = pgcd(f, &psub(f, &frob, &x), &rest);
        if deg(&gd).unwrap_or(0) > 0 {
            out.extend(equal_degree_split(f, &gd, d, rng));
            rest = monic(f, &pdivrem(f, &rest, &gd).0);
            frob = prem(f, &frob, &rest);
        }
        d += 1;
    }
    if deg(&rest).unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

fn equal_degree_split<R: Rng + ?Sized>(f: Zp, g: &UPoly, d: usize, rng: &mut R) -> Vec<UPoly> {
    let n = deg(g).unwrap_or(0);
    if n == d {
        return vec![g.clone()];
    }
    loop {
        let mut a: UPoly = (0..n).map(|_| rng.gen_range(0..f.p)).collect();
        trim(&mut a);
        if a.is_empty() {
            continue;
        }
        // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
        let mut norm = a.clone();
        let mut conj = a.clone();
        for _ in 1..d {
            conj = ppowmod(f, &conj, f.p as u128, g);
            norm = prem(f, &pmul(f, &norm, &conj), g);
        }
        let b = ppowmod(f, &norm, ((f.p - 1) / 2) as u128, g);
        let h = pgcd(f, &psub(f, &b, &vec![1]), g);
        let dh = deg(&h).unwrap_or(0);
        if dh > 0 && dh < n {
            let other = monic(f, &pdivrem(f, g, &h).0);
            let mut out = equal_degree_split(f, &h, d, rng);
            out.extend(equal_degree_split(f, &other, d, rng));
            return out;
        }
    }
}

/// The field `F_p[t]/(modulus)` for an irreducible monic modulus.
#[derive(Debug, Clone)]
pub struct ExtField {
    pub base: Zp,
    pub modulus: UPoly,
}

pub type Ext = UPoly;

impl ExtField {
    pub fn new(base: Zp, modulus: UPoly) -> Self {
        ExtField { base, modulus }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Class of `t`.
    pub fn generator(&self) -> Ext {
        prem(self.base, &vec![0, 1], &self.modulus)
    }

    pub fn from_base(&self, c: u64) -> Ext {
        let mut v = vec![c % self.base.p];
        trim(&mut v);
        v
    }

    pub fn add(&self, a: &Ext, b: &Ext) -> Ext {
        padd(self.base, a, b)
    }

    pub fn sub(&self, a: &Ext, b: &Ext) -> Ext {
        psub(self.base, a, b)
    }

    pub fn mul(&self, a: &Ext, b: &Ext) -> Ext {
        prem(self.base, &pmul(self.base, a, b), &self.modulus)
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &Ext) -> Ext {
        let f = self.base;
        let (mut r0, mut r1) = (self.modulus.clone(), a.clone());
        let (mut s0, mut s1): (UPoly, UPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = pdivrem(f, &r0, &r1);
            let s = psub(f, &s0, &pmul(f, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        assert_eq!(r0.len(), 1, "element not invertible in extension");
        let c = f.inv(r0[0]);
        prem(f, &pscale(f, &s0, c), &self.modulus)
    }

    /// Gcd of polynomials with coefficients in this field (lowest degree first).
    pub fn poly_gcd(&self, a: &[Ext], b: &[Ext]) -> Vec<Ext> {
        let trim_e = |v: &mut Vec<Ext>| {
            while v.last().is_some_and(|c| c.is_empty()) {
                v.pop();
            }
        };
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        trim_e(&mut x);
        trim_e(&mut y);
        while !y.is_empty() {
            // x mod y
            let inv = self.inv(y.last().unwrap());
            while x.len() >= y.len() {
                let shift = x.len() - y.len();
                let c = self.mul(x.last().unwrap(), &inv);
                for (i, yi) in y.iter().enumerate() {
                    let prod = self.mul(&c, yi);
                    x[shift + i] = self.sub(&x[shift + i], &prod);
                }
                trim_e(&mut x);
            }
            std::mem::swap(&mut x, &mut y);
        }
        if let Some(lc) = x.last().cloned() {
            let inv = self.inv(&lc);
            x = x.iter().map(|c| self.mul(c, &inv)).collect();
        }
        x
    }
}

/// Chinese remaindering: combine `r mod m` with `a mod p`.
pub fn crt_step(r: &BigInt, m: &BigInt, a: u64, p: u64) -> BigInt {
    let f = Zp::new(p);
    let rm = f.from_int(r);
    let mm = f.from_int(m);
    let k = f.mul(f.sub(a, rm), f.inv(mm));
    r + m * BigInt::from(k)
}

/// Chinese remaindering for many residue vectors over one fixed list of
/// primes (Garner's mixed-radix form).
pub struct Garner {
    primes: Vec<u64>,
    /// `inv[i][j]` = `p_j^(-1) mod p_i` for `j < i`.
    inv: Vec<Vec<u64>>,
    modulus: BigInt,
}

impl Garner {
    pub fn new(primes: &[u64]) -> Self {
        let inv = primes
            .iter()
            .enumerate()
            .map(|(i, &pi)| {
                let f = Zp::new(pi);
                primes[..i].iter().map(|&pj| f.inv(pj % pi)).collect()
            })
            .collect();
        let modulus = primes.iter().fold(BigInt::from(1), |acc, &p| acc * p);
        Garner {
            primes: primes.to_vec(),
            inv,
            modulus,
        }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// The integer in `(-M/2, M/2]` with the given residues.
    pub fn reconstruct(&self, residues: &[u64]) -> BigInt {
        let k = self.primes.len();
        let mut v = vec![0u64; k];
        for i in 0..k {
            let f = Zp::new(self.primes[i]);
            let mut t = residues[i] % f.p;
            for j in 0..i {
                t = f.mul(f.sub(t, v[j] % f.p), self.inv[i][j]);
            }
            v[i] = t;
        }
        let mut x = BigInt::from(v[k - 1]);
        for i in (0..k - 1).rev() {
            x = x * self.primes[i] + v[i];
        }
        let half: BigInt = &self.modulus >> 1;
        if x > half {
            x - &self.modulus
        } else {
            x
        }
    }
}

/// `n/d` with `n = d*u mod m`, `|n|, d <= sqrt(m/2)`, if one exists.
pub fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let u = u.mod_floor(m);
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(if t1.is_negative() { (-r1, -t1) } else { (r1, t1) })
}

/// Symmetric representative of `r mod m`.
pub fn symmetric(r: &BigInt, m: &BigInt) -> BigInt {
    let r = r.mod_floor(m);
    let half: BigInt = m >> 1;
    if r > half {
        r - m
    } else {
        r
    }
}

pub fn bigint_abs_bits(n: &BigInt) -> u64 {
    n.abs().bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn garner_matches_stepwise() {
        let primes = big_primes(4);
        let g = Garner::new(&primes);
        for n in [BigInt::from(-12345678901234567i64), BigInt::from(3).pow(150u32), -BigInt::from(7).pow(85u32), BigInt::from(0)] {
            let res: Vec<u64> = primes.iter().map(|&p| Zp::new(p).from_int(&n)).collect();
            assert_eq!(g.reconstruct(&res), n);
        }
    }

    #[test]
    fn reconstructs_fractions() {
        let primes = big_primes(3);
        let g = Garner::new(&primes);
        for (n, d) in [(-7i64, 3i64), (12345, 677), (0, 1), (1, 99991)] {
            let res: Vec<u64> = primes
                .iter()
                .map(|&p| {
                    let f = Zp::new(p);
                    f.mul(f.from_i64(n), f.inv(f.from_i64(d)))
                })
                .collect();
            let got = rational_reconstruct(&g.reconstruct(&res), g.modulus()).unwrap();
            assert_eq!(got, (BigInt::from(n), BigInt::from(d)));
        }
    }

    #[test]
    fn montgomery_matches_plain() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for &p in big_primes(3).iter().chain(&[P61, 1_000_000_007]) {
            let (f, m) = (Zp::new(p), Mont::new(p));
            for _ in 0..200 {
                let a = rng.gen_range(0..p);
                let b = rng.gen_range(1..p);
                let (ma, mb) = (m.enter(a), m.enter(b));
                assert_eq!(m.leave(m.mul(ma, mb)), f.mul(a, b));
                assert_eq!(m.leave(m.sub(ma, mb)), f.sub(a, b));
                assert_eq!(m.leave(m.add(ma, mb)), f.add(a, b));
                assert_eq!(m.leave(m.inv(mb)), f.inv(b));
            }
        }
    }

    #[test]
    fn primes_are_prime() {
        assert!(is_prime_u64(P61));
        assert!(!is_prime_u64(P61 - 2));
        let ps = big_primes(5);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| is_prime_u64(p) && p > 1 << 61));
    }

    #[test]
    fn factor_small_product() {
        let f = Zp::new(P61);
        // (t - 3)(t - 5)(t^2 + 1) with t^2+1 irreducible iff p = 3 mod 4; 2^61-1 = 3 mod 4.
        let a = pmul(f, &pmul(f, &vec![f.neg(3), 1], &vec![f.neg(5), 1]), &vec![1, 0, 1]);
        let sq = pmul(f, &a, &vec![f.neg(3), 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut facs = irreducible_factors(f, &sq, &mut rng);
        facs.sort();
        assert_eq!(facs.len(), 3);
        assert!(facs.contains(&vec![1, 0, 1]));
        assert!(facs.contains(&vec![f.neg(3), 1]));
        assert!(facs.contains(&vec![f.neg(5), 1]));
    }

    #[test]
    fn extension_inverse() {
        let f = Zp::new(P61);
        let k = ExtField::new(f, vec![1, 0, 1]);
        let a: Ext = vec![3, 7];
        let prod = k.mul(&a, &k.inv(&a));
        assert_eq!(prod, vec![1]);
    }

    #[test]
    fn crt_reconstructs_negative() {
        let ps = big_primes(3);
        let n = BigInt::from(-123456789012345678i64) * BigInt::from(987654321987i64);
        let mut r = BigInt::from(Zp::new(ps[0]).from_int(&n));
        let mut m = BigInt::from(ps[0]);
        for &p in &ps[1..] {
            r = crt_step(&r, &m, Zp::new(p).from_int(&n), p);
            m *= p;
        }
        assert_eq!(symmetric(&r, &m), n);
    }
}
