//! Exact linear algebra over Q and over the linear forms in `x0..x3`.
//!
//! Every elimination here is fraction-free: rational input is scaled to
//! integers once, rows lose their content as they are combined, and
//! determinants use Bareiss' exact-division recurrence.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::bipoly::{lcm_of_denominators, q_int, XPoly, Q};
use crate::error::{Error, Result};
use crate::modp::{self, Mont, Zp};
use crate::mpoly::IPoly;

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatQ {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatQ {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q_int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn transpose(&self) -> MatQ {
        let mut t = MatQ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let den = lcm_of_denominators(row);
                let dq = Q::from_integer(den);
                row.iter().map(|x| (x * &dq).to_integer()).collect()
            })
            .collect()
    }
}

impl fmt::Display for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn strip_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Integer reduced row echelon form: every pivot column is zero outside
/// its pivot row. Returns the reduced rows and pivot columns.
fn integer_rref(mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // Least-complex pivot: smallest magnitude nonzero entry.
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].abs())
        else {
            continue;
        };
        rows.swap(r, p);
        let (before, rest) = rows.split_at_mut(r);
        let (prow, after) = rest.split_first_mut().unwrap();
        let pv = prow[c].clone();
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in 0..cols {
                if prow[k].is_zero() {
                    row[k] = &row[k] * &pv;
                } else {
                    row[k] = &row[k] * &pv - &f * &prow[k];
                }
            }
            strip_content(row);
        }
        strip_content(prow);
        if prow[c].is_negative() {
            for x in prow.iter_mut() {
                *x = -&*x;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn normalize_vector(v: &mut [BigInt]) {
    strip_content(v);
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per free column
/// (ascending), each integer primitive with a positive first nonzero entry.
pub fn kernel_basis(m: &MatQ) -> Vec<Vec<Q>> {
    let (rows, pivots) = integer_rref(m.integer_rows(), m.cols);
    let mut out = Vec::new();
    let mut pivot_iter = pivots.iter().peekable();
    for f in 0..m.cols {
        if pivot_iter.peek() == Some(&&f) {
            pivot_iter.next();
            continue;
        }
        let scale = rows
            .iter()
            .zip(&pivots)
            .filter(|(row, _)| !row[f].is_zero())
            .fold(BigInt::one(), |acc, (row, &pc)| acc.lcm(&row[pc]));
        let mut v = vec![BigInt::zero(); m.cols];
        v[f] = scale.clone();
        for (row, &pc) in rows.iter().zip(&pivots) {
            if !row[f].is_zero() {
                v[pc] = -(&row[f] * &scale) / &row[pc];
            }
        }
        normalize_vector(&mut v);
        out.push(v.into_iter().map(Q::from_integer).collect());
    }
    out
}

/// Exact rank over Q.
pub fn rank(m: &MatQ) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // A full-rank image modulo a prime certifies full rank over Q.
    let full = m.rows.min(m.cols);
    if rank_mod_p(m, modp::P61) == Some(full) {
        return full;
    }
    integer_rref(m.integer_rows(), m.cols).1.len()
}

/// Rank of the reduction modulo `p`, `None` if a denominator vanishes.
pub fn rank_mod_p(m: &MatQ, p: u64) -> Option<usize> {
    let f = Zp::new(p);
    let mut a: Vec<Vec<u64>> = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        a.push(m.row(r).iter().map(|x| f.from_q(x)).collect::<Option<Vec<_>>>()?);
    }
    Some(rank_mod_rows(f, &mut a, m.cols))
}

fn rank_mod_rows(f: Zp, a: &mut [Vec<u64>], cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let inv = f.inv(a[r][c]);
        for i in r + 1..a.len() {
            if a[i][c] != 0 {
                let k = f.mul(a[i][c], inv);
                for j in c..cols {
                    let t = f.mul(k, a[r][j]);
                    a[i][j] = f.sub(a[i][j], t);
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Exact determinant over Q.
pub fn det_scalar(m: &MatQ) -> Result<Q> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Q::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|r| {
            let row = m.row(r);
            let den = lcm_of_denominators(row);
            let dq = Q::from_integer(den.clone());
            scale *= den;
            row.iter().map(|x| (x * &dq).to_integer()).collect()
        })
        .collect();
    let d = bareiss_int(&mut a);
    Ok(Q::new(d, scale))
}

fn bareiss_int(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].abs()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Matrix whose entries are linear forms in `x0..x3` (or zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatX {
    rows: usize,
    cols: usize,
    data: Vec<XPoly>,
}

impl MatX {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatX {
            rows,
            cols,
            data: vec![XPoly::zero(1); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<XPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = MatX::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::DegreeMismatch {
                    expected: format!("{c} columns"),
                    found: format!("{} columns", row.len()),
                });
            }
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x)?;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &XPoly {
        &self.data[r * self.cols + c]
    }

    /// Stores an entry, which must be a linear form or zero.
    pub fn set(&mut self, r: usize, c: usize, x: XPoly) -> Result<()> {
        if !x.is_zero() && x.deg() != 1 {
            return Err(Error::DegreeMismatch {
                expected: "linear entry".into(),
                found: format!("degree {}", x.deg()),
            });
        }
        self.data[r * self.cols + c] = if x.is_zero() { XPoly::zero(1) } else { x };
        Ok(())
    }

    /// Evaluates every entry at a point.
    pub fn eval(&self, pt: &[Q; 4]) -> MatQ {
        MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.eval(pt)).collect(),
        }
    }

    /// The `(4*rows) x cols` rational matrix stacking the `x_i`-coefficients
    /// of every entry; its rank is the number of independent columns.
    pub fn coefficient_matrix(&self) -> MatQ {
        let mut m = MatQ::zeros(4 * self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                for (e, coef) in self.get(r, c).terms() {
                    let var = e.iter().position(|&k| k == 1).expect("linear");
                    m.set(4 * r + var, c, coef.clone());
                }
            }
        }
        m
    }

    fn check_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Integer linear coefficients per entry after scaling each column to
    /// integers; returns the entries and the product of the column scales.
    fn integer_linear(&self) -> (Vec<Vec<[BigInt; 4]>>, BigInt) {
        let mut scale = BigInt::one();
        let mut out = vec![vec![std::array::from_fn(|_| BigInt::zero()); self.cols]; self.rows];
        for c in 0..self.cols {
            let den = lcm_of_denominators((0..self.rows).flat_map(|r| self.get(r, c).terms().map(|(_, q)| q)));
            let dq = Q::from_integer(den.clone());
            scale *= den;
            for r in 0..self.rows {
                for (e, coef) in self.get(r, c).terms() {
                    let var = e.iter().position(|&k| k == 1).expect("linear");
                    out[r][c][var] = (coef * &dq).to_integer();
                }
            }
        }
        (out, scale)
    }
}

impl fmt::Display for MatX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn serialize_rows<S: Serializer, T: ToString>(
    s: S,
    rows: usize,
    cols: usize,
    get: impl Fn(usize, usize) -> T,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rows))?;
    for r in 0..rows {
        let row: Vec<String> = (0..cols).map(|c| get(r, c).to_string()).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// Row-major array of polynomial strings.
impl Serialize for MatX {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rows(s, self.rows, self.cols, |r, c| self.get(r, c).clone())
    }
}

impl Serialize for MatQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rows(s, self.rows, self.cols, |r, c| self.get(r, c).clone())
    }
}

fn pivot_cost(p: &IPoly) -> (usize, u64) {
    let height = p.terms.values().map(|c| c.bits()).max().unwrap_or(0);
    (p.terms.len(), height)
}

/// Symbolic determinant by fraction-free (Bareiss) elimination over
/// `Z[x0..x3]` with full pivoting on the least complex nonzero entry.
pub fn det_poly(m: &MatX) -> Result<XPoly> {
    let n = m.check_square()?;
    if n == 0 {
        return Ok(XPoly::constant(Q::one()));
    }
    let (lin, scale) = m.integer_linear();
    let mut a: Vec<Vec<IPoly>> = lin
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    let mut p = IPoly::zero();
                    for (var, x) in c.iter().enumerate() {
                        let mut e = [0; 4];
                        e[var] = 1;
                        p.add_term(e, x.clone());
                    }
                    p
                })
                .collect()
        })
        .collect();
    let mut sign = false;
    let mut prev = IPoly::constant(BigInt::one());
    for k in 0..n {
        let mut best: Option<((usize, u64), usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if a[i][j].is_zero() {
                    continue;
                }
                let cost = pivot_cost(&a[i][j]);
                if best.as_ref().map_or(true, |b| cost < b.0) {
                    best = Some((cost, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            return Ok(XPoly::zero(n as u32));
        };
        if pi != k {
            a.swap(pi, k);
            sign = !sign;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            sign = !sign;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let prow = &top[k];
        let pv = &prow[k];
        for row in bottom.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..n {
                let mut v = if row[j].is_zero() { IPoly::zero() } else { pv.mul(&row[j]) };
                if !f.is_zero() && !prow[j].is_zero() {
                    v = v.sub(&f.mul(&prow[j]));
                }
                row[j] = if v.is_zero() || k == 0 {
                    v
                } else {
                    v.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
        }
        prev = a[k][k].clone();
    }
    let mut d = a[n - 1][n - 1].clone();
    if sign {
        d = d.scale(&BigInt::from(-1));
    }
    Ok(d.to_xpoly(n as u32).scale(&Q::new(BigInt::one(), scale)))
}

/// Determinant by evaluation and interpolation, independent of
/// [`det_poly`].
///
/// The determinant `D` is homogeneous of degree `n`, so it is fixed by
/// `D(x0,x1,x2,1)`, a polynomial of total degree `<= n`. That polynomial is
/// recovered from its values on the lattice simplex `i+j+k <= n` by
/// multivariate forward differences, modulo enough primes to cover a
/// coefficient bound, and lifted by Chinese remaindering. The result is then
/// checked against exact scalar determinants at `checks` random points.
pub fn det_interp(m: &MatX, checks: usize, seed: u64) -> Result<XPoly> {
    let n = m.check_square()?;
    if n == 0 {
        return Ok(XPoly::constant(Q::one()));
    }
    let (lin, scale) = m.integer_linear();
    // |coefficient| <= prod_j sum_i ||a_ij||_1
    let mut bound = BigInt::one();
    for c in 0..n {
        let col: BigInt = (0..n).flat_map(|r| lin[r][c].iter().map(|x| x.abs())).sum();
        bound *= col;
    }
    if bound.is_zero() {
        return Ok(XPoly::zero(n as u32));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let need = (bound.bits() + 2) as usize;
    let primes = modp::big_primes(need.div_ceil(61).max(1));
    // Primes are added in growing batches; after each batch the determinant
    // is tried up to scale, which needs far fewer primes than the bound when
    // the entries carry a large common content.
    let mut images: Vec<Vec<u64>> = Vec::new();
    loop {
        let have = images.len();
        let step = (have / 2).max(2).min(primes.len() - have);
        for &p in &primes[have..have + step] {
            images.push(interp_mod_p(&lin, n, Zp::new(p)));
        }
        if images.len() == primes.len() {
            break;
        }
        if let Some(det) = projective_det(&images, &primes[..images.len()], n, m, checks.max(1), &mut rng)? {
            return Ok(det);
        }
    }
    let garner = modp::Garner::new(&primes);
    let mut terms = Vec::new();
    let mut residues = vec![0u64; primes.len()];
    for (idx, (e0, e1, e2)) in simplex_iter(n).enumerate() {
        for (r, img) in residues.iter_mut().zip(&images) {
            *r = img[idx];
        }
        let c = garner.reconstruct(&residues);
        if !c.is_zero() {
            terms.push(([e0, e1, e2, n as u32 - e0 - e1 - e2], Q::new(c, scale.clone())));
        }
    }
    let det = XPoly::from_terms(terms, Some(n as u32)).expect("homogeneous by construction");
    for _ in 0..checks {
        let pt = random_point(&mut rng);
        let want = det_scalar(&m.eval(&pt))?;
        assert_eq!(det.eval(&pt), want, "interpolated determinant failed verification");
    }
    Ok(det)
}

fn random_point(rng: &mut ChaCha8Rng) -> [Q; 4] {
    std::array::from_fn(|_| q_int(rng.gen_range(-(1 << 20)..=1 << 20)))
}

/// The determinant from too few primes for the coefficient bound: scale one
/// coefficient to 1, recover the rest by rational reconstruction, fix the
/// scalar at one exact evaluation and confirm at `checks` more.
fn projective_det(
    images: &[Vec<u64>],
    primes: &[u64],
    n: usize,
    m: &MatX,
    checks: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<XPoly>> {
    let Some(pivot) = (0..images[0].len()).find(|&i| images.iter().all(|img| img[i] != 0)) else {
        return Ok(None);
    };
    let normalized: Vec<Vec<u64>> = images
        .iter()
        .zip(primes)
        .map(|(img, &p)| {
            let f = Zp::new(p);
            let inv = f.inv(img[pivot]);
            img.iter().map(|&x| f.mul(x, inv)).collect()
        })
        .collect();
    let garner = modp::Garner::new(primes);
    let mut terms = Vec::new();
    let mut residues = vec![0u64; primes.len()];
    for (idx, (e0, e1, e2)) in simplex_iter(n).enumerate() {
        for (r, img) in residues.iter_mut().zip(&normalized) {
            *r = img[idx];
        }
        let Some((num, den)) = modp::rational_reconstruct(&garner.reconstruct(&residues), garner.modulus()) else {
            return Ok(None);
        };
        if !num.is_zero() {
            terms.push(([e0, e1, e2, n as u32 - e0 - e1 - e2], Q::new(num, den)));
        }
    }
    let shape = XPoly::from_terms(terms, Some(n as u32)).expect("homogeneous by construction");
    let mut scalar = None;
    for _ in 0..8 {
        let pt = random_point(rng);
        let v = shape.eval(&pt);
        if !v.is_zero() {
            scalar = Some(det_scalar(&m.eval(&pt))? / v);
            break;
        }
    }
    let Some(scalar) = scalar else {
        return Ok(None);
    };
    for _ in 0..checks {
        let pt = random_point(rng);
        if det_scalar(&m.eval(&pt))? != &scalar * shape.eval(&pt) {
            return Ok(None);
        }
    }
    Ok(Some(shape.scale(&scalar)))
}

fn simplex_len(n: usize) -> usize {
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// Exponent triples `(e0,e1,e2)` with sum `<= n`, in storage order.
fn simplex_iter(n: usize) -> impl Iterator<Item = (u32, u32, u32)> {
    let n = n as u32;
    (0..=n).flat_map(move |a| (0..=n - a).flat_map(move |b| (0..=n - a - b).map(move |c| (a, b, c))))
}

struct Simplex {
    n: usize,
    idx: Vec<usize>,
}

impl Simplex {
    fn new(n: usize) -> Self {
        let mut idx = vec![usize::MAX; (n + 1).pow(3)];
        for (k, (a, b, c)) in simplex_iter(n).enumerate() {
            idx[(a as usize * (n + 1) + b as usize) * (n + 1) + c as usize] = k;
        }
        Simplex { n, idx }
    }

    fn at(&self, a: usize, b: usize, c: usize) -> usize {
        self.idx[(a * (self.n + 1) + b) * (self.n + 1) + c]
    }
}

pub(crate) fn det_mod(f: Zp, a: &mut [Vec<u64>]) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            det = f.neg(det);
        }
        det = f.mul(det, a[k][k]);
        let inv = f.inv(a[k][k]);
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let factor = f.mul(a[i][k], inv);
            for j in k + 1..n {
                let t = f.mul(factor, a[k][j]);
                a[i][j] = f.sub(a[i][j], t);
            }
        }
    }
    det
}

fn det_mont(mt: Mont, a: &mut [Vec<u64>]) -> u64 {
    let n = a.len();
    let mut det = mt.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            det = mt.sub(0, det);
        }
        det = mt.mul(det, a[k][k]);
        let inv = mt.inv(a[k][k]);
        let (top, bottom) = a.split_at_mut(k + 1);
        let prow = &top[k];
        for row in bottom.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let factor = mt.mul(row[k], inv);
            for j in k + 1..n {
                if prow[j] != 0 {
                    row[j] = mt.sub(row[j], mt.mul(factor, prow[j]));
                }
            }
        }
    }
    det
}

/// Monomial coefficients of `D(x0,x1,x2,1) mod p` in simplex order.
fn interp_mod_p(lin: &[Vec<[BigInt; 4]>], n: usize, f: Zp) -> Vec<u64> {
    let mt = Mont::new(f.p);
    let red: Vec<Vec<[u64; 4]>> = lin
        .iter()
        .map(|row| row.iter().map(|c| std::array::from_fn(|v| mt.enter(f.from_int(&c[v])))).collect())
        .collect();
    let sx = Simplex::new(n);
    let mut vals = vec![0u64; simplex_len(n)];
    let mut work = vec![vec![0u64; n]; n];
    let coord: Vec<u64> = (0..=n as u64).map(|x| mt.enter(x)).collect();
    for (k, (a, b, c)) in simplex_iter(n).enumerate() {
        let pt = [coord[a as usize], coord[b as usize], coord[c as usize]];
        for (r, row) in red.iter().enumerate() {
            for (col, e) in row.iter().enumerate() {
                let mut acc = e[3];
                for v in 0..3 {
                    if e[v] != 0 && pt[v] != 0 {
                        acc = mt.add(acc, mt.mul(e[v], pt[v]));
                    }
                }
                work[r][col] = acc;
            }
        }
        vals[k] = mt.leave(det_mont(mt, &mut work));
    }
    // Forward differences along each axis, then binomial -> monomial basis.
    let binom = binomial_basis(n, f);
    for axis in 0..3 {
        for_each_line(&sx, axis, |line| {
            let len = line.len();
            for level in 1..len {
                for i in (level..len).rev() {
                    vals[line[i]] = f.sub(vals[line[i]], vals[line[i - 1]]);
                }
            }
        });
    }
    for axis in 0..3 {
        for_each_line(&sx, axis, |line| {
            let len = line.len();
            let old: Vec<u64> = line.iter().map(|&i| vals[i]).collect();
            for e in 0..len {
                let mut s = 0;
                for (a, &d) in old.iter().enumerate().skip(e) {
                    if d != 0 {
                        s = f.add(s, f.mul(d, binom[a][e]));
                    }
                }
                vals[line[e]] = s;
            }
        });
    }
    vals
}

/// Calls `g` with the storage indices of every maximal line along `axis`.
fn for_each_line(sx: &Simplex, axis: usize, mut g: impl FnMut(&[usize])) {
    let n = sx.n;
    let mut line = Vec::with_capacity(n + 1);
    for p in 0..=n {
        for q in 0..=n - p {
            line.clear();
            for t in 0..=n - p - q {
                line.push(match axis {
                    0 => sx.at(t, p, q),
                    1 => sx.at(p, t, q),
                    _ => sx.at(p, q, t),
                });
            }
            g(&line);
        }
    }
}

/// `binom[a][e]` = coefficient of `x^e` in `x(x-1)..(x-a+1)/a!` mod p.
fn binomial_basis(n: usize, f: Zp) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut falling: Vec<u64> = vec![1];
    let mut fact = 1u64;
    for a in 0..=n {
        if a > 0 {
            // multiply by (x - (a-1))
            let shift = f.from_i64(-(a as i64 - 1));
            let mut next = vec![0u64; falling.len() + 1];
            for (i, &c) in falling.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], c);
                next[i] = f.add(next[i], f.mul(c, shift));
            }
            falling = next;
            fact = f.mul(fact, a as u64);
        }
        let inv = f.inv(fact);
        let mut row: Vec<u64> = falling.iter().map(|&c| f.mul(c, inv)).collect();
        row.resize(n + 1, 0);
        out.push(row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xp(s: &str) -> XPoly {
        s.parse().unwrap()
    }

    fn cofactor(m: &MatX) -> XPoly {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = XPoly::zero(n as u32);
        for j in 0..n {
            if m.get(0, j).is_zero() {
                continue;
            }
            let minor = MatX::from_rows(
                (1..n)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| m.get(r, c).clone()).collect())
                    .collect(),
            )
            .unwrap();
            let term = m.get(0, j) * &cofactor(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn random_matx(n: usize, rng: &mut ChaCha8Rng) -> MatX {
        MatX::from_rows(
            (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            if rng.gen_bool(0.2) {
                                XPoly::zero(1)
                            } else {
                                XPoly::linear(&std::array::from_fn(|_| q_int(rng.gen_range(-5..=5))))
                            }
                        })
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_examples() {
        let m = MatQ::from_i64(&[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![q_int(2), q_int(-1)]]);
        assert_eq!(rank(&m), 1);
        assert!(kernel_basis(&MatQ::identity(4)).is_empty());
        assert_eq!(rank(&MatQ::zeros(3, 5)), 0);
        assert_eq!(kernel_basis(&MatQ::zeros(2, 3)).len(), 3);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let r = rng.gen_range(1..6);
            let c = rng.gen_range(1..8);
            let m = MatQ::from_rows(
                (0..r)
                    .map(|_| (0..c).map(|_| Q::new(rng.gen_range(-3..4).into(), rng.gen_range(1..4).into())).collect())
                    .collect(),
            );
            let k = kernel_basis(&m);
            assert_eq!(k.len() + rank(&m), c);
            for v in &k {
                assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn scalar_determinants() {
        assert_eq!(det_scalar(&MatQ::identity(5)).unwrap(), Q::one());
        assert_eq!(det_scalar(&MatQ::from_i64(&[&[0, 1], &[1, 0]])).unwrap(), q_int(-1));
        assert!(matches!(det_scalar(&MatQ::zeros(2, 3)), Err(Error::NotSquare { .. })));
        let m = MatQ::from_rows(vec![
            vec![Q::new(1.into(), 2.into()), q_int(3)],
            vec![q_int(4), Q::new(2.into(), 3.into())],
        ]);
        assert_eq!(det_scalar(&m).unwrap(), Q::new(1.into(), 3.into()) - q_int(12));
    }

    #[test]
    fn symbolic_determinants() {
        let m = MatX::from_rows(vec![vec![xp("x0")]]).unwrap();
        assert_eq!(det_poly(&m).unwrap(), xp("x0"));
        let m = MatX::from_rows(vec![vec![xp("x0"), xp("x1")], vec![xp("x1"), xp("x0")]]).unwrap();
        assert_eq!(det_poly(&m).unwrap(), xp("x0^2 - x1^2"));
        assert_eq!(det_interp(&m, 2, 0).unwrap(), xp("x0^2 - x1^2"));
        assert!(matches!(det_poly(&MatX::zeros(2, 3)), Err(Error::NotSquare { .. })));
        assert!(MatX::zeros(1, 1).set(0, 0, xp("x0^2")).is_err());
    }

    #[test]
    fn bareiss_matches_cofactor_and_interpolation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=5 {
            let m = random_matx(n, &mut rng);
            let d = det_poly(&m).unwrap();
            assert_eq!(d, cofactor(&m));
            assert_eq!(d, det_interp(&m, 1, n as u64).unwrap());
        }
    }

    #[test]
    fn column_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matx(4, &mut rng);
        let d = det_poly(&m).unwrap();
        let mut swapped = m.clone();
        let mut dup = m.clone();
        for r in 0..4 {
            swapped.set(r, 0, m.get(r, 1).clone()).unwrap();
            swapped.set(r, 1, m.get(r, 0).clone()).unwrap();
            dup.set(r, 2, m.get(r, 0).clone()).unwrap();
        }
        assert_eq!(det_poly(&swapped).unwrap(), -&d);
        assert!(det_poly(&dup).unwrap().is_zero());
    }

    #[test]
    fn json_serialization() {
        let m = MatX::from_rows(vec![vec![xp("x0"), XPoly::zero(1)], vec![xp("-x1 + 2*x3"), xp("x2")]]).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"[["x0","0"],["-x1 + 2*x3","x2"]]"#);
    }
}
