//! Basepoint test: an exact surjectivity certificate, or a common zero of
//! the generators over a finite field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::TPSurface;
use crate::bipoly::BiDeg;
use crate::exactla::{det_mod, rank, rank_mod_p};
use crate::modp::{self, Ext, ExtField, UPoly, Zp};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub prime: u64,
    /// Affine chart, e.g. `t=1, v=1`.
    pub chart: String,
    /// Monic minimal polynomial over `F_p` of the chart's first coordinate,
    /// coefficients from the constant term up.
    pub x_minpoly: Vec<u64>,
    /// Degree (over the field of `x`) of the gcd of the generators in the
    /// second coordinate; `0` when they vanish on the whole line.
    pub y_degree: usize,
    /// Both coordinates when they lie in `F_p`.
    pub point: Option<[u64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `(R_mu)^4 -> R_{mu+(a,b)}` is onto, so `I_U` contains a whole graded
    /// piece and the generators have no common zero.
    Surjective { mu: BiDeg },
    Witness(Witness),
    /// No degree tested was onto and no witness turned up.
    Inconclusive { tried: Vec<BiDeg>, trials: usize },
}

impl Certificate {
    pub fn label(&self) -> String {
        match self {
            Certificate::Surjective { mu } => format!("surjective at {mu}"),
            Certificate::Witness(w) => format!("finite-field witness mod {} in chart {}", w.prime, w.chart),
            Certificate::Inconclusive { .. } => "no-surjectivity-no-witness".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasepointReport {
    /// `true` only with a surjectivity certificate.
    pub free: bool,
    pub certificate: Certificate,
}

const TRIALS: usize = 3;

/// Escalation ladder for the surjectivity test.
fn ladder(a: u32, b: u32) -> Vec<BiDeg> {
    let mut out = Vec::new();
    for d in [
        BiDeg::new(2 * a - 1, b - 1),
        BiDeg::new(a - 1, 2 * b - 1),
        BiDeg::new(2 * a - 1, 2 * b - 1),
        BiDeg::new(3 * a, 3 * b),
    ] {
        if !out.contains(&d) {
            out.push(d);
        }
    }
    out
}

fn surjective(s: &TPSurface, mu: BiDeg) -> bool {
    let m = s.multiplication_matrix(mu);
    let target = m.rows();
    if m.cols() < target {
        return false;
    }
    // Full rank modulo a prime implies full rank over Q.
    rank_mod_p(&m, modp::P61) == Some(target) || rank(&m) == target
}

pub fn basepoint_check(s: &TPSurface, seed: u64) -> BasepointReport {
    let tried = ladder(s.a(), s.b());
    for &mu in &tried {
        if surjective(s, mu) {
            return BasepointReport {
                free: true,
                certificate: Certificate::Surjective { mu },
            };
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = modp::big_primes(64);
    for _ in 0..TRIALS {
        let p = primes[rng.gen_range(0..primes.len())];
        if let Some(w) = witness_search(s, Zp::new(p), &mut rng) {
            return BasepointReport {
                free: false,
                certificate: Certificate::Witness(w),
            };
        }
    }
    BasepointReport {
        free: false,
        certificate: Certificate::Inconclusive { tried, trials: TRIALS },
    }
}

/// Bivariate image in a chart: `cf[y_exp][x_exp]`.
type Biv = Vec<Vec<u64>>;

fn chart_name(chart: usize) -> String {
    let x = if chart & 1 == 0 { "t=1" } else { "s=1" };
    let y = if chart & 2 == 0 { "v=1" } else { "u=1" };
    format!("{x}, {y}")
}

fn chart_images(s: &TPSurface, f: Zp, chart: usize) -> Option<[Biv; 4]> {
    let (a, b) = (s.a(), s.b());
    let mut out: [Biv; 4] = std::array::from_fn(|_| vec![vec![0; a as usize + 1]; b as usize + 1]);
    for (q, img) in s.generators().iter().zip(out.iter_mut()) {
        for (&(i, j), c) in q.terms() {
            let xe = if chart & 1 == 0 { a - i } else { i };
            let ye = if chart & 2 == 0 { b - j } else { j };
            img[ye as usize][xe as usize] = f.from_q(c)?;
        }
    }
    Some(out)
}

fn combine(f: Zp, polys: &[Biv; 4], r: &[u64; 4]) -> Biv {
    let mut out = vec![vec![0; polys[0][0].len()]; polys[0].len()];
    for (p, &c) in polys.iter().zip(r) {
        for (orow, prow) in out.iter_mut().zip(p) {
            for (o, &x) in orow.iter_mut().zip(prow) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
    }
    out
}

/// Coefficients in `y` at `x = x0`.
fn at_x(f: Zp, g: &Biv, x0: u64) -> Vec<u64> {
    g.iter().map(|row| modp::peval(f, row, x0)).collect()
}

/// Coefficients in `x` at `y = y0`.
fn at_y(f: Zp, g: &Biv, y0: u64) -> UPoly {
    let mut out = vec![0; g[0].len()];
    let mut pw = 1;
    for row in g {
        for (o, &c) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, pw));
        }
        pw = f.mul(pw, y0);
    }
    modp::trim(&mut out);
    out
}

/// Sylvester determinant of two polynomials of formal degree `n` in `y`.
fn sylvester(f: Zp, g1: &[u64], g2: &[u64]) -> u64 {
    let n = g1.len() - 1;
    let size = 2 * n;
    if size == 0 {
        return 1;
    }
    let mut m = vec![vec![0u64; size]; size];
    for r in 0..n {
        for (k, &c) in g1.iter().rev().enumerate() {
            m[r][r + k] = c;
        }
        for (k, &c) in g2.iter().rev().enumerate() {
            m[n + r][r + k] = c;
        }
    }
    det_mod(f, &mut m)
}

/// Newton interpolation through `(i, vals[i])`.
fn interpolate(f: Zp, vals: &[u64]) -> UPoly {
    let n = vals.len();
    let mut dd = vals.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = f.sub(dd[i], dd[i - 1]);
            dd[i] = f.mul(num, f.inv(level as u64));
        }
    }
    // Horner on the Newton form with nodes 0..n-1.
    let mut poly: UPoly = vec![dd[n - 1]];
    for i in (0..n - 1).rev() {
        poly = modp::pmul(f, &poly, &vec![f.neg(i as u64 % f.p), 1]);
        poly = modp::padd(f, &poly, &vec![dd[i]]);
    }
    modp::trim(&mut poly);
    poly
}

fn resultant_in_y(f: Zp, g1: &Biv, g2: &Biv, a: usize) -> UPoly {
    let b = g1.len() - 1;
    let points = 2 * a * b + 1;
    let vals: Vec<u64> = (0..points as u64)
        .map(|x0| sylvester(f, &at_x(f, g1, x0), &at_x(f, g2, x0)))
        .collect();
    interpolate(f, &vals)
}

fn univariate_gcd_all(f: Zp, polys: &[Biv; 4], x0: u64) -> UPoly {
    polys.iter().fold(Vec::new(), |acc, p| {
        let mut y = at_x(f, p, x0);
        modp::trim(&mut y);
        modp::pgcd(f, &acc, &y)
    })
}

fn witness_search(s: &TPSurface, f: Zp, rng: &mut ChaCha8Rng) -> Option<Witness> {
    let a = s.a() as usize;
    for chart in 0..4 {
        let Some(polys) = chart_images(s, f, chart) else {
            continue;
        };
        let r1: [u64; 4] = std::array::from_fn(|_| rng.gen_range(1..f.p));
        let r2: [u64; 4] = std::array::from_fn(|_| rng.gen_range(1..f.p));
        let g1 = combine(f, &polys, &r1);
        let g2 = combine(f, &polys, &r2);
        let res = resultant_in_y(f, &g1, &g2, a);
        let candidates: Vec<UPoly> = if res.is_empty() {
            // g1, g2 share a factor; its trace on a random horizontal line
            // gives abscissae of common zeros.
            let y0 = rng.gen_range(0..f.p);
            let gx = modp::pgcd(f, &at_y(f, &g1, y0), &at_y(f, &g2, y0));
            modp::irreducible_factors(f, &gx, rng)
        } else {
            modp::irreducible_factors(f, &res, rng)
        };
        for h in candidates {
            if let Some(w) = check_factor(f, &polys, &h, chart) {
                return Some(w);
            }
        }
    }
    None
}

fn check_factor(f: Zp, polys: &[Biv; 4], h: &UPoly, chart: usize) -> Option<Witness> {
    if h.len() == 2 {
        let x0 = f.neg(h[0]);
        let g = univariate_gcd_all(f, polys, x0);
        if g.is_empty() {
            // every generator vanishes on the whole line x = x0
            return Some(Witness {
                prime: f.p,
                chart: chart_name(chart),
                x_minpoly: h.clone(),
                y_degree: 0,
                point: Some([x0, 0]),
            });
        }
        let d = modp::deg(&g).unwrap_or(0);
        if d == 0 {
            return None;
        }
        let point = (d == 1).then(|| {
            let g = modp::monic(f, &g);
            [x0, f.neg(g[0])]
        });
        return Some(Witness {
            prime: f.p,
            chart: chart_name(chart),
            x_minpoly: h.clone(),
            y_degree: d,
            point,
        });
    }
    let ext = ExtField::new(f, h.clone());
    let alpha = ext.generator();
    let xdeg = polys[0][0].len();
    let mut pows: Vec<Ext> = vec![ext.from_base(1)];
    for _ in 1..xdeg {
        let next = ext.mul(pows.last().unwrap(), &alpha);
        pows.push(next);
    }
    let mut acc: Vec<Ext> = Vec::new();
    for p in polys {
        let ys: Vec<Ext> = p
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&pows)
                    .fold(Vec::new(), |s, (&c, pw)| ext.add(&s, &ext.mul(&ext.from_base(c), pw)))
            })
            .collect();
        acc = ext.poly_gcd(&acc, &ys);
    }
    if acc.len() == 1 {
        return None;
    }
    Some(Witness {
        prime: f.p,
        chart: chart_name(chart),
        x_minpoly: h.clone(),
        y_degree: acc.len().saturating_sub(1),
        point: None,
    })
}
