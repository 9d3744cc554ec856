//! Tensor-product surfaces, their syzygy strands, the linear-syzygy
//! pipeline and implicit equations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bipoly::{BiDeg, BiPoly, XPoly, Q};
use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, rank, MatQ, MatX};

mod basepoint;
mod classify;
mod implicit;
mod linear;

pub use basepoint::{basepoint_check, BasepointReport, Certificate, Witness};
pub use classify::{classify_p22, intersection_number, P22Class};
pub use implicit::{implicitize, line_multiplicity, DetBackend, ImplicitOptions, ImplicitResult, Route};
pub use linear::{
    build_d1_nu, build_d1_nu_generic, detect_linear_syzygy, normalize_linear, special_pair, uv_split,
    LinearSyzygy, NormalizedSurface, Orientation,
};

/// Four independent forms of bidegree `(a,b)` spanning `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPSurface {
    deg: BiDeg,
    p: [BiPoly; 4],
}

impl TPSurface {
    pub fn new(a: u32, b: u32, p: [BiPoly; 4]) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidSurface(format!("bidegree ({a},{b}) needs a,b >= 1")));
        }
        let deg = BiDeg::new(a, b);
        for q in &p {
            if q.deg() != deg {
                return Err(Error::DegreeMismatch {
                    expected: deg.to_string(),
                    found: q.deg().to_string(),
                });
            }
        }
        let cols: Vec<Vec<Q>> = p.iter().map(|q| q.coeff_vector(deg).expect("checked")).collect();
        if rank(&MatQ::from_columns(deg.dim(), &cols)) < 4 {
            return Err(Error::DependentGenerators);
        }
        Ok(TPSurface { deg, p })
    }

    pub fn a(&self) -> u32 {
        self.deg.m
    }

    pub fn b(&self) -> u32 {
        self.deg.n
    }

    pub fn deg(&self) -> BiDeg {
        self.deg
    }

    pub fn generators(&self) -> &[BiPoly; 4] {
        &self.p
    }

    /// The same surface with `(s,t)` and `(u,v)` exchanged.
    pub fn swap(&self) -> TPSurface {
        TPSurface {
            deg: self.deg.swap(),
            p: self.p.clone().map(|q| q.swap_factors()),
        }
    }

    /// Generators reordered as `p[perm[0]], .., p[perm[3]]`.
    pub fn permuted(&self, perm: [usize; 4]) -> TPSurface {
        TPSurface {
            deg: self.deg,
            p: perm.map(|i| self.p[i].clone()),
        }
    }

    /// `sum g_i p_i`.
    pub fn combine(&self, g: &[BiPoly; 4]) -> BiPoly {
        let out = g[0].deg() + self.deg;
        g.iter()
            .zip(&self.p)
            .fold(BiPoly::zero(out), |acc, (gi, pi)| &acc + &(gi * pi))
    }

    /// Matrix of `(R_mu)^4 -> R_{mu+(a,b)}`, `(g_i) -> sum g_i p_i`.
    /// Column `i*dim(R_mu) + idx(m)` is the image of `m e_i`.
    pub fn multiplication_matrix(&self, mu: BiDeg) -> MatQ {
        let target = mu + self.deg;
        let mut cols = Vec::with_capacity(4 * mu.dim());
        for p in &self.p {
            for (i, j) in mu.monomials() {
                cols.push(p.mul_monomial(mu, i, j).coeff_vector(target).expect("bidegree"));
            }
        }
        MatQ::from_columns(target.dim(), &cols)
    }
}

impl fmt::Display for TPSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bidegree: {} {}", self.deg.m, self.deg.n)?;
        for (i, p) in self.p.iter().enumerate() {
            writeln!(f, "p{i}: {p}")?;
        }
        Ok(())
    }
}

/// A relation `sum g_i p_i = 0` with all `g_i` of bidegree `mu`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyzygyVector {
    pub mu: BiDeg,
    pub g: [BiPoly; 4],
}

impl SyzygyVector {
    pub fn new(mu: BiDeg, g: [BiPoly; 4]) -> Result<Self> {
        for gi in &g {
            if gi.deg() != mu {
                return Err(Error::DegreeMismatch {
                    expected: mu.to_string(),
                    found: gi.deg().to_string(),
                });
            }
        }
        Ok(SyzygyVector { mu, g })
    }

    pub fn is_syzygy_of(&self, s: &TPSurface) -> bool {
        s.combine(&self.g).is_zero()
    }

    pub fn swap(&self) -> SyzygyVector {
        SyzygyVector {
            mu: self.mu.swap(),
            g: self.g.clone().map(|q| q.swap_factors()),
        }
    }

    pub fn neg(&self) -> SyzygyVector {
        SyzygyVector {
            mu: self.mu,
            g: self.g.clone().map(|q| -&q),
        }
    }

    /// Product with the monomial `s^(m-i) t^i u^(n-j) v^j` of bidegree `mdeg`.
    pub fn mul_monomial(&self, mdeg: BiDeg, i: u32, j: u32) -> SyzygyVector {
        SyzygyVector {
            mu: self.mu + mdeg,
            g: self.g.clone().map(|q| q.mul_monomial(mdeg, i, j)),
        }
    }

    /// Flattened coefficients, generator-major.
    pub fn to_vector(&self) -> Vec<Q> {
        self.g
            .iter()
            .flat_map(|q| q.coeff_vector(self.mu).expect("bidegree"))
            .collect()
    }

    /// Column of the first differential: entry `r` is `sum_i c_i[r] x_i`
    /// where `c_i[r]` is the coefficient of the `r`-th monomial of `g_i`.
    pub fn x_column(&self) -> Vec<XPoly> {
        let cv: Vec<Vec<Q>> = self.g.iter().map(|q| q.coeff_vector(self.mu).expect("bidegree")).collect();
        (0..self.mu.dim())
            .map(|r| XPoly::linear(&std::array::from_fn(|i| cv[i][r].clone())))
            .collect()
    }
}

impl fmt::Display for SyzygyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.g.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Basis of the syzygies of bidegree `mu`.
pub fn syz_strand(s: &TPSurface, mu: BiDeg) -> Vec<SyzygyVector> {
    let d = mu.dim();
    kernel_basis(&s.multiplication_matrix(mu))
        .into_iter()
        .map(|v| SyzygyVector {
            mu,
            g: std::array::from_fn(|i| BiPoly::from_coeff_vector(mu, &v[i * d..(i + 1) * d])),
        })
        .collect()
}

/// Matrix whose columns are the given syzygies as x-linear columns at a
/// common bidegree.
pub fn syzygy_matrix(cols: &[SyzygyVector], mu: BiDeg) -> Result<MatX> {
    let mut m = MatX::zeros(mu.dim(), cols.len());
    for (c, syz) in cols.iter().enumerate() {
        if syz.mu != mu {
            return Err(Error::DegreeMismatch {
                expected: mu.to_string(),
                found: syz.mu.to_string(),
            });
        }
        for (r, x) in syz.x_column().into_iter().enumerate() {
            m.set(r, c, x)?;
        }
    }
    Ok(m)
}

/// Bidegrees of a minimal generating set of the syzygy module, restricted
/// to `mu <= bx`, sorted, with multiplicity.
///
/// At each `mu` the new generators number `dim Syz_mu` minus the rank of
/// the multiples `s,t * Syz_{mu-(1,0)}` and `u,v * Syz_{mu-(0,1)}`, which
/// span everything generated in lower degrees.
pub fn min_syz_generators(s: &TPSurface, bx: BiDeg) -> Vec<BiDeg> {
    let mut degs: Vec<BiDeg> = bx.monomials().map(|(m, n)| BiDeg::new(m, n)).collect();
    degs.sort_by_key(|d| (d.total(), d.m));
    let mut strands: BTreeMap<(u32, u32), Vec<SyzygyVector>> = BTreeMap::new();
    let mut out = Vec::new();
    for mu in degs {
        let strand = syz_strand(s, mu);
        let mut multiples: Vec<Vec<Q>> = Vec::new();
        if mu.m > 0 {
            let one = BiDeg::new(1, 0);
            for g in &strands[&(mu.m - 1, mu.n)] {
                multiples.push(g.mul_monomial(one, 0, 0).to_vector());
                multiples.push(g.mul_monomial(one, 1, 0).to_vector());
            }
        }
        if mu.n > 0 {
            let one = BiDeg::new(0, 1);
            for g in &strands[&(mu.m, mu.n - 1)] {
                multiples.push(g.mul_monomial(one, 0, 0).to_vector());
                multiples.push(g.mul_monomial(one, 0, 1).to_vector());
            }
        }
        let lower = if multiples.is_empty() {
            0
        } else {
            rank(&MatQ::from_rows(multiples))
        };
        for _ in lower..strand.len() {
            out.push(mu);
        }
        strands.insert((mu.m, mu.n), strand);
    }
    out.sort_by_key(|d| (d.m, d.n));
    out
}

#[cfg(test)]
mod tests;
