//! Linear syzygies, the normalized generators `pu, pv, p2, p3`, the special
//! pair and the strand matrices of the first differential.

use num_traits::One;
use serde::Serialize;

use super::{syz_strand, syzygy_matrix, SyzygyVector, TPSurface};
use crate::bipoly::{BiDeg, BiPoly, Q};
use crate::error::{Error, Result};
use crate::exactla::{rank, MatQ, MatX};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Bidegree `(0,1)`.
    UV,
    /// Bidegree `(1,0)`.
    ST,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSyzygy {
    pub syzygy: SyzygyVector,
    pub orientation: Orientation,
}

/// The unique linear syzygy, if any.
///
/// Fails with `MultipleLinearSyzygies` when the strands at `(0,1)` and
/// `(1,0)` have total dimension above one.
pub fn detect_linear_syzygy(s: &TPSurface) -> Result<Option<LinearSyzygy>> {
    let mut uv = syz_strand(s, BiDeg::new(0, 1));
    let mut st = syz_strand(s, BiDeg::new(1, 0));
    match (uv.len(), st.len()) {
        (0, 0) => Ok(None),
        (1, 0) => Ok(Some(LinearSyzygy {
            syzygy: uv.pop().unwrap(),
            orientation: Orientation::UV,
        })),
        (0, 1) => Ok(Some(LinearSyzygy {
            syzygy: st.pop().unwrap(),
            orientation: Orientation::ST,
        })),
        (u, t) => Err(Error::MultipleLinearSyzygies { uv: u, st: t }),
    }
}

/// Generators `pu, pv, p2, p3` built from a linear syzygy.
///
/// Everything here lives in working coordinates: for an `ST` syzygy the
/// roles of `(s,t)` and `(u,v)` are exchanged, so `p` has bidegree
/// `(b, a-1)` in the original variables' swapped names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedSurface {
    pub orientation: Orientation,
    /// Working bidegree.
    pub deg: BiDeg,
    pub p: BiPoly,
    pub p2: BiPoly,
    pub p3: BiPoly,
    /// Row `k` holds the coefficients of the `k`-th normalized generator
    /// in the original basis.
    pub basis_change: MatQ,
    /// Original generators reused as `p2`, `p3`.
    pub completion: (usize, usize),
}

impl NormalizedSurface {
    /// `[pu, pv, p2, p3]` in working coordinates.
    pub fn generators(&self) -> [BiPoly; 4] {
        [
            &self.p * &BiPoly::u(),
            &self.p * &BiPoly::v(),
            self.p2.clone(),
            self.p3.clone(),
        ]
    }

    pub fn surface(&self) -> TPSurface {
        TPSurface::new(self.deg.m, self.deg.n, self.generators()).expect("normalized basis is independent")
    }

    /// The linear syzygy `(v, -u, 0, 0)` of the normalized generators.
    pub fn linear_syzygy(&self) -> SyzygyVector {
        let mu = BiDeg::new(0, 1);
        SyzygyVector {
            mu,
            g: [BiPoly::v(), -&BiPoly::u(), BiPoly::zero(mu), BiPoly::zero(mu)],
        }
    }

    /// `p` in the caller's variables.
    pub fn p_original(&self) -> BiPoly {
        match self.orientation {
            Orientation::UV => self.p.clone(),
            Orientation::ST => self.p.swap_factors(),
        }
    }

    /// Normalized generators in the caller's variables.
    pub fn generators_original(&self) -> [BiPoly; 4] {
        let g = self.generators();
        match self.orientation {
            Orientation::UV => g,
            Orientation::ST => g.map(|q| q.swap_factors()),
        }
    }
}

/// Rewrites `U` as `<pu, pv, p2, p3>` from a linear syzygy `L`.
///
/// With `L_i = a_i u + b_i v`, `A = sum a_i p_i` and `B = sum b_i p_i` satisfy
/// `A u + B v = 0`, so `p = B / u` and then `pv = -A`.
pub fn normalize_linear(s: &TPSurface, l: &LinearSyzygy) -> Result<NormalizedSurface> {
    if !l.syzygy.is_syzygy_of(s) {
        return Err(Error::NotASyzygy);
    }
    let (work, syz) = match l.orientation {
        Orientation::UV => (s.clone(), l.syzygy.clone()),
        Orientation::ST => (s.swap(), l.syzygy.swap()),
    };
    if syz.mu != BiDeg::new(0, 1) {
        return Err(Error::DegreeMismatch {
            expected: "(0,1) in working coordinates".into(),
            found: syz.mu.to_string(),
        });
    }
    let a: Vec<Q> = syz.g.iter().map(|q| q.coeff(0, 0)).collect();
    let b: Vec<Q> = syz.g.iter().map(|q| q.coeff(0, 1)).collect();
    let gens = work.generators();
    let combo = |c: &[Q]| {
        gens.iter()
            .zip(c)
            .fold(BiPoly::zero(work.deg()), |acc, (p, x)| &acc + &p.scale(x))
    };
    let big_a = combo(&a);
    let big_b = combo(&b);
    if big_a.is_zero() || big_b.is_zero() {
        return Err(Error::DegenerateLinearSyzygy(
            if big_a.is_zero() { "sum a_i p_i = 0" } else { "sum b_i p_i = 0" }.into(),
        ));
    }
    assert!(
        (&(&big_a * &BiPoly::u()) + &(&big_b * &BiPoly::v())).is_zero(),
        "A u + B v must vanish for a syzygy"
    );
    let p = big_b.exact_div(&BiPoly::u())?;
    let pu = big_b.clone();
    let pv = -&big_a;
    debug_assert_eq!(&p * &BiPoly::v(), pv);

    let deg = work.deg();
    let vec_of = |q: &BiPoly| q.coeff_vector(deg).expect("bidegree");
    let (vu, vv) = (vec_of(&pu), vec_of(&pv));
    let mut completion = None;
    'search: for i in 0..4 {
        for j in i + 1..4 {
            let m = MatQ::from_columns(deg.dim(), &[vu.clone(), vv.clone(), vec_of(&gens[i]), vec_of(&gens[j])]);
            if rank(&m) == 4 {
                completion = Some((i, j));
                break 'search;
            }
        }
    }
    let (i, j) = completion.ok_or_else(|| Error::DegenerateLinearSyzygy("pu, pv are dependent".into()))?;
    let mut basis_change = MatQ::zeros(4, 4);
    for k in 0..4 {
        basis_change.set(0, k, b[k].clone());
        basis_change.set(1, k, -a[k].clone());
    }
    basis_change.set(2, i, Q::one());
    basis_change.set(3, j, Q::one());
    Ok(NormalizedSurface {
        orientation: l.orientation,
        deg,
        p,
        p2: gens[i].clone(),
        p3: gens[j].clone(),
        basis_change,
        completion: (i, j),
    })
}

/// `q = f u + g v`, with every monomial divisible by `u` assigned to `f`.
pub fn uv_split(q: &BiPoly) -> Result<(BiPoly, BiPoly)> {
    let d = q.deg();
    if d.n == 0 {
        return Err(Error::DegreeTooLow(format!("uv_split needs u,v-degree >= 1, got {d}")));
    }
    let out = BiDeg::new(d.m, d.n - 1);
    let mut f = Vec::new();
    let mut g = Vec::new();
    for (&(i, j), c) in q.terms() {
        // u-exponent is n - j
        if j < d.n {
            f.push(((i, j), c.clone()));
        } else {
            g.push(((i, j - 1), c.clone()));
        }
    }
    Ok((
        BiPoly::from_terms(out, f).expect("in range"),
        BiPoly::from_terms(out, g).expect("in range"),
    ))
}

/// `S1 = (f2, g2, -p, 0)` and `S2 = (f3, g3, 0, -p)`.
pub fn special_pair(n: &NormalizedSurface) -> Result<(SyzygyVector, SyzygyVector)> {
    let (f2, g2) = uv_split(&n.p2)?;
    let (f3, g3) = uv_split(&n.p3)?;
    let mu = n.p.deg();
    let zero = BiPoly::zero(mu);
    let minus_p = -&n.p;
    let s1 = SyzygyVector::new(mu, [f2, g2, minus_p.clone(), zero.clone()])?;
    let s2 = SyzygyVector::new(mu, [f3, g3, zero, minus_p])?;
    let gens = n.surface();
    assert!(s1.is_syzygy_of(&gens), "S1 is not a syzygy");
    assert!(s2.is_syzygy_of(&gens), "S2 is not a syzygy");
    Ok((s1, s2))
}

/// The `(2a-1, b-1)` strand of the first differential spanned by
/// `L`, `S1`, `S2`: columns `L*m` for `m` of bidegree `(2a-1, b-2)`, then
/// `S1*m'` and `S2*m'` for `m'` of bidegree `(a-1, 0)`.
pub fn build_d1_nu(
    n: &NormalizedSurface,
    l: &SyzygyVector,
    s1: &SyzygyVector,
    s2: &SyzygyVector,
) -> Result<MatX> {
    let (a, b) = (n.deg.m, n.deg.n);
    if a < 1 || b < 2 {
        return Err(Error::DegreeTooLow(format!(
            "strand matrix needs a >= 1 and b >= 2 in working coordinates, got ({a},{b})"
        )));
    }
    let nu = BiDeg::new(2 * a - 1, b - 1);
    let lm = BiDeg::new(2 * a - 1, b - 2);
    let sm = BiDeg::new(a - 1, 0);
    let mut cols = Vec::with_capacity(nu.dim());
    for (i, j) in lm.monomials() {
        cols.push(l.mul_monomial(lm, i, j));
    }
    for s in [s1, s2] {
        for (i, j) in sm.monomials() {
            cols.push(s.mul_monomial(sm, i, j));
        }
    }
    debug_assert_eq!(cols.len(), nu.dim());
    syzygy_matrix(&cols, nu)
}

/// All syzygies of bidegree `(2a-1, b-1)` as columns; square exactly when
/// the strand has dimension `2ab`.
pub fn build_d1_nu_generic(s: &TPSurface) -> Result<MatX> {
    let (a, b) = (s.a(), s.b());
    let nu = BiDeg::new(2 * a - 1, b - 1);
    syzygy_matrix(&syz_strand(s, nu), nu)
}
