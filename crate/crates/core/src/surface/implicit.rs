//! Implicit equation from the determinant of the `(2a-1, b-1)` strand.

use num_traits::Zero;
use serde::Serialize;

use super::linear::{build_d1_nu, build_d1_nu_generic, detect_linear_syzygy, normalize_linear, special_pair, Orientation};
use super::TPSurface;
use crate::bipoly::{BiDeg, XPoly, Q};
use crate::error::{Error, Result};
use crate::exactla::{det_interp, det_poly, MatX};

/// How symbolic determinants are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum DetBackend {
    /// Bareiss up to size 12, interpolation above.
    #[default]
    Auto,
    Bareiss,
    Interpolation,
}

#[derive(Clone, Debug)]
pub struct ImplicitOptions {
    pub backend: DetBackend,
    /// Also build the full strand and compare determinants up to scalar.
    pub cross_check: bool,
    /// Check `F(p0..p3) = 0` by exact substitution.
    pub verify_composition: bool,
    pub seed: u64,
}

impl Default for ImplicitOptions {
    fn default() -> Self {
        ImplicitOptions {
            backend: DetBackend::Auto,
            cross_check: false,
            verify_composition: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Columns from the linear syzygy and the special pair.
    ThreeSyzygy,
    /// Columns from a basis of the whole strand.
    FullStrand,
}

/// The line `V(l0, l1)` along which the image is singular, with orders of
/// vanishing of the determinant and of `F` along it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularLine {
    pub forms: [XPoly; 2],
    pub det_order: u32,
    pub f_order: u32,
    /// `2ab - 2a` in working coordinates.
    pub bound: u32,
}

#[derive(Clone, Debug)]
pub struct ImplicitResult {
    /// Determinant in the caller's coordinates.
    pub det: XPoly,
    /// Normalized squarefree part of `det`.
    pub f: XPoly,
    pub k: u32,
    /// `det = scalar * f^k`.
    pub scalar: Q,
    /// Strand bidegree in working coordinates.
    pub nu: BiDeg,
    pub route: Route,
    pub orientation: Option<Orientation>,
    /// Matrix whose determinant was taken, in working coordinates.
    pub matrix: MatX,
    /// Determinant in working coordinates (normalized generators on the
    /// three-syzygy route).
    pub det_working: XPoly,
    pub singular_line: Option<SingularLine>,
    /// Agreement with the full-strand determinant up to scalar.
    pub cross_check: Option<bool>,
    pub composition_verified: Option<bool>,
}

fn determinant(m: &MatX, opts: &ImplicitOptions) -> Result<XPoly> {
    match opts.backend {
        DetBackend::Bareiss => det_poly(m),
        DetBackend::Interpolation => det_interp(m, 2, opts.seed),
        DetBackend::Auto if m.rows() <= 12 => det_poly(m),
        DetBackend::Auto => det_interp(m, 2, opts.seed),
    }
}

/// `Some(c)` with `a = c * b` when the two are proportional.
pub(crate) fn ratio(a: &XPoly, b: &XPoly) -> Option<Q> {
    if a.deg() != b.deg() || a.num_terms() != b.num_terms() || b.is_zero() {
        return None;
    }
    let (ea, ca) = a.terms().next()?;
    let cb = b.coeff(ea);
    if cb.is_zero() {
        return None;
    }
    let c = ca / &cb;
    (a == &b.scale(&c)).then_some(c)
}

/// Implicit equation of `s`.
///
/// Assumes `s` is basepoint free (see [`super::basepoint_check`]). With a
/// linear syzygy and `a,b >= 2` the strand matrix is built from `L, S1,
/// S2`; otherwise from a basis of the full strand.
pub fn implicitize(s: &TPSurface, opts: &ImplicitOptions) -> Result<ImplicitResult> {
    let lin = detect_linear_syzygy(s)?;
    let (a, b) = (s.a(), s.b());
    let normalized = match &lin {
        Some(l) if a >= 2 && b >= 2 => Some(normalize_linear(s, l)?),
        _ => None,
    };
    let (matrix, nu, route, cross_check) = match &normalized {
        Some(n) => {
            let (s1, s2) = special_pair(n)?;
            let m = build_d1_nu(n, &n.linear_syzygy(), &s1, &s2)?;
            let nu = BiDeg::new(2 * n.deg.m - 1, n.deg.n - 1);
            (m, nu, Route::ThreeSyzygy, opts.cross_check)
        }
        None => (build_d1_nu_generic(s)?, BiDeg::new(2 * a - 1, b - 1), Route::FullStrand, false),
    };
    if matrix.rows() != matrix.cols() {
        return Err(Error::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let det_working = determinant(&matrix, opts)?;
    if det_working.is_zero() {
        return Err(Error::SingularStrand);
    }
    let expected = 2 * a * b;
    if det_working.deg() != expected {
        return Err(Error::DegreeAnomaly {
            expected,
            found: det_working.deg(),
        });
    }
    let cross_check = if cross_check {
        let n = normalized.as_ref().expect("three-syzygy route");
        let g = build_d1_nu_generic(&n.surface())?;
        Some(g.rows() == g.cols() && ratio(&determinant(&g, opts)?, &det_working).is_some())
    } else {
        None
    };

    let f_working = det_working.squarefree_part()?;
    if expected % f_working.deg() != 0 {
        return Err(Error::DegreeAnomaly {
            expected,
            found: f_working.deg(),
        });
    }
    let k = expected / f_working.deg();
    let scalar = ratio(&det_working, &f_working.pow(k)).ok_or(Error::NotAPower)?;

    let (det, f, singular_line) = match &normalized {
        Some(n) => {
            let c = &n.basis_change;
            let ell: [XPoly; 4] = std::array::from_fn(|j| XPoly::linear(&std::array::from_fn(|k| c.get(j, k).clone())));
            let det = det_working.compose_linear(&ell);
            let f = f_working.compose_linear(&ell).normalize();
            let line = SingularLine {
                forms: [ell[0].normalize(), ell[1].normalize()],
                det_order: line_multiplicity(&det_working, (0, 1))?,
                f_order: line_multiplicity(&f_working, (0, 1))?,
                bound: 2 * n.deg.m * n.deg.n - 2 * n.deg.m,
            };
            (det, f, Some(line))
        }
        None => (det_working.clone(), f_working, None),
    };
    let scalar = if normalized.is_some() {
        ratio(&det, &f.pow(k)).ok_or(Error::NotAPower)?
    } else {
        scalar
    };
    let composition_verified = opts
        .verify_composition
        .then(|| f.substitute(s.generators()).is_zero());
    Ok(ImplicitResult {
        det,
        f,
        k,
        scalar,
        nu,
        route,
        orientation: lin.map(|l| l.orientation),
        matrix,
        det_working,
        singular_line,
        cross_check,
        composition_verified,
    })
}

/// Order of vanishing of `g` along `V(x_i, x_j)`: the least combined
/// exponent of the two variables over the monomials of `g`.
pub fn line_multiplicity(g: &XPoly, vars: (usize, usize)) -> Result<u32> {
    g.order_along(vars)
}
