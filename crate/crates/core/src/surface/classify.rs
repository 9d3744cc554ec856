//! Factorization type of a bidegree `(2,1)` form and the intersection count
//! of curves on `P^1 x P^1`.

use num_traits::Zero;
use serde::Serialize;

use crate::bipoly::{q_int, BiDeg, BiPoly, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum P22Class {
    Irreducible,
    /// `(1,1)`-form times `(1,0)`-form.
    OnQ,
    /// Product of three linear forms.
    OnSegre,
}

/// Coordinates `(x0..x5)`: coefficients of `s^2u, stu, t^2u, s^2v, stv, t^2v`.
pub fn p22_coordinates(p: &BiPoly) -> Result<[Q; 6]> {
    let d = BiDeg::new(2, 1);
    if p.deg() != d {
        return Err(Error::DegreeMismatch {
            expected: d.to_string(),
            found: p.deg().to_string(),
        });
    }
    Ok(std::array::from_fn(|k| p.coeff(k as u32 % 3, k as u32 / 3)))
}

/// The quartic cutting out forms with a `(1,0)` factor.
pub fn quartic_q(x: &[Q; 6]) -> Q {
    let m = |idx: &[usize]| idx.iter().fold(Q::from_integer(1.into()), |acc, &i| acc * &x[i]);
    m(&[2, 2, 3, 3]) - m(&[1, 2, 3, 4]) + m(&[0, 2, 4, 4]) + m(&[1, 1, 3, 5]) - q_int(2) * m(&[0, 2, 3, 5])
        - m(&[0, 1, 4, 5])
        + m(&[0, 0, 5, 5])
}

pub fn classify_p22(p: &BiPoly) -> Result<P22Class> {
    let x = p22_coordinates(p)?;
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let minors = [
        &x[0] * &x[4] - &x[1] * &x[3],
        &x[0] * &x[5] - &x[2] * &x[3],
        &x[1] * &x[5] - &x[2] * &x[4],
    ];
    Ok(if minors.iter().all(Zero::is_zero) {
        P22Class::OnSegre
    } else if quartic_q(&x).is_zero() {
        P22Class::OnQ
    } else {
        P22Class::Irreducible
    })
}

/// Number of intersection points of general curves of bidegrees `d1`, `d2`.
pub fn intersection_number(d1: BiDeg, d2: BiDeg) -> u32 {
    d1.m * d2.n + d1.n * d2.m
}
