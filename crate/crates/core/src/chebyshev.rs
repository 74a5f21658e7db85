//! Chebyshev polynomials of the second (and first) kind on (-1, 1), plus
//! the generating series H(z,t) = 1/(1 - 2tz + z^2) whose z^m coefficient
//! is U_m(t).

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// An evaluation point restricted to the open interval (-1, 1), where the
/// trigonometric form sin((n+1) arccos t)/sin(arccos t) is defined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChebyshevArg(f64);

impl ChebyshevArg {
    pub fn new(t: f64) -> Result<Self> {
        if !t.is_finite() || t.abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "Chebyshev argument must satisfy |t| < 1, got {t}"
            )));
        }
        Ok(Self(t))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// U_n(t) by the three-term recurrence U_0 = 1, U_1 = 2t,
/// U_n = 2t U_{n-1} - U_{n-2}.
pub fn u_poly(n: u32, t: ChebyshevArg) -> f64 {
    let t = t.get();
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    match n {
        0 => prev,
        1 => cur,
        _ => {
            for _ in 2..=n {
                (prev, cur) = (cur, 2.0 * t * cur - prev);
            }
            cur
        }
    }
}

/// U_n(t) in closed trigonometric form; an independent check on the
/// recurrence.
pub fn u_poly_trig(n: u32, t: ChebyshevArg) -> f64 {
    let theta = t.get().acos();
    ((n + 1) as f64 * theta).sin() / theta.sin()
}

/// T_n(t) through 2 T_n = U_n - U_{n-2} with U_{-1} = 0 and U_{-2} = -1.
pub fn t_poly(n: u32, t: ChebyshevArg) -> f64 {
    match n {
        0 => 1.0,
        1 => t.get(),
        _ => (u_poly(n, t) - u_poly(n - 2, t)) / 2.0,
    }
}

/// First `order + 1` Taylor coefficients of H(z,t) = 1/(1 - 2tz + z^2),
/// computed by series long division. Coefficient m equals U_m(t).
pub fn h_coeffs(t: ChebyshevArg, order: usize) -> PowerSeries {
    let den = [1.0, -2.0 * t.get(), 1.0];
    PowerSeries::from_real(&divide(&[1.0], &den, order))
}

/// Power-series long division num/den through the requested order; den must
/// have a nonzero constant term.
fn divide(num: &[f64], den: &[f64], order: usize) -> Vec<f64> {
    debug_assert!(den[0] != 0.0);
    let mut q = vec![0.0; order + 1];
    for m in 0..=order {
        let mut acc = if m < num.len() { num[m] } else { 0.0 };
        for j in 1..=m.min(den.len() - 1) {
            acc -= den[j] * q[m - j];
        }
        q[m] = acc / den[0];
    }
    q
}
