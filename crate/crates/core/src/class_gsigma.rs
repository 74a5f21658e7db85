//! The class G_Sigma(delta, t, m): normalized bi-univalent functions whose
//! weighted operator combination ((1-delta) D^m f + delta D^{m+1} f)/z is
//! subordinate to H(z,t) on both the forward and the inverse side.
//!
//! The subordination pins down the constraint system used everywhere else:
//!
//! ```text
//! L2 a2 = U1 p1              L3 a3 = U1 p2 + U2 p1^2
//! L2 (-a2) = U1 q1           L3 (2 a2^2 - a3) = U1 q2 + U2 q1^2
//! ```
//!
//! with the weights L_k = (1-delta) k^m + delta k^{m+1}.

use num_complex::Complex64;
use serde::Serialize;

use crate::chebyshev::{h_coeffs, u_poly, ChebyshevArg};
use crate::error::{Error, Result};
use crate::schwarz::{AdmissibilityMode, SchwarzPair};
use crate::series::PowerSeries;

/// Validated parameter triple: delta >= 1, 1/2 < t < 1, m >= 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassParams {
    delta: f64,
    t: f64,
    m: u32,
}

impl ClassParams {
    pub fn new(delta: f64, t: f64, m: u32) -> Result<Self> {
        if !delta.is_finite() || delta < 1.0 {
            return Err(Error::Domain(format!("delta must be >= 1, got {delta}")));
        }
        if !t.is_finite() || t <= 0.5 || t >= 1.0 {
            return Err(Error::Domain(format!(
                "t must lie in the open interval (1/2, 1), got {t}"
            )));
        }
        Ok(Self { delta, t, m })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t_arg(&self) -> ChebyshevArg {
        ChebyshevArg::new(self.t).expect("(1/2, 1) is inside the Chebyshev domain")
    }

    /// Weight of the k-th coefficient, evaluated as k^m (1 + delta (k-1)):
    /// algebraically equal to (1-delta) k^m + delta k^{m+1} but free of the
    /// cancellation the two-term form suffers for delta well above 1.
    pub fn weight(&self, k: u32) -> f64 {
        (k as f64).powi(self.m as i32) * (1.0 + self.delta * (k as f64 - 1.0))
    }
}

/// The quantities the constraint system actually consumes, cached once per
/// parameter point.
#[derive(Clone, Copy, Debug)]
pub struct ClassContext {
    pub u1: f64,
    pub u2: f64,
    pub l2: f64,
    pub l3: f64,
}

impl ClassContext {
    pub fn new(params: &ClassParams) -> Self {
        let t = params.t_arg();
        Self {
            u1: u_poly(1, t),
            u2: u_poly(2, t),
            l2: params.weight(2),
            l3: params.weight(3),
        }
    }

    pub fn a2(&self, p1: Complex64) -> Complex64 {
        self.u1 * p1 / self.l2
    }

    pub fn a3(&self, p1: Complex64, p2: Complex64) -> Complex64 {
        (self.u1 * p2 + self.u2 * p1 * p1) / self.l3
    }

    /// The unique q2 that closes the constraint system for given (p1, p2):
    /// q2 = [L3 (2 a2^2 - a3) - U2 q1^2] / U1 with q1 = -p1.
    pub fn induced_q2(&self, p1: Complex64, p2: Complex64) -> Complex64 {
        let a2 = self.a2(p1);
        let a3 = self.a3(p1, p2);
        let q1_sq = p1 * p1;
        (self.l3 * (2.0 * a2 * a2 - a3) - self.u2 * q1_sq) / self.u1
    }
}

/// Second and third Taylor coefficients of a class member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemberCoeffs {
    pub a2: Complex64,
    pub a3: Complex64,
}

/// Coefficients forced by the forward Schwarz data of `pair`.
pub fn coeffs_from_schwarz(pair: &SchwarzPair, params: &ClassParams) -> MemberCoeffs {
    let ctx = ClassContext::new(params);
    MemberCoeffs {
        a2: ctx.a2(pair.p1),
        a3: ctx.a3(pair.p1, pair.p2),
    }
}

/// See [`ClassContext::induced_q2`].
pub fn induced_q2(p1: Complex64, p2: Complex64, params: &ClassParams) -> Complex64 {
    ClassContext::new(params).induced_q2(p1, p2)
}

/// Pair whose inverse-side second coefficient is the induced one, so every
/// constraint identity holds by construction.
pub fn induced_pair(
    p1: Complex64,
    p2: Complex64,
    params: &ClassParams,
    mode: AdmissibilityMode,
) -> SchwarzPair {
    SchwarzPair::from_forward(p1, p2, induced_q2(p1, p2, params), mode)
}

/// The member series z + a2 z^2 + a3 z^3.
pub fn member_series(coeffs: &MemberCoeffs) -> PowerSeries {
    PowerSeries::new(vec![
        Complex64::ZERO,
        Complex64::new(1.0, 0.0),
        coeffs.a2,
        coeffs.a3,
    ])
}

/// Taylor coefficients of ((1-delta) D^m f + delta D^{m+1} f)/z through the
/// requested order (capped by what `f` can supply). The constant term is 1
/// for any normalized `f`.
pub fn lhs_series(f: &PowerSeries, params: &ClassParams, order: usize) -> Result<PowerSeries> {
    let dm = f.salagean(params.m())?;
    let dm1 = f.salagean(params.m() + 1)?;
    let combined = &dm.scale(1.0 - params.delta()) + &dm1.scale(params.delta());
    let out_order = order.min(f.order().saturating_sub(1));
    Ok(PowerSeries::new(
        (1..=out_order + 1).map(|k| combined.coeff(k)).collect(),
    ))
}

/// Largest coefficient gap, through order 2, between the operator side and
/// the subordination side, taken over both the member built from `pair` and
/// its reversion. Pairs whose q2 is the induced one satisfy both matchings
/// to rounding error; any other q2 shows up here at first order.
pub fn membership_residual(pair: &SchwarzPair, params: &ClassParams) -> Result<f64> {
    let f = member_series(&coeffs_from_schwarz(pair, params));
    let h = h_coeffs(params.t_arg(), 2);

    let u = PowerSeries::new(vec![Complex64::ZERO, pair.p1, pair.p2]);
    let forward = lhs_series(&f, params, 2)?.distance(&h.compose(&u)?);

    let g = f.reverse()?;
    let v = PowerSeries::new(vec![Complex64::ZERO, pair.q1, pair.q2]);
    let inverse = lhs_series(&g, params, 2)?.distance(&h.compose(&v)?);

    Ok(forward.max(inverse))
}
