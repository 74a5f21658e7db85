//! Coefficient data for pairs of Schwarz functions u(z) = p1 z + p2 z^2 + ...
//! and v(w) = q1 w + q2 w^2 + ..., with the structural relation q1 = -p1.
//!
//! Two admissibility modes are supported. `Paper` keeps each coefficient in
//! the closed unit disc. `Schur` uses the sharp second-coefficient region
//! |p2| <= 1 - |p1|^2, the image of the degree-one Schur parameterization.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack applied to every closed admissibility inequality.
pub const ADMISSIBILITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdmissibilityMode {
    Paper,
    Schur,
}

impl AdmissibilityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Paper => "paper",
            Self::Schur => "schur",
        }
    }
}

impl fmt::Display for AdmissibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// First two Schur parameters of a Schwarz function, each in the closed
/// unit disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchurParams {
    gamma0: Complex64,
    gamma1: Complex64,
}

impl SchurParams {
    pub fn new(gamma0: Complex64, gamma1: Complex64) -> Result<Self> {
        for (name, g) in [("gamma0", gamma0), ("gamma1", gamma1)] {
            if !g.re.is_finite() || !g.im.is_finite() || g.norm() > 1.0 + ADMISSIBILITY_TOL {
                return Err(Error::Domain(format!(
                    "{name} must lie in the closed unit disc, got |{name}| = {}",
                    g.norm()
                )));
            }
        }
        Ok(Self { gamma0, gamma1 })
    }

    pub fn gamma0(&self) -> Complex64 {
        self.gamma0
    }

    pub fn gamma1(&self) -> Complex64 {
        self.gamma1
    }
}

/// Leading coefficients of the two Schwarz functions of a class member.
/// q1 is always the exact negation of p1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchwarzPair {
    pub p1: Complex64,
    pub p2: Complex64,
    pub q1: Complex64,
    pub q2: Complex64,
    pub mode: AdmissibilityMode,
}

impl SchwarzPair {
    /// Builds a pair from the forward data, setting q1 = -p1 componentwise.
    pub fn from_forward(
        p1: Complex64,
        p2: Complex64,
        q2: Complex64,
        mode: AdmissibilityMode,
    ) -> Self {
        Self {
            p1,
            p2,
            q1: -p1,
            q2,
            mode,
        }
    }
}

/// First two Taylor coefficients of z -> z w(z) where w is the Schur
/// function with parameters (gamma0, gamma1, 0, 0, ...).
pub fn coeffs_from_schur(s: &SchurParams) -> (Complex64, Complex64) {
    (s.gamma0, (1.0 - s.gamma0.norm_sqr()) * s.gamma1)
}

/// Checks the mode inequalities. Fails with `InconsistentPair` if the pair
/// breaks q1 = -p1 beyond [`ADMISSIBILITY_TOL`].
pub fn admissible(pair: &SchwarzPair) -> Result<bool> {
    let skew = (pair.q1 + pair.p1).norm();
    if skew > ADMISSIBILITY_TOL {
        return Err(Error::InconsistentPair(format!(
            "|q1 + p1| = {skew:.3e} exceeds {ADMISSIBILITY_TOL:e}"
        )));
    }
    let tol = ADMISSIBILITY_TOL;
    let ok = match pair.mode {
        AdmissibilityMode::Paper => {
            pair.p1.norm() <= 1.0 + tol && pair.p2.norm() <= 1.0 + tol && pair.q2.norm() <= 1.0 + tol
        }
        AdmissibilityMode::Schur => {
            pair.p2.norm() <= 1.0 - pair.p1.norm_sqr() + tol
                && pair.q2.norm() <= 1.0 - pair.q1.norm_sqr() + tol
        }
    };
    Ok(ok)
}

/// Largest |u(z)| over the sampling circle |z| = 0.99 for the order-2 Schur
/// lift of (p1, p2) with zero tail parameters:
/// u(z) = z (g0 + g1 z) / (1 + conj(g0) g1 z), g0 = p1, g1 = p2/(1 - |p1|^2).
///
/// For admissible input the lift is a genuine Schwarz function, so the
/// returned value stays below 1.
pub fn verify_bounded(p1: Complex64, p2: Complex64, samples: usize) -> f64 {
    let g0 = p1;
    let margin = 1.0 - p1.norm_sqr();
    let g1 = if margin.abs() > 1e-15 {
        p2 / margin
    } else {
        Complex64::ZERO
    };
    let cross = g0.conj() * g1;
    let n = samples.max(1);
    let mut max = 0.0f64;
    for k in 0..n {
        let z = Complex64::from_polar(0.99, TAU * k as f64 / n as f64);
        let u = z * (g0 + g1 * z) / (Complex64::new(1.0, 0.0) + cross * z);
        max = max.max(u.norm());
    }
    max
}

fn draw_unit_disc(rng: &mut impl Rng) -> Complex64 {
    let modulus: f64 = rng.gen();
    let phase: f64 = TAU * rng.gen::<f64>();
    Complex64::from_polar(modulus, phase)
}

/// Draws (p1, p2) for the given mode: directly in `Paper` mode, through the
/// Schur parameterization in `Schur` mode.
pub(crate) fn draw_forward(rng: &mut impl Rng, mode: AdmissibilityMode) -> (Complex64, Complex64) {
    match mode {
        AdmissibilityMode::Paper => (draw_unit_disc(rng), draw_unit_disc(rng)),
        AdmissibilityMode::Schur => {
            let s = SchurParams {
                gamma0: draw_unit_disc(rng),
                gamma1: draw_unit_disc(rng),
            };
            coeffs_from_schur(&s)
        }
    }
}

/// Deterministic admissible pair for a seed: the draw is a fixed function of
/// `seed` and `mode` alone. Moduli are uniform on [0, 1), phases on [0, tau).
pub fn sample(seed: u64, mode: AdmissibilityMode) -> SchwarzPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p1, p2) = draw_forward(&mut rng, mode);
    let q2 = match mode {
        AdmissibilityMode::Paper => draw_unit_disc(&mut rng),
        AdmissibilityMode::Schur => (1.0 - p1.norm_sqr()) * draw_unit_disc(&mut rng),
    };
    SchwarzPair::from_forward(p1, p2, q2, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sample_is_a_function_of_the_seed() {
        for mode in [AdmissibilityMode::Paper, AdmissibilityMode::Schur] {
            assert_eq!(sample(7, mode), sample(7, mode));
            assert_ne!(sample(7, mode), sample(8, mode));
        }
    }

    #[test]
    fn sampled_pairs_are_admissible() {
        for mode in [AdmissibilityMode::Paper, AdmissibilityMode::Schur] {
            for seed in 0..1000 {
                let pair = sample(seed, mode);
                assert!(admissible(&pair).unwrap(), "seed {seed}, mode {mode}");
            }
        }
    }

    #[test]
    fn sampled_q1_is_bitwise_negation() {
        for seed in 0..100 {
            let pair = sample(seed, AdmissibilityMode::Paper);
            assert_eq!(pair.q1.re.to_bits(), (-pair.p1.re).to_bits());
            assert_eq!(pair.q1.im.to_bits(), (-pair.p1.im).to_bits());
        }
    }

    #[test]
    fn schur_image_inverts_back_into_the_disc() {
        // Every drawn (p1, p2) with |p1| < 1 yields |p2 / (1 - |p1|^2)| <= 1.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let (p1, p2) = draw_forward(&mut rng, AdmissibilityMode::Schur);
            let margin = 1.0 - p1.norm_sqr();
            if margin > 1e-12 {
                assert!((p2 / margin).norm() <= 1.0 + ADMISSIBILITY_TOL);
            }
        }
    }

    #[test]
    fn admissibility_tracks_the_mode() {
        let roomy = SchwarzPair::from_forward(
            c(0.9, 0.0),
            c(0.9, 0.0),
            c(0.5, 0.0),
            AdmissibilityMode::Paper,
        );
        assert!(admissible(&roomy).unwrap());
        let tight = SchwarzPair {
            mode: AdmissibilityMode::Schur,
            ..roomy
        };
        // 0.9 > 1 - 0.81
        assert!(!admissible(&tight).unwrap());
    }

    #[test]
    fn inconsistent_pair_is_an_error() {
        let broken = SchwarzPair {
            p1: c(0.5, 0.0),
            p2: Complex64::ZERO,
            q1: c(0.5, 0.0),
            q2: Complex64::ZERO,
            mode: AdmissibilityMode::Paper,
        };
        assert!(matches!(
            admissible(&broken),
            Err(Error::InconsistentPair(_))
        ));
    }

    #[test]
    fn schur_params_reject_outside_disc() {
        assert!(SchurParams::new(c(1.1, 0.0), Complex64::ZERO).is_err());
        assert!(SchurParams::new(Complex64::ZERO, c(0.8, 0.8)).is_err());
        assert!(SchurParams::new(c(0.6, 0.8), Complex64::ZERO).is_ok());
    }

    #[test]
    fn schur_coefficients_match_the_lift_expansion() {
        let s = SchurParams::new(c(0.5, 0.1), c(-0.3, 0.4)).unwrap();
        let (p1, p2) = coeffs_from_schur(&s);
        assert_eq!(p1, c(0.5, 0.1));
        let expect = (1.0 - 0.26) * c(-0.3, 0.4);
        assert!((p2 - expect).norm() <= 1e-15);
    }

    #[test]
    fn bounded_check_on_the_identity_lift() {
        // p1 = 1, p2 = 0 lifts to u(z) = z, so the circle maximum is 0.99.
        let max = verify_bounded(c(1.0, 0.0), Complex64::ZERO, 64);
        assert!((max - 0.99).abs() <= 1e-12);
        assert_eq!(verify_bounded(Complex64::ZERO, Complex64::ZERO, 64), 0.0);
    }

    #[test]
    fn bounded_check_stays_inside_the_disc() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let (p1, p2) = draw_forward(&mut rng, AdmissibilityMode::Schur);
            let max = verify_bounded(p1, p2, 128);
            assert!(max <= 1.0 + 1e-9, "|u| = {max} for p1 = {p1}, p2 = {p2}");
        }
    }
}
