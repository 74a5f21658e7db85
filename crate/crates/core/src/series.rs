//! Truncated power series over complex double-precision coefficients.
//!
//! A series of order `n` stores the coefficients of z^0..z^n and nothing
//! else. Binary operations truncate to the shorter operand; no coefficient
//! beyond the stored order is ever fabricated.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for coefficient equality checks.
pub const COEFF_TOL: f64 = 1e-12;
/// The inner series of a composition must vanish at the origin to within this.
pub const COMPOSE_CONST_TOL: f64 = 1e-14;
/// Reversion stops once an iteration moves no coefficient by more than this.
pub const REVERSION_STABILITY_TOL: f64 = 1e-14;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from the coefficients c_0..=c_n.
    ///
    /// Panics on an empty list: a series stores at least the constant term.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores at least c_0");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::ZERO; order + 1],
        }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series z, truncated at `order` (which must be at least 1).
    pub fn identity(order: usize) -> Self {
        assert!(order >= 1, "the identity series needs order >= 1");
        let mut s = Self::zero(order);
        s.coeffs[1] = ONE;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of z^k. Panics beyond the stored order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Drops all coefficients above `order`. Panics if `order` exceeds the
    /// stored order: truncation never extends a series.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncation cannot extend a series");
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Cauchy product, truncated to the shorter operand.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut out = vec![Complex64::ZERO; n + 1];
        for i in 0..=n {
            let a = self.coeffs[i];
            if a == Complex64::ZERO {
                continue;
            }
            for j in 0..=n - i {
                out[i + j] += a * rhs.coeffs[j];
            }
        }
        Self { coeffs: out }
    }

    /// Substitutes `inner` into `self`. The result order is the shorter of
    /// the two operand orders.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let c0 = inner.coeff(0).norm();
        if c0 > COMPOSE_CONST_TOL {
            return Err(Error::NonzeroConstantTerm(c0));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeff(n), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeff(k);
        }
        Ok(acc)
    }

    /// Compositional inverse of a normalized series (c0 = 0, c1 = 1).
    ///
    /// Uses the fixed-point iteration g <- w - h(g) where h is the
    /// order >= 2 part of `self`; each pass fixes one more coefficient, and
    /// the loop stops as soon as no coefficient moves by more than
    /// [`REVERSION_STABILITY_TOL`].
    pub fn reverse(&self) -> Result<Self> {
        self.require_normalized("reverse")?;
        let n = self.order();
        let mut tail = self.clone();
        tail.coeffs[0] = Complex64::ZERO;
        tail.coeffs[1] = Complex64::ZERO;
        let id = Self::identity(n);
        let mut g = id.clone();
        for _ in 0..=n {
            let next = &id - &tail.compose(&g)?;
            let moved = g.distance(&next);
            g = next;
            if moved <= REVERSION_STABILITY_TOL {
                break;
            }
        }
        Ok(g)
    }

    /// Degree-weighting operator of order `m`: coefficient k picks up k^m.
    /// Order 0 is the identity, exactly.
    pub fn salagean(&self, m: u32) -> Result<Self> {
        self.require_normalized("salagean")?;
        if m == 0 {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (k as f64).powi(m as i32))
            .collect();
        Ok(Self::new(coeffs))
    }

    /// Horner evaluation. Meaningful for |z| <= 1, where truncation error is
    /// controlled by the dropped tail.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Largest coefficient gap over the shared range of orders.
    pub fn distance(&self, other: &Self) -> f64 {
        let n = self.order().min(other.order());
        (0..=n)
            .map(|k| (self.coeffs[k] - other.coeffs[k]).norm())
            .fold(0.0, f64::max)
    }

    fn require_normalized(&self, op: &str) -> Result<()> {
        if self.order() < 1
            || self.coeffs[0].norm() > COEFF_TOL
            || (self.coeffs[1] - ONE).norm() > COEFF_TOL
        {
            return Err(Error::NotNormalized(format!(
                "{op} expects z + a2 z^2 + ... (c0 = 0, c1 = 1)"
            )));
        }
        Ok(())
    }
}

impl std::ops::Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: Self) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries::new((0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect())
    }
}

impl std::ops::Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: Self) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries::new((0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Reciprocal of a series with nonzero constant term, by long division.
    fn reciprocal(den: &[Complex64], order: usize) -> PowerSeries {
        let mut q = vec![Complex64::ZERO; order + 1];
        q[0] = 1.0 / den[0];
        for m in 1..=order {
            let mut s = Complex64::ZERO;
            for j in 1..=m.min(den.len() - 1) {
                s += den[j] * q[m - j];
            }
            q[m] = -s / den[0];
        }
        PowerSeries::new(q)
    }

    /// Lagrange inversion: b_k = [z^{k-1}] (z/f(z))^k / k. Independent of the
    /// fixed-point path used by `reverse`.
    fn lagrange_inverse(f: &PowerSeries) -> PowerSeries {
        let n = f.order();
        let den: Vec<Complex64> = (1..=n).map(|k| f.coeff(k)).collect();
        let recip = reciprocal(&den, n - 1);
        let mut out = vec![Complex64::ZERO; n + 1];
        let mut power = PowerSeries::constant(ONE, n - 1);
        for k in 1..=n {
            power = power.mul(&recip);
            if k - 1 <= power.order() {
                out[k] = power.coeff(k - 1) / k as f64;
            }
        }
        PowerSeries::new(out)
    }

    fn random_normalized(rng: &mut ChaCha8Rng, order: usize, radius: f64) -> PowerSeries {
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        coeffs[1] = ONE;
        for c in coeffs.iter_mut().skip(2) {
            let modulus = radius * rng.gen::<f64>();
            let phase = std::f64::consts::TAU * rng.gen::<f64>();
            *c = Complex64::from_polar(modulus, phase);
        }
        PowerSeries::new(coeffs)
    }

    #[test]
    fn mul_matches_binomial_square() {
        let f = PowerSeries::from_real(&[1.0, 1.0, 0.0]);
        let sq = f.mul(&f);
        assert_eq!(sq.coeffs(), &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn mul_truncates_to_shorter_operand() {
        let f = PowerSeries::from_real(&[1.0, 1.0, 1.0]);
        let g = PowerSeries::from_real(&[1.0, 2.0]);
        let prod = f.mul(&g);
        assert_eq!(prod.order(), 1);
        assert_eq!(prod.coeffs(), &[c(1.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn compose_scales_generating_series() {
        // 1/(1 - 1.5 z - z^2) composed with 0.5 z, through order 2.
        let h = PowerSeries::from_real(&[1.0, 1.5, 1.25]);
        let inner = PowerSeries::from_real(&[0.0, 0.5, 0.0]);
        let composed = h.compose(&inner).unwrap();
        let expect = [1.0, 0.75, 0.3125];
        for (k, &e) in expect.iter().enumerate() {
            assert!((composed.coeff(k) - c(e, 0.0)).norm() <= COEFF_TOL);
        }
    }

    #[test]
    fn compose_rejects_nonzero_constant_term() {
        let f = PowerSeries::from_real(&[1.0, 1.0]);
        let inner = PowerSeries::from_real(&[0.5, 1.0]);
        assert!(matches!(
            f.compose(&inner),
            Err(Error::NonzeroConstantTerm(_))
        ));
    }

    #[test]
    fn eval_horner_frozen_value() {
        let f = PowerSeries::from_real(&[1.0, 1.5, 1.25]);
        let v = f.eval(c(0.1, 0.0));
        assert!((v - c(1.1625, 0.0)).norm() <= COEFF_TOL);
    }

    #[test]
    fn reverse_frozen_cubic_example() {
        let f = PowerSeries::from_real(&[0.0, 1.0, 0.1, 0.05, 0.01]);
        let g = f.reverse().unwrap();
        let expect = [0.0, 1.0, -0.1, -0.03, 0.01];
        for (k, &e) in expect.iter().enumerate() {
            assert!(
                (g.coeff(k) - c(e, 0.0)).norm() <= COEFF_TOL,
                "coefficient {k}: {} vs {e}",
                g.coeff(k)
            );
        }
    }

    #[test]
    fn reverse_round_trips_through_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let f = random_normalized(&mut rng, 8, 0.1);
            let g = f.reverse().unwrap();
            let id = PowerSeries::identity(8);
            assert!(f.compose(&g).unwrap().distance(&id) <= 1e-10);
            assert!(g.compose(&f).unwrap().distance(&id) <= 1e-10);
        }
    }

    #[test]
    fn reverse_matches_lagrange_inversion() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let f = random_normalized(&mut rng, 8, 0.1);
            let fixed_point = f.reverse().unwrap();
            let oracle = lagrange_inverse(&f);
            assert!(fixed_point.distance(&oracle) <= 1e-10);
        }
    }

    #[test]
    fn reverse_low_order_coefficient_patterns() {
        // Real a2, a3, a4 in [-0.2, 0.2]: the inverse starts
        // w - a2 w^2 + (2 a2^2 - a3) w^3 - (5 a2^3 - 5 a2 a3 + a4) w^4.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let a2 = 0.4 * rng.gen::<f64>() - 0.2;
            let a3 = 0.4 * rng.gen::<f64>() - 0.2;
            let a4 = 0.4 * rng.gen::<f64>() - 0.2;
            let f = PowerSeries::from_real(&[0.0, 1.0, a2, a3, a4]);
            let g = f.reverse().unwrap();
            assert!((g.coeff(2) - c(-a2, 0.0)).norm() <= COEFF_TOL);
            assert!((g.coeff(3) - c(2.0 * a2 * a2 - a3, 0.0)).norm() <= COEFF_TOL);
            let b4 = -(5.0 * a2.powi(3) - 5.0 * a2 * a3 + a4);
            assert!((g.coeff(4) - c(b4, 0.0)).norm() <= COEFF_TOL);
        }
    }

    #[test]
    fn reverse_rejects_unnormalized_input() {
        let shifted = PowerSeries::from_real(&[0.1, 1.0, 0.2]);
        assert!(matches!(shifted.reverse(), Err(Error::NotNormalized(_))));
        let scaled = PowerSeries::from_real(&[0.0, 2.0, 0.2]);
        assert!(matches!(scaled.reverse(), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn salagean_order_zero_is_identity() {
        let f = PowerSeries::from_real(&[0.0, 1.0, 0.1, 0.05]);
        assert_eq!(f.salagean(0).unwrap(), f);
    }

    #[test]
    fn salagean_weights_each_degree() {
        let f = PowerSeries::from_real(&[0.0, 1.0, 0.1, 0.05]);
        let d1 = f.salagean(1).unwrap();
        let expect = [0.0, 1.0, 0.2, 0.15];
        for (k, &e) in expect.iter().enumerate() {
            assert!((d1.coeff(k) - c(e, 0.0)).norm() <= COEFF_TOL);
        }
    }

    #[test]
    fn salagean_composes_across_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for m in 2u32..=5 {
            let f = random_normalized(&mut rng, 16, 1.0);
            let direct = f.salagean(m).unwrap();
            let staged = f.salagean(1).unwrap().salagean(m - 1).unwrap();
            for k in 0..=16 {
                let (a, b) = (direct.coeff(k), staged.coeff(k));
                let scale = 1.0f64.max(a.norm());
                assert!((a - b).norm() <= COEFF_TOL * scale);
            }
        }
    }

    proptest! {
        #[test]
        fn mul_is_commutative(
            a in proptest::collection::vec(-1.0f64..1.0, 1..12),
            b in proptest::collection::vec(-1.0f64..1.0, 1..12),
        ) {
            let f = PowerSeries::from_real(&a);
            let g = PowerSeries::from_real(&b);
            prop_assert!(f.mul(&g).distance(&g.mul(&f)) <= COEFF_TOL);
        }

        #[test]
        fn mul_is_associative(
            a in proptest::collection::vec(-1.0f64..1.0, 1..10),
            b in proptest::collection::vec(-1.0f64..1.0, 1..10),
            c in proptest::collection::vec(-1.0f64..1.0, 1..10),
        ) {
            let f = PowerSeries::from_real(&a);
            let g = PowerSeries::from_real(&b);
            let h = PowerSeries::from_real(&c);
            let left = f.mul(&g).mul(&h);
            let right = f.mul(&g.mul(&h));
            prop_assert!(left.distance(&right) <= COEFF_TOL);
        }
    }
}
