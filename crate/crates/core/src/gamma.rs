//! Centred Gamma laws and their reflections.
//!
//! A law here is the distribution of `(X − a)/λ` with `X ~ Gamma(a, 1)`,
//! optionally negated. The one-parameter family `Γ̄_ν` is `a = ν/2`,
//! `λ = 1/2`, i.e. `2X − ν`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::quadrature::integrate;
use crate::special::{gamma_p, gamma_q, ln_gamma};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLaw {
    shape: f64,
    rate: f64,
    reflected: bool,
}

impl GammaLaw {
    /// `Γ̄_ν`, supported on `(−ν, ∞)`.
    pub fn centred(nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")));
        }
        Ok(Self { shape: 0.5 * nu, rate: 0.5, reflected: false })
    }

    /// `Γ̂_ν`, the law of `−Y` for `Y ~ Γ̄_ν`.
    pub fn reflected(nu: f64) -> Result<Self> {
        Ok(Self::centred(nu)?.reflect())
    }

    /// Density `λ^a/Γ(a) (x + a/λ)^{a−1} e^{−(λx + a)}` on `x > −a/λ`.
    pub fn two_parametric(a: f64, lambda: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("shape {a} and rate {lambda} must be positive")));
        }
        Ok(Self { shape: a, rate: lambda, reflected: false })
    }

    pub fn reflect(self) -> Self {
        Self { reflected: !self.reflected, ..self }
    }

    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `ν` for members of the one-parameter family.
    pub fn nu(&self) -> Option<f64> {
        (self.rate == 0.5).then_some(2.0 * self.shape)
    }

    fn unreflected_density(&self, x: f64) -> f64 {
        let t = self.rate * x + self.shape;
        if t <= 0.0 {
            return 0.0;
        }
        (self.shape * self.rate.ln() - ln_gamma(self.shape) + (self.shape - 1.0) * (t / self.rate).ln() - t)
            .exp()
    }

    pub fn density(&self, x: f64) -> f64 {
        if self.reflected {
            self.unreflected_density(-x)
        } else {
            self.unreflected_density(x)
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let v = if self.reflected {
            gamma_q(self.shape, self.shape - self.rate * x)
        } else {
            gamma_p(self.shape, self.rate * x + self.shape)
        };
        v.expect("shape is positive")
    }

    /// `(E[Y], E[Y²], E[Y³], E[Y⁴])`. Closed form for the one-parameter family,
    /// quadrature otherwise.
    pub fn moments(&self) -> [f64; 4] {
        match self.nu() {
            Some(nu) => {
                let m3 = if self.reflected { -8.0 * nu } else { 8.0 * nu };
                [0.0, 2.0 * nu, m3, 12.0 * nu * nu + 48.0 * nu]
            }
            None => {
                let mut m = [0.0; 4];
                for (k, slot) in m.iter_mut().enumerate() {
                    *slot = self
                        .expectation(|x| x.powi(k as i32 + 1), 1e-13)
                        .expect("quadrature of a Gamma moment");
                }
                m
            }
        }
    }

    /// `E[φ(Y)]` by adaptive quadrature. The singular endpoint is removed by
    /// integrating `d(t^a)` on `t ∈ [0, 1]`, with `t = λY + a ~ Gamma(a, 1)`.
    pub fn expectation(&self, phi: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
        let a = self.shape;
        let sign = if self.reflected { -1.0 } else { 1.0 };
        let to_y = |t: f64| sign * (t - a) / self.rate;
        let lg = ln_gamma(a);
        let head = integrate(
            |u| {
                if u <= 0.0 {
                    return 0.0;
                }
                let t = u.powf(1.0 / a);
                phi(to_y(t)) * (-t - lg).exp() / a
            },
            0.0,
            1.0,
            tol,
            tol,
        )?;
        let t_max = a + 60.0 + 12.0 * a.sqrt();
        let tail = integrate(
            |t| phi(to_y(t)) * ((a - 1.0) * t.ln() - t - lg).exp(),
            1.0,
            t_max.max(2.0),
            tol,
            tol,
        )?;
        Ok(head + tail)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::InvalidParameter("sample count must be positive".into()));
        }
        let g = Gamma::new(self.shape, 1.0).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let sign = if self.reflected { -1.0 } else { 1.0 };
        Ok((0..count)
            .map(|_| sign * (g.sample(rng) - self.shape) / self.rate)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn density_values() {
        let law = GammaLaw::centred(2.0).unwrap();
        assert!((law.density(0.0) - (-1.0f64).exp() / 2.0).abs() < 1e-15);
        assert_eq!(law.density(-2.0), 0.0);
        assert_eq!(law.density(-3.0), 0.0);
        let r = GammaLaw::reflected(2.0).unwrap();
        assert!((r.density(0.0) - law.density(0.0)).abs() < 1e-16);
        assert_eq!(r.density(2.5), 0.0);
        assert!((r.density(-1.3) - law.density(1.3)).abs() < 1e-16);
    }

    #[test]
    fn closed_form_moments() {
        assert_eq!(GammaLaw::centred(1.0).unwrap().moments(), [0.0, 2.0, 8.0, 60.0]);
        assert_eq!(GammaLaw::reflected(1.0).unwrap().moments(), [0.0, 2.0, -8.0, 60.0]);
        assert_eq!(GammaLaw::centred(2.0).unwrap().moments(), [0.0, 4.0, 16.0, 144.0]);
    }

    #[test]
    fn cdf_values() {
        let law = GammaLaw::centred(2.0).unwrap();
        assert_eq!(law.cdf(-2.0), 0.0);
        assert!((law.cdf(0.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        assert!(law.cdf(1e4) > 1.0 - 1e-15);
        for nu in [0.5, 1.0, 7.0] {
            let law = GammaLaw::centred(nu).unwrap();
            let r = law.reflect();
            for x in [-3.0, -0.2, 0.0, 0.4, 2.0, 9.0] {
                assert!((r.cdf(x) - (1.0 - law.cdf(-x))).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cdf_derivative_is_density() {
        for nu in [1.0, 2.0, 7.0] {
            let law = GammaLaw::centred(nu).unwrap();
            for x in [-nu / 2.0, 0.0, 1.0, 5.0] {
                let h = 1e-5;
                let d = (law.cdf(x + h) - law.cdf(x - h)) / (2.0 * h);
                assert!((d - law.density(x)).abs() < 1e-6, "nu={nu} x={x}");
            }
        }
    }

    #[test]
    fn two_parametric_law() {
        let law = GammaLaw::two_parametric(1.5, 2.0).unwrap();
        assert_eq!(law.nu(), None);
        let m = law.moments();
        // (X − a)/λ with X ~ Gamma(a, 1): variance a/λ², third central a·2/λ³
        assert!(m[0].abs() < 1e-10);
        assert!((m[1] - 1.5 / 4.0).abs() < 1e-10);
        assert!((m[2] - 3.0 / 8.0).abs() < 1e-10);
        let one = GammaLaw::two_parametric(0.5, 0.5).unwrap();
        assert_eq!(one, GammaLaw::centred(1.0).unwrap());
        assert!(GammaLaw::two_parametric(0.0, 1.0).is_err());
    }

    #[test]
    fn sampler_rejects_empty_and_is_centred() {
        let law = GammaLaw::centred(3.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        assert!(law.sample(&mut rng, 0).is_err());
        let s = law.sample(&mut rng, 200_000).unwrap();
        let (m, se) = crate::stats::mean_and_se(&s);
        assert!(m.abs() < 5.0 * se);
        assert!(law.reflect().sample(&mut rng, 1000).unwrap().iter().all(|&y| y < 3.0));
    }

    #[test]
    fn invalid_nu() {
        assert!(GammaLaw::centred(0.0).is_err());
        assert!(GammaLaw::centred(f64::NAN).is_err());
    }
}
