//! Model parameters, metric components and the spatial domain.
//!
//! One member of the family is picked by the dimensionless deformation λ,
//! the frequency ω and the particle mass m (natural units, ħ = c = 1).
//! The line element is
//!
//! ```text
//! ds² = g00 dt² + g11 dx²,
//! g00 =  (1 + (1+λ)ω²x²) / (1 + λω²x²),
//! g11 = -(1 + (1+λ)ω²x²) / (1 + λω²x²)²,
//! ```
//!
//! g11 is kept signed (negative) so downstream formulas can use it verbatim.

use crate::error::{Error, Result};

/// Checked parameters (λ, ω, m) of one model in the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParameters {
    lambda: f64,
    omega: f64,
    mass: f64,
}

/// Metric components at one point. `g11` carries the signature minus sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    pub g00: f64,
    pub g11: f64,
}

/// The open interval (-R, R) accessible to the observer at x = 0.
/// `radius` is `f64::INFINITY` for λ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialDomain {
    radius: f64,
}

impl SpatialDomain {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_bounded(&self) -> bool {
        self.radius.is_finite()
    }

    /// Strict membership test: the horizon itself is excluded.
    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && x.abs() < self.radius
    }

    pub fn bounds(&self) -> (f64, f64) {
        (-self.radius, self.radius)
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite { name, value });
    }
    Ok(value)
}

impl ModelParameters {
    /// Validate raw numeric inputs. ω and m must be strictly positive,
    /// λ any finite real.
    pub fn new(lambda: f64, omega: f64, mass: f64) -> Result<Self> {
        let lambda = check_finite("lambda", lambda)?;
        let omega = check_finite("omega", omega)?;
        let mass = check_finite("mass", mass)?;
        if omega <= 0.0 {
            return Err(Error::NonPositive {
                name: "omega",
                value: omega,
            });
        }
        if mass <= 0.0 {
            return Err(Error::NonPositive {
                name: "mass",
                value: mass,
            });
        }
        Ok(Self {
            lambda,
            omega,
            mass,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Horizon coordinate of the observer at x = 0: +∞ for λ ≥ 0,
    /// 1/(ω√(-λ)) for λ < 0 where the metric develops a singularity.
    pub fn horizon_radius(&self) -> f64 {
        if self.lambda >= 0.0 {
            f64::INFINITY
        } else {
            1.0 / (self.omega * (-self.lambda).sqrt())
        }
    }

    /// The open domain D = (-R, R) of the free motion.
    pub fn spatial_domain(&self) -> SpatialDomain {
        SpatialDomain {
            radius: self.horizon_radius(),
        }
    }

    /// `1 + λω²x²`, the common denominator building block. Positive on D.
    pub(crate) fn denom(&self, x: f64) -> f64 {
        1.0 + self.lambda * self.omega * self.omega * x * x
    }

    /// Metric components at x. Errors if x is on or beyond the horizon.
    pub fn metric_components(&self, x: f64) -> Result<MetricComponents> {
        let domain = self.spatial_domain();
        if !domain.contains(x) {
            return Err(Error::OutsideDomain {
                x,
                radius: domain.radius(),
            });
        }
        let b = self.denom(x);
        // numerator 1 + (1+λ)ω²x² = b + ω²x², exact on the physical domain
        let a = b + self.omega * self.omega * x * x;
        Ok(MetricComponents {
            g00: a / b,
            g11: -a / (b * b),
        })
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// g11·(1+λω²x²) = -g00 and evenness across the family.
        #[test]
        fn metric_identity_and_evenness(
            lambda in -2.0..2.0_f64,
            omega in 0.2..3.0_f64,
            mass in 0.2..3.0_f64,
            frac in -0.99..0.99_f64,
        ) {
            let m = ModelParameters::new(lambda, omega, mass).unwrap();
            let x = frac * m.horizon_radius().min(20.0);
            let g = m.metric_components(x).unwrap();
            let lhs = g.g11 * m.denom(x);
            prop_assert!((lhs + g.g00).abs() <= 1e-14 * g.g00.abs());
            let gm = m.metric_components(-x).unwrap();
            prop_assert_eq!(g.g00, gm.g00);
            prop_assert_eq!(g.g11, gm.g11);
        }
    }
}
