//! Closed-form density evaluation: d-variate Student t (spherical and with an
//! SPD scale matrix), the inverse-Gamma mixing density, the Gaussian heat
//! kernel, and convex mixtures of half-integer Student densities.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use thiserror::Error;

use crate::exactpoly::{rational_to_f64, BesselMixture};
use crate::specfun;

#[derive(Debug, Error, PartialEq)]
pub enum DensityError {
    #[error("point has dimension {got}, parameters expect {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("tail order must be positive and finite, got {0}")]
    BadOrder(f64),
    #[error("scale matrix must be square and symmetric")]
    NotSymmetric,
    #[error("scale matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("time argument must be positive and finite, got {0}")]
    BadTime(f64),
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("mixture weights must be nonnegative and sum to 1")]
    NotConvex,
}

/// Parameters of the d-variate Student t density
/// A(d, nu) |K|^{-1/2} (1 + x' K^{-1} x)^{-(nu + d/2)}.
///
/// The tail order nu is half the classical degrees of freedom. Spherical mode
/// (K = identity) skips the factorization entirely.
#[derive(Debug, Clone)]
pub struct StudentParams {
    nu: f64,
    d: usize,
    chol: Option<Cholesky<f64, Dyn>>,
    norm: f64,
    ln_norm: f64,
}

impl StudentParams {
    pub fn spherical(nu: f64, d: usize) -> Result<Self, DensityError> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(DensityError::BadOrder(nu));
        }
        if d == 0 {
            return Err(DensityError::ZeroDimension);
        }
        let norm = specfun::student_norm_const(nu, d as u32);
        Ok(StudentParams {
            nu,
            d,
            chol: None,
            norm,
            ln_norm: norm.ln(),
        })
    }

    /// Full covariance-like mode. `scale` must be symmetric positive definite;
    /// the check is a Cholesky factorization plus an explicit symmetry test,
    /// since the factorization alone only reads the lower triangle.
    pub fn correlated(nu: f64, scale: &DMatrix<f64>) -> Result<Self, DensityError> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(DensityError::BadOrder(nu));
        }
        let d = scale.nrows();
        if d == 0 {
            return Err(DensityError::ZeroDimension);
        }
        if scale.ncols() != d {
            return Err(DensityError::NotSymmetric);
        }
        let scale_max = scale.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        for i in 0..d {
            for j in 0..i {
                if (scale[(i, j)] - scale[(j, i)]).abs() > 1e-12 * scale_max {
                    return Err(DensityError::NotSymmetric);
                }
            }
        }
        let chol = Cholesky::new(scale.clone()).ok_or(DensityError::NotPositiveDefinite)?;
        let ln_det: f64 = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let a = specfun::student_norm_const(nu, d as u32);
        let ln_norm = a.ln() - 0.5 * ln_det;
        Ok(StudentParams {
            nu,
            d,
            chol: Some(chol),
            norm: ln_norm.exp(),
            ln_norm,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_spherical(&self) -> bool {
        self.chol.is_none()
    }

    /// Cholesky factor L of the scale matrix (identity when spherical).
    pub fn scale_factor(&self) -> DMatrix<f64> {
        match &self.chol {
            Some(c) => c.l(),
            None => DMatrix::identity(self.d, self.d),
        }
    }

    // ln |K|; zero when spherical
    pub(crate) fn ln_det(&self) -> f64 {
        match &self.chol {
            Some(c) => 2.0 * c.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>(),
            None => 0.0,
        }
    }

    // x' K^{-1} x, via the factorization solve when a scale matrix is set.
    pub(crate) fn quad_form(&self, x: &[f64]) -> Result<f64, DensityError> {
        if x.len() != self.d {
            return Err(DensityError::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        let v = DVector::from_column_slice(x);
        Ok(match &self.chol {
            Some(chol) => v.dot(&chol.solve(&v)),
            None => v.dot(&v),
        })
    }

    pub fn pdf(&self, x: &[f64]) -> Result<f64, DensityError> {
        let q = self.quad_form(x)?;
        Ok(self.norm * (1.0 + q).powf(-(self.nu + 0.5 * self.d as f64)))
    }

    pub fn ln_pdf(&self, x: &[f64]) -> Result<f64, DensityError> {
        let q = self.quad_form(x)?;
        Ok(self.ln_norm - (self.nu + 0.5 * self.d as f64) * q.ln_1p())
    }
}

pub fn student_pdf(p: &StudentParams, x: &[f64]) -> Result<f64, DensityError> {
    p.pdf(x)
}

/// Parameters of the mixing law: the distribution of 1/(4G) for G
/// Gamma-distributed with shape nu, density C(nu) e^{-1/4t} t^{-nu-1}.
#[derive(Debug, Clone, Copy)]
pub struct SubordinatorParams {
    nu: f64,
    cnorm: f64,
    ln_cnorm: f64,
}

impl SubordinatorParams {
    pub fn new(nu: f64) -> Result<Self, DensityError> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(DensityError::BadOrder(nu));
        }
        let cnorm = specfun::inv_gamma_const(nu);
        Ok(SubordinatorParams {
            nu,
            cnorm,
            ln_cnorm: cnorm.ln(),
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Normalizing constant 1/(4^nu Gamma(nu)).
    pub fn norm_const(&self) -> f64 {
        self.cnorm
    }

    /// Argmax of the density, 1/(4(nu+1)).
    pub fn mode(&self) -> f64 {
        0.25 / (self.nu + 1.0)
    }

    pub fn pdf(&self, t: f64) -> Result<f64, DensityError> {
        self.ln_pdf(t).map(f64::exp)
    }

    pub fn ln_pdf(&self, t: f64) -> Result<f64, DensityError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(DensityError::BadTime(t));
        }
        Ok(self.ln_cnorm - 0.25 / t - (self.nu + 1.0) * t.ln())
    }
}

pub fn inv_gamma_pdf(p: &SubordinatorParams, t: f64) -> Result<f64, DensityError> {
    p.pdf(t)
}

/// Heat kernel (4 pi t)^{-d/2} exp(-|x|^2 / 4t); the time scaling matches the
/// subordination convention, so variance is 2t per coordinate.
pub fn gaussian_semigroup_pdf(t: f64, x: &[f64]) -> Result<f64, DensityError> {
    ln_gaussian_semigroup_pdf(t, x).map(f64::exp)
}

pub fn ln_gaussian_semigroup_pdf(t: f64, x: &[f64]) -> Result<f64, DensityError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(DensityError::BadTime(t));
    }
    if x.is_empty() {
        return Err(DensityError::ZeroDimension);
    }
    let d = x.len() as f64;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    Ok(-0.5 * d * (4.0 * std::f64::consts::PI * t).ln() - r2 / (4.0 * t))
}

// One mixture component: weight * A(d, j + 1/2) (1 + |x/s|^2)^{-(j + 1/2 + d/2)}.
#[derive(Debug, Clone, Copy)]
struct Component {
    weight: f64,
    ln_weight: f64,
    norm: f64,
    ln_norm: f64,
    exponent: f64,
}

/// Convex combination of spherical Student densities with half-integer tail
/// orders j + 1/2, all evaluated at x/scale and renormalized by scale^{-d}.
#[derive(Debug, Clone)]
pub struct MixtureDensity {
    mixture: BesselMixture,
    scale: f64,
    d: usize,
    components: Vec<Component>,
    ln_scale: f64,
}

impl MixtureDensity {
    pub fn new(mixture: BesselMixture, scale: f64, d: usize) -> Result<Self, DensityError> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(DensityError::BadScale(scale));
        }
        if d == 0 {
            return Err(DensityError::ZeroDimension);
        }
        if !mixture.is_convex() {
            return Err(DensityError::NotConvex);
        }
        let components = mixture
            .weights()
            .iter()
            .map(|(&j, w)| {
                let weight = rational_to_f64(w);
                let nu = j as f64 + 0.5;
                let norm = specfun::student_norm_const(nu, d as u32);
                Component {
                    weight,
                    ln_weight: weight.ln(),
                    norm,
                    ln_norm: norm.ln(),
                    exponent: nu + 0.5 * d as f64,
                }
            })
            .collect();
        Ok(MixtureDensity {
            mixture,
            scale,
            d,
            components,
            ln_scale: scale.ln(),
        })
    }

    pub fn mixture(&self) -> &BesselMixture {
        &self.mixture
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn pdf(&self, x: &[f64]) -> Result<f64, DensityError> {
        let q = self.scaled_radius_sq(x)?;
        let sum: f64 = self
            .components
            .iter()
            .map(|c| c.weight * c.norm * (1.0 + q).powf(-c.exponent))
            .sum();
        Ok(sum * self.scale.powi(-(self.d as i32)))
    }

    pub fn ln_pdf(&self, x: &[f64]) -> Result<f64, DensityError> {
        let lq = self.ln1p_scaled_radius_sq(x)?;
        // log-sum-exp over components keeps far-tail values representable
        let terms: Vec<f64> = self
            .components
            .iter()
            .map(|c| c.ln_weight + c.ln_norm - c.exponent * lq)
            .collect();
        let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = terms.iter().map(|t| (t - m).exp()).sum();
        Ok(m + s.ln() - self.d as f64 * self.ln_scale)
    }

    fn scaled_radius_sq(&self, x: &[f64]) -> Result<f64, DensityError> {
        if x.len() != self.d {
            return Err(DensityError::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        Ok(x.iter().map(|v| (v / self.scale) * (v / self.scale)).sum())
    }

    // ln(1 + |x/scale|^2) without overflowing the square for |x| ~ 1e154+
    fn ln1p_scaled_radius_sq(&self, x: &[f64]) -> Result<f64, DensityError> {
        if x.len() != self.d {
            return Err(DensityError::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        let m = x.iter().fold(0.0f64, |a, v| a.max((v / self.scale).abs()));
        if m < 1e150 {
            let q: f64 = x.iter().map(|v| (v / self.scale) * (v / self.scale)).sum();
            return Ok(q.ln_1p());
        }
        let w: f64 = x
            .iter()
            .map(|v| {
                let z = (v / self.scale) / m;
                z * z
            })
            .sum();
        Ok(2.0 * m.ln() + w.ln())
    }
}

pub fn mixture_pdf(m: &MixtureDensity, x: &[f64]) -> Result<f64, DensityError> {
    m.pdf(x)
}
