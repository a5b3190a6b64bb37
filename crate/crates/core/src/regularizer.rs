//! Regularizers `psi` and the time-indexed smoothing operator
//! `Pi_t(z) = argmin_theta { -z'theta + |theta|^2 / (2 gamma_t) + t psi(theta) }`,
//! which equals `prox_{t gamma_t psi}(gamma_t z)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param::{Parameter, Shape};

/// Value returned by [`Regularizer::value`] outside the domain of an
/// indicator regularizer.
pub const INFEASIBLE: f64 = f64::INFINITY;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regularizer {
    Zero,
    /// `lambda |theta|^2`
    SquaredL2 { lambda: f64 },
    /// `lambda sum_i |theta_i|`
    L1 { lambda: f64 },
    /// 0 on the PSD cone, [`INFEASIBLE`] elsewhere.
    PsdIndicator,
}

impl Regularizer {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regularizer::SquaredL2 { lambda } | Regularizer::L1 { lambda } if !(lambda > 0.0 && lambda.is_finite()) => {
                Err(Error::InvalidParameter(format!("regularization weight must be positive, got {lambda}")))
            }
            _ => Ok(()),
        }
    }

    fn check_shape(&self, shape: Shape) -> Result<()> {
        if matches!(self, Regularizer::PsdIndicator) && !matches!(shape, Shape::SymMatrix(_)) {
            return Err(Error::ShapeMismatch {
                expected: "symmetric_matrix".into(),
                got: shape.to_string(),
            });
        }
        Ok(())
    }

    /// Feasibility tolerance for the PSD cone: `1e-9 (1 + |theta|)`.
    pub fn psd_tolerance(theta: &Parameter) -> f64 {
        1e-9 * (1.0 + theta.norm())
    }

    pub fn value(&self, theta: &Parameter) -> Result<f64> {
        self.check_shape(theta.shape())?;
        Ok(match *self {
            Regularizer::Zero => 0.0,
            Regularizer::SquaredL2 { lambda } => lambda * theta.norm_sq(),
            Regularizer::L1 { lambda } => lambda * theta.l1_norm(),
            Regularizer::PsdIndicator => {
                if theta.min_eigenvalue()? >= -Self::psd_tolerance(theta) {
                    0.0
                } else {
                    INFEASIBLE
                }
            }
        })
    }

    /// `Pi_t(z)` for step `gamma_t` and (possibly fractional) time `t >= 1`.
    pub fn smooth(&self, z: &Parameter, t: f64, gamma_t: f64) -> Result<Parameter> {
        self.check_shape(z.shape())?;
        if !z.is_finite() || !t.is_finite() || !gamma_t.is_finite() {
            return Err(Error::NonFinite);
        }
        if t < 1.0 || gamma_t <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "smoothing operator needs t >= 1 and gamma > 0, got t = {t}, gamma = {gamma_t}"
            )));
        }
        Ok(self.smooth_unchecked(z, t, gamma_t))
    }

    pub(crate) fn smooth_unchecked(&self, z: &Parameter, t: f64, gamma_t: f64) -> Parameter {
        let mut out = z.scaled(gamma_t);
        self.smooth_scaled_in_place(&mut out, t, gamma_t);
        out
    }

    /// Applies `prox_{t gamma psi}` to `v`, which already holds `gamma z`.
    pub(crate) fn smooth_scaled_in_place(&self, v: &mut Parameter, t: f64, gamma_t: f64) {
        match *self {
            Regularizer::Zero => {}
            Regularizer::SquaredL2 { lambda } => v.scale(1.0 / (1.0 + 2.0 * t * gamma_t * lambda)),
            Regularizer::L1 { lambda } => {
                let thr = t * gamma_t * lambda;
                for x in v.as_mut_slice() {
                    *x = x.signum() * (x.abs() - thr).max(0.0);
                }
            }
            Regularizer::PsdIndicator => {
                v.symmetrize();
                v.project_psd();
            }
        }
    }

    /// Objective minimized by `Pi_t`, for optimality checks.
    pub fn smoothing_objective(&self, z: &Parameter, t: f64, gamma_t: f64, theta: &Parameter) -> Result<f64> {
        let psi = self.value(theta)?;
        let psi_term = if psi == 0.0 { 0.0 } else { t * psi };
        Ok(-z.dot(theta) + theta.norm_sq() / (2.0 * gamma_t) + psi_term)
    }
}
