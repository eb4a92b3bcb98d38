//! Fringe visibility under Gaussian phase noise, and the visibility-versus-
//! diffraction-order fit.
//!
//! A Gaussian phase noise of variance <Phi^2> multiplies the fringe
//! visibility by exp(-<Phi^2>/2). Because inertial phase noise scales
//! linearly with the diffraction order p, the visibility falls as a
//! Gaussian in p:
//!
//!   V(p) = V_max exp(-p^2 <Phi_1^2> / 2)
//!
//! which is linear in (p^2, ln V) space; the fit is a weighted linear
//! regression there. With per-point uncertainties sigma_V the weights are
//! (V/sigma_V)^2, the error propagation of ln V.

use crate::error::{Error, Result};

/// One measured visibility at diffraction order p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityPoint {
    pub order: u32,
    pub visibility: f64,
    /// Optional 1-sigma uncertainty on the visibility.
    pub sigma: Option<f64>,
}

impl VisibilityPoint {
    pub fn new(order: u32, visibility: f64, sigma: Option<f64>) -> Result<Self> {
        if order < 1 {
            return Err(Error::invalid("visibility.order", "must be >= 1"));
        }
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::invalid(
                "visibility.value",
                format!("{visibility} outside [0, 1]"),
            ));
        }
        if let Some(s) = sigma {
            if s.is_nan() || s < 0.0 {
                return Err(Error::invalid("visibility.sigma", "must be >= 0"));
            }
        }
        Ok(Self {
            order,
            visibility,
            sigma,
        })
    }
}

/// Result of the Gaussian visibility fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityFit {
    /// Zero-noise visibility, clamped into (0, 1].
    pub v_max: f64,
    /// Single-order phase variance <Phi_1^2> (rad^2).
    pub phi1_sq: f64,
    /// 2x2 covariance of (v_max, phi1_sq), propagated from the linear fit.
    pub covariance: [[f64; 2]; 2],
    /// True when the unconstrained fit exceeded V_max = 1 and was clamped.
    pub clamped: bool,
}

impl VisibilityFit {
    pub fn new(v_max: f64, phi1_sq: f64) -> Result<Self> {
        if !(v_max > 0.0 && v_max <= 1.0) {
            return Err(Error::invalid("fit.v_max", "must be in (0, 1]"));
        }
        if phi1_sq.is_nan() || phi1_sq < 0.0 {
            return Err(Error::invalid("fit.phi1_sq", "must be >= 0"));
        }
        Ok(Self {
            v_max,
            phi1_sq,
            covariance: [[0.0; 2]; 2],
            clamped: false,
        })
    }

    pub fn sigma_v_max(&self) -> f64 {
        self.covariance[0][0].max(0.0).sqrt()
    }

    pub fn sigma_phi1_sq(&self) -> f64 {
        self.covariance[1][1].max(0.0).sqrt()
    }
}

/// V = v_max exp(-phi_sq / 2) for a total phase variance `phi_sq`.
pub fn visibility_from_variance(v_max: f64, phi_sq: f64) -> f64 {
    assert!((0.0..=1.0).contains(&v_max) && phi_sq >= 0.0);
    v_max * (-phi_sq / 2.0).exp()
}

/// The fitted curve evaluated at each requested order.
pub fn visibility_curve(fit: &VisibilityFit, orders: &[u32]) -> Vec<f64> {
    orders
        .iter()
        .map(|&p| {
            let p = p as f64;
            visibility_from_variance(fit.v_max, p * p * fit.phi1_sq)
        })
        .collect()
}

/// Weighted least squares of ln V against p^2.
///
/// Needs at least two points at distinct orders, all with V > 0 (points on
/// the noise floor carry no usable ln V and are rejected, reported by
/// index). A fitted V_max above 1 is clamped to 1 with `clamped` set.
pub fn fit_visibility(points: &[VisibilityPoint]) -> Result<VisibilityFit> {
    if points.len() < 2 {
        return Err(Error::VisibilityFit {
            reason: format!("need at least 2 points, got {}", points.len()),
        });
    }
    let bad: Vec<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.visibility <= 0.0)
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() {
        return Err(Error::VisibilityFit {
            reason: format!("non-positive visibility at point indices {bad:?}"),
        });
    }
    let first = points[0].order;
    if points.iter().all(|p| p.order == first) {
        return Err(Error::VisibilityFit {
            reason: format!("all points share order p = {first}"),
        });
    }

    let have_sigmas = points.iter().any(|p| p.sigma.is_some());
    // design: ln V = c0 + c1 x with x = p^2; weights 1/sigma_lnV^2
    let rows: Vec<(f64, f64, f64)> = points
        .iter()
        .map(|p| {
            let x = (p.order as f64).powi(2);
            let y = p.visibility.ln();
            let w = match (have_sigmas, p.sigma) {
                (true, Some(s)) if s > 0.0 => (p.visibility / s).powi(2),
                (true, _) => {
                    // a quoted-zero or missing uncertainty among weighted
                    // points would dominate the fit; treat as unit weight
                    1.0
                }
                (false, _) => 1.0,
            };
            (x, y, w)
        })
        .collect();

    let sw: f64 = rows.iter().map(|r| r.2).sum();
    let sx: f64 = rows.iter().map(|r| r.2 * r.0).sum();
    let sy: f64 = rows.iter().map(|r| r.2 * r.1).sum();
    let sxx: f64 = rows.iter().map(|r| r.2 * r.0 * r.0).sum();
    let sxy: f64 = rows.iter().map(|r| r.2 * r.0 * r.1).sum();
    let det = sw * sxx - sx * sx;
    if det <= 0.0 {
        return Err(Error::VisibilityFit {
            reason: "degenerate design matrix".into(),
        });
    }
    let c0 = (sxx * sy - sx * sxy) / det;
    let c1 = (sw * sxy - sx * sy) / det;

    // covariance of (c0, c1) from the normal equations; with no quoted
    // uncertainties, scale by the residual variance (zero when the fit is
    // exact or has no spare degrees of freedom)
    let mut cov00 = sxx / det;
    let mut cov01 = -sx / det;
    let mut cov11 = sw / det;
    if !have_sigmas {
        let dof = rows.len() as isize - 2;
        let s2 = if dof > 0 {
            rows.iter()
                .map(|&(x, y, _)| (y - c0 - c1 * x).powi(2))
                .sum::<f64>()
                / dof as f64
        } else {
            0.0
        };
        cov00 *= s2;
        cov01 *= s2;
        cov11 *= s2;
    }

    let raw_v_max = c0.exp();
    let phi1_sq = (-2.0 * c1).max(0.0);
    let clamped = raw_v_max > 1.0;
    let v_max = if clamped { 1.0 } else { raw_v_max };
    // map (c0, c1) covariance through v_max = e^{c0}, phi1_sq = -2 c1
    let covariance = [
        [v_max * v_max * cov00, -2.0 * v_max * cov01],
        [-2.0 * v_max * cov01, 4.0 * cov11],
    ];
    Ok(VisibilityFit {
        v_max,
        phi1_sq,
        covariance,
        clamped,
    })
}

/// Predicted visibility per order from a band-integrated phase variance:
/// rows (p, V(p)) with <Phi_p^2> = p^2 * variance_per_p2.
pub fn variance_to_visibility_report(
    variance_per_p2: f64,
    v_max: f64,
    max_order: u32,
) -> Vec<(u32, f64)> {
    assert!(variance_per_p2 >= 0.0 && max_order >= 1);
    (1..=max_order)
        .map(|p| {
            let variance = (p * p) as f64 * variance_per_p2;
            (p, visibility_from_variance(v_max, variance))
        })
        .collect()
}
