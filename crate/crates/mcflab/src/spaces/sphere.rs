//! Closed forms for round spheres of radius `R` embedded in R^{n+1} with the
//! induced metric: projection, exponential/logarithm, parallel transport.

use crate::error::{GeomError, Result};
use crate::DVec;

pub fn project_point(p: &DVec, radius: f64) -> DVec {
    p * (radius / p.norm())
}

pub fn project_tangent(p: &DVec, v: &DVec) -> DVec {
    v - p * (v.dot(p) / p.dot(p))
}

/// Riemannian exponential: great-circle arc of length |v| from p.
pub fn exp_map(p: &DVec, v: &DVec, radius: f64) -> DVec {
    let s = v.norm();
    if s < 1e-300 {
        return p.clone();
    }
    let theta = s / radius;
    p * theta.cos() + v * (radius * theta.sin() / s)
}

/// Inverse of `exp_map`; fails at the cut locus (antipode).
pub fn log_map(p: &DVec, q: &DVec, radius: f64) -> Result<DVec> {
    let r2 = radius * radius;
    let cos_theta = (p.dot(q) / r2).clamp(-1.0, 1.0);
    let w = q - p * (p.dot(q) / r2);
    let wn = w.norm();
    if wn < 1e-14 * radius {
        if cos_theta > 0.0 {
            return Ok(DVec::zeros(p.len()));
        }
        return Err(GeomError::IntegrationError(
            "log map at the antipode is undefined".into(),
        ));
    }
    let theta = cos_theta.acos();
    Ok(w * (radius * theta / wn))
}

/// Parallel transport of `w` along the geodesic from `p` with initial
/// velocity `v`, evaluated at parameter `t`.
pub fn parallel_transport(p: &DVec, v: &DVec, w: &DVec, t: f64, radius: f64) -> DVec {
    let s = v.norm();
    if s < 1e-300 {
        return w.clone();
    }
    let vhat = v / s;
    let phat = p / radius;
    let theta = s * t / radius;
    // component of w along vhat rotates in the (phat, vhat) plane
    let a = w.dot(&vhat);
    let w_perp = w - &vhat * a;
    let vhat_t = &vhat * theta.cos() - &phat * theta.sin();
    w_perp + vhat_t * a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvec;

    #[test]
    fn exp_log_roundtrip() {
        let p = dvec(&[1.0, 0.0, 0.0]);
        let v = dvec(&[0.0, 0.3, -0.2]);
        let q = exp_map(&p, &v, 1.0);
        assert!((q.norm() - 1.0).abs() < 1e-14);
        let v2 = log_map(&p, &q, 1.0).unwrap();
        assert!((&v2 - &v).norm() < 1e-12, "roundtrip error {}", (&v2 - &v).norm());
    }

    #[test]
    fn transport_preserves_metric() {
        let p = dvec(&[0.0, 0.0, 2.0]);
        let v = dvec(&[0.5, 0.1, 0.0]);
        let w = dvec(&[-0.1, 0.4, 0.0]);
        let wt = parallel_transport(&p, &v, &w, 1.0, 2.0);
        assert!((wt.norm() - w.norm()).abs() < 1e-13);
        let q = exp_map(&p, &(&v * 1.0), 2.0);
        assert!(wt.dot(&q).abs() < 1e-12, "transported vector must stay tangent");
    }
}
