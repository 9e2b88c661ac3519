//! The Heisenberg group H^n on R^{2n+1} with its left-invariant metric.
//!
//! Coordinates are ordered (x_1..x_n, y_1..y_n, z). The left-invariant
//! orthonormal frame is
//!   X_j = d/dx_j - (y_j/2) d/dz,
//!   Y_j = d/dy_j + (x_j/2) d/dz,
//!   V   = d/dz,
//! and the geodesics through the identity integrate in closed form, which
//! gives exact exponential and logarithm maps (the log solves one scalar
//! transcendental equation by Newton).

use crate::error::{GeomError, Result};
use crate::DVec;

pub fn embed_dim(n: usize) -> usize {
    2 * n + 1
}

/// Group law (x,y,z)(x',y',z') = (x+x', y+y', z+z' + (<x,y'> - <y,x'>)/2).
pub fn mul(n: usize, p: &DVec, q: &DVec) -> DVec {
    let mut out = p + q;
    let mut twist = 0.0;
    for j in 0..n {
        twist += p[j] * q[n + j] - p[n + j] * q[j];
    }
    out[2 * n] += 0.5 * twist;
    out
}

pub fn inverse(n: usize, p: &DVec) -> DVec {
    let _ = n;
    -p
}

/// Components of a coordinate vector `v` at `p` in the left-invariant frame
/// (a_1..a_n, b_1..b_n, phi).
pub fn frame_components(n: usize, p: &DVec, v: &DVec) -> DVec {
    let mut out = v.clone();
    let mut phi = v[2 * n];
    for j in 0..n {
        phi += 0.5 * (p[n + j] * v[j] - p[j] * v[n + j]);
    }
    out[2 * n] = phi;
    out
}

/// Coordinate components of the frame vector with index `a` at `p`.
pub fn frame_vector(n: usize, p: &DVec, a: usize) -> DVec {
    let dim = embed_dim(n);
    let mut out = DVec::zeros(dim);
    if a < n {
        out[a] = 1.0;
        out[2 * n] = -0.5 * p[n + a];
    } else if a < 2 * n {
        out[a] = 1.0;
        out[2 * n] = 0.5 * p[a - n];
    } else {
        out[2 * n] = 1.0;
    }
    out
}

/// Coordinate vector with the given frame components at `p`.
pub fn from_frame_components(n: usize, p: &DVec, comps: &DVec) -> DVec {
    let mut out = comps.clone();
    let mut z = comps[2 * n];
    for j in 0..n {
        z += -0.5 * p[n + j] * comps[j] + 0.5 * p[j] * comps[n + j];
    }
    out[2 * n] = z;
    out
}

/// Connection coefficients omega(a,b,c) = g(nabla_{E_a} E_b, E_c) in the
/// left-invariant frame; constant over the group.
pub fn omega(n: usize) -> Vec<f64> {
    let m = embed_dim(n);
    let mut om = vec![0.0; m * m * m];
    let idx = |a: usize, b: usize, c: usize| (a * m + b) * m + c;
    let v = 2 * n;
    for j in 0..n {
        let (x, y) = (j, n + j);
        om[idx(x, y, v)] = 0.5;
        om[idx(y, x, v)] = -0.5;
        om[idx(x, v, y)] = -0.5;
        om[idx(v, x, y)] = -0.5;
        om[idx(y, v, x)] = 0.5;
        om[idx(v, y, x)] = 0.5;
    }
    om
}

/// (phi - sin phi) / (8 sin^2(phi/2)), the fiber-height profile of geodesics
/// from the identity; odd, analytic, G(0)=0, G'(0)=1/12.
fn height_profile(phi: f64) -> f64 {
    if phi.abs() < 1e-4 {
        phi / 12.0 + phi.powi(3) / 360.0
    } else {
        let s = (0.5 * phi).sin();
        (phi - phi.sin()) / (8.0 * s * s)
    }
}

fn height_profile_deriv(phi: f64) -> f64 {
    if phi.abs() < 1e-4 {
        1.0 / 12.0 + phi * phi / 120.0
    } else {
        let s = (0.5 * phi).sin();
        let c = (0.5 * phi).cos();
        ((1.0 - phi.cos()) * s - (phi - phi.sin()) * c) / (8.0 * s * s * s)
    }
}

/// Exponential map at the identity: frame components -> group element.
pub fn exp_identity(n: usize, comps: &DVec) -> DVec {
    let phi = comps[2 * n];
    let dim = embed_dim(n);
    let mut out = DVec::zeros(dim);
    let mut q = 0.0; // sum |w_j|^2
    for j in 0..n {
        let (a, b) = (comps[j], comps[n + j]);
        q += a * a + b * b;
        // zeta_j = w_j (e^{i phi} - 1)/(i phi)
        let (zr, zi) = if phi.abs() < 1e-9 {
            // (e^{i phi}-1)/(i phi) ~ 1 + i phi/2
            (a - 0.5 * phi * b, b + 0.5 * phi * a)
        } else {
            let fr = phi.sin() / phi;
            let fi = (1.0 - phi.cos()) / phi;
            (a * fr - b * fi, a * fi + b * fr)
        };
        out[j] = zr;
        out[n + j] = zi;
    }
    let height = if phi.abs() < 1e-9 {
        phi + q * phi / 12.0
    } else {
        phi + q * (1.0 - phi.sin() / phi) / (2.0 * phi)
    };
    out[2 * n] = height;
    out
}

/// Logarithm at the identity: group element -> frame components of the
/// initial velocity of the minimizing geodesic. Valid within one vertical
/// period (|phi| < 2 pi).
pub fn log_identity(n: usize, g: &DVec) -> Result<DVec> {
    let dim = embed_dim(n);
    let h = g[2 * n];
    let mut q = 0.0;
    for j in 0..n {
        q += g[j] * g[j] + g[n + j] * g[n + j];
    }
    // solve h = phi + q * G(phi) for phi
    let mut phi = h / (1.0 + q / 12.0);
    if q < 1e-300 {
        // point on the center: vertical geodesic
        if h.abs() >= 2.0 * std::f64::consts::PI {
            return Err(GeomError::IntegrationError(
                "log outside the injectivity domain of the vertical axis".into(),
            ));
        }
        let mut out = DVec::zeros(dim);
        out[2 * n] = h;
        return Ok(out);
    }
    let lim = 2.0 * std::f64::consts::PI - 1e-9;
    let mut converged = false;
    for _ in 0..60 {
        let f = phi + q * height_profile(phi) - h;
        let df = 1.0 + q * height_profile_deriv(phi);
        let step = f / df;
        phi = (phi - step).clamp(-lim, lim);
        if step.abs() < 1e-15 * (1.0 + phi.abs()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(GeomError::IntegrationError(format!(
            "log Newton iteration did not converge (h={h}, q={q})"
        )));
    }
    // w_j = Z_j * (phi/2)/sin(phi/2) * e^{-i phi/2}
    let (mr, mi) = if phi.abs() < 1e-9 {
        (1.0, -0.5 * phi)
    } else {
        let amp = 0.5 * phi / (0.5 * phi).sin();
        ((0.5 * phi).cos() * amp, -(0.5 * phi).sin() * amp)
    };
    let mut out = DVec::zeros(dim);
    for j in 0..n {
        let (zr, zi) = (g[j], g[n + j]);
        out[j] = zr * mr - zi * mi;
        out[n + j] = zr * mi + zi * mr;
    }
    out[2 * n] = phi;
    Ok(out)
}

/// Exponential at an arbitrary basepoint via left translation.
pub fn exp_map(n: usize, p: &DVec, v: &DVec) -> DVec {
    let comps = frame_components(n, p, v);
    let g = exp_identity(n, &comps);
    mul(n, p, &g)
}

/// Logarithm at an arbitrary basepoint via left translation.
pub fn log_map(n: usize, p: &DVec, q: &DVec) -> Result<DVec> {
    let g = mul(n, &inverse(n, p), q);
    let comps = log_identity(n, &g)?;
    Ok(from_frame_components(n, p, &comps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvec;

    #[test]
    fn frame_components_roundtrip() {
        let p = dvec(&[0.3, -1.2, 0.7]);
        let v = dvec(&[1.0, 2.0, -0.5]);
        let comps = frame_components(1, &p, &v);
        let back = from_frame_components(1, &p, &comps);
        assert!((&back - &v).norm() < 1e-14);
    }

    #[test]
    fn vertical_geodesic_is_a_line() {
        let p = DVec::zeros(3);
        let v = dvec(&[0.0, 0.0, 1.0]);
        let q = exp_map(1, &p, &v);
        assert!((&q - &dvec(&[0.0, 0.0, 1.0])).norm() < 1e-14);
    }

    #[test]
    fn exp_log_roundtrip_generic() {
        let p = dvec(&[0.4, 0.1, -0.2]);
        for v in [
            dvec(&[0.05, -0.03, 0.02]),
            dvec(&[0.3, 0.2, -0.4]),
            dvec(&[0.0, 0.0, 0.3]),
            dvec(&[1.0, 0.5, 0.8]),
        ] {
            let q = exp_map(1, &p, &v);
            let v2 = log_map(1, &p, &q).unwrap();
            assert!(
                (&v2 - &v).norm() < 1e-10,
                "roundtrip failed for {v:?}: got {v2:?}"
            );
        }
    }

    #[test]
    fn left_translation_is_isometric_for_the_log() {
        // log at a translated pair has the same frame components
        let p = dvec(&[0.2, -0.3, 0.15]);
        let q = dvec(&[0.25, -0.2, 0.4]);
        let g = dvec(&[1.4, 0.6, -2.0]);
        let v1 = frame_components(1, &p, &log_map(1, &p, &q).unwrap());
        let (tp, tq) = (mul(1, &g, &p), mul(1, &g, &q));
        let v2 = frame_components(1, &tp, &log_map(1, &tp, &tq).unwrap());
        assert!((&v1 - &v2).norm() < 1e-12);
    }
}
