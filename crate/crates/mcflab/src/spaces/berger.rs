//! Berger spheres: S^3 of curvature c (radius 1/sqrt(c)) in R^4 with the
//! canonical-variation metric g_lambda that rescales the Hopf vertical
//! direction by lambda while leaving horizontal lengths unchanged.
//!
//! R^4 is identified with the quaternions (x0 + x1 i + x2 j + x3 k) and with
//! C^2 via (z1, z2) = (x0 + i x1, x2 + i x3); the Hopf vertical field is the
//! left multiplication by i. Left multiplications by i, j, k scaled to unit
//! length give a global orthonormal frame with constant structure constants,
//! so connection coefficients and curvature are exact.

use crate::DVec;

/// Left quaternion multiplication by i: (z1, z2) -> (i z1, i z2).
pub fn j_complex(x: &DVec) -> DVec {
    crate::dvec(&[-x[1], x[0], -x[3], x[2]])
}

fn left_j(x: &DVec) -> DVec {
    crate::dvec(&[-x[2], x[3], x[0], -x[1]])
}

fn left_k(x: &DVec) -> DVec {
    crate::dvec(&[-x[3], -x[2], x[1], x[0]])
}

/// Orthonormal frame for g_lambda: G1 = vertical / sqrt(lambda), G2, G3
/// horizontal.
pub fn frame(x: &DVec, c: f64, lambda: f64) -> Vec<DVec> {
    let s = c.sqrt();
    vec![
        j_complex(x) * (s / lambda.sqrt()),
        left_j(x) * s,
        left_k(x) * s,
    ]
}

/// g_lambda(v, w) at x: Euclidean inner product plus the vertical rescale.
pub fn metric(x: &DVec, c: f64, lambda: f64, v: &DVec, w: &DVec) -> f64 {
    let vert = j_complex(x) * c.sqrt(); // g_1-unit vertical
    v.dot(w) + (lambda - 1.0) * v.dot(&vert) * w.dot(&vert)
}

/// Connection coefficients omega(a,b,c) = g_lambda(nabla_{G_a} G_b, G_c);
/// constant over the sphere.
pub fn omega(c: f64, lambda: f64) -> Vec<f64> {
    let mu = c.sqrt() / lambda.sqrt();
    let nu = c.sqrt() * lambda.sqrt();
    let mut om = vec![0.0; 27];
    let idx = |a: usize, b: usize, cc: usize| (a * 3 + b) * 3 + cc;
    om[idx(0, 1, 2)] = nu - 2.0 * mu;
    om[idx(0, 2, 1)] = 2.0 * mu - nu;
    om[idx(1, 0, 2)] = nu;
    om[idx(1, 2, 0)] = -nu;
    om[idx(2, 0, 1)] = -nu;
    om[idx(2, 1, 0)] = nu;
    om
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvec;

    #[test]
    fn frame_is_orthonormal_for_g_lambda() {
        let x = dvec(&[0.5, -0.5, 0.5, 0.5]); // on the unit sphere (c = 1)
        for lambda in [0.25, 1.0, 4.0] {
            let f = frame(&x, 1.0, lambda);
            for i in 0..3 {
                for j in 0..3 {
                    let g = metric(&x, 1.0, lambda, &f[i], &f[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (g - want).abs() < 1e-12,
                        "g(F{i},F{j}) = {g} at lambda {lambda}"
                    );
                }
                assert!(f[i].dot(&x).abs() < 1e-12, "frame must be tangent");
            }
        }
    }

    #[test]
    fn lambda_one_metric_is_round() {
        let x = dvec(&[1.0, 0.0, 0.0, 0.0]);
        let v = dvec(&[0.0, 1.0, 2.0, -0.5]);
        let w = dvec(&[0.0, 0.3, -1.0, 0.7]);
        assert!((metric(&x, 1.0, 1.0, &v, &w) - v.dot(&w)).abs() < 1e-15);
    }
}
