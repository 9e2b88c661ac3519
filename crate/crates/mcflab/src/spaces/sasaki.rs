//! Tangent sphere bundle T^r S^2(c) with the Sasaki metric, realized in
//! R^6 = {(p, u)} under the constraints |p| = 1/sqrt(c), <p,u> = 0, |u| = r.
//!
//! Horizontal lifts pair a base vector with the parallel-transport correction
//! of u; tangent lifts move u inside the fiber sphere. The Sasaki metric is
//! evaluated from its defining formula on lifts (not as the R^6-induced
//! metric, which differs on horizontal lifts). A global orthonormal frame
//!   F1 = (u/r)^H,  F2 = ((n x u)/r)^H,  F3 = ((n x u)/r)^T
//! has constant structure constants, giving exact connection coefficients.

use crate::DVec;

pub fn radius_base(c: f64) -> f64 {
    1.0 / c.sqrt()
}

pub fn base_point(q: &DVec) -> DVec {
    crate::dvec(&[q[0], q[1], q[2]])
}

pub fn fiber_vector(q: &DVec) -> DVec {
    crate::dvec(&[q[3], q[4], q[5]])
}

pub fn assemble(p: &DVec, u: &DVec) -> DVec {
    crate::dvec(&[p[0], p[1], p[2], u[0], u[1], u[2]])
}

fn cross(a: &DVec, b: &DVec) -> DVec {
    crate::dvec(&[
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Horizontal lift of the base vector `w` at the bundle point (p, u).
pub fn horizontal_lift(q: &DVec, c: f64, w: &DVec) -> DVec {
    let p = base_point(q);
    let u = fiber_vector(q);
    let corr = &p * (-c * u.dot(w));
    assemble(w, &corr)
}

/// Tangent lift of the base vector `w` at (p, u): the fiber component of w.
pub fn tangent_lift(q: &DVec, r: f64, w: &DVec) -> DVec {
    let u = fiber_vector(q);
    let proj = w - &u * (u.dot(w) / (r * r));
    assemble(&DVec::zeros(3), &proj)
}

/// Split a bundle tangent vector (a, b) into (base vector of the horizontal
/// part, fiber part b-tilde); v = a^H + (0, b-tilde).
pub fn split_lift(q: &DVec, c: f64, v: &DVec) -> (DVec, DVec) {
    let p = base_point(q);
    let u = fiber_vector(q);
    let a = crate::dvec(&[v[0], v[1], v[2]]);
    let b = crate::dvec(&[v[3], v[4], v[5]]);
    let btilde = &b + &p * (c * u.dot(&a));
    (a, btilde)
}

/// Sasaki metric from the defining formula on lifts.
pub fn metric(q: &DVec, c: f64, v: &DVec, w: &DVec) -> f64 {
    let (av, bv) = split_lift(q, c, v);
    let (aw, bw) = split_lift(q, c, w);
    av.dot(&aw) + bv.dot(&bw)
}

/// Global orthonormal frame (two horizontal, one vertical).
pub fn frame(q: &DVec, r: f64, c: f64) -> Vec<DVec> {
    let p = base_point(q);
    let u = fiber_vector(q);
    let s = c.sqrt();
    let x1 = &u / r;
    let x2 = cross(&p, &u) * (s / r);
    vec![
        horizontal_lift(q, c, &x1),
        horizontal_lift(q, c, &x2),
        assemble(&DVec::zeros(3), &x2),
    ]
}

/// Connection coefficients omega(a,b,c) = g(nabla_{F_a} F_b, F_c) in the
/// frame above; constant over the bundle.
pub fn omega(r: f64, c: f64) -> Vec<f64> {
    let mut om = vec![0.0; 27];
    let idx = |a: usize, b: usize, cc: usize| (a * 3 + b) * 3 + cc;
    let half_cr = 0.5 * c * r;
    om[idx(0, 1, 2)] = half_cr;
    om[idx(0, 2, 1)] = -half_cr;
    om[idx(1, 0, 2)] = -half_cr;
    om[idx(1, 2, 0)] = half_cr;
    om[idx(2, 0, 1)] = 1.0 / r - half_cr;
    om[idx(2, 1, 0)] = half_cr - 1.0 / r;
    om
}

/// Constraint residual: how far (p, u) is from the bundle.
pub fn constraint_residual(q: &DVec, r: f64, c: f64) -> f64 {
    let p = base_point(q);
    let u = fiber_vector(q);
    let rb = radius_base(c);
    let e1 = (p.norm() - rb).abs();
    let e2 = (u.norm() - r).abs();
    let e3 = p.dot(&u).abs() / rb;
    e1.max(e2).max(e3)
}

pub fn project_point(q: &DVec, r: f64, c: f64) -> DVec {
    let rb = radius_base(c);
    let p = base_point(q) * (rb / base_point(q).norm());
    let phat = &p / rb;
    let mut u = fiber_vector(q);
    u -= &phat * u.dot(&phat);
    let un = u.norm();
    let u = if un < 1e-300 {
        // arbitrary but deterministic fiber direction
        let seed = if phat[0].abs() < 0.9 {
            crate::dvec(&[1.0, 0.0, 0.0])
        } else {
            crate::dvec(&[0.0, 1.0, 0.0])
        };
        let t = &seed - &phat * seed.dot(&phat);
        &t * (r / t.norm())
    } else {
        &u * (r / un)
    };
    assemble(&p, &u)
}

/// Euclidean projection onto the tangent space of the constraint manifold;
/// the three constraint gradients are mutually orthogonal at points of the
/// bundle.
pub fn project_tangent(q: &DVec, v: &DVec) -> DVec {
    let p = base_point(q);
    let u = fiber_vector(q);
    let g1 = assemble(&p, &DVec::zeros(3));
    let g2 = assemble(&DVec::zeros(3), &u);
    let g3 = assemble(&u, &p);
    let mut out = v.clone();
    for g in [g1, g2, g3] {
        let n2 = g.dot(&g);
        if n2 > 1e-300 {
            let c = out.dot(&g) / n2;
            out -= &g * c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvec;

    fn point() -> DVec {
        // c = 1, r = 1: p on the unit sphere, u unit tangent
        let p = dvec(&[0.6, 0.0, 0.8]);
        let u = dvec(&[0.8, 0.0, -0.6]);
        assemble(&p, &u)
    }

    #[test]
    fn frame_is_orthonormal() {
        let q = point();
        let f = frame(&q, 1.0, 1.0);
        for i in 0..3 {
            for j in 0..3 {
                let g = metric(&q, 1.0, &f[i], &f[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-12, "g(F{i},F{j}) = {g}");
            }
            let t = project_tangent(&q, &f[i]);
            assert!((&t - &f[i]).norm() < 1e-12, "frame must be tangent");
        }
    }

    #[test]
    fn tangent_lift_of_u_vanishes_in_the_metric() {
        // the defining formula forces |u^T|^2 = r^2 - (1/r^2)(r^2)^2 = 0
        let q = point();
        let u = fiber_vector(&q);
        let ut = tangent_lift(&q, 1.0, &u);
        assert!(ut.norm() < 1e-14);
        let vt = assemble(&DVec::zeros(3), &u); // raw fiber motion along u
        assert!(metric(&q, 1.0, &vt, &vt).abs() < 1e-12);
    }

    #[test]
    fn horizontal_lift_preserves_length_and_mixed_terms_vanish() {
        let q = point();
        let w = dvec(&[0.0, 1.0, 0.0]); // tangent to the base at p
        let h = horizontal_lift(&q, 1.0, &w);
        assert!((metric(&q, 1.0, &h, &h) - w.dot(&w)).abs() < 1e-12);
        let f = frame(&q, 1.0, 1.0);
        assert!(metric(&q, 1.0, &h, &f[2]).abs() < 1e-12);
    }
}
