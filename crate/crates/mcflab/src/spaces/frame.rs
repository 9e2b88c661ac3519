//! Machinery shared by the homogeneous frame spaces (Berger sphere,
//! Heisenberg group, Sasaki bundle): these carry a global orthonormal moving
//! frame whose connection coefficients omega(a,b,c) = g(nabla_{F_a} F_b, F_c)
//! are position-independent. Geodesics then reduce to an autonomous ODE in
//! frame components (which conserves speed exactly), and the curvature tensor
//! is a closed-form quadratic in omega.

use crate::error::{GeomError, Result};
use crate::spaces::AmbientSpace;
use crate::DVec;

pub struct FrameSystem {
    pub m: usize,
    pub omega: Vec<f64>,
}

impl FrameSystem {
    pub fn om(&self, a: usize, b: usize, c: usize) -> f64 {
        self.omega[(a * self.m + b) * self.m + c]
    }

    /// Structure constants [F_a, F_b] = sum_c cc(a,b,c) F_c (torsion-free).
    pub fn structure(&self, a: usize, b: usize, c: usize) -> f64 {
        self.om(a, b, c) - self.om(b, a, c)
    }

    /// db_c/dt = -sum_{a,b} v_a v_b omega(a,b,c) along a geodesic.
    fn geodesic_rhs(&self, v: &[f64], out: &mut [f64]) {
        for c in 0..self.m {
            let mut acc = 0.0;
            for a in 0..self.m {
                for b in 0..self.m {
                    acc -= v[a] * v[b] * self.om(a, b, c);
                }
            }
            out[c] = acc;
        }
    }

    /// dw_c/dt = -sum_{a,b} v_a w_b omega(a,b,c): parallel transport along a
    /// curve with frame velocity v.
    fn transport_rhs(&self, v: &[f64], w: &[f64], out: &mut [f64]) {
        for c in 0..self.m {
            let mut acc = 0.0;
            for a in 0..self.m {
                for b in 0..self.m {
                    acc -= v[a] * w[b] * self.om(a, b, c);
                }
            }
            out[c] = acc;
        }
    }

    /// Frame components of R(F_a, F_b) F_c, exact for constant omega:
    /// R = omega*omega - omega*omega - C*omega.
    pub fn riemann_frame(&self, a: usize, b: usize, c: usize, e: usize) -> f64 {
        let m = self.m;
        let mut acc = 0.0;
        for d in 0..m {
            acc += self.om(b, c, d) * self.om(a, d, e) - self.om(a, c, d) * self.om(b, d, e);
            acc -= self.structure(a, b, d) * self.om(d, c, e);
        }
        acc
    }
}

/// One RK4 step of the joint system (position, frame velocity components,
/// optional transported components).
#[allow(clippy::too_many_arguments)]
fn rk4_step(
    sys: &FrameSystem,
    frame_at: &dyn Fn(&DVec) -> Vec<DVec>,
    x: &DVec,
    v: &[f64],
    w: Option<&[f64]>,
    dt: f64,
    xout: &mut DVec,
    vout: &mut Vec<f64>,
    wout: &mut Option<Vec<f64>>,
) {
    let m = sys.m;
    let eval = |x: &DVec, v: &[f64], w: Option<&[f64]>| {
        let frame = frame_at(x);
        let mut dx = DVec::zeros(x.len());
        for a in 0..m {
            dx += &frame[a] * v[a];
        }
        let mut dv = vec![0.0; m];
        sys.geodesic_rhs(v, &mut dv);
        let dw = w.map(|w| {
            let mut dw = vec![0.0; m];
            sys.transport_rhs(v, w, &mut dw);
            dw
        });
        (dx, dv, dw)
    };

    let (k1x, k1v, k1w) = eval(x, v, w);
    let ax = |base: &DVec, k: &DVec, f: f64| base + k * (f * dt);
    let av = |base: &[f64], k: &[f64], f: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, k)| b + f * dt * k).collect()
    };
    let x2 = ax(x, &k1x, 0.5);
    let v2 = av(v, &k1v, 0.5);
    let w2 = w.map(|w| av(w, k1w.as_ref().unwrap(), 0.5));
    let (k2x, k2v, k2w) = eval(&x2, &v2, w2.as_deref());
    let x3 = ax(x, &k2x, 0.5);
    let v3 = av(v, &k2v, 0.5);
    let w3 = w.map(|w| av(w, k2w.as_ref().unwrap(), 0.5));
    let (k3x, k3v, k3w) = eval(&x3, &v3, w3.as_deref());
    let x4 = ax(x, &k3x, 1.0);
    let v4 = av(v, &k3v, 1.0);
    let w4 = w.map(|w| av(w, k3w.as_ref().unwrap(), 1.0));
    let (k4x, k4v, k4w) = eval(&x4, &v4, w4.as_deref());

    *xout = x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (dt / 6.0);
    *vout = (0..m)
        .map(|i| v[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]))
        .collect();
    *wout = w.map(|w| {
        let (k1, k2, k3, k4) = (
            k1w.as_ref().unwrap(),
            k2w.as_ref().unwrap(),
            k3w.as_ref().unwrap(),
            k4w.as_ref().unwrap(),
        );
        (0..m)
            .map(|i| w[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    });
}

pub struct GeodesicEnd {
    pub point: DVec,
    pub velocity_frame: Vec<f64>,
    pub transported_frame: Option<Vec<f64>>,
}

/// Integrates the geodesic with initial frame components `v0` over time `t`,
/// optionally dragging a parallel vector `w0` along. Positions are projected
/// back to the constraint manifold after every step.
pub fn integrate_geodesic(
    sys: &FrameSystem,
    frame_at: &dyn Fn(&DVec) -> Vec<DVec>,
    project: &dyn Fn(&DVec) -> DVec,
    p0: &DVec,
    v0: &[f64],
    w0: Option<&[f64]>,
    t: f64,
    steps_per_unit_arc: f64,
) -> Result<GeodesicEnd> {
    let speed: f64 = v0.iter().map(|v| v * v).sum::<f64>().sqrt();
    let arc = speed * t.abs();
    let n = ((arc * steps_per_unit_arc).ceil() as usize).clamp(4, 200_000);
    let dt = t / n as f64;
    if !dt.is_finite() || (t != 0.0 && dt.abs() < 1e-300) {
        return Err(GeomError::IntegrationError("step size underflow".into()));
    }
    let mut x = p0.clone();
    let mut v = v0.to_vec();
    let mut w = w0.map(|w| w.to_vec());
    for _ in 0..n {
        let mut xn = x.clone();
        let mut vn = v.clone();
        let mut wn = None;
        rk4_step(sys, frame_at, &x, &v, w.as_deref(), dt, &mut xn, &mut vn, &mut wn);
        x = project(&xn);
        v = vn;
        if w.is_some() {
            w = wn;
        }
        if !x.iter().all(|c| c.is_finite()) {
            return Err(GeomError::IntegrationError(
                "non-finite state during geodesic integration".into(),
            ));
        }
    }
    Ok(GeodesicEnd {
        point: x,
        velocity_frame: v,
        transported_frame: w,
    })
}

/// Inverse exponential by shooting: fixed-point correction of the miss
/// vector, which contracts at rate O(|v|^2 K) for nearby targets.
pub fn log_by_shooting(space: &AmbientSpace, p: &DVec, q: &DVec) -> Result<DVec> {
    let scale = 1.0 + p.norm();
    let mut v = space.project_to_tangent(p, &(q - p));
    for _ in 0..60 {
        let x = space.exp_map(p, &v)?;
        let miss = q - &x;
        if miss.norm() <= 1e-12 * scale {
            return Ok(v);
        }
        v += space.project_to_tangent(p, &miss);
    }
    let x = space.exp_map(p, &v)?;
    let res = (q - &x).norm();
    if res <= 1e-9 * scale {
        return Ok(v);
    }
    Err(GeomError::IntegrationError(format!(
        "shooting log did not converge (residual {res:.3e})"
    )))
}
