//! Connection-table audits. The implemented (production) connections on the
//! frame spaces come from constant frame coefficients; this module checks the
//! published closed forms against a first-principles Levi-Civita connection
//! evaluated through the Koszul formula with finite differences, so the two
//! routes are independent. It also provides a finite-difference curvature
//! oracle used by the test suite.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::spaces::{heisenberg, sasaki, AmbientSpace};
use crate::DVec;

const KOSZUL_STEP: f64 = 2e-5;

/// Result of one audited identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidual {
    pub name: String,
    pub max_residual: f64,
}

/// Audit verdict for a connection table / connection lemma.
#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub space: String,
    pub samples: usize,
    pub identities: Vec<IdentityResidual>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Directional derivative of a scalar function along `v` at `p`, sampling
/// along the retracted line p + t v.
fn dir_scalar(space: &AmbientSpace, p: &DVec, v: &DVec, f: &dyn Fn(&DVec) -> f64) -> f64 {
    let eps = KOSZUL_STEP * (1.0 + p.norm());
    let qp = space.project_to_manifold(&(p + v * eps));
    let qm = space.project_to_manifold(&(p - v * eps));
    (f(&qp) - f(&qm)) / (2.0 * eps)
}

/// Directional derivative of the model components of a field.
fn dir_field(space: &AmbientSpace, p: &DVec, v: &DVec, f: &dyn Fn(&DVec) -> DVec) -> DVec {
    let eps = KOSZUL_STEP * (1.0 + p.norm());
    let qp = space.project_to_manifold(&(p + v * eps));
    let qm = space.project_to_manifold(&(p - v * eps));
    (f(&qp) - f(&qm)) / (2.0 * eps)
}

/// Coordinate Lie bracket [a, b](p) = D_a b - D_b a; tangent for tangent
/// fields regardless of the ambient extension.
fn bracket(
    space: &AmbientSpace,
    p: &DVec,
    a: &dyn Fn(&DVec) -> DVec,
    b: &dyn Fn(&DVec) -> DVec,
) -> DVec {
    dir_field(space, p, &a(p), b) - dir_field(space, p, &b(p), a)
}

/// Levi-Civita connection from the Koszul formula with finite differences;
/// independent of the production connection tables.
pub fn covariant_derivative_koszul(
    space: &AmbientSpace,
    field: &dyn Fn(&DVec) -> DVec,
    p: &DVec,
    dir: &DVec,
) -> Result<DVec> {
    space.check_point(p)?;
    let ext = |v: DVec| {
        let space = space.clone();
        move |q: &DVec| space.project_to_tangent(q, &v)
    };
    let a_field = ext(dir.clone());
    let frame = space.orthonormal_frame(p);
    let m = frame.len();

    let g = |q: &DVec, u: &DVec, w: &DVec| space.metric(q, u, w);
    let mut comps = vec![0.0; m];
    for (k, ck) in frame.iter().enumerate() {
        let c_field = ext(ck.clone());
        // 2 g(nabla_A B, C) = A g(B,C) + B g(A,C) - C g(A,B)
        //                   + g([A,B],C) - g([A,C],B) - g([B,C],A)
        let t1 = dir_scalar(space, p, &a_field(p), &|q| g(q, &field(q), &c_field(q)));
        let t2 = dir_scalar(space, p, &field(p), &|q| g(q, &a_field(q), &c_field(q)));
        let t3 = dir_scalar(space, p, &c_field(p), &|q| g(q, &a_field(q), &field(q)));
        let ab = bracket(space, p, &a_field, field);
        let ac = bracket(space, p, &a_field, &c_field);
        let bc = bracket(space, p, field, &c_field);
        let t4 = g(p, &ab, ck);
        let t5 = g(p, &ac, &field(p));
        let t6 = g(p, &bc, &a_field(p));
        comps[k] = 0.5 * (t1 + t2 - t3 + t4 - t5 - t6);
    }
    let mut out = DVec::zeros(space.embed_dim());
    for (k, ck) in frame.iter().enumerate() {
        out += ck * comps[k];
    }
    if !out.iter().all(|x| x.is_finite()) {
        return Err(GeomError::StencilError("non-finite Koszul evaluation".into()));
    }
    Ok(out)
}

/// Finite-difference curvature oracle: R(X,Y)Z from two nested covariant
/// derivatives of projected-constant extensions. Used by tests to check the
/// exact curvature closed forms.
pub fn riemann_fd(
    space: &AmbientSpace,
    p: &DVec,
    x: &DVec,
    y: &DVec,
    z: &DVec,
    w: &DVec,
) -> Result<f64> {
    let ext = |v: DVec| {
        let space = space.clone();
        move |q: &DVec| space.project_to_tangent(q, &v)
    };
    let xf = ext(x.clone());
    let yf = ext(y.clone());
    let zf = ext(z.clone());
    // inner fields q -> nabla_{Y(q)} Z and q -> nabla_{X(q)} Z
    let nyz = {
        let space = space.clone();
        let zf = ext(z.clone());
        let yf = ext(y.clone());
        move |q: &DVec| space.covariant_derivative(&zf, q, &yf(q)).expect("inner derivative")
    };
    let nxz = {
        let space = space.clone();
        let zf = ext(z.clone());
        let xf = ext(x.clone());
        move |q: &DVec| space.covariant_derivative(&zf, q, &xf(q)).expect("inner derivative")
    };
    // outer derivatives use a wider step to dominate the inner FD noise
    let t1 = space.covariant_derivative_eps(&nyz, p, x, 1e-4)?;
    let t2 = space.covariant_derivative_eps(&nxz, p, y, 1e-4)?;
    let br = bracket(space, p, &xf, &yf);
    let t3 = space.covariant_derivative(&zf, p, &br)?;
    let r = t1 - t2 - t3;
    Ok(space.metric(p, &r, w))
}

/// Audits the connection closed forms of the Heisenberg group or the Sasaki
/// bundle at `samples` random points, comparing against the Koszul route.
pub fn validate_connection_tables(space: &AmbientSpace, seed: u64) -> Result<TableReport> {
    match space {
        AmbientSpace::Heisenberg { n } => Ok(validate_heisenberg(space, *n, seed, 100)),
        AmbientSpace::SasakiBundle { r, c } => Ok(validate_sasaki(space, *r, *c, seed, 100)),
        other => Err(GeomError::UnsupportedSpace(format!(
            "connection tables exist only for HEISENBERG and SASAKI_BUNDLE, not {}",
            other.kind_name()
        ))),
    }
}

/// The published Heisenberg table: nabla_{X_j} Y_j = V/2, nabla_{X_j} V =
/// nabla_V X_j = -Y_j/2, nabla_{Y_j} V = nabla_V Y_j = X_j/2, zero otherwise.
fn heis_table_value(n: usize, p: &DVec, a: usize, b: usize) -> DVec {
    let m = 2 * n + 1;
    let vidx = 2 * n;
    let mut comps = DVec::zeros(m);
    if a < n && b < 2 * n && b == n + a {
        comps[vidx] = 0.5; // nabla_{X_j} Y_j
    } else if a >= n && a < 2 * n && b == a - n {
        comps[vidx] = -0.5; // nabla_{Y_j} X_j
    } else if a < n && b == vidx {
        comps[n + a] = -0.5; // nabla_{X_j} V
    } else if b < n && a == vidx {
        comps[n + b] = -0.5; // nabla_V X_j
    } else if a >= n && a < 2 * n && b == vidx {
        comps[a - n] = 0.5; // nabla_{Y_j} V
    } else if b >= n && b < 2 * n && a == vidx {
        comps[b - n] = 0.5; // nabla_V Y_j
    }
    heisenberg::from_frame_components(n, p, &comps)
}

fn frame_label(n: usize, a: usize) -> String {
    if a < n {
        format!("X{}", a + 1)
    } else if a < 2 * n {
        format!("Y{}", a - n + 1)
    } else {
        "V".into()
    }
}

fn validate_heisenberg(space: &AmbientSpace, n: usize, seed: u64, samples: usize) -> TableReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = 2 * n + 1;
    let mut residuals = vec![0.0_f64; m * m];
    for _ in 0..samples {
        let p = space.random_point(&mut rng);
        for a in 0..m {
            for b in 0..m {
                let dir = heisenberg::frame_vector(n, &p, a);
                let field = {
                    let b = b;
                    move |q: &DVec| heisenberg::frame_vector(n, q, b)
                };
                let lhs = covariant_derivative_koszul(space, &field, &p, &dir)
                    .expect("koszul evaluation");
                let rhs = heis_table_value(n, &p, a, b);
                let res = space.norm(&p, &(lhs - rhs));
                if res > residuals[a * m + b] {
                    residuals[a * m + b] = res;
                }
            }
        }
    }
    let identities: Vec<IdentityResidual> = (0..m * m)
        .map(|i| IdentityResidual {
            name: format!(
                "nabla_{}_{}",
                frame_label(n, i / m),
                frame_label(n, i % m)
            ),
            max_residual: residuals[i],
        })
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    TableReport {
        space: space.kind_name().into(),
        samples,
        identities,
        max_residual,
        pass: max_residual <= 1e-6,
    }
}

/// Constant-curvature R(X,Y)Z = c (<Y,Z> X - <X,Z> Y) on the base sphere.
fn base_curvature(c: f64, x: &DVec, y: &DVec, z: &DVec) -> DVec {
    x * (c * y.dot(z)) - y * (c * x.dot(z))
}

fn validate_sasaki(space: &AmbientSpace, r: f64, c: f64, seed: u64, samples: usize) -> TableReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = AmbientSpace::RoundSphere { dim: 2, c };
    let mut residuals = vec![0.0_f64; 4];
    for _ in 0..samples {
        let q = space.random_point(&mut rng);
        let p = sasaki::base_point(&q);
        let u = sasaki::fiber_vector(&q);
        // random constant-projection base fields
        let (xv, yv) = {
            let x = base.random_tangent(&mut rng, &p);
            let y = base.random_tangent(&mut rng, &p);
            (x, y)
        };
        let xfield = {
            let base = base.clone();
            let xv = xv.clone();
            move |pp: &DVec| base.project_to_tangent(pp, &xv)
        };
        let yfield = {
            let base = base.clone();
            let yv = yv.clone();
            move |pp: &DVec| base.project_to_tangent(pp, &yv)
        };
        // lifted fields on the bundle
        let y_h = {
            let yfield = yfield.clone();
            move |qq: &DVec| {
                let pp = sasaki::base_point(qq);
                sasaki::horizontal_lift(qq, c, &yfield(&pp))
            }
        };
        let y_t = {
            let yfield = yfield.clone();
            move |qq: &DVec| {
                let pp = sasaki::base_point(qq);
                sasaki::tangent_lift(qq, r, &yfield(&pp))
            }
        };
        let xh = sasaki::horizontal_lift(&q, c, &xv);
        let xt = sasaki::tangent_lift(&q, r, &xv);
        let nabla_xy = base
            .covariant_derivative(&yfield, &p, &xv)
            .expect("base connection");

        // item 1: nabla_{X^H} Y^H = (nabla_X Y)^H - (R(X,Y)u)^T / 2
        let lhs1 = covariant_derivative_koszul(space, &y_h, &q, &xh).expect("koszul");
        let rhs1 = sasaki::horizontal_lift(&q, c, &nabla_xy)
            - sasaki::tangent_lift(&q, r, &base_curvature(c, &xv, &yv, &u)) * 0.5;
        // item 2: nabla_{X^H} Y^T = (nabla_X Y)^T + (R(u,Y)X)^H / 2
        let lhs2 = covariant_derivative_koszul(space, &y_t, &q, &xh).expect("koszul");
        let rhs2 = sasaki::tangent_lift(&q, r, &nabla_xy)
            + sasaki::horizontal_lift(&q, c, &base_curvature(c, &u, &yv, &xv)) * 0.5;
        // item 3: nabla_{X^T} Y^H = (R(u,X)Y)^H / 2
        let lhs3 = covariant_derivative_koszul(space, &y_h, &q, &xt).expect("koszul");
        let rhs3 = sasaki::horizontal_lift(&q, c, &base_curvature(c, &u, &xv, &yv)) * 0.5;
        // item 4: nabla_{X^T} Y^T = -(1/r^2) g(u, Y) X^T
        let lhs4 = covariant_derivative_koszul(space, &y_t, &q, &xt).expect("koszul");
        let rhs4 = &xt * (-u.dot(&yv) / (r * r));

        for (i, (lhs, rhs)) in [(lhs1, rhs1), (lhs2, rhs2), (lhs3, rhs3), (lhs4, rhs4)]
            .into_iter()
            .enumerate()
        {
            let res = space.norm(&q, &(lhs - rhs));
            if res > residuals[i] {
                residuals[i] = res;
            }
        }
    }
    let names = [
        "nabla_XH_YH",
        "nabla_XH_YT",
        "nabla_XT_YH",
        "nabla_XT_YT",
    ];
    let identities: Vec<IdentityResidual> = names
        .iter()
        .zip(&residuals)
        .map(|(name, res)| IdentityResidual {
            name: (*name).into(),
            max_residual: *res,
        })
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    TableReport {
        space: space.kind_name().into(),
        samples,
        identities,
        max_residual,
        pass: max_residual <= 1e-6,
    }
}
