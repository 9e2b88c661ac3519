//! The catalog of ambient geometries. Every space is realized through an
//! explicit Cartesian model with constraint equations; tangency is enforced
//! by projection after arithmetic. Metric, connection, curvature, and
//! exponential/logarithm maps are evaluated per kind: closed forms where the
//! model admits them (Euclidean space, round spheres, the Heisenberg group),
//! frame-based integration elsewhere (Berger spheres, Sasaki bundles).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::DVec;

pub mod berger;
pub mod frame;
pub mod heisenberg;
pub mod sasaki;
pub mod sphere;
pub mod validate;

use frame::FrameSystem;

/// Tolerance for accepting an input point as lying on the model.
pub const POINT_TOL: f64 = 1e-8;

/// Step for differentiating field coefficients along retracted curves.
pub(crate) const FIELD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub enum AmbientSpace {
    /// R^n with the flat metric.
    Euclidean { dim: usize },
    /// S^n of constant sectional curvature c, radius 1/sqrt(c) in R^{n+1}.
    RoundSphere { dim: usize, c: f64 },
    /// The Hopf quotient of S^3(c): the round 2-sphere of curvature 4c,
    /// radius 1/(2 sqrt(c)) in R^3.
    FsSphere { c: f64 },
    /// S^3(c) with the canonical-variation metric scaling the Hopf vertical
    /// direction by lambda.
    BergerSphere { c: f64, lambda: f64 },
    /// The Heisenberg group H^n on R^{2n+1} with its left-invariant metric.
    Heisenberg { n: usize },
    /// Tangent sphere bundle T^r S^2(c) with the Sasaki metric, in R^6.
    SasakiBundle { r: f64, c: f64 },
}

impl AmbientSpace {
    pub fn kind_name(&self) -> &'static str {
        match self {
            AmbientSpace::Euclidean { .. } => "EUCLIDEAN",
            AmbientSpace::RoundSphere { .. } => "ROUND_SPHERE",
            AmbientSpace::FsSphere { .. } => "FS_SPHERE",
            AmbientSpace::BergerSphere { .. } => "BERGER_SPHERE",
            AmbientSpace::Heisenberg { .. } => "HEISENBERG",
            AmbientSpace::SasakiBundle { .. } => "SASAKI_BUNDLE",
        }
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> usize {
        match self {
            AmbientSpace::Euclidean { dim } => *dim,
            AmbientSpace::RoundSphere { dim, .. } => *dim,
            AmbientSpace::FsSphere { .. } => 2,
            AmbientSpace::BergerSphere { .. } => 3,
            AmbientSpace::Heisenberg { n } => 2 * n + 1,
            AmbientSpace::SasakiBundle { .. } => 3,
        }
    }

    /// Dimension of the Cartesian model.
    pub fn embed_dim(&self) -> usize {
        match self {
            AmbientSpace::Euclidean { dim } => *dim,
            AmbientSpace::RoundSphere { dim, .. } => dim + 1,
            AmbientSpace::FsSphere { .. } => 3,
            AmbientSpace::BergerSphere { .. } => 4,
            AmbientSpace::Heisenberg { n } => 2 * n + 1,
            AmbientSpace::SasakiBundle { .. } => 6,
        }
    }

    /// Radius of the model sphere for the sphere-like kinds.
    pub fn sphere_radius(&self) -> Option<f64> {
        match self {
            AmbientSpace::RoundSphere { c, .. } => Some(1.0 / c.sqrt()),
            AmbientSpace::FsSphere { c } => Some(0.5 / c.sqrt()),
            AmbientSpace::BergerSphere { c, .. } => Some(1.0 / c.sqrt()),
            _ => None,
        }
    }

    pub fn constraint_residual(&self, p: &DVec) -> f64 {
        match self {
            AmbientSpace::Euclidean { .. } | AmbientSpace::Heisenberg { .. } => 0.0,
            AmbientSpace::SasakiBundle { r, c } => sasaki::constraint_residual(p, *r, *c),
            _ => (p.norm() - self.sphere_radius().unwrap()).abs(),
        }
    }

    pub fn check_point(&self, p: &DVec) -> Result<()> {
        if p.len() != self.embed_dim() {
            return Err(GeomError::ConstraintViolation {
                space: self.kind_name().into(),
                residual: f64::INFINITY,
            });
        }
        let res = self.constraint_residual(p);
        if res > POINT_TOL * (1.0 + p.norm()) {
            return Err(GeomError::ConstraintViolation {
                space: self.kind_name().into(),
                residual: res,
            });
        }
        Ok(())
    }

    /// Nearest-point style projection onto the model.
    pub fn project_to_manifold(&self, p: &DVec) -> DVec {
        match self {
            AmbientSpace::Euclidean { .. } | AmbientSpace::Heisenberg { .. } => p.clone(),
            AmbientSpace::SasakiBundle { r, c } => sasaki::project_point(p, *r, *c),
            _ => sphere::project_point(p, self.sphere_radius().unwrap()),
        }
    }

    /// Euclidean projection of `v` onto the tangent space of the constraint
    /// manifold at `p` (constraint tangency is metric-independent).
    pub fn project_to_tangent(&self, p: &DVec, v: &DVec) -> DVec {
        match self {
            AmbientSpace::Euclidean { .. } | AmbientSpace::Heisenberg { .. } => v.clone(),
            AmbientSpace::SasakiBundle { .. } => sasaki::project_tangent(p, v),
            _ => sphere::project_tangent(p, v),
        }
    }

    /// Riemannian metric on tangent vectors at `p` (unchecked).
    pub fn metric(&self, p: &DVec, v: &DVec, w: &DVec) -> f64 {
        match self {
            AmbientSpace::Euclidean { .. }
            | AmbientSpace::RoundSphere { .. }
            | AmbientSpace::FsSphere { .. } => v.dot(w),
            AmbientSpace::BergerSphere { c, lambda } => berger::metric(p, *c, *lambda, v, w),
            AmbientSpace::Heisenberg { n } => {
                let a = heisenberg::frame_components(*n, p, v);
                let b = heisenberg::frame_components(*n, p, w);
                a.dot(&b)
            }
            AmbientSpace::SasakiBundle { c, .. } => sasaki::metric(p, *c, v, w),
        }
    }

    pub fn norm(&self, p: &DVec, v: &DVec) -> f64 {
        self.metric(p, v, v).max(0.0).sqrt()
    }

    /// Checked metric evaluation on validated tangent vectors.
    pub fn metric_at(&self, p: &DVec, v: &TangentVector, w: &TangentVector) -> Result<f64> {
        self.check_point(p)?;
        Ok(self.metric(p, &v.comp, &w.comp))
    }

    /// g-orthonormal basis of the tangent space at `p`. For the frame spaces
    /// this is the canonical moving frame; for the sphere kinds it is a
    /// deterministic pivoted Gram-Schmidt completion.
    pub fn orthonormal_frame(&self, p: &DVec) -> Vec<DVec> {
        match self {
            AmbientSpace::Euclidean { dim } => (0..*dim)
                .map(|i| {
                    let mut e = DVec::zeros(*dim);
                    e[i] = 1.0;
                    e
                })
                .collect(),
            AmbientSpace::RoundSphere { .. } | AmbientSpace::FsSphere { .. } => {
                let n = self.embed_dim();
                let mut cands = Vec::with_capacity(n + 1);
                for i in 0..n {
                    let mut e = DVec::zeros(n);
                    e[i] = 1.0;
                    cands.push(self.project_to_tangent(p, &e));
                }
                cands.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
                let basis = crate::linalg::gram_schmidt(&cands, |a, b| a.dot(b), 1e-6);
                debug_assert_eq!(basis.len(), self.dim());
                basis
            }
            AmbientSpace::BergerSphere { c, lambda } => berger::frame(p, *c, *lambda),
            AmbientSpace::Heisenberg { n } => {
                (0..self.dim()).map(|a| heisenberg::frame_vector(*n, p, a)).collect()
            }
            AmbientSpace::SasakiBundle { r, c } => sasaki::frame(p, *r, *c),
        }
    }

    pub(crate) fn frame_system(&self) -> Option<FrameSystem> {
        match self {
            AmbientSpace::BergerSphere { c, lambda } => Some(FrameSystem {
                m: 3,
                omega: berger::omega(*c, *lambda),
            }),
            AmbientSpace::Heisenberg { n } => Some(FrameSystem {
                m: 2 * n + 1,
                omega: heisenberg::omega(*n),
            }),
            AmbientSpace::SasakiBundle { r, c } => Some(FrameSystem {
                m: 3,
                omega: sasaki::omega(*r, *c),
            }),
            _ => None,
        }
    }

    /// Components of the tangent vector `v` in `orthonormal_frame(p)`.
    pub fn frame_components(&self, p: &DVec, v: &DVec) -> DVec {
        match self {
            AmbientSpace::Heisenberg { n } => heisenberg::frame_components(*n, p, v),
            _ => {
                let frame = self.orthonormal_frame(p);
                DVec::from_iterator(frame.len(), frame.iter().map(|f| self.metric(p, v, f)))
            }
        }
    }

    pub fn from_frame_components(&self, p: &DVec, comps: &DVec) -> DVec {
        match self {
            AmbientSpace::Heisenberg { n } => heisenberg::from_frame_components(*n, p, comps),
            _ => {
                let frame = self.orthonormal_frame(p);
                let mut out = DVec::zeros(self.embed_dim());
                for (a, f) in frame.iter().enumerate() {
                    out += f * comps[a];
                }
                out
            }
        }
    }

    /// Levi-Civita covariant derivative of a vector field along `dir` at `p`.
    /// The field is given in model coordinates; its variation is sampled by
    /// central differences along a retracted curve through `p`.
    pub fn covariant_derivative(
        &self,
        field: &dyn Fn(&DVec) -> DVec,
        p: &DVec,
        dir: &DVec,
    ) -> Result<DVec> {
        let eps = FIELD_STEP * (1.0 + p.norm());
        let sample = |t: f64| -> DVec {
            let q = self.project_to_manifold(&(p + dir * t));
            field(&q)
        };
        let out = match self {
            AmbientSpace::Euclidean { .. } => (sample(eps) - sample(-eps)) / (2.0 * eps),
            AmbientSpace::RoundSphere { .. } | AmbientSpace::FsSphere { .. } => {
                let d = (sample(eps) - sample(-eps)) / (2.0 * eps);
                self.project_to_tangent(p, &d)
            }
            _ => {
                let sys = self.frame_system().unwrap();
                let comps_at = |t: f64| -> DVec {
                    let q = self.project_to_manifold(&(p + dir * t));
                    self.frame_components(&q, &field(&q))
                };
                let dcomp = (comps_at(eps) - comps_at(-eps)) / (2.0 * eps);
                let vcomp = self.frame_components(p, dir);
                let fcomp = self.frame_components(p, &field(p));
                let m = sys.m;
                let mut out = DVec::zeros(m);
                for c in 0..m {
                    let mut acc = dcomp[c];
                    for a in 0..m {
                        for b in 0..m {
                            acc += vcomp[a] * fcomp[b] * sys.om(a, b, c);
                        }
                    }
                    out[c] = acc;
                }
                self.from_frame_components(p, &out)
            }
        };
        if !out.iter().all(|x| x.is_finite()) {
            return Err(GeomError::StencilError(
                "non-finite values while differentiating the field".into(),
            ));
        }
        Ok(out)
    }

    /// Curvature tensor R(X,Y,Z,W) = g(R(X,Y)Z, W) with the convention
    /// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z, which
    /// gives round spheres sectional curvature +c.
    pub fn riemann_at(&self, p: &DVec, x: &DVec, y: &DVec, z: &DVec, w: &DVec) -> Result<f64> {
        self.check_point(p)?;
        Ok(self.riemann(p, x, y, z, w))
    }

    pub(crate) fn riemann(&self, p: &DVec, x: &DVec, y: &DVec, z: &DVec, w: &DVec) -> f64 {
        match self {
            AmbientSpace::Euclidean { .. } => 0.0,
            AmbientSpace::RoundSphere { c, .. } => {
                c * (y.dot(z) * x.dot(w) - x.dot(z) * y.dot(w))
            }
            AmbientSpace::FsSphere { c } => {
                4.0 * c * (y.dot(z) * x.dot(w) - x.dot(z) * y.dot(w))
            }
            _ => {
                let sys = self.frame_system().unwrap();
                let (xc, yc, zc, wc) = (
                    self.frame_components(p, x),
                    self.frame_components(p, y),
                    self.frame_components(p, z),
                    self.frame_components(p, w),
                );
                let m = sys.m;
                let mut acc = 0.0;
                for a in 0..m {
                    if xc[a] == 0.0 {
                        continue;
                    }
                    for b in 0..m {
                        if yc[b] == 0.0 {
                            continue;
                        }
                        for cc in 0..m {
                            for e in 0..m {
                                let r = sys.riemann_frame(a, b, cc, e);
                                if r != 0.0 {
                                    acc += xc[a] * yc[b] * zc[cc] * wc[e] * r;
                                }
                            }
                        }
                    }
                }
                acc
            }
        }
    }

    /// Sectional curvature of the plane spanned by orthonormal x, y.
    pub fn sectional(&self, p: &DVec, x: &DVec, y: &DVec) -> f64 {
        let gxx = self.metric(p, x, x);
        let gyy = self.metric(p, y, y);
        let gxy = self.metric(p, x, y);
        self.riemann(p, x, y, y, x) / (gxx * gyy - gxy * gxy)
    }

    /// Geodesic from `p` with initial velocity `v`, evaluated at time `t`.
    pub fn geodesic_shoot(&self, p: &DVec, v: &DVec, t: f64) -> Result<DVec> {
        self.check_point(p)?;
        match self {
            AmbientSpace::Euclidean { .. } => Ok(p + v * t),
            AmbientSpace::RoundSphere { .. } | AmbientSpace::FsSphere { .. } => {
                Ok(sphere::exp_map(p, &(v * t), self.sphere_radius().unwrap()))
            }
            AmbientSpace::Heisenberg { n } => Ok(heisenberg::exp_map(*n, p, &(v * t))),
            _ => {
                let sys = self.frame_system().unwrap();
                let comps = self.frame_components(p, v);
                let end = frame::integrate_geodesic(
                    &sys,
                    &|q| self.orthonormal_frame(q),
                    &|q| self.project_to_manifold(q),
                    p,
                    comps.as_slice(),
                    None,
                    t,
                    64.0,
                )?;
                Ok(end.point)
            }
        }
    }

    pub fn exp_map(&self, p: &DVec, v: &DVec) -> Result<DVec> {
        self.geodesic_shoot(p, v, 1.0)
    }

    /// Inverse exponential. Closed form on Euclidean space, spheres, and the
    /// Heisenberg group; shooting iteration on Berger and Sasaki models.
    pub fn log_map(&self, p: &DVec, q: &DVec) -> Result<DVec> {
        match self {
            AmbientSpace::Euclidean { .. } => Ok(q - p),
            AmbientSpace::RoundSphere { .. } | AmbientSpace::FsSphere { .. } => {
                sphere::log_map(p, q, self.sphere_radius().unwrap())
            }
            AmbientSpace::Heisenberg { n } => heisenberg::log_map(*n, p, q),
            _ => frame::log_by_shooting(self, p, q),
        }
    }

    /// Geodesic distance (exact where the log map is exact).
    pub fn distance(&self, p: &DVec, q: &DVec) -> Result<f64> {
        Ok(self.norm(p, &self.log_map(p, q)?))
    }

    /// Parallel transport of `w` along the geodesic from `p` with velocity
    /// `v` for time `t`.
    pub fn parallel_transport(&self, p: &DVec, v: &DVec, w: &DVec, t: f64) -> Result<DVec> {
        match self {
            AmbientSpace::Euclidean { .. } => Ok(w.clone()),
            AmbientSpace::RoundSphere { .. } | AmbientSpace::FsSphere { .. } => {
                Ok(sphere::parallel_transport(p, v, w, t, self.sphere_radius().unwrap()))
            }
            _ => {
                let sys = self.frame_system().unwrap();
                let vcomps = self.frame_components(p, v);
                let wcomps = self.frame_components(p, w);
                let end = frame::integrate_geodesic(
                    &sys,
                    &|q| self.orthonormal_frame(q),
                    &|q| self.project_to_manifold(q),
                    p,
                    vcomps.as_slice(),
                    Some(wcomps.as_slice()),
                    t,
                    64.0,
                )?;
                let wt = end.transported_frame.expect("requested transport");
                Ok(self.from_frame_components(&end.point, &DVec::from_vec(wt)))
            }
        }
    }

    /// Deterministic random point on the model (validators, audits).
    pub fn random_point(&self, rng: &mut impl rand::Rng) -> DVec {
        let gauss = |rng: &mut dyn rand::RngCore, n: usize| {
            DVec::from_iterator(n, (0..n).map(|_| {
                // Box-Muller from two uniforms
                let u1: f64 = rand::Rng::gen_range(rng, 1e-12..1.0);
                let u2: f64 = rand::Rng::gen_range(rng, 0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            }))
        };
        match self {
            AmbientSpace::Euclidean { dim } => gauss(rng, *dim),
            AmbientSpace::Heisenberg { n } => gauss(rng, 2 * n + 1),
            AmbientSpace::SasakiBundle { r, c } => {
                let rb = 1.0 / c.sqrt();
                let p = {
                    let g = gauss(rng, 3);
                    &g * (rb / g.norm())
                };
                let phat = &p / rb;
                let mut u = gauss(rng, 3);
                u -= &phat * u.dot(&phat);
                let u = &u * (*r / u.norm());
                sasaki::assemble(&p, &u)
            }
            _ => {
                let radius = self.sphere_radius().unwrap();
                let g = gauss(rng, self.embed_dim());
                &g * (radius / g.norm())
            }
        }
    }

    /// Deterministic random tangent vector at `p` (unit length by default).
    pub fn random_tangent(&self, rng: &mut impl rand::Rng, p: &DVec) -> DVec {
        let frame = self.orthonormal_frame(p);
        let mut out = DVec::zeros(self.embed_dim());
        let mut comps = Vec::with_capacity(frame.len());
        for _ in 0..frame.len() {
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            comps.push((-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos());
        }
        let norm: f64 = comps.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (f, c) in frame.iter().zip(&comps) {
            out += f * (c / norm);
        }
        out
    }

    /// Connection-table / connection-lemma audit; see [`validate`].
    pub fn validate_connection_tables(&self, seed: u64) -> Result<validate::TableReport> {
        validate::validate_connection_tables(self, seed)
    }
}

/// A validated tangent vector: `comp` lies in the tangent space of the
/// constraint manifold at `base`.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub base: DVec,
    pub comp: DVec,
}

impl TangentVector {
    pub fn new(space: &AmbientSpace, base: DVec, comp: DVec) -> Result<Self> {
        space.check_point(&base)?;
        let defect = (&comp - space.project_to_tangent(&base, &comp)).norm();
        if defect > 1e-10 * comp.norm().max(1e-30) {
            return Err(GeomError::ConstraintViolation {
                space: format!("{} tangent space", space.kind_name()),
                residual: defect,
            });
        }
        Ok(Self { base, comp })
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceDescriptor {
    kind: String,
    dim: usize,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

impl From<AmbientSpace> for SpaceDescriptor {
    fn from(s: AmbientSpace) -> Self {
        let mut params = BTreeMap::new();
        match &s {
            AmbientSpace::Euclidean { .. } => {}
            AmbientSpace::RoundSphere { c, .. } => {
                params.insert("c".into(), *c);
            }
            AmbientSpace::FsSphere { c } => {
                params.insert("c".into(), *c);
            }
            AmbientSpace::BergerSphere { c, lambda } => {
                params.insert("c".into(), *c);
                params.insert("lambda".into(), *lambda);
            }
            AmbientSpace::Heisenberg { n } => {
                params.insert("n".into(), *n as f64);
            }
            AmbientSpace::SasakiBundle { r, c } => {
                params.insert("r".into(), *r);
                params.insert("c".into(), *c);
            }
        }
        SpaceDescriptor {
            kind: s.kind_name().into(),
            dim: s.dim(),
            params,
        }
    }
}

impl TryFrom<SpaceDescriptor> for AmbientSpace {
    type Error = String;

    fn try_from(d: SpaceDescriptor) -> std::result::Result<Self, String> {
        let get = |key: &str| -> std::result::Result<f64, String> {
            d.params
                .get(key)
                .copied()
                .ok_or_else(|| format!("{} requires param '{key}'", d.kind))
        };
        let positive = |key: &str| -> std::result::Result<f64, String> {
            let v = get(key)?;
            if v > 0.0 {
                Ok(v)
            } else {
                Err(format!("{} param '{key}' must be positive, got {v}", d.kind))
            }
        };
        let space = match d.kind.as_str() {
            "EUCLIDEAN" => AmbientSpace::Euclidean { dim: d.dim },
            "ROUND_SPHERE" => AmbientSpace::RoundSphere {
                dim: d.dim,
                c: positive("c")?,
            },
            "FS_SPHERE" => AmbientSpace::FsSphere { c: positive("c")? },
            "BERGER_SPHERE" => AmbientSpace::BergerSphere {
                c: positive("c")?,
                lambda: positive("lambda")?,
            },
            "HEISENBERG" => {
                let n = get("n")? as usize;
                if n == 0 {
                    return Err("HEISENBERG requires n >= 1".into());
                }
                AmbientSpace::Heisenberg { n }
            }
            "SASAKI_BUNDLE" => AmbientSpace::SasakiBundle {
                r: positive("r")?,
                c: positive("c")?,
            },
            other => return Err(format!("unknown space kind '{other}'")),
        };
        if space.dim() != d.dim {
            return Err(format!(
                "{} with these params has dim {}, descriptor says {}",
                d.kind,
                space.dim(),
                d.dim
            ));
        }
        Ok(space)
    }
}

#[cfg(test)]
mod tests;
