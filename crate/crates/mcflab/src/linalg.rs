//! Small shared numerics: orthonormalization and weighted least squares.

use crate::{DMat, DVec};

/// Gram-Schmidt with respect to an arbitrary inner product. Vectors with
/// residual norm below `tol` are dropped.
pub fn gram_schmidt<F>(vecs: &[DVec], inner: F, tol: f64) -> Vec<DVec>
where
    F: Fn(&DVec, &DVec) -> f64,
{
    let mut basis: Vec<DVec> = Vec::with_capacity(vecs.len());
    for v in vecs {
        let mut w = v.clone();
        for b in &basis {
            let coef = inner(&w, b);
            w -= b * coef;
        }
        let n2 = inner(&w, &w);
        if n2.sqrt() > tol {
            basis.push(w / n2.sqrt());
        }
    }
    basis
}

/// Completes `partial` to an orthonormal basis of R^dim (Euclidean inner
/// product), pivoting on the least-aligned coordinate axes.
pub fn complete_basis_euclidean(partial: &[DVec], dim: usize) -> Vec<DVec> {
    let mut basis: Vec<DVec> = partial.to_vec();
    while basis.len() < dim {
        // pick the axis with the largest residual
        let mut best: Option<(f64, DVec)> = None;
        for axis in 0..dim {
            let mut e = DVec::zeros(dim);
            e[axis] = 1.0;
            for b in &basis {
                let c = e.dot(b);
                e -= b * c;
            }
            let n = e.norm();
            if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
                best = Some((n, e));
            }
        }
        let (n, e) = best.expect("dim > 0");
        assert!(n > 1e-12, "cannot complete basis: degenerate partial set");
        basis.push(e / n);
    }
    basis
}

/// Solves the weighted least-squares problem min ||W^(1/2)(A x - b)|| via the
/// normal equations. Returns `None` when the normal matrix is singular.
pub fn weighted_lsq(a: &DMat, w: &[f64], bs: &[DVec]) -> Option<Vec<DVec>> {
    let n = a.ncols();
    let mut ata = DMat::zeros(n, n);
    for (row, &wk) in w.iter().enumerate() {
        let r = a.row(row);
        for i in 0..n {
            for j in 0..n {
                ata[(i, j)] += wk * r[i] * r[j];
            }
        }
    }
    let chol = ata.cholesky()?;
    let mut out = Vec::with_capacity(bs.len());
    for b in bs {
        let mut atb = DVec::zeros(n);
        for (row, &wk) in w.iter().enumerate() {
            let r = a.row(row);
            for i in 0..n {
                atb[i] += wk * r[i] * b[row];
            }
        }
        out.push(chol.solve(&atb));
    }
    Some(out)
}

/// Ordinary linear regression y = a + b t; returns (a, b).
pub fn linear_fit(ts: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = ts.len() as f64;
    let st: f64 = ts.iter().sum();
    let sy: f64 = ys.iter().sum();
    let stt: f64 = ts.iter().map(|t| t * t).sum();
    let sty: f64 = ts.iter().zip(ys).map(|(t, y)| t * y).sum();
    let denom = n * stt - st * st;
    let b = (n * sty - st * sy) / denom;
    let a = (sy - b * st) / n;
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvec;

    #[test]
    fn gram_schmidt_orthonormalizes() {
        let vecs = vec![dvec(&[2.0, 0.0, 0.0]), dvec(&[1.0, 1.0, 0.0])];
        let basis = gram_schmidt(&vecs, |a, b| a.dot(b), 1e-12);
        assert_eq!(basis.len(), 2);
        assert!((basis[0].norm() - 1.0).abs() < 1e-14);
        assert!(basis[0].dot(&basis[1]).abs() < 1e-14);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let ts = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 0.5, 0.0, -0.5];
        let (a, b) = linear_fit(&ts, &ys);
        assert!((a - 1.0).abs() < 1e-12 && (b + 0.5).abs() < 1e-12);
    }
}
