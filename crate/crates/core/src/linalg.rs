//! Small dense linear-algebra helpers on top of nalgebra: rank decisions,
//! nullspaces, least squares and symmetric signatures.

use nalgebra::{Complex, ComplexField, DMatrix, DVector};

/// Relative singular-value cut used for all rank decisions.
pub const RANK_REL_TOL: f64 = 1e-10;

fn padded<T: ComplexField>(m: &DMatrix<T>) -> DMatrix<T> {
    if m.nrows() >= m.ncols() {
        m.clone()
    } else {
        let mut p = DMatrix::zeros(m.ncols(), m.ncols());
        p.rows_mut(0, m.nrows()).copy_from(m);
        p
    }
}

/// Thin SVD `m = u · diag(s) · v_t` of a matrix with `nrows ≥ ncols`.
pub struct Svd<T: ComplexField> {
    pub u: DMatrix<T>,
    pub s: DVector<f64>,
    pub v_t: DMatrix<T>,
}

impl<T: ComplexField<RealField = f64>> Svd<T> {
    fn recompose(&self) -> DMatrix<T> {
        let mut us = self.u.clone();
        for (j, sj) in self.s.iter().enumerate() {
            us.column_mut(j).scale_mut(*sj);
        }
        us * &self.v_t
    }

    fn error(&self, m: &DMatrix<T>) -> f64 {
        let e = (self.recompose() - m).norm();
        if e.is_finite() {
            e
        } else {
            f64::INFINITY
        }
    }
}

fn raw_svd<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Svd<T> {
    let svd = m.clone().svd(true, true);
    Svd { u: svd.u.expect("u requested"), s: svd.singular_values, v_t: svd.v_t.expect("v_t requested") }
}

/// SVD with a reconstruction check.
///
/// nalgebra's bidiagonal iteration occasionally returns a decomposition that
/// does not reproduce its input; when that happens the factorization is
/// redone on the triangular factor of a QR decomposition, then on the
/// adjoint, and the most accurate result is kept.
pub fn checked_svd<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Svd<T> {
    let m = padded(m);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    let first = raw_svd(&m);
    let e0 = first.error(&m);
    if e0 <= tol {
        return first;
    }
    let mut best = (e0, first);
    let qr = m.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let inner = raw_svd(&r);
    let cand = Svd { u: q * inner.u, s: inner.s, v_t: inner.v_t };
    let e1 = cand.error(&m);
    if e1 <= tol {
        return cand;
    }
    if e1 < best.0 {
        best = (e1, cand);
    }
    if m.nrows() == m.ncols() {
        let t = raw_svd(&m.adjoint());
        let cand = Svd { u: t.v_t.adjoint(), s: t.s, v_t: t.u.adjoint() };
        let e2 = cand.error(&m);
        if e2 < best.0 {
            best = (e2, cand);
        }
    }
    best.1
}

/// Singular values, largest first.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = checked_svd(m).s.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank with cut `rel · σ_max`.
pub fn rank(m: &DMatrix<f64>, rel: f64) -> usize {
    let s = singular_values(m);
    let cut = rel * s.first().copied().unwrap_or(0.0);
    s.iter().filter(|v| **v > cut).count()
}

fn nullspace_generic<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, rel: f64) -> Vec<DVector<T>> {
    let svd = checked_svd(m);
    let cut = rel * svd.s.max();
    svd.s
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cut)
        .map(|(i, _)| svd.v_t.row(i).adjoint())
        .collect()
}

/// Orthonormal basis of the numerical nullspace.
pub fn nullspace(m: &DMatrix<f64>, rel: f64) -> Vec<DVector<f64>> {
    nullspace_generic(m, rel)
}

/// Complex nullspace, same rank rule.
pub fn nullspace_complex(m: &DMatrix<Complex<f64>>, rel: f64) -> Vec<DVector<Complex<f64>>> {
    nullspace_generic(m, rel)
}

/// Least-squares solution of `a x ≈ b` and the residual norm `‖a x − b‖`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let n = a.ncols();
    let mut ap = padded(a);
    let mut bp = DVector::zeros(ap.nrows());
    bp.rows_mut(0, b.len()).copy_from(b);
    if ap.nrows() == 0 {
        ap = DMatrix::zeros(n, n);
        bp = DVector::zeros(n);
    }
    let svd = checked_svd(&ap);
    let smax = svd.s.max();
    let eps = (smax * 1e-13).max(f64::MIN_POSITIVE);
    let utb = svd.u.transpose() * &bp;
    let mut y = DVector::zeros(n);
    for i in 0..n {
        if svd.s[i] > eps {
            y[i] = utb[i] / svd.s[i];
        }
    }
    let x = svd.v_t.transpose() * y;
    let r = (a * &x - b).norm();
    (x, r)
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix with zero cut
/// `rel · max|λ|`.
pub fn signature(b: &DMatrix<f64>, rel: f64) -> (usize, usize, usize) {
    let sym = (b + b.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    let lmax = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = rel * lmax;
    let mut out = (0, 0, 0);
    for v in eig.iter() {
        if *v > cut {
            out.0 += 1;
        } else if *v < -cut {
            out.1 += 1;
        } else {
            out.2 += 1;
        }
    }
    out
}
