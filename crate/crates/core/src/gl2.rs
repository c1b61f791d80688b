//! The irreducible four-dimensional representation of GL(2,ℝ).
//!
//! A vector `X ∈ ℝ⁴` is read as a symmetric 3-spinor
//! `(Ψ¹¹¹, Ψ¹¹², Ψ¹²², Ψ²²²) = (X¹, X², X³, X⁴)`; contractions use the volume
//! form `ε₁₂ = +1`.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::FrameTag;
use crate::forms::SymTensor;

pub type Vector4 = [f64; 4];

/// Relative threshold for null-direction classification.
pub const CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum Gl2Error {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("singular matrix (det = {0})")]
    Singular(f64),
}

/// Totally symmetric 3-spinor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spinor3(pub [f64; 4]);

impl Spinor3 {
    pub fn from_vector(x: &Vector4) -> Self {
        Spinor3(*x)
    }

    /// `Ψ^{ABC}` with indices in `{0, 1}`; only the number of 1s matters.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.0[a + b + c]
    }
}

const EPS: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

/// Closed form of `L(X)`.
pub fn endomorphism_l(x: &Vector4) -> Matrix2<f64> {
    let [x1, x2, x3, x4] = *x;
    Matrix2::new(
        x2 * x3 - x1 * x4,
        -2.0 * x2 * x2 + 2.0 * x1 * x3,
        2.0 * x3 * x3 - 2.0 * x2 * x4,
        -x2 * x3 + x1 * x4,
    )
}

/// `L^A_H = Ψ^{ABC} Ψ^{DEF} ε_CD ε_BE ε_FH`, summed term by term.
pub fn endomorphism_l_contracted(x: &Vector4) -> Matrix2<f64> {
    let p = Spinor3::from_vector(x);
    let mut l = Matrix2::zeros();
    for a in 0..2 {
        for h in 0..2 {
            let mut s = 0.0;
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        for e in 0..2 {
                            for f in 0..2 {
                                s += p.get(a, b, c) * p.get(d, e, f) * EPS[c][d] * EPS[b][e] * EPS[f][h];
                            }
                        }
                    }
                }
            }
            l[(a, h)] = s;
        }
    }
    l
}

/// `Υ(X,X,X,X)` as the expanded quartic.
pub fn quartic_upsilon(x: &Vector4) -> f64 {
    let [x1, x2, x3, x4] = *x;
    3.0 * x2 * x2 * x3 * x3 - 4.0 * x1 * x3 * x3 * x3 - 4.0 * x2 * x2 * x2 * x4 + 6.0 * x1 * x2 * x3 * x4
        - x1 * x1 * x4 * x4
}

/// Symmetric 4-linear form with `Υ(X,X,X,X)` on the diagonal, by the
/// polarization identity over sign patterns.
pub fn upsilon_polarized(x1: &Vector4, x2: &Vector4, x3: &Vector4, x4: &Vector4) -> f64 {
    let vs = [x1, x2, x3, x4];
    let mut acc = 0.0;
    for mask in 0u32..16 {
        let mut v = [0.0; 4];
        let mut sign = 1.0;
        for (k, x) in vs.iter().enumerate() {
            let s = if mask & (1 << k) != 0 { -1.0 } else { 1.0 };
            sign *= s;
            for i in 0..4 {
                v[i] += s * x[i];
            }
        }
        acc += sign * quartic_upsilon(&v);
    }
    acc / (16.0 * 24.0)
}

/// `Υ` as a rank-4 symmetric tensor over the given four-dimensional coframe.
pub fn upsilon_tensor(frame: FrameTag) -> SymTensor {
    let e = |i: usize| {
        let mut v = vec![0.0; 4];
        v[i] = 1.0;
        v
    };
    let (w1, w2, w3, w4) = (e(0), e(1), e(2), e(3));
    SymTensor::from_products(
        4,
        frame,
        &[
            (3.0, vec![w2.clone(), w2.clone(), w3.clone(), w3.clone()]),
            (-4.0, vec![w1.clone(), w3.clone(), w3.clone(), w3.clone()]),
            (-4.0, vec![w2.clone(), w2.clone(), w2.clone(), w4.clone()]),
            (6.0, vec![w1.clone(), w2.clone(), w3.clone(), w4.clone()]),
            (-1.0, vec![w1.clone(), w1, w4.clone(), w4]),
        ],
    )
}

/// The three bilinear forms `g¹, g², g³` as symmetric tensors.
pub fn bilinear_tensors(frame: FrameTag) -> [SymTensor; 3] {
    let e = |i: usize| {
        let mut v = vec![0.0; 4];
        v[i] = 1.0;
        v
    };
    let p = |terms: &[(f64, usize, usize)]| {
        let t: Vec<(f64, Vec<Vec<f64>>)> = terms.iter().map(|&(c, i, j)| (c, vec![e(i), e(j)])).collect();
        SymTensor::from_products(2, frame, &t)
    };
    [
        p(&[(1.0, 0, 2), (-1.0, 1, 1)]),
        p(&[(1.0, 2, 2), (-1.0, 1, 3)]),
        p(&[(1.0, 0, 3), (-1.0, 1, 2)]),
    ]
}

/// Polarized `(g¹(X,Y), g²(X,Y), g³(X,Y))`.
pub fn bilinears(x: &Vector4, y: &Vector4) -> [f64; 3] {
    [
        0.5 * (x[0] * y[2] + x[2] * y[0]) - x[1] * y[1],
        x[2] * y[2] - 0.5 * (x[1] * y[3] + x[3] * y[1]),
        0.5 * (x[0] * y[3] + x[3] * y[0]) - 0.5 * (x[1] * y[2] + x[2] * y[1]),
    ]
}

/// `ω(X,Y) = X¹Y⁴ − X⁴Y¹ − 3X²Y³ + 3X³Y²`.
pub fn invariant_two_form(x: &Vector4, y: &Vector4) -> f64 {
    x[0] * y[3] - x[3] * y[0] - 3.0 * x[1] * y[2] + 3.0 * x[2] * y[1]
}

/// Antisymmetric matrix of `ω`, so that `ω(X,Y) = Xᵀ W Y`.
pub fn two_form_matrix() -> Matrix4<f64> {
    let mut w = Matrix4::zeros();
    w[(0, 3)] = 1.0;
    w[(3, 0)] = -1.0;
    w[(1, 2)] = -3.0;
    w[(2, 1)] = 3.0;
    w
}

/// `ρ(α)` acting on `ℝ⁴ ≅ ⊙³ℝ²`.
pub fn gl2_action(alpha: &Matrix2<f64>) -> Result<Matrix4<f64>, Gl2Error> {
    let det = alpha.determinant();
    if det.abs() < 1e-14 * alpha.norm_squared().max(f64::MIN_POSITIVE) || !det.is_finite() {
        return Err(Gl2Error::Singular(det));
    }
    let mut rho = Matrix4::zeros();
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let psi = Spinor3::from_vector(&e);
        // image component with `i` ones sits at representative index (0..,1..)
        for i in 0..4 {
            let rep = [usize::from(i >= 3), usize::from(i >= 2), usize::from(i >= 1)];
            let mut s = 0.0;
            for a1 in 0..2 {
                for b1 in 0..2 {
                    for c1 in 0..2 {
                        s += alpha[(rep[0], a1)] * alpha[(rep[1], b1)] * alpha[(rep[2], c1)] * psi.get(a1, b1, c1);
                    }
                }
            }
            rho[(i, j)] = s;
        }
    }
    Ok(rho)
}

/// Infinitesimal action of `A ∈ gl(2,ℝ)`: the derivative of `ρ(exp tA)` at 0.
pub fn gl2_algebra_action(a: &Matrix2<f64>) -> Matrix4<f64> {
    let h = 1e-6;
    let id = Matrix2::identity();
    let plus = gl2_action(&(id + a * h)).expect("near identity");
    let minus = gl2_action(&(id - a * h)).expect("near identity");
    (plus - minus) / (2.0 * h)
}

/// Algebraic type of a nonzero direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NullClass {
    /// on the twisted cubic: null for `g¹, g², g³`
    TypeN,
    /// strictly on the tangent variety: `Υ`-null only
    TypeII,
    NotNull,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub class: NullClass,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub upsilon: f64,
}

pub fn classify_direction(x: &Vector4) -> Result<NullClass, Gl2Error> {
    classify_with(x, CLASSIFY_TOL).map(|c| c.class)
}

pub fn classify_with(x: &Vector4, tol: f64) -> Result<Classification, Gl2Error> {
    let n2: f64 = x.iter().map(|c| c * c).sum();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Gl2Error::ZeroVector);
    }
    let [g1, g2, g3] = bilinears(x, x);
    let upsilon = quartic_upsilon(x);
    let class = if [g1, g2, g3].iter().all(|g| g.abs() < tol * n2) {
        NullClass::TypeN
    } else if upsilon.abs() < tol * n2 * n2 {
        NullClass::TypeII
    } else {
        NullClass::NotNull
    };
    Ok(Classification { class, g1, g2, g3, upsilon })
}

/// `ν(t) = (1, t, t², t³)`.
pub fn cubic_point(t: f64) -> Vector4 {
    [1.0, t, t * t, t * t * t]
}

/// `ν(t) + s ν̇(t)`.
pub fn tangent_point(t: f64, s: f64) -> Vector4 {
    [1.0, t + s, t * t + 2.0 * s * t, t * t * t + 3.0 * s * t * t]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_examples() {
        assert_eq!(endomorphism_l(&[1.0, 0.0, 0.0, 0.0]), Matrix2::zeros());
        let x = [0.3, -1.2, 2.0, 0.7];
        assert!(endomorphism_l(&x).trace().abs() < 1e-15);
        assert!((endomorphism_l(&x) - endomorphism_l_contracted(&x)).norm() < 1e-12);
    }

    #[test]
    fn upsilon_examples() {
        for t in [-2.0, 0.0, 0.5, 3.0] {
            assert!(quartic_upsilon(&cubic_point(t)).abs() < 1e-9);
        }
        let x = [0.0, 1.0, 0.0, 0.0];
        assert_eq!(quartic_upsilon(&x), 0.0);
        assert_eq!(bilinears(&x, &x), [-1.0, 0.0, 0.0]);
        assert_eq!(quartic_upsilon(&[1.0, 0.0, 0.0, 1.0]), -1.0);
    }

    #[test]
    fn polarization_routes_agree() {
        let t = upsilon_tensor(FrameTag::ZFrame);
        let a = [0.3, -1.0, 0.5, 2.0];
        let b = [1.0, 0.2, -0.7, 0.1];
        let c = [-0.4, 0.9, 1.1, 0.0];
        let d = [0.6, 0.6, -0.3, -1.5];
        let direct = t.eval_components(&[&a, &b, &c, &d]);
        assert!((direct - upsilon_polarized(&a, &b, &c, &d)).abs() < 1e-12);
        assert!((upsilon_polarized(&a, &a, &a, &a) - quartic_upsilon(&a)).abs() < 1e-12);
        let g = bilinear_tensors(FrameTag::ZFrame);
        let pol = bilinears(&a, &b);
        for i in 0..3 {
            assert!((g[i].eval_components(&[&a, &b]) - pol[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn two_form_examples() {
        assert_eq!(invariant_two_form(&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]), 1.0);
        assert_eq!(invariant_two_form(&[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]), -3.0);
        let x = [0.2, 1.0, -3.0, 4.0];
        assert_eq!(invariant_two_form(&x, &x), 0.0);
        // ω∧ω ≠ 0 ⇔ the matrix is invertible
        assert!(two_form_matrix().determinant().abs() > 1.0);
    }

    #[test]
    fn action_examples() {
        assert!((gl2_action(&Matrix2::identity()).unwrap() - Matrix4::identity()).norm() < 1e-15);
        let r = gl2_action(&Matrix2::new(2.0, 0.0, 0.0, 2.0)).unwrap();
        assert!((r - Matrix4::identity() * 8.0).norm() < 1e-14);
        assert!(matches!(gl2_action(&Matrix2::new(1.0, 2.0, 2.0, 4.0)), Err(Gl2Error::Singular(_))));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_direction(&[1.0, 2.0, 4.0, 8.0]).unwrap(), NullClass::TypeN);
        assert_eq!(classify_direction(&tangent_point(1.0, 0.5)).unwrap(), NullClass::TypeII);
        assert_eq!(classify_direction(&tangent_point(-1.0, 2.0)).unwrap(), NullClass::TypeII);
        assert_eq!(classify_direction(&[1.0, 0.0, 0.0, 1.0]).unwrap(), NullClass::NotNull);
        assert_eq!(classify_direction(&[0.0; 4]), Err(Gl2Error::ZeroVector));
        assert_eq!(cubic_point(0.0), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(tangent_point(1.7, 0.0), cubic_point(1.7));
    }

    #[test]
    fn serializes_class_names() {
        assert_eq!(serde_json::to_string(&NullClass::TypeII).unwrap(), "\"TypeII\"");
    }
}
