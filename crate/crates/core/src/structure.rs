//! Structure-group reductions on the contact distribution: the operator `K`
//! built from a metric and `dω⁰`, its eigenspace split, the Levi form of the
//! landing structure, and linear stabilizer solvers.

use nalgebra::{Complex, DMatrix, DVector, Matrix2, Matrix4, Vector4};
use serde::Serialize;
use thiserror::Error;

use crate::chart::{contact_form_field, ChartPoint5, FrameTag, Vector5};
use crate::forms::{FormValue, SymTensor, VectorField};
use crate::linalg::{lstsq, nullspace, nullspace_complex, rank};
use crate::maneuvers::{attacking_metric, landing_metric};

pub type C64 = Complex<f64>;

#[derive(Debug, Error, PartialEq)]
pub enum StructureError {
    #[error("metric is not invertible on the distribution")]
    SingularMetric,
    #[error("K̃² is not a multiple of the identity (defect {0:e})")]
    NotScalarSquare(f64),
    #[error("eigenspace dimensions {0} and {1}, expected 2 and 2")]
    Defective(usize, usize),
    #[error("stabilizer needs at least one tensor")]
    EmptyInput,
    #[error("tensor rank {0} over dimension 4 has {1} coefficients")]
    BadTensor(usize, usize),
}

/// `dω⁰(fᵢ, fⱼ)` for the four frame vectors at `p`.
pub fn symplectic_matrix(frame: FrameTag, p: &ChartPoint5) -> Matrix4<f64> {
    let vs = frame.vectors(p).expect("distribution frame");
    let dw: FormValue<5> = contact_form_field().d().at(&p.to_array());
    Matrix4::from_fn(|i, j| dw.eval(&[vs[i], vs[j]]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KOperator {
    pub frame: FrameTag,
    pub matrix: Matrix4<f64>,
    /// sign of the normalized square: `K² = sign · Id`
    pub sign: i8,
    /// `λ` with `K̃² = λ Id` before normalization
    pub square: f64,
}

/// `K̃ = g⁻¹Ω`.
pub fn k_tilde(g: &SymTensor, omega: &Matrix4<f64>) -> Result<Matrix4<f64>, StructureError> {
    assert_eq!((g.rank(), g.dim()), (2, 4));
    let gm = Matrix4::from_row_slice(g.coeffs());
    let inv = gm.try_inverse().ok_or(StructureError::SingularMetric)?;
    Ok(inv * omega)
}

/// Normalized `K = K̃/√|λ|` where `K̃² = λ Id`.
pub fn k_operator(g: &SymTensor, omega: &Matrix4<f64>, frame: FrameTag) -> Result<KOperator, StructureError> {
    let kt = k_tilde(g, omega)?;
    let sq = kt * kt;
    let lambda = sq.trace() / 4.0;
    let defect = (sq - Matrix4::identity() * lambda).norm();
    if defect > 1e-8 * lambda.abs().max(1.0) || lambda == 0.0 {
        return Err(StructureError::NotScalarSquare(defect));
    }
    Ok(KOperator { frame, matrix: kt / lambda.abs().sqrt(), sign: if lambda > 0.0 { 1 } else { -1 }, square: lambda })
}

impl KOperator {
    fn eigenvalue(&self) -> C64 {
        if self.sign > 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 1.0)
        }
    }

    /// Fix the overall sign so that `v` lies in the `+1` (or `+i`) eigenspace.
    pub fn with_plus_on(mut self, v: &Vector4<C64>) -> Self {
        let kv = self.matrix.map(|c| C64::new(c, 0.0)) * v;
        let lam = self.eigenvalue();
        if (kv - v * lam).norm() > (kv + v * lam).norm() {
            self.matrix = -self.matrix;
        }
        self
    }

    pub fn square_defect(&self) -> f64 {
        (self.matrix * self.matrix - Matrix4::identity() * self.sign as f64).norm()
    }
}

/// Attacking `K` in the given frame, on the branch with `E₁` in `𝒟⁺`.
pub fn attacking_k(frame: FrameTag, p: &ChartPoint5) -> Result<KOperator, StructureError> {
    let g = in_frame(&attacking_metric(p), frame, p);
    let k = k_operator(&g, &symplectic_matrix(frame, p), frame)?;
    let e1 = frame_components(frame, p, &[1.0, 0.0, p.a, 0.0, 0.0]);
    Ok(k.with_plus_on(&e1.map(|c| C64::new(c, 0.0))))
}

/// Landing `K` in the coordinate frame, on the branch with eigenvalue `+i` on `Z₁`.
pub fn landing_k(p: &ChartPoint5) -> Result<KOperator, StructureError> {
    let frame = FrameTag::Coordinate;
    let k = k_operator(&landing_metric(p), &symplectic_matrix(frame, p), frame)?;
    Ok(k.with_plus_on(&landing_z(p)[0]))
}

fn frame_components(frame: FrameTag, _p: &ChartPoint5, v: &Vector5) -> Vector4<f64> {
    Vector4::from_vec(frame.components(v))
}

/// Re-express a coordinate-frame tensor in another distribution frame.
pub fn in_frame(t: &SymTensor, frame: FrameTag, p: &ChartPoint5) -> SymTensor {
    if t.frame() == frame {
        return t.clone();
    }
    let vs = frame.vectors(p).expect("distribution frame");
    let fs: Vec<Vec<f64>> = vs.iter().map(|v| t.frame().components(v)).collect();
    t.restrict(&fs, frame)
}

/// The complex frame `Z₁, Z₂` in coordinate-frame components `(x, y, a, b)`.
pub fn landing_z(p: &ChartPoint5) -> [Vector4<C64>; 2] {
    let (a, b) = (p.a, p.b);
    let r = (1.0 + a * a + b * b).sqrt();
    let z = C64::new(0.0, 0.0);
    [
        Vector4::new(z, z, C64::new(0.0, 1.0 + a * a), C64::new(r, a * b)),
        Vector4::new(C64::new(0.0, 1.0 + b * b), C64::new(r, -a * b), z, z),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub enum EigenSplit {
    Real { plus: Vec<Vector4<f64>>, minus: Vec<Vector4<f64>> },
    Complex { plus: Vec<Vector4<C64>>, minus: Vec<Vector4<C64>> },
}

pub fn eigen_split(k: &KOperator) -> Result<EigenSplit, StructureError> {
    let m = DMatrix::from_iterator(4, 4, k.matrix.iter().copied());
    let to4 = |v: &DVector<f64>| Vector4::new(v[0], v[1], v[2], v[3]);
    if k.sign > 0 {
        let id = DMatrix::identity(4, 4);
        let plus = nullspace(&(&m - &id), 1e-8);
        let minus = nullspace(&(&m + &id), 1e-8);
        if plus.len() != 2 || minus.len() != 2 {
            return Err(StructureError::Defective(plus.len(), minus.len()));
        }
        Ok(EigenSplit::Real { plus: plus.iter().map(to4).collect(), minus: minus.iter().map(to4).collect() })
    } else {
        let mc = m.map(|c| C64::new(c, 0.0));
        let shift = DMatrix::<C64>::identity(4, 4) * C64::new(0.0, 1.0);
        let plus = nullspace_complex(&(&mc - &shift), 1e-8);
        let minus = nullspace_complex(&(&mc + &shift), 1e-8);
        if plus.len() != 2 || minus.len() != 2 {
            return Err(StructureError::Defective(plus.len(), minus.len()));
        }
        let to4c = |v: &DVector<C64>| Vector4::new(v[0], v[1], v[2], v[3]);
        Ok(EigenSplit::Complex { plus: plus.iter().map(to4c).collect(), minus: minus.iter().map(to4c).collect() })
    }
}

/// `max |B(vᵢ, vⱼ)|` over a family of vectors.
pub fn restriction_residual(bilinear: &Matrix4<f64>, vs: &[Vector4<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for u in vs {
        for v in vs {
            worst = worst.max((u.transpose() * bilinear * v)[(0, 0)].abs());
        }
    }
    worst
}

/// Distance of `v` from the complex span of `basis`.
pub fn span_distance(basis: &[Vector4<C64>], v: &Vector4<C64>) -> f64 {
    // real least squares on stacked real/imaginary parts
    let n = basis.len();
    let mut a = DMatrix::zeros(8, 2 * n);
    let mut rhs = DVector::zeros(8);
    for i in 0..4 {
        for (k, b) in basis.iter().enumerate() {
            a[(i, 2 * k)] = b[i].re;
            a[(i, 2 * k + 1)] = -b[i].im;
            a[(i + 4, 2 * k)] = b[i].im;
            a[(i + 4, 2 * k + 1)] = b[i].re;
        }
        rhs[i] = v[i].re;
        rhs[i + 4] = v[i].im;
    }
    lstsq(&a, &rhs).1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeviForm {
    /// `C = 2(1 + a² + b² + iab√(1+a²+b²))`
    pub c: (f64, f64),
    /// Hermitian `L_{AB̄}` with `L_{12̄} = Ω(Z₁, Z̄₂) = −C`
    pub matrix: [[(f64, f64); 2]; 2],
    /// raw `Ω(Z_A, Z̄_B)`
    pub raw: [[(f64, f64); 2]; 2],
    /// `|Ω(Z₁, Z₂)|`, zero for a CR structure
    pub holomorphic_defect: f64,
    /// Hermitian defect of `i·raw`
    pub hermitian_defect: f64,
    pub signature: (usize, usize),
}

fn bilinear_c(m: &Matrix4<f64>, u: &Vector4<C64>, v: &Vector4<C64>) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            s += u[i] * v[j] * m[(i, j)];
        }
    }
    s
}

pub fn levi_form(p: &ChartPoint5) -> LeviForm {
    let om = symplectic_matrix(FrameTag::Coordinate, p);
    let z = landing_z(p);
    let zb = [z[0].map(|c| c.conj()), z[1].map(|c| c.conj())];
    let raw = Matrix2::from_fn(|a, b| bilinear_c(&om, &z[a], &zb[b]));
    let l12 = raw[(0, 1)];
    let herm = Matrix2::new(C64::new(0.0, 0.0), l12, l12.conj(), C64::new(0.0, 0.0));
    let ir = raw * C64::new(0.0, 1.0);
    let hermitian_defect = (ir - ir.adjoint()).norm();
    let eig = herm.symmetric_eigen().eigenvalues;
    let tol = 1e-12 * eig.amax().max(1.0);
    let signature = (eig.iter().filter(|e| **e > tol).count(), eig.iter().filter(|e| **e < -tol).count());
    let pair = |c: C64| (c.re, c.im);
    LeviForm {
        c: pair(-l12),
        matrix: [[pair(herm[(0, 0)]), pair(herm[(0, 1)])], [pair(herm[(1, 0)]), pair(herm[(1, 1)])]],
        raw: [[pair(raw[(0, 0)]), pair(raw[(0, 1)])], [pair(raw[(1, 0)]), pair(raw[(1, 1)])]],
        holomorphic_defect: bilinear_c(&om, &z[0], &z[1]).norm(),
        hermitian_defect,
        signature,
    }
}

/// Closed-form `C` for comparison with the computed Levi form.
pub fn levi_c(p: &ChartPoint5) -> C64 {
    let d = 1.0 + p.a * p.a + p.b * p.b;
    C64::new(2.0 * d, 2.0 * p.a * p.b * d.sqrt())
}

/// Chart vector fields of the real and imaginary parts of `Z₁, Z₂`.
fn landing_z_fields() -> [(VectorField<5>, VectorField<5>); 2] {
    use crate::chart::{A, B};
    use crate::jet::Jet;
    let horiz = |cx: [Jet; 2], p: &[Jet; 5]| {
        let mut v = [Jet::zero(); 5];
        v[0] = cx[0];
        v[1] = cx[1];
        v[2] = p[A] * cx[0] + p[B] * cx[1];
        v
    };
    let r = |p: &[Jet; 5]| (1.0 + p[A] * p[A] + p[B] * p[B]).sqrt();
    [
        (
            VectorField::new("ReZ1", move |p| {
                let mut v = [Jet::zero(); 5];
                v[B] = r(p);
                v
            }),
            VectorField::new("ImZ1", move |p| {
                let mut v = [Jet::zero(); 5];
                v[A] = 1.0 + p[A] * p[A];
                v[B] = p[A] * p[B];
                v
            }),
        ),
        (
            VectorField::new("ReZ2", move |p| horiz([Jet::zero(), r(p)], p)),
            VectorField::new("ImZ2", move |p| horiz([1.0 + p[B] * p[B], -(p[A] * p[B])], p)),
        ),
    ]
}

/// Distance of `[Z₁, Z₂]` from the complex span of `Z₁, Z₂` in the chart;
/// zero when `𝒟₊` is involutive.
pub fn cr_integrability_defect(p: &ChartPoint5) -> f64 {
    let [(u1, v1), (u2, v2)] = landing_z_fields();
    let q = p.to_array();
    let br = |x: &VectorField<5>, y: &VectorField<5>| crate::forms::bracket(x, y, &q);
    let (a, b, c, d) = (br(&u1, &u2), br(&v1, &v2), br(&u1, &v2), br(&v1, &u2));
    let w: Vec<C64> = (0..5).map(|i| C64::new(a[i] - b[i], c[i] + d[i])).collect();
    let cz = |u: &VectorField<5>, v: &VectorField<5>| {
        let (x, y) = (u.eval(&q), v.eval(&q));
        (0..5).map(|i| C64::new(x[i], y[i])).collect::<Vec<_>>()
    };
    let z1 = cz(&u1, &v1);
    let z2 = cz(&u2, &v2);
    let mut a_m = DMatrix::zeros(10, 4);
    let mut rhs = DVector::zeros(10);
    for i in 0..5 {
        for (k, zk) in [&z1, &z2].iter().enumerate() {
            a_m[(i, 2 * k)] = zk[i].re;
            a_m[(i, 2 * k + 1)] = -zk[i].im;
            a_m[(i + 5, 2 * k)] = zk[i].im;
            a_m[(i + 5, 2 * k + 1)] = zk[i].re;
        }
        rhs[i] = w[i].re;
        rhs[i + 5] = w[i].im;
    }
    let scale = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    lstsq(&a_m, &rhs).1 / scale
}

/// Dense covariant tensor over `ℝ⁴`, row-major multi-index.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor4 {
    pub rank: usize,
    pub coeffs: Vec<f64>,
}

impl DenseTensor4 {
    pub fn new(rank: usize, coeffs: Vec<f64>) -> Result<Self, StructureError> {
        if coeffs.len() != 4usize.pow(rank as u32) {
            return Err(StructureError::BadTensor(rank, coeffs.len()));
        }
        Ok(DenseTensor4 { rank, coeffs })
    }

    pub fn from_matrix(m: &Matrix4<f64>) -> Self {
        DenseTensor4 { rank: 2, coeffs: (0..16).map(|k| m[(k / 4, k % 4)]).collect() }
    }

    pub fn from_sym(t: &SymTensor) -> Self {
        assert_eq!(t.dim(), 4);
        DenseTensor4 { rank: t.rank(), coeffs: t.coeffs().to_vec() }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Components in the frame `f'ᵢ = Σⱼ P[j][i] fⱼ`.
    pub fn transform(&self, p: &Matrix4<f64>) -> Self {
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|idx| {
                let out = unflatten4(idx, self.rank);
                let mut s = 0.0;
                for (jdx, c) in self.coeffs.iter().enumerate() {
                    if *c == 0.0 {
                        continue;
                    }
                    let inp = unflatten4(jdx, self.rank);
                    let mut prod = *c;
                    for m in 0..self.rank {
                        prod *= p[(inp[m], out[m])];
                    }
                    s += prod;
                }
                s
            })
            .collect();
        DenseTensor4 { rank: self.rank, coeffs }
    }
}

fn unflatten4(mut idx: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % 4;
        idx /= 4;
    }
    out
}

/// `(Y·T)_{i₁…i_k} = Σ_m Σ_j Y[j][i_m] T_{i₁…j…i_k}`, the derivative of
/// `T(e^{sY}·, …, e^{sY}·)` at `s = 0`.
pub fn infinitesimal_action(y: &Matrix4<f64>, t: &DenseTensor4) -> Vec<f64> {
    let k = t.rank;
    (0..t.coeffs.len())
        .map(|idx| {
            let tu = unflatten4(idx, k);
            let mut s = 0.0;
            for m in 0..k {
                let mut q = tu.clone();
                for j in 0..4 {
                    let yv = y[(j, tu[m])];
                    if yv != 0.0 {
                        q[m] = j;
                        s += yv * t.coeffs[q.iter().fold(0, |a, &i| a * 4 + i)];
                    }
                }
            }
            s
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerSolution {
    pub basis: Vec<Matrix4<f64>>,
    /// one scale `f` per input tensor and basis element
    pub scales: Vec<Vec<f64>>,
    pub dimension: usize,
    pub max_residual: f64,
}

/// Nullspace of `Y·T = f_T T` over `(Y, f)` for all given tensors.
pub fn solve_infinitesimal_stabilizer(tensors: &[DenseTensor4], rel: f64) -> Result<StabilizerSolution, StructureError> {
    if tensors.is_empty() {
        return Err(StructureError::EmptyInput);
    }
    let nt = tensors.len();
    let rows: usize = tensors.iter().map(|t| t.coeffs.len()).sum();
    let mut m = DMatrix::zeros(rows, 16 + nt);
    let mut r0 = 0;
    for (ti, t) in tensors.iter().enumerate() {
        for u in 0..16 {
            let mut e = Matrix4::zeros();
            e[(u / 4, u % 4)] = 1.0;
            let col = infinitesimal_action(&e, t);
            for (r, v) in col.iter().enumerate() {
                m[(r0 + r, u)] = *v;
            }
        }
        for (r, v) in t.coeffs.iter().enumerate() {
            m[(r0 + r, 16 + ti)] = -v;
        }
        r0 += t.coeffs.len();
    }
    let ns = nullspace(&m, rel);
    let mut basis = Vec::new();
    let mut scales = Vec::new();
    let mut worst = 0.0f64;
    for v in &ns {
        let y = Matrix4::from_fn(|r, c| v[4 * r + c]);
        let f: Vec<f64> = (0..nt).map(|t| v[16 + t]).collect();
        for (t, fi) in tensors.iter().zip(&f) {
            let lhs = infinitesimal_action(&y, t);
            let res = lhs.iter().zip(&t.coeffs).map(|(a, b)| (a - fi * b).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(res / (y.norm() * t.norm()).max(f64::MIN_POSITIVE));
        }
        basis.push(y);
        scales.push(f);
    }
    Ok(StabilizerSolution { dimension: basis.len(), basis, scales, max_residual: worst })
}

/// Rank of the linear span of a family of matrices.
pub fn span_rank(mats: &[Matrix4<f64>]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(16, mats.len(), |r, c| mats[c][(r / 4, r % 4)]);
    rank(&m, 1e-10)
}

/// Generators `Y₁ … Y₅` of the attacking structure algebra in the frame
/// `(dx, dy, db, da)`.
pub fn g0_basis() -> [Matrix4<f64>; 5] {
    let mut y2 = Matrix4::zeros();
    y2[(0, 1)] = 1.0;
    y2[(2, 3)] = -1.0;
    let mut y3 = Matrix4::zeros();
    y3[(1, 0)] = 1.0;
    y3[(3, 2)] = -1.0;
    [
        Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, -1.0)),
        y2,
        y3,
        Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0)),
        Matrix4::identity(),
    ]
}

/// Nonzero brackets `[Yᵢ, Yⱼ] = Σ c Y_k` (zero-based), all others vanish.
pub type CommutationTable = Vec<((usize, usize), Vec<(usize, f64)>)>;

pub fn g0_table() -> CommutationTable {
    vec![((0, 1), vec![(1, 2.0)]), ((0, 2), vec![(2, -2.0)]), ((1, 2), vec![(0, 1.0)])]
}

/// Largest deviation of `[Yᵢ, Yⱼ]` from the table over all pairs.
pub fn verify_commutation_table(basis: &[Matrix4<f64>], expected: &CommutationTable) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let br = basis[i] * basis[j] - basis[j] * basis[i];
            let mut want = Matrix4::zeros();
            if let Some((_, terms)) = expected.iter().find(|(k, _)| *k == (i, j)) {
                for (k, c) in terms {
                    want += basis[*k] * *c;
                }
            }
            worst = worst.max((br - want).abs().max());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2;

    #[test]
    fn attacking_k_is_y4() {
        let p = ChartPoint5::new(0.3, -1.0, 0.2, 1.4, -0.6);
        let k = attacking_k(FrameTag::Coordinate, &p).unwrap();
        assert_eq!(k.matrix, g0_basis()[3]);
        assert_eq!(k.sign, 1);
        // the raw operator is the opposite branch
        let kt = k_tilde(&attacking_metric(&p), &symplectic_matrix(FrameTag::Coordinate, &p)).unwrap();
        assert_eq!(kt, -g0_basis()[3]);
    }

    #[test]
    fn attacking_split_is_null_and_lagrangean() {
        let p = ChartPoint5::new(0.1, 0.2, 0.3, -0.4, 0.5);
        let k = attacking_k(FrameTag::Coordinate, &p).unwrap();
        let EigenSplit::Real { plus, minus } = eigen_split(&k).unwrap() else { panic!("real split") };
        let g = attacking_metric(&p).matrix();
        let g = Matrix4::from_fn(|i, j| g[(i, j)]);
        let om = symplectic_matrix(FrameTag::Coordinate, &p);
        for part in [&plus, &minus] {
            assert!(restriction_residual(&g, part) < 1e-14);
            assert!(restriction_residual(&om, part) < 1e-14);
        }
        // 𝒟⁺ = span(E₁, E₂): no a or b components
        assert!(plus.iter().all(|v| v[2].abs() < 1e-14 && v[3].abs() < 1e-14));
    }

    #[test]
    fn landing_square_and_branch() {
        let p = ChartPoint5::new(0.0, 0.0, 0.0, 1.0, 0.0);
        let k = landing_k(&p).unwrap();
        assert_eq!(k.sign, -1);
        assert!((k.square + 0.5).abs() < 1e-14);
        assert!(k.square_defect() < 1e-14);
        let EigenSplit::Complex { plus, minus } = eigen_split(&k).unwrap() else { panic!("complex split") };
        let z = landing_z(&p);
        for zi in &z {
            assert!(span_distance(&plus, zi) < 1e-12);
            assert!(span_distance(&minus, &zi.map(|c| c.conj())) < 1e-12);
        }
        let k0 = landing_k(&ChartPoint5::ORIGIN).unwrap();
        assert!((k0.matrix * k0.matrix + Matrix4::identity()).norm() < 1e-14);
    }

    #[test]
    fn levi_examples() {
        let l = levi_form(&ChartPoint5::ORIGIN);
        assert!((l.c.0 - 2.0).abs() < 1e-14 && l.c.1.abs() < 1e-14);
        let p = ChartPoint5::new(0.0, 0.0, 0.0, 1.0, 1.0);
        let l = levi_form(&p);
        assert!((l.c.0 - 6.0).abs() < 1e-13 && (l.c.1 - 2.0 * 3f64.sqrt()).abs() < 1e-13);
        assert_eq!(l.signature, (1, 1));
        assert!(l.holomorphic_defect < 1e-13);
        assert!(l.hermitian_defect < 1e-13);
        let c = levi_c(&p);
        assert!((l.matrix[1][0].0 + c.re).abs() < 1e-13 && (l.matrix[1][0].1 - c.im).abs() < 1e-13);
    }

    #[test]
    fn landing_cr_structure_is_integrable() {
        // the last point once tripped an inaccurate SVD in the span test
        for p in [
            ChartPoint5::new(0.1, 0.2, 0.3, 0.7, -0.3),
            ChartPoint5::new(-1.0, 0.5, 2.0, -1.2, 1.9),
            ChartPoint5::new(0.0, 0.0, 0.0, 0.1262771630879147, 0.8142952647817054),
        ] {
            assert!(cr_integrability_defect(&p) < 1e-12);
        }
    }

    #[test]
    fn stabilizer_dimensions() {
        let p = ChartPoint5::ORIGIN;
        let g = DenseTensor4::from_sym(&in_frame(&attacking_metric(&p), FrameTag::EFrame, &p));
        let om = DenseTensor4::from_matrix(&symplectic_matrix(FrameTag::EFrame, &p));
        let s = solve_infinitesimal_stabilizer(&[g.clone(), om.clone()], 1e-10).unwrap();
        assert_eq!(s.dimension, 5);
        assert!(s.max_residual < 1e-10);
        let mut all = s.basis.clone();
        all.extend(g0_basis());
        assert_eq!(span_rank(&all), 5);
        assert_eq!(solve_infinitesimal_stabilizer(std::slice::from_ref(&om), 1e-10).unwrap().dimension, 11);
        let ups = DenseTensor4::from_sym(&gl2::upsilon_tensor(FrameTag::ZFrame));
        let om2 = DenseTensor4::from_matrix(&gl2::two_form_matrix());
        let s2 = solve_infinitesimal_stabilizer(&[ups, om2], 1e-10).unwrap();
        assert_eq!(s2.dimension, 4);
        assert_eq!(solve_infinitesimal_stabilizer(&[], 1e-10), Err(StructureError::EmptyInput));
    }

    #[test]
    fn g0_commutation_and_k() {
        let y = g0_basis();
        assert_eq!(verify_commutation_table(&y, &g0_table()), 0.0);
        let k = y[3];
        for yi in &y {
            assert_eq!(k * yi - yi * k, Matrix4::zeros());
        }
        assert_eq!(k * k, Matrix4::identity());
    }

    #[test]
    fn symplectic_matrix_from_forms() {
        let om = symplectic_matrix(FrameTag::ZFrame, &ChartPoint5::new(1.0, 2.0, 3.0, 4.0, 5.0));
        assert!((om - gl2::two_form_matrix()).norm() < 1e-14);
    }
}
