//! Symmetry catalogs of the three maneuver structures and the numerical
//! diagnostics of the Lie algebras they span.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SVD};
use serde::Serialize;
use thiserror::Error;

use crate::chart::{contact_form_field, ChartPoint5, FrameTag, A, B, X, Y, Z};
use crate::forms::{frob, lie_derivative_symtensor, lie_scale_symtensor, FormValue, SymTensor, SymTensorField, VectorField};
use crate::jet::{lift, push_dir, Jet};
use crate::linalg::{rank, signature};
use crate::maneuvers::{attacking_metric_field, landing_metric_field, upsilon_field};
use crate::par::{max_of, Exec};

#[derive(Debug, Error, PartialEq)]
pub enum SymmetryError {
    #[error("need at least {need} sample points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("stacked field matrix has rank {rank} < {dim}; add points")]
    IllConditioned { rank: usize, dim: usize },
    #[error("unknown catalog `{0}`")]
    UnknownCatalog(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SymmetryCatalog {
    AttackingSL4,
    LandingSU22,
    G2Contact,
}

impl FromStr for SymmetryCatalog {
    type Err = SymmetryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "attacking" | "sl4" => Ok(SymmetryCatalog::AttackingSL4),
            "landing" | "su22" => Ok(SymmetryCatalog::LandingSU22),
            "g2" => Ok(SymmetryCatalog::G2Contact),
            _ => Err(SymmetryError::UnknownCatalog(s.to_string())),
        }
    }
}

type Field = VectorField<5>;

fn field(id: &str, f: impl Fn(Jet, Jet, Jet, Jet, Jet) -> [Jet; 5] + Send + Sync + 'static) -> Field {
    VectorField::new(id, move |p| f(p[X], p[Y], p[Z], p[A], p[B]))
}

fn zero() -> Jet {
    Jet::zero()
}

fn c(v: f64) -> Jet {
    Jet::cst(v)
}

fn attacking_fields() -> Vec<Field> {
    // E = x∂x + y∂y + z∂z, s = z − ax − by
    vec![
        field("X1", |x, y, z, a, b| {
            let s = z - a * x - b * y;
            [z * x, z * y, z * z, s * a, s * b]
        }),
        field("X2", |x, y, z, a, b| {
            let s = z - a * x - b * y;
            [x * x, x * y, x * z, s, zero()]
        }),
        field("X3", |_, _, z, a, b| [zero(), -z, zero(), b * a, b * b]),
        field("X4", |x, _, _, _, b| [zero(), -x, zero(), b, zero()]),
        field("X5", |_, _, z, a, b| [-z, zero(), zero(), a * a, a * b]),
        field("X6", |x, _, _, a, _| [-x, zero(), zero(), a, zero()]),
        field("X7", |x, _, _, _, _| [zero(), zero(), x, c(1.0), zero()]),
        field("X8", |x, y, z, a, b| {
            let s = z - a * x - b * y;
            [y * x, y * y, y * z, zero(), s]
        }),
        field("X9", |_, y, _, a, _| [-y, zero(), zero(), zero(), a]),
        field("X10", |x, _, z, _, b| [x, zero(), z, zero(), b]),
        field("X11", |_, y, _, _, _| [zero(), zero(), y, zero(), c(1.0)]),
        field("X12", |x, y, z, _, _| [x, y, z, zero(), zero()]),
        field("X13", |_, _, _, _, _| [zero(), c(1.0), zero(), zero(), zero()]),
        field("X14", |_, _, _, _, _| [c(1.0), zero(), zero(), zero(), zero()]),
        field("X15", |_, _, _, _, _| [zero(), zero(), c(1.0), zero(), zero()]),
    ]
}

/// `f · (∂z − a∂x − b∂y)/r + r · (u ∂a + v ∂b)` with `r = √(1+a²+b²)`.
fn landing_combo(f: Jet, u: Jet, v: Jet, a: Jet, b: Jet) -> [Jet; 5] {
    let r = (1.0 + a * a + b * b).sqrt();
    let s = f / r;
    [-(s * a), -(s * b), s, r * u, r * v]
}

fn landing_fields() -> Vec<Field> {
    vec![
        field("X1", |x, y, z, a, b| {
            [
                -(z * x),
                -(z * y),
                0.5 * (x * x + y * y - z * z),
                (1.0 + a * a) * x + a * b * y,
                (1.0 + b * b) * y + a * b * x,
            ]
        }),
        field("X2", |x, y, z, a, b| {
            [0.5 * (y * y + z * z - x * x), -(x * y), -(x * z), -((1.0 + a * a) * z - b * y), -(a * (b * z + y))]
        }),
        field("X3", |x, y, z, a, b| {
            [y * x, 0.5 * (y * y - x * x - z * z), y * z, b * (a * z + x), (1.0 + b * b) * z - a * x]
        }),
        field("X4", |x, y, z, a, b| landing_combo(0.5 * (x * x + y * y + z * z), a * z + x, b * z + y, a, b)),
        field("X5", |x, _, z, a, b| [-z, zero(), x, a * a + 1.0, a * b]),
        field("X6", |_, y, z, a, b| [zero(), -z, y, a * b, b * b + 1.0]),
        field("X7", |x, y, _, a, b| [y, -x, zero(), b, -a]),
        field("X8", |x, _, _, a, b| landing_combo(x, c(1.0), zero(), a, b)),
        field("X9", |_, _, z, a, b| landing_combo(z, a, b, a, b)),
        field("X10", |_, y, _, a, b| landing_combo(y, zero(), c(1.0), a, b)),
        field("X11", |_, _, _, a, b| landing_combo(c(1.0), zero(), zero(), a, b)),
        field("X12", |x, y, z, _, _| [x, y, z, zero(), zero()]),
        field("X13", |_, _, _, _, _| [c(1.0), zero(), zero(), zero(), zero()]),
        field("X14", |_, _, _, _, _| [zero(), c(1.0), zero(), zero(), zero()]),
        field("X15", |_, _, _, _, _| [zero(), zero(), c(1.0), zero(), zero()]),
    ]
}

fn g2_fields() -> Vec<Field> {
    vec![
        field("X1", |x, y, z, a, b| {
            [
                y * y * y + x * z,
                y * z - b * b * x / 9.0 - 2.0 * b * y * y / 3.0,
                z * z - 2.0 * b * b * b * x / 27.0 - b * b * y * y / 3.0,
                a * z - a * a * x - a * b * y + b * b * b / 27.0,
                b * z - a * b * x - 3.0 * a * y * y - b * b * y / 3.0,
            ]
        }),
        field("X2", |x, y, z, a, b| [x * x, x * y, x * z - y * y * y, z - a * x - b * y, -3.0 * y * y]),
        field("X3", |_, _, z, a, b| [-0.5 * z, b * b / 18.0, b * b * b / 27.0, 0.5 * a * a, 0.5 * a * b]),
        field("X4", |_, y, z, a, b| {
            [-3.0 * y * y, 4.0 * b * y / 3.0 - z, 2.0 * b * b * y / 3.0, a * b, 6.0 * a * y + b * b / 3.0]
        }),
        field("X5", |_, y, z, a, b| [zero(), y / 3.0, z, a, 2.0 * b / 3.0]),
        field("X6", |x, y, z, a, b| {
            [
                4.5 * x * y,
                1.5 * y * y - b * x,
                0.5 * (9.0 * y * z - b * b * x),
                0.5 * b * b,
                0.5 * (9.0 * z + 3.0 * b * y - 9.0 * a * x),
            ]
        }),
        field("X7", |x, y, _, _, b| [zero(), -x, 3.0 * y * y, b, 6.0 * y]),
        field("X8", |x, y, z, _, b| [x, 2.0 * y / 3.0, z, zero(), b / 3.0]),
        field("X9", |_, y, _, a, b| [y, -2.0 * b / 9.0, -(b * b) / 9.0, zero(), -a]),
        field("X10", |x, _, _, _, _| [zero(), zero(), x, c(1.0), zero()]),
        field("X11", |_, y, _, _, _| [zero(), zero(), y, zero(), c(1.0)]),
        field("X12", |_, _, _, _, _| [c(1.0), zero(), zero(), zero(), zero()]),
        field("X13", |_, _, _, _, _| [zero(), c(1.0), zero(), zero(), zero()]),
        field("X14", |_, _, _, _, _| [zero(), zero(), c(1.0), zero(), zero()]),
    ]
}

impl SymmetryCatalog {
    pub const ALL: [SymmetryCatalog; 3] =
        [SymmetryCatalog::AttackingSL4, SymmetryCatalog::LandingSU22, SymmetryCatalog::G2Contact];

    pub fn name(&self) -> &'static str {
        match self {
            SymmetryCatalog::AttackingSL4 => "attacking",
            SymmetryCatalog::LandingSU22 => "landing",
            SymmetryCatalog::G2Contact => "g2",
        }
    }

    pub fn fields(&self) -> Vec<Field> {
        match self {
            SymmetryCatalog::AttackingSL4 => attacking_fields(),
            SymmetryCatalog::LandingSU22 => landing_fields(),
            SymmetryCatalog::G2Contact => g2_fields(),
        }
    }

    /// Tensor whose conformal class the symmetries preserve modulo `ω⁰`.
    pub fn tensor(&self) -> SymTensorField<5> {
        match self {
            SymmetryCatalog::AttackingSL4 => attacking_metric_field(),
            SymmetryCatalog::LandingSU22 => landing_metric_field(),
            SymmetryCatalog::G2Contact => upsilon_field(),
        }
    }

    /// Expected Killing signature of the spanned algebra.
    pub fn expected_signature(&self) -> (usize, usize, usize) {
        match self {
            SymmetryCatalog::AttackingSL4 => (9, 6, 0),
            SymmetryCatalog::LandingSU22 => (8, 7, 0),
            SymmetryCatalog::G2Contact => (8, 6, 0),
        }
    }
}

/// Normalized `‖(L_X ω⁰) ∧ ω⁰‖`.
pub fn contact_residual(x: &Field, p: &ChartPoint5) -> f64 {
    let q = p.to_array();
    let w = contact_form_field();
    let lw = w.lie(x).at(&q);
    let w0 = w.at(&q);
    let wedge = lw.wedge(&w0).expect("degree 2");
    let (pv, dir) = push_dir(&lift(&q), &x.eval(&q).map(Jet::cst));
    let dxw: f64 = w.eval_jet(&pv).iter().map(|j| j.d(dir).value().powi(2)).sum::<f64>().sqrt();
    let scale = (dxw + w0.norm() * frob(&x.jacobian(&q))) * w0.norm();
    ratio(wedge.norm(), scale)
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Least-squares projection onto `span{S} ⊕ ω⁰ ⊙ (rank k−1)` at a point.
pub struct Membership {
    design: DMatrix<f64>,
    svd: SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Membership {
    pub fn new(s: &SymTensor, w0: &FormValue<5>) -> Self {
        let k = s.rank();
        let mut cols: Vec<Vec<f64>> = vec![s.coeffs().to_vec()];
        for basis in SymTensor::basis(k - 1, FrameTag::Chart) {
            cols.push(SymTensor::sym_product(w0.coeffs(), &basis).coeffs().to_vec());
        }
        let design = DMatrix::from_fn(cols[0].len(), cols.len(), |r, c| cols[c][r]);
        let svd = SVD::new(design.clone(), true, true);
        Membership { design, svd }
    }

    /// Distance of `t` from the admissible span.
    pub fn distance(&self, t: &SymTensor) -> f64 {
        let b = DVector::from_column_slice(t.coeffs());
        let eps = 1e-13 * self.svd.singular_values.max();
        let x = self.svd.solve(&b, eps).expect("factors computed");
        (&self.design * x - b).norm()
    }
}

/// Normalized distance of `L_X S` from `span{S} ⊕ ω⁰ ⊙ (·)`.
pub fn tensor_residual(x: &Field, s: &SymTensorField<5>, p: &ChartPoint5, m: &Membership) -> f64 {
    let q = p.to_array();
    let l = lie_derivative_symtensor(x, s, &q);
    ratio(m.distance(&l), lie_scale_symtensor(x, s, &q))
}

fn membership_at(s: &SymTensorField<5>, p: &ChartPoint5) -> Membership {
    let q = p.to_array();
    Membership::new(&s.at(&q), &contact_form_field().at(&q))
}

/// `(contact_res, metric_res)` for the attacking structure.
pub fn legendrean_symmetry_residual(x: &Field, p: &ChartPoint5) -> (f64, f64) {
    let g = attacking_metric_field();
    (contact_residual(x, p), tensor_residual(x, &g, p, &membership_at(&g, p)))
}

/// `(contact_res, metric_res)` for the landing structure.
pub fn cr_symmetry_residual(x: &Field, p: &ChartPoint5) -> (f64, f64) {
    let g = landing_metric_field();
    (contact_residual(x, p), tensor_residual(x, &g, p, &membership_at(&g, p)))
}

/// `(contact_res, quartic_res)` for the G₂ structure.
pub fn g2_symmetry_residual(x: &Field, p: &ChartPoint5) -> (f64, f64) {
    let u = upsilon_field();
    (contact_residual(x, p), tensor_residual(x, &u, p, &membership_at(&u, p)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldResidual {
    pub id: String,
    pub contact: f64,
    pub tensor: f64,
}

/// Worst residuals per field over the points, one membership system per point.
pub fn catalog_residuals(cat: SymmetryCatalog, points: &[ChartPoint5], exec: Exec) -> Vec<FieldResidual> {
    let fields = cat.fields();
    let s = cat.tensor();
    let per_point: Vec<Vec<(f64, f64)>> = exec.map(points, |p| {
        let m = membership_at(&s, p);
        fields.iter().map(|x| (contact_residual(x, p), tensor_residual(x, &s, p, &m))).collect()
    });
    fields
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let c: Vec<f64> = per_point.iter().map(|r| r[i].0).collect();
            let t: Vec<f64> = per_point.iter().map(|r| r[i].1).collect();
            FieldResidual { id: f.id().to_string(), contact: max_of(&c), tensor: max_of(&t) }
        })
        .collect()
}

/// Attacking fields (0-based) with `L_X ω⁰ = 0` and `L_X g = 0`.
pub const ATTACKING_EXACT: [usize; 8] = [3, 5, 6, 8, 10, 12, 13, 14];
/// Attacking fields (0-based) with `L_X ω⁰ = ω⁰` and `L_X g = g`.
pub const ATTACKING_HOMOTHETIC: [usize; 2] = [9, 11];

/// `max(‖L_X ω⁰ − s ω⁰‖, ‖L_X g − s g‖)` for the attacking metric.
pub fn exact_symmetry_residual(x: &Field, scale: f64, p: &ChartPoint5) -> f64 {
    let q = p.to_array();
    let w = contact_form_field();
    let g = attacking_metric_field();
    let lw = w.lie(x).at(&q).sub(&w.at(&q).scale(scale));
    let lg = lie_derivative_symtensor(x, &g, &q).sub(&g.at(&q).scale(scale));
    lw.norm().max(lg.norm())
}

/// Rank of the `5m × n` matrix of field values stacked over points.
pub fn independence_rank(fields: &[Field], points: &[ChartPoint5]) -> usize {
    rank(&stacked(fields, points), 1e-10)
}

fn stacked(fields: &[Field], points: &[ChartPoint5]) -> DMatrix<f64> {
    let n = fields.len();
    let mut m = DMatrix::zeros(5 * points.len(), n);
    for (pi, p) in points.iter().enumerate() {
        let q = p.to_array();
        for (k, f) in fields.iter().enumerate() {
            let v = f.eval(&q);
            for i in 0..5 {
                m[(5 * pi + i, k)] = v[i];
            }
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieAlgebraModel {
    pub dimension: usize,
    pub names: Vec<String>,
    /// `constants[k][i][j] = c^k_{ij}`
    pub constants: Vec<Vec<Vec<f64>>>,
    pub closure_residual: f64,
    pub jacobi_residual: f64,
    pub killing: Vec<Vec<f64>>,
    pub signature: (usize, usize, usize),
}

impl LieAlgebraModel {
    /// Build from structure constants alone.
    pub fn from_constants(names: Vec<String>, constants: Vec<Vec<Vec<f64>>>, closure_residual: f64) -> Self {
        let n = constants.len();
        let killing = killing_matrix(&constants);
        let bm = DMatrix::from_fn(n, n, |i, j| killing[i][j]);
        let signature = killing_signature(&bm);
        LieAlgebraModel {
            dimension: n,
            names,
            jacobi_residual: jacobi_residual(&constants),
            constants,
            closure_residual,
            killing,
            signature,
        }
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dimension;
        let mut w = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    w = w.max((self.constants[k][i][j] + self.constants[k][j][i]).abs());
                }
            }
        }
        w
    }
}

/// `[Xᵢ, Xⱼ] = Σ_k c^k_{ij} X_k` by least squares over stacked points.
pub fn extract_structure_constants(
    fields: &[Field],
    points: &[ChartPoint5],
    exec: Exec,
) -> Result<LieAlgebraModel, SymmetryError> {
    let n = fields.len();
    if points.len() < 2 * n / 5 + 1 || 5 * points.len() < 2 * n {
        return Err(SymmetryError::TooFewPoints { need: (2 * n).div_ceil(5), got: points.len() });
    }
    let a = stacked(fields, points);
    let r = rank(&a, 1e-10);
    if r < n {
        return Err(SymmetryError::IllConditioned { rank: r, dim: n });
    }
    let svd = SVD::new(a.clone(), true, true);
    let smax = svd.singular_values.max();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let solved: Vec<(DVector<f64>, f64)> = exec.map(&pairs, |&(i, j)| {
        let br = fields[i].bracket(&fields[j]);
        let mut b = DVector::zeros(5 * points.len());
        for (pi, p) in points.iter().enumerate() {
            let v = br.eval(&p.to_array());
            for k in 0..5 {
                b[5 * pi + k] = v[k];
            }
        }
        let x = svd.solve(&b, 1e-13 * smax).expect("factors computed");
        let misfit = (&a * &x - &b).norm() / b.norm().max(smax);
        (x, misfit)
    });
    let mut constants = vec![vec![vec![0.0; n]; n]; n];
    let mut closure = 0.0f64;
    for (&(i, j), (x, misfit)) in pairs.iter().zip(&solved) {
        closure = closure.max(*misfit);
        for k in 0..n {
            constants[k][i][j] = x[k];
            constants[k][j][i] = -x[k];
        }
    }
    let names = fields.iter().map(|f| f.id().to_string()).collect();
    Ok(LieAlgebraModel::from_constants(names, constants, closure))
}

/// Largest difference between two extractions, relative to the largest constant.
pub fn constants_agreement(a: &LieAlgebraModel, b: &LieAlgebraModel) -> f64 {
    let mut diff = 0.0f64;
    let mut big = 0.0f64;
    for (ca, cb) in a.constants.iter().flatten().flatten().zip(b.constants.iter().flatten().flatten()) {
        diff = diff.max((ca - cb).abs());
        big = big.max(ca.abs());
    }
    diff / big.max(f64::MIN_POSITIVE)
}

/// `B_{ij} = c^a_{ib} c^b_{ja}`.
pub fn killing_matrix(c: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let n = c.len();
    let mut bm = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += c[a][i][b] * c[b][j][a];
                }
            }
            bm[i][j] = s;
        }
    }
    bm
}

/// Eigen-signature with zero threshold `1e−8 · max|eig|`.
pub fn killing_signature(b: &DMatrix<f64>) -> (usize, usize, usize) {
    signature(b, 1e-8)
}

/// `max |Σ_cyclic c^m_{ij} c^l_{mk}|`, relative to the largest constant squared.
pub fn jacobi_residual(c: &[Vec<Vec<f64>>]) -> f64 {
    let n = c.len();
    let big = c.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += c[m][i][j] * c[l][m][k] + c[m][j][k] * c[l][m][i] + c[m][k][i] * c[l][m][j];
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst / (big * big).max(f64::MIN_POSITIVE)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KillingDiagnostics {
    pub signature: (usize, usize, usize),
    pub nondegenerate: bool,
}

pub fn killing_diagnostics(model: &LieAlgebraModel) -> KillingDiagnostics {
    KillingDiagnostics { signature: model.signature, nondegenerate: model.signature.2 == 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;

    #[test]
    fn translations_have_zero_residual() {
        let p = ChartPoint5::new(0.3, -0.2, 1.0, 0.5, -0.7);
        let dz = VectorField::coordinate("dz", Z);
        assert_eq!(legendrean_symmetry_residual(&dz, &p), (0.0, 0.0));
        assert_eq!(g2_symmetry_residual(&dz, &p), (0.0, 0.0));
    }

    #[test]
    fn negative_controls() {
        let p = ChartPoint5::new(0.3, -0.2, 1.0, 0.5, -0.7);
        let da = VectorField::coordinate("da", A);
        let (c, m) = legendrean_symmetry_residual(&da, &p);
        assert!(c > 1e-2);
        assert!(m < 1e-14);
        let euler = VectorField::new("euler", |p| [p[X], p[Y], p[Z], Jet::zero(), Jet::zero()]);
        let (c, q) = g2_symmetry_residual(&euler, &p);
        assert!(c < 1e-14);
        assert!(q > 1e-3);
    }

    #[test]
    fn catalogs_are_symmetries() {
        let pts = Sampler::new(11).chart_points(3);
        for cat in SymmetryCatalog::ALL {
            for r in catalog_residuals(cat, &pts, Exec::default()) {
                assert!(r.contact < 1e-10 && r.tensor < 1e-10, "{:?} {:?}", cat, r);
            }
        }
    }

    #[test]
    fn exact_and_homothetic_attacking_fields() {
        let fields = attacking_fields();
        let p = ChartPoint5::new(0.4, 1.1, -0.3, 0.9, -1.3);
        for i in ATTACKING_EXACT {
            assert!(exact_symmetry_residual(&fields[i], 0.0, &p) < 1e-12, "{}", fields[i].id());
        }
        for i in ATTACKING_HOMOTHETIC {
            assert!(exact_symmetry_residual(&fields[i], 1.0, &p) < 1e-12, "{}", fields[i].id());
        }
        // X1 is a symmetry only up to conformal and ω⁰ terms
        assert!(exact_symmetry_residual(&fields[0], 0.0, &p) > 1e-3);
    }

    #[test]
    fn attacking_algebra_closes() {
        let fields = attacking_fields();
        let pts = Sampler::new(3).chart_points(8);
        let m = extract_structure_constants(&fields, &pts, Exec::default()).unwrap();
        assert!(m.closure_residual < 1e-10);
        assert!(m.jacobi_residual < 1e-10);
        assert!(m.antisymmetry_defect() == 0.0);
        assert_eq!(m.signature, (9, 6, 0));
        assert!(killing_diagnostics(&m).nondegenerate);
    }

    #[test]
    fn too_few_points() {
        let fields = g2_fields();
        let pts = Sampler::new(3).chart_points(2);
        assert!(matches!(
            extract_structure_constants(&fields, &pts, Exec::Sequential),
            Err(SymmetryError::TooFewPoints { .. })
        ));
    }
}
