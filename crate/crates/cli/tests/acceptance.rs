//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion, with the
//! individual measurements indented below it, and exits non-zero when any
//! criterion fails.

use std::process::{Command, ExitCode};

use nalgebra::{Complex, DMatrix, DVector, Matrix4};

use saucer::chart::{contact_nondegeneracy, ChartPoint5, FrameTag};
use saucer::fibration::{
    coframe_x, coframe_y, commutator_checks, joystick, verify_eds, x_from_y, y_from_x, z_coefficients, Coframe6,
    CLAIMED_COMMUTATORS,
};
use saucer::gl2::{classify_with, cubic_point, endomorphism_l, tangent_point, two_form_matrix, upsilon_tensor, NullClass};
use saucer::maneuvers::{attacking_metric, landing_metric, ManeuverMode};
use saucer::par::Exec;
use saucer::planner::{bracket_family, bracket_generating_check, claimed_bracket, plan_path, replay, BracketFamily};
use saucer::sampling::Sampler;
use saucer::structure::{
    attacking_k, eigen_split, g0_basis, g0_table, in_frame, k_tilde, levi_form, solve_infinitesimal_stabilizer,
    symplectic_matrix, verify_commutation_table, DenseTensor4, EigenSplit,
};
use saucer::suites::joystick_controls;
use saucer::symmetry::{catalog_residuals, extract_structure_constants, independence_rank, SymmetryCatalog};

const SEED: u64 = 7;

struct Line {
    text: String,
    pass: bool,
}

#[derive(Default)]
struct Criterion {
    lines: Vec<Line>,
}

impl Criterion {
    fn below(&mut self, what: &str, got: f64, limit: f64) {
        self.lines.push(Line { text: format!("{what}: {got:.3e} (limit {limit:.0e})"), pass: got < limit });
    }

    fn equal<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        let pass = got == want;
        self.lines.push(Line { text: format!("{what}: {got:?} (want {want:?})"), pass });
    }

    fn at_least(&mut self, what: &str, got: f64, want: f64) {
        self.lines.push(Line { text: format!("{what}: {got:.4} (need >= {want})"), pass: got >= want });
    }

    fn pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

fn points(label: &str, n: usize) -> Vec<ChartPoint5> {
    Sampler::stream(SEED, label).chart_points(n)
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

// ---------- oracle linear algebra ----------

/// Nullspace by Gauss–Jordan elimination with partial pivoting.
fn rref_nullspace(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows).map(|i| (i, a[(i, c)].abs())).fold((r, -1.0), |b, x| if x.1 > b.1 { x } else { b });
        if val <= tol {
            continue;
        }
        a.swap_rows(r, best);
        let p = a[(r, c)];
        for j in 0..cols {
            a[(r, j)] /= p;
        }
        for i in 0..rows {
            if i != r && a[(i, c)] != 0.0 {
                let f = a[(i, c)];
                for j in 0..cols {
                    a[(i, j)] -= f * a[(r, j)];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = DVector::zeros(cols);
            v[free] = 1.0;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[(row, free)];
            }
            v
        })
        .collect()
}

/// Inertia of a symmetric matrix with a relative zero cut.
fn inertia(k: &DMatrix<f64>) -> (usize, usize, usize) {
    let eig = ((k + k.transpose()) * 0.5).symmetric_eigenvalues();
    let cut = 1e-8 * eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pos = eig.iter().filter(|v| **v > cut).count();
    let neg = eig.iter().filter(|v| **v < -cut).count();
    (pos, neg, eig.len() - pos - neg)
}

/// Killing form of the matrix Lie algebra spanned by `basis`.
fn matrix_killing(basis: &[DMatrix<f64>]) -> (DMatrix<f64>, f64) {
    let d = basis.len();
    let n2 = basis[0].len();
    let b = DMatrix::from_fn(n2, d, |i, j| basis[j][i]);
    let gram = b.transpose() * &b;
    let chol = gram.cholesky().expect("independent basis");
    let mut closure = 0.0f64;
    let ad: Vec<DMatrix<f64>> = basis
        .iter()
        .map(|x| {
            let mut m = DMatrix::zeros(d, d);
            for (j, y) in basis.iter().enumerate() {
                let c = x * y - y * x;
                let v = DVector::from_column_slice(c.as_slice());
                let coords = chol.solve(&(b.transpose() * &v));
                closure = closure.max((&b * &coords - v).norm());
                m.set_column(j, &coords);
            }
            m
        })
        .collect();
    let k = DMatrix::from_fn(d, d, |i, j| (&ad[i] * &ad[j]).trace());
    (k, closure)
}

fn sl4_basis() -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                let mut m = DMatrix::zeros(4, 4);
                m[(i, j)] = 1.0;
                out.push(m);
            }
        }
    }
    for k in 0..3 {
        let mut m = DMatrix::zeros(4, 4);
        m[(k, k)] = 1.0;
        m[(k + 1, k + 1)] = -1.0;
        out.push(m);
    }
    out
}

/// `su(2,2)` as real 8×8 matrices `[[A, −B], [B, A]]` for `X = A + iB`.
fn su22_basis() -> Vec<DMatrix<f64>> {
    let j = [1.0, 1.0, -1.0, -1.0];
    // unknowns: A (16) then B (16), row-major
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            // Aᵀ J + J A = 0: A[c][r] J_c + J_r A[r][c]
            let mut re = vec![0.0; 32];
            re[c * 4 + r] += j[c];
            re[r * 4 + c] += j[r];
            rows.push(re);
            // −Bᵀ J + J B = 0
            let mut im = vec![0.0; 32];
            im[16 + c * 4 + r] -= j[c];
            im[16 + r * 4 + c] += j[r];
            rows.push(im);
        }
    }
    for off in [0, 16] {
        let mut t = vec![0.0; 32];
        for k in 0..4 {
            t[off + k * 5] = 1.0;
        }
        rows.push(t);
    }
    let m = DMatrix::from_fn(rows.len(), 32, |i, k| rows[i][k]);
    rref_nullspace(&m, 1e-12)
        .into_iter()
        .map(|v| {
            DMatrix::from_fn(8, 8, |r, c| {
                let (br, bc) = (r / 4, c / 4);
                let (i, k) = (r % 4, c % 4);
                let a = v[i * 4 + k];
                let b = v[16 + i * 4 + k];
                match (br, bc) {
                    (0, 0) | (1, 1) => a,
                    (0, 1) => -b,
                    _ => b,
                }
            })
        })
        .collect()
}

/// Split `g₂` as the stabilizer in `gl(7)` of
/// `φ = e¹²³ − e¹⁴⁵ − e¹⁶⁷ − e²⁴⁶ + e²⁵⁷ + e³⁴⁷ + e³⁵⁶`.
fn g2_basis() -> Vec<DMatrix<f64>> {
    let terms: [([usize; 3], f64); 7] = [
        ([1, 2, 3], 1.0),
        ([1, 4, 5], -1.0),
        ([1, 6, 7], -1.0),
        ([2, 4, 6], -1.0),
        ([2, 5, 7], 1.0),
        ([3, 4, 7], 1.0),
        ([3, 5, 6], 1.0),
    ];
    let mut phi = vec![0.0; 343];
    let idx = |a: usize, b: usize, c: usize| (a * 7 + b) * 7 + c;
    for ([a, b, c], s) in terms {
        let (a, b, c) = (a - 1, b - 1, c - 1);
        for (p, sg) in [([a, b, c], 1.0), ([b, c, a], 1.0), ([c, a, b], 1.0), ([b, a, c], -1.0), ([a, c, b], -1.0), ([c, b, a], -1.0)] {
            phi[idx(p[0], p[1], p[2])] = s * sg;
        }
    }
    // (X·φ)_{abc} = Σ_d X_{da} φ_{dbc} + X_{db} φ_{adc} + X_{dc} φ_{abd}
    let mut rows = Vec::new();
    for a in 0..7 {
        for b in (a + 1)..7 {
            for c in (b + 1)..7 {
                let mut row = vec![0.0; 49];
                for d in 0..7 {
                    row[d * 7 + a] += phi[idx(d, b, c)];
                    row[d * 7 + b] += phi[idx(a, d, c)];
                    row[d * 7 + c] += phi[idx(a, b, d)];
                }
                rows.push(row);
            }
        }
    }
    let m = DMatrix::from_fn(rows.len(), 49, |i, k| rows[i][k]);
    rref_nullspace(&m, 1e-12).into_iter().map(|v| DMatrix::from_row_slice(7, 7, v.as_slice())).collect()
}

// ---------- oracle geometry ----------

/// Quartic `Υ` written out term by term.
fn upsilon_oracle(x: &[f64; 4]) -> f64 {
    let [x1, x2, x3, x4] = *x;
    3.0 * x2.powi(2) * x3.powi(2) - 4.0 * x1 * x3.powi(3) - 4.0 * x2.powi(3) * x4 + 6.0 * x1 * x2 * x3 * x4
        - x1.powi(2) * x4.powi(2)
}

/// `dω⁰(U, V)` for `ω⁰ = dz − a dx − b dy`, chart components.
fn d_contact<T: Copy + std::ops::Mul<Output = T> + std::ops::Sub<Output = T> + std::ops::Add<Output = T>>(
    u: &[T; 5],
    v: &[T; 5],
) -> T {
    u[0] * v[3] - u[3] * v[0] + u[1] * v[4] - u[4] * v[1]
}

/// Coordinate-frame vectors `(∂x + a∂z, ∂y + b∂z, ∂a, ∂b)` as chart vectors.
fn horizontal(p: &ChartPoint5, c: [f64; 4]) -> [f64; 5] {
    [c[0], c[1], p.a * c[0] + p.b * c[1], c[2], c[3]]
}

fn frame_matrix(p: &ChartPoint5, f: impl Fn(&[f64; 5], &[f64; 5]) -> f64) -> Matrix4<f64> {
    let e = |i: usize| {
        let mut c = [0.0; 4];
        c[i] = 1.0;
        horizontal(p, c)
    };
    Matrix4::from_fn(|i, j| f(&e(i), &e(j)))
}

/// Central-difference Lie bracket of two chart vector fields.
fn fd_bracket(x: &dyn Fn(&[f64; 5]) -> [f64; 5], y: &dyn Fn(&[f64; 5]) -> [f64; 5], p: &[f64; 5]) -> [f64; 5] {
    let h = 1e-5;
    let dir = |f: &dyn Fn(&[f64; 5]) -> [f64; 5], v: &[f64; 5]| {
        let plus: [f64; 5] = std::array::from_fn(|i| p[i] + h * v[i]);
        let minus: [f64; 5] = std::array::from_fn(|i| p[i] - h * v[i]);
        let (a, b) = (f(&plus), f(&minus));
        std::array::from_fn::<f64, 5, _>(|i| (a[i] - b[i]) / (2.0 * h))
    };
    let (xv, yv) = (x(p), y(p));
    let (dy, dx) = (dir(y, &xv), dir(x, &yv));
    std::array::from_fn(|i| dy[i] - dx[i])
}

fn field_fn(fam: &BracketFamily, i: usize) -> impl Fn(&[f64; 5]) -> [f64; 5] + '_ {
    move |q| fam.fields[i].eval(q)
}

/// `dωⁱ(e_j, e_k)` by central differences of the coframe coefficients.
fn fd_exterior(cf: &Coframe6, i: usize, p: &[f64; 6], j: usize, k: usize) -> f64 {
    let h = 1e-5;
    let unit = |m: usize| {
        let mut v = [0.0; 6];
        v[m] = 1.0;
        v
    };
    let coeff = |q: &[f64; 6], m: usize| cf.forms[i].at(q).eval(&[unit(m)]);
    let deriv = |dirn: usize, m: usize| {
        let mut a = *p;
        let mut b = *p;
        a[dirn] += h;
        b[dirn] -= h;
        (coeff(&a, m) - coeff(&b, m)) / (2.0 * h)
    };
    deriv(j, k) - deriv(k, j)
}

// ---------- criteria ----------

fn criterion1() -> Criterion {
    let mut c = Criterion::default();
    let pts = points("acceptance.contact", 100);
    let coeffs: Vec<f64> = pts.iter().map(contact_nondegeneracy).collect();
    c.below("max |coefficient - 2| over 100 points (forms engine)", max(coeffs.iter().map(|v| (v - 2.0).abs())), 1e-9);
    // oracle: dω⁰ ∧ dω⁰ ∧ ω⁰ evaluated on the coordinate basis by full
    // antisymmetrization
    let oracle = |p: &ChartPoint5| {
        let w = [-p.a, -p.b, 1.0, 0.0, 0.0];
        let unit = |i: usize| {
            let mut v = [0.0; 5];
            v[i] = 1.0;
            v
        };
        let mut acc = 0.0;
        let mut perm = [0usize, 1, 2, 3, 4];
        permutations(&mut perm, 0, &mut |s: &[usize; 5], sign: f64| {
            let f1 = d_contact(&unit(s[0]), &unit(s[1]));
            let f2 = d_contact(&unit(s[2]), &unit(s[3]));
            acc += sign * f1 * f2 * w[s[4]];
        });
        acc / 4.0
    };
    let or: Vec<f64> = pts.iter().map(oracle).collect();
    c.below(
        "engine vs antisymmetrization oracle",
        max(coeffs.iter().zip(&or).map(|(a, b)| (a - b).abs())),
        1e-12,
    );
    c.lines.push(Line { text: format!("measured coefficient: {:+.12}", coeffs[0]), pass: true });
    c
}

fn permutations(p: &mut [usize; 5], k: usize, f: &mut dyn FnMut(&[usize; 5], f64)) {
    if k == p.len() {
        let mut sign = 1.0;
        for i in 0..5 {
            for j in (i + 1)..5 {
                if p[i] > p[j] {
                    sign = -sign;
                }
            }
        }
        f(p, sign);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn criterion2() -> Criterion {
    let mut c = Criterion::default();
    let pts = points("acceptance.attacking", 100);
    let diag = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, -1.0));
    let mut kdev = 0.0f64;
    let mut odev = 0.0f64;
    let mut null = 0.0f64;
    for p in &pts {
        let k = attacking_k(FrameTag::Coordinate, p).expect("nondegenerate");
        kdev = kdev.max((k.matrix - diag).amax());
        // oracle: g⁻¹Ω from g = 2(dx da + dy db), Ω = dω⁰, branch with +1 on ∂x
        let g = frame_matrix(p, |u, v| u[0] * v[3] + u[3] * v[0] + u[1] * v[4] + u[4] * v[1]);
        let om = frame_matrix(p, d_contact);
        let kt = g.try_inverse().unwrap() * om;
        let lam = (kt * kt).trace() / 4.0;
        let mut ko = kt / lam.abs().sqrt();
        if ko[(0, 0)] < 0.0 {
            ko = -ko;
        }
        odev = odev.max((ko - diag).amax());
        let EigenSplit::Real { plus, minus } = eigen_split(&k).expect("split") else { panic!("real split expected") };
        for space in [&plus, &minus] {
            for u in space.iter() {
                for v in space.iter() {
                    let (gu, ou) = ((u.transpose() * g * v)[0], (u.transpose() * om * v)[0]);
                    null = null.max(gu.abs()).max(ou.abs());
                }
            }
        }
    }
    c.below("max |K - diag(1,1,-1,-1)| (library)", kdev, 1e-10);
    c.below("max |K - diag(1,1,-1,-1)| (g^-1 Omega oracle)", odev, 1e-10);
    c.below("D+/D- null for g and Lagrangean for Omega", null, 1e-10);
    c
}

fn stated_generators() -> Vec<Matrix4<f64>> {
    let m = |rows: [[f64; 4]; 4]| Matrix4::from_fn(|i, j| rows[i][j]);
    vec![
        m([[1., 0., 0., 0.], [0., -1., 0., 0.], [0., 0., 1., 0.], [0., 0., 0., -1.]]),
        m([[0., 1., 0., 0.], [0., 0., 0., 0.], [0., 0., 0., -1.], [0., 0., 0., 0.]]),
        m([[0., 0., 0., 0.], [1., 0., 0., 0.], [0., 0., 0., 0.], [0., 0., -1., 0.]]),
        Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, -1.0)),
        Matrix4::identity(),
    ]
}

/// Rows of `Y^k_i T_{k…} + … = f T` over unknowns `(Y, f_1, …, f_m)`.
fn stabilizer_oracle(tensors: &[(usize, Vec<f64>)]) -> usize {
    let m = tensors.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (t, (rank, coeffs)) in tensors.iter().enumerate() {
        let n = 4usize.pow(*rank as u32);
        for idx in 0..n {
            let multi: Vec<usize> = (0..*rank).map(|s| (idx / 4usize.pow((*rank - 1 - s) as u32)) % 4).collect();
            let mut row = vec![0.0; 16 + m];
            for slot in 0..*rank {
                for k in 0..4 {
                    let mut other = multi.clone();
                    other[slot] = k;
                    let flat = other.iter().fold(0, |acc, v| acc * 4 + v);
                    // Y^k_{i_slot}, row-major (k, i)
                    row[k * 4 + multi[slot]] += coeffs[flat];
                }
            }
            row[16 + t] = -coeffs[idx];
            rows.push(row);
        }
    }
    let a = DMatrix::from_fn(rows.len(), 16 + m, |i, j| rows[i][j]);
    rref_nullspace(&a, 1e-10).len()
}

fn criterion3() -> Criterion {
    let mut c = Criterion::default();
    let p = ChartPoint5::ORIGIN;
    let g = DenseTensor4::from_sym(&in_frame(&attacking_metric(&p), FrameTag::EFrame, &p));
    let om = DenseTensor4::from_matrix(&symplectic_matrix(FrameTag::EFrame, &p));
    let s5 = solve_infinitesimal_stabilizer(&[g, om.clone()], 1e-10).expect("solvable");
    c.equal("dim stabilizer(g, Omega) (library)", s5.dimension, 5);
    c.below("stabilizer residual (library)", s5.max_residual, 1e-10);
    // oracle in the frame (dx, dy, db, da)
    let g_e = vec![0., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0., 0.];
    let o_e = vec![0., 0., 0., 1., 0., 0., 1., 0., 0., -1., 0., 0., -1., 0., 0., 0.];
    c.equal("dim stabilizer(g, Omega) (elimination oracle)", stabilizer_oracle(&[(2, g_e.clone()), (2, o_e.clone())]), 5);
    let gm = Matrix4::from_row_slice(&g_e);
    let omm = Matrix4::from_row_slice(&o_e);
    let gens = stated_generators();
    let mut fit = 0.0f64;
    for y in &gens {
        for t in [gm, omm] {
            let lhs = y.transpose() * t + t * y;
            let f = (lhs.component_mul(&t)).sum() / t.norm_squared();
            fit = fit.max((lhs - t * f).amax());
        }
    }
    c.below("quoted generators solve the stabilizer equations", fit, 1e-10);
    let br = |a: &Matrix4<f64>, b: &Matrix4<f64>| a * b - b * a;
    let table = max([
        (br(&gens[0], &gens[1]) - gens[1] * 2.0).amax(),
        (br(&gens[0], &gens[2]) + gens[2] * 2.0).amax(),
        (br(&gens[1], &gens[2]) - gens[0]).amax(),
    ]);
    c.below("[Y1,Y2]=2Y2, [Y1,Y3]=-2Y3, [Y2,Y3]=Y1", table, 1e-10);
    c.below("library commutation table", verify_commutation_table(&g0_basis(), &g0_table()), 1e-10);
    let ups = upsilon_tensor(FrameTag::ZFrame);
    let w = two_form_matrix();
    let s4 = solve_infinitesimal_stabilizer(&[DenseTensor4::from_sym(&ups), DenseTensor4::from_matrix(&w)], 1e-10)
        .expect("solvable");
    c.equal("dim stabilizer(Upsilon, omega) (library)", s4.dimension, 4);
    // oracle: Υ_ijkl as fourth derivatives of the quartic
    let mut u = vec![0.0; 256];
    for (flat, slot) in u.iter_mut().enumerate() {
        let idx = [flat / 64, (flat / 16) % 4, (flat / 4) % 4, flat % 4];
        *slot = fourth_derivative(idx);
    }
    let w_o = vec![0., 0., 0., 1., 0., 0., -3., 0., 0., 3., 0., 0., -1., 0., 0., 0.];
    c.equal("dim stabilizer(Upsilon, omega) (elimination oracle)", stabilizer_oracle(&[(4, u), (2, w_o)]), 4);
    let s11 = solve_infinitesimal_stabilizer(&[om], 1e-10).expect("solvable");
    c.equal("dim stabilizer(Omega) (library)", s11.dimension, 11);
    c.equal("dim stabilizer(Omega) (elimination oracle)", stabilizer_oracle(&[(2, o_e)]), 11);
    c
}

/// `∂⁴Υ/∂X^i∂X^j∂X^k∂X^l` by exact finite differences of the quartic.
fn fourth_derivative(idx: [usize; 4]) -> f64 {
    let mut acc = 0.0;
    for mask in 0..16u32 {
        let mut x = [0.0; 4];
        let mut sign = 1.0;
        for (s, &i) in idx.iter().enumerate() {
            if mask & (1 << s) != 0 {
                x[i] += 1.0;
            } else {
                x[i] -= 1.0;
                sign = -sign;
            }
        }
        acc += sign * upsilon_oracle(&x);
    }
    acc / 16.0
}

fn criterion4() -> Criterion {
    let mut c = Criterion::default();
    let pts = points("acceptance.landing", 1000);
    let mut lib = 0.0f64;
    let mut orc = 0.0f64;
    for p in &pts {
        let lam = -1.0 / (1.0 + p.a * p.a + p.b * p.b);
        let kt = k_tilde(&landing_metric(p), &symplectic_matrix(FrameTag::Coordinate, p)).expect("nondegenerate");
        lib = lib.max((kt * kt - Matrix4::identity() * lam).amax() / lam.abs());
        // oracle metric ĝ = 2((1+a²)db − ab da)dx − 2((1+b²)da − ab db)dy
        let (a, b) = (p.a, p.b);
        let q = |u: &[f64; 5], v: &[f64; 5]| {
            let t1 = |w: &[f64; 5]| (1.0 + a * a) * w[4] - a * b * w[3];
            let t2 = |w: &[f64; 5]| (1.0 + b * b) * w[3] - a * b * w[4];
            t1(u) * v[0] + t1(v) * u[0] - t2(u) * v[1] - t2(v) * u[1]
        };
        let g = frame_matrix(p, q);
        let om = frame_matrix(p, d_contact);
        let ko = g.try_inverse().unwrap() * om;
        orc = orc.max((ko * ko - Matrix4::identity() * lam).amax() / lam.abs());
    }
    c.below("max relative |K~^2 + Id/(1+a^2+b^2)| at 1000 points (library)", lib, 1e-9);
    c.below("same, metric and 2-form built independently", orc, 1e-9);
    let levi_pts = &pts[..100];
    let bad = levi_pts.iter().filter(|p| levi_form(p).signature != (1, 1)).count();
    c.equal("points with library Levi signature != (1,1)", bad, 0);
    // oracle: Hermitian form −i dω⁰(Z_j, Z̄_k) on the quoted Z₁, Z₂
    let mut bad_o = 0;
    for p in levi_pts {
        let (a, b) = (p.a, p.b);
        let r = (1.0 + a * a + b * b).sqrt();
        let i = Complex::new(0.0, 1.0);
        let z0 = Complex::new(0.0, 0.0);
        let z1 = [z0, z0, z0, i * (1.0 + a * a), Complex::new(r, a * b)];
        let (x2, y2) = (i * (1.0 + b * b), Complex::new(r, -a * b));
        let z2 = [x2, y2, x2 * a + y2 * b, z0, z0];
        let conj = |z: &[Complex<f64>; 5]| z.map(|c| c.conj());
        let zs = [z1, z2];
        let h = DMatrix::from_fn(2, 2, |j, k| -i * d_contact(&zs[j], &conj(&zs[k])));
        let herm = (&h - h.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let det = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re;
        if !(herm < 1e-12 && det < 0.0) {
            bad_o += 1;
        }
    }
    c.equal("points with oracle Levi signature != (1,1)", bad_o, 0);
    c
}

fn criterion5() -> Criterion {
    let mut c = Criterion::default();
    let oracles = [
        (SymmetryCatalog::AttackingSL4, "sl(4,R)", sl4_basis()),
        (SymmetryCatalog::LandingSU22, "su(2,2)", su22_basis()),
        (SymmetryCatalog::G2Contact, "split g2", g2_basis()),
    ];
    for (cat, label, basis) in oracles {
        let name = cat.name();
        let fields = cat.fields();
        let pts = points(&format!("acceptance.symmetry.{name}"), 50);
        let res = catalog_residuals(cat, &pts, Exec::default());
        c.below(
            &format!("{name}: max normalized residual, {} fields x 50 points", fields.len()),
            max(res.iter().map(|r| r.contact.max(r.tensor))),
            1e-7,
        );
        let rank = independence_rank(&fields, &points(&format!("acceptance.rank.{name}"), 10));
        c.equal(&format!("{name}: independence rank"), rank, fields.len());
        let model = extract_structure_constants(&fields, &points(&format!("acceptance.closure.{name}"), 30), Exec::default())
            .expect("structure constants");
        c.below(&format!("{name}: closure residual"), model.closure_residual, 1e-8);
        let (k, closure) = matrix_killing(&basis);
        c.equal(&format!("{name}: oracle {label} dimension"), basis.len(), fields.len());
        c.below(&format!("{name}: oracle {label} closure"), closure, 1e-10);
        let want = inertia(&k);
        c.equal(&format!("{name}: Killing signature vs {label} oracle"), model.signature, want);
        c.equal(&format!("{name}: Killing signature vs quoted"), model.signature, cat.expected_signature());
    }
    c
}

fn criterion6() -> Criterion {
    let mut c = Criterion::default();
    let mut s = Sampler::stream(SEED, "acceptance.gl2");
    let xs: Vec<[f64; 4]> = (0..1000).map(|_| s.vector::<4>(2.0)).collect();
    let rel = max(xs.iter().map(|x| {
        let n = x.iter().map(|v| v * v).sum::<f64>();
        (endomorphism_l(x).determinant() - upsilon_oracle(x)).abs() / (n * n)
    }));
    c.below("max relative |det L(X) - expanded quartic| on 1000 X", rel, 1e-10);
    let tol = 1e-9;
    let hit = |pts: &[[f64; 4]], want: NullClass| {
        pts.iter().filter(|x| classify_with(x, tol).map(|r| r.class) == Ok(want)).count() as f64 / pts.len() as f64
    };
    let cubic: Vec<[f64; 4]> = (0..1000).map(|_| cubic_point(s.uniform(-2.0, 2.0))).collect();
    let tangent: Vec<[f64; 4]> = (0..1000)
        .map(|_| {
            let sign = if s.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            tangent_point(s.uniform(-2.0, 2.0), sign * s.uniform(0.2, 2.0))
        })
        .collect();
    c.at_least("cubic points classified TypeN", hit(&cubic, NullClass::TypeN), 0.99);
    c.at_least("tangent-variety points classified TypeII", hit(&tangent, NullClass::TypeII), 0.99);
    c.at_least("random points classified NotNull", hit(&xs, NullClass::NotNull), 0.99);
    // oracle: the cubic and tangent samples are Υ-null by the written-out quartic
    let null = max(cubic.iter().chain(&tangent).map(|x| {
        let n = x.iter().map(|v| v * v).sum::<f64>();
        upsilon_oracle(x).abs() / (n * n)
    }));
    c.below("oracle quartic vanishes on the sampled null directions", null, 1e-12);
    c
}

fn criterion7() -> Criterion {
    let mut c = Criterion::default();
    let mut s = Sampler::stream(SEED, "acceptance.fibration");
    let pts: Vec<[f64; 6]> = (0..100).map(|_| s.vector::<6>(2.0)).collect();
    let (cx, cy) = (coframe_x(), coframe_y());
    c.below("structure equations, x coframe (engine)", max(pts.iter().map(|p| max(verify_eds(&cx, p)))), 1e-7);
    c.below("structure equations, y coframe (engine)", max(pts.iter().map(|p| max(verify_eds(&cy, p)))), 1e-7);
    // oracle: dωⁱ by central differences against the quoted right-hand sides
    let rhs: [&[(usize, usize, f64)]; 6] = [&[(1, 4, 1.0), (2, 3, -3.0)], &[(2, 5, 3.0)], &[(3, 5, 2.0)], &[(4, 5, 1.0)], &[], &[]];
    let mut fd = 0.0f64;
    for cf in [&cx, &cy] {
        for p in pts.iter().take(10) {
            let unit = |m: usize| {
                let mut v = [0.0; 6];
                v[m] = 1.0;
                v
            };
            let w: Vec<[f64; 6]> = (0..6).map(|i| std::array::from_fn(|m| cf.forms[i].at(p).eval(&[unit(m)]))).collect();
            for (i, terms) in rhs.iter().enumerate() {
                for j in 0..6 {
                    for k in (j + 1)..6 {
                        let want: f64 = terms.iter().map(|&(a, b, f)| f * (w[a][j] * w[b][k] - w[a][k] * w[b][j])).sum();
                        fd = fd.max((fd_exterior(cf, i, p, j, k) - want).abs());
                    }
                }
            }
        }
    }
    c.below("structure equations by finite differences (oracle)", fd, 1e-6);
    let rt = max((0..1000).map(|_| {
        let x = s.vector::<6>(2.0);
        let b = x_from_y(&y_from_x(&x));
        max((0..6).map(|i| (b[i] - x[i]).abs()))
    }));
    c.below("coordinate roundtrip", rt, 1e-12);
    // oracle for the commutators: [e_a, e_b] = −Σ dωⁱ(e_a, e_b) e_i from the
    // quoted structure equations
    let predicted = |a: usize, b: usize, k: usize| -> f64 {
        -rhs[k].iter().map(|&(x, y, f)| f * (delta(x, a) * delta(y, b) - delta(x, b) * delta(y, a))).sum::<f64>()
    };
    for chk in commutator_checks(&cx, &pts[0]) {
        let &(_, a, b, _, k) = CLAIMED_COMMUTATORS.iter().find(|t| t.0 == chk.label).unwrap();
        c.below(&format!("{} quoted (measured coefficient {:+})", chk.label, chk.measured), chk.residual, 1e-8);
        c.below(&format!("{} vs structure-equation prediction {:+}", chk.label, predicted(a, b, k)), (chk.measured - predicted(a, b, k)).abs() + chk.off_target, 1e-8);
    }
    let ctrls = joystick_controls(SEED, 20);
    let mut certified = 0;
    let mut angle = 0.0f64;
    let mut oracle_angle = 0.0f64;
    for ctl in &ctrls {
        let Ok(j) = joystick(ctl, 0.0, 2.0, 0.01) else { continue };
        if j.certificate.certifies(1e-7, 1e-5) {
            certified += 1;
        }
        angle = angle.max(j.certificate.max_angle);
        for k in 0..j.projected.t.len() {
            let (cz, _) = z_coefficients(&j.projected.x[k], &j.projected.velocity[k]);
            let t = -j.d2.y[k][4];
            let nu = [1.0, t, t * t, t * t * t];
            let dot: f64 = (0..4).map(|i| cz[i] * nu[i]).sum();
            let (nc, nn) = (cz.iter().map(|v| v * v).sum::<f64>(), nu.iter().map(|v| v * v).sum::<f64>());
            if nc > 1e-20 {
                oracle_angle = oracle_angle.max((1.0 - dot * dot / (nc * nn)).max(0.0).sqrt());
            }
        }
    }
    c.equal("joystick pipelines certified (of 20)", certified, 20);
    c.below("max angle to nu(T), T = -y4 (library)", angle, 1e-5);
    c.below("max angle to nu(-y4(t)) recomputed (oracle)", oracle_angle, 1e-5);
    c
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

fn criterion8() -> Criterion {
    let mut c = Criterion::default();
    let pts = points("acceptance.planner", 100);
    for mode in ManeuverMode::ALL {
        let fam = bracket_family(mode);
        let bad = pts.iter().filter(|p| bracket_generating_check(&fam, p) != 5).count();
        c.equal(&format!("{mode}: points with bracket-generating rank != 5"), bad, 0);
    }
    for mode in [ManeuverMode::Attacking, ManeuverMode::Landing, ManeuverMode::G2Strict] {
        let (label, field, _) = claimed_bracket(mode);
        let fam = bracket_family(mode);
        let (i, j) = fam.pair;
        let mut lib = 0.0f64;
        for p in &pts {
            let q = p.to_array();
            let got = field.eval(&q);
            let want: [f64; 5] = match mode {
                ManeuverMode::Landing => [0.0, 0.0, 9.0, 0.0, 0.0],
                ManeuverMode::Attacking => [0.0, 0.0, 3.0, 0.0, 0.0],
                _ => [0.0, 0.0, 1.0, 0.0, 0.0],
            };
            lib = lib.max(max((0..5).map(|k| (got[k] - want[k]).abs())));
        }
        c.below(label, lib, 1e-8);
        if mode != ManeuverMode::Landing {
            let fd = max(pts.iter().take(20).map(|p| {
                let q = p.to_array();
                let got = fd_bracket(&field_fn(&fam, i), &field_fn(&fam, j), &q);
                let lib = field.eval(&q);
                max((0..5).map(|k| (got[k] - lib[k]).abs()))
            }));
            c.below(&format!("{label}: finite-difference bracket agrees"), fd, 1e-6);
        } else {
            // the outer bracket by finite differences of the symbolic inner one
            let y = &fam.fields;
            let inner = y[1].bracket(&y[1].bracket(&y[2]));
            let fd = max(pts.iter().take(20).map(|p| {
                let q = p.to_array();
                let got = fd_bracket(&field_fn(&fam, 0), &|r: &[f64; 5]| inner.eval(r), &q);
                let lib = field.eval(&q);
                max((0..5).map(|k| (got[k] - lib[k]).abs()))
            }));
            c.below(&format!("{label}: finite-difference outer bracket agrees"), fd, 1e-6);
            // the pair actually used for steering: ω⁰([Y1,Y3]) = 9(1+a²)
            let tr = max(pts.iter().map(|p| {
                let q = p.to_array();
                let v = fd_bracket(&field_fn(&fam, 0), &field_fn(&fam, 2), &q);
                let w0 = v[2] - p.a * v[0] - p.b * v[1];
                (w0 - 9.0 * (1.0 + p.a * p.a)).abs() / (1.0 + p.a * p.a)
            }));
            c.below("landing: relative |contact part of [Y1,Y3] - 9(1+a^2)| (finite differences)", tr, 1e-6);
        }
    }
    for mode in ManeuverMode::ALL {
        let mut s = Sampler::stream(SEED, &format!("acceptance.pairs.{mode}"));
        let mut reached = 0;
        let mut certified = 0;
        for _ in 0..50 {
            let (a, b) = (s.chart_point(), s.chart_point());
            let Ok(plan) = plan_path(mode, &a, &b, 1e-3) else { continue };
            reached += usize::from(plan.error < 1e-3);
            if let Ok(r) = replay(&plan) {
                certified += usize::from(r.residuals.certifies(1e-7, 1e-6) && r.endpoint_drift < 1e-8);
            }
        }
        c.equal(&format!("{mode}: start/goal pairs reached within 1e-3 (of 50)"), reached, 50);
        c.equal(&format!("{mode}: replays certified (of 50)"), certified, 50);
    }
    c
}

fn criterion9() -> Criterion {
    let mut c = Criterion::default();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_saucer"))
            .args(["verify", "--suite", "all", "--seed", "7", "--format", "compact"])
            .env_remove("SAUCER_SEED")
            .output()
            .expect("spawn saucer");
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("JSON report");
        v["timestamp"] = 0.into();
        for s in v["suites"].as_array_mut().unwrap() {
            s["timestamp"] = 0.into();
        }
        (out.status.code(), v)
    };
    let (code1, a) = run();
    let (code2, b) = run();
    c.equal("exit codes", (code1, code2), (Some(0), Some(0)));
    c.equal("reports identical apart from timestamps", a == b, true);
    c
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Criterion); 9] = [
        ("contact constant", criterion1),
        ("attacking K operator", criterion2),
        ("stabilizer dimensions", criterion3),
        ("landing CR structure", criterion4),
        ("symmetry catalogs", criterion5),
        ("GL(2,R) calculus", criterion6),
        ("fibration", criterion7),
        ("planner", criterion8),
        ("determinism", criterion9),
    ];
    let mut failed = Vec::new();
    for (n, (name, run)) in criteria.iter().enumerate() {
        let c = run();
        let verdict = if c.pass() { "PASS" } else { "FAIL" };
        println!("criterion {} ({name}): {verdict}", n + 1);
        for l in &c.lines {
            println!("    [{}] {}", if l.pass { "ok" } else { "x" }, l.text);
        }
        if !c.pass() {
            failed.push(n + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
