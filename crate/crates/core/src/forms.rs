//! Differential forms, vector fields and symmetric tensors on an
//! `N`-dimensional coordinate chart.
//!
//! Coefficient maps are written once against [`Jet`] inputs. Plain values are
//! the real parts; derivatives are read off seeded directions, so the exterior
//! derivative, Jacobians and brackets are exact to rounding, including nested
//! ones. Maps that only exist as plain `f64` functions ("sampled") fall back
//! to central differences with step `1e-5 · max(1, ‖p‖)`.
//!
//! Forms are dense over the lexicographically ordered basis `dx^I`,
//! `I = i₁ < … < i_k`. Symmetric tensors are dense over all `N^k` index
//! tuples.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::chart::FrameTag;
use crate::jet::{lift, push_axis, push_dir, Jet, Ring};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormsError {
    #[error("degree overflow: {0} + {1} exceeds dimension {2}")]
    DegreeOverflow(usize, usize, usize),
    #[error("non-finite coefficients")]
    NonFinite,
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Increasing index sets of size `k` in `0..n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Position of an increasing index set in [`combinations`] order.
pub fn combination_rank(n: usize, set: &[usize]) -> usize {
    let k = set.len();
    let mut rank = 0;
    let mut prev: isize = -1;
    for (i, &c) in set.iter().enumerate() {
        for v in (prev + 1) as usize..c {
            rank += binomial(n - 1 - v, k - 1 - i);
        }
        prev = c as isize;
    }
    rank
}

/// Sort an index tuple, returning the permutation sign, or `None` on a
/// repeated index.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn wedge_coeffs<T: Ring>(n: usize, ka: usize, a: &[T], kb: usize, b: &[T]) -> Vec<T> {
    let k = ka + kb;
    let mut out = vec![T::zero(); binomial(n, k)];
    for (r, set) in combinations(n, k).iter().enumerate() {
        let mut acc = T::zero();
        for pick in combinations(k, ka) {
            let i: Vec<usize> = pick.iter().map(|&q| set[q]).collect();
            let j: Vec<usize> = set.iter().copied().filter(|s| !i.contains(s)).collect();
            let inv: usize = i.iter().map(|&x| j.iter().filter(|&&y| y < x).count()).sum();
            let term = a[combination_rank(n, &i)] * b[combination_rank(n, &j)];
            acc = if inv.is_multiple_of(2) { acc + term } else { acc - term };
        }
        out[r] = acc;
    }
    out
}

fn interior_coeffs<T: Ring>(n: usize, k: usize, a: &[T], v: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); binomial(n, k - 1)];
    for (r, rest) in combinations(n, k - 1).iter().enumerate() {
        let mut acc = T::zero();
        for i in 0..n {
            if rest.contains(&i) {
                continue;
            }
            let pos = rest.iter().filter(|&&x| x < i).count();
            let mut full = rest.clone();
            full.insert(pos, i);
            let term = v[i] * a[combination_rank(n, &full)];
            acc = if pos % 2 == 0 { acc + term } else { acc - term };
        }
        out[r] = acc;
    }
    out
}

/// `d` from the partial derivatives `da[j] = ∂_j α_I`.
fn d_from_partials<T: Ring>(n: usize, k: usize, da: &[Vec<T>]) -> Vec<T> {
    let mut out = vec![T::zero(); binomial(n, k + 1)];
    let sets = combinations(n, k);
    for (j, dj) in da.iter().enumerate() {
        for (ri, set) in sets.iter().enumerate() {
            if set.contains(&j) {
                continue;
            }
            let pos = set.iter().filter(|&&x| x < j).count();
            let mut full = set.clone();
            full.insert(pos, j);
            let r = combination_rank(n, &full);
            out[r] = if pos % 2 == 0 { out[r] + dj[ri] } else { out[r] - dj[ri] };
        }
    }
    out
}

fn fd_step<const N: usize>(p: &[f64; N]) -> f64 {
    1e-5 * p.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0)
}

/// Pointwise value of a `k`-form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormValue<const N: usize> {
    degree: usize,
    coeffs: Vec<f64>,
}

impl<const N: usize> FormValue<N> {
    pub fn zero(degree: usize) -> Self {
        FormValue { degree, coeffs: vec![0.0; binomial(N, degree)] }
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), binomial(N, degree), "coefficient count");
        FormValue { degree, coeffs }
    }

    /// A 1-form from its components.
    pub fn covector(c: [f64; N]) -> Self {
        FormValue { degree: 1, coeffs: c.to_vec() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Component on `dx^{i₁}∧…∧dx^{i_k}` for any index order.
    pub fn component(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => 0.0,
            Some((s, sign)) => sign * self.coeffs[combination_rank(N, &s)],
        }
    }

    pub fn wedge(&self, o: &Self) -> Result<Self, FormsError> {
        if self.degree + o.degree > N {
            return Err(FormsError::DegreeOverflow(self.degree, o.degree, N));
        }
        Ok(FormValue {
            degree: self.degree + o.degree,
            coeffs: wedge_coeffs(N, self.degree, &self.coeffs, o.degree, &o.coeffs),
        })
    }

    pub fn interior(&self, v: &[f64; N]) -> Self {
        if self.degree == 0 {
            return FormValue::zero(0).scale(0.0);
        }
        FormValue {
            degree: self.degree - 1,
            coeffs: interior_coeffs(N, self.degree, &self.coeffs, v),
        }
    }

    /// `α(v₁, …, v_k)`.
    pub fn eval(&self, vs: &[[f64; N]]) -> f64 {
        assert_eq!(vs.len(), self.degree);
        let mut cur = self.clone();
        for v in vs {
            cur = cur.interior(v);
        }
        cur.coeffs[0]
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        FormValue { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree);
        FormValue {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

type JetMap<const N: usize> = Arc<dyn Fn(&[Jet; N]) -> Vec<Jet> + Send + Sync>;
type PlainMap<const N: usize> = Arc<dyn Fn(&[f64; N]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
enum FormMap<const N: usize> {
    Exact(JetMap<N>),
    Sampled(PlainMap<N>),
}

/// A `k`-form field.
#[derive(Clone)]
pub struct DifferentialForm<const N: usize> {
    degree: usize,
    map: FormMap<N>,
}

impl<const N: usize> std::fmt::Debug for DifferentialForm<N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DifferentialForm<{}>(degree {})", N, self.degree)
    }
}

impl<const N: usize> DifferentialForm<N> {
    pub fn new(degree: usize, f: impl Fn(&[Jet; N]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        assert!(degree <= N);
        DifferentialForm { degree, map: FormMap::Exact(Arc::new(f)) }
    }

    /// A form known only through plain evaluations; derivatives use central
    /// differences.
    pub fn sampled(degree: usize, f: impl Fn(&[f64; N]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        assert!(degree <= N);
        DifferentialForm { degree, map: FormMap::Sampled(Arc::new(f)) }
    }

    pub fn function(f: impl Fn(&[Jet; N]) -> Jet + Send + Sync + 'static) -> Self {
        Self::new(0, move |p| vec![f(p)])
    }

    pub fn one_form(f: impl Fn(&[Jet; N]) -> [Jet; N] + Send + Sync + 'static) -> Self {
        Self::new(1, move |p| f(p).to_vec())
    }

    pub fn constant(v: FormValue<N>) -> Self {
        let degree = v.degree;
        let c: Vec<Jet> = v.coeffs.iter().map(|x| Jet::cst(*x)).collect();
        Self::new(degree, move |_| c.clone())
    }

    /// `dx^i`.
    pub fn coordinate(i: usize) -> Self {
        let mut c = [0.0; N];
        c[i] = 1.0;
        Self::constant(FormValue::covector(c))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.map, FormMap::Exact(_))
    }

    /// Coefficients on jet inputs. Sampled forms only accept plain points.
    pub fn eval_jet(&self, p: &[Jet; N]) -> Vec<Jet> {
        match &self.map {
            FormMap::Exact(f) => f(p),
            FormMap::Sampled(f) => {
                assert!(
                    p.iter().all(|j| j.dirs() == 0),
                    "sampled form cannot be differentiated exactly"
                );
                f(&p.map(|j| j.value())).into_iter().map(Jet::cst).collect()
            }
        }
    }

    fn values(&self, p: &[f64; N]) -> Vec<f64> {
        match &self.map {
            FormMap::Exact(f) => f(&lift(p)).iter().map(|j| j.value()).collect(),
            FormMap::Sampled(f) => f(p),
        }
    }

    pub fn at(&self, p: &[f64; N]) -> FormValue<N> {
        FormValue { degree: self.degree, coeffs: self.values(p) }
    }

    pub fn wedge(&self, o: &Self) -> Result<Self, FormsError> {
        let (ka, kb) = (self.degree, o.degree);
        if ka + kb > N {
            return Err(FormsError::DegreeOverflow(ka, kb, N));
        }
        let (a, b) = (self.clone(), o.clone());
        Ok(match (&self.map, &o.map) {
            (FormMap::Exact(_), FormMap::Exact(_)) => {
                Self::new(ka + kb, move |p| wedge_coeffs(N, ka, &a.eval_jet(p), kb, &b.eval_jet(p)))
            }
            _ => Self::sampled(ka + kb, move |p| wedge_coeffs(N, ka, &a.values(p), kb, &b.values(p))),
        })
    }

    /// Exterior derivative as a field.
    pub fn d(&self) -> Self {
        let k = self.degree;
        assert!(k < N, "d of a top-degree form");
        let a = self.clone();
        match &self.map {
            FormMap::Exact(_) => Self::new(k + 1, move |p| {
                let partials: Vec<Vec<Jet>> = (0..N)
                    .map(|j| {
                        let (pj, dir) = push_axis(p, j);
                        a.eval_jet(&pj).iter().map(|c| c.d(dir)).collect()
                    })
                    .collect();
                d_from_partials(N, k, &partials)
            }),
            FormMap::Sampled(_) => Self::sampled(k + 1, move |p| {
                let h = fd_step(p);
                let partials: Vec<Vec<f64>> = (0..N)
                    .map(|j| {
                        let mut pp = *p;
                        let mut pm = *p;
                        pp[j] += h;
                        pm[j] -= h;
                        let (fp, fm) = (a.values(&pp), a.values(&pm));
                        fp.iter().zip(&fm).map(|(u, v)| (u - v) / (2.0 * h)).collect()
                    })
                    .collect();
                d_from_partials(N, k, &partials)
            }),
        }
    }

    /// `X ⌟ α`.
    pub fn interior(&self, x: &VectorField<N>) -> Self {
        let k = self.degree;
        if k == 0 {
            return Self::new(0, |_| vec![Jet::zero()]);
        }
        let (a, x) = (self.clone(), x.clone());
        if self.is_exact() && x.is_exact() {
            Self::new(k - 1, move |p| interior_coeffs(N, k, &a.eval_jet(p), &x.eval_jet(p)))
        } else {
            Self::sampled(k - 1, move |p| interior_coeffs(N, k, &a.values(p), &x.eval(p)))
        }
    }

    /// Lie derivative by Cartan's formula `X⌟dα + d(X⌟α)`.
    pub fn lie(&self, x: &VectorField<N>) -> Self {
        let first = self.d().interior(x);
        if self.degree == 0 {
            return first;
        }
        first.add(&self.interior(x).d())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree);
        let (a, b) = (self.clone(), o.clone());
        if self.is_exact() && o.is_exact() {
            Self::new(self.degree, move |p| {
                a.eval_jet(p).iter().zip(b.eval_jet(p)).map(|(u, v)| *u + v).collect()
            })
        } else {
            Self::sampled(self.degree, move |p| {
                a.values(p).iter().zip(b.values(p)).map(|(u, v)| u + v).collect()
            })
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        let a = self.clone();
        match &self.map {
            FormMap::Exact(_) => Self::new(self.degree, move |p| a.eval_jet(p).iter().map(|c| *c * s).collect()),
            FormMap::Sampled(_) => Self::sampled(self.degree, move |p| a.values(p).iter().map(|c| c * s).collect()),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }
}

type JetField<const N: usize> = Arc<dyn Fn(&[Jet; N]) -> [Jet; N] + Send + Sync>;
type PlainField<const N: usize> = Arc<dyn Fn(&[f64; N]) -> [f64; N] + Send + Sync>;

#[derive(Clone)]
enum FieldMap<const N: usize> {
    Exact(JetField<N>),
    Sampled(PlainField<N>),
}

/// A vector field with exact (jet) or finite-difference Jacobian.
#[derive(Clone)]
pub struct VectorField<const N: usize> {
    id: String,
    map: FieldMap<N>,
}

impl<const N: usize> std::fmt::Debug for VectorField<N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VectorField({})", self.id)
    }
}

impl<const N: usize> VectorField<N> {
    pub fn new(id: impl Into<String>, f: impl Fn(&[Jet; N]) -> [Jet; N] + Send + Sync + 'static) -> Self {
        VectorField { id: id.into(), map: FieldMap::Exact(Arc::new(f)) }
    }

    pub fn sampled(id: impl Into<String>, f: impl Fn(&[f64; N]) -> [f64; N] + Send + Sync + 'static) -> Self {
        VectorField { id: id.into(), map: FieldMap::Sampled(Arc::new(f)) }
    }

    /// `∂/∂x^i`.
    pub fn coordinate(id: impl Into<String>, i: usize) -> Self {
        Self::constant(id, {
            let mut v = [0.0; N];
            v[i] = 1.0;
            v
        })
    }

    pub fn constant(id: impl Into<String>, v: [f64; N]) -> Self {
        let c = v.map(Jet::cst);
        Self::new(id, move |_| c)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.map, FieldMap::Exact(_))
    }

    pub fn eval(&self, p: &[f64; N]) -> [f64; N] {
        match &self.map {
            FieldMap::Exact(f) => f(&lift(p)).map(|j| j.value()),
            FieldMap::Sampled(f) => f(p),
        }
    }

    /// Components on jet inputs. Sampled fields only accept plain points.
    pub fn eval_jet(&self, p: &[Jet; N]) -> [Jet; N] {
        match &self.map {
            FieldMap::Exact(f) => f(p),
            FieldMap::Sampled(f) => {
                assert!(
                    p.iter().all(|j| j.dirs() == 0),
                    "sampled field cannot be differentiated exactly"
                );
                f(&p.map(|j| j.value())).map(Jet::cst)
            }
        }
    }

    /// `D_v X` at `p`.
    pub fn directional(&self, p: &[f64; N], v: &[f64; N]) -> [f64; N] {
        match &self.map {
            FieldMap::Exact(f) => {
                let (pv, dir) = push_dir(&lift(p), &v.map(Jet::cst));
                f(&pv).map(|j| j.d(dir).value())
            }
            FieldMap::Sampled(f) => {
                let vn = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                if vn == 0.0 {
                    return [0.0; N];
                }
                let h = fd_step(p) / vn;
                let mut pp = *p;
                let mut pm = *p;
                for i in 0..N {
                    pp[i] += h * v[i];
                    pm[i] -= h * v[i];
                }
                let (a, b) = (f(&pp), f(&pm));
                let mut out = [0.0; N];
                for i in 0..N {
                    out[i] = (a[i] - b[i]) / (2.0 * h);
                }
                out
            }
        }
    }

    /// `J[i][j] = ∂_j X^i`.
    pub fn jacobian(&self, p: &[f64; N]) -> [[f64; N]; N] {
        let mut jac = [[0.0; N]; N];
        for j in 0..N {
            let mut e = [0.0; N];
            e[j] = 1.0;
            let col = self.directional(p, &e);
            for i in 0..N {
                jac[i][j] = col[i];
            }
        }
        jac
    }

    /// Central-difference Jacobian regardless of representation.
    pub fn jacobian_fd(&self, p: &[f64; N]) -> [[f64; N]; N] {
        let h = fd_step(p);
        let mut jac = [[0.0; N]; N];
        for j in 0..N {
            let mut pp = *p;
            let mut pm = *p;
            pp[j] += h;
            pm[j] -= h;
            let (a, b) = (self.eval(&pp), self.eval(&pm));
            for i in 0..N {
                jac[i][j] = (a[i] - b[i]) / (2.0 * h);
            }
        }
        jac
    }

    /// `[X, Y] = J_Y X − J_X Y`.
    pub fn bracket(&self, o: &Self) -> Self {
        let id = format!("[{},{}]", self.id, o.id);
        let (x, y) = (self.clone(), o.clone());
        if self.is_exact() && o.is_exact() {
            Self::new(id, move |p| {
                let xv = x.eval_jet(p);
                let yv = y.eval_jet(p);
                let (px, dx) = push_dir(p, &xv);
                let (py, dy) = push_dir(p, &yv);
                let a = y.eval_jet(&px);
                let b = x.eval_jet(&py);
                let mut out = [Jet::zero(); N];
                for i in 0..N {
                    out[i] = a[i].d(dx) - b[i].d(dy);
                }
                out
            })
        } else {
            Self::sampled(id, move |p| {
                let xv = x.eval(p);
                let yv = y.eval(p);
                let a = y.directional(p, &xv);
                let b = x.directional(p, &yv);
                let mut out = [0.0; N];
                for i in 0..N {
                    out[i] = a[i] - b[i];
                }
                out
            })
        }
    }

    /// `Σ c_i(p) X_i` with jet-valued coefficient functions.
    pub fn combination(
        id: impl Into<String>,
        fields: &[VectorField<N>],
        coeffs: impl Fn(&[Jet; N]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        let fields = fields.to_vec();
        assert!(fields.iter().all(|f| f.is_exact()), "combination needs exact fields");
        Self::new(id, move |p| {
            let c = coeffs(p);
            let mut out = [Jet::zero(); N];
            for (ci, f) in c.iter().zip(&fields) {
                let v = f.eval_jet(p);
                for i in 0..N {
                    out[i] += *ci * v[i];
                }
            }
            out
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        let x = self.clone();
        let id = format!("{}*{}", s, self.id);
        match &self.map {
            FieldMap::Exact(_) => Self::new(id, move |p| x.eval_jet(p).map(|c| c * s)),
            FieldMap::Sampled(_) => Self::sampled(id, move |p| x.eval(p).map(|c| c * s)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (x, y) = (self.clone(), o.clone());
        let id = format!("{}+{}", self.id, o.id);
        if self.is_exact() && o.is_exact() {
            Self::new(id, move |p| {
                let (a, b) = (x.eval_jet(p), y.eval_jet(p));
                let mut out = a;
                for i in 0..N {
                    out[i] += b[i];
                }
                out
            })
        } else {
            Self::sampled(id, move |p| {
                let (a, b) = (x.eval(p), y.eval(p));
                let mut out = a;
                for i in 0..N {
                    out[i] += b[i];
                }
                out
            })
        }
    }
}

/// A symmetric tensor field over coordinate differentials.
#[derive(Clone)]
pub struct SymTensorField<const N: usize> {
    rank: usize,
    map: JetMap<N>,
}

impl<const N: usize> std::fmt::Debug for SymTensorField<N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymTensorField<{}>(rank {})", N, self.rank)
    }
}

/// Dense index → tuple.
fn unflatten(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

fn flatten(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &i| acc * n + i)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Dense coefficients of `Σ c · sym(θ₁ ⊗ … ⊗ θ_k)`.
pub fn symmetrized_products<T: Ring>(n: usize, k: usize, terms: &[(T, Vec<Vec<T>>)]) -> Vec<T> {
    let perms = permutations(k);
    let inv = 1.0 / perms.len() as f64;
    let total = n.pow(k as u32);
    let mut out = vec![T::zero(); total];
    let mut done = vec![false; total];
    for idx in 0..total {
        if done[idx] {
            continue;
        }
        let tuple = unflatten(idx, n, k);
        let mut acc = T::zero();
        for (c, theta) in terms {
            assert_eq!(theta.len(), k);
            let mut s = T::zero();
            for p in &perms {
                let mut prod = T::from_f64(1.0);
                for (m, &pm) in p.iter().enumerate() {
                    prod = prod * theta[pm][tuple[m]];
                }
                s = s + prod;
            }
            acc = acc + *c * s;
        }
        acc = acc * T::from_f64(inv);
        for p in &perms {
            let q: Vec<usize> = p.iter().map(|&pm| tuple[pm]).collect();
            let j = flatten(&q, n);
            out[j] = acc;
            done[j] = true;
        }
    }
    out
}

impl<const N: usize> SymTensorField<N> {
    /// Dense coefficient map; the caller guarantees symmetry.
    pub fn from_dense(rank: usize, f: impl Fn(&[Jet; N]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        SymTensorField { rank, map: Arc::new(f) }
    }

    /// `Σ c · sym(θ₁⊗…⊗θ_k)` from a list of (coefficient, covectors).
    pub fn from_products(
        rank: usize,
        f: impl Fn(&[Jet; N]) -> Vec<(Jet, Vec<[Jet; N]>)> + Send + Sync + 'static,
    ) -> Self {
        Self::from_dense(rank, move |p| {
            let terms: Vec<(Jet, Vec<Vec<Jet>>)> = f(p)
                .into_iter()
                .map(|(c, th)| (c, th.into_iter().map(|t| t.to_vec()).collect()))
                .collect();
            symmetrized_products(N, rank, &terms)
        })
    }

    pub fn constant(t: &SymTensor) -> Self {
        assert_eq!(t.dim(), N);
        let c: Vec<Jet> = t.coeffs.iter().map(|v| Jet::cst(*v)).collect();
        Self::from_dense(t.rank, move |_| c.clone())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eval_jet(&self, p: &[Jet; N]) -> Vec<Jet> {
        (self.map)(p)
    }

    pub fn at(&self, p: &[f64; N]) -> SymTensor {
        SymTensor {
            rank: self.rank,
            frame: FrameTag::coordinates(N),
            coeffs: self.eval_jet(&lift(p)).iter().map(|j| j.value()).collect(),
        }
    }

    /// `D_v S` at `p`, dense.
    pub fn directional(&self, p: &[f64; N], v: &[f64; N]) -> Vec<f64> {
        let (pv, dir) = push_dir(&lift(p), &v.map(Jet::cst));
        self.eval_jet(&pv).iter().map(|j| j.d(dir).value()).collect()
    }
}

/// Pointwise symmetric tensor in a declared frame.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymTensor {
    rank: usize,
    frame: FrameTag,
    coeffs: Vec<f64>,
}

impl SymTensor {
    pub fn new(rank: usize, frame: FrameTag, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), frame.dim().pow(rank as u32), "dense coefficient count");
        SymTensor { rank, frame, coeffs }
    }

    /// `Σ c · sym(θ₁⊗…⊗θ_k)` with frame-component covectors.
    pub fn from_products(rank: usize, frame: FrameTag, terms: &[(f64, Vec<Vec<f64>>)]) -> Self {
        let coeffs = symmetrized_products(frame.dim(), rank, terms);
        SymTensor { rank, frame, coeffs }
    }

    pub fn zeros(rank: usize, frame: FrameTag) -> Self {
        SymTensor { rank, frame, coeffs: vec![0.0; frame.dim().pow(rank as u32)] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn frame(&self) -> FrameTag {
        self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.coeffs[flatten(idx, self.dim())]
    }

    /// Multilinear evaluation on frame-component vectors.
    pub fn eval_components(&self, vs: &[&[f64]]) -> f64 {
        assert_eq!(vs.len(), self.rank);
        let n = self.dim();
        let mut acc = 0.0;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let t = unflatten(idx, n, self.rank);
            let mut prod = *c;
            for (m, &i) in t.iter().enumerate() {
                prod *= vs[m][i];
            }
            acc += prod;
        }
        acc
    }

    /// `T(v, …, v)`.
    pub fn quad(&self, v: &[f64]) -> f64 {
        let vs: Vec<&[f64]> = (0..self.rank).map(|_| v).collect();
        self.eval_components(&vs)
    }

    /// Evaluate on chart tangent vectors (mapped through the frame's coframe
    /// when the frame lives on the distribution).
    pub fn eval_chart(&self, vs: &[[f64; 5]]) -> f64 {
        let comps: Vec<Vec<f64>> = vs.iter().map(|v| self.frame.components(v)).collect();
        let refs: Vec<&[f64]> = comps.iter().map(|c| c.as_slice()).collect();
        self.eval_components(&refs)
    }

    /// Components `T(f_{i₁}, …, f_{i_k})` on a new family of vectors given in
    /// this tensor's components.
    pub fn restrict(&self, fs: &[Vec<f64>], frame: FrameTag) -> SymTensor {
        let m = fs.len();
        assert_eq!(m, frame.dim());
        let total = m.pow(self.rank as u32);
        let coeffs = (0..total)
            .map(|idx| {
                let t = unflatten(idx, m, self.rank);
                let vs: Vec<&[f64]> = t.iter().map(|&i| fs[i].as_slice()).collect();
                self.eval_components(&vs)
            })
            .collect();
        SymTensor { rank: self.rank, frame, coeffs }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        SymTensor { rank: self.rank, frame: self.frame, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rank, self.frame), (o.rank, o.frame));
        SymTensor {
            rank: self.rank,
            frame: self.frame,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    /// Largest deviation from full symmetry.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim();
        let perms = permutations(self.rank);
        let mut worst = 0.0f64;
        for (idx, c) in self.coeffs.iter().enumerate() {
            let t = unflatten(idx, n, self.rank);
            for p in &perms {
                let q: Vec<usize> = p.iter().map(|&pm| t[pm]).collect();
                worst = worst.max((c - self.coeffs[flatten(&q, n)]).abs());
            }
        }
        worst
    }

    /// Rank-2 coefficients as a matrix.
    pub fn matrix(&self) -> nalgebra::DMatrix<f64> {
        assert_eq!(self.rank, 2);
        let n = self.dim();
        nalgebra::DMatrix::from_row_slice(n, n, &self.coeffs)
    }

    /// `a ⊙ T = sym(a ⊗ T)`.
    pub fn sym_product(a: &[f64], t: &SymTensor) -> SymTensor {
        let n = t.dim();
        assert_eq!(a.len(), n);
        let k = t.rank + 1;
        let total = n.pow(k as u32);
        let coeffs = (0..total)
            .map(|idx| {
                let tu = unflatten(idx, n, k);
                let mut s = 0.0;
                for m in 0..k {
                    let mut rest = tu.clone();
                    let i = rest.remove(m);
                    s += a[i] * t.coeffs[flatten(&rest, n)];
                }
                s / k as f64
            })
            .collect();
        SymTensor { rank: k, frame: t.frame, coeffs }
    }

    /// Basis of symmetric rank-`k` tensors (one per sorted index tuple).
    pub fn basis(rank: usize, frame: FrameTag) -> Vec<SymTensor> {
        let n = frame.dim();
        let mut out = Vec::new();
        let total = n.pow(rank as u32);
        for idx in 0..total {
            let t = unflatten(idx, n, rank);
            if t.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let covs: Vec<Vec<f64>> = t
                .iter()
                .map(|&i| {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    e
                })
                .collect();
            out.push(SymTensor::from_products(rank, frame, &[(1.0, covs)]));
        }
        out
    }
}

/// `dα` at `p`.
pub fn exterior_derivative<const N: usize>(a: &DifferentialForm<N>, p: &[f64; N]) -> Result<FormValue<N>, FormsError> {
    let v = a.d().at(p);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(FormsError::NonFinite)
    }
}

pub fn wedge<const N: usize>(a: &DifferentialForm<N>, b: &DifferentialForm<N>) -> Result<DifferentialForm<N>, FormsError> {
    a.wedge(b)
}

/// `L_X α` at `p` by Cartan's formula.
pub fn lie_derivative_form<const N: usize>(x: &VectorField<N>, a: &DifferentialForm<N>, p: &[f64; N]) -> FormValue<N> {
    a.lie(x).at(p)
}

/// `[X, Y](p)`.
pub fn bracket<const N: usize>(x: &VectorField<N>, y: &VectorField<N>, p: &[f64; N]) -> [f64; N] {
    let xv = x.eval(p);
    let yv = y.eval(p);
    let a = y.directional(p, &xv);
    let b = x.directional(p, &yv);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = a[i] - b[i];
    }
    out
}

/// `L_X S` at `p` from `D_X S` and the Jacobian of `X`.
pub fn lie_derivative_symtensor<const N: usize>(x: &VectorField<N>, s: &SymTensorField<N>, p: &[f64; N]) -> SymTensor {
    let xv = x.eval(p);
    let jx = x.jacobian(p);
    let k = s.rank();
    let sv = s.at(p);
    let ds = s.directional(p, &xv);
    let total = N.pow(k as u32);
    let coeffs = (0..total)
        .map(|idx| {
            let t = unflatten(idx, N, k);
            let mut acc = ds[idx];
            for m in 0..k {
                let mut q = t.clone();
                for j in 0..N {
                    let d = jx[j][t[m]];
                    if d != 0.0 {
                        q[m] = j;
                        acc += sv.coeffs[flatten(&q, N)] * d;
                    }
                }
            }
            acc
        })
        .collect();
    SymTensor { rank: k, frame: FrameTag::coordinates(N), coeffs }
}

/// Magnitude scale of `L_X S` at `p`: `‖D_X S‖ + k‖S‖‖J_X‖`.
pub fn lie_scale_symtensor<const N: usize>(x: &VectorField<N>, s: &SymTensorField<N>, p: &[f64; N]) -> f64 {
    let xv = x.eval(p);
    let jn = frob(&x.jacobian(p));
    let dn = s.directional(p, &xv).iter().map(|c| c * c).sum::<f64>().sqrt();
    dn + s.rank() as f64 * s.at(p).norm() * jn
}

pub(crate) fn frob<const N: usize>(j: &[[f64; N]; N]) -> f64 {
    j.iter().flatten().map(|c| c * c).sum::<f64>().sqrt()
}
