//! The G₂ double fibration on the 6-dimensional correspondence space and the
//! curve pipeline from the (2,3,5) side to the contact side.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{DifferentialForm, FormValue, VectorField};
use crate::gl2::{classify_with, NullClass};
use crate::jet::{lift, push_dir, Jet, Ring};
use crate::maneuvers::ControlSignal;
use crate::ode::{rk4_step, steps_for};

pub type Coords6 = [f64; 6];

/// Smallest admissible `|ẏ⁴|` for the lift.
pub const LIFT_EPS: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum FibrationError {
    #[error("lift undefined at t = {t}: |dy4/dt| = {rate:e}")]
    LiftSingular { t: f64, rate: f64 },
    #[error("singular coframe at {0:?}")]
    SingularCoframe(Coords6),
    #[error("invalid time grid: {0}")]
    BadGrid(String),
    #[error("invalid control: {0}")]
    BadControl(String),
}

pub fn y_from_x_ring<T: Ring>(x: &[T; 6]) -> [T; 6] {
    let [x0, x1, x2, x3, x4, x5] = *x;
    let three = T::from_f64(3.0);
    [
        x0 + x1 * x4 + three * x5 * x2 * x4 - x5 * x5 * x5 * x4 * x4,
        x1 + x5 * x5 * x5 * x4,
        x2 - x5 * x5 * x4,
        x3 + x5 * x4,
        x5,
        x4,
    ]
}

/// Exact inverse of [`y_from_x`] by back-substitution.
pub fn x_from_y_ring<T: Ring>(y: &[T; 6]) -> [T; 6] {
    let [y0, y1, y2, y3, y4, y5] = *y;
    let three = T::from_f64(3.0);
    [
        y0 - y1 * y5 - three * y2 * y4 * y5 - y4 * y4 * y4 * y5 * y5,
        y1 - y4 * y4 * y4 * y5,
        y2 + y4 * y4 * y5,
        y3 - y4 * y5,
        y5,
        y4,
    ]
}

pub fn y_from_x(x: &Coords6) -> Coords6 {
    y_from_x_ring(x)
}

pub fn x_from_y(y: &Coords6) -> Coords6 {
    x_from_y_ring(y)
}

/// `∂y/∂x` at `x`.
pub fn y_from_x_jacobian(x: &Coords6) -> [[f64; 6]; 6] {
    jacobian(x, y_from_x_ring::<Jet>)
}

fn jacobian(p: &Coords6, f: impl Fn(&[Jet; 6]) -> [Jet; 6]) -> [[f64; 6]; 6] {
    let mut jac = [[0.0; 6]; 6];
    for j in 0..6 {
        let mut e = [0.0; 6];
        e[j] = 1.0;
        let (q, dir) = push_dir(&lift(p), &e.map(Jet::cst));
        let out = f(&q);
        for i in 0..6 {
            jac[i][j] = out[i].d(dir).value();
        }
    }
    jac
}

/// `(ω⁰, ω¹, ω², ω³, ω⁴, ω⁷)` as one-forms on the correspondence space.
#[derive(Clone, Debug)]
pub struct Coframe6 {
    pub forms: [DifferentialForm<6>; 6],
}

pub const COFRAME_LABELS: [&str; 6] = ["w0", "w1", "w2", "w3", "w4", "w7"];

fn one(v: f64) -> Jet {
    Jet::cst(v)
}

pub fn coframe_x() -> Coframe6 {
    let z = Jet::zero;
    Coframe6 {
        forms: [
            DifferentialForm::one_form(move |p| [one(1.0), z(), z(), -(3.0 * p[2]), p[1], z()]),
            DifferentialForm::one_form(move |p| {
                let s = p[5];
                [z(), one(1.0), 3.0 * s, 3.0 * s * s, s * s * s, z()]
            }),
            DifferentialForm::one_form(move |p| {
                let s = p[5];
                [z(), z(), one(1.0), 2.0 * s, s * s, z()]
            }),
            DifferentialForm::one_form(move |p| [z(), z(), z(), one(1.0), p[5], z()]),
            DifferentialForm::one_form(move |_| [z(), z(), z(), z(), one(1.0), z()]),
            DifferentialForm::one_form(move |_| [z(), z(), z(), z(), z(), one(-1.0)]),
        ],
    }
}

pub fn coframe_y() -> Coframe6 {
    let z = Jet::zero;
    Coframe6 {
        forms: [
            DifferentialForm::one_form(move |p| {
                let (y2, y4, y5) = (p[2], p[4], p[5]);
                [one(1.0), -y5, -(3.0 * y4 * y5), -(3.0 * (y2 + y5 * y4 * y4)), z(), z()]
            }),
            DifferentialForm::one_form(move |p| {
                let y4 = p[4];
                [z(), one(1.0), 3.0 * y4, 3.0 * y4 * y4, z(), z()]
            }),
            DifferentialForm::one_form(move |p| [z(), z(), one(1.0), 2.0 * p[4], z(), z()]),
            DifferentialForm::one_form(move |p| [z(), z(), z(), one(1.0), -p[5], z()]),
            DifferentialForm::one_form(move |_| [z(), z(), z(), z(), z(), one(1.0)]),
            DifferentialForm::one_form(move |_| [z(), z(), z(), z(), one(-1.0), z()]),
        ],
    }
}

impl Coframe6 {
    /// Row `i` holds the coefficients of the `i`-th form.
    pub fn matrix(&self, p: &Coords6) -> [[f64; 6]; 6] {
        let mut m = [[0.0; 6]; 6];
        for (i, f) in self.forms.iter().enumerate() {
            m[i].copy_from_slice(f.at(p).coeffs());
        }
        m
    }

    pub fn with_form(mut self, i: usize, f: DifferentialForm<6>) -> Self {
        self.forms[i] = f;
        self
    }

    /// Dual frame `(e₀, e₁, e₂, e₃, e₄, e₇)`.
    pub fn dual_frame(&self) -> [VectorField<6>; 6] {
        std::array::from_fn(|k| {
            let forms = self.forms.clone();
            VectorField::new(format!("e{}", &COFRAME_LABELS[k][1..]), move |p| {
                let m: [[Jet; 6]; 6] = std::array::from_fn(|i| {
                    let c = forms[i].eval_jet(p);
                    std::array::from_fn(|j| c[j])
                });
                let inv = jet_inverse(m).expect("coframe is invertible");
                std::array::from_fn(|i| inv[i][k])
            })
        })
    }
}

/// Gauss–Jordan inverse with partial pivoting on the values.
pub fn jet_inverse<const N: usize>(mut m: [[Jet; N]; N]) -> Option<[[Jet; N]; N]> {
    let mut inv: [[Jet; N]; N] =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Jet::one() } else { Jet::zero() }));
    for col in 0..N {
        let piv = (col..N).max_by(|&a, &b| m[a][col].value().abs().total_cmp(&m[b][col].value().abs()))?;
        if m[piv][col].value().abs() < 1e-14 {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let r = m[col][col].recip();
        for j in 0..N {
            m[col][j] *= r;
            inv[col][j] *= r;
        }
        for i in 0..N {
            if i == col {
                continue;
            }
            let f = m[i][col];
            if f.value() == 0.0 && f.dirs() == 0 {
                continue;
            }
            for j in 0..N {
                m[i][j] -= f * m[col][j];
                inv[i][j] -= f * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Max coefficient residual of each structure equation at `p`.
pub fn verify_eds(cf: &Coframe6, p: &Coords6) -> [f64; 6] {
    let w: Vec<FormValue<6>> = cf.forms.iter().map(|f| f.at(p)).collect();
    let wedge = |a: usize, b: usize| w[a].wedge(&w[b]).expect("one-forms");
    // indices into (ω⁰, ω¹, ω², ω³, ω⁴, ω⁷)
    let rhs = [
        wedge(1, 4).sub(&wedge(2, 3).scale(3.0)),
        wedge(2, 5).scale(3.0),
        wedge(3, 5).scale(2.0),
        wedge(4, 5),
        FormValue::zero(2),
        FormValue::zero(2),
    ];
    std::array::from_fn(|i| cf.forms[i].d().at(p).sub(&rhs[i]).max_abs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorCheck {
    pub label: &'static str,
    /// claimed coefficient of the target frame vector
    pub claimed: f64,
    /// `ωᵏ([e_a, e_b])` for the target index `k`
    pub measured: f64,
    /// `max |[e_a, e_b] − claimed · e_k|` in coordinates
    pub residual: f64,
    /// largest `|ωⁱ([e_a, e_b])|` over `i ≠ k`
    pub off_target: f64,
}

/// Frame indices in `(e₀, e₁, e₂, e₃, e₄, e₇)` order.
const E0: usize = 0;
const E1: usize = 1;
const E2: usize = 2;
const E3: usize = 3;
const E4: usize = 4;
const E7: usize = 5;

/// The commutator relations commonly quoted for this frame, as
/// `(label, a, b, claimed coefficient, target)`.
pub const CLAIMED_COMMUTATORS: [(&str, usize, usize, f64, usize); 7] = [
    ("[e4,e7]=-e3", E4, E7, -1.0, E3),
    ("[e7,e3]=2e2", E7, E3, 2.0, E2),
    ("[e7,e2]=-3e1", E7, E2, -3.0, E1),
    ("[e3,e2]=3e0", E3, E2, 3.0, E0),
    ("[e4,e2]=0", E4, E2, 0.0, E2),
    ("[e4,e0]=0", E4, E0, 0.0, E0),
    ("[e4,e1]=-e0", E4, E1, -1.0, E0),
];

pub fn commutator_checks(cf: &Coframe6, p: &Coords6) -> Vec<CommutatorCheck> {
    let e = cf.dual_frame();
    let w: Vec<FormValue<6>> = cf.forms.iter().map(|f| f.at(p)).collect();
    CLAIMED_COMMUTATORS
        .iter()
        .map(|&(label, a, b, claimed, k)| {
            let br = e[a].bracket(&e[b]).eval(p);
            let target = e[k].eval(p);
            let residual = (0..6).map(|i| (br[i] - claimed * target[i]).abs()).fold(0.0, f64::max);
            let comps: Vec<f64> = w.iter().map(|wi| wi.eval(&[br])).collect();
            let off_target = (0..6).filter(|&i| i != k).map(|i| comps[i].abs()).fold(0.0, f64::max);
            CommutatorCheck { label, claimed, measured: comps[k], residual, off_target }
        })
        .collect()
}

/// Full structure-function check: `ωⁱ([e_a, e_b]) = −dωⁱ(e_a, e_b)` for all
/// index triples.
pub fn structure_function_residual(cf: &Coframe6, p: &Coords6) -> f64 {
    let e = cf.dual_frame();
    let vals: Vec<Coords6> = e.iter().map(|f| f.eval(p)).collect();
    let dw: Vec<FormValue<6>> = cf.forms.iter().map(|f| f.d().at(p)).collect();
    let w: Vec<FormValue<6>> = cf.forms.iter().map(|f| f.at(p)).collect();
    let mut worst = 0.0f64;
    for a in 0..6 {
        for b in (a + 1)..6 {
            let br = e[a].bracket(&e[b]).eval(p);
            for i in 0..6 {
                let lhs = w[i].eval(&[br]);
                let rhs = -dw[i].eval(&[vals[a], vals[b]]);
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

/// `e₃ = ∂y³ − 2y⁴∂y² + 3(y⁴)²∂y¹ + 3y²∂y⁰` and `e₇ = −∂y⁴ − y⁵e₃` in
/// y-coordinates.
pub fn d2_frame_y() -> [VectorField<6>; 2] {
    let e3 = |p: &[Jet; 6]| {
        let z = Jet::zero();
        [3.0 * p[2], 3.0 * p[4] * p[4], -(2.0 * p[4]), Jet::one(), z, z]
    };
    [
        VectorField::new("e3", e3),
        VectorField::new("e7", move |p| {
            let v = e3(p);
            let mut out: [Jet; 6] = std::array::from_fn(|i| -(p[5] * v[i]));
            out[4] = out[4] - 1.0;
            out
        }),
    ]
}

/// Residual of `ωⁱ(e_k) = δⁱ_k` for the explicit `e₃`, `e₇` in y-coordinates.
pub fn d2_frame_duality_residual(p: &Coords6) -> f64 {
    let cf = coframe_y();
    let [e3, e7] = d2_frame_y();
    let mut worst = 0.0f64;
    for (k, e) in [(E3, e3), (E7, e7)] {
        let v = e.eval(p);
        for (i, f) in cf.forms.iter().enumerate() {
            let want = if i == k { 1.0 } else { 0.0 };
            worst = worst.max((f.at(p).eval(&[v]) - want).abs());
        }
    }
    worst
}

/// `max |coframe_y(y(x)) · ∂y/∂x − coframe_x(x)|`.
pub fn pullback_residual(x: &Coords6) -> f64 {
    let my = coframe_y().matrix(&y_from_x(x));
    let mx = coframe_x().matrix(x);
    let j = y_from_x_jacobian(x);
    let mut worst = 0.0f64;
    for i in 0..6 {
        for k in 0..6 {
            let s: f64 = (0..6).map(|l| my[i][l] * j[l][k]).sum();
            worst = worst.max((s - mx[i][k]).abs());
        }
    }
    worst
}

/// Controls of a D₂ curve: `u = ẏ³`, `w = ẏ⁴`.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct D2Controls {
    pub u: ControlSignal,
    pub w: ControlSignal,
    /// Starting point `(y⁰, …, y⁴)`.
    #[serde(default)]
    pub start: [f64; 5],
}

impl D2Controls {
    pub fn new(u: ControlSignal, w: ControlSignal) -> Self {
        D2Controls { u, w, start: [0.0; 5] }
    }

    pub fn validate(&self) -> Result<(), FibrationError> {
        self.u.validate().map_err(FibrationError::BadControl)?;
        self.w.validate().map_err(FibrationError::BadControl)?;
        if !self.start.iter().all(|v| v.is_finite()) {
            return Err(FibrationError::BadControl("non-finite start".into()));
        }
        Ok(())
    }
}

/// `ẏ` of a D₂-tangent curve.
pub fn d2_velocity(y: &[f64; 5], u: f64, w: f64) -> [f64; 5] {
    [3.0 * y[2] * u, 3.0 * y[4] * y[4] * u, -2.0 * y[4] * u, u, w]
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct D2Curve {
    pub t: Vec<f64>,
    pub y: Vec<[f64; 5]>,
    /// `[u, w]` at each sample
    pub controls: Vec<[f64; 2]>,
    /// `[u̇, ẇ]` at each sample, from the control signals
    #[serde(skip)]
    pub control_rates: Vec<[f64; 2]>,
}

pub fn integrate_d2_curve(c: &D2Controls, t0: f64, t1: f64, dt: f64) -> Result<D2Curve, FibrationError> {
    c.validate()?;
    if !(dt > 0.0 && dt.is_finite() && t1 >= t0 && t0.is_finite() && t1.is_finite()) {
        return Err(FibrationError::BadGrid(format!("{t0}:{t1}:{dt}")));
    }
    let f = |t: f64, y: &[f64; 5]| d2_velocity(y, c.u.value(t), c.w.value(t));
    let (n, h) = steps_for(t1 - t0, dt);
    let mut curve = D2Curve::default();
    let mut y = c.start;
    let push = |curve: &mut D2Curve, t: f64, y: [f64; 5]| {
        curve.t.push(t);
        curve.y.push(y);
        curve.controls.push([c.u.value(t), c.w.value(t)]);
        curve.control_rates.push([c.u.derivative(t), c.w.derivative(t)]);
    };
    push(&mut curve, t0, y);
    for k in 0..n {
        let t = t0 + k as f64 * h;
        y = rk4_step(&f, t, &y, h);
        push(&mut curve, t0 + (k + 1) as f64 * h, y);
    }
    Ok(curve)
}

/// Largest `|ωⁱ(ẏ)| / ‖ẏ‖`, `i = 0, 1, 2`, of the y-coframe along the curve.
pub fn d2_tangency_residual(c: &D2Curve) -> f64 {
    let cf = coframe_y();
    let mut worst = 0.0f64;
    for (y, [u, w]) in c.y.iter().zip(&c.controls) {
        let v = d2_velocity(y, *u, *w);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let p = [y[0], y[1], y[2], y[3], y[4], 0.0];
        let v6 = [v[0], v[1], v[2], v[3], v[4], 0.0];
        for f in &cf.forms[..3] {
            worst = worst.max(f.at(&p).eval(&[v6]).abs() / norm);
        }
    }
    worst
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LiftedCurve {
    pub t: Vec<f64>,
    pub y: Vec<Coords6>,
    /// `ẏ` including `ẏ⁵ = d/dt(u/w)`
    pub velocity: Vec<Coords6>,
}

/// Appends `y⁵ = ẏ³/ẏ⁴`.
pub fn lift_curve(c: &D2Curve) -> Result<LiftedCurve, FibrationError> {
    let mut out = LiftedCurve::default();
    for (k, (&t, y)) in c.t.iter().zip(&c.y).enumerate() {
        let [u, w] = c.controls[k];
        if w.abs() <= LIFT_EPS {
            return Err(FibrationError::LiftSingular { t, rate: w.abs() });
        }
        let [du, dw] = c.control_rates.get(k).copied().unwrap_or([f64::NAN; 2]);
        let v = d2_velocity(y, u, w);
        out.t.push(t);
        out.y.push([y[0], y[1], y[2], y[3], y[4], u / w]);
        out.velocity.push([v[0], v[1], v[2], v[3], v[4], (du * w - u * dw) / (w * w)]);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ProjectedCurve {
    pub t: Vec<f64>,
    /// `(x⁰, …, x⁴)`
    pub x: Vec<[f64; 5]>,
    /// dropped fiber coordinate `x⁵ = y⁴`
    pub fiber: Vec<f64>,
    pub velocity: Vec<[f64; 5]>,
}

pub fn project_to_contact(lc: &LiftedCurve) -> ProjectedCurve {
    let mut out = ProjectedCurve::default();
    for ((&t, y), v) in lc.t.iter().zip(&lc.y).zip(&lc.velocity) {
        let (q, dir) = push_dir(&lift(y), &v.map(Jet::cst));
        let xj = x_from_y_ring(&q);
        let x = xj.map(|c| c.value());
        out.t.push(t);
        out.x.push([x[0], x[1], x[2], x[3], x[4]]);
        out.fiber.push(x[5]);
        out.velocity.push(std::array::from_fn(|i| xj[i].d(dir).value()));
    }
    out
}

/// `ω⁰ = dx⁰ + x¹dx⁴ − 3x²dx³` on the contact side.
pub fn contact_form_x(x: &[f64; 5]) -> [f64; 5] {
    [1.0, 0.0, 0.0, -3.0 * x[2], x[1]]
}

/// Coefficients of a tangent vector in `(Z₁, Z₂, Z₃, Z₄, ∂x⁰)` with
/// `Z₁ = ∂x⁴ − x¹∂x⁰`, `Z₂ = ∂x³ + 3x²∂x⁰`, `Z₃ = ∂x²`, `Z₄ = ∂x¹`.
pub fn z_coefficients(x: &[f64; 5], v: &[f64; 5]) -> ([f64; 4], f64) {
    let w = contact_form_x(x);
    let c0: f64 = (0..5).map(|i| w[i] * v[i]).sum();
    ([v[4], v[3], v[2], v[1]], c0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicSample {
    pub t: f64,
    pub contact: f64,
    /// sine of the angle between the Z-coefficients and `(1, T, T², T³)`
    pub angle: f64,
    pub class: NullClass,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CubicCertificate {
    pub samples: Vec<CubicSample>,
    pub skipped: Vec<f64>,
    pub max_contact: f64,
    pub max_angle: f64,
}

impl CubicCertificate {
    pub fn certifies(&self, contact_tol: f64, angle_tol: f64) -> bool {
        !self.samples.is_empty()
            && self.max_contact < contact_tol
            && self.max_angle < angle_tol
            && self.samples.iter().all(|s| s.class == NullClass::TypeN)
    }
}

/// Below this speed a sample is reported as skipped.
pub const MIN_SPEED: f64 = 1e-10;

pub fn certify_twisted_cubic_tangency(pc: &ProjectedCurve) -> CubicCertificate {
    let mut cert = CubicCertificate::default();
    for k in 0..pc.t.len() {
        let (x, v) = (&pc.x[k], &pc.velocity[k]);
        let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if speed < MIN_SPEED {
            cert.skipped.push(pc.t[k]);
            continue;
        }
        let w = contact_form_x(x);
        let wn = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        let (c, c0) = z_coefficients(x, v);
        let contact = c0.abs() / (wn * speed);
        let tt = -pc.fiber[k];
        let d = [1.0, tt, tt * tt, tt * tt * tt];
        let angle = sine_angle(&c, &d);
        // Υ is written in (dx¹, dx², dx³, dx⁴), the reverse of the Z order
        let class = classify_with(&[c[3], c[2], c[1], c[0]], 1e-9).map(|r| r.class).unwrap_or(NullClass::NotNull);
        cert.max_contact = cert.max_contact.max(contact);
        cert.max_angle = cert.max_angle.max(angle);
        cert.samples.push(CubicSample { t: pc.t[k], contact, angle, class });
    }
    cert
}

fn sine_angle(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let na = a.iter().map(|c| c * c).sum::<f64>().sqrt();
    let nb = b.iter().map(|c| c * c).sum::<f64>().sqrt();
    let dot: f64 = (0..4).map(|i| a[i] * b[i]).sum();
    let perp: f64 = (0..4).map(|i| (a[i] - dot / (nb * nb) * b[i]).powi(2)).sum::<f64>().sqrt();
    perp / na
}

#[derive(Clone, Debug, Serialize)]
pub struct Joystick {
    pub d2: D2Curve,
    pub lifted: LiftedCurve,
    pub projected: ProjectedCurve,
    pub certificate: CubicCertificate,
}

/// Integrate, lift, project and certify in one pass.
pub fn joystick(c: &D2Controls, t0: f64, t1: f64, dt: f64) -> Result<Joystick, FibrationError> {
    let d2 = integrate_d2_curve(c, t0, t1, dt)?;
    let lifted = lift_curve(&d2)?;
    let projected = project_to_contact(&lifted);
    let certificate = certify_twisted_cubic_tangency(&projected);
    Ok(Joystick { d2, lifted, projected, certificate })
}

pub fn projected_csv(pc: &ProjectedCurve) -> String {
    let mut s = String::from("t,x0,x1,x2,x3,x4,x5,v0,v1,v2,v3,v4\n");
    for k in 0..pc.t.len() {
        let x = pc.x[k];
        let v = pc.velocity[k];
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            pc.t[k], x[0], x[1], x[2], x[3], x[4], pc.fiber[k], v[0], v[1], v[2], v[3], v[4]
        ));
    }
    s
}

pub fn lifted_csv(lc: &LiftedCurve) -> String {
    let mut s = String::from("t,y0,y1,y2,y3,y4,y5\n");
    for (t, y) in lc.t.iter().zip(&lc.y) {
        s.push_str(&format!("{},{},{},{},{},{},{}\n", t, y[0], y[1], y[2], y[3], y[4], y[5]));
    }
    s
}

pub fn d2_csv(c: &D2Curve) -> String {
    let mut s = String::from("t,y0,y1,y2,y3,y4,u,w\n");
    for k in 0..c.t.len() {
        let y = c.y[k];
        let [u, w] = c.controls[k];
        s.push_str(&format!("{},{},{},{},{},{},{},{}\n", c.t[k], y[0], y[1], y[2], y[3], y[4], u, w));
    }
    s
}
