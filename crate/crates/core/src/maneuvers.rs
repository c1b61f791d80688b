//! Maneuver structures on the contact distribution, control laws, and
//! trajectory integration with constraint certification.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{contact_form, ChartPoint5, Covector5, FrameTag, Vector5, A, B, X, Y};
use crate::forms::{SymTensor, SymTensorField};
use crate::gl2;
use crate::jet::{lift, push_dir, Jet};
use crate::ode::{rk4_step, steps_for};
use crate::sampling::in_box;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ManeuverMode {
    #[serde(rename = "attacking")]
    Attacking,
    #[serde(rename = "landing")]
    Landing,
    #[serde(rename = "g2s")]
    G2Simple,
    #[serde(rename = "g2d")]
    G2Strict,
}

impl ManeuverMode {
    pub const ALL: [ManeuverMode; 4] =
        [ManeuverMode::Attacking, ManeuverMode::Landing, ManeuverMode::G2Simple, ManeuverMode::G2Strict];

    pub fn name(&self) -> &'static str {
        match self {
            ManeuverMode::Attacking => "attacking",
            ManeuverMode::Landing => "landing",
            ManeuverMode::G2Simple => "g2s",
            ManeuverMode::G2Strict => "g2d",
        }
    }
}

impl std::fmt::Display for ManeuverMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ManeuverMode {
    type Err = ManeuverError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "attacking" | "a" => Ok(ManeuverMode::Attacking),
            "landing" | "l" => Ok(ManeuverMode::Landing),
            "g2s" | "g2simple" => Ok(ManeuverMode::G2Simple),
            "g2d" | "g2strict" => Ok(ManeuverMode::G2Strict),
            _ => Err(ManeuverError::UnknownMode(s.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ManeuverError {
    #[error("unknown maneuver mode `{0}`")]
    UnknownMode(String),
    #[error("sample {0} has no stored velocity")]
    MissingVelocity(usize),
    #[error("invalid control program: {0}")]
    InvalidProgram(String),
}

/// `g = 2(dx·da + dy·db)` over `(dx, dy, da, db)`.
pub fn attacking_metric(_p: &ChartPoint5) -> SymTensor {
    let e = |i: usize| {
        let mut v = vec![0.0; 4];
        v[i] = 1.0;
        v
    };
    SymTensor::from_products(2, FrameTag::Coordinate, &[(2.0, vec![e(0), e(2)]), (2.0, vec![e(1), e(3)])])
}

/// `ĝ = 2((1+a²)db − ab da)dx − 2((1+b²)da − ab db)dy` over `(dx, dy, da, db)`.
pub fn landing_metric(p: &ChartPoint5) -> SymTensor {
    let (a, b) = (p.a, p.b);
    let dx = vec![1.0, 0.0, 0.0, 0.0];
    let dy = vec![0.0, 1.0, 0.0, 0.0];
    let t1 = vec![0.0, 0.0, -a * b, 1.0 + a * a];
    let t2 = vec![0.0, 0.0, 1.0 + b * b, -a * b];
    SymTensor::from_products(2, FrameTag::Coordinate, &[(2.0, vec![t1, dx]), (-2.0, vec![t2, dy])])
}

fn chart_cov(i: usize, s: f64) -> [Jet; 5] {
    let mut c = [Jet::zero(); 5];
    c[i] = Jet::cst(s);
    c
}

/// Attacking metric over the chart differentials.
pub fn attacking_metric_field() -> SymTensorField<5> {
    SymTensorField::from_products(2, |_| {
        vec![
            (Jet::cst(2.0), vec![chart_cov(X, 1.0), chart_cov(A, 1.0)]),
            (Jet::cst(2.0), vec![chart_cov(Y, 1.0), chart_cov(B, 1.0)]),
        ]
    })
}

/// Landing metric over the chart differentials.
pub fn landing_metric_field() -> SymTensorField<5> {
    SymTensorField::from_products(2, |p| {
        let (a, b) = (p[A], p[B]);
        let mut t1 = [Jet::zero(); 5];
        t1[B] = 1.0 + a * a;
        t1[A] = -(a * b);
        let mut t2 = [Jet::zero(); 5];
        t2[A] = 1.0 + b * b;
        t2[B] = -(a * b);
        vec![(Jet::cst(2.0), vec![t1, chart_cov(X, 1.0)]), (Jet::cst(-2.0), vec![t2, chart_cov(Y, 1.0)])]
    })
}

/// `(ω¹, ω², ω³, ω⁴) = (dx, dy, −⅓db, da)`.
pub fn g2_coframe(_p: &ChartPoint5) -> [Covector5; 4] {
    FrameTag::ZFrame.coframe().expect("distribution frame")
}

/// `Υ` over the chart differentials, built from the G₂ coframe.
pub fn upsilon_field() -> SymTensorField<5> {
    let cf = g2_coframe(&ChartPoint5::ORIGIN);
    let z = gl2::upsilon_tensor(FrameTag::ZFrame);
    // pull the ZFrame tensor back through the coframe: T_chart = Σ T_ijkl ωⁱ⊗ωʲ⊗ωᵏ⊗ωˡ
    let mut terms = Vec::new();
    for (idx, c) in z.coeffs().iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let t = [idx / 64, (idx / 16) % 4, (idx / 4) % 4, idx % 4];
        terms.push((*c, t.iter().map(|&i| cf[i].to_vec()).collect::<Vec<_>>()));
    }
    SymTensorField::constant(&SymTensor::from_products(4, FrameTag::Chart, &terms))
}

/// `g¹, g², g³` over the chart differentials.
pub fn bilinear_fields() -> [SymTensorField<5>; 3] {
    let cf = g2_coframe(&ChartPoint5::ORIGIN);
    gl2::bilinear_tensors(FrameTag::ZFrame).map(|g| {
        let mut terms = Vec::new();
        for (idx, c) in g.coeffs().iter().enumerate() {
            if *c != 0.0 {
                terms.push((*c, vec![cf[idx / 4].to_vec(), cf[idx % 4].to_vec()]));
            }
        }
        SymTensorField::constant(&SymTensor::from_products(2, FrameTag::Chart, &terms))
    })
}

/// Coefficients of the control law on `(Z₁, Z₂, Z₃, Z₄)`.
pub fn velocity_coefficients(mode: ManeuverMode, p: &ChartPoint5, u: [f64; 3]) -> [f64; 4] {
    let [u1, u2, u3] = u;
    let (a, b) = (p.a, p.b);
    match mode {
        ManeuverMode::Attacking => [3.0 * u1 * u3, u2 * u3, u1, u2],
        ManeuverMode::Landing => [
            u3 * ((1.0 + b * b) * u2 + 3.0 * a * b * u1),
            -u3 * (a * b * u2 + 3.0 * (1.0 + a * a) * u1),
            u1,
            u2,
        ],
        ManeuverMode::G2Simple => [
            u1,
            u1 * (u2 + u3),
            u1 * (u2 * u2 + 2.0 * u3 * u2),
            u1 * (u2 * u2 * u2 + 3.0 * u3 * u2 * u2),
        ],
        ManeuverMode::G2Strict => [u1, u1 * u2, u1 * u2 * u2, u1 * u2 * u2 * u2],
    }
}

/// `Σ cᵢ Zᵢ` at `p`.
pub fn z_combination(p: &ChartPoint5, c: [f64; 4]) -> Vector5 {
    [c[0], c[1], p.a * c[0] + p.b * c[1], c[3], -3.0 * c[2]]
}

pub fn maneuver_velocity(mode: ManeuverMode, p: &ChartPoint5, u: [f64; 3]) -> Vector5 {
    z_combination(p, velocity_coefficients(mode, p, u))
}

/// Mode-specific nullity values of a chart velocity: attacking `ȧẋ + ḃẏ`,
/// landing `ĝ(v,v)`, simple G₂ `Υ(v)`, strict G₂ `(g¹, g², g³, Υ)(v)`.
pub fn nullity_values(mode: ManeuverMode, p: &ChartPoint5, v: &Vector5) -> Vec<f64> {
    match mode {
        ManeuverMode::Attacking => vec![v[A] * v[X] + v[B] * v[Y]],
        ManeuverMode::Landing => {
            let (a, b) = (p.a, p.b);
            vec![
                2.0 * ((1.0 + a * a) * v[B] - a * b * v[A]) * v[X]
                    - 2.0 * ((1.0 + b * b) * v[A] - a * b * v[B]) * v[Y],
            ]
        }
        ManeuverMode::G2Simple | ManeuverMode::G2Strict => {
            let c = FrameTag::ZFrame.components(v);
            let c = [c[0], c[1], c[2], c[3]];
            let ups = gl2::quartic_upsilon(&c);
            if mode == ManeuverMode::G2Simple {
                vec![ups]
            } else {
                let [g1, g2, g3] = gl2::bilinears(&c, &c);
                vec![g1, g2, g3, ups]
            }
        }
    }
}

/// `ṙ · ṅ` for the chart velocity `v` at `p`, with `n = N/‖N‖`.
pub fn ambient_nullity(p: &ChartPoint5, v: &Vector5) -> f64 {
    let (q, dir) = push_dir(&lift(&p.to_array()), &v.map(Jet::cst));
    let nx = -q[A];
    let ny = -q[B];
    let len = (nx * nx + ny * ny + 1.0).sqrt();
    let n = [nx / len, ny / len, len.recip()];
    (0..3).map(|i| v[i] * n[i].d(dir).value()).sum()
}

/// A scalar control signal with an exact time derivative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "SignalRepr")]
pub enum ControlSignal {
    Const(f64),
    /// `c₀ + c₁t + c₂t² + …`
    Poly(Vec<f64>),
    /// `offset + amp·sin(freq·t + phase)`
    Sine { amp: f64, freq: f64, phase: f64, offset: f64 },
    /// `pieces[k]` is active on `[knots[k−1], knots[k])`.
    Piecewise { knots: Vec<f64>, pieces: Vec<ControlSignal> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SignalRepr {
    Number(f64),
    Tagged(TaggedSignal),
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum TaggedSignal {
    Const(f64),
    Poly(Vec<f64>),
    Sine {
        #[serde(default = "one")]
        amp: f64,
        #[serde(default = "one")]
        freq: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
    },
    Piecewise { knots: Vec<f64>, pieces: Vec<ControlSignal> },
}

fn one() -> f64 {
    1.0
}

impl From<SignalRepr> for ControlSignal {
    fn from(r: SignalRepr) -> Self {
        match r {
            SignalRepr::Number(c) => ControlSignal::Const(c),
            SignalRepr::Tagged(TaggedSignal::Const(c)) => ControlSignal::Const(c),
            SignalRepr::Tagged(TaggedSignal::Poly(c)) => ControlSignal::Poly(c),
            SignalRepr::Tagged(TaggedSignal::Sine { amp, freq, phase, offset }) => {
                ControlSignal::Sine { amp, freq, phase, offset }
            }
            SignalRepr::Tagged(TaggedSignal::Piecewise { knots, pieces }) => ControlSignal::Piecewise { knots, pieces },
        }
    }
}

impl ControlSignal {
    pub fn zero() -> Self {
        ControlSignal::Const(0.0)
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            ControlSignal::Const(c) => *c,
            ControlSignal::Poly(c) => c.iter().rev().fold(0.0, |acc, ci| acc * t + ci),
            ControlSignal::Sine { amp, freq, phase, offset } => offset + amp * (freq * t + phase).sin(),
            ControlSignal::Piecewise { knots, pieces } => pieces[Self::piece(knots, t)].value(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            ControlSignal::Const(_) => 0.0,
            ControlSignal::Poly(c) => {
                c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, ci)| acc * t + k as f64 * ci)
            }
            ControlSignal::Sine { amp, freq, phase, .. } => amp * freq * (freq * t + phase).cos(),
            ControlSignal::Piecewise { knots, pieces } => pieces[Self::piece(knots, t)].derivative(t),
        }
    }

    fn piece(knots: &[f64], t: f64) -> usize {
        knots.iter().take_while(|k| t >= **k).count()
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            ControlSignal::Const(c) if !c.is_finite() => Err("non-finite constant".into()),
            ControlSignal::Poly(c) if c.iter().any(|v| !v.is_finite()) => Err("non-finite coefficient".into()),
            ControlSignal::Sine { amp, freq, phase, offset }
                if ![amp, freq, phase, offset].iter().all(|v| v.is_finite()) =>
            {
                Err("non-finite sine parameter".into())
            }
            ControlSignal::Piecewise { knots, pieces } => {
                if pieces.len() != knots.len() + 1 {
                    return Err("piecewise signal needs one more piece than knots".into());
                }
                if knots.windows(2).any(|w| w[0] >= w[1]) || knots.iter().any(|k| !k.is_finite()) {
                    return Err("knots must be finite and increasing".into());
                }
                pieces.iter().try_for_each(|p| p.validate())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlProgram {
    pub mode: ManeuverMode,
    #[serde(default = "ControlSignal::zero")]
    pub u1: ControlSignal,
    #[serde(default = "ControlSignal::zero")]
    pub u2: ControlSignal,
    #[serde(default = "ControlSignal::zero")]
    pub u3: ControlSignal,
    pub duration: f64,
    pub dt: f64,
}

impl ControlProgram {
    pub fn constant(mode: ManeuverMode, u: [f64; 3], duration: f64, dt: f64) -> Self {
        ControlProgram {
            mode,
            u1: ControlSignal::Const(u[0]),
            u2: ControlSignal::Const(u[1]),
            u3: ControlSignal::Const(u[2]),
            duration,
            dt,
        }
    }

    pub fn controls(&self, t: f64) -> [f64; 3] {
        [self.u1.value(t), self.u2.value(t), self.u3.value(t)]
    }

    pub fn validate(&self) -> Result<(), ManeuverError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ManeuverError::InvalidProgram(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(ManeuverError::InvalidProgram(format!("duration must be non-negative, got {}", self.duration)));
        }
        for s in [&self.u1, &self.u2, &self.u3] {
            s.validate().map_err(ManeuverError::InvalidProgram)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: ChartPoint5,
    pub velocity: Option<Vector5>,
    pub controls: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub mode: ManeuverMode,
    pub samples: Vec<TrajectorySample>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn end(&self) -> ChartPoint5 {
        self.samples.last().map(|s| s.state).unwrap_or(ChartPoint5::ORIGIN)
    }

    /// `t,x,y,z,a,b,vx,vy,vz,va,vb,u1,u2,u3`; missing velocities are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,a,b,vx,vy,vz,va,vb,u1,u2,u3\n");
        for s in &self.samples {
            let p = s.state.to_array();
            let _ = write!(out, "{}", s.t);
            for c in p {
                let _ = write!(out, ",{c}");
            }
            match s.velocity {
                Some(v) => v.iter().for_each(|c| {
                    let _ = write!(out, ",{c}");
                }),
                None => out.push_str(",,,,,"),
            }
            for c in s.controls {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }

    /// Concatenate, dropping the duplicated joint sample and shifting time.
    pub fn append(&mut self, other: &Trajectory) {
        let t0 = self.samples.last().map(|s| s.t).unwrap_or(0.0);
        let skip = usize::from(!self.samples.is_empty());
        for s in other.samples.iter().skip(skip) {
            let mut s = s.clone();
            s.t += t0;
            self.samples.push(s);
        }
        self.warnings.extend(other.warnings.iter().cloned());
    }
}

/// Classical RK4 integration of `ṗ = maneuver_velocity(mode, p, u(t))`.
pub fn integrate_trajectory(program: &ControlProgram, p0: &ChartPoint5) -> Result<Trajectory, ManeuverError> {
    integrate_trajectory_from(program, p0, 0.0)
}

/// As [`integrate_trajectory`], with the clock starting at `t0`.
pub fn integrate_trajectory_from(
    program: &ControlProgram,
    p0: &ChartPoint5,
    t0: f64,
) -> Result<Trajectory, ManeuverError> {
    program.validate()?;
    if !t0.is_finite() {
        return Err(ManeuverError::InvalidProgram(format!("start time must be finite, got {t0}")));
    }
    let mode = program.mode;
    let f = |t: f64, p: &[f64; 5]| maneuver_velocity(mode, &ChartPoint5::from_array(*p), program.controls(t));
    let (n, h) = steps_for(program.duration, program.dt);
    let sample = |t: f64, p: [f64; 5]| TrajectorySample {
        t,
        state: ChartPoint5::from_array(p),
        velocity: Some(f(t, &p)),
        controls: program.controls(t),
    };
    let mut p = p0.to_array();
    let mut samples = Vec::with_capacity(n + 1);
    let mut warnings = Vec::new();
    samples.push(sample(t0, p));
    for k in 0..n {
        let t = t0 + k as f64 * h;
        p = rk4_step(&f, t, &p, h);
        let s = sample(t + h, p);
        if warnings.is_empty() && !in_box(&s.state) {
            warnings.push(format!("ChartEscape: state left the sampling box at t = {}", s.t));
        }
        samples.push(s);
    }
    Ok(Trajectory { mode, samples, warnings })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleResidual {
    pub t: f64,
    pub contact: f64,
    pub nullity: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub mode: ManeuverMode,
    pub samples: Vec<SampleResidual>,
    pub max_contact: f64,
    pub max_nullity: f64,
}

impl ResidualReport {
    pub fn certifies(&self, contact_tol: f64, nullity_tol: f64) -> bool {
        self.max_contact < contact_tol && self.max_nullity < nullity_tol
    }
}

pub fn constraint_residuals(tr: &Trajectory, mode: ManeuverMode) -> Result<ResidualReport, ManeuverError> {
    let mut samples = Vec::with_capacity(tr.samples.len());
    let (mut mc, mut mn) = (0.0f64, 0.0f64);
    for (i, s) in tr.samples.iter().enumerate() {
        let v = s.velocity.ok_or(ManeuverError::MissingVelocity(i))?;
        let w = contact_form(&s.state);
        let contact = w.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>().abs();
        let nullity: Vec<f64> = nullity_values(mode, &s.state, &v).into_iter().map(f64::abs).collect();
        mc = mc.max(contact);
        mn = nullity.iter().fold(mn, |m, v| m.max(*v));
        samples.push(SampleResidual { t: s.t, contact, nullity });
    }
    Ok(ResidualReport { mode, samples, max_contact: mc, max_nullity: mn })
}
