//! Bracket-generating families and a Newton steering scheme built from
//! constant-control legs and commutator rectangles.

use serde::Serialize;
use thiserror::Error;

use crate::chart::{ChartPoint5, A, B, Z};
use crate::forms::VectorField;
use crate::jet::Jet;
use crate::linalg::rank;
use crate::maneuvers::{
    constraint_residuals, integrate_trajectory, maneuver_velocity, ControlProgram, ManeuverError, ManeuverMode,
    ResidualReport, Trajectory,
};
use crate::ode::{rk4_step, steps_for};
use crate::sampling::in_box;

/// Step bound for leg integration.
pub const LEG_DT: f64 = 0.01;
pub const MAX_ITERATIONS: usize = 200;
/// Largest rectangle side; bigger corrections are split.
pub const MAX_EPS: f64 = 0.5;
/// Bound on a single Newton leg duration.
pub const MAX_LEG_TIME: f64 = 20.0;
/// Bound on the rectangle area of one Newton solve.
pub const MAX_AREA: f64 = 16.0;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("no convergence after {iterations} iterations, best error {error:e}")]
    NoConvergence { iterations: usize, error: f64, best: Box<Plan> },
    #[error("point outside the planning box: {0:?}")]
    OutOfBox(ChartPoint5),
    #[error("non-finite state during planning")]
    NonFinite,
    #[error(transparent)]
    Maneuver(#[from] ManeuverError),
}

/// Chart vector of `c₁Z₁ + c₂Z₂ + c₃Z₃ + c₄Z₄`.
fn z_jet(p: &[Jet; 5], c: [Jet; 4]) -> [Jet; 5] {
    [c[0], c[1], p[A] * c[0] + p[B] * c[1], c[3], c[2] * -3.0]
}

pub struct BracketFamily {
    pub mode: ManeuverMode,
    pub fields: [VectorField<5>; 4],
    /// constant controls realizing each field
    pub controls: [[f64; 3]; 4],
    /// the pair whose bracket supplies the missing direction
    pub pair: (usize, usize),
}

impl BracketFamily {
    pub fn new(mode: ManeuverMode) -> Self {
        let k = |v: f64| Jet::cst(v);
        let z = Jet::zero;
        match mode {
            ManeuverMode::Attacking => BracketFamily {
                mode,
                fields: [
                    VectorField::new("Y1", move |p| z_jet(p, [z(), z(), k(1.0), z()])),
                    VectorField::new("Y2", move |p| z_jet(p, [z(), z(), z(), k(1.0)])),
                    VectorField::new("Y3", move |p| z_jet(p, [k(3.0), z(), k(1.0), z()])),
                    VectorField::new("Y4", move |p| z_jet(p, [z(), k(1.0), z(), k(1.0)])),
                ],
                controls: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]],
                pair: (1, 2),
            },
            ManeuverMode::Landing => BracketFamily {
                mode,
                fields: [
                    VectorField::new("Y1", move |p| z_jet(p, [z(), z(), k(1.0), z()])),
                    VectorField::new("Y2", move |p| z_jet(p, [z(), z(), z(), k(1.0)])),
                    VectorField::new("Y3", move |p| {
                        let (a, b) = (p[A], p[B]);
                        z_jet(p, [3.0 * a * b, -3.0 * (1.0 + a * a), k(1.0), z()])
                    }),
                    VectorField::new("Y4", move |p| {
                        let (a, b) = (p[A], p[B]);
                        z_jet(p, [1.0 + b * b, -(a * b), z(), k(1.0)])
                    }),
                ],
                controls: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]],
                pair: (0, 2),
            },
            ManeuverMode::G2Simple | ManeuverMode::G2Strict => {
                let cubic = |s: f64| move |p: &[Jet; 5]| z_jet(p, [k(1.0), k(s), k(s * s), k(s * s * s)]);
                BracketFamily {
                    mode,
                    fields: [
                        VectorField::new("Y1", cubic(0.0)),
                        VectorField::new("Y2", cubic(1.0)),
                        VectorField::new("Y3", cubic(-1.0)),
                        VectorField::new("Y4", cubic(2.0)),
                    ],
                    controls: [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [1.0, 2.0, 0.0]],
                    pair: (1, 0),
                }
            }
        }
    }

    pub fn bracket(&self) -> VectorField<5> {
        self.fields[self.pair.0].bracket(&self.fields[self.pair.1])
    }

    /// Controls driving `sign · Y_i`.
    pub fn signed_controls(&self, i: usize, sign: f64) -> [f64; 3] {
        let u = self.controls[i];
        if sign >= 0.0 {
            return u;
        }
        match self.mode {
            // the law is odd in (u₁, u₂) at fixed u₃
            ManeuverMode::Attacking | ManeuverMode::Landing => [-u[0], -u[1], u[2]],
            // the law is odd in u₁ at fixed (u₂, u₃)
            ManeuverMode::G2Simple | ManeuverMode::G2Strict => [-u[0], u[1], u[2]],
        }
    }
}

pub fn bracket_family(mode: ManeuverMode) -> BracketFamily {
    BracketFamily::new(mode)
}

/// The bracket relations usually quoted for each family, as
/// `(label, bracket field, claimed chart vector)`.
pub fn claimed_bracket(mode: ManeuverMode) -> (&'static str, VectorField<5>, [f64; 5]) {
    let f = bracket_family(mode);
    let y = &f.fields;
    match mode {
        ManeuverMode::Attacking => ("[Y2,Y3]=3dz", y[1].bracket(&y[2]), [0.0, 0.0, 3.0, 0.0, 0.0]),
        ManeuverMode::Landing => {
            ("[Y1,[Y2,[Y2,Y3]]]=9dz", y[0].bracket(&y[1].bracket(&y[1].bracket(&y[2]))), [0.0, 0.0, 9.0, 0.0, 0.0])
        }
        ManeuverMode::G2Simple | ManeuverMode::G2Strict => {
            ("[Y2,Y1]=dz", y[1].bracket(&y[0]), [0.0, 0.0, 1.0, 0.0, 0.0])
        }
    }
}

/// Max deviation of the quoted bracket from its claimed value at `p`.
pub fn claimed_bracket_residual(mode: ManeuverMode, p: &ChartPoint5) -> f64 {
    let (_, br, want) = claimed_bracket(mode);
    let v = br.eval(&p.to_array());
    (0..5).map(|i| (v[i] - want[i]).abs()).fold(0.0, f64::max)
}

/// Numerical rank of `Y₁, …, Y₄` plus the family's bracket at `p`.
pub fn bracket_generating_check(family: &BracketFamily, p: &ChartPoint5) -> usize {
    let q = p.to_array();
    let mut cols: Vec<[f64; 5]> = family.fields.iter().map(|f| f.eval(&q)).collect();
    cols.push(family.bracket().eval(&q));
    rank(&stack(&cols), 1e-10)
}

/// Rank of the four family fields alone.
pub fn distribution_rank(family: &BracketFamily, p: &ChartPoint5) -> usize {
    let q = p.to_array();
    let cols: Vec<[f64; 5]> = family.fields.iter().map(|f| f.eval(&q)).collect();
    rank(&stack(&cols), 1e-10)
}

fn stack(cols: &[[f64; 5]]) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(5, cols.len(), |i, j| cols[j][i])
}

/// RK4 flow of `Y` for time `s` with steps no longer than [`LEG_DT`].
/// The flag reports an escape from the sampling box.
pub fn flow(y: &VectorField<5>, p: &ChartPoint5, s: f64) -> (ChartPoint5, bool) {
    let (n, h) = steps_for(s, LEG_DT);
    let f = |_t: f64, q: &[f64; 5]| y.eval(q);
    let mut q = p.to_array();
    let mut escaped = false;
    for k in 0..n {
        q = rk4_step(&f, k as f64 * h, &q, h);
        escaped |= !in_box(&ChartPoint5::from_array(q));
    }
    (ChartPoint5::from_array(q), escaped)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanLeg {
    /// index into the family, 0-based
    pub field: usize,
    /// signed flow time along the field
    pub duration: f64,
    /// constant controls replaying the leg for `|duration|`
    pub controls: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Plan {
    pub mode: ManeuverMode,
    pub start: ChartPoint5,
    pub goal: ChartPoint5,
    pub legs: Vec<PlanLeg>,
    pub endpoint: ChartPoint5,
    pub error: f64,
    pub iterations: usize,
    pub rectangles: usize,
}

/// Flow of one leg with the same integrator and steps as the replay.
fn run_leg(mode: ManeuverMode, leg: &PlanLeg, p: &[f64; 5]) -> [f64; 5] {
    let (n, h) = steps_for(leg.duration.abs(), LEG_DT);
    let f = |_t: f64, q: &[f64; 5]| maneuver_velocity(mode, &ChartPoint5::from_array(*q), leg.controls);
    let mut q = *p;
    for k in 0..n {
        q = rk4_step(&f, k as f64 * h, &q, h);
    }
    q
}

struct Planner<'a> {
    family: &'a BracketFamily,
    legs: Vec<PlanLeg>,
    state: [f64; 5],
    rectangles: usize,
}

impl Planner<'_> {
    fn leg(&self, i: usize, s: f64) -> PlanLeg {
        PlanLeg { field: i, duration: s, controls: self.family.signed_controls(i, s.signum()) }
    }

    fn push(&mut self, i: usize, s: f64) {
        if s.abs() < 1e-13 {
            return;
        }
        let leg = self.leg(i, s);
        self.state = run_leg(self.family.mode, &leg, &self.state);
        self.legs.push(leg);
    }

    /// Match `(x, y, a, b)` by damped Newton on the four leg durations.
    fn align(&mut self, goal: &[f64; 5]) {
        const IDX: [usize; 4] = [0, 1, 3, 4];
        let resid = |q: &[f64; 5]| IDX.map(|i| q[i] - goal[i]);
        let sq = |r: &[f64; 4]| r.iter().map(|v| v * v).sum::<f64>();
        let p = self.state;
        let mut s = [0.0; 5];
        let mut r = resid(&p);
        for _ in 0..30 {
            if r.iter().all(|v| v.abs() < 1e-13) {
                break;
            }
            let full = self.jacobian(&p, &s);
            let jac = nalgebra::Matrix4::from_fn(|i, j| full[(IDX[i], j)]);
            let rhs = nalgebra::Vector4::from_iterator(r.iter().map(|v| -v));
            let Some(step) = jac.lu().solve(&rhs) else { break };
            let norm0 = sq(&r);
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda >= 1e-4 {
                let mut trial = s;
                for i in 0..4 {
                    trial[i] += lambda * step[i];
                }
                if trial.iter().all(|v| v.abs() <= MAX_LEG_TIME) {
                    let rt = resid(&self.composite(&p, &trial));
                    // the last damped step is taken regardless, to leave shallow minima
                    if sq(&rt) < norm0 || lambda < 2e-4 {
                        s = trial;
                        r = rt;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if s.iter().all(|v| v.is_finite()) {
            for leg in self.composite_legs(&s) {
                self.push(leg.field, leg.duration);
            }
        }
    }

    /// Legs `s₀Y₀, …, s₃Y₃` followed by rectangles of total signed area `s₄`.
    fn composite_legs(&self, s: &[f64; 5]) -> Vec<PlanLeg> {
        let mut legs: Vec<PlanLeg> = (0..4).filter(|&i| s[i] != 0.0).map(|i| self.leg(i, s[i])).collect();
        let area = s[4];
        if area != 0.0 {
            let pieces = (area.abs() / (MAX_EPS * MAX_EPS)).ceil().max(1.0) as usize;
            let eps = (area.abs() / pieces as f64).sqrt();
            let (i, j) = if area > 0.0 { self.family.pair } else { (self.family.pair.1, self.family.pair.0) };
            for _ in 0..pieces {
                legs.extend([self.leg(i, eps), self.leg(j, eps), self.leg(i, -eps), self.leg(j, -eps)]);
            }
        }
        legs
    }

    fn composite(&self, p: &[f64; 5], s: &[f64; 5]) -> [f64; 5] {
        self.composite_legs(s).iter().fold(*p, |q, leg| run_leg(self.family.mode, leg, &q))
    }

    /// Damped Newton on four leg durations and one rectangle area.
    fn solve(&mut self, goal: &[f64; 5]) -> Result<(), PlanError> {
        let resid = |q: &[f64; 5]| -> [f64; 5] { std::array::from_fn(|i| q[i] - goal[i]) };
        let sq = |r: &[f64; 5]| r.iter().map(|v| v * v).sum::<f64>();
        let p = self.state;
        let mut s = [0.0; 5];
        let mut r = resid(&p);
        for _ in 0..30 {
            if r.iter().all(|v| v.abs() < 1e-13) {
                break;
            }
            let jac = self.jacobian(&p, &s);
            let rhs = nalgebra::Vector5::from_iterator(r.iter().map(|v| -v));
            let Some(step) = jac.lu().solve(&rhs) else { break };
            let norm0 = sq(&r);
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda >= 1e-4 {
                let trial: [f64; 5] = std::array::from_fn(|i| s[i] + lambda * step[i]);
                if trial[..4].iter().all(|v| v.abs() <= MAX_LEG_TIME) && trial[4].abs() <= MAX_AREA {
                    let rt = resid(&self.composite(&p, &trial));
                    if sq(&rt) < norm0 {
                        s = trial;
                        r = rt;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if !s.iter().all(|v| v.is_finite()) {
            return Err(PlanError::NonFinite);
        }
        for leg in self.composite_legs(&s) {
            self.push(leg.field, leg.duration);
        }
        self.rectangles += if s[4] != 0.0 { (s[4].abs() / (MAX_EPS * MAX_EPS)).ceil().max(1.0) as usize } else { 0 };
        Ok(())
    }

    /// Central differences; across `s₄ = 0` this picks up the bracket.
    fn jacobian(&self, p: &[f64; 5], s: &[f64; 5]) -> nalgebra::Matrix5<f64> {
        let h = 1e-6;
        let mut jac = nalgebra::Matrix5::zeros();
        for j in 0..5 {
            let (mut sp, mut sm) = (*s, *s);
            sp[j] += h;
            sm[j] -= h;
            let (qp, qm) = (self.composite(p, &sp), self.composite(p, &sm));
            for i in 0..5 {
                jac[(i, j)] = (qp[i] - qm[i]) / (2.0 * h);
            }
        }
        jac
    }
}

impl Planner<'_> {
    /// Repeated align/solve rounds until `tol` is met or progress stalls.
    fn steer(&mut self, goal: &[f64; 5], tol: f64, iterations: &mut usize) -> Result<bool, PlanError> {
        let target = ChartPoint5::from_array(*goal);
        let err = |q: &[f64; 5]| ChartPoint5::from_array(*q).dist_inf(&target);
        let mut best = err(&self.state);
        let mut stalled = 0;
        while err(&self.state) >= tol && *iterations < MAX_ITERATIONS && stalled < 5 {
            *iterations += 1;
            self.align(goal);
            self.solve(goal)?;
            if !self.state.iter().all(|v| v.is_finite()) {
                return Err(PlanError::NonFinite);
            }
            let e = err(&self.state);
            if e < 0.5 * best {
                best = e;
                stalled = 0;
            } else {
                stalled += 1;
            }
        }
        Ok(err(&self.state) < tol)
    }
}

/// Steering from `start` to `goal` within `tol` in the sup norm.
///
/// When the direct solve stalls, the straight chart segment is split into
/// 2, then 4 waypoints which are reached in turn.
pub fn plan_path(mode: ManeuverMode, start: &ChartPoint5, goal: &ChartPoint5, tol: f64) -> Result<Plan, PlanError> {
    for p in [start, goal] {
        if !in_box(p) {
            return Err(PlanError::OutOfBox(*p));
        }
    }
    let family = bracket_family(mode);
    let (p0, g) = (start.to_array(), goal.to_array());
    let mut iterations = 0;
    let mut best: Option<Plan> = None;
    for pieces in [1usize, 2, 4] {
        let mut pl = Planner { family: &family, legs: Vec::new(), state: p0, rectangles: 0 };
        for k in 1..=pieces {
            let f = k as f64 / pieces as f64;
            let w: [f64; 5] = std::array::from_fn(|i| p0[i] + f * (g[i] - p0[i]));
            let wtol = if k == pieces { tol } else { tol.max(1e-2) };
            if !pl.steer(&w, wtol, &mut iterations)? {
                break;
            }
        }
        let endpoint = ChartPoint5::from_array(pl.state);
        let plan = Plan {
            mode,
            start: *start,
            goal: *goal,
            error: endpoint.dist_inf(goal),
            endpoint,
            legs: pl.legs,
            iterations,
            rectangles: pl.rectangles,
        };
        if plan.error < tol {
            return Ok(plan);
        }
        if best.as_ref().is_none_or(|b| plan.error < b.error) {
            best = Some(plan);
        }
        if iterations >= MAX_ITERATIONS {
            break;
        }
    }
    let best = best.expect("at least one attempt");
    Err(PlanError::NoConvergence { iterations, error: best.error, best: Box::new(best) })
}

#[derive(Clone, Debug, Serialize)]
pub struct Replay {
    pub trajectory: Trajectory,
    pub residuals: ResidualReport,
    /// distance between the replayed end and the plan's endpoint
    pub endpoint_drift: f64,
}

/// Integrate every leg as a constant-control program and certify the result.
pub fn replay(plan: &Plan) -> Result<Replay, PlanError> {
    let mut tr = Trajectory { mode: plan.mode, samples: Vec::new(), warnings: Vec::new() };
    let mut p = plan.start;
    for leg in &plan.legs {
        let prog = ControlProgram::constant(plan.mode, leg.controls, leg.duration.abs(), LEG_DT);
        let seg = integrate_trajectory(&prog, &p)?;
        p = seg.end();
        tr.append(&seg);
    }
    if tr.samples.is_empty() {
        let prog = ControlProgram::constant(plan.mode, [0.0; 3], 0.0, LEG_DT);
        tr = integrate_trajectory(&prog, &plan.start)?;
    }
    let residuals = constraint_residuals(&tr, plan.mode)?;
    Ok(Replay { endpoint_drift: p.dist_inf(&plan.endpoint), trajectory: tr, residuals })
}

/// z-displacement of one rectangle of side `eps` on the family's pair, over `eps²`.
pub fn rectangle_ratio(mode: ManeuverMode, p: &ChartPoint5, eps: f64) -> f64 {
    let fam = bracket_family(mode);
    let (i, j) = fam.pair;
    let mut q = *p;
    for (k, s) in [(i, eps), (j, eps), (i, -eps), (j, -eps)] {
        q = flow(&fam.fields[k], &q, s).0;
    }
    (q.to_array()[Z] - p.to_array()[Z]) / (eps * eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::contact_form;
    use crate::maneuvers::nullity_values;
    use crate::sampling::Sampler;

    #[test]
    fn families_are_admissible() {
        let mut s = Sampler::new(5);
        for mode in ManeuverMode::ALL {
            let fam = bracket_family(mode);
            for _ in 0..10 {
                let p = s.chart_point();
                for (i, f) in fam.fields.iter().enumerate() {
                    let v = f.eval(&p.to_array());
                    for sign in [1.0, -1.0] {
                        let u = maneuver_velocity(mode, &p, fam.signed_controls(i, sign));
                        assert!((0..5).all(|k| (u[k] - sign * v[k]).abs() < 1e-12), "{mode} Y{}", i + 1);
                    }
                    let w = contact_form(&p);
                    assert!((0..5).map(|k| w[k] * v[k]).sum::<f64>().abs() < 1e-12);
                    assert!(nullity_values(mode, &p, &v).iter().all(|n| n.abs() < 1e-9));
                }
            }
        }
    }

    #[test]
    fn bracket_values() {
        let p = ChartPoint5::new(0.4, -0.3, 1.2, 0.7, -1.1);
        assert!(claimed_bracket_residual(ManeuverMode::Attacking, &p) < 1e-12);
        assert!(claimed_bracket_residual(ManeuverMode::G2Strict, &p) < 1e-12);
        // the nested landing bracket vanishes identically
        let (_, nested, _) = claimed_bracket(ManeuverMode::Landing);
        assert!(nested.eval(&p.to_array()).iter().all(|c| c.abs() < 1e-12));
        // [Y1, Y3] = 9∂z − 9a∂x
        let b = bracket_family(ManeuverMode::Landing).bracket().eval(&p.to_array());
        let want = [-9.0 * 0.7, 0.0, 9.0, 0.0, 0.0];
        assert!((0..5).all(|i| (b[i] - want[i]).abs() < 1e-12), "{b:?}");
    }

    #[test]
    fn ranks() {
        let p = ChartPoint5::new(0.4, -0.3, 1.2, 0.7, -1.1);
        for mode in [ManeuverMode::Attacking, ManeuverMode::Landing, ManeuverMode::G2Strict] {
            let fam = bracket_family(mode);
            assert_eq!(bracket_generating_check(&fam, &p), 5);
            assert_eq!(distribution_rank(&fam, &p), 4);
        }
    }

    #[test]
    fn flow_basics() {
        let fam = bracket_family(ManeuverMode::Attacking);
        let (q, _) = flow(&fam.fields[0], &ChartPoint5::ORIGIN, 1.0);
        assert!(q.dist_inf(&ChartPoint5::new(0.0, 0.0, 0.0, 0.0, -3.0)) < 1e-14);
        let p = ChartPoint5::new(0.1, 0.2, 0.3, 0.4, 0.5);
        assert_eq!(flow(&fam.fields[2], &p, 0.0).0, p);
        let lf = bracket_family(ManeuverMode::Landing);
        let (q, _) = flow(&lf.fields[3], &p, 0.8);
        let (back, _) = flow(&lf.fields[3], &q, -0.8);
        assert!(back.dist_inf(&p) < 1e-8);
    }

    #[test]
    fn simple_plans() {
        let o = ChartPoint5::ORIGIN;
        let plan = plan_path(ManeuverMode::Attacking, &o, &o, 1e-3).unwrap();
        assert!(plan.legs.is_empty());
        let plan = plan_path(ManeuverMode::Attacking, &o, &ChartPoint5::new(0.0, 0.0, 0.0, 0.0, 1.0), 1e-3).unwrap();
        assert_eq!(plan.legs.len(), 1);
        assert_eq!(plan.legs[0].field, 0);
        assert!((plan.legs[0].duration + 1.0 / 3.0).abs() < 1e-12);
        let plan = plan_path(ManeuverMode::Attacking, &o, &ChartPoint5::new(0.0, 0.0, 1.0, 0.0, 0.0), 1e-3).unwrap();
        assert!(plan.rectangles > 0 && plan.error < 1e-3);
    }

    #[test]
    fn random_plans_replay() {
        let mut s = Sampler::new(21);
        for mode in ManeuverMode::ALL {
            for _ in 0..3 {
                let (a, b) = (s.chart_point_in(1.0), s.chart_point_in(1.0));
                let plan = plan_path(mode, &a, &b, 1e-3).unwrap();
                let r = replay(&plan).unwrap();
                assert!(r.endpoint_drift < 1e-9, "{mode} {}", r.endpoint_drift);
                assert!(r.residuals.certifies(1e-7, 1e-6), "{mode} {:?}", (r.residuals.max_contact, r.residuals.max_nullity));
            }
        }
    }

    #[test]
    fn rectangle_asymptotics() {
        let p = ChartPoint5::new(0.3, -0.2, 0.1, 0.6, -0.4);
        assert!((rectangle_ratio(ManeuverMode::Attacking, &p, 0.01) - 3.0).abs() < 1e-8);
        assert!((rectangle_ratio(ManeuverMode::G2Strict, &p, 0.01) - 1.0).abs() < 1e-8);
    }
}
