//! Seeded verification suites behind `saucer verify`.

use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, Vector4};

use crate::chart::{ambient_from_chart, ambient_volume_ratio, chart_from_ambient, contact_form, contact_nondegeneracy, ChartPoint5, FrameTag, A, B, X, Y};
use crate::fibration::{
    commutator_checks, coframe_x, coframe_y, d2_frame_duality_residual, d2_tangency_residual, joystick,
    pullback_residual, structure_function_residual, verify_eds, x_from_y, y_from_x, D2Controls,
};
use crate::forms::VectorField;
use crate::gl2::{
    bilinear_tensors, bilinears, classify_with, cubic_point, endomorphism_l, endomorphism_l_contracted, gl2_action,
    gl2_algebra_action, invariant_two_form, quartic_upsilon, tangent_point, two_form_matrix, upsilon_polarized,
    upsilon_tensor, NullClass,
};
use crate::jet::Jet;
use crate::maneuvers::{
    ambient_nullity, constraint_residuals, integrate_trajectory, maneuver_velocity, ControlProgram, ControlSignal,
    ManeuverMode,
};
use crate::par::{max_of, Exec};
use crate::planner::{
    bracket_family, bracket_generating_check, claimed_bracket, claimed_bracket_residual, distribution_rank, plan_path,
    rectangle_ratio, replay,
};
use crate::report::{Check, SuiteReport, VerifyReport};
use crate::sampling::Sampler;
use crate::structure::{
    attacking_k, eigen_split, g0_basis, g0_table, in_frame, k_tilde, landing_k, landing_z, levi_form,
    cr_integrability_defect, restriction_residual, solve_infinitesimal_stabilizer, span_distance, span_rank,
    symplectic_matrix, verify_commutation_table, DenseTensor4, EigenSplit,
};
use crate::symmetry::{
    catalog_residuals, constants_agreement, exact_symmetry_residual, extract_structure_constants, g2_symmetry_residual,
    independence_rank, legendrean_symmetry_residual, FieldResidual, LieAlgebraModel, SymmetryCatalog, ATTACKING_EXACT, ATTACKING_HOMOTHETIC,
};
use crate::tol::Tolerances;
use serde::Serialize;
use crate::maneuvers::attacking_metric;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Config,
    Structure,
    Gl2,
    Symmetry,
    Fibration,
    Planner,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Config, Suite::Structure, Suite::Gl2, Suite::Symmetry, Suite::Fibration, Suite::Planner];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Config => "config",
            Suite::Structure => "structure",
            Suite::Gl2 => "gl2",
            Suite::Symmetry => "symmetry",
            Suite::Fibration => "fibration",
            Suite::Planner => "planner",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct Context {
    pub seed: u64,
    pub tol: Tolerances,
    pub exec: Exec,
}

impl Context {
    pub fn new(seed: u64) -> Self {
        Context { seed, tol: Tolerances::default(), exec: Exec::default() }
    }

    fn sampler(&self, label: &str) -> Sampler {
        Sampler::stream(self.seed, label)
    }

    fn points(&self, label: &str, n: usize) -> Vec<ChartPoint5> {
        self.sampler(label).chart_points(n)
    }

    fn worst(&self, pts: &[ChartPoint5], f: impl Fn(&ChartPoint5) -> f64 + Sync + Send) -> f64 {
        max_of(&self.exec.map(pts, f))
    }
}

pub fn run_suite(suite: Suite, ctx: &Context) -> SuiteReport {
    let (checks, notes) = match suite {
        Suite::Config => config(ctx),
        Suite::Structure => structure(ctx),
        Suite::Gl2 => gl2(ctx),
        Suite::Symmetry => symmetry(ctx),
        Suite::Fibration => fibration(ctx),
        Suite::Planner => planner(ctx),
    };
    SuiteReport::new(suite.name(), ctx.seed, checks, notes)
}

pub fn run_all(ctx: &Context) -> VerifyReport {
    VerifyReport::new("all", ctx.seed, Suite::ALL.iter().map(|s| run_suite(*s, ctx)).collect())
}

type Outcome = (Vec<Check>, Vec<String>);

/// A random bounded control signal.
pub fn random_signal(s: &mut Sampler, scale: f64) -> ControlSignal {
    ControlSignal::Sine {
        amp: s.uniform(0.0, scale),
        freq: s.uniform(0.5, 3.0),
        phase: s.uniform(0.0, 6.0),
        offset: s.uniform(-scale, scale),
    }
}

fn config(ctx: &Context) -> Outcome {
    let t = &ctx.tol;
    let pts = ctx.points("config.points", 100);
    let mut checks = vec![
        Check::below("contact_top_form_minus_two", ctx.worst(&pts, |p| (contact_nondegeneracy(p) + 2.0).abs()), t.contact_constant),
        Check::below("ambient_volume_ratio_minus_two", ctx.worst(&pts, |p| (ambient_volume_ratio(p) + 2.0).abs()), t.contact_constant),
    ];
    let mut s = ctx.sampler("config.ambient");
    let mut rt = 0.0f64;
    for _ in 0..1000 {
        let c = s.ambient(0.1);
        let back = ambient_from_chart(&chart_from_ambient(&c).expect("upper hemisphere"));
        rt = rt.max((back.r - c.r).amax()).max((back.n - c.n).amax());
    }
    checks.push(Check::below("ambient_chart_roundtrip", rt, t.roundtrip));

    let mut s = ctx.sampler("config.programs");
    for mode in ManeuverMode::ALL {
        let mut programs = Vec::new();
        for _ in 0..5 {
            let p0 = s.chart_point_in(1.0);
            let prog = ControlProgram {
                mode,
                u1: random_signal(&mut s, 0.5),
                u2: random_signal(&mut s, 0.5),
                u3: random_signal(&mut s, 0.5),
                duration: 1.0,
                dt: 0.01,
            };
            programs.push((prog, p0));
        }
        let reports = ctx.exec.map(&programs, |(prog, p0)| {
            let tr = integrate_trajectory(prog, p0).expect("valid program");
            let r = constraint_residuals(&tr, prog.mode).expect("velocities recorded");
            (r.max_contact, r.max_nullity)
        });
        let c = max_of(&reports.iter().map(|r| r.0).collect::<Vec<_>>());
        let n = max_of(&reports.iter().map(|r| r.1).collect::<Vec<_>>());
        checks.push(Check::below(format!("trajectory_contact_{mode}"), c, t.contact));
        checks.push(Check::below(format!("trajectory_nullity_{mode}"), n, t.nullity));
    }
    let mut s = ctx.sampler("config.ambient_nullity");
    let mut worst = 0.0f64;
    for p in &pts {
        let u = s.vector::<3>(1.0);
        let v = maneuver_velocity(ManeuverMode::Attacking, p, u);
        let len = p.normal_length();
        worst = worst.max((ambient_nullity(p, &v) + (v[A] * v[X] + v[B] * v[Y]) / len).abs());
    }
    checks.push(Check::below("ambient_nullity_identity", worst, t.contact));
    let notes = vec![
        "d(w0)^d(w0)^w0 = -2 dx^dy^dz^da^db; the coefficient is +2 only for the opposite orientation".to_string(),
    ];
    (checks, notes)
}

fn structure(ctx: &Context) -> Outcome {
    let t = &ctx.tol;
    let pts = ctx.points("structure.points", 100);
    let diag = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0));
    let mut checks = vec![Check::below(
        "attacking_k_coordinate_diag",
        ctx.worst(&pts, |p| (attacking_k(FrameTag::Coordinate, p).expect("nondegenerate").matrix - diag).amax()),
        t.k_operator,
    )];
    let split = ctx.worst(&pts, |p| {
        let k = attacking_k(FrameTag::Coordinate, p).expect("nondegenerate");
        let EigenSplit::Real { plus, minus } = eigen_split(&k).expect("diagonalizable") else { return f64::INFINITY };
        let g = attacking_metric(p).matrix();
        let g = Matrix4::from_fn(|i, j| g[(i, j)]);
        let om = symplectic_matrix(FrameTag::Coordinate, p);
        [&plus, &minus].iter().map(|v| restriction_residual(&g, v).max(restriction_residual(&om, v))).fold(0.0, f64::max)
    });
    checks.push(Check::below("attacking_split_null_lagrangean", split, t.null_factor));

    let p0 = ChartPoint5::ORIGIN;
    let g = DenseTensor4::from_sym(&in_frame(&attacking_metric(&p0), FrameTag::EFrame, &p0));
    let om = DenseTensor4::from_matrix(&symplectic_matrix(FrameTag::EFrame, &p0));
    let s5 = solve_infinitesimal_stabilizer(&[g, om.clone()], t.rank).expect("nonempty");
    checks.push(Check::count("stabilizer_g_omega_dim", s5.dimension, 5));
    checks.push(Check::below("stabilizer_g_omega_residual", s5.max_residual, t.stabilizer));
    let mut joint = s5.basis.clone();
    joint.extend(g0_basis());
    checks.push(Check::count("stabilizer_span_matches_generators", span_rank(&joint), 5));
    checks.push(Check::below("generator_commutation_table", verify_commutation_table(&g0_basis(), &g0_table()), t.stabilizer));
    let ups = DenseTensor4::from_sym(&upsilon_tensor(FrameTag::ZFrame));
    let om2 = DenseTensor4::from_matrix(&two_form_matrix());
    let s4 = solve_infinitesimal_stabilizer(&[ups, om2], t.rank).expect("nonempty");
    checks.push(Check::count("stabilizer_upsilon_omega_dim", s4.dimension, 4));
    checks.push(Check::below("stabilizer_upsilon_omega_residual", s4.max_residual, t.stabilizer));
    let s11 = solve_infinitesimal_stabilizer(&[om], t.rank).expect("nonempty");
    checks.push(Check::count("stabilizer_omega_dim", s11.dimension, 11));

    let many = ctx.points("structure.landing", 1000);
    let sq = ctx.worst(&many, |p| {
        let kt = k_tilde(&crate::maneuvers::landing_metric(p), &symplectic_matrix(FrameTag::Coordinate, p)).expect("nondegenerate");
        let lam = -1.0 / (1.0 + p.a * p.a + p.b * p.b);
        (kt * kt - Matrix4::identity() * lam).amax() / lam.abs()
    });
    checks.push(Check::below("landing_square_relative", sq, t.landing_square));
    let eig = ctx.worst(&pts, |p| {
        let k = landing_k(p).expect("nondegenerate");
        let EigenSplit::Complex { plus, .. } = eigen_split(&k).expect("diagonalizable") else { return f64::INFINITY };
        landing_z(p).iter().map(|z| span_distance(&plus, z)).fold(0.0, f64::max)
    });
    checks.push(Check::below("landing_z_plus_i_eigenvectors", eig, t.levi));
    let levis = ctx.exec.map(&pts, levi_form);
    let bad_sig = levis.iter().filter(|l| l.signature != (1, 1)).count();
    checks.push(Check::count("levi_signature_1_1_failures", bad_sig, 0));
    checks.push(Check::below("levi_holomorphic_defect", max_of(&levis.iter().map(|l| l.holomorphic_defect).collect::<Vec<_>>()), t.levi));
    checks.push(Check::below("levi_hermitian_defect", max_of(&levis.iter().map(|l| l.hermitian_defect).collect::<Vec<_>>()), t.levi));
    checks.push(Check::below("cr_integrability", ctx.worst(&pts, cr_integrability_defect), t.levi));
    (checks, vec![])
}

fn gl2(ctx: &Context) -> Outcome {
    let t = &ctx.tol;
    let mut s = ctx.sampler("gl2.vectors");
    let xs: Vec<[f64; 4]> = (0..1000).map(|_| s.vector::<4>(2.0)).collect();
    let n4 = |x: &[f64; 4]| x.iter().map(|c| c * c).sum::<f64>().powi(2);
    let det = max_of(&xs.iter().map(|x| (endomorphism_l(x).determinant() - quartic_upsilon(x)).abs() / n4(x)).collect::<Vec<_>>());
    let contr = max_of(
        &xs.iter().map(|x| (endomorphism_l(x) - endomorphism_l_contracted(x)).amax() / n4(x).sqrt()).collect::<Vec<_>>(),
    );
    let tensor = upsilon_tensor(FrameTag::ZFrame);
    let pol = max_of(
        &xs.windows(4)
            .step_by(4)
            .map(|w| {
                let direct = tensor.eval_components(&[&w[0], &w[1], &w[2], &w[3]]);
                let scale = w.iter().map(|x| n4(x).powf(0.25)).product::<f64>();
                (direct - upsilon_polarized(&w[0], &w[1], &w[2], &w[3])).abs() / scale
            })
            .collect::<Vec<_>>(),
    );
    let gt = bilinear_tensors(FrameTag::ZFrame);
    let bil = max_of(
        &xs.windows(2)
            .map(|w| {
                let b = bilinears(&w[0], &w[1]);
                (0..3).map(|i| (gt[i].eval_components(&[&w[0], &w[1]]) - b[i]).abs()).fold(0.0, f64::max)
                    / (n4(&w[0]) * n4(&w[1])).powf(0.25)
            })
            .collect::<Vec<_>>(),
    );
    let mut checks = vec![
        Check::below("det_l_equals_quartic", det, t.quartic),
        Check::below("l_contraction_route", contr, t.quartic),
        Check::below("upsilon_polarization_route", pol, t.quartic),
        Check::below("bilinear_polarization_route", bil, t.quartic),
    ];

    let mut eq = 0.0f64;
    let mut eq2 = 0.0f64;
    for w in xs.windows(2).take(200) {
        let m = s.vector::<4>(1.5);
        let alpha = Matrix2::new(m[0], m[1], m[2], m[3]);
        let Ok(rho) = gl2_action(&alpha) else { continue };
        let d = alpha.determinant();
        let act = |x: &[f64; 4]| {
            let v = rho * Vector4::from(*x);
            [v[0], v[1], v[2], v[3]]
        };
        let (a, b) = (act(&w[0]), act(&w[1]));
        eq = eq.max((quartic_upsilon(&a) - d.powi(6) * quartic_upsilon(&w[0])).abs() / (n4(&a) + d.powi(6).abs() * n4(&w[0])));
        let sc = (n4(&a) * n4(&b)).sqrt().sqrt() + d.powi(3).abs() * (n4(&w[0]) * n4(&w[1])).sqrt().sqrt();
        eq2 = eq2.max((invariant_two_form(&a, &b) - d.powi(3) * invariant_two_form(&w[0], &w[1])).abs() / sc);
    }
    checks.push(Check::below("upsilon_weight_six", eq, t.quartic));
    checks.push(Check::below("two_form_weight_three", eq2, t.quartic));

    let ups = DenseTensor4::from_sym(&upsilon_tensor(FrameTag::ZFrame));
    let om = DenseTensor4::from_matrix(&two_form_matrix());
    let stab = solve_infinitesimal_stabilizer(&[ups, om], t.rank).expect("nonempty");
    let mut joint = stab.basis.clone();
    for e in [Matrix2::new(1.0, 0.0, 0.0, 0.0), Matrix2::new(0.0, 1.0, 0.0, 0.0), Matrix2::new(0.0, 0.0, 1.0, 0.0), Matrix2::new(0.0, 0.0, 0.0, 1.0)] {
        joint.push(gl2_algebra_action(&e));
    }
    checks.push(Check::count("stabilizer_is_gl2_image", span_rank(&joint), 4));

    let frac = |pts: &[[f64; 4]], want: NullClass| {
        let hits = pts.iter().filter(|x| classify_with(x, t.classify).map(|c| c.class) == Ok(want)).count();
        1.0 - hits as f64 / pts.len() as f64
    };
    let cubic: Vec<[f64; 4]> = (0..1000).map(|_| cubic_point(s.uniform(-2.0, 2.0))).collect();
    let tangent: Vec<[f64; 4]> = (0..1000)
        .map(|_| {
            let sign = if s.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            tangent_point(s.uniform(-2.0, 2.0), sign * s.uniform(0.2, 2.0))
        })
        .collect();
    checks.push(Check::below("cubic_points_type_n_miss_rate", frac(&cubic, NullClass::TypeN), 0.01));
    checks.push(Check::below("tangent_points_type_ii_miss_rate", frac(&tangent, NullClass::TypeII), 0.01));
    checks.push(Check::below("random_points_not_null_miss_rate", frac(&xs, NullClass::NotNull), 0.01));
    (checks, vec![])
}

fn symmetry_checks(cat: SymmetryCatalog, ctx: &Context) -> Outcome {
    let t = &ctx.tol;
    let mut checks = Vec::new();
    let pts = ctx.points("symmetry.points", 50);
    {
        let name = cat.name();
        let res = catalog_residuals(cat, &pts, ctx.exec);
        checks.push(Check::below(format!("{name}_contact_residual"), max_of(&res.iter().map(|r| r.contact).collect::<Vec<_>>()), t.symmetry));
        checks.push(Check::below(format!("{name}_tensor_residual"), max_of(&res.iter().map(|r| r.tensor).collect::<Vec<_>>()), t.symmetry));
        let fields = cat.fields();
        let n = fields.len();
        checks.push(Check::count(format!("{name}_independence_rank"), independence_rank(&fields, &ctx.points(&format!("symmetry.rank.{name}"), 10)), n));
        let a = extract_structure_constants(&fields, &ctx.points(&format!("symmetry.closure.a.{name}"), 2 * n), ctx.exec);
        let b = extract_structure_constants(&fields, &ctx.points(&format!("symmetry.closure.b.{name}"), 2 * n), ctx.exec);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                checks.push(Check::below(format!("{name}_closure"), a.closure_residual, t.closure));
                checks.push(Check::below(format!("{name}_jacobi"), a.jacobi_residual, t.jacobi));
                checks.push(Check::below(format!("{name}_constants_agreement"), constants_agreement(&a, &b), t.structure_agreement));
                let (p, q, z) = a.signature;
                let (p0, q0, z0) = cat.expected_signature();
                checks.push(Check::count(format!("{name}_killing_positive"), p, p0));
                checks.push(Check::count(format!("{name}_killing_negative"), q, q0));
                checks.push(Check::count(format!("{name}_killing_zero"), z, z0));
            }
            _ => checks.push(Check::below(format!("{name}_closure"), f64::INFINITY, t.closure)),
        }
    }
    (checks, vec![])
}

fn symmetry(ctx: &Context) -> Outcome {
    let mut checks = Vec::new();
    for cat in SymmetryCatalog::ALL {
        checks.extend(symmetry_checks(cat, ctx).0);
    }
    let pts = ctx.points("symmetry.points", 50);
    let fields = SymmetryCatalog::AttackingSL4.fields();
    let exact = ctx.worst(&pts, |p| ATTACKING_EXACT.iter().map(|&i| exact_symmetry_residual(&fields[i], 0.0, p)).fold(0.0, f64::max));
    let homot = ctx.worst(&pts, |p| ATTACKING_HOMOTHETIC.iter().map(|&i| exact_symmetry_residual(&fields[i], 1.0, p)).fold(0.0, f64::max));
    checks.push(Check::below("attacking_exact_symmetries", exact, 1e-9));
    checks.push(Check::below("attacking_homotheties", homot, 1e-9));

    let da = VectorField::coordinate("da", A);
    let euler = VectorField::new("euler", |p| [p[0], p[1], p[2], Jet::zero(), Jet::zero()]);
    let neg_a = pts.iter().map(|p| legendrean_symmetry_residual(&da, p).0).fold(f64::INFINITY, f64::min);
    let neg_e = pts.iter().map(|p| g2_symmetry_residual(&euler, p).1).fold(f64::INFINITY, f64::min);
    checks.push(Check::above("control_da_contact_residual_min", neg_a, 1e-2));
    checks.push(Check::above("control_euler_quartic_residual_min", neg_e, 1e-3));
    let notes = vec!["the da control preserves g exactly (L_da g = 0); it is rejected through the contact residual".to_string()];
    (checks, notes)
}

/// Detailed report for one symmetry catalog.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub catalog: String,
    pub pass: bool,
    pub seed: u64,
    /// worst residuals per field over the seeded points
    pub fields: Vec<FieldResidual>,
    pub rank: usize,
    pub expected_signature: (usize, usize, usize),
    pub algebra: Option<LieAlgebraModel>,
    pub checks: Vec<Check>,
}

pub fn catalog_report(cat: SymmetryCatalog, ctx: &Context) -> CatalogReport {
    let name = cat.name();
    let pts = ctx.points("symmetry.points", 50);
    let res = catalog_residuals(cat, &pts, ctx.exec);
    let fields_v = cat.fields();
    let mut fields: Vec<FieldResidual> =
        fields_v.iter().map(|f| FieldResidual { id: f.id().to_string(), contact: 0.0, tensor: 0.0 }).collect();
    for r in &res {
        if let Some(f) = fields.iter_mut().find(|f| f.id == r.id) {
            f.contact = f.contact.max(r.contact);
            f.tensor = f.tensor.max(r.tensor);
        }
    }
    let rank = independence_rank(&fields_v, &ctx.points(&format!("symmetry.rank.{name}"), 10));
    let algebra = extract_structure_constants(&fields_v, &ctx.points(&format!("symmetry.closure.a.{name}"), 2 * fields_v.len()), ctx.exec).ok();
    let (checks, _) = symmetry_checks(cat, ctx);
    CatalogReport {
        catalog: name.to_string(),
        pass: checks.iter().all(|c| c.pass),
        seed: ctx.seed,
        fields,
        rank,
        expected_signature: cat.expected_signature(),
        algebra,
        checks,
    }
}

/// Seeded joystick controls with `|w| ≥ 0.5`.
pub fn joystick_controls(seed: u64, n: usize) -> Vec<D2Controls> {
    let mut s = Sampler::stream(seed, "fibration.joystick");
    (0..n)
        .map(|_| {
            let sign = if s.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            let w = ControlSignal::Sine {
                amp: s.uniform(0.0, 0.4),
                freq: s.uniform(0.5, 2.0),
                phase: s.uniform(0.0, 6.0),
                offset: sign * s.uniform(0.9, 1.5),
            };
            let mut c = D2Controls::new(random_signal(&mut s, 1.0), w);
            c.start = s.vector::<5>(1.0);
            c
        })
        .collect()
}

fn fibration(ctx: &Context) -> Outcome {
    let t = &ctx.tol;
    let mut s = ctx.sampler("fibration.points");
    let pts: Vec<[f64; 6]> = (0..100).map(|_| s.vector::<6>(2.0)).collect();
    let (cx, cy) = (coframe_x(), coframe_y());
    let eds = |cf: &crate::fibration::Coframe6| max_of(&ctx.exec.map(&pts, |p| max_of(&verify_eds(cf, p))));
    let mut checks = vec![
        Check::below("eds_x_coframe", eds(&cx), t.eds),
        Check::below("eds_y_coframe", eds(&cy), t.eds),
    ];
    let many: Vec<[f64; 6]> = (0..1000).map(|_| s.vector::<6>(2.0)).collect();
    let rt = max_of(&many.iter().map(|x| {
        let b = x_from_y(&y_from_x(x));
        (0..6).map(|i| (b[i] - x[i]).abs()).fold(0.0, f64::max)
    }).collect::<Vec<_>>());
    checks.push(Check::below("coordinate_roundtrip", rt, t.roundtrip));
    checks.push(Check::below("coframe_pullback", max_of(&pts.iter().map(pullback_residual).collect::<Vec<_>>()), 1e-9));
    let sf = max_of(&ctx.exec.map(&pts[..20], |p| structure_function_residual(&cx, p).max(structure_function_residual(&cy, p))));
    checks.push(Check::below("dual_frame_structure_functions", sf, t.commutator));
    checks.push(Check::below("explicit_d2_frame_duality", max_of(&pts.iter().map(d2_frame_duality_residual).collect::<Vec<_>>()), t.commutator));

    let mut notes = Vec::new();
    for c in commutator_checks(&cx, &pts[0]) {
        checks.push(Check::below(format!("commutator_off_target {}", c.label), c.off_target, t.commutator));
        if c.residual >= t.commutator {
            notes.push(format!("quoted relation {} does not hold: measured coefficient {}", c.label, c.measured));
        }
    }

    let ctrls = joystick_controls(ctx.seed, 20);
    let runs = ctx.exec.map(&ctrls, |c| joystick(c, 0.0, 2.0, 0.01));
    let mut contact = 0.0f64;
    let mut angle = 0.0f64;
    let mut tangency = 0.0f64;
    let mut non_n = 0usize;
    let mut failed = 0usize;
    for r in &runs {
        match r {
            Ok(j) => {
                contact = contact.max(j.certificate.max_contact);
                angle = angle.max(j.certificate.max_angle);
                tangency = tangency.max(d2_tangency_residual(&j.d2));
                non_n += j.certificate.samples.iter().filter(|s| s.class != NullClass::TypeN).count();
            }
            Err(_) => failed += 1,
        }
    }
    checks.push(Check::count("joystick_pipelines_failed", failed, 0));
    checks.push(Check::below("joystick_d2_tangency", tangency, 1e-8));
    checks.push(Check::below("joystick_contact", contact, t.replay_contact));
    checks.push(Check::below("joystick_cubic_angle", angle, t.cubic_angle));
    checks.push(Check::count("joystick_non_type_n_samples", non_n, 0));
    (checks, notes)
}

fn planner(ctx: &Context) -> Outcome {
    let t = &ctx.tol;
    let pts = ctx.points("planner.points", 100);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for mode in [ManeuverMode::Attacking, ManeuverMode::Landing, ManeuverMode::G2Strict] {
        let fam = bracket_family(mode);
        let bad = pts.iter().filter(|p| bracket_generating_check(&fam, p) != 5).count();
        checks.push(Check::count(format!("bracket_generating_failures_{mode}"), bad, 0));
        let bad4 = pts.iter().filter(|p| distribution_rank(&fam, p) != 4).count();
        checks.push(Check::count(format!("family_rank_four_failures_{mode}"), bad4, 0));
        let (label, _, _) = claimed_bracket(mode);
        let r = ctx.worst(&pts, |p| claimed_bracket_residual(mode, p));
        if mode == ManeuverMode::Landing {
            notes.push(format!("{label} fails with residual {r:e}: the nested bracket vanishes identically"));
            let fam = bracket_family(mode);
            let br = fam.bracket();
            let transverse = ctx.worst(&pts, |p| {
                let v = br.eval(&p.to_array());
                let w = contact_form(p);
                let c: f64 = (0..5).map(|i| w[i] * v[i]).sum();
                (c - 9.0 * (1.0 + p.a * p.a)).abs()
            });
            checks.push(Check::below("landing_y1_y3_transverse_component", transverse, t.bracket));
        } else {
            checks.push(Check::below(format!("bracket_identity {label}"), r, t.bracket));
        }
    }
    let p = ChartPoint5::new(0.3, -0.2, 0.1, 0.6, -0.4);
    checks.push(Check::below("rectangle_ratio_attacking", (rectangle_ratio(ManeuverMode::Attacking, &p, 0.01) - 3.0).abs(), 1e-6));
    checks.push(Check::below("rectangle_ratio_g2", (rectangle_ratio(ManeuverMode::G2Strict, &p, 0.01) - 1.0).abs(), 1e-6));

    for mode in ManeuverMode::ALL {
        let mut s = ctx.sampler(&format!("planner.pairs.{mode}"));
        let pairs: Vec<(ChartPoint5, ChartPoint5)> = (0..50).map(|_| (s.chart_point(), s.chart_point())).collect();
        let out = ctx.exec.map(&pairs, |(a, b)| {
            let plan = plan_path(mode, a, b, t.plan).ok()?;
            let r = replay(&plan).ok()?;
            Some((plan.error, r.residuals.max_contact, r.residuals.max_nullity, r.endpoint_drift))
        });
        let failed = out.iter().filter(|o| o.is_none()).count();
        let ok: Vec<_> = out.into_iter().flatten().collect();
        checks.push(Check::count(format!("plan_failures_{mode}"), failed, 0));
        checks.push(Check::below(format!("plan_error_{mode}"), max_of(&ok.iter().map(|o| o.0).collect::<Vec<_>>()), t.plan));
        checks.push(Check::below(format!("replay_contact_{mode}"), max_of(&ok.iter().map(|o| o.1).collect::<Vec<_>>()), t.replay_contact));
        checks.push(Check::below(format!("replay_nullity_{mode}"), max_of(&ok.iter().map(|o| o.2).collect::<Vec<_>>()), t.replay_nullity));
        checks.push(Check::below(format!("replay_drift_{mode}"), max_of(&ok.iter().map(|o| o.3).collect::<Vec<_>>()), 1e-8));
    }
    (checks, notes)
}
