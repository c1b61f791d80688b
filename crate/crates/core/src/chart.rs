//! The configuration space `ℝ³ × S²`, its upper-hemisphere chart with
//! coordinates `(x, y, z, a, b)`, the contact form and the distribution frames.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{DifferentialForm, VectorField};
use crate::jet::Jet;

pub type Vec3 = Vector3<f64>;
pub type Covector5 = [f64; 5];
pub type Vector5 = [f64; 5];

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const A: usize = 3;
pub const B: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("normal {0:?} points into the closed lower hemisphere")]
    OutsideChart([f64; 3]),
    #[error("normal has length {0}, expected 1")]
    NotUnit(f64),
    #[error("non-finite coordinates")]
    NonFinite,
}

/// Position of the centre and unit normal of the disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientConfig {
    pub r: Vec3,
    pub n: Vec3,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint5 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub a: f64,
    pub b: f64,
}

impl ChartPoint5 {
    pub const ORIGIN: ChartPoint5 = ChartPoint5 { x: 0.0, y: 0.0, z: 0.0, a: 0.0, b: 0.0 };

    pub fn new(x: f64, y: f64, z: f64, a: f64, b: f64) -> Self {
        ChartPoint5 { x, y, z, a, b }
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.x, self.y, self.z, self.a, self.b]
    }

    pub fn from_array(p: [f64; 5]) -> Self {
        ChartPoint5 { x: p[0], y: p[1], z: p[2], a: p[3], b: p[4] }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// `‖N‖ = √(1 + a² + b²)` for `N = (−a, −b, 1)`.
    pub fn normal_length(&self) -> f64 {
        (1.0 + self.a * self.a + self.b * self.b).sqrt()
    }

    pub fn dist_inf(&self, o: &ChartPoint5) -> f64 {
        self.to_array().iter().zip(o.to_array()).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()))
    }
}

impl std::str::FromStr for ChartPoint5 {
    type Err = String;
    /// `x,y,z,a,b`
    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad coordinate {t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        if v.len() != 5 {
            return Err(format!("expected 5 comma-separated coordinates, got {}", v.len()));
        }
        Ok(ChartPoint5::from_array([v[0], v[1], v[2], v[3], v[4]]))
    }
}

pub fn chart_from_ambient(c: &AmbientConfig) -> Result<ChartPoint5, ChartError> {
    let norm = c.n.norm();
    if !norm.is_finite() || !c.r.iter().all(|v| v.is_finite()) {
        return Err(ChartError::NonFinite);
    }
    if (norm - 1.0).abs() > 1e-12 {
        return Err(ChartError::NotUnit(norm));
    }
    if c.n.z <= 0.0 {
        return Err(ChartError::OutsideChart([c.n.x, c.n.y, c.n.z]));
    }
    Ok(ChartPoint5 { x: c.r.x, y: c.r.y, z: c.r.z, a: -c.n.x / c.n.z, b: -c.n.y / c.n.z })
}

pub fn ambient_from_chart(p: &ChartPoint5) -> AmbientConfig {
    let nn = Vec3::new(-p.a, -p.b, 1.0);
    AmbientConfig { r: Vec3::new(p.x, p.y, p.z), n: nn / nn.norm() }
}

/// `ω⁰ = dz − a dx − b dy`.
pub fn contact_form_field() -> DifferentialForm<5> {
    DifferentialForm::one_form(|p| [-p[A], -p[B], Jet::one(), Jet::zero(), Jet::zero()])
}

pub fn contact_form(p: &ChartPoint5) -> Covector5 {
    [-p.a, -p.b, 1.0, 0.0, 0.0]
}

/// Coefficient of `dω⁰∧dω⁰∧ω⁰` on `dx∧dy∧da∧db∧dz`, through the forms engine.
pub fn contact_nondegeneracy(p: &ChartPoint5) -> f64 {
    top_form_coefficient(&contact_form_field(), p)
}

fn top_form_coefficient(w: &DifferentialForm<5>, p: &ChartPoint5) -> f64 {
    let dw = w.d();
    let top = dw.wedge(&dw).and_then(|f| f.wedge(w)).expect("degree 5");
    top.at(&p.to_array()).component(&[X, Y, A, B, Z])
}

/// Ratio of `dω∧dω∧ω` for the ambient contact form `ω = n·dr` to
/// `vol_{S²} ∧ vol_{ℝ³}`, both pulled back to the chart.
pub fn ambient_volume_ratio(p: &ChartPoint5) -> f64 {
    let n = |p: &[Jet; 5]| {
        let s = (1.0 + p[A] * p[A] + p[B] * p[B]).sqrt().recip();
        [-p[A] * s, -p[B] * s, s]
    };
    let omega = DifferentialForm::one_form(move |p| {
        let v = n(p);
        [v[0], v[1], v[2], Jet::zero(), Jet::zero()]
    });
    let lhs = top_form_coefficient(&omega, p);
    let ni: Vec<DifferentialForm<5>> = (0..3).map(|i| DifferentialForm::function(move |p| n(p)[i])).collect();
    let dn: Vec<DifferentialForm<5>> = ni.iter().map(|f| f.d()).collect();
    // vol_{S²} = n_x dn_y∧dn_z + n_y dn_z∧dn_x + n_z dn_x∧dn_y
    let mut vol_s2: Option<DifferentialForm<5>> = None;
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let term = ni[i].wedge(&dn[j]).and_then(|f| f.wedge(&dn[k])).expect("degree 2");
        vol_s2 = Some(match vol_s2 {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    let vol_r3 = DifferentialForm::coordinate(X)
        .wedge(&DifferentialForm::coordinate(Y))
        .and_then(|f| f.wedge(&DifferentialForm::coordinate(Z)))
        .expect("degree 3");
    let vol = vol_s2.unwrap().wedge(&vol_r3).expect("degree 5");
    let rhs = vol.at(&p.to_array()).component(&[X, Y, A, B, Z]);
    lhs / rhs
}

/// Frames on the contact distribution and their dual coframes; `Chart` and
/// `Correspondence` are the full coordinate coframes in dimension 5 and 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameTag {
    /// `(dx, dy, dz, da, db)`
    Chart,
    /// coordinate differentials of the 6-dim correspondence space
    Correspondence,
    /// `(dx, dy, da, db)`, dual to `(E₁, E₂, E₄, E₃)`
    Coordinate,
    /// `(dx, dy, db, da)`, dual to `(E₁, E₂, E₃, E₄)`
    EFrame,
    /// `(dx, dy, −⅓db, da)`, dual to `(Z₁, Z₂, Z₃, Z₄)`
    ZFrame,
}

impl FrameTag {
    pub fn coordinates(n: usize) -> FrameTag {
        match n {
            5 => FrameTag::Chart,
            6 => FrameTag::Correspondence,
            _ => panic!("no coordinate frame tag for dimension {n}"),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FrameTag::Chart => 5,
            FrameTag::Correspondence => 6,
            _ => 4,
        }
    }

    /// Constant coframe on the chart for the distribution frames.
    pub fn coframe(&self) -> Option<[Covector5; 4]> {
        let e = |i: usize, s: f64| {
            let mut c = [0.0; 5];
            c[i] = s;
            c
        };
        match self {
            FrameTag::Coordinate => Some([e(X, 1.0), e(Y, 1.0), e(A, 1.0), e(B, 1.0)]),
            FrameTag::EFrame => Some([e(X, 1.0), e(Y, 1.0), e(B, 1.0), e(A, 1.0)]),
            FrameTag::ZFrame => Some([e(X, 1.0), e(Y, 1.0), e(B, -1.0 / 3.0), e(A, 1.0)]),
            _ => None,
        }
    }

    /// Frame vectors at `p` dual to [`FrameTag::coframe`].
    pub fn vectors(&self, p: &ChartPoint5) -> Option<[Vector5; 4]> {
        let e1 = [1.0, 0.0, p.a, 0.0, 0.0];
        let e2 = [0.0, 1.0, p.b, 0.0, 0.0];
        let da = [0.0, 0.0, 0.0, 1.0, 0.0];
        let db = [0.0, 0.0, 0.0, 0.0, 1.0];
        match self {
            FrameTag::Coordinate => Some([e1, e2, da, db]),
            FrameTag::EFrame => Some([e1, e2, db, da]),
            FrameTag::ZFrame => Some([e1, e2, [0.0, 0.0, 0.0, 0.0, -3.0], da]),
            _ => None,
        }
    }

    /// Frame components of a chart vector.
    pub fn components(&self, v: &[f64; 5]) -> Vec<f64> {
        match self.coframe() {
            Some(cf) => cf.iter().map(|c| c.iter().zip(v).map(|(a, b)| a * b).sum()).collect(),
            None => {
                assert_eq!(self.dim(), 5, "chart vectors have 5 components");
                v.to_vec()
            }
        }
    }
}

/// Four vector fields spanning the contact distribution.
#[derive(Clone, Debug)]
pub struct Frame4 {
    pub tag: FrameTag,
    pub fields: [VectorField<5>; 4],
}

fn horizontal(id: &str, i: usize) -> VectorField<5> {
    // ∂x + a∂z or ∂y + b∂z
    let src = if i == X { A } else { B };
    VectorField::new(id, move |p| {
        let mut v = [Jet::zero(); 5];
        v[i] = Jet::one();
        v[Z] = p[src];
        v
    })
}

/// `E₁ = ∂x + a∂z, E₂ = ∂y + b∂z, E₃ = ∂b, E₄ = ∂a`.
pub fn e_frame() -> Frame4 {
    Frame4 {
        tag: FrameTag::EFrame,
        fields: [
            horizontal("E1", X),
            horizontal("E2", Y),
            VectorField::coordinate("E3", B),
            VectorField::coordinate("E4", A),
        ],
    }
}

/// `Z₁ = ∂x + a∂z, Z₂ = ∂y + b∂z, Z₃ = −3∂b, Z₄ = ∂a`.
pub fn z_frame() -> Frame4 {
    Frame4 {
        tag: FrameTag::ZFrame,
        fields: [
            horizontal("Z1", X),
            horizontal("Z2", Y),
            VectorField::constant("Z3", [0.0, 0.0, 0.0, 0.0, -3.0]),
            VectorField::coordinate("Z4", A),
        ],
    }
}


#[cfg(test)]
mod volume_tests {
    use super::*;

    #[test]
    fn contact_top_form_against_ambient_volume() {
        for p in [ChartPoint5::ORIGIN, ChartPoint5::new(0.5, -1.2, 1.9, 1.7, -0.3)] {
            assert!((contact_nondegeneracy(&p) + 2.0).abs() < 1e-12, "{}", contact_nondegeneracy(&p));
            assert!((ambient_volume_ratio(&p) + 2.0).abs() < 1e-12, "{}", ambient_volume_ratio(&p));
        }
    }
}
