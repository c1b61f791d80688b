//! Numerical thresholds, overridable from `key = value` files.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TolError {
    #[error("line {0}: expected key = value")]
    Syntax(usize),
    #[error("unknown tolerance key `{0}`")]
    UnknownKey(String),
    #[error("value for `{0}` is not a positive number: {1}")]
    BadValue(String, String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// `|ω⁰(γ̇)|` along trajectories
    pub contact: f64,
    /// mode nullity along trajectories
    pub nullity: f64,
    pub contact_constant: f64,
    pub roundtrip: f64,
    pub annihilation: f64,
    pub k_operator: f64,
    pub null_factor: f64,
    pub stabilizer: f64,
    pub landing_square: f64,
    pub levi: f64,
    pub symmetry: f64,
    pub closure: f64,
    pub jacobi: f64,
    pub structure_agreement: f64,
    pub quartic: f64,
    pub classify: f64,
    pub eds: f64,
    pub commutator: f64,
    pub cubic_angle: f64,
    pub bracket: f64,
    pub plan: f64,
    pub replay_contact: f64,
    pub replay_nullity: f64,
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            contact: 1e-9,
            nullity: 1e-8,
            contact_constant: 1e-9,
            roundtrip: 1e-12,
            annihilation: 1e-12,
            k_operator: 1e-12,
            null_factor: 1e-10,
            stabilizer: 1e-10,
            landing_square: 1e-9,
            levi: 1e-10,
            symmetry: 1e-7,
            closure: 1e-8,
            jacobi: 1e-8,
            structure_agreement: 1e-6,
            quartic: 1e-10,
            classify: 1e-9,
            eds: 1e-7,
            commutator: 1e-8,
            cubic_angle: 1e-5,
            bracket: 1e-8,
            plan: 1e-3,
            replay_contact: 1e-7,
            replay_nullity: 1e-6,
            rank: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), TolError> {
        let slot = match key {
            "contact" => &mut self.contact,
            "nullity" => &mut self.nullity,
            "contact_constant" => &mut self.contact_constant,
            "roundtrip" => &mut self.roundtrip,
            "annihilation" => &mut self.annihilation,
            "k_operator" => &mut self.k_operator,
            "null_factor" => &mut self.null_factor,
            "stabilizer" => &mut self.stabilizer,
            "landing_square" => &mut self.landing_square,
            "levi" => &mut self.levi,
            "symmetry" => &mut self.symmetry,
            "closure" => &mut self.closure,
            "jacobi" => &mut self.jacobi,
            "structure_agreement" => &mut self.structure_agreement,
            "quartic" => &mut self.quartic,
            "classify" => &mut self.classify,
            "eds" => &mut self.eds,
            "commutator" => &mut self.commutator,
            "cubic_angle" => &mut self.cubic_angle,
            "bracket" => &mut self.bracket,
            "plan" => &mut self.plan,
            "replay_contact" => &mut self.replay_contact,
            "replay_nullity" => &mut self.replay_nullity,
            "rank" => &mut self.rank,
            _ => return Err(TolError::UnknownKey(key.to_string())),
        };
        *slot = value;
        Ok(())
    }

    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_config(&mut self, text: &str) -> Result<(), TolError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(TolError::Syntax(n + 1))?;
            let (k, v) = (k.trim(), v.trim());
            let val: f64 = v.parse().map_err(|_| TolError::BadValue(k.to_string(), v.to_string()))?;
            if !(val.is_finite() && val > 0.0) {
                return Err(TolError::BadValue(k.to_string(), v.to_string()));
            }
            self.set(k, val)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_overrides() {
        let mut t = Tolerances::default();
        t.apply_config("# comment\ncontact = 1e-6\n\nplan=0.01 # trailing\n").unwrap();
        assert_eq!(t.contact, 1e-6);
        assert_eq!(t.plan, 0.01);
        assert_eq!(t.apply_config("nope = 1"), Err(TolError::UnknownKey("nope".into())));
        assert_eq!(t.apply_config("contact"), Err(TolError::Syntax(1)));
        assert!(t.apply_config("contact = -1").is_err());
    }
}
