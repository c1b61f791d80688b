//! Seeded sampling of chart points and controls.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{AmbientConfig, ChartPoint5, Vec3};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x05A0_CE20;

/// Half-width of the sampling box `[−2, 2]⁵`.
pub const BOX_HALF_WIDTH: f64 = 2.0;

/// Points whose normal `N = (−a, −b, 1)` is longer than this are rejected.
pub const MAX_NORMAL_LENGTH: f64 = 10.0;

pub fn in_box(p: &ChartPoint5) -> bool {
    p.to_array().iter().all(|c| c.abs() <= BOX_HALF_WIDTH)
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream derived from `seed` and a label, so separate
    /// checks do not share draws.
    pub fn stream(seed: u64, label: &str) -> Self {
        let h = label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        Self::new(seed ^ h)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn chart_point(&mut self) -> ChartPoint5 {
        self.chart_point_in(BOX_HALF_WIDTH)
    }

    pub fn chart_point_in(&mut self, half: f64) -> ChartPoint5 {
        loop {
            let c: [f64; 5] = std::array::from_fn(|_| self.uniform(-half, half));
            let p = ChartPoint5::from_array(c);
            if p.normal_length() <= MAX_NORMAL_LENGTH {
                return p;
            }
        }
    }

    pub fn chart_points(&mut self, n: usize) -> Vec<ChartPoint5> {
        (0..n).map(|_| self.chart_point()).collect()
    }

    pub fn vector<const N: usize>(&mut self, half: f64) -> [f64; N] {
        std::array::from_fn(|_| self.uniform(-half, half))
    }

    /// Unit normal with `n·e_z > min_nz` and a position in the box.
    pub fn ambient(&mut self, min_nz: f64) -> AmbientConfig {
        loop {
            let v = Vec3::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0));
            let len = v.norm();
            if !(1e-3..=1.0).contains(&len) {
                continue;
            }
            let n = v / len;
            if n.z > min_nz {
                let r = Vec3::new(
                    self.uniform(-BOX_HALF_WIDTH, BOX_HALF_WIDTH),
                    self.uniform(-BOX_HALF_WIDTH, BOX_HALF_WIDTH),
                    self.uniform(-BOX_HALF_WIDTH, BOX_HALF_WIDTH),
                );
                return AmbientConfig { r, n };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_in_box() {
        let a = Sampler::new(7).chart_points(20);
        let b = Sampler::new(7).chart_points(20);
        assert_eq!(a, b);
        assert!(a.iter().all(in_box));
        assert_ne!(Sampler::stream(7, "x").chart_point(), Sampler::stream(7, "y").chart_point());
    }
}
