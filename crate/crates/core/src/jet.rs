//! Multi-dual numbers for exact nested derivatives.
//!
//! A [`Jet`] carries a value together with coefficients for up to
//! [`MAX_DIRS`] independent nilpotent directions `ε_i` with `ε_i² = 0`.
//! Coefficient slot `m` (a bitmask) holds the coefficient of `Π_{i∈m} ε_i`.
//!
//! Evaluating a map on a point seeded with `p + ε_k v` yields the exact
//! directional derivative along `v` in the `ε_k` slot, and because the other
//! slots are carried along untouched, derivatives of derivatives (brackets of
//! brackets, `d(dα)`) come out exactly as well.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Maximum number of simultaneous directions.
pub const MAX_DIRS: usize = 4;
const SLOTS: usize = 1 << MAX_DIRS;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; SLOTS],
    dirs: u8,
}

impl Default for Jet {
    fn default() -> Self {
        Jet::zero()
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::cst(v)
    }
}

impl Jet {
    pub const fn cst(v: f64) -> Jet {
        let mut c = [0.0; SLOTS];
        c[0] = v;
        Jet { c, dirs: 0 }
    }

    pub const fn zero() -> Jet {
        Jet::cst(0.0)
    }

    pub const fn one() -> Jet {
        Jet::cst(1.0)
    }

    /// Real part.
    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Number of directions in use.
    #[inline]
    pub fn dirs(&self) -> usize {
        self.dirs as usize
    }

    /// Coefficient of the monomial with bitmask `mask`.
    pub fn coeff(&self, mask: usize) -> f64 {
        self.c[mask]
    }

    /// `base + ε_dir · tangent`. `dir` must not be used by either argument.
    pub fn seeded(base: Jet, dir: usize, tangent: Jet) -> Jet {
        assert!(dir < MAX_DIRS, "jet depth exceeded ({} directions)", dir + 1);
        debug_assert!(base.dirs() <= dir && tangent.dirs() <= dir);
        let bit = 1 << dir;
        let mut out = base;
        for m in 0..bit {
            out.c[m | bit] = tangent.c[m];
        }
        out.dirs = (dir + 1) as u8;
        out
    }

    /// Coefficient of `ε_dir`, where `dir` is the outermost direction.
    pub fn d(&self, dir: usize) -> Jet {
        debug_assert!(self.dirs() <= dir + 1);
        let bit = 1 << dir;
        let mut out = Jet::zero();
        if self.dirs() > dir {
            out.c[..bit].copy_from_slice(&self.c[bit..2 * bit]);
            out.dirs = dir as u8;
        }
        out.trim()
    }

    /// Drop the outermost direction `dir`, keeping the remaining slots.
    pub fn strip(&self, dir: usize) -> Jet {
        let bit = 1 << dir;
        let mut out = Jet::zero();
        let top = (1usize << self.dirs()).min(bit);
        out.c[..top].copy_from_slice(&self.c[..top]);
        out.dirs = self.dirs.min(dir as u8);
        out
    }

    fn trim(mut self) -> Jet {
        while self.dirs > 0 {
            let half = 1usize << (self.dirs - 1);
            if self.c[half..2 * half].iter().all(|v| *v == 0.0) {
                self.dirs -= 1;
            } else {
                break;
            }
        }
        self
    }

    pub fn is_finite(&self) -> bool {
        self.c[..1 << self.dirs()].iter().all(|v| v.is_finite())
    }

    /// Compose with a scalar function given its normalized Taylor
    /// coefficients `t[m] = f⁽ᵐ⁾(a)/m!` at the real part `a`.
    fn compose(self, t: &[f64; MAX_DIRS + 1]) -> Jet {
        let k = self.dirs();
        if k == 0 {
            return Jet::cst(t[0]);
        }
        let mut nil = self;
        nil.c[0] = 0.0;
        let mut out = Jet::cst(t[0]);
        let mut pw = nil;
        for (m, tm) in t.iter().enumerate().take(k + 1).skip(1) {
            if m > 1 {
                pw *= nil;
            }
            out += pw * *tm;
        }
        out
    }

    pub fn recip(self) -> Jet {
        let a = self.c[0];
        let mut t = [0.0; MAX_DIRS + 1];
        let mut p = 1.0 / a;
        for tm in t.iter_mut() {
            *tm = p;
            p *= -1.0 / a;
        }
        self.compose(&t)
    }

    /// `self^e` for real exponent `e` (real part must be positive unless `e`
    /// is handled by [`Jet::powi`]).
    pub fn powf(self, e: f64) -> Jet {
        let a = self.c[0];
        let mut t = [0.0; MAX_DIRS + 1];
        let mut binom = 1.0;
        for (m, tm) in t.iter_mut().enumerate() {
            *tm = binom * a.powf(e - m as f64);
            binom *= (e - m as f64) / (m as f64 + 1.0);
        }
        self.compose(&t)
    }

    pub fn sqrt(self) -> Jet {
        if self.dirs == 0 {
            return Jet::cst(self.c[0].sqrt());
        }
        self.powf(0.5)
    }

    pub fn powi(self, n: i32) -> Jet {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut out = Jet::one();
        for _ in 0..n {
            out *= self;
        }
        out
    }

    pub fn square(self) -> Jet {
        self * self
    }

    pub fn sin(self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        let cyc = [s, c, -s, -c];
        self.compose(&taylor_from_cycle(&cyc))
    }

    pub fn cos(self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        let cyc = [c, -s, -c, s];
        self.compose(&taylor_from_cycle(&cyc))
    }

    pub fn exp(self) -> Jet {
        let e = self.c[0].exp();
        let mut t = [0.0; MAX_DIRS + 1];
        let mut fact = 1.0;
        for (m, tm) in t.iter_mut().enumerate() {
            if m > 0 {
                fact *= m as f64;
            }
            *tm = e / fact;
        }
        self.compose(&t)
    }
}

fn taylor_from_cycle(cyc: &[f64; 4]) -> [f64; MAX_DIRS + 1] {
    let mut t = [0.0; MAX_DIRS + 1];
    let mut fact = 1.0;
    for (m, tm) in t.iter_mut().enumerate() {
        if m > 0 {
            fact *= m as f64;
        }
        *tm = cyc[m % 4] / fact;
    }
    t
}

/// Lift a plain point to constant jets.
pub fn lift<const N: usize>(p: &[f64; N]) -> [Jet; N] {
    p.map(Jet::cst)
}

/// Real parts of a jet point.
pub fn values<const N: usize>(p: &[Jet; N]) -> [f64; N] {
    p.map(|j| j.value())
}

/// Smallest direction index unused by any jet in the slices.
pub fn next_dir(parts: &[&[Jet]]) -> usize {
    parts
        .iter()
        .flat_map(|s| s.iter())
        .map(|j| j.dirs())
        .max()
        .unwrap_or(0)
}

/// Seed `p + ε v` on a fresh direction; returns the seeded point and the
/// direction index used.
pub fn push_dir<const N: usize>(p: &[Jet; N], v: &[Jet; N]) -> ([Jet; N], usize) {
    let dir = next_dir(&[p, v]);
    let mut out = *p;
    for i in 0..N {
        out[i] = Jet::seeded(p[i], dir, v[i]);
    }
    (out, dir)
}

/// Seed `p + ε e_j` on a fresh direction.
pub fn push_axis<const N: usize>(p: &[Jet; N], j: usize) -> ([Jet; N], usize) {
    let dir = next_dir(&[p]);
    let mut out = *p;
    out[j] = Jet::seeded(p[j], dir, Jet::one());
    for (i, o) in out.iter_mut().enumerate() {
        if i != j {
            *o = Jet::seeded(p[i], dir, Jet::zero());
        }
    }
    (out, dir)
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(self, o: Jet) -> Jet {
        let k = self.dirs.max(o.dirs);
        let n = 1usize << k;
        let mut c = self.c;
        for m in 0..n {
            c[m] += o.c[m];
        }
        Jet { c, dirs: k }
    }
}

impl Sub for Jet {
    type Output = Jet;
    #[inline]
    fn sub(self, o: Jet) -> Jet {
        let k = self.dirs.max(o.dirs);
        let n = 1usize << k;
        let mut c = self.c;
        for m in 0..n {
            c[m] -= o.c[m];
        }
        Jet { c, dirs: k }
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, o: Jet) -> Jet {
        let k = self.dirs.max(o.dirs);
        if k == 0 {
            return Jet::cst(self.c[0] * o.c[0]);
        }
        let n = 1usize << k;
        let mut c = [0.0; SLOTS];
        for (m, cm) in c.iter_mut().enumerate().take(n) {
            let mut s = m;
            let mut acc = 0.0;
            loop {
                acc += self.c[s] * o.c[m ^ s];
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
            *cm = acc;
        }
        Jet { c, dirs: k }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[inline]
    fn div(self, o: Jet) -> Jet {
        if self.dirs == 0 && o.dirs == 0 {
            return Jet::cst(self.c[0] / o.c[0]);
        }
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    #[inline]
    fn neg(self) -> Jet {
        let mut c = self.c;
        for v in c.iter_mut().take(1 << self.dirs) {
            *v = -*v;
        }
        Jet { c, dirs: self.dirs }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn add(mut self, o: f64) -> Jet {
        self.c[0] += o;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn sub(mut self, o: f64) -> Jet {
        self.c[0] -= o;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn mul(mut self, o: f64) -> Jet {
        for v in self.c.iter_mut().take(1 << self.dirs) {
            *v *= o;
        }
        self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn div(self, o: f64) -> Jet {
        self * (1.0 / o)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    #[inline]
    fn add(self, o: Jet) -> Jet {
        o + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    #[inline]
    fn sub(self, o: Jet) -> Jet {
        -o + self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    #[inline]
    fn mul(self, o: Jet) -> Jet {
        o * self
    }
}

impl Div<Jet> for f64 {
    type Output = Jet;
    #[inline]
    fn div(self, o: Jet) -> Jet {
        o.recip() * self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, o: Jet) {
        *self = *self - o;
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, o: Jet) {
        *self = *self * o;
    }
}

impl std::iter::Sum for Jet {
    fn sum<I: Iterator<Item = Jet>>(iter: I) -> Jet {
        iter.fold(Jet::zero(), |a, b| a + b)
    }
}

/// Arithmetic shared by `f64` and [`Jet`], so the exterior algebra can be
/// written once.
pub trait Ring:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn from_f64(v: f64) -> Self;
}

impl Ring for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn from_f64(v: f64) -> f64 {
        v
    }
}

impl Ring for Jet {
    fn zero() -> Jet {
        Jet::zero()
    }
    fn from_f64(v: f64) -> Jet {
        Jet::cst(v)
    }
}
