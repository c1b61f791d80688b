//! Fixed-step classical Runge–Kutta.

use crate::jet::Jet;

pub fn rk4_step<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    p: &[f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = f(t, p);
    let k2 = f(t + 0.5 * h, &axpy(p, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(p, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(p, h, &k3));
    let mut out = *p;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// The same step over jets, so that the discrete flow can be differentiated
/// exactly with respect to its initial point.
pub fn rk4_step_jet<const N: usize>(
    f: &impl Fn(&[Jet; N]) -> [Jet; N],
    p: &[Jet; N],
    h: f64,
) -> [Jet; N] {
    let shift = |p: &[Jet; N], s: f64, k: &[Jet; N]| {
        let mut o = *p;
        for i in 0..N {
            o[i] += k[i] * s;
        }
        o
    };
    let k1 = f(p);
    let k2 = f(&shift(p, 0.5 * h, &k1));
    let k3 = f(&shift(p, 0.5 * h, &k2));
    let k4 = f(&shift(p, h, &k3));
    let mut out = *p;
    for i in 0..N {
        out[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
    }
    out
}

fn axpy<const N: usize>(p: &[f64; N], s: f64, k: &[f64; N]) -> [f64; N] {
    let mut o = *p;
    for i in 0..N {
        o[i] += s * k[i];
    }
    o
}

/// Number of steps and step size covering `duration` with steps no longer
/// than `max_step` (negative durations give negative steps).
pub fn steps_for(duration: f64, max_step: f64) -> (usize, f64) {
    if duration == 0.0 {
        return (0, 0.0);
    }
    let n = (duration.abs() / max_step).ceil().max(1.0) as usize;
    (n, duration / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quartic_time_polynomials() {
        // ṗ = 4t³ integrates exactly with RK4
        let f = |t: f64, _p: &[f64; 1]| [4.0 * t * t * t];
        let mut p = [0.0];
        let (n, h) = steps_for(2.0, 0.1);
        for i in 0..n {
            p = rk4_step(&f, i as f64 * h, &p, h);
        }
        assert!((p[0] - 16.0).abs() < 1e-12);
    }
}
