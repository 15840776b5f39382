//! Gauss-Legendre quadrature for complex-valued integrands on real intervals.

use num_complex::Complex64 as C;
use std::sync::OnceLock;

const ORDER: usize = 24;

/// Nodes and weights on [-1, 1], computed once by Newton iteration.
fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(ORDER))
}

pub(crate) fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// One Gauss-Legendre panel on [a, b].
pub(crate) fn panel<F: Fn(f64) -> C>(f: &F, a: f64, b: f64) -> C {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = C::new(0.0, 0.0);
    for &(x, w) in rule() {
        acc += w * f(m + h * x);
    }
    acc * h
}

/// Integral over [a, inf) by panels of width `min(t, max_width)` (so widths
/// grow geometrically from small `a`), stopping once a panel contributes less
/// than `tol` relative to the running sum for two consecutive panels.
pub(crate) fn tail<F: Fn(f64) -> C>(f: &F, a: f64, max_width: f64, tol: f64) -> C {
    let mut acc = C::new(0.0, 0.0);
    let mut t = a;
    let mut quiet = 0;
    for _ in 0..100_000 {
        let w = t.min(max_width).max(1e-3);
        let piece = panel(f, t, t + w);
        acc += piece;
        t += w;
        if piece.norm() <= tol * acc.norm().max(1e-300) {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = rule().iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let f = |x: f64| C::new(x.powi(7) - 3.0 * x * x, x.powi(4));
        let v = panel(&f, 0.0, 2.0);
        let want = C::new(256.0 / 8.0 - 8.0, 32.0 / 5.0);
        assert!((v - want).norm() < 1e-12);
    }

    #[test]
    fn tail_of_decaying_oscillation() {
        // int_1^inf e^{-(1+2i) t} dt = e^{-(1+2i)} / (1+2i)
        let z = C::new(1.0, 2.0);
        let v = tail(&|t: f64| (-z * t).exp(), 1.0, 1.0, 1e-17);
        assert!((v - (-z).exp() / z).norm() < 1e-14);
    }
}
