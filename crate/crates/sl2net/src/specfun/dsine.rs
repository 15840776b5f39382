//! Barnes double sine `S_2(x | w1, w2) = Gamma_2(w1 + w2 - x) / Gamma_2(x)`,
//! evaluated from its integral representation (not through `Gamma_2`).

use super::elem::expm1;
use super::gamma::ln_sin;
use super::quad;
use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const SERIES_TERMS: usize = 40;

/// Taylor coefficients `d_k` of `u / sinh(u) = sum d_k u^{2k}`.
fn cosech_coefficients(n: usize) -> Vec<f64> {
    // d_k = (2 - 4^k) B_{2k} / (2k)!, via the zeta form of B_{2k}
    let mut d = vec![1.0; n];
    for (k, dk) in d.iter_mut().enumerate().skip(1) {
        let zeta: f64 = match k {
            1 => PI * PI / 6.0,
            2 => PI.powi(4) / 90.0,
            _ => (1..200).rev().map(|m| (m as f64).powi(-2 * k as i32)).sum(),
        };
        let b_over_fact = if k % 2 == 1 { 1.0 } else { -1.0 } * 2.0 * zeta / (2.0 * PI).powi(2 * k as i32);
        *dk = (2.0 - 4f64.powi(k as i32)) * b_over_fact;
    }
    d
}

/// `-ln S_2` on the strip, i.e. the regularized integral
/// `int_0^inf [sinh(at) / (2 sinh(w1 t) sinh(w2 t)) - a / (2 w1 w2 t)] dt / t`
/// with `a = w1 + w2 - 2x`.
fn strip_integral(x: C, w1: f64, w2: f64) -> C {
    let w = w1 + w2;
    let a = w - 2.0 * x;
    let t0 = 0.5f64.min(PI / (2.0 * w1.max(w2))).min(1.0 / a.norm().max(1e-300));
    let n = SERIES_TERMS;

    // series of sinh(at) / t, cosech(w1 t) w1 t, cosech(w2 t) w2 t in t^2
    let d = cosech_coefficients(n);
    let mut sa = Vec::with_capacity(n);
    let mut term = a;
    for j in 0..n {
        sa.push(term);
        term *= a * a / (((2 * j + 2) * (2 * j + 3)) as f64);
    }
    let d1: Vec<C> = (0..n).map(|k| C::new(d[k] * w1.powi(2 * k as i32), 0.0)).collect();
    let d2: Vec<C> = (0..n).map(|k| C::new(d[k] * w2.powi(2 * k as i32), 0.0)).collect();
    let conv = |u: &[C], v: &[C]| -> Vec<C> { (0..n).map(|k| (0..=k).map(|j| u[j] * v[k - j]).sum()).collect() };
    let e = conv(&conv(&sa, &d1), &d2);
    let mut head = C::new(0.0, 0.0);
    for (k, ek) in e.iter().enumerate().skip(1) {
        let p = (2 * k - 1) as i32;
        head += ek * t0.powi(p) / p as f64;
    }
    head /= 2.0 * w1 * w2;

    let h = |t: f64| {
        let num = (-2.0 * x * t).exp() - (-2.0 * (w - x) * t).exp();
        let den = expm1(C::new(-2.0 * w1 * t, 0.0)) * expm1(C::new(-2.0 * w2 * t, 0.0));
        num / (den * t)
    };
    let width = (1.0 / (1.0 + 2.0 * x.im.abs())).min(1.0);
    let body = quad::tail(&h, t0, width, 1e-18);
    // the subtracted a/(2 w1 w2 t^2) integrated over [t0, inf)
    head + body - a / (2.0 * w1 * w2 * t0)
}

fn check_periods(w1: C, w2: C) -> Result<(f64, f64)> {
    if w1.im != 0.0 || w2.im != 0.0 || !(w1.re > 0.0) || !(w2.re > 0.0) {
        return domain("double sine periods must be real and positive");
    }
    Ok((w1.re, w2.re))
}

/// A logarithm of `S_2(x | w1, w2)` (modulo `2 pi i`), continued off the strip
/// by `S_2(x) = 2 sin(pi x / w2) S_2(x + w1)` and its `w1 <-> w2` partner.
pub fn log_double_sine(x: C, w1: C, w2: C) -> Result<C> {
    let (w1, w2) = check_periods(w1, w2)?;
    let (ws, wl) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
    let margin = ws / 4.0;
    let w = w1 + w2;
    let mut y = x;
    let mut acc = C::new(0.0, 0.0);
    let mut steps = 0usize;
    let sin_factor = |y: C| -> Result<C> {
        let s = (PI * y / wl).sin();
        if s.norm() < 1e-14 {
            return Err(Error::Singular(format!("double sine at lattice point {x}")));
        }
        Ok(C::new(2f64.ln(), 0.0) + ln_sin(PI * y / wl))
    };
    while y.re < margin {
        acc += sin_factor(y)?;
        y += ws;
        steps += 1;
        if steps > 100_000 {
            return domain(format!("double sine argument {x} too far from the strip"));
        }
    }
    while y.re > w - margin {
        y -= ws;
        acc -= sin_factor(y)?;
        steps += 1;
        if steps > 100_000 {
            return domain(format!("double sine argument {x} too far from the strip"));
        }
    }
    Ok(acc - strip_integral(y, w1, w2))
}

pub fn double_sine(x: C, w1: C, w2: C) -> Result<C> {
    Ok(log_double_sine(x, w1, w2)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ln_gamma2;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn cosech_series_start() {
        let d = cosech_coefficients(4);
        assert!((d[1] + 1.0 / 6.0).abs() < 1e-16);
        assert!((d[2] - 7.0 / 360.0).abs() < 1e-16);
    }

    #[test]
    fn unit_at_centre() {
        let v = double_sine(c(2.5, 0.0), c(3.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn symmetric_in_periods() {
        let a = double_sine(c(0.9, 0.0), c(3.0, 0.0), c(2.0, 0.0)).unwrap();
        let b = double_sine(c(0.9, 0.0), c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn shift_laws() {
        let (w1, w2) = (c(3.0, 0.0), c(2.0, 0.0));
        let x = c(0.7, 0.0);
        let lhs = double_sine(x + w1, w1, w2).unwrap();
        let rhs = double_sine(x, w1, w2).unwrap() / (2.0 * (PI * x / w2).sin());
        assert!((lhs - rhs).norm() < 1e-10);
        let lhs = double_sine(x + w2, w1, w2).unwrap();
        let rhs = double_sine(x, w1, w2).unwrap() / (2.0 * (PI * x / w1).sin());
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn reflection() {
        // S_2(x) S_2(w1 + w2 - x) = 1
        let (w1, w2) = (c(4.3, 0.0), c(2.0, 0.0));
        let x = c(1.1, 0.6);
        let v = double_sine(x, w1, w2).unwrap() * double_sine(w1 + w2 - x, w1, w2).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn agrees_with_gamma2_ratio() {
        // two independent routes: integral S_2 versus Mellin Gamma_2
        let (w1, w2) = (c(3.0, 0.0), c(2.0, 0.0));
        for x in [c(0.9, 0.2), c(1.7, -0.4), c(3.2, 0.1)] {
            let s = log_double_sine(x, w1, w2).unwrap().exp();
            let g = (ln_gamma2(w1 + w2 - x, w1, w2).unwrap() - ln_gamma2(x, w1, w2).unwrap()).exp();
            assert!((s - g).norm() < 1e-11 * g.norm(), "{x}: {s} vs {g}");
        }
    }

    #[test]
    fn lattice_point_is_singular() {
        assert!(matches!(
            double_sine(c(0.0, 0.0), c(3.0, 0.0), c(2.0, 0.0)),
            Err(Error::Singular(_))
        ));
    }
}
