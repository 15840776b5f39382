//! Barnes multiple Gamma functions in the zeta-regularized normalization
//! `ln Gamma_m(x | w) = d/ds zeta_m(s, x | w) at s = 0`.

use super::elem::expm1;
use super::gamma::{ln_gamma, ln_gamma_balanced};
use super::quad;
use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_TERMS: usize = 32;

/// `ln Gamma_1(x | w) = (x/w - 1/2) ln w + ln Gamma(x/w) - ln sqrt(2 pi)`.
pub fn ln_gamma1(x: C, w: C) -> Result<C> {
    if w == C::new(0.0, 0.0) {
        return domain("Gamma_1 period must be nonzero");
    }
    let u = x / w;
    Ok((u - 0.5) * w.ln() + ln_gamma(u)? - HALF_LN_2PI)
}

pub fn gamma1(x: C, w: C) -> Result<C> {
    Ok(ln_gamma1(x, w)?.exp())
}

/// `ln[ Gamma_1(a|w)^2 / (Gamma_1(a+1|w) Gamma_1(a-1|w)) ]`.
///
/// The power-of-`w` prefactors cancel, leaving a balanced ratio of ordinary
/// Gammas at `a/w` with offset `1/w`.
pub fn ln_gamma1_balanced(a: C, w: C) -> Result<C> {
    if w == C::new(0.0, 0.0) {
        return domain("Gamma_1 period must be nonzero");
    }
    ln_gamma_balanced(a / w, w.inv())
}

/// Taylor coefficients of `u / (1 - e^{-u})`.
fn todd_coefficients(n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n];
    a[0] = 1.0;
    if n > 1 {
        a[1] = 0.5;
    }
    // a_{2k} = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}
    let mut k = 1;
    while 2 * k < n {
        let z = zeta_even(2 * k);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        a[2 * k] = sign * 2.0 * z / (2.0 * PI).powi(2 * k as i32);
        k += 1;
    }
    a
}

fn zeta_even(s: usize) -> f64 {
    match s {
        2 => PI.powi(2) / 6.0,
        4 => PI.powi(4) / 90.0,
        6 => PI.powi(6) / 945.0,
        8 => PI.powi(8) / 9450.0,
        10 => PI.powi(10) / 93_555.0,
        _ => (1..200).rev().map(|n| (n as f64).powi(-(s as i32))).sum(),
    }
}

/// Coefficients of `t^m e^{-xt} / prod (1 - e^{-w_j t})`.
fn laurent_coefficients(x: C, ws: &[C]) -> Vec<C> {
    let n = SERIES_TERMS;
    let mut c = Vec::with_capacity(n);
    let mut term = C::new(1.0, 0.0);
    for k in 0..n {
        c.push(term);
        term *= -x / (k as f64 + 1.0);
    }
    let todd = todd_coefficients(n);
    for &w in ws {
        let a: Vec<C> = (0..n).map(|k| todd[k] * w.powi(k as i32 - 1)).collect();
        c = (0..n).map(|k| (0..=k).map(|j| c[j] * a[k - j]).sum()).collect();
    }
    c
}

/// Direct Mellin evaluation; needs `Re x > 0` and `Re w_j > 0`.
fn ln_multi_gamma_mellin(x: C, ws: &[C]) -> C {
    let m = ws.len();
    let wmax = ws.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let t0 = 0.5f64.min(PI / (2.0 * wmax)).min(2.0 / x.norm().max(1e-300));
    let c = laurent_coefficients(x, ws);

    let mut acc = C::new(0.0, 0.0);
    for (n, cn) in c.iter().enumerate().skip(m + 1) {
        let k = (n - m) as i32;
        acc += cn * t0.powi(k) / k as f64;
    }
    for (k, ck) in c.iter().enumerate().take(m) {
        let e = k as i32 - m as i32;
        acc += ck * t0.powi(e) / e as f64;
    }
    acc += c[m] * (t0.ln() + EULER_GAMMA);

    let g = |t: f64| {
        let mut den = C::new(1.0, 0.0);
        for &w in ws {
            den *= -expm1(-w * t);
        }
        (-x * t).exp() / (den * t)
    };
    let width = 2.0 / (1.0 + x.im.abs());
    acc + quad::tail(&g, t0, width.min(1.0), 1e-18)
}

/// `ln Gamma_m(x | w_1, ..., w_m)` for real-positive-part periods.
///
/// Arguments with small real part are first moved right by
/// `Gamma_m(x | w) = Gamma_m(x + w_1 | w) Gamma_{m-1}(x | w_2, ...)`.
pub fn ln_multi_gamma(x: C, ws: &[C]) -> Result<C> {
    match ws {
        [] => Ok(-(x.ln())),
        [w] => ln_gamma1(x, *w),
        _ => {
            if ws.iter().any(|w| !(w.re > 0.0)) {
                return domain("multiple Gamma periods must have positive real part");
            }
            let mut acc = C::new(0.0, 0.0);
            let mut y = x;
            let mut steps = 0;
            while y.re < 1.0 {
                acc += ln_multi_gamma(y, &ws[1..])?;
                y += ws[0];
                steps += 1;
                if steps > 100_000 {
                    return Err(Error::Domain(format!("multiple Gamma argument {x} too far left")));
                }
            }
            Ok(acc + ln_multi_gamma_mellin(y, ws))
        }
    }
}

pub fn ln_gamma2(x: C, w1: C, w2: C) -> Result<C> {
    ln_multi_gamma(x, &[w1, w2])
}

pub fn gamma2(x: C, w1: C, w2: C) -> Result<C> {
    Ok(ln_gamma2(x, w1, w2)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn gamma1_shift_law() {
        let (x, w) = (c(0.8, 0.0), c(2.0, 0.0));
        let lhs = gamma1(x + w, w).unwrap();
        let rhs = x * gamma1(x, w).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn gamma1_at_period() {
        let w = c(2.0, 0.0);
        let want = (2.0 / (2.0 * PI)).sqrt();
        assert!((gamma1(w, w).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn gamma1_ratio_reduces_to_gamma_ratio() {
        use crate::specfun::cgamma;
        let x = c(0.0, 0.4 / PI);
        let w = c(2.0, 0.0);
        let lhs = gamma1(x, w).unwrap() * gamma1(x + 2.0, w).unwrap() / gamma1(x + 1.0, w).unwrap().powi(2);
        let rhs = cgamma(x / 2.0).unwrap() * cgamma(x / 2.0 + 1.0).unwrap() / cgamma(x / 2.0 + 0.5).unwrap().powi(2);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn balanced_matches_plain_gamma1() {
        let (a, w) = (c(1.7, 0.3), c(4.5, 0.0));
        let direct = 2.0 * ln_gamma1(a, w).unwrap() - ln_gamma1(a + 1.0, w).unwrap() - ln_gamma1(a - 1.0, w).unwrap();
        assert!((ln_gamma1_balanced(a, w).unwrap().exp() - direct.exp()).norm() < 1e-13);
    }

    #[test]
    fn todd_coefficients_against_bernoulli() {
        let a = todd_coefficients(8);
        // B2/2! = 1/12, -B4/4! sign folded: a4 = -1/720, a6 = 1/30240
        assert!((a[2] - 1.0 / 12.0).abs() < 1e-16);
        assert!((a[4] + 1.0 / 720.0).abs() < 1e-18);
        assert!((a[6] - 1.0 / 30240.0).abs() < 1e-19);
        assert_eq!(a[3], 0.0);
    }

    #[test]
    fn mellin_route_reproduces_gamma1() {
        // the one-period Mellin evaluation is independent of the closed form
        for (x, w) in [(c(0.8, 0.3), c(2.5, 0.0)), (c(3.0, -1.0), c(1.0, 0.0))] {
            let a = ln_multi_gamma_mellin(x, &[w]);
            let b = ln_gamma1(x, w).unwrap();
            assert!((a.exp() - b.exp()).norm() < 1e-12 * b.exp().norm(), "{a} vs {b}");
        }
    }

    #[test]
    fn gamma2_shift_law() {
        let (w1, w2) = (c(3.0, 0.0), c(2.0, 0.0));
        for x in [c(0.8, 0.3), c(2.2, -0.7), c(0.1, 1.5)] {
            let lhs = ln_gamma2(x + w1, w1, w2).unwrap() - ln_gamma2(x, w1, w2).unwrap();
            let rhs = -ln_gamma1(x, w2).unwrap();
            assert!(((lhs - rhs).exp() - 1.0).norm() < 1e-11, "{x}");
        }
    }

    #[test]
    fn gamma2_symmetric_in_periods() {
        let x = c(1.3, 0.4);
        let a = ln_gamma2(x, c(3.0, 0.0), c(2.0, 0.0)).unwrap();
        let b = ln_gamma2(x, c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!(((a - b).exp() - 1.0).norm() < 1e-11);
    }
}
