use super::elem::ln1p;
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn is_pole(x: C) -> bool {
    x.im == 0.0 && x.re <= 0.0 && x.re == x.re.round()
}

/// Lanczos log-Gamma, valid for `Re x >= 1/2`.
fn ln_gamma_right(x: C) -> C {
    let z = x - 1.0;
    let mut a = C::new(LANCZOS[0], 0.0);
    for (k, &ck) in LANCZOS.iter().enumerate().skip(1) {
        a += ck / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// `ln sin(z)` that does not overflow for large `|Im z|`; defined modulo `2 pi i`.
pub(crate) fn ln_sin(z: C) -> C {
    let i = C::i();
    if z.im.abs() < 1.0 {
        return z.sin().ln();
    }
    if z.im > 0.0 {
        // sin z = e^{-iz} (1 - e^{2iz}) / (-2i)
        -i * z + ln1p(-(2.0 * i * z).exp()) - C::new(0.0, -2.0).ln()
    } else {
        // sin z = e^{iz} (1 - e^{-2iz}) / (2i)
        i * z + ln1p(-(-2.0 * i * z).exp()) - C::new(0.0, 2.0).ln()
    }
}

/// A logarithm of Gamma. Equal to the principal log-Gamma for `Re x >= 1/2`;
/// across the reflection it is correct modulo `2 pi i`.
pub fn ln_gamma(x: C) -> Result<C> {
    if is_pole(x) {
        return Err(Error::Pole(format!("Gamma has a pole at {x}")));
    }
    if x.re >= 0.5 {
        Ok(ln_gamma_right(x))
    } else {
        Ok(C::new(PI.ln(), 0.0) - ln_sin(PI * x) - ln_gamma_right(1.0 - x))
    }
}

/// Complex Gamma function (Lanczos, g = 7, with reflection).
pub fn cgamma(x: C) -> Result<C> {
    if is_pole(x) {
        return Err(Error::Pole(format!("Gamma has a pole at {x}")));
    }
    if x.re >= 0.5 {
        Ok(ln_gamma_right(x).exp())
    } else {
        Ok(PI / ((PI * x).sin() * ln_gamma_right(1.0 - x).exp()))
    }
}

// Stirling tail coefficients B_{2k} / (2k (2k-1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling_tail(z: C) -> C {
    let zi = z.inv();
    let z2 = zi * zi;
    let mut pow = zi;
    let mut acc = C::new(0.0, 0.0);
    for c in STIRLING {
        acc += c * pow;
        pow *= z2;
    }
    acc
}

/// `ln[ Gamma(u)^2 / (Gamma(u+h) Gamma(u-h)) ]`, accurate when `h/u` is small
/// or `|u|` is huge (where the individual log-Gammas lose all digits).
pub fn ln_gamma_balanced(u: C, h: C) -> Result<C> {
    for x in [u, u + h, u - h] {
        if is_pole(x) {
            return Err(Error::Pole(format!("Gamma has a pole at {x}")));
        }
    }
    const BIG: f64 = 30.0;
    let mut acc = C::new(0.0, 0.0);
    let mut v = u;
    let mut steps = 0usize;
    // ratio(u) = ratio(u+1) (u+h)(u-h)/u^2
    while v.norm() < BIG || v.re < 0.0 {
        acc += ln1p(-(h / v) * (h / v));
        v += 1.0;
        steps += 1;
        if steps > 1_000_000 {
            return Err(Error::Domain(format!("balanced log-Gamma: argument {u} too far left")));
        }
    }
    let lp = ln1p(h / v);
    let lm = ln1p(-h / v);
    let main = -((v + h - 0.5) * lp + (v - h - 0.5) * lm);
    let tail = 2.0 * stirling_tail(v) - stirling_tail(v + h) - stirling_tail(v - h);
    Ok(acc + main + tail)
}
