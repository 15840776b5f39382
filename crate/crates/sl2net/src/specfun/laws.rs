//! Functional identities of the special functions, as relative residuals at
//! random arguments.

use super::{ln_gamma1, log_double_sine, ln_theta, qhyper_2phi1, qpoch_multi, TruncationPolicy};
use crate::error::Result;
use num_complex::Complex64 as C;
use rand::Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    /// `Theta(p z) = -Theta(z)/z` and `Theta(1/z) = -Theta(z)/z`.
    ThetaQuasiPeriod,
    /// `Gamma_1(x + w | w) = x Gamma_1(x | w)`.
    Gamma1Shift,
    /// Period symmetry, both shift laws and reflection of `S_2`.
    DoubleSine,
    /// `2phi1(a, b; a; q, z) = (bz; q) / (z; q)`.
    QBinomial,
}

impl Law {
    pub const ALL: [Law; 4] = [Law::ThetaQuasiPeriod, Law::Gamma1Shift, Law::DoubleSine, Law::QBinomial];

    pub fn name(self) -> &'static str {
        match self {
            Law::ThetaQuasiPeriod => "theta_quasi_period",
            Law::Gamma1Shift => "gamma1_shift",
            Law::DoubleSine => "double_sine_laws",
            Law::QBinomial => "q_binomial",
        }
    }
}

/// `|e^{a - b} - 1|`: relative distance of two values given by logarithms
/// (insensitive to the `2 pi i` ambiguity).
fn log_gap(a: C, b: C) -> f64 {
    let d = a - b;
    let d = C::new(d.re, d.im - 2.0 * PI * (d.im / (2.0 * PI)).round());
    (super::expm1(d)).norm()
}

fn polar<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> C {
    C::from_polar(rng.gen_range(lo..hi), rng.gen_range(-PI..PI))
}

/// Draw arguments for `law`; returned as a flat list for reporting.
pub fn sample_args<R: Rng>(law: Law, rng: &mut R) -> Vec<C> {
    match law {
        Law::ThetaQuasiPeriod => vec![polar(rng, 0.05, 0.6), polar(rng, 0.4, 1.6)],
        Law::Gamma1Shift => vec![
            C::new(rng.gen_range(0.2..6.0), rng.gen_range(-3.0..3.0)),
            C::new(rng.gen_range(0.5..4.0), 0.0),
        ],
        Law::DoubleSine => {
            let w1 = rng.gen_range(1.0..4.0);
            let w2 = rng.gen_range(1.0..4.0);
            let x = C::new(rng.gen_range(0.2..(w1 + w2 - 0.2)), rng.gen_range(-1.0..1.0));
            vec![x, C::new(w1, 0.0), C::new(w2, 0.0)]
        }
        Law::QBinomial => vec![polar(rng, 0.1, 0.9), polar(rng, 0.1, 0.9), polar(rng, 0.1, 0.7), polar(rng, 0.05, 0.8)],
    }
}

/// Largest relative residual of the law's identities at `args`.
pub fn law_residual(law: Law, args: &[C], pol: &TruncationPolicy) -> Result<f64> {
    match law {
        Law::ThetaQuasiPeriod => {
            let (p, z) = (args[0], args[1]);
            let base = ln_theta(p, z, pol)? + (-1.0 / z).ln();
            Ok(log_gap(ln_theta(p, p * z, pol)?, base).max(log_gap(ln_theta(p, z.inv(), pol)?, base)))
        }
        Law::Gamma1Shift => {
            let (x, w) = (args[0], args[1]);
            Ok(log_gap(ln_gamma1(x + w, w)?, ln_gamma1(x, w)? + x.ln()))
        }
        Law::DoubleSine => {
            let (x, w1, w2) = (args[0], args[1], args[2]);
            let s = log_double_sine(x, w1, w2)?;
            let sym = log_gap(log_double_sine(x, w2, w1)?, s);
            let sh1 = log_gap(log_double_sine(x + w1, w1, w2)?, s - (2.0 * (PI * x / w2).sin()).ln());
            let sh2 = log_gap(log_double_sine(x + w2, w1, w2)?, s - (2.0 * (PI * x / w1).sin()).ln());
            let refl = log_gap(log_double_sine(w1 + w2 - x, w1, w2)?, -s);
            Ok(sym.max(sh1).max(sh2).max(refl))
        }
        Law::QBinomial => {
            let (a, b, z, q) = (args[0], args[1], args[2], args[3]);
            let lhs = qhyper_2phi1(a, b, a, q, z, pol)?;
            let rhs = qpoch_multi(b * z, &[q], pol)? / qpoch_multi(z, &[q], pol)?;
            Ok((lhs - rhs).norm() / rhs.norm().max(1.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn laws_hold_at_random_points() {
        let pol = TruncationPolicy::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for law in Law::ALL {
            for _ in 0..10 {
                let args = sample_args(law, &mut rng);
                let r = law_residual(law, &args, &pol).unwrap();
                assert!(r < 1e-10, "{} at {args:?}: {r}", law.name());
            }
        }
    }

    #[test]
    fn log_gap_ignores_branch() {
        assert!(log_gap(C::new(1.0, 2.0 * PI), C::new(1.0, 0.0)) < 1e-15);
        assert!((log_gap(C::new(0.1, 0.0), C::new(0.0, 0.0)) - (0.1f64.exp() - 1.0)).abs() < 1e-15);
    }
}
