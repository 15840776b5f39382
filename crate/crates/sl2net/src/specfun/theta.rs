use super::qpoch::{ln_qpoch, qpoch_multi};
use super::TruncationPolicy;
use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C;

fn check(p: C, z: C) -> Result<()> {
    if !(p.norm() < 1.0) {
        return domain(format!("theta nome {p} must have modulus < 1"));
    }
    if z == C::new(0.0, 0.0) && p != C::new(0.0, 0.0) {
        return domain("theta argument must be nonzero");
    }
    Ok(())
}

/// `Theta_p(z) = (z;p)(p/z;p)(p;p)`, with `Theta_0(z) = 1 - z`.
pub fn theta(p: C, z: C, policy: &TruncationPolicy) -> Result<C> {
    check(p, z)?;
    if p == C::new(0.0, 0.0) {
        return Ok(1.0 - z);
    }
    let b = [p];
    Ok(qpoch_multi(z, &b, policy)? * qpoch_multi(p / z, &b, policy)? * qpoch_multi(p, &b, policy)?)
}

/// A logarithm of `Theta_p(z)` (modulo `2 pi i`), finite even where the
/// product itself underflows.
pub fn ln_theta(p: C, z: C, policy: &TruncationPolicy) -> Result<C> {
    check(p, z)?;
    if p == C::new(0.0, 0.0) {
        if z == C::new(1.0, 0.0) {
            return Err(Error::Singular("theta zero at z = 1".into()));
        }
        return Ok((1.0 - z).ln());
    }
    Ok(ln_qpoch(z, p, policy)? + ln_qpoch(p / z, p, policy)? + ln_qpoch(p, p, policy)?)
}

/// `prod Theta_p(nums) / prod Theta_p(dens)`, accumulated in log space.
///
/// A numerator on a theta zero gives 0; a denominator on one is a domain error.
pub fn theta_quotient(p: C, nums: &[C], dens: &[C], policy: &TruncationPolicy) -> Result<C> {
    let mut acc = C::new(0.0, 0.0);
    for &z in dens {
        match ln_theta(p, z, policy) {
            Ok(v) => acc -= v,
            Err(Error::Singular(_)) => return domain(format!("theta zero in a denominator at {z}")),
            Err(e) => return Err(e),
        }
    }
    for &z in nums {
        match ln_theta(p, z, policy) {
            Ok(v) => acc += v,
            Err(Error::Singular(_)) => return Ok(C::new(0.0, 0.0)),
            Err(e) => return Err(e),
        }
    }
    Ok(acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn vanishes_at_one() {
        assert_eq!(theta(C::new(0.1, 0.0), C::new(1.0, 0.0), &pol()).unwrap().norm(), 0.0);
    }

    #[test]
    fn triple_product_oracle() {
        let (p, z) = (0.1f64, 0.5f64);
        let mut want = 1.0;
        for n in 0..64 {
            let pn = p.powi(n);
            want *= (1.0 - z * pn) * (1.0 - p / z * pn) * (1.0 - p * pn);
        }
        let got = theta(C::new(p, 0.0), C::new(z, 0.0), &pol()).unwrap();
        assert!((got.re - want).abs() < 1e-15);
    }

    #[test]
    fn shift_law_at_sample_point() {
        let (p, z) = (C::new(0.2, 0.0), C::new(0.7, 0.1));
        let lhs = theta(p, p * z, &pol()).unwrap();
        let rhs = -theta(p, z, &pol()).unwrap() / z;
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn degenerates_to_linear_factor() {
        let z = C::new(0.4, -0.3);
        assert_eq!(theta(C::new(0.0, 0.0), z, &pol()).unwrap(), 1.0 - z);
        let mut prev = f64::INFINITY;
        for k in 2..8 {
            let p = C::new(10f64.powi(-k), 0.0);
            let d = (theta(p, z, &pol()).unwrap() - (1.0 - z)).norm();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(theta(C::new(1.0, 0.0), C::new(0.5, 0.0), &pol()), Err(Error::Domain(_))));
        assert!(matches!(theta(C::new(0.3, 0.0), C::new(0.0, 0.0), &pol()), Err(Error::Domain(_))));
    }

    #[test]
    fn quotient_zeros_and_poles() {
        let p = C::new(0.3, 0.0);
        let one = C::new(1.0, 0.0);
        assert_eq!(theta_quotient(p, &[one], &[C::new(0.5, 0.0)], &pol()).unwrap(), C::new(0.0, 0.0));
        assert!(matches!(theta_quotient(p, &[C::new(0.5, 0.0)], &[p], &pol()), Err(Error::Domain(_))));
    }

    #[test]
    fn log_quotient_survives_underflow() {
        // near |p| -> 1 the squared thetas underflow while their quotient does not
        let p = C::new(0.996, 0.0);
        let (a, b) = (C::new(0.3, 0.1), C::new(0.35, 0.1));
        assert_eq!(theta(p, a, &pol()).unwrap().powi(2), C::new(0.0, 0.0));
        // shift law squared: Theta(pa)^2 / Theta(a)^2 = a^{-2}
        let q = theta_quotient(p, &[p * a, p * a], &[a, a], &pol()).unwrap();
        assert!((q - 1.0 / (a * a)).norm() < 1e-10);
        let p = C::new(0.5, 0.0);
        let direct = theta(p, a, &pol()).unwrap() / theta(p, b, &pol()).unwrap();
        assert!((theta_quotient(p, &[a], &[b], &pol()).unwrap() - direct).norm() < 1e-14);
    }
}
