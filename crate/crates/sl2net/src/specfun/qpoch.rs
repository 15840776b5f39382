use super::TruncationPolicy;
use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C;

fn check_bases(bases: &[C]) -> Result<()> {
    for b in bases {
        if !(b.norm() < 1.0) {
            return domain(format!("q-product base {b} must have modulus < 1"));
        }
    }
    Ok(())
}

/// Multi-base infinite product `(z; p1, ..., pm)_inf = prod (1 - z p1^n1 ... pm^nm)`.
///
/// With no bases the product has the single factor `1 - z`.
pub fn qpoch_multi(z: C, bases: &[C], policy: &TruncationPolicy) -> Result<C> {
    check_bases(bases)?;
    nested(z, bases, policy)
}

fn nested(z: C, bases: &[C], policy: &TruncationPolicy) -> Result<C> {
    let Some((&p, rest)) = bases.split_first() else {
        return Ok(1.0 - z);
    };
    let mut acc = C::new(1.0, 0.0);
    let mut t = z;
    for _ in 0..policy.max_terms {
        if t.norm() < policy.term_tolerance {
            return Ok(acc);
        }
        acc *= nested(t, rest, policy)?;
        t *= p;
    }
    if t.norm() < policy.term_tolerance {
        return Ok(acc);
    }
    Err(Error::Truncation {
        what: "q-Pochhammer product",
        terms: policy.max_terms,
        partial: acc,
    })
}

/// `ln (z; p)_inf` as a sum of principal logarithms.
///
/// Agrees with the log of [`qpoch_multi`] modulo `2 pi i`; used where the
/// plain product would underflow.
pub fn ln_qpoch(z: C, p: C, policy: &TruncationPolicy) -> Result<C> {
    check_bases(&[p])?;
    let mut acc = C::new(0.0, 0.0);
    let mut t = z;
    for _ in 0..policy.max_terms {
        if t.norm() < policy.term_tolerance {
            return Ok(acc);
        }
        if t == C::new(1.0, 0.0) {
            return Err(Error::Singular("q-Pochhammer product has a zero factor".into()));
        }
        acc += super::ln1p(-t);
        t *= p;
    }
    if t.norm() < policy.term_tolerance {
        return Ok(acc);
    }
    Err(Error::Truncation {
        what: "log q-Pochhammer sum",
        terms: policy.max_terms,
        partial: acc,
    })
}

/// Finite product `(x; q)_n = prod_{k<n} (1 - x q^k)`.
pub fn qpoch_finite(x: C, q: C, n: usize) -> C {
    let mut acc = C::new(1.0, 0.0);
    let mut t = x;
    for _ in 0..n {
        acc *= 1.0 - t;
        t *= q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(qpoch_multi(C::new(0.0, 0.0), &[C::new(0.5, 0.0)], &pol()).unwrap(), C::new(1.0, 0.0));
        let v = qpoch_multi(C::new(0.5, 0.0), &[C::new(0.0, 0.0)], &pol()).unwrap();
        assert!((v - 0.5).norm() < 1e-16);
    }

    #[test]
    fn matches_64_term_direct_product() {
        // oracle: explicit loop over 64 factors
        let mut want = 1.0f64;
        for n in 0..64 {
            want *= 1.0 - 0.3 * 0.1f64.powi(n);
        }
        let got = qpoch_multi(C::new(0.3, 0.0), &[C::new(0.1, 0.0)], &pol()).unwrap();
        assert!((got.re - want).abs() < 1e-15 && got.im == 0.0);
        assert!((got.re - 0.676_737_352_504_656).abs() < 1e-14);
    }

    #[test]
    fn finite_products() {
        let (x, q) = (C::new(0.7, 0.0), C::new(0.3, 0.0));
        assert_eq!(qpoch_finite(x, q, 0), C::new(1.0, 0.0));
        assert!((qpoch_finite(x, q, 1) - 0.3).norm() < 1e-15);
        let want = (1.0 - 0.2) * (1.0 - 0.1) * (1.0 - 0.05);
        assert!((qpoch_finite(C::new(0.2, 0.0), C::new(0.5, 0.0), 3) - want).norm() < 1e-15);
    }

    #[test]
    fn rejects_unit_base() {
        assert!(matches!(
            qpoch_multi(C::new(0.1, 0.0), &[C::new(1.0, 0.0)], &pol()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn truncation_error_carries_partial() {
        let tight = TruncationPolicy::new(3, 1e-15).unwrap();
        match qpoch_multi(C::new(0.5, 0.0), &[C::new(0.9, 0.0)], &tight) {
            Err(Error::Truncation { partial, terms, .. }) => {
                assert_eq!(terms, 3);
                assert!((partial - 0.5 * 0.55 * 0.595).norm() < 1e-12);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn log_form_matches_product() {
        let (z, p) = (C::new(0.4, 0.3), C::new(0.6, 0.1));
        let a = qpoch_multi(z, &[p], &pol()).unwrap();
        let b = ln_qpoch(z, p, &pol()).unwrap().exp();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn two_base_product_is_symmetric() {
        let (z, a, b) = (C::new(0.3, -0.2), C::new(0.4, 0.1), C::new(-0.2, 0.5));
        let x = qpoch_multi(z, &[a, b], &pol()).unwrap();
        let y = qpoch_multi(z, &[b, a], &pol()).unwrap();
        assert!((x - y).norm() < 1e-14);
    }
}
