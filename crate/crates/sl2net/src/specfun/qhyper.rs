use super::TruncationPolicy;
use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C;

/// Basic hypergeometric series
/// `2phi1(a, b; c; q, z) = sum (a;q)_n (b;q)_n / ((c;q)_n (q;q)_n) z^n`.
pub fn qhyper_2phi1(a: C, b: C, c: C, q: C, z: C, policy: &TruncationPolicy) -> Result<C> {
    if !(q.norm() < 1.0) {
        return domain(format!("2phi1 base {q} must have modulus < 1"));
    }
    if !(z.norm() < 1.0) {
        return domain(format!("2phi1 argument {z} outside the disc of convergence"));
    }
    let mut sum = C::new(1.0, 0.0);
    let mut term = C::new(1.0, 0.0);
    let mut qn = C::new(1.0, 0.0);
    for _ in 0..policy.max_terms {
        let den = (1.0 - c * qn) * (1.0 - q * qn);
        if den.norm() < 1e-300 {
            return domain("2phi1 lower parameter of the form q^{-n}");
        }
        term *= (1.0 - a * qn) * (1.0 - b * qn) / den * z;
        sum += term;
        qn *= q;
        if term.norm() <= policy.term_tolerance * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::Truncation {
        what: "2phi1 series",
        terms: policy.max_terms,
        partial: sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::qpoch_multi;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn zero_argument() {
        let v = qhyper_2phi1(r(0.3), r(0.7), r(0.5), r(0.4), r(0.0), &TruncationPolicy::default()).unwrap();
        assert_eq!(v, r(1.0));
    }

    #[test]
    fn q_binomial_case() {
        let pol = TruncationPolicy::default();
        let (b, q, z) = (r(0.2), r(0.4), r(0.5));
        let lhs = qhyper_2phi1(r(0.3), b, r(0.3), q, z, &pol).unwrap();
        let rhs = qpoch_multi(b * z, &[q], &pol).unwrap() / qpoch_multi(z, &[q], &pol).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn generic_against_partial_sum() {
        // oracle: 40-term partial sum with explicit finite products
        let (a, b, c, q, z) = (0.3f64, 0.7f64, 0.5f64, 0.4f64, 0.2f64);
        let fin = |x: f64, n: i32| (0..n).map(|k| 1.0 - x * q.powi(k)).product::<f64>();
        let want: f64 = (0..40)
            .map(|n| fin(a, n) * fin(b, n) / (fin(c, n) * fin(q, n)) * z.powi(n))
            .sum();
        let got = qhyper_2phi1(r(a), r(b), r(c), r(q), r(z), &TruncationPolicy::default()).unwrap();
        assert!((got.re - want).abs() < 1e-12);
    }

    #[test]
    fn divergent_parameters() {
        let pol = TruncationPolicy::default();
        assert!(matches!(qhyper_2phi1(r(0.1), r(0.1), r(0.1), r(1.2), r(0.1), &pol), Err(Error::Domain(_))));
        assert!(matches!(qhyper_2phi1(r(0.1), r(0.1), r(0.1), r(0.5), r(1.5), &pol), Err(Error::Domain(_))));
        // c = q^{-1}
        assert!(matches!(qhyper_2phi1(r(0.1), r(0.1), r(2.0), r(0.5), r(0.3), &pol), Err(Error::Domain(_))));
    }
}
