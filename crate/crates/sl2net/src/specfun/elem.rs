use num_complex::Complex64 as C;

/// `exp(z) - 1` without cancellation near zero.
pub fn expm1(z: C) -> C {
    if z.norm() < 0.5 {
        let mut term = z;
        let mut sum = z;
        let mut n = 1.0;
        while term.norm() > 1e-18 * sum.norm() {
            n += 1.0;
            term *= z / n;
            sum += term;
        }
        sum
    } else {
        z.exp() - 1.0
    }
}

/// `ln(1 + z)` without cancellation near zero (principal branch).
pub fn ln1p(z: C) -> C {
    if z.norm() < 0.5 {
        // ln(1+z) = 2 atanh(u), u = z / (2 + z), |u| <= 1/3
        let u = z / (2.0 + z);
        let u2 = u * u;
        let mut pow = u;
        let mut sum = u;
        let mut k = 1.0;
        loop {
            pow *= u2;
            k += 2.0;
            let t = pow / k;
            sum += t;
            if t.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        2.0 * sum
    } else {
        (1.0 + z).ln()
    }
}

/// Cotangent that stays finite for large imaginary parts.
pub fn cot(z: C) -> C {
    let i = C::i();
    if z.im >= 0.0 {
        let e = (2.0 * i * z).exp();
        i * (e + 1.0) / (e - 1.0)
    } else {
        let e = (-2.0 * i * z).exp();
        i * (1.0 + e) / (1.0 - e)
    }
}

/// `sin(a + b) / sin(a)`, stable when `sin(a)` itself overflows.
pub fn sin_shift_ratio(a: C, b: C) -> C {
    b.cos() + cot(a) * b.sin()
}
