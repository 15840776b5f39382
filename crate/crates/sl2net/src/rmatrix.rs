//! Catalog of evaluated spin-1/2 R-matrices, each split as scalar normalization
//! times a core matrix.

use crate::error::{domain, Error, Result};
use crate::linalg::{c, face4, re, sym8, Mat4, C, ONE, ZERO};
use crate::specfun::{
    ln_gamma1_balanced, ln_qpoch, log_double_sine, sin_shift_ratio, theta_quotient, TruncationPolicy,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Shift unit of the dynamical parameter per unit of spin-1/2 weight.
pub const DYNAMICAL_DELTA: f64 = 1.0;
/// Sign relating the weight of basis index 0 (+1) to the direction of the shift.
pub const DYNAMICAL_SIGN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    Q,
    P,
    Z,
    W,
    Beta,
    R,
    S,
}

impl Param {
    pub const ALL: [Param; 7] = [Param::Q, Param::P, Param::Z, Param::W, Param::Beta, Param::R, Param::S];

    pub fn name(self) -> &'static str {
        match self {
            Param::Q => "q",
            Param::P => "p",
            Param::Z => "z",
            Param::W => "w",
            Param::Beta => "beta",
            Param::R => "r",
            Param::S => "s",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }
}

/// Parameter bag; every field is optional and nothing is derived implicitly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<C>,
}

impl ParamPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, p: Param) -> Option<C> {
        match p {
            Param::Q => self.q,
            Param::P => self.p,
            Param::Z => self.z,
            Param::W => self.w,
            Param::Beta => self.beta,
            Param::R => self.r,
            Param::S => self.s,
        }
    }

    pub fn set(&mut self, p: Param, v: C) {
        let slot = match p {
            Param::Q => &mut self.q,
            Param::P => &mut self.p,
            Param::Z => &mut self.z,
            Param::W => &mut self.w,
            Param::Beta => &mut self.beta,
            Param::R => &mut self.r,
            Param::S => &mut self.s,
        };
        *slot = Some(v);
    }

    pub fn with(mut self, p: Param, v: C) -> Self {
        self.set(p, v);
        self
    }

    pub fn require(&self, p: Param) -> Result<C> {
        self.get(p)
            .ok_or_else(|| Error::Config(format!("missing parameter {}", p.name())))
    }

    /// Set the spectral parameter of the given kind (no-op for constant entries).
    pub fn with_spectral(self, kind: Spectral, x: C) -> Self {
        match kind.param() {
            Some(p) => self.with(p, x),
            None => self,
        }
    }

    pub fn spectral(&self, kind: Spectral) -> Option<C> {
        kind.param().and_then(|p| self.get(p))
    }

    pub fn q(self, v: C) -> Self {
        self.with(Param::Q, v)
    }
    pub fn p(self, v: C) -> Self {
        self.with(Param::P, v)
    }
    pub fn z(self, v: C) -> Self {
        self.with(Param::Z, v)
    }
    pub fn w(self, v: C) -> Self {
        self.with(Param::W, v)
    }
    pub fn beta(self, v: C) -> Self {
        self.with(Param::Beta, v)
    }
    pub fn r(self, v: C) -> Self {
        self.with(Param::R, v)
    }
    pub fn s(self, v: C) -> Self {
        self.with(Param::S, v)
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in Param::ALL {
            if let Some(v) = self.get(p) {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{}={}", p.name(), v)?;
            }
        }
        Ok(())
    }
}

/// How an entry depends on its spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spectral {
    /// `z`, composed by multiplication and reflected by inversion.
    Multiplicative,
    /// `beta`, composed by addition and reflected by negation.
    Additive,
    /// No spectral dependence.
    Constant,
}

impl Spectral {
    pub fn param(self) -> Option<Param> {
        match self {
            Spectral::Multiplicative => Some(Param::Z),
            Spectral::Additive => Some(Param::Beta),
            Spectral::Constant => None,
        }
    }

    pub fn compose(self, a: C, b: C) -> C {
        match self {
            Spectral::Multiplicative => a * b,
            _ => a + b,
        }
    }

    pub fn reflect(self, a: C) -> C {
        match self {
            Spectral::Multiplicative => a.inv(),
            _ => -a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraId {
    Aqp,
    UqVertex,
    UqFace,
    DYrV8,
    DYrV6,
    DY,
    Bqpl,
    UqLambda,
    DYrs,
    DYs,
    DYrsMinusInf,
    DYrF,
    UqLambdaGamma,
    AqpPi,
    AhbarEtaPi,
    FiniteUq,
    FiniteBql,
    FiniteUs,
    FiniteClassical,
}

impl AlgebraId {
    pub const ALL: [AlgebraId; 19] = [
        AlgebraId::Aqp,
        AlgebraId::UqVertex,
        AlgebraId::UqFace,
        AlgebraId::DYrV8,
        AlgebraId::DYrV6,
        AlgebraId::DY,
        AlgebraId::Bqpl,
        AlgebraId::UqLambda,
        AlgebraId::DYrs,
        AlgebraId::DYs,
        AlgebraId::DYrsMinusInf,
        AlgebraId::DYrF,
        AlgebraId::UqLambdaGamma,
        AlgebraId::AqpPi,
        AlgebraId::AhbarEtaPi,
        AlgebraId::FiniteUq,
        AlgebraId::FiniteBql,
        AlgebraId::FiniteUs,
        AlgebraId::FiniteClassical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgebraId::Aqp => "Aqp",
            AlgebraId::UqVertex => "UqVertex",
            AlgebraId::UqFace => "UqFace",
            AlgebraId::DYrV8 => "DYrV8",
            AlgebraId::DYrV6 => "DYrV6",
            AlgebraId::DY => "DY",
            AlgebraId::Bqpl => "Bqpl",
            AlgebraId::UqLambda => "UqLambda",
            AlgebraId::DYrs => "DYrs",
            AlgebraId::DYs => "DYs",
            AlgebraId::DYrsMinusInf => "DYrsMinusInf",
            AlgebraId::DYrF => "DYrF",
            AlgebraId::UqLambdaGamma => "UqLambdaGamma",
            AlgebraId::AqpPi => "AqpPi",
            AlgebraId::AhbarEtaPi => "AhbarEtaPi",
            AlgebraId::FiniteUq => "FiniteUq",
            AlgebraId::FiniteBql => "FiniteBql",
            AlgebraId::FiniteUs => "FiniteUs",
            AlgebraId::FiniteClassical => "FiniteClassical",
        }
    }

    pub fn from_name(s: &str) -> Option<AlgebraId> {
        AlgebraId::ALL.into_iter().find(|a| a.name() == s)
    }

    /// Short family tag used in listings and reports.
    pub fn family(self) -> &'static str {
        use AlgebraId::*;
        match self {
            Aqp | UqVertex | DYrV8 | DYrV6 | DY => "vertex",
            Bqpl | UqLambda | UqFace | DYrs | DYs | DYrsMinusInf | DYrF | UqLambdaGamma => "face",
            AqpPi | AhbarEtaPi => "face/pi",
            FiniteUq | FiniteBql | FiniteUs | FiniteClassical => "finite",
        }
    }

    pub fn spectral(self) -> Spectral {
        use AlgebraId::*;
        match self {
            Aqp | UqVertex | UqFace | Bqpl | UqLambda | UqLambdaGamma | AqpPi => Spectral::Multiplicative,
            DYrV8 | DYrV6 | DY | DYrs | DYs | DYrsMinusInf | DYrF | AhbarEtaPi => Spectral::Additive,
            FiniteUq | FiniteBql | FiniteUs | FiniteClassical => Spectral::Constant,
        }
    }

    /// The dynamical parameter, if the entry has one.
    pub fn dynamical(self) -> Option<Param> {
        use AlgebraId::*;
        match self {
            Bqpl | UqLambda | AqpPi | FiniteBql => Some(Param::W),
            DYrs | DYs | DYrsMinusInf | UqLambdaGamma | AhbarEtaPi | FiniteUs => Some(Param::S),
            _ => None,
        }
    }

    pub fn is_dynamical(self) -> bool {
        self.dynamical().is_some()
    }

    pub fn is_finite(self) -> bool {
        self.family() == "finite"
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The exact parameter set consumed by [`eval_r`].
pub fn required_params(id: AlgebraId) -> &'static [Param] {
    use AlgebraId::*;
    use Param::*;
    match id {
        Aqp => &[Z, Q, P],
        UqVertex | UqFace => &[Z, Q],
        DYrV8 | DYrV6 | DYrF => &[Beta, R],
        DY => &[Beta],
        Bqpl => &[Z, Q, P, W],
        UqLambda => &[Z, Q, W],
        DYrs | DYrsMinusInf | AhbarEtaPi => &[Beta, R, S],
        DYs => &[Beta, S],
        UqLambdaGamma => &[Z, R, S],
        AqpPi => &[Z, Q, P, W, R],
        FiniteUq => &[Q],
        FiniteBql => &[Q, W],
        FiniteUs => &[S],
        FiniteClassical => &[],
    }
}

/// Evaluated matrix: `full = scalar_norm * core`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RMatrixValue {
    pub algebra: AlgebraId,
    pub params: ParamPoint,
    pub scalar_norm: C,
    /// Set when the normalization could not be evaluated (pole, divergent product).
    pub scalar_singular: bool,
    pub core: Mat4,
}

impl RMatrixValue {
    pub fn full(&self) -> Result<Mat4> {
        if self.scalar_singular {
            return Err(Error::Singular(format!(
                "{} normalization is singular at {}",
                self.algebra, self.params
            )));
        }
        Ok(self.core * self.scalar_norm)
    }
}

fn check_params(id: AlgebraId, pt: &ParamPoint) -> Result<()> {
    for &p in required_params(id) {
        pt.require(p)?;
    }
    if let Some(p) = pt.p {
        if !(p.norm() < 1.0) {
            return domain(format!("elliptic nome p={p} must satisfy |p| < 1"));
        }
    }
    if let Some(r) = pt.r {
        if r == ZERO {
            return domain("r must be nonzero");
        }
    }
    Ok(())
}

/// Core matrix only (no normalization); cheaper than [`eval_r`].
pub fn eval_core(id: AlgebraId, pt: &ParamPoint, policy: &TruncationPolicy) -> Result<Mat4> {
    check_params(id, pt)?;
    let m = core_unchecked(id, pt, policy)?;
    if !crate::linalg::is_finite4(&m) {
        return domain(format!("{id} core is not finite at {pt}"));
    }
    Ok(m)
}

/// Full evaluation with the normalization split off.
pub fn eval_r(id: AlgebraId, pt: &ParamPoint, policy: &TruncationPolicy) -> Result<RMatrixValue> {
    let core = eval_core(id, pt, policy)?;
    let (scalar_norm, scalar_singular) = match scalar_unchecked(id, pt, policy) {
        Ok(v) if v.re.is_finite() && v.im.is_finite() && v != ZERO => (v, false),
        Err(e @ Error::Config(_)) => return Err(e),
        _ => (c(f64::NAN, f64::NAN), true),
    };
    Ok(RMatrixValue {
        algebra: id,
        params: *pt,
        scalar_norm,
        scalar_singular,
        core,
    })
}

fn sinc_ratio(beta: C, r: C) -> C {
    // sin(i beta / r) / sin((pi + i beta) / r)
    let ib = C::i() * beta;
    (ib / r).sin() / ((PI + ib) / r).sin()
}

fn crossing_weight(beta: C, r: C) -> C {
    // sin(pi / r) / sin((pi + i beta) / r)
    (PI / r).sin() / ((PI + C::i() * beta) / r).sin()
}

/// `(c, cbar)` shared by the trigonometric dynamical cores.
fn dyn_trig_offdiag(beta: C, r: C, s: C) -> Result<(C, C)> {
    let a = PI * s / r;
    if a.sin().norm() < 1e-14 && a.im.abs() < 1.0 {
        return domain(format!("s={s} sits on a pole of 1/sin(pi s/r)"));
    }
    let ib = C::i() * beta;
    let w = crossing_weight(beta, r);
    Ok((sin_shift_ratio(a, ib / r) * w, sin_shift_ratio(a, -ib / r) * w))
}

fn core_unchecked(id: AlgebraId, pt: &ParamPoint, pol: &TruncationPolicy) -> Result<Mat4> {
    use AlgebraId::*;
    let g = |p: Param| pt.require(p);
    Ok(match id {
        Aqp => core_aqp(g(Param::Z)?, g(Param::Q)?, g(Param::P)?, pol)?,
        UqVertex => {
            let (z, q) = (g(Param::Z)?, g(Param::Q)?);
            let den = 1.0 - q * q * z * z;
            let b = q * (1.0 - z * z) / den;
            let cc = z * (1.0 - q * q) / den;
            face4(ONE, b, cc, cc, b, ONE)
        }
        UqFace => {
            let (z, q) = (g(Param::Z)?, g(Param::Q)?);
            let den = 1.0 - q * q * z;
            let b = q * (1.0 - z) / den;
            face4(ONE, b, (1.0 - q * q) / den, z * (1.0 - q * q) / den, b, ONE)
        }
        DYrV8 => {
            let (beta, r) = (g(Param::Beta)?, g(Param::R)?);
            let ib = C::i() * beta;
            let (h, hp) = (ib / (2.0 * r), PI / (2.0 * r));
            let k = (PI + ib) / (2.0 * r);
            let a = h.cos() * hp.cos() / k.cos();
            let d = -h.sin() * hp.sin() / k.cos();
            let b = h.sin() * hp.cos() / k.sin();
            let cc = h.cos() * hp.sin() / k.sin();
            sym8(a, b, cc, d)
        }
        DYrV6 => {
            let (beta, r) = (g(Param::Beta)?, g(Param::R)?);
            let b = sinc_ratio(beta, r);
            let cc = crossing_weight(beta, r);
            face4(ONE, b, cc, cc, b, ONE)
        }
        DY => {
            let ib = C::i() * g(Param::Beta)?;
            let d = ib + PI;
            face4(ONE, ib / d, PI / d, PI / d, ib / d, ONE)
        }
        Bqpl => core_bqpl(g(Param::Z)?, g(Param::Q)?, g(Param::P)?, g(Param::W)?, pol)?,
        UqLambda => {
            let (z, q, w) = (g(Param::Z)?, g(Param::Q)?, g(Param::W)?);
            let den = 1.0 - q * q * z;
            let b = q * (1.0 - z) / den;
            let cc = (1.0 - q * q) * (1.0 - w * z) / (den * (1.0 - w));
            let cb = (1.0 - q * q) * (z - w) / (den * (1.0 - w));
            let bb = b * (1.0 - w * q * q) * (1.0 - w / (q * q)) / ((1.0 - w) * (1.0 - w));
            face4(ONE, b, cc, cb, bb, ONE)
        }
        DYrs => core_dyrs(g(Param::Beta)?, g(Param::R)?, g(Param::S)?)?,
        DYs => {
            let (ib, s) = (C::i() * g(Param::Beta)?, g(Param::S)?);
            if s == ZERO {
                return domain("DYs needs s != 0");
            }
            let d = ib + PI;
            face4(
                ONE,
                ib / d,
                (PI * s + ib) / (s * d),
                (PI * s - ib) / (s * d),
                (s * s - 1.0) / (s * s) * ib / d,
                ONE,
            )
        }
        DYrsMinusInf => {
            let (beta, r, s) = (g(Param::Beta)?, g(Param::R)?, g(Param::S)?);
            let (cc, cb) = dyn_trig_offdiag(beta, r, s)?;
            let sb = sinc_ratio(beta, r);
            let a = PI * s / r;
            let bb = sin_shift_ratio(a, PI / r) * sin_shift_ratio(a, -PI / r) * sb;
            face4(ONE, sb, cc, cb, bb, ONE)
        }
        DYrF => {
            let (beta, r) = (g(Param::Beta)?, g(Param::R)?);
            let w = crossing_weight(beta, r);
            let e = (beta / r).exp();
            face4(ONE, sinc_ratio(beta, r), e * w, w / e, sinc_ratio(beta, r), ONE)
        }
        UqLambdaGamma => {
            let (z, r, s) = (g(Param::Z)?, g(Param::R)?, g(Param::S)?);
            core_dyrs(ulg_beta(z, r)?, r, s)?
        }
        AqpPi => core_aqp_pi(g(Param::Z)?, g(Param::Q)?, g(Param::P)?, g(Param::W)?, pol)?,
        AhbarEtaPi => {
            let (beta, r, s) = (g(Param::Beta)?, g(Param::R)?, g(Param::S)?);
            let (cc, cb) = dyn_trig_offdiag(beta, r, s)?;
            let sb = sinc_ratio(beta, r);
            let a = PI * s / r;
            face4(ONE, sb * sin_shift_ratio(a, -PI / r), cc, cb, sb * sin_shift_ratio(a, PI / r), ONE)
        }
        FiniteUq => {
            let q = g(Param::Q)?;
            face4(ONE, q, 1.0 - q * q, ZERO, q, ONE)
        }
        FiniteBql => {
            let (q, w) = (g(Param::Q)?, g(Param::W)?);
            let om = 1.0 - w;
            face4(
                ONE,
                q,
                (1.0 - q * q) / om,
                -w * (1.0 - q * q) / om,
                q * (1.0 - w * q * q) * (1.0 - w / (q * q)) / (om * om),
                ONE,
            )
        }
        FiniteUs => {
            let s = g(Param::S)?;
            if s == ZERO {
                return domain("FiniteUs needs s != 0");
            }
            face4(ONE, ONE, s.inv(), -s.inv(), 1.0 - (s * s).inv(), ONE)
        }
        FiniteClassical => Mat4::identity(),
    })
}

/// Spectral variable of the Gamma-type trigonometric entry: `z = e^{-2 beta / r}`.
pub(crate) fn ulg_beta(z: C, r: C) -> Result<C> {
    if z == ZERO {
        return domain("z must be nonzero");
    }
    Ok(-r * z.ln() / 2.0)
}

fn core_aqp(z: C, q: C, p: C, pol: &TruncationPolicy) -> Result<Mat4> {
    let p2 = p * p;
    let (z2, q2) = (z * z, q * q);
    let t = |n: &[C], d: &[C]| theta_quotient(p2, n, d, pol);
    let a = t(&[q2 * z2, p * q2], &[p * q2 * z2, q2])? / z;
    let b = q / z * t(&[z2, p * q2], &[p * z2, q2])?;
    let d = -p.sqrt() / q / z2 * t(&[z2, q2 * z2], &[p * z2, p * q2 * z2])?;
    Ok(sym8(a, b, ONE, d))
}

fn ln_qp(z: C, p: C, pol: &TruncationPolicy) -> Result<C> {
    ln_qpoch(z, p, pol)
}

fn core_bqpl(z: C, q: C, p: C, w: C, pol: &TruncationPolicy) -> Result<Mat4> {
    if w == ZERO {
        return domain("Bqpl needs w != 0");
    }
    let q2 = q * q;
    let pw = p / w;
    let th = |n: &[C], d: &[C]| theta_quotient(p, n, d, pol);
    let lb = ln_qp(pw * q2, p, pol)? + ln_qp(pw / q2, p, pol)? - 2.0 * ln_qp(pw, p, pol)?;
    let lbb = ln_qp(w * q2, p, pol)? + ln_qp(w / q2, p, pol)? - 2.0 * ln_qp(w, p, pol)?;
    let zr = th(&[z], &[q2 * z])?;
    let b = q * lb.exp() * zr;
    let bb = q * lbb.exp() * zr;
    let cc = th(&[q2, w * z], &[w, q2 * z])?;
    let cb = z * th(&[q2, pw * z], &[pw, q2 * z])?;
    Ok(face4(ONE, b, cc, cb, bb, ONE))
}

fn core_aqp_pi(z: C, q: C, p: C, w: C, pol: &TruncationPolicy) -> Result<Mat4> {
    if w == ZERO {
        return domain("AqpPi needs w != 0");
    }
    let q2 = q * q;
    let den = [q2 * z, w];
    let th = |n: &[C]| theta_quotient(p, n, &den, pol);
    let b = q * th(&[z, w / q2])?;
    let cc = th(&[z * w, q2])?;
    let cb = z * th(&[w / z, q2])?;
    let bb = q * th(&[z, q2 * w])?;
    Ok(face4(ONE, b, cc, cb, bb, ONE))
}

fn core_dyrs(beta: C, r: C, s: C) -> Result<Mat4> {
    let (cc, cb) = dyn_trig_offdiag(beta, r, s)?;
    let sb = sinc_ratio(beta, r);
    let b = ln_gamma1_balanced(r - s, r)?.exp() * sb;
    let bb = ln_gamma1_balanced(s, r)?.exp() * sb;
    Ok(face4(ONE, b, cc, cb, bb, ONE))
}

// ---- normalizations ----

/// `ln (z; p, q4)_inf` via nested log sums.
pub(crate) fn ln_qp2(z: C, p: C, q4: C, pol: &TruncationPolicy) -> Result<C> {
    if !(q4.norm() < 1.0) || !(p.norm() < 1.0) {
        return domain("double q-product needs both bases inside the unit disc");
    }
    let mut acc = ZERO;
    let mut t = z;
    for _ in 0..pol.max_terms {
        if t.norm() < pol.term_tolerance {
            return Ok(acc);
        }
        acc += ln_qpoch(t, q4, pol)?;
        t *= p;
    }
    Err(Error::Truncation {
        what: "double q-product",
        terms: pol.max_terms,
        partial: acc,
    })
}

fn ln_theta_q4(q4: C, z: C, pol: &TruncationPolicy) -> Result<C> {
    crate::specfun::ln_theta(q4, z, pol)
}

/// Normalization of the elliptic vertex entry (`tau / mu`).
pub fn rho_aqp(z: C, q: C, p: C, pol: &TruncationPolicy) -> Result<C> {
    let (q2, q4, z2) = (q * q, q.powi(4), z * z);
    let p2 = p * p;
    let l = |x: C| ln_qp2(x, p, q4, pol);
    let ln_inv_kappa = l(q4 / z2)? + l(q2 * z2)? + l(p / z2)? + l(p * q2 * z2)?
        - l(q4 * z2)?
        - l(q2 / z2)?
        - l(p * z2)?
        - l(p * q2 / z2)?;
    let ln_inv_mu = ln_inv_kappa + ln_qp(p2, p2, pol)? - 2.0 * ln_qp(p, p, pol)?
        + theta_quotient(p2, &[p * z2, q2], &[q2 * z2], pol)?.ln();
    let ln_tau = -0.5 * q.ln() + z.ln() + ln_theta_q4(q4, q2 * z2, pol)? - ln_theta_q4(q4, z2, pol)?;
    Ok((ln_tau + ln_inv_mu).exp())
}

/// `q^{-1/2} (q^2 x; q^4)^2 / ((x; q^4)(q^4 x; q^4))`, the trigonometric normalization.
pub fn rho_trig(x: C, q: C, pol: &TruncationPolicy) -> Result<C> {
    let q4 = q.powi(4);
    if !(q4.norm() < 1.0) {
        return domain("trigonometric normalization needs |q| < 1");
    }
    let l = |y: C| ln_qp(y, q4, pol);
    Ok((-0.5 * q.ln() + 2.0 * l(q * q * x)? - l(x)? - l(q4 * x)?).exp())
}

pub fn rho_bqpl(z: C, q: C, p: C, pol: &TruncationPolicy) -> Result<C> {
    let (q2, q4) = (q * q, q.powi(4));
    let l = |y: C| ln_qp2(y, p, q4, pol);
    let v = -0.5 * q.ln() + 2.0 * l(q2 * z)? - l(z)? - l(q4 * z)? + l(p / z)? + l(p * q4 / z)? - 2.0 * l(p * q2 / z)?;
    Ok(v.exp())
}

/// Double-sine normalization of the trigonometric vertex entry, as displayed
/// with the cotangent factor.
pub fn rho_v8(beta: C, r: C) -> Result<C> {
    let x = C::i() * beta / PI;
    let two = re(2.0);
    let l = |y: C| log_double_sine(y, r, two);
    let v = l(-x)? + l(1.0 + x)? - l(x)? - l(1.0 - x)?;
    Ok(-v.exp() * crate::specfun::cot(C::i() * beta / 2.0))
}

/// The same normalization in its three-factor form `S2(1+x)^2 / (S2(x) S2(2+x))`.
pub fn rho_v8_alt(beta: C, r: C) -> Result<C> {
    let x = C::i() * beta / PI;
    let two = re(2.0);
    let l = |y: C| log_double_sine(y, r, two);
    Ok((2.0 * l(1.0 + x)? - l(x)? - l(2.0 + x)?).exp())
}

/// `Gamma_1(x|2) Gamma_1(2+x|2) / Gamma_1(1+x|2)^2` with `x = i beta / pi`.
pub fn rho_dy(beta: C) -> Result<C> {
    let x = C::i() * beta / PI;
    if x == ZERO {
        return Err(Error::Pole("rho(beta) has a pole at beta = 0".into()));
    }
    Ok((-ln_gamma1_balanced(1.0 + x, re(2.0))?).exp())
}

fn scalar_unchecked(id: AlgebraId, pt: &ParamPoint, pol: &TruncationPolicy) -> Result<C> {
    use AlgebraId::*;
    let g = |p: Param| pt.require(p);
    match id {
        Aqp => rho_aqp(g(Param::Z)?, g(Param::Q)?, g(Param::P)?, pol),
        UqVertex => {
            let z = g(Param::Z)?;
            rho_trig(z * z, g(Param::Q)?, pol)
        }
        UqFace | UqLambda => rho_trig(g(Param::Z)?, g(Param::Q)?, pol),
        DYrV8 | DYrV6 | DYrF => rho_v8(g(Param::Beta)?, g(Param::R)?),
        DYrs | DYrsMinusInf | AhbarEtaPi => rho_v8_alt(g(Param::Beta)?, g(Param::R)?),
        UqLambdaGamma => {
            let r = g(Param::R)?;
            rho_v8_alt(ulg_beta(g(Param::Z)?, r)?, r)
        }
        DY | DYs => rho_dy(g(Param::Beta)?),
        Bqpl => rho_bqpl(g(Param::Z)?, g(Param::Q)?, g(Param::P)?, pol),
        AqpPi => {
            let (z, r) = (g(Param::Z)?, g(Param::R)?);
            Ok((z.ln() / (2.0 * r)).exp() * rho_bqpl(z, g(Param::Q)?, g(Param::P)?, pol)?)
        }
        FiniteUq | FiniteBql => Ok((-0.5 * g(Param::Q)?.ln()).exp()),
        FiniteUs | FiniteClassical => Ok(ONE),
    }
}

/// Shift the dynamical parameter by `weight * delta`: additively for `s`,
/// multiplicatively (`w -> w q^{2 weight delta}`) for `w`. `s` wins if both
/// are present.
pub fn dynamical_shift(params: &ParamPoint, weight: f64, delta: f64) -> Result<ParamPoint> {
    if params.s.is_some() {
        shift_param(params, Param::S, weight, delta)
    } else if params.w.is_some() {
        shift_param(params, Param::W, weight, delta)
    } else {
        domain("dynamical shift needs w or s")
    }
}

/// Shift of a named dynamical parameter (used where both `w` and `s` are set).
pub fn shift_param(params: &ParamPoint, which: Param, weight: f64, delta: f64) -> Result<ParamPoint> {
    let mut out = *params;
    match which {
        Param::S => {
            let s = params.require(Param::S)?;
            out.s = Some(s + weight * delta);
        }
        Param::W => {
            let w = params.require(Param::W)?;
            let q = params.require(Param::Q)?;
            out.w = Some(w * (2.0 * weight * delta * q.ln()).exp());
        }
        _ => return domain(format!("{} is not a dynamical parameter", which.name())),
    }
    Ok(out)
}

/// Shift along the dynamical direction of a given entry.
pub fn dynamical_shift_for(id: AlgebraId, params: &ParamPoint, weight: f64, delta: f64) -> Result<ParamPoint> {
    match id.dynamical() {
        Some(which) => shift_param(params, which, weight, delta),
        None => domain(format!("{id} has no dynamical parameter")),
    }
}

// ---- sampling of admissible points ----

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// A complex number with modulus in `[lo, hi]` and argument in `(-1, 1)`.
pub fn sample_modulus<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> C {
    C::from_polar(uniform(rng, lo, hi), uniform(rng, -1.0, 1.0))
}

pub fn sample_beta<R: Rng>(rng: &mut R) -> C {
    loop {
        let b = c(uniform(rng, -2.0, 2.0), uniform(rng, -0.5, 0.5));
        if b.norm() > 0.1 {
            return b;
        }
    }
}

/// Generic dynamical parameter `s`: away from the real integer multiples of `r`.
pub fn sample_s<R: Rng>(rng: &mut R) -> C {
    c(uniform(rng, 0.6, 4.0), uniform(rng, -0.6, 0.6))
}

/// Random admissible non-spectral parameters for an entry (the spectral
/// parameter is filled in as well; checks overwrite it as needed).
pub fn sample_point<R: Rng>(id: AlgebraId, rng: &mut R) -> ParamPoint {
    let mut pt = ParamPoint::new();
    for &p in required_params(id) {
        let v = match p {
            Param::Q => re(uniform(rng, 0.1, 0.95)),
            Param::P => re(uniform(rng, 0.01, 0.5)),
            Param::Z => sample_modulus(rng, 0.3, 0.9),
            Param::W => sample_modulus(rng, 0.55, 0.9),
            Param::Beta => sample_beta(rng),
            Param::R => re(uniform(rng, 2.0, 20.0)),
            Param::S => sample_s(rng),
        };
        pt.set(p, v);
    }
    if id == AlgebraId::FiniteUs || id == AlgebraId::FiniteBql {
        // keep the finite dynamical parameter well away from its poles
        if let Some(s) = pt.s {
            pt.s = Some(s + 1.5);
        }
    }
    pt
}

#[cfg(test)]
pub(crate) fn rho_dy_closed(beta: C) -> Result<C> {
    // independent route through three Gamma_1 values (used in tests)
    let x = C::i() * beta / PI;
    let two = re(2.0);
    Ok(crate::specfun::gamma1(x, two)? * crate::specfun::gamma1(2.0 + x, two)? / crate::specfun::gamma1(1.0 + x, two)?.powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, max_abs_diff};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn classical_is_identity() {
        let v = eval_r(AlgebraId::FiniteClassical, &ParamPoint::new(), &pol()).unwrap();
        assert_eq!(v.full().unwrap(), Mat4::identity());
    }

    #[test]
    fn finite_uq_entries() {
        let q = re(0.6);
        let v = eval_r(AlgebraId::FiniteUq, &ParamPoint::new().q(q), &pol()).unwrap();
        assert!((v.core[(1, 2)] - (1.0 - q * q)).norm() < 1e-15);
        assert_eq!(v.core[(1, 1)], q);
        assert_eq!(v.core[(2, 2)], q);
        assert!((v.scalar_norm - 1.0 / 0.6f64.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn dy_at_zero_is_permutation_with_singular_scalar() {
        let v = eval_r(AlgebraId::DY, &ParamPoint::new().beta(ZERO), &pol()).unwrap();
        assert!(max_abs_diff(&v.core, &crate::linalg::swap()) < 1e-15);
        assert!(v.scalar_singular);
        assert!(v.full().is_err());
    }

    #[test]
    fn required_param_sets() {
        assert_eq!(required_params(AlgebraId::DYrs), &[Param::Beta, Param::R, Param::S]);
        assert_eq!(required_params(AlgebraId::UqVertex), &[Param::Z, Param::Q]);
        assert!(required_params(AlgebraId::FiniteClassical).is_empty());
    }

    #[test]
    fn missing_param_is_config_error() {
        let e = eval_r(AlgebraId::Aqp, &ParamPoint::new().z(re(0.5)), &pol()).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn out_of_domain_nome() {
        let pt = ParamPoint::new().z(re(0.5)).q(re(0.5)).p(re(1.2));
        assert!(matches!(eval_r(AlgebraId::Aqp, &pt, &pol()), Err(Error::Domain(_))));
    }

    #[test]
    fn dyrs_pole_in_s() {
        let pt = ParamPoint::new().beta(c(0.3, 0.1)).r(re(5.0)).s(re(5.0));
        assert!(matches!(eval_r(AlgebraId::DYrs, &pt, &pol()), Err(Error::Domain(_))));
    }

    #[test]
    fn names_round_trip() {
        for id in AlgebraId::ALL {
            assert_eq!(AlgebraId::from_name(id.name()), Some(id));
        }
        for p in Param::ALL {
            assert_eq!(Param::from_name(p.name()), Some(p));
        }
    }

    #[test]
    fn shift_rule() {
        let pt = ParamPoint::new().s(re(3.0));
        assert_eq!(dynamical_shift(&pt, 1.0, 1.0).unwrap().s, Some(re(4.0)));
        let pt = ParamPoint::new().w(re(0.5)).q(re(0.9));
        let w = dynamical_shift(&pt, -1.0, 1.0).unwrap().w.unwrap();
        assert!((w - 0.5 / 0.81).norm() < 1e-15);
        assert!(dynamical_shift(&ParamPoint::new(), 1.0, 1.0).is_err());
    }

    #[test]
    fn rho_v8_forms_agree() {
        for (b, r) in [(c(0.4, 0.3), 3.3), (c(-1.2, 0.1), 7.0)] {
            let a = rho_v8(b, re(r)).unwrap();
            let bb = rho_v8_alt(b, re(r)).unwrap();
            assert!((a - bb).norm() < 1e-10 * a.norm(), "{a} vs {bb}");
        }
    }

    #[test]
    fn rho_dy_two_routes() {
        let b = c(0.7, -0.2);
        assert!((rho_dy(b).unwrap() - rho_dy_closed(b).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn full_is_scalar_times_core_for_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for id in AlgebraId::ALL {
            for _ in 0..20 {
                let pt = sample_point(id, &mut rng);
                let v = eval_r(id, &pt, &pol()).unwrap();
                assert!(max_abs(&v.core).is_finite(), "{id}");
                if let Ok(f) = v.full() {
                    let diff = max_abs_diff(&f, &(v.core * v.scalar_norm));
                    assert_eq!(diff, 0.0);
                }
            }
        }
    }

    #[test]
    fn aqpp_reduces_to_uqvertex_at_p_zero() {
        // the theta forms at p = 0 are the vertex trigonometric entries up to c-normalization
        let (z, q) = (c(0.6, 0.2), re(0.4));
        let a = eval_core(AlgebraId::Aqp, &ParamPoint::new().z(z).q(q).p(ZERO), &pol()).unwrap();
        let u = eval_core(AlgebraId::UqVertex, &ParamPoint::new().z(z).q(q), &pol()).unwrap();
        let scale = u[(1, 2)] / a[(1, 2)];
        assert!(max_abs_diff(&(a * scale), &u) < 1e-14);
    }

    #[test]
    fn dyrs_minus_inf_matches_identified_uqlambda() {
        let (b, r, s) = (c(0.4, 0.3), re(5.3), c(1.7, 0.4));
        let d = eval_core(AlgebraId::DYrsMinusInf, &ParamPoint::new().beta(b).r(r).s(s), &pol()).unwrap();
        let pt = ParamPoint::new()
            .z((-2.0 * b / r).exp())
            .q((C::i() * PI / r).exp())
            .w((2.0 * C::i() * PI * s / r).exp());
        let u = eval_core(AlgebraId::UqLambda, &pt, &pol()).unwrap();
        assert!(max_abs_diff(&d, &u) < 1e-13);
    }
}
