//! Limit degenerations between catalog entries: parameterized paths into
//! each limit, error decay along the path and extrapolation to the limit.

use crate::checks::CheckReport;
use crate::error::{Error, Result};
use crate::linalg::{c, max_abs, max_abs_diff, re, Mat4, C, I, ONE};
use crate::rmatrix::{eval_core, eval_r, AlgebraId, ParamPoint};
use crate::specfun::TruncationPolicy;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Default path grid.
pub const DEFAULT_EPS: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Grid of the oscillatory edge, `eps = 1/t` with `s = -t r + s0`.
pub const OSCILLATORY_EPS: [f64; 3] = [1.0 / 5.0, 1.0 / 20.0, 1.0 / 80.0];
pub const DEFAULT_LIMIT_TOL: f64 = 1e-6;
/// Errors at or below this level count as converged: paths whose corrections
/// are exponentially small sit at rounding level, where monotonicity is noise.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitMode {
    Entrywise,
    RatioToTarget,
}

pub type Path = fn(f64, &ParamPoint) -> ParamPoint;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LimitEdge {
    pub src: AlgebraId,
    pub dst: AlgebraId,
    #[serde(skip)]
    pub path: Path,
    #[serde(skip)]
    pub dst_path: Path,
    /// Generic values the paths start from.
    pub base: ParamPoint,
    pub mode: LimitMode,
    pub eps: &'static [f64],
    pub description: &'static str,
}

impl LimitEdge {
    pub fn name(&self) -> String {
        format!("{}=>{}", self.src, self.dst)
    }

    pub fn src_params(&self, eps: f64) -> ParamPoint {
        (self.path)(eps, &self.base)
    }

    pub fn dst_params(&self, eps: f64) -> ParamPoint {
        (self.dst_path)(eps, &self.base)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub edge: String,
    pub src: AlgebraId,
    pub dst: AlgebraId,
    pub mode: LimitMode,
    pub description: String,
    /// `(eps, error)`, by decreasing `eps`.
    pub samples: Vec<(f64, f64)>,
    pub estimated_order: f64,
    pub extrapolated: f64,
    pub monotone: bool,
    pub tol: f64,
    pub pass: bool,
    pub details: BTreeMap<String, String>,
}

/// Scalar extrapolation of an error sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    pub order: f64,
    /// Order estimate unusable; `value` is the last error.
    pub degenerate: bool,
}

fn last_order(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len();
    let (e1, r1) = samples[n - 2];
    let (e2, r2) = samples[n - 1];
    (r1 / r2).ln() / (e1 / e2).ln()
}

/// Richardson step on the last two samples, with the order read off their ratio.
pub fn richardson_extrapolate(samples: &[(f64, f64)]) -> Result<Extrapolation> {
    if samples.len() < 3 {
        return Err(Error::Config("extrapolation needs at least 3 samples".into()));
    }
    let last = samples[samples.len() - 1].1;
    let k = last_order(samples);
    if !k.is_finite() || k < 1e-3 {
        return Ok(Extrapolation {
            value: last,
            order: if k.is_finite() { k } else { 0.0 },
            degenerate: true,
        });
    }
    let (e1, r1) = samples[samples.len() - 2];
    let e2 = samples[samples.len() - 1].0;
    let value = last - (r1 - last) / ((e1 / e2).powf(k) - 1.0);
    Ok(Extrapolation { value, order: k, degenerate: false })
}

/// Neville table in `t = eps^k` evaluated at `t = 0`.
pub fn neville_extrapolate(mats: &[Mat4], eps: &[f64], k: f64) -> Mat4 {
    let t: Vec<f64> = eps.iter().map(|e| e.powf(k)).collect();
    let mut tab = mats.to_vec();
    let n = tab.len();
    for j in 1..n {
        for i in (j..n).rev() {
            tab[i] = (tab[i] * re(t[i - j]) - tab[i - 1] * re(t[i])) / re(t[i - j] - t[i]);
        }
    }
    tab[n - 1]
}

/// Rescale `m` so that it matches `target` at the target's largest entry.
pub fn projective(m: &Mat4, target: &Mat4) -> Mat4 {
    let mut at = (0, 0);
    for i in 0..4 {
        for j in 0..4 {
            if target[(i, j)].norm() > target[at].norm() {
                at = (i, j);
            }
        }
    }
    if m[at].norm() == 0.0 {
        return *m;
    }
    m * (target[at] / m[at])
}

fn ratio_matrix(src: &Mat4, dst: &Mat4) -> Mat4 {
    let floor = 1e-13 * max_abs(dst);
    Mat4::from_fn(|i, j| {
        if dst[(i, j)].norm() > floor {
            src[(i, j)] / dst[(i, j)]
        } else {
            // zero target entry: the source entry must vanish too
            ONE + src[(i, j)]
        }
    })
}

fn ones() -> Mat4 {
    Mat4::from_element(ONE)
}

/// Run an edge along `eps` (strictly decreasing, at least three values).
pub fn limit_check(edge: &LimitEdge, eps: &[f64], tol: f64, pol: &TruncationPolicy) -> Result<ConvergenceReport> {
    if eps.len() < 3 || eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("eps list must be strictly decreasing with at least 3 values".into()));
    }
    let mut mats = Vec::with_capacity(eps.len());
    let mut samples = Vec::with_capacity(eps.len());
    let mut target = Mat4::zeros();
    for &e in eps {
        let src = eval_core(edge.src, &edge.src_params(e), pol)?;
        let dst = eval_core(edge.dst, &edge.dst_params(e), pol)?;
        let (m, err) = match edge.mode {
            LimitMode::Entrywise => {
                let m = projective(&src, &dst);
                let err = max_abs_diff(&m, &dst);
                target = dst;
                (m, err)
            }
            LimitMode::RatioToTarget => {
                let m = ratio_matrix(&src, &dst);
                target = ones();
                (m, max_abs_diff(&m, &target))
            }
        };
        if !err.is_finite() {
            return Err(Error::Singular(format!("{}: error not finite at eps={e}", edge.name())));
        }
        mats.push(m);
        samples.push((e, err));
    }
    let monotone = samples.windows(2).all(|w| w[1].1 < w[0].1 || w[1].1 <= NOISE_FLOOR);
    let scalar = richardson_extrapolate(&samples)?;
    let mut details = BTreeMap::new();
    let raw_order = last_order(&samples);
    let (estimated_order, extrapolated) = if samples.last().unwrap().1 <= NOISE_FLOOR {
        (raw_order.max(0.0), samples.last().unwrap().1)
    } else if !raw_order.is_finite() || raw_order < 0.25 {
        details.insert("order_degenerate".into(), "true".into());
        (raw_order, samples.last().unwrap().1)
    } else {
        // nearest half-integer order drives the matrix Neville table
        let k = (2.0 * raw_order).round().max(1.0) / 2.0;
        let ext = neville_extrapolate(&mats, eps, k);
        details.insert("neville_order".into(), k.to_string());
        (raw_order, max_abs_diff(&ext, &target))
    };
    details.insert("scalar_richardson".into(), format!("{:.3e}", scalar.value));
    if edge.mode == LimitMode::Entrywise {
        details.insert("full_matrix_error".into(), full_error(edge, eps[eps.len() - 1], pol));
    }
    if !monotone {
        details.insert("diagnostic".into(), "error not strictly decreasing along the path".into());
    }
    Ok(ConvergenceReport {
        edge: edge.name(),
        src: edge.src,
        dst: edge.dst,
        mode: edge.mode,
        description: edge.description.to_string(),
        samples,
        estimated_order,
        extrapolated,
        monotone,
        tol,
        pass: monotone && extrapolated <= tol,
        details,
    })
}

// Full matrices carry normalizations with unrelated absolute constants along
// most limits; the difference is reported, never gated.
fn full_error(edge: &LimitEdge, eps: f64, pol: &TruncationPolicy) -> String {
    let run = || -> Result<f64> {
        let a = eval_r(edge.src, &edge.src_params(eps), pol)?.full()?;
        let b = eval_r(edge.dst, &edge.dst_params(eps), pol)?.full()?;
        Ok(max_abs_diff(&a, &b) / max_abs(&b))
    };
    match run() {
        Ok(v) if v.is_finite() => format!("{v:.3e}"),
        _ => "unavailable".into(),
    }
}

fn qpow(q: f64, x: C) -> C {
    (x * q.ln()).exp()
}

fn base() -> ParamPoint {
    ParamPoint::new()
        .z(c(0.6, 0.2))
        .q(re(0.5))
        .p(re(0.09))
        .w(c(0.3, 0.2))
        .beta(c(0.4, 0.3))
        .r(re(4.0))
        .s(c(1.3, 0.4))
}

fn fixed(_: f64, b: &ParamPoint) -> ParamPoint {
    *b
}

// ---- paths ----

fn vertex_scaling(e: f64, b: &ParamPoint) -> ParamPoint {
    let q = 1.0 - e;
    let beta = b.beta.unwrap();
    b.q(re(q)).z(qpow(q, I * beta / PI)).p(qpow(q, 2.0 * b.r.unwrap()))
}

fn face_scaling(e: f64, b: &ParamPoint) -> ParamPoint {
    let q = 1.0 - e;
    let beta = b.beta.unwrap();
    b.q(re(q))
        .z(qpow(q, 2.0 * I * beta / PI))
        .p(qpow(q, 2.0 * b.r.unwrap()))
        .w(qpow(q, 2.0 * b.s.unwrap()))
}

fn q_to_one(e: f64, b: &ParamPoint) -> ParamPoint {
    b.q(re(1.0 - e))
}

fn finite_scaling(e: f64, b: &ParamPoint) -> ParamPoint {
    let q = 1.0 - e;
    b.q(re(q)).w(qpow(q, 2.0 * b.s.unwrap()))
}

fn p_to_zero_4(e: f64, b: &ParamPoint) -> ParamPoint {
    b.p(re(e.powi(4)))
}

fn p_to_zero_2(e: f64, b: &ParamPoint) -> ParamPoint {
    b.p(re(e * e))
}

fn w_to_zero(e: f64, b: &ParamPoint) -> ParamPoint {
    b.w(re(e * e))
}

fn p_w_to_zero(e: f64, b: &ParamPoint) -> ParamPoint {
    b.p(re(e.powi(4))).w(re(e * e))
}

fn r_to_inf(e: f64, b: &ParamPoint) -> ParamPoint {
    b.r(re(1.0 / e))
}

fn s_to_inf(e: f64, b: &ParamPoint) -> ParamPoint {
    b.s(re(1.0 / e))
}

fn s_to_i_inf(e: f64, b: &ParamPoint) -> ParamPoint {
    b.s(c(0.0, 1.0 / e))
}

fn r_s_to_inf(e: f64, b: &ParamPoint) -> ParamPoint {
    b.r(re(1.0 / e)).s(c(0.0, 1.0 / (e * e)))
}

fn s_oscillatory(e: f64, b: &ParamPoint) -> ParamPoint {
    let r = b.r.unwrap();
    b.s(-r / e + b.s.unwrap())
}

/// Limit arrows of the vertex, finite and face diagrams.
pub fn standard_edges() -> Vec<LimitEdge> {
    use AlgebraId as A;
    use LimitMode::*;
    let e = |src, dst, path: Path, dst_path: Path, mode, eps: &'static [f64], description| LimitEdge {
        src,
        dst,
        path,
        dst_path,
        base: base(),
        mode,
        eps,
        description,
    };
    let d = &DEFAULT_EPS[..];
    vec![
        // vertex
        e(A::Aqp, A::UqVertex, p_to_zero_4, fixed, Entrywise, d, "p -> 0 along p = eps^4"),
        e(A::Aqp, A::DYrV8, vertex_scaling, fixed, Entrywise, d, "q = 1 - eps, z = q^{i beta/pi}, p = q^{2r}"),
        e(A::UqVertex, A::DY, vertex_scaling, fixed, Entrywise, d, "q = 1 - eps, z = q^{i beta/pi}"),
        e(A::DYrV8, A::DY, r_to_inf, fixed, Entrywise, d, "r = 1/eps"),
        // finite
        e(A::FiniteUq, A::FiniteClassical, q_to_one, fixed, Entrywise, d, "q = 1 - eps"),
        e(A::FiniteBql, A::FiniteUq, w_to_zero, fixed, Entrywise, d, "w -> 0 along w = eps^2"),
        e(A::FiniteBql, A::FiniteUs, finite_scaling, fixed, Entrywise, d, "q = 1 - eps, w = q^{2s}"),
        e(A::FiniteUs, A::FiniteClassical, s_to_inf, fixed, Entrywise, d, "s = 1/eps"),
        // face
        e(A::Bqpl, A::UqLambda, p_to_zero_2, fixed, Entrywise, d, "p -> 0 along p = eps^2"),
        e(A::Bqpl, A::DYrs, face_scaling, fixed, Entrywise, d, "q = 1 - eps, z = q^{2i beta/pi}, p = q^{2r}, w = q^{2s}"),
        e(A::UqLambda, A::UqFace, w_to_zero, fixed, Entrywise, d, "w -> 0 along w = eps^2"),
        e(A::UqLambda, A::DYs, face_scaling, fixed, Entrywise, d, "q = 1 - eps, z = q^{2i beta/pi}, w = q^{2s}"),
        e(A::DYrs, A::DYs, r_to_inf, fixed, Entrywise, d, "r = 1/eps"),
        e(A::DYrs, A::DYrsMinusInf, s_oscillatory, s_oscillatory, RatioToTarget, &OSCILLATORY_EPS[..], "s = -r/eps + s0, entry ratios"),
        e(A::DYrs, A::DYrF, s_to_i_inf, fixed, Entrywise, d, "s = i/eps"),
        e(A::DYrsMinusInf, A::DYs, r_to_inf, fixed, Entrywise, d, "r = 1/eps"),
        e(A::DYrF, A::DY, r_to_inf, fixed, Entrywise, d, "r = 1/eps"),
        e(A::DYs, A::DY, s_to_inf, fixed, Entrywise, d, "s = 1/eps"),
        e(A::UqFace, A::DY, face_scaling, fixed, Entrywise, d, "q = 1 - eps, z = q^{2i beta/pi}"),
        e(A::Bqpl, A::UqFace, p_w_to_zero, fixed, Entrywise, d, "p = eps^4, w = eps^2"),
        e(A::DYrs, A::DY, r_s_to_inf, fixed, Entrywise, d, "r = 1/eps, s = i/eps^2"),
        e(A::AqpPi, A::AhbarEtaPi, face_scaling, fixed, Entrywise, d, "q = 1 - eps, z = q^{2i beta/pi}, p = q^{2r}, w = q^{2s}"),
    ]
}

pub fn find_edge(src: AlgebraId, dst: AlgebraId) -> Option<LimitEdge> {
    standard_edges().into_iter().find(|e| e.src == src && e.dst == dst)
}

fn extrapolated_limit(edge: &LimitEdge, pol: &TruncationPolicy) -> Result<Mat4> {
    let rep = limit_check(edge, edge.eps, DEFAULT_LIMIT_TOL, pol)?;
    let mats: Vec<Mat4> = edge
        .eps
        .iter()
        .map(|&e| {
            let dst = eval_core(edge.dst, &edge.dst_params(e), pol)?;
            Ok(projective(&eval_core(edge.src, &edge.src_params(e), pol)?, &dst))
        })
        .collect::<Result<_>>()?;
    let k = (2.0 * rep.estimated_order).round().max(1.0) / 2.0;
    Ok(neville_extrapolate(&mats, edge.eps, k))
}

/// The two routes from the elliptic face entry to the rational dynamical one
/// (through `p -> 0` then scaling, and through scaling then `r -> inf`) meet
/// at the same matrix.
pub fn face_square_check(tol: f64, pol: &TruncationPolicy) -> Result<CheckReport> {
    use AlgebraId as A;
    let leg = |s, d| find_edge(s, d).ok_or_else(|| Error::Config("missing limit edge".into()));
    let via_lambda = extrapolated_limit(&leg(A::UqLambda, A::DYs)?, pol)?;
    let via_dyrs = extrapolated_limit(&leg(A::DYrs, A::DYs)?, pol)?;
    let first_a = limit_check(&leg(A::Bqpl, A::UqLambda)?, &DEFAULT_EPS, tol, pol)?;
    let first_b = limit_check(&leg(A::Bqpl, A::DYrs)?, &DEFAULT_EPS, tol, pol)?;
    let corner = eval_core(A::DYs, &base(), pol)?;
    let res = max_abs_diff(&via_lambda, &via_dyrs);
    Ok(CheckReport::new("limit_square", "Bqpl=>UqLambda=>DYs vs Bqpl=>DYrs=>DYs", "face", base(), res, tol)?
        .detail("corner_error_via_UqLambda", format!("{:.3e}", max_abs_diff(&via_lambda, &corner)))
        .detail("corner_error_via_DYrs", format!("{:.3e}", max_abs_diff(&via_dyrs, &corner)))
        .detail("first_leg_via_UqLambda", format!("{:.3e}", first_a.extrapolated))
        .detail("first_leg_via_DYrs", format!("{:.3e}", first_b.extrapolated)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn richardson_examples() {
        let s: Vec<(f64, f64)> = DEFAULT_EPS.iter().map(|&e| (e, e)).collect();
        let x = richardson_extrapolate(&s).unwrap();
        assert!((x.order - 1.0).abs() < 1e-12 && x.value.abs() < 1e-15 && !x.degenerate);
        let s: Vec<(f64, f64)> = DEFAULT_EPS.iter().map(|&e| (e, 0.3)).collect();
        let x = richardson_extrapolate(&s).unwrap();
        assert!(x.degenerate && x.value == 0.3 && x.order == 0.0);
        let s: Vec<(f64, f64)> = DEFAULT_EPS.iter().map(|&e| (e, 5.0 * e * e + e.powi(3))).collect();
        let x = richardson_extrapolate(&s).unwrap();
        assert!((x.order - 2.0).abs() < 1e-3, "{}", x.order);
        assert!(richardson_extrapolate(&s[..2]).is_err());
    }

    #[test]
    fn neville_on_polynomial_is_exact() {
        let eps = [0.1, 0.01, 0.001];
        let m0 = Mat4::from_fn(|i, j| c(i as f64, j as f64));
        let m1 = Mat4::identity();
        let mats: Vec<Mat4> = eps.iter().map(|&e| m0 + m1 * re(3.0 * e - e * e)).collect();
        assert!(max_abs_diff(&neville_extrapolate(&mats, &eps, 1.0), &m0) < 1e-12);
    }

    #[test]
    fn constant_path_self_edge() {
        let edge = LimitEdge {
            src: AlgebraId::DY,
            dst: AlgebraId::DY,
            path: fixed,
            dst_path: fixed,
            base: base(),
            mode: LimitMode::Entrywise,
            eps: &DEFAULT_EPS,
            description: "constant",
        };
        let rep = limit_check(&edge, &DEFAULT_EPS, 1e-6, &pol()).unwrap();
        assert!(rep.samples.iter().all(|s| s.1 == 0.0));
        assert!(rep.pass);
    }

    #[test]
    fn bad_grid_is_rejected() {
        let edge = find_edge(AlgebraId::DYrV8, AlgebraId::DY).unwrap();
        assert!(limit_check(&edge, &[0.1, 0.1, 0.01], 1e-6, &pol()).is_err());
        assert!(limit_check(&edge, &[0.1, 0.01], 1e-6, &pol()).is_err());
    }

    #[test]
    fn trig_vertex_to_rational() {
        let edge = find_edge(AlgebraId::DYrV8, AlgebraId::DY).unwrap();
        let rep = limit_check(&edge, &DEFAULT_EPS, 1e-6, &pol()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn elliptic_face_to_trig_is_first_order_in_p() {
        // along p = eps the error decays linearly
        let mut edge = find_edge(AlgebraId::Bqpl, AlgebraId::UqLambda).unwrap();
        edge.path = |e, b| b.p(re(e));
        let rep = limit_check(&edge, &DEFAULT_EPS, 1e-6, &pol()).unwrap();
        assert!(rep.monotone);
        assert!((rep.estimated_order - 1.0).abs() < 0.1, "{}", rep.estimated_order);
    }

    #[test]
    fn inventory() {
        let edges = standard_edges();
        assert!(edges.len() >= 18);
        assert_eq!(edges.iter().filter(|e| e.mode == LimitMode::RatioToTarget).count(), 1);
        let sc = find_edge(AlgebraId::Bqpl, AlgebraId::DYrs).unwrap();
        let pt = sc.src_params(0.01);
        let q = 0.99f64;
        assert_eq!(pt.q, Some(re(q)));
        assert!((pt.p.unwrap() - re(q.powf(8.0))).norm() < 1e-15);
        assert!((pt.w.unwrap() - qpow(q, c(2.6, 0.8))).norm() < 1e-15);
    }

    #[test]
    fn face_square_commutes() {
        let rep = face_square_check(1e-6, &pol()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
