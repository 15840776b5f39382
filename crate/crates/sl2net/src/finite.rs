//! Pauli (Sklyanin-type) factorization of vertex matrices, the finite
//! universal twists evaluated in small representations, and the shifted
//! cocycle condition.

use crate::checks::{CheckReport, ShiftConvention};
use crate::error::{Error, Result};
use crate::limits::DEFAULT_EPS;
use crate::linalg::{c, kron2, pauli, re, Mat2, Mat4, C, ONE, ZERO};
use crate::rmatrix::{eval_core, AlgebraId, ParamPoint};
use crate::specfun::TruncationPolicy;
use crate::twistnet::{eval_twist, TwistId};
use nalgebra::DMatrix;
use serde::Serialize;

pub type DMat = DMatrix<C>;

/// Coefficients of `R = W0 I(x)I + sum W_a s_a (x) s_a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliDecomposition {
    pub w: [C; 4],
    /// Max-abs deviation of the reconstruction from the input.
    pub residual: f64,
}

impl PauliDecomposition {
    pub fn normalized(&self) -> Result<[C; 4]> {
        if self.w[0].norm() < 1e-300 {
            return Err(Error::Singular("W0 vanishes".into()));
        }
        Ok(self.w.map(|x| x / self.w[0]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureConstants {
    pub j12: C,
    pub j23: C,
    pub j31: C,
}

impl StructureConstants {
    pub fn as_array(&self) -> [C; 3] {
        [self.j12, self.j23, self.j31]
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn sigma_sigma(mu: usize) -> Mat4 {
    let s = if mu == 0 { Mat2::identity() } else { pauli(mu) };
    kron2(&s, &s)
}

/// `W_mu = Tr((s_mu (x) s_mu) R) / 4`, with `s_0 = I`.
pub fn pauli_decompose(r: &Mat4) -> PauliDecomposition {
    let w: [C; 4] = std::array::from_fn(|mu| (sigma_sigma(mu) * r).trace() / 4.0);
    let rebuilt = (0..4).fold(Mat4::zeros(), |acc, mu| acc + sigma_sigma(mu) * w[mu]);
    PauliDecomposition {
        w,
        residual: crate::linalg::max_abs_diff(&rebuilt, r),
    }
}

/// `J_ab = (W_a^2 - W_b^2) / (W_c^2 - 1)` over cyclic `(a, b, c)`, from the
/// `W0`-normalized coefficients.
pub fn structure_constants(w: &PauliDecomposition) -> Result<StructureConstants> {
    let n = w.normalized()?;
    let sq = [n[1] * n[1], n[2] * n[2], n[3] * n[3]];
    let j = |a: usize, b: usize, g: usize| -> Result<C> {
        let den = sq[g] - 1.0;
        if den.norm() < 1e-14 {
            return Err(Error::Singular(format!("W{}^2 = 1", g + 1)));
        }
        Ok((sq[a] - sq[b]) / den)
    };
    Ok(StructureConstants {
        j12: j(0, 1, 2)?,
        j23: j(1, 2, 0)?,
        j31: j(2, 0, 1)?,
    })
}

pub fn structure_constants_of(id: AlgebraId, params: &ParamPoint, pol: &TruncationPolicy) -> Result<StructureConstants> {
    structure_constants(&pauli_decompose(&eval_core(id, params, pol)?))
}

/// Largest pairwise deviation of the structure constants over spectral samples.
pub fn z_independence_check(id: AlgebraId, samples: &[C], params: &ParamPoint, tol: f64, pol: &TruncationPolicy) -> Result<CheckReport> {
    if !matches!(id, AlgebraId::Aqp | AlgebraId::DYrV8 | AlgebraId::UqVertex | AlgebraId::DY) {
        return Err(Error::Config(format!("{id} has no Pauli factorization")));
    }
    if samples.len() < 3 {
        return Err(Error::Config("need at least 3 spectral samples".into()));
    }
    let kind = id.spectral();
    let mut js = Vec::new();
    let mut excluded = Vec::new();
    let mut out_of_span: f64 = 0.0;
    for &x in samples {
        let pt = params.with_spectral(kind, x);
        let dec = pauli_decompose(&eval_core(id, &pt, pol)?);
        out_of_span = out_of_span.max(dec.residual);
        match structure_constants(&dec) {
            Ok(j) => js.push(j),
            Err(Error::Singular(_)) => excluded.push(x.to_string()),
            Err(e) => return Err(e),
        }
    }
    if js.len() < 2 {
        return Err(Error::Singular(format!("{id}: structure constants singular at almost every sample")));
    }
    let mut dev: f64 = 0.0;
    for a in &js {
        for b in &js {
            dev = dev.max(a.max_diff(b));
        }
    }
    let j = js[0];
    let mut rep = CheckReport::for_algebra("z_independence", id, *params, dev, tol)?
        .detail("J12", j.j12)
        .detail("J23", j.j23)
        .detail("J31", j.j31)
        .detail("out_of_span", format!("{out_of_span:.3e}"));
    if !excluded.is_empty() {
        rep = rep.detail("excluded_samples", excluded.join(" "));
    }
    Ok(rep)
}

/// Deviation of the trigonometric vertex entry's constants from
/// `J12 = -J31 = tan^2(pi/2r)`, `J23 = 0`.
pub fn trig_pattern_residual(r: f64, beta: C, pol: &TruncationPolicy) -> Result<f64> {
    let j = structure_constants_of(AlgebraId::DYrV8, &ParamPoint::new().beta(beta).r(re(r)), pol)?;
    let t = (std::f64::consts::PI / (2.0 * r)).tan().powi(2);
    Ok([(j.j12 - t).norm(), j.j23.norm(), (j.j31 + t).norm()].into_iter().fold(0.0, f64::max))
}

/// Spin-1/2 generators.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRep {
    pub e: DMat,
    pub f: DMat,
    pub h: DMat,
    /// Group-like element of the q-deformed presentation.
    pub t: Option<DMat>,
}

/// Choice of the group-like generator in the q-deformed spin-1/2 representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TConvention {
    /// `t = q^h = diag(q, 1/q)`.
    QPowH,
    /// `t = diag(q^{1/2}, q^{-1/2})`.
    Half,
    /// `t = diag(q^{-1/2}, q^{1/2})`.
    HalfInverse,
}

fn dm(rows: [[C; 2]; 2]) -> DMat {
    DMat::from_fn(2, 2, |i, j| rows[i][j])
}

impl FiniteRep {
    pub fn spin_half() -> Self {
        FiniteRep {
            e: dm([[ZERO, ONE], [ZERO, ZERO]]),
            f: dm([[ZERO, ZERO], [ONE, ZERO]]),
            h: dm([[ONE, ZERO], [ZERO, -ONE]]),
            t: None,
        }
    }

    pub fn spin_half_q(q: C, conv: TConvention) -> Self {
        let (a, b) = match conv {
            TConvention::QPowH => (q, q.inv()),
            TConvention::Half => (q.sqrt(), q.sqrt().inv()),
            TConvention::HalfInverse => (q.sqrt().inv(), q.sqrt()),
        };
        FiniteRep {
            t: Some(dm([[a, ZERO], [ZERO, b]])),
            ..FiniteRep::spin_half()
        }
    }

    pub fn dim(&self) -> usize {
        self.e.nrows()
    }

    /// Classical coproduct `x -> x (x) 1 + 1 (x) x` of two representations.
    pub fn tensor(&self, other: &FiniteRep) -> Self {
        let (i1, i2) = (DMat::identity(self.dim(), self.dim()), DMat::identity(other.dim(), other.dim()));
        let d = |a: &DMat, b: &DMat| a.kronecker(&i2) + i1.kronecker(b);
        FiniteRep {
            e: d(&self.e, &other.e),
            f: d(&self.f, &other.f),
            h: d(&self.h, &other.h),
            t: None,
        }
    }
}

/// Parameters of a finite universal twist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UniversalTwist {
    /// q-deformed twist with dynamical parameter `w`.
    QCase { q: C, w: C },
    /// Classical twist with dynamical parameter `s`.
    Classical { s: C },
}

fn is_diagonal(m: &DMat) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] == ZERO))
}

/// Rows of `m` that are not identically zero.
fn image_rows(m: &DMat) -> Vec<bool> {
    (0..m.nrows()).map(|i| (0..m.ncols()).any(|j| m[(i, j)].norm() > 0.0)).collect()
}

/// Evaluate the universal twist on `rep1 (x) rep2`. The series stops at the
/// first power of `e` that vanishes; `pol.max_terms` bounds it otherwise.
pub fn universal_twist_eval(kind: UniversalTwist, rep1: &FiniteRep, rep2: &FiniteRep, pol: &TruncationPolicy) -> Result<DMat> {
    let (d1, d2) = (rep1.dim(), rep2.dim());
    if !is_diagonal(&rep1.h) {
        return Err(Error::Config("the weight generator must be diagonal".into()));
    }
    let (a_op, b_op) = match kind {
        UniversalTwist::Classical { .. } => (rep1.e.clone(), rep2.f.clone()),
        UniversalTwist::QCase { .. } => {
            let t1 = rep1.t.as_ref().ok_or_else(|| Error::Config("q-case needs t".into()))?;
            let t2 = rep2.t.as_ref().ok_or_else(|| Error::Config("q-case needs t".into()))?;
            if !is_diagonal(t1) {
                return Err(Error::Config("t must be diagonal".into()));
            }
            (&rep1.e * t1, t2 * &rep2.f)
        }
    };
    let mut out = DMat::identity(d1 * d2, d1 * d2);
    let mut an = DMat::identity(d1, d1);
    let mut bn = DMat::identity(d2, d2);
    // diagonal of the accumulated (inverse) prefactor acting on the first factor
    let mut pref = vec![ONE; d1];
    for n in 1..=pol.max_terms {
        an = &an * &a_op;
        bn = &bn * &b_op;
        let rows = image_rows(&an);
        if !rows.iter().any(|&x| x) {
            return Ok(out);
        }
        let nf = n as f64;
        for i in 0..d1 {
            if !rows[i] {
                pref[i] = ZERO;
                continue;
            }
            let (num, den) = match kind {
                UniversalTwist::Classical { s } => (ONE, (nf - s - rep1.h[(i, i)]) * nf),
                UniversalTwist::QCase { q, w } => {
                    let t2 = rep1.t.as_ref().unwrap()[(i, i)].powi(2);
                    let x = q.powi(-2);
                    // new factors of (n)_x! and (x w t^2; x)_n
                    let qn = (1.0 - x.powi(n as i32)) / (1.0 - x);
                    let dnm = 1.0 - x.powi(n as i32) * w * t2;
                    (q * q * w * (q - q.inv()), qn * dnm)
                }
            };
            if den.norm() < 1e-300 {
                return Err(Error::Pole(format!("universal twist denominator vanishes at order {n}")));
            }
            pref[i] *= num / den;
        }
        let d = DMat::from_diagonal(&nalgebra::DVector::from_vec(pref.clone()));
        out += (&d * &an).kronecker(&bn);
    }
    Err(Error::Truncation {
        what: "universal twist series",
        terms: pol.max_terms,
        partial: out[(0, 0)],
    })
}

fn to_mat4(m: &DMat) -> Mat4 {
    Mat4::from_fn(|i, j| m[(i, j)])
}

/// Entrywise distance of the two-term series in spin-1/2 (x) spin-1/2 from
/// the displayed finite twist matrix.
pub fn universal_vs_displayed(kind: UniversalTwist, conv: TConvention, pol: &TruncationPolicy) -> Result<f64> {
    let (series, id, pt) = match kind {
        UniversalTwist::QCase { q, w } => {
            let rep = FiniteRep::spin_half_q(q, conv);
            (universal_twist_eval(kind, &rep, &rep, pol)?, TwistId::Fi, ParamPoint::new().q(q).w(w))
        }
        UniversalTwist::Classical { s } => {
            let rep = FiniteRep::spin_half();
            (universal_twist_eval(kind, &rep, &rep, pol)?, TwistId::Fii, ParamPoint::new().s(s))
        }
    };
    let displayed = eval_twist(id, None, &pt, 1.0, pol)?.core;
    Ok(crate::linalg::max_abs_diff(&to_mat4(&series), &displayed))
}

fn classical_spin_half(s: C, pol: &TruncationPolicy) -> Result<DMat> {
    let rep = FiniteRep::spin_half();
    universal_twist_eval(UniversalTwist::Classical { s }, &rep, &rep, pol)
}

/// Shift-omitted variant of the cocycle; `conv = None` drops the shift.
fn cocycle_residual(s: C, conv: Option<ShiftConvention>, pol: &TruncationPolicy) -> Result<f64> {
    let one = FiniteRep::spin_half();
    let two = one.tensor(&one);
    let i2 = DMat::identity(2, 2);
    let f12 = classical_spin_half(s, pol)?;
    // (Delta (x) id) F on legs (12),3 and (id (x) Delta) F on legs 1,(23)
    let left_coprod = universal_twist_eval(UniversalTwist::Classical { s }, &two, &one, pol)?;
    let right_coprod = universal_twist_eval(UniversalTwist::Classical { s }, &one, &two, pol)?;
    let lhs = f12.kronecker(&i2) * left_coprod;
    let f23 = match conv {
        None => i2.kronecker(&f12),
        Some(cv) => {
            let mut acc = DMat::zeros(8, 8);
            for k in 0..2 {
                let mut proj = DMat::zeros(2, 2);
                proj[(k, k)] = ONE;
                let wt = crate::checks::weight(k);
                let shifted = classical_spin_half(s + cv.sign * wt * cv.delta, pol)?;
                acc += proj.kronecker(&shifted);
            }
            acc
        }
    };
    let rhs = f23 * right_coprod;
    Ok((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Shifted cocycle condition of the classical twist in spin-1/2 cubed, with
/// the shift on leg 1 realized by weight projectors.
pub fn shifted_cocycle_check(kind: UniversalTwist, conv: ShiftConvention, tol: f64, pol: &TruncationPolicy) -> Result<CheckReport> {
    let UniversalTwist::Classical { s } = kind else {
        return Err(Error::Config("the shifted cocycle is evaluated for the classical twist only".into()));
    };
    let res = cocycle_residual(s, Some(conv), pol)?;
    Ok(CheckReport::new("shifted_cocycle", "Fii", "finite", ParamPoint::new().s(s), res, tol)?
        .detail("delta", conv.delta)
        .detail("sign", conv.sign))
}

/// Same identity with the shift on the `F23` factor omitted; expected to fail.
pub fn shifted_cocycle_control(s: C, tol: f64, pol: &TruncationPolicy) -> Result<CheckReport> {
    let res = cocycle_residual(s, None, pol)?;
    Ok(CheckReport::new("shifted_cocycle_control", "Fii", "finite", ParamPoint::new().s(s), res, tol)?.expecting_failure())
}

/// Shift convention of the finite cocycle: the first candidate whose residual
/// is below `tol` at every probe.
pub fn select_finite_convention(probes: &[C], tol: f64, pol: &TruncationPolicy) -> Result<ShiftConvention> {
    for cv in ShiftConvention::CANDIDATES {
        let mut ok = true;
        for &s in probes {
            if cocycle_residual(s, Some(cv), pol)? > tol {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(cv);
        }
    }
    Err(Error::Config("no shift convention satisfies the finite cocycle".into()))
}

/// Errors of the q-deformed twist against the classical one along
/// `q = 1 - eps`, `w = q^{2s}`.
pub fn q_to_classical_errors(s: C, eps: &[f64], pol: &TruncationPolicy) -> Result<Vec<(f64, f64)>> {
    let target = classical_spin_half(s, pol)?;
    eps.iter()
        .map(|&e| {
            let q = re(1.0 - e);
            let w = (2.0 * s * q.ln()).exp();
            let rep = FiniteRep::spin_half_q(q, TConvention::QPowH);
            let m = universal_twist_eval(UniversalTwist::QCase { q, w }, &rep, &rep, pol)?;
            Ok((e, (m - &target).iter().map(|z| z.norm()).fold(0.0, f64::max)))
        })
        .collect()
}

pub fn q_to_classical_check(s: C, tol: f64, pol: &TruncationPolicy) -> Result<CheckReport> {
    let errs = q_to_classical_errors(s, &DEFAULT_EPS, pol)?;
    let monotone = errs.windows(2).all(|w| w[1].1 < w[0].1);
    let ext = crate::limits::richardson_extrapolate(&errs)?;
    let res = if monotone { ext.value.abs() } else { errs[0].1 };
    let series: Vec<String> = errs.iter().map(|(e, r)| format!("{e}:{r:.3e}")).collect();
    Ok(CheckReport::new("finite_q_to_classical", "Fi=>Fii", "finite", ParamPoint::new().s(s), res, tol)?
        .detail("samples", series.join(" "))
        .detail("order", format!("{:.2}", ext.order)))
}

/// Structure constants of the elliptic vertex entry along the scaling path
/// against those of its trigonometric limit.
pub fn sklyanin_scaling_errors(beta: C, r: f64, eps: &[f64], pol: &TruncationPolicy) -> Result<Vec<(f64, f64)>> {
    let target = structure_constants_of(AlgebraId::DYrV8, &ParamPoint::new().beta(beta).r(re(r)), pol)?;
    eps.iter()
        .map(|&e| {
            let q = 1.0 - e;
            let lq = q.ln();
            let pt = ParamPoint::new()
                .q(re(q))
                .z((c(0.0, 1.0) * beta / std::f64::consts::PI * lq).exp())
                .p(re((2.0 * r * lq).exp()));
            let j = structure_constants_of(AlgebraId::Aqp, &pt, pol)?;
            Ok((e, j.max_diff(&target)))
        })
        .collect()
}
