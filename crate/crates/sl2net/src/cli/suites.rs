//! Work items of each suite. Parameters are drawn up front, sequentially per
//! suite, so the outcome does not depend on the number of workers or on which
//! other suites were selected.

use super::config::{Suite, SuiteConfig};
use super::report::{Conventions, Entry, Outcome, THETA_CONVENTION};
use crate::checks::{
    crossing_check, default_conjugator, dybe_check, dybe_control, quasiperiodicity_check, select_shift_convention, unitarity_check,
    ybe_check, CheckReport, ShiftConvention, CONTROL_FLOOR,
};
use crate::error::{Error, Result};
use crate::finite::{
    q_to_classical_check, select_finite_convention, shifted_cocycle_check, shifted_cocycle_control, sklyanin_scaling_errors,
    structure_constants_of, trig_pattern_residual, universal_vs_displayed, z_independence_check, TConvention, UniversalTwist,
};
use crate::limits::{face_square_check, limit_check, richardson_extrapolate, standard_edges, DEFAULT_EPS, DEFAULT_LIMIT_TOL};
use crate::linalg::C;
use crate::rmatrix::{sample_beta, sample_modulus, sample_point, sample_s, AlgebraId, ParamPoint, Spectral};
use crate::specfun::laws::{law_residual, sample_args, Law};
use crate::specfun::TruncationPolicy;
use crate::twistnet::{
    check_composition, check_twist_edge, compositions, eps_independence_check, network, sample_edge_point, twisted_unitarity_check,
    TwistEdge, DEFAULT_EPS as TWIST_EPS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Entries with a plain Yang-Baxter equation.
pub const YBE_ENTRIES: [AlgebraId; 9] = [
    AlgebraId::Aqp,
    AlgebraId::UqVertex,
    AlgebraId::UqFace,
    AlgebraId::DYrV8,
    AlgebraId::DYrV6,
    AlgebraId::DY,
    AlgebraId::DYrF,
    AlgebraId::FiniteUq,
    AlgebraId::FiniteClassical,
];

/// Affine dynamical entries; the shift convention is selected on these and
/// the suppressed-shift control runs on each of them.
pub const DYBE_ENTRIES: [AlgebraId; 6] = [
    AlgebraId::Bqpl,
    AlgebraId::UqLambda,
    AlgebraId::DYrs,
    AlgebraId::DYs,
    AlgebraId::DYrsMinusInf,
    AlgebraId::UqLambdaGamma,
];

/// Finite dynamical entries, gated with the selected convention.
pub const DYBE_FINITE: [AlgebraId; 2] = [AlgebraId::FiniteUs, AlgebraId::FiniteBql];

/// Gauge-transformed face entries, recorded only: their shifted evaluations
/// reach entries of order 1e10 at small q, where the absolute residual
/// reflects rounding of the large terms.
pub const DYBE_INFO: [AlgebraId; 2] = [AlgebraId::AqpPi, AlgebraId::AhbarEtaPi];

/// Entries whose crossing relation is gated; the rest are recorded only.
pub const CROSSING_GATED: [AlgebraId; 7] = [
    AlgebraId::Aqp,
    AlgebraId::UqVertex,
    AlgebraId::UqFace,
    AlgebraId::DYrV8,
    AlgebraId::Bqpl,
    AlgebraId::UqLambda,
    AlgebraId::DYrs,
];
pub const CROSSING_INFO: [AlgebraId; 2] = [AlgebraId::DYrV6, AlgebraId::DY];

/// Entries expected to violate unitarity.
pub const NON_UNITARY: [AlgebraId; 3] = [AlgebraId::Aqp, AlgebraId::Bqpl, AlgebraId::UqVertex];

pub const SKLYANIN_R: [f64; 3] = [3.0, 5.0, 10.0];
pub const COCYCLE_POINTS: usize = 10;
pub const EPS_PROBES: [f64; 2] = [0.3, 2.5];

type Job = Box<dyn Fn(&TruncationPolicy) -> Result<Outcome> + Send + Sync>;

pub struct Item {
    pub suite: Suite,
    pub tag: String,
    pub gated: bool,
    pub check_id: &'static str,
    pub subject: String,
    job: Job,
}

impl Item {
    fn new(suite: Suite, tag: &str, gated: bool, check_id: &'static str, subject: impl Into<String>, job: Job) -> Self {
        Item { suite, tag: tag.to_string(), gated, check_id, subject: subject.into(), job }
    }

    fn check<F>(suite: Suite, tag: &str, gated: bool, check_id: &'static str, subject: impl Into<String>, f: F) -> Self
    where
        F: Fn(&TruncationPolicy) -> Result<CheckReport> + Send + Sync + 'static,
    {
        Self::new(suite, tag, gated, check_id, subject, Box::new(move |pol| f(pol).map(Outcome::Check)))
    }

    fn run(&self, pol: &TruncationPolicy) -> Entry {
        let outcome = match (self.job)(pol) {
            Ok(o) => o,
            Err(e) => Outcome::Error { check_id: self.check_id.to_string(), subject: self.subject.clone(), message: e.to_string() },
        };
        Entry::new(self.suite, &self.tag, self.gated, outcome)
    }
}

/// Generator of one suite, independent of the other suites.
fn suite_rng(cfg: &SuiteConfig, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ ((suite as u64 + 1) << 56))
}

fn spectral_sample<R: Rng>(id: AlgebraId, rng: &mut R) -> C {
    match id.spectral().param() {
        Some(p) => sample_point(id, rng).get(p).unwrap_or(C::new(1.0, 0.0)),
        None => C::new(1.0, 0.0),
    }
}

fn spectral_of(id: AlgebraId, pt: &ParamPoint) -> Option<C> {
    match id.spectral() {
        Spectral::Constant => Some(C::new(1.0, 0.0)),
        kind => pt.spectral(kind),
    }
}

/// Explicit points for `id` followed by `n` random ones, each with a second
/// spectral argument.
fn points_for(cfg: &SuiteConfig, id: AlgebraId, n: usize, rng: &mut ChaCha8Rng) -> Vec<(ParamPoint, C, C)> {
    let mut out = Vec::new();
    for pt in cfg.explicit_for(id) {
        let x = spectral_of(id, pt).unwrap_or_else(|| spectral_sample(id, rng));
        out.push((*pt, x, spectral_sample(id, rng)));
    }
    for _ in 0..n {
        let pt = sample_point(id, rng);
        let x = spectral_of(id, &pt).unwrap_or(C::new(1.0, 0.0));
        out.push((pt, x, spectral_sample(id, rng)));
    }
    out
}

pub struct Plan {
    pub items: Vec<Item>,
    pub conventions: Conventions,
}

pub fn plan(cfg: &SuiteConfig) -> Plan {
    let mut items = Vec::new();
    let mut conventions = Conventions { delta: None, delta_finite: None, theta: THETA_CONVENTION };
    for suite in cfg.suite.expand() {
        let mut rng = suite_rng(cfg, suite);
        match suite {
            Suite::Ybe => ybe_items(cfg, &mut rng, &mut items),
            Suite::Dybe => conventions.delta = dybe_items(cfg, &mut rng, &mut items),
            Suite::Twists => twist_items(cfg, &mut rng, &mut items),
            Suite::Properties => property_items(cfg, &mut rng, &mut items),
            Suite::Finite => conventions.delta_finite = finite_items(cfg, &mut rng, &mut items),
            Suite::Limits => limit_items(cfg, &mut items),
            Suite::Specfun => specfun_items(cfg, &mut rng, &mut items),
            Suite::All => unreachable!("expanded above"),
        }
    }
    Plan { items, conventions }
}

/// Run the items on a pool of `jobs` workers; entries keep the plan order.
pub fn execute(items: &[Item], pol: &TruncationPolicy, jobs: usize) -> Result<Vec<Entry>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(|it| it.run(pol)).collect()))
}

fn ybe_items(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, items: &mut Vec<Item>) {
    let tol = cfg.tol_for("ybe", 1e-9);
    for id in YBE_ENTRIES {
        for (pt, x, y) in points_for(cfg, id, cfg.points, rng) {
            items.push(Item::check(Suite::Ybe, id.family(), true, "ybe", id.name(), move |pol| ybe_check(id, x, y, &pt, pol, tol)));
        }
    }
}

fn dybe_items(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, items: &mut Vec<Item>) -> Option<ShiftConvention> {
    let tol = cfg.tol_for("dybe", 1e-9);
    let floor = cfg.floor_for("dybe_control", CONTROL_FLOOR);
    let probes: Vec<_> = DYBE_ENTRIES
        .iter()
        .map(|&id| {
            let (pt, x, y) = points_for(&SuiteConfig::default(), id, 1, rng).remove(0);
            (id, x, y, pt)
        })
        .collect();
    let conv = select_shift_convention(&probes, &cfg.truncation, 1e-9);
    for id in DYBE_ENTRIES.into_iter().chain(DYBE_FINITE).chain(DYBE_INFO) {
        let control = DYBE_ENTRIES.contains(&id);
        let gated = !DYBE_INFO.contains(&id);
        for (pt, x, y) in points_for(cfg, id, cfg.points, rng) {
            match conv {
                Some(cv) => items.push(Item::check(Suite::Dybe, id.family(), gated, "dybe", id.name(), move |pol| {
                    dybe_check(id, x, y, &pt, cv, pol, tol)
                })),
                None => items.push(Item::new(
                    Suite::Dybe,
                    id.family(),
                    gated,
                    "dybe",
                    id.name(),
                    Box::new(|_| Err(Error::Config("no shift convention satisfies the dynamical YBE at the probes".into()))),
                )),
            }
            if control {
                items.push(Item::check(Suite::Dybe, id.family(), true, "dybe_control", id.name(), move |pol| {
                    let mut rep = dybe_control(id, x, y, &pt, pol)?;
                    rep.tol = floor;
                    rep.pass = rep.residual <= floor;
                    Ok(rep)
                }));
            }
        }
    }
    conv
}

fn twist_items(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, items: &mut Vec<Item>) {
    let edge_tol = cfg.tol_for("twist_edge", 1e-8);
    for edge in network() {
        for _ in 0..cfg.points {
            let pt = sample_edge_point(&edge, rng);
            items.push(Item::check(Suite::Twists, edge.kind.name(), true, "twist_edge", edge.name(), move |pol| {
                check_twist_edge(&edge, &pt, TWIST_EPS, pol, edge_tol)
            }));
        }
    }
    let comp_tol = cfg.tol_for("composition", 1e-10);
    for comp in compositions() {
        for _ in 0..cfg.points {
            let pt = comp.sample(rng);
            items.push(Item::check(Suite::Twists, "composition", true, "composition", comp.name(), move |pol| {
                check_composition(&comp, &pt, pol, comp_tol)
            }));
        }
    }
    let unit_tol = cfg.tol_for("twisted_unitarity", 1e-9);
    for edge in h_edges() {
        for _ in 0..cfg.points {
            let pt = sample_edge_point(&edge, rng);
            items.push(Item::check(Suite::Twists, edge.kind.name(), true, "twisted_unitarity", edge.name(), move |pol| {
                twisted_unitarity_check(&edge, &pt, pol, unit_tol)
            }));
        }
    }
    let floor = cfg.floor_for("unitarity", CONTROL_FLOOR);
    for id in NON_UNITARY {
        for (pt, x, _) in points_for(cfg, id, cfg.points, rng) {
            items.push(Item::check(Suite::Twists, id.family(), true, "unitarity", id.name(), move |pol| {
                Ok(unitarity_check(id, x, &pt, pol, floor)?.expecting_failure())
            }));
        }
    }
}

/// Edges whose twist is one of the homothetical `H` family.
fn h_edges() -> Vec<TwistEdge> {
    network().into_iter().filter(|e| e.twist.name().starts_with('H')).collect()
}

fn property_items(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, items: &mut Vec<Item>) {
    let qp_tol = cfg.tol_for("quasiperiodicity", 1e-9);
    for id in [AlgebraId::Aqp, AlgebraId::DYrV8] {
        let conj = default_conjugator(id);
        for (pt, x, _) in points_for(cfg, id, cfg.points, rng) {
            items.push(Item::check(Suite::Properties, id.family(), true, "quasiperiodicity", id.name(), move |pol| {
                quasiperiodicity_check(id, x, &pt, conj, pol, qp_tol)
            }));
        }
    }
    let cr_tol = cfg.tol_for("crossing", 1e-9);
    for (id, gated) in CROSSING_GATED.iter().map(|&i| (i, true)).chain(CROSSING_INFO.iter().map(|&i| (i, false))) {
        for (pt, x, _) in points_for(cfg, id, cfg.points, rng) {
            items.push(Item::check(Suite::Properties, id.family(), gated, "crossing", id.name(), move |pol| {
                crossing_check(id, x, &pt, pol, cr_tol)
            }));
        }
    }
    let eps_tol = cfg.tol_for("eps_independence", 1e-9);
    for edge in h_edges() {
        for _ in 0..cfg.points {
            let pt = sample_edge_point(&edge, rng);
            items.push(Item::check(Suite::Properties, edge.kind.name(), true, "eps_independence", edge.name(), move |pol| {
                eps_independence_check(&edge, &pt, &EPS_PROBES, pol, eps_tol)
            }));
        }
    }
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

fn finite_items(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, items: &mut Vec<Item>) -> Option<ShiftConvention> {
    let n = cfg.points;
    let pat_tol = cfg.tol_for("sklyanin_pattern", 1e-10);
    let zi_tol = cfg.tol_for("z_independence", 1e-9);
    for r in SKLYANIN_R {
        for _ in 0..n {
            let beta = sample_beta(rng);
            let samples = [sample_beta(rng), sample_beta(rng), sample_beta(rng)];
            let subject = format!("DYrV8 r={r}");
            items.push(Item::check(Suite::Finite, "vertex", true, "sklyanin_pattern", subject.clone(), move |pol| {
                let res = trig_pattern_residual(r, beta, pol)?;
                CheckReport::for_algebra("sklyanin_pattern", AlgebraId::DYrV8, ParamPoint::new().beta(beta).r(re(r)), res, pat_tol)
            }));
            items.push(Item::check(Suite::Finite, "vertex", true, "z_independence", subject, move |pol| {
                z_independence_check(AlgebraId::DYrV8, &samples, &ParamPoint::new().r(re(r)), zi_tol, pol)
            }));
        }
    }
    for id in [AlgebraId::Aqp, AlgebraId::UqVertex] {
        for _ in 0..n {
            let pt = sample_point(id, rng);
            let samples: Vec<C> = (0..3).map(|_| sample_modulus(rng, 0.3, 0.9)).collect();
            items.push(Item::check(Suite::Finite, id.family(), true, "z_independence", id.name(), move |pol| {
                z_independence_check(id, &samples, &pt, zi_tol, pol)
            }));
        }
    }
    let dy_tol = cfg.tol_for("sklyanin_trivial", 1e-10);
    for _ in 0..n {
        let beta = sample_beta(rng);
        items.push(Item::check(Suite::Finite, "vertex", true, "sklyanin_trivial", "DY", move |pol| {
            let pt = ParamPoint::new().beta(beta);
            let j = structure_constants_of(AlgebraId::DY, &pt, pol)?;
            let res = j.as_array().iter().map(|v| v.norm()).fold(0.0, f64::max);
            CheckReport::for_algebra("sklyanin_trivial", AlgebraId::DY, pt, res, dy_tol)
        }));
    }
    let sc_tol = cfg.tol_for("sklyanin_scaling", DEFAULT_LIMIT_TOL);
    {
        let (beta, r) = (sample_beta(rng), 5.0);
        items.push(Item::check(Suite::Finite, "vertex", true, "sklyanin_scaling", "Aqp=>DYrV8", move |pol| {
            let errs = sklyanin_scaling_errors(beta, r, &DEFAULT_EPS, pol)?;
            let monotone = errs.windows(2).all(|w| w[1].1 < w[0].1);
            let ext = richardson_extrapolate(&errs)?;
            let res = if monotone { ext.value.abs() } else { errs[0].1 };
            let series: Vec<String> = errs.iter().map(|(e, v)| format!("{e}:{v:.3e}")).collect();
            Ok(CheckReport::new("sklyanin_scaling", "Aqp=>DYrV8", "vertex", ParamPoint::new().beta(beta).r(re(r)), res, sc_tol)?
                .detail("samples", series.join(" "))
                .detail("monotone", monotone))
        }));
    }
    let series_tol = cfg.tol_for("finite_series", 1e-12);
    for _ in 0..n {
        let q = re(rng.gen_range(0.3..0.9));
        let w = sample_modulus(rng, 0.55, 0.9);
        let s = sample_s(rng) + 1.5;
        items.push(Item::check(Suite::Finite, "finite", true, "finite_series", "Fi", move |pol| {
            let res = universal_vs_displayed(UniversalTwist::QCase { q, w }, TConvention::QPowH, pol)?;
            CheckReport::new("finite_series", "Fi", "finite", ParamPoint::new().q(q).w(w), res, series_tol)
        }));
        items.push(Item::check(Suite::Finite, "finite", true, "finite_series", "Fii", move |pol| {
            let res = universal_vs_displayed(UniversalTwist::Classical { s }, TConvention::QPowH, pol)?;
            CheckReport::new("finite_series", "Fii", "finite", ParamPoint::new().s(s), res, series_tol)
        }));
    }
    let co_tol = cfg.tol_for("shifted_cocycle", 1e-12);
    let co_floor = cfg.floor_for("shifted_cocycle_control", CONTROL_FLOOR);
    let probes: Vec<C> = (0..3).map(|_| sample_s(rng) + 1.5).collect();
    let conv = select_finite_convention(&probes, 1e-12, &cfg.truncation).ok();
    for _ in 0..COCYCLE_POINTS {
        let s = sample_s(rng) + 1.5;
        match conv {
            Some(cv) => items.push(Item::check(Suite::Finite, "finite", true, "shifted_cocycle", "Fii", move |pol| {
                shifted_cocycle_check(UniversalTwist::Classical { s }, cv, co_tol, pol)
            })),
            None => items.push(Item::new(
                Suite::Finite,
                "finite",
                true,
                "shifted_cocycle",
                "Fii",
                Box::new(|_| Err(Error::Config("no shift convention satisfies the finite cocycle at the probes".into()))),
            )),
        }
        items.push(Item::check(Suite::Finite, "finite", true, "shifted_cocycle_control", "Fii", move |pol| {
            shifted_cocycle_control(s, co_floor, pol)
        }));
    }
    let qc_tol = cfg.tol_for("finite_q_to_classical", DEFAULT_LIMIT_TOL);
    for _ in 0..3 {
        let s = sample_s(rng) + 1.5;
        items.push(Item::check(Suite::Finite, "finite", true, "finite_q_to_classical", "Fi=>Fii", move |pol| {
            q_to_classical_check(s, qc_tol, pol)
        }));
    }
    conv
}

fn limit_items(cfg: &SuiteConfig, items: &mut Vec<Item>) {
    let tol = cfg.tol_for("limit", DEFAULT_LIMIT_TOL);
    for edge in standard_edges() {
        let name = edge.name();
        let tag = edge.dst.family();
        let job: Job = Box::new(move |pol| limit_check(&edge, edge.eps, tol, pol).map(Outcome::Convergence));
        items.push(Item::new(Suite::Limits, tag, true, "limit", name, job));
    }
    let sq_tol = cfg.tol_for("limit_square", DEFAULT_LIMIT_TOL);
    items.push(Item::check(Suite::Limits, "face", true, "limit_square", "Bqpl=>DYs", move |pol| face_square_check(sq_tol, pol)));
}

fn specfun_items(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, items: &mut Vec<Item>) {
    for law in Law::ALL {
        let tol = cfg.tol_for(law.name(), 1e-10);
        for _ in 0..cfg.specfun_points {
            let args = sample_args(law, rng);
            items.push(Item::check(Suite::Specfun, "special_function", true, law.name(), law.name(), move |pol| {
                let res = law_residual(law, &args, pol)?;
                let list: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                Ok(CheckReport::new(law.name(), law.name(), "special_function", ParamPoint::new(), res, tol)?.detail("args", list.join(" ")))
            }));
        }
    }
}
