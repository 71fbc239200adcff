use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::embedding::{
    lower_bound_certificate, phi_star, t_distance, zeta, Constants, DirectionFamily,
    InequalityChain,
};
use crate::error::Result;
use crate::transport::{w2_tuples, wb_tuples, Ground, UnorderedTuple};
use crate::whitney::WhitneyDecomposition;

use super::formats::fmt_f64;
use super::sampling::sample_tuple;

const REL_TOL: f64 = 1e-9;

fn le(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * a.abs().max(b.abs())
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub domain: Domain,
    pub m: usize,
    pub exponent: f64,
    pub samples: usize,
    pub seed: u64,
    pub density: usize,
    pub constants: Constants,
}

impl ExperimentConfig {
    pub fn new(domain: Domain, m: usize, samples: usize, seed: u64) -> Self {
        let constants = Constants::for_dim(domain.dim());
        Self {
            domain,
            m,
            exponent: 2.0,
            samples,
            seed,
            density: 1,
            constants,
        }
    }

    /// `#`-prefixed lines describing the run.
    pub fn header(&self) -> String {
        let mut s = String::new();
        let c = &self.constants;
        writeln!(s, "# domain: {}", self.domain.to_json()).unwrap();
        writeln!(s, "# m: {}", self.m).unwrap();
        writeln!(s, "# exponent: {}", self.exponent).unwrap();
        writeln!(s, "# samples: {}", self.samples).unwrap();
        writeln!(s, "# seed: {}", self.seed).unwrap();
        writeln!(s, "# directions: {}", self.density).unwrap();
        writeln!(s, "# c0: {}", fmt_f64(c.c0)).unwrap();
        writeln!(s, "# c1: {}", fmt_f64(c.c1)).unwrap();
        writeln!(s, "# c2: {}", fmt_f64(c.c2)).unwrap();
        s
    }
}

/// Shared state for evaluating many pairs on one domain.
pub struct PairContext {
    pub whitney: WhitneyDecomposition,
    pub family: DirectionFamily,
    pub constants: Constants,
}

impl PairContext {
    pub fn new(domain: &Domain, density: usize, constants: Constants) -> Result<Self> {
        Ok(Self {
            whitney: WhitneyDecomposition::new(domain.clone()),
            family: DirectionFamily::standard(domain.dim() + 1, density)?,
            constants,
        })
    }

    pub fn domain(&self) -> &Domain {
        self.whitney.domain()
    }
}

/// Everything computed for one sampled pair.
#[derive(Clone, Debug)]
pub struct PairEvaluation {
    pub m: usize,
    /// Partial-transport distance with the configured exponent.
    pub wb: f64,
    /// Partial-transport distance with exponent 2.
    pub wb2: f64,
    /// `W_2` over the shortcut metric between the padded tuples.
    pub w2_delta: f64,
    pub t_dist: f64,
    pub zeta_dist: f64,
    pub chain: std::result::Result<InequalityChain, String>,
    /// Names of failed checks with details.
    pub violations: Vec<String>,
}

impl PairEvaluation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Computes the distances, the sandwich bounds and the certificate for one
/// pair of tuples with at most `m` interior points each.
pub fn evaluate_pair(
    ctx: &PairContext,
    p: &UnorderedTuple,
    q: &UnorderedTuple,
    m: usize,
    exponent: f64,
) -> Result<PairEvaluation> {
    let domain = ctx.domain();
    let c = &ctx.constants;
    let big_m = 2 * m;
    let pp = p.without_boundary().iota_pad(m)?;
    let qq = q.without_boundary().iota_pad(m)?;
    let wb = wb_tuples(domain, p, q, exponent)?;
    let wb2 = wb_tuples(domain, p, q, 2.0)?;
    let w2_delta = w2_tuples(Ground::Shortcut(domain), &pp, &qq, 2.0)?;
    let t_dist = t_distance(&phi_star(&ctx.whitney, &pp)?, &phi_star(&ctx.whitney, &qq)?)?;
    let zp = zeta(&ctx.whitney, &ctx.family, p, m)?;
    let zq = zeta(&ctx.whitney, &ctx.family, q, m)?;
    let zeta_dist = zp.distance(&zq)?;
    let chain = lower_bound_certificate(&ctx.whitney, c, &pp, &qq)
        .map(|cert| cert.chain)
        .map_err(|e| e.to_string());

    let (t2, w2) = (t_dist * t_dist, w2_delta * w2_delta);
    let mut violations = Vec::new();
    if (wb2 - w2_delta).abs() > REL_TOL * wb2.max(1.0) {
        violations.push(format!("padding_isometry: Wb_2 {wb2:e} vs W_2 {w2_delta:e}"));
    }
    if !le(t2, c.c0 * w2) {
        violations.push(format!("upper_sandwich: {t2:e} > c0 * {w2:e}"));
    }
    let lower = w2 / (c.c2 * (big_m as f64).powi(3));
    if !le(lower, t2) {
        violations.push(format!("lower_sandwich: {lower:e} > {t2:e}"));
    }
    match &chain {
        Ok(ch) => {
            if (ch.total - t2).abs() > REL_TOL * t2.max(1e-300) + 1e-15 {
                violations.push(format!("certificate_total: {:e} vs {t2:e}", ch.total));
            }
            if !le(ch.lower_bound(), ch.total) {
                violations.push("certificate_chain".into());
            }
        }
        Err(e) => violations.push(format!("certificate: {e}")),
    }
    if !le(zeta_dist, c.c0.sqrt() * wb2) {
        violations.push(format!("zeta_upper: {zeta_dist:e} > sqrt(c0) * {wb2:e}"));
    }
    Ok(PairEvaluation {
        m,
        wb,
        wb2,
        w2_delta,
        t_dist,
        zeta_dist,
        chain,
        violations,
    })
}

/// Ratio statistics over pairs at positive distance.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionSummary {
    pub pairs: usize,
    pub violations: usize,
    pub t_ratio_min: f64,
    pub t_ratio_max: f64,
    pub zeta_ratio_min: f64,
    pub zeta_ratio_max: f64,
}

impl DistortionSummary {
    pub fn from_pairs(rows: &[PairEvaluation]) -> Self {
        let mut s = Self {
            pairs: rows.len(),
            violations: rows.iter().filter(|r| !r.passed()).count(),
            t_ratio_min: f64::INFINITY,
            t_ratio_max: 0.0,
            zeta_ratio_min: f64::INFINITY,
            zeta_ratio_max: 0.0,
        };
        for r in rows.iter().filter(|r| r.wb2 > 0.0) {
            let t = r.t_dist / r.w2_delta;
            let z = r.zeta_dist / r.wb2;
            s.t_ratio_min = s.t_ratio_min.min(t);
            s.t_ratio_max = s.t_ratio_max.max(t);
            s.zeta_ratio_min = s.zeta_ratio_min.min(z);
            s.zeta_ratio_max = s.zeta_ratio_max.max(z);
        }
        s
    }

    /// Largest over smallest embedded-to-true ratio of the full embedding.
    pub fn zeta_distortion(&self) -> f64 {
        self.zeta_ratio_max / self.zeta_ratio_min
    }

    pub fn t_distortion(&self) -> f64 {
        self.t_ratio_max / self.t_ratio_min
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub rows: Vec<PairEvaluation>,
    pub summary: DistortionSummary,
    /// The CSV report with commented header and summary.
    pub text: String,
}

impl ExperimentReport {
    /// Indices and details of failing pairs.
    pub fn violations(&self) -> Vec<(usize, &PairEvaluation)> {
        self.rows.iter().enumerate().filter(|(_, r)| !r.passed()).collect()
    }
}

/// Samples `config.samples` pairs from `B_m` and evaluates each.
pub fn run_distortion_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let ctx = PairContext::new(&config.domain, config.density, config.constants)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows = Vec::with_capacity(config.samples);
    for _ in 0..config.samples {
        let p = sample_tuple(&mut rng, &config.domain, config.m)?;
        let q = sample_tuple(&mut rng, &config.domain, config.m)?;
        rows.push(evaluate_pair(&ctx, &p, &q, config.m, config.exponent)?);
    }
    let summary = DistortionSummary::from_pairs(&rows);

    let mut text = String::from("# command: distortion-experiment\n");
    text.push_str(&config.header());
    text.push_str("pair,wb,wb2,w2_delta,t_dist,zeta_dist,t_sq_over_w2_sq,zeta_over_wb2,cert_lower,cert_total,status\n");
    for (i, r) in rows.iter().enumerate() {
        let ratio = |a: f64, b: f64| if b > 0.0 { fmt_f64(a / b) } else { String::new() };
        let (lo, tot) = match &r.chain {
            Ok(c) => (fmt_f64(c.lower_bound()), fmt_f64(c.total)),
            Err(_) => (String::new(), String::new()),
        };
        let status = if r.passed() { "ok".to_string() } else { r.violations.join("; ").replace(',', " ") };
        writeln!(
            text,
            "{i},{},{},{},{},{},{},{},{lo},{tot},{status}",
            fmt_f64(r.wb),
            fmt_f64(r.wb2),
            fmt_f64(r.w2_delta),
            fmt_f64(r.t_dist),
            fmt_f64(r.zeta_dist),
            ratio(r.t_dist * r.t_dist, r.w2_delta * r.w2_delta),
            ratio(r.zeta_dist, r.wb2),
        )
        .unwrap();
    }
    let n = config.domain.dim() as f64;
    let shape = (config.m as f64).powf(n + 2.5);
    writeln!(text, "# pairs: {}", summary.pairs).unwrap();
    writeln!(text, "# violations: {}", summary.violations).unwrap();
    writeln!(text, "# t_distortion: {}", fmt_f64(summary.t_distortion())).unwrap();
    writeln!(text, "# zeta_ratio_min: {}", fmt_f64(summary.zeta_ratio_min)).unwrap();
    writeln!(text, "# zeta_ratio_max: {}", fmt_f64(summary.zeta_ratio_max)).unwrap();
    writeln!(text, "# zeta_distortion: {}", fmt_f64(summary.zeta_distortion())).unwrap();
    writeln!(text, "# m^(n+5/2): {}", fmt_f64(shape)).unwrap();
    Ok(ExperimentReport { rows, summary, text })
}
