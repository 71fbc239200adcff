//! Seeded invariant suites. Every suite draws its own stream from the base
//! seed, so suites can run alone or together with identical results.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{euclidean, Domain, ShortcutPoint};
use crate::embedding::{almgren_xi, w2_sq_vectors, Constants, DirectionFamily, LocalMap};
use crate::error::Result;
use crate::transport::{
    assignment_solve, coupling_from_shortcut, coupling_to_shortcut, wb_bruteforce, wb_tuples,
    CostMatrix, UnorderedTuple,
};
use crate::whitney::WhitneyDecomposition;

use super::barcode::barcode_distances;
use super::experiment::{evaluate_pair, DistortionSummary, PairContext, PairEvaluation};
use super::formats::BarcodeDiagram;
use super::sampling::{
    sample_ambient_coupling, sample_in_box, sample_point, sample_shortcut_coupling, sample_tuple,
};
use super::witness::nondoubling_witness;

const MAX_MESSAGES: usize = 10;

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failed: usize,
    /// The first few failure messages.
    pub failures: Vec<String>,
    /// Measured quantities worth printing.
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(msg());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_MESSAGES {
            self.failures.push(msg);
        }
    }

    fn ok<T>(&mut self, r: Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{what}: {e}"));
                None
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} checks, {} failed)", self.name, self.checks, self.failed)?;
        for n in &self.notes {
            write!(f, "\n    {n}")?;
        }
        for m in &self.failures {
            write!(f, "\n    failure: {m}")?;
        }
        Ok(())
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn unit_box(n: usize) -> Domain {
    Domain::open_box(vec![0.0; n], vec![1.0; n]).expect("valid box")
}

/// Domains exercised by the transport suites.
pub fn test_domains() -> Vec<(&'static str, Domain)> {
    vec![
        ("interval", unit_box(1)),
        ("square", unit_box(2)),
        ("upper_diagonal", Domain::upper_diagonal()),
        (
            "punctured_line",
            Domain::punctured(vec![vec![0.0], vec![0.7]]).expect("valid"),
        ),
        (
            "punctured_plane",
            Domain::punctured(vec![vec![0.0, 0.0], vec![1.0, 0.5]]).expect("valid"),
        ),
        (
            "complement_box",
            Domain::complement_box(vec![0.0, 0.0], vec![1.0, 1.0]).expect("valid"),
        ),
    ]
}

/// Scalar sizes of every suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteSizes {
    pub metric_triples: usize,
    pub assignment_matrices: usize,
    pub isometry_pairs: usize,
    pub couplings: usize,
    pub whitney_points: usize,
    pub whitney_pairs: usize,
    pub lambda_samples: usize,
    pub sandwich_pairs: usize,
    pub xi_pairs: usize,
    pub witness_points: usize,
    pub barcode_pairs: usize,
}

impl SuiteSizes {
    pub const FULL: Self = Self {
        metric_triples: 1000,
        assignment_matrices: 300,
        isometry_pairs: 200,
        couplings: 1000,
        whitney_points: 10_000,
        whitney_pairs: 10_000,
        lambda_samples: 10_000,
        sandwich_pairs: 500,
        xi_pairs: 1000,
        witness_points: 20,
        barcode_pairs: 300,
    };

    pub const QUICK: Self = Self {
        metric_triples: 100,
        assignment_matrices: 30,
        isometry_pairs: 20,
        couplings: 100,
        whitney_points: 500,
        whitney_pairs: 500,
        lambda_samples: 1000,
        sandwich_pairs: 50,
        xi_pairs: 100,
        witness_points: 20,
        barcode_pairs: 30,
    };
}

/// Shortcut-metric axioms and the basic comparisons with the Euclidean
/// distance and the complement distance.
pub fn suite_metric(seed: u64, triples: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("metric");
    let mut r = rng(seed, 1);
    for (name, d) in test_domains() {
        for _ in 0..triples {
            let pick = |r: &mut ChaCha8Rng| -> Result<ShortcutPoint> {
                Ok(if r.gen_bool(0.15) {
                    ShortcutPoint::Boundary
                } else {
                    ShortcutPoint::Interior(sample_point(r, &d)?)
                })
            };
            let Some(a) = rep.ok(pick(&mut r), name) else { continue };
            let Some(b) = rep.ok(pick(&mut r), name) else { continue };
            let Some(c) = rep.ok(pick(&mut r), name) else { continue };
            let dist = |x: &ShortcutPoint, y: &ShortcutPoint| d.shortcut_distance(x, y);
            let (Some(ab), Some(ba), Some(bc), Some(ac), Some(aa)) = (
                rep.ok(dist(&a, &b), name),
                rep.ok(dist(&b, &a), name),
                rep.ok(dist(&b, &c), name),
                rep.ok(dist(&a, &c), name),
                rep.ok(dist(&a, &a), name),
            ) else {
                continue;
            };
            rep.check(ab == ba, || format!("{name}: asymmetric {ab} vs {ba}"));
            rep.check(aa == 0.0, || format!("{name}: delta(a, a) = {aa}"));
            rep.check(ac <= ab + bc + 1e-12, || {
                format!("{name}: triangle {ac} > {ab} + {bc}")
            });
            if let (Some(x), Some(y)) = (a.coords(), b.coords()) {
                rep.check(ab <= euclidean(x, y), || format!("{name}: delta exceeds |x - y|"));
            }
        }
    }
    rep
}

fn heap_min(c: &CostMatrix) -> f64 {
    let n = c.size();
    let mut perm: Vec<usize> = (0..n).collect();
    let cost = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| c.get(i, j)).sum::<f64>();
    let mut best = cost(&perm);
    let mut stack = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            best = best.min(cost(&perm));
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    best
}

/// The assignment solver against exhaustive enumeration.
pub fn suite_assignment(seed: u64, matrices: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("assignment");
    let mut r = rng(seed, 2);
    for _ in 0..matrices {
        let n = r.gen_range(1..=6);
        let integer = r.gen_bool(0.3);
        let Some(c) = rep.ok(
            CostMatrix::from_fn(n, |_, _| {
                if integer {
                    r.gen_range(0..4) as f64
                } else {
                    r.gen::<f64>()
                }
            }),
            "matrix",
        ) else {
            continue;
        };
        let a = assignment_solve(&c);
        let mut seen = a.permutation.clone();
        seen.sort_unstable();
        rep.check(seen == (0..n).collect::<Vec<_>>(), || "not a permutation".into());
        let best = heap_min(&c);
        rep.check((a.total_cost - best).abs() <= 1e-12, || {
            format!("size {n}: solver {} vs exhaustive {best}", a.total_cost)
        });
        rep.check(assignment_solve(&c) == a, || "non-deterministic".into());
    }
    rep
}

/// Padded assignment against brute force over partial matchings, plus
/// symmetry and reordering invariance.
pub fn suite_isometry(seed: u64, pairs_per_domain: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("isometry");
    let mut r = rng(seed, 3);
    for (name, d) in test_domains() {
        for _ in 0..pairs_per_domain {
            let (s1, s2) = (r.gen_range(0..=4), r.gen_range(0..=4));
            let Some(p) = rep.ok(sample_tuple(&mut r, &d, s1), name) else { continue };
            let Some(q) = rep.ok(sample_tuple(&mut r, &d, s2), name) else { continue };
            for exponent in [1.0, 2.0] {
                let (Some(fast), Some(slow), Some(back)) = (
                    rep.ok(wb_tuples(&d, &p, &q, exponent), name),
                    rep.ok(wb_bruteforce(&d, &p, &q, exponent), name),
                    rep.ok(wb_tuples(&d, &q, &p, exponent), name),
                ) else {
                    continue;
                };
                rep.check((fast - slow).abs() <= 1e-9, || {
                    format!("{name} p={exponent}: assignment {fast} vs brute force {slow}")
                });
                rep.check((fast - back).abs() <= 1e-12, || {
                    format!("{name}: asymmetric {fast} vs {back}")
                });
                let mut rev = p.points().to_vec();
                rev.reverse();
                if let Some(pr) = rep.ok(UnorderedTuple::new(&d, rev), name) {
                    if let Some(v) = rep.ok(wb_tuples(&d, &pr, &q, exponent), name) {
                        rep.check(v == fast, || format!("{name}: order dependence"));
                    }
                }
                if let Some(v) = rep.ok(wb_tuples(&d, &p.with_boundary(2), &q, exponent), name) {
                    rep.check((v - fast).abs() <= 1e-12, || {
                        format!("{name}: boundary padding changed {fast} to {v}")
                    });
                }
            }
        }
    }
    rep
}

fn marginals_match(a: &[(Vec<f64>, f64)], b: &[(Vec<f64>, f64)]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|((x, m), (y, n))| x == y && (m - n).abs() <= 1e-12)
}

/// Both coupling transforms on random couplings.
pub fn suite_coupling(seed: u64, count: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("coupling");
    let mut r = rng(seed, 4);
    let domains = [
        ("interval", unit_box(1)),
        ("square", unit_box(2)),
        ("upper_diagonal", Domain::upper_diagonal()),
    ];
    for i in 0..count {
        let (name, d) = &domains[i % domains.len()];
        let k = r.gen_range(1..=4);
        let exponent = if r.gen_bool(0.5) { 1.0 } else { 2.0 };
        if let Some(g) = rep.ok(sample_ambient_coupling(&mut r, d, k), name) {
            if let Some(s) = rep.ok(coupling_to_shortcut(d, &g), name) {
                if let (Some(cs), Some(ce)) = (
                    rep.ok(s.shortcut_cost(d, exponent), name),
                    rep.ok(g.euclidean_cost(exponent), name),
                ) {
                    rep.check(cs <= ce, || format!("{name}: to_shortcut cost {cs} > {ce}"));
                }
            }
        }
        if let Some(g) = rep.ok(sample_shortcut_coupling(&mut r, d, k), name) {
            if let Some(a) = rep.ok(coupling_from_shortcut(d, &g), name) {
                if let (Some(ce), Some(cs)) = (
                    rep.ok(a.euclidean_cost(exponent), name),
                    rep.ok(g.shortcut_cost(d, exponent), name),
                ) {
                    rep.check(ce <= cs + 1e-12, || {
                        format!("{name}: from_shortcut cost {ce} > {cs}")
                    });
                }
                let (Some(s0), Some(s1), Some(t0), Some(t1)) = (
                    rep.ok(g.source_marginal(d), name),
                    rep.ok(a.source_marginal(d), name),
                    rep.ok(g.target_marginal(d), name),
                    rep.ok(a.target_marginal(d), name),
                ) else {
                    continue;
                };
                rep.check(marginals_match(&s0, &s1) && marginals_match(&t0, &t1), || {
                    format!("{name}: from_shortcut changed a marginal inside the domain")
                });
            }
        }
    }
    rep
}

/// Domains on which the Whitney suite runs.
pub fn whitney_domains() -> Vec<(&'static str, Domain)> {
    vec![
        ("interval", unit_box(1)),
        ("square", unit_box(2)),
        ("upper_diagonal", Domain::upper_diagonal()),
        (
            "punctured_plane",
            Domain::punctured(vec![vec![0.0, 0.0], vec![1.0, 0.5]]).expect("valid"),
        ),
    ]
}

/// Decomposition properties on every cube containing a sampled point, and
/// the distance estimates on sampled pairs.
pub fn suite_whitney(seed: u64, points: usize, pairs: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("whitney");
    let mut r = rng(seed, 5);
    for (name, d) in whitney_domains() {
        let w = WhitneyDecomposition::new(d.clone());
        let mut seen = HashSet::new();
        for _ in 0..points {
            let Some(x) = rep.ok(sample_point(&mut r, &d), name) else { continue };
            let Some(q) = rep.ok(w.cube_containing(&x), name) else { continue };
            rep.check(q.contains_point(&x) && w.is_whitney_cube(&q), || {
                format!("{name}: {q} does not contain {x:?}")
            });
            if seen.insert(q.clone()) {
                if let Some(c) = rep.ok(w.check_cube(&q), name) {
                    rep.check(c.passed(), || format!("{name}: {c:?}"));
                }
            }
        }
        for i in 0..pairs {
            let Some(x) = rep.ok(sample_point(&mut r, &d), name) else { continue };
            // every other pair is local, so that neighbouring cubes occur
            let y = if i % 2 == 0 {
                let dx = d.dist_to_complement(&x).unwrap_or(0.0);
                let y: Vec<f64> = x.iter().map(|v| v + dx * r.gen_range(-0.5..0.5)).collect();
                if !d.contains(&y).unwrap_or(false) {
                    continue;
                }
                y
            } else {
                let Some(y) = rep.ok(sample_point(&mut r, &d), name) else { continue };
                y
            };
            if let Some(e) = rep.ok(w.check_delta_estimates(&x, &y), name) {
                rep.check(e.passed(), || format!("{name}: {e:?}"));
            }
        }
        rep.notes.push(format!("{name}: {} distinct cubes checked", seen.len()));
    }
    rep
}

/// The six properties of the localization maps.
pub fn suite_localization(seed: u64, samples: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("localization");
    let mut r = rng(seed, 6);
    for (name, d) in [("interval", unit_box(1)), ("square", unit_box(2))] {
        let n = d.dim();
        let lip = 9.0 * ((n + 1) as f64).sqrt();
        let w = WhitneyDecomposition::new(d.clone());
        for _ in 0..samples {
            let Some(x0) = rep.ok(sample_point(&mut r, &d), name) else { continue };
            let Some(q) = rep.ok(w.cube_containing(&x0), name) else { continue };
            let map = LocalMap::new(&q);
            let l = q.side();
            let grow = |s: f64| -> (Vec<f64>, Vec<f64>) {
                (
                    q.lower().iter().map(|v| v - s).collect(),
                    q.upper().iter().map(|v| v + s).collect(),
                )
            };
            let (wlo, whi) = grow(l / 2.0);
            let (nlo, nhi) = grow(l / 8.0);

            // (1) Lipschitz on ambient points
            let (x, y) = (sample_in_box(&mut r, &wlo, &whi), sample_in_box(&mut r, &wlo, &whi));
            let (lx, ly) = (map.lambda_point(&x), map.lambda_point(&y));
            let gap = euclidean(&lx, &ly);
            rep.check(gap <= lip * euclidean(&x, &y), || {
                format!("{name} {q}: Lipschitz ratio {} at {x:?}, {y:?}", gap / euclidean(&x, &y))
            });
            // (2) support and (3) norm bound
            let far = map.dist_to_cube(&x) > l / 4.0;
            rep.check(!far || lx.iter().all(|&v| v == 0.0), || {
                format!("{name} {q}: non-zero outside the support at {x:?}")
            });
            let norm = lx.iter().map(|v| v * v).sum::<f64>().sqrt();
            rep.check(norm <= ((n + 1) as f64).sqrt() * l, || {
                format!("{name} {q}: norm {norm} at {x:?}")
            });
            // eta is 8/l-Lipschitz
            let de = (map.eta(&x) - map.eta(&y)).abs();
            rep.check(de <= 8.0 / l * euclidean(&x, &y) * (1.0 + 1e-12), || {
                format!("{name} {q}: eta ratio")
            });

            // (4) isometry near the cube
            let near = |r: &mut ChaCha8Rng| loop {
                let z = sample_in_box(r, &nlo, &nhi);
                if map.dist_to_cube(&z) <= l / 8.0 {
                    return z;
                }
            };
            let (u, v) = (near(&mut r), near(&mut r));
            let iso = euclidean(&map.lambda_point(&u), &map.lambda_point(&v));
            rep.check((iso - euclidean(&u, &v)).abs() <= 1e-12, || {
                format!("{name} {q}: isometry {iso} vs {}", euclidean(&u, &v))
            });

            // (5) Lipschitz for the shortcut metric, boundary included
            let pick = |r: &mut ChaCha8Rng| -> ShortcutPoint {
                if r.gen_bool(0.2) {
                    return ShortcutPoint::Boundary;
                }
                loop {
                    let z = sample_in_box(r, &wlo, &whi);
                    if d.contains(&z).unwrap_or(false) {
                        return ShortcutPoint::Interior(z);
                    }
                }
            };
            let (a, b) = (pick(&mut r), pick(&mut r));
            if let Some(delta) = rep.ok(d.shortcut_distance(&a, &b), name) {
                let gap = euclidean(&map.lambda(&a), &map.lambda(&b));
                rep.check(gap <= lip * delta, || {
                    format!("{name} {q}: shortcut ratio {} for {a:?}, {b:?}", gap / delta)
                });
            }

            // (6) lower bound from a point near the cube
            let b = pick(&mut r);
            let gap = euclidean(&map.lambda_point(&u), &map.lambda(&b));
            let reach = match &b {
                ShortcutPoint::Interior(z) => euclidean(&u, z) / (2.0 * (n as f64).sqrt()),
                ShortcutPoint::Boundary => f64::INFINITY,
            };
            rep.check(gap >= reach.min(l), || {
                format!("{name} {q}: lower bound {gap} < min({reach}, {l})")
            });
        }
    }
    rep
}

/// Moves every interior point by at most `scale` times its distance to the
/// complement.
fn jitter(r: &mut ChaCha8Rng, d: &Domain, p: &UnorderedTuple, scale: f64) -> Result<UnorderedTuple> {
    let mut pts = Vec::with_capacity(p.len());
    for a in p.points() {
        pts.push(match a {
            ShortcutPoint::Interior(x) => {
                let dx = d.dist_to_complement(x)?;
                ShortcutPoint::Interior(
                    x.iter().map(|v| v + scale * dx * r.gen_range(-0.5..0.5)).collect(),
                )
            }
            ShortcutPoint::Boundary => ShortcutPoint::Boundary,
        });
    }
    UnorderedTuple::new(d, pts)
}

/// The pairs shared by the sandwich, certificate and embedding suites:
/// tuples from `B_m` of the unit square with `m` cycling through 1, 2, 3.
/// Every fourth `q` is a small perturbation of `p` rather than independent.
pub fn sandwich_pairs(
    seed: u64,
    pairs: usize,
    constants: Constants,
) -> Result<Vec<PairEvaluation>> {
    let d = unit_box(2);
    let ctx = PairContext::new(&d, 1, constants)?;
    let mut r = rng(seed, 7);
    let mut out = Vec::with_capacity(pairs);
    for i in 0..pairs {
        let m = 1 + i % 3;
        let p = sample_tuple(&mut r, &d, m)?;
        let q = if i % 4 == 3 {
            jitter(&mut r, &d, &p, 1e-3)?
        } else {
            sample_tuple(&mut r, &d, m)?
        };
        out.push(evaluate_pair(&ctx, &p, &q, m, 2.0)?);
    }
    Ok(out)
}

fn suite_from_pairs(
    name: &'static str,
    rows: &[PairEvaluation],
    keys: &[&str],
) -> SuiteReport {
    let mut rep = SuiteReport::new(name);
    for (i, row) in rows.iter().enumerate() {
        let bad: Vec<&String> = row
            .violations
            .iter()
            .filter(|v| keys.iter().any(|k| v.starts_with(k)))
            .collect();
        rep.check(bad.is_empty(), || format!("pair {i} (m = {}): {bad:?}", row.m));
    }
    rep
}

/// Two-sided estimate for the per-cube embedding.
pub fn suite_sandwich(rows: &[PairEvaluation]) -> SuiteReport {
    let mut rep = suite_from_pairs(
        "sandwich",
        rows,
        &["padding_isometry", "upper_sandwich", "lower_sandwich"],
    );
    let s = DistortionSummary::from_pairs(rows);
    rep.notes.push(format!(
        "t / W_2 in [{:.6e}, {:.6e}]",
        s.t_ratio_min, s.t_ratio_max
    ));
    rep
}

/// The lower-bound certificate on every pair.
pub fn suite_certificate(rows: &[PairEvaluation]) -> SuiteReport {
    let mut rep = suite_from_pairs("certificate", rows, &["certificate"]);
    let with_e = rows
        .iter()
        .filter(|r| r.chain.as_ref().is_ok_and(|c| c.euclid_on_e > 0.0))
        .count();
    rep.notes.push(format!("{with_e} pairs matched points inside close cubes"));
    rep
}

/// Upper bound for the full embedding, with the empirical distortion.
pub fn suite_zeta(rows: &[PairEvaluation]) -> SuiteReport {
    let mut rep = suite_from_pairs("zeta", rows, &["zeta_upper"]);
    let s = DistortionSummary::from_pairs(rows);
    rep.check(s.zeta_distortion().is_finite(), || "distortion is not finite".into());
    rep.notes.push(format!(
        "|zeta p - zeta q| / Wb_2 in [{:.6e}, {:.6e}], distortion {:.6e}",
        s.zeta_ratio_min,
        s.zeta_ratio_max,
        s.zeta_distortion()
    ));
    rep
}

/// The sorted-projection sketch is 1-Lipschitz and vanishes at zero.
pub fn suite_xi(seed: u64, pairs: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("xi");
    let mut r = rng(seed, 8);
    for i in 0..pairs {
        let dim = 2 + i % 2;
        let density = i % 3;
        let Some(f) = rep.ok(DirectionFamily::standard(dim, density), "family") else { continue };
        let size = r.gen_range(1..=6);
        let draw = |r: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
            (0..size).map(|_| (0..dim).map(|_| r.gen_range(-1.0..1.0)).collect()).collect()
        };
        let t = draw(&mut r);
        let s = if r.gen_bool(0.3) {
            t.iter()
                .map(|v| v.iter().map(|x| x + 1e-3 * r.gen_range(-1.0..1.0)).collect())
                .collect()
        } else {
            draw(&mut r)
        };
        let (Some(a), Some(b), Some(z)) = (
            rep.ok(almgren_xi(&t, &f), "xi"),
            rep.ok(almgren_xi(&s, &f), "xi"),
            rep.ok(almgren_xi(&vec![vec![0.0; dim]; size], &f), "xi"),
        ) else {
            continue;
        };
        let Some((w2sq, _)) = rep.ok(w2_sq_vectors(&t, &s), "w2") else { continue };
        let gap = euclidean(&a, &b);
        rep.check(gap <= w2sq.sqrt() + 1e-12, || {
            format!("dim {dim} density {density} size {size}: {gap} > {}", w2sq.sqrt())
        });
        rep.check(z.iter().all(|&v| v == 0.0), || "xi(0) != 0".into());
    }
    rep
}

/// Equidistant configuration in the unit square.
pub fn suite_witness(points: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("witness");
    let d = unit_box(2);
    let eps = 0.01;
    let Some(zs) = rep.ok(nondoubling_witness(&d, points, eps), "witness") else {
        return rep;
    };
    rep.check(zs.len() == points, || format!("{} points", zs.len()));
    for z in &zs {
        let dz = d.dist_to_complement(z).unwrap_or(f64::NAN);
        rep.check((dz - eps / 2.0).abs() <= 1e-12, || format!("distance {dz} at {z:?}"));
    }
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            let a = ShortcutPoint::Interior(zs[i].clone());
            let b = ShortcutPoint::Interior(zs[j].clone());
            if let Some(v) = rep.ok(d.shortcut_distance(&a, &b), "delta") {
                rep.check((v - eps).abs() <= 1e-9, || format!("pair ({i}, {j}): {v}"));
            }
        }
    }
    rep
}

fn random_diagram(r: &mut ChaCha8Rng, size: usize) -> Result<BarcodeDiagram> {
    BarcodeDiagram::new(
        (0..size)
            .map(|_| {
                let b = r.gen_range(0.0..1.0);
                (b, b + r.gen_range(0.01..1.0))
            })
            .collect(),
    )
}

/// Diagram distances against brute force and the reference instance.
pub fn suite_barcode(seed: u64, pairs: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("barcode");
    let mut r = rng(seed, 9);
    let domain = Domain::upper_diagonal();
    for _ in 0..pairs {
        let k1 = r.gen_range(0..=6);
        let k2 = r.gen_range(0..=6 - k1);
        let (Some(a), Some(b)) = (
            rep.ok(random_diagram(&mut r, k1), "diagram"),
            rep.ok(random_diagram(&mut r, k2), "diagram"),
        ) else {
            continue;
        };
        for exponent in [1.0, 2.0] {
            let Some(m) = rep.ok(barcode_distances(&[a.clone(), b.clone()], exponent), "barcode")
            else {
                continue;
            };
            let (Some(ta), Some(tb)) = (rep.ok(a.to_tuple(), "tuple"), rep.ok(b.to_tuple(), "tuple"))
            else {
                continue;
            };
            if let Some(brute) = rep.ok(wb_bruteforce(&domain, &ta, &tb, exponent), "brute") {
                rep.check((m[0][1] - brute).abs() <= 1e-9, || {
                    format!("sizes ({k1}, {k2}) p={exponent}: {} vs {brute}", m[0][1])
                });
            }
        }
    }
    let single = BarcodeDiagram::new(vec![(0.0, 1.0)]).expect("valid");
    if let Some(m) = rep.ok(barcode_distances(&[single, BarcodeDiagram::default()], 2.0), "barcode")
    {
        rep.check((m[0][1] - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-12, || {
            format!("{{(0,1)}} vs {{}}: {}", m[0][1])
        });
    }
    rep
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub sizes: SuiteSizes,
    pub constants: Constants,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 20240611,
            sizes: SuiteSizes::FULL,
            constants: Constants::for_dim(2),
        }
    }
}

/// Runs every suite in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    let s = cfg.sizes;
    let mut out = vec![
        suite_metric(cfg.seed, s.metric_triples),
        suite_assignment(cfg.seed, s.assignment_matrices),
        suite_isometry(cfg.seed, s.isometry_pairs),
        suite_coupling(cfg.seed, s.couplings),
        suite_whitney(cfg.seed, s.whitney_points, s.whitney_pairs),
        suite_localization(cfg.seed, s.lambda_samples),
    ];
    match sandwich_pairs(cfg.seed, s.sandwich_pairs, cfg.constants) {
        Ok(rows) => {
            out.push(suite_sandwich(&rows));
            out.push(suite_certificate(&rows));
            out.push(suite_zeta(&rows));
        }
        Err(e) => {
            let mut rep = SuiteReport::new("sandwich");
            rep.checks += 1;
            rep.fail(e.to_string());
            out.push(rep);
        }
    }
    out.push(suite_xi(cfg.seed, s.xi_pairs));
    out.push(suite_witness(s.witness_points));
    out.push(suite_barcode(cfg.seed, s.barcode_pairs));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_run_passes_and_repeats() {
        let cfg = VerifyConfig {
            sizes: SuiteSizes::QUICK,
            ..VerifyConfig::default()
        };
        let a = run_all(&cfg);
        for rep in &a {
            assert!(rep.passed(), "{rep}");
        }
        assert_eq!(a, run_all(&cfg));
    }

    #[test]
    fn corrupted_constant_fails() {
        let mut cfg = VerifyConfig {
            sizes: SuiteSizes::QUICK,
            ..VerifyConfig::default()
        };
        cfg.constants.c0 = 1.0;
        assert!(run_all(&cfg).iter().any(|r| !r.passed()));
    }
}
