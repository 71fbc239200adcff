//! Discrete couplings and the two transforms relating couplings in the
//! ambient space to couplings over the completed domain.

use serde::{Deserialize, Serialize};

use crate::domain::{euclidean, Domain, ShortcutPoint};
use crate::error::{Error, Result};

use super::tuple::{check_exponent, pow_cost};

/// One end of a transport pair: raw coordinates (which may lie outside the
/// domain) or the glued boundary point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEndpoint", into = "RawEndpoint")]
pub enum Endpoint {
    Point(Vec<f64>),
    Boundary,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawEndpoint {
    Point(Vec<f64>),
    Tag(String),
}

impl TryFrom<RawEndpoint> for Endpoint {
    type Error = String;

    fn try_from(raw: RawEndpoint) -> std::result::Result<Self, String> {
        match raw {
            RawEndpoint::Point(x) => Ok(Endpoint::Point(x)),
            RawEndpoint::Tag(t) if t == "boundary" => Ok(Endpoint::Boundary),
            RawEndpoint::Tag(t) => Err(format!("unknown endpoint tag {t:?}")),
        }
    }
}

impl From<Endpoint> for RawEndpoint {
    fn from(e: Endpoint) -> Self {
        match e {
            Endpoint::Point(x) => RawEndpoint::Point(x),
            Endpoint::Boundary => RawEndpoint::Tag("boundary".into()),
        }
    }
}

impl Endpoint {
    fn as_shortcut(&self) -> ShortcutPoint {
        match self {
            Endpoint::Point(x) => ShortcutPoint::Interior(x.clone()),
            Endpoint::Boundary => ShortcutPoint::Boundary,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingPair {
    pub src: Endpoint,
    pub dst: Endpoint,
    pub mass: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CouplingPair>", into = "Vec<CouplingPair>")]
pub struct DiscreteCoupling {
    pairs: Vec<CouplingPair>,
}

impl TryFrom<Vec<CouplingPair>> for DiscreteCoupling {
    type Error = Error;

    fn try_from(pairs: Vec<CouplingPair>) -> Result<Self> {
        Self::new(pairs)
    }
}

impl From<DiscreteCoupling> for Vec<CouplingPair> {
    fn from(c: DiscreteCoupling) -> Self {
        c.pairs
    }
}

impl DiscreteCoupling {
    pub fn new(pairs: Vec<CouplingPair>) -> Result<Self> {
        let mut dim = None;
        for (i, pr) in pairs.iter().enumerate() {
            if !(pr.mass.is_finite() && pr.mass > 0.0) {
                return Err(Error::MalformedCoupling(format!(
                    "pair {i} has non-positive or non-finite mass {}",
                    pr.mass
                )));
            }
            for e in [&pr.src, &pr.dst] {
                if let Endpoint::Point(x) = e {
                    if x.iter().any(|v| !v.is_finite()) {
                        return Err(Error::MalformedCoupling(format!(
                            "pair {i} has a non-finite coordinate"
                        )));
                    }
                    match dim {
                        None => dim = Some(x.len()),
                        Some(d) if d != x.len() => {
                            return Err(Error::MalformedCoupling(format!(
                                "pair {i} mixes dimensions {d} and {}",
                                x.len()
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[CouplingPair] {
        &self.pairs
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coupling serialization is infallible")
    }

    /// `sum mass * |x - y|^exponent` over pairs of raw coordinates.
    pub fn euclidean_cost(&self, exponent: f64) -> Result<f64> {
        check_exponent(exponent)?;
        self.pairs
            .iter()
            .map(|pr| match (&pr.src, &pr.dst) {
                (Endpoint::Point(x), Endpoint::Point(y)) => {
                    Ok(pr.mass * pow_cost(euclidean(x, y), exponent))
                }
                _ => Err(Error::MalformedCoupling(
                    "Euclidean cost of a coupling with boundary endpoints".into(),
                )),
            })
            .sum()
    }

    /// `sum mass * delta(x, y)^exponent` over the completed domain.
    pub fn shortcut_cost(&self, domain: &Domain, exponent: f64) -> Result<f64> {
        check_exponent(exponent)?;
        self.pairs
            .iter()
            .map(|pr| {
                let d = domain.shortcut_distance(&pr.src.as_shortcut(), &pr.dst.as_shortcut())?;
                Ok(pr.mass * pow_cost(d, exponent))
            })
            .sum()
    }

    /// First-coordinate marginal restricted to the domain, merged by point.
    pub fn source_marginal(&self, domain: &Domain) -> Result<Vec<(Vec<f64>, f64)>> {
        marginal(domain, self.pairs.iter().map(|p| (&p.src, p.mass)))
    }

    /// Second-coordinate marginal restricted to the domain, merged by point.
    pub fn target_marginal(&self, domain: &Domain) -> Result<Vec<(Vec<f64>, f64)>> {
        marginal(domain, self.pairs.iter().map(|p| (&p.dst, p.mass)))
    }
}

fn marginal<'a>(
    domain: &Domain,
    ends: impl Iterator<Item = (&'a Endpoint, f64)>,
) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out: Vec<(ShortcutPoint, f64)> = Vec::new();
    for (e, mass) in ends {
        if let Endpoint::Point(x) = e {
            if domain.contains(x)? {
                out.push((ShortcutPoint::Interior(x.clone()), mass));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Vec<f64>, f64)> = Vec::new();
    for (p, m) in out {
        let x = p.coords().expect("interior").to_vec();
        match merged.last_mut() {
            Some((y, acc)) if *y == x => *acc += m,
            _ => merged.push((x, m)),
        }
    }
    Ok(merged)
}

/// Sends every endpoint outside the domain to the boundary point.
///
/// The shortcut cost of the result never exceeds the Euclidean cost of the
/// input. Pairs with both ends outside become boundary-to-boundary pairs,
/// which cost nothing.
pub fn coupling_to_shortcut(domain: &Domain, gamma: &DiscreteCoupling) -> Result<DiscreteCoupling> {
    let project = |e: &Endpoint| -> Result<Endpoint> {
        match e {
            Endpoint::Point(x) if domain.contains(x)? => Ok(e.clone()),
            Endpoint::Point(_) => Ok(Endpoint::Boundary),
            Endpoint::Boundary => Err(Error::MalformedCoupling(
                "ambient coupling already contains the boundary point".into(),
            )),
        }
    };
    let pairs = gamma
        .pairs
        .iter()
        .map(|pr| {
            Ok(CouplingPair {
                src: project(&pr.src)?,
                dst: project(&pr.dst)?,
                mass: pr.mass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DiscreteCoupling::new(pairs)
}

/// Turns a coupling over the completed domain into an ambient coupling.
///
/// Pairs on which the shortcut metric equals the Euclidean distance are kept.
/// Every other pair `(x, y)` is split into `x -> c(x)` and `c(y) -> y`, with
/// `c` the nearest complement point, so the Euclidean cost of the result is at
/// most the shortcut cost of the input. Boundary-to-boundary pairs vanish.
pub fn coupling_from_shortcut(
    domain: &Domain,
    gamma: &DiscreteCoupling,
) -> Result<DiscreteCoupling> {
    let mut pairs = Vec::with_capacity(gamma.pairs.len() * 2);
    for pr in &gamma.pairs {
        let mass = pr.mass;
        match (&pr.src, &pr.dst) {
            (Endpoint::Point(x), Endpoint::Point(y)) => {
                let dx = domain.interior_dist(x)?;
                let dy = domain.interior_dist(y)?;
                if euclidean(x, y) <= dx + dy {
                    pairs.push(pr.clone());
                } else {
                    pairs.push(CouplingPair {
                        src: pr.src.clone(),
                        dst: Endpoint::Point(domain.nearest_complement_point(x)?),
                        mass,
                    });
                    pairs.push(CouplingPair {
                        src: Endpoint::Point(domain.nearest_complement_point(y)?),
                        dst: pr.dst.clone(),
                        mass,
                    });
                }
            }
            (Endpoint::Point(x), Endpoint::Boundary) => pairs.push(CouplingPair {
                src: pr.src.clone(),
                dst: Endpoint::Point(domain.nearest_complement_point(x)?),
                mass,
            }),
            (Endpoint::Boundary, Endpoint::Point(y)) => pairs.push(CouplingPair {
                src: Endpoint::Point(domain.nearest_complement_point(y)?),
                dst: pr.dst.clone(),
                mass,
            }),
            (Endpoint::Boundary, Endpoint::Boundary) => {}
        }
    }
    DiscreteCoupling::new(pairs)
}
