//! Sorted-projection sketches of tuples and the sparse vectors they assemble.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr_free::unit_vector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transport::UnorderedTuple;
use crate::whitney::{DyadicCube, WhitneyDecomposition};

use super::sparse::phi_star;

const UNIT_TOL: f64 = 1e-12;

/// Unit directions in `R^dim` used by [`almgren_xi`].
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionFamily {
    dim: usize,
    directions: Vec<Vec<f64>>,
}

impl DirectionFamily {
    pub fn new(directions: Vec<Vec<f64>>) -> Result<Self> {
        let dim = directions
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidDirections("empty family".into()))?;
        if dim == 0 {
            return Err(Error::InvalidDirections("zero-dimensional directions".into()));
        }
        for (i, e) in directions.iter().enumerate() {
            if e.len() != dim {
                return Err(Error::InvalidDirections(format!(
                    "direction {i} has dimension {}, expected {dim}",
                    e.len()
                )));
            }
            let norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
            let unit = (norm - 1.0).abs() <= UNIT_TOL;
            if !unit {
                return Err(Error::InvalidDirections(format!(
                    "direction {i} has norm {norm}"
                )));
            }
        }
        Ok(Self { dim, directions })
    }

    /// The default family in `R^dim`.
    ///
    /// * density 0: the standard basis;
    /// * density 1: the basis plus `(e_i +- e_j) / sqrt(2)` for `i < j`;
    /// * density `d >= 2`: additionally `(d - 1) * dim` pseudo-random unit
    ///   vectors from a fixed seed.
    pub fn standard(dim: usize, density: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDirections("zero-dimensional directions".into()));
        }
        let mut dirs = Vec::new();
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            dirs.push(e);
        }
        if density >= 1 {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..dim {
                for j in i + 1..dim {
                    for sign in [1.0, -1.0] {
                        let mut e = vec![0.0; dim];
                        e[i] = s;
                        e[j] = sign * s;
                        dirs.push(e);
                    }
                }
            }
        }
        if density >= 2 {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + dim as u64);
            for _ in 0..(density - 1) * dim {
                dirs.push(unit_vector(&mut rng, dim));
            }
        }
        Self::new(dirs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of directions.
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }
}

/// Projects every vector of `t` onto each direction, sorts each projection
/// in decreasing order, concatenates, and scales by `h^(-1/2)`.
///
/// 1-Lipschitz from `W_2` and zero on the all-zeros tuple.
pub fn almgren_xi(t: &[Vec<f64>], family: &DirectionFamily) -> Result<Vec<f64>> {
    if let Some(bad) = t.iter().find(|v| v.len() != family.dim) {
        return Err(Error::DimensionMismatch {
            expected: family.dim,
            got: bad.len(),
        });
    }
    let scale = (family.len() as f64).sqrt().recip();
    let mut out = Vec::with_capacity(family.len() * t.len());
    let mut proj = Vec::with_capacity(t.len());
    for e in &family.directions {
        proj.clear();
        proj.extend(t.iter().map(|v| v.iter().zip(e).map(|(a, b)| a * b).sum::<f64>()));
        proj.sort_by(|a, b| b.total_cmp(a));
        out.extend(proj.iter().map(|v| v * scale));
    }
    Ok(out)
}

/// Finitely supported vector in the Hilbert sum over Whitney cubes.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseEmbeddingVector {
    tuple_size: usize,
    directions: usize,
    entries: BTreeMap<DyadicCube, Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVector {
    #[serde(rename = "M")]
    tuple_size: usize,
    h: usize,
    entries: BTreeMap<String, Vec<f64>>,
}

impl SparseEmbeddingVector {
    pub fn tuple_size(&self) -> usize {
        self.tuple_size
    }

    /// Number of projection directions `h`.
    pub fn directions(&self) -> usize {
        self.directions
    }

    pub fn entries(&self) -> &BTreeMap<DyadicCube, Vec<f64>> {
        &self.entries
    }

    /// Euclidean distance over the union of supports; absent cubes are zero.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.tuple_size != other.tuple_size || self.directions != other.directions {
            return Err(Error::SizeMismatch {
                left: self.tuple_size * self.directions,
                right: other.tuple_size * other.directions,
            });
        }
        let keys: BTreeSet<&DyadicCube> = self.entries.keys().chain(other.entries.keys()).collect();
        let mut acc = 0.0;
        for k in keys {
            match (self.entries.get(k), other.entries.get(k)) {
                (Some(a), Some(b)) => {
                    acc += a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()
                }
                (Some(a), None) | (None, Some(a)) => acc += a.iter().map(|x| x * x).sum::<f64>(),
                (None, None) => unreachable!(),
            }
        }
        Ok(acc.sqrt())
    }

    /// `{"M": .., "h": .., "entries": {"k,c_1,..": [..]}}` with keys in
    /// lexicographic order.
    pub fn to_json(&self) -> String {
        let raw = RawVector {
            tuple_size: self.tuple_size,
            h: self.directions,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        };
        serde_json::to_string(&raw).expect("vector serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawVector = serde_json::from_str(s)?;
        let width = raw.tuple_size * raw.h;
        let mut entries = BTreeMap::new();
        let mut dim = None;
        for (k, v) in raw.entries {
            let cube: DyadicCube = k.parse()?;
            if *dim.get_or_insert(cube.dim()) != cube.dim() {
                return Err(Error::Parse(format!("cube {k} has inconsistent dimension")));
            }
            if v.len() != width {
                return Err(Error::Parse(format!(
                    "entry {k} has length {}, expected M*h = {width}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parse(format!("entry {k} is not finite")));
            }
            entries.insert(cube, v);
        }
        Ok(Self {
            tuple_size: raw.tuple_size,
            directions: raw.h,
            entries,
        })
    }
}

/// Embeds a tuple of at most `m` interior points: pad to `2m` with the
/// boundary point, localize on every Whitney cube, then sketch each cube's
/// tuple with [`almgren_xi`].
pub fn zeta(
    w: &WhitneyDecomposition,
    family: &DirectionFamily,
    p: &UnorderedTuple,
    m: usize,
) -> Result<SparseEmbeddingVector> {
    if family.dim() != w.domain().dim() + 1 {
        return Err(Error::DimensionMismatch {
            expected: w.domain().dim() + 1,
            got: family.dim(),
        });
    }
    let padded = p.without_boundary().iota_pad(m)?;
    let t = phi_star(w, &padded)?;
    let entries = t
        .entries()
        .iter()
        .map(|(q, tuple)| Ok((q.clone(), almgren_xi(tuple, family)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(SparseEmbeddingVector {
        tuple_size: padded.len(),
        directions: family.len(),
        entries,
    })
}

/// Gaussian-free uniform unit vectors, so the family stays independent of any
/// distribution crate.
mod rand_distr_free {
    use rand::Rng;

    pub fn unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 && n <= 1.0 {
                return v.iter().map(|x| x / n).collect();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    #[test]
    fn family_shapes() {
        assert_eq!(DirectionFamily::standard(3, 0).unwrap().len(), 3);
        assert_eq!(DirectionFamily::standard(3, 1).unwrap().len(), 3 + 6);
        assert_eq!(DirectionFamily::standard(3, 3).unwrap().len(), 3 + 6 + 6);
        assert!(DirectionFamily::new(vec![vec![1.0, 1.0]]).is_err());
        assert!(DirectionFamily::new(vec![]).is_err());
    }

    #[test]
    fn xi_of_zero_is_zero() {
        let f = DirectionFamily::standard(3, 1).unwrap();
        let z = almgren_xi(&vec![vec![0.0; 3]; 4], &f).unwrap();
        assert_eq!(z.len(), 4 * f.len());
        assert!(z.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn single_point_is_scaled_isometry() {
        let f = DirectionFamily::standard(3, 0).unwrap();
        let t = vec![vec![0.3, -1.0, 2.0]];
        let s = vec![vec![1.0, 0.5, -0.25]];
        let a = almgren_xi(&t, &f).unwrap();
        let b = almgren_xi(&s, &f).unwrap();
        let d: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let e = crate::domain::euclidean(&t[0], &s[0]);
        assert!((d - e / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zeta_json_round_trip() {
        let d = Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let w = WhitneyDecomposition::new(d.clone());
        let f = DirectionFamily::standard(3, 1).unwrap();
        let p = UnorderedTuple::from_interior(&d, vec![vec![0.3, 0.4], vec![0.8, 0.1]]).unwrap();
        let z = zeta(&w, &f, &p, 2).unwrap();
        assert_eq!(z.tuple_size(), 4);
        let back = SparseEmbeddingVector::from_json(&z.to_json()).unwrap();
        assert_eq!(back, z);
        assert_eq!(back.to_json(), z.to_json());
        assert_eq!(z.distance(&z).unwrap(), 0.0);
        assert!(zeta(&w, &f, &p, 1).is_err());
        assert!(SparseEmbeddingVector::from_json(r#"{"M":1,"h":1,"entries":{"0,0":[1.0,2.0]}}"#).is_err());
    }
}
