use serde::{Deserialize, Serialize};

use crate::domain::{Domain, ShortcutPoint};
use crate::error::{Error, Result};
use crate::transport::UnorderedTuple;

/// A tuple on disk: `{"domain": {..}, "points": [[..], ..], "boundary_count": k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleFile {
    pub domain: Domain,
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub boundary_count: usize,
}

impl TupleFile {
    pub fn from_tuple(domain: &Domain, t: &UnorderedTuple) -> Self {
        Self {
            domain: domain.clone(),
            points: t.interior().map(<[f64]>::to_vec).collect(),
            boundary_count: t.boundary_count(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(s)?;
        f.tuple()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tuple serialization is infallible")
    }

    /// Validates the points against the embedded domain.
    pub fn tuple(&self) -> Result<UnorderedTuple> {
        let mut pts: Vec<ShortcutPoint> =
            self.points.iter().cloned().map(ShortcutPoint::Interior).collect();
        pts.extend(std::iter::repeat_n(ShortcutPoint::Boundary, self.boundary_count));
        UnorderedTuple::new(&self.domain, pts)
    }
}

/// Finite birth/death pairs above the diagonal.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BarcodeDiagram {
    pairs: Vec<(f64, f64)>,
}

impl BarcodeDiagram {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(b, d)) in pairs.iter().enumerate() {
            check_pair(b, d).map_err(|message| Error::Barcode { line: i + 1, message })?;
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The diagram as a tuple in the half-plane above the diagonal.
    pub fn to_tuple(&self) -> Result<UnorderedTuple> {
        UnorderedTuple::from_interior(
            &Domain::upper_diagonal(),
            self.pairs.iter().map(|&(b, d)| vec![b, d]).collect(),
        )
    }
}

fn check_pair(birth: f64, death: f64) -> std::result::Result<(), String> {
    if !birth.is_finite() || !death.is_finite() {
        return Err("birth and death must be finite".into());
    }
    if death <= birth {
        return Err(format!("death {death} does not exceed birth {birth}"));
    }
    Ok(())
}

/// Parses `birth,death` lines. Blank lines and `#` comments are skipped;
/// errors carry 1-based line numbers.
pub fn parse_barcode_csv(s: &str) -> Result<BarcodeDiagram> {
    let mut pairs = Vec::new();
    for (i, raw) in s.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let err = |message: String| Error::Barcode { line, message };
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(err(format!("expected 2 fields, found {}", fields.len())));
        }
        let num = |f: &str| {
            f.parse::<f64>()
                .map_err(|e| err(format!("invalid number {f:?}: {e}")))
        };
        let (b, d) = (num(fields[0])?, num(fields[1])?);
        check_pair(b, d).map_err(err)?;
        pairs.push((b, d));
    }
    Ok(BarcodeDiagram { pairs })
}

/// Reads a domain from inline JSON or from a file holding it.
pub fn load_domain(arg: &str) -> Result<Domain> {
    if arg.trim_start().starts_with('{') {
        Domain::from_json(arg)
    } else {
        Domain::from_json(&std::fs::read_to_string(arg)?)
    }
}

/// Round-trip float formatting for CSV output.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
