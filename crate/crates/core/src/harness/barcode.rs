use crate::domain::Domain;
use crate::embedding::{zeta, DirectionFamily, SparseEmbeddingVector};
use crate::error::Result;
use crate::transport::wb_tuples;
use crate::whitney::WhitneyDecomposition;

use super::formats::BarcodeDiagram;

/// Pairwise partial-transport distances between diagrams, with the diagonal
/// acting as the boundary.
pub fn barcode_distances(diagrams: &[BarcodeDiagram], exponent: f64) -> Result<Vec<Vec<f64>>> {
    let domain = Domain::upper_diagonal();
    let tuples = diagrams
        .iter()
        .map(BarcodeDiagram::to_tuple)
        .collect::<Result<Vec<_>>>()?;
    let k = tuples.len();
    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let d = wb_tuples(&domain, &tuples[i], &tuples[j], exponent)?;
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    Ok(out)
}

/// Embedding vectors for each diagram plus the matrix of embedded distances.
pub struct BarcodeEmbedding {
    pub m: usize,
    pub vectors: Vec<SparseEmbeddingVector>,
    pub distances: Vec<Vec<f64>>,
}

/// Embeds every diagram with the common bound `m` = largest diagram size.
pub fn barcode_embedding(diagrams: &[BarcodeDiagram], density: usize) -> Result<BarcodeEmbedding> {
    let w = WhitneyDecomposition::new(Domain::upper_diagonal());
    let family = DirectionFamily::standard(3, density)?;
    let m = diagrams.iter().map(BarcodeDiagram::len).max().unwrap_or(0).max(1);
    let vectors = diagrams
        .iter()
        .map(|d| zeta(&w, &family, &d.to_tuple()?, m))
        .collect::<Result<Vec<_>>>()?;
    let k = vectors.len();
    let mut distances = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let d = vectors[i].distance(&vectors[j])?;
            distances[i][j] = d;
            distances[j][i] = d;
        }
    }
    Ok(BarcodeEmbedding {
        m,
        vectors,
        distances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::wb_bruteforce;

    #[test]
    fn reference_values() {
        let a = BarcodeDiagram::new(vec![(0.0, 1.0)]).unwrap();
        let e = BarcodeDiagram::default();
        let d = barcode_distances(&[a.clone(), e, a], 2.0).unwrap();
        assert!((d[0][1] - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-12);
        assert_eq!(d[0][2], 0.0);

        let p = BarcodeDiagram::new(vec![(0.0, 2.0), (1.0, 3.0)]).unwrap();
        let q = BarcodeDiagram::new(vec![(0.0, 2.0)]).unwrap();
        let got = barcode_distances(&[p.clone(), q.clone()], 2.0).unwrap()[0][1];
        let brute = wb_bruteforce(
            &Domain::upper_diagonal(),
            &p.to_tuple().unwrap(),
            &q.to_tuple().unwrap(),
            2.0,
        )
        .unwrap();
        assert!((got - 2f64.sqrt()).abs() <= 1e-12);
        assert!((got - brute).abs() <= 1e-12);
    }

    #[test]
    fn embedding_of_identical_diagrams() {
        let a = BarcodeDiagram::new(vec![(0.0, 1.0), (0.5, 2.0)]).unwrap();
        let b = BarcodeDiagram::new(vec![(0.2, 0.9)]).unwrap();
        let emb = barcode_embedding(&[a.clone(), b, a], 1).unwrap();
        assert_eq!(emb.m, 2);
        assert_eq!(emb.distances[0][2], 0.0);
        assert!(emb.distances[0][1] > 0.0);
    }
}
