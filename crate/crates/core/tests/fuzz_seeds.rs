//! Every checked-in fuzz seed is a valid input for its parser.

use std::fs;
use std::path::PathBuf;

use wbembed::embedding::SparseEmbeddingVector;
use wbembed::harness::{parse_barcode_csv, TupleFile};
use wbembed::transport::DiscreteCoupling;
use wbembed::{Domain, DyadicCube};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn seeds_parse() {
    for s in seeds("parse_domain") {
        Domain::from_json(&s).unwrap();
    }
    for s in seeds("parse_tuple_file") {
        TupleFile::from_json(&s).unwrap();
    }
    for s in seeds("parse_coupling") {
        DiscreteCoupling::from_json(&s).unwrap();
    }
    for s in seeds("parse_barcode_csv") {
        parse_barcode_csv(&s).unwrap();
    }
    for s in seeds("parse_embedding_vector") {
        SparseEmbeddingVector::from_json(&s).unwrap();
    }
    for s in seeds("parse_cube_key") {
        s.parse::<DyadicCube>().unwrap();
    }
}
