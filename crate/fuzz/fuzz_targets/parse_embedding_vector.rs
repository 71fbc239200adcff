#![no_main]

use libfuzzer_sys::fuzz_target;
use wbembed::embedding::SparseEmbeddingVector;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = SparseEmbeddingVector::from_json(s) {
        let back = SparseEmbeddingVector::from_json(&v.to_json()).expect("serialized vector parses");
        assert_eq!(back, v);
        let _ = v.distance(&v);
    }
});
