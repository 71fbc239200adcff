#![no_main]

use libfuzzer_sys::fuzz_target;
use wbembed::harness::TupleFile;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = TupleFile::from_json(s) {
        let t = f.tuple().expect("validated on parse");
        assert_eq!(t.len(), f.points.len() + f.boundary_count);
    }
});
