#![no_main]

use libfuzzer_sys::fuzz_target;
use wbembed::harness::parse_barcode_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_barcode_csv(s) {
        assert!(d.pairs().iter().all(|(b, e)| e > b));
        let _ = d.to_tuple();
    }
});
