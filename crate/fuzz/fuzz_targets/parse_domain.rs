#![no_main]

use libfuzzer_sys::fuzz_target;
use wbembed::Domain;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = Domain::from_json(s) {
        let back = Domain::from_json(&d.to_json()).expect("serialized domain parses");
        assert_eq!(back, d);
        let (lo, _) = d.sampling_box();
        let _ = d.dist_to_complement(&lo);
    }
});
