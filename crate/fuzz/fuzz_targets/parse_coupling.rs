#![no_main]

use libfuzzer_sys::fuzz_target;
use wbembed::transport::DiscreteCoupling;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = DiscreteCoupling::from_json(s) {
        let back = DiscreteCoupling::from_json(&c.to_json()).expect("serialized coupling parses");
        assert_eq!(back, c);
    }
});
