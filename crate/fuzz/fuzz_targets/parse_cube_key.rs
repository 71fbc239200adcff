#![no_main]

use libfuzzer_sys::fuzz_target;
use wbembed::DyadicCube;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = s.parse::<DyadicCube>() {
        assert_eq!(q.to_string().parse::<DyadicCube>().expect("key parses"), q);
        let _ = q.parent();
    }
});
