#![no_main]

use genlab::starshape::StarShapedSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if text.len() > 4096 {
            return;
        }
        if let Ok(s) = StarShapedSet::from_spec(text) {
            let x = vec![0.0; s.dim()];
            let _ = s.expand_map(&x);
        }
    }
});
