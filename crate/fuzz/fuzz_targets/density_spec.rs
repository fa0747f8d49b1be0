#![no_main]

use genlab::manifold::DensitySpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(d) = DensitySpec::parse(text) {
            assert_eq!(DensitySpec::parse(&d.label()).expect("label parses"), d);
        }
    }
});
