#![no_main]

use genlab::experiments::FuncSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(f) = FuncSpec::parse(text) {
            assert_eq!(FuncSpec::parse(&f.label()).expect("label parses"), f);
            let _ = f.holder(f.natural_alpha());
        }
    }
});
