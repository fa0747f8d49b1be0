#![no_main]

use genlab::experiments::{parse_ns, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = RunConfig::from_toml_str(text) {
            let _ = RunConfig::from_toml_str(&cfg.to_toml_string()).expect("serialized config parses");
        }
        let _ = parse_ns(text);
    }
});
