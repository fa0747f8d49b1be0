#![no_main]

use genlab::manifold::ChartedManifold;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(m) = ChartedManifold::from_spec(text) {
            // the canonical form must parse back to the same manifold
            let again = ChartedManifold::from_spec(&m.spec()).expect("canonical spec parses");
            assert_eq!(again.ambient_dim(), m.ambient_dim());
            assert_eq!(again.chart_count(), m.chart_count());
        }
    }
});
