#![no_main]

use genlab::relu_net::ReluNetwork;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(net) = ReluNetwork::from_json(text) {
            let x = vec![0.5; net.input_dim()];
            let _ = net.evaluate(&x);
            let again = ReluNetwork::from_json(&net.to_json()).expect("serialized network parses");
            assert_eq!(again.metrics(), net.metrics());
        }
    }
});
