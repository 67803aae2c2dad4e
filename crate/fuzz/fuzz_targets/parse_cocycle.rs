#![no_main]

use ergolab::skew::{parse_cocycle, serialize_cocycle};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(c) = parse_cocycle(text) {
            // Whatever parses must survive a round trip.
            let again = parse_cocycle(&serialize_cocycle(&c)).expect("serialized cocycle parses");
            assert_eq!(serialize_cocycle(&again), serialize_cocycle(&c));
        }
    }
});
