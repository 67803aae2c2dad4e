#![no_main]

use ergolab::metrics::{besicovitch_from_distances, parse_distance_stream, weyl_from_distances};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(d) = parse_distance_stream(text) {
            if !d.is_empty() {
                let b = besicovitch_from_distances(&d).expect("nonempty stream");
                let w = weyl_from_distances(&d, d.len().div_ceil(4)).expect("window fits");
                assert!(w.value >= b.value);
            }
        }
    }
});
