#![no_main]

use ergolab::ergodicity::{parse_dictionary, TestFunction};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(fs) = parse_dictionary(text) {
            for f in fs {
                let g = TestFunction::parse(&f.id()).expect("ids parse back");
                assert_eq!(g.id(), f.id());
            }
        }
    }
});
