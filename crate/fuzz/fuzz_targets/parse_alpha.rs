#![no_main]

use ergolab::base::Alpha;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(a) = Alpha::from_spec(text) {
            let b = Alpha::from_spec(&a.to_spec()).expect("canonical form parses");
            assert_eq!(a.units(), b.units());
            assert_eq!(a.precision_bits(), b.precision_bits());
        }
    }
});
