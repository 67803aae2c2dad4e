#![no_main]

use ergolab::cli::parse_cocycle_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // Keep the fuzzer off the file system.
        if !text.trim_start().starts_with("file") {
            let _ = parse_cocycle_spec(text);
        }
    }
});
