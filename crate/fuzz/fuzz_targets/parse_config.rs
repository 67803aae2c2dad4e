#![no_main]

use ergolab::cli::Config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = Config::parse(text) {
            let _ = cfg.get::<f64>("eps", 0.25);
            let _ = cfg.list::<u128>("schedule", "100");
            let _ = cfg.finish();
        }
    }
});
