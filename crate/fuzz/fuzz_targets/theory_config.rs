#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = dpcp_core::io::parse_theory_config(text) {
            assert!(cfg.ratio_list.iter().all(|r| *r > 0.0 && *r < 1.0));
        }
    }
});
