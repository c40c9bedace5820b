#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = dpcp_core::io::parse_grid_config(text) {
            assert!(cfg.d_list.iter().all(|&d| d >= 1 && d < cfg.dim));
            let _ = cfg.record_count();
        }
    }
});
