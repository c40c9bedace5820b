#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(b) = dpcp_core::io::read_basis(data) {
        let mut out = Vec::new();
        dpcp_core::io::write_basis(&mut out, &b).unwrap();
        assert_eq!(dpcp_core::io::read_basis(&out[..]).unwrap(), b);
    }
});
