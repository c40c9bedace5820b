#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((m, labels)) = dpcp_core::io::read_dataset(data) {
        assert_eq!(m.ncols(), labels.len());
        assert!(m.iter().all(|v| v.is_finite()));
        let mut out = Vec::new();
        dpcp_core::io::write_dataset(&mut out, &m, &labels).unwrap();
        let (again, l2) = dpcp_core::io::read_dataset(&out[..]).unwrap();
        assert_eq!(again, m);
        assert_eq!(l2, labels);
    }
});
