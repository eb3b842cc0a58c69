#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = heavycol::parse_matrix(text) {
        assert!(m.m() >= 1 && (1..=63).contains(&m.n()));
        let heavy = m.heavy_columns();
        for k in 1..=m.n() {
            assert_eq!(heavy.contains(&k), 2 * m.column_weight(k).unwrap() >= m.m());
        }
        // small inputs are cheap enough to run both certificates
        if m.n() <= 8 && m.m() <= 32 {
            let _ = heavycol::run_a1(&m, &Default::default());
            let _ = heavycol::run_a2(&m);
        }
    }
});
