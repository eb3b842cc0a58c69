#![no_main]

use heavycol::algorithms::{Algorithm, ColumnOrder};
use heavycol::profiler::Family;
use heavycol::verification::{Check, Mode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(mode) = s.parse::<Mode>() {
        assert_eq!(mode.to_string().parse::<Mode>().unwrap(), mode);
    }
    if let Ok(family) = s.parse::<Family>() {
        assert_eq!(family.to_string().parse::<Family>().unwrap(), family);
    }
    if let Ok(order) = s.parse::<ColumnOrder>() {
        for n in [1, 5, 63] {
            let mut cols = order.columns(n);
            cols.sort_unstable();
            assert_eq!(cols, (1..=n).collect::<Vec<_>>());
        }
    }
    let _ = s.parse::<Algorithm>();
    let _ = s.parse::<Check>();
});
