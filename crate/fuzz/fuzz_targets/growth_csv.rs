#![no_main]

use heavycol::profiler::GrowthTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = GrowthTable::from_csv(text) {
        let again = GrowthTable::from_csv(&table.to_csv()).expect("written table must read back");
        assert_eq!(again, table);
    }
});
