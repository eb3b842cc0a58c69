#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = heavycol::parse_matrix(text) {
        let again = heavycol::parse_matrix(&m.to_text()).expect("canonical text must parse");
        assert_eq!(again, m);
        assert_eq!(m.to_string().parse::<heavycol::BinaryMatrix>().unwrap(), m);
    }
});
