//! Replays the checked-in fuzz corpus through the same invariants the fuzz
//! targets assert, so seeds stay meaningful on stable toolchains.

use std::path::PathBuf;

use heavycol::algorithms::{Algorithm, ColumnOrder};
use heavycol::profiler::{Family, GrowthTable};
use heavycol::verification::{Check, Mode};
use heavycol::{parse_matrix, BinaryMatrix};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn matrix_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("parse_matrix")
        .into_iter()
        .chain(seeds("parse_roundtrip"))
    {
        let Ok(m) = parse_matrix(&text) else { continue };
        parsed += 1;
        assert_eq!(parse_matrix(&m.to_text()).unwrap(), m, "{name}");
        assert_eq!(m.to_string().parse::<BinaryMatrix>().unwrap(), m, "{name}");
        let _ = heavycol::run_a1(&m, &Default::default());
        let _ = heavycol::run_a2(&m);
    }
    assert!(parsed > 0);
}

#[test]
fn option_seeds() {
    for (_, s) in seeds("parse_options") {
        if let Ok(mode) = s.parse::<Mode>() {
            assert_eq!(mode.to_string().parse::<Mode>().unwrap(), mode);
        }
        if let Ok(family) = s.parse::<Family>() {
            assert_eq!(family.to_string().parse::<Family>().unwrap(), family);
        }
        if let Ok(order) = s.parse::<ColumnOrder>() {
            let mut cols = order.columns(7);
            cols.sort_unstable();
            assert_eq!(cols, (1..=7).collect::<Vec<_>>());
        }
        let _ = s.parse::<Algorithm>();
        let _ = s.parse::<Check>();
    }
}

#[test]
fn growth_csv_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("growth_csv") {
        if let Ok(table) = GrowthTable::from_csv(&text) {
            parsed += 1;
            assert_eq!(
                GrowthTable::from_csv(&table.to_csv()).unwrap(),
                table,
                "{name}"
            );
        }
    }
    assert_eq!(parsed, 2);
}
