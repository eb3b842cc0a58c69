use std::collections::BTreeSet;

use proptest::prelude::*;

use heavycol::algorithms::{run, run_a1, run_a2, run_memoized, AlgoConfig, Algorithm, ColumnOrder};
use heavycol::structure::{
    branch_set, conjugate_of, consistent_rows, find_unpaired, sequential_reduction,
};
use heavycol::{parse_matrix, BinaryMatrix};

/// Distinct-row matrices with 1..=6 columns and up to 12 rows, in random
/// row order.
fn distinct_matrix() -> impl Strategy<Value = BinaryMatrix> {
    (1usize..=6).prop_flat_map(|n| {
        let cube = 1u64 << n;
        prop::collection::btree_set(0..cube, 1..=(cube as usize).min(12))
            .prop_map(|s| s.into_iter().collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |rows| BinaryMatrix::new(rows, n).unwrap())
    })
}

/// Any matrix, duplicates allowed.
fn any_matrix() -> impl Strategy<Value = BinaryMatrix> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec(0..(1u64 << n), 1..=12)
            .prop_map(move |rows| BinaryMatrix::new(rows, n).unwrap())
    })
}

fn with_permutation(m: BinaryMatrix) -> impl Strategy<Value = (BinaryMatrix, Vec<usize>)> {
    let idx: Vec<usize> = (1..=m.m()).collect();
    (Just(m), Just(idx).prop_shuffle())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn heavy_iff_twice_weight_reaches_m(m in any_matrix()) {
        for k in 1..=m.n() {
            let w = m.column_weight(k).unwrap();
            prop_assert!(w <= m.m());
            prop_assert_eq!(m.is_heavy(k).unwrap(), 2 * w >= m.m());
            prop_assert_eq!(m.heavy_columns().contains(&k), 2 * w >= m.m());
        }
        let p = m.properties();
        prop_assert_eq!(p.has_all_zero_column, p.column_weights.contains(&0));
    }

    #[test]
    fn text_round_trip(m in any_matrix()) {
        let text = m.to_text();
        prop_assert_eq!(parse_matrix(&text).unwrap(), m.clone());
        let noisy = format!("# header\n\n{}\n", text.replace('\n', "  # c\n "));
        prop_assert_eq!(parse_matrix(&noisy).unwrap(), m);
    }

    #[test]
    fn row_order_never_changes_outputs((m, perm) in any_matrix().prop_flat_map(with_permutation)) {
        let p = m.permute_rows(&perm).unwrap();
        prop_assert_eq!(p.heavy_columns(), m.heavy_columns());
        prop_assert_eq!(run_a1(&p, &AlgoConfig::default()).value, run_a1(&m, &AlgoConfig::default()).value);
        prop_assert_eq!(run_a2(&p).value, run_a2(&m).value);
    }

    #[test]
    fn a1_value_ignores_processing_order(m in any_matrix(), seed in any::<u64>()) {
        let base = run_a1(&m, &AlgoConfig::default()).value;
        let config = AlgoConfig { column_order: ColumnOrder::Shuffled(seed), memoize: false };
        prop_assert_eq!(run_a1(&m, &config).value, base);
    }

    #[test]
    fn a1_sound_on_distinct_rows(m in distinct_matrix()) {
        if run_a1(&m, &AlgoConfig::default()).value {
            prop_assert!(!m.heavy_columns().is_empty());
        }
        if m.heavy_columns().is_empty() {
            prop_assert!(!run_a1(&m, &AlgoConfig::default()).value);
        }
    }

    #[test]
    fn memoized_agrees_with_plain(m in any_matrix(), seed in any::<u64>()) {
        for algo in [Algorithm::A1, Algorithm::A2] {
            let config = AlgoConfig { column_order: ColumnOrder::Shuffled(seed), memoize: false };
            let plain = run(algo, &m, &config);
            let memo = run_memoized(algo, &m, &config);
            prop_assert_eq!(plain.value, memo.value);
            prop_assert!(memo.stats.calls <= plain.stats.calls);
            prop_assert!(memo.stats.cache_hits <= memo.stats.calls);
            prop_assert!(plain.stats.max_depth as usize <= m.n());
            prop_assert!(plain.stats.calls >= 1);
        }
    }

    #[test]
    fn call_counts_are_deterministic(m in any_matrix()) {
        for algo in [Algorithm::A1, Algorithm::A2] {
            let a = run(algo, &m, &AlgoConfig::default()).stats;
            let b = run(algo, &m, &AlgoConfig::default()).stats;
            prop_assert_eq!((a.calls, a.max_depth, a.cache_hits), (b.calls, b.max_depth, b.cache_hits));
        }
    }

    #[test]
    fn branch_sets_partition_rows(m in any_matrix(), k in 1usize..=6) {
        prop_assume!(m.n() >= 2 && k <= m.n());
        let s = branch_set(&m, k).unwrap();
        let total: usize = s.branches.iter().map(|b| b.reduced.m()).sum();
        prop_assert_eq!(total, m.m());
        let w = m.column_weight(k).unwrap();
        prop_assert_eq!(s.branches.iter().any(|b| b.value), w > 0);
        prop_assert_eq!(s.branches.iter().any(|b| !b.value), w < m.m());
        for b in &s.branches {
            prop_assert_eq!(b.reduced.n(), m.n() - 1);
            if m.has_distinct_rows() {
                prop_assert!(b.reduced.has_distinct_rows());
            }
        }
    }

    #[test]
    fn conjugacy_is_symmetric_and_injective(m in distinct_matrix()) {
        for k in 1..=m.n() {
            let mut images = BTreeSet::new();
            for i in 1..=m.m() {
                if let Some(j) = conjugate_of(&m, i, k).unwrap() {
                    prop_assert_eq!(conjugate_of(&m, j, k).unwrap(), Some(i));
                    if !m.get(i, k).unwrap() {
                        prop_assert!(images.insert(j));
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_terminal_is_consistent_set(m in any_matrix(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for i in 1..=m.m() {
            for l in 1..=m.n() {
                let expected = consistent_rows(&m, i, l).unwrap();
                prop_assert!(expected.contains(&i));
                let mut order: Vec<usize> = (1..=m.n()).filter(|&k| k != l).collect();
                order.shuffle(&mut rng);
                for t in [
                    sequential_reduction(&m, i, l, None).unwrap(),
                    sequential_reduction(&m, i, l, Some(&order)).unwrap(),
                ] {
                    prop_assert_eq!(&t.surviving_rows, &expected);
                    prop_assert_eq!(t.terminal.n(), 1);
                    prop_assert_eq!(t.steps.len(), m.n() - 1);
                    prop_assert!(t.steps.windows(2).all(|w| w[0].survivors >= w[1].survivors));
                    prop_assert!(t.steps.iter().all(|s| s.survivors >= 1));
                    for (&row, &bit) in t.surviving_rows.iter().zip(t.terminal.rows()) {
                        prop_assert_eq!(bit != 0, m.get(row, l).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn unpaired_position_reduces_to_zeros(m in distinct_matrix()) {
        if let Some(u) = find_unpaired(&m) {
            prop_assert!(!m.get(u.row, u.column).unwrap());
            prop_assert_eq!(conjugate_of(&m, u.row, u.column).unwrap(), None);
            let t = sequential_reduction(&m, u.row, u.column, None).unwrap();
            prop_assert!(t.terminal_is_all_zero());
        } else {
            // every zero is paired, so no column has more zeros than ones
            prop_assert_eq!(m.heavy_columns().len(), m.n());
        }
    }

    #[test]
    fn key_condition_column_is_heavy(m in any_matrix()) {
        let v = run_a2(&m);
        if let Some(w) = v.witness {
            if w.tag == heavycol::LineTag::KeyCondition && m.m() >= 2 {
                prop_assert!(m.is_heavy(w.column.unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn full_cube_columns_are_all_heavy() {
    for n in 1..=8 {
        let cube = BinaryMatrix::new((0..1u64 << n).collect(), n).unwrap();
        assert_eq!(cube.column_weights(), vec![1usize << (n - 1); n]);
        assert_eq!(cube.heavy_columns(), (1..=n).collect::<Vec<_>>());
    }
}
