//! The two recursive heavy-column certificates.
//!
//! Both algorithms split a matrix on each column in turn, reject as soon as a
//! branch has no heavy column, and recurse into the branches until a single
//! column remains. [`Algorithm::A2`] adds two early `true` exits: a single row
//! with more than one column, and a column holding exactly one zero.
//!
//! A `true` verdict certifies a heavy column only under each algorithm's
//! preconditions (distinct rows for A1; distinct rows, distinct columns and no
//! all-zero column for A2). Neither algorithm says which column is heavy, and
//! `false` does not imply there is none.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{rows_have_heavy_column, split_rows, weight_is_heavy, BinaryMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    A1,
    A2,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::A1 => "a1",
            Algorithm::A2 => "a2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseOptionError {
    #[error("unknown algorithm {0:?}, expected a1 or a2")]
    Algorithm(String),
    #[error("bad column order {0:?}, expected ascending or shuffle:SEED")]
    Order(String),
}

impl FromStr for Algorithm {
    type Err = ParseOptionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a1" | "A1" => Ok(Algorithm::A1),
            "a2" | "A2" => Ok(Algorithm::A2),
            _ => Err(ParseOptionError::Algorithm(s.to_owned())),
        }
    }
}

/// Processing order of the column loop. Only A1 honours it; A2 always runs
/// columns in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ColumnOrder {
    #[default]
    Ascending,
    /// Every call on an `n`-column matrix uses the same seeded permutation
    /// of `1..=n`.
    Shuffled(u64),
}

impl ColumnOrder {
    /// The order used for an `n`-column call.
    pub fn columns(self, n: usize) -> Vec<usize> {
        let mut cols: Vec<usize> = (1..=n).collect();
        if let ColumnOrder::Shuffled(seed) = self {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(n as u64);
            cols.shuffle(&mut rng);
        }
        cols
    }
}

impl fmt::Display for ColumnOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnOrder::Ascending => f.write_str("ascending"),
            ColumnOrder::Shuffled(seed) => write!(f, "shuffle:{seed}"),
        }
    }
}

impl FromStr for ColumnOrder {
    type Err = ParseOptionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ascending" {
            return Ok(ColumnOrder::Ascending);
        }
        s.strip_prefix("shuffle:")
            .and_then(|seed| seed.parse().ok())
            .map(ColumnOrder::Shuffled)
            .ok_or_else(|| ParseOptionError::Order(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AlgoConfig {
    pub column_order: ColumnOrder,
    pub memoize: bool,
}

impl AlgoConfig {
    pub fn memoized() -> Self {
        AlgoConfig {
            memoize: true,
            ..Default::default()
        }
    }
}

/// Which pseudocode return produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LineTag {
    /// Single-column base case.
    N1Base,
    /// A2 only: one row and more than one column.
    M1Base,
    /// A2 only: exactly one zero in the column.
    KeyCondition,
    /// A branch had no heavy column.
    NoheavyChild,
    /// A recursive call returned false.
    ChildFalse,
    /// Every column passed.
    ExhaustedTrue,
}

impl LineTag {
    pub fn as_str(self) -> &'static str {
        match self {
            LineTag::N1Base => "N1_BASE",
            LineTag::M1Base => "M1_BASE",
            LineTag::KeyCondition => "KEY_CONDITION",
            LineTag::NoheavyChild => "NOHEAVY_CHILD",
            LineTag::ChildFalse => "CHILD_FALSE",
            LineTag::ExhaustedTrue => "EXHAUSTED_TRUE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub tag: LineTag,
    pub column: Option<usize>,
}

impl Witness {
    /// Line number of the returning statement in the published pseudocode.
    pub fn line(&self, algo: Algorithm, value: bool) -> u32 {
        match (algo, self.tag) {
            (Algorithm::A1, LineTag::N1Base) => {
                if value {
                    3
                } else {
                    5
                }
            }
            (Algorithm::A1, LineTag::NoheavyChild) => 11,
            (Algorithm::A1, LineTag::ChildFalse) => 15,
            (Algorithm::A1, LineTag::ExhaustedTrue) => 18,
            (Algorithm::A2, LineTag::M1Base) => 1,
            (Algorithm::A2, LineTag::N1Base) => {
                if value {
                    5
                } else {
                    7
                }
            }
            (Algorithm::A2, LineTag::KeyCondition) => 14,
            (Algorithm::A2, LineTag::NoheavyChild) => 21,
            (Algorithm::A2, LineTag::ChildFalse) => 28,
            (Algorithm::A2, LineTag::ExhaustedTrue) => 32,
            (Algorithm::A1, LineTag::M1Base | LineTag::KeyCondition) => {
                unreachable!("A1 has no {} return", self.tag.as_str())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RecursionStats {
    pub calls: u64,
    pub max_depth: u64,
    pub cache_hits: u64,
    pub elapsed_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub algorithm: Algorithm,
    pub value: bool,
    pub witness: Option<Witness>,
    pub stats: RecursionStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("run exceeded its {budget:?} budget after {calls} calls")]
pub struct Timeout {
    pub budget: Duration,
    pub calls: u64,
}

/// A key-condition return observed anywhere in an A2 recursion tree.
#[derive(Debug, Clone, Copy)]
pub struct KeyConditionHit<'a> {
    pub rows: &'a [u64],
    pub n: usize,
    pub column: usize,
    pub depth: usize,
}

impl KeyConditionHit<'_> {
    pub fn column_is_heavy(&self) -> bool {
        let weight = crate::matrix::rows_column_weight(self.rows, self.n, self.column);
        weight_is_heavy(weight, self.rows.len())
    }
}

pub fn run_a1(m: &BinaryMatrix, config: &AlgoConfig) -> Verdict {
    Runner::new(Algorithm::A1, *config).run(m)
}

pub fn run_a2(m: &BinaryMatrix) -> Verdict {
    Runner::new(Algorithm::A2, AlgoConfig::default()).run(m)
}

/// Runs either algorithm with a private memo cache keyed by the sorted row
/// multiset of each submatrix.
pub fn run_memoized(algo: Algorithm, m: &BinaryMatrix, config: &AlgoConfig) -> Verdict {
    let config = AlgoConfig {
        memoize: true,
        ..*config
    };
    Runner::new(algo, config).run(m)
}

pub fn run(algo: Algorithm, m: &BinaryMatrix, config: &AlgoConfig) -> Verdict {
    Runner::new(algo, *config).run(m)
}

/// Single-invocation driver with optional time budget and key-condition
/// observer.
pub struct Runner<'o> {
    algo: Algorithm,
    config: AlgoConfig,
    budget: Option<Duration>,
    observer: Option<&'o mut dyn FnMut(KeyConditionHit<'_>)>,
}

impl<'o> Runner<'o> {
    pub fn new(algo: Algorithm, config: AlgoConfig) -> Self {
        Runner {
            algo,
            config,
            budget: None,
            observer: None,
        }
    }

    pub fn budget(mut self, budget: Duration) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn observe(mut self, observer: &'o mut dyn FnMut(KeyConditionHit<'_>)) -> Self {
        self.observer = Some(observer);
        self
    }

    pub fn run(self, m: &BinaryMatrix) -> Verdict {
        assert!(self.budget.is_none(), "use try_run with a budget");
        self.try_run(m).expect("unbudgeted run cannot time out")
    }

    pub fn try_run(self, m: &BinaryMatrix) -> Result<Verdict, Timeout> {
        let start = Instant::now();
        let order = match self.algo {
            Algorithm::A1 => self.config.column_order,
            Algorithm::A2 => ColumnOrder::Ascending,
        };
        let mut engine = Engine {
            algo: self.algo,
            order,
            orders: vec![None; m.n() + 1],
            memo: self.config.memoize.then(HashMap::new),
            stats: RecursionStats::default(),
            start,
            budget: self.budget,
            observer: self.observer,
        };
        let out = engine.call(m.rows(), m.n(), 0)?;
        let mut stats = engine.stats;
        stats.elapsed_ns = start.elapsed().as_nanos().try_into().unwrap_or(u64::MAX);
        debug_assert!(stats.calls >= 1 && stats.cache_hits <= stats.calls);
        debug_assert!(stats.max_depth as usize <= m.n());
        Ok(Verdict {
            algorithm: self.algo,
            value: out.value,
            witness: out.witness,
            stats,
        })
    }
}

struct Outcome {
    value: bool,
    witness: Option<Witness>,
}

impl Outcome {
    fn at(value: bool, tag: LineTag, column: Option<usize>) -> Self {
        Outcome {
            value,
            witness: Some(Witness { tag, column }),
        }
    }
}

struct Engine<'o> {
    algo: Algorithm,
    order: ColumnOrder,
    orders: Vec<Option<Vec<usize>>>,
    memo: Option<HashMap<(usize, Vec<u64>), bool>>,
    stats: RecursionStats,
    start: Instant,
    budget: Option<Duration>,
    observer: Option<&'o mut dyn FnMut(KeyConditionHit<'_>)>,
}

impl Engine<'_> {
    fn columns(&mut self, n: usize) -> Vec<usize> {
        let order = self.order;
        self.orders[n]
            .get_or_insert_with(|| order.columns(n))
            .clone()
    }

    fn call(&mut self, rows: &[u64], n: usize, depth: usize) -> Result<Outcome, Timeout> {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth as u64);
        if let Some(budget) = self.budget {
            if self.stats.calls.is_multiple_of(256) && self.start.elapsed() > budget {
                return Err(Timeout {
                    budget,
                    calls: self.stats.calls,
                });
            }
        }

        // Base cases are cheaper than a cache lookup.
        if self.algo == Algorithm::A2 && rows.len() == 1 && n > 1 {
            return Ok(Outcome::at(true, LineTag::M1Base, None));
        }
        if n == 1 {
            let ones = rows.iter().filter(|&&r| r != 0).count();
            return Ok(Outcome::at(
                weight_is_heavy(ones, rows.len()),
                LineTag::N1Base,
                Some(1),
            ));
        }

        let key = self.memo.as_ref().map(|_| {
            let mut sorted = rows.to_vec();
            sorted.sort_unstable();
            (n, sorted)
        });
        if let (Some(memo), Some(key)) = (&self.memo, &key) {
            if let Some(&value) = memo.get(key) {
                self.stats.cache_hits += 1;
                return Ok(Outcome {
                    value,
                    witness: None,
                });
            }
        }

        let out = self.body(rows, n, depth)?;
        if let (Some(memo), Some(key)) = (&mut self.memo, key) {
            memo.insert(key, out.value);
        }
        Ok(out)
    }

    fn body(&mut self, rows: &[u64], n: usize, depth: usize) -> Result<Outcome, Timeout> {
        for k in self.columns(n) {
            let (zeros, ones) = split_rows(rows, n, k);
            if self.algo == Algorithm::A2 && zeros.len() == 1 {
                if let Some(observer) = self.observer.as_mut() {
                    observer(KeyConditionHit {
                        rows,
                        n,
                        column: k,
                        depth,
                    });
                }
                return Ok(Outcome::at(true, LineTag::KeyCondition, Some(k)));
            }
            let branches: Vec<&[u64]> = [zeros.as_slice(), ones.as_slice()]
                .into_iter()
                .filter(|b| !b.is_empty())
                .collect();
            if branches.iter().any(|b| !rows_have_heavy_column(b, n - 1)) {
                return Ok(Outcome::at(false, LineTag::NoheavyChild, Some(k)));
            }
            for branch in branches {
                if !self.call(branch, n - 1, depth + 1)?.value {
                    return Ok(Outcome::at(false, LineTag::ChildFalse, Some(k)));
                }
            }
        }
        Ok(Outcome::at(true, LineTag::ExhaustedTrue, None))
    }
}
