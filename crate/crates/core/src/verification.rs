//! Exhaustive and seeded-random scans over small matrix universes.
//!
//! A universe is the family of distinct-row matrices with `n` columns, which
//! is exactly the family of nonempty subsets of `{0,1}^n`. Each matrix is
//! identified by an ordinal: the subset bitmask in exhaustive mode, the
//! sample index in random mode. Rows always appear in increasing encoding
//! order.
//!
//! Scans split the ordinal range into fixed-size chunks, evaluate chunks on a
//! rayon pool and merge the partial reports. Counts add and witness lists are
//! sorted by ordinal before truncation, so a report does not depend on the
//! worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algorithms::{
    run_a1, run_a2, AlgoConfig, Algorithm, ColumnOrder, KeyConditionHit, LineTag, Runner,
};
use crate::matrix::BinaryMatrix;
use crate::structure::{consistent_rows, find_unpaired, sequential_reduction};

/// Largest `n` for exhaustive scans: `2^(2^4) - 1 = 65535` matrices.
pub const MAX_EXHAUSTIVE_N: usize = 4;
/// Largest `n` for random scans; a row subset of `{0,1}^6` fits one `u64`.
pub const MAX_RANDOM_N: usize = 6;

const CHUNK: u64 = 1024;
const MAX_REJECTIONS: u32 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("exhaustive universe for n = {n} is too large (n <= 4)")]
    UniverseTooLarge { n: usize },
    #[error("invalid universe: {0}")]
    InvalidSpec(String),
    #[error("bad scan mode {0:?}, expected exhaustive or random:COUNT:SEED")]
    BadMode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Constraints {
    pub require_distinct_columns: bool,
    pub forbid_all_zero_column: bool,
}

impl Constraints {
    /// Distinct columns and no all-zero column: the preconditions under which a2 is meant to be sound.
    pub fn distinct_nonzero() -> Self {
        Constraints {
            require_distinct_columns: true,
            forbid_all_zero_column: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.require_distinct_columns && !self.forbid_all_zero_column
    }

    pub fn admits(&self, m: &BinaryMatrix) -> bool {
        (!self.forbid_all_zero_column || m.column_weights().iter().all(|&w| w > 0))
            && (!self.require_distinct_columns || m.has_distinct_columns())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Random { count, seed } => write!(f, "random:{count}:{seed}"),
        }
    }
}

impl FromStr for Mode {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(Mode::Exhaustive);
        }
        let bad = || VerifyError::BadMode(s.to_owned());
        let rest = s.strip_prefix("random:").ok_or_else(bad)?;
        let (count, seed) = rest.split_once(':').ok_or_else(bad)?;
        Ok(Mode::Random {
            count: count.parse().map_err(|_| bad())?,
            seed: seed.parse().map_err(|_| bad())?,
        })
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UniverseSpec {
    pub n: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub constraints: Constraints,
    pub mode: Mode,
}

impl UniverseSpec {
    /// Every nonempty row subset of `{0,1}^n`.
    pub fn exhaustive(n: usize) -> Self {
        UniverseSpec {
            n,
            m_min: 1,
            m_max: 1 << n.min(MAX_RANDOM_N),
            constraints: Constraints::default(),
            mode: Mode::Exhaustive,
        }
    }

    pub fn random(n: usize, count: u64, seed: u64) -> Self {
        UniverseSpec {
            mode: Mode::Random { count, seed },
            ..UniverseSpec::exhaustive(n)
        }
    }

    pub fn with_constraints(mut self, constraints: Constraints) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn with_m_range(mut self, m_min: usize, m_max: usize) -> Self {
        self.m_min = m_min;
        self.m_max = m_max;
        self
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let n = self.n;
        if n == 0 || n > MAX_RANDOM_N {
            return Err(VerifyError::InvalidSpec(format!(
                "n = {n} outside 1..={MAX_RANDOM_N}"
            )));
        }
        if self.mode == Mode::Exhaustive && n > MAX_EXHAUSTIVE_N {
            return Err(VerifyError::UniverseTooLarge { n });
        }
        if self.m_min == 0 || self.m_min > self.m_max || self.m_max > 1 << n {
            return Err(VerifyError::InvalidSpec(format!(
                "row range {}..={} outside 1..={}",
                self.m_min,
                self.m_max,
                1 << n
            )));
        }
        Ok(())
    }

    fn ordinal_range(&self) -> (u64, u64) {
        match self.mode {
            Mode::Exhaustive => (1, 1u64 << (1usize << self.n)),
            Mode::Random { count, .. } => (0, count),
        }
    }

    /// The matrix at `ordinal`, or `None` when it falls outside the row range
    /// or constraints.
    fn matrix_at(&self, ordinal: u64) -> Option<BinaryMatrix> {
        match self.mode {
            Mode::Exhaustive => {
                let m = ordinal.count_ones() as usize;
                if m < self.m_min || m > self.m_max {
                    return None;
                }
                let m = subset_matrix(ordinal, self.n);
                self.constraints.admits(&m).then_some(m)
            }
            Mode::Random { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(ordinal);
                (0..MAX_REJECTIONS)
                    .map(|_| self.draw(&mut rng))
                    .find(|m| self.constraints.admits(m))
            }
        }
    }

    /// One uniform draw from the unconstrained family within the row range:
    /// pick `m` with weight `C(2^n, m)`, then a uniform `m`-subset.
    fn draw(&self, rng: &mut ChaCha8Rng) -> BinaryMatrix {
        let cube = 1usize << self.n;
        let weights: Vec<u128> = (self.m_min..=self.m_max)
            .map(|m| binomial(cube, m))
            .collect();
        let mut pick = rng.gen_range(0..weights.iter().sum::<u128>());
        let mut m = self.m_min;
        for w in &weights {
            if pick < *w {
                break;
            }
            pick -= w;
            m += 1;
        }
        let mut rows: Vec<u64> = rand::seq::index::sample(rng, cube, m)
            .into_iter()
            .map(|r| r as u64)
            .collect();
        rows.sort_unstable();
        BinaryMatrix::from_parts_unchecked(rows, self.n)
    }
}

impl fmt::Display for UniverseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} m={}..={} mode={}",
            self.n, self.m_min, self.m_max, self.mode
        )?;
        if self.constraints.require_distinct_columns {
            f.write_str(" distinct-columns")?;
        }
        if self.constraints.forbid_all_zero_column {
            f.write_str(" no-zero-column")?;
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn subset_matrix(mask: u64, n: usize) -> BinaryMatrix {
    let rows = (0..1u64 << n).filter(|r| mask >> r & 1 == 1).collect();
    BinaryMatrix::from_parts_unchecked(rows, n)
}

/// Every matrix of the universe, in ordinal order.
pub fn enumerate_universe(
    spec: &UniverseSpec,
) -> Result<impl Iterator<Item = BinaryMatrix> + '_, VerifyError> {
    spec.validate()?;
    let (lo, hi) = spec.ordinal_range();
    Ok((lo..hi).filter_map(move |o| spec.matrix_at(o)))
}

/// A witness matrix with the property it exhibits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    #[serde(skip)]
    pub ordinal: u64,
    pub matrix: String,
    pub property: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
    /// Witnesses kept per list. Counts stay exact past the cap.
    pub witness_cap: usize,
    /// Seed for shuffled column orders and sampled permutations.
    pub seed: u64,
    /// Column permutations per matrix when `n! ` is too many to try.
    pub permutation_budget: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            workers: 0,
            witness_cap: 20,
            seed: 0x5eed,
            permutation_budget: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub check: String,
    /// `None` for fixed-case checks.
    pub spec: Option<UniverseSpec>,
    pub tested: u64,
    pub tallies: BTreeMap<String, u64>,
    pub violations: Vec<Finding>,
    /// Exploratory witnesses; never a failure.
    pub collected: Vec<Finding>,
}

impl ScanReport {
    pub fn tally(&self, name: &str) -> u64 {
        self.tallies.get(name).copied().unwrap_or(0)
    }

    /// Number of violations, exact even when the witness list is capped.
    pub fn violation_count(&self) -> u64 {
        self.tally("violations")
    }

    pub fn passed(&self) -> bool {
        self.violation_count() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report is always serializable")
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            Some(spec) => writeln!(f, "{} [{}]", self.check, spec)?,
            None => writeln!(f, "{}", self.check)?,
        }
        writeln!(f, "  {:<32} {:>10}", "tested", self.tested)?;
        for (name, count) in &self.tallies {
            writeln!(f, "  {name:<32} {count:>10}")?;
        }
        for (label, list) in [
            ("violation", &self.violations),
            ("collected", &self.collected),
        ] {
            for w in list {
                writeln!(
                    f,
                    "  {label}: {}  [{}]",
                    w.property,
                    w.matrix.replace('\n', " ")
                )?;
            }
        }
        Ok(())
    }
}

/// Per-chunk accumulator.
#[derive(Default)]
struct Partial {
    tested: u64,
    tallies: BTreeMap<&'static str, u64>,
    violations: Vec<Finding>,
    collected: Vec<Finding>,
}

struct Sink<'a> {
    partial: &'a mut Partial,
    ordinal: u64,
    cap: usize,
}

impl Sink<'_> {
    fn count(&mut self, name: &'static str) {
        *self.partial.tallies.entry(name).or_default() += 1;
    }

    fn violation(&mut self, m: &BinaryMatrix, property: impl Into<String>) {
        self.count("violations");
        if self.partial.violations.len() < self.cap {
            self.partial.violations.push(self.finding(m, property));
        }
    }

    fn collect(&mut self, m: &BinaryMatrix, property: impl Into<String>) {
        if self.partial.collected.len() < self.cap {
            self.partial.collected.push(self.finding(m, property));
        }
    }

    fn finding(&self, m: &BinaryMatrix, property: impl Into<String>) -> Finding {
        Finding {
            ordinal: self.ordinal,
            matrix: m.to_text(),
            property: property.into(),
        }
    }
}

fn merge_findings(mut a: Vec<Finding>, b: Vec<Finding>, cap: usize) -> Vec<Finding> {
    a.extend(b);
    a.sort();
    a.truncate(cap);
    a
}

fn merge(mut a: Partial, b: Partial, cap: usize) -> Partial {
    a.tested += b.tested;
    for (k, v) in b.tallies {
        *a.tallies.entry(k).or_default() += v;
    }
    a.violations = merge_findings(a.violations, b.violations, cap);
    a.collected = merge_findings(a.collected, b.collected, cap);
    a
}

fn scan<F>(
    check: &str,
    spec: &UniverseSpec,
    opts: &ScanOptions,
    eval: F,
) -> Result<ScanReport, VerifyError>
where
    F: Fn(&BinaryMatrix, &mut Sink<'_>) + Sync,
{
    spec.validate()?;
    let (lo, hi) = spec.ordinal_range();
    let cap = opts.witness_cap;
    let chunks: Vec<(u64, u64)> = (lo..hi)
        .step_by(CHUNK as usize)
        .map(|start| (start, (start + CHUNK).min(hi)))
        .collect();
    let run_chunk = |&(start, end): &(u64, u64)| {
        let mut partial = Partial::default();
        for ordinal in start..end {
            if let Some(m) = spec.matrix_at(ordinal) {
                partial.tested += 1;
                let mut sink = Sink {
                    partial: &mut partial,
                    ordinal,
                    cap,
                };
                eval(&m, &mut sink);
            }
        }
        partial
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| VerifyError::InvalidSpec(format!("worker pool: {e}")))?;
    let total = pool.install(|| {
        chunks
            .par_iter()
            .map(run_chunk)
            .reduce(Partial::default, |a, b| merge(a, b, cap))
    });
    let mut tallies: BTreeMap<String, u64> = total
        .tallies
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
    tallies.entry("violations".to_owned()).or_insert(0);
    Ok(ScanReport {
        check: check.to_owned(),
        spec: Some(*spec),
        tested: total.tested,
        tallies,
        violations: total.violations,
        collected: total.collected,
    })
}

fn require_no_constraints(spec: &UniverseSpec, check: &str) -> Result<(), VerifyError> {
    if spec.constraints.is_empty() {
        Ok(())
    } else {
        Err(VerifyError::InvalidSpec(format!(
            "{check} takes no column constraints"
        )))
    }
}

/// First certificate: a `true` verdict on a distinct-row matrix implies a
/// heavy column.
pub fn check_theorem1(spec: &UniverseSpec, opts: &ScanOptions) -> Result<ScanReport, VerifyError> {
    require_no_constraints(spec, "theorem1")?;
    scan("theorem1", spec, opts, |m, sink| {
        let a1 = run_a1(m, &AlgoConfig::default()).value;
        let heavy = m.has_heavy_column();
        sink.count(if a1 { "a1_true" } else { "a1_false" });
        sink.count(if heavy { "has_heavy" } else { "no_heavy" });
        match (a1, heavy) {
            (true, true) => sink.count("a1_true_has_heavy"),
            (false, false) => sink.count("no_heavy_a1_false"),
            (false, true) => sink.count("converse_gap"),
            (true, false) => sink.violation(m, "theorem1: a1 true without a heavy column"),
        }
    })
}

fn key_condition_tally(hit: &KeyConditionHit<'_>, bad: &mut Vec<String>) {
    if hit.rows.len() >= 2 && !hit.column_is_heavy() {
        bad.push(format!(
            "key_condition: column {} of a {}x{} submatrix at depth {} is not heavy",
            hit.column,
            hit.rows.len(),
            hit.n,
            hit.depth
        ));
    }
}

/// Runs A2 with a key-condition observer. Returns the verdict, the number
/// of key-condition returns anywhere in the tree and the unsound ones.
fn a2_observed(m: &BinaryMatrix) -> (crate::algorithms::Verdict, u64, Vec<String>) {
    let mut hits = 0u64;
    let mut bad = Vec::new();
    let mut obs = |hit: KeyConditionHit<'_>| {
        hits += 1;
        key_condition_tally(&hit, &mut bad);
    };
    let v = Runner::new(Algorithm::A2, AlgoConfig::default())
        .observe(&mut obs)
        .run(m);
    (v, hits, bad)
}

/// Second certificate: under distinct rows, distinct columns and no
/// all-zero column, a `true` verdict implies a heavy column. Also checks
/// every key-condition return in the recursion tree.
pub fn check_theorem2(spec: &UniverseSpec, opts: &ScanOptions) -> Result<ScanReport, VerifyError> {
    if spec.constraints != Constraints::distinct_nonzero() {
        return Err(VerifyError::InvalidSpec(
            "theorem2 needs both distinct-columns and no-zero-column constraints".into(),
        ));
    }
    scan("theorem2", spec, opts, |m, sink| {
        let (v, hits, bad) = a2_observed(m);
        let heavy = m.has_heavy_column();
        sink.count(if v.value { "a2_true" } else { "a2_false" });
        sink.count(if heavy { "has_heavy" } else { "no_heavy" });
        if v.witness.map(|w| w.tag) == Some(LineTag::KeyCondition) {
            sink.count("key_condition_hits");
        }
        for _ in 0..hits {
            sink.count("key_condition_hits_nested");
        }
        match (v.value, heavy) {
            (true, true) => sink.count("a2_true_has_heavy"),
            (false, false) => sink.count("no_heavy_a2_false"),
            (false, true) => sink.count("converse_gap"),
            (true, false) => sink.violation(m, "theorem2: a2 true without a heavy column"),
        }
        for b in bad {
            sink.violation(m, b);
        }
    })
}

/// Every key-condition return with at least two rows, at any depth, must
/// trigger on a heavy column. Takes any universe.
pub fn check_key_condition(
    spec: &UniverseSpec,
    opts: &ScanOptions,
) -> Result<ScanReport, VerifyError> {
    scan("key_condition", spec, opts, |m, sink| {
        let (v, hits, bad) = a2_observed(m);
        sink.count(if v.value { "a2_true" } else { "a2_false" });
        for _ in 0..hits {
            sink.count("key_condition_hits_nested");
        }
        for b in bad {
            sink.violation(m, b);
        }
    })
}

/// If every zero entry has a conjugate, no column has more zeros than ones.
pub fn check_lemma1(spec: &UniverseSpec, opts: &ScanOptions) -> Result<ScanReport, VerifyError> {
    scan("lemma1", spec, opts, |m, sink| {
        if find_unpaired(m).is_some() {
            sink.count("hypothesis_fails");
            return;
        }
        sink.count("hypothesis_holds");
        let rows = m.m();
        for (k, w) in m.column_weights().into_iter().enumerate() {
            if rows - w > w {
                sink.violation(
                    m,
                    format!(
                        "lemma1: all zeros paired but column {} has more zeros than ones",
                        k + 1
                    ),
                );
            }
        }
    })
}

/// A matrix without a heavy column has an unpaired position, and reducing
/// along that row while keeping that column ends in an all-zero column,
/// under ascending and shuffled deletion orders.
pub fn check_reduction_claim(
    spec: &UniverseSpec,
    opts: &ScanOptions,
) -> Result<ScanReport, VerifyError> {
    let seed = opts.seed;
    scan("claim", spec, opts, move |m, sink| {
        if m.has_heavy_column() {
            return;
        }
        sink.count("no_heavy");
        let Some(u) = find_unpaired(m) else {
            sink.violation(m, "claim: no heavy column but every zero entry is paired");
            return;
        };
        sink.count("unpaired_found");
        let mut shuffled: Vec<usize> = (1..=m.n()).filter(|&k| k != u.column).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sink.ordinal);
        shuffled.shuffle(&mut rng);
        let expected = consistent_rows(m, u.row, u.column).expect("witness indices are valid");
        for (label, order) in [("ascending", None), ("shuffled", Some(shuffled.as_slice()))] {
            let trace = sequential_reduction(m, u.row, u.column, order).expect("valid order");
            if trace.surviving_rows != expected {
                sink.violation(
                    m,
                    format!("claim: {label} survivors differ from consistent rows"),
                );
            }
            if trace.terminal_is_all_zero() {
                sink.count(if label == "ascending" {
                    "terminal_all_zero_ascending"
                } else {
                    "terminal_all_zero_shuffled"
                });
            } else {
                sink.violation(
                    m,
                    format!(
                        "claim: {label} reduction of row {} keeping column {} leaves a one",
                        u.row, u.column
                    ),
                );
            }
        }
    })
}

/// The fixed 1x2 all-zero matrix: A2 returns `true` from its single-row
/// base case although no column is heavy, because two hypotheses are
/// dropped.
pub fn remark_counterexamples() -> ScanReport {
    let m = BinaryMatrix::from_strs(&["00"]).expect("fixed matrix");
    let v = run_a2(&m);
    let props = m.properties();
    let mut tallies = BTreeMap::new();
    let mut violations = Vec::new();
    let mut expect = |ok: bool, name: &str| {
        if ok {
            tallies.insert(name.to_owned(), 1);
        } else {
            violations.push(Finding {
                ordinal: 0,
                matrix: m.to_text(),
                property: format!("remark: expected {name}"),
            });
        }
    };
    expect(v.value, "a2_true");
    expect(
        v.witness.map(|w| w.tag) == Some(LineTag::M1Base),
        "m1_base_return",
    );
    expect(m.heavy_columns().is_empty(), "no_heavy");
    expect(!props.distinct_columns, "distinct_columns_false");
    expect(props.has_all_zero_column, "all_zero_column");
    expect(props.distinct_rows, "distinct_rows");
    tallies.insert("violations".to_owned(), violations.len() as u64);
    let confirmed = violations.is_empty();
    if confirmed {
        tallies.insert("confirmed_counterexample".to_owned(), 1);
    }
    ScanReport {
        check: "remark".to_owned(),
        spec: None,
        tested: 1,
        tallies,
        collected: confirmed
            .then(|| Finding {
                ordinal: 0,
                matrix: m.to_text(),
                property: "remark: a2 true without a heavy column (distinct-columns and no-zero-column dropped)"
                    .to_owned(),
            })
            .into_iter()
            .collect(),
        violations,
    }
}

/// Matrices with a heavy column on which a certificate still says `false`.
/// A2 is only counted on matrices meeting its column hypotheses.
pub fn converse_scan(spec: &UniverseSpec, opts: &ScanOptions) -> Result<ScanReport, VerifyError> {
    scan("converse", spec, opts, |m, sink| {
        if !m.has_heavy_column() {
            return;
        }
        sink.count("has_heavy");
        if !run_a1(m, &AlgoConfig::default()).value {
            sink.count("a1_converse_gap");
            sink.collect(m, "converse_gap: a1");
        }
        if Constraints::distinct_nonzero().admits(m) {
            sink.count("a2_eligible");
            if !run_a2(m).value {
                sink.count("a2_converse_gap");
                sink.collect(m, "converse_gap: a2");
            }
        }
    })
}

/// Next lexicographic permutation in place; false after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p
        .iter()
        .rposition(|&x| x > p[i])
        .expect("pivot has a successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn column_permutations(n: usize, budget: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let factorial: usize = (1..=n).product();
    let mut perm: Vec<usize> = (1..=n).collect();
    if n <= MAX_EXHAUSTIVE_N || factorial <= budget {
        let mut all = vec![perm.clone()];
        while next_permutation(&mut perm) {
            all.push(perm.clone());
        }
        return all;
    }
    let mut sampled = vec![perm.clone()];
    for _ in 1..budget {
        perm.shuffle(rng);
        sampled.push(perm.clone());
    }
    sampled
}

/// A2 under column permutations of the input (reported, never judged) and
/// A1 under input permutations and seeded processing orders (must agree).
pub fn order_sensitivity_scan(
    spec: &UniverseSpec,
    opts: &ScanOptions,
) -> Result<ScanReport, VerifyError> {
    let opts_copy = *opts;
    scan("order_sensitivity", spec, opts, move |m, sink| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts_copy.seed);
        rng.set_stream(sink.ordinal);
        let perms = column_permutations(m.n(), opts_copy.permutation_budget, &mut rng);
        let a1_base = run_a1(m, &AlgoConfig::default()).value;
        let a2_base = run_a2(m).value;
        let mut a2_sensitive = false;
        let mut a1_mismatch = false;
        for perm in &perms {
            sink.count("permutations_tested");
            let p = m.permute_columns(perm).expect("valid permutation");
            a2_sensitive |= run_a2(&p).value != a2_base;
            a1_mismatch |= run_a1(&p, &AlgoConfig::default()).value != a1_base;
        }
        for j in 0..5u64 {
            let config = AlgoConfig {
                column_order: ColumnOrder::Shuffled(opts_copy.seed.wrapping_add(j)),
                memoize: false,
            };
            a1_mismatch |= run_a1(m, &config).value != a1_base;
        }
        if a2_sensitive {
            sink.count("a2_sensitive");
            sink.collect(
                m,
                "order_sensitivity: a2 verdict changes under column permutation",
            );
        }
        if a1_mismatch {
            sink.violation(m, "order_sensitivity: a1 verdict depends on column order");
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Theorem1,
    Theorem2,
    Lemma1,
    Claim,
    KeyCondition,
    Remark,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Theorem1,
        Check::Theorem2,
        Check::Lemma1,
        Check::Claim,
        Check::KeyCondition,
        Check::Remark,
    ];

    /// Runs the check on `spec`, adding the column constraints the second
    /// certificate needs and dropping them for the others.
    pub fn run(self, spec: &UniverseSpec, opts: &ScanOptions) -> Result<ScanReport, VerifyError> {
        let plain = spec.with_constraints(Constraints::default());
        match self {
            Check::Theorem1 => check_theorem1(&plain, opts),
            Check::Theorem2 => check_theorem2(
                &spec.with_constraints(Constraints::distinct_nonzero()),
                opts,
            ),
            Check::Lemma1 => check_lemma1(&plain, opts),
            Check::Claim => check_reduction_claim(&plain, opts),
            Check::KeyCondition => check_key_condition(spec, opts),
            Check::Remark => Ok(remark_counterexamples()),
        }
    }
}

impl FromStr for Check {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "theorem1" => Check::Theorem1,
            "theorem2" => Check::Theorem2,
            "lemma1" => Check::Lemma1,
            "claim" => Check::Claim,
            "key-condition" => Check::KeyCondition,
            "remark" => Check::Remark,
            _ => return Err(VerifyError::InvalidSpec(format!("unknown check {s:?}"))),
        })
    }
}
