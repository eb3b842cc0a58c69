//! Recursion cost measurements: call-count growth tables over matrix
//! families, a CSV baseline store and regression comparison.
//!
//! Call counts, cache hits and depths are exact and deterministic. Wall time
//! is recorded alongside but only ever reported as drift.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algorithms::{AlgoConfig, Algorithm, Runner};
use crate::matrix::{parse_matrix, BinaryMatrix, MatrixError};
use crate::verification::{
    enumerate_universe, UniverseSpec, VerifyError, MAX_EXHAUSTIVE_N, MAX_RANDOM_N,
};

pub const CSV_HEADER: &str = "n,family,m,algo,variant,calls,cache_hits,max_depth,elapsed_ns";

/// Samples drawn per `n` when searching for worst cases above the
/// exhaustive limit.
const WORST_SAMPLES: u64 = 2000;
const WORST_SEED: u64 = 0x0bad_5eed;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("n range {lo}..={hi} outside 1..={max} for family {family}")]
    InvalidRange {
        family: String,
        lo: usize,
        hi: usize,
        max: usize,
    },
    #[error("unknown family {0:?}, expected full_cube, random_half:SEED or worst_found")]
    BadFamily(String),
    #[error("no baseline at {}", .0.display())]
    MissingBaseline(PathBuf),
    #[error("baseline csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("stored specimen: {0}")]
    Specimen(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// All `2^n` rows.
    FullCube,
    /// Each row of the cube kept with probability 1/2.
    RandomHalf(u64),
    /// Highest plain call count found by scanning the distinct-row universe.
    WorstFound,
}

impl Family {
    pub fn max_n(self) -> usize {
        match self {
            Family::FullCube => 10,
            Family::RandomHalf(_) => 16,
            Family::WorstFound => MAX_RANDOM_N,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::FullCube => f.write_str("full_cube"),
            Family::RandomHalf(seed) => write!(f, "random_half:{seed}"),
            Family::WorstFound => f.write_str("worst_found"),
        }
    }
}

impl FromStr for Family {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full_cube" => Ok(Family::FullCube),
            "worst_found" => Ok(Family::WorstFound),
            _ => s
                .strip_prefix("random_half:")
                .and_then(|seed| seed.parse().ok())
                .map(Family::RandomHalf)
                .ok_or_else(|| ProfileError::BadFamily(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Memo,
}

/// One measured run. `calls`, `cache_hits` and `max_depth` are empty when
/// the run hit its time budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub family: String,
    pub m: usize,
    pub algo: Algorithm,
    pub variant: Variant,
    pub calls: Option<u64>,
    pub cache_hits: Option<u64>,
    pub max_depth: Option<u64>,
    pub elapsed_ns: u64,
}

impl GrowthRow {
    pub fn timed_out(&self) -> bool {
        self.calls.is_none()
    }

    fn key(&self) -> RowKey {
        RowKey {
            n: self.n,
            family: self.family.clone(),
            algo: self.algo,
            variant: self.variant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RowKey {
    pub n: usize,
    pub family: String,
    pub algo: Algorithm,
    pub variant: Variant,
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let variant = match self.variant {
            Variant::Plain => "plain",
            Variant::Memo => "memo",
        };
        write!(f, "{} n={} {} {}", self.family, self.n, self.algo, variant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn get(&self, n: usize, algo: Algorithm, variant: Variant) -> Option<&GrowthRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.algo == algo && r.variant == variant)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("in-memory csv write");
        }
        let bytes = w.into_inner().expect("in-memory csv flush");
        if self.rows.is_empty() {
            return format!("{CSV_HEADER}\n");
        }
        String::from_utf8(bytes).expect("csv output is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Self, ProfileError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        if header.join(",") != CSV_HEADER {
            return Err(ProfileError::Csv(csv::Error::from(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("expected header {CSV_HEADER:?}"),
            ))));
        }
        let rows = r.deserialize().collect::<Result<Vec<GrowthRow>, _>>()?;
        Ok(GrowthTable { rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table is always serializable")
    }
}

impl fmt::Display for GrowthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>3} {:<18} {:>6} {:<4} {:<6} {:>12} {:>10} {:>5} {:>14}",
            "n", "family", "m", "algo", "var", "calls", "hits", "depth", "elapsed_ns"
        )?;
        let show = |v: Option<u64>| v.map_or_else(|| "timeout".to_owned(), |v| v.to_string());
        for r in &self.rows {
            writeln!(
                f,
                "{:>3} {:<18} {:>6} {:<4} {:<6} {:>12} {:>10} {:>5} {:>14}",
                r.n,
                r.family,
                r.m,
                r.algo,
                if r.variant == Variant::Plain {
                    "plain"
                } else {
                    "memo"
                },
                show(r.calls),
                show(r.cache_hits),
                show(r.max_depth),
                r.elapsed_ns
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileOptions {
    /// Wall-clock budget per run.
    pub budget: Duration,
    /// Directory holding baselines and worst-case specimens.
    pub store: Option<PathBuf>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            budget: Duration::from_secs(10),
            store: None,
        }
    }
}

pub fn full_cube(n: usize) -> BinaryMatrix {
    BinaryMatrix::new((0..1u64 << n).collect(), n).expect("cube rows fit n columns")
}

pub fn random_half(n: usize, seed: u64) -> BinaryMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    let mut rows: Vec<u64> = (0..1u64 << n).filter(|_| rng.gen_bool(0.5)).collect();
    if rows.is_empty() {
        rows.push(0);
    }
    BinaryMatrix::new(rows, n).expect("cube rows fit n columns")
}

/// The distinct-row matrix with the most plain calls for `algo`: exhaustive
/// for `n <= 4`, a fixed-seed sample above. Ties keep the earliest.
pub fn find_worst(n: usize, algo: Algorithm) -> Result<BinaryMatrix, ProfileError> {
    let spec = if n <= MAX_EXHAUSTIVE_N {
        UniverseSpec::exhaustive(n)
    } else {
        UniverseSpec::random(n, WORST_SAMPLES, WORST_SEED)
    };
    let mut best: Option<(u64, BinaryMatrix)> = None;
    for m in enumerate_universe(&spec)? {
        let calls = Runner::new(algo, AlgoConfig::default()).run(&m).stats.calls;
        if best.as_ref().is_none_or(|(c, _)| calls > *c) {
            best = Some((calls, m));
        }
    }
    Ok(best.expect("universe is nonempty").1)
}

fn specimen_path(store: &Path, n: usize, algo: Algorithm) -> PathBuf {
    store.join("worst_found").join(format!("n{n}_{algo}.txt"))
}

/// Loads a stored worst-case specimen, or finds one and stores it.
pub fn worst_specimen(
    n: usize,
    algo: Algorithm,
    store: Option<&Path>,
) -> Result<BinaryMatrix, ProfileError> {
    if let Some(store) = store {
        let path = specimen_path(store, n, algo);
        if path.exists() {
            return Ok(parse_matrix(&fs::read_to_string(path)?)?);
        }
        let m = find_worst(n, algo)?;
        fs::create_dir_all(path.parent().expect("specimen path has a parent"))?;
        fs::write(path, format!("{}\n", m.to_text()))?;
        return Ok(m);
    }
    find_worst(n, algo)
}

fn measure(
    m: &BinaryMatrix,
    family: &str,
    algo: Algorithm,
    variant: Variant,
    budget: Duration,
) -> GrowthRow {
    let config = AlgoConfig {
        memoize: variant == Variant::Memo,
        ..Default::default()
    };
    let start = std::time::Instant::now();
    let result = Runner::new(algo, config).budget(budget).try_run(m);
    let (calls, cache_hits, max_depth, elapsed_ns) = match result {
        Ok(v) => (
            Some(v.stats.calls),
            Some(v.stats.cache_hits),
            Some(v.stats.max_depth),
            v.stats.elapsed_ns,
        ),
        Err(_) => (None, None, None, start.elapsed().as_nanos() as u64),
    };
    GrowthRow {
        n: m.n(),
        family: family.to_owned(),
        m: m.m(),
        algo,
        variant,
        calls,
        cache_hits,
        max_depth,
        elapsed_ns,
    }
}

/// Runs both algorithms, plain and memoized, on the family member for each
/// `n` in `lo..=hi`. Timed-out runs appear as rows with empty counts.
pub fn profile_family(
    family: Family,
    lo: usize,
    hi: usize,
    opts: &ProfileOptions,
) -> Result<GrowthTable, ProfileError> {
    let name = family.to_string();
    if lo == 0 || lo > hi || hi > family.max_n() {
        return Err(ProfileError::InvalidRange {
            family: name,
            lo,
            hi,
            max: family.max_n(),
        });
    }
    let mut rows = Vec::new();
    for n in lo..=hi {
        for algo in [Algorithm::A1, Algorithm::A2] {
            let m = match family {
                Family::FullCube => full_cube(n),
                Family::RandomHalf(seed) => random_half(n, seed),
                Family::WorstFound => worst_specimen(n, algo, opts.store.as_deref())?,
            };
            for variant in [Variant::Plain, Variant::Memo] {
                rows.push(measure(&m, &name, algo, variant, opts.budget));
            }
        }
    }
    Ok(GrowthTable { rows })
}

/// Baseline file name for a profiling configuration.
pub fn config_key(family: Family, lo: usize, hi: usize) -> String {
    let digest = Sha256::digest(format!("family={family};n={lo}..={hi};v1").as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn baseline_path(store: &Path, family: Family, lo: usize, hi: usize) -> PathBuf {
    store.join(format!("{}.csv", config_key(family, lo, hi)))
}

pub fn save_baseline(path: &Path, table: &GrowthTable) -> Result<(), ProfileError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, table.to_csv())?;
    Ok(())
}

pub fn load_baseline(path: &Path) -> Result<GrowthTable, ProfileError> {
    match fs::read_to_string(path) {
        Ok(text) => GrowthTable::from_csv(&text),
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            Err(ProfileError::MissingBaseline(path.to_owned()))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Change {
    Calls {
        before: Option<u64>,
        after: Option<u64>,
    },
    CacheHits {
        before: Option<u64>,
        after: Option<u64>,
    },
    Rows {
        before: usize,
        after: usize,
    },
    MissingInBaseline,
    MissingInCurrent,
    /// Wall time moved by more than the drift factor.
    Elapsed {
        before: u64,
        after: u64,
    },
}

impl fmt::Display for Change {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn count(v: &Option<u64>) -> String {
            v.map_or_else(|| "timeout".to_string(), |c| c.to_string())
        }
        match self {
            Change::Calls { before, after } => {
                write!(f, "calls {} -> {}", count(before), count(after))
            }
            Change::CacheHits { before, after } => {
                write!(f, "cache hits {} -> {}", count(before), count(after))
            }
            Change::Rows { before, after } => write!(f, "m {before} -> {after}"),
            Change::MissingInBaseline => f.write_str("not in baseline"),
            Change::MissingInCurrent => f.write_str("missing from current run"),
            Change::Elapsed { before, after } => write!(f, "elapsed {before}ns -> {after}ns"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub key: RowKey,
    pub change: Change,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SnapshotDiff {
    /// Count changes: a behavioural regression.
    pub behavioral: Vec<DiffEntry>,
    /// Timing drift only.
    pub informational: Vec<DiffEntry>,
}

impl SnapshotDiff {
    pub fn is_empty(&self) -> bool {
        self.behavioral.is_empty() && self.informational.is_empty()
    }

    pub fn has_regressions(&self) -> bool {
        !self.behavioral.is_empty()
    }
}

impl fmt::Display for SnapshotDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "no differences");
        }
        for (label, list) in [
            ("BEHAVIORAL", &self.behavioral),
            ("info", &self.informational),
        ] {
            for e in list {
                writeln!(f, "{label}: {}: {}", e.key, e.change)?;
            }
        }
        Ok(())
    }
}

/// Wall time ratio beyond which drift is noted.
const DRIFT_FACTOR: f64 = 1.5;

pub fn snapshot_compare(current: &GrowthTable, baseline: &GrowthTable) -> SnapshotDiff {
    let mut diff = SnapshotDiff::default();
    let push =
        |list: &mut Vec<DiffEntry>, key: RowKey, change| list.push(DiffEntry { key, change });
    for cur in &current.rows {
        let key = cur.key();
        let Some(base) = baseline.rows.iter().find(|b| b.key() == key) else {
            push(&mut diff.behavioral, key, Change::MissingInBaseline);
            continue;
        };
        if base.m != cur.m {
            push(
                &mut diff.behavioral,
                key.clone(),
                Change::Rows {
                    before: base.m,
                    after: cur.m,
                },
            );
        }
        if base.calls != cur.calls {
            push(
                &mut diff.behavioral,
                key.clone(),
                Change::Calls {
                    before: base.calls,
                    after: cur.calls,
                },
            );
        }
        if base.cache_hits != cur.cache_hits {
            push(
                &mut diff.behavioral,
                key.clone(),
                Change::CacheHits {
                    before: base.cache_hits,
                    after: cur.cache_hits,
                },
            );
        }
        let (b, a) = (base.elapsed_ns.max(1) as f64, cur.elapsed_ns.max(1) as f64);
        if a / b > DRIFT_FACTOR || b / a > DRIFT_FACTOR {
            push(
                &mut diff.informational,
                key,
                Change::Elapsed {
                    before: base.elapsed_ns,
                    after: cur.elapsed_ns,
                },
            );
        }
    }
    for base in &baseline.rows {
        if !current.rows.iter().any(|c| c.key() == base.key()) {
            push(&mut diff.behavioral, base.key(), Change::MissingInCurrent);
        }
    }
    diff
}
