//! Seeded Monte-Carlo sweeps over `(n, k)` cells.
//!
//! Every sample draws its own generator from `(seed, n, k, index)`, so the
//! output does not depend on how many worker threads run the cell.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{pair, Complex, Disc};
use crate::roots::RootFinder;
use crate::verifier::certify_roots;

pub const CSV_HEADER: &str = "n,k,samples,max_tightness,mean_tightness,failures";
/// Radius of the disc free (unselected) roots are drawn from.
pub const FREE_ROOT_RADIUS: f64 = 10.0;

/// Upper end of the `k` range, either fixed or tied to the cell's `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KUpper {
    Fixed(usize),
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRange {
    pub lo: usize,
    pub hi: KUpper,
}

impl KRange {
    /// Admissible `k` values for a given `n`; always within `2..=n`.
    pub fn for_n(&self, n: usize) -> RangeInclusive<usize> {
        let hi = match self.hi {
            KUpper::Fixed(h) => h.min(n),
            KUpper::N => n,
        };
        self.lo.max(2)..=hi
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n_range: RangeInclusive<usize>,
    pub k_range: KRange,
    pub samples_per_cell: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub max_tightness: f64,
    pub mean_tightness: f64,
    pub failures: usize,
}

/// Everything needed to replay a failing sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reproducer {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub sample_index: usize,
    pub sample_seed: u64,
    #[serde(with = "pair::vec")]
    pub roots: Vec<Complex>,
    pub node_indices: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub reproducers: Vec<Reproducer>,
}

impl SweepOutcome {
    pub fn total_failures(&self) -> usize {
        self.records.iter().map(|r| r.failures).sum()
    }

    pub fn total_samples(&self) -> usize {
        self.records.iter().map(|r| r.samples).sum()
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one sample, derived from the sweep seed and its coordinates.
pub fn sample_seed(seed: u64, n: usize, k: usize, index: usize) -> u64 {
    [n as u64, k as u64, index as u64]
        .iter()
        .fold(splitmix(seed), |acc, &v| splitmix(acc ^ v))
}

fn uniform_in_disc(rng: &mut impl Rng, radius: f64) -> Complex {
    loop {
        let z = Complex::new(
            rng.gen_range(-radius..=radius),
            rng.gen_range(-radius..=radius),
        );
        if z.norm() <= radius {
            return z;
        }
    }
}

/// `k` nodes uniform in the closed unit disc followed by `n - k` free roots
/// uniform in `|z| <= 10`. The nodes are the first `k` entries.
pub fn sample_instance(rng: &mut impl Rng, n: usize, k: usize) -> Vec<Complex> {
    let mut roots: Vec<Complex> = (0..k).map(|_| uniform_in_disc(rng, 1.0)).collect();
    roots.extend((k..n).map(|_| uniform_in_disc(rng, FREE_ROOT_RADIUS)));
    roots
}

enum SampleOutcome {
    Holds(f64),
    Fails(Option<f64>, Reproducer),
}

fn run_sample(seed: u64, n: usize, k: usize, index: usize) -> SampleOutcome {
    let s = sample_seed(seed, n, k, index);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    let roots = sample_instance(&mut rng, n, k);
    let node_indices: Vec<usize> = (0..k).collect();
    let fail = |tightness: Option<f64>, reason: String| {
        let repro = Reproducer {
            seed,
            n,
            k,
            sample_index: index,
            sample_seed: s,
            roots: roots.clone(),
            node_indices: node_indices.clone(),
            reason,
        };
        log::error!(
            "sweep failure: {}",
            serde_json::to_string(&repro).unwrap_or_default()
        );
        SampleOutcome::Fails(tightness, repro)
    };
    match certify_roots(
        &roots,
        &node_indices,
        &Disc::unit(),
        &RootFinder::with_seed(s),
    ) {
        Ok(cert) if cert.theorem_holds => SampleOutcome::Holds(cert.tightness.unwrap_or(0.0)),
        Ok(cert) => fail(
            cert.tightness,
            format!(
                "zero of the derivative at distance {:?} outside radius {}",
                cert.witness_distance, cert.bound_disc.radius
            ),
        ),
        Err(e) => fail(None, e.to_string()),
    }
}

fn run_cell(seed: u64, n: usize, k: usize, samples: usize) -> (SweepRecord, Vec<Reproducer>) {
    let outcomes: Vec<SampleOutcome> = (0..samples)
        .into_par_iter()
        .map(|i| run_sample(seed, n, k, i))
        .collect();
    let mut record = SweepRecord {
        n,
        k,
        samples,
        max_tightness: 0.0,
        mean_tightness: 0.0,
        failures: 0,
    };
    let mut reproducers = Vec::new();
    let (mut sum, mut count) = (0.0, 0usize);
    for outcome in outcomes {
        let tightness = match outcome {
            SampleOutcome::Holds(t) => Some(t),
            SampleOutcome::Fails(t, repro) => {
                record.failures += 1;
                reproducers.push(repro);
                t
            }
        };
        if let Some(t) = tightness {
            record.max_tightness = record.max_tightness.max(t);
            sum += t;
            count += 1;
        }
    }
    if count > 0 {
        record.mean_tightness = sum / count as f64;
    }
    (record, reproducers)
}

/// Runs every admissible cell. Cells with zero samples are omitted.
pub fn sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    let body = || {
        let mut outcome = SweepOutcome {
            records: Vec::new(),
            reproducers: Vec::new(),
        };
        if config.samples_per_cell == 0 {
            return outcome;
        }
        for n in config.n_range.clone() {
            for k in config.k_range.for_n(n) {
                let (record, repro) = run_cell(config.seed, n, k, config.samples_per_cell);
                outcome.records.push(record);
                outcome.reproducers.extend(repro);
            }
        }
        outcome
    };
    match config.workers {
        None => Ok(body()),
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(body))
        }
    }
}

/// Plot-ready CSV; reals carry 17 significant digits.
pub fn to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{:.16e},{:.16e},{}",
            r.n, r.k, r.samples, r.max_tightness, r.mean_tightness, r.failures
        );
    }
    out
}
