//! Randomised fast-vs-oracle verification runs.

use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{
    fid_score_naive, hqc_score_naive, hqc_score_pairwise_naive, tensor_size, verify_identity, verify_lemma1,
    OracleConfig, ZeroEigenspace, IDENTITY_TOLERANCE, LEMMA_TOLERANCE,
};
use crate::classifier::{build_overlap_cache, fid_score, fid_score_kernel_form, hqcs_score, kernel_weights};
use crate::encoding::{encode_features, BinaryDataset, CopyCount, EncodedSample, Label};
use crate::{math, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    /// Nonzero spectrum of a single-pair operator.
    Lemma1,
    FidEquivalence,
    KernelForm,
    /// Fast HQCS against the centroid Helstrom score.
    HqcsEquivalence,
    /// Centroid Helstrom score against the mean of single-pair scores.
    Identity,
    /// Fast HQCS against the mean of single-pair scores with the null space
    /// of each pair operator excluded.
    PairwiseEquivalence,
}

impl CheckId {
    pub const ALL: [CheckId; 6] = [
        Self::Lemma1,
        Self::FidEquivalence,
        Self::KernelForm,
        Self::HqcsEquivalence,
        Self::Identity,
        Self::PairwiseEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lemma1 => "lemma1_eigenvalues",
            Self::FidEquivalence => "fid_vs_oracle",
            Self::KernelForm => "fid_kernel_form",
            Self::HqcsEquivalence => "hqcs_vs_centroid_oracle",
            Self::Identity => "pairwise_identity",
            Self::PairwiseEquivalence => "hqcs_vs_pairwise_oracle",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Self::Lemma1 => LEMMA_TOLERANCE,
            Self::FidEquivalence => 1e-10,
            Self::KernelForm => 1e-12,
            Self::HqcsEquivalence | Self::PairwiseEquivalence => 1e-9,
            Self::Identity => IDENTITY_TOLERANCE,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Dimensions are drawn from `2..=max_dim`.
    pub max_dim: usize,
    /// Class sizes are drawn from `1..=per_class`.
    pub per_class: usize,
    /// Copy counts are drawn from `1..=k_max`.
    pub k_max: u32,
    pub trials: usize,
    pub seed: u64,
    pub oracle: OracleConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            max_dim: 4,
            per_class: 3,
            k_max: 3,
            trials: 100,
            seed: 42,
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckResult {
    pub id: CheckId,
    pub evaluations: usize,
    pub failures: usize,
    pub max_deviation: f64,
}

impl CheckResult {
    fn new(id: CheckId) -> Self {
        Self {
            id,
            evaluations: 0,
            failures: 0,
            max_deviation: 0.0,
        }
    }

    fn record(&mut self, deviation: f64) {
        self.evaluations += 1;
        // NaN counts as a failure
        if !(deviation <= self.id.tolerance()) {
            self.failures += 1;
        }
        if deviation.is_nan() || deviation > self.max_deviation {
            self.max_deviation = deviation;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, id: CheckId) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Uniform in `[0, 1)`.
pub(crate) fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

/// Random unit vector with components drawn from `[-1, 1)` before encoding.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize, label: Label) -> EncodedSample {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| 2.0 * uniform(rng) - 1.0).collect();
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
            if let Ok(s) = encode_features(&v, label) {
                return s;
            }
        }
    }
}

fn validate(cfg: &SuiteConfig) -> Result<()> {
    if cfg.max_dim < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: cfg.max_dim,
        });
    }
    if cfg.per_class == 0 {
        return Err(Error::TooFewSamples { needed: 1, available: 0 });
    }
    if cfg.k_max == 0 {
        return Err(Error::NonIntegerK(0.0));
    }
    tensor_size(cfg.max_dim, CopyCount::new(cfg.k_max as f64)?, cfg.oracle.size_cap).map(|_| ())
}

/// Runs every [`CheckId`] once per trial on a fresh random instance.
///
/// Size limits are checked for the largest `(d, k)` before any trial runs.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    validate(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks: Vec<CheckResult> = CheckId::ALL.iter().map(|id| CheckResult::new(*id)).collect();
    let excluded = OracleConfig {
        zero_eigenspace: ZeroEigenspace::Excluded,
        ..cfg.oracle
    };
    for _ in 0..cfg.trials {
        let dim = 2 + below(&mut rng, cfg.max_dim - 1);
        let ma = 1 + below(&mut rng, cfg.per_class);
        let mb = 1 + below(&mut rng, cfg.per_class);
        let k = CopyCount::new((1 + below(&mut rng, cfg.k_max as usize)) as f64)?;
        let class0: Vec<_> = (0..ma).map(|_| random_state(&mut rng, dim, Label::Class0)).collect();
        let class1: Vec<_> = (0..mb).map(|_| random_state(&mut rng, dim, Label::Class1)).collect();
        let c = random_state(&mut rng, dim, Label::Class0);
        let train = BinaryDataset::from_classes(class0, class1)?;
        let cache = build_overlap_cache(core::slice::from_ref(&c), &train)?;

        let a = train.class(Label::Class0).next().ok_or(Error::EmptyClass(0))?;
        let b = train.class(Label::Class1).next().ok_or(Error::EmptyClass(1))?;
        let mut results = [0.0; 6];
        results[0] = verify_lemma1(a, b, k, &cfg.oracle)?.max_deviation;

        let fid = fid_score(&cache, 0, k)?;
        results[1] = math::abs(fid - fid_score_naive(&c, &train, k, &cfg.oracle)?);
        let weights = kernel_weights(&cache);
        results[2] = math::abs(fid - fid_score_kernel_form(&cache, 0, k, &weights)?);

        let (hqcs, _) = hqcs_score(&cache, 0, k)?;
        results[3] = math::abs(hqcs - hqc_score_naive(&c, &train, k, &cfg.oracle)?);
        results[4] = verify_identity(&c, &train, k, &cfg.oracle)?.deviation;
        results[5] = math::abs(hqcs - hqc_score_pairwise_naive(&c, &train, k, &excluded)?);

        for (check, dev) in checks.iter_mut().zip(results) {
            check.record(dev);
        }
    }
    Ok(SuiteReport { config: *cfg, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_vacuous() {
        let r = run_suite(&SuiteConfig {
            trials: 0,
            ..SuiteConfig::default()
        })
        .unwrap();
        assert!(r.passed());
        assert!(r.checks.iter().all(|c| c.evaluations == 0));
    }

    #[test]
    fn size_cap_is_checked_up_front() {
        let cfg = SuiteConfig {
            max_dim: 8,
            k_max: 10,
            ..SuiteConfig::default()
        };
        assert_eq!(run_suite(&cfg), Err(Error::SizeCap { required: 1 << 30, cap: 4096 }));
    }

    #[test]
    fn single_pair_qubit_instances_pass_every_check() {
        let cfg = SuiteConfig {
            max_dim: 2,
            per_class: 1,
            k_max: 1,
            trials: 30,
            seed: 3,
            ..SuiteConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn default_run_is_deterministic() {
        let cfg = SuiteConfig {
            trials: 20,
            ..SuiteConfig::default()
        };
        let a = run_suite(&cfg).unwrap();
        assert_eq!(a, run_suite(&cfg).unwrap());
        for id in [CheckId::Lemma1, CheckId::FidEquivalence, CheckId::KernelForm, CheckId::PairwiseEquivalence] {
            assert!(a.check(id).unwrap().passed(), "{id}: {:?}", a.check(id));
        }
        // the centroid operator does not split into pair operators
        assert!(!a.check(CheckId::Identity).unwrap().passed());
    }
}
