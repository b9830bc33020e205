//! Stratified cross-validation, F1, and `k` sweeps.
//!
//! A sweep builds one [`FoldEvaluator`] (one overlap cache) per fold and then
//! scores every grid point from those caches, so the per-`k` cost does not
//! depend on the feature dimension.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::classifier::{build_overlap_cache, fid_score, ClassifierId, HqcsEvaluation, HqcsWeights, OverlapCache, ScoreReport};
use crate::encoding::{BinaryDataset, CopyCount, EncodedSample, Label};
use crate::{math, Error, Result};

pub const DEFAULT_FOLDS: usize = 5;
pub const DEFAULT_SEED: u64 = 42;

/// Margin used by [`nonmonotonicity_check`].
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Per-sample fold assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub fold_count: usize,
    pub seed: u64,
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        self.indices_where(|f| f == fold)
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        self.indices_where(|f| f != fold)
    }

    fn indices_where(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, f)| keep(**f))
            .map(|(i, _)| i)
            .collect()
    }
}

fn shuffle(items: &mut [usize], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = ((rng.next_u64() as u128 * (i as u128 + 1)) >> 64) as usize;
        items.swap(i, j);
    }
}

/// Shuffles each class with a seeded ChaCha8 stream and deals it round-robin
/// over the folds. Class 1 continues the deal where class 0 stopped, so fold
/// sizes differ by at most one.
pub fn stratified_kfold(dataset: &BinaryDataset, folds: usize, seed: u64) -> Result<FoldPlan> {
    if folds < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            available: folds,
        });
    }
    for label in [Label::Class0, Label::Class1] {
        let n = dataset.class_size(label);
        if n < folds {
            return Err(Error::TooFewSamples {
                needed: folds,
                available: n,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = alloc::vec![0; dataset.len()];
    let mut next = 0;
    for label in [Label::Class0, Label::Class1] {
        let mut members: Vec<usize> = dataset
            .samples()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.label() == label)
            .map(|(i, _)| i)
            .collect();
        shuffle(&mut members, &mut rng);
        for i in members {
            assignments[i] = next % folds;
            next += 1;
        }
    }
    Ok(FoldPlan {
        fold_count: folds,
        seed,
        assignments,
    })
}

/// F1 of `positive`; 0 when precision + recall is 0.
pub fn f1_score(y_true: &[Label], y_pred: &[Label], positive: Label) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (mut tp, mut fp, mut fne) = (0usize, 0usize, 0usize);
    for (t, p) in y_true.iter().zip(y_pred) {
        match (*t == positive, *p == positive) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fne += 1,
            (false, false) => {}
        }
    }
    // 2PR/(P+R) == 2TP/(2TP+FP+FN), and 0 exactly when P+R == 0
    if tp == 0 {
        return Ok(0.0);
    }
    Ok(2.0 * tp as f64 / (2 * tp + fp + fne) as f64)
}

/// Overlap cache and ground truth for one held-out fold.
#[derive(Debug, Clone)]
pub struct FoldEvaluator {
    fold: usize,
    test_indices: Vec<usize>,
    truth: Vec<Label>,
    cache: OverlapCache,
}

/// F1 values of both classifiers on one fold at one `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldScores {
    pub f1_hqcs: f64,
    pub f1_fid: f64,
    pub skipped_pairs: usize,
}

impl FoldEvaluator {
    pub fn new(dataset: &BinaryDataset, plan: &FoldPlan, fold: usize) -> Result<Self> {
        check_plan(dataset, plan)?;
        let test_indices = plan.test_indices(fold);
        if test_indices.is_empty() {
            return Err(Error::TooFewSamples { needed: 1, available: 0 });
        }
        let train = dataset.subset(&plan.train_indices(fold))?;
        let test: Vec<EncodedSample> = test_indices.iter().map(|&i| dataset.samples()[i].clone()).collect();
        let truth = test.iter().map(EncodedSample::label).collect();
        let cache = build_overlap_cache(&test, &train)?;
        Ok(Self {
            fold,
            test_indices,
            truth,
            cache,
        })
    }

    pub fn fold(&self) -> usize {
        self.fold
    }

    /// Dataset indices of the held-out samples, in cache row order.
    pub fn test_indices(&self) -> &[usize] {
        &self.test_indices
    }

    pub fn truth(&self) -> &[Label] {
        &self.truth
    }

    pub fn cache(&self) -> &OverlapCache {
        &self.cache
    }

    pub fn report(&self, id: ClassifierId, k: CopyCount) -> Result<ScoreReport> {
        ScoreReport::evaluate(&self.cache, id, k, HqcsEvaluation::Factored)
    }

    /// Scores both classifiers at `k`.
    pub fn evaluate(&self, k: CopyCount, positive: Label) -> Result<FoldScores> {
        let weights = HqcsWeights::new(&self.cache, k);
        let n = self.truth.len();
        let mut hqcs = Vec::with_capacity(n);
        let mut fid = Vec::with_capacity(n);
        for i in 0..n {
            hqcs.push(crate::classifier::predict(weights.score(&self.cache, i)?)?);
            fid.push(crate::classifier::predict(fid_score(&self.cache, i, k)?)?);
        }
        Ok(FoldScores {
            f1_hqcs: f1_score(&self.truth, &hqcs, positive)?,
            f1_fid: f1_score(&self.truth, &fid, positive)?,
            skipped_pairs: weights.skipped_pairs(),
        })
    }
}

fn check_plan(dataset: &BinaryDataset, plan: &FoldPlan) -> Result<()> {
    if plan.assignments.len() != dataset.len() {
        return Err(Error::PlanMismatch {
            plan: plan.assignments.len(),
            samples: dataset.len(),
        });
    }
    if plan.fold_count < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            available: plan.fold_count,
        });
    }
    Ok(())
}

/// One evaluator per fold of `plan`.
pub fn fold_evaluators(dataset: &BinaryDataset, plan: &FoldPlan) -> Result<Vec<FoldEvaluator>> {
    (0..plan.fold_count).map(|f| FoldEvaluator::new(dataset, plan, f)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation {
    pub classifier_id: ClassifierId,
    pub k: CopyCount,
    pub per_fold: Vec<f64>,
    pub mean: f64,
    /// Degenerate pairs skipped, per fold (always 0 for FID).
    pub skipped_pairs: Vec<usize>,
}

pub fn cross_validate(
    dataset: &BinaryDataset,
    id: ClassifierId,
    k: CopyCount,
    plan: &FoldPlan,
    positive: Label,
) -> Result<CrossValidation> {
    let mut per_fold = Vec::with_capacity(plan.fold_count);
    let mut skipped_pairs = Vec::with_capacity(plan.fold_count);
    for ev in fold_evaluators(dataset, plan)? {
        let s = ev.evaluate(k, positive)?;
        match id {
            ClassifierId::Hqcs => {
                per_fold.push(s.f1_hqcs);
                skipped_pairs.push(s.skipped_pairs);
            }
            ClassifierId::Fid => {
                per_fold.push(s.f1_fid);
                skipped_pairs.push(0);
            }
        }
    }
    Ok(CrossValidation {
        classifier_id: id,
        k,
        mean: mean(&per_fold),
        per_fold,
        skipped_pairs,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Arithmetic grid `k_min, k_min + step, …` up to `k_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub k_min: f64,
    pub k_max: f64,
    pub step: f64,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            k_min: 0.25,
            k_max: 100.0,
            step: 0.25,
        }
    }
}

impl SweepGrid {
    pub fn new(k_min: f64, k_max: f64, step: f64) -> Result<Self> {
        let grid = Self { k_min, k_max, step };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        let ok = self.k_min.is_finite()
            && self.k_max.is_finite()
            && self.step.is_finite()
            && self.k_min > 0.0
            && self.k_min <= self.k_max
            && self.step > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGrid {
                min: self.k_min,
                max: self.k_max,
                step: self.step,
            })
        }
    }

    /// Grid points, each computed as `k_min + i·step` to avoid drift.
    pub fn points(&self) -> Result<Vec<CopyCount>> {
        self.validate()?;
        let span = (self.k_max - self.k_min) / self.step;
        let count = math::floor(span + 1e-9) as usize + 1;
        (0..count)
            .map(|i| CopyCount::new(self.k_min + i as f64 * self.step))
            .collect()
    }
}

/// Best grid entry of one classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestEntry {
    pub k: f64,
    pub f1: f64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub k_grid: Vec<f64>,
    pub f1_hqcs: Vec<f64>,
    pub f1_fid: Vec<f64>,
    pub best_hqcs: BestEntry,
    pub best_fid: BestEntry,
    /// `per_fold_hqcs[i][f]` is fold `f`'s F1 at grid point `i`.
    pub per_fold_hqcs: Vec<Vec<f64>>,
    pub per_fold_fid: Vec<Vec<f64>>,
    /// Degenerate pairs skipped at each grid point, summed over folds.
    pub skipped_pairs: Vec<usize>,
}

fn argmax(k_grid: &[f64], values: &[f64]) -> BestEntry {
    let mut best = BestEntry {
        k: k_grid[0],
        f1: values[0],
        index: 0,
    };
    for (i, (&k, &f1)) in k_grid.iter().zip(values).enumerate().skip(1) {
        if f1 > best.f1 {
            best = BestEntry { k, f1, index: i };
        }
    }
    best
}

impl SweepResult {
    /// Assembles a result from fold scores laid out as `per_point[i][fold]`.
    pub fn from_fold_scores(k_grid: Vec<f64>, per_point: Vec<Vec<FoldScores>>) -> Result<Self> {
        if k_grid.is_empty() {
            return Err(Error::EmptyInput);
        }
        if k_grid.len() != per_point.len() {
            return Err(Error::LengthMismatch {
                left: k_grid.len(),
                right: per_point.len(),
            });
        }
        let per_fold_hqcs: Vec<Vec<f64>> = per_point.iter().map(|p| p.iter().map(|s| s.f1_hqcs).collect()).collect();
        let per_fold_fid: Vec<Vec<f64>> = per_point.iter().map(|p| p.iter().map(|s| s.f1_fid).collect()).collect();
        let f1_hqcs: Vec<f64> = per_fold_hqcs.iter().map(|v| mean(v)).collect();
        let f1_fid: Vec<f64> = per_fold_fid.iter().map(|v| mean(v)).collect();
        let skipped_pairs = per_point.iter().map(|p| p.iter().map(|s| s.skipped_pairs).sum()).collect();
        Ok(Self {
            best_hqcs: argmax(&k_grid, &f1_hqcs),
            best_fid: argmax(&k_grid, &f1_fid),
            k_grid,
            f1_hqcs,
            f1_fid,
            per_fold_hqcs,
            per_fold_fid,
            skipped_pairs,
        })
    }

    pub fn fold_count(&self) -> usize {
        self.per_fold_hqcs.first().map_or(0, Vec::len)
    }

    pub fn curve(&self, id: ClassifierId) -> Vec<(f64, f64)> {
        let values = match id {
            ClassifierId::Hqcs => &self.f1_hqcs,
            ClassifierId::Fid => &self.f1_fid,
        };
        self.k_grid.iter().copied().zip(values.iter().copied()).collect()
    }
}

/// Evaluates both classifiers at every grid point, reusing one overlap
/// cache per fold.
pub fn sweep_k(dataset: &BinaryDataset, plan: &FoldPlan, grid: &SweepGrid, positive: Label) -> Result<SweepResult> {
    let points = grid.points()?;
    let folds = fold_evaluators(dataset, plan)?;
    let mut per_point = Vec::with_capacity(points.len());
    for &k in &points {
        per_point.push(folds.iter().map(|f| f.evaluate(k, positive)).collect::<Result<Vec<_>>>()?);
    }
    SweepResult::from_fold_scores(points.iter().map(|k| k.get()).collect(), per_point)
}

/// Witness that a curve is not monotone: `values[middle]` is a strict peak
/// or valley relative to one earlier and one later point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonMonotonicity {
    pub indices: [usize; 3],
    pub ks: [f64; 3],
}

/// Finds `i < j < l` with `F1_j` above both or below both neighbours by
/// more than [`MONOTONE_SLACK`]. `None` means the curve is monotone.
pub fn nonmonotonicity_check(curve: &[(f64, f64)]) -> Result<Option<NonMonotonicity>> {
    let n = curve.len();
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    let ys: Vec<f64> = curve.iter().map(|p| p.1).collect();
    // suffix argmin / argmax over indices > j
    let mut suffix_min = alloc::vec![n - 1; n];
    let mut suffix_max = alloc::vec![n - 1; n];
    for j in (0..n - 1).rev() {
        let next = j + 1;
        suffix_min[j] = if ys[next] < ys[suffix_min[next]] { next } else { suffix_min[next] };
        suffix_max[j] = if ys[next] > ys[suffix_max[next]] { next } else { suffix_max[next] };
    }
    let mut prefix_min = 0;
    let mut prefix_max = 0;
    for j in 1..n - 1 {
        let (lo_after, hi_after) = (suffix_min[j], suffix_max[j]);
        let y = ys[j];
        if y > ys[prefix_min] + MONOTONE_SLACK && y > ys[lo_after] + MONOTONE_SLACK {
            return Ok(Some(witness(curve, [prefix_min, j, lo_after])));
        }
        if y < ys[prefix_max] - MONOTONE_SLACK && y < ys[hi_after] - MONOTONE_SLACK {
            return Ok(Some(witness(curve, [prefix_max, j, hi_after])));
        }
        if y < ys[prefix_min] {
            prefix_min = j;
        }
        if y > ys[prefix_max] {
            prefix_max = j;
        }
    }
    Ok(None)
}

fn witness(curve: &[(f64, f64)], indices: [usize; 3]) -> NonMonotonicity {
    NonMonotonicity {
        indices,
        ks: indices.map(|i| curve[i].0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::encode_features;
    use alloc::vec;
    use proptest::prelude::*;
    use rand_core::RngCore;

    fn sample(v: &[f64], label: Label) -> EncodedSample {
        encode_features(v, label).unwrap()
    }

    fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn balanced(n0: usize, n1: usize) -> BinaryDataset {
        let mut samples = Vec::new();
        for i in 0..n0 {
            samples.push(sample(&[1.0, 0.01 * (i + 1) as f64, 0.0], Label::Class0));
        }
        for i in 0..n1 {
            samples.push(sample(&[0.0, 0.01 * (i + 1) as f64, 1.0], Label::Class1));
        }
        BinaryDataset::new(samples).unwrap()
    }

    /// Interleaves classes so class order in the file is not contiguous.
    fn separable(n_per_class: usize, seed: u64) -> BinaryDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples = Vec::new();
        for _ in 0..n_per_class {
            samples.push(sample(&[1.0, 0.1 * uniform(&mut rng), 0.0, 0.0], Label::Class0));
            samples.push(sample(&[0.0, 0.0, 1.0, 0.1 * uniform(&mut rng)], Label::Class1));
        }
        BinaryDataset::new(samples).unwrap()
    }

    fn fold_class_counts(d: &BinaryDataset, plan: &FoldPlan) -> Vec<[usize; 2]> {
        let mut counts = vec![[0usize; 2]; plan.fold_count];
        for (s, &f) in d.samples().iter().zip(&plan.assignments) {
            counts[f][s.label().index()] += 1;
        }
        counts
    }

    #[test]
    fn divisible_folds_are_exact() {
        let d = balanced(10, 10);
        let plan = stratified_kfold(&d, 5, 7).unwrap();
        for c in fold_class_counts(&d, &plan) {
            assert_eq!(c, [2, 2]);
        }
    }

    #[test]
    fn folds_are_deterministic() {
        let d = balanced(10, 10);
        assert_eq!(stratified_kfold(&d, 5, 99).unwrap(), stratified_kfold(&d, 5, 99).unwrap());
        assert_ne!(
            stratified_kfold(&d, 5, 99).unwrap().assignments,
            stratified_kfold(&d, 5, 100).unwrap().assignments
        );
    }

    #[test]
    fn uneven_folds_stay_stratified() {
        let d = balanced(7, 13);
        let plan = stratified_kfold(&d, 5, 1).unwrap();
        let counts = fold_class_counts(&d, &plan);
        for c in &counts {
            assert!(c[0] == 1 || c[0] == 2, "{counts:?}");
            assert!(c[0] + c[1] == 4);
        }
    }

    #[test]
    fn fold_plan_preconditions() {
        let d = balanced(3, 10);
        assert_eq!(
            stratified_kfold(&d, 5, 0),
            Err(Error::TooFewSamples { needed: 5, available: 3 })
        );
        assert!(matches!(stratified_kfold(&d, 1, 0), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn f1_examples() {
        use Label::*;
        let truth = [Class0, Class1, Class0, Class1];
        assert_eq!(f1_score(&truth, &truth, Class0).unwrap(), 1.0);
        assert_eq!(f1_score(&truth, &[Class1; 4], Class0).unwrap(), 0.0);
        // TP=2 FP=1 FN=1
        let t = [Class0, Class0, Class0, Class1, Class1];
        let p = [Class0, Class0, Class1, Class0, Class1];
        assert!((f1_score(&t, &p, Class0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f1_score(&[Class1, Class1], &[Class1, Class1], Class0).unwrap(), 0.0);
        assert_eq!(f1_score(&t, &p[..2], Class0), Err(Error::LengthMismatch { left: 5, right: 2 }));
        assert_eq!(f1_score(&[], &[], Class0), Err(Error::EmptyInput));
    }

    #[test]
    fn separable_data_is_perfect() {
        let d = separable(10, 3);
        let plan = stratified_kfold(&d, 5, 42).unwrap();
        for kk in [0.25, 1.0, 37.5] {
            for id in ClassifierId::ALL {
                let cv = cross_validate(&d, id, CopyCount::new(kk).unwrap(), &plan, Label::Class0).unwrap();
                assert_eq!(cv.mean, 1.0);
                assert_eq!(cv.per_fold.len(), 5);
            }
        }
    }

    #[test]
    fn random_labels_stay_in_band() {
        // random labels carry no signal: no run looks skilful and the
        // average over 20 seeds sits near chance
        let mut total = 0.0;
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let samples: Vec<_> = (0..200)
                .map(|_| {
                    let v: Vec<f64> = (0..4).map(|_| uniform(&mut rng) + 0.05).collect();
                    let label = if rng.next_u32() & 1 == 0 { Label::Class0 } else { Label::Class1 };
                    sample(&v, label)
                })
                .collect();
            let d = BinaryDataset::new(samples).unwrap();
            let plan = stratified_kfold(&d, 5, seed).unwrap();
            for id in ClassifierId::ALL {
                let cv = cross_validate(&d, id, CopyCount::new(1.0).unwrap(), &plan, Label::Class0).unwrap();
                assert!(cv.mean < 0.8, "seed {seed} {id:?}: {}", cv.mean);
                total += cv.mean;
            }
        }
        let average = total / 40.0;
        assert!((0.3..=0.7).contains(&average), "{average}");
    }

    #[test]
    fn plan_must_match_dataset() {
        let d = balanced(5, 5);
        let plan = stratified_kfold(&balanced(6, 5), 5, 0).unwrap();
        assert!(matches!(
            cross_validate(&d, ClassifierId::Fid, CopyCount::new(1.0).unwrap(), &plan, Label::Class0),
            Err(Error::PlanMismatch { .. })
        ));
    }

    #[test]
    fn default_grid_has_400_points() {
        let pts = SweepGrid::default().points().unwrap();
        assert_eq!(pts.len(), 400);
        assert_eq!(pts[0].get(), 0.25);
        assert_eq!(pts[399].get(), 100.0);
        assert_eq!(SweepGrid::new(1.0, 1.0, 0.25).unwrap().points().unwrap().len(), 1);
        assert!(SweepGrid::new(0.0, 1.0, 0.25).is_err());
        assert!(SweepGrid::new(2.0, 1.0, 0.25).is_err());
        assert!(SweepGrid::new(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn single_point_sweep() {
        let d = separable(6, 1);
        let plan = stratified_kfold(&d, 3, 0).unwrap();
        let r = sweep_k(&d, &plan, &SweepGrid::new(1.0, 1.0, 0.5).unwrap(), Label::Class0).unwrap();
        assert_eq!(r.k_grid, vec![1.0]);
        assert_eq!(r.best_hqcs.k, 1.0);
        assert_eq!(r.best_fid.index, 0);
    }

    #[test]
    fn separable_sweep_is_flat() {
        let d = separable(10, 5);
        let plan = stratified_kfold(&d, 5, 42).unwrap();
        let r = sweep_k(&d, &plan, &SweepGrid::default(), Label::Class0).unwrap();
        assert!(r.f1_hqcs.iter().chain(&r.f1_fid).all(|f| *f == 1.0));
        assert_eq!(r.best_hqcs.k, 0.25);
        assert_eq!(nonmonotonicity_check(&r.curve(ClassifierId::Hqcs)).unwrap(), None);
    }

    #[test]
    fn sweep_matches_per_k_cross_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let samples: Vec<_> = (0..60)
            .map(|i| {
                let label = if i % 3 == 0 { Label::Class1 } else { Label::Class0 };
                let shift = if label == Label::Class1 { 0.4 } else { 0.0 };
                let v: Vec<f64> = (0..3).map(|j| uniform(&mut rng) + if j == 0 { shift } else { 0.0 }).collect();
                sample(&v, label)
            })
            .collect();
        let d = BinaryDataset::new(samples).unwrap();
        let plan = stratified_kfold(&d, 5, 3).unwrap();
        let grid = SweepGrid::new(0.5, 40.0, 0.5).unwrap();
        let r = sweep_k(&d, &plan, &grid, Label::Class0).unwrap();
        for idx in [0, 7, 19, 42, 79] {
            let k = CopyCount::new(r.k_grid[idx]).unwrap();
            let h = cross_validate(&d, ClassifierId::Hqcs, k, &plan, Label::Class0).unwrap();
            let f = cross_validate(&d, ClassifierId::Fid, k, &plan, Label::Class0).unwrap();
            assert!((h.mean - r.f1_hqcs[idx]).abs() <= 1e-12);
            assert!((f.mean - r.f1_fid[idx]).abs() <= 1e-12);
            assert_eq!(h.per_fold, r.per_fold_hqcs[idx]);
        }
        let again = sweep_k(&d, &plan, &grid, Label::Class0).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn swapping_labels_complements_predictions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<_> = (0..40)
            .map(|i| {
                let v: Vec<f64> = (0..3).map(|_| uniform(&mut rng)).collect();
                sample(&v, if i % 2 == 0 { Label::Class0 } else { Label::Class1 })
            })
            .collect();
        let d = BinaryDataset::new(samples).unwrap();
        let swapped = d.with_labels_swapped();
        let plan = stratified_kfold(&d, 4, 8).unwrap();
        for fold in 0..4 {
            let a = FoldEvaluator::new(&d, &plan, fold).unwrap();
            let b = FoldEvaluator::new(&swapped, &plan, fold).unwrap();
            for id in ClassifierId::ALL {
                let k = CopyCount::new(2.25).unwrap();
                let ra = a.report(id, k).unwrap();
                let rb = b.report(id, k).unwrap();
                for i in 0..ra.scores.len() {
                    assert_eq!(ra.scores[i], -rb.scores[i]);
                    if ra.scores[i] != 0.0 {
                        assert_eq!(ra.predictions[i], rb.predictions[i].flipped());
                    }
                }
            }
        }
    }

    #[test]
    fn nonmonotonicity_examples() {
        assert_eq!(nonmonotonicity_check(&[(1.0, 0.5), (2.0, 0.5), (3.0, 0.5)]).unwrap(), None);
        let w = nonmonotonicity_check(&[(1.0, 0.5), (2.0, 0.7), (3.0, 0.6)]).unwrap().unwrap();
        assert_eq!(w.ks, [1.0, 2.0, 3.0]);
        let valley = nonmonotonicity_check(&[(1.0, 0.9), (2.0, 0.95), (3.0, 0.4), (4.0, 0.6)]).unwrap().unwrap();
        assert_eq!(valley.indices[1], 1);
        assert_eq!(nonmonotonicity_check(&[(1.0, 0.1), (2.0, 0.2)]), Err(Error::TooFewPoints(2)));
        // differences inside the slack do not count
        assert_eq!(nonmonotonicity_check(&[(1.0, 0.5), (2.0, 0.5 + 1e-12), (3.0, 0.5)]).unwrap(), None);
    }

    fn brute_nonmonotone(ys: &[f64]) -> bool {
        let n = ys.len();
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    if ys[j] > ys[i].max(ys[l]) + MONOTONE_SLACK || ys[j] < ys[i].min(ys[l]) - MONOTONE_SLACK {
                        return true;
                    }
                }
            }
        }
        false
    }

    proptest! {
        #[test]
        fn nonmonotonicity_matches_brute_force(ys in prop::collection::vec(0u8..6, 3..12)) {
            let curve: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, y)| (i as f64, *y as f64 / 5.0)).collect();
            let found = nonmonotonicity_check(&curve).unwrap();
            let ys: Vec<f64> = curve.iter().map(|p| p.1).collect();
            prop_assert_eq!(found.is_some(), brute_nonmonotone(&ys));
            if let Some(w) = found {
                let [i, j, l] = w.indices;
                prop_assert!(i < j && j < l);
                prop_assert!(ys[j] > ys[i].max(ys[l]) + MONOTONE_SLACK || ys[j] < ys[i].min(ys[l]) - MONOTONE_SLACK);
            }
        }

        #[test]
        fn stratification_invariant(n0 in 5usize..40, n1 in 5usize..40, folds in 2usize..6, seed in any::<u64>()) {
            let d = balanced(n0, n1);
            let plan = stratified_kfold(&d, folds, seed).unwrap();
            let counts = fold_class_counts(&d, &plan);
            let frac = n0 as f64 / (n0 + n1) as f64;
            for c in counts {
                let size = c[0] + c[1];
                prop_assert!(size > 0);
                prop_assert!((c[0] as f64 - frac * size as f64).abs() <= 1.0 + 1e-9);
            }
        }

        #[test]
        fn argmax_takes_first_tie(vals in prop::collection::vec(0u8..4, 1..20)) {
            let ks: Vec<f64> = (0..vals.len()).map(|i| 0.25 * (i + 1) as f64).collect();
            let ys: Vec<f64> = vals.iter().map(|v| *v as f64 / 3.0).collect();
            let best = argmax(&ks, &ys);
            let max = ys.iter().cloned().fold(f64::MIN, f64::max);
            let first = ys.iter().position(|y| *y == max).unwrap();
            prop_assert_eq!(best.index, first);
            prop_assert_eq!(best.k, ks[first]);
        }
    }
}
