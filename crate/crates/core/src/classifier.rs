//! Linear-time FID and HQCS scoring from cached overlaps.
//!
//! For a single opposing pair `(a, b)` the Helstrom operator
//! `(|a⟩⟨a|)^{⊗k} - (|b⟩⟨b|)^{⊗k}` has exactly two nonzero eigenvalues
//! `±λ` with `λ = √(1 - |⟨a|b⟩|^{2k})`, so its sign operator acts on the
//! test state as the fidelity difference divided by `λ`. Averaging over all
//! pairs gives
//!
//! ```text
//! f_hqcs(c) = 1/(M_a M_b) Σ_a Σ_b (|⟨c|a⟩|^{2k} - |⟨c|b⟩|^{2k}) / λ_ab
//! f_fid(c)  = 1/M_a Σ_a |⟨c|a⟩|^{2k} - 1/M_b Σ_b |⟨c|b⟩|^{2k}
//! ```
//!
//! Neither needs anything beyond the three overlap matrices held by
//! [`OverlapCache`], and `k` may be any positive real.

use alloc::vec::Vec;

use crate::encoding::{overlap_slices, BinaryDataset, CopyCount, EncodedSample, Label};
use crate::{math, Error, Result};

/// Pairs whose eigenvalue falls below this are treated as indistinguishable.
pub const DEGENERATE_EIGENVALUE: f64 = 1e-12;

/// Dense row-major matrix of overlaps.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl OverlapMatrix {
    fn compute(rows: &[&[f64]], cols: &[&[f64]]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for r in rows {
            for c in cols {
                data.push(overlap_slices(r, c)?);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols: cols.len(),
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    fn ln(&self) -> Vec<f64> {
        self.data.iter().map(|&o| ln_overlap(o)).collect()
    }
}

fn ln_overlap(o: f64) -> f64 {
    if o > 0.0 {
        math::ln(o)
    } else {
        f64::NEG_INFINITY
    }
}

/// Overlaps between test points and the training classes, and between
/// opposing training pairs. Built once per split and reused for every `k`.
#[derive(Debug, Clone)]
pub struct OverlapCache {
    test_vs_class0: OverlapMatrix,
    test_vs_class1: OverlapMatrix,
    cross_train: OverlapMatrix,
    ln_test0: Vec<f64>,
    ln_test1: Vec<f64>,
    ln_cross: Vec<f64>,
}

/// Computes every overlap the scorers need.
pub fn build_overlap_cache(test: &[EncodedSample], train: &BinaryDataset) -> Result<OverlapCache> {
    let dim = train.dim();
    for s in test {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
    }
    let class0: Vec<&[f64]> = train.class(Label::Class0).map(EncodedSample::amplitudes).collect();
    let class1: Vec<&[f64]> = train.class(Label::Class1).map(EncodedSample::amplitudes).collect();
    let test: Vec<&[f64]> = test.iter().map(EncodedSample::amplitudes).collect();

    let test_vs_class0 = OverlapMatrix::compute(&test, &class0)?;
    let test_vs_class1 = OverlapMatrix::compute(&test, &class1)?;
    let cross_train = OverlapMatrix::compute(&class0, &class1)?;
    Ok(OverlapCache {
        ln_test0: test_vs_class0.ln(),
        ln_test1: test_vs_class1.ln(),
        ln_cross: cross_train.ln(),
        test_vs_class0,
        test_vs_class1,
        cross_train,
    })
}

impl OverlapCache {
    pub fn test_vs_class0(&self) -> &OverlapMatrix {
        &self.test_vs_class0
    }

    pub fn test_vs_class1(&self) -> &OverlapMatrix {
        &self.test_vs_class1
    }

    pub fn cross_train(&self) -> &OverlapMatrix {
        &self.cross_train
    }

    pub fn test_len(&self) -> usize {
        self.test_vs_class0.rows
    }

    pub fn class0_len(&self) -> usize {
        self.cross_train.rows
    }

    pub fn class1_len(&self) -> usize {
        self.cross_train.cols
    }

    fn check_index(&self, test_index: usize) -> Result<()> {
        if test_index < self.test_len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: test_index,
                len: self.test_len(),
            })
        }
    }

    fn ln_row0(&self, i: usize) -> &[f64] {
        let m = self.class0_len();
        &self.ln_test0[i * m..(i + 1) * m]
    }

    fn ln_row1(&self, i: usize) -> &[f64] {
        let m = self.class1_len();
        &self.ln_test1[i * m..(i + 1) * m]
    }
}

/// `|⟨c|a⟩|^{2k} - |⟨c|b⟩|^{2k}` for a single opposing pair.
pub fn fid_pair_score(oc_a: f64, oc_b: f64, k: CopyCount) -> f64 {
    let e = 2.0 * k.get();
    math::unit_pow(oc_a, e) - math::unit_pow(oc_b, e)
}

/// Positive eigenvalue `√(1 - |⟨a|b⟩|^{2k})` of a single-pair Helstrom operator.
pub fn pair_eigenvalue(ab_overlap: f64, k: CopyCount) -> Result<f64> {
    eigenvalue_from_ln(ln_overlap(ab_overlap), k.get())
}

fn eigenvalue_from_ln(ln_ab: f64, k: f64) -> Result<f64> {
    let lambda = math::sqrt(math::one_minus_pow_from_ln(ln_ab, 2.0 * k).max(0.0));
    if lambda < DEGENERATE_EIGENVALUE {
        Err(Error::DegeneratePair(lambda))
    } else {
        Ok(lambda)
    }
}

/// Fidelity kernel `|⟨c|x⟩|^{2k}`.
pub fn fidelity_kernel(c_overlap: f64, k: CopyCount) -> f64 {
    math::unit_pow(c_overlap, 2.0 * k.get())
}

fn mean_power(ln_row: &[f64], exponent: f64) -> f64 {
    let sum: f64 = ln_row.iter().map(|&l| math::pow_from_ln(l, exponent)).sum();
    sum / ln_row.len() as f64
}

/// Class-averaged fidelity difference for one test point.
pub fn fid_score(cache: &OverlapCache, test_index: usize, k: CopyCount) -> Result<f64> {
    cache.check_index(test_index)?;
    let e = 2.0 * k.get();
    Ok(mean_power(cache.ln_row0(test_index), e) - mean_power(cache.ln_row1(test_index), e))
}

/// HQCS score for one test point, summed pair by pair in (class 0, class 1)
/// order. Returns the score and the number of degenerate pairs skipped.
pub fn hqcs_score(cache: &OverlapCache, test_index: usize, k: CopyCount) -> Result<(f64, usize)> {
    cache.check_index(test_index)?;
    let e = 2.0 * k.get();
    let p0: Vec<f64> = cache.ln_row0(test_index).iter().map(|&l| math::pow_from_ln(l, e)).collect();
    let p1: Vec<f64> = cache.ln_row1(test_index).iter().map(|&l| math::pow_from_ln(l, e)).collect();
    let mb = cache.class1_len();
    let mut acc = 0.0;
    let mut skipped = 0;
    for (a, pa) in p0.iter().enumerate() {
        for (b, pb) in p1.iter().enumerate() {
            match eigenvalue_from_ln(cache.ln_cross[a * mb + b], k.get()) {
                Ok(lambda) => acc += (pa - pb) / lambda,
                Err(_) => skipped += 1,
            }
        }
    }
    Ok((acc / (p0.len() * p1.len()) as f64, skipped))
}

/// Eq. label rule: class 0 iff the score is strictly positive.
pub fn predict(score: f64) -> Result<Label> {
    if !score.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(if score > 0.0 { Label::Class0 } else { Label::Class1 })
}

/// Kernel weights `1/M_a` for class-0 points followed by `-1/M_b` for class-1.
pub fn kernel_weights(cache: &OverlapCache) -> Vec<f64> {
    let (ma, mb) = (cache.class0_len(), cache.class1_len());
    let mut w = Vec::with_capacity(ma + mb);
    w.extend(core::iter::repeat(1.0 / ma as f64).take(ma));
    w.extend(core::iter::repeat(-1.0 / mb as f64).take(mb));
    w
}

/// FID score as a weighted sum of fidelity kernels over all training points.
pub fn fid_score_kernel_form(cache: &OverlapCache, test_index: usize, k: CopyCount, weights: &[f64]) -> Result<f64> {
    cache.check_index(test_index)?;
    let (ma, mb) = (cache.class0_len(), cache.class1_len());
    if weights.len() != ma + mb {
        return Err(Error::LengthMismatch {
            left: weights.len(),
            right: ma + mb,
        });
    }
    let row0 = cache.test_vs_class0.row(test_index);
    let row1 = cache.test_vs_class1.row(test_index);
    Ok(row0
        .iter()
        .chain(row1)
        .zip(weights)
        .map(|(&o, w)| w * fidelity_kernel(o, k))
        .sum())
}

/// Per-`k` row and column sums of `1/λ_ab`, which turn the HQCS double sum
/// into two single sums per test point:
/// `Σ_a p_a R_a - Σ_b p_b C_b` with `R_a = Σ_b 1/λ_ab`, `C_b = Σ_a 1/λ_ab`.
#[derive(Debug, Clone)]
pub struct HqcsWeights {
    k: CopyCount,
    row_sums: Vec<f64>,
    col_sums: Vec<f64>,
    skipped: usize,
}

impl HqcsWeights {
    pub fn new(cache: &OverlapCache, k: CopyCount) -> Self {
        let (ma, mb) = (cache.class0_len(), cache.class1_len());
        let mut row_sums = alloc::vec![0.0; ma];
        let mut col_sums = alloc::vec![0.0; mb];
        let mut skipped = 0;
        for a in 0..ma {
            for b in 0..mb {
                match eigenvalue_from_ln(cache.ln_cross[a * mb + b], k.get()) {
                    Ok(lambda) => {
                        let w = 1.0 / lambda;
                        row_sums[a] += w;
                        col_sums[b] += w;
                    }
                    Err(_) => skipped += 1,
                }
            }
        }
        Self {
            k,
            row_sums,
            col_sums,
            skipped,
        }
    }

    pub fn copy_count(&self) -> CopyCount {
        self.k
    }

    pub fn skipped_pairs(&self) -> usize {
        self.skipped
    }

    pub fn score(&self, cache: &OverlapCache, test_index: usize) -> Result<f64> {
        cache.check_index(test_index)?;
        if self.row_sums.len() != cache.class0_len() || self.col_sums.len() != cache.class1_len() {
            return Err(Error::DimensionMismatch {
                expected: cache.class0_len() + cache.class1_len(),
                found: self.row_sums.len() + self.col_sums.len(),
            });
        }
        let e = 2.0 * self.k.get();
        let pos: f64 = cache
            .ln_row0(test_index)
            .iter()
            .zip(&self.row_sums)
            .map(|(&l, r)| math::pow_from_ln(l, e) * r)
            .sum();
        let neg: f64 = cache
            .ln_row1(test_index)
            .iter()
            .zip(&self.col_sums)
            .map(|(&l, c)| math::pow_from_ln(l, e) * c)
            .sum();
        Ok((pos - neg) / (self.row_sums.len() * self.col_sums.len()) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassifierId {
    Hqcs,
    Fid,
}

impl ClassifierId {
    pub const ALL: [ClassifierId; 2] = [ClassifierId::Hqcs, ClassifierId::Fid];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierId::Hqcs => "HQCS",
            ClassifierId::Fid => "FID",
        }
    }
}

/// How the HQCS double sum is evaluated for a whole report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HqcsEvaluation {
    /// Literal pair-by-pair sum per test point.
    PairSum,
    /// Row/column sums of `1/λ`, see [`HqcsWeights`].
    Factored,
}

/// Scores and predicted labels for every test point in a cache.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub classifier_id: ClassifierId,
    pub k: CopyCount,
    pub scores: Vec<f64>,
    pub predictions: Vec<Label>,
    pub skipped_pairs: usize,
}

impl ScoreReport {
    pub fn evaluate(cache: &OverlapCache, id: ClassifierId, k: CopyCount, method: HqcsEvaluation) -> Result<Self> {
        let n = cache.test_len();
        let mut scores = Vec::with_capacity(n);
        let mut skipped_pairs = 0;
        match (id, method) {
            (ClassifierId::Fid, _) => {
                for i in 0..n {
                    scores.push(fid_score(cache, i, k)?);
                }
            }
            (ClassifierId::Hqcs, HqcsEvaluation::PairSum) => {
                skipped_pairs = HqcsWeights::new(cache, k).skipped_pairs();
                for i in 0..n {
                    scores.push(hqcs_score(cache, i, k)?.0);
                }
            }
            (ClassifierId::Hqcs, HqcsEvaluation::Factored) => {
                let w = HqcsWeights::new(cache, k);
                skipped_pairs = w.skipped_pairs();
                for i in 0..n {
                    scores.push(w.score(cache, i)?);
                }
            }
        }
        let predictions = scores.iter().map(|&s| predict(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            classifier_id: id,
            k,
            scores,
            predictions,
            skipped_pairs,
        })
    }
}
