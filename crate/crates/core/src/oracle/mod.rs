//! Brute-force reference classifiers built from explicit tensor powers.
//!
//! Every quantity here is computed the expensive way: `|x⟩^{⊗k}` is
//! materialised, class centroids are averaged outer products of size
//! `d^k × d^k`, and the Helstrom operator is diagonalised densely. Only
//! integer `k` is meaningful and sizes are capped by [`OracleConfig`].

mod eigen;
pub mod suite;

use alloc::vec;
use alloc::vec::Vec;

pub use eigen::{symmetric_eigen, SymmetricEigen};

use crate::classifier::DEGENERATE_EIGENVALUE;
use crate::encoding::{BinaryDataset, CopyCount, EncodedSample, Label};
use crate::{math, overlap, Error, Result};

/// Largest `d^k` the oracle will materialise by default.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Eigenvalues with magnitude below this are treated as zero.
pub const ZERO_EIGENVALUE: f64 = 1e-10;

/// Tolerance for [`verify_lemma1`].
pub const LEMMA_TOLERANCE: f64 = 1e-10;

/// Tolerance for [`verify_identity`].
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Sign given to the null space of `m₁` when forming the sign operator `m₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroEigenspace {
    /// `λ = 0` belongs to `Π₊` (sign +1).
    #[default]
    Positive,
    /// `λ = 0` contributes nothing (sign 0).
    Excluded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub size_cap: usize,
    pub zero_eigenspace: ZeroEigenspace,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            size_cap: DEFAULT_SIZE_CAP,
            zero_eigenspace: ZeroEigenspace::Positive,
        }
    }
}

fn integer_k(k: CopyCount) -> Result<u32> {
    k.as_integer().ok_or(Error::NonIntegerK(k.get()))
}

/// Checks `dim^k ≤ cap` without allocating. Returns `dim^k`.
pub fn tensor_size(dim: usize, k: CopyCount, cap: usize) -> Result<usize> {
    let k = integer_k(k)?;
    let required = (dim as u128).checked_pow(k).unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(Error::SizeCap { required, cap });
    }
    Ok(required as usize)
}

/// `v^{⊗k}`, entry `(i₁…i_k)` (first index most significant) equal to
/// `∏ v[i_j]`.
pub fn kron_power(v: &EncodedSample, k: CopyCount, cap: usize) -> Result<Vec<f64>> {
    tensor_size(v.dim(), k, cap)?;
    let mut out = v.amplitudes().to_vec();
    for _ in 1..integer_k(k)? {
        out = out
            .iter()
            .flat_map(|x| v.amplitudes().iter().map(move |y| x * y))
            .collect();
    }
    Ok(out)
}

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max(math::abs(self.get(i, j) - self.get(j, i)));
            }
        }
        worst
    }

    /// `xᵀ M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(x
            .iter()
            .enumerate()
            .map(|(i, xi)| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                xi * row.iter().zip(x).map(|(m, xj)| m * xj).sum::<f64>()
            })
            .sum())
    }

    fn add_outer(&mut self, v: &[f64], scale: f64) {
        for (i, vi) in v.iter().enumerate() {
            let s = scale * vi;
            for (m, vj) in self.data[i * self.n..(i + 1) * self.n].iter_mut().zip(v) {
                *m += s * vj;
            }
        }
    }
}

/// Uniform mixture of `k`-fold tensor-power projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(SquareMatrix);

impl DensityMatrix {
    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = symmetric_eigen(&self.0.data, self.0.n)?;
        Ok(eig.values().last().copied().unwrap_or(0.0))
    }
}

/// `(1/M) Σ (v^{⊗k})(v^{⊗k})ᵀ` over `samples`.
pub fn build_centroid<'a, I>(samples: I, k: CopyCount, cfg: &OracleConfig) -> Result<DensityMatrix>
where
    I: IntoIterator<Item = &'a EncodedSample>,
{
    let samples: Vec<&EncodedSample> = samples.into_iter().collect();
    let first = samples.first().ok_or(Error::EmptyInput)?;
    let n = tensor_size(first.dim(), k, cfg.size_cap)?;
    let mut m = SquareMatrix::zeros(n);
    let scale = 1.0 / samples.len() as f64;
    for s in &samples {
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: s.dim(),
            });
        }
        m.add_outer(&kron_power(s, k, cfg.size_cap)?, scale);
    }
    Ok(DensityMatrix(m))
}

fn class_centroid(train: &BinaryDataset, label: Label, k: CopyCount, cfg: &OracleConfig) -> Result<DensityMatrix> {
    build_centroid(train.class(label), k, cfg).map_err(|e| match e {
        Error::EmptyInput => Error::EmptyClass(label.index() as u8),
        other => other,
    })
}

/// `ρ − σ` with its spectral decomposition.
#[derive(Debug, Clone)]
pub struct HelstromOperator {
    entries: SquareMatrix,
    eigen: SymmetricEigen,
}

impl HelstromOperator {
    pub fn entries(&self) -> &SquareMatrix {
        &self.entries
    }

    /// Descending.
    pub fn eigenvalues(&self) -> &[f64] {
        self.eigen.values()
    }

    pub fn eigen(&self) -> &SymmetricEigen {
        &self.eigen
    }

    /// Eigenvalues with `|λ| ≥ ZERO_EIGENVALUE`.
    pub fn nonzero_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues()
            .iter()
            .copied()
            .filter(|l| math::abs(*l) >= ZERO_EIGENVALUE)
            .collect()
    }

    fn sign(&self, lambda: f64, zero: ZeroEigenspace) -> f64 {
        if math::abs(lambda) < ZERO_EIGENVALUE {
            match zero {
                ZeroEigenspace::Positive => 1.0,
                ZeroEigenspace::Excluded => 0.0,
            }
        } else if lambda > 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `⟨x| m₂ |x⟩ = Σⱼ sgn(λⱼ) ⟨dⱼ|x⟩²`.
    pub fn sign_expectation(&self, x: &[f64], zero: ZeroEigenspace) -> Result<f64> {
        let n = self.entries.n;
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let mut acc = 0.0;
        for (j, &lambda) in self.eigenvalues().iter().enumerate() {
            let s = self.sign(lambda, zero);
            if s == 0.0 {
                continue;
            }
            let proj: f64 = (0..n).map(|i| self.eigen.vector_entry(i, j) * x[i]).sum();
            acc += s * proj * proj;
        }
        Ok(acc)
    }
}

pub fn helstrom_operator(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<HelstromOperator> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let data: Vec<f64> = rho.0.data.iter().zip(&sigma.0.data).map(|(r, s)| r - s).collect();
    let entries = SquareMatrix { n: rho.dim(), data };
    let eigen = symmetric_eigen(&entries.data, entries.n)?;
    Ok(HelstromOperator { entries, eigen })
}

fn class_helstrom(train: &BinaryDataset, k: CopyCount, cfg: &OracleConfig) -> Result<HelstromOperator> {
    let rho = class_centroid(train, Label::Class0, k, cfg)?;
    let sigma = class_centroid(train, Label::Class1, k, cfg)?;
    helstrom_operator(&rho, &sigma)
}

/// `⟨c|^{⊗k} m₂ |c⟩^{⊗k}` with `m₂` the sign of the centroid difference.
pub fn hqc_score_naive(c: &EncodedSample, train: &BinaryDataset, k: CopyCount, cfg: &OracleConfig) -> Result<f64> {
    let op = class_helstrom(train, k, cfg)?;
    op.sign_expectation(&kron_power(c, k, cfg.size_cap)?, cfg.zero_eigenspace)
}

/// `⟨c|^{⊗k} (ρ − σ) |c⟩^{⊗k}`.
pub fn fid_score_naive(c: &EncodedSample, train: &BinaryDataset, k: CopyCount, cfg: &OracleConfig) -> Result<f64> {
    let rho = class_centroid(train, Label::Class0, k, cfg)?;
    let sigma = class_centroid(train, Label::Class1, k, cfg)?;
    let x = kron_power(c, k, cfg.size_cap)?;
    Ok(rho.0.quadratic_form(&x)? - sigma.0.quadratic_form(&x)?)
}

/// Average of single-pair [`hqc_score_naive`] values over all opposing
/// pairs. This is the right-hand side of the pairwise decomposition.
pub fn hqc_score_pairwise_naive(
    c: &EncodedSample,
    train: &BinaryDataset,
    k: CopyCount,
    cfg: &OracleConfig,
) -> Result<f64> {
    let mut acc = 0.0;
    for a in train.class(Label::Class0) {
        for b in train.class(Label::Class1) {
            let pair = BinaryDataset::from_classes(vec![a.clone()], vec![b.clone()])?;
            acc += hqc_score_naive(c, &pair, k, cfg)?;
        }
    }
    Ok(acc / (train.class_size(Label::Class0) * train.class_size(Label::Class1)) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    pub overlap: f64,
    pub k: u32,
    /// `√(1 − |⟨a|b⟩|^{2k})`.
    pub analytic: f64,
    /// Numerically found nonzero eigenvalues, descending.
    pub nonzero: Vec<f64>,
    /// Largest deviation between the numeric pair and `±analytic`
    /// (infinite when the count is wrong).
    pub max_deviation: f64,
    pub passed: bool,
}

/// Diagonalises `(|a⟩⟨a|)^{⊗k} − (|b⟩⟨b|)^{⊗k}` and compares its nonzero
/// spectrum against `±√(1 − |⟨a|b⟩|^{2k})`.
pub fn verify_lemma1(a: &EncodedSample, b: &EncodedSample, k: CopyCount, cfg: &OracleConfig) -> Result<Lemma1Report> {
    let kk = integer_k(k)?;
    tensor_size(a.dim(), k, cfg.size_cap)?;
    let ab = overlap(a, b)?;
    let ln_ab = if ab > 0.0 { math::ln(ab) } else { f64::NEG_INFINITY };
    let analytic = math::sqrt(math::one_minus_pow_from_ln(ln_ab, 2.0 * kk as f64).max(0.0));
    if analytic < DEGENERATE_EIGENVALUE {
        return Err(Error::DegeneratePair(analytic));
    }
    let rho = build_centroid([a], k, cfg)?;
    let sigma = build_centroid([b], k, cfg)?;
    let op = helstrom_operator(&rho, &sigma)?;
    let nonzero = op.nonzero_eigenvalues();
    let max_deviation = if nonzero.len() == 2 {
        math::abs(nonzero[0] - analytic).max(math::abs(nonzero[1] + analytic))
    } else {
        f64::INFINITY
    };
    Ok(Lemma1Report {
        overlap: ab,
        k: kk,
        analytic,
        passed: max_deviation <= LEMMA_TOLERANCE,
        nonzero,
        max_deviation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    /// Centroid HQC score.
    pub lhs: f64,
    /// Mean of single-pair HQC scores.
    pub rhs: f64,
    pub deviation: f64,
    pub passed: bool,
}

/// Compares the centroid HQC score with the mean of single-pair HQC scores.
pub fn verify_identity(c: &EncodedSample, train: &BinaryDataset, k: CopyCount, cfg: &OracleConfig) -> Result<IdentityReport> {
    let lhs = hqc_score_naive(c, train, k, cfg)?;
    let rhs = hqc_score_pairwise_naive(c, train, k, cfg)?;
    let deviation = math::abs(lhs - rhs);
    Ok(IdentityReport {
        lhs,
        rhs,
        deviation,
        passed: deviation <= IDENTITY_TOLERANCE,
    })
}
