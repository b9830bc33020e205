//! Samples, datasets and amplitude encoding.

use alloc::vec::Vec;
use core::fmt;

use crate::{math, Error, Result};

/// Tolerance on the unit norm of an encoded state.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Binary class tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Class0,
    Class1,
}

impl Label {
    pub const fn index(self) -> usize {
        match self {
            Label::Class0 => 0,
            Label::Class1 => 1,
        }
    }

    pub const fn from_index(index: usize) -> Option<Label> {
        match index {
            0 => Some(Label::Class0),
            1 => Some(Label::Class1),
            _ => None,
        }
    }

    pub const fn flipped(self) -> Label {
        match self {
            Label::Class0 => Label::Class1,
            Label::Class1 => Label::Class0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A raw labelled feature vector in dataset units.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSample {
    features: Vec<f64>,
    label: Label,
}

impl RawSample {
    pub fn new(features: Vec<f64>, label: Label) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::EmptyFeatures);
        }
        if features.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { features, label })
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn label(&self) -> Label {
        self.label
    }
}

/// A unit-norm real state vector with its class tag.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSample {
    amplitudes: Vec<f64>,
    label: Label,
}

impl EncodedSample {
    /// Wraps amplitudes that are already normalised.
    pub fn from_unit(amplitudes: Vec<f64>, label: Label) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyFeatures);
        }
        if amplitudes.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = math::sqrt(amplitudes.iter().map(|a| a * a).sum::<f64>());
        if math::abs(norm - 1.0) > NORM_TOLERANCE {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { amplitudes, label })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn with_label(&self, label: Label) -> Self {
        Self {
            amplitudes: self.amplitudes.clone(),
            label,
        }
    }
}

/// Normalises a raw feature vector to unit Euclidean norm.
///
/// The vector is first divided by its largest magnitude so the squared sum
/// cannot overflow, then by the norm of the rescaled vector. Scaling the
/// input by a power of two leaves the output bitwise unchanged.
pub fn amplitude_encode(raw: &RawSample) -> Result<EncodedSample> {
    encode_features(raw.features(), raw.label())
}

pub(crate) fn encode_features(features: &[f64], label: Label) -> Result<EncodedSample> {
    if features.is_empty() {
        return Err(Error::EmptyFeatures);
    }
    if features.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let max = features.iter().fold(0.0f64, |m, x| m.max(math::abs(*x)));
    if max == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let scaled: Vec<f64> = features.iter().map(|x| x / max).collect();
    let norm = math::sqrt(scaled.iter().map(|x| x * x).sum::<f64>());
    let amplitudes = scaled.into_iter().map(|x| x / norm).collect();
    Ok(EncodedSample { amplitudes, label })
}

/// `|⟨u|v⟩|`, clamped into `[0, 1]`.
pub fn overlap(u: &EncodedSample, v: &EncodedSample) -> Result<f64> {
    overlap_slices(u.amplitudes(), v.amplitudes())
}

pub(crate) fn overlap_slices(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok(math::abs(dot).min(1.0))
}

/// Number of state copies `k`, any positive finite real.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CopyCount(f64);

impl CopyCount {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && k > 0.0 {
            Ok(Self(k))
        } else {
            Err(Error::InvalidCopyCount(k))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Some(k) when `k` is a whole number.
    pub fn as_integer(self) -> Option<u32> {
        let r = math::round(self.0);
        if r == self.0 && r >= 1.0 && r <= u32::MAX as f64 {
            Some(r as u32)
        } else {
            None
        }
    }
}

impl TryFrom<f64> for CopyCount {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        CopyCount::new(k)
    }
}

/// Encoded samples of both classes, kept in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDataset {
    samples: Vec<EncodedSample>,
    dim: usize,
    counts: [usize; 2],
}

impl BinaryDataset {
    pub fn new(samples: Vec<EncodedSample>) -> Result<Self> {
        let dim = samples.first().map(EncodedSample::dim).ok_or(Error::EmptyClass(0))?;
        let mut counts = [0usize; 2];
        for s in &samples {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            counts[s.label().index()] += 1;
        }
        if counts[0] == 0 {
            return Err(Error::EmptyClass(0));
        }
        if counts[1] == 0 {
            return Err(Error::EmptyClass(1));
        }
        Ok(Self { samples, dim, counts })
    }

    /// Builds a dataset from separate class lists; labels are overwritten.
    pub fn from_classes(class0: Vec<EncodedSample>, class1: Vec<EncodedSample>) -> Result<Self> {
        let samples = class0
            .into_iter()
            .map(|s| EncodedSample { label: Label::Class0, ..s })
            .chain(class1.into_iter().map(|s| EncodedSample { label: Label::Class1, ..s }))
            .collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[EncodedSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class_size(&self, label: Label) -> usize {
        self.counts[label.index()]
    }

    pub fn class(&self, label: Label) -> impl Iterator<Item = &EncodedSample> + '_ {
        self.samples.iter().filter(move |s| s.label() == label)
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.samples.iter().map(EncodedSample::label)
    }

    /// Dataset restricted to `indices` (in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut samples = Vec::with_capacity(indices.len());
        for &i in indices {
            let s = self.samples.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                len: self.samples.len(),
            })?;
            samples.push(s.clone());
        }
        Self::new(samples)
    }

    /// Same samples with every label flipped.
    pub fn with_labels_swapped(&self) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s.with_label(s.label().flipped())).collect(),
            dim: self.dim,
            counts: [self.counts[1], self.counts[0]],
        }
    }
}
