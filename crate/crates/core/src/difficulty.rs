//! Point-difficulty typing with HVDM nearest neighbours.
//!
//! Works on a [`DifficultyTable`] rather than a [`BinaryDataset`](crate::BinaryDataset):
//! typing uses the raw (unencoded) attributes, may see missing or
//! categorical values, and allows any number of classes.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{math, Error, Result};

pub const DEFAULT_NEIGHBOURS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Numeric,
    /// Values are category codes `0..cardinality`.
    Categorical { cardinality: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttributeValue {
    Num(f64),
    Cat(usize),
    Missing,
}

/// Raw attribute rows with integer class ids.
#[derive(Debug, Clone, PartialEq)]
pub struct DifficultyTable {
    kinds: Vec<AttributeKind>,
    rows: Vec<Vec<AttributeValue>>,
    classes: Vec<usize>,
    class_count: usize,
}

impl DifficultyTable {
    pub fn new(kinds: Vec<AttributeKind>, rows: Vec<Vec<AttributeValue>>, classes: Vec<usize>) -> Result<Self> {
        if rows.len() != classes.len() {
            return Err(Error::LengthMismatch {
                left: rows.len(),
                right: classes.len(),
            });
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        for row in &rows {
            if row.len() != kinds.len() {
                return Err(Error::StatsMismatch {
                    expected: kinds.len(),
                    found: row.len(),
                });
            }
            for (v, kind) in row.iter().zip(&kinds) {
                match (v, kind) {
                    (AttributeValue::Missing, _) => {}
                    (AttributeValue::Num(x), AttributeKind::Numeric) if x.is_finite() => {}
                    (AttributeValue::Num(_), AttributeKind::Numeric) => return Err(Error::NonFinite),
                    (AttributeValue::Cat(c), AttributeKind::Categorical { cardinality }) if c < cardinality => {}
                    (AttributeValue::Cat(c), AttributeKind::Categorical { cardinality }) => {
                        return Err(Error::IndexOutOfRange {
                            index: *c,
                            len: *cardinality,
                        })
                    }
                    _ => {
                        return Err(Error::StatsMismatch {
                            expected: kinds.len(),
                            found: row.len(),
                        })
                    }
                }
            }
        }
        let class_count = classes.iter().max().map_or(0, |m| m + 1);
        Ok(Self {
            kinds,
            rows,
            classes,
            class_count,
        })
    }

    /// All-numeric table without missing values.
    pub fn numeric(rows: Vec<Vec<f64>>, classes: Vec<usize>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(AttributeValue::Num).collect())
            .collect();
        Self::new(vec![AttributeKind::Numeric; width], rows, classes)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn kinds(&self) -> &[AttributeKind] {
        &self.kinds
    }

    pub fn row(&self, i: usize) -> &[AttributeValue] {
        &self.rows[i]
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.classes[i]
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeSummary {
    Numeric { mean: f64, std_dev: f64 },
    /// `probabilities[v][c]` is P(class c | value v); rows of unseen values are zero.
    Categorical { probabilities: Vec<Vec<f64>> },
}

/// Per-attribute statistics HVDM normalises with.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeStats {
    attributes: Vec<AttributeSummary>,
}

impl AttributeStats {
    /// Numeric attributes get the mean and sample standard deviation of
    /// their non-missing values.
    pub fn from_table(table: &DifficultyTable) -> Self {
        let attributes = table
            .kinds
            .iter()
            .enumerate()
            .map(|(a, kind)| match kind {
                AttributeKind::Numeric => numeric_summary(table.rows.iter().filter_map(|r| match r[a] {
                    AttributeValue::Num(x) => Some(x),
                    _ => None,
                })),
                AttributeKind::Categorical { cardinality } => {
                    let mut counts = vec![vec![0.0; table.class_count]; *cardinality];
                    for (row, &class) in table.rows.iter().zip(&table.classes) {
                        if let AttributeValue::Cat(v) = row[a] {
                            counts[v][class] += 1.0;
                        }
                    }
                    for row in &mut counts {
                        let total: f64 = row.iter().sum();
                        if total > 0.0 {
                            row.iter_mut().for_each(|c| *c /= total);
                        }
                    }
                    AttributeSummary::Categorical { probabilities: counts }
                }
            })
            .collect();
        Self { attributes }
    }

    pub fn attributes(&self) -> &[AttributeSummary] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }
}

fn numeric_summary(values: impl Iterator<Item = f64> + Clone) -> AttributeSummary {
    let n = values.clone().count();
    if n == 0 {
        return AttributeSummary::Numeric { mean: 0.0, std_dev: 0.0 };
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    let std_dev = if n < 2 {
        0.0
    } else {
        math::sqrt(values.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64)
    };
    AttributeSummary::Numeric { mean, std_dev }
}

fn attribute_distance(x: AttributeValue, y: AttributeValue, summary: &AttributeSummary) -> Result<f64> {
    use AttributeValue::*;
    match (x, y, summary) {
        (Missing, _, _) | (_, Missing, _) => Ok(1.0),
        (Num(a), Num(b), AttributeSummary::Numeric { std_dev, .. }) => {
            let diff = math::abs(a - b);
            if *std_dev > 0.0 {
                Ok((diff / (4.0 * std_dev)).min(1.0))
            } else if diff == 0.0 {
                Ok(0.0)
            } else {
                Ok(1.0)
            }
        }
        (Cat(a), Cat(b), AttributeSummary::Categorical { probabilities }) => {
            if a == b {
                return Ok(0.0);
            }
            let (Some(pa), Some(pb)) = (probabilities.get(a), probabilities.get(b)) else {
                return Ok(1.0);
            };
            let sq: f64 = pa.iter().zip(pb).map(|(p, q)| (p - q) * (p - q)).sum();
            Ok(math::sqrt(sq))
        }
        _ => Err(Error::StatsMismatch {
            expected: 1,
            found: 0,
        }),
    }
}

/// Heterogeneous value difference metric between two attribute rows.
pub fn hvdm_distance(x: &[AttributeValue], y: &[AttributeValue], stats: &AttributeStats) -> Result<f64> {
    for row in [x, y] {
        if row.len() != stats.len() {
            return Err(Error::StatsMismatch {
                expected: stats.len(),
                found: row.len(),
            });
        }
    }
    let mut sum = 0.0;
    for ((a, b), summary) in x.iter().zip(y).zip(&stats.attributes) {
        let d = attribute_distance(*a, *b, summary)?;
        sum += d * d;
    }
    Ok(math::sqrt(sum))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointType {
    Safe,
    Borderline,
    Rare,
    Outlier,
}

impl PointType {
    pub const ALL: [PointType; 4] = [Self::Safe, Self::Borderline, Self::Rare, Self::Outlier];

    /// Type from the number of same-class points among five neighbours.
    pub fn from_same_class(same: usize) -> Self {
        match same {
            4.. => Self::Safe,
            2 | 3 => Self::Borderline,
            1 => Self::Rare,
            0 => Self::Outlier,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Safe => "safe",
            Self::Borderline => "borderline",
            Self::Rare => "rare",
            Self::Outlier => "outlier",
        }
    }
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Indices of the `k` nearest other points; ties go to the lower index.
pub fn nearest_neighbours(point: usize, table: &DifficultyTable, stats: &AttributeStats, k: usize) -> Result<Vec<usize>> {
    if point >= table.len() {
        return Err(Error::IndexOutOfRange {
            index: point,
            len: table.len(),
        });
    }
    if table.len() - 1 < k {
        return Err(Error::TooFewSamples {
            needed: k + 1,
            available: table.len(),
        });
    }
    let x = table.row(point);
    let mut dists = Vec::with_capacity(table.len() - 1);
    for j in (0..table.len()).filter(|&j| j != point) {
        dists.push((hvdm_distance(x, table.row(j), stats)?, j));
    }
    dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(dists.into_iter().take(k).map(|(_, j)| j).collect())
}

/// Types `point` by the class makeup of its `k` nearest neighbours. The
/// safe/borderline/rare/outlier cut points assume `k = 5`.
pub fn classify_point_type(point: usize, table: &DifficultyTable, stats: &AttributeStats, k: usize) -> Result<PointType> {
    let neighbours = nearest_neighbours(point, table, stats, k)?;
    let class = table.class_of(point);
    let same = neighbours
        .into_iter()
        .filter(|&j| table.class_of(j) == class)
        .count();
    Ok(PointType::from_same_class(same))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifficultyProfile {
    pub safe_pct: f64,
    pub borderline_pct: f64,
    pub rare_pct: f64,
    pub outlier_pct: f64,
    /// Counts in [`PointType::ALL`] order.
    pub counts: [usize; 4],
}

impl DifficultyProfile {
    pub fn from_types(types: &[PointType]) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut counts = [0usize; 4];
        for t in types {
            counts[*t as usize] += 1;
        }
        let pct = |c: usize| 100.0 * c as f64 / types.len() as f64;
        Ok(Self {
            safe_pct: pct(counts[0]),
            borderline_pct: pct(counts[1]),
            rare_pct: pct(counts[2]),
            outlier_pct: pct(counts[3]),
            counts,
        })
    }

    pub fn percentages(&self) -> [f64; 4] {
        [self.safe_pct, self.borderline_pct, self.rare_pct, self.outlier_pct]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Categorization {
    /// One entry per table row.
    pub types: Vec<PointType>,
    pub profile: DifficultyProfile,
}

/// Types every point against the whole table. With `typed_class` set the
/// profile only counts points of that class; neighbours still come from
/// every class.
pub fn categorize_dataset(table: &DifficultyTable, typed_class: Option<usize>) -> Result<Categorization> {
    let stats = AttributeStats::from_table(table);
    let types = (0..table.len())
        .map(|i| classify_point_type(i, table, &stats, DEFAULT_NEIGHBOURS))
        .collect::<Result<Vec<_>>>()?;
    profile_for(table, types, typed_class)
}

/// Builds the profile from externally computed types (e.g. a parallel run).
pub fn profile_for(table: &DifficultyTable, types: Vec<PointType>, typed_class: Option<usize>) -> Result<Categorization> {
    if types.len() != table.len() {
        return Err(Error::LengthMismatch {
            left: types.len(),
            right: table.len(),
        });
    }
    let counted: Vec<PointType> = match typed_class {
        None => types.clone(),
        Some(c) => types
            .iter()
            .zip(table.classes())
            .filter(|(_, class)| **class == c)
            .map(|(t, _)| *t)
            .collect(),
    };
    let profile = DifficultyProfile::from_types(&counted)?;
    Ok(Categorization { types, profile })
}
