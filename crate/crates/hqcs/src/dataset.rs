//! CSV ingestion.
//!
//! Row numbers in errors and output files are 1-based data rows (the header
//! is not counted).

use std::fs::File;
use std::path::{Path, PathBuf};

use hqcs_core::difficulty::{AttributeKind, AttributeStats, AttributeValue, DifficultyTable};
use hqcs_core::{amplitude_encode, BinaryDataset, Label, RawSample};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DataOptions {
    /// Defaults to the last column.
    pub label_column: Option<String>,
    pub class_pair: Option<(String, String)>,
    /// Label value mapped to class 0.
    pub positive: Option<String>,
    pub categorical: Vec<String>,
}

/// Header and string cells of a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub path: PathBuf,
    pub headers: Vec<String>,
    pub label_index: usize,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn read(path: &Path, label_column: Option<&str>) -> CliResult<Self> {
        if !path.is_file() {
            return Err(CliError::FileNotFound(path.to_path_buf()));
        }
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(File::open(path)?);
        let headers: Vec<String> = reader.headers()?.iter().map(String::from).collect();
        let label_index = match label_column {
            Some(name) => headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| CliError::MissingLabelColumn(name.to_string()))?,
            None => headers
                .len()
                .checked_sub(1)
                .ok_or_else(|| CliError::MissingLabelColumn(String::new()))?,
        };
        let rows = reader
            .records()
            .map(|r| r.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<Result<Vec<Vec<String>>, _>>()?;
        Ok(Self {
            path: path.to_path_buf(),
            headers,
            label_index,
            rows,
        })
    }

    pub fn label_column(&self) -> &str {
        &self.headers[self.label_index]
    }

    /// Distinct labels in order of first appearance.
    pub fn distinct_labels(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for row in &self.rows {
            let v = &row[self.label_index];
            if !seen.contains(v) {
                seen.push(v.clone());
            }
        }
        seen
    }

    /// File stem, used as the dataset id in reports.
    pub fn dataset_id(&self) -> String {
        self.path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    }

    fn feature_columns(&self, categorical: &[String]) -> CliResult<(Vec<usize>, Vec<usize>)> {
        for name in categorical {
            if !self.headers.contains(name) {
                return Err(CliError::UnknownColumn(name.clone()));
            }
        }
        let (cat, num) = (0..self.headers.len())
            .filter(|&c| c != self.label_index)
            .partition(|&c| categorical.contains(&self.headers[c]));
        Ok((num, cat))
    }
}

/// Rows kept after class selection, with their class ids.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Selection {
    class_values: Vec<String>,
    /// `(row index, class id)`
    rows: Vec<(usize, usize)>,
}

fn select(table: &RawTable, class_pair: Option<&(String, String)>, positive: Option<&str>, binary: bool) -> CliResult<Selection> {
    let distinct = table.distinct_labels();
    let mut class_values = match class_pair {
        Some((a, b)) => {
            for v in [a, b] {
                if !distinct.contains(v) {
                    return Err(CliError::EmptyClass(v.clone()));
                }
            }
            vec![a.clone(), b.clone()]
        }
        None => distinct,
    };
    if binary && class_values.len() > 2 {
        return Err(CliError::MoreThanTwoClasses(class_values));
    }
    if let Some(p) = positive {
        let pos = class_values
            .iter()
            .position(|v| v == p)
            .ok_or_else(|| CliError::UnknownClass {
                value: p.to_string(),
                known: class_values.clone(),
            })?;
        let v = class_values.remove(pos);
        class_values.insert(0, v);
    }
    if binary && class_values.len() < 2 {
        let missing = class_values.first().cloned().unwrap_or_default();
        return Err(CliError::EmptyClass(format!("other than `{missing}`")));
    }
    let rows = table
        .rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            class_values
                .iter()
                .position(|v| *v == r[table.label_index])
                .map(|c| (i, c))
        })
        .collect();
    Ok(Selection { class_values, rows })
}

fn parse_number(table: &RawTable, row: usize, col: usize) -> CliResult<f64> {
    let cell = &table.rows[row][col];
    match cell.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::ParseError {
            row: row + 1,
            column: table.headers[col].clone(),
            value: cell.clone(),
        }),
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

/// A two-class dataset ready for the classifiers.
#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub id: String,
    pub dataset: BinaryDataset,
    /// Raw attributes of the same rows, for difficulty typing.
    pub table: DifficultyTable,
    pub stats: AttributeStats,
    /// `class_values[0]` is class 0.
    pub class_values: [String; 2],
    /// 1-based data row of each sample.
    pub row_ids: Vec<usize>,
    /// Numeric columns fed to the encoder.
    pub feature_names: Vec<String>,
    pub raw: RawTable,
}

impl LoadedDataset {
    pub fn class_value(&self, label: Label) -> &str {
        &self.class_values[label.index()]
    }
}

/// Loads a two-class CSV. Categorical columns are kept for difficulty
/// typing but not encoded; every numeric cell must parse.
pub fn load_csv(path: &Path, opts: &DataOptions) -> CliResult<LoadedDataset> {
    let raw = RawTable::read(path, opts.label_column.as_deref())?;
    let sel = select(&raw, opts.class_pair.as_ref(), opts.positive.as_deref(), true)?;
    let (numeric, _) = raw.feature_columns(&opts.categorical)?;
    if numeric.is_empty() {
        return Err(CliError::Config("no numeric feature columns".into()));
    }
    let mut samples = Vec::with_capacity(sel.rows.len());
    for &(row, class) in &sel.rows {
        let features = numeric
            .iter()
            .map(|&c| parse_number(&raw, row, c))
            .collect::<CliResult<Vec<f64>>>()?;
        let label = Label::from_index(class).ok_or(hqcs_core::Error::IndexOutOfRange { index: class, len: 2 })?;
        let encoded = RawSample::new(features, label)
            .and_then(|s| amplitude_encode(&s))
            .map_err(|source| CliError::InvalidRow { row: row + 1, source })?;
        samples.push(encoded);
    }
    for (class, value) in sel.class_values.iter().enumerate() {
        if !sel.rows.iter().any(|(_, c)| *c == class) {
            return Err(CliError::EmptyClass(value.clone()));
        }
    }
    let dataset = BinaryDataset::new(samples)?;
    let table = difficulty_rows(&raw, &sel, &opts.categorical, false)?;
    let stats = AttributeStats::from_table(&table);
    let [c0, c1]: [String; 2] = sel.class_values.clone().try_into().map_err(|_| CliError::MoreThanTwoClasses(sel.class_values.clone()))?;
    Ok(LoadedDataset {
        id: raw.dataset_id(),
        dataset,
        table,
        stats,
        class_values: [c0, c1],
        row_ids: sel.rows.iter().map(|(r, _)| r + 1).collect(),
        feature_names: numeric.iter().map(|&c| raw.headers[c].clone()).collect(),
        raw,
    })
}

fn difficulty_rows(raw: &RawTable, sel: &Selection, categorical: &[String], allow_missing: bool) -> CliResult<DifficultyTable> {
    let (numeric, cat) = raw.feature_columns(categorical)?;
    let columns: Vec<usize> = (0..raw.headers.len()).filter(|&c| c != raw.label_index).collect();
    // category codes in order of first appearance among kept rows
    let mut codes: Vec<Vec<String>> = vec![Vec::new(); raw.headers.len()];
    for &(row, _) in &sel.rows {
        for &c in &cat {
            let cell = &raw.rows[row][c];
            if !is_missing(cell) && !codes[c].contains(cell) {
                codes[c].push(cell.clone());
            }
        }
    }
    let kinds = columns
        .iter()
        .map(|&c| {
            if numeric.contains(&c) {
                AttributeKind::Numeric
            } else {
                AttributeKind::Categorical {
                    cardinality: codes[c].len(),
                }
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(sel.rows.len());
    for &(row, _) in &sel.rows {
        let mut values = Vec::with_capacity(columns.len());
        for &c in &columns {
            let cell = &raw.rows[row][c];
            let v = if allow_missing && is_missing(cell) {
                AttributeValue::Missing
            } else if numeric.contains(&c) {
                AttributeValue::Num(parse_number(raw, row, c)?)
            } else if is_missing(cell) {
                AttributeValue::Missing
            } else {
                AttributeValue::Cat(codes[c].iter().position(|x| x == cell).unwrap_or_default())
            };
            values.push(v);
        }
        rows.push(values);
    }
    Ok(DifficultyTable::new(kinds, rows, sel.rows.iter().map(|(_, c)| *c).collect())?)
}

/// Rows for difficulty typing; any number of classes.
#[derive(Debug, Clone)]
pub struct LoadedTable {
    pub id: String,
    pub table: DifficultyTable,
    /// Indexed by class id.
    pub class_values: Vec<String>,
    pub row_ids: Vec<usize>,
}

/// Loads every class (or `class_pair` only) for typing. Empty cells and
/// `?` are read as missing values.
pub fn load_difficulty_table(path: &Path, opts: &DataOptions) -> CliResult<LoadedTable> {
    let raw = RawTable::read(path, opts.label_column.as_deref())?;
    let sel = select(&raw, opts.class_pair.as_ref(), opts.positive.as_deref(), false)?;
    let table = difficulty_rows(&raw, &sel, &opts.categorical, true)?;
    Ok(LoadedTable {
        id: raw.dataset_id(),
        table,
        class_values: sel.class_values,
        row_ids: sel.rows.iter().map(|(r, _)| r + 1).collect(),
    })
}
