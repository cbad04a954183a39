use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable `n × d` table of finite reals, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::input(format!(
                "dataset must have at least one row and column, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::input(format!(
                "expected {} values for a {rows}x{cols} dataset, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!(
                "non-finite value {} at row {}, column {}",
                values[pos],
                pos / cols,
                pos % cols
            )));
        }
        Ok(Dataset {
            rows,
            cols,
            values,
            labels: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::input(format!(
                "row {i} has {} values, expected {cols}",
                rows[i].len()
            )));
        }
        Dataset::new(rows.len(), cols, rows.concat())
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(j) = columns.iter().position(|c| c.len() != rows) {
            return Err(Error::input(format!(
                "column {j} has {} values, expected {rows}",
                columns[j].len()
            )));
        }
        let mut values = Vec::with_capacity(rows * columns.len());
        for i in 0..rows {
            values.extend(columns.iter().map(|c| c[i]));
        }
        Dataset::new(rows, columns.len(), values)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.cols {
            return Err(Error::input(format!(
                "{} labels for {} columns",
                labels.len(),
                self.cols
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Result<Vec<f64>> {
        self.check_column(j)?;
        Ok((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// Looks a column up by label, falling back to a numeric index.
    pub fn column_index(&self, selector: &str) -> Result<usize> {
        if let Some(labels) = &self.labels {
            if let Some(j) = labels.iter().position(|l| l == selector) {
                return Ok(j);
            }
        }
        let j: usize = selector
            .parse()
            .map_err(|_| Error::param(format!("unknown column '{selector}'")))?;
        self.check_column(j)?;
        Ok(j)
    }

    pub(crate) fn check_column(&self, j: usize) -> Result<()> {
        if j < self.cols {
            Ok(())
        } else {
            Err(Error::param(format!(
                "column {j} out of range for {} columns",
                self.cols
            )))
        }
    }

    /// Keeps the listed columns in the given order.
    pub fn select(&self, columns: &[usize]) -> Result<Dataset> {
        for &j in columns {
            self.check_column(j)?;
        }
        let cols: Vec<Vec<f64>> = columns
            .iter()
            .map(|&j| (0..self.rows).map(|i| self.get(i, j)).collect())
            .collect();
        let mut out = Dataset::from_columns(&cols)?;
        if let Some(labels) = &self.labels {
            out.labels = Some(columns.iter().map(|&j| labels[j].clone()).collect());
        }
        Ok(out)
    }
}
