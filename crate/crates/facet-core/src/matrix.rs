//! Signed per-model error grids over (country × facet).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::Float;
use crate::schema::SchemaId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("row {row} has {got} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("country list and row count differ: {countries} vs {rows}")]
    ShapeMismatch { countries: usize, rows: usize },
    #[error("duplicate country `{0}`")]
    DuplicateCountry(String),
    #[error("matrix has no cells")]
    Empty,
}

/// Row-major (country × facet) grid of signed proportion differences,
/// one per model. Each row is representation − importance for one country;
/// rows of normalized source vectors sum to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMatrix<F = f64> {
    model_id: String,
    countries: Vec<String>,
    schema_id: SchemaId,
    n_facets: usize,
    cells: Vec<F>,
}

impl<F: Float> ErrorMatrix<F> {
    pub fn new(
        model_id: String,
        countries: Vec<String>,
        schema_id: SchemaId,
        rows: Vec<Vec<F>>,
    ) -> Result<Self, MatrixError> {
        if countries.len() != rows.len() {
            return Err(MatrixError::ShapeMismatch {
                countries: countries.len(),
                rows: rows.len(),
            });
        }
        let n_facets = rows.first().map(Vec::len).ok_or(MatrixError::Empty)?;
        if n_facets == 0 {
            return Err(MatrixError::Empty);
        }
        let mut sorted = countries.clone();
        sorted.sort();
        if let Some(dup) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(MatrixError::DuplicateCountry(dup[0].clone()));
        }
        let mut cells = Vec::with_capacity(countries.len() * n_facets);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_facets {
                return Err(MatrixError::RaggedRow {
                    row: i,
                    expected: n_facets,
                    got: row.len(),
                });
            }
            cells.extend(row);
        }
        Ok(Self {
            model_id,
            countries,
            schema_id,
            n_facets,
            cells,
        })
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn schema_id(&self) -> &SchemaId {
        &self.schema_id
    }

    pub fn n_countries(&self) -> usize {
        self.countries.len()
    }

    pub fn n_facets(&self) -> usize {
        self.n_facets
    }

    pub fn cell(&self, country: usize, facet: usize) -> F {
        self.cells[country * self.n_facets + facet]
    }

    /// One country's signed differences across all facets.
    pub fn row(&self, country: usize) -> &[F] {
        &self.cells[country * self.n_facets..(country + 1) * self.n_facets]
    }

    /// One facet's signed differences across all countries.
    pub fn column(&self, facet: usize) -> Vec<F> {
        (0..self.countries.len())
            .map(|i| self.cell(i, facet))
            .collect()
    }

    /// All cells in row-major order.
    pub fn flattened(&self) -> &[F] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F]> {
        self.cells.chunks(self.n_facets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::FacetSchema;

    fn schema_id() -> SchemaId {
        FacetSchema::canonical_11().id().clone()
    }

    #[test]
    fn row_and_column_access() {
        let m = ErrorMatrix::new(
            "m".into(),
            vec!["BR".into(), "JP".into()],
            schema_id(),
            vec![vec![0.1, -0.1, 0.0], vec![-0.2, 0.1, 0.1]],
        )
        .unwrap();
        assert_eq!(m.row(1), &[-0.2, 0.1, 0.1]);
        assert_eq!(m.column(0), vec![0.1, -0.2]);
        assert_eq!(m.cell(0, 1), -0.1);
        assert_eq!(m.flattened().len(), 6);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = ErrorMatrix::new(
            "m".into(),
            vec!["BR".into(), "JP".into()],
            schema_id(),
            vec![vec![0.0, 0.0], vec![0.0]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            MatrixError::RaggedRow {
                row: 1,
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn duplicate_countries_rejected() {
        let err = ErrorMatrix::new(
            "m".into(),
            vec!["BR".into(), "BR".into()],
            schema_id(),
            vec![vec![0.0], vec![0.0]],
        )
        .unwrap_err();
        assert_eq!(err, MatrixError::DuplicateCountry("BR".into()));
    }
}
