//! Evolution algebras given by a structure matrix in a natural basis.
//!
//! Column `i` of the structure matrix holds the coordinates of `b_i^2`, so
//! entry `(k, i)` is the structure constant `w_ki` and the columns span the
//! square of the algebra.

use std::collections::HashSet;

use thiserror::Error;

use crate::fields::{FieldDescriptor, FieldError, FieldScalar, ScalarMatrix};
use crate::text::{FileKind, Lines, ReadError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("structure matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("{got} labels given for dimension {dim}")]
    LabelCountMismatch { dim: usize, got: usize },
    #[error("basis label `{0}` is empty or contains whitespace")]
    InvalidLabel(String),
    #[error("element has {got} coordinates, algebra has dimension {dim}")]
    DimensionMismatch { dim: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvolutionAlgebra {
    matrix: ScalarMatrix,
    labels: Vec<String>,
}

/// An element written in the natural basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub coords: Vec<FieldScalar>,
}

impl AlgebraElement {
    pub fn zero(field: FieldDescriptor, dim: usize) -> Self {
        AlgebraElement { coords: vec![field.zero(); dim] }
    }

    pub fn basis(field: FieldDescriptor, dim: usize, i: usize) -> Self {
        let mut e = Self::zero(field, dim);
        e.coords[i] = field.one();
        e
    }

    pub fn scale(&self, a: &FieldScalar) -> Self {
        AlgebraElement { coords: self.coords.iter().map(|c| a * c).collect() }
    }

    pub fn add(&self, other: &AlgebraElement) -> Self {
        assert_eq!(self.coords.len(), other.coords.len());
        AlgebraElement { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }
}

fn validate_label(label: &str) -> Result<(), AlgebraError> {
    if label.is_empty() || label.chars().any(char::is_whitespace) {
        return Err(AlgebraError::InvalidLabel(label.to_string()));
    }
    Ok(())
}

impl EvolutionAlgebra {
    /// Wraps a structure matrix. Labels default to `b0 .. b{n-1}`.
    pub fn new(matrix: ScalarMatrix, labels: Option<Vec<String>>) -> Result<Self, AlgebraError> {
        if !matrix.is_square() {
            return Err(AlgebraError::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let n = matrix.rows();
        let labels = match labels {
            None => (0..n).map(|i| format!("b{i}")).collect(),
            Some(labels) => {
                if labels.len() != n {
                    return Err(AlgebraError::LabelCountMismatch { dim: n, got: labels.len() });
                }
                let mut seen = HashSet::new();
                for l in &labels {
                    validate_label(l)?;
                    if !seen.insert(l.as_str()) {
                        return Err(AlgebraError::DuplicateLabel(l.clone()));
                    }
                }
                labels
            }
        };
        Ok(EvolutionAlgebra { matrix, labels })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.matrix.field()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Structure constant `w_ki`: the coefficient of `b_k` in `b_i^2`.
    pub fn constant(&self, k: usize, i: usize) -> &FieldScalar {
        self.matrix.get(k, i)
    }

    fn check(&self, x: &AlgebraElement) -> Result<(), AlgebraError> {
        if x.coords.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { dim: self.dim(), got: x.coords.len() });
        }
        if let Some(c) = x.coords.iter().find(|c| c.field() != self.field()) {
            return Err(FieldError::FieldMismatch(self.field(), c.field()).into());
        }
        Ok(())
    }

    /// The product `(xy)_k = sum_i x_i y_i w_ki`.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        let n = self.dim();
        let weights: Vec<FieldScalar> = x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).collect();
        let coords = (0..n)
            .map(|k| {
                (0..n).fold(self.field().zero(), |acc, i| {
                    let w = self.constant(k, i);
                    if w.is_zero() || weights[i].is_zero() {
                        acc
                    } else {
                        acc + &weights[i] * w
                    }
                })
            })
            .collect();
        Ok(AlgebraElement { coords })
    }

    /// `X = X^2`, i.e. the structure matrix is invertible. The
    /// zero-dimensional algebra is regular.
    pub fn is_regular(&self) -> bool {
        !self.matrix.determinant().expect("structure matrix is square").is_zero()
    }

    /// `dim X^2`.
    pub fn square_rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn to_text(&self) -> String {
        let n = self.dim();
        let mut out = format!("{}\n{}\n{}\n{}\n", FileKind::Algebra.header(), self.field(), n, self.labels.join(" "));
        for k in 0..n {
            let row: Vec<String> = (0..n).map(|i| self.constant(k, i).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ReadError> {
        let mut lines = Lines::new(text);
        lines.expect_header(FileKind::Algebra)?;
        let field_line = lines.next_line()?;
        let field: FieldDescriptor = field_line.parse().map_err(|e| match e {
            FieldError::NotPrime(_) => ReadError::invalid(e),
            _ => lines.error(format!("bad field descriptor `{field_line}`")).into(),
        })?;
        let n = lines.usizes(1)?[0];
        let labels: Vec<String> = lines.tokens()?.into_iter().map(str::to_string).collect();
        if labels.len() != n {
            return Err(lines.error(format!("expected {n} labels, found {}", labels.len())).into());
        }
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n {
            let toks = lines.tokens()?;
            if toks.len() != n {
                return Err(lines.error(format!("expected {n} scalars, found {}", toks.len())).into());
            }
            for t in toks {
                entries.push(field.parse_scalar(t).map_err(|e| lines.error(e.to_string()))?);
            }
        }
        lines.finish()?;
        let matrix = ScalarMatrix::new(field, n, n, entries).map_err(ReadError::invalid)?;
        EvolutionAlgebra::new(matrix, Some(labels)).map_err(ReadError::invalid)
    }
}
